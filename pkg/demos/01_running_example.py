"""Walk through the worked five-species example.

Builds the network, inspects the structural rate functions that drive
the two equivalences, refines the trivial partition in both modes, and
prints the quotient networks.
"""

import crnlump as cl

crn = cl.running_example()
print("The network:")
print(cl.serialize_crn(crn))

A, B, C, D, E = (crn.by_name(n) for n in "ABCDE")
ms = cl.Multiset

print("Why C and E aggregate forward: identical reaction and production rates")
print("  rate(C | partner D) =", cl.reaction_rate(crn, C, ms.of(D)),
      "  rate(E | partner D) =", cl.reaction_rate(crn, E, ms.of(D)))
print("  production into {C,E}:",
      cl.production_rate_to_block(crn, C, ms.of(D), [C, E]), "vs",
      cl.production_rate_to_block(crn, E, ms.of(D), [C, E]))
print("Why they do NOT aggregate backward: fluxes from A+B differ")
print("  flux(C | A+B) =", cl.flux_rate(crn, C, ms.of(A, B)),
      "  flux(E | A+B) =", cl.flux_rate(crn, E, ms.of(A, B)))
print()

forward = cl.refine(crn, cl.Partition.trivial(crn), cl.BisimMode.FORWARD)
print("Coarsest forward partition:", forward.final)
reduced_f = cl.forward_reduce(crn, forward.final)
print("Forward quotient (block sums):")
print(cl.serialize_crn(reduced_f.crn))

backward = cl.refine(crn, cl.Partition.trivial(crn), cl.BisimMode.BACKWARD)
print("Coarsest backward partition:", backward.final)
reduced_b = cl.backward_reduce(crn, backward.final)
print("Backward quotient (representatives):")
print(cl.serialize_crn(reduced_b.crn))

print("The two notions are incomparable: the forward partition is not a")
print("backward one and vice versa, and {{A,B},{C,E},{D}} is neither:")
mixed = cl.Partition(crn.species, [[A, B], [C, E], [D]])
for mode in (cl.BisimMode.FORWARD, cl.BisimMode.BACKWARD):
    print(f"  {mode}: {cl.is_bisimulation(crn, mixed, mode)}")
