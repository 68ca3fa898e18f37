"""Symbolic lumping: block-sum ODEs, representative ODEs, and the
separation between forward bisimilarity and block-sum lumpability.

Everything here is exact polynomial arithmetic; no floating point.
"""

import crnlump as cl

crn = cl.running_example()
print("Original ODEs:")
print(cl.format_vector_field(cl.vector_field(crn)))

h_o = cl.refine(crn, cl.Partition.trivial(crn), cl.BisimMode.FORWARD).final
print(f"Block-sum ODEs for {h_o} (variable C stands for the C+E sum):")
print(cl.format_vector_field(cl.lumped_field_forward(crn, h_o)))

h_e = cl.refine(crn, cl.Partition.trivial(crn), cl.BisimMode.BACKWARD).final
print(f"Representative ODEs for {h_e} (B replaced by A everywhere):")
print(cl.format_vector_field(cl.lumped_field_backward(crn, h_e)))

print("The quotient construction and the symbolic lumping commute:")
reduced = cl.forward_reduce(crn, h_o)
same = cl.vector_field(reduced.crn).components == cl.lumped_field_forward(crn, h_o).components
print("  field(forward quotient) == forward-lumped field:", same)
print()

print("Forward bisimilarity is sufficient but not necessary for block-sum")
print("lumpability. Two species flipping into each other with rates 1 and 2:")
two = cl.two_state(1, 2)
one_block = cl.Partition.trivial(two)
print("  forward bisimulation?", cl.is_bisimulation(two, one_block, cl.BisimMode.FORWARD))
print("  block-sum lumpable?  ", cl.is_ordinarily_lumpable(two, one_block))
print("  the lone block ODE:")
print(cl.format_vector_field(cl.lumped_field_forward(two, one_block)))
print("(total mass is conserved, so the block sum obeys the zero ODE even")
print("though the two species are not rate-equivalent)")
print()

print("Exact lumpability, by contrast, characterizes the backward notion;")
print("on this network the one-block partition fails both:")
print("  backward bisimulation?", cl.is_bisimulation(two, one_block, cl.BisimMode.BACKWARD))
print("  exactly lumpable?     ", cl.is_exactly_lumpable(two, one_block))
