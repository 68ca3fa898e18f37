"""Structural rate functions computed exactly over a reaction network.

Three families of quantities read off the reaction list:

* ``reaction_rate(X, partner)`` -- total rate at which X is consumed when
  it reacts together with the given partner multiset (scaled by the
  multiplicity convention for self-partners).
* ``production_rate(X, partner, Y)`` -- the contribution of those same
  reactions to the production of Y; summed over a block by
  ``production_rate_to_block``.
* ``flux_rate(X, reactants)`` -- signed net change of X per unit rate of
  the reactions with exactly the given reactant multiset; summed over a
  set of reactant multisets by ``cumulative_flux_rate``.

All results are exact :class:`~fractions.Fraction` values.  These are
reference implementations that scan the reaction list per call; the
refinement algorithm uses cached tables built by
:mod:`crnlump.bisim`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import CRN, ChoiceFunction, Multiset, Partition, Species, choice_function

__all__ = [
    "reaction_rate",
    "production_rate",
    "production_rate_to_block",
    "flux_rate",
    "cumulative_flux_rate",
    "candidate_partners",
    "ReactantClass",
    "reactant_classes",
]

_ZERO = Fraction(0)


def _check_partner(partner: Multiset) -> None:
    # Partners beyond one molecule would pair with X into a non-elementary
    # reactant multiset, which the data model excludes.
    if partner.total > 1:
        raise ValueError("partner multiset may contain at most one molecule")


def reaction_rate(crn: CRN, x: Species, partner: Multiset) -> Fraction:
    """Rate sum over reactions whose reactants are exactly ``x + partner``.

    Scaled by ``partner(x) + 1``, so a self-partner counts the pair twice.
    Returns 0 when no reaction matches.
    """
    _check_partner(partner)
    target = Multiset.of(x) + partner
    total = _ZERO
    for rxn in crn.reactions:
        if rxn.reactants == target:
            total += rxn.rate
    return (partner.get(x) + 1) * total


def production_rate(crn: CRN, x: Species, partner: Multiset, y: Species) -> Fraction:
    """Production of ``y`` by the reactions behind ``reaction_rate(x, partner)``."""
    _check_partner(partner)
    target = Multiset.of(x) + partner
    total = _ZERO
    for rxn in crn.reactions:
        if rxn.reactants == target:
            total += rxn.rate * rxn.products.get(y)
    return (partner.get(x) + 1) * total


def production_rate_to_block(
    crn: CRN, x: Species, partner: Multiset, block: Iterable[Species]
) -> Fraction:
    """Sum of ``production_rate(x, partner, y)`` over the species in ``block``."""
    total = _ZERO
    for y in block:
        total += production_rate(crn, x, partner, y)
    return total


def flux_rate(crn: CRN, x: Species, reactants: Multiset) -> Fraction:
    """Signed net rate of change of ``x`` from reactions with the given reactants."""
    total = _ZERO
    for rxn in crn.reactions:
        if rxn.reactants == reactants:
            total += (rxn.products.get(x) - rxn.reactants.get(x)) * rxn.rate
    return total


def cumulative_flux_rate(
    crn: CRN, x: Species, reactant_sets: Iterable[Multiset]
) -> Fraction:
    """Sum of ``flux_rate(x, rho)`` over a set of reactant multisets."""
    total = _ZERO
    for rho in set(reactant_sets):
        total += flux_rate(crn, x, rho)
    return total


def candidate_partners(crn: CRN, x: Species) -> set[Multiset]:
    """Partner multisets rho with some reaction ``x + rho -> ...``.

    Outside this set (and the empty partner) both ``reaction_rate`` and
    ``production_rate`` vanish, so equivalence checks need not quantify
    over all multisets.
    """
    partners: set[Multiset] = set()
    for rxn in crn.reactions:
        mult = rxn.reactants.get(x)
        if mult == 0:
            continue
        remainder = Multiset(
            (sp, m - 1 if sp == x else m) for sp, m in rxn.reactants
        )
        partners.add(remainder)
    return partners


@dataclass(frozen=True)
class ReactantClass:
    """Reactant multisets of a network sharing the same representative lift."""

    members: tuple[Multiset, ...]
    canonical: Multiset

    def __contains__(self, m: Multiset) -> bool:
        return m in self.members


def reactant_classes(crn: CRN, p: Partition) -> list[ReactantClass]:
    """Group the distinct reactant multisets of the network by their lift.

    Two reactant multisets land in the same class exactly when applying
    the partition's choice function element-wise gives the same multiset.
    Classes are ordered by their canonical lift.
    """
    mu = choice_function(p)
    groups: dict[Multiset, list[Multiset]] = {}
    seen: set[Multiset] = set()
    for rxn in crn.reactions:
        rho = rxn.reactants
        if rho in seen:
            continue
        seen.add(rho)
        groups.setdefault(mu.lift(rho), []).append(rho)
    classes = []
    for canonical in sorted(groups, key=lambda m: m.name_key()):
        members = tuple(sorted(groups[canonical], key=lambda m: m.name_key()))
        classes.append(ReactantClass(members=members, canonical=canonical))
    return classes
