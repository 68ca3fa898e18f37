"""Symbolic mass-action vector fields and exact lumpability checks.

Vector-field components are sparse multivariate polynomials with exact
rational coefficients, represented as maps from exponent vectors to
coefficients.  On top of the polynomial arithmetic this module decides,
as exact polynomial identities:

* exact lumpability -- after merging each block's variables into the
  block representative, all components within a block must coincide;
* ordinary (block-sum) lumpability -- each block's component sum must be
  invariant under every within-block shear ``V_i += t, V_j -= t``, which
  holds exactly when the sum can be rewritten in block-sum variables.

The corresponding lumped vector fields are constructed by
:func:`lumped_field_forward` (block sums) and
:func:`lumped_field_backward` (representative substitution).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import (
    CRN,
    Multiset,
    NotLumpableError,
    Partition,
    Reaction,
    Species,
    choice_function,
    quotient_species,
)

__all__ = [
    "Polynomial",
    "VectorField",
    "vector_field",
    "accretion_depletion",
    "is_exactly_lumpable",
    "exact_lumpability_witness",
    "is_ordinarily_lumpable",
    "lumped_field_forward",
    "lumped_field_backward",
    "format_polynomial",
    "format_vector_field",
]

# A monomial is a sorted tuple of (variable index, positive exponent).
Monomial = tuple[tuple[int, int], ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Internal variable index for the shear parameter; never collides with
# species ids, which are nonnegative.
_SHEAR_VAR = -1


class Polynomial:
    """Sparse multivariate polynomial with Fraction coefficients.

    Monomials are canonical sorted (variable, exponent) tuples and zero
    coefficients are never stored, so equal polynomials compare equal.
    Instances are treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coef in terms.items():
                if coef:
                    clean[mono] = coef
        self.terms = clean

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def constant(cls, c: Fraction | int) -> "Polynomial":
        c = Fraction(c)
        return cls({(): c} if c else {})

    @classmethod
    def variable(cls, var: int, exp: int = 1, coef: Fraction | int = 1) -> "Polynomial":
        if exp < 0:
            raise ValueError("negative exponent")
        if exp == 0:
            return cls.constant(coef)
        return cls({((var, exp),): Fraction(coef)})

    @classmethod
    def monomial(cls, coef: Fraction | int, powers: Iterable[tuple[int, int]]) -> "Polynomial":
        mono = _normalize_monomial(powers)
        return cls({mono: Fraction(coef)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        acc = dict(self.terms)
        for mono, coef in other.terms.items():
            new = acc.get(mono, _ZERO) + coef
            if new:
                acc[mono] = new
            else:
                acc.pop(mono, None)
        out = Polynomial.__new__(Polynomial)
        out.terms = acc
        return out

    def __neg__(self) -> "Polynomial":
        out = Polynomial.__new__(Polynomial)
        out.terms = {mono: -coef for mono, coef in self.terms.items()}
        return out

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _merge_monomials(m1, m2)
                coef = c1 * c2
                new = acc.get(mono, _ZERO) + coef
                if new:
                    acc[mono] = new
                else:
                    acc.pop(mono, None)
        out = Polynomial.__new__(Polynomial)
        out.terms = acc
        return out

    def scale(self, c: Fraction | int) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial()
        out = Polynomial.__new__(Polynomial)
        out.terms = {mono: coef * c for mono, coef in self.terms.items()}
        return out

    def substitute(self, mapping: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Simultaneously substitute polynomials for variables."""
        result = Polynomial()
        for mono, coef in self.terms.items():
            term = Polynomial.constant(coef)
            for var, exp in mono:
                if var in mapping:
                    factor = mapping[var]
                    for _ in range(exp):
                        term = term * factor
                else:
                    term = term * Polynomial.variable(var, exp)
            result = result + term
        return result

    def remap_variables(self, mapping: Mapping[int, int | None]) -> "Polynomial":
        """Rename variables (merging exponents); ``None`` substitutes zero.

        Variables absent from the mapping keep their index.
        """
        acc: dict[Monomial, Fraction] = {}
        for mono, coef in self.terms.items():
            powers: dict[int, int] = {}
            dead = False
            for var, exp in mono:
                target = mapping.get(var, var)
                if target is None:
                    dead = True
                    break
                powers[target] = powers.get(target, 0) + exp
            if dead:
                continue
            key = tuple(sorted(powers.items()))
            new = acc.get(key, _ZERO) + coef
            if new:
                acc[key] = new
            else:
                acc.pop(key, None)
        out = Polynomial.__new__(Polynomial)
        out.terms = acc
        return out

    def evaluate(self, values: Mapping[int, Fraction]) -> Fraction:
        total = _ZERO
        for mono, coef in self.terms.items():
            prod = coef
            for var, exp in mono:
                prod *= values[var] ** exp
            total += prod
        return total

    def variables(self) -> set[int]:
        return {var for mono in self.terms for var, _ in mono}

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in the canonical (deterministic) print order."""
        return sorted(self.terms.items(), key=lambda it: it[0])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)})"


def _normalize_monomial(powers: Iterable[tuple[int, int]]) -> Monomial:
    acc: dict[int, int] = {}
    for var, exp in powers:
        if exp < 0:
            raise ValueError("negative exponent")
        if exp:
            acc[var] = acc.get(var, 0) + exp
    return tuple(sorted(acc.items()))


def _merge_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    acc = dict(m1)
    for var, exp in m2:
        acc[var] = acc.get(var, 0) + exp
    return tuple(sorted(acc.items()))


def format_polynomial(poly: Polynomial, names: Sequence[str] | None = None) -> str:
    """Deterministic human-readable form, e.g. ``-6*A - 2*A*B``."""

    def var_name(var: int) -> str:
        if var == _SHEAR_VAR:
            return "t"
        if names is not None:
            return names[var]
        return f"x{var}"

    if poly.is_zero():
        return "0"
    pieces = []
    for mono, coef in poly.sorted_terms():
        factors = []
        for var, exp in mono:
            factors.append(var_name(var) if exp == 1 else f"{var_name(var)}^{exp}")
        mono_text = "*".join(factors)
        mag = abs(coef)
        if not mono_text:
            body = str(mag)
        elif mag == 1:
            body = mono_text
        else:
            body = f"{mag}*{mono_text}"
        if not pieces:
            pieces.append(body if coef > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coef > 0 else f"- {body}")
    return " ".join(pieces)


@dataclass(frozen=True)
class VectorField:
    """One polynomial per species; variable ``i`` is the i-th species."""

    species: tuple[Species, ...]
    components: Mapping[Species, Polynomial]

    def component(self, sp: Species) -> Polynomial:
        return self.components[sp]

    def names(self) -> tuple[str, ...]:
        return tuple(sp.name for sp in self.species)


def format_vector_field(vf: VectorField) -> str:
    """One ``name' = polynomial`` line per species, newline-terminated."""
    names = vf.names()
    lines = []
    for sp in vf.species:
        lines.append(f"{sp.name}' = {format_polynomial(vf.components[sp], names)}")
    return "\n".join(lines) + "\n"


def _reactant_monomial(rho: Multiset) -> Monomial:
    return tuple(sorted((sp.id, m) for sp, m in rho))


def vector_field(crn: CRN) -> VectorField:
    """The mass-action ODE right-hand side of a network, in canonical form."""
    components: dict[Species, dict[Monomial, Fraction]] = {sp: {} for sp in crn.species}
    for rxn in crn.reactions:
        mono = _reactant_monomial(rxn.reactants)
        touched = {sp for sp, _ in rxn.reactants} | {sp for sp, _ in rxn.products}
        for sp in touched:
            net = rxn.products.get(sp) - rxn.reactants.get(sp)
            if net == 0:
                continue
            terms = components[sp]
            new = terms.get(mono, _ZERO) + net * rxn.rate
            if new:
                terms[mono] = new
            else:
                terms.pop(mono, None)
    built = {}
    for sp, terms in components.items():
        poly = Polynomial.__new__(Polynomial)
        poly.terms = terms
        built[sp] = poly
    return VectorField(species=crn.species, components=built)


def accretion_depletion(rxn: Reaction, x: Species) -> tuple[Polynomial, Polynomial]:
    """The positive and negative parts a reaction contributes to one species.

    Returns ``(accretion, depletion)``; the species' component of the
    vector field is the sum of accretion minus depletion over all
    reactions.
    """
    mono = _reactant_monomial(rxn.reactants)
    accr = Polynomial({mono: rxn.products.get(x) * rxn.rate})
    depl = Polynomial({mono: rxn.reactants.get(x) * rxn.rate})
    return accr, depl


def _merge_to_block_map(p: Partition) -> dict[int, int]:
    """Species-variable -> block-index map (blocks are the quotient order)."""
    mapping = {}
    for idx, block in enumerate(p.blocks):
        for sp in block:
            mapping[sp.id] = idx
    return mapping


def is_exactly_lumpable(crn: CRN, p: Partition) -> bool:
    """Does constancy across blocks propagate from states to derivatives?

    Decided by substituting each species variable with its block
    representative and comparing the resulting components within every
    block as canonical polynomials.
    """
    return exact_lumpability_witness(crn, p) is None


def exact_lumpability_witness(
    crn: CRN, p: Partition
) -> tuple[Species, Species] | None:
    """A within-block species pair whose components differ after merging
    block variables; None when the partition is exactly lumpable."""
    field = vector_field(crn)
    merge = _merge_to_block_map(p)
    for block in p.blocks:
        if len(block) == 1:
            continue
        reference = field.components[block[0]].remap_variables(merge)
        for sp in block[1:]:
            if field.components[sp].remap_variables(merge) != reference:
                return block[0], sp
    return None


def _block_sums(field: VectorField, p: Partition) -> list[Polynomial]:
    sums = []
    for block in p.blocks:
        total = Polynomial()
        for sp in block:
            total = total + field.components[sp]
        sums.append(total)
    return sums


def _shear_pairs(p: Partition) -> list[tuple[int, int]]:
    pairs = []
    for block in p.blocks:
        for a, b in zip(block, block[1:]):
            pairs.append((a.id, b.id))
    return pairs


def is_ordinarily_lumpable(crn: CRN, p: Partition) -> bool:
    """Can every block's component sum be written in block-sum variables?

    A polynomial depends only on the block sums exactly when it is
    invariant under all within-block shears ``V_i += t, V_j -= t``;
    consecutive pairs generate them all, so the check is finite and
    exact.
    """
    return _ordinary_lumpability_witness(crn, p) is None


def _ordinary_lumpability_witness(
    crn: CRN, p: Partition
) -> tuple[int, tuple[int, int]] | None:
    """None if lumpable, else (block index, offending shear pair)."""
    field = vector_field(crn)
    sums = _block_sums(field, p)
    pairs = _shear_pairs(p)
    if not pairs:
        return None
    t = Polynomial.variable(_SHEAR_VAR)
    for i, j in pairs:
        shear = {
            i: Polynomial.variable(i) + t,
            j: Polynomial.variable(j) - t,
        }
        for block_idx, s in enumerate(sums):
            if s.substitute(shear) != s:
                return block_idx, (i, j)
    return None


def lumped_field_forward(crn: CRN, p: Partition) -> VectorField:
    """The block-sum ODE system, one variable per block.

    Components are keyed by the quotient species (block representatives);
    variable ``i`` stands for the sum of block ``i``.  Raises
    :class:`NotLumpableError` when the block sums cannot be rewritten.
    """
    witness = _ordinary_lumpability_witness(crn, p)
    if witness is not None:
        block_idx, _ = witness
        members = ", ".join(sp.name for sp in p.blocks[block_idx])
        raise NotLumpableError(
            f"block sums are not expressible in block variables (block {{{members}}})"
        )
    field = vector_field(crn)
    sums = _block_sums(field, p)
    # On the shear-invariant subspace, evaluating at "all block mass on the
    # least member" is a right inverse of the block-sum map, so renaming
    # each block's least member to the block variable and zeroing the rest
    # recovers the block-sum polynomial exactly.
    section: dict[int, int | None] = {}
    for idx, block in enumerate(p.blocks):
        section[block[0].id] = idx
        for sp in block[1:]:
            section[sp.id] = None
    qspecies = quotient_species(p)
    components = {
        qspecies[idx]: sums[idx].remap_variables(section)
        for idx in range(len(p.blocks))
    }
    return VectorField(species=qspecies, components=components)


def lumped_field_backward(crn: CRN, p: Partition) -> VectorField:
    """The representative ODE system under within-block variable merging.

    Keeps one component per block representative with every species
    variable replaced by its representative.  Raises
    :class:`NotLumpableError` when the partition is not exactly lumpable.
    """
    if not is_exactly_lumpable(crn, p):
        raise NotLumpableError("partition is not exactly lumpable")
    field = vector_field(crn)
    merge = _merge_to_block_map(p)
    mu = choice_function(p)
    qspecies = quotient_species(p)
    components = {}
    for idx, block in enumerate(p.blocks):
        rep = mu(block[0])
        components[qspecies[idx]] = field.components[rep].remap_variables(merge)
    return VectorField(species=qspecies, components=components)
