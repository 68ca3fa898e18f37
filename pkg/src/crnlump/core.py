"""Core data model for mass-action reaction networks.

Species, multisets of species, rated reactions, networks, species
partitions, and the representative (choice) map that sends every species
to the canonical member of its partition block.

All types are immutable after construction and safe to share across
threads.  Rates and multiplicities are exact: rates are
:class:`fractions.Fraction`, multiplicities are positive ints.  The fixed
total order on species used for representatives and block ordering is
lexicographic on species names.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "CRNError",
    "ParseError",
    "PartitionError",
    "NotBisimulationError",
    "NotLumpableError",
    "IntegrationError",
    "Species",
    "species_key",
    "Multiset",
    "Reaction",
    "CRN",
    "make_crn",
    "validate",
    "Partition",
    "ChoiceFunction",
    "choice_function",
    "lift_multiset",
    "quotient_species",
]


class CRNError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CRNError):
    """Malformed input text; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PartitionError(CRNError):
    """A species partition is malformed or violates a precondition."""


class NotBisimulationError(PartitionError):
    """A partition handed to a reduction is not a bisimulation."""


class NotLumpableError(CRNError):
    """A partition does not admit the requested lumped ODE system."""


class IntegrationError(CRNError):
    """Numerical integration failed or produced non-finite values."""


@dataclass(frozen=True, slots=True)
class Species:
    """A chemical species: a dense index plus a unique name.

    ``id`` equals the position of the species in its network's species
    list; it is only meaningful relative to that network.
    """

    id: int
    name: str

    def __str__(self) -> str:
        return self.name


def species_key(sp: Species) -> str:
    """Sort key realizing the fixed total order on species (name-lex)."""
    return sp.name


class Multiset:
    """Immutable multiset of species with positive multiplicities.

    Entries iterate deterministically in species-id order.  ``a + b`` is
    multiset union (multiplicities add).
    """

    __slots__ = ("_pairs", "_key", "_hash")

    def __init__(self, pairs: Iterable[tuple[Species, int]] = ()):
        acc: dict[Species, int] = {}
        for sp, mult in pairs:
            if mult < 0:
                raise ValueError(f"negative multiplicity for {sp.name}")
            if mult == 0:
                continue
            acc[sp] = acc.get(sp, 0) + mult
        ordered = tuple(sorted(acc.items(), key=lambda it: it[0].id))
        object.__setattr__(self, "_pairs", ordered)
        object.__setattr__(self, "_key", tuple((sp.id, m) for sp, m in ordered))
        object.__setattr__(self, "_hash", hash(self._key))

    @classmethod
    def of(cls, *species: Species) -> "Multiset":
        return cls((sp, 1) for sp in species)

    @property
    def pairs(self) -> tuple[tuple[Species, int], ...]:
        return self._pairs

    def get(self, sp: Species) -> int:
        for s, m in self._pairs:
            if s == sp:
                return m
        return 0

    @property
    def total(self) -> int:
        """Total multiplicity (number of molecules)."""
        return sum(m for _, m in self._pairs)

    def species(self) -> tuple[Species, ...]:
        return tuple(sp for sp, _ in self._pairs)

    def __iter__(self) -> Iterator[tuple[Species, int]]:
        return iter(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __bool__(self) -> bool:
        return bool(self._pairs)

    def __add__(self, other: "Multiset") -> "Multiset":
        return Multiset(tuple(self._pairs) + tuple(other._pairs))

    def lift(self, mapping: Mapping[Species, Species]) -> "Multiset":
        """Apply a species map element-wise; multiplicities accumulate."""
        try:
            return Multiset((mapping[sp], m) for sp, m in self._pairs)
        except KeyError as err:
            raise PartitionError(f"unknown species {err.args[0]}") from None

    def name_key(self) -> tuple[tuple[str, int], ...]:
        """Deterministic key under the species name order (for output sort)."""
        return tuple(sorted(((sp.name, m) for sp, m in self._pairs)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Multiset) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if not self._pairs:
            return "0"
        return " + ".join(
            (f"{m}{sp.name}" if m > 1 else sp.name)
            for sp, m in sorted(self._pairs, key=lambda it: it[0].name)
        )


@dataclass(frozen=True, slots=True)
class Reaction:
    """A rated reaction between multisets: reactants -> products."""

    reactants: Multiset
    rate: Fraction
    products: Multiset

    def __repr__(self) -> str:
        return f"{self.reactants!r} ->({self.rate}) {self.products!r}"


class CRN:
    """A finite reaction network: ordered species plus a reaction list.

    Species ids equal list positions and names are unique; both are
    enforced at construction.  Reaction-level restrictions (positive
    rates, at most two reactant molecules, declared species) are data
    checked by :func:`validate`, not constructor failures.
    """

    __slots__ = ("species", "reactions", "_by_name")

    def __init__(self, species: Sequence[Species], reactions: Sequence[Reaction]):
        self.species = tuple(species)
        self.reactions = tuple(reactions)
        by_name: dict[str, Species] = {}
        for i, sp in enumerate(self.species):
            if sp.id != i:
                raise ValueError(f"species {sp.name} has id {sp.id}, expected {i}")
            if not sp.name:
                raise ValueError("species name must be nonempty")
            if sp.name in by_name:
                raise ValueError(f"duplicate species name {sp.name}")
            by_name[sp.name] = sp
        self._by_name = by_name

    def by_name(self, name: str) -> Species:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown species {name}") from None

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CRN):
            return NotImplemented
        return self.species == other.species and self.reactions == other.reactions

    def __hash__(self) -> int:
        return hash((self.species, self.reactions))

    def __repr__(self) -> str:
        return f"CRN({self.n_species} species, {self.n_reactions} reactions)"


def make_crn(
    species_names: Sequence[str],
    reactions: Iterable[tuple[Mapping[str, int], Fraction | int | str, Mapping[str, int]]],
) -> CRN:
    """Build a CRN from names and (reactants, rate, products) triples.

    Multisets are given as name -> multiplicity mappings; rates as
    anything :class:`fractions.Fraction` accepts.
    """
    species = tuple(Species(i, name) for i, name in enumerate(species_names))
    by_name = {sp.name: sp for sp in species}
    built = []
    for reactants, rate, products in reactions:
        built.append(
            Reaction(
                Multiset((by_name[n], m) for n, m in reactants.items()),
                Fraction(rate),
                Multiset((by_name[n], m) for n, m in products.items()),
            )
        )
    return CRN(species, built)


def validate(crn: CRN) -> list[str]:
    """Check reaction-level invariants; return violations (empty = valid).

    Violations are data, not failures: each entry names the offending
    reaction or species.
    """
    violations = []
    declared = set(crn.species)
    for i, rxn in enumerate(crn.reactions):
        where = f"reaction {i} ({rxn!r})"
        if rxn.rate <= 0:
            violations.append(f"{where}: rate must be positive")
        total = rxn.reactants.total
        if total == 0:
            violations.append(f"{where}: reactants must contain at least one species")
        elif total > 2:
            violations.append(f"{where}: reactants exceed multiplicity 2")
        for sp, _ in tuple(rxn.reactants) + tuple(rxn.products):
            if sp not in declared:
                violations.append(f"{where}: undeclared species {sp.name}")
    return violations


class Partition:
    """A partition of a network's species into disjoint nonempty blocks.

    Block members are sorted by the species order and blocks are ordered
    by their least member, so equal partitions have identical block
    tuples.
    """

    __slots__ = ("species", "blocks", "_block_of", "_hash")

    def __init__(self, species: Sequence[Species], blocks: Iterable[Iterable[Species]]):
        universe = tuple(species)
        norm = []
        for block in blocks:
            members = tuple(sorted(set(block), key=species_key))
            if not members:
                raise PartitionError("empty block")
            norm.append(members)
        norm.sort(key=lambda b: species_key(b[0]))
        block_of: dict[Species, int] = {}
        for idx, members in enumerate(norm):
            for sp in members:
                if sp in block_of:
                    raise PartitionError(f"species {sp.name} occurs in two blocks")
                block_of[sp] = idx
        missing = [sp.name for sp in universe if sp not in block_of]
        if missing:
            raise PartitionError(f"incomplete partition: missing {', '.join(missing)}")
        extra = set(block_of) - set(universe)
        if extra:
            names = ", ".join(sorted(sp.name for sp in extra))
            raise PartitionError(f"unknown species {names}")
        self.species = universe
        self.blocks = tuple(norm)
        self._block_of = block_of
        self._hash = hash(tuple(tuple(sp.id for sp in b) for b in self.blocks))

    @classmethod
    def trivial(cls, crn: CRN) -> "Partition":
        """The one-block partition {S}."""
        return cls(crn.species, [crn.species] if crn.species else [])

    @classmethod
    def discrete(cls, crn: CRN) -> "Partition":
        """The all-singletons partition."""
        return cls(crn.species, [[sp] for sp in crn.species])

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self, sp: Species) -> int:
        try:
            return self._block_of[sp]
        except KeyError:
            raise PartitionError(f"unknown species {sp.name}") from None

    def block_members(self, sp: Species) -> tuple[Species, ...]:
        return self.blocks[self.block_of(sp)]

    def same_block(self, a: Species, b: Species) -> bool:
        return self.block_of(a) == self.block_of(b)

    def refines(self, other: "Partition") -> bool:
        """True if every block of self is contained in a block of other."""
        for block in self.blocks:
            target = other.block_of(block[0])
            if any(other.block_of(sp) != target for sp in block[1:]):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.species == other.species and self.blocks == other.blocks

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = " | ".join(
            "{" + ", ".join(sp.name for sp in block) + "}" for block in self.blocks
        )
        return f"Partition[{body}]"


@dataclass(frozen=True)
class ChoiceFunction:
    """Map sending every species to its block's least member.

    Idempotent by construction; lifted element-wise to multisets by
    :meth:`lift`.
    """

    representative: Mapping[Species, Species]

    def __call__(self, sp: Species) -> Species:
        try:
            return self.representative[sp]
        except KeyError:
            raise PartitionError(f"unknown species {sp.name}") from None

    def lift(self, m: Multiset) -> Multiset:
        return m.lift(self.representative)

    def is_representative(self, sp: Species) -> bool:
        return self(sp) == sp

    def representatives(self) -> tuple[Species, ...]:
        reps = {sp for sp in self.representative.values()}
        return tuple(sorted(reps, key=species_key))


def choice_function(p: Partition) -> ChoiceFunction:
    """The choice function of a partition (least member of each block)."""
    mapping = {}
    for block in p.blocks:
        rep = block[0]  # members are sorted by the species order
        for sp in block:
            mapping[sp] = rep
    return ChoiceFunction(mapping)


def lift_multiset(mu: ChoiceFunction, m: Multiset) -> Multiset:
    """Apply a choice function element-wise to a multiset."""
    return mu.lift(m)


def quotient_species(p: Partition) -> tuple[Species, ...]:
    """Fresh species for the quotient: one per block, named after its
    representative, with ids renumbered to block positions."""
    return tuple(
        Species(idx, block[0].name) for idx, block in enumerate(p.blocks)
    )
