"""Built-in networks, a combinatorial benchmark generator, and
brute-force oracles.

The benchmark family is a substrate with ``n`` identical modification
sites, each independently in one of four states (unmodified, modified,
bound to the modifying enzyme, bound to the demodifying enzyme), plus
the two free enzymes: ``4^n + 2`` species and ``6 n 4^(n-1)`` reactions.
Site-uniform rates make permutations of site states behaviorally
equivalent, which is exactly what the forward/backward equivalences
detect, collapsing the species count to the number of state multisets
plus two.

``brute_force_coarsest`` enumerates every partition refining an initial
one and returns the coarsest bisimulation among them; it is the
independent oracle the refinement algorithm is tested against.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .bisim import BisimMode, is_bisimulation
from .core import CRN, CRNError, Multiset, Partition, Reaction, Species, make_crn
from .sim import InitialCondition

__all__ = [
    "running_example",
    "two_state",
    "MultisiteSpec",
    "multisite",
    "multisite_block_count",
    "brute_force_coarsest",
    "random_crn",
]


def running_example() -> CRN:
    """Five species, five reactions; the worked example used throughout
    the tests.  Species C/E aggregate forward, A/B aggregate backward."""
    return make_crn(
        ["A", "B", "C", "D", "E"],
        [
            ({"A": 1}, 6, {"E": 1}),
            ({"B": 1}, 6, {"D": 1}),
            ({"A": 1, "B": 1}, 2, {"C": 1}),
            ({"C": 1, "D": 1}, 5, {"C": 2, "D": 1}),
            ({"E": 1, "D": 1}, 5, {"E": 2, "D": 1}),
        ],
    )


def two_state(a1: Fraction | int, a2: Fraction | int) -> CRN:
    """Two species flipping into each other: F -> G and G -> F.

    With unequal rates the one-block partition is not a forward
    bisimulation, yet the total concentration is conserved, so the
    block-sum system exists (and is the zero ODE): lumpability strictly
    contains forward bisimilarity.
    """
    a1, a2 = Fraction(a1), Fraction(a2)
    if a1 <= 0 or a2 <= 0:
        raise ValueError("rates must be positive")
    return make_crn(
        ["F", "G"],
        [({"F": 1}, a1, {"G": 1}), ({"G": 1}, a2, {"F": 1})],
    )


# Site states: unmodified, modified, enzyme-bound, phosphatase-bound.
_STATES = ("U", "P", "UE", "PF")


@dataclass(frozen=True)
class MultisiteSpec:
    """Parameters of the multisite benchmark; rates are site-independent."""

    n_sites: int
    e_bind: Fraction = Fraction(1)
    e_unbind: Fraction = Fraction(2)
    e_cat: Fraction = Fraction(3)
    f_bind: Fraction = Fraction(4)
    f_unbind: Fraction = Fraction(5)
    f_cat: Fraction = Fraction(6)

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        for rate in (
            self.e_bind,
            self.e_unbind,
            self.e_cat,
            self.f_bind,
            self.f_unbind,
            self.f_cat,
        ):
            if rate <= 0:
                raise ValueError("all rates must be positive")


_REACTION_GUARD = 3_000_000


def multisite(spec: MultisiteSpec) -> tuple[CRN, InitialCondition]:
    """Fully enumerated multisite network with its initial condition.

    ``4^n + 2`` species and ``6 n 4^(n-1)`` reactions; initially all
    substrate is unmodified and both enzymes are free.
    """
    n = spec.n_sites
    expected_reactions = 6 * n * 4 ** (n - 1)
    if expected_reactions > _REACTION_GUARD:
        raise CRNError(
            f"multisite n={n} would enumerate {4**n + 2} species and "
            f"{expected_reactions} reactions; refusing (guard {_REACTION_GUARD})"
        )

    def config_name(config: tuple[str, ...]) -> str:
        return f"S({','.join(config)})"

    configs = list(product(_STATES, repeat=n))
    names = ["E", "F"] + [config_name(c) for c in configs]
    species = tuple(Species(i, name) for i, name in enumerate(names))
    enzyme, phosphatase = species[0], species[1]
    config_species = {c: species[2 + i] for i, c in enumerate(configs)}

    def flipped(config: tuple[str, ...], site: int, state: str) -> Species:
        return config_species[config[:site] + (state,) + config[site + 1 :]]

    reactions = []
    for config in configs:
        substrate = config_species[config]
        for site, state in enumerate(config):
            if state == "U":
                reactions.append(
                    Reaction(
                        Multiset.of(enzyme, substrate),
                        spec.e_bind,
                        Multiset.of(flipped(config, site, "UE")),
                    )
                )
            elif state == "UE":
                reactions.append(
                    Reaction(
                        Multiset.of(substrate),
                        spec.e_unbind,
                        Multiset.of(enzyme, flipped(config, site, "U")),
                    )
                )
                reactions.append(
                    Reaction(
                        Multiset.of(substrate),
                        spec.e_cat,
                        Multiset.of(enzyme, flipped(config, site, "P")),
                    )
                )
            elif state == "P":
                reactions.append(
                    Reaction(
                        Multiset.of(phosphatase, substrate),
                        spec.f_bind,
                        Multiset.of(flipped(config, site, "PF")),
                    )
                )
            else:  # PF
                reactions.append(
                    Reaction(
                        Multiset.of(substrate),
                        spec.f_unbind,
                        Multiset.of(phosphatase, flipped(config, site, "P")),
                    )
                )
                reactions.append(
                    Reaction(
                        Multiset.of(substrate),
                        spec.f_cat,
                        Multiset.of(phosphatase, flipped(config, site, "U")),
                    )
                )
    crn = CRN(species, reactions)
    unmodified = config_species[("U",) * n]
    inits = InitialCondition.from_map(
        crn,
        {enzyme: Fraction(1, 2), phosphatase: Fraction(1, 3), unmodified: Fraction(1)},
    )
    return crn, inits


def multisite_block_count(n: int) -> int:
    """Expected coarsest block count: multisets of 4 site states of size n,
    plus the two enzymes."""
    return (n + 3) * (n + 2) * (n + 1) // 6 + 2


def _set_partitions(items: tuple):
    """All partitions of a tuple, as lists of lists."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1 :]
        yield [[first]] + sub


def partitions_refining(initial: Partition):
    """Every partition refining ``initial`` (partition the blocks independently)."""
    per_block = [list(_set_partitions(block)) for block in initial.blocks]
    for combo in product(*per_block):
        blocks = [members for sub in combo for members in sub]
        yield Partition(initial.species, blocks)


def brute_force_coarsest(crn: CRN, initial: Partition, mode: BisimMode) -> Partition:
    """Coarsest mode-bisimulation refining ``initial``, by exhaustion.

    Enumerates every refinement, keeps the bisimulations, and returns
    the unique coarsest one (all other candidates refine it).  Guarded
    to at most 8 species.
    """
    if crn.n_species > 8:
        raise CRNError(
            f"brute force oracle limited to 8 species, got {crn.n_species}"
        )
    candidates = [
        p for p in partitions_refining(initial) if is_bisimulation(crn, p, mode)
    ]
    # The discrete partition is always a bisimulation, so candidates is
    # nonempty; closure under union makes the minimum-block one coarsest.
    best = min(candidates, key=lambda p: p.n_blocks)
    for p in candidates:
        if not p.refines(best):
            raise AssertionError("no unique coarsest bisimulation; closure violated")
    return best


def random_crn(
    seed: int,
    n_species: int,
    n_reactions: int,
    rate_pool: tuple[Fraction | int, ...] = (1, 2, 3, Fraction(1, 2)),
) -> CRN:
    """Seed-deterministic valid network for property sweeps.

    Unary or binary reactants, up to three product molecules (possibly
    none), rates drawn from the pool.
    """
    if n_species < 1 or n_reactions < 0:
        raise ValueError("sizes must be positive")
    rng = random.Random(seed)
    if n_species <= 26:
        names = [chr(ord("A") + i) for i in range(n_species)]
    else:
        names = [f"X{i:04d}" for i in range(n_species)]
    species = tuple(Species(i, name) for i, name in enumerate(names))
    reactions = []
    for _ in range(n_reactions):
        if rng.random() < 0.5:
            reactants = Multiset.of(rng.choice(species))
        else:
            reactants = Multiset.of(rng.choice(species), rng.choice(species))
        products = Multiset.of(
            *(rng.choice(species) for _ in range(rng.randint(0, 3)))
        )
        rate = Fraction(rng.choice(rate_pool))
        reactions.append(Reaction(reactants, rate, products))
    return CRN(species, reactions)
