from fractions import Fraction

import pytest

from crnlump import (
    CRN,
    ChoiceFunction,
    Multiset,
    Partition,
    PartitionError,
    Reaction,
    Species,
    choice_function,
    lift_multiset,
    make_crn,
    quotient_species,
    validate,
)
from conftest import blocks_of


def test_multiset_drops_zero_entries():
    a = Species(0, "A")
    m = Multiset([(a, 0)])
    assert not m and m.total == 0 and m.get(a) == 0


def test_multiset_rejects_negative_multiplicity():
    a = Species(0, "A")
    with pytest.raises(ValueError):
        Multiset([(a, -1)])


def test_multiset_accumulates_and_iterates_in_id_order():
    a, b = Species(0, "A"), Species(1, "B")
    m = Multiset([(b, 1), (a, 1), (b, 1)])
    assert [(sp.name, k) for sp, k in m] == [("A", 1), ("B", 2)]
    assert m.total == 3
    assert (m + Multiset.of(a)).get(a) == 2


def test_multiset_equality_and_hash():
    a, b = Species(0, "A"), Species(1, "B")
    assert Multiset.of(a, b) == Multiset.of(b, a)
    assert hash(Multiset.of(a, b)) == hash(Multiset.of(b, a))
    assert Multiset.of(a) != Multiset.of(b)


def test_crn_enforces_dense_ids_and_unique_names():
    with pytest.raises(ValueError):
        CRN([Species(1, "A")], [])
    with pytest.raises(ValueError):
        CRN([Species(0, "A"), Species(1, "A")], [])


def test_validate_running_example_is_clean(crn):
    assert validate(crn) == []


def test_validate_flags_three_reactants():
    crn = make_crn(["A", "B", "C", "D"], [({"A": 1, "B": 1, "C": 1}, 1, {"D": 1})])
    violations = validate(crn)
    assert len(violations) == 1 and "reactants exceed multiplicity 2" in violations[0]


def test_validate_flags_nonpositive_rate():
    crn = make_crn(["A", "B"], [({"A": 1}, 1, {"B": 1})])
    bad = CRN(crn.species, [Reaction(crn.reactions[0].reactants, Fraction(0), crn.reactions[0].products)])
    assert any("rate must be positive" in v for v in validate(bad))


def test_validate_flags_zero_reactants_and_foreign_species():
    a, b = Species(0, "A"), Species(1, "B")
    ghost = Species(7, "G")
    crn = CRN([a, b], [Reaction(Multiset(), Fraction(1), Multiset.of(a))])
    assert any("at least one species" in v for v in validate(crn))
    crn2 = CRN([a, b], [Reaction(Multiset.of(a), Fraction(1), Multiset.of(ghost))])
    assert any("undeclared species G" in v for v in validate(crn2))


def test_reactants_equal_products_is_accepted():
    crn = make_crn(["A", "B"], [({"A": 1, "B": 1}, 2, {"A": 1, "B": 1})])
    assert validate(crn) == []


def test_partition_blocks_are_normalized(crn):
    # members and blocks given out of order come back sorted canonically
    e, c = crn.by_name("E"), crn.by_name("C")
    p = Partition(crn.species, [[e, c], [crn.by_name("D")], [crn.by_name("B")], [crn.by_name("A")]])
    assert [tuple(sp.name for sp in b) for b in p.blocks] == [("A",), ("B",), ("C", "E"), ("D",)]


def test_partition_roundtrip_block_of(crn, h_o):
    rebuilt = Partition(crn.species, {h_o.block_members(sp) for sp in crn.species})
    assert rebuilt == h_o
    assert h_o.block_of(crn.by_name("E")) == h_o.block_of(crn.by_name("C"))


def test_partition_rejects_bad_inputs(crn):
    a = crn.by_name("A")
    with pytest.raises(PartitionError):
        Partition(crn.species, [[a]])  # incomplete
    with pytest.raises(PartitionError):
        Partition(crn.species, [list(crn.species), [a]])  # duplicate
    with pytest.raises(PartitionError):
        Partition(crn.species, [list(crn.species), []])  # empty block


def test_refinement_is_a_partial_order(crn, h_o, h_e, mixed):
    for p in (h_o, h_e, mixed):
        assert p.refines(p)  # reflexive
    discrete = Partition.discrete(crn)
    trivial = Partition.trivial(crn)
    assert discrete.refines(h_o) and h_o.refines(trivial)
    assert not trivial.refines(h_o)
    assert h_e.refines(mixed) and not mixed.refines(h_e)
    # antisymmetry over all fixture pairs: mutual refinement implies equality
    parts = [h_o, h_e, mixed, discrete, trivial]
    for p in parts:
        for q in parts:
            if p.refines(q) and q.refines(p):
                assert p == q


def test_choice_function_picks_least_member(crn, h_o, h_e):
    mu_o = choice_function(h_o)
    assert mu_o(crn.by_name("E")).name == "C"
    assert mu_o(crn.by_name("A")).name == "A"
    mu_e = choice_function(h_e)
    assert mu_e(crn.by_name("B")).name == "A"


def test_choice_function_is_idempotent_and_stays_in_block(crn, h_o):
    mu = choice_function(h_o)
    for sp in crn.species:
        assert mu(mu(sp)) == mu(sp)
        assert h_o.same_block(sp, mu(sp))


def test_choice_function_on_discrete_partition_is_identity(crn):
    mu = choice_function(Partition.discrete(crn))
    assert all(mu(sp) == sp for sp in crn.species)


def test_choice_function_unknown_species_errors(crn, h_o):
    mu = choice_function(h_o)
    with pytest.raises(PartitionError):
        mu(Species(9, "Z"))


def test_lift_multiset_accumulates(crn, h_e, h_o):
    a, b, d, e = (crn.by_name(n) for n in "ABDE")
    mu_e = choice_function(h_e)
    assert lift_multiset(mu_e, Multiset.of(a, b)) == Multiset([(a, 2)])
    # element-wise application, checked by hand expansion: 2E + D -> 2C + D
    mu_o = choice_function(h_o)
    lifted = lift_multiset(mu_o, Multiset([(e, 2), (d, 1)]))
    assert lifted == Multiset([(crn.by_name("C"), 2), (d, 1)])
    identity = choice_function(Partition.discrete(crn))
    m = Multiset.of(a, b, b)
    assert lift_multiset(identity, m) == m


def test_quotient_species_renumbers_representatives(crn, h_o):
    qs = quotient_species(h_o)
    assert [sp.name for sp in qs] == ["A", "B", "C", "D"]
    assert [sp.id for sp in qs] == [0, 1, 2, 3]


def test_species_order_is_name_lexicographic():
    crn = make_crn(["Zeta", "Alpha"], [({"Zeta": 1}, 1, {"Alpha": 1})])
    p = Partition.trivial(crn)
    mu = choice_function(p)
    assert mu(crn.by_name("Zeta")).name == "Alpha"
