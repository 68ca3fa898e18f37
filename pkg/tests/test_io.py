from fractions import Fraction

import pytest

from crnlump import (
    CRN,
    Multiset,
    ParseError,
    Partition,
    PartitionError,
    import_bngl_net,
    make_crn,
    parse_crn,
    parse_initial_conditions,
    parse_partition,
    partition_from_initial_conditions,
    running_example,
    serialize_crn,
)
from crnlump.io import format_rational, parse_rational
from crnlump.sim import InitialCondition
from conftest import blocks_of

RUNNING_TEXT = """\
# the worked five-species example
species: A B C D E
A -> E , 6
B -> D , 6
A + B -> C , 2
C + D -> 2C + D , 5
E + D -> 2E + D , 5
"""


class TestParseCrn:
    def test_running_example_text(self):
        crn, inits = parse_crn(RUNNING_TEXT)
        assert inits is None
        assert crn == running_example()

    def test_products_with_coefficients(self):
        crn, _ = parse_crn("C + D -> 2C + D , 5")
        rxn = crn.reactions[0]
        assert rxn.products.get(crn.by_name("C")) == 2
        assert rxn.products.get(crn.by_name("D")) == 1

    def test_first_appearance_order_without_header(self):
        crn, _ = parse_crn("B -> A , 1\nC -> B , 1")
        assert [sp.name for sp in crn.species] == ["B", "A", "C"]

    def test_empty_products_side(self):
        crn, _ = parse_crn("A -> 0 , 3")
        assert crn.reactions[0].products == Multiset()

    def test_init_lines(self):
        crn, inits = parse_crn("A -> B , 1\ninit: A = 1/2\ninit: B = 0.25")
        assert inits.get(crn.by_name("A")) == Fraction(1, 2)
        assert inits.get(crn.by_name("B")) == Fraction(1, 4)

    def test_three_reactants_rejected(self):
        with pytest.raises(ParseError, match="exceed multiplicity 2"):
            parse_crn("A + B + C -> D , 1")

    def test_two_molecules_same_species_allowed(self):
        crn, _ = parse_crn("2A -> B , 1")
        assert crn.reactions[0].reactants.get(crn.by_name("A")) == 2

    def test_zero_reactants_rejected(self):
        with pytest.raises(ParseError, match="at least one species"):
            parse_crn("0 -> A , 1")

    def test_nonpositive_rate_rejected(self):
        with pytest.raises(ParseError, match="rate must be positive"):
            parse_crn("A -> B , 0")
        with pytest.raises(ParseError, match="rate must be positive"):
            parse_crn("A -> B , -2")

    def test_missing_rate_rejected(self):
        with pytest.raises(ParseError, match="missing rate"):
            parse_crn("A -> B")

    def test_undeclared_species_with_header(self):
        with pytest.raises(ParseError, match="undeclared species Z"):
            parse_crn("species: A B\nA -> Z , 1")

    def test_parse_errors_carry_line_numbers(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_crn("A -> B , 1\n# fine\nA -> B , bogus")

    def test_garbage_line(self):
        with pytest.raises(ParseError, match="expected a reaction line"):
            parse_crn("definitely not a reaction")


class TestExactRates:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("6", Fraction(6)),
            ("0.1", Fraction(1, 10)),
            ("1e-3", Fraction(1, 1000)),
            ("2.5e2", Fraction(250)),
            ("3/7", Fraction(3, 7)),
        ],
    )
    def test_literals_become_exact_rationals(self, text, expected):
        assert parse_rational(text) == expected

    def test_no_float_round_trip_artifacts(self):
        crn, _ = parse_crn("A -> B , 0.1")
        line = serialize_crn(crn).splitlines()[1]
        assert line == "A -> B , 1/10"
        assert "0.1000000" not in serialize_crn(crn)

    def test_format_rational(self):
        assert format_rational(Fraction(6)) == "6"
        assert format_rational(Fraction(1, 10)) == "1/10"


class TestSerializeCrn:
    def test_reaction_lines_are_sorted(self, crn):
        lines = serialize_crn(crn).splitlines()
        assert lines[0] == "species: A B C D E"
        assert lines[1:] == [
            "A -> E , 6",
            "A + B -> C , 2",
            "B -> D , 6",
            "C + D -> 2C + D , 5",
            "D + E -> D + 2E , 5",
        ]

    def test_round_trip_identity_on_sorted_networks(self, crn):
        text = serialize_crn(crn)
        again, _ = parse_crn(text)
        assert serialize_crn(again) == text
        assert again.species == crn.species
        assert set(again.reactions) == set(crn.reactions)

    def test_round_trip_preserves_inits(self, crn):
        v0 = InitialCondition.from_map(crn, {"A": Fraction(1, 2), "D": 2})
        text = serialize_crn(crn, inits=v0)
        crn2, v02 = parse_crn(text)
        assert v02.values == {crn2.by_name(sp.name): v for sp, v in v0.values.items()}

    def test_empty_network(self):
        text = serialize_crn(CRN([], []))
        assert text == "species:\n"
        crn, inits = parse_crn(text)
        assert crn.n_species == 0 and inits is None

    def test_reduced_metadata_comments_are_ignored_on_reparse(self, crn, h_o):
        from crnlump import forward_reduce

        reduced = forward_reduce(crn, h_o)
        text = serialize_crn(reduced.crn, reduced=reduced)
        assert text.splitlines()[0].startswith("# forward reduction")
        reparsed, _ = parse_crn(text)
        assert reparsed == reduced.crn


NET_FIXTURE = """\
begin parameters
    1 kp1 0.1
    2 km1 2e-2
    3 kcat 3
end parameters
begin species
    1 E(s) 7
    2 S(p1~U,p2~U) 10
    3 E(s!1).S(p1~U!1,p2~U) 0
end species
begin reactions
    1 1,2 3 kp1 #bind
    2 3 1,2 km1 #_reverse_bind
    3 3 1 0.5*kcat #lose_substrate
    4 2,2 3 1e-1 #nonsense_dimerize
end reactions
begin groups
    1 Etotal 1,3
end groups
"""


class TestNetImport:
    def test_species_names_are_verbatim_patterns(self):
        crn, _ = import_bngl_net(NET_FIXTURE)
        assert [sp.name for sp in crn.species] == [
            "E(s)",
            "S(p1~U,p2~U)",
            "E(s!1).S(p1~U!1,p2~U)",
        ]

    def test_parameter_rates_resolve_exactly(self):
        crn, _ = import_bngl_net(NET_FIXTURE)
        rates = [rxn.rate for rxn in crn.reactions]
        assert rates == [Fraction(1, 10), Fraction(1, 50), Fraction(3, 2), Fraction(1, 10)]

    def test_initial_concentrations_from_species_block(self):
        crn, inits = import_bngl_net(NET_FIXTURE)
        assert inits.get(crn.species[0]) == 7
        assert inits.get(crn.species[2]) == 0

    def test_index_repetition_builds_multiplicity(self):
        crn, _ = import_bngl_net(NET_FIXTURE)
        dimerize = crn.reactions[3]
        assert dimerize.reactants.get(crn.species[1]) == 2

    def test_import_is_deterministic(self):
        a, _ = import_bngl_net(NET_FIXTURE)
        b, _ = import_bngl_net(NET_FIXTURE)
        assert a == b

    def test_round_trips_through_native_format(self):
        crn, inits = import_bngl_net(NET_FIXTURE)
        text = serialize_crn(crn, inits=inits)
        again, inits2 = parse_crn(text)
        assert [sp.name for sp in again.species] == [sp.name for sp in crn.species]
        assert set(
            (r.reactants.name_key(), r.rate, r.products.name_key()) for r in again.reactions
        ) == set(
            (r.reactants.name_key(), r.rate, r.products.name_key()) for r in crn.reactions
        )

    def test_minimal_two_species_file(self):
        crn, inits = import_bngl_net(
            "begin species\n1 A() 1\n2 B() 0\nend species\n"
            "begin reactions\n1 1 2 5 #r\nend reactions\n"
        )
        assert crn.n_species == 2 and crn.n_reactions == 1
        assert crn.reactions[0].rate == 5

    def test_dangling_species_index(self):
        with pytest.raises(ParseError, match="dangling species index"):
            import_bngl_net(
                "begin species\n1 A() 1\nend species\n"
                "begin reactions\n1 1 9 2 #r\nend reactions\n"
            )

    def test_unsupported_rate_expression(self):
        with pytest.raises(ParseError, match="unsupported rate expression"):
            import_bngl_net(
                "begin species\n1 A() 1\n2 B() 0\nend species\n"
                "begin reactions\n1 1 2 kp1/2 #r\nend reactions\n"
            )

    def test_missing_blocks(self):
        with pytest.raises(ParseError, match="begin species"):
            import_bngl_net("begin parameters\n1 k 1\nend parameters\n")

    def test_non_sequential_species_index(self):
        with pytest.raises(ParseError, match="non-sequential"):
            import_bngl_net(
                "begin species\n2 A() 1\nend species\n"
                "begin reactions\nend reactions\n"
            )


class TestPartitionFiles:
    def test_block_line_with_implicit_rest(self, crn):
        p = parse_partition("C, E\n", crn)
        assert p == blocks_of(crn, "CE", "ABD")

    def test_empty_file_is_trivial(self, crn):
        assert parse_partition("# nothing\n\n", crn) == Partition.trivial(crn)

    def test_all_singletons(self, crn):
        text = "\n".join(name for name in "ABCDE")
        assert parse_partition(text, crn) == Partition.discrete(crn)

    def test_unknown_species(self, crn):
        with pytest.raises(PartitionError, match="unknown species Z"):
            parse_partition("Z\n", crn)

    def test_duplicate_species(self, crn):
        with pytest.raises(PartitionError, match="two blocks"):
            parse_partition("A, B\nB, C\n", crn)

    def test_names_with_commas_inside_parens(self):
        crn, _ = import_bngl_net(NET_FIXTURE)
        p = parse_partition("E(s), E(s!1).S(p1~U!1,p2~U)\n", crn)
        assert p.n_blocks == 2


class TestInitialConditionFiles:
    def test_parse_values(self, crn):
        v0 = parse_initial_conditions("A = 1\ninit: B = 2/3\n", crn)
        assert v0.get(crn.by_name("A")) == 1
        assert v0.get(crn.by_name("B")) == Fraction(2, 3)
        assert v0.get(crn.by_name("C")) == 0

    def test_unknown_species(self, crn):
        with pytest.raises(ParseError, match="unknown species"):
            parse_initial_conditions("Z = 1\n", crn)

    def test_negative_rejected(self, crn):
        with pytest.raises(ParseError, match="nonnegative"):
            parse_initial_conditions("A = -1\n", crn)


class TestPartitionFromInits:
    def test_equal_values_share_blocks(self, crn):
        v0 = InitialCondition.from_map(
            crn, {"A": 1, "B": 1, "C": 0, "D": 0, "E": 2}
        )
        assert partition_from_initial_conditions(v0) == blocks_of(
            crn, "AB", "CD", "E"
        )

    def test_all_equal_is_trivial(self, crn):
        v0 = InitialCondition.from_map(crn, {n: 3 for n in "ABCDE"})
        assert partition_from_initial_conditions(v0) == Partition.trivial(crn)

    def test_all_distinct_is_discrete(self, crn):
        v0 = InitialCondition.from_map(
            crn, {n: k for k, n in enumerate("ABCDE")}
        )
        assert partition_from_initial_conditions(v0) == Partition.discrete(crn)

    def test_exact_equality_not_float_equality(self, crn):
        v0 = InitialCondition.from_map(
            crn,
            {"A": Fraction(1, 3), "B": "0.3333333333333333", "C": 0, "D": 0, "E": 0},
        )
        p = partition_from_initial_conditions(v0)
        assert not p.same_block(crn.by_name("A"), crn.by_name("B"))
