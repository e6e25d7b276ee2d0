import numpy as np
import pytest

from halg.catalog import catalog_cases, get_group, klein, list_groups, quaternion, resolve_subgroup, split_generators
from halg.errors import (
    GroupTooLarge,
    MissingIdentity,
    NoIdentity,
    NotAPermutation,
    NotAssociative,
    NotClosed,
    NotLatinSquare,
    UnknownElement,
    UnknownGroup,
)
from halg.group_core import (
    all_subgroups,
    build_group,
    coset_space,
    cycle_notation,
    generated_subgroup,
    group_from_permutations,
    parse_cycles,
    subgroup,
)

# smallest non-associative loop: Latin square with identity 0, (1·1)·2 != 1·(1·2)
LOOP5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class TestBuildGroup:
    def test_cyclic_table(self):
        G = build_group([[0, 1, 2], [1, 2, 0], [2, 0, 1]], name="Z3")
        assert G.order == 3
        assert G.identity == 0
        assert G.inv(1) == 2
        assert G.is_abelian()

    def test_repeated_row_entry(self):
        with pytest.raises(NotLatinSquare, match="row 1"):
            build_group([[0, 1], [1, 1]])

    def test_entry_out_of_range(self):
        with pytest.raises(NotLatinSquare, match="outside"):
            build_group([[0, 1], [1, 2]])

    def test_non_square(self):
        with pytest.raises(NotLatinSquare):
            build_group([[0, 1, 2], [1, 2, 0]])

    def test_no_identity(self):
        # a·b = −a − b (mod 3) is a Latin square without a neutral element
        with pytest.raises(NoIdentity):
            build_group([[0, 2, 1], [2, 1, 0], [1, 0, 2]])

    def test_not_associative_names_triple(self):
        with pytest.raises(NotAssociative, match=r"\(1·1\)·2"):
            build_group(LOOP5)


class TestPermutations:
    def test_cycle_notation(self):
        assert cycle_notation([0, 1, 2]) == "e"
        assert cycle_notation([1, 0, 2]) == "(0 1)"
        assert cycle_notation([1, 2, 0]) == "(0 1 2)"
        assert cycle_notation([1, 0, 3, 2]) == "(0 1)(2 3)"

    def test_parse_forms(self):
        assert parse_cycles("(0 1 2)", 3) == (1, 2, 0)
        assert parse_cycles("(0,1,2)", 3) == (1, 2, 0)
        assert parse_cycles("(012)", 3) == (1, 2, 0)
        assert parse_cycles("e", 3) == (0, 1, 2)

    def test_products_compose_right_to_left(self):
        # apply (1 2) first, then (0 1)
        assert parse_cycles("(0 1)(1 2)", 3) == (1, 2, 0)

    def test_parse_rejects_bad_points(self):
        with pytest.raises(UnknownElement):
            parse_cycles("(0 5)", 3)
        with pytest.raises(UnknownElement):
            parse_cycles("0 1", 3)

    def test_s3_closure(self, s3):
        assert s3.order == 6
        assert s3.identity == 0
        assert s3.names[0] == "e"
        assert not s3.is_abelian()
        a, b = s3.index("(0 1)"), s3.index("(1 2)")
        assert s3.names[s3.mul(a, b)] == "(0 1 2)"

    def test_index_accepts_spacing_and_commas(self, s3):
        assert s3.index(" (0  1) ") == s3.index("(0,1)") == s3.index("(01)")
        with pytest.raises(UnknownElement):
            s3.index("(0 3)")

    def test_bad_generator(self):
        with pytest.raises(NotAPermutation):
            group_from_permutations(3, [[0, 0, 1]])

    def test_closure_bound(self):
        with pytest.raises(GroupTooLarge):
            group_from_permutations(5, [[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]], bound=100)


class TestSubgroups:
    def test_explicit_subgroup_checks(self, s3):
        a = s3.index("(0 1)")
        b = s3.index("(1 2)")
        assert subgroup(s3, [0, a]).size == 2
        with pytest.raises(MissingIdentity):
            subgroup(s3, [a])
        with pytest.raises(NotClosed):
            subgroup(s3, [0, a, b])

    def test_generated(self, s3):
        H = generated_subgroup(s3, [s3.index("(0 1 2)")])
        assert H.size == 3
        assert H.is_normal()
        K = generated_subgroup(s3, [s3.index("(0 1)")])
        assert K.size == 2
        assert not K.is_normal()
        assert generated_subgroup(s3, []).size == 1

    @pytest.mark.parametrize("name,count,normal", [
        ("S3", 6, 3),
        ("Z12", 6, 6),
        ("Q8", 6, 6),
        ("D4", 10, 6),
        ("S4", 30, 4),
    ])
    def test_all_subgroups(self, name, count, normal):
        subs = all_subgroups(get_group(name))
        assert len(subs) == count
        assert sum(H.is_normal() for H in subs) == normal
        assert [H.size for H in subs] == sorted(H.size for H in subs)

    def test_subgroup_bound(self):
        with pytest.raises(GroupTooLarge):
            all_subgroups(get_group("S4"), bound=10)


class TestCosets:
    def test_s3_transposition_cosets(self, s3, s3_transposition):
        space = s3_transposition
        assert space.count == 3
        assert space.h_size == 2
        assert [space.coset_name(c) for c in range(3)] == ["e", "(1 2)", "(0 1 2)"]
        assert space.coset_index("(0 2 1)") == 1
        assert space.coset_index("(0 2)") == 2

    def test_action_is_representative_independent(self, s3_transposition, rng):
        other = s3_transposition.random_representatives(rng)
        assert np.array_equal(other.action_table(), s3_transposition.action_table())
        assert other.compatible(s3_transposition)

    def test_action_laws(self, s3, s3_transposition):
        space = s3_transposition
        for x in range(s3.order):
            for y in range(s3.order):
                for c in range(space.count):
                    assert space.act(x, space.act(y, c)) == space.act(s3.mul(x, y), c)

    def test_bad_representatives(self, s3_transposition):
        with pytest.raises(UnknownElement):
            s3_transposition.with_representatives([0, 0, 3])

    def test_inverse_coset_normal(self, s3_rotations, s3):
        c = s3_rotations.coset_index("(0 1)")
        assert s3_rotations.inverse_coset(c) == c

    def test_trivial_subgroup(self):
        G = get_group("Z5")
        space = coset_space(generated_subgroup(G, []))
        assert space.count == 5
        assert np.array_equal(space.coset_of, np.arange(5))


class TestCatalog:
    def test_lookup_is_cached_and_case_insensitive(self):
        assert get_group("z6") is get_group("Z6")
        with pytest.raises(UnknownGroup):
            get_group("X9")

    def test_quaternion_relations(self):
        Q = quaternion()
        i, j, k, minus = Q.index("i"), Q.index("j"), Q.index("k"), Q.index("-1")
        assert Q.mul(i, j) == k
        assert Q.mul(j, i) == Q.index("-k")
        assert Q.mul(i, i) == minus
        assert Q.product(i, j, k) == minus

    def test_klein(self):
        V = klein()
        assert V.name == "V4"
        assert V.order == 4 and V.is_abelian()
        assert all(V.mul(g, g) == V.identity for g in range(4))

    def test_families(self):
        assert get_group("D4").order == 8
        assert get_group("A4").order == 12
        assert get_group("S4").order == 24
        assert {g["name"] for g in list_groups()} >= {"Z1", "S3", "Q8", "A4"}

    def test_split_generators(self):
        assert split_generators("(0 1); (1 2)") == ["(0 1)", "(1 2)"]
        assert split_generators("(0,1),(1,2)") == ["(0,1)", "(1,2)"]
        assert split_generators("") == []

    def test_catalog_cases(self):
        cases = catalog_cases()
        assert len(cases) == 54
        normal = [resolve_subgroup(get_group(c["group"]), c["generators"]).is_normal() for c in cases]
        assert normal.count(False) == 10
