import pytest

from flowinv.topology import (
    FinPoset,
    FinSpace,
    NotT0Error,
    PosetError,
    TopologyError,
    alexandroff_space,
    is_connected_poset,
    is_multigraph_like,
    separation_axioms,
    specialization_order,
)
from oracles import all_labeled_posets, chain_height_oracle, poset_from_upmasks, upsets_oracle


def sierpinski() -> FinSpace:
    return FinSpace(
        frozenset("ab"),
        frozenset({frozenset(), frozenset("b"), frozenset("ab")}),
    )


def discrete(points: str) -> FinSpace:
    from itertools import combinations

    pts = frozenset(points)
    opens = set()
    for size in range(len(points) + 1):
        for combo in combinations(sorted(pts), size):
            opens.add(frozenset(combo))
    return FinSpace(pts, frozenset(opens))


def indiscrete(points: str) -> FinSpace:
    pts = frozenset(points)
    return FinSpace(pts, frozenset({frozenset(), pts}))


def chain(n: int) -> FinPoset:
    return FinPoset.from_pairs(range(n), [(i, i + 1) for i in range(n - 1)])


def edge_poset() -> FinPoset:
    return FinPoset.from_pairs(["v1", "v2", "e"], [("v1", "e"), ("v2", "e")])


class TestFinPoset:
    def test_rejects_missing_reflexivity(self):
        with pytest.raises(PosetError, match="reflexive"):
            FinPoset(frozenset("ab"), frozenset({("a", "a")}))

    def test_rejects_cycle(self):
        with pytest.raises(PosetError, match="antisymmetric"):
            FinPoset.from_pairs("ab", [("a", "b"), ("b", "a")])

    def test_rejects_missing_transitivity(self):
        order = {("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "c")}
        with pytest.raises(PosetError, match="transitive"):
            FinPoset(frozenset("abc"), frozenset(order))

    def test_from_pairs_closes_transitively(self):
        p = chain(3)
        assert p.leq(0, 2)

    def test_heights_of_chain(self):
        p = chain(4)
        assert p.heights == {0: 0, 1: 1, 2: 2, 3: 3}
        assert p.height() == 3

    def test_empty_poset_height_undefined(self):
        p = FinPoset(frozenset(), frozenset())
        assert p.height() is None
        assert not is_connected_poset(p)

    def test_heights_match_chain_enumeration_oracle(self):
        for up in all_labeled_posets(4):
            p = poset_from_upmasks(up)
            for x in p.elements:
                assert p.heights[x] == chain_height_oracle(p, x)


class TestMultigraphLike:
    def test_two_chain_fails_with_witness(self):
        ok, witness = is_multigraph_like(chain(3))
        assert not ok and witness == 2

    def test_edge_poset_is_multigraph_like(self):
        ok, witness = is_multigraph_like(edge_poset())
        assert ok and witness is None

    def test_fat_downset_fails(self):
        p = FinPoset.from_pairs(
            "e123", [("1", "e"), ("2", "e"), ("3", "e")]
        )
        ok, witness = is_multigraph_like(p)
        assert not ok and witness == "e"


class TestConnected:
    def test_edge_poset_connected(self):
        assert is_connected_poset(edge_poset())

    def test_two_points_disconnected(self):
        assert not is_connected_poset(FinPoset.from_pairs("ab", []))

    def test_single_point_connected(self):
        assert is_connected_poset(FinPoset.from_pairs("a", []))


class TestSpaces:
    def test_topology_must_contain_empty_and_whole(self):
        with pytest.raises(TopologyError):
            FinSpace(frozenset("a"), frozenset({frozenset("a")}))

    def test_topology_union_closure_enforced(self):
        pts = frozenset("abc")
        opens = {frozenset(), pts, frozenset("a"), frozenset("b")}
        with pytest.raises(TopologyError, match="union"):
            FinSpace(pts, frozenset(opens))

    def test_sierpinski_specialization(self):
        p = specialization_order(sierpinski())
        assert p.leq("a", "b") and not p.leq("b", "a")

    def test_discrete_two_points_antichain(self):
        p = specialization_order(discrete("ab"))
        assert not p.leq("a", "b") and not p.leq("b", "a")

    def test_indiscrete_not_t0(self):
        with pytest.raises(NotT0Error):
            specialization_order(indiscrete("ab"))

    def test_separation_sierpinski(self):
        assert separation_axioms(sierpinski()) == (True, False, False)

    def test_separation_discrete(self):
        assert separation_axioms(discrete("abc")) == (True, True, True)

    def test_separation_indiscrete(self):
        assert separation_axioms(indiscrete("ab")) == (False, False, False)

    def test_separation_monotone_on_all_small_spaces(self):
        for up in all_labeled_posets(4):
            space = alexandroff_space(poset_from_upmasks(up))
            t0, t1, t2 = separation_axioms(space)
            assert (not t2 or t1) and (not t1 or t0)

    def test_t1_means_discrete_on_finite_spaces(self):
        for up in all_labeled_posets(4):
            space = alexandroff_space(poset_from_upmasks(up))
            t0, t1, t2 = separation_axioms(space)
            discrete_now = len(space.opens) == 2 ** len(space.points)
            assert t1 == t2 == discrete_now


class TestAlexandroff:
    def test_chain_opens(self):
        space = alexandroff_space(FinPoset.from_pairs("ab", [("a", "b")]))
        assert space.opens == frozenset(
            {frozenset(), frozenset("b"), frozenset("ab")}
        )

    def test_antichain_discrete(self):
        space = alexandroff_space(FinPoset.from_pairs("ab", []))
        assert len(space.opens) == 4

    def test_edge_poset_open_count_matches_upset_oracle(self):
        p = edge_poset()
        space = alexandroff_space(p)
        oracle = upsets_oracle(p)
        assert space.opens == frozenset(oracle)
        assert len(space.opens) == 5

    def test_downsets_closed(self):
        p = edge_poset()
        space = alexandroff_space(p)
        for x in p.elements:
            down = p.down(x)
            assert space.closure(down) == down

    def test_round_trip_small(self):
        for up in all_labeled_posets(4):
            p = poset_from_upmasks(up)
            assert specialization_order(alexandroff_space(p)) == p
