import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complete, cycle, graphs
from starfactor.errors import ContractError, InputError
from starfactor.greedy import greedy_factor
from starfactor.packing import (
    PackingBuilder,
    Star,
    StarPacking,
    format_packing,
    parse_packing,
    verify,
)


def pk(*stars, ell=0):
    return StarPacking(tuple(Star(c, tuple(ls)) for c, ls in stars), ell)


def test_verify_k4_single_star(k4):
    rep = verify(k4, pk((0, [1, 2, 3])), 3, range(4))
    assert rep.ok and rep.min_star_size == 3 and rep.star_count == 1


def test_verify_c4_uncovered(c4):
    rep = verify(c4, pk((0, [1, 3])), 2, range(4))
    assert rep.lines() == ["uncovered: 2"]


def test_verify_reused_vertex(triangle):
    rep = verify(triangle, pk((0, [1]), (1, [2])), 1, range(3))
    assert not rep.ok
    assert any(v.kind == "reused" and v.vertex == 1 for v in rep.violations)


def test_verify_other_violations(c4):
    rep = verify(c4, pk((0, [2])), 1, ())
    assert [v.kind for v in rep.violations] == ["leaf-not-adjacent"]
    rep = verify(c4, pk((0, [1])), 2, ())
    assert [v.kind for v in rep.violations] == ["too-small"]
    rep = verify(c4, pk((0, [7])), 1, ())
    assert [v.kind for v in rep.violations] == ["range"]
    rep = verify(c4, pk((0, [])), 0, ())
    assert [v.kind for v in rep.violations] == ["too-small"]


def test_attach_leaf(triangle):
    p = pk((0, [1])).attach_leaf(triangle, 0, 2)
    assert p.stars == (Star(0, (1, 2)),)
    with pytest.raises(ContractError):
        p.attach_leaf(triangle, 0, 1)
    with pytest.raises(ContractError):
        pk((0, [1])).attach_leaf(cycle(4), 0, 2)


def test_prune_leaves():
    p = pk((0, [1, 2, 3]))
    assert p.prune_leaves({1, 2}, floor=2).stars == (Star(0, (1, 2)),)
    with pytest.raises(ContractError):
        pk((0, [1])).prune_leaves(set(), floor=1)
    assert p.prune_leaves({1, 2, 3}) == p


def test_builder_roundtrip():
    b = PackingBuilder()
    b.add_star(3, [1, 2])
    b.add_leaf(3, 0)
    assert 0 in b and b.is_center(3) and b.size(3) == 3
    with pytest.raises(ContractError):
        b.add_star(5, [2])
    assert b.remove_leaf(1) == 3
    assert b.build().stars == (Star(3, (0, 2)),)
    assert b.remove_star(3) == {0, 2}
    assert b.build().stars == ()


def test_format_and_parse():
    p = pk((4, [5]), (0, [1, 2]), ell=1)
    text = format_packing(p)
    assert text == "ell 1\ns 0 1 2\ns 4 5\n"
    assert parse_packing(text) == p.canonical()
    assert parse_packing("# c\nell 2\n\ns 0 1 2  # tail\n").stars == (Star(0, (1, 2)),)


@pytest.mark.parametrize("bad", ["", "s 0 1\n", "ell 1\ns 0 1 1\n", "ell 1\nx 0\n", "ell a\n",
                                 "ell 1\nell 2\n", "ell 1\ns\n", "ell 1\ns 0 -1\n"])
def test_parse_rejects(bad):
    with pytest.raises(InputError):
        parse_packing(bad)


@given(graphs(min_n=2, max_n=12))
def test_verify_is_pure_and_monotone(g):
    if g.min_degree() == 0:
        return
    p = greedy_factor(g)
    ell = p.min_size()
    a = verify(g, p, ell, g.vertices())
    assert a.ok and a == verify(g, p, ell, g.vertices())
    # a factor is valid for every smaller ell and every smaller cover set
    for smaller in range(0, ell):
        assert verify(g, p, smaller, g.vertices()).ok
    assert verify(g, p, ell, range(g.vertex_count // 2)).ok
    assert not verify(g, p, ell + 1, ()).ok


@given(st.lists(st.tuples(st.integers(0, 30), st.lists(st.integers(0, 30), max_size=5)), max_size=6),
       st.integers(0, 5))
def test_packing_text_roundtrip(stars, ell):
    p = StarPacking(tuple(Star(c, tuple(ls)) for c, ls in stars), ell)
    assert parse_packing(format_packing(p)) == p.canonical()


def test_factor_of_complete_graph():
    g = complete(6)
    assert verify(g, greedy_factor(g), 5, range(6)).ok
