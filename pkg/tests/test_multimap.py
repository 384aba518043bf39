from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from src.engine.errors import ArityCapExceeded, ShapeError, SpaceMismatch
from src.engine.exactlin import Field
from src.engine.leibniz import check_leibniz, leibniz_residual
from src.engine.multimap import (
    Bidegree,
    MultiMap,
    SplitSpace,
    Subalgebra,
    balavoine_bracket,
    nested_bracket,
    permutation_sign,
    shuffles,
)
from tests.helpers import random_map, random_square


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _vector(rng, field, dim):
    return [field.convert(rng.randint(-2, 2)) for _ in range(dim)]


# -----------------------
# Evaluation and composition
# -----------------------
def test_eval_of_structure_constants(a2, gf5):
    assert list(a2.bracket.eval([1, 0], [1, 0])) == [gf5.zero, gf5.one]
    assert list(a2.bracket.eval([0, 1], [1, 0])) == [gf5.zero, gf5.zero]


def test_compose_post_and_permute_agree_with_evaluation(rng, gf5):
    f = random_map(rng, gf5, 2, (3, 2, 2))
    r = random_map(rng, gf5, 3, (2,))
    outer = random_map(rng, gf5, 1, (2,))
    for _ in range(10):
        x, y, z = _vector(rng, gf5, 2), _vector(rng, gf5, 2), _vector(rng, gf5, 2)
        assert list(f.compose(0, r).eval(x, y, z)) == list(f.eval(r.eval(x), y, z))
        assert list(f.post(outer).eval(r.eval(x), y, z)) == list(outer.eval(f.eval(r.eval(x), y, z)))

    g = random_map(rng, gf5, 2, (2, 2, 2))
    swapped = g.permute_inputs([1, 0, 2])
    for x, y, z in itertools.product(range(2), repeat=3):
        e = [[1 if i == k else 0 for i in range(2)] for k in (x, y, z)]
        assert list(swapped.eval(e[0], e[1], e[2])) == list(g.eval(e[1], e[0], e[2]))


def test_compose_inserts_inner_inputs_at_the_slot(rng, gf5):
    f = random_map(rng, gf5, 2, (2, 2))
    inner = random_map(rng, gf5, 2, (2, 2))
    composed = f.compose(1, inner)
    for _ in range(5):
        x, y, z = (_vector(rng, gf5, 2) for _ in range(3))
        assert list(composed.eval(x, y, z)) == list(f.eval(x, inner.eval(y, z)))


def test_compose_rejects_a_dimension_mismatch(gf5):
    f = MultiMap.zeros(gf5, 2, (2, 2))
    with pytest.raises(ShapeError, match="does not fit slot 0"):
        f.compose(0, MultiMap.zeros(gf5, 3, (1,)))


def test_arity_cap_comes_from_settings(monkeypatch, gf5):
    monkeypatch.setenv("LEIBNIZ_ARITY_CAP", "2")
    with pytest.raises(ArityCapExceeded, match="exceeds the cap 2"):
        MultiMap.zeros(gf5, 2, (2, 2, 2))


def test_from_nested_reports_the_first_bad_row(gf5):
    with pytest.raises(ShapeError) as info:
        MultiMap.from_nested(gf5, [[["1", "0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]], 2, (2, 2), path="maps.bracket_g")
    assert info.value.path == "maps.bracket_g[0][0]"


def test_maps_over_different_fields_do_not_add(gf5):
    with pytest.raises(SpaceMismatch):
        MultiMap.zeros(gf5, 1, (1,)) + MultiMap.zeros(Field.prime(3), 1, (1,))


# -----------------------
# Shuffles
# -----------------------
@pytest.mark.parametrize("p, q", [(0, 3), (1, 2), (2, 2), (3, 1)])
def test_shuffle_count_and_signs(p, q):
    listed = shuffles(p, q)
    assert len(listed) == comb(p + q, p)
    for first, second, sign in listed:
        assert list(first) == sorted(first) and list(second) == sorted(second)
        assert sign == permutation_sign(first + second)


# -----------------------
# Balavoine bracket
# -----------------------
@pytest.mark.parametrize("dims, samples", [((1, 1), 200), ((2, 1), 40), ((1, 2), 40)])
def test_graded_antisymmetry_and_jacobi_on_random_triples(rng, gf5, dims, samples):
    space = SplitSpace(gf5, *dims)
    checked = 0
    while checked < samples:
        a, b, c = (rng.randint(1, 3) for _ in range(3))
        if a + b + c - 2 > 6:
            continue
        f, g, h = random_square(rng, space, a), random_square(rng, space, b), random_square(rng, space, c)
        df, dg, dh = a - 1, b - 1, c - 1

        fg = balavoine_bracket(f, g)
        assert fg == -balavoine_bracket(g, f).scale(_sign(df * dg))

        lhs = balavoine_bracket(f, balavoine_bracket(g, h))
        rhs = balavoine_bracket(fg, h) + balavoine_bracket(g, balavoine_bracket(f, h)).scale(_sign(df * dg))
        assert lhs == rhs
        checked += 1


def test_square_of_a_bracket_is_minus_twice_the_leibniz_residual(rng, gf5):
    for _ in range(20):
        b = random_map(rng, gf5, 2, (2, 2))
        assert balavoine_bracket(b, b) == leibniz_residual(b).scale(-2)


def test_leibniz_agrees_with_maurer_cartan_over_gf3(rng, gf3):
    # every bracket on a line
    for c in gf3.elements():
        b = MultiMap.from_entries(gf3, 1, (1, 1), {(0, 0, 0): c})
        report = check_leibniz(b)
        assert report.ok == report.mc_zero
    for _ in range(500):
        dim = rng.randint(1, 2)
        b = random_map(rng, gf3, dim, (dim, dim), span=1)
        report = check_leibniz(b)
        assert report.ok == report.mc_zero == balavoine_bracket(b, b).is_zero()


def test_nested_bracket_folds_from_the_left(rng, gf5):
    space = SplitSpace(gf5, 1, 1)
    x, y, z = (random_square(rng, space, 1) for _ in range(3))
    assert nested_bracket(x, y, z) == balavoine_bracket(balavoine_bracket(x, y), z)
    assert space.nested(x, y, z) == nested_bracket(x, y, z)


# -----------------------
# Bidegrees
# -----------------------
def _pure(rng, space, bd):
    return space.component(random_square(rng, space, bd.arity), bd)


def _bidegrees(max_arity):
    return [Bidegree(k, a - 1 - k) for a in range(1, max_arity + 1) for k in range(a, -2, -1)]


def test_bidegree_additivity_and_subalgebra_closure(rng, gf5):
    space = SplitSpace(gf5, 1, 2)
    candidates = _bidegrees(3)
    for _ in range(200):
        bf, bg = rng.choice(candidates), rng.choice(candidates)
        if bf.arity + bg.arity - 1 > 4:
            continue
        f, g = _pure(rng, space, bf), _pure(rng, space, bg)
        out = space.bracket(f, g)
        k, l = bf.k + bg.k, bf.l + bg.l
        if k < -1 or l < -1:
            assert out.is_zero()
            continue
        assert space.has_bidegree(out, Bidegree(k, l))
        for sub in (Subalgebra.A, Subalgebra.M, Subalgebra.Q, Subalgebra.R):
            if sub.admits(bf) and sub.admits(bg):
                assert space.contains(out, sub)


def test_a_is_abelian(rng, gf5):
    space = SplitSpace(gf5, 2, 1)
    f = _pure(rng, space, Bidegree(-1, 1))
    g = _pure(rng, space, Bidegree(-1, 2))
    assert space.bracket(f, g).is_zero()


def test_bidegree_decomposition_sums_back(rng, gf5):
    space = SplitSpace(gf5, 2, 1)
    f = random_square(rng, space, 2)
    total = MultiMap.zeros(gf5, space.dim, (space.dim,) * 2)
    for _, c in space.bidegree_decompose(f):
        total = total + c
    assert total == f
    assert space.bidegree_of(f) is None


@settings(max_examples=25, deadline=None)
@given(dim_g=st.integers(1, 2), dim_h=st.integers(1, 2), seed=st.integers(0, 10**6))
def test_lift_has_the_pattern_bidegree(dim_g, dim_h, seed):
    import random

    rng = random.Random(seed)
    field = Field.prime(5)
    space = SplitSpace(field, dim_g, dim_h)
    block = random_map(rng, field, dim_h, (dim_g, dim_h))
    lifted = space.lift(block, ("g", "h"), "h")

    assert space.has_bidegree(lifted, Bidegree(1, 0))
    assert space.restrict(lifted, ("g", "h"), "h") == block
    assert space.restrict(lifted, ("h", "g"), "h").is_zero()


def test_graph_basis_and_linear_lift(gf5):
    space = SplitSpace(gf5, 2, 1)
    r = MultiMap.from_matrix(gf5, [[2], [3]])
    (w,) = space.graph_basis(r)
    assert [gf5.format(x) for x in w] == ["2", "3", "1"]
    assert space.has_bidegree(space.lift_linear(r), Bidegree(-1, 1))
    assert space.contains(space.lift_linear(r), Subalgebra.A)


def test_project_onto_b_prime_keeps_only_l_zero(semidirect, gf5):
    space = semidirect.space
    projected = space.project(semidirect.omega, Subalgebra.B_PRIME)
    assert projected == semidirect.mu
