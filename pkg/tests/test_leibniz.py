from __future__ import annotations

import itertools

import pytest

from src.engine.errors import ArityCapExceeded, ShapeError
from src.engine.exactlin import rank
from src.engine.leibniz import (
    LeibnizAlgebra,
    Representation,
    adjoint_rep,
    check_leibniz,
    check_lie,
    check_representation,
    coadjoint_rep,
    coboundary_matrix,
    cohomology_dimensions,
    is_two_cocycle,
    lp_coboundary,
    trivial_rep,
)
from src.engine.multimap import MultiMap
from src.zoo.examples import unit_algebra
from tests.helpers import random_map


# -----------------------
# Leibniz identity
# -----------------------
def test_unit_bracket_is_not_leibniz(gf5):
    report = check_leibniz(unit_algebra(gf5).bracket)

    assert report.ok is False
    assert report.mc_zero is False
    (violation,) = report.violations
    assert violation.inputs == (0, 0, 0)
    # e - e - e
    assert [gf5.format(x) for x in violation.residual] == ["4"]


def test_dim2_algebra_is_leibniz_but_not_lie(a2):
    assert check_leibniz(a2.bracket).ok
    assert not check_lie(a2.bracket)


def test_abelian_algebra_is_lie(gf5):
    assert check_lie(LeibnizAlgebra.abelian(gf5, 3).bracket)


def test_bracket_must_be_square_arity_two(gf5):
    with pytest.raises(ShapeError, match="square arity-2"):
        LeibnizAlgebra(MultiMap.zeros(gf5, 2, (2,)))


# -----------------------
# Representations
# -----------------------
def test_coadjoint_actions_of_dim2_algebra(a2, gf5):
    rep = coadjoint_rep(a2)
    # coad_L(e1, e2*) = -e1*  and  coad_R(e2*, e1) = 2 e1*
    assert rep.rho_left.coeffs[0, 0, 1] == gf5.convert(-1)
    assert rep.rho_right.coeffs[0, 1, 0] == gf5.convert(2)
    assert check_representation(a2, rep.rho_left, rep.rho_right).ok


def test_standard_representations_of_every_leibniz_algebra_over_gf2(gf2):
    indices = list(itertools.product(range(2), repeat=3))
    leibniz = 0
    for digits in itertools.product(range(2), repeat=len(indices)):
        bracket = MultiMap.from_entries(gf2, 2, (2, 2), {idx: 1 for idx, d in zip(indices, digits) if d})
        if not check_leibniz(bracket).ok:
            continue
        leibniz += 1
        algebra = LeibnizAlgebra(bracket)
        for rep in (adjoint_rep(algebra), coadjoint_rep(algebra), trivial_rep(algebra, 2)):
            assert check_representation(algebra, rep.rho_left, rep.rho_right).ok
    assert 1 < leibniz < 2**8


def test_broken_right_action_names_the_identity(gf5):
    algebra = LeibnizAlgebra.abelian(gf5, 1)
    rho_left = MultiMap.zeros(gf5, 1, (1, 1))
    rho_right = MultiMap.from_entries(gf5, 1, (1, 1), {(0, 0, 0): 1})

    report = check_representation(algebra, rho_left, rho_right)

    assert not report.ok
    assert report.identities["right-right"]
    assert not report.identities["left-left"]
    assert not report.identities["left-right"]


def test_representation_shape_is_checked(a2, gf5):
    with pytest.raises(ShapeError):
        Representation(a2, MultiMap.zeros(gf5, 1, (2, 1)), MultiMap.zeros(gf5, 1, (2, 1)))


# -----------------------
# Loday-Pirashvili complex
# -----------------------
def test_degree_zero_coboundary_is_minus_the_right_action(a2, gf5):
    v = MultiMap.from_entries(gf5, 2, (), {(0,): 1})
    d = lp_coboundary(v, a2, adjoint_rep(a2))
    # -[e1, e1] = -e2
    assert d.coeffs[1, 0] == gf5.convert(-1)
    assert d.coeffs[0, 0] == gf5.zero
    assert all(x == gf5.zero for x in d.coeffs[:, 1])


@pytest.mark.parametrize("rep_name", ["adjoint", "coadjoint", "trivial"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_coboundary_squares_to_zero(a2, gf5, rng, rep_name, n):
    rep = {"adjoint": adjoint_rep, "coadjoint": coadjoint_rep, "trivial": lambda a: trivial_rep(a, 2)}[rep_name](a2)
    for _ in range(5):
        f = random_map(rng, gf5, rep.carrier_dim, (a2.dim,) * n)
        assert lp_coboundary(lp_coboundary(f, a2, rep), a2, rep).is_zero()


def test_coboundary_squares_to_zero_on_a_three_dim_algebra(gf5, rng):
    # [e1,e1] = e3, [e2,e1] = e3: Leibniz with a non-trivial centre
    algebra = LeibnizAlgebra.from_structure_constants(gf5, 3, {(2, 0, 0): 1, (2, 1, 0): 1})
    assert check_leibniz(algebra.bracket).ok
    rep = adjoint_rep(algebra)
    for n in (1, 2):
        f = random_map(rng, gf5, 3, (3,) * n)
        assert lp_coboundary(lp_coboundary(f, algebra, rep), algebra, rep).is_zero()


@pytest.mark.parametrize("dim_g, dim_v", [(1, 1), (2, 1), (1, 2)])
def test_abelian_cohomology_is_all_cochains(gf5, dim_g, dim_v):
    algebra = LeibnizAlgebra.abelian(gf5, dim_g)
    rows = cohomology_dimensions(algebra, trivial_rep(algebra, dim_v), 3)
    assert [row.cohomology for row in rows] == [dim_v * dim_g**n for n in range(4)]


def test_cohomology_agrees_with_the_rank_oracle(a2):
    rep = adjoint_rep(a2)
    rows = cohomology_dimensions(a2, rep, 2)
    ranks = [rank(coboundary_matrix(a2, rep, n)) for n in range(3)]

    for row in rows:
        n = row.degree
        assert row.cochains == 2 * 2**n
        assert row.cocycles == row.cochains - ranks[n]
        assert row.coboundaries == (ranks[n - 1] if n else 0)
        assert row.cohomology == row.cocycles - row.coboundaries
    # invariants of the adjoint action are the multiples of e2
    assert rows[0].cohomology == 1


def test_cohomology_degree_is_bounded_by_the_arity_cap(a2, monkeypatch):
    with pytest.raises(ShapeError):
        cohomology_dimensions(a2, adjoint_rep(a2), -1)
    monkeypatch.setenv("LEIBNIZ_ARITY_CAP", "3")
    with pytest.raises(ArityCapExceeded):
        cohomology_dimensions(a2, adjoint_rep(a2), 3)


def test_two_cocycles_for_the_trivial_representation(a2, gf5):
    rep = trivial_rep(a2, 1)
    closed = MultiMap.from_entries(gf5, 1, (2, 2), {(0, 0, 0): 1})
    not_closed = MultiMap.from_entries(gf5, 1, (2, 2), {(0, 1, 0): 1})
    assert is_two_cocycle(closed, a2, rep)
    assert not is_two_cocycle(not_closed, a2, rep)
