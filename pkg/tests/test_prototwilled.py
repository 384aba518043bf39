from __future__ import annotations

import pytest

from src.engine.errors import CharacteristicTooSmall, NotADeformationMap, ShapeError
from src.engine.leibniz import adjoint_rep, check_leibniz, check_representation, trivial_rep
from src.engine.multimap import MultiMap, SplitSpace
from src.engine.prototwilled import (
    assemble,
    check_proto_twilled,
    deformation_coboundary,
    deformation_cohomology,
    deformation_residual,
    induced_bracket,
    induced_representation,
    is_deformation_map,
    psi_left_r,
    psi_right_r,
    quasi_twilled_blocks,
    split,
    twist_omega,
    zero_omega,
)
from src.zoo.enumeration import candidate_map
from src.zoo.examples import ExampleKind, ZooInputs, build, dim2_algebra, unit_algebra
from tests.helpers import column, random_map


@pytest.fixture
def modified(a2):
    """``a2 (+) a2`` with eta = rho = bracket: deformation maps are modified Rota-Baxter operators."""
    return build(ExampleKind.MODIFIED, ZooInputs(a2))


@pytest.fixture
def reynolds(a2):
    return build(ExampleKind.REYNOLDS, ZooInputs(a2))


def _matrix(field, rows):
    return MultiMap.from_matrix(field, rows)


# -----------------------
# Omega and the proto-twilled check
# -----------------------
def test_split_recovers_the_components(modified, reynolds):
    for omega in (modified, reynolds):
        assert split(omega.space, omega.omega) == omega


def test_assemble_rejects_unknown_and_misshapen_components(gf5):
    space = SplitSpace(gf5, 2, 1)
    with pytest.raises(ShapeError, match="unknown Omega components"):
        assemble(space, bracket_k=MultiMap.zeros(gf5, 2, (2, 2)))
    with pytest.raises(ShapeError, match="theta has shape"):
        assemble(space, theta=MultiMap.zeros(gf5, 2, (2, 2)))


def test_semidirect_is_twilled(semidirect):
    report = check_proto_twilled(semidirect)
    assert report.ok and report.mc_zero
    assert report.quasi_twilled and report.twilled
    assert all(e.ok for e in report.equations)


def test_modified_host_is_proto_twilled_but_not_quasi_twilled(modified):
    report = check_proto_twilled(modified)
    assert report.ok
    assert not report.quasi_twilled
    assert all(e.ok for e in report.equations)


def test_non_leibniz_omega_breaks_a_bidegree_equation(gf5):
    unit = unit_algebra(gf5)
    omega = build(ExampleKind.SEMIDIRECT, ZooInputs(unit, rep=trivial_rep(unit, 1)), validate=False)
    report = check_proto_twilled(omega)
    assert not report.ok
    assert not all(e.ok for e in report.equations)


def test_zero_omega_is_trivially_twilled(gf5):
    report = check_proto_twilled(zero_omega(SplitSpace(gf5, 1, 1)))
    assert report.ok and report.twilled


# -----------------------
# Deformation maps
# -----------------------
def test_semidirect_deformation_maps_are_the_maps_into_the_centre(semidirect, gf5):
    found = []
    for t in range(25):
        r = candidate_map(gf5, 2, 1, t)
        report = is_deformation_map(r, semidirect)
        assert report.agree
        if report.ok:
            found.append(r)
    assert len(found) == 5
    assert all(r.coeffs[0, 0] == gf5.zero for r in found)


@pytest.mark.parametrize("name, rows, ok", [
    ("identity", [[1, 0], [0, 1]], True),
    ("zero", [[0, 0], [0, 0]], False),
    ("bad", [[1, 0], [0, 0]], False),
])
def test_modified_host_verdicts(modified, gf5, name, rows, ok):
    report = is_deformation_map(_matrix(gf5, rows), modified)
    assert report.ok is ok
    assert report.graph_closed is ok


def test_zero_map_residual_is_eta(modified, gf5):
    residual = deformation_residual(_matrix(gf5, [[0, 0], [0, 0]]), modified)
    assert residual == modified.eta


@pytest.mark.parametrize("dim_g, dim_h", [(2, 0), (0, 2)])
def test_degenerate_splits_have_the_empty_deformation_map(a2, gf5, dim_g, dim_h):
    space = SplitSpace(gf5, dim_g, dim_h)
    omega = assemble(space, bracket_g=a2.bracket) if dim_g else assemble(space, bracket_h=a2.bracket)
    empty = MultiMap.zeros(gf5, dim_g, (dim_h,))

    report = is_deformation_map(empty, omega)

    assert report.ok and report.graph_closed
    assert check_proto_twilled(omega).ok


def test_wrong_shape_map_is_rejected(semidirect, gf5):
    with pytest.raises(ShapeError, match="r has shape"):
        is_deformation_map(_matrix(gf5, [[1, 0], [0, 1]]), semidirect)


# -----------------------
# Induced structures
# -----------------------
def test_induced_bracket_of_the_modified_identity(modified, a2, gf5):
    identity = _matrix(gf5, [[1, 0], [0, 1]])
    algebra = induced_bracket(identity, modified)
    rep = induced_representation(identity, modified)

    assert algebra.bracket == a2.bracket.scale(2)
    assert check_leibniz(algebra.bracket).ok
    assert check_representation(algebra, rep.rho_left, rep.rho_right).ok


def test_induced_structures_need_a_deformation_map(modified, gf5):
    with pytest.raises(NotADeformationMap):
        induced_bracket(_matrix(gf5, [[0, 0], [0, 0]]), modified)
    with pytest.raises(NotADeformationMap):
        deformation_cohomology(_matrix(gf5, [[1, 0], [0, 0]]), modified, 1)


def test_semidirect_deformation_cohomology_is_trivial_coefficients(semidirect, gf5):
    # r(f) = e2 is central, so h_r is abelian and acts trivially on g
    r = column(gf5, 0, 1)
    assert psi_left_r(r, semidirect).is_zero()
    assert psi_right_r(r, semidirect).is_zero()
    rows = deformation_cohomology(r, semidirect, 2)
    assert [row.cohomology for row in rows] == [2, 2, 2]


def test_deformation_coboundary_squares_to_zero(modified, gf5, rng):
    identity = _matrix(gf5, [[1, 0], [0, 1]])
    for n in (0, 1, 2):
        f = random_map(rng, gf5, 2, (2,) * n)
        once = deformation_coboundary(f, identity, modified)
        assert deformation_coboundary(once, identity, modified).is_zero()


# -----------------------
# Twisting
# -----------------------
def test_twisted_eta_is_the_deformation_residual(semidirect, gf5):
    for t in range(25):
        r = candidate_map(gf5, 2, 1, t)
        twisted = twist_omega(r, semidirect)
        assert twisted.eta == deformation_residual(r, semidirect)
        assert twisted.eta.is_zero() == is_deformation_map(r, semidirect).ok


@pytest.mark.parametrize("kind, rows", [
    (ExampleKind.MODIFIED, [[1, 0], [0, 1]]),
    (ExampleKind.REYNOLDS, [[1, 0], [0, 1]]),
    (ExampleKind.WEIGHT1_SEMIDIRECT, [[-1, 0], [0, -1]]),
])
def test_block_formulas_match_the_generic_twist(kind, rows, a2, gf5):
    inputs = ZooInputs(a2, rep=adjoint_rep(a2), other=a2)
    omega = build(kind, inputs)
    r = _matrix(gf5, rows)
    assert is_deformation_map(r, omega).ok

    twisted = twist_omega(r, omega)
    assert twisted.eta.is_zero()
    assert quasi_twilled_blocks(r, omega) == twisted
    assert check_proto_twilled(twisted).ok


def test_theta_twisted_blocks_match_the_generic_twist(a2, gf5):
    theta = MultiMap.from_entries(gf5, 1, (2, 2), {(0, 0, 0): 1})
    omega = build(ExampleKind.THETA_TWISTED, ZooInputs(a2, rep=trivial_rep(a2, 1), theta=theta))
    r = column(gf5, 0, 1)
    assert is_deformation_map(r, omega).ok
    assert quasi_twilled_blocks(r, omega) == twist_omega(r, omega)


def test_twisting_needs_characteristic_above_three(gf3):
    a = dim2_algebra(gf3)
    omega = build(ExampleKind.SEMIDIRECT, ZooInputs(a, rep=trivial_rep(a, 1)))
    with pytest.raises(CharacteristicTooSmall, match="characteristic 0 or > 3"):
        twist_omega(column(gf3, 0, 1), omega)
