"""
The classical operators of each family, written directly from their own
defining identities, and the cross-checks against the deformation-map
predicate.

``classify`` never goes through Omega: it evaluates the operator's identity
on the family's ingredients, so agreement with ``is_deformation_map`` on the
built Omega is an independent confirmation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dataclass_field

from src.engine.errors import InvalidExampleInput, ShapeError
from src.engine.leibniz import coboundary
from src.engine.linfty import CurvedLInfty, GradedElement, Provenance, derived_bracket, a_evaluator
from src.engine.multimap import MultiMap
from src.engine.prototwilled import OmegaStructure, is_deformation_map
from src.zoo.enumeration import candidate_map, check_budget
from src.zoo.examples import (
    ExampleKind,
    ZooInputs,
    build,
    inputs_from_omega,
    map_shape,
    matches_family,
    rep_of,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------
# Operator identities
# ---------------------------------------------------

def operator_residual(kind: ExampleKind, r: MultiMap, inputs: ZooInputs) -> MultiMap:
    """
    Left minus right side of the family's operator identity, as a map on pairs.

    Raises:
        ShapeError: If ``r`` does not have the family's map shape.
    """
    out_dim, in_dim = map_shape(kind, inputs)
    if r.arity != 1 or r.coeffs.shape != (out_dim, in_dim):
        raise ShapeError(f"{kind.value} maps have shape {(out_dim, in_dim)}, got {r.coeffs.shape}")
    b = inputs.algebra.bracket
    rr = [r, r]
    match kind:
        case ExampleKind.DIRECT_PRODUCT:
            # r[u,v]_h = [ru,rv]
            return inputs.other.bracket.post(r) - b.compose_all(rr)
        case ExampleKind.SEMIDIRECT | ExampleKind.R_MATRIX_HOST:
            # [ru,rv] = r(rho_L(ru,v) + rho_R(u,rv))
            rep = rep_of(kind, inputs)
            return b.compose_all(rr) - (rep.rho_left.compose(0, r) + rep.rho_right.compose(1, r)).post(r)
        case ExampleKind.DERIVATION_HOST:
            # r[x,y] = rho_L(x,ry) + rho_R(rx,y)
            rep = rep_of(kind, inputs)
            return b.post(r) - rep.rho_left.compose(1, r) - rep.rho_right.compose(0, r)
        case ExampleKind.WEIGHT1_SEMIDIRECT:
            # [ru,rv] = r(rho_L(ru,v) + rho_R(u,rv) + [u,v]_h)
            rep = rep_of(kind, inputs)
            inner = rep.rho_left.compose(0, r) + rep.rho_right.compose(1, r) + inputs.other.bracket
            return b.compose_all(rr) - inner.post(r)
        case ExampleKind.CROSSED_HOM_HOST:
            # r[x,y] = [rx,ry]_h + rho_L(x,ry) + rho_R(rx,y)
            rep = rep_of(kind, inputs)
            return b.post(r) - inputs.other.bracket.compose_all(rr) - rep.rho_left.compose(1, r) - rep.rho_right.compose(0, r)
        case ExampleKind.MODIFIED:
            # [rx,ry] = r([rx,y] + [x,ry]) - [x,y]
            return b.compose_all(rr) - (b.compose(0, r) + b.compose(1, r)).post(r) + b
        case ExampleKind.THETA_TWISTED:
            # [ru,rv] = r(rho_L(ru,v) + rho_R(u,rv) + theta(ru,rv))
            rep = rep_of(kind, inputs)
            inner = rep.rho_left.compose(0, r) + rep.rho_right.compose(1, r) + inputs.theta.compose_all(rr)
            return b.compose_all(rr) - inner.post(r)
        case ExampleKind.REYNOLDS:
            # [rx,ry] = r([rx,y] + [x,ry] - [rx,ry])
            return b.compose_all(rr) - (b.compose(0, r) + b.compose(1, r) - b.compose_all(rr)).post(r)
        case ExampleKind.HEMI_SEMIDIRECT:
            # [ru,rv] = r(rho(ru)v)
            return b.compose_all(rr) - rep_of(kind, inputs).rho_left.compose(0, r).post(r)
        case ExampleKind.MATCHED_PAIR:
            # [ru,rv] + psi_R(ru,v) + psi_L(u,rv) = r([u,v]_h + rho_L(ru,v) + rho_R(u,rv))
            rep, partner = rep_of(kind, inputs), inputs.partner
            lhs = b.compose_all(rr) + partner.rho_right.compose(0, r) + partner.rho_left.compose(1, r)
            inner = inputs.other.bracket + rep.rho_left.compose(0, r) + rep.rho_right.compose(1, r)
            return lhs - inner.post(r)
    raise InvalidExampleInput("kind", f"unknown example kind {kind!r}")


def classify(kind: ExampleKind, r: MultiMap, inputs: ZooInputs) -> bool:
    """True if ``r`` satisfies the family's operator identity."""
    return operator_residual(kind, r, inputs).is_zero()


# ---------------------------------------------------
# Equivalence checks
# ---------------------------------------------------

@dataclass
class Disagreement:
    r: MultiMap
    classified: bool
    deformation: bool


@dataclass
class EquivalenceReport:
    kind: ExampleKind
    tested: int
    agreements: int
    deformation_maps: int
    disagreements: list[Disagreement] = dataclass_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def equivalence_check(
    kind: ExampleKind,
    inputs: ZooInputs,
    maps: list[MultiMap] | None = None,
    budget: int | None = None,
    validate: bool = True,
) -> EquivalenceReport:
    """
    Compare ``classify`` with ``is_deformation_map`` on the given maps, or on
    every map over the prime field when ``maps`` is None.

    Raises:
        BudgetExceeded: If the exhaustive scan is larger than ``budget``.
        FieldMismatch: For an exhaustive scan over the rationals.
    """
    omega = build(kind, inputs, validate=validate)
    if maps is None:
        space = omega.space
        total = check_budget(space.field, space.dim_g, space.dim_h, budget)
        maps = [candidate_map(space.field, space.dim_g, space.dim_h, t) for t in range(total)]
    verdicts = [(r, classify(kind, r, inputs), is_deformation_map(r, omega).ok) for r in maps]

    disagreements = [Disagreement(r, c, d) for r, c, d in verdicts if c != d]
    report = EquivalenceReport(
        kind=kind,
        tested=len(verdicts),
        agreements=len(verdicts) - len(disagreements),
        deformation_maps=sum(1 for _, _, d in verdicts if d),
        disagreements=disagreements,
    )
    if disagreements:
        logger.error(f"[ZOO] {kind.value}: {len(disagreements)} disagreements between {kind.operator} and deformation maps")
    else:
        logger.info(f"[ZOO] {kind.value}: agreement {report.agreements}/{report.tested}")
    return report


# ---------------------------------------------------
# Specialized controlling algebras
# ---------------------------------------------------

# structure maps that survive for each family
FAMILY_TERMS: dict[ExampleKind, frozenset[int]] = {
    ExampleKind.DIRECT_PRODUCT: frozenset({1, 2}),
    ExampleKind.SEMIDIRECT: frozenset({2}),
    ExampleKind.DERIVATION_HOST: frozenset({1}),
    ExampleKind.WEIGHT1_SEMIDIRECT: frozenset({1, 2}),
    ExampleKind.CROSSED_HOM_HOST: frozenset({1, 2}),
    ExampleKind.MODIFIED: frozenset({0, 2}),
    ExampleKind.THETA_TWISTED: frozenset({2, 3}),
    ExampleKind.REYNOLDS: frozenset({2, 3}),
    ExampleKind.HEMI_SEMIDIRECT: frozenset({2}),
    ExampleKind.MATCHED_PAIR: frozenset({1, 2}),
    ExampleKind.R_MATRIX_HOST: frozenset({2}),
}


def specialized_algebra(kind: ExampleKind, omega: OmegaStructure) -> CurvedLInfty:
    """
    The controlling algebra of a family written with only its surviving terms.

    ``l1`` is the Loday-Pirashvili coboundary of ``(h, [,]_h)`` with
    coefficients in ``(g, psi_L, psi_R)``, signed ``(-1)^{n-1}`` on arity-n
    cochains; ``l0`` is eta; ``l2`` and ``l3`` are derived brackets of mu and
    theta.

    Raises:
        InvalidExampleInput: If ``omega`` is not of the family's form.
    """
    if not matches_family(kind, omega):
        raise InvalidExampleInput("family shape", f"Omega is not a {kind.value} structure")
    terms = FAMILY_TERMS[kind]
    space = omega.space

    def l1(f: MultiMap) -> MultiMap:
        n = f.arity
        d = coboundary(space.restrict_a(f), omega.bracket_h, omega.psi_left, omega.psi_right)
        lifted = space.lift_a(d)
        return lifted if n % 2 == 1 else -lifted

    candidates = {
        1: a_evaluator(space, l1),
        2: a_evaluator(space, lambda f, g: derived_bracket(space, omega.mu, f, g)),
        3: a_evaluator(space, lambda f, g, h: derived_bracket(space, omega.theta_lift, f, g, h)),
    }
    products = {k: fn for k, fn in candidates.items() if k in terms}
    l0 = GradedElement.a(space, omega.eta_lift) if 0 in terms else GradedElement.zero(space)
    logger.info(f"[ZOO] specialized algebra for {kind.value}: terms {sorted(terms)}")
    return CurvedLInfty(space, max(terms), l0, products, Provenance.SPECIALIZED_ZOO)


def zoo_inputs_for(kind: ExampleKind, omega: OmegaStructure) -> ZooInputs:
    """Ingredients of ``omega`` after checking it has the family's form."""
    if not matches_family(kind, omega):
        raise InvalidExampleInput("family shape", f"Omega is not a {kind.value} structure")
    return inputs_from_omega(kind, omega)
