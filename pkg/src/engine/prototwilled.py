"""
Proto-twilled structures and deformation maps.

A Leibniz bracket Omega on ``G = g (+) h`` splits into eight component maps:

    [(x,u),(y,v)] = ([x,y]_g + psi_R(x,v) + psi_L(u,y) + eta(u,v),
                     [u,v]_h + rho_L(x,v) + rho_R(u,y) + theta(x,y))

and into four bidegree pieces ``theta~ (2|-1)``, ``mu (1|0)``, ``nu (0|1)``
and ``eta~ (-1|2)``. ``OmegaStructure`` keeps the components and caches
the pieces.

A linear map ``r: h -> g`` is a deformation map when its graph is a
subalgebra of G, i.e. when

    [ru,rv] + psi_R(ru,v) + psi_L(u,rv) + eta(u,v)
        = r([u,v]_h + rho_L(ru,v) + rho_R(u,rv) + theta(ru,rv)).

``is_deformation_map`` evaluates that identity and, independently, the
closure of the graph under Omega; both verdicts are reported.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields, replace
from functools import cached_property


from src.engine.errors import NotADeformationMap, ShapeError
from src.engine.exactlin import Matrix, solve
from src.engine.leibniz import (
    CohomologyRow,
    LeibnizAlgebra,
    LeibnizReport,
    Representation,
    check_leibniz,
    coboundary,
    cohomology_table,
)
from src.engine.multimap import G, H, Bidegree, MultiMap, SplitSpace

logger = logging.getLogger(__name__)

# name -> (input pattern, output part)
COMPONENTS: dict[str, tuple[tuple[str, str], str]] = {
    "bracket_g": ((G, G), G),
    "bracket_h": ((H, H), H),
    "rho_left": ((G, H), H),
    "rho_right": ((H, G), H),
    "psi_left": ((H, G), G),
    "psi_right": ((G, H), G),
    "theta": ((G, G), H),
    "eta": ((H, H), G),
}


# ---------------------------------------------------
# Omega
# ---------------------------------------------------

@dataclass(frozen=True)
class OmegaStructure:
    """The eight component maps of a bracket on a split space."""

    space: SplitSpace
    bracket_g: MultiMap
    bracket_h: MultiMap
    rho_left: MultiMap
    rho_right: MultiMap
    psi_left: MultiMap
    psi_right: MultiMap
    theta: MultiMap
    eta: MultiMap

    def __post_init__(self):
        for name, (pattern, target) in COMPONENTS.items():
            self.space.require_block(getattr(self, name), pattern, target, name=name)

    @property
    def field(self):
        return self.space.field

    def components(self) -> dict[str, MultiMap]:
        return {name: getattr(self, name) for name in COMPONENTS}

    def with_components(self, **changes: MultiMap) -> OmegaStructure:
        return replace(self, **changes)

    def _lift(self, *names: str) -> MultiMap:
        out = MultiMap.zeros(self.field, self.space.dim, (self.space.dim,) * 2)
        for name in names:
            pattern, target = COMPONENTS[name]
            out = out + self.space.lift(getattr(self, name), pattern, target)
        return out

    @cached_property
    def theta_lift(self) -> MultiMap:
        return self._lift("theta")

    @cached_property
    def mu(self) -> MultiMap:
        return self._lift("bracket_g", "rho_left", "rho_right")

    @cached_property
    def nu(self) -> MultiMap:
        return self._lift("bracket_h", "psi_left", "psi_right")

    @cached_property
    def eta_lift(self) -> MultiMap:
        return self._lift("eta")

    @cached_property
    def omega(self) -> MultiMap:
        return self.theta_lift + self.mu + self.nu + self.eta_lift

    def pieces(self) -> dict[Bidegree, MultiMap]:
        return {
            Bidegree(2, -1): self.theta_lift,
            Bidegree(1, 0): self.mu,
            Bidegree(0, 1): self.nu,
            Bidegree(-1, 2): self.eta_lift,
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OmegaStructure):
            return NotImplemented
        return self.space == other.space and all(
            getattr(self, f.name) == getattr(other, f.name) for f in fields(self) if f.name != "space"
        )

    __hash__ = None


def assemble(space: SplitSpace, **maps: MultiMap) -> OmegaStructure:
    """
    Build an OmegaStructure from named components; missing components are zero.

    Raises:
        ShapeError: On an unknown component name or a block of the wrong shape.
    """
    unknown = set(maps) - set(COMPONENTS)
    if unknown:
        raise ShapeError(f"unknown Omega components: {sorted(unknown)}")
    full = {}
    for name, (pattern, target) in COMPONENTS.items():
        if name in maps and maps[name] is not None:
            full[name] = maps[name]
        else:
            full[name] = MultiMap.zeros(space.field, space.part_dim(target), tuple(space.part_dim(p) for p in pattern))
    return OmegaStructure(space, **full)


def zero_omega(space: SplitSpace) -> OmegaStructure:
    return assemble(space)


def split(space: SplitSpace, omega: MultiMap) -> OmegaStructure:
    """Recover the eight components of an arity-2 map on G."""
    space.require(omega)
    if omega.arity != 2:
        raise ShapeError(f"Omega must have arity 2, got {omega.arity}")
    maps = {name: space.restrict(omega, pattern, target) for name, (pattern, target) in COMPONENTS.items()}
    return OmegaStructure(space, **maps)


# ---------------------------------------------------
# Proto-twilled check
# ---------------------------------------------------

@dataclass
class EquationResult:
    name: str
    residual: MultiMap
    ok: bool


@dataclass
class ProtoTwilledReport:
    """Verdicts on one Omega.

    ``ok`` is the Leibniz identity of Omega; ``mc_zero`` records whether
    ``[[Omega, Omega]]`` vanishes (the two agree away from characteristic 2).
    """

    ok: bool
    mc_zero: bool
    mc_tensor: MultiMap
    leibniz: LeibnizReport
    equations: list[EquationResult]
    quasi_twilled: bool
    twilled: bool


def check_proto_twilled(omega: OmegaStructure) -> ProtoTwilledReport:
    space = omega.space
    leib = check_leibniz(omega.omega)
    th, mu, nu, eta = omega.theta_lift, omega.mu, omega.nu, omega.eta_lift
    br = space.bracket
    equations = [
        ("[[mu,theta]] = 0", br(mu, th)),
        ("[[mu,mu]] + 2[[nu,theta]] = 0", br(mu, mu) + br(nu, th).scale(2)),
        ("[[mu,nu]] + [[theta,eta]] = 0", br(mu, nu) + br(th, eta)),
        ("[[nu,nu]] + 2[[mu,eta]] = 0", br(nu, nu) + br(mu, eta).scale(2)),
        ("[[nu,eta]] = 0", br(nu, eta)),
    ]
    results = [EquationResult(name, res, res.is_zero()) for name, res in equations]
    quasi = omega.eta.is_zero()
    report = ProtoTwilledReport(
        ok=leib.ok,
        mc_zero=leib.mc_zero,
        mc_tensor=leib.mc_tensor,
        leibniz=leib,
        equations=results,
        quasi_twilled=quasi,
        twilled=quasi and omega.theta.is_zero(),
    )
    logger.info(
        f"[OMEGA] proto-twilled={report.ok} quasi={report.quasi_twilled} twilled={report.twilled} "
        f"equations={[e.ok for e in results]}"
    )
    return report


# ---------------------------------------------------
# Deformation maps
# ---------------------------------------------------

def _require_r(r: MultiMap, omega: OmegaStructure) -> None:
    omega.space.require_block(r, (H,), G, name="r")


def induced_bracket_map(r: MultiMap, omega: OmegaStructure) -> MultiMap:
    """``[u,v]_r = [u,v]_h + rho_L(ru,v) + rho_R(u,rv) + theta(ru,rv)`` (no validation)."""
    _require_r(r, omega)
    return (
        omega.bracket_h
        + omega.rho_left.compose(0, r)
        + omega.rho_right.compose(1, r)
        + omega.theta.compose_all([r, r])
    )


def deformation_residual(r: MultiMap, omega: OmegaStructure) -> MultiMap:
    """Left-hand side minus right-hand side of the deformation-map identity, as ``h x h -> g``."""
    _require_r(r, omega)
    lhs = (
        omega.bracket_g.compose_all([r, r])
        + omega.psi_right.compose(0, r)
        + omega.psi_left.compose(1, r)
        + omega.eta
    )
    return lhs - induced_bracket_map(r, omega).post(r)


def graph_is_closed(r: MultiMap, omega: OmegaStructure) -> bool:
    """Whether ``Omega(w_a, w_b)`` lies in the span of the graph basis for all pairs."""
    space = omega.space
    basis = space.graph_basis(r)
    if not basis:
        return True
    span = Matrix.from_columns(space.field, space.dim, [list(w) for w in basis])
    for a in basis:
        for b in basis:
            if solve(span, list(omega.omega.eval(a, b))) is None:
                return False
    return True


@dataclass
class DeformationReport:
    ok: bool
    residual: MultiMap
    graph_closed: bool

    @property
    def agree(self) -> bool:
        return self.ok == self.graph_closed


def is_deformation_map(r: MultiMap, omega: OmegaStructure) -> DeformationReport:
    """
    Evaluate the deformation-map identity and the graph-closure test.

    Raises:
        ShapeError: If ``r`` is not a map ``h -> g``.
    """
    residual = deformation_residual(r, omega)
    report = DeformationReport(ok=residual.is_zero(), residual=residual, graph_closed=graph_is_closed(r, omega))
    if not report.agree:
        logger.error(f"[OMEGA] identity verdict {report.ok} disagrees with graph closure {report.graph_closed}")
    return report


@dataclass(frozen=True)
class DeformationMap:
    """A linear map ``h -> g`` certified against its host structure."""

    r: MultiMap
    host: OmegaStructure

    @classmethod
    def certify(cls, r: MultiMap, omega: OmegaStructure) -> DeformationMap:
        if not is_deformation_map(r, omega).ok:
            raise NotADeformationMap("r does not satisfy the deformation-map identity")
        return cls(r, omega)


def psi_left_r(r: MultiMap, omega: OmegaStructure) -> MultiMap:
    """``psi_L(u,x) + [ru,x] - r(rho_R(u,x) + theta(ru,x))``."""
    return (
        omega.psi_left
        + omega.bracket_g.compose(0, r)
        - (omega.rho_right + omega.theta.compose(0, r)).post(r)
    )


def psi_right_r(r: MultiMap, omega: OmegaStructure) -> MultiMap:
    """``psi_R(x,u) + [x,ru] - r(rho_L(x,u) + theta(x,ru))``."""
    return (
        omega.psi_right
        + omega.bracket_g.compose(1, r)
        - (omega.rho_left + omega.theta.compose(1, r)).post(r)
    )


def induced_bracket(r: MultiMap, omega: OmegaStructure) -> LeibnizAlgebra:
    """
    The Leibniz algebra ``h_r`` carried by h.

    Raises:
        NotADeformationMap: If ``r`` is not a deformation map.
    """
    DeformationMap.certify(r, omega)
    return LeibnizAlgebra(induced_bracket_map(r, omega))


def induced_representation(r: MultiMap, omega: OmegaStructure) -> Representation:
    """
    The representation ``(g, psi_L_r, psi_R_r)`` of ``h_r``.

    Raises:
        NotADeformationMap: If ``r`` is not a deformation map.
    """
    algebra = induced_bracket(r, omega)
    return Representation(algebra, psi_left_r(r, omega), psi_right_r(r, omega))


# ---------------------------------------------------
# Twisting
# ---------------------------------------------------

@dataclass(frozen=True)
class TwistComponents:
    theta: MultiMap
    mu: MultiMap
    nu: MultiMap
    eta: MultiMap

    @property
    def total(self) -> MultiMap:
        return self.theta + self.mu + self.nu + self.eta


def twist_components(r: MultiMap, omega: OmegaStructure) -> TwistComponents:
    """
    Bidegree pieces of the twisted bracket ``Omega_r``:

        theta_r = theta~
        mu_r    = mu + [[theta~, r~]]
        nu_r    = nu + [[mu, r~]] + 1/2 [[[[theta~, r~]], r~]]
        eta_r   = eta~ + [[nu, r~]] + 1/2 [[[[mu, r~]], r~]] + 1/6 [[[[[[theta~, r~]], r~]], r~]]

    Raises:
        CharacteristicTooSmall: Over GF(2) and GF(3).
    """
    _require_r(r, omega)
    space, field = omega.space, omega.field
    field.require_characteristic_above(3, "twisting by r")
    half, sixth = field.fraction(1, 2), field.fraction(1, 6)
    rt = space.lift_linear(r)
    th_r = space.bracket(omega.theta_lift, rt)
    th_rr = space.bracket(th_r, rt)
    th_rrr = space.bracket(th_rr, rt)
    mu_r = space.bracket(omega.mu, rt)
    mu_rr = space.bracket(mu_r, rt)
    nu_r = space.bracket(omega.nu, rt)
    return TwistComponents(
        theta=omega.theta_lift,
        mu=omega.mu + th_r,
        nu=omega.nu + mu_r + th_rr.scale(half),
        eta=omega.eta_lift + nu_r + mu_rr.scale(half) + th_rrr.scale(sixth),
    )


def twist_omega(r: MultiMap, omega: OmegaStructure) -> OmegaStructure:
    """The twisted structure ``Omega_r`` for any linear ``r: h -> g``."""
    twisted = split(omega.space, twist_components(r, omega).total)
    logger.info(f"[OMEGA] twisted by r: quasi-twilled={twisted.eta.is_zero()}")
    return twisted


def quasi_twilled_blocks(r: MultiMap, omega: OmegaStructure) -> OmegaStructure:
    """
    The twisted bracket of a deformation map, built block by block:

        [(x,0),(y,0)]_r = ([x,y] - r theta(x,y), theta(x,y))
        [(x,0),(0,u)]_r = (psi_R_r(x,u), rho_L(x,u) + theta(x,ru))
        [(0,u),(x,0)]_r = (psi_L_r(u,x), rho_R(u,x) + theta(ru,x))
        [(0,u),(0,v)]_r = (0, [u,v]_r)
    """
    _require_r(r, omega)
    return assemble(
        omega.space,
        bracket_g=omega.bracket_g - omega.theta.post(r),
        theta=omega.theta,
        psi_right=psi_right_r(r, omega),
        rho_left=omega.rho_left + omega.theta.compose(1, r),
        psi_left=psi_left_r(r, omega),
        rho_right=omega.rho_right + omega.theta.compose(0, r),
        bracket_h=induced_bracket_map(r, omega),
    )


# ---------------------------------------------------
# Deformation complex
# ---------------------------------------------------

def deformation_coboundary(f: MultiMap, r: MultiMap, omega: OmegaStructure) -> MultiMap:
    """
    Coboundary of ``f: h^{(x)n} -> g`` in the complex of ``h_r`` with
    coefficients in ``(g, psi_L_r, psi_R_r)``.

    Raises:
        NotADeformationMap: If ``r`` is not a deformation map.
        ShapeError: If ``f`` is not a map ``h^{(x)n} -> g``.
    """
    DeformationMap.certify(r, omega)
    return coboundary(f, induced_bracket_map(r, omega), psi_left_r(r, omega), psi_right_r(r, omega))


def deformation_cohomology(r: MultiMap, omega: OmegaStructure, max_degree: int) -> list[CohomologyRow]:
    DeformationMap.certify(r, omega)
    return cohomology_table(induced_bracket_map(r, omega), psi_left_r(r, omega), psi_right_r(r, omega), max_degree)


