"""
Curved L-infinity algebras built from derived brackets.

Everything here lives in the shifted convention: every structure map
``l_k`` has degree 1 and is graded symmetric. An element of the Balavoine
algebra of arity ``a`` has degree ``a - 1``; its desuspension ``s^-1 F``
has degree ``a - 2``.

- GradedElement:
    A finite sum of pieces keyed by ``(suspended, arity)``. Every piece is a
    square map on the split space; unsuspended pieces of the controlling
    algebra are lifts of maps ``h^{(x)n} -> g``.

- CurvedLInfty:
    A curvature ``l0`` and evaluators ``l_1..l_K``; ``l_k`` is zero for
    ``k > K``. Constructors:

    * ``controlling_algebra(Omega)``: ``l0 = eta~``, ``l1 = [[nu, .]]``,
      ``l2 = [[[[mu, .]], .]]``, ``l3 = [[[[[[theta~, .]], .]], .]]``.
    * ``governing_algebra(Omega, r)``: closed forms of the twist by a
      deformation map ``r``.
    * ``pair_algebra(space, subalgebra)``: the algebra on ``s^-1 B' (+) a``
      whose Maurer-Cartan elements are pairs (Omega, r).
    * ``twist(L, alpha)``: the generic twist by a Maurer-Cartan element.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field as dataclass_field
from math import factorial
from typing import Callable, Sequence

from src.engine.errors import InvalidOmega, NotMaurerCartan, ShapeError, SpaceMismatch
from src.engine.multimap import MultiMap, SplitSpace, Subalgebra, shuffles
from src.engine.prototwilled import DeformationMap, OmegaStructure, check_proto_twilled

logger = logging.getLogger(__name__)

PieceKey = tuple[bool, int]


class Provenance(enum.Enum):
    CONTROLLING = "controlling"
    TWISTED = "twisted"
    PAIR = "pair"
    SPECIALIZED_ZOO = "specialized-zoo"


def piece_degree(key: PieceKey) -> int:
    suspended, arity = key
    return arity - 2 if suspended else arity - 1


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


# ---------------------------------------------------
# Graded elements
# ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedElement:
    """A sum of square maps on ``space``, each tagged suspended or not."""

    space: SplitSpace
    pieces: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        for (suspended, arity), f in self.pieces.items():
            self.space.require(f)
            if f.arity != arity or arity < 1:
                raise ShapeError(f"piece keyed with arity {arity} holds a map of arity {f.arity}")

    @classmethod
    def zero(cls, space: SplitSpace) -> GradedElement:
        return cls(space, {})

    @classmethod
    def a(cls, space: SplitSpace, f: MultiMap) -> GradedElement:
        return cls(space, {(False, f.arity): f})

    @classmethod
    def suspended(cls, space: SplitSpace, f: MultiMap) -> GradedElement:
        return cls(space, {(True, f.arity): f})

    @classmethod
    def from_block(cls, space: SplitSpace, f: MultiMap) -> GradedElement:
        """An element of ``a`` from a rectangular map ``h^{(x)n} -> g``."""
        return cls.a(space, space.lift_a(f))

    @property
    def field(self):
        return self.space.field

    def nonzero_pieces(self) -> dict:
        return {key: f for key, f in self.pieces.items() if not f.is_zero()}

    @property
    def degree(self) -> int | None:
        """The common degree of the nonzero pieces (None for zero)."""
        degrees = {piece_degree(key) for key in self.nonzero_pieces()}
        if len(degrees) > 1:
            raise ShapeError(f"element is not homogeneous, degrees {sorted(degrees)}")
        return degrees.pop() if degrees else None

    def is_zero(self) -> bool:
        return not self.nonzero_pieces()

    def split(self) -> list[tuple[PieceKey, MultiMap]]:
        return sorted(self.nonzero_pieces().items(), key=lambda item: item[0])

    def a_part(self, arity: int) -> MultiMap | None:
        return self.pieces.get((False, arity))

    def s_part(self, arity: int) -> MultiMap | None:
        return self.pieces.get((True, arity))

    def a_block(self, arity: int) -> MultiMap:
        """The unsuspended piece of ``arity`` restricted to ``h^{(x)arity} -> g``."""
        f = self.a_part(arity)
        if f is None:
            return MultiMap.zeros(self.field, self.space.dim_g, (self.space.dim_h,) * arity)
        return self.space.restrict_a(f)

    def _combine(self, other: GradedElement, sign: int) -> GradedElement:
        if self.space != other.space:
            raise SpaceMismatch("graded elements live on different split spaces")
        out = dict(self.pieces)
        for key, f in other.pieces.items():
            g = f if sign == 1 else -f
            out[key] = out[key] + g if key in out else g
        return GradedElement(self.space, out)

    def __add__(self, other: GradedElement) -> GradedElement:
        return self._combine(other, 1)

    def __sub__(self, other: GradedElement) -> GradedElement:
        return self._combine(other, -1)

    def __neg__(self) -> GradedElement:
        return GradedElement(self.space, {key: -f for key, f in self.pieces.items()})

    def scale(self, s) -> GradedElement:
        return GradedElement(self.space, {key: f.scale(s) for key, f in self.pieces.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None


Evaluator = Callable[..., GradedElement]
PieceEvaluator = Callable[[Sequence[tuple[PieceKey, MultiMap]]], GradedElement]


def multilinear(space: SplitSpace, on_pieces: PieceEvaluator) -> Evaluator:
    """Extend an evaluator defined on single pieces to sums of pieces."""

    def evaluate(*xs: GradedElement) -> GradedElement:
        out = GradedElement.zero(space)
        for combo in itertools.product(*(x.split() for x in xs)):
            out = out + on_pieces(combo)
        return out

    return evaluate


# ---------------------------------------------------
# Curved L-infinity algebras
# ---------------------------------------------------

@dataclass(frozen=True)
class CurvedLInfty:
    """Curvature ``l0`` and structure maps ``l_1..l_K`` given as evaluators."""

    space: SplitSpace
    truncation: int
    l0: GradedElement
    products: dict[int, Evaluator]
    provenance: Provenance

    @property
    def field(self):
        return self.space.field

    def zero(self) -> GradedElement:
        return GradedElement.zero(self.space)

    def l(self, k: int, *xs: GradedElement) -> GradedElement:
        if len(xs) != k:
            raise ShapeError(f"l_{k} takes {k} arguments, got {len(xs)}")
        if k == 0:
            return self.l0
        if k > self.truncation or k not in self.products:
            return self.zero()
        return self.products[k](*xs)


def mc_defect(algebra: CurvedLInfty, alpha: GradedElement) -> GradedElement:
    """
    ``l0 + sum_{k=1..K} 1/k! l_k(alpha, ..., alpha)``.

    Raises:
        ShapeError: If ``alpha`` is not of degree 0.
        CharacteristicTooSmall: If some ``k!`` with ``k <= K`` vanishes in the field.
    """
    if alpha.degree not in (0, None):
        raise ShapeError(f"Maurer-Cartan candidates have degree 0, got {alpha.degree}")
    field = algebra.field
    field.require_characteristic_above(algebra.truncation, "the Maurer-Cartan equation")
    out = algebra.l0
    for k in range(1, algebra.truncation + 1):
        out = out + algebra.l(k, *([alpha] * k)).scale(field.fraction(1, factorial(k)))
    logger.debug(f"[LINFTY] {algebra.provenance.value} defect zero={out.is_zero()}")
    return out


def twist(algebra: CurvedLInfty, alpha: GradedElement, provenance: Provenance = Provenance.TWISTED) -> CurvedLInfty:
    """
    Twist by a Maurer-Cartan element: ``l^alpha_k(xs) = sum_n 1/n! l_{n+k}(alpha^n, xs)``.

    Raises:
        NotMaurerCartan: If ``alpha`` has a nonzero defect.
        CharacteristicTooSmall: If the field cannot divide by ``K!``.
    """
    if not mc_defect(algebra, alpha).is_zero():
        raise NotMaurerCartan("cannot twist by an element with nonzero Maurer-Cartan defect")
    field, top = algebra.field, algebra.truncation

    def twisted(k: int) -> Evaluator:
        def evaluate(*xs: GradedElement) -> GradedElement:
            out = algebra.zero()
            for n in range(0, top - k + 1):
                term = algebra.l(n + k, *([alpha] * n), *xs)
                out = out + term.scale(field.fraction(1, factorial(n)))
            return out

        return evaluate

    logger.info(f"[LINFTY] twisting {algebra.provenance.value} algebra (K={top})")
    return CurvedLInfty(
        space=algebra.space,
        truncation=top,
        l0=algebra.zero(),
        products={k: twisted(k) for k in range(1, top + 1)},
        provenance=provenance,
    )


# ---------------------------------------------------
# Controlling and governing algebras
# ---------------------------------------------------

def a_evaluator(space: SplitSpace, fn: Callable[..., MultiMap]) -> Evaluator:
    """Wrap a formula on maps of ``a`` into a multilinear evaluator."""

    def on_pieces(pieces: Sequence[tuple[PieceKey, MultiMap]]) -> GradedElement:
        for (suspended, _), f in pieces:
            if suspended or not space.contains(f, Subalgebra.A):
                raise SpaceMismatch("inputs of this algebra must lie in a = sum Hom(h^n, g)")
        result = fn(*(f for _, f in pieces))
        if not space.contains(result, Subalgebra.A):
            raise ShapeError(f"product of arity {len(pieces)} left a = sum Hom(h^n, g)")
        return GradedElement.a(space, result)

    return multilinear(space, on_pieces)


def _require_proto_twilled(omega: OmegaStructure) -> None:
    if not check_proto_twilled(omega).ok:
        raise InvalidOmega("Omega does not satisfy the Leibniz identity")


def controlling_algebra(omega: OmegaStructure) -> CurvedLInfty:
    """
    The curved L-infinity algebra on ``a`` whose Maurer-Cartan elements are
    the deformation maps of ``omega``.

    Raises:
        InvalidOmega: If ``omega`` is not proto-twilled.
    """
    _require_proto_twilled(omega)
    space = omega.space
    nu, mu, th = omega.nu, omega.mu, omega.theta_lift
    products = {
        1: a_evaluator(space, lambda f: space.bracket(nu, f)),
        2: a_evaluator(space, lambda f, g: space.nested(mu, f, g)),
        3: a_evaluator(space, lambda f, g, h: space.nested(th, f, g, h)),
    }
    logger.info(f"[LINFTY] controlling algebra on dims ({space.dim_g}, {space.dim_h})")
    return CurvedLInfty(space, 3, GradedElement.a(space, omega.eta_lift), products, Provenance.CONTROLLING)


def governing_algebra(omega: OmegaStructure, r: MultiMap) -> CurvedLInfty:
    """
    The twist of the controlling algebra by a deformation map ``r`` in closed form:

        l1(f)     = [[nu, f]] + [[[[mu, r~]], f]] + 1/2 [[[[[[theta~, r~]], r~]], f]]
        l2(f, g)  = [[[[mu, f]], g]] + [[[[[[theta~, r~]], f]], g]]
        l3        = l3 of the controlling algebra

    Raises:
        InvalidOmega: If ``omega`` is not proto-twilled.
        NotADeformationMap: If ``r`` is not a deformation map.
        CharacteristicTooSmall: Over GF(2) and GF(3).
    """
    _require_proto_twilled(omega)
    DeformationMap.certify(r, omega)
    space = omega.space
    space.field.require_characteristic_above(3, "the governing algebra")
    half = space.field.fraction(1, 2)
    rt = space.lift_linear(r)
    nu, mu, th = omega.nu, omega.mu, omega.theta_lift
    mu_r = space.bracket(mu, rt)
    th_r = space.bracket(th, rt)
    th_rr = space.bracket(th_r, rt)
    products = {
        1: a_evaluator(space, lambda f: space.bracket(nu, f) + space.bracket(mu_r, f) + space.bracket(th_rr, f).scale(half)),
        2: a_evaluator(space, lambda f, g: space.nested(mu, f, g) + space.nested(th_r, f, g)),
        3: a_evaluator(space, lambda f, g, h: space.nested(th, f, g, h)),
    }
    return CurvedLInfty(space, 3, GradedElement.zero(space), products, Provenance.TWISTED)


def derived_bracket(space: SplitSpace, delta: MultiMap, *args: MultiMap) -> MultiMap:
    """``P[[ ... [[delta, a_1]], ..., a_k]]`` with P the projection onto ``a``."""
    return space.project(space.nested(delta, *args), Subalgebra.A)


# ---------------------------------------------------
# Pair algebra
# ---------------------------------------------------

PAIR_SUBALGEBRAS = (Subalgebra.FULL, Subalgebra.B_PRIME, Subalgebra.B_DOUBLE_PRIME, Subalgebra.M)


def _koszul_to_front(degrees: Sequence[int], index: int) -> int:
    return _sign(degrees[index] * sum(degrees[:index]))


def pair_algebra(space: SplitSpace, subalgebra: Subalgebra = Subalgebra.FULL, truncation: int = 4) -> CurvedLInfty:
    """
    The L-infinity algebra on ``s^-1 B' (+) a`` (with zero Delta):

        l1((s^-1 F, f))                     = (0, P F)
        l2((s^-1 F, 0), (s^-1 G, 0))        = ((-1)^{|F|} s^-1 [[F, G]], 0)
        lk((s^-1 F, 0), (0, f_1), ...)      = (0, P[[ ... [[F, f_1]], ..., f_{k-1}]])

    and zero on every other combination. Degree-0 Maurer-Cartan evaluation
    needs ``truncation >= 4``.

    Raises:
        ShapeError: For a subalgebra outside full, b-prime, b-double-prime and m.
    """
    if subalgebra not in PAIR_SUBALGEBRAS:
        raise ShapeError(f"pair algebras are defined on {[s.value for s in PAIR_SUBALGEBRAS]}, got {subalgebra.value}")

    def on_pieces(pieces: Sequence[tuple[PieceKey, MultiMap]]) -> GradedElement:
        for (suspended, _), f in pieces:
            allowed = subalgebra if suspended else Subalgebra.A
            if not space.contains(f, allowed):
                raise SpaceMismatch(f"input outside {'s^-1 B' if suspended else 'a'} ({allowed.value})")
        flags = [key[0] for key, _ in pieces]
        count = sum(flags)
        if count == 0:
            return GradedElement.zero(space)
        if len(pieces) == 1:
            return GradedElement.a(space, space.project(pieces[0][1], Subalgebra.A))
        if count == 2 and len(pieces) == 2:
            ((_, arity_f), f), (_, g) = pieces
            return GradedElement.suspended(space, space.bracket(f, g).scale(_sign(arity_f - 1)))
        if count != 1:
            return GradedElement.zero(space)
        index = flags.index(True)
        sign = _koszul_to_front([piece_degree(key) for key, _ in pieces], index)
        rest = [f for i, (_, f) in enumerate(pieces) if i != index]
        value = derived_bracket(space, pieces[index][1], *rest)
        return GradedElement.a(space, value if sign == 1 else -value)

    evaluate = multilinear(space, on_pieces)
    logger.info(f"[LINFTY] pair algebra on {subalgebra.value} (K={truncation})")
    return CurvedLInfty(
        space=space,
        truncation=truncation,
        l0=GradedElement.zero(space),
        products={k: evaluate for k in range(1, truncation + 1)},
        provenance=Provenance.PAIR,
    )


@dataclass
class PairElement:
    """The degree-0 element ``(s^-1 Omega', r~)`` and the bidegrees filtered out of Omega."""

    element: GradedElement
    dropped: list


def pair_element(space: SplitSpace, omega: MultiMap, r: MultiMap, subalgebra: Subalgebra = Subalgebra.FULL) -> PairElement:
    space.require(omega)
    kept = space.project(omega, subalgebra)
    dropped = [bd for bd, c in space.bidegree_decompose(omega) if not subalgebra.admits(bd) and not c.is_zero()]
    if dropped:
        logger.warning(f"[LINFTY] components {[str(bd) for bd in dropped]} dropped by {subalgebra.value}")
    element = GradedElement(space, {(True, omega.arity): kept, (False, 1): space.lift_linear(r)})
    return PairElement(element, dropped)


def pair_twist(algebra: CurvedLInfty, alpha: GradedElement) -> CurvedLInfty:
    """
    Twist a pair algebra by a Maurer-Cartan pair ``(s^-1 Omega, r)``.

    Raises:
        CharacteristicTooSmall: Below characteristic 5.
        NotMaurerCartan: If ``alpha`` has a nonzero defect.
    """
    algebra.field.require_characteristic_above(4, "twisting a pair algebra")
    return twist(algebra, alpha)


# ---------------------------------------------------
# Identity checks
# ---------------------------------------------------

def _degree(x: GradedElement) -> int:
    d = x.degree
    return 0 if d is None else d


@dataclass
class IdentityResidual:
    arity: int
    inputs: tuple[int, ...]
    residual: GradedElement
    position: int | None = None


@dataclass
class IdentityReport:
    ok: bool
    residuals: list[IdentityResidual]


def check_graded_symmetry(algebra: CurvedLInfty, samples: Sequence[GradedElement], max_arity: int = 3) -> IdentityReport:
    """Compare ``l_k`` with its value after each adjacent transposition of the inputs."""
    residuals = []
    top = min(max_arity, algebra.truncation)
    for k in range(2, top + 1):
        for index in itertools.product(range(len(samples)), repeat=k):
            xs = [samples[i] for i in index]
            value = algebra.l(k, *xs)
            for p in range(k - 1):
                swapped = list(xs)
                swapped[p], swapped[p + 1] = swapped[p + 1], swapped[p]
                sign = _sign(_degree(xs[p]) * _degree(xs[p + 1]))
                other = algebra.l(k, *swapped)
                residual = value - (other if sign == 1 else -other)
                if not residual.is_zero():
                    residuals.append(IdentityResidual(k, tuple(index), residual, position=p))
    return IdentityReport(ok=not residuals, residuals=residuals)


def jacobi_residual(algebra: CurvedLInfty, xs: Sequence[GradedElement]) -> GradedElement:
    """``sum_i sum_{shuffles} eps l_{N-i+1}(l_i(x_s(1..i)), x_s(i+1..N))`` for ``N = len(xs)``."""
    n = len(xs)
    degrees = [_degree(x) for x in xs]
    total = algebra.zero()
    for i in range(n + 1):
        for first, second, _ in shuffles(i, n - i):
            exponent = sum(degrees[s] * degrees[t] for s in first for t in second if s > t)
            inner = algebra.l(i, *(xs[s] for s in first))
            term = algebra.l(n - i + 1, inner, *(xs[t] for t in second))
            total = total + term if exponent % 2 == 0 else total - term
    return total


def check_l_infinity_identities(algebra: CurvedLInfty, samples: Sequence[GradedElement], max_n: int = 3) -> IdentityReport:
    """
    Evaluate the generalized Jacobi identities for ``N = 0..max_n`` on all
    tuples of samples.
    """
    residuals = []
    for n in range(max_n + 1):
        for index in itertools.product(range(len(samples)), repeat=n):
            residual = jacobi_residual(algebra, [samples[i] for i in index])
            if not residual.is_zero():
                residuals.append(IdentityResidual(n, tuple(index), residual))
    report = IdentityReport(ok=not residuals, residuals=residuals)
    logger.info(f"[LINFTY] {algebra.provenance.value} Jacobi N<={max_n}: residuals={len(residuals)}")
    return report
