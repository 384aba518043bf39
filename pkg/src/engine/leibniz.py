"""
Leibniz algebras, their representations and Loday-Pirashvili cohomology.

Conventions:
    - Left Leibniz identity: ``[x,[y,z]] = [[x,y],z] + [y,[x,z]]``.
    - A representation on V is a pair ``rho_left: g x V -> V`` and
      ``rho_right: V x g -> V`` satisfying the three identities obtained from
      the Leibniz identity of the semidirect product ``g (+) V``.
    - Constructors never validate; ``check_*`` functions do, and return
      reports with every violating basis triple and its residual
      (left-hand side minus right-hand side).

The coboundary of ``f: g^{(x)n} -> V`` is

    (df)(x_1..x_{n+1}) = sum_{i<=n} (-1)^{i+1} rho_left(x_i, f(..^x_i..))
                       + (-1)^{n+1} rho_right(f(x_1..x_n), x_{n+1})
                       + sum_{i<j} (-1)^i f(..^x_i.., x_{j-1}, [x_i,x_j], x_{j+1}..)

and for ``n = 0`` (f is a vector v) it reduces to ``-rho_right(v, x)``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from src.engine.errors import ArityCapExceeded, ShapeError
from src.engine.exactlin import Field, Matrix, rank
from src.engine.multimap import MultiMap, arity_cap, balavoine_bracket

logger = logging.getLogger(__name__)


# ---------------------------------------------------
# Data
# ---------------------------------------------------

@dataclass(frozen=True)
class LeibnizAlgebra:
    """A bracket ``g x g -> g`` given by structure constants (not validated)."""

    bracket: MultiMap

    def __post_init__(self):
        b = self.bracket
        if b.arity != 2 or not b.is_square():
            raise ShapeError(f"a Leibniz bracket must be a square arity-2 map, got {b!r}")

    @property
    def field(self) -> Field:
        return self.bracket.field

    @property
    def dim(self) -> int:
        return self.bracket.output_dim

    @classmethod
    def abelian(cls, field: Field, dim: int) -> LeibnizAlgebra:
        return cls(MultiMap.zeros(field, dim, (dim, dim)))

    @classmethod
    def from_structure_constants(cls, field: Field, dim: int, entries: dict) -> LeibnizAlgebra:
        """``entries[(k, i, j)]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``."""
        return cls(MultiMap.from_entries(field, dim, (dim, dim), entries))


@dataclass(frozen=True)
class Representation:
    """Left and right actions of ``algebra`` on a carrier space V."""

    algebra: LeibnizAlgebra
    rho_left: MultiMap
    rho_right: MultiMap

    def __post_init__(self):
        g, v = self.algebra.dim, self.rho_left.output_dim
        if self.rho_left.coeffs.shape != (v, g, v):
            raise ShapeError(f"rho_left has shape {self.rho_left.coeffs.shape}, expected {(v, g, v)}")
        if self.rho_right.coeffs.shape != (v, v, g):
            raise ShapeError(f"rho_right has shape {self.rho_right.coeffs.shape}, expected {(v, v, g)}")

    @property
    def carrier_dim(self) -> int:
        return self.rho_left.output_dim


@dataclass(frozen=True)
class Violation:
    """One basis triple where an identity fails.

    Attributes:
        identity: Name of the identity.
        inputs: Basis indices in the identity's input order.
        residual: Left-hand side minus right-hand side.
    """

    identity: str
    inputs: tuple[int, ...]
    residual: np.ndarray


@dataclass
class LeibnizReport:
    ok: bool
    violations: list[Violation]
    mc_tensor: MultiMap
    mc_zero: bool


@dataclass
class RepresentationReport:
    ok: bool
    identities: dict[str, list[Violation]] = dataclass_field(default_factory=dict)

    @property
    def violations(self) -> list[Violation]:
        return [v for vs in self.identities.values() for v in vs]


def _violations(name: str, residual: MultiMap) -> list[Violation]:
    out = []
    zero = residual.field.zero
    for index in itertools.product(*(range(d) for d in residual.input_dims)):
        vec = residual.coeffs[(slice(None), *index)]
        if any(x != zero for x in vec):
            out.append(Violation(name, tuple(index), np.array(vec, dtype=object)))
    return out


# ---------------------------------------------------
# Checks
# ---------------------------------------------------

def leibniz_residual(bracket: MultiMap) -> MultiMap:
    """``[x,[y,z]] - [[x,y],z] - [y,[x,z]]`` as an arity-3 map."""
    if bracket.arity != 2 or not bracket.is_square():
        raise ShapeError(f"expected a square arity-2 map, got {bracket!r}")
    inner_right = bracket.compose(1, bracket)
    inner_left = bracket.compose(0, bracket)
    return inner_right - inner_left - inner_right.permute_inputs([1, 0, 2])


def check_leibniz(bracket: MultiMap) -> LeibnizReport:
    """
    Check the left Leibniz identity on all basis triples.

    The report also carries the Balavoine square ``[[B, B]]``, which vanishes
    exactly when the identity holds (over fields of characteristic not 2).

    Raises:
        ShapeError: If ``bracket`` is not a square arity-2 map.
    """
    residual = leibniz_residual(bracket)
    violations = _violations("leibniz", residual)
    mc = balavoine_bracket(bracket, bracket)
    report = LeibnizReport(ok=not violations, violations=violations, mc_tensor=mc, mc_zero=mc.is_zero())
    logger.info(f"[LEIBNIZ] dim={bracket.output_dim} ok={report.ok} violations={len(violations)}")
    return report


def check_lie(bracket: MultiMap) -> bool:
    """Antisymmetry on basis pairs plus the Leibniz identity."""
    swapped = bracket.permute_inputs([1, 0])
    return (bracket + swapped).is_zero() and check_leibniz(bracket).ok


def representation_residuals(algebra: LeibnizAlgebra, rho_left: MultiMap, rho_right: MultiMap) -> dict[str, MultiMap]:
    """
    Residuals of the three representation identities.

    Input orders: ``left-left`` (x, y, v), ``left-right`` (x, v, y),
    ``right-right`` (v, x, y).
    """
    Representation(algebra, rho_left, rho_right)
    b, L, R = algebra.bracket, rho_left, rho_right
    left_left = L.compose(1, L)
    left_right = L.compose(1, R)
    right_bracket = R.compose(1, b)
    return {
        # rho_L(x, rho_L(y, v)) - rho_L([x, y], v) - rho_L(y, rho_L(x, v))
        "left-left": left_left - L.compose(0, b) - left_left.permute_inputs([1, 0, 2]),
        # rho_L(x, rho_R(v, y)) - rho_R(rho_L(x, v), y) - rho_R(v, [x, y])
        "left-right": left_right - R.compose(0, L) - right_bracket.permute_inputs([1, 0, 2]),
        # rho_R(v, [x, y]) - rho_R(rho_R(v, x), y) - rho_L(x, rho_R(v, y))
        "right-right": right_bracket - R.compose(0, R) - left_right.permute_inputs([1, 0, 2]),
    }


def check_representation(algebra: LeibnizAlgebra, rho_left: MultiMap, rho_right: MultiMap) -> RepresentationReport:
    """
    Check the three representation identities on all basis triples.

    Raises:
        ShapeError: If the action shapes do not fit the algebra.
    """
    identities = {
        name: _violations(name, residual)
        for name, residual in representation_residuals(algebra, rho_left, rho_right).items()
    }
    ok = all(not vs for vs in identities.values())
    logger.info(f"[LEIBNIZ] representation dim={rho_left.output_dim} ok={ok}")
    return RepresentationReport(ok=ok, identities=identities)


# ---------------------------------------------------
# Standard representations
# ---------------------------------------------------

def adjoint_rep(algebra: LeibnizAlgebra) -> Representation:
    return Representation(algebra, algebra.bracket, algebra.bracket)


def coadjoint_rep(algebra: LeibnizAlgebra) -> Representation:
    """
    Actions on the dual space in the dual basis.

    ``coad_L(x, a)(y) = -a([x, y])`` and ``coad_R(a, x)(y) = a([x, y] + [y, x])``.
    """
    c = algebra.bracket.coeffs
    left = -np.transpose(c, (2, 1, 0))
    right = np.transpose(c, (2, 0, 1)) + np.transpose(c, (1, 0, 2))
    field = algebra.field
    return Representation(algebra, MultiMap(field, np.array(left, dtype=object)), MultiMap(field, np.array(right, dtype=object)))


def trivial_rep(algebra: LeibnizAlgebra, dim: int) -> Representation:
    field, g = algebra.field, algebra.dim
    return Representation(algebra, MultiMap.zeros(field, dim, (g, dim)), MultiMap.zeros(field, dim, (dim, g)))


# ---------------------------------------------------
# Loday-Pirashvili complex
# ---------------------------------------------------

def coboundary(f: MultiMap, bracket: MultiMap, rho_left: MultiMap, rho_right: MultiMap) -> MultiMap:
    """The coboundary formula for raw structure maps (shared with the deformation complex)."""
    n = f.arity
    if n + 1 > arity_cap():
        raise ArityCapExceeded(f"coboundary of an arity-{n} cochain exceeds the cap {arity_cap()}")
    g, v = bracket.output_dim, rho_left.output_dim
    if f.output_dim != v or any(d != g for d in f.input_dims):
        raise ShapeError(f"cochain {f!r} does not map g^{n} (dim {g}) to V (dim {v})")

    right = rho_right.compose(0, f)
    total = right if n % 2 else -right
    if n == 0:
        return total

    left = rho_left.compose(1, f)
    for i in range(n):
        order = [i] + [k for k in range(n + 1) if k != i]
        term = left.permute_inputs(order)
        total = total + term if i % 2 == 0 else total - term

    for j in range(1, n + 1):
        inserted = f.compose(j - 1, bracket)
        for i in range(j):
            order = [k for k in range(j) if k != i] + [i, j] + list(range(j + 1, n + 1))
            term = inserted.permute_inputs(order)
            # (-1)^i with 1-based i
            total = total - term if i % 2 == 0 else total + term
    return total


def lp_coboundary(f: MultiMap, algebra: LeibnizAlgebra, rep: Representation) -> MultiMap:
    """
    Loday-Pirashvili coboundary of ``f: g^{(x)n} -> V``.

    Raises:
        ShapeError: If ``f`` does not fit the algebra and representation.
        ArityCapExceeded: If ``n + 1`` exceeds the arity cap.
    """
    return coboundary(f, algebra.bracket, rep.rho_left, rep.rho_right)


def is_two_cocycle(theta: MultiMap, algebra: LeibnizAlgebra, rep: Representation) -> bool:
    return lp_coboundary(theta, algebra, rep).is_zero()


def cochain_basis(field: Field, g: int, v: int, n: int) -> list[MultiMap]:
    """Standard basis of ``Hom(g^{(x)n}, V)``: input multi-index first (lexicographic), then output."""
    out = []
    for index in itertools.product(range(g), repeat=n):
        for j in range(v):
            e = MultiMap.zeros(field, v, (g,) * n)
            e.coeffs[(j, *index)] = field.one
            out.append(e)
    return out


def flatten_cochain(f: MultiMap) -> list:
    return list(np.moveaxis(f.coeffs, 0, -1).ravel())


def coboundary_matrix_for(bracket: MultiMap, rho_left: MultiMap, rho_right: MultiMap, n: int) -> Matrix:
    field = bracket.field
    g, v = bracket.output_dim, rho_left.output_dim
    columns = [flatten_cochain(coboundary(e, bracket, rho_left, rho_right)) for e in cochain_basis(field, g, v, n)]
    return Matrix.from_columns(field, v * g ** (n + 1), columns)


def coboundary_matrix(algebra: LeibnizAlgebra, rep: Representation, n: int) -> Matrix:
    """Matrix of ``d: C^n -> C^{n+1}`` in the standard cochain bases."""
    return coboundary_matrix_for(algebra.bracket, rep.rho_left, rep.rho_right, n)


@dataclass(frozen=True)
class CohomologyRow:
    degree: int
    cochains: int
    cocycles: int
    coboundaries: int
    cohomology: int


def cohomology_table(bracket: MultiMap, rho_left: MultiMap, rho_right: MultiMap, max_degree: int) -> list[CohomologyRow]:
    if max_degree < 0:
        raise ShapeError(f"max degree must be >= 0, got {max_degree}")
    if max_degree + 1 > arity_cap():
        raise ArityCapExceeded(f"degree {max_degree} needs arity {max_degree + 1} > cap {arity_cap()}")
    g, v = bracket.output_dim, rho_left.output_dim
    ranks = [rank(coboundary_matrix_for(bracket, rho_left, rho_right, n)) for n in range(max_degree + 1)]
    rows = []
    for n in range(max_degree + 1):
        cochains = v * g**n
        cocycles = cochains - ranks[n]
        coboundaries = ranks[n - 1] if n > 0 else 0
        rows.append(CohomologyRow(n, cochains, cocycles, coboundaries, cocycles - coboundaries))
        logger.debug(f"[LEIBNIZ] H^{n}: C={cochains} Z={cocycles} B={coboundaries}")
    return rows


def cohomology_dimensions(algebra: LeibnizAlgebra, rep: Representation, max_degree: int) -> list[CohomologyRow]:
    """
    Dimensions of cochains, cocycles, coboundaries and cohomology for ``n = 0..max_degree``.

    Raises:
        ArityCapExceeded: If ``max_degree + 1`` exceeds the arity cap.
    """
    return cohomology_table(algebra.bracket, rep.rho_left, rep.rho_right, max_degree)
