"""
Multilinear maps, the Balavoine bracket and bidegree bookkeeping.

A ``MultiMap`` stores a multilinear map ``V_1 x ... x V_a -> W`` as a dense
numpy ``object`` array of exact scalars with layout ``c[j, i_1, ..., i_a]``:
axis 0 runs over the output basis, axis ``k`` over the basis of the k-th
input. Square maps ``G^{(x)n+1} -> G`` on one space form the graded Lie
algebra under the Balavoine bracket; rectangular maps hold the component
blocks (brackets, actions, cochains) of the objects built on top of them.

``SplitSpace`` fixes a decomposition ``G = g (+) h`` of the total space
(basis indices ``0..dim_g-1`` span g, the rest span h) and provides:

- bidegree decomposition of square maps into components ``C^{k|l}``,
- horizontal lifts of block maps and the inverse restrictions,
- the subalgebra filters used by the L-infinity constructions.

All contractions use ``numpy.tensordot``/``transpose`` on object arrays, so
arithmetic stays inside the sympy domain of the field.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from typing import Any, Iterable, Sequence

import numpy as np

from src.config import load_settings
from src.engine.errors import ArityCapExceeded, ParseError, ShapeError, SpaceMismatch
from src.engine.exactlin import Field, FieldScalar

logger = logging.getLogger(__name__)

G, H = "g", "h"


def arity_cap() -> int:
    return load_settings().arity_cap


def zeros(field: Field, shape: Sequence[int]) -> np.ndarray:
    return np.full(tuple(shape), field.zero, dtype=object)


def contract(field: Field, a: np.ndarray, b: np.ndarray, axes_a: Sequence[int], axes_b: Sequence[int]) -> np.ndarray:
    """``numpy.tensordot`` that stays exact when a contracted axis is empty."""
    axes_a = [ax % a.ndim for ax in axes_a]
    axes_b = [ax % b.ndim for ax in axes_b]
    if any(a.shape[ax] == 0 for ax in axes_a):
        shape = [n for i, n in enumerate(a.shape) if i not in axes_a]
        shape += [n for i, n in enumerate(b.shape) if i not in axes_b]
        return zeros(field, shape)
    out = np.tensordot(a, b, axes=(axes_a, axes_b))
    if not isinstance(out, np.ndarray):
        out = np.array(out, dtype=object)
    return out.astype(object, copy=False)


def arrange(tensor: np.ndarray, positions: Sequence[int]) -> np.ndarray:
    """Reorder input axes so that input axis ``p`` of ``tensor`` lands at ``positions[p]``."""
    order = np.argsort(positions)
    return np.transpose(tensor, [0] + [1 + int(i) for i in order])


# ---------------------------------------------------
# Shuffles
# ---------------------------------------------------

def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of distinct integers."""
    inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def shuffles(p: int, q: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """
    All (p, q)-shuffles of ``0..p+q-1``.

    Returns:
        Tuples ``(first, second, sign)`` where ``first`` holds the images of the
        first p positions (increasing), ``second`` the images of the last q
        positions (increasing) and ``sign`` the permutation sign. Shuffles are
        listed in lexicographic order of ``first``.
    """
    out = []
    n = p + q
    for first in itertools.combinations(range(n), p):
        chosen = set(first)
        second = tuple(i for i in range(n) if i not in chosen)
        inversions = sum(1 for s in first for t in second if s > t)
        out.append((first, second, -1 if inversions % 2 else 1))
    return tuple(out)


# ---------------------------------------------------
# MultiMap
# ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class MultiMap:
    """A multilinear map stored as structure constants ``c[j, i_1, ..., i_a]``."""

    field: Field
    coeffs: np.ndarray

    def __post_init__(self):
        if not isinstance(self.coeffs, np.ndarray) or self.coeffs.ndim < 1:
            raise ShapeError("coefficients need at least the output axis")
        if self.coeffs.dtype != object:
            object.__setattr__(self, "coeffs", self.coeffs.astype(object))
        if self.coeffs.ndim - 1 > arity_cap():
            raise ArityCapExceeded(f"arity {self.coeffs.ndim - 1} exceeds the cap {arity_cap()}")

    # ---------------------------
    # Constructors
    # ---------------------------
    @classmethod
    def zeros(cls, field: Field, output_dim: int, input_dims: Sequence[int]) -> MultiMap:
        if len(input_dims) > arity_cap():
            raise ArityCapExceeded(f"arity {len(input_dims)} exceeds the cap {arity_cap()}")
        return cls(field, zeros(field, (output_dim, *input_dims)))

    @classmethod
    def identity(cls, field: Field, dim: int) -> MultiMap:
        c = zeros(field, (dim, dim))
        for i in range(dim):
            c[i, i] = field.one
        return cls(field, c)

    @classmethod
    def from_nested(cls, field: Field, nested: Any, output_dim: int, input_dims: Sequence[int], path: str = "") -> MultiMap:
        shape = (output_dim, *input_dims)
        return cls(field, coeffs_from_nested(field, nested, shape, path))

    @classmethod
    def from_entries(cls, field: Field, output_dim: int, input_dims: Sequence[int], entries: dict) -> MultiMap:
        """Sparse constructor: ``{(j, i_1, ..., i_a): scalar}``."""
        f = cls.zeros(field, output_dim, input_dims)
        for index, value in entries.items():
            f.coeffs[tuple(index)] = field.convert(value)
        return f

    @classmethod
    def from_matrix(cls, field: Field, rows: Sequence[Sequence[Any]]) -> MultiMap:
        """An arity-1 map from its matrix (rows index the output basis)."""
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else 0
        return cls.from_nested(field, rows, len(rows), (width,))

    # ---------------------------
    # Shape
    # ---------------------------
    @property
    def arity(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def output_dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def input_dims(self) -> tuple[int, ...]:
        return tuple(self.coeffs.shape[1:])

    @property
    def degree(self) -> int:
        return self.arity - 1

    def is_square(self) -> bool:
        return all(d == self.output_dim for d in self.input_dims)

    # ---------------------------
    # Linear structure
    # ---------------------------
    def _check_same(self, other: MultiMap) -> None:
        if self.field != other.field:
            raise SpaceMismatch(f"maps over {self.field} and {other.field}")
        if self.coeffs.shape != other.coeffs.shape:
            raise SpaceMismatch(f"shapes {self.coeffs.shape} and {other.coeffs.shape} differ")

    def __add__(self, other: MultiMap) -> MultiMap:
        self._check_same(other)
        return MultiMap(self.field, self.coeffs + other.coeffs)

    def __sub__(self, other: MultiMap) -> MultiMap:
        self._check_same(other)
        return MultiMap(self.field, self.coeffs - other.coeffs)

    def __neg__(self) -> MultiMap:
        return MultiMap(self.field, -self.coeffs)

    def scale(self, s: Any) -> MultiMap:
        return MultiMap(self.field, self.coeffs * self.field.convert(s))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiMap):
            return NotImplemented
        return (
            self.field == other.field
            and self.coeffs.shape == other.coeffs.shape
            and all(a == b for a, b in zip(self.coeffs.flat, other.coeffs.flat))
        )

    __hash__ = None

    def is_zero(self) -> bool:
        zero = self.field.zero
        return all(x == zero for x in self.coeffs.flat)

    def __repr__(self) -> str:
        return f"MultiMap(arity={self.arity}, out={self.output_dim}, in={self.input_dims}, field={self.field})"

    # ---------------------------
    # Evaluation and composition
    # ---------------------------
    def eval(self, *args: Sequence[Any]) -> np.ndarray:
        """Contract the coefficients with one vector per input slot."""
        if len(args) != self.arity:
            raise ShapeError(f"expected {self.arity} arguments, got {len(args)}")
        result = self.coeffs
        for k in range(self.arity - 1, -1, -1):
            v = as_vector(self.field, args[k])
            if v.shape[0] != self.input_dims[k]:
                raise ShapeError(f"argument {k} has dimension {v.shape[0]}, expected {self.input_dims[k]}")
            result = contract(self.field, result, v, [-1], [0])
        return result

    def compose(self, slot: int, inner: MultiMap) -> MultiMap:
        """Plug ``inner`` into input ``slot`` (0-based); its inputs take that slot's place."""
        if inner.output_dim != self.input_dims[slot]:
            raise ShapeError(f"inner output {inner.output_dim} does not fit slot {slot} of dimension {self.input_dims[slot]}")
        if self.arity + inner.arity - 1 > arity_cap():
            raise ArityCapExceeded(f"composition arity {self.arity + inner.arity - 1} exceeds the cap {arity_cap()}")
        t = contract(self.field, self.coeffs, inner.coeffs, [slot + 1], [0])
        # t axes: out, inputs before slot, inputs after slot, inner inputs
        before = list(range(slot))
        after = [slot + inner.arity + i for i in range(self.arity - slot - 1)]
        inner_pos = [slot + i for i in range(inner.arity)]
        return MultiMap(self.field, arrange(t, before + after + inner_pos))

    def compose_all(self, inners: Sequence[MultiMap | None]) -> MultiMap:
        """Plug arity-1 maps into several slots at once (None keeps the slot)."""
        out = self
        for slot, inner in enumerate(inners):
            if inner is not None:
                out = out.compose(slot, inner)
        return out

    def post(self, outer: MultiMap) -> MultiMap:
        """``outer`` applied after this map (``outer`` has arity 1)."""
        if outer.arity != 1 or outer.input_dims[0] != self.output_dim:
            raise ShapeError("post-composition needs an arity-1 map on the output space")
        return MultiMap(self.field, contract(self.field, outer.coeffs, self.coeffs, [1], [0]))

    def permute_inputs(self, order: Sequence[int]) -> MultiMap:
        """The map ``(x_0, ..., x_{a-1}) -> f(x_{order[0]}, ..., x_{order[a-1]})``."""
        return MultiMap(self.field, arrange(self.coeffs, list(order)))

    def to_nested(self) -> list:
        return nested_from_coeffs(self.field, self.coeffs)


def as_vector(field: Field, v: Any) -> np.ndarray:
    if isinstance(v, np.ndarray) and v.dtype == object:
        return v
    return np.array([field.convert(x) for x in v], dtype=object)


def coeffs_from_nested(field: Field, nested: Any, shape: Sequence[int], path: str = "") -> np.ndarray:
    """Parse nested lists of scalars into an object array, checking every level."""
    out = np.empty(tuple(shape), dtype=object)

    def fill(node: Any, depth: int, index: tuple, where: str) -> None:
        if depth == len(shape):
            try:
                out[index] = field.convert(node)
            except ParseError as ex:
                raise ParseError(str(ex), path=where) from ex
            return
        if not isinstance(node, (list, tuple)):
            raise ShapeError(f"expected an array of length {shape[depth]}", path=where or None)
        if len(node) != shape[depth]:
            raise ShapeError(f"expected {shape[depth]} entries, got {len(node)}", path=where or None)
        for i, child in enumerate(node):
            fill(child, depth + 1, index + (i,), f"{where}[{i}]")

    fill(nested, 0, (), path)
    return out


def nested_from_coeffs(field: Field, coeffs: np.ndarray) -> Any:
    if coeffs.ndim == 0:
        return field.format(coeffs[()])
    return [nested_from_coeffs(field, coeffs[i]) for i in range(coeffs.shape[0])]


# ---------------------------------------------------
# Balavoine bracket
# ---------------------------------------------------

def _require_square_pair(f: MultiMap, g: MultiMap) -> None:
    if f.field != g.field:
        raise SpaceMismatch(f"maps over {f.field} and {g.field}")
    if not (f.is_square() and g.is_square()) or f.output_dim != g.output_dim:
        raise SpaceMismatch("the Balavoine bracket needs square maps on one space")
    if f.arity < 1 or g.arity < 1:
        raise ShapeError("the Balavoine bracket needs arity >= 1")


def diamond(f: MultiMap, g: MultiMap) -> MultiMap:
    """
    The composition product ``f <> g``.

    ``(f <> g)(x_1..x_{m+n-1})`` sums, over insertion positions ``i = 1..m``
    with sign ``(-1)^{(i-1)(n-1)}`` and over (i-1, n-1)-shuffles ``s`` with
    their sign, the value ``f(x_s(1..i-1), g(x_s(i..i+n-2), x_{i+n-1}), x_{i+n}, ...)``.

    Raises:
        SpaceMismatch: If f and g are not square maps on one space.
        ArityCapExceeded: If ``m + n - 1`` exceeds the arity cap.
    """
    _require_square_pair(f, g)
    m, n = f.arity, g.arity
    if m + n - 1 > arity_cap():
        raise ArityCapExceeded(f"bracket arity {m + n - 1} exceeds the cap {arity_cap()}")
    field = f.field
    total = zeros(field, (f.output_dim,) * (m + n))
    for i in range(1, m + 1):
        outer_sign = -1 if ((i - 1) * (n - 1)) % 2 else 1
        t = contract(field, f.coeffs, g.coeffs, [i], [0])
        tail = [p + n - 2 for p in range(i + 1, m + 1)]
        for first, second, sign in shuffles(i - 1, n - 1):
            positions = list(first) + tail + list(second) + [i + n - 2]
            term = arrange(t, positions)
            total = total + term if outer_sign * sign == 1 else total - term
    return MultiMap(field, total)


def balavoine_bracket(f: MultiMap, g: MultiMap) -> MultiMap:
    """``[[f, g]] = f <> g - (-1)^{(m-1)(n-1)} g <> f``."""
    fg = diamond(f, g)
    gf = diamond(g, f)
    if ((f.arity - 1) * (g.arity - 1)) % 2:
        return fg + gf
    return fg - gf


def nested_bracket(x: MultiMap, *ys: MultiMap) -> MultiMap:
    """``[[ ... [[x, y_1]], ..., y_k]]``."""
    out = x
    for y in ys:
        out = balavoine_bracket(out, y)
    return out


# ---------------------------------------------------
# Bidegrees
# ---------------------------------------------------

@dataclass(frozen=True, order=True)
class Bidegree:
    """Bidegree ``k|l`` of a map of arity ``k + l + 1`` on a split space."""

    k: int
    l: int

    def __post_init__(self):
        if self.k < -1 or self.l < -1:
            raise ShapeError(f"bidegree {self} out of range")

    @property
    def arity(self) -> int:
        return self.k + self.l + 1

    def __add__(self, other: Bidegree) -> Bidegree:
        return Bidegree(self.k + other.k, self.l + other.l)

    def __str__(self) -> str:
        return f"{self.k}|{self.l}"


class Subalgebra(enum.Enum):
    """Bidegree filters selecting graded Lie subalgebras of the Balavoine algebra."""

    FULL = "full"
    B_PRIME = "b-prime"
    B_DOUBLE_PRIME = "b-double-prime"
    M = "m"
    Q = "q"
    R = "r"
    A = "a"

    def admits(self, bd: Bidegree) -> bool:
        match self:
            case Subalgebra.FULL:
                return True
            case Subalgebra.B_PRIME:
                return bd.l == 0
            case Subalgebra.B_DOUBLE_PRIME:
                return bd.l in (-1, 0)
            case Subalgebra.M:
                return bd.k >= 0 and bd.l >= 0
            case Subalgebra.Q:
                return bd.k >= 0
            case Subalgebra.R:
                return bd.l >= 0
            case Subalgebra.A:
                return bd.k == -1
        return False


@lru_cache(maxsize=None)
def _h_count(dim_g: int, dim_h: int, arity: int) -> np.ndarray:
    """Number of h-factors of every input multi-index, shape ``(d,)*arity``."""
    is_h = np.array([0] * dim_g + [1] * dim_h, dtype=np.int64)
    count = np.zeros((dim_g + dim_h,) * arity, dtype=np.int64)
    for axis in range(arity):
        shape = [1] * arity
        shape[axis] = dim_g + dim_h
        count = count + is_h.reshape(shape)
    return count


@dataclass(frozen=True)
class BlockMap:
    """A map defined on some ordered block summands of ``G^{(x)a}``.

    Attributes:
        target: ``"g"`` or ``"h"``.
        blocks: Pattern (tuple of ``"g"``/``"h"`` per input) to rectangular map.
    """

    target: str
    blocks: dict = dataclass_field(default_factory=dict)


@dataclass(frozen=True)
class SplitSpace:
    """The total space ``G = g (+) h`` with g spanned by the first ``dim_g`` basis vectors."""

    field: Field
    dim_g: int
    dim_h: int

    def __post_init__(self):
        if self.dim_g < 0 or self.dim_h < 0 or self.dim_g + self.dim_h < 1:
            raise ShapeError(f"invalid split dimensions ({self.dim_g}, {self.dim_h})")

    @property
    def dim(self) -> int:
        return self.dim_g + self.dim_h

    def part_dim(self, part: str) -> int:
        return self.dim_g if part == G else self.dim_h

    def indices(self, part: str) -> np.ndarray:
        if part == G:
            return np.arange(0, self.dim_g)
        return np.arange(self.dim_g, self.dim)

    # ---------------------------
    # Vectors
    # ---------------------------
    def vector(self, x: Sequence[Any] | None = None, u: Sequence[Any] | None = None) -> np.ndarray:
        """The vector ``(x, u)`` of G (missing parts are zero)."""
        v = zeros(self.field, (self.dim,))
        if x is not None:
            v[: self.dim_g] = as_vector(self.field, x)
        if u is not None:
            v[self.dim_g:] = as_vector(self.field, u)
        return v

    def basis(self, part: str) -> list[np.ndarray]:
        out = []
        for i in self.indices(part):
            v = zeros(self.field, (self.dim,))
            v[i] = self.field.one
            out.append(v)
        return out

    # ---------------------------
    # Checks
    # ---------------------------
    def require(self, f: MultiMap) -> None:
        if f.field != self.field:
            raise SpaceMismatch(f"map over {f.field} on a space over {self.field}")
        if not f.is_square() or f.output_dim != self.dim:
            raise SpaceMismatch(f"{f!r} is not a map on G of dimension {self.dim}")

    def require_block(self, f: MultiMap, pattern: Sequence[str], target: str, name: str = "block") -> None:
        expected = (self.part_dim(target), *(self.part_dim(p) for p in pattern))
        if f.field != self.field:
            raise SpaceMismatch(f"{name} is over {f.field}, expected {self.field}")
        if f.coeffs.shape != expected:
            raise ShapeError(f"{name} has shape {f.coeffs.shape}, expected {expected}")

    # ---------------------------
    # Lifts and restrictions
    # ---------------------------
    def horizontal_lift(self, c: BlockMap) -> MultiMap:
        """
        Extend a block map by zero to all of ``G^{(x)a} -> G``.

        Raises:
            ShapeError: If the blocks disagree in arity or number of h-factors,
                or a block's shape does not match its pattern.
        """
        if not c.blocks:
            raise ShapeError("a block map needs at least one block")
        patterns = list(c.blocks)
        arity = len(patterns[0])
        h_factors = patterns[0].count(H)
        out = zeros(self.field, (self.dim,) * (arity + 1))
        for pattern, block in c.blocks.items():
            if len(pattern) != arity or pattern.count(H) != h_factors:
                raise ShapeError(f"block pattern {pattern} is inconsistent with {patterns[0]}")
            self.require_block(block, pattern, c.target, name=f"block {''.join(pattern)}")
            index = np.ix_(self.indices(c.target), *(self.indices(p) for p in pattern))
            out[index] = block.coeffs
        return MultiMap(self.field, out)

    def lift(self, block: MultiMap, pattern: Sequence[str], target: str) -> MultiMap:
        return self.horizontal_lift(BlockMap(target, {tuple(pattern): block}))

    def restrict(self, f: MultiMap, pattern: Sequence[str], target: str) -> MultiMap:
        """The block of ``f`` on inputs ``pattern`` projected to ``target``."""
        self.require(f)
        if len(pattern) != f.arity:
            raise ShapeError(f"pattern {tuple(pattern)} does not match arity {f.arity}")
        index = np.ix_(self.indices(target), *(self.indices(p) for p in pattern))
        return MultiMap(self.field, np.array(f.coeffs[index], dtype=object))

    def lift_linear(self, r: MultiMap) -> MultiMap:
        """``r: h -> g`` as the map ``(x, u) -> (r(u), 0)``."""
        return self.lift(r, (H,), G)

    def lift_a(self, f: MultiMap) -> MultiMap:
        """``f: h^{(x)n} -> g`` lifted to ``C^{-1|n}``."""
        return self.lift(f, (H,) * f.arity, G)

    def restrict_a(self, f: MultiMap) -> MultiMap:
        return self.restrict(f, (H,) * f.arity, G)

    def graph_basis(self, r: MultiMap) -> list[np.ndarray]:
        """Basis ``(r(e_u), e_u)`` of the graph of ``r: h -> g``."""
        self.require_block(r, (H,), G, name="r")
        out = []
        for u in range(self.dim_h):
            v = zeros(self.field, (self.dim,))
            v[: self.dim_g] = r.coeffs[:, u]
            v[self.dim_g + u] = self.field.one
            out.append(v)
        return out

    # ---------------------------
    # Bidegrees
    # ---------------------------
    def _mask(self, arity: int, bd: Bidegree) -> np.ndarray:
        count = _h_count(self.dim_g, self.dim_h, arity)
        out_is_h = np.array([False] * self.dim_g + [True] * self.dim_h)
        out_is_h = out_is_h.reshape((self.dim,) + (1,) * arity)
        return np.where(out_is_h, count == bd.l + 1, count == bd.l)

    def component(self, f: MultiMap, bd: Bidegree) -> MultiMap:
        self.require(f)
        if bd.arity != f.arity:
            return MultiMap.zeros(self.field, self.dim, (self.dim,) * f.arity)
        mask = self._mask(f.arity, bd)
        return MultiMap(self.field, np.where(mask, f.coeffs, self.field.zero).astype(object))

    def bidegree_decompose(self, f: MultiMap) -> list[tuple[Bidegree, MultiMap]]:
        """Components of ``f`` for ``k = arity`` down to ``-1``; they sum to ``f``."""
        self.require(f)
        a = f.arity
        return [(Bidegree(k, a - 1 - k), self.component(f, Bidegree(k, a - 1 - k))) for k in range(a, -2, -1)]

    def bidegree_of(self, f: MultiMap) -> Bidegree | None:
        """The unique bidegree of a nonzero pure map, None for mixed or zero maps."""
        nonzero = [bd for bd, c in self.bidegree_decompose(f) if not c.is_zero()]
        return nonzero[0] if len(nonzero) == 1 else None

    def has_bidegree(self, f: MultiMap, bd: Bidegree) -> bool:
        """True if ``f`` vanishes outside the ``bd`` pattern (zero maps have every bidegree)."""
        return all(c.is_zero() for other, c in self.bidegree_decompose(f) if other != bd)

    def project(self, f: MultiMap, sub: Subalgebra) -> MultiMap:
        out = MultiMap.zeros(self.field, self.dim, (self.dim,) * f.arity)
        for bd, c in self.bidegree_decompose(f):
            if sub.admits(bd):
                out = out + c
        return out

    def contains(self, f: MultiMap, sub: Subalgebra) -> bool:
        return all(sub.admits(bd) or c.is_zero() for bd, c in self.bidegree_decompose(f))

    def bracket(self, f: MultiMap, g: MultiMap) -> MultiMap:
        """Balavoine bracket of two maps on this space, logging bidegrees at DEBUG."""
        self.require(f)
        self.require(g)
        out = balavoine_bracket(f, g)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(
                f"[BRACKET] {self.bidegree_of(f)} , {self.bidegree_of(g)} -> {self.bidegree_of(out)}"
            )
        return out

    def nested(self, x: MultiMap, *ys: MultiMap) -> MultiMap:
        out = x
        for y in ys:
            out = self.bracket(out, y)
        return out


def sum_maps(maps: Iterable[MultiMap], start: MultiMap) -> MultiMap:
    out = start
    for m in maps:
        out = out + m
    return out


def scalar_of(field: Field, value: Any) -> FieldScalar:
    return field.convert(value)
