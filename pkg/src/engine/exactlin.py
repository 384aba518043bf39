"""
Exact scalars and dense linear algebra.

This module wraps sympy's exact domains so the rest of the engine never
touches floating point:

- Field:
    The ground field, either the rationals (sympy ``QQ``) or a prime field
    (sympy ``GF(p)`` with residues kept in ``[0, p)``). It parses and formats
    scalar strings and converts Python numbers into domain elements.

- Matrix:
    A dense row-major matrix over one Field. Rank, kernel and solving all go
    through one reduced row echelon computation done by sympy's
    ``DomainMatrix``, so results are deterministic (pivots are the first
    nonzero columns, in column order).

Scalars are plain sympy domain elements (``QQ.dtype`` or the modular
integer type of ``GF(p)``). They are immutable, hashable and carry their own
exact arithmetic, so they can sit in numpy ``object`` arrays.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Sequence

from sympy import GF, QQ, isprime
from sympy.polys.matrices import DomainMatrix

from src.engine.errors import (
    CharacteristicTooSmall,
    DivisionByZero,
    FieldMismatch,
    ParseError,
    ShapeError,
)

logger = logging.getLogger(__name__)

_SCALAR = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

FieldScalar = Any


# ---------------------------------------------------
# Field
# ---------------------------------------------------

@dataclass(frozen=True)
class Field:
    """The ground field: rationals when ``modulus`` is None, else GF(modulus)."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and not isprime(self.modulus):
            raise ValueError(f"Field modulus must be prime, got {self.modulus}")

    @classmethod
    def rational(cls) -> Field:
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> Field:
        return cls(int(p))

    @classmethod
    def from_descriptor(cls, descriptor: dict) -> Field:
        """Build a field from ``{"kind": "rational"}`` or ``{"kind": "prime", "p": 5}``."""
        kind = descriptor.get("kind")
        if kind == "rational":
            return cls.rational()
        if kind == "prime":
            p = descriptor.get("p")
            if not isinstance(p, int) or p < 2 or not isprime(p):
                raise ParseError(f"prime field needs a prime 'p', got {p!r}", path="field.p")
            return cls.prime(p)
        raise ParseError(f"unknown field kind {kind!r}", path="field.kind")

    @classmethod
    def from_flag(cls, text: str) -> Field:
        """Parse the CLI spelling: ``rational`` or ``prime:5``."""
        if text == "rational":
            return cls.rational()
        kind, _, p = text.partition(":")
        if kind == "prime" and p.isdigit():
            return cls.from_descriptor({"kind": "prime", "p": int(p)})
        raise ParseError(f"unknown field flag {text!r} (use 'rational' or 'prime:P')")

    # ---------------------------
    # Descriptors
    # ---------------------------
    @property
    def kind(self) -> str:
        return "rational" if self.modulus is None else "prime"

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    def descriptor(self) -> dict:
        if self.modulus is None:
            return {"kind": "rational"}
        return {"kind": "prime", "p": self.modulus}

    def __str__(self) -> str:
        return "QQ" if self.modulus is None else f"GF({self.modulus})"

    @cached_property
    def domain(self):
        return QQ if self.modulus is None else GF(self.modulus, symmetric=False)

    @property
    def zero(self) -> FieldScalar:
        return self.domain.zero

    @property
    def one(self) -> FieldScalar:
        return self.domain.one

    # ---------------------------
    # Conversion
    # ---------------------------
    def contains(self, x: Any) -> bool:
        """True if ``x`` is already an element of this field's domain."""
        if not self.domain.of_type(x):
            return False
        mod = getattr(x, "mod", None)
        return mod is None or mod == self.modulus

    def convert(self, value: Any) -> FieldScalar:
        """Turn an int, Fraction, scalar string or own element into a scalar.

        Raises:
            FieldMismatch: If ``value`` is an element of another field.
            ParseError: If a string is not a valid scalar.
            DivisionByZero: If a fraction's denominator vanishes in the field.
        """
        if isinstance(value, bool):
            raise FieldMismatch(f"booleans are not scalars of {self}")
        if isinstance(value, int):
            return self.domain(value)
        if isinstance(value, Fraction):
            return self.fraction(value.numerator, value.denominator)
        if isinstance(value, str):
            return self.parse(value)
        if self.contains(value):
            return value
        raise FieldMismatch(f"{value!r} ({type(value).__name__}) is not an element of {self}")

    def parse(self, text: str) -> FieldScalar:
        match = _SCALAR.match(text)
        if match is None:
            raise ParseError(f"not an exact scalar: {text!r}")
        num = int(match.group(1))
        den = int(match.group(2)) if match.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return self.fraction(num, den)

    def fraction(self, num: int, den: int = 1) -> FieldScalar:
        if self.modulus is None:
            return QQ(num, den)
        return self.div(self.domain(num), self.domain(den))

    def div(self, a: FieldScalar, b: FieldScalar) -> FieldScalar:
        if b == self.zero:
            raise DivisionByZero(f"division by zero in {self}")
        return a / b

    def format(self, x: FieldScalar) -> str:
        """Canonical scalar string: ``"a/b"``, ``"a"`` or a residue in ``[0, p)``."""
        if self.modulus is None:
            num, den = int(x.numerator), int(x.denominator)
            return str(num) if den == 1 else f"{num}/{den}"
        return str(int(self.domain.to_int(x)) % self.modulus)

    def require_characteristic_above(self, n: int, what: str) -> None:
        """Reject fields where some of 2, ..., n is not invertible."""
        if self.modulus is not None and self.modulus <= n:
            raise CharacteristicTooSmall(
                f"{what} needs characteristic 0 or > {n}, got {self}"
            )

    def elements(self) -> list[FieldScalar]:
        """All elements of a prime field, in residue order."""
        if self.modulus is None:
            raise FieldMismatch("the rationals cannot be enumerated")
        return [self.domain(i) for i in range(self.modulus)]


# ---------------------------------------------------
# Matrix
# ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class Matrix:
    """Dense row-major matrix over a single Field."""

    field: Field
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError(f"negative matrix shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"expected {self.rows * self.cols} entries for {self.rows}x{self.cols}, "
                f"got {len(self.entries)}"
            )
        for x in self.entries:
            if not self.field.contains(x):
                raise FieldMismatch(f"matrix entry {x!r} is not an element of {self.field}")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[Any]], cols: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        for i, r in enumerate(rows):
            if len(r) != width:
                raise ShapeError(f"row {i} has {len(r)} entries, expected {width}")
        entries = tuple(field.convert(x) for r in rows for x in r)
        return cls(field, len(rows), width, entries)

    @classmethod
    def from_columns(cls, field: Field, rows: int, columns: Sequence[Sequence[Any]]) -> Matrix:
        for j, c in enumerate(columns):
            if len(c) != rows:
                raise ShapeError(f"column {j} has {len(c)} entries, expected {rows}")
        entries = tuple(field.convert(columns[j][i]) for i in range(rows) for j in range(len(columns)))
        return cls(field, rows, len(columns), entries)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> Matrix:
        return cls(field, rows, cols, (field.zero,) * (rows * cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        entries = tuple(field.one if i == j else field.zero for i in range(n) for j in range(n))
        return cls(field, n, n, entries)

    def entry(self, i: int, j: int) -> FieldScalar:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_lists(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def matvec(self, v: Sequence[FieldScalar]) -> tuple:
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} against {self.cols} columns")
        zero = self.field.zero
        out = []
        for i in range(self.rows):
            acc = zero
            for j in range(self.cols):
                acc += self.entries[i * self.cols + j] * v[j]
            out.append(acc)
        return tuple(out)

    # ---------------------------
    # Row reduction
    # ---------------------------
    def rref(self) -> tuple[list[list], tuple[int, ...]]:
        """Reduced row echelon form (as row lists) and pivot columns."""
        if self.rows == 0 or self.cols == 0:
            return self.to_lists(), ()
        dm = DomainMatrix(self.to_lists(), (self.rows, self.cols), self.field.domain)
        reduced, pivots = dm.rref()
        out = reduced.to_list()
        for i, p in enumerate(pivots):
            lead = out[i][p]
            if lead != self.field.one:
                out[i] = [self.field.div(x, lead) for x in out[i]]
        return out, tuple(int(p) for p in pivots)


def rank(m: Matrix) -> int:
    """Rank of ``m`` over its field."""
    _, pivots = m.rref()
    logger.debug(f"[LINALG] rank of {m.rows}x{m.cols} over {m.field} = {len(pivots)}")
    return len(pivots)


def kernel_basis(m: Matrix) -> list[tuple]:
    """
    Basis of the right null space of ``m``.

    One vector per free column, in increasing column order; each has a 1 in
    its free column and zeros in the other free columns.
    """
    reduced, pivots = m.rref()
    field = m.field
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * m.cols
        v[f] = field.one
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, b: Sequence[Any]) -> tuple | None:
    """
    Some solution ``x`` of ``m @ x = b`` (free variables set to zero), or None.

    Raises:
        ShapeError: If ``len(b) != m.rows``.
    """
    if len(b) != m.rows:
        raise ShapeError(f"right-hand side of length {len(b)} against {m.rows} rows")
    field = m.field
    rhs = [field.convert(x) for x in b]
    augmented = Matrix(
        field,
        m.rows,
        m.cols + 1,
        tuple(x for i in range(m.rows) for x in (*m.row(i), rhs[i])),
    )
    reduced, pivots = augmented.rref()
    if m.cols in pivots:
        return None
    x = [field.zero] * m.cols
    for i, p in enumerate(pivots):
        x[p] = reduced[i][m.cols]
    return tuple(x)
