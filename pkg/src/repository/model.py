"""
Document model for proto-twilled structures stored as JSON.

- AlgebraDocument:
    One Omega on ``G = g (+) h`` plus named candidate maps ``h -> g``.
    The eight component maps are nested arrays ``c[j][i_1][i_2]`` of scalar
    strings; absent components are zero. Linear maps are ``[dim_g][dim_h]``
    arrays (row ``j`` holds the coefficients of ``e_j``).

Layout of a document::

    {
      "schema": 1,
      "field": {"kind": "prime", "p": 5},
      "dim_g": 2,
      "dim_h": 1,
      "maps": {"bracket_g": [...], "rho_left": [...]},
      "linear_maps": {"r": [["0"], ["1"]]},
      "name": "dim2-dim1-semidirect",
      "kind": "semidirect"
    }

Parsing stops at the first violation and reports its location in the
document (``maps.bracket_g[0]``, ``linear_maps.r[1]``, ``dim_h``...).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Any

from src.engine.errors import ParseError
from src.engine.exactlin import Field
from src.engine.multimap import MultiMap, SplitSpace
from src.engine.prototwilled import COMPONENTS, OmegaStructure, assemble

SCHEMA_VERSION = 1


# ---------------------------------------------------
# Parsing helpers
# ---------------------------------------------------

def _dimension(data: dict, key: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParseError(f"expected a non-negative integer, got {value!r}", path=key)
    return value


def _shape(space: SplitSpace, name: str) -> tuple[int, tuple[int, ...]]:
    pattern, target = COMPONENTS[name]
    return space.part_dim(target), tuple(space.part_dim(p) for p in pattern)


# ---------------------------------------------------
# AlgebraDocument
# ---------------------------------------------------

@dataclass
class AlgebraDocument:
    """A parsed document.

    Attributes:
        field: Ground field of every scalar.
        dim_g: Dimension of the first summand.
        dim_h: Dimension of the second summand.
        maps: All eight components, zero where the document omits them.
        linear_maps: Named candidate maps ``h -> g``.
        name: Optional display name.
        kind: Optional family hint (an ``ExampleKind`` value).
    """

    field: Field
    dim_g: int
    dim_h: int
    maps: dict[str, MultiMap]
    linear_maps: dict[str, MultiMap] = dataclass_field(default_factory=dict)
    name: str | None = None
    kind: str | None = None

    @property
    def space(self) -> SplitSpace:
        return SplitSpace(self.field, self.dim_g, self.dim_h)

    # ---------------------------
    # Dict conversion
    # ---------------------------
    @classmethod
    def from_dict(cls, data: Any, field_override: Field | None = None) -> AlgebraDocument:
        """
        Validate and parse a decoded JSON document.

        Args:
            data: The decoded JSON value.
            field_override: Parse every scalar in this field instead of the declared one.

        Raises:
            ParseError: On a missing or malformed header entry or scalar.
            ShapeError: On an array whose length does not match the declared dims.
        """
        if not isinstance(data, dict):
            raise ParseError("a document must be a JSON object")
        if data.get("schema") != SCHEMA_VERSION:
            raise ParseError(f"unsupported schema {data.get('schema')!r} (expected {SCHEMA_VERSION})", path="schema")
        descriptor = data.get("field")
        if not isinstance(descriptor, dict):
            raise ParseError("expected a field descriptor object", path="field")
        field = field_override or Field.from_descriptor(descriptor)
        dim_g, dim_h = _dimension(data, "dim_g"), _dimension(data, "dim_h")
        if dim_g + dim_h == 0:
            raise ParseError("g and h cannot both be zero-dimensional", path="dim_g")
        space = SplitSpace(field, dim_g, dim_h)

        raw_maps = data.get("maps", {})
        if not isinstance(raw_maps, dict):
            raise ParseError("expected an object of component maps", path="maps")
        maps = {}
        for name, nested in raw_maps.items():
            if name not in COMPONENTS:
                raise ParseError(f"unknown component {name!r} (known: {', '.join(COMPONENTS)})", path=f"maps.{name}")
            out_dim, in_dims = _shape(space, name)
            maps[name] = MultiMap.from_nested(field, nested, out_dim, in_dims, path=f"maps.{name}")
        maps = assemble(space, **maps).components()

        raw_linear = data.get("linear_maps", {})
        if not isinstance(raw_linear, dict):
            raise ParseError("expected an object of linear maps", path="linear_maps")
        linear_maps = {
            name: MultiMap.from_nested(field, nested, dim_g, (dim_h,), path=f"linear_maps.{name}")
            for name, nested in raw_linear.items()
        }

        for key in ("name", "kind"):
            if data.get(key) is not None and not isinstance(data[key], str):
                raise ParseError(f"expected a string, got {data[key]!r}", path=key)

        return cls(
            field=field,
            dim_g=dim_g,
            dim_h=dim_h,
            maps=maps,
            linear_maps=linear_maps,
            name=data.get("name"),
            kind=data.get("kind"),
        )

    def to_dict(self) -> dict:
        """The JSON form; zero components are left out."""
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "field": self.field.descriptor(),
            "dim_g": self.dim_g,
            "dim_h": self.dim_h,
            "maps": {name: f.to_nested() for name, f in self.maps.items() if not f.is_zero()},
            "linear_maps": {name: r.to_nested() for name, r in self.linear_maps.items()},
        }
        if self.name is not None:
            out["name"] = self.name
        if self.kind is not None:
            out["kind"] = self.kind
        return out

    # ---------------------------
    # Engine objects
    # ---------------------------
    def to_omega(self) -> OmegaStructure:
        return assemble(self.space, **self.maps)

    @classmethod
    def from_omega(
        cls,
        omega: OmegaStructure,
        linear_maps: dict[str, MultiMap] | None = None,
        name: str | None = None,
        kind: str | None = None,
    ) -> AlgebraDocument:
        space = omega.space
        return cls(
            field=space.field,
            dim_g=space.dim_g,
            dim_h=space.dim_h,
            maps=omega.components(),
            linear_maps=dict(linear_maps or {}),
            name=name,
            kind=kind,
        )

    def linear_map(self, name: str) -> MultiMap:
        """
        Raises:
            ParseError: If the document has no linear map called ``name``.
        """
        if name not in self.linear_maps:
            known = ", ".join(sorted(self.linear_maps)) or "none"
            raise ParseError(f"unknown map {name!r} (known: {known})", path=f"linear_maps.{name}")
        return self.linear_maps[name]
