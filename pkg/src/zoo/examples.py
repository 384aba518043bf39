"""
Builders for the worked families of proto-twilled structures.

Each ``ExampleKind`` takes its ingredients from ``ZooInputs`` and produces an
``OmegaStructure`` on ``G = first (+) second``. For most families the first
summand is the algebra ``g`` and the second its carrier; two families put
the carrier first:

- DERIVATION_HOST:  G = V (+) g, so deformation maps are maps ``g -> V``.
- CROSSED_HOM_HOST: G = h (+) g, so deformation maps are maps ``g -> h``.

``build`` validates the ingredients eagerly and names the violated identity
in ``InvalidExampleInput``; ``validate=False`` skips that (used to test the
purely algebraic equivalences on non-Leibniz inputs).
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field as dataclass_field

from src.engine.errors import InvalidExampleInput
from src.engine.exactlin import Field
from src.engine.leibniz import (
    LeibnizAlgebra,
    Representation,
    check_leibniz,
    check_lie,
    check_representation,
    coadjoint_rep,
    is_two_cocycle,
    adjoint_rep,
    trivial_rep,
)
from src.engine.multimap import MultiMap, SplitSpace
from src.engine.prototwilled import OmegaStructure, assemble, check_proto_twilled

logger = logging.getLogger(__name__)


class ExampleKind(enum.Enum):
    DIRECT_PRODUCT = "direct-product"
    SEMIDIRECT = "semidirect"
    DERIVATION_HOST = "derivation-host"
    WEIGHT1_SEMIDIRECT = "weight1-semidirect"
    CROSSED_HOM_HOST = "crossed-hom-host"
    MODIFIED = "modified"
    THETA_TWISTED = "theta-twisted"
    REYNOLDS = "reynolds"
    HEMI_SEMIDIRECT = "hemi-semidirect"
    MATCHED_PAIR = "matched-pair"
    R_MATRIX_HOST = "r-matrix-host"

    @property
    def operator(self) -> str:
        """Name of the operator whose solutions are the deformation maps."""
        return OPERATORS[self]


OPERATORS = {
    ExampleKind.DIRECT_PRODUCT: "homomorphism",
    ExampleKind.SEMIDIRECT: "relative Rota-Baxter operator of weight 0",
    ExampleKind.DERIVATION_HOST: "derivation",
    ExampleKind.WEIGHT1_SEMIDIRECT: "relative Rota-Baxter operator of weight 1",
    ExampleKind.CROSSED_HOM_HOST: "crossed homomorphism",
    ExampleKind.MODIFIED: "modified Rota-Baxter operator",
    ExampleKind.THETA_TWISTED: "theta-twisted Rota-Baxter operator",
    ExampleKind.REYNOLDS: "Reynolds operator",
    ExampleKind.HEMI_SEMIDIRECT: "embedding tensor",
    ExampleKind.MATCHED_PAIR: "deformation map of a matched pair",
    ExampleKind.R_MATRIX_HOST: "classical r-matrix",
}


@dataclass(frozen=True)
class ZooInputs:
    """Ingredients of a family.

    Attributes:
        algebra: The main Leibniz algebra g.
        rep: A representation of ``algebra`` (on the carrier, or on ``other``).
        other: A second Leibniz algebra h (direct products, weight-1 hosts, matched pairs).
        theta: A 2-cocycle ``g (x) g -> V`` for theta-twisted hosts.
        partner: A representation of ``other`` on ``algebra`` (matched pairs).
        form: A symmetric bilinear form on the dual of g, as an arity-1 map ``S[a, b]``.
    """

    algebra: LeibnizAlgebra
    rep: Representation | None = None
    other: LeibnizAlgebra | None = None
    theta: MultiMap | None = None
    partner: Representation | None = None
    form: MultiMap | None = None

    @property
    def field(self) -> Field:
        return self.algebra.field


def _need(value, kind: ExampleKind, what: str):
    if value is None:
        raise InvalidExampleInput("inputs", f"{kind.value} needs {what}")
    return value


def rep_of(kind: ExampleKind, inputs: ZooInputs) -> Representation:
    """The representation a family is built from (coadjoint for r-matrix hosts)."""
    if kind is ExampleKind.R_MATRIX_HOST:
        return coadjoint_rep(inputs.algebra)
    return _need(inputs.rep, kind, "a representation")


def space_of(kind: ExampleKind, inputs: ZooInputs) -> SplitSpace:
    field, n = inputs.field, inputs.algebra.dim
    match kind:
        case ExampleKind.DIRECT_PRODUCT | ExampleKind.MATCHED_PAIR | ExampleKind.WEIGHT1_SEMIDIRECT:
            return SplitSpace(field, n, _need(inputs.other, kind, "a second algebra").dim)
        case ExampleKind.CROSSED_HOM_HOST:
            return SplitSpace(field, _need(inputs.other, kind, "a second algebra").dim, n)
        case ExampleKind.DERIVATION_HOST:
            return SplitSpace(field, rep_of(kind, inputs).carrier_dim, n)
        case ExampleKind.MODIFIED | ExampleKind.REYNOLDS:
            return SplitSpace(field, n, n)
        case _:
            return SplitSpace(field, n, rep_of(kind, inputs).carrier_dim)


# ---------------------------------------------------
# Validation
# ---------------------------------------------------

def weight_one_residuals(algebra: LeibnizAlgebra, other: LeibnizAlgebra, rep: Representation) -> dict[str, MultiMap]:
    """
    Compatibility of an action of g on the algebra h with the bracket of h:

        rho_L(x,[u,v]) = [rho_L(x,u),v] + [u,rho_L(x,v)]      inputs (x, u, v)
        [u,rho_L(x,v)] = [rho_R(u,x),v] + rho_L(x,[u,v])      inputs (u, x, v)
        [u,rho_R(v,x)] = rho_R([u,v],x) + [v,rho_R(u,x)]      inputs (u, v, x)
    """
    b, L, R = other.bracket, rep.rho_left, rep.rho_right
    swap = [1, 0, 2]
    return {
        "weight-1 left derivation": L.compose(1, b) - b.compose(0, L) - b.compose(1, L).permute_inputs(swap),
        "weight-1 mixed": b.compose(1, L) - b.compose(0, R) - L.compose(1, b).permute_inputs(swap),
        "weight-1 right derivation": b.compose(1, R) - R.compose(0, b) - b.compose(1, R).permute_inputs(swap),
    }


def _require_leibniz(algebra: LeibnizAlgebra, name: str) -> None:
    if not check_leibniz(algebra.bracket).ok:
        raise InvalidExampleInput("leibniz", f"{name} violates the Leibniz identity")


def _require_rep(rep: Representation, name: str) -> None:
    report = check_representation(rep.algebra, rep.rho_left, rep.rho_right)
    if not report.ok:
        broken = [k for k, vs in report.identities.items() if vs]
        raise InvalidExampleInput("representation", f"{name}: {', '.join(broken)}")


def validate_inputs(kind: ExampleKind, inputs: ZooInputs) -> None:
    """
    Check the hypotheses a family places on its ingredients.

    Raises:
        InvalidExampleInput: With the violated identity as ``identity``.
    """
    _require_leibniz(inputs.algebra, "g")
    if inputs.other is not None:
        _require_leibniz(inputs.other, "h")
    match kind:
        case ExampleKind.SEMIDIRECT | ExampleKind.DERIVATION_HOST | ExampleKind.R_MATRIX_HOST:
            _require_rep(rep_of(kind, inputs), "representation")
        case ExampleKind.WEIGHT1_SEMIDIRECT | ExampleKind.CROSSED_HOM_HOST:
            rep = rep_of(kind, inputs)
            other = _need(inputs.other, kind, "a second algebra")
            _require_rep(rep, "action on h")
            for name, residual in weight_one_residuals(inputs.algebra, other, rep).items():
                if not residual.is_zero():
                    raise InvalidExampleInput(name)
        case ExampleKind.THETA_TWISTED:
            rep = rep_of(kind, inputs)
            _require_rep(rep, "representation")
            theta = _need(inputs.theta, kind, "a 2-cocycle")
            if not is_two_cocycle(theta, inputs.algebra, rep):
                raise InvalidExampleInput("2-cocycle", "theta is not closed under the coboundary")
        case ExampleKind.HEMI_SEMIDIRECT:
            if not check_lie(inputs.algebra.bracket):
                raise InvalidExampleInput("lie", "the hemi-semidirect product needs a Lie algebra")
            rep = rep_of(kind, inputs)
            if not rep.rho_right.is_zero():
                raise InvalidExampleInput("hemi right action", "the right action must be zero")
            _require_rep(rep, "Lie representation")
        case ExampleKind.MATCHED_PAIR:
            _require_rep(rep_of(kind, inputs), "action of g on h")
            _require_rep(_need(inputs.partner, kind, "an action of h on g"), "action of h on g")


# ---------------------------------------------------
# Build
# ---------------------------------------------------

def _components(kind: ExampleKind, inputs: ZooInputs) -> dict[str, MultiMap]:
    b = inputs.algebra.bracket
    match kind:
        case ExampleKind.DIRECT_PRODUCT:
            return {"bracket_g": b, "bracket_h": inputs.other.bracket}
        case ExampleKind.SEMIDIRECT | ExampleKind.R_MATRIX_HOST | ExampleKind.HEMI_SEMIDIRECT:
            rep = rep_of(kind, inputs)
            return {"bracket_g": b, "rho_left": rep.rho_left, "rho_right": rep.rho_right}
        case ExampleKind.DERIVATION_HOST:
            rep = rep_of(kind, inputs)
            return {"bracket_h": b, "psi_left": rep.rho_left, "psi_right": rep.rho_right}
        case ExampleKind.WEIGHT1_SEMIDIRECT:
            rep = rep_of(kind, inputs)
            return {"bracket_g": b, "bracket_h": inputs.other.bracket, "rho_left": rep.rho_left, "rho_right": rep.rho_right}
        case ExampleKind.CROSSED_HOM_HOST:
            rep = rep_of(kind, inputs)
            return {"bracket_g": inputs.other.bracket, "bracket_h": b, "psi_left": rep.rho_left, "psi_right": rep.rho_right}
        case ExampleKind.MODIFIED:
            return {"bracket_g": b, "eta": b, "rho_left": b, "rho_right": b}
        case ExampleKind.THETA_TWISTED:
            rep = rep_of(kind, inputs)
            return {"bracket_g": b, "rho_left": rep.rho_left, "rho_right": rep.rho_right, "theta": inputs.theta}
        case ExampleKind.REYNOLDS:
            return {"bracket_g": b, "rho_left": b, "rho_right": b, "theta": -b}
        case ExampleKind.MATCHED_PAIR:
            rep, partner = rep_of(kind, inputs), _need(inputs.partner, kind, "an action of h on g")
            return {
                "bracket_g": b,
                "bracket_h": inputs.other.bracket,
                "rho_left": rep.rho_left,
                "rho_right": rep.rho_right,
                "psi_left": partner.rho_left,
                "psi_right": partner.rho_right,
            }
    raise InvalidExampleInput("kind", f"unknown example kind {kind!r}")


def build(kind: ExampleKind, inputs: ZooInputs, validate: bool = True) -> OmegaStructure:
    """
    Assemble the Omega of a family.

    Raises:
        InvalidExampleInput: If validation is on and an ingredient breaks its identity.
    """
    if validate:
        validate_inputs(kind, inputs)
    omega = assemble(space_of(kind, inputs), **_components(kind, inputs))
    if validate and not check_proto_twilled(omega).ok:
        raise InvalidExampleInput("leibniz", f"the assembled {kind.value} bracket is not Leibniz")
    logger.info(f"[ZOO] built {kind.value} on dims ({omega.space.dim_g}, {omega.space.dim_h})")
    return omega


def inputs_from_omega(kind: ExampleKind, omega: OmegaStructure) -> ZooInputs:
    """Read the family's ingredients back out of an assembled Omega (no validation)."""
    first = LeibnizAlgebra(omega.bracket_g)
    second = LeibnizAlgebra(omega.bracket_h)
    match kind:
        case ExampleKind.DIRECT_PRODUCT:
            return ZooInputs(first, other=second)
        case ExampleKind.SEMIDIRECT | ExampleKind.HEMI_SEMIDIRECT | ExampleKind.R_MATRIX_HOST:
            return ZooInputs(first, rep=Representation(first, omega.rho_left, omega.rho_right))
        case ExampleKind.THETA_TWISTED:
            return ZooInputs(first, rep=Representation(first, omega.rho_left, omega.rho_right), theta=omega.theta)
        case ExampleKind.DERIVATION_HOST:
            return ZooInputs(second, rep=Representation(second, omega.psi_left, omega.psi_right))
        case ExampleKind.WEIGHT1_SEMIDIRECT:
            return ZooInputs(first, rep=Representation(first, omega.rho_left, omega.rho_right), other=second)
        case ExampleKind.CROSSED_HOM_HOST:
            return ZooInputs(second, rep=Representation(second, omega.psi_left, omega.psi_right), other=first)
        case ExampleKind.MODIFIED | ExampleKind.REYNOLDS:
            return ZooInputs(first)
        case ExampleKind.MATCHED_PAIR:
            return ZooInputs(
                first,
                rep=Representation(first, omega.rho_left, omega.rho_right),
                other=second,
                partner=Representation(second, omega.psi_left, omega.psi_right),
            )
    raise InvalidExampleInput("kind", f"unknown example kind {kind!r}")


def matches_family(kind: ExampleKind, omega: OmegaStructure) -> bool:
    """True if rebuilding ``omega`` from its own ingredients gives it back."""
    return build(kind, inputs_from_omega(kind, omega), validate=False) == omega


def map_shape(kind: ExampleKind, inputs: ZooInputs) -> tuple[int, int]:
    """``(output dim, input dim)`` of the family's candidate maps ``h -> g``."""
    space = space_of(kind, inputs)
    return space.dim_g, space.dim_h


# ---------------------------------------------------
# Catalogue
# ---------------------------------------------------

def dim2_algebra(field: Field) -> LeibnizAlgebra:
    """The two-dimensional non-Lie Leibniz algebra ``[e1, e1] = e2``."""
    return LeibnizAlgebra.from_structure_constants(field, 2, {(1, 0, 0): 1})


def unit_algebra(field: Field) -> LeibnizAlgebra:
    """The one-dimensional bracket ``[e, e] = e`` (not Leibniz: e = 2e fails)."""
    return LeibnizAlgebra.from_structure_constants(field, 1, {(0, 0, 0): 1})


@dataclass
class CatalogueEntry:
    name: str
    kind: ExampleKind
    inputs: ZooInputs
    maps: dict[str, MultiMap] = dataclass_field(default_factory=dict)


def _linear(field: Field, rows: list[list[int]]) -> MultiMap:
    return MultiMap.from_matrix(field, rows)


def standard_catalogue(field: Field) -> dict[str, CatalogueEntry]:
    """Named inputs for every family, each with a zero map and a few candidates."""
    a2 = dim2_algebra(field)
    ab1 = LeibnizAlgebra.abelian(field, 1)
    ab2 = LeibnizAlgebra.abelian(field, 2)

    hemi_rho = MultiMap.from_entries(field, 2, (2, 2), {(0, 0, 0): 1, (1, 0, 1): 1})
    hemi_rep = Representation(ab2, hemi_rho, MultiMap.zeros(field, 2, (2, 2)))

    theta = MultiMap.from_entries(field, 1, (2, 2), {(0, 0, 0): 1})

    # g acts on h = span(f) by the character e1* ; h acts on g by e1 -> e2
    mp_rep = Representation(
        a2,
        MultiMap.from_entries(field, 1, (2, 1), {(0, 0, 0): 1}),
        MultiMap.from_entries(field, 1, (1, 2), {(0, 0, 0): -1}),
    )
    mp_partner = Representation(
        ab1,
        MultiMap.from_entries(field, 2, (1, 2), {(1, 0, 0): 1}),
        MultiMap.from_entries(field, 2, (2, 1), {(1, 0, 0): -1}),
    )

    form = MultiMap.from_entries(field, 2, (2,), {(1, 1): 1})

    zero_21 = _linear(field, [[0], [0]])
    zero_22 = _linear(field, [[0, 0], [0, 0]])
    ident_22 = _linear(field, [[1, 0], [0, 1]])
    entries = [
        CatalogueEntry(
            "dim2-dim1-semidirect", ExampleKind.SEMIDIRECT, ZooInputs(a2, rep=trivial_rep(a2, 1)),
            {"r0": zero_21, "r": _linear(field, [[0], [1]]), "bad": _linear(field, [[1], [0]])},
        ),
        CatalogueEntry(
            "dim2-direct-product", ExampleKind.DIRECT_PRODUCT, ZooInputs(a2, other=a2),
            {"r0": zero_22, "identity": ident_22, "bad": _linear(field, [[1, 0], [0, 0]])},
        ),
        CatalogueEntry(
            "dim2-derivation-host", ExampleKind.DERIVATION_HOST, ZooInputs(a2, rep=adjoint_rep(a2)),
            {"r0": zero_22, "scaling": _linear(field, [[1, 0], [0, 2]]), "bad": _linear(field, [[0, 1], [0, 0]])},
        ),
        CatalogueEntry(
            "dim2-weight1-semidirect", ExampleKind.WEIGHT1_SEMIDIRECT, ZooInputs(a2, rep=adjoint_rep(a2), other=a2),
            {"r0": zero_22, "minus-identity": _linear(field, [[-1, 0], [0, -1]]), "bad": ident_22},
        ),
        CatalogueEntry(
            "dim2-crossed-hom-host", ExampleKind.CROSSED_HOM_HOST, ZooInputs(a2, rep=adjoint_rep(a2), other=a2),
            {"r0": zero_22, "minus-identity": _linear(field, [[-1, 0], [0, -1]]), "bad": ident_22},
        ),
        CatalogueEntry(
            "dim2-modified", ExampleKind.MODIFIED, ZooInputs(a2),
            {"r0": zero_22, "identity": ident_22, "bad": _linear(field, [[1, 0], [0, 0]])},
        ),
        CatalogueEntry(
            "dim2-theta-twisted", ExampleKind.THETA_TWISTED, ZooInputs(a2, rep=trivial_rep(a2, 1), theta=theta),
            {"r0": zero_21, "r": _linear(field, [[0], [1]]), "bad": _linear(field, [[1], [0]])},
        ),
        CatalogueEntry(
            "dim2-reynolds", ExampleKind.REYNOLDS, ZooInputs(a2),
            {"r0": zero_22, "identity": ident_22, "bad": _linear(field, [[1, 0], [0, 0]])},
        ),
        CatalogueEntry(
            "abelian-hemi-semidirect", ExampleKind.HEMI_SEMIDIRECT, ZooInputs(ab2, rep=hemi_rep),
            {"r0": zero_22, "second-row": _linear(field, [[0, 0], [1, 1]]), "bad": _linear(field, [[1, 0], [0, 0]])},
        ),
        CatalogueEntry(
            "dim2-dim1-matched-pair", ExampleKind.MATCHED_PAIR,
            ZooInputs(a2, rep=mp_rep, other=ab1, partner=mp_partner),
            {"r0": zero_21, "r": _linear(field, [[0], [1]]), "bad": _linear(field, [[1], [0]])},
        ),
        CatalogueEntry(
            "dim2-r-matrix", ExampleKind.R_MATRIX_HOST, ZooInputs(a2, form=form),
            {"r0": zero_22, "s-sharp": _linear(field, [[0, 0], [0, 1]]), "bad": _linear(field, [[1, 0], [0, 0]])},
        ),
    ]
    return {entry.name: entry for entry in entries}

