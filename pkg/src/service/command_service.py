"""
One method per CLI subcommand.

Every method loads its document through the read repository, runs one
engine operation and returns a ``Report`` whose verdict is backed by the
evidence it carries (residual tensors, equation tables, dimension tables).
Engine errors propagate unchanged; the CLI turns them into exit code 2.
"""

from __future__ import annotations

import logging
from pathlib import Path

from src.cli.report import Report
from src.engine.errors import ParseError
from src.engine.exactlin import Field
from src.engine.leibniz import (
    LeibnizAlgebra,
    Violation,
    adjoint_rep,
    check_leibniz,
    check_representation,
    coadjoint_rep,
    cohomology_dimensions,
    trivial_rep,
)
from src.engine.linfty import (
    GradedElement,
    controlling_algebra,
    governing_algebra,
    mc_defect,
    pair_algebra,
    pair_element,
)
from src.engine.multimap import Subalgebra
from src.engine.prototwilled import (
    check_proto_twilled,
    deformation_cohomology,
    induced_bracket,
    induced_representation,
    is_deformation_map,
    quasi_twilled_blocks,
    split,
    twist_omega,
)
from src.repository.model import AlgebraDocument
from src.repository.repository import ModifyDocumentRepository, ReadDocumentRepository
from src.zoo.enumeration import candidate_map, check_budget, enumerate_deformation_maps
from src.zoo.examples import ExampleKind, build, standard_catalogue
from src.zoo.operators import equivalence_check, specialized_algebra, zoo_inputs_for

logger = logging.getLogger(__name__)

REPRESENTATIONS = ("adjoint", "coadjoint", "trivial")
PARTS = ("total", "g", "h")


def _violation_rows(violations: list[Violation], field: Field) -> list[dict]:
    return [
        {
            "identity": v.identity,
            "inputs": list(v.inputs),
            "residual": [field.format(x) for x in v.residual],
        }
        for v in violations
    ]


def _graded_residuals(element: GradedElement) -> dict[str, list]:
    out = {}
    for (suspended, arity), f in element.split():
        out[f"{'s' if suspended else 'a'}{arity}"] = f.to_nested()
    return out


def _subalgebra(name: str) -> Subalgebra:
    try:
        return Subalgebra(name)
    except ValueError as ex:
        raise ParseError(f"unknown subalgebra {name!r}") from ex


def _kind(doc: AlgebraDocument) -> ExampleKind:
    if doc.kind is None:
        raise ParseError("the document carries no family hint", path="kind")
    try:
        return ExampleKind(doc.kind)
    except ValueError as ex:
        raise ParseError(f"unknown family {doc.kind!r}", path="kind") from ex


class CommandService:
    """Runs subcommands against documents on disk."""

    def __init__(
        self,
        read_repo: ReadDocumentRepository | None = None,
        modify_repo: ModifyDocumentRepository | None = None,
    ):
        self.read_repo = read_repo or ReadDocumentRepository()
        self.modify_repo = modify_repo or ModifyDocumentRepository()

    def _load(self, path: str | Path, field: Field | None) -> AlgebraDocument:
        return self.read_repo.load(path, field)

    # ------------------------------------------------------------------
    # Structure checks
    # ------------------------------------------------------------------
    def check_leibniz(self, path: str | Path, part: str = "total", field: Field | None = None) -> Report:
        """Leibniz identity of Omega (``total``) or of one summand's bracket."""
        doc = self._load(path, field)
        omega = doc.to_omega()
        brackets = {"total": omega.omega, "g": omega.bracket_g, "h": omega.bracket_h}
        if part not in brackets:
            raise ParseError(f"unknown part {part!r} (use {', '.join(PARTS)})")
        result = check_leibniz(brackets[part])
        logger.info(f"[COMMAND] check-leibniz {path} part={part}: {result.ok}")
        return Report(
            command="check-leibniz",
            args={"document": str(path), "part": part},
            verdict=result.ok,
            details={"dimension": brackets[part].output_dim, "mc_zero": result.mc_zero},
            tables={"violations": _violation_rows(result.violations, doc.field)},
        )

    def check_proto(self, path: str | Path, field: Field | None = None) -> Report:
        doc = self._load(path, field)
        result = check_proto_twilled(doc.to_omega())
        logger.info(f"[COMMAND] check-proto {path}: {result.ok}")
        return Report(
            command="check-proto",
            args={"document": str(path)},
            verdict=result.ok,
            details={
                "mc_zero": result.mc_zero,
                "quasi_twilled": result.quasi_twilled,
                "twilled": result.twilled,
            },
            tables={
                "equations": [{"equation": e.name, "holds": e.ok} for e in result.equations],
                "violations": _violation_rows(result.leibniz.violations, doc.field),
            },
        )

    # ------------------------------------------------------------------
    # Deformation maps
    # ------------------------------------------------------------------
    def is_deformation_map(self, path: str | Path, map_name: str, field: Field | None = None) -> Report:
        doc = self._load(path, field)
        result = is_deformation_map(doc.linear_map(map_name), doc.to_omega())
        logger.info(f"[COMMAND] is-deformation-map {path} {map_name}: {result.ok}")
        return Report(
            command="is-deformation-map",
            args={"document": str(path), "map": map_name},
            verdict=result.ok,
            details={"graph_closed": result.graph_closed, "verdicts_agree": result.agree},
            residuals={} if result.ok else {"identity": result.residual.to_nested()},
        )

    def induced(self, path: str | Path, map_name: str, field: Field | None = None) -> Report:
        """The induced algebra and representation, re-checked independently."""
        doc = self._load(path, field)
        r, omega = doc.linear_map(map_name), doc.to_omega()
        algebra = induced_bracket(r, omega)
        rep = induced_representation(r, omega)
        leib = check_leibniz(algebra.bracket)
        rep_report = check_representation(algebra, rep.rho_left, rep.rho_right)
        verdict = leib.ok and rep_report.ok
        logger.info(f"[COMMAND] induced {path} {map_name}: leibniz={leib.ok} representation={rep_report.ok}")
        return Report(
            command="induced",
            args={"document": str(path), "map": map_name},
            verdict=verdict,
            details={
                "leibniz": leib.ok,
                "representation": rep_report.ok,
                "bracket": algebra.bracket.to_nested(),
                "psi_left": rep.rho_left.to_nested(),
                "psi_right": rep.rho_right.to_nested(),
            },
            tables={"violations": _violation_rows(leib.violations + rep_report.violations, doc.field)},
        )

    def twist(self, path: str | Path, map_name: str, field: Field | None = None) -> Report:
        """Twist Omega by ``r``; for deformation maps also compare with the block formulas."""
        doc = self._load(path, field)
        r, omega = doc.linear_map(map_name), doc.to_omega()
        twisted = twist_omega(r, omega)
        result = check_proto_twilled(twisted)
        deformation = is_deformation_map(r, omega).ok
        details = {
            "deformation_map": deformation,
            "quasi_twilled": result.quasi_twilled,
            "blocks_match": (quasi_twilled_blocks(r, omega) == twisted) if deformation else None,
        }
        verdict = result.ok and (details["blocks_match"] is not False)
        logger.info(f"[COMMAND] twist {path} {map_name}: {verdict}")
        return Report(
            command="twist",
            args={"document": str(path), "map": map_name},
            verdict=verdict,
            details=details,
            tables={"components": [
                {"component": name, "nonzero": not f.is_zero()} for name, f in twisted.components().items()
            ]},
            residuals={"eta_r": twisted.eta.to_nested()} if not twisted.eta.is_zero() else {},
        )

    # ------------------------------------------------------------------
    # Cohomology
    # ------------------------------------------------------------------
    def cohomology(
        self,
        path: str | Path,
        max_degree: int,
        map_name: str | None = None,
        part: str = "g",
        rep: str = "adjoint",
        field: Field | None = None,
    ) -> Report:
        """
        Cohomology of a deformation map (``map_name`` given) or of one bracket
        of the document with a standard representation.
        """
        doc = self._load(path, field)
        omega = doc.to_omega()
        if map_name is not None:
            rows = deformation_cohomology(doc.linear_map(map_name), omega, max_degree)
            args = {"document": str(path), "map": map_name, "max_degree": max_degree}
        else:
            brackets = {"total": omega.omega, "g": omega.bracket_g, "h": omega.bracket_h}
            if part not in brackets:
                raise ParseError(f"unknown part {part!r} (use {', '.join(PARTS)})")
            algebra = LeibnizAlgebra(brackets[part])
            match rep:
                case "adjoint":
                    representation = adjoint_rep(algebra)
                case "coadjoint":
                    representation = coadjoint_rep(algebra)
                case "trivial":
                    representation = trivial_rep(algebra, 1)
                case _:
                    raise ParseError(f"unknown representation {rep!r} (use {', '.join(REPRESENTATIONS)})")
            rows = cohomology_dimensions(algebra, representation, max_degree)
            args = {"document": str(path), "part": part, "rep": rep, "max_degree": max_degree}
        logger.info(f"[COMMAND] cohomology {path}: {[row.cohomology for row in rows]}")
        return Report(
            command="cohomology",
            args=args,
            tables={"dimensions": [
                {
                    "degree": row.degree,
                    "cochains": row.cochains,
                    "cocycles": row.cocycles,
                    "coboundaries": row.coboundaries,
                    "cohomology": row.cohomology,
                }
                for row in rows
            ]},
        )

    # ------------------------------------------------------------------
    # L-infinity checks
    # ------------------------------------------------------------------
    def mc_check(self, path: str | Path, map_name: str, field: Field | None = None) -> Report:
        """Maurer-Cartan defect of ``r`` in the controlling algebra."""
        doc = self._load(path, field)
        r, omega = doc.linear_map(map_name), doc.to_omega()
        algebra = controlling_algebra(omega)
        defect = mc_defect(algebra, GradedElement.from_block(omega.space, r))
        identity = is_deformation_map(r, omega).ok
        logger.info(f"[COMMAND] mc-check {path} {map_name}: defect zero={defect.is_zero()}")
        return Report(
            command="mc-check",
            args={"document": str(path), "map": map_name},
            verdict=defect.is_zero(),
            details={"deformation_identity": identity, "agree": identity == defect.is_zero()},
            residuals=_graded_residuals(defect),
        )

    def governing_check(
        self,
        path: str | Path,
        map_name: str,
        perturbation: str | None = None,
        budget: int | None = None,
        field: Field | None = None,
    ) -> Report:
        """
        Compare Maurer-Cartan elements of the governing algebra of ``r`` with
        the maps ``r'`` for which ``r + r'`` is a deformation map, on one named
        perturbation or on every map over the prime field.
        """
        doc = self._load(path, field)
        r, omega = doc.linear_map(map_name), doc.to_omega()
        algebra = governing_algebra(omega, r)
        space = omega.space

        if perturbation is not None:
            candidates = [(perturbation, doc.linear_map(perturbation))]
        else:
            total = check_budget(space.field, space.dim_g, space.dim_h, budget)
            candidates = [(str(t), candidate_map(space.field, space.dim_g, space.dim_h, t)) for t in range(total)]

        rows = []
        for label, rp in candidates:
            mc = mc_defect(algebra, GradedElement.from_block(space, rp)).is_zero()
            deformation = is_deformation_map(r + rp, omega).ok
            rows.append({"perturbation": label, "maurer_cartan": mc, "sum_is_deformation_map": deformation})
        disagreements = [row for row in rows if row["maurer_cartan"] != row["sum_is_deformation_map"]]
        logger.info(f"[COMMAND] governing-check {path} {map_name}: {len(rows)} tested, {len(disagreements)} disagreements")
        return Report(
            command="governing-check",
            args={"document": str(path), "map": map_name, "perturbation": perturbation},
            verdict=not disagreements,
            details={
                "tested": len(rows),
                "maurer_cartan": sum(1 for row in rows if row["maurer_cartan"]),
                "disagreements": len(disagreements),
            },
            tables={"perturbations": rows if perturbation is not None else disagreements},
        )

    def pair_mc_check(
        self,
        path: str | Path,
        map_name: str,
        subalgebra: str = "full",
        field: Field | None = None,
    ) -> Report:
        """
        Maurer-Cartan defect of ``(s^-1 Omega', r)`` in the pair algebra on the
        chosen subalgebra, next to the direct verdicts on the filtered ``Omega'``.
        """
        doc = self._load(path, field)
        sub = _subalgebra(subalgebra)
        r, omega = doc.linear_map(map_name), doc.to_omega()
        space = omega.space
        element = pair_element(space, omega.omega, r, sub)
        defect = mc_defect(pair_algebra(space, sub), element.element)
        filtered = split(space, space.project(omega.omega, sub))
        proto = check_proto_twilled(filtered).ok
        deformation = is_deformation_map(r, filtered).ok
        logger.info(f"[COMMAND] pair-mc-check {path} {map_name} {subalgebra}: defect zero={defect.is_zero()}")
        return Report(
            command="pair-mc-check",
            args={"document": str(path), "map": map_name, "subalgebra": subalgebra},
            verdict=defect.is_zero(),
            details={
                "dropped": [str(bd) for bd in element.dropped],
                "proto_twilled": proto,
                "deformation_map": deformation,
                "agree": defect.is_zero() == (proto and deformation),
            },
            residuals=_graded_residuals(defect),
        )

    # ------------------------------------------------------------------
    # Enumeration and the zoo
    # ------------------------------------------------------------------
    def enumerate(
        self,
        path: str | Path,
        budget: int | None = None,
        workers: int | None = None,
        field: Field | None = None,
    ) -> Report:
        doc = self._load(path, field)
        result = enumerate_deformation_maps(doc.to_omega(), budget=budget, workers=workers)
        logger.info(f"[COMMAND] enumerate {path}: {len(result.matches)} of {result.scanned}")
        return Report(
            command="enumerate",
            args={"document": str(path), "budget": budget},
            details={"scanned": result.scanned, "deformation_maps": len(result.matches)},
            tables={"maps": [{"index": t, "r": r.to_nested()} for t, r in result.matches]},
        )

    def zoo_build(self, name: str, out: str | Path, field: Field | None = None) -> Report:
        """Build a catalogue entry and write it as a document."""
        field = field or Field.prime(5)
        catalogue = standard_catalogue(field)
        if name not in catalogue:
            raise ParseError(f"unknown catalogue entry {name!r} (known: {', '.join(catalogue)})")
        entry = catalogue[name]
        omega = build(entry.kind, entry.inputs)
        doc = AlgebraDocument.from_omega(omega, entry.maps, name=entry.name, kind=entry.kind.value)
        written = self.modify_repo.write(doc, out)
        logger.info(f"[COMMAND] zoo-build {name} -> {written}")
        return Report(
            command="zoo-build",
            args={"name": name, "out": str(out), "field": str(field)},
            details={"kind": entry.kind.value, "maps": sorted(entry.maps)},
        )

    def zoo_verify(self, path: str | Path, budget: int | None = None, field: Field | None = None) -> Report:
        """
        Check the family's operator identity against the deformation-map
        predicate (exhaustively over a prime field, on the named maps over
        the rationals) and the specialized algebra against the controlling one.
        """
        doc = self._load(path, field)
        kind = _kind(doc)
        omega = doc.to_omega()
        inputs = zoo_inputs_for(kind, omega)
        maps = list(doc.linear_maps.values()) if doc.field.modulus is None else None
        equivalence = equivalence_check(kind, inputs, maps=maps, budget=budget)

        specialized_rows = []
        # the controlling algebra divides by 3!
        if doc.field.characteristic == 0 or doc.field.characteristic > 3:
            specialized = specialized_algebra(kind, omega)
            controlling = controlling_algebra(omega)
            for name, r in doc.linear_maps.items():
                alpha = GradedElement.from_block(omega.space, r)
                same = mc_defect(specialized, alpha) == mc_defect(controlling, alpha)
                specialized_rows.append({"map": name, "defects_match": same})

        verdict = equivalence.ok and all(row["defects_match"] for row in specialized_rows)
        logger.info(f"[COMMAND] zoo-verify {path} ({kind.value}): {verdict}")
        return Report(
            command="zoo-verify",
            args={"document": str(path), "budget": budget},
            verdict=verdict,
            details={
                "kind": kind.value,
                "operator": kind.operator,
                "tested": equivalence.tested,
                "agreements": equivalence.agreements,
                "deformation_maps": equivalence.deformation_maps,
            },
            tables={
                "disagreements": [
                    {"r": d.r.to_nested(), "operator": d.classified, "deformation_map": d.deformation}
                    for d in equivalence.disagreements
                ],
                "specialized": specialized_rows,
            },
        )
