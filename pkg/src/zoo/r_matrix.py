"""
Classical Leibniz r-matrices.

A symmetric form ``s`` on the dual ``g*`` gives ``s#: g* -> g`` with
``s#(a)(b) = s(a, b)``. It is an r-matrix exactly when ``s#`` is a deformation
map of the semidirect product ``g (+) g*`` for the coadjoint representation.
``r_matrix_induced`` recomputes the induced bracket on ``g*`` and its
representation on ``g`` straight from the coadjoint formulas, as a
coordinate-level cross-check of the generic construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.engine.errors import NotSymmetric
from src.engine.exactlin import Field
from src.engine.leibniz import LeibnizAlgebra, Representation
from src.engine.multimap import MultiMap, zeros
from src.engine.prototwilled import OmegaStructure, is_deformation_map
from src.zoo.examples import ExampleKind, ZooInputs, build

logger = logging.getLogger(__name__)


def symmetric_form(field: Field, rows: list[list]) -> MultiMap:
    """
    The form ``S[a][b] = s(e_a*, e_b*)`` as an arity-1 map.

    Raises:
        NotSymmetric: If ``S`` is not square or differs from its transpose.
    """
    s = MultiMap.from_matrix(field, rows)
    if s.output_dim != s.input_dims[0]:
        raise NotSymmetric(f"the form must be square, got {s.output_dim}x{s.input_dims[0]}")
    n = s.output_dim
    if any(s.coeffs[a, b] != s.coeffs[b, a] for a in range(n) for b in range(a + 1, n)):
        raise NotSymmetric("the form is not symmetric")
    return s


def sharp(form: MultiMap) -> MultiMap:
    """``s#`` as a map ``g* -> g``: column ``a`` holds ``s(e_a*, .)``."""
    return MultiMap(form.field, np.array(form.coeffs.T, dtype=object))


@dataclass
class RMatrixHost:
    omega: OmegaStructure
    r: MultiMap

    @property
    def is_r_matrix(self) -> bool:
        return is_deformation_map(self.r, self.omega).ok


def r_matrix_host(algebra: LeibnizAlgebra, form: MultiMap) -> RMatrixHost:
    """
    The coadjoint semidirect product of ``algebra`` and the map ``s#``.

    Raises:
        NotSymmetric: If ``form`` is not symmetric.
    """
    symmetric_form(algebra.field, form.to_nested())
    omega = build(ExampleKind.R_MATRIX_HOST, ZooInputs(algebra, form=form))
    host = RMatrixHost(omega, sharp(form))
    logger.info(f"[ZOO] r-matrix candidate: deformation map={host.is_r_matrix}")
    return host


def r_matrix_induced(algebra: LeibnizAlgebra, form: MultiMap) -> tuple[LeibnizAlgebra, Representation]:
    """
    The bracket ``[a,b] = coad_L(s#a, b) + coad_R(a, s#b)`` on ``g*`` and the
    actions ``psi_L(a, x) = [s#a, x] - s#(coad_R(a, x))`` and
    ``psi_R(x, a) = [x, s#a] - s#(coad_L(x, a))`` on ``g``.

    No validation: the result is a Leibniz algebra with a representation
    only when ``s`` is an r-matrix.
    """
    field, n = algebra.field, algebra.dim
    c, S = algebra.bracket.coeffs, form.coeffs
    bracket = zeros(field, (n, n, n))
    psi_left = zeros(field, (n, n, n))
    psi_right = zeros(field, (n, n, n))
    for a in range(n):
        for b in range(n):
            for k in range(n):
                acc = field.zero
                for i in range(n):
                    acc += S[a, i] * -c[b, i, k] + S[b, i] * (c[a, i, k] + c[a, k, i])
                bracket[k, a, b] = acc
    for a in range(n):
        for j in range(n):
            for m in range(n):
                left = field.zero
                right = field.zero
                for i in range(n):
                    left += S[a, i] * c[m, i, j] - (c[a, j, i] + c[a, i, j]) * S[i, m]
                    right += S[a, i] * c[m, j, i] + c[a, j, i] * S[i, m]
                psi_left[m, a, j] = left
                psi_right[m, j, a] = right
    induced = LeibnizAlgebra(MultiMap(field, bracket))
    rep = Representation(induced, MultiMap(field, psi_left), MultiMap(field, psi_right))
    return induced, rep
