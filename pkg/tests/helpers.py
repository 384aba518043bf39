from __future__ import annotations

import itertools
import random

from src.engine.exactlin import Field
from src.engine.multimap import MultiMap, SplitSpace


def column(field: Field, *entries) -> MultiMap:
    """A map ``k -> g`` from the image of the single basis vector."""
    return MultiMap.from_matrix(field, [[x] for x in entries])


def random_map(rng: random.Random, field: Field, output_dim: int, input_dims: tuple[int, ...], span: int = 3) -> MultiMap:
    f = MultiMap.zeros(field, output_dim, input_dims)
    for index in itertools.product(*(range(d) for d in (output_dim, *input_dims))):
        f.coeffs[index] = field.convert(rng.randint(-span, span))
    return f


def random_square(rng: random.Random, space: SplitSpace, arity: int) -> MultiMap:
    return random_map(rng, space.field, space.dim, (space.dim,) * arity)


def random_linear(rng: random.Random, space: SplitSpace, span: int = 3) -> MultiMap:
    """A map ``h -> g``."""
    return random_map(rng, space.field, space.dim_g, (space.dim_h,), span)
