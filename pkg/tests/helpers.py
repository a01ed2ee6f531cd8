"""Shared helpers for the test suite: seeded random generators for scalars,
invertible matrices, hyperplanes, and monomial units."""

import random

from vdp.ring import OMatrix
from vdp.units import Hyperplane, MonomialUnit


def random_scalar(spec, rng):
    return spec.from_digits([rng.randrange(spec.q) for _ in range(spec.N)])


def random_unit_scalar(spec, rng):
    ds = [rng.randrange(spec.q) for _ in range(spec.N)]
    ds[0] = rng.randrange(1, spec.q)
    return spec.from_digits(ds)


def random_invertible(spec, r, rng, ops=12):
    """Product of elementary operations: invertible over O with unit det."""
    rows = [list(row) for row in OMatrix.identity(spec, r).rows]
    for _ in range(ops):
        kind = rng.randrange(3)
        i, j = rng.sample(range(r), 2)
        if kind == 0:
            rows[i], rows[j] = rows[j], rows[i]
        elif kind == 1:
            u = random_unit_scalar(spec, rng)
            rows[i] = [u.mul(x) for x in rows[i]]
        else:
            c = random_scalar(spec, rng)
            rows[i] = [x.add(c.mul(y)) for x, y in zip(rows[i], rows[j])]
    return OMatrix(spec, rows)


def hyperplane_pool(ctx, depth, cap=None):
    """Deterministic pool of hyperplanes: one per depth-class representative."""
    reps = ctx.n_classes(depth)
    if cap is not None and len(reps) > cap:
        reps = reps[:cap]
    return [Hyperplane(ctx, y) for y in reps]


def random_monomial_unit(ctx, pool, rng, max_factors=4):
    """Random unit over the pool with zero total multiplicity."""
    k = rng.randrange(2, max_factors + 1)
    hs = rng.sample(pool, min(k, len(pool)))
    ms = [rng.randrange(-3, 4) for _ in hs[:-1]]
    ms.append(-sum(ms))
    return MonomialUnit(ctx, list(zip(hs, ms)))
