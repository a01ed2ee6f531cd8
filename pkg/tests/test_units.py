"""Hyperplanes, monomial units, and the dual transform evaluators."""

import random

import pytest

from helpers import hyperplane_pool, random_invertible, random_monomial_unit
from vdp.building import BuildingContext
from vdp.errors import EqualHyperplanes, NotSpecialArrow
from vdp.units import (Hyperplane, MonomialUnit, f_factor, log_norm, quotient,
                       special_eval, vdp_closed, vdp_oracle)


def ctx2():
    return BuildingContext(2, 2, 2)


def standard_pair(ctx):
    spec = ctx.spec
    zero = spec.zero()
    y1 = tuple(spec.one() if i == 0 else zero for i in range(ctx.r))
    y2 = tuple(spec.one() if i == 1 else zero for i in range(ctx.r))
    return Hyperplane(ctx, y1), Hyperplane(ctx, y2)


# -- basics ------------------------------------------------------------------


def test_hyperplane_canonical_unit_scaling():
    ctx = BuildingContext(2, 3, 2)
    spec = ctx.spec
    y = (spec.from_digits([2, 1]), spec.one())
    u = spec.from_digits([2, 2, 1])
    assert Hyperplane(ctx, y) == Hyperplane(ctx, tuple(u.mul(s) for s in y))


def test_unit_requires_zero_total_multiplicity():
    ctx = ctx2()
    H, H2 = standard_pair(ctx)
    with pytest.raises(ValueError):
        MonomialUnit(ctx, [(H, 2), (H2, -1)])


def test_unit_merges_factors():
    ctx = ctx2()
    H, H2 = standard_pair(ctx)
    u = MonomialUnit(ctx, [(H, 1), (H, 2), (H2, -3)])
    assert dict((k, m) for k, (_, m) in u.factors.items()) == {H.key: 3, H2.key: -3}
    assert quotient(H, H2).mul(quotient(H2, H)).is_trivial()


def test_log_norm_basics():
    ctx = ctx2()
    spec = ctx.spec
    H, _ = standard_pair(ctx)
    assert log_norm(ctx, H.y, ctx.origin) == 0
    from vdp.ring import OMatrix
    v = ctx.canonical_vertex(OMatrix(spec, [[spec.pi(2), spec.zero()],
                                            [spec.zero(), spec.one()]]))
    # the covector shrinks by 2 digits on the 2-step lattice: differences only
    assert log_norm(ctx, H.y, v) - log_norm(ctx, H.y, ctx.origin) == -2


def test_log_norm_differences_scale_invariant():
    ctx = BuildingContext(2, 3, 2)
    spec = ctx.spec
    rng = random.Random(2)
    y = (spec.one(), spec.pi(1))
    u = spec.from_digits([2, 1, 1])
    y2 = tuple(u.mul(s) for s in y)
    ball = ctx.enumerate_ball(2)
    vs = list(ball.vertices.values())
    base = log_norm(ctx, y, vs[0]) - log_norm(ctx, y2, vs[0])
    for v in vs:
        assert log_norm(ctx, y, v) - log_norm(ctx, y2, v) == base


# -- oracle evaluator --------------------------------------------------------


def test_prop_first_step_table():
    ctx = ctx2()
    H, H2 = standard_pair(ctx)
    u = quotient(H, H2)
    eH = ctx.tau_arrow(ctx.origin, (H.y,))
    eH2 = ctx.tau_arrow(ctx.origin, (H2.y,))
    assert vdp_oracle(ctx, u, eH) == -1
    assert vdp_oracle(ctx, u, eH2) == 1
    for e in ctx.arrows_from(ctx.origin, 1):
        if e.key not in (eH.key, eH2.key):
            assert vdp_oracle(ctx, u, e) == 0


def test_alternating_and_triangle_sums():
    ctx = BuildingContext(3, 2, 2)
    pool = hyperplane_pool(ctx, 2, cap=10)
    rng = random.Random(4)
    ball = ctx.enumerate_ball(2)
    u = random_monomial_unit(ctx, pool, rng)
    for e in list(ball.arrows.values())[::7]:
        assert vdp_oracle(ctx, u, e) + vdp_oracle(ctx, u, ctx.reverse(e)) == 0
    for (a, b, c) in ball.triangles()[::11]:
        va, vb, vc = (ball.vertices[k] for k in (a, b, c))
        s = (vdp_oracle(ctx, u, ctx.arrow_between(va, vb))
             + vdp_oracle(ctx, u, ctx.arrow_between(vb, vc))
             + vdp_oracle(ctx, u, ctx.arrow_between(vc, va)))
        assert s == 0


def test_homomorphism():
    ctx = ctx2()
    pool = hyperplane_pool(ctx, 2)
    rng = random.Random(6)
    ball = ctx.enumerate_ball(2)
    for _ in range(5):
        u1 = random_monomial_unit(ctx, pool, rng)
        u2 = random_monomial_unit(ctx, pool, rng)
        prod = u1.mul(u2)
        for e in ball.arrows.values():
            assert vdp_oracle(ctx, prod, e) == vdp_oracle(ctx, u1, e) + vdp_oracle(ctx, u2, e)


def test_type1_sum_vanishes():
    ctx = BuildingContext(3, 2, 2)
    pool = hyperplane_pool(ctx, 1)
    rng = random.Random(8)
    ball = ctx.enumerate_ball(2)
    u = random_monomial_unit(ctx, pool, rng)
    for k in ball.interior_keys():
        v = ball.vertices[k]
        assert sum(vdp_oracle(ctx, u, e) for e in ctx.arrows_from(v, 1)) == 0


def test_equivariance():
    ctx = BuildingContext(2, 3, 2)
    pool = hyperplane_pool(ctx, 2, cap=8)
    rng = random.Random(10)
    ball = ctx.enumerate_ball(1)
    arrows = list(ball.arrows.values())
    for _ in range(20):
        g = random_invertible(ctx.spec, 2, rng)
        u = random_monomial_unit(ctx, pool, rng)
        moved = MonomialUnit(ctx, [(ctx.gl_action(g, h), m) for h, m in u.items()])
        for e in arrows[::3]:
            assert vdp_oracle(ctx, u, ctx.gl_action(g, e)) == vdp_oracle(ctx, moved, e)


# -- closed evaluator --------------------------------------------------------


def test_closed_matches_oracle_everywhere():
    for r, q, n in [(2, 2, 3), (2, 3, 2), (3, 2, 2)]:
        ctx = BuildingContext(r, q, n)
        pool = hyperplane_pool(ctx, n, cap=12)
        rng = random.Random(r * 10 + q)
        ball = ctx.enumerate_ball(n)
        for _ in range(10):
            u = random_monomial_unit(ctx, pool, rng)
            for e in ball.arrows.values():
                assert vdp_closed(ctx, u, e) == vdp_oracle(ctx, u, e)


def test_closed_zero_when_both_steps_agree():
    ctx = BuildingContext(2, 2, 3)
    spec = ctx.spec
    # same 1-class, different hyperplanes: first steps coincide
    H = Hyperplane(ctx, (spec.one(), spec.zero()))
    H2 = Hyperplane(ctx, (spec.one(), spec.pi(1)))
    u = quotient(H, H2)
    e = ctx.tau_arrow(ctx.origin, (H.y,))
    assert vdp_closed(ctx, u, e) == 0
    assert vdp_oracle(ctx, u, e) == 0


# -- f factors and the special pattern ---------------------------------------


def test_f_factor_rejects_equal():
    ctx = ctx2()
    H, _ = standard_pair(ctx)
    with pytest.raises(EqualHyperplanes):
        f_factor(ctx, H, H, 1)


def test_f_factor_identity_shape():
    ctx = ctx2()
    H, H2 = standard_pair(ctx)
    f = f_factor(ctx, H, H2, 1)
    items = dict((h.key, m) for h, m in f.items())
    assert items[H2.key] == -1
    (top_key,) = [k for k in items if k != H2.key]
    # y'' is 1-equivalent but not 2-equivalent to y'
    top = [h for h, _ in f.items() if h.key == top_key][0]
    assert ctx.class_key(top.y, 1) == ctx.class_key(H2.y, 1)
    assert ctx.class_key(top.y, 2) != ctx.class_key(H2.y, 2)


def test_f_factor_vanishes_on_inner_ball():
    ctx = BuildingContext(2, 3, 3)
    pool = hyperplane_pool(ctx, 1)
    rng = random.Random(14)
    ball = ctx.enumerate_ball(2)
    for n in (1, 2):
        for _ in range(5):
            H, H2 = rng.sample(pool, 2)
            f = f_factor(ctx, H, H2, n)
            for e in ball.arrows.values():
                if ball.dist[e.from_v.key] <= n and ball.dist[e.to_v.key] <= n:
                    assert vdp_oracle(ctx, f, e) == 0


def test_special_eval_pattern_matches_oracle():
    for r, q in [(2, 2), (2, 3), (3, 2)]:
        ctx = BuildingContext(r, q, 3)
        pool = hyperplane_pool(ctx, 2, cap=10)
        rng = random.Random(r + q)
        for n in (0, 1, 2):
            tree = ctx.special_structure(n + 1)
            for _ in range(4):
                H, H2 = rng.sample(pool, 2)
                if ctx.class_key(H.y, 1) == ctx.class_key(H2.y, 1):
                    continue
                f = f_factor(ctx, H, H2, n)
                seen = []
                for key, arrow in tree.arrows_away():
                    if tree.nodes[key].level != n + 1:
                        continue
                    want = special_eval(ctx, H, H2, n, arrow)
                    assert vdp_oracle(ctx, f, arrow) == want
                    seen.append(want)
                assert seen.count(1) == 1
                assert seen.count(-1) == 1


def test_special_eval_rejects_non_special():
    ctx = ctx2()
    H, H2 = standard_pair(ctx)
    tree = ctx.special_structure(1)
    bad = ctx.reverse(tree.nodes[tree.levels[1][0]].arrow)
    with pytest.raises(NotSpecialArrow):
        special_eval(ctx, H, H2, 1, bad)
