"""Canonical vertices, arrows, balls, covector classes, and the special tree."""

import random
from collections import deque

import pytest

from vdp.building import BuildingContext
from vdp.errors import DifferentOrigin
from vdp.ffield import gaussian_binomial
from vdp.ring import OMatrix


def random_unit(spec, rng):
    ds = [rng.randrange(spec.q) for _ in range(spec.N)]
    ds[0] = rng.randrange(1, spec.q)
    return spec.from_digits(ds)


def random_invertible(spec, r, rng, ops=12):
    rows = [list(row) for row in OMatrix.identity(spec, r).rows]
    for _ in range(ops):
        kind = rng.randrange(3)
        i, j = rng.sample(range(r), 2)
        if kind == 0:
            rows[i], rows[j] = rows[j], rows[i]
        elif kind == 1:
            u = random_unit(spec, rng)
            rows[i] = [u.mul(x) for x in rows[i]]
        else:
            c = spec.from_digits([rng.randrange(spec.q) for _ in range(spec.N)])
            rows[i] = [x.add(c.mul(y)) for x, y in zip(rows[i], rows[j])]
    return OMatrix(spec, rows)


# -- canonical_vertex --------------------------------------------------------


def test_scaling_gives_same_class():
    ctx = BuildingContext(2, 2, 2)
    spec = ctx.spec
    piI = OMatrix(spec, [[spec.pi(), spec.zero()], [spec.zero(), spec.pi()]])
    assert ctx.canonical_vertex(piI) == ctx.origin


def test_sed_and_distance_of_diag():
    ctx = BuildingContext(2, 2, 2)
    spec = ctx.spec
    M = OMatrix(spec, [[spec.pi(2), spec.zero()], [spec.zero(), spec.one()]])
    v = ctx.canonical_vertex(M)
    assert v.sed == (2, 0)
    assert ctx.distance(ctx.origin, v) == 2


def test_canonicalization_is_class_function():
    for r, q in [(2, 2), (2, 3), (3, 2)]:
        ctx = BuildingContext(r, q, 2)
        spec = ctx.spec
        rng = random.Random(100 * r + q)
        rows = [[spec.pi(min(i + j, 2)) if i >= j else spec.zero() for j in range(r)]
                for i in range(r)]
        for i in range(r):
            rows[i][i] = spec.pi(1) if i == 0 else spec.one()
        M = OMatrix(spec, rows)
        base = ctx.canonical_vertex(M)
        for _ in range(100 // (r + q)):
            G = random_invertible(spec, r, rng)
            assert ctx.canonical_vertex(G.mul(M)) == base


def test_canonical_idempotent():
    ctx = BuildingContext(3, 2, 2)
    ball = ctx.enumerate_ball(1)
    for v in ball.vertices.values():
        assert ctx.canonical_vertex(v.rep) == v
        assert v.sed[-1] == 0


# -- distance ----------------------------------------------------------------


def test_distance_is_zero_on_diagonal_and_symmetric():
    ctx = BuildingContext(2, 2, 3)
    ball = ctx.enumerate_ball(2)
    vs = list(ball.vertices.values())
    for v in vs[:6]:
        assert ctx.distance(v, v) == 0
        for w in vs[:6]:
            assert ctx.distance(v, w) == ctx.distance(w, v)


def bfs_distances(ball, start_key):
    dist = {start_key: 0}
    dq = deque([start_key])
    adj = {}
    for (a, b) in ball.arrows:
        adj.setdefault(a, []).append(b)
    while dq:
        k = dq.popleft()
        for m in adj.get(k, ()):
            if m not in dist:
                dist[m] = dist[k] + 1
                dq.append(m)
    return dist


def test_distance_matches_bfs_oracle():
    ctx = BuildingContext(2, 2, 4)
    ball = ctx.enumerate_ball(4)
    rng = random.Random(5)
    inner = [k for k, d in ball.dist.items() if d <= 3]
    pairs = [(rng.choice(inner), rng.choice(inner)) for _ in range(50)]
    for a, b in pairs:
        bfs = bfs_distances(ball, a)
        got = ctx.distance(ball.vertices[a], ball.vertices[b])
        # the enumerated ball only certifies geodesics that stay inside it
        if bfs.get(b) is not None and bfs[b] + ball.dist[a] <= 4:
            assert got == bfs[b]


def test_triangle_inequality_sampled():
    ctx = BuildingContext(2, 2, 3)
    ball = ctx.enumerate_ball(3)
    rng = random.Random(9)
    vs = list(ball.vertices.values())
    for _ in range(60):
        a, b, c = (rng.choice(vs) for _ in range(3))
        assert ctx.distance(a, c) <= ctx.distance(a, b) + ctx.distance(b, c)


# -- arrows ------------------------------------------------------------------


def test_arrow_counts_at_origin():
    ctx = BuildingContext(3, 2, 1)
    assert len(ctx.arrows_from(ctx.origin, 1)) == 7
    ctx3 = BuildingContext(2, 3, 1)
    assert len(ctx3.arrows_from(ctx3.origin, 1)) == 4


def test_arrow_counts_everywhere_in_ball():
    for r, q in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        ctx = BuildingContext(r, q, 2)
        ball = ctx.enumerate_ball(2)
        for v in ball.vertices.values():
            for t in range(1, r):
                want = gaussian_binomial(r, r - t, q)
                assert len(ctx.arrows_from(v, t)) == want


def test_type_plus_reverse_type_is_r():
    ctx = BuildingContext(3, 2, 1)
    for t in (1, 2):
        for e in ctx.arrows_from(ctx.origin, t):
            assert ctx.distance(e.from_v, e.to_v) == 1
            assert ctx.reverse(e).type_t == 3 - t


def test_domination():
    ctx = BuildingContext(3, 2, 1)
    ones = ctx.arrows_from(ctx.origin, 1)
    twos = ctx.arrows_from(ctx.origin, 2)
    for e in ones:
        assert ctx.dominates(e, e)
    assert not ctx.dominates(ones[0], ones[1])
    for e2 in twos:
        n = sum(1 for e1 in ones if ctx.dominates(e2, e1))
        assert n == 3  # q + 1 hyperplanes contain a fixed codimension-2 space
    other = ctx.enumerate_ball(1)
    far = [v for v in other.vertices.values() if v != ctx.origin][0]
    with pytest.raises(DifferentOrigin):
        ctx.dominates(ones[0], ctx.arrows_from(far, 1)[0])


# -- tau shift ---------------------------------------------------------------


def test_tau_shift_example():
    ctx = BuildingContext(2, 2, 2)
    spec = ctx.spec
    y = (spec.one(), spec.zero())
    w = ctx.tau_shift(ctx.origin, (y,))
    want = ctx.canonical_vertex(OMatrix(spec, [[spec.pi(), spec.zero()],
                                               [spec.zero(), spec.one()]]))
    assert w == want


def test_tau_iterates_walk_out():
    ctx = BuildingContext(3, 2, 3)
    spec = ctx.spec
    y = (spec.one(), spec.pi(1), spec.zero())
    v = ctx.origin
    for k in range(1, 4):
        v = ctx.tau_shift(v, (y,))
        assert ctx.distance(ctx.origin, v) == k


def test_tau_unit_scaling_invariant():
    ctx = BuildingContext(2, 3, 2)
    spec = ctx.spec
    y = (spec.one().add(spec.pi()), spec.pi(1))
    u = spec.from_digits([2, 1, 2])
    y2 = tuple(u.mul(s) for s in y)
    assert ctx.tau_shift(ctx.origin, (y,)) == ctx.tau_shift(ctx.origin, (y2,))


# -- balls -------------------------------------------------------------------


def test_ball_sizes_r2():
    ctx = BuildingContext(2, 2, 2)
    assert len(ctx.enumerate_ball(0).vertices) == 1
    assert len(ctx.enumerate_ball(1).vertices) == 4
    assert len(ctx.enumerate_ball(2).vertices) == 10


# -- covector classes --------------------------------------------------------


def test_n_class_counts():
    ctx = BuildingContext(2, 2, 2)
    assert len(ctx.n_classes(1)) == 3
    assert len(ctx.n_classes(2)) == 6
    for r, q, n in [(2, 3, 2), (3, 2, 2), (3, 3, 1)]:
        ctx = BuildingContext(r, q, n)
        want = q ** ((n - 1) * (r - 1)) * (q ** r - 1) // (q - 1)
        assert len(ctx.n_classes(n)) == want


def test_classes_map_to_distinct_special_vertices():
    for r, q, n in [(2, 2, 3), (3, 2, 2)]:
        ctx = BuildingContext(r, q, n)
        seen = set()
        for y in ctx.n_classes(n):
            v = ctx.origin
            for _ in range(n):
                v = ctx.tau_shift(v, (y,))
            assert ctx.distance(ctx.origin, v) == n
            assert v.key not in seen
            seen.add(v.key)


def test_class_canonicalization_round_trip():
    ctx = BuildingContext(3, 2, 2)
    spec = ctx.spec
    rng = random.Random(3)
    for y in ctx.n_classes(2):
        u = random_unit(spec, rng)
        noisy = tuple(u.mul(s).add(spec.pi(2).mul(spec.from_digits([rng.randrange(2)])))
                      for s in y)
        assert ctx.class_key(noisy, 2) == ctx.class_key(y, 2)


# -- special structure -------------------------------------------------------


def test_special_iff_sed():
    ctx = BuildingContext(3, 2, 2)
    tree = ctx.special_structure(2)
    ball = ctx.enumerate_ball(2)
    tree_vertex_keys = set(tree.vertex_to_node)
    for v in ball.vertices.values():
        n1 = v.sed[0]
        is_special_sed = v.sed == (n1,) + (0,) * (ctx.r - 1)
        assert (v.key in tree_vertex_keys) == is_special_sed


def test_tree_valences():
    ctx = BuildingContext(3, 2, 2)
    tree = ctx.special_structure(2)
    assert len(tree.root.children) == 7
    for key in tree.levels[1]:
        node = tree.nodes[key]
        assert len(node.children) + 1 == 5  # q^{r-1} + 1


def test_tree_is_a_tree():
    for r, q, n in [(2, 2, 4), (2, 3, 3), (3, 2, 3)]:
        ctx = BuildingContext(r, q, n)
        tree = ctx.special_structure(n)
        edges = sum(len(level) for level in tree.levels[1:])
        assert edges == len(tree.nodes) - 1
        # connectivity: every node reaches the root through parents
        for node in tree.nodes.values():
            k, hops = node, 0
            while k.parent is not None:
                k = k.parent
                hops += 1
            assert hops == node.level


def test_outbound_count_is_q_to_r_minus_1():
    for r, q in [(2, 2), (2, 3), (3, 2)]:
        ctx = BuildingContext(r, q, 2)
        tree = ctx.special_structure(2)
        for key in tree.levels[1] + tree.levels[2]:
            node = tree.nodes[key]
            inbound, outbound = tree.classify_type1(node)
            assert len(outbound) == q ** (r - 1)
            assert len(inbound) + len(outbound) == (q ** r - 1) // (q - 1)


def test_second_divisor_is_distance_to_special():
    # s(v) = n2: nearest special vertex sits n2 steps away
    ctx = BuildingContext(3, 2, 2)
    ball = ctx.enumerate_ball(2)
    tree = ctx.special_structure(2)
    specials = [ctx.vertex_from_key(k) for k in tree.vertex_to_node]
    for v in ball.vertices.values():
        s = min(ctx.distance(v, w) for w in specials)
        assert s == v.sed[1]


def test_lemma_inbound_iff_dominated_by_reversed_special():
    for r in (2, 3):
        ctx = BuildingContext(r, 2, 3)
        tree = ctx.special_structure(3)
        for level in (1, 2, 3):
            for key in tree.levels[level]:
                node = tree.nodes[key]
                e_star_rev = ctx.reverse(node.arrow)
                inbound, outbound = tree.classify_type1(node)
                for e in inbound:
                    assert ctx.dominates(e_star_rev, e)
                for e in outbound:
                    assert not ctx.dominates(e_star_rev, e)


# -- group action ------------------------------------------------------------


def test_gl_action_trivialities():
    ctx = BuildingContext(3, 2, 1)
    spec = ctx.spec
    I = OMatrix.identity(spec, 3)
    assert ctx.gl_action(I, ctx.origin) == ctx.origin
    piI = OMatrix(spec, [[spec.pi() if i == j else spec.zero() for j in range(3)]
                         for i in range(3)])
    ball = ctx.enumerate_ball(1)
    for v in list(ball.vertices.values())[:5]:
        assert ctx.gl_action(piI, v) == v
    perm = OMatrix.from_ints(spec, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert ctx.gl_action(perm, ctx.origin) == ctx.origin


def test_gl_action_preserves_structure():
    ctx = BuildingContext(2, 3, 2)
    spec = ctx.spec
    rng = random.Random(21)
    ball = ctx.enumerate_ball(2)
    arrows = list(ball.arrows.values())[:10]
    for _ in range(5):
        g = random_invertible(spec, 2, rng)
        for e in arrows:
            img = ctx.gl_action(g, e)
            assert img.type_t == e.type_t
            assert ctx.distance(img.from_v, img.to_v) == 1
