"""Hyperplanes, monomial units, and the two evaluators of their transform.

A monomial unit is a formal product prod l_i^{m_i} of linear forms attached
to hyperplanes, with sum(m_i) = 0.  Its transform assigns to each arrow the
increment of log_q of the unit's sup-norm between the two lattice classes.
The oracle evaluator reads norms off lattice representatives; the closed
evaluator sums a three-case table over a pairing of the factors.  They must
agree everywhere.
"""

from .errors import EqualHyperplanes, NotSpecialArrow, ZeroVector
from .ffield import dot


class Hyperplane:
    """A primitive covector up to unit scaling, canonically normalized."""

    __slots__ = ("ctx", "y", "key")

    def __init__(self, ctx, y):
        self.ctx = ctx
        self.y = ctx.canonical_covector(ctx.primitivize(y))
        self.key = tuple(s.digits for s in self.y)

    def __eq__(self, other):
        return isinstance(other, Hyperplane) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def serialize(self):
        return [s.serialize() for s in self.y]

    def __repr__(self):
        return "Hyperplane(%s)" % (self.serialize(),)


class MonomialUnit:
    """A formal product of hyperplane linear forms with zero total degree."""

    __slots__ = ("ctx", "factors")

    def __init__(self, ctx, factors):
        merged = {}
        for h, m in factors:
            if h.key in merged:
                merged[h.key] = (h, merged[h.key][1] + m)
            else:
                merged[h.key] = (h, m)
        merged = {k: hm for k, hm in merged.items() if hm[1] != 0}
        total = sum(m for _, m in merged.values())
        if total != 0:
            raise ValueError("multiplicities must sum to 0, got %d" % total)
        self.ctx = ctx
        self.factors = dict(sorted(merged.items()))

    def items(self):
        return list(self.factors.values())

    def mul(self, other):
        return MonomialUnit(self.ctx, self.items() + other.items())

    def inverse(self):
        return MonomialUnit(self.ctx, [(h, -m) for h, m in self.items()])

    def pow(self, k):
        return MonomialUnit(self.ctx, [(h, m * k) for h, m in self.items()])

    def is_trivial(self):
        return not self.factors

    def serialize(self):
        return {"factors": [{"y": h.serialize(), "m": m} for h, m in self.items()]}

    def __repr__(self):
        return "MonomialUnit(%d factors)" % len(self.factors)


def quotient(H, H2):
    """l_H / l_H2 as a MonomialUnit."""
    return MonomialUnit(H.ctx, [(H, 1), (H2, -1)])


def f_factor(ctx, H, H2, n):
    """The unit 1 + pi^n l_H / l_H2, rewritten exactly as l_{y''} / l_{y'}
    with y'' = y' + pi^n y (y from H, y' from H2)."""
    if H == H2:
        raise EqualHyperplanes("the two hyperplanes must differ")
    y2 = H2.y
    y = H.y
    shifted = tuple(s.shift_up(n) for s in y)
    ysum = tuple(a.add(b) for a, b in zip(y2, shifted))
    try:
        top = Hyperplane(ctx, ysum)
    except ZeroVector:
        raise EqualHyperplanes("1 + pi^%d l_H/l_H' vanishes at this precision" % n)
    return quotient(top, H2)


def log_norm(ctx, y, v):
    """log_q of the sup of |l_y| over the canonical representative lattice of
    v.  Only differences across vertices are meaningful."""
    cache = getattr(ctx, "_log_norm_cache", None)
    if cache is None:
        cache = ctx._log_norm_cache = {}
    ck = (tuple(s.digits for s in y), v.key)
    hit = cache.get(ck)
    if hit is not None:
        return hit
    best = ctx.spec.N
    for row in v.rep.rows:
        acc = ctx.spec.zero()
        for a, b in zip(row, y):
            if not (a.is_zero() or b.is_zero()):
                acc = acc.add(a.mul(b))
        vv = acc.val()
        if vv < best:
            best = vv
    out = -best
    cache[ck] = out
    return out


def vdp_oracle(ctx, u, e):
    """Transform of u at arrow e, from lattice norms.  Exact integer; the
    class-scaling ambiguity cancels because the multiplicities sum to 0."""
    total = 0
    for h, m in u.factors.values():
        total += m * (log_norm(ctx, h.y, e.to_v) - log_norm(ctx, h.y, e.from_v))
    return total


def _pair_decomposition(u):
    """Greedy pairing of positive against negative multiplicities in canonical
    hyperplane order; returns [(H_plus, H_minus, count)]."""
    pos = []
    neg = []
    for h, m in u.factors.values():
        if m > 0:
            pos.append([h, m])
        else:
            neg.append([h, -m])
    pairs = []
    i = j = 0
    while i < len(pos) and j < len(neg):
        c = min(pos[i][1], neg[j][1])
        pairs.append((pos[i][0], neg[j][0], c))
        pos[i][1] -= c
        neg[j][1] -= c
        if pos[i][1] == 0:
            i += 1
        if neg[j][1] == 0:
            j += 1
    return pairs


def _first_step_residue(ctx, v, h):
    """The residue covector cutting out the type-1 arrow (v, tau_H(v)) in the
    coordinates of rep(v): reduce B . y^T after clearing its pi-content."""
    cache = getattr(ctx, "_eh_cache", None)
    if cache is None:
        cache = ctx._eh_cache = {}
    ck = (v.key, h.key)
    hit = cache.get(ck)
    if hit is not None:
        return hit
    spec = ctx.spec
    z = []
    for row in v.rep.rows:
        acc = spec.zero()
        for a, b in zip(row, h.y):
            if not (a.is_zero() or b.is_zero()):
                acc = acc.add(a.mul(b))
        z.append(acc)
    m = min(s.val() for s in z)
    wbar = tuple(s.shift_down(m).digits[0] for s in z)
    cache[ck] = wbar
    return wbar


def _under_first_step(ctx, e, h):
    """e precedes e_H = (o(e), tau_H(o(e)))?  True iff the subspace of e lies
    in the kernel of the first-step residue covector of H at o(e)."""
    wbar = _first_step_residue(ctx, e.from_v, h)
    field = ctx.field
    return all(dot(row, wbar, field) == 0 for row in e.subspace)


def vdp_closed(ctx, u, e):
    """Transform of u at arrow e from the three-case table, summed over a
    pair decomposition of u."""
    total = 0
    for hp, hm, c in _pair_decomposition(u):
        under_p = _under_first_step(ctx, e, hp)
        under_m = _under_first_step(ctx, e, hm)
        if under_p and not under_m:
            total -= c
        elif under_m and not under_p:
            total += c
    return total


def special_path(ctx, h, length):
    """Vertices v_0 .. v_length of the iterated one-hyperplane shift; the
    endpoint depends only on the length-class of the covector."""
    cache = getattr(ctx, "_path_cache", None)
    if cache is None:
        cache = ctx._path_cache = {}
    ck = (h.key if isinstance(h, Hyperplane) else tuple(s.digits for s in h), length)
    hit = cache.get(ck)
    if hit is not None:
        return hit
    y = h.y if isinstance(h, Hyperplane) else h
    path = [ctx.origin]
    for _ in range(length):
        path.append(ctx.tau_shift(path[-1], (y,)))
    cache[ck] = path
    return path


def _is_special_vertex(v):
    return all(x == 0 for x in v.sed[1:])


def special_eval(ctx, H, H2, n, e):
    """Value of the transform of f_{H,H2,n} on an (n+1)-special arrow, from
    the closed pattern: +1 on the continuation of the H2-path, -1 on the
    perturbed step, 0 elsewhere."""
    if ctx.class_key(H.y, 1) == ctx.class_key(H2.y, 1):
        raise EqualHyperplanes("first steps of the two paths must differ")
    o, t = e.from_v, e.to_v
    if not (e.type_t == 1 and _is_special_vertex(o) and _is_special_vertex(t)
            and o.sed[0] == n and t.sed[0] == n + 1):
        raise NotSpecialArrow("expected an (n+1)-special arrow")
    path = special_path(ctx, H2, n + 1)
    if o.key != path[n].key:
        return 0
    if t.key == path[n + 1].key:
        return 1
    shifted = tuple(s.shift_up(n) for s in H.y)
    ydd = tuple(a.add(b) for a, b in zip(H2.y, shifted))
    w = ctx.tau_shift(path[n], (ydd,))
    if t.key == w.key:
        return -1
    return 0
