"""Cochains on balls and on the special tree, and their validity checks.

A cochain assigns a coefficient to every arrow of a ball, alternating under
reversal.  Checks: (A) alternation plus vanishing triangle-boundary sums
(these generate all closed-path relations because the complex is contractible
and flag), (B_t) type-t star sums vanish, (C) higher-type values equal the
sum over dominating type-1 arrows.  Tree cochains instead satisfy the flow
condition.  All conditions are asserted only at vertices whose full star lies
inside the ball; boundary vertices are reported as unchecked, never as
failures.

Coefficients default to the integers; passing ``mod=m`` works in Z/m.
"""

from .errors import NotHarmonic
from .units import vdp_oracle


class CheckReport:
    """Outcome of a validity check: pass/fail, located violations, and the
    vertices that could not be checked."""

    def __init__(self, name, violations, unchecked=()):
        self.name = name
        self.violations = list(violations)
        self.unchecked = list(unchecked)
        self.passed = not self.violations

    def serialize(self):
        return {
            "check": self.name,
            "passed": self.passed,
            "violations": self.violations,
            "unchecked_vertices": len(self.unchecked),
        }

    def __repr__(self):
        return "CheckReport(%s, passed=%s, %d violations)" % (
            self.name, self.passed, len(self.violations))


def _normalizer(mod):
    if mod is None:
        return lambda x: x
    return lambda x: x % mod


class Cochain:
    """Finite coefficient assignment on all arrows of a ball, both
    orientations stored."""

    def __init__(self, ctx, ball, values, mod=None):
        self.ctx = ctx
        self.ball = ball
        self.depth = ball.n
        self.mod = mod
        norm = _normalizer(mod)
        self.values = {k: norm(v) for k, v in values.items()}
        missing = [k for k in ball.arrows if k not in self.values]
        if missing:
            raise ValueError("cochain undefined on %d arrows" % len(missing))

    def value(self, arrow_or_key):
        key = arrow_or_key if isinstance(arrow_or_key, tuple) else arrow_or_key.key
        return self.values[key]

    def reduce_mod(self, m):
        return Cochain(self.ctx, self.ball, self.values, mod=m)

    def add(self, other):
        norm = _normalizer(self.mod)
        return Cochain(self.ctx, self.ball,
                       {k: norm(v + other.values[k]) for k, v in self.values.items()},
                       mod=self.mod)

    def serialize(self):
        entries = []
        for (a, b), v in sorted(self.values.items()):
            if a < b:
                arrow = self.ball.arrows[(a, b)]
                entries.append({
                    "arrow": serialize_arrow(arrow),
                    "value": v,
                })
        return {"depth": self.depth, "entries": entries}


def serialize_vertex(v):
    return {"rep": v.rep.serialize(), "sed": list(v.sed)}


def serialize_arrow(e):
    return {"from": serialize_vertex(e.from_v), "to": serialize_vertex(e.to_v),
            "type": e.type_t}


def cochain_from_unit(ctx, u, ball, mod=None):
    """Tabulated transform of a monomial unit on every arrow of the ball."""
    values = {k: vdp_oracle(ctx, u, e) for k, e in ball.arrows.items()}
    return Cochain(ctx, ball, values, mod=mod)


def zero_cochain(ctx, ball, mod=None):
    return Cochain(ctx, ball, {k: 0 for k in ball.arrows}, mod=mod)


def check_A(phi):
    """Alternation plus triangle-boundary sums."""
    ball = phi.ball
    norm = _normalizer(phi.mod)
    violations = []
    for (a, b) in ball.arrows:
        if a < b:
            s = norm(phi.values[(a, b)] + phi.values[(b, a)])
            if s != 0:
                violations.append({"kind": "alternation", "arrow": [a, b], "sum": s})
    for (a, b, c) in ball.triangles():
        s = norm(phi.values[(a, b)] + phi.values[(b, c)] + phi.values[(c, a)])
        if s != 0:
            violations.append({"kind": "triangle", "vertices": [a, b, c], "sum": s})
    return CheckReport("A", violations)


def check_Bt(phi, t):
    """Type-t star sums vanish at interior vertices."""
    ctx = phi.ctx
    ball = phi.ball
    norm = _normalizer(phi.mod)
    violations = []
    interior = set(ball.interior_keys())
    for k in interior:
        v = ball.vertices[k]
        s = norm(sum(phi.values[e.key] for e in ctx.arrows_from(v, t)))
        if s != 0:
            violations.append({"kind": "star_sum", "type": t, "vertex": k, "sum": s})
    unchecked = [k for k in ball.vertices if k not in interior]
    return CheckReport("B%d" % t, violations, unchecked)


def check_C(phi):
    """Each value of type >= 2 equals the sum over dominating type-1 arrows."""
    ctx = phi.ctx
    ball = phi.ball
    norm = _normalizer(phi.mod)
    violations = []
    interior = set(ball.interior_keys())
    for k in interior:
        v = ball.vertices[k]
        ones = ctx.arrows_from(v, 1)
        for t in range(2, ctx.r):
            for e in ctx.arrows_from(v, t):
                s = sum(phi.values[e1.key] for e1 in ones if ctx.dominates(e, e1))
                if norm(s - phi.values[e.key]) != 0:
                    violations.append({"kind": "domination_sum", "vertex": k,
                                       "arrow": list(e.key), "got": norm(s),
                                       "want": phi.values[e.key]})
    unchecked = [k for k in ball.vertices if k not in interior]
    return CheckReport("C", violations, unchecked)


def check_all(phi):
    reports = [check_A(phi)]
    for t in range(1, phi.ctx.r):
        reports.append(check_Bt(phi, t))
    reports.append(check_C(phi))
    return reports


def is_harmonic(phi):
    return all(rep.passed for rep in check_all(phi))


class TreeCochain:
    """Values on the arrows of the special tree oriented away from the
    origin; the reversed orientation is implied by alternation."""

    def __init__(self, ctx, tree, values, mod=None):
        self.ctx = ctx
        self.tree = tree
        self.depth = tree.n
        self.mod = mod
        norm = _normalizer(mod)
        self.values = {}
        for level in tree.levels[1:]:
            for key in level:
                if key not in values:
                    raise ValueError("tree cochain undefined at %r" % (key,))
                self.values[key] = norm(values[key])

    def value(self, node_key):
        return self.values[node_key]

    def serialize(self):
        out = []
        for level in self.tree.levels[1:]:
            for key in level:
                node = self.tree.nodes[key]
                out.append({
                    "class": [s.serialize() for s in node.class_rep],
                    "k": node.level,
                    "value": self.values[key],
                })
        return {"depth": self.depth, "entries": out}


def check_flow(psi):
    """Incoming value equals the sum of outbound values at every inner
    special vertex; the star sum at the origin vanishes."""
    tree = psi.tree
    norm = _normalizer(psi.mod)
    violations = []
    root_sum = norm(sum(psi.values[k] for k in tree.root.children))
    if tree.root.children and root_sum != 0:
        violations.append({"kind": "origin_sum", "sum": root_sum})
    for level in tree.levels[1:-1]:
        for key in level:
            node = tree.nodes[key]
            s = norm(sum(psi.values[c] for c in node.children) - psi.values[key])
            if s != 0:
                violations.append({"kind": "flow", "node": list(map(str, key)),
                                   "mismatch": s})
    unchecked = tree.levels[-1] if tree.n >= 1 else []
    return CheckReport("flow", violations, unchecked)


def restrict_to_tree(phi, tree):
    """Restriction of a harmonic ball cochain to the special tree."""
    if not is_harmonic(phi):
        raise NotHarmonic("restriction requires a harmonic cochain")
    values = {}
    for level in tree.levels[1:]:
        for key in level:
            values[key] = phi.values[tree.nodes[key].arrow.key]
    return TreeCochain(phi.ctx, tree, values, mod=phi.mod)
