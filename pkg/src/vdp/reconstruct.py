"""Constructive surjectivity at finite depth: synthesize a factor list of
monomial units whose transform matches a prescribed harmonic cochain on the
ball, level by level along the special tree.

Level 1 is a product of quotients of linear forms chosen per 1-class; each
deeper level adds perturbation units 1 + pi^i l_H/l_H' (rewritten as exact
quotients) whose transforms vanish on the inner ball and realize the residual
values on the next layer of special arrows.
"""

from .errors import FlowViolation, NonzeroSum, NotHarmonic
from .ffield import right_nullspace
from .harmonic import cochain_from_unit, is_harmonic
from .units import Hyperplane, MonomialUnit, vdp_oracle


class FactorList:
    """Monomial units u_1 .. u_n; the transform of the product matches the
    prescribed cochain on the depth-n ball, and the level-i unit's transform
    vanishes on the ball of radius i-1."""

    def __init__(self, ctx, levels):
        self.ctx = ctx
        self.levels = list(levels)

    def product(self):
        acc = MonomialUnit(self.ctx, [])
        for u in self.levels:
            acc = acc.mul(u)
        return acc

    def serialize(self):
        return {"levels": [u.serialize() for u in self.levels]}


def class_hyperplane_of_arrow(ctx, e):
    """The 1-class hyperplane cutting out a type-1 arrow at the origin."""
    (w,) = right_nullspace(e.subspace, ctx.r, ctx.field)
    y = tuple(ctx.spec.from_digits([c]) for c in w)
    return Hyperplane(ctx, y)


def solve_level1(ctx, targets):
    """A unit whose transform takes the given zero-sum values on the type-1
    arrows at the origin.  ``targets`` maps arrow keys to integers."""
    arrows = ctx.arrows_from(ctx.origin, 1)
    if set(targets) != {e.key for e in arrows}:
        raise ValueError("targets must cover exactly the type-1 origin arrows")
    if sum(targets.values()) != 0:
        raise NonzeroSum("level-1 targets must sum to zero")
    factors = []
    for e in arrows:
        m = targets[e.key]
        if m != 0:
            factors.append((class_hyperplane_of_arrow(ctx, e), -m))
    return MonomialUnit(ctx, factors)


def solve_level(ctx, tree, i, residual):
    """A unit whose transform realizes the residual on the level-(i+1) tree
    arrows and vanishes on the ball of radius i.  ``residual`` maps level-(i+1)
    node keys to integers, summing to zero under each level-i vertex."""
    if i < 1:
        raise ValueError("solve_level starts at i = 1; use solve_level1 below that")
    factors = []
    for key in tree.levels[i]:
        node = tree.nodes[key]
        total = sum(residual[c] for c in node.children)
        if total != 0:
            raise FlowViolation("residual does not sum to zero under %r" % (key,))
        y_prime = node.class_rep
        cont = None
        for c in node.children:
            if tree.nodes[c].class_rep == y_prime:
                cont = c
                break
        assert cont is not None, "continuation child missing"
        base = Hyperplane(ctx, y_prime)
        for c in node.children:
            if c == cont:
                continue
            m = residual[c]
            if m == 0:
                continue
            top = Hyperplane(ctx, tree.nodes[c].class_rep)
            factors.append((top, -m))
            factors.append((base, m))
    return MonomialUnit(ctx, factors)


def reconstruct(ctx, phi, tree=None):
    """Factor list matching a harmonic cochain on its ball, level by level."""
    if not is_harmonic(phi):
        raise NotHarmonic("reconstruction requires a harmonic cochain")
    n = phi.depth
    if tree is None:
        tree = ctx.special_structure(n)
    levels = []
    acc = MonomialUnit(ctx, [])
    if n >= 1:
        targets = {e.key: phi.values[e.key] for e in ctx.arrows_from(ctx.origin, 1)}
        u1 = solve_level1(ctx, targets)
        levels.append(u1)
        acc = u1
    for i in range(1, n):
        residual = {}
        for key in tree.levels[i + 1]:
            arrow = tree.nodes[key].arrow
            residual[key] = phi.values[arrow.key] - vdp_oracle(ctx, acc, arrow)
        u = solve_level(ctx, tree, i, residual)
        levels.append(u)
        acc = acc.mul(u)
    return FactorList(ctx, levels)


def extend_from_tree(ctx, psi, ball=None):
    """Harmonic extension of a flow-valid tree cochain to the whole ball.

    Returns (cochain, factor_list); restricting the cochain back to the tree
    reproduces psi exactly.
    """
    from .harmonic import check_flow
    rep = check_flow(psi)
    if not rep.passed:
        raise FlowViolation("tree cochain violates the flow condition: %r"
                            % rep.violations[:3])
    tree = psi.tree
    n = tree.n
    if ball is None:
        ball = ctx.enumerate_ball(n)
    levels = []
    acc = MonomialUnit(ctx, [])
    if n >= 1:
        targets = {tree.nodes[key].arrow.key: psi.values[key]
                   for key in tree.levels[1]}
        u1 = solve_level1(ctx, targets)
        levels.append(u1)
        acc = u1
    for i in range(1, n):
        residual = {}
        for key in tree.levels[i + 1]:
            arrow = tree.nodes[key].arrow
            residual[key] = psi.values[key] - vdp_oracle(ctx, acc, arrow)
        u = solve_level(ctx, tree, i, residual)
        levels.append(u)
        acc = acc.mul(u)
    phi = cochain_from_unit(ctx, acc, ball)
    return phi, FactorList(ctx, levels)
