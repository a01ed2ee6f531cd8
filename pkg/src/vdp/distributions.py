"""Finite-level distributions on the primitive covector classes.

A depth-n distribution assigns a volume to every k-class for k <= n, additive
under refinement and with total mass zero at level 1.  Harmonic cochains on
the depth-n ball correspond to such distributions by reading the tree
restriction along special arrows; the inverse completes the volumes to a tree
cochain and extends harmonically.
"""

from .errors import DepthExceeded, NotHarmonic
from .harmonic import TreeCochain, restrict_to_tree


class Distribution:
    """Volumes keyed by (k, class key) for 1 <= k <= depth."""

    def __init__(self, ctx, depth, volumes, mod=None, tree=None):
        self.ctx = ctx
        self.depth = depth
        self.mod = mod
        self.tree = tree if tree is not None else ctx.special_structure(depth)
        self.volumes = {}
        for level in self.tree.levels[1:]:
            for key in level:
                if key not in volumes:
                    raise ValueError("volume undefined for class %r" % (key,))
                v = volumes[key]
                self.volumes[key] = v if mod is None else v % mod

    def volume(self, y, k):
        """Volume of the k-class of the primitive covector y."""
        if not (1 <= k <= self.depth):
            raise DepthExceeded("level %d outside [1, %d]" % (k, self.depth))
        return self.volumes[(k, self.ctx.class_key(y, k))]

    def total_mass(self):
        m = sum(self.volumes[k] for k in self.tree.levels[1])
        return m if self.mod is None else m % self.mod

    def reduce_mod(self, m):
        return Distribution(self.ctx, self.depth, self.volumes, mod=m,
                            tree=self.tree)

    def serialize(self):
        entries = []
        for level in self.tree.levels[1:]:
            for key in level:
                node = self.tree.nodes[key]
                entries.append({
                    "class": [s.serialize() for s in node.class_rep],
                    "k": node.level,
                    "value": self.volumes[key],
                })
        return {"depth": self.depth, "volumes": entries}


def cochain_to_distribution(phi, tree=None):
    """Distribution read off a harmonic ball cochain along special arrows."""
    ctx = phi.ctx
    if tree is None:
        tree = ctx.special_structure(phi.depth)
    psi = restrict_to_tree(phi, tree)
    return Distribution(ctx, phi.depth, psi.values, mod=phi.mod, tree=tree)


def distribution_to_cochain(delta, ball=None):
    """Harmonic ball cochain whose class volumes are the given distribution.

    Additivity of the volumes is exactly the tree flow condition, so the
    completion is checked there.
    """
    from .reconstruct import extend_from_tree
    psi = TreeCochain(delta.ctx, delta.tree, delta.volumes, mod=delta.mod)
    if delta.mod is not None:
        raise NotHarmonic("extension is defined over the integers; reduce after")
    phi, _ = extend_from_tree(delta.ctx, psi, ball)
    return phi


def pushforward(ctx, g, delta):
    """Image of a distribution under an invertible matrix over O, acting on
    covector classes through the compatible transport y . g^T."""
    moved = {}
    for level in delta.tree.levels[1:]:
        for key in level:
            k, _ = key
            y = delta.tree.nodes[key].class_rep
            target = (k, ctx.class_key(ctx.act_covector(g, y), k))
            moved[target] = delta.volumes[key]
    return Distribution(ctx, delta.depth, moved, mod=delta.mod, tree=delta.tree)
