"""Lattice-class vertices, typed arrows, balls, and the special tree.

A vertex is a similarity class of full-rank O-lattices in K^r, represented by
the unique scaled lower-triangular Hermite form of a basis matrix (rows span
the lattice).  Arrows are oriented adjacent pairs carrying the subspace of
L/piL that cuts out the target.  Balls are enumerated breadth-first with
canonical deduplication; the special tree is indexed by primitive covector
classes.
"""

from functools import lru_cache
from itertools import product

from .errors import (DifferentOrigin, PrecisionExhausted, WorkLimitExceeded,
                     ZeroVector)
from .ffield import enumerate_subspaces, gf, rref
from .ring import OMatrix, RingSpec


def working_precision(r, depth):
    """Digits needed so every Hermite/Smith pivot at this depth is certified.

    Triangularizing an arrow-target stack spends up to (r-1)(depth+1)
    valuation units of watermark while the canonical entries occupy digits
    below depth+2; the 2(depth+1) floor keeps shallow sessions roomy.
    """
    return max(2 * (depth + 1), (r - 1) * (depth + 1) + depth + 4)


class Vertex:
    """Canonical lattice-class representative with its elementary divisors."""

    __slots__ = ("rep", "sed", "key", "_smith")

    def __init__(self, rep, sed):
        self.rep = rep
        self.sed = tuple(sed)
        self.key = rep.key()
        self._smith = None

    def smith(self):
        from .ring import smith_form
        if self._smith is None:
            self._smith = smith_form(self.rep)
        return self._smith

    def __eq__(self, other):
        return isinstance(other, Vertex) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "Vertex(sed=%s)" % (self.sed,)


class Arrow:
    """Oriented adjacent pair of vertices with its type and subspace.

    ``subspace`` is the reduced-echelon basis (over F_q, in coordinates given
    by the rows of rep(from_v)) of the image of the target lattice in L/piL;
    its dimension is r - type_t.
    """

    __slots__ = ("from_v", "to_v", "type_t", "subspace", "key")

    def __init__(self, from_v, to_v, type_t, subspace):
        self.from_v = from_v
        self.to_v = to_v
        self.type_t = type_t
        self.subspace = subspace
        self.key = (from_v.key, to_v.key)

    def __eq__(self, other):
        return isinstance(other, Arrow) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "Arrow(type=%d)" % self.type_t


class BuildingContext:
    """All building operations for fixed (r, q, depth, mode).

    Holds the ring spec and memoization caches; every public method is pure.
    """

    def __init__(self, r, q, depth, mode="eqchar", precision=None):
        if r < 2:
            raise ValueError("r must be >= 2")
        self.r = r
        self.q = q
        self.depth = depth
        self.spec = RingSpec(q, precision or working_precision(r, depth), mode)
        self.field = gf(q)
        self._vertex_cache = {}
        self._arrows_cache = {}
        self._subspace_cache = {}
        self.origin = self.canonical_vertex(OMatrix.identity(self.spec, r))

    # -- canonical form -----------------------------------------------------

    def _triangularize(self, rows):
        """Lower-triangular Hermite form of the lattice spanned by the given
        rows (at least r of them, full rank)."""
        spec = self.spec
        r = self.r
        work = [list(row) for row in rows]
        out = [None] * r
        avail = list(range(len(work)))
        for j in range(r - 1, -1, -1):
            best = None
            best_val = spec.N
            for i in avail:
                v = work[i][j].val()
                if v < best_val:
                    best_val = v
                    best = i
            if best is None or best_val >= spec.N:
                raise PrecisionExhausted("rows do not span a full-rank lattice")
            a = best_val
            avail.remove(best)
            pivot = work[best]
            uinv = pivot[j].shift_down(a).inverse()
            pivot = [x.mul(uinv) for x in pivot]
            for i in avail:
                e = work[i][j]
                if not e.is_zero():
                    f = e.shift_down(a)
                    work[i] = [x.sub(f.mul(y)) for x, y in zip(work[i], pivot)]
                    work[i][j] = spec.zero()
            out[j] = pivot
        # reduce below-diagonal entries modulo the column pivot
        for i in range(r):
            for j in range(i - 1, -1, -1):
                e = out[i][j]
                a_j = out[j][j].val()
                red = e.reduce_mod(a_j)
                if red != e:
                    f = e.sub(red).shift_down(a_j)
                    out[i] = [x.sub(f.mul(y)) for x, y in zip(out[i], out[j])]
        return out

    def lattice_from_rows(self, rows):
        """Canonical Vertex of the class of the lattice spanned by the rows."""
        tri = self._triangularize(rows)
        m = min(x.val() for row in tri for x in row)
        if m >= self.spec.N:
            raise PrecisionExhausted("zero lattice")
        if m > 0:
            tri = [[x.shift_down(m) for x in row] for row in tri]
        M = OMatrix(self.spec, tri)
        key = M.key()
        hit = self._vertex_cache.get(key)
        if hit is not None:
            return hit
        from .ring import smith_form
        _, divisors, _ = smith_form(M)
        v = Vertex(M, divisors)
        self._vertex_cache[key] = v
        return v

    def canonical_vertex(self, M):
        """Canonical representative of the similarity class of rowspan(M)."""
        return self.lattice_from_rows(M.rows)

    def vertex_from_key(self, key):
        hit = self._vertex_cache.get(key)
        if hit is not None:
            return hit
        spec = self.spec
        from .ring import Scalar
        M = OMatrix(spec, [[Scalar(spec, d) for d in row] for row in key])
        return self.canonical_vertex(M)

    # -- metric -------------------------------------------------------------

    def _relative_matrix(self, v, w):
        """Z = rep(w) . rep(v)^{-1} . pi^{dmax}, entirely over O, plus dmax."""
        U, divisors, W = v.smith()
        dmax = divisors[0]
        spec = self.spec
        BW = w.rep.mul(W)
        scaled = [[BW.rows[i][j].shift_up(dmax - divisors[j]) for j in range(self.r)]
                  for i in range(self.r)]
        Z = OMatrix(spec, scaled).mul(U)
        return Z, dmax

    def rel_divisors(self, v, w):
        """Elementary divisors (descending, possibly negative) of a matrix
        expressing w's lattice in v's basis."""
        from .ring import smith_form
        Z, dmax = self._relative_matrix(v, w)
        _, divisors, _ = smith_form(Z)
        return [d - dmax for d in divisors]

    def distance(self, v, w):
        if v.key == w.key:
            return 0
        d = self.rel_divisors(v, w)
        return d[0] - d[-1]

    # -- arrows -------------------------------------------------------------

    def _lift(self, code):
        """Residue-field code lifted to a constant-digit Scalar."""
        return self.spec.from_digits([code])

    def arrows_from(self, v, t):
        """All arrows of type t out of v, one per codimension-t subspace of
        L/piL, in a fixed deterministic order."""
        if not (1 <= t <= self.r - 1):
            raise ValueError("type must be in [1, r-1]")
        key = (v.key, t)
        hit = self._arrows_cache.get(key)
        if hit is not None:
            return hit
        r = self.r
        spec = self.spec
        B = v.rep.rows
        pi_rows = [tuple(x.shift_up(1) for x in row) for row in B]
        out = []
        for sub in enumerate_subspaces(r, r - t, self.field):
            lifted = []
            for crow in sub:
                acc = [spec.zero()] * r
                for j, code in enumerate(crow):
                    if code:
                        c = self._lift(code)
                        acc = [a.add(c.mul(b)) for a, b in zip(acc, B[j])]
                lifted.append(tuple(acc))
            target = self.lattice_from_rows(lifted + pi_rows)
            out.append(Arrow(v, target, t, sub))
        self._arrows_cache[key] = out
        return out

    def all_arrows_from(self, v):
        out = []
        for t in range(1, self.r):
            out.extend(self.arrows_from(v, t))
        return out

    def arrow_subspace(self, v, w):
        """Recover (subspace, type) of the arrow v -> w for adjacent v, w."""
        key = (v.key, w.key)
        hit = self._subspace_cache.get(key)
        if hit is not None:
            return hit
        from .ring import smith_form
        Z, dmax = self._relative_matrix(v, w)
        _, divisors, _ = smith_form(Z)
        rel = [d - dmax for d in divisors]
        if rel[0] - rel[-1] != 1:
            raise ValueError("vertices are not adjacent")
        shift = dmax + rel[-1]
        rows = []
        for row in Z.rows:
            rows.append(tuple(x.shift_down(shift).digits[0] for x in row))
        sub, _ = rref(rows, self.field)
        t = self.r - len(sub)
        result = (sub, t)
        self._subspace_cache[key] = result
        return result

    def arrow_between(self, v, w):
        sub, t = self.arrow_subspace(v, w)
        return Arrow(v, w, t, sub)

    def reverse(self, e):
        return self.arrow_between(e.to_v, e.from_v)

    def dominates(self, e, e2):
        """e precedes e2: same origin and subspace(e) contained in subspace(e2)."""
        if e.from_v.key != e2.from_v.key:
            raise DifferentOrigin("domination needs a common origin")
        # both subspaces are reduced echelon bases in the same coordinates
        from .ffield import span_contained
        return span_contained(e.subspace, e2.subspace, self.field)

    # -- shifts -------------------------------------------------------------

    def tau_arrow(self, v, covectors):
        """The arrow v -> [(L meet U) + piL] for U the common kernel of the
        given covector rows (tuples of Scalars)."""
        from .ring import smith_form
        spec = self.spec
        r = self.r
        t = len(covectors)
        B = v.rep.rows
        Z = OMatrix(spec, [[sum((B[i][k].mul(y[k]) for k in range(r)), spec.zero())
                            for y in covectors] for i in range(r)])
        U, divisors, _ = smith_form(Z)
        kernel_rows = [U.rows[i] for i in range(t, r)]
        lifted = [tuple(sum((c[k].mul(B[k][j]) for k in range(r)), spec.zero())
                        for j in range(r)) for c in kernel_rows]
        pi_rows = [tuple(x.shift_up(1) for x in row) for row in B]
        target = self.lattice_from_rows(lifted + pi_rows)
        sub, _ = rref([tuple(x.digits[0] for x in c) for c in kernel_rows], self.field)
        if len(sub) != r - t:
            raise PrecisionExhausted("kernel reduction dropped rank")
        return Arrow(v, target, t, sub)

    def tau_shift(self, v, covectors):
        return self.tau_arrow(v, covectors).to_v

    # -- covector classes ---------------------------------------------------

    def canonical_covector(self, y, k=None):
        """Canonical representative of the k-class (default: full precision)
        of the primitive covector y (tuple of Scalars): first unit coordinate
        scaled to 1, all coordinates reduced mod pi^k."""
        if k is None:
            k = self.spec.N
        pivot = None
        for i, s in enumerate(y):
            if s.val() == 0:
                pivot = i
                break
        if pivot is None:
            raise ZeroVector("covector is not primitive")
        uinv = y[pivot].inverse()
        return tuple(s.mul(uinv).reduce_mod(k) for s in y)

    def primitivize(self, y):
        """Divide a nonzero covector by the pi-power making it primitive."""
        m = min(s.val() for s in y)
        if m >= self.spec.N:
            raise ZeroVector("zero covector")
        if m == 0:
            return y
        return tuple(s.shift_down(m) for s in y)

    def n_classes(self, n):
        """Canonical representatives of all n-classes of primitive covectors,
        in a fixed deterministic order."""
        spec = self.spec
        r = self.r
        q = self.q
        out = []
        for pivot in range(r):
            free = []
            for j in range(r):
                if j == pivot:
                    continue
                lo = 1 if j < pivot else 0
                free.append((j, lo))
            ranges = [range(q ** (n - lo)) for _, lo in free]
            for combo in product(*ranges):
                y = [spec.zero()] * r
                y[pivot] = spec.one()
                for (j, lo), code in zip(free, combo):
                    digits = [0] * lo
                    c = code
                    for _ in range(n - lo):
                        digits.append(c % q)
                        c //= q
                    y[j] = spec.from_digits(digits)
                out.append(tuple(y))
        return out

    def class_key(self, y, k):
        return tuple(s.digits[:k] for s in self.canonical_covector(y, k))

    def class_refinements(self, y, k):
        """The q^{r-1} canonical (k+1)-class representatives refining the
        k-class with canonical representative y."""
        spec = self.spec
        q = self.q
        pivot = next(i for i, s in enumerate(y) if s.val() == 0)
        out = []
        for combo in product(range(q), repeat=self.r - 1):
            ds = iter(combo)
            child = []
            for j, s in enumerate(y):
                if j == pivot:
                    child.append(s)
                else:
                    d = next(ds)
                    if d:
                        child.append(s.add(spec.pi(k).mul(self._lift(d))))
                    else:
                        child.append(s)
            out.append(tuple(child))
        return out

    # -- balls --------------------------------------------------------------

    def enumerate_ball(self, n, work_limit=10 ** 6):
        return Ball(self, n, work_limit)

    # -- special structure ---------------------------------------------------

    def special_structure(self, n):
        return SpecialTree(self, n)

    # -- group action --------------------------------------------------------

    def _det(self, rows):
        spec = self.spec
        if len(rows) == 1:
            return rows[0][0]
        acc = spec.zero()
        sign = spec.one()
        for j in range(len(rows)):
            minor = [tuple(row[k] for k in range(len(rows)) if k != j) for row in rows[1:]]
            term = sign.mul(rows[0][j]).mul(self._det(minor))
            acc = acc.add(term)
            sign = sign.neg()
        return acc

    def act_vertex(self, g, v):
        return self.canonical_vertex(v.rep.mul(g))

    def act_arrow(self, g, e):
        return self.arrow_between(self.act_vertex(g, e.from_v), self.act_vertex(g, e.to_v))

    def act_covector(self, g, y):
        """The transport of covectors compatible with the lattice action:
        y . g^T, so that <y.g^T, x> = <y, x.g>; re-primitivized and
        canonicalized."""
        spec = self.spec
        rows = g.rows
        out = []
        for j in range(self.r):
            acc = spec.zero()
            for i in range(self.r):
                acc = acc.add(y[i].mul(rows[j][i]))
            out.append(acc)
        return self.canonical_covector(self.primitivize(tuple(out)))

    def gl_action(self, g, x):
        """Right action of an invertible matrix over O on a Vertex, an Arrow,
        or a covector (tuple of Scalars)."""
        d = self._det(g.rows)
        if d.val() >= self.spec.N:
            raise PrecisionExhausted("determinant not certifiable")
        if isinstance(x, Vertex):
            return self.act_vertex(g, x)
        if isinstance(x, Arrow):
            return self.act_arrow(g, x)
        if isinstance(x, tuple):
            return self.act_covector(g, x)
        hp = getattr(x, "y", None)
        if hp is not None:
            from .units import Hyperplane
            return Hyperplane(self, self.act_covector(g, hp))
        raise TypeError("cannot act on %r" % (x,))


class Ball:
    """The full subcomplex BT(n): vertex set, all arrows between members,
    distances from the origin."""

    def __init__(self, ctx, n, work_limit=10 ** 6):
        self.ctx = ctx
        self.n = n
        v0 = ctx.origin
        dist = {v0.key: 0}
        vertices = {v0.key: v0}
        frontier = [v0]
        for level in range(1, n + 1):
            new = []
            for v in frontier:
                for e in ctx.all_arrows_from(v):
                    w = e.to_v
                    if w.key not in dist:
                        dist[w.key] = level
                        vertices[w.key] = w
                        new.append(w)
                        if len(vertices) > work_limit:
                            raise WorkLimitExceeded("ball exceeds %d vertices" % work_limit)
            frontier = new
        self.vertices = vertices
        self.dist = dist
        arrows = {}
        by_origin = {}
        for v in vertices.values():
            mine = []
            for e in ctx.all_arrows_from(v):
                if e.to_v.key in vertices:
                    arrows[e.key] = e
                    mine.append(e)
            by_origin[v.key] = mine
        self.arrows = arrows
        self.by_origin = by_origin

    def interior_keys(self):
        """Vertices whose full star lies inside the ball."""
        return [k for k, d in self.dist.items() if d <= self.n - 1]

    def triangles(self):
        """All 3-cliques (unordered) of the 1-skeleton."""
        neigh = {}
        for (a, b) in self.arrows:
            neigh.setdefault(a, set()).add(b)
        out = []
        order = {k: i for i, k in enumerate(sorted(self.vertices))}
        for a in self.vertices:
            na = neigh.get(a, ())
            for b in na:
                if order[b] <= order[a]:
                    continue
                for c in neigh.get(b, ()):
                    if order[c] > order[b] and c in na:
                        out.append((a, b, c))
        return out


class TreeNode:
    __slots__ = ("level", "class_rep", "key", "vertex", "parent", "children", "arrow")

    def __init__(self, level, class_rep, key, vertex, parent, arrow):
        self.level = level
        self.class_rep = class_rep
        self.key = key
        self.vertex = vertex
        self.parent = parent
        self.children = []
        self.arrow = arrow  # arrow from parent's vertex to this vertex


class SpecialTree:
    """The tree of special vertices to depth n, indexed by covector classes.

    Node keys are (level, truncated digit tuple); the root has key
    (0, None).  The arrow stored at a node points away from the origin.
    """

    def __init__(self, ctx, n):
        self.ctx = ctx
        self.n = n
        root = TreeNode(0, None, (0, None), ctx.origin, None, None)
        self.root = root
        self.nodes = {root.key: root}
        self.levels = [[root.key]]
        self.vertex_to_node = {ctx.origin.key: root.key}
        frontier = []
        for y in ctx.n_classes(1) if n >= 1 else []:
            frontier.append((root, y))
        for level in range(1, n + 1):
            keys = []
            next_frontier = []
            for parent, y in frontier:
                e = ctx.tau_arrow(parent.vertex, (y,))
                key = (level, tuple(s.digits[:level] for s in y))
                node = TreeNode(level, y, key, e.to_v, parent, e)
                parent.children.append(key)
                self.nodes[key] = node
                keys.append(key)
                self.vertex_to_node[node.vertex.key] = key
                if level < n:
                    for y2 in ctx.class_refinements(y, level):
                        next_frontier.append((node, y2))
            self.levels.append(keys)
            frontier = next_frontier

    def node(self, key):
        return self.nodes[key]

    def arrows_away(self):
        """All tree arrows oriented away from the origin, by node key."""
        return [(k, self.nodes[k].arrow) for level in self.levels[1:] for k in level]

    def classify_type1(self, node):
        """Split A_{v,1} at a special vertex into inbound (target stays in
        BT(level)) and outbound (target at distance level+1) arrows."""
        ctx = self.ctx
        v0 = ctx.origin
        inbound, outbound = [], []
        for e in ctx.arrows_from(node.vertex, 1):
            if ctx.distance(v0, e.to_v) <= node.level:
                inbound.append(e)
            else:
                outbound.append(e)
        return inbound, outbound
