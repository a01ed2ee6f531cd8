"""Small finite fields F_q (q = p^k <= 16) and exact linear algebra over them.

Elements are encoded as integers in [0, q): the base-p digits of the code,
lowest degree first, are the coefficients of the polynomial representative.
For prime q this is the usual Z/p encoding.
"""

from functools import lru_cache
from itertools import combinations, product

# Fixed irreducible polynomials for the non-prime q we support, so that
# serialized data is identical across runs and machines.  Coefficients are
# listed lowest degree first and include the leading 1.
IRREDUCIBLE = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    16: (1, 1, 0, 0, 1),
}


def _factor_prime_power(q):
    for p in (2, 3, 5, 7, 11, 13):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m == 1:
                return p, k
            return None
    return None


def is_prime_power(q):
    return q >= 2 and _factor_prime_power(q) is not None


class GF:
    """Arithmetic tables for F_q, q <= 16."""

    def __init__(self, q):
        fac = _factor_prime_power(q)
        if fac is None or q > 16:
            raise ValueError("q must be a prime power <= 16, got %r" % (q,))
        self.q = q
        self.p, self.k = fac
        if self.k > 1 and q not in IRREDUCIBLE:
            raise ValueError("no irreducible polynomial on file for q=%d" % q)
        self._build_tables()

    def _coeffs(self, a):
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(a % p)
            a //= p
        return out

    def _encode(self, coeffs):
        a = 0
        for c in reversed(coeffs):
            a = a * self.p + (c % self.p)
        return a

    def _build_tables(self):
        q, p, k = self.q, self.p, self.k
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            ca = self._coeffs(a)
            for b in range(q):
                cb = self._coeffs(b)
                add[a][b] = self._encode([(x + y) % p for x, y in zip(ca, cb)])
                # polynomial product reduced mod the fixed irreducible
                prod_c = [0] * (2 * k - 1)
                for i, x in enumerate(ca):
                    if x:
                        for j, y in enumerate(cb):
                            prod_c[i + j] = (prod_c[i + j] + x * y) % p
                if k > 1:
                    irr = IRREDUCIBLE[q]
                    for d in range(2 * k - 2, k - 1, -1):
                        c = prod_c[d]
                        if c:
                            prod_c[d] = 0
                            for j in range(k):
                                prod_c[d - k + j] = (prod_c[d - k + j] - c * irr[j]) % p
                mul[a][b] = self._encode(prod_c[:k])
        self.add_t = add
        self.mul_t = mul
        neg = [0] * q
        for a in range(q):
            neg[a] = self._encode([(-x) % p for x in self._coeffs(a)])
        self.neg_t = neg
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        self.inv_t = inv

    def add(self, a, b):
        return self.add_t[a][b]

    def sub(self, a, b):
        return self.add_t[a][self.neg_t[b]]

    def mul(self, a, b):
        return self.mul_t[a][b]

    def neg(self, a):
        return self.neg_t[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.q)
        return self.inv_t[a]

    def to_coeffs(self, a):
        return tuple(self._coeffs(a))

    def from_coeffs(self, coeffs):
        if len(coeffs) != self.k:
            raise ValueError("expected %d coefficients" % self.k)
        return self._encode(list(coeffs))


@lru_cache(maxsize=None)
def gf(q):
    return GF(q)


# ---------------------------------------------------------------------------
# Linear algebra over F_q.  Vectors/matrices are tuples of element codes.


def rref(rows, field):
    """Reduced row echelon form. Returns (rows_tuple, pivot_columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return (), ()
    ncols = len(rows[0])
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        s = field.inv(rows[rank][col])
        rows[rank] = [field.mul(s, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    kept = [tuple(r) for r in rows[:rank]]
    return tuple(kept), tuple(pivots)


def in_rowspan(rref_rows, pivots, vec, field):
    v = list(vec)
    for row, col in zip(rref_rows, pivots):
        if v[col] != 0:
            c = v[col]
            v = [field.sub(x, field.mul(c, y)) for x, y in zip(v, row)]
    return all(x == 0 for x in v)


def span_contained(a_rows, b_rows, field):
    """rowspan(a) subseteq rowspan(b), both given as arbitrary generator rows."""
    br, bp = rref(b_rows, field)
    return all(in_rowspan(br, bp, r, field) for r in a_rows)


def right_nullspace(rows, ncols, field):
    """Basis (tuple of row vectors x) of {x : rows . x^T = 0}."""
    rr, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, col in zip(rr, pivots):
            x[col] = field.neg(row[f])
        basis.append(tuple(x))
    return basis


def dot(u, v, field):
    acc = 0
    for x, y in zip(u, v):
        acc = field.add(acc, field.mul(x, y))
    return acc


def enumerate_subspaces(r, dim, field):
    """All dim-dimensional subspaces of F_q^r as rref matrices, in a fixed
    deterministic order (lexicographic on pivot columns, then on free entries)."""
    q = field.q
    out = []
    for pivots in combinations(range(r), dim):
        # free positions: (row i, col j) with j > pivots[i], j not a later pivot
        free_pos = []
        for i in range(dim):
            for j in range(pivots[i] + 1, r):
                if j not in pivots:
                    free_pos.append((i, j))
        for vals in product(range(q), repeat=len(free_pos)):
            rows = [[0] * r for _ in range(dim)]
            for i in range(dim):
                rows[i][pivots[i]] = 1
            for (i, j), v in zip(free_pos, vals):
                rows[i][j] = v
            out.append(tuple(tuple(row) for row in rows))
    return out


def gaussian_binomial(r, d, q):
    """Number of d-dimensional subspaces of F_q^r."""
    num = 1
    den = 1
    for i in range(d):
        num *= q ** (r - i) - 1
        den *= q ** (d - i) - 1
    assert num % den == 0
    return num // den
