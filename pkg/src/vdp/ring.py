"""Exact arithmetic in a truncated model of a valuation ring O.

A scalar is a vector of N residue-field digits in base pi.  Two digit models
are supported:

* ``eqchar`` (default): digits live in F_q and there are no carries; a scalar
  is a truncated polynomial in pi over F_q.  q may be any prime power <= 16.
* ``mixed``: q must be prime; a scalar is an integer mod q^N with pi = q, so
  digit arithmetic carries.

Every operation is exact in the quotient ring O/pi^N; nothing rounds.
"""

from .errors import PrecisionExhausted, ZeroVector
from .ffield import gf, is_prime_power


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class RingSpec:
    """The ring O/pi^N with residue field F_q."""

    def __init__(self, q, N, mode="eqchar"):
        if not is_prime_power(q):
            raise ValueError("q must be a prime power, got %r" % (q,))
        if N < 1:
            raise ValueError("precision N must be >= 1")
        if mode not in ("eqchar", "mixed"):
            raise ValueError("mode must be 'eqchar' or 'mixed'")
        if mode == "mixed" and not _is_prime(q):
            raise ValueError("mixed mode requires prime q")
        self.q = q
        self.N = N
        self.mode = mode
        self.field = gf(q)

    def __eq__(self, other):
        return (isinstance(other, RingSpec)
                and (self.q, self.N, self.mode) == (other.q, other.N, other.mode))

    def __hash__(self):
        return hash((self.q, self.N, self.mode))

    def __repr__(self):
        return "RingSpec(q=%d, N=%d, mode=%s)" % (self.q, self.N, self.mode)

    # -- constructors -------------------------------------------------------

    def zero(self):
        return Scalar(self, (0,) * self.N)

    def one(self):
        return self.from_int(1)

    def pi(self, power=1):
        if power >= self.N:
            return self.zero()
        digits = [0] * self.N
        digits[power] = 1
        return Scalar(self, tuple(digits))

    def from_int(self, n):
        if self.mode == "mixed":
            return self._from_value(n % self.q ** self.N)
        c = n % self.field.p
        digits = [0] * self.N
        digits[0] = self.field.from_coeffs((c,) + (0,) * (self.field.k - 1))
        return Scalar(self, tuple(digits))

    def from_digits(self, digits):
        ds = list(digits)
        if len(ds) > self.N:
            raise ValueError("too many digits")
        ds += [0] * (self.N - len(ds))
        if any(not (0 <= d < self.q) for d in ds):
            raise ValueError("digit out of range [0, q)")
        return Scalar(self, tuple(ds))

    def _from_value(self, n):
        # mixed mode: integer mod q^N to base-q digits
        digits = []
        for _ in range(self.N):
            digits.append(n % self.q)
            n //= self.q
        return Scalar(self, tuple(digits))

    # -- serialization ------------------------------------------------------

    def serialize_digit(self, d):
        if self.field.k == 1:
            return str(d)
        return ":".join(str(c) for c in self.field.to_coeffs(d))

    def parse_digit(self, s):
        if self.field.k == 1:
            d = int(s)
        else:
            d = self.field.from_coeffs(tuple(int(c) for c in s.split(":")))
        if not (0 <= d < self.q):
            raise ValueError("digit out of range")
        return d

    def parse_scalar(self, s):
        return self.from_digits([self.parse_digit(t) for t in s.split(",")])


class Scalar:
    """An element of O/pi^N.  Immutable; equality is digit-wise."""

    __slots__ = ("spec", "digits", "_val")

    def __init__(self, spec, digits):
        self.spec = spec
        self.digits = digits
        self._val = None

    def __eq__(self, other):
        return isinstance(other, Scalar) and self.digits == other.digits and self.spec == other.spec

    def __hash__(self):
        return hash(self.digits)

    def __repr__(self):
        return "Scalar(%s)" % (self.serialize(),)

    def serialize(self):
        return ",".join(self.spec.serialize_digit(d) for d in self.digits)

    def val(self):
        if self._val is None:
            v = self.spec.N
            for i, d in enumerate(self.digits):
                if d != 0:
                    v = i
                    break
            self._val = v
        return self._val

    def is_zero(self):
        return self.val() == self.spec.N

    def _int_value(self):
        n = 0
        for d in reversed(self.digits):
            n = n * self.spec.q + d
        return n

    def add(self, other):
        spec = self.spec
        if spec.mode == "mixed":
            return spec._from_value(self._int_value() + other._int_value())
        add_t = spec.field.add_t
        return Scalar(spec, tuple(add_t[a][b] for a, b in zip(self.digits, other.digits)))

    def neg(self):
        spec = self.spec
        if spec.mode == "mixed":
            return spec._from_value(-self._int_value())
        neg_t = spec.field.neg_t
        return Scalar(spec, tuple(neg_t[a] for a in self.digits))

    def sub(self, other):
        return self.add(other.neg())

    def mul(self, other):
        spec = self.spec
        if spec.mode == "mixed":
            return spec._from_value(self._int_value() * other._int_value())
        N = spec.N
        a, b = self.digits, other.digits
        add_t, mul_t = spec.field.add_t, spec.field.mul_t
        out = [0] * N
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            row = mul_t[ai]
            for j in range(N - i):
                bj = b[j]
                if bj != 0:
                    out[i + j] = add_t[out[i + j]][row[bj]]
        return Scalar(spec, tuple(out))

    __add__ = add
    __mul__ = mul
    __sub__ = sub
    __neg__ = neg

    def inverse(self):
        """Inverse of a unit (val 0)."""
        spec = self.spec
        if self.val() != 0:
            raise ZeroDivisionError("not a unit at working precision")
        if spec.mode == "mixed":
            return spec._from_value(pow(self._int_value(), -1, spec.q ** spec.N))
        field = spec.field
        a = self.digits
        b = [0] * spec.N
        b[0] = field.inv(a[0])
        for k in range(1, spec.N):
            acc = 0
            for i in range(1, k + 1):
                acc = field.add(acc, field.mul(a[i], b[k - i]))
            b[k] = field.neg(field.mul(field.inv(a[0]), acc))
        return Scalar(spec, tuple(b))

    def shift_up(self, k):
        """Multiply by pi^k (exact in O/pi^N)."""
        if k == 0:
            return self
        spec = self.spec
        return Scalar(spec, (0,) * k + self.digits[: spec.N - k])

    def shift_down(self, k):
        """Divide by pi^k.  Requires val >= k; the top k digits of the result
        are unknown and set to zero (harmless: multiplying back by pi^k is
        exact in O/pi^N)."""
        if k == 0:
            return self
        if self.val() < k:
            raise PrecisionExhausted("shift_down below valuation")
        return Scalar(self.spec, self.digits[k:] + (0,) * k)

    def reduce_mod(self, a):
        """Canonical residue mod pi^a (digits >= a zeroed)."""
        spec = self.spec
        a = min(a, spec.N)
        return Scalar(spec, self.digits[:a] + (0,) * (spec.N - a))


def scalar_val(s):
    """Valuation in [0, N]; N encodes zero-at-this-precision."""
    return s.val()


class OMatrix:
    """Matrix over O/pi^N.  rows is a tuple of tuples of Scalar."""

    __slots__ = ("spec", "rows", "nrows", "ncols")

    def __init__(self, spec, rows):
        self.spec = spec
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, spec, r):
        one, zero = spec.one(), spec.zero()
        return cls(spec, [[one if i == j else zero for j in range(r)] for i in range(r)])

    @classmethod
    def from_ints(cls, spec, int_rows):
        return cls(spec, [[spec.from_int(x) for x in row] for row in int_rows])

    def entry(self, i, j):
        return self.rows[i][j]

    def mul(self, other):
        assert self.ncols == other.nrows
        cols = [tuple(other.rows[k][j] for k in range(other.nrows)) for j in range(other.ncols)]
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = self.spec.zero()
                for a, b in zip(row, col):
                    if not (a.is_zero() or b.is_zero()):
                        acc = acc.add(a.mul(b))
                out_row.append(acc)
            out.append(out_row)
        return OMatrix(self.spec, out)

    def transpose(self):
        return OMatrix(self.spec, list(zip(*self.rows)))

    def row_vec(self, i):
        return self.rows[i]

    def __eq__(self, other):
        return isinstance(other, OMatrix) and self.spec == other.spec and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def serialize(self):
        return [[s.serialize() for s in row] for row in self.rows]

    def key(self):
        return tuple(tuple(s.digits for s in row) for row in self.rows)


def _mulvec_mat(vec, M):
    """Row vector times matrix."""
    spec = M.spec
    out = []
    for j in range(M.ncols):
        acc = spec.zero()
        for i, a in enumerate(vec):
            b = M.rows[i][j]
            if not (a.is_zero() or b.is_zero()):
                acc = acc.add(a.mul(b))
        out.append(acc)
    return tuple(out)


def smith_form(M):
    """Diagonalization U.M.W = diag(pi^a1, ..., pi^am), a1 >= ... >= am,
    with U, W invertible over the truncated ring.

    Returns (U, divisors, W) with divisors descending.  Works for rectangular
    M too (m = min(nrows, ncols)).  Raises PrecisionExhausted when a pivot
    valuation cannot be certified: either no entry of the working block is
    nonzero mod pi^N, or the precision watermark (N minus the valuations spent
    on earlier pivots) no longer covers the pivot.
    """
    spec = M.spec
    r, c = M.nrows, M.ncols
    A = [list(row) for row in M.rows]
    U = [list(row) for row in OMatrix.identity(spec, r).rows]
    W = [list(row) for row in OMatrix.identity(spec, c).rows]
    m = min(r, c)
    watermark = spec.N
    divisors = []
    for s in range(m):
        # pick the minimum-valuation entry of the remaining block as pivot
        best = None
        best_val = spec.N
        for i in range(s, r):
            for j in range(s, c):
                v = A[i][j].val()
                if v < best_val:
                    best_val = v
                    best = (i, j)
        if best is None or best_val >= watermark:
            raise PrecisionExhausted("pivot valuation not certifiable at stage %d" % s)
        bi, bj = best
        if bi != s:
            A[s], A[bi] = A[bi], A[s]
            U[s], U[bi] = U[bi], U[s]
        if bj != s:
            for row in A:
                row[s], row[bj] = row[bj], row[s]
            for row in W:
                row[s], row[bj] = row[bj], row[s]
        a = best_val
        unit = A[s][s].shift_down(a)
        uinv = unit.inverse()
        A[s] = [x.mul(uinv) for x in A[s]]
        U[s] = [x.mul(uinv) for x in U[s]]
        # clear the pivot column with row ops, then the pivot row with col ops
        for i in range(r):
            if i != s and not A[i][s].is_zero():
                f = A[i][s].shift_down(a)
                A[i] = [x.sub(f.mul(y)) for x, y in zip(A[i], A[s])]
                U[i] = [x.sub(f.mul(y)) for x, y in zip(U[i], U[s])]
        for j in range(c):
            if j != s and not A[s][j].is_zero():
                f = A[s][j].shift_down(a)
                for row in W:
                    row[j] = row[j].sub(f.mul(row[s]))
                A[s][j] = spec.zero()
        divisors.append(a)
        watermark -= a
    # reorder stages so divisors come out descending
    order = sorted(range(m), key=lambda i: (-divisors[i], i))
    U2 = [U[order[i]] if i < m else U[i] for i in range(r)]
    W_cols = list(zip(*W))
    W2_cols = [W_cols[order[j]] if j < m else W_cols[j] for j in range(c)]
    return (OMatrix(spec, U2),
            [divisors[i] for i in order],
            OMatrix(spec, list(zip(*W2_cols))))


def solve_membership(y, M):
    """Largest k with y in pi^k . rowspan(M), k possibly negative.

    y is a tuple of Scalars; M must be square and invertible over the fraction
    field at working precision.
    """
    spec = M.spec
    if all(s.is_zero() for s in y):
        raise ZeroVector("membership of the zero vector is unbounded")
    U, divisors, W = smith_form(M)
    z = _mulvec_mat(y, W)
    best = None
    ambiguous_floor = None
    for zi, di in zip(z, divisors):
        v = zi.val()
        if v >= spec.N:
            # true valuation is only known to be >= N
            floor = spec.N - di
            if ambiguous_floor is None or floor < ambiguous_floor:
                ambiguous_floor = floor
            continue
        k = v - di
        if best is None or k < best:
            best = k
    if best is None:
        raise PrecisionExhausted("all coordinates vanish at working precision")
    if ambiguous_floor is not None and ambiguous_floor <= best:
        raise PrecisionExhausted("membership exponent not certifiable")
    return best
