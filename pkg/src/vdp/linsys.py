"""Integer linear systems for cochain conditions, and exact kernel tools.

Variables are the arrows of a ball in a fixed orientation (smaller vertex key
first); alternation is built into the encoding.  Systems: triangle-boundary
sums, type-1 star sums, domination sums, optional zero rows outside an inner
ball, and the tree flow system.  Ranks are taken mod a prime with vectorized
elimination; full rank mod p certifies full rank over the rationals.  Exact
rational ranks use sympy; integer kernel bases come from a Hermite normal
form with transform, so they are saturated.
"""

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


def arrow_variables(ball):
    """One variable per undirected edge, keyed by the oriented arrow with the
    smaller origin key."""
    return sorted(k for k in ball.arrows if k[0] < k[1])


def _add_var(row, index, key, coeff):
    a, b = key
    if a < b:
        row[index[(a, b)]] += coeff
    else:
        row[index[(b, a)]] -= coeff


def harmonic_system(ctx, ball):
    """Rows of the condition system on a ball: triangle sums, type-1 star
    sums and domination sums at interior vertices.  Returns (rows, variables).
    """
    variables = arrow_variables(ball)
    index = {k: i for i, k in enumerate(variables)}
    nvars = len(variables)
    rows = []
    for (a, b, c) in ball.triangles():
        row = [0] * nvars
        _add_var(row, index, (a, b), 1)
        _add_var(row, index, (b, c), 1)
        _add_var(row, index, (c, a), 1)
        rows.append(row)
    interior = ball.interior_keys()
    for k in interior:
        v = ball.vertices[k]
        row = [0] * nvars
        for e in ctx.arrows_from(v, 1):
            _add_var(row, index, e.key, 1)
        rows.append(row)
    for k in interior:
        v = ball.vertices[k]
        ones = ctx.arrows_from(v, 1)
        for t in range(2, ctx.r):
            for e in ctx.arrows_from(v, t):
                row = [0] * nvars
                _add_var(row, index, e.key, 1)
                for e1 in ones:
                    if ctx.dominates(e, e1):
                        _add_var(row, index, e1.key, -1)
                rows.append(row)
    return rows, variables


def support_rows(ball, variables, inner_n):
    """Unit rows forcing every variable with an endpoint outside the inner
    ball to zero."""
    rows = []
    for i, (a, b) in enumerate(variables):
        if ball.dist[a] > inner_n or ball.dist[b] > inner_n:
            row = [0] * len(variables)
            row[i] = 1
            rows.append(row)
    return rows


def flow_system(ctx, tree):
    """Flow condition rows on the tree arrows away from the origin.
    Returns (rows, variables = node keys)."""
    variables = [k for level in tree.levels[1:] for k in level]
    index = {k: i for i, k in enumerate(variables)}
    nvars = len(variables)
    rows = []
    if tree.root.children:
        row = [0] * nvars
        for c in tree.root.children:
            row[index[c]] = 1
        rows.append(row)
    for level in tree.levels[1:-1]:
        for key in level:
            node = tree.nodes[key]
            row = [0] * nvars
            row[index[key]] = -1
            for c in node.children:
                row[index[c]] = 1
            rows.append(row)
    return rows, variables


def rank_mod(rows, nvars, p):
    """Rank of the system over the prime field F_p."""
    if not rows:
        return 0
    mat = np.array(rows, dtype=np.int64) % p
    rank = 0
    for col in range(nvars):
        piv = None
        for i in range(rank, mat.shape[0]):
            if mat[i, col] % p:
                piv = i
                break
        if piv is None:
            continue
        mat[[rank, piv]] = mat[[piv, rank]]
        inv = pow(int(mat[rank, col]), p - 2, p)
        mat[rank] = (mat[rank] * inv) % p
        coeffs = mat[:, col].copy()
        coeffs[rank] = 0
        mat = (mat - np.outer(coeffs, mat[rank])) % p
        rank += 1
        if rank == mat.shape[0]:
            break
    return rank


def rank_exact(rows, nvars):
    """Rank over the rationals."""
    if not rows:
        return 0
    dm = DomainMatrix.from_list([[QQ(x) for x in row] for row in rows], QQ)
    _, pivots = dm.rref()
    return len(pivots)


def kernel_dimension_exact(rows, nvars):
    return nvars - rank_exact(rows, nvars)


def has_trivial_kernel(rows, nvars):
    """True iff the only rational (hence integer) solution is zero.  Full
    rank mod a prime is already an exact certificate; the rational rank is
    only computed when every tried prime is deficient."""
    for p in (2, 3, 5):
        if rank_mod(rows, nvars, p) == nvars:
            return True
    return rank_exact(rows, nvars) == nvars


def hnf_with_transform(A):
    """Row Hermite normal form H = U.A with U unimodular.
    Returns (H, U, rank)."""
    m = len(A)
    n = len(A[0]) if A else 0
    H = [list(row) for row in A]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def combine(i, j, f):
        # row_i -= f * row_j
        H[i] = [a - f * b for a, b in zip(H[i], H[j])]
        U[i] = [a - f * b for a, b in zip(U[i], U[j])]

    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if len(nz) <= 1:
                break
            i0 = min(nz, key=lambda i: abs(H[i][c]))
            for i in nz:
                if i != i0:
                    combine(i, i0, H[i][c] // H[i0][c])
        nz = [i for i in range(r, m) if H[i][c] != 0]
        if not nz:
            continue
        piv = nz[0]
        H[r], H[piv] = H[piv], H[r]
        U[r], U[piv] = U[piv], U[r]
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            f = H[i][c] // H[r][c]
            if f:
                combine(i, r, f)
        r += 1
        if r == m:
            break
    return H, U, r


def integer_kernel_basis(rows, nvars):
    """Basis of the saturated integer solution lattice {x : rows . x = 0}."""
    if not rows:
        return [[1 if i == j else 0 for j in range(nvars)] for i in range(nvars)]
    transposed = [[rows[i][j] for i in range(len(rows))] for j in range(nvars)]
    _, U, r = hnf_with_transform(transposed)
    return U[r:]


def functoriality_mod_p(rows, nvars, p):
    """Compare the integer kernel basis reduced mod p with the F_p kernel.

    Returns a report dict; ``matches`` is True iff the reduced basis lies in
    the mod-p kernel and spans it.
    """
    basis = integer_kernel_basis(rows, nvars)
    z_dim = len(basis)
    p_dim = nvars - rank_mod(rows, nvars, p)
    contained = all(
        all(sum(row[j] * x[j] for j in range(nvars)) % p == 0 for row in rows)
        for x in basis)
    reduced_rank = rank_mod(basis, nvars, p) if basis else 0
    return {
        "p": p,
        "z_kernel_dim": z_dim,
        "p_kernel_dim": p_dim,
        "reduced_basis_rank": reduced_rank,
        "matches": contained and reduced_rank == p_dim,
    }
