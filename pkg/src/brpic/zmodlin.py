"""Linear algebra over Z/m (m composite allowed) and over Z.

This is the engine behind the cohomology module: solving cocycle identities,
membership in coboundary spans, and quotient-group structure all reduce to
the primitives here.

* ``echelon_rows_mod`` streams a large equation system into a compact
  row-echelon set spanning the same row module (gcd-combination steps keep
  everything exact for composite m).
* ``diagonalize_mod`` produces U A V = D with U, V invertible mod m (their
  inverses are tracked op-by-op), which is enough to solve linear systems
  and to read off quotient structure mod m.  Entries never leave [0, m), so
  there is no coefficient blowup.
* ``smith_normal_form`` is a literal integer Smith normal form with
  unimodular transforms, used as an independent oracle for the mod-m route
  on small instances.

All pivoting is deterministic (smallest gcd with m, then smallest index), so
outputs are byte-stable.
"""

from __future__ import annotations

from math import gcd

import numpy as np

__all__ = [
    "xgcd",
    "echelon_rows_mod",
    "diagonalize_mod",
    "solve_mod",
    "nullspace_mod",
    "DiagonalizedSystem",
    "smith_normal_form",
    "elementary_divisor_chain",
]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# streaming echelon over Z/m
# ---------------------------------------------------------------------------

def echelon_rows_mod(equations, ncols: int, m: int) -> np.ndarray:
    """Reduce an iterable of integer rows to echelon form over Z/m.

    Returns a matrix whose rows have strictly increasing leading columns and
    span the same Z/m-row module as the input.  Every update is by a
    determinant-one combination, so no solutions are gained or lost.
    """
    rows: dict[int, np.ndarray] = {}
    for eq in equations:
        v = np.asarray(eq, dtype=np.int64) % m
        while True:
            nz = np.nonzero(v)[0]
            if nz.size == 0:
                break
            lead = int(nz[0])
            if lead not in rows:
                rows[lead] = v
                break
            r = rows[lead]
            a, b = int(r[lead]), int(v[lead])
            if b % a == 0:
                v = (v - (b // a) * r) % m
            else:
                g, s, t = xgcd(a, b)
                rows[lead] = (s * r + t * v) % m
                v = ((a // g) * v - (b // g) * r) % m
    if not rows:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.vstack([rows[k] for k in sorted(rows)])


# ---------------------------------------------------------------------------
# two-sided diagonalization over Z/m with invertible transforms
# ---------------------------------------------------------------------------

class _Transforms:
    """Accumulates U (rows) / V (cols) and their inverses under elementary ops."""

    def __init__(self, r: int, c: int, m: int):
        self.m = m
        self.U = np.eye(r, dtype=np.int64)
        self.Uinv = np.eye(r, dtype=np.int64)
        self.V = np.eye(c, dtype=np.int64)
        self.Vinv = np.eye(c, dtype=np.int64)

    # row ops: A <- E A, U <- E U, Uinv <- Uinv E^-1 (columns)
    def row_swap(self, A, i, j):
        A[[i, j]] = A[[j, i]]
        self.U[[i, j]] = self.U[[j, i]]
        self.Uinv[:, [i, j]] = self.Uinv[:, [j, i]]

    def row_add(self, A, i, j, q):
        """row_i += q * row_j."""
        m = self.m
        A[i] = (A[i] + q * A[j]) % m
        self.U[i] = (self.U[i] + q * self.U[j]) % m
        self.Uinv[:, j] = (self.Uinv[:, j] - q * self.Uinv[:, i]) % m

    def row_combine(self, A, i, j, s, t, ag, bg):
        """(row_i, row_j) <- (s*ri + t*rj, -bg*ri + ag*rj), det = 1."""
        m = self.m
        for M in (A, self.U):
            ri, rj = M[i].copy(), M[j].copy()
            M[i] = (s * ri + t * rj) % m
            M[j] = (-bg * ri + ag * rj) % m
        ci, cj = self.Uinv[:, i].copy(), self.Uinv[:, j].copy()
        self.Uinv[:, i] = (ag * ci + bg * cj) % m
        self.Uinv[:, j] = (-t * ci + s * cj) % m

    # column ops: A <- A E, V <- V E, Vinv <- E^-1 Vinv (rows)
    def col_swap(self, A, i, j):
        A[:, [i, j]] = A[:, [j, i]]
        self.V[:, [i, j]] = self.V[:, [j, i]]
        self.Vinv[[i, j]] = self.Vinv[[j, i]]

    def col_add(self, A, i, j, q):
        """col_i += q * col_j."""
        m = self.m
        A[:, i] = (A[:, i] + q * A[:, j]) % m
        self.V[:, i] = (self.V[:, i] + q * self.V[:, j]) % m
        self.Vinv[j] = (self.Vinv[j] - q * self.Vinv[i]) % m

    def col_combine(self, A, i, j, s, t, ag, bg):
        """(col_i, col_j) <- (s*ci + t*cj, -bg*ci + ag*cj), det = 1."""
        m = self.m
        for M in (A, self.V):
            ci, cj = M[:, i].copy(), M[:, j].copy()
            M[:, i] = (s * ci + t * cj) % m
            M[:, j] = (-bg * ci + ag * cj) % m
        ri, rj = self.Vinv[i].copy(), self.Vinv[j].copy()
        self.Vinv[i] = (ag * ri + bg * rj) % m
        self.Vinv[j] = (-t * ri + s * rj) % m


def diagonalize_mod(A, m: int):
    """(D, T) with T.U @ A @ T.V == D mod m, U and V invertible mod m.

    D is diagonal (no divisor chain enforced).  Deterministic pivoting:
    the entry minimizing (gcd(entry, m), row, col) in the remaining block.
    """
    D = np.asarray(A, dtype=np.int64).copy() % m
    r, c = D.shape
    T = _Transforms(r, c, m)
    for k in range(min(r, c)):
        while True:
            block = D[k:, k:]
            nz = np.nonzero(block)
            if nz[0].size == 0:
                break
            vals = block[nz]
            gs = np.gcd(vals, m)
            # deterministic: min gcd, then min row, then min col
            order = np.lexsort((nz[1], nz[0], gs))
            bi, bj = int(nz[0][order[0]]) + k, int(nz[1][order[0]]) + k
            if bi != k:
                T.row_swap(D, k, bi)
            if bj != k:
                T.col_swap(D, k, bj)
            # clear column k
            dirty = False
            a = int(D[k, k])
            for i in range(r):
                if i == k or D[i, k] == 0:
                    continue
                b = int(D[i, k])
                if b % a == 0:
                    T.row_add(D, i, k, -(b // a))
                else:
                    g, s, t = xgcd(a, b)
                    T.row_combine(D, k, i, s, t, a // g, b // g)
                    a = int(D[k, k])
                    dirty = True
            # clear row k
            for j in range(c):
                if j == k or D[k, j] == 0:
                    continue
                b = int(D[k, j])
                if b % a == 0:
                    T.col_add(D, j, k, -(b // a))
                else:
                    g, s, t = xgcd(a, b)
                    T.col_combine(D, k, j, s, t, a // g, b // g)
                    a = int(D[k, k])
                    dirty = True
            if not dirty and not D[k, k + 1:].any() and not D[k + 1:, k].any():
                break
    return D, T


class DiagonalizedSystem:
    """A diagonalization of one matrix mod m, reusable for many solves.

    Useful when a single coefficient matrix (for example a basis of a
    solution module) is queried with many right-hand sides.
    """

    def __init__(self, A, m: int):
        A = np.asarray(A, dtype=np.int64)
        self.m = m
        self.rows, self.cols = A.shape
        self.D, self.T = diagonalize_mod(A, m)

    def solve(self, b):
        """One solution x of A x = b over Z/m, or None."""
        m = self.m
        rhs = (self.T.U @ (np.asarray(b, dtype=np.int64) % m)) % m
        z = np.zeros(self.cols, dtype=np.int64)
        for i in range(self.rows):
            d = int(self.D[i, i]) if i < self.cols else 0
            val = int(rhs[i]) % m
            g = gcd(d, m)        # m when d = 0
            if val % g:
                return None
            if g == m:
                continue         # z_i unconstrained; take 0
            mg = m // g
            inv = pow((d // g) % mg, -1, mg)
            z[i] = (val // g) * inv % mg
        return (self.T.V @ z) % m

    def nullspace(self) -> np.ndarray:
        """Columns generating {x : A x = 0 mod m} as a Z/m-module."""
        m = self.m
        cols = []
        for i in range(self.cols):
            d = int(self.D[i, i]) if i < min(self.rows, self.cols) else 0
            g = gcd(d, m)        # m when d = 0 (free coordinate)
            mult = m // g
            if mult == m:
                continue         # pivot is a unit: only the zero solution here
            cols.append((mult * self.T.V[:, i]) % m)
        if not cols:
            return np.zeros((self.cols, 0), dtype=np.int64)
        return np.stack(cols, axis=1)


def solve_mod(A, b, m: int):
    """One solution x of A x = b over Z/m, or None."""
    return DiagonalizedSystem(A, m).solve(b)


def nullspace_mod(A, m: int) -> np.ndarray:
    """Columns generating {x : A x = 0 mod m} as a Z/m-module."""
    A = np.asarray(A, dtype=np.int64)
    r, c = A.shape
    if r > c:
        A = echelon_rows_mod(A, c, m)
        if A.shape[0] == 0:
            return np.eye(c, dtype=np.int64)
    return DiagonalizedSystem(A, m).nullspace()


# ---------------------------------------------------------------------------
# integer Smith normal form (oracle route)
# ---------------------------------------------------------------------------

def smith_normal_form(A):
    """(D, U, V) with U A V = D over Z, U, V unimodular, divisor chain held.

    Pure-Python exact arithmetic; intended for small matrices (tests and
    quotient-structure oracles), not the streaming cocycle systems.
    """
    A = [[int(x) for x in row] for row in np.asarray(A)]
    r = len(A)
    c = len(A[0]) if r else 0
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]

    def row_op(i, j, s, t, ag, bg):
        for M in (A, U):
            ri = M[i][:]
            rj = M[j][:]
            M[i] = [s * x + t * y for x, y in zip(ri, rj)]
            M[j] = [-bg * x + ag * y for x, y in zip(ri, rj)]

    def col_op(i, j, s, t, ag, bg):
        for M in (A, V):
            for row in M:
                x, y = row[i], row[j]
                row[i] = s * x + t * y
                row[j] = -bg * x + ag * y

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    k = 0
    while k < min(r, c):
        # find smallest nonzero |entry| in the remaining block
        best = None
        for i in range(k, r):
            for j in range(k, c):
                v = abs(A[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != k:
            row_swap(k, bi)
        if bj != k:
            col_swap(k, bj)
        changed = True
        while changed:
            changed = False
            a = A[k][k]
            for i in range(r):
                if i != k and A[i][k]:
                    b = A[i][k]
                    if b % a == 0:
                        q = b // a
                        row_op(k, i, 1, 0, 1, q)  # r_i <- r_i - q r_k
                        # row_op with (s,t,ag,bg) = (1,0,1,q): r_k stays,
                        # r_j <- -q r_k + r_j
                    else:
                        g, s, t = xgcd(a, b)
                        row_op(k, i, s, t, a // g, b // g)
                        a = A[k][k]
                    changed = True
            a = A[k][k]
            for j in range(c):
                if j != k and A[k][j]:
                    b = A[k][j]
                    if b % a == 0:
                        q = b // a
                        col_op(k, j, 1, 0, 1, q)
                    else:
                        g, s, t = xgcd(a, b)
                        col_op(k, j, s, t, a // g, b // g)
                        a = A[k][k]
                    changed = True
        # divisor chain: if A[k][k] does not divide some later entry, fold
        # that row in and redo this pivot
        d = A[k][k]
        bad = None
        for i in range(k + 1, r):
            for j in range(k + 1, c):
                if A[i][j] % d:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            # fold the offending row into row k and redo this pivot
            row_op(k, bad, 1, 1, 1, 0)   # r_k <- r_k + r_bad, r_bad unchanged
            continue
        if d < 0:
            for M in (A, U):
                M[k] = [-x for x in M[k]]
        k += 1
    return (
        np.array(A, dtype=object),
        np.array(U, dtype=object),
        np.array(V, dtype=object),
    )


def elementary_divisor_chain(divs) -> tuple[int, ...]:
    """Normalize a multiset of cyclic orders to the divisor-chain form.

    The group ⊕ Z/d_i is isomorphic to ⊕ Z/e_i with e_1 | e_2 | ...; the
    e_i are produced by repeated (gcd, lcm) exchanges.  Trivial factors are
    dropped; result sorted ascending.
    """
    ds = [int(d) for d in divs if int(d) != 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds[i], ds[j]
                if b % a:
                    g = gcd(a, b)
                    ds[i], ds[j] = g, a * b // g
                    changed = True
    ds = [d for d in ds if d != 1]
    ds.sort()
    return tuple(ds)
