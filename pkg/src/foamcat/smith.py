"""Smith normal form and integral linear algebra over Z[i].

Matrices are lists of lists of GaussianInteger.  The decomposition U*A*V = D
keeps U, V invertible over Z[i] (their determinants are units), D diagonal
with a divisibility chain d1 | d2 | ..., every diagonal entry normalized to
its canonical associate.  Pivoting is norm-minimal with index tie-breaks, so
the output is reproducible.
"""

from __future__ import annotations

from .gaussian import GaussianInteger, gaussian_divmod

Matrix = list  # list[list[GaussianInteger]]


def zeros(m: int, n: int) -> Matrix:
    return [[GaussianInteger.zero() for _ in range(n)] for _ in range(m)]


def identity(n: int) -> Matrix:
    M = zeros(n, n)
    for i in range(n):
        M[i][i] = GaussianInteger.one()
    return M


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    m, n = len(A), len(B[0]) if B else 0
    inner = len(B)
    C = zeros(m, n)
    for i in range(m):
        Ai = A[i]
        Ci = C[i]
        for k in range(inner):
            a = Ai[k]
            if a.is_zero():
                continue
            Bk = B[k]
            for j in range(n):
                b = Bk[j]
                if not b.is_zero():
                    Ci[j] = Ci[j] + a * b
    return C


def mat_eq(A: Matrix, B: Matrix) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb) or any(x != y for x, y in zip(ra, rb)):
            return False
    return True


class SmithDecomposition:
    """U*A*V = D with unit-determinant U, V and divisibility chain on D."""

    def __init__(self, U: Matrix, D: Matrix, V: Matrix):
        self.U = U
        self.D = D
        self.V = V

    def diagonal(self) -> list[GaussianInteger]:
        r = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(r)]

    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if not d.is_zero())

    def torsion(self) -> list[GaussianInteger]:
        """Nonzero, non-unit invariant factors (canonical associates)."""
        return [d for d in self.diagonal() if not d.is_zero() and not d.is_unit()]


def smith_normal_form(A: Matrix) -> SmithDecomposition:
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[x for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    def row_swap(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def row_addmul(i, j, c: GaussianInteger):
        # row_i += c * row_j
        Di, Dj = D[i], D[j]
        for k in range(n):
            Di[k] = Di[k] + c * Dj[k]
        Ui, Uj = U[i], U[j]
        for k in range(m):
            Ui[k] = Ui[k] + c * Uj[k]

    def col_addmul(i, j, c: GaussianInteger):
        # col_i += c * col_j
        for row in D:
            row[i] = row[i] + c * row[j]
        for row in V:
            row[i] = row[i] + c * row[j]

    def pick_pivot(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x.is_zero():
                    continue
                key = (x.norm(), i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
        return None if best is None else (best[1], best[2])

    t = 0
    while True:
        piv = pick_pivot(t)
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])

        while True:
            # Reduce the pivot column.
            dirty = False
            for i in range(t + 1, m):
                x = D[i][t]
                if x.is_zero():
                    continue
                q, r = gaussian_divmod(x, D[t][t])
                row_addmul(i, t, -q)
                if not r.is_zero():
                    row_swap(t, i)  # remainder has smaller norm
                    dirty = True
            if dirty:
                continue
            # Reduce the pivot row.
            for j in range(t + 1, n):
                x = D[t][j]
                if x.is_zero():
                    continue
                q, r = gaussian_divmod(x, D[t][t])
                col_addmul(j, t, -q)
                if not r.is_zero():
                    col_swap(t, j)
                    dirty = True
            if dirty:
                continue
            # Enforce divisibility of the remaining block by the pivot.
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if not D[t][t].divides(D[i][j]):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_addmul(t, offender, GaussianInteger.one())

        t += 1

    # Normalize diagonal entries to canonical associates via row scaling.
    r = min(m, n)
    for i in range(r):
        d = D[i][i]
        if d.is_zero():
            continue
        u = d.unit_to_canonical()
        if u != GaussianInteger.one():
            for k in range(n):
                D[i][k] = u * D[i][k]
            for k in range(m):
                U[i][k] = u * U[i][k]
    return SmithDecomposition(U, D, V)


def kernel_basis(A: Matrix) -> Matrix:
    """Columns forming a basis of ker(A) over Z[i] (saturated lattice).

    Returns an n x k matrix whose columns span every integral solution of
    A x = 0; with V invertible the columns of V at zero diagonal positions
    do exactly that.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    snf = smith_normal_form(A)
    diag = snf.diagonal()
    zero_cols = [j for j in range(n) if j >= len(diag) or diag[j].is_zero()]
    return [[snf.V[i][j] for j in zero_cols] for i in range(n)]


def solve_exact(K: Matrix, B: Matrix) -> Matrix:
    """Solve K Y = B over Z[i]; every column of B must lie in im(K)."""
    m = len(K)
    n = len(K[0]) if m else 0
    p = len(B[0]) if B else 0
    if n == 0:
        for row in B:
            if any(not x.is_zero() for x in row):
                raise ValueError("inconsistent system: empty kernel basis")
        return [[GaussianInteger.zero()] * p for _ in range(0)]
    snf = smith_normal_form(K)
    UB = mat_mul(snf.U, B)
    diag = snf.diagonal()
    Z = zeros(n, p)
    for i in range(m):
        d = diag[i] if i < len(diag) else GaussianInteger.zero()
        for j in range(p):
            v = UB[i][j]
            if d.is_zero():
                if not v.is_zero():
                    raise ValueError("system has no exact solution")
            else:
                Z[i][j] = v.exact_div(d) if i < n else GaussianInteger.zero()
    return mat_mul(snf.V, Z)


def quotient_group(d_out: Matrix, d_in: Matrix, dim: int):
    """Invariants of ker(d_out)/im(d_in) inside Z[i]^dim.

    d_out: rows x dim matrix (the outgoing differential; may have 0 rows).
    d_in: dim x cols matrix (the incoming differential; may have 0 cols).
    Returns (free_rank, [torsion invariants as canonical associates]).
    """
    if dim == 0:
        return 0, []
    if not d_out or not d_out[0]:
        K = identity(dim)
    else:
        K = kernel_basis(d_out)
    k = len(K[0]) if K and K[0] is not None else 0
    if k == 0:
        return 0, []
    if not d_in or not (d_in[0] if d_in else None):
        return k, []
    Y = solve_exact(K, d_in)
    snf = smith_normal_form(Y)
    free = k - snf.rank()
    torsion = [str(t) for t in snf.torsion()]
    return free, torsion
