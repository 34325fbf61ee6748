"""The fraction field Q(i) of Z[i], with the exact linear algebra the
colored layer needs: row reduction, rank, kernels, and maps induced on
subquotients.  Used for ranks of triply-graded homology; integral structure
stays in smith.py.
"""

from __future__ import annotations

from fractions import Fraction

from .gaussian import GaussianInteger


class GaussianRational:
    """An element of Q(i) as an exact pair of rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def from_gaussian(z: GaussianInteger) -> "GaussianRational":
        return GaussianRational(z.re, z.im)

    @staticmethod
    def zero() -> "GaussianRational":
        return GaussianRational()

    @staticmethod
    def one() -> "GaussianRational":
        return GaussianRational(1)

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * other.inverse()

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.re == other and self.im == 0
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}+{self.im}i" if self.im > 0 else f"{self.re}{self.im}i"

    __repr__ = __str__


QMatrix = list  # list[list[GaussianRational]]


def qzeros(m: int, n: int) -> QMatrix:
    return [[GaussianRational.zero() for _ in range(n)] for _ in range(m)]


def qidentity(n: int) -> QMatrix:
    M = qzeros(n, n)
    for i in range(n):
        M[i][i] = GaussianRational.one()
    return M


def qmat_mul(A: QMatrix, B: QMatrix) -> QMatrix:
    m = len(A)
    inner = len(B)
    n = len(B[0]) if inner else 0
    C = qzeros(m, n)
    for i in range(m):
        Ai, Ci = A[i], C[i]
        for k in range(inner):
            a = Ai[k]
            if a.is_zero():
                continue
            Bk = B[k]
            for j in range(n):
                if not Bk[j].is_zero():
                    Ci[j] = Ci[j] + a * Bk[j]
    return C


def rref(A: QMatrix) -> tuple[QMatrix, list[int]]:
    """Reduced row echelon form (copy) and pivot column list."""
    M = [[x for x in row] for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if not M[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M, pivots


def qrank(A: QMatrix) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def null_space(A: QMatrix, n_cols: int) -> QMatrix:
    """Basis of ker(A) as an n_cols x k matrix of columns."""
    if not A or not A[0]:
        return qidentity(n_cols)
    M, pivots = rref(A)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = qzeros(n_cols, len(free))
    for bi, fc in enumerate(free):
        basis[fc][bi] = GaussianRational.one()
        for ri, pc in enumerate(pivots):
            basis[pc][bi] = -M[ri][fc]
    return basis


def solve_in_span(B: QMatrix, target: QMatrix) -> QMatrix:
    """Solve B X = target; every target column must lie in span(B).

    B is n x k (columns a spanning set), target n x p.  Raises ValueError
    when a column is outside the span.
    """
    n = len(B)
    k = len(B[0]) if B and B[0] is not None else 0
    p = len(target[0]) if target and target[0] is not None else 0
    if k == 0:
        for row in target:
            if any(not x.is_zero() for x in row):
                raise ValueError("target outside span of empty basis")
        return [[] for _ in range(0)]
    aug = [[B[i][j] for j in range(k)] + [target[i][j] for j in range(p)]
           for i in range(n)]
    M, pivots = rref(aug)
    X = qzeros(k, p)
    for ri, pc in enumerate(pivots):
        if pc >= k:
            raise ValueError("target not contained in the span")
        for j in range(p):
            X[pc][j] = M[ri][k + j]
    return X
