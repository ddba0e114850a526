"""Exact linear algebra over Q on lists of Fractions.

Subspaces of Q^d are kept as reduced row echelon bases so that equality
of subspaces is equality of tuples.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatch, NotInvertible


def fmat(A) -> list:
    return [[Fraction(x) for x in row] for row in A]


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list:
    return [[Fraction(0)] * n for _ in range(m)]


def matmul(A, B) -> list:
    if A and B and len(A[0]) != len(B):
        raise DimensionMismatch("matrix shapes do not compose")
    cols = list(zip(*B)) if B else []
    return [[sum((a * b for a, b in zip(row, c)), Fraction(0)) for c in cols] for row in A]


def matvec(A, v) -> list:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def transpose(A) -> list:
    return [list(r) for r in zip(*A)]


def sub(A, B) -> list:
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def scal(c, A) -> list:
    return [[c * a for a in r] for r in A]


def rref(rows, ncols: int):
    """(reduced rows without zero rows, pivot columns)."""
    M = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv.append(c)
        r += 1
        if r == len(M):
            break
    return [M[i] for i in range(r)], piv


def rank(A) -> int:
    if not A:
        return 0
    return len(rref(A, len(A[0]))[1])


def kernel(A, ncols: int | None = None) -> list:
    """Basis (as vectors) of {x : A x = 0}."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    R, piv = rref(A, n) if A else ([], [])
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, c in zip(R, piv):
            v[c] = -row[f]
        out.append(v)
    return out


def inverse(A) -> list:
    n = len(A)
    aug = [list(r) + e for r, e in zip(fmat(A), identity(n))]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise NotInvertible("matrix is singular")
    return [r[n:] for r in R]


def det(A) -> Fraction:
    M = fmat(A)
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        k = next((i for i in range(c, n) if M[i][c] != 0), None)
        if k is None:
            return Fraction(0)
        if k != c:
            M[c], M[k] = M[k], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


class Subspace:
    """A subspace of Q^d, stored as its reduced echelon basis."""

    __slots__ = ("d", "basis")

    def __init__(self, d: int, vectors=()):
        vecs = [[Fraction(x) for x in v] for v in vectors]
        if any(len(v) != d for v in vecs):
            raise DimensionMismatch(f"vectors must have length {d}")
        R, _ = rref(vecs, d) if vecs else ([], [])
        self.d = d
        self.basis = tuple(tuple(r) for r in R)

    @classmethod
    def whole(cls, d: int) -> "Subspace":
        return cls(d, identity(d))

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(d)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list:
        return [list(v) for v in self.basis]

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.d, self.vectors() + other.vectors())

    def __and__(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace(self.d)
        # a S = b T  <=>  [S^T | -T^T] (a, b) = 0
        S, T = self.vectors(), other.vectors()
        A = [[S[i][k] for i in range(len(S))] + [-T[j][k] for j in range(len(T))] for k in range(self.d)]
        out = []
        for sol in kernel(A, len(S) + len(T)):
            out.append([sum((sol[i] * S[i][k] for i in range(len(S))), Fraction(0)) for k in range(self.d)])
        return Subspace(self.d, out)

    def __le__(self, other: "Subspace") -> bool:
        return (self + other).dim == other.dim

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.d == other.d and self.basis == other.basis

    def __hash__(self):
        return hash((self.d, self.basis))

    def contains(self, v) -> bool:
        return (self + Subspace(self.d, [v])).dim == self.dim

    def image(self, A) -> "Subspace":
        return Subspace(len(A), [matvec(A, v) for v in self.basis])

    def preimage(self, A) -> "Subspace":
        """{x : A x in self} inside the source space of A."""
        n = len(A[0])
        ann = self.annihilator().vectors()
        if not ann:
            return Subspace.whole(n)
        return Subspace(n, kernel(matmul(ann, A), n))

    def annihilator(self) -> "Subspace":
        """Functionals (row vectors) vanishing on the subspace."""
        return Subspace(self.d, kernel(self.vectors(), self.d) if self.basis else identity(self.d))

    def eigenspace(self, A, lam) -> "Subspace":
        """self intersected with ker(A - lam)."""
        d = self.d
        K = Subspace(d, kernel(sub(fmat(A), scal(Fraction(lam), identity(d))), d))
        return self & K

    def is_stable(self, A) -> bool:
        return self.image(A) <= self

    def as_lists(self) -> list:
        return [[str(x) for x in v] for v in self.basis]

    def __repr__(self):
        return f"Subspace(d={self.d}, basis={self.as_lists()})"


def complement_basis(big: Subspace, small: Subspace) -> list:
    """Vectors of big completing a basis of small to one of big."""
    cur = small
    out = []
    for v in big.vectors():
        if not cur.contains(v):
            out.append(v)
            cur = cur + Subspace(big.d, [v])
    return out


def coordinates(basis: list, v) -> list:
    """Coordinates of v in a list of independent vectors (must lie in their span)."""
    n = len(basis)
    d = len(v)
    A = [[basis[j][k] for j in range(n)] + [Fraction(v[k])] for k in range(d)]
    R, piv = rref(A, n + 1)
    if n in piv:
        raise DimensionMismatch("vector is not in the span")
    x = [Fraction(0)] * n
    for row, c in zip(R, piv):
        x[c] = row[n]
    return x
