"""Filtered (phi, N)-modules over Q and the five-step filtration of a submodule.

Everything is exact: matrices hold Fractions and subspaces are echelon
bases (see :mod:`robba.qlinalg`).  Frobenius eigenvalues are only ever
tested against 1 and 1/p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import DimensionMismatch, NotInvertible, PreconditionError, PropertyViolation
from .padic import _check_prime
from .qlinalg import (
    Subspace,
    complement_basis,
    coordinates,
    fmat,
    identity,
    inverse,
    kernel,
    matmul,
    matvec,
    scal,
    sub,
    transpose,
)


@dataclass(frozen=True, eq=False)
class FilteredPhiNModule:
    p: int
    phi: tuple
    N: tuple
    fil: tuple  # ((jump, Subspace), ...) with increasing jumps; Fil^i = space of the least jump >= i

    @property
    def dim(self) -> int:
        return len(self.phi)

    def phi_m(self) -> list:
        return [list(r) for r in self.phi]

    def N_m(self) -> list:
        return [list(r) for r in self.N]

    def fil_at(self, i: int) -> Subspace:
        for j, S in self.fil:
            if j >= i:
                return S
        return Subspace.zero(self.dim)

    def whole(self) -> Subspace:
        return Subspace.whole(self.dim)

    def phi_inverse(self) -> list:
        return inverse(self.phi_m())

    def jumps(self) -> list:
        return [j for j, _ in self.fil]

    def dual(self) -> "FilteredPhiNModule":
        """Hom(-, Q_p(1)): phi* = p^{-1} phi^{-T}, N* = -N^T, Fil^i* = ann(Fil^{-i})."""
        d = self.dim
        p = self.p
        phi = scal(Fraction(1, p), transpose(self.phi_inverse())) if d else []
        N = scal(Fraction(-1), transpose(self.N_m())) if d else []
        js = self.jumps() or [0]
        lo, hi = -max(js) - 1, -min(js) + 1
        steps = []
        for i in range(lo, hi + 1):
            steps.append((i, self.fil_at(-i).annihilator()))
        fil = []
        for k, (i, S) in enumerate(steps):
            nxt = steps[k + 1][1] if k + 1 < len(steps) else Subspace.zero(d)
            if S != nxt:
                fil.append((i, S))
        return make_module(p, phi, N, fil)

    def as_dict(self) -> dict:
        return {"dim": self.dim,
                "phi": [[str(x) for x in r] for r in self.phi],
                "N": [[str(x) for x in r] for r in self.N],
                "fil": [{"jump": j, "basis": S.as_lists()} for j, S in self.fil]}


def make_module(p: int, phi, N, fil) -> FilteredPhiNModule:
    """Validate and build; ``fil`` is a list of (jump, Subspace or list of vectors)."""
    _check_prime(p)
    phi, N = fmat(phi), fmat(N)
    d = len(phi)
    if len(N) != d or any(len(r) != d for r in phi + N):
        raise DimensionMismatch("phi and N must be square of the same size")
    if d:
        try:
            inverse(phi)
        except NotInvertible:
            raise NotInvertible("phi must be invertible") from None
        Np = identity(d)
        for _ in range(d):
            Np = matmul(Np, N)
        if any(x != 0 for r in Np for x in r):
            raise PropertyViolation("N is not nilpotent")
        lhs = matmul(N, phi)
        rhs = scal(Fraction(p), matmul(phi, N))
        if lhs != rhs:
            raise PropertyViolation("N phi != p phi N")
    spaces = []
    for j, S in sorted(fil, key=lambda t: t[0]):
        S = S if isinstance(S, Subspace) else Subspace(d, S)
        spaces.append((int(j), S))
    for (_, a), (_, b) in zip(spaces, spaces[1:]):
        if not b <= a:
            raise PropertyViolation("filtration is not decreasing")
    if spaces and spaces[0][1].dim != d:
        raise PropertyViolation("filtration is not exhaustive (lowest step must be the whole space)")
    if not spaces and d:
        spaces = [(0, Subspace.whole(d))]
    return FilteredPhiNModule(p, tuple(map(tuple, phi)), tuple(map(tuple, N)), tuple(spaces))


def module_from_json(obj: dict, p: int):
    """(module, submodule) from {dim, phi, N, fil: [{jump, basis}], submodule}."""
    d = int(obj["dim"])
    conv = lambda A: [[Fraction(str(x)) for x in r] for r in A]
    fil = [(f["jump"], conv(f["basis"]) if f["basis"] else []) for f in obj.get("fil", [])]
    M = make_module(p, conv(obj["phi"]), conv(obj["N"]), fil)
    if M.dim != d:
        raise DimensionMismatch(f"declared dim {d} but phi has size {M.dim}")
    D = submodule(M, conv(obj.get("submodule", [])))
    return M, D


def submodule(M: FilteredPhiNModule, vectors) -> Subspace:
    D = Subspace(M.dim, vectors)
    if not (D.is_stable(M.phi_m()) and D.is_stable(M.N_m())):
        raise PreconditionError("submodule is not stable under phi and N")
    return D


# the five-step filtration ----------------------------------------------------

def filtration_Di(M: FilteredPhiNModule, D: Subspace) -> list:
    """[D_{-2}, D_{-1}, D_0, D_1, D_2] attached to D."""
    d, p = M.dim, M.p
    V = M.whole()
    phi, N = M.phi_m(), M.N_m()
    op = sub(identity(d), scal(Fraction(1, p), M.phi_inverse()))   # 1 - p^{-1} phi^{-1}
    Dm1 = D.image(op) + D.eigenspace(phi, 1).image(N)
    D1 = D + (V.eigenspace(phi, 1) & D.eigenspace(phi, Fraction(1, p)).preimage(N))
    return [Subspace.zero(d), Dm1, D, D1, V]


@dataclass
class AxiomReport:
    D1: bool
    D2: bool
    D3: bool
    increasing: bool
    stable: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.D1 and self.D2 and self.D3 and self.increasing and self.stable

    def as_dict(self) -> dict:
        return {"D1": self.D1, "D2": self.D2, "D3": self.D3, "increasing": self.increasing,
                "stable": self.stable, "witnesses": self.witnesses}


def _excess(S: Subspace, T: Subspace):
    """A vector of S outside T, or None."""
    for v in S.vectors():
        if not T.contains(v):
            return [str(x) for x in v]
    return None


def verify_D1D3(M: FilteredPhiNModule, D: Subspace, F: list) -> AxiomReport:
    d, p = M.dim, M.p
    V = M.whole()
    phi, N = M.phi_m(), M.N_m()
    w = {}
    d1 = F[0].dim == 0 and F[2] == D and F[4] == V
    if not d1:
        w["D1"] = "ends of the filtration are not (0, D, whole space)"
    # (V/D_1)^{phi=1, N=0} = 0: whatever phi-1 and N both push into D_1 already lies in D_1
    Q = F[3].preimage(sub(phi, identity(d))) & F[3].preimage(N)
    ex1 = _excess(Q, F[3])
    op = sub(identity(d), scal(Fraction(1, p), M.phi_inverse()))
    regen = F[1].image(op) + F[1].image(N)
    d2 = ex1 is None and regen == F[1]
    if ex1 is not None:
        w["D2"] = {"fixed_vector_outside_D1": ex1}
    elif regen != F[1]:
        w["D2"] = {"regenerated": regen.as_lists(), "D_-1": F[1].as_lists()}
    ex0 = _excess(F[2].image(sub(phi, scal(Fraction(1, p), identity(d)))), F[1])
    ex2 = _excess(F[3].image(sub(phi, identity(d))), F[2])
    d3 = ex0 is None and ex2 is None
    if not d3:
        w["D3"] = {"gr0_defect": ex0, "gr1_defect": ex2}
    inc = all(a <= b for a, b in zip(F, F[1:]))
    st = all(S.is_stable(phi) and S.is_stable(N) for S in F)
    return AxiomReport(d1, d2, d3, inc, st, w)


def dual_submodule(M: FilteredPhiNModule, D: Subspace) -> Subspace:
    return D.annihilator()


def dual_filtration(M: FilteredPhiNModule, D: Subspace, i: int, F: list | None = None) -> Subspace:
    """D^perp_i = annihilator of D_{-i}, inside the twisted dual."""
    if i not in range(-2, 3):
        raise PreconditionError("filtration index must lie in [-2, 2]")
    F = F or filtration_Di(M, D)
    return F[2 - i].annihilator()


def full_dual_filtration(M: FilteredPhiNModule, D: Subspace) -> list:
    F = filtration_Di(M, D)
    return [dual_filtration(M, D, i, F) for i in range(-2, 3)]


# regularity positions and graded pieces ---------------------------------------

def position_checks(M: FilteredPhiNModule, D: Subspace, d_plus: int | None = None) -> dict:
    F0 = M.fil_at(0)
    transversal = (D & F0).dim == 0
    complementary = transversal and D.dim + F0.dim == M.dim
    return {"transversal": transversal, "complementary": complementary,
            "dim_matches": None if d_plus is None else D.dim == d_plus}


def quotient(M: FilteredPhiNModule, big: Subspace, small: Subspace) -> FilteredPhiNModule:
    """Induced structure on big/small (both phi, N-stable)."""
    C = complement_basis(big, small)
    S = small.vectors()
    full = S + C
    k = len(C)

    def induced(A):
        cols = [coordinates(full, matvec(A, c))[len(S):] for c in C]
        return transpose(cols) if k else []

    phi, N = induced(M.phi_m()), induced(M.N_m())
    fil = []
    for j, Fj in M.fil:
        vecs = []
        for v in (Fj & big).vectors():
            vecs.append(coordinates(full, v)[len(S):])
        fil.append((j, Subspace(k, vecs)))
    if k == 0:
        return FilteredPhiNModule(M.p, (), (), ())
    return make_module(M.p, phi, N, fil)


def graded_W(M: FilteredPhiNModule, D: Subspace, F: list | None = None):
    """(W_0, W_1) = (D_0/D_{-1}, D_1/D_0) with their eigenvalue properties asserted."""
    F = F or filtration_Di(M, D)
    W0 = quotient(M, F[2], F[1])
    W1 = quotient(M, F[3], F[2])
    p = M.p
    if W0.dim:
        if W0.phi_m() != scal(Fraction(1, p), identity(W0.dim)):
            raise PropertyViolation("phi does not act as 1/p on W_0")
        if W0.fil_at(0).dim:
            raise PropertyViolation("Fil^0 of W_0 is not zero")
    if W1.dim and W1.phi_m() != identity(W1.dim):
        raise PropertyViolation("phi does not act as 1 on W_1")
    return W0, W1


# uniqueness by enumeration -----------------------------------------------------

def _charpoly(A) -> list:
    """Coefficients c_0..c_d of det(t - A) (Faddeev-LeVerrier)."""
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = zeros_like(A)
    for k in range(1, n + 1):
        Mk = matmul(A, Mk)
        for i in range(n):
            Mk[i][i] += coeffs[n - k + 1]
        AM = matmul(A, Mk)
        coeffs[n - k] = -sum(AM[i][i] for i in range(n)) / k
    return coeffs


def zeros_like(A) -> list:
    return [[Fraction(0)] * len(A) for _ in A]


def _divisors(n: int) -> list:
    n = abs(n)
    return [k for k in range(1, n + 1) if n % k == 0] if n <= 10**6 else [1, n]


def rational_eigenvalues(A) -> list:
    c = _charpoly(A)
    from math import lcm
    den = 1
    for x in c:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in c]
    roots = set()
    if ints[0] == 0:
        roots.add(Fraction(0))
    lo = next(i for i, x in enumerate(ints) if x != 0)
    a0, an = ints[lo], ints[-1]
    for q in _divisors(an):
        for r in _divisors(a0):
            for s in (1, -1):
                t = Fraction(s * r, q)
                if sum(x * t**i for i, x in enumerate(ints)) == 0:
                    roots.add(t)
    return sorted(roots)


def stable_subspaces(M: FilteredPhiNModule):
    """(list of phi, N-stable subspaces, exhaustive flag).

    Candidates are spans of generalized eigenvectors for the rational
    eigenvalues; the list is complete when phi has distinct rational
    eigenvalues.
    """
    d = M.dim
    phi, N = M.phi_m(), M.N_m()
    eig = rational_eigenvalues(phi)
    cands = []
    for lam in eig:
        B = sub(phi, scal(lam, identity(d)))
        P = identity(d)
        for _ in range(d):
            P = matmul(P, B)
            cands += kernel(P, d)
    cands = list({tuple(v): v for v in cands}.values())
    found = {Subspace.zero(d), Subspace.whole(d)}
    for r in range(1, d):
        for combo in combinations(cands, r):
            S = Subspace(d, combo)
            if S.dim == r and S.is_stable(phi) and S.is_stable(N):
                found.add(S)
    exhaustive = len(eig) == d
    return sorted(found, key=lambda S: (S.dim, S.basis)), exhaustive


def search_filtrations(M: FilteredPhiNModule, D: Subspace) -> dict:
    """All stable flags (D_{-1} <= D <= D_1) satisfying D1-D3."""
    spaces, exhaustive = stable_subspaces(M)
    d = M.dim
    hits = []
    for A in spaces:
        if not A <= D:
            continue
        for B in spaces:
            if not D <= B:
                continue
            F = [Subspace.zero(d), A, D, B, M.whole()]
            if verify_D1D3(M, D, F).ok:
                hits.append(F)
    canon = filtration_Di(M, D)
    return {"solutions": len(hits), "exhaustive": exhaustive,
            "unique": len(hits) == 1 and hits[0] == canon, "candidates": len(spaces)}


def elliptic_model(p: int):
    """Split multiplicative reduction: phi = diag(1/p, 1), N e2 = e1, Fil^0 = <e2>, D = <e1>."""
    M = make_module(p, [[Fraction(1, p), 0], [0, 1]], [[0, 1], [0, 0]],
                    [(-1, identity(2)), (0, [[0, 1]])])
    return M, submodule(M, [[1, 0]])
