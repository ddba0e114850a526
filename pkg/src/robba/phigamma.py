"""(phi, Gamma)-modules of small rank over the Robba ring.

Modules are described by the matrices of phi and of gamma_0 (with
chi(gamma_0) = 1+p) on a chosen basis, plus a weight per basis vector that
fixes how the torsion subgroup Delta of Z_p^* acts: omega(a) e_i <- e_i
scaled by omega(a)^{m_i}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatch, NotInvertible, PreconditionError, PropertyViolation, RankCap
from .padic import _check_prime, vp_frac
from .series import (
    EXACT_TAIL,
    LaurentSeries,
    Window,
    apply_gamma,
    apply_phi,
    invert,
)

MAX_RANK = 4


@dataclass(frozen=True)
class Character:
    """delta = x^m |x|^s u_p, stored canonically as (m, delta(p))."""

    p: int
    m: int
    dp: Fraction

    @classmethod
    def from_parts(cls, p: int, m: int, s: int = 0, u=1) -> "Character":
        _check_prime(p)
        u = Fraction(u)
        if u == 0 or vp_frac(u, p) != 0:
            raise PreconditionError(f"unramified twist must be a p-adic unit, got {u}")
        return cls(p, int(m), Fraction(p) ** (m - s) * u)

    def at_gamma(self) -> Fraction:
        """delta(chi(gamma_0)) = (1+p)^m."""
        return Fraction(1 + self.p) ** self.m

    def times(self, other: "Character") -> "Character":
        return Character(self.p, self.m + other.m, self.dp * other.dp)

    def inverse(self) -> "Character":
        return Character(self.p, -self.m, 1 / self.dp)

    def dual(self) -> "Character":
        """delta^{-1} x|x|; note x|x| takes the value 1 at p."""
        return Character(self.p, 1 - self.m, 1 / self.dp)

    def label(self) -> str:
        return f"m={self.m},dp={self.dp}"

    def as_dict(self) -> dict:
        return {"m": self.m, "delta_p": str(self.dp)}


def chi(p: int) -> Character:
    """The cyclotomic character x|x|."""
    return Character(p, 1, Fraction(1))


def d_m(p: int, m: int) -> Character:
    """|x| x^m, whose module is the isoclinic building block D_m."""
    return Character.from_parts(p, m, 1)


Matrix = list  # list of rows of LaurentSeries


def _const(p, c, win: Window) -> LaurentSeries:
    return LaurentSeries.from_coeffs(p, {0: c}, win.N, win.M, tail_val=EXACT_TAIL)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    if len(A[0]) != k:
        raise DimensionMismatch("matrix shapes do not compose")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                term = A[i][t] * B[t][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def mat_map(A: Matrix, fn) -> Matrix:
    return [[fn(x) for x in row] for row in A]


def mat_inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan over the Laurent series field (pivot on the lowest-order entry)."""
    n = len(A)
    p = A[0][0].p
    win_prec = min(x.prec for row in A for x in row)
    win_x = min(x.xprec for row in A for x in row)
    one = LaurentSeries.from_coeffs(p, {0: 1}, win_prec, win_x, tail_val=EXACT_TAIL)
    zero = LaurentSeries.zero(p, win_prec, win_x)
    aug = [list(A[i]) + [one if j == i else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        cands = [r for r in range(col, n) if not aug[r][col].is_zero()]
        if not cands:
            raise NotInvertible("structure matrix is singular")
        piv = min(cands, key=lambda r: (aug[r][col].valuation(), aug[r][col].order()))
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = invert(aug[col][col])
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


@dataclass(frozen=True)
class PhiGammaModule:
    p: int
    win: Window
    A_phi: tuple
    A_gamma: tuple
    weights: tuple
    labels: tuple
    chars: tuple | None = None  # rank-1 characters when the module is a sum of them
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def rank(self) -> int:
        return len(self.A_phi)

    def phi_matrix(self) -> Matrix:
        return [list(r) for r in self.A_phi]

    def gamma_matrix(self) -> Matrix:
        return [list(r) for r in self.A_gamma]

    def constant_matrices(self):
        """(A_phi, A_gamma) as Fraction matrices, or None if some entry is not a constant."""
        out = []
        for A in (self.A_phi, self.A_gamma):
            rows = []
            for row in A:
                r = []
                for x in row:
                    degs = [k for k, _ in x.items()]
                    if any(k != 0 for k in degs):
                        return None
                    r.append(x.coeff_frac(0) if degs else Fraction(0))
                rows.append(r)
            out.append(rows)
        return out[0], out[1]

    def commutation_defect(self) -> int:
        """min valuation of A_gamma gamma(A_phi) - A_phi phi(A_gamma)."""
        c = 1 + self.p
        lhs = mat_mul(self.gamma_matrix(), mat_map(self.phi_matrix(), lambda x: apply_gamma(x, c)))
        rhs = mat_mul(self.phi_matrix(), mat_map(self.gamma_matrix(), apply_phi))
        return min(a.defect(b) for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb))

    def check_commutation(self) -> None:
        d = self.commutation_defect()
        if d < self.win.ntol:
            raise PropertyViolation(f"phi and gamma do not commute (defect valuation {d})")

    def summary(self) -> dict:
        d = {"rank": self.rank, "weights": list(self.weights), "labels": list(self.labels)}
        if self.chars:
            d["chars"] = [c.as_dict() for c in self.chars]
        return d


def from_matrices(p: int, win: Window, A_phi, A_gamma, weights=None, labels=None,
                  name: str = "", check: bool = True) -> PhiGammaModule:
    """Build a module from matrices whose entries are series or scalars."""
    d = len(A_phi)
    if d < 1 or d > MAX_RANK:
        raise RankCap(f"rank must be between 1 and {MAX_RANK}, got {d}")
    if len(A_gamma) != d or any(len(r) != d for r in list(A_phi) + list(A_gamma)):
        raise DimensionMismatch("structure matrices must be square of equal size")

    def conv(x):
        return x if isinstance(x, LaurentSeries) else _const(p, x, win)

    Aphi = tuple(tuple(conv(x) for x in r) for r in A_phi)
    Agam = tuple(tuple(conv(x) for x in r) for r in A_gamma)
    mod = PhiGammaModule(p, win, Aphi, Agam,
                         tuple(weights if weights is not None else [0] * d),
                         tuple(labels if labels is not None else [f"e{i + 1}" for i in range(d)]),
                         None, name)
    if check:
        mat_inverse(mod.phi_matrix())  # raises if phi(e_i) is not a basis
        mod.check_commutation()
    return mod


def mk_rank1(delta: Character, win: Window) -> PhiGammaModule:
    p = delta.p
    mod = PhiGammaModule(p, win, ((_const(p, delta.dp, win),),), ((_const(p, delta.at_gamma(), win),),),
                         (delta.m,), ("e",), (delta,), name=delta.label())
    return mod


def dual_twist(M: PhiGammaModule) -> PhiGammaModule:
    """Hom(M, R) twisted by x|x|: transpose-inverse matrices, gamma scaled by 1+p."""
    if M.rank > MAX_RANK:
        raise RankCap("rank above cap")
    if M.chars is not None:
        return direct_sum([mk_rank1(c.dual(), M.win) for c in M.chars])
    p = M.p
    Aphi = transpose(mat_inverse(M.phi_matrix()))
    Agam = [[x.scale(1 + p) for x in row] for row in transpose(mat_inverse(M.gamma_matrix()))]
    return PhiGammaModule(p, M.win, tuple(map(tuple, Aphi)), tuple(map(tuple, Agam)),
                          tuple(1 - w for w in M.weights), tuple(f"{l}*" for l in M.labels),
                          None, f"dual({M.name})")


def dcris_rank1(delta: Character):
    """(slope, Hodge-Tate weight, crystalline) of the rank-1 module of delta."""
    return Fraction(vp_frac(delta.dp, delta.p)) - delta.m, delta.m, True


def frobenius_on_dcris(delta: Character) -> Fraction:
    return delta.dp / Fraction(delta.p) ** delta.m


def _block_diag(blocks, zero_of):
    n = sum(len(b) for b in blocks)
    z = zero_of(blocks[0][0][0])
    out = [[z] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def direct_sum(Ms) -> PhiGammaModule:
    Ms = list(Ms)
    if not Ms:
        raise PreconditionError("direct sum of nothing")
    if len(Ms) == 1:
        return Ms[0]
    if sum(M.rank for M in Ms) > MAX_RANK:
        raise RankCap(f"total rank {sum(M.rank for M in Ms)} exceeds {MAX_RANK}")
    p, win = Ms[0].p, Ms[0].win

    def zero(x):
        return LaurentSeries.from_coeffs(p, {}, x.prec, x.xprec, tail_val=EXACT_TAIL)

    Aphi = _block_diag([M.A_phi for M in Ms], zero)
    Agam = _block_diag([M.A_gamma for M in Ms], zero)
    chars = None
    if all(M.chars is not None for M in Ms):
        chars = tuple(c for M in Ms for c in M.chars)
    labels = tuple(f"{l}{k + 1}" if len(Ms) > 1 else l for k, M in enumerate(Ms) for l in M.labels)
    return PhiGammaModule(p, win, tuple(map(tuple, Aphi)), tuple(map(tuple, Agam)),
                          tuple(w for M in Ms for w in M.weights), labels, chars,
                          " + ".join(M.name for M in Ms))


def tensor(A: PhiGammaModule, B: PhiGammaModule) -> PhiGammaModule:
    """Tensor product (basis e_i (x) f_j in lexicographic order)."""
    if A.rank * B.rank > MAX_RANK:
        raise RankCap("tensor product exceeds the rank cap")
    if A.chars is not None and B.chars is not None:
        return direct_sum([mk_rank1(a.times(b), A.win) for a in A.chars for b in B.chars])

    def kron(X, Y):
        return [[X[i][k] * Y[j][l] for k in range(len(X)) for l in range(len(Y))]
                for i in range(len(X)) for j in range(len(Y))]

    return PhiGammaModule(A.p, A.win, tuple(map(tuple, kron(A.A_phi, B.A_phi))),
                          tuple(map(tuple, kron(A.A_gamma, B.A_gamma))),
                          tuple(a + b for a in A.weights for b in B.weights),
                          tuple(f"{a}.{b}" for a in A.labels for b in B.labels), None,
                          f"({A.name})x({B.name})")
