"""The acceptance suite: twelve property checks with fixed tolerances.

Every check returns a CheckResult whose ``details`` hold only values that
are a function of (window, seed), so a report is reproducible byte for
byte.  Wall-clock limits are checked but never written into details.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CProjectionSingular, RobbaError
from .herr import (
    CohClass,
    Coboundary,
    class_reduce,
    cocycle_alpha,
    cocycle_beta,
    cohomology_dims,
    d0_apply,
    d1_apply,
    ell_invariant,
    fc_decompose,
    psi_fixed_check,
)
from .padic import PadicScalar, format_scalar, log_unit, rational_reconstruction, vp_frac
from .phigamma import Character, chi, d_m, dual_twist, mk_rank1
from .series import (
    LaurentSeries,
    Window,
    apply_gamma,
    apply_phi,
    apply_psi,
    delta_project,
    derivative_del,
)

TIME_BUDGET = 60.0


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"id": self.id, "name": self.name, "passed": self.passed, "details": self.details}

    def line(self) -> str:
        return f"AC{self.id:<2} {'PASS' if self.passed else 'FAIL'}  {self.name}"


def _rng(seed: int, k: int) -> random.Random:
    return random.Random(seed * 1000 + k)


def _rand_series(rng, p, win, pole=4, digits=None):
    digits = digits or win.N
    coeffs = {k: rng.randrange(p**digits) for k in range(-pole, win.M)}
    return LaurentSeries.from_coeffs(p, coeffs, win.N, win.M)


def _rand_invariant(rng, p, win, m, hi=12):
    x = LaurentSeries.from_coeffs(p, {k: rng.randrange(p**3) for k in range(-1, hi)}, win.N, win.M)
    return delta_project(x, m)


def _padic_gap(a: PadicScalar, b: PadicScalar) -> float:
    """Valuation of a - b computed on exact lifts (ignores both precisions)."""
    d = a.lift() - b.lift()
    return float("inf") if d == 0 else vp_frac(d, a.p)


def _finite(v):
    return "inf" if v == float("inf") else int(v)


# 1-2: dimensions -------------------------------------------------------------

def ac1(win: Window, seed: int) -> CheckResult:
    p = win.p
    rows, ok = [], True
    for m in (0, 1, 2):
        for s in (0, 1):
            ch = Character.from_parts(p, m, s)
            t0 = time.perf_counter()
            rep = cohomology_dims(mk_rank1(ch, win), win)
            fast = time.perf_counter() - t0 < TIME_BUDGET
            good = rep.stabilized and rep.euler_char == -1 and fast
            ok &= good
            rows.append({"char": ch.label(), "dims": list(rep.dims), "euler_char": rep.euler_char,
                         "stabilized": rep.stabilized, "ok": good})
    return CheckResult(1, "Euler characteristic of rank-1 modules", ok, {"runs": rows})


def ac2(win: Window, seed: int) -> CheckResult:
    rows, ok = [], True
    for m in (1, 2, 3):
        rep = cohomology_dims(mk_rank1(d_m(win.p, m), win), win)
        good = rep.stabilized and rep.dims == (0, 2, 1)
        ok &= good
        rows.append({"m": m, "dims": list(rep.dims), "stabilized": rep.stabilized})
    return CheckResult(2, "dimension table of D_m", ok, {"runs": rows})


# 3-4: operators -------------------------------------------------------------

def ac3(win: Window, seed: int, count: int = 100) -> CheckResult:
    rng = _rng(seed, 3)
    p, N = win.p, win.N
    gamma0 = 1 + p
    worst = {"psi_phi": N, "psi_del": N, "phi_gamma": N}
    for _ in range(count):
        f = _rand_series(rng, p, win)
        worst["psi_phi"] = min(worst["psi_phi"], apply_psi(apply_phi(f)).defect(f))
        lhs = apply_psi(derivative_del(f))
        rhs = derivative_del(apply_psi(f)).scale(p)
        worst["psi_del"] = min(worst["psi_del"], lhs.defect(rhs))
        a = apply_phi(apply_gamma(f, gamma0))
        b = apply_gamma(apply_phi(f), gamma0)
        worst["phi_gamma"] = min(worst["phi_gamma"], a.defect(b))
    ok = all(v >= N - 3 for v in worst.values())
    return CheckResult(3, "operator identities on random series", ok,
                       {"samples": count, "min_defect": worst, "threshold": N - 3})


def ac4(win: Window, seed: int) -> CheckResult:
    p, N = win.p, win.N
    inv_x = LaurentSeries.monomial(p, -1, N, win.M)
    d_psi = apply_psi(inv_x).defect(inv_x)
    one_x = LaurentSeries.from_coeffs(p, {0: 1, 1: 1}, N, win.M)
    phi_x = apply_phi(inv_x)
    acc, power = None, LaurentSeries.one(p, N, win.M)
    for _ in range(p):
        term = power * phi_x
        acc = term if acc is None else acc + term
        power = power * one_x
    d_sum = acc.defect(inv_x)
    fixed = {m: psi_fixed_check(m, win) for m in (1, 2, 3)}
    ok = (d_psi >= N - 3 and d_sum >= N - 3 and min(acc.xprec, inv_x.xprec) >= 100
          and all(f[0] for f in fixed.values()))
    return CheckResult(4, "explicit psi identities", ok, {
        "psi_inv_x_defect": d_psi, "trace_sum_defect": d_sum, "x_degree": min(acc.xprec, win.M),
        "psi_fixed": {str(m): {"passes": f[0], "defect": f[1]} for m, f in fixed.items()}})


# 5-7: cocycles, duality, cup products -----------------------------------------

def ac5(win: Window, seed: int) -> CheckResult:
    from .pairing import duality_matrix
    N = win.N
    rows, ok = [], True
    for m in (1, 2, 3):
        a, b = cocycle_alpha(m, win), cocycle_beta(m, win)
        P = duality_matrix(mk_rank1(d_m(win.p, m), win), 1, win)
        ff = P.entries[0][0].valuation()
        good = (a.residual_valuation >= N - 3 and b.residual_valuation >= N - 3
                and P.det_valuation == 0 and ff >= N - 4)
        ok &= good
        rows.append({"m": m, "alpha_defect": a.residual_valuation, "beta_defect": b.residual_valuation,
                     "matrix": P.as_dict(), "ff_valuation": _finite(ff)})
    return CheckResult(5, "cocycles and perfect duality on D_m", ok, {"runs": rows})


def ac6(win: Window, seed: int, count: int = 20) -> CheckResult:
    from .pairing import inv_brauer
    rng = _rng(seed, 6)
    p, N = win.p, win.N
    M = mk_rank1(chi(p), win)
    x = LaurentSeries.monomial(p, -1, N, win.M)
    got = inv_brauer(CohClass(2, ((x,),), N, M))
    want = -1 / log_unit(PadicScalar(p, 1 + p), N + 4)
    digits = _padic_gap(got, want) - want.valuation()
    worst = N
    for _ in range(count):
        y = (_rand_invariant(rng, p, win, 1),)
        z = (_rand_invariant(rng, p, win, 1),)
        c = CohClass(2, (d1_apply(M, y, z),), N, M)
        worst = min(worst, inv_brauer(c).valuation())
    ok = digits >= N - 2 and worst >= N - 3
    return CheckResult(6, "Brauer normalization of inv", ok, {
        "inv_one_over_x": format_scalar(got), "agreeing_digits": _finite(min(digits, N)),
        "coboundaries": count, "min_coboundary_valuation": worst})


def ac7(win: Window, seed: int, count: int = 50) -> CheckResult:
    from .pairing import _alpha, _beta, cup, derived_cup, dual_h1_basis
    rng = _rng(seed, 7)
    p = win.p
    D = mk_rank1(d_m(p, 1), win)
    Dd = dual_twist(D)
    left = [_alpha(1, win), _beta(1, win)]
    right = dual_h1_basis(1, win)

    def rand_class(basis, M, m):
        c = basis[0].scaled(rng.randrange(1, p * p)) + basis[1].scaled(rng.randrange(p * p))
        y, z = d0_apply(M, (_rand_invariant(rng, p, win, m),))
        return c + CohClass(1, (y, z), win.N, M)

    agree, worst = 0, win.N
    for _ in range(count):
        a, b = rand_class(left, D, 1), rand_class(right, Dd, 0)
        diff = cup(a, b) + derived_cup(a, b).scaled(-1)
        r = class_reduce(diff)
        if isinstance(r, Coboundary):
            agree += 1
        worst = min(worst, r.residual_valuation)
    return CheckResult(7, "direct and total-complex cup products agree", agree == count,
                       {"pairs": count, "coboundaries": agree, "min_residual": worst})


# 8: Iwasawa algebra ------------------------------------------------------------

def ac8(win: Window, seed: int, count: int = 100, ops: int = 20) -> CheckResult:
    from .iwasawa import IwasawaSeries, char_ideal, weierstrass_prep
    rng = _rng(seed, 8)
    p, N, K = win.p, win.N, win.M
    S = lambda c: IwasawaSeries(p, c, N, K)
    bad, worst = 0, N
    for _ in range(count):
        mu, lam = rng.randrange(3), rng.randrange(5)
        P = [rng.randrange(0, p**N, p) for _ in range(lam)] + [1]
        u = [rng.randrange(1, p)] + [rng.randrange(p**N) for _ in range(K - 1)]
        W = weierstrass_prep(S([p**mu]) * S(P) * S(u))
        same_P = all((a - b) % p ** (N - mu) == 0 for a, b in zip(W.P, P))
        if (W.mu, W.lam) != (mu, lam) or not same_P or W.defect < N - 2:
            bad += 1
        worst = min(worst, W.defect)

    def rand_entry(unit=False):
        c = [rng.randrange(p**N) for _ in range(6)]
        if unit:
            c[0] = rng.randrange(1, p)
        return S(c)

    # torsion module with known characteristic ideal, then random unimodular moves
    base = [[S([p, 1]), S([0])], [S([0]), S([0, 0, 1])]]
    ref = char_ideal(base).as_dict()
    A = [row[:] for row in base]
    stable = 0
    for _ in range(ops):
        i, j = rng.sample(range(2), 2)
        c = rand_entry()
        if rng.random() < 0.5:
            A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        else:
            for r in A:
                r[i] = r[i] + c * r[j]
        if rng.random() < 0.3:
            u = rand_entry(unit=True)
            A[i] = [u * a for a in A[i]]
        now = char_ideal(A).as_dict()
        stable += now["P"] == ref["P"] and now["mu"] == ref["mu"]
    ok = bad == 0 and worst >= N - 2 and stable == ops
    return CheckResult(8, "Weierstrass round-trips and char ideal invariance", ok, {
        "round_trips": count, "failures": bad, "min_defect": worst,
        "unimodular_ops": ops, "invariant": stable, "char_ideal": ref})


# 9: filtrations -----------------------------------------------------------------

def ac9(win: Window, seed: int) -> CheckResult:
    from .fildmod import (elliptic_model, filtration_Di, full_dual_filtration, graded_W,
                          search_filtrations, verify_D1D3)
    from .fildmod import dual_submodule
    M, D = elliptic_model(win.p)
    F = filtration_Di(M, D)
    ax = verify_D1D3(M, D, F)
    W0, W1 = graded_W(M, D, F)
    search = search_filtrations(M, D)
    dual = full_dual_filtration(M, D)
    same = dual == filtration_Di(M.dual(), dual_submodule(M, D))
    bidual = all(x.annihilator() == y for x, y in zip(dual, F[::-1]))
    ok = (F[1].dim == 0 and F[3] == M.whole() and W0.dim == 1 and W1.dim == 1
          and W0.phi_m() == [[Fraction(1, win.p)]] and W1.phi_m() == [[Fraction(1)]]
          and ax.ok and search["unique"] and search["exhaustive"] and same and bidual)
    return CheckResult(9, "canonical filtration of the elliptic model", ok, {
        "dims": [S.dim for S in F], "axioms": ax.as_dict(),
        "W0_phi": str(W0.phi_m()[0][0]) if W0.dim else None,
        "W1_phi": str(W1.phi_m()[0][0]) if W1.dim else None,
        "search": search, "dual_matches": same, "biduality": bidual})


# 10: l-invariant slopes -----------------------------------------------------------

LINES = [(Fraction(3), Fraction(7)), (Fraction(-2, 9), Fraction(4)), (Fraction(5, 3), Fraction(-1)),
         (Fraction(0), Fraction(2)), (Fraction(6), Fraction(0))]


def ac10(win: Window, seed: int) -> CheckResult:
    p = win.p
    rows, ok = [], True
    for m in (1, 2):
        a, b = cocycle_alpha(m, win), cocycle_beta(m, win)
        for x, y in LINES:
            c = a.scaled(x) + b.scaled(y)
            (X, Y), = fc_decompose(c, win)
            try:
                ell = ell_invariant([[X]], [[Y]], p, win.N - 2)
                got = rational_reconstruction(ell)
                good = y != 0 and got == x / y
                out = str(got)
            except CProjectionSingular:
                good = y == 0
                out = "singular"
            ok &= good
            rows.append({"m": m, "x": str(x), "y": str(y), "result": out, "ok": good})
    return CheckResult(10, "l-invariant of lines in H^1(D_m)", ok, {"lines": rows})


# 11: Bockstein and heights ---------------------------------------------------------

def _rand_gl(rng, n):
    from .qlinalg import det
    while True:
        A = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if det(A) != 0:
            return A


def _dual_model(rng):
    """A dual-number complex in disguise, with the H-to-H part of h known."""
    from .qlinalg import inverse, matmul, zeros
    hd = [rng.randint(1, 2) for _ in range(3)]
    bd = [rng.randint(0, 2) for _ in range(2)]           # acyclic pairs between i and i+1
    # degree i basis: [H_i | A_i (targets from i-1) | B_i (sources into i+1)]
    parts = [(hd[i], bd[i - 1] if i else 0, bd[i] if i < 2 else 0) for i in range(3)]
    ranks = [sum(x) for x in parts]
    d, h, eta = [], [], []
    for i in range(2):
        (h0, a0, b0), (h1, a1, b1) = parts[i], parts[i + 1]
        D = zeros(ranks[i + 1], ranks[i])
        for k in range(b0):
            D[h1 + k][h0 + a0 + k] = Fraction(1)
        E = [[Fraction(rng.randint(-3, 3)) for _ in range(h0)] for _ in range(h1)]
        Hm = zeros(ranks[i + 1], ranks[i])
        for r in range(h1):
            for c in range(h0):
                Hm[r][c] = E[r][c]
        for r in range(a1):            # H_i -> A_{i+1}: a coboundary, invisible in cohomology
            for c in range(h0):
                Hm[h1 + r][c] = Fraction(rng.randint(-3, 3))
        d.append(D)
        h.append(Hm)
        eta.append(E)
    Ps = [_rand_gl(rng, n) for n in ranks]
    Pinv = [inverse(P) for P in Ps]
    conj = lambda A, i: matmul(matmul(Ps[i + 1], A), Pinv[i])
    return ranks, hd, [conj(A, i) for i, A in enumerate(d)], [conj(A, i) for i, A in enumerate(h)], eta, Pinv


def ac11(win: Window, seed: int, trials: int = 8) -> CheckResult:
    from .homalg import DualComplex, Rationals, bockstein, cohomology, height_gram
    from .qlinalg import inverse, matmul, matvec, transpose
    rng = _rng(seed, 11)
    Q = Rationals()
    beta_ok = gram_ok = 0
    for _ in range(trials):
        ranks, hd, d, h, eta, Pinv = _dual_model(rng)
        A = DualComplex(Q, 0, ranks, d, h)
        H = cohomology(A.reduction)
        betas = bockstein(A, H)
        # class coordinates of the chosen representatives in the hidden H-basis
        T = [transpose([matvec(Pinv[i], z)[:hd[i]] for z in H.reps[i]]) for i in range(3)]
        good = True
        for i in range(2):
            want = matmul(matmul(inverse(T[i + 1]), eta[i]), T[i])
            good &= betas[i].matrix == want
            P = [[Fraction(rng.randint(-3, 3)) for _ in range(hd[i + 1])] for _ in range(hd[i + 1])]
            gram = height_gram(betas[i].matrix, P)
            gram_ok += gram == matmul(transpose(want), P)
        beta_ok += good
    ok = beta_ok == trials and gram_ok == 2 * trials
    return CheckResult(11, "Bockstein and height Gram matrices", ok,
                       {"complexes": trials, "beta_exact": beta_ok, "gram_exact": gram_ok})


# 12: determinism and precision honesty ---------------------------------------------

def _honest(reported: PadicScalar, better: PadicScalar) -> bool:
    return reported.prec is None or _padic_gap(reported, better) >= reported.prec


def ac12(win: Window, seed: int) -> CheckResult:
    from .iwasawa import IwasawaSeries, weierstrass_prep
    from .pairing import dm_gram, inv_brauer
    p, N = win.p, win.N
    hi = Window(win.L, win.M, N + 4, p, win.tol)
    audits = {}
    G, Gh = dm_gram(1, win), dm_gram(1, hi)
    audits["pairing"] = all(_honest(a, b) for r, s in zip(G, Gh) for a, b in zip(r, s))
    inv = [inv_brauer(CohClass(2, ((LaurentSeries.monomial(p, -1, w.N, w.M),),), w.N,
                                mk_rank1(chi(p), w))) for w in (win, hi)]
    audits["inv"] = _honest(*inv)
    rng = _rng(seed, 12)
    f = [rng.randrange(p, p**3, p) for _ in range(2)] + [rng.randrange(1, p)] + \
        [rng.randrange(p**6) for _ in range(win.M - 3)]
    W, Wh = (weierstrass_prep(IwasawaSeries(p, f, n, win.M)) for n in (N, N + 4))
    n = N - W.mu
    audits["weierstrass_P"] = all((a - b) % p**n == 0 for a, b in zip(W.P, Wh.P))
    audits["weierstrass_u"] = all(_honest(a, b) for a, b in zip(W.u.coeffs, Wh.u.coeffs))
    g = _rand_series(rng, p, win)
    gh = LaurentSeries.from_coeffs(p, {k: g.coeff_frac(k) for k in g.degrees()}, N + 4, win.M)
    s, sh = apply_psi(g), apply_psi(gh)
    audits["psi"] = all(_honest(s.coeff(k), sh.coeff(k)) for k in range(-4, min(s.xprec, sh.xprec)))
    first = json.dumps(ac3(win, seed, 10).as_dict(), sort_keys=True)
    again = json.dumps(ac3(win, seed, 10).as_dict(), sort_keys=True)
    audits["deterministic"] = first == again
    return CheckResult(12, "precision honesty and determinism", all(audits.values()), {"audits": audits})


CHECKS = [ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11, ac12]


def run_check(k: int, win: Window, seed: int) -> CheckResult:
    fn = CHECKS[k - 1]
    try:
        return fn(win, seed)
    except RobbaError as e:
        return CheckResult(k, fn.__name__, False, {"error": type(e).__name__, "message": str(e)})


def run_all(win: Window | None = None, seed: int = 42, only=None) -> list:
    win = win or Window()
    ids = only or range(1, len(CHECKS) + 1)
    return [run_check(k, win, seed) for k in ids]
