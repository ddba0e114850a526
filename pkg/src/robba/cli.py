"""Command-line front end.

Every command prints one JSON document (to stdout or --out).  Reports carry
the run configuration and the precision each number is certified to; the
exit code follows the error class (2 parse, 3 not stabilized, 4 precondition).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import acceptance
from .errors import NotStabilized, ParseError, RobbaError
from .herr import MAX_ROUNDS
from .series import Window


# configuration ------------------------------------------------------------------

def _window(args) -> Window:
    return Window(args.L, args.M, args.N, args.p, args.ntol)


def _config(args) -> dict:
    return {"p": args.p, "window": {"L": args.L, "M": args.M, "N": args.N,
                                    "ntol": _window(args).ntol},
            "rounds": args.rounds, "seed": args.seed}


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {path}: {e.msg}", None, None) from None
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def _emit(args, payload: dict) -> None:
    doc = {"command": args.command_name, "config": _config(args), **payload}
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# commands ---------------------------------------------------------------------------

def cmd_rank1(args) -> int:
    from .herr import cohomology_dims
    from .parsing import parse_character
    from .phigamma import mk_rank1
    win = _window(args)
    ch = parse_character(args.char, args.p)
    rep = cohomology_dims(mk_rank1(ch, win), win, args.rounds)
    _emit(args, {"report": rep.as_dict(), "history": [list(h) if h else None for h in rep.history],
                 "trust": {"dims": "exact integers once stabilized", "ntol": win.ntol}})
    if not rep.stabilized:
        raise NotStabilized(f"dimensions of {ch.label()} did not stabilize: {rep.history}")
    return 0


def cmd_pairing(args) -> int:
    from .pairing import duality_matrix
    from .parsing import parse_character
    from .phigamma import d_m, mk_rank1
    win = _window(args)
    ch = parse_character(args.char, args.p) if args.char else d_m(args.p, args.m)
    P = duality_matrix(mk_rank1(ch, win), args.degree, win)
    _emit(args, {"character": ch.label(), "matrix": P.as_dict(),
                 "trust": {"entries": "each entry carries its own O(p^k)"}})
    return 0


def cmd_cocycles(args) -> int:
    from .herr import cocycle_alpha, cocycle_beta, psi_fixed_check
    from .series import format_series
    win = _window(args)
    out = {}
    for name, fn in (("alpha", cocycle_alpha), ("beta", cocycle_beta)):
        c = fn(args.m, win)
        out[name] = {"phi_part": format_series(c.rep[0][0], args.terms),
                     "gamma_part": format_series(c.rep[1][0], args.terms),
                     "cocycle_defect": c.residual_valuation,
                     "class_precision": c.class_prec if c.class_prec is not None else win.N}
    ok, d = psi_fixed_check(args.m, win)
    out["psi_fixed"] = {"passes": ok, "defect": d}
    _emit(args, {"m": args.m, "cocycles": out})
    return 0


def cmd_series(args) -> int:
    from .parsing import parse_scalar, parse_series, series_to_laurent
    from .series import apply_gamma, apply_phi, apply_psi, derivative_del, format_series
    win = _window(args)
    f = series_to_laurent(parse_series(args.f, args.p), args.p, win)
    if args.op == "phi":
        g = apply_phi(f)
    elif args.op == "psi":
        g = apply_psi(f)
    elif args.op == "del":
        g = derivative_del(f)
    else:
        c = parse_scalar(args.c, args.p) if args.c else 1 + args.p
        g = apply_gamma(f, c)
    _emit(args, {"op": args.op, "input": format_series(f, args.terms), "output": format_series(g, args.terms),
                 "trust": {"prec": g.prec, "xprec": g.xprec}})
    return 0


def _iw(text, args):
    from .parsing import parse_series, series_to_iwasawa
    return series_to_iwasawa(parse_series(text, args.p), args.p, args.N, args.M, text)


def cmd_iwasawa(args) -> int:
    from .iwasawa import char_ideal, format_iwasawa, involution_iota, weierstrass_prep, wn_norm
    if args.action == "prep":
        W = weierstrass_prep(_iw(args.f, args))
        _emit(args, {"weierstrass": W.as_dict()})
    elif args.action == "iota":
        f = _iw(args.f, args)
        g = involution_iota(f)
        _emit(args, {"iota": format_iwasawa(g, args.terms),
                     "wn_norms": [wn_norm(g, n).as_dict() for n in (1, 2, 3)]})
    else:
        obj = _load_json(args.input)
        A = [[_iw(str(x), args) for x in row] for row in obj["matrix"]]
        _emit(args, {"char_ideal": char_ideal(A).as_dict()})
    return 0


def cmd_fildmod(args) -> int:
    from .fildmod import (filtration_Di, graded_W, module_from_json, position_checks,
                          search_filtrations, verify_D1D3)
    M, D = module_from_json(_load_json(args.input), args.p)
    F = filtration_Di(M, D)
    out = {"D": {str(i): S.as_lists() for i, S in zip(range(-2, 3), F)},
           "dims": [S.dim for S in F]}
    if args.action == "check":
        out["axioms"] = verify_D1D3(M, D, F).as_dict()
        out["positions"] = position_checks(M, D)
        out["search"] = search_filtrations(M, D)
        W0, W1 = graded_W(M, D, F)
        out["W0"], out["W1"] = W0.as_dict(), W1.as_dict()
    _emit(args, out)
    return 0


def _cmap(src, tgt, mats: dict):
    from .homalg import ComplexMap
    conv = lambda A: [[Fraction(str(x)) for x in r] for r in A]
    return ComplexMap(src, tgt, {int(k): conv(v) for k, v in mats.items()})


def cmd_selmer(args) -> int:
    from .homalg import cohomology, complex_from_json, selmer_cone
    obj = _load_json(args.input)
    G = complex_from_json(obj["global"], args.p, args.N, args.ntol)
    res, conds = [], []
    for loc in obj["locals"]:
        L = complex_from_json(loc["complex"], args.p, args.N, args.ntol)
        U = complex_from_json(loc["condition"], args.p, args.N, args.ntol)
        res.append(_cmap(G, L, loc["res"]))
        conds.append(_cmap(U, L, loc["incl"]))
    S = selmer_cone(G, res, conds, args.shift_convention)
    H = cohomology(S)
    _emit(args, {"convention": args.shift_convention, "range": [S.lo, S.hi], "ranks": S.ranks,
                 "cohomology": H.as_dict(), "euler_char": S.euler_char()})
    return 0


def cmd_height(args) -> int:
    from .homalg import DualComplex, bockstein, cohomology, complex_from_json, height_gram
    obj = _load_json(args.input)
    A = complex_from_json(obj, args.p, args.N, args.ntol)
    if not isinstance(A, DualComplex):
        raise ParseError("height needs a complex with ring 'dual'")
    ring = A.ring
    H = cohomology(A.reduction)
    B = bockstein(A, H)
    out = {"cohomology": H.as_dict(),
           "bockstein": {str(i): [[ring.fmt(x) for x in r] for r in b.matrix] for i, b in B.items()}}
    grams = {}
    for k, P in obj.get("pairing", {}).items():
        P = [[Fraction(str(x)) for x in r] for r in P]
        grams[k] = [[ring.fmt(x) for x in r] for r in height_gram(B[int(k)].matrix, P)]
    out["height_gram"] = grams
    _emit(args, out)
    return 0


def cmd_check(args) -> int:
    from .herr import cohomology_dims
    from .phigamma import Character, mk_rank1
    win = _window(args)
    # a window that cannot stabilize makes every downstream number meaningless
    cohomology_dims(mk_rank1(Character.from_parts(args.p, 0, 0), win), win, args.rounds, strict=True)
    results = acceptance.run_all(win, args.seed, args.only)
    for r in results:
        print(r.line(), file=sys.stderr)
    passed = all(r.passed for r in results)
    _emit(args, {"passed": passed, "results": [r.as_dict() for r in results]})
    return 0 if passed else 1


# parser ---------------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    g = c.add_argument_group("global options")
    g.add_argument("--p", type=int, default=5, help="the prime (default 5)")
    g.add_argument("--L", type=int, default=4, help="pole bound of the window")
    g.add_argument("--M", type=int, default=200, help="X-adic precision of the window")
    g.add_argument("--N", type=int, default=14, help="p-adic precision")
    g.add_argument("--ntol", type=int, default=None, help="rank threshold (default ceil(N/2))")
    g.add_argument("--rounds", type=int, default=MAX_ROUNDS, help="window sweep rounds")
    g.add_argument("--seed", type=int, default=42, help="seed for randomized suites")
    g.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    g.add_argument("--shift-convention", choices=["s23", "intro"], default="s23",
                   help="Selmer cone shift: [1] (degrees -2..1) or [-1] (degrees 0..3)")
    g.add_argument("--terms", type=int, default=8, help="series terms shown in reports")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="robba", description="Finite-precision (phi, Gamma)-module toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn, command_name=name)
        return sp

    sp = add("rank1", cmd_rank1, help="cohomology dimensions of a rank-1 module")
    sp.add_argument("--char", required=True, help="m=INT,s=0|1[,u=UNIT]")
    sp = add("pairing", cmd_pairing, help="duality matrix of D_m or a rank-1 module")
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--char", default=None)
    sp.add_argument("--degree", type=int, default=1, choices=[0, 1, 2])
    sp = add("cocycles", cmd_cocycles, help="the explicit H^1 classes of D_m")
    sp.add_argument("--m", type=int, default=1)

    series = sub.add_parser("series", help="series operators").add_subparsers(dest="action", required=True)
    sp = series.add_parser("apply", parents=[common])
    sp.set_defaults(fn=cmd_series, command_name="series apply")
    sp.add_argument("--op", choices=["phi", "psi", "gamma", "del"], required=True)
    sp.add_argument("--f", required=True, help="series literal, e.g. '1/X + 3 + X^2'")
    sp.add_argument("--c", default=None, help="gamma parameter (default 1+p)")

    iw = sub.add_parser("iwasawa", help="Iwasawa algebra").add_subparsers(dest="action", required=True)
    for action in ("prep", "iota", "charideal"):
        sp = iw.add_parser(action, parents=[common])
        sp.set_defaults(fn=cmd_iwasawa, command_name=f"iwasawa {action}")
        if action == "charideal":
            sp.add_argument("--input", required=True, help='JSON {"matrix": [[series, ...], ...]}')
        else:
            sp.add_argument("--f", required=True)

    fm = sub.add_parser("fildmod", help="filtered (phi, N)-modules").add_subparsers(dest="action", required=True)
    for action in ("filtration", "check"):
        sp = fm.add_parser(action, parents=[common])
        sp.set_defaults(fn=cmd_fildmod, command_name=f"fildmod {action}")
        sp.add_argument("--input", required=True)

    sel = sub.add_parser("selmer", help="Selmer complexes").add_subparsers(dest="action", required=True)
    sp = sel.add_parser("cone", parents=[common])
    sp.set_defaults(fn=cmd_selmer, command_name="selmer cone")
    sp.add_argument("--input", required=True)

    sp = add("height", cmd_height, help="Bockstein maps and height Gram matrices")
    sp.add_argument("--input", required=True)

    chk = sub.add_parser("check", help="acceptance suite").add_subparsers(dest="action", required=True)
    sp = chk.add_parser("all", parents=[common])
    sp.set_defaults(fn=cmd_check, command_name="check all")
    sp.add_argument("--only", type=int, nargs="*", default=None, help="run only these criteria")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except RobbaError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except KeyError as e:
        print(f"error: ParseError: input is missing the key {e}", file=sys.stderr)
        return ParseError.exit_code


if __name__ == "__main__":
    sys.exit(main())
