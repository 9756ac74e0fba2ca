"""Command-line front end: ``qkdv <subcommand> [options]``.

Exit codes: 0 success, 1 verification failure or internal tripwire, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__, fock
from .acceptance import Context, run_all, closed_form_eigenvalue
from .cache import RecordCache, dumps, load_chain, record_document
from .exact import Poly
from .exact.poly import VARIABLES
from .hamiltonians import br_chain, commute_check, dispersionless_block, dispersionless_record
from .identities import find_p2_pairs, verify_corollary, verify_lemma34
from .partitions import character_table, character_table_csv, enumerate_partitions
from .spectral import conjecture_rhs, deformed_schur, mstar_search, scale, spectral_curve
from .yjm import CONTENT_CONVENTION, M0_CONVENTION, verify_propA1, yjm_eigen

MAX_WEIGHT = 10
MAX_ORDER = 12
MAX_M_DISPERSIVE = 3
MAX_M_DISPERSIONLESS = 8


class VerificationFailure(RuntimeError):
    pass


# -- formatting helpers ---------------------------------------------------------------------


def frac_text(c: Fraction) -> str:
    return str(c)


def frac_latex(c: Fraction, var: str = "", power: int = 0) -> str:
    sign = "-" if c < 0 else "+"
    c = abs(c)
    mono = ""
    if power == 1:
        mono = var
    elif power > 1:
        mono = f"{var}^{{{power}}}"
    if c.denominator == 1:
        num = mono if (c.numerator == 1 and mono) else f"{c.numerator} {mono}".strip()
        return f"{sign}{num}"
    top = mono if (c.numerator == 1 and mono) else f"{c.numerator} {mono}".strip()
    return f"{sign}\\frac{{{top}}}{{{c.denominator}}}"


def series_latex(coeffs, var: str, order: int) -> str:
    parts = [frac_latex(Fraction(c), var, i) for i, c in enumerate(coeffs) if c]
    body = "".join(parts).lstrip("+")
    return f"{body}+\\mathcal{{O}}({var}^{{{order}}})"


def _power_latex(name: str, v: str, e: int) -> str:
    # h stands for hbar^(1/2) and eps2 for epsilon^2
    if v == "h":
        e = Fraction(e, 2)
    elif v == "eps2":
        e = 2 * e
    if e == 1:
        return name
    return f"{name}^{{{e}}}"


def poly_latex(p: Poly) -> str:
    names = {"h": "\\hbar", "eps2": "\\epsilon", "U0": "U_0", "sigma": "\\sigma",
             "V0": "V_0", "z": "z", "rho": "\\rho"}
    out = []
    for exps, c in sorted(p.terms(), key=lambda t: tuple(-x for x in t[0])):
        mono = " ".join(_power_latex(names[v], v, e) for v, e in zip(VARIABLES, exps) if e)
        if not mono:
            out.append(frac_latex(c))
        elif c == 1:
            out.append("+" + mono)
        elif c == -1:
            out.append("-" + mono)
        else:
            out.append(frac_latex(c) + " " + mono)
    return "".join(out).lstrip("+") or "0"


def emit(data, fmt: str, text: str | None = None, rows=None, latex: str | None = None) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        if rows is None:
            raise VerificationFailure("csv output is not available for this subcommand")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in rows:
            w.writerow(r)
        return buf.getvalue()
    if fmt == "latex":
        if latex is None:
            raise VerificationFailure("latex output is not available for this subcommand")
        return latex
    return text if text is not None else json.dumps(data, indent=2, sort_keys=True) + "\n"


def parallel_map(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def make_cache(args) -> RecordCache:
    return RecordCache(args.cache_dir, enabled=not args.no_cache)


# -- subcommands ---------------------------------------------------------------------------


def cmd_ham(args) -> tuple[str, int]:
    if not args.dispersionless and args.m > MAX_M_DISPERSIVE:
        raise UsageError(f"--m must be at most {MAX_M_DISPERSIVE} unless --dispersionless is given")
    if args.dispersionless:
        rec = dispersionless_record(args.m, args.weight)
    else:
        rec = load_chain(max(args.m, 1), make_cache(args))[args.m]
        for d in range(args.weight + 1):
            rec.p0(d)
    data = rec.to_json()
    data["blocks"] = [b for b in data["blocks"] if b["p"] == 0 and b["source_weight"] <= args.weight]
    lines = [f"H_{rec.m}  provenance={rec.provenance}  constants={rec.constant_convention}"]
    if rec.density is not None:
        lines.append(f"density: {rec.density}")
    for d in range(args.weight + 1):
        lines.append(f"weight {d}, basis {[p.label() for p in fock.basis(d)]}:")
        for row in rec.p0(d).entries:
            lines.append("  [" + ", ".join(str(x) for x in row) + "]")
    return emit(data, args.format, "\n".join(lines) + "\n"), 0


def _commute_weight(task):
    m, n, d = task
    return commute_check(dispersionless_record(m, d), dispersionless_record(n, d), d)[d]


def cmd_commute(args) -> tuple[str, int]:
    tasks = []
    for m in range(-1, args.mmax + 1):
        for n in range(m + 1, args.mmax + 1):
            for d in range(args.weight + 1):
                tasks.append((m, n, d))
    dmax = min(args.mmax, MAX_M_DISPERSIVE)
    chain = load_chain(max(dmax, 1), make_cache(args))
    full = []
    for m in range(-1, dmax + 1):
        for n in range(m + 1, dmax + 1):
            for d in range(args.weight + 1):
                full.append(("full", m, n, d))
    res_a = parallel_map(_commute_weight, tasks, args.threads)
    res_b = [commute_check(chain[m], chain[n], d)[d] for _, m, n, d in full]
    rows = [["kind", "m", "n", "weight", "commutes"]]
    for (m, n, d), ok in zip(tasks, res_a):
        rows.append(["dispersionless", m, n, d, int(ok)])
    for (_, m, n, d), ok in zip(full, res_b):
        rows.append(["full", m, n, d, int(ok)])
    ok = all(res_a) and all(res_b)
    text = "".join(f"{r[0]:15s} m={r[1]:2d} n={r[2]:2d} weight={r[3]} {'ok' if r[4] else 'FAIL'}\n" for r in rows[1:])
    data = [dict(zip(rows[0], r)) for r in rows[1:]]
    return emit(data, args.format, text, rows), 0 if ok else 1


def cmd_eigen(args) -> tuple[str, int]:
    rows = [["m", "lambda", "eigenvalue", "verified"]]
    data = []
    latex = []
    ok_all = True
    for k in range(args.weight + 1):
        for m in range(-1, args.mmax + 1):
            blk = dispersionless_block(m, k, args.mmax)
            for lam in enumerate_partitions(k):
                e = closed_form_eigenvalue(m, lam)
                s = fock.schur_q_vector(lam)
                ok = blk.apply(s) == [x * e for x in s]
                ok_all &= ok
                rows.append([m, lam.label(), str(e), int(ok)])
                data.append({"m": m, "lambda": list(lam), "eigenvalue": e.to_json(), "verified": ok})
                latex.append(f"E_{{{m}}}^{{[0]}}{lam.label()} &= {poly_latex(e)}\\\\\n")
    text = "# h = sqrt(hbar)\n" + "".join(
        f"m={r[0]:2d} {r[1]:14s} {r[2]}{'' if r[3] else '  MISMATCH'}\n" for r in rows[1:]
    )
    return emit(data, args.format, text, rows, "".join(latex)), 0 if ok_all else 1


def cmd_deform(args) -> tuple[str, int]:
    k = args.weight
    chain = load_chain(MAX_M_DISPERSIVE, make_cache(args))
    ops = {m: scale(chain[m], k) for m in range(0, MAX_M_DISPERSIVE + 1)}
    fam = deformed_schur(k, args.order, ops)
    parts = fock.basis(k)
    data = {"weight": k, "order": args.order, "mstar": mstar_search(k),
            "basis": [p.label() for p in parts], "families": [d.to_json() for d in fam]}
    rows = [["lambda", "nu"] + [f"sigma^{i}" for i in range(args.order)]]
    text_lines = []
    latex_lines = ["\\begin{align*}"]
    for d in fam:
        terms = []
        lterms = []
        for nu, s in zip(parts, d.coeffs):
            cs = [c.constant_term() for c in s.coeffs]
            rows.append([d.lam.label(), nu.label()] + [str(c) for c in cs])
            if nu == d.lam:
                terms.append(f"s{nu.label()}")
                lterms.append(f"s_{{{nu.label()}}}")
            elif any(cs):
                body = " + ".join(f"({c})*sigma^{i}" for i, c in enumerate(cs) if c)
                terms.append(f"s{nu.label()}*({body} + O(sigma^{args.order}))")
                lterms.append(f"s_{{{nu.label()}}}\\left({series_latex(cs, chr(92) + 'sigma', args.order)}\\right)")
        text_lines.append(f"r{d.lam.label()} = " + " + ".join(terms))
        latex_lines.append(f"r_{{{d.lam.label()}}} &= " + "+".join(lterms) + ",\\\\")
    latex_lines.append("\\end{align*}")
    return emit(data, args.format, "\n".join(text_lines) + "\n", rows, "\n".join(latex_lines) + "\n"), 0


def cmd_curve(args) -> tuple[str, int]:
    if args.m > MAX_M_DISPERSIVE:
        raise UsageError(f"--m must be at most {MAX_M_DISPERSIVE} for spectral curves")
    chain = load_chain(max(args.m, 1), make_cache(args))
    curve = spectral_curve(chain[args.m], args.weight)
    table = curve.coefficient_table()
    rows = [["sigma_power", "rho_power", "coefficient"]] + [[s, r, str(c)] for s, r, c in table]
    text = f"det(rho - K_{args.m}(sigma)) on weight {args.weight}:\n{curve.poly}\n" + "".join(
        f"  sigma^{s} rho^{r}: {c}\n" for s, r, c in table
    )
    latex = poly_latex(curve.poly) + "=0\n"
    return emit(curve.to_json(), args.format, text, rows, latex), 0


def cmd_genus_rhs(args) -> tuple[str, int]:
    vals = [conjecture_rhs(k) for k in range(args.kmax + 1)]
    rows = [["k"] + list(range(args.kmax + 1)), ["rhs"] + vals]
    latex = " & ".join(map(str, vals)) + " \\\\\n"
    return emit({"k": list(range(args.kmax + 1)), "rhs": vals}, args.format, " ".join(map(str, vals)) + "\n", rows, latex), 0


def cmd_identities(args) -> tuple[str, int]:
    chain = load_chain(2, make_cache(args)) if args.kmax >= 1 else {}
    rows = [["k", "lambda", "mu", "shared_P2", "corollary", "lemma_m1"]]
    data = []
    ok = True
    for p in find_p2_pairs(args.kmax):
        c = verify_corollary(p)
        v = verify_lemma34(p, 1, chain[1])
        ok &= c == 0 and not v
        rows.append([p.k, p.lam.label(), p.mu.label(), str(p.shared_invariant), c, str(v)])
        data.append({"k": p.k, "lambda": list(p.lam), "mu": list(p.mu), "P2": str(p.shared_invariant),
                     "corollary": c, "lemma_m1": v.to_json()})
    text = "".join(",".join(str(x) for x in r) + "\n" for r in rows)
    return emit(data, args.format, text, rows), 0 if ok else 1


def cmd_yjm(args) -> tuple[str, int]:
    k = args.weight
    rep = verify_propA1(k, args.zorder)
    eig = {lam.label(): [str(yjm_eigen(lam, m)) for m in range(args.zorder + 1)] for lam in enumerate_partitions(k)}
    data = rep.to_json()
    data["content_power_sums"] = eig
    text = (
        f"weight {k}, z-order {args.zorder}, route {rep.route}: "
        + ("zero defect" if rep.ok else f"defect at z^{rep.defect_orders}")
        + f"\ncontent convention: {CONTENT_CONVENTION}; {M0_CONVENTION}\n"
        + "".join(f"{lam}: {vals}\n" for lam, vals in eig.items())
    )
    rows = [["lambda"] + [f"m={m}" for m in range(args.zorder + 1)]] + [[lam] + vals for lam, vals in eig.items()]
    return emit(data, args.format, text, rows), 0 if rep.ok else 1


def cmd_characters(args) -> tuple[str, int]:
    k = args.weight
    parts = enumerate_partitions(k)
    table = character_table(k)
    data = {"weight": k, "order": [p.label() for p in parts], "table": [list(r) for r in table]}
    text = character_table_csv(k)
    return emit(data, "text" if args.format == "csv" else args.format, text), 0


def cmd_selftest(args) -> tuple[str, int]:
    cache = make_cache(args)
    lines = []
    # cache transparency: stored documents must equal a fresh recomputation byte for byte
    fresh = br_chain(MAX_M_DISPERSIVE)
    for m in range(2, MAX_M_DISPERSIVE + 1):
        path = cache.path(m)
        if cache.enabled and path.exists():
            same = path.read_text() == dumps(record_document(fresh[m]))
            lines.append(f"[{'PASS' if same else 'FAIL'}] cache file {path.name} matches recomputation")
            if not same:
                print("\n".join(lines), flush=True)
                return "", 1
        cache.store(fresh[m])
    for line in lines:
        print(line, flush=True)
    results = run_all(Context(cache), report=lambda r: print(r.line(), flush=True))
    ok = all(r.ok for r in results)
    summary = f"{sum(r.ok for r in results)}/{len(results)} criteria passed\n"
    return summary, 0 if ok else 1


# -- argument parsing ------------------------------------------------------------------------


class UsageError(ValueError):
    pass


def bounded(lo: int, hi: int, name: str):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"{name} must lie in [{lo}, {hi}]")
        return v

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv", "latex"], default="text")
    common.add_argument("--cache-dir", default=None, help="cache directory (default: $QKDV_CACHE or ~/.cache/qkdv)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the record cache")
    common.add_argument("--threads", type=bounded(1, 64, "--threads"), default=1)

    parser = argparse.ArgumentParser(prog="qkdv", description="Exact quantum KdV spectra.")
    parser.add_argument("--version", action="version", version=f"qkdv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ham", parents=[common], help="build a Hamiltonian and print its weight blocks")
    p.add_argument("--m", type=bounded(-1, MAX_M_DISPERSIONLESS, "--m"), default=1)
    p.add_argument("--weight", type=bounded(0, MAX_WEIGHT, "--weight"), default=4)
    p.add_argument("--dispersionless", action="store_true", help="use the eps = 0 generating function")
    p.set_defaults(func=cmd_ham)

    p = sub.add_parser("commute", parents=[common], help="check [H_m, H_n] = 0 weight by weight")
    p.add_argument("--mmax", type=bounded(-1, MAX_M_DISPERSIONLESS, "--mmax"), default=3)
    p.add_argument("--weight", type=bounded(0, MAX_WEIGHT, "--weight"), default=6)
    p.set_defaults(func=cmd_commute)

    p = sub.add_parser("eigen", parents=[common], help="dispersionless eigenvalue table")
    p.add_argument("--mmax", type=bounded(-1, MAX_M_DISPERSIONLESS, "--mmax"), default=3)
    p.add_argument("--weight", type=bounded(0, MAX_WEIGHT, "--weight"), default=4)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("deform", parents=[common], help="deformed Schur series")
    p.add_argument("--weight", type=bounded(0, MAX_WEIGHT, "--weight"), default=2)
    p.add_argument("--order", type=bounded(1, MAX_ORDER, "--order"), default=8)
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("curve", parents=[common], help="spectral curve det(rho - K_m(sigma))")
    p.add_argument("--weight", type=bounded(0, MAX_WEIGHT, "--weight"), default=2)
    p.add_argument("--m", type=bounded(-1, MAX_M_DISPERSIVE, "--m"), default=1)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("genus-rhs", parents=[common], help="right-hand side of the genus formula")
    p.add_argument("--kmax", type=bounded(0, 40, "--kmax"), default=10)
    p.set_defaults(func=cmd_genus_rhs)

    p = sub.add_parser("identities", parents=[common], help="character vanishing identities")
    p.add_argument("--kmax", type=bounded(1, MAX_WEIGHT, "--kmax"), default=8)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("yjm", parents=[common], help="YJM power sums and the class-algebra generating identity")
    p.add_argument("--weight", type=bounded(0, 8, "--weight"), default=4)
    p.add_argument("--zorder", type=bounded(0, 8, "--zorder"), default=8)
    p.set_defaults(func=cmd_yjm)

    p = sub.add_parser("characters", parents=[common], help="character table of the symmetric group as CSV")
    p.add_argument("--weight", type=bounded(0, MAX_WEIGHT, "--weight"), default=4)
    p.set_defaults(func=cmd_characters)

    p = sub.add_parser("selftest", parents=[common], help="run every acceptance criterion")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except Exception as exc:
        print(f"qkdv: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
