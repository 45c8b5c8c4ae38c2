"""Command-line surface: machine-readable reports over every verification layer.

Every command is deterministic given its arguments and seed; JSON numbers are
rounded to 12 significant digits and CSV uses '.' decimals, so repeated runs
are byte-identical.  Exit codes: 0 all checks pass, 1 a mathematical check
failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import buchstab, dioph, expsums, localdensity, reference, sieveconsts, singint, singular
from .arith import primes_up_to
from .errors import BudgetExceeded, VerificationError

SCHEMA_VERSION = 1


def _round12(obj):
    """Round every float to 12 significant digits, recursively."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(payload: dict, fmt: str, output: str | None, csv_text: str | None = None) -> None:
    if fmt == "csv":
        text = csv_text if csv_text is not None else _to_csv(payload)
    elif fmt == "json":
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        text = json.dumps(_round12(payload), indent=2) + "\n"
    else:
        text = _to_text(payload)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(payload: dict) -> str:
    rows = payload.get("rows")
    if not rows:
        raise ValueError("this command has no CSV form")
    header = list(rows[0].keys())
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for key in header:
            v = row[key]
            cells.append(f"{v:.12g}" if isinstance(v, float) else str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _to_text(payload: dict) -> str:
    return json.dumps(_round12(payload), indent=2) + "\n"


def _parse_k_list(raw: str) -> list[int]:
    if raw == "all":
        return list(reference.K_RANGE)
    try:
        ks = [int(tok) for tok in raw.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k list: {raw!r}")
    for k in ks:
        if k not in reference.K_RANGE:
            raise argparse.ArgumentTypeError(f"k must be in 3..14, got {k}")
    return ks


def cmd_sums(args) -> int:
    rep = expsums.verify_bounds(
        j_max=args.jmax, q_max=args.qmax, pp_max=args.ppmax, twisted_q_max=args.twisted_qmax
    )
    _emit({"command": "sums", "report": rep.as_dict()}, args.format, args.output)
    return 0 if rep.passed else 1


def cmd_local(args) -> int:
    rows = []
    failed = False
    for p in primes_up_to(args.pmax):
        K, L, Lstar = localdensity.local_densities_all(p, args.k)
        bound = localdensity.ep_bound(p, args.k)
        residues = [0] if p == 2 and args.parity == "even" else list(range(p))
        for nres in residues:
            ep = p * Lstar[nres] - (p - 1) ** 6
            ok = (
                abs(ep) <= bound
                and L[nres] > K[nres]
                and Lstar[nres] > 0
                and (abs(ep) < (p - 1) ** 6 if p >= 19 else True)
            )
            failed = failed or not ok
            rows.append(
                {
                    "p": p,
                    "n_class": nres,
                    "K": int(K[nres]),
                    "L": int(L[nres]),
                    "Lstar": int(Lstar[nres]),
                    "E_p": float(ep),
                    "bound": float(bound),
                    "pass": ok,
                }
            )
    _emit(
        {"command": "local", "k": args.k, "pmax": args.pmax, "rows": rows},
        args.format,
        args.output,
    )
    return 1 if failed else 0


def cmd_singular(args) -> int:
    try:
        ev = singular.singular_series(args.n, args.d, args.k, p_max=args.pmax)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = {
        "command": "singular",
        "n": ev.n,
        "d": ev.d.value,
        "k": ev.k,
        "p_max": ev.p_max,
        "value": ev.value,
        "tail_bound": ev.tail_bound,
        "factors_head": [
            {"p": f.p, "value": f.value} for f in ev.factors if f.p <= args.factor_head
        ],
    }
    _emit(payload, args.format, args.output)
    return 0 if ev.value > 0 or ev.d.value > 1 else 1


def cmd_constants(args) -> int:
    ks = args.k
    tables = [buchstab.constants_table(k, tol=args.tol, compare_tol=args.compare_tol) for k in ks]
    csv_text = buchstab.tables_to_csv(tables)
    payload = {"command": "constants", **buchstab.tables_to_json(tables)}
    _emit(payload, args.format, args.output, csv_text=csv_text)
    ok = all(t.all_within_bounds and t.C_value <= reference.C_BOUNDS[t.k] for t in tables)
    return 0 if ok else 1


def cmd_margin(args) -> int:
    rows = []
    ok = True
    for k in reference.K_RANGE:
        c_k = buchstab.tail_sum(k, tol=args.tol)
        margin = sieveconsts.main_term_margin(k, c_k)
        ok = ok and margin > 0
        rows.append(
            {
                "k": k,
                "C_k": float(c_k),
                "margin": float(margin),
                "reference_C_bound": reference.C_BOUNDS[k],
                "pass": margin > 0 and c_k <= reference.C_BOUNDS[k],
            }
        )
    _emit({"command": "margin", "rows": rows}, args.format, args.output)
    return 0 if ok and all(r["pass"] for r in rows) else 1


def _report_dict(rep) -> dict:
    # wall_time stays in the Python API but is stripped from emitted output,
    # which must be byte-identical across reruns
    d = dataclasses.asdict(rep)
    d.pop("wall_time", None)
    return d


def cmd_count(args) -> int:
    if args.what == "hua4":
        if args.Q is None:
            print("error: --Q required for hua4", file=sys.stderr)
            return 2
        rep = dioph.count_hua4(args.k, args.Q, method=args.method)
        payload = {"command": "count", "what": "hua4", "report": _report_dict(rep)}
    elif args.what == "mixed":
        if args.P is None:
            print("error: --P required for mixed", file=sys.stderr)
            return 2
        mc = dioph.count_mixed_S(args.k, args.P)
        payload = {
            "command": "count",
            "what": "mixed",
            "S": _report_dict(mc.S),
            "S1": _report_dict(mc.S1),
            "S2": _report_dict(mc.S2),
            "max_h": mc.max_h,
            "h_limit": mc.h_limit,
        }
    elif args.what == "triple":
        if args.N is None:
            print("error: --N required for triple", file=sys.stderr)
            return 2
        rep = dioph.count_admissible_triple(args.k, args.N, method=args.method)
        payload = {"command": "count", "what": "triple", "report": _report_dict(rep)}
    else:  # reps
        if args.n is None:
            print("error: --n required for reps", file=sys.stderr)
            return 2
        rep = dioph.count_representations(args.n, args.k, args.r)
        payload = {"command": "count", "what": "reps", "report": _report_dict(rep)}
    _emit(payload, args.format, args.output)
    return 0


def cmd_singint(args) -> int:
    n_grid = [int(float(tok)) for tok in args.n_grid.split(",")]
    n_grid = [n if n % 2 == 0 else n + 1 for n in n_grid]
    evals, slope, intercept, resid = singint.growth_fit(
        n_grid, args.k, samples=args.samples, seed=args.seed
    )
    expected = singint.expected_growth_exponent(args.k)
    payload = {
        "command": "singint",
        "k": args.k,
        "seed": args.seed,
        "samples": args.samples,
        "points": [
            {"n": e.n, "value": e.value, "est_abs_error": e.est_abs_error} for e in evals
        ],
        "slope": slope,
        "expected_exponent": expected,
        "slope_gap": slope - expected,
        "max_log_residual": resid,
    }
    _emit(payload, args.format, args.output)
    return 0 if abs(slope - expected) <= args.slope_tol else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wgkit",
        description="Verification toolkit for the mixed squares/cubes/k-th power form",
    )
    ap.add_argument("--format", choices=("json", "csv", "text"), default="json")
    ap.add_argument("--output", default=None, help="write to a file instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sums", help="exponential-sum bound verification")
    p.add_argument("--jmax", type=int, default=14)
    p.add_argument("--qmax", type=int, default=499)
    p.add_argument("--ppmax", type=int, default=10**4)
    p.add_argument("--twisted-qmax", dest="twisted_qmax", type=int, default=0)
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser("local", help="congruence count table with E_p bounds")
    p.add_argument("--pmax", type=int, default=499)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--parity", choices=("even", "all"), default="even")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("singular", help="truncated singular series")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--pmax", type=int, default=10**4)
    p.add_argument("--factor-head", dest="factor_head", type=int, default=100)
    p.set_defaults(func=cmd_singular)

    p = sub.add_parser("constants", help="iterated-integral constants table (golden artifact)")
    p.add_argument("--k", type=_parse_k_list, default="all")
    p.add_argument("--tol", type=float, default=buchstab.DEFAULT_TOL)
    p.add_argument("--compare-tol", dest="compare_tol", type=float, default=1e-3)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("margin", help="main-term positivity margins for k = 3..14")
    p.add_argument("--tol", type=float, default=buchstab.DEFAULT_TOL)
    p.set_defaults(func=cmd_margin)

    p = sub.add_parser("count", help="Diophantine counting reports")
    p.add_argument("--what", choices=("hua4", "mixed", "triple", "reps"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--Q", type=float, default=None)
    p.add_argument("--P", type=float, default=None)
    p.add_argument("--N", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--method", choices=("meet_in_middle", "exhaustive"), default="meet_in_middle")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("singint", help="singular-integral growth fit")
    p.add_argument("--n-grid", dest="n_grid", default="1e8,1e9,1e10,1e11")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, default=10**7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slope-tol", dest="slope_tol", type=float, default=0.03)
    p.set_defaults(func=cmd_singint)

    return ap


def main(argv: list[str] | None = None) -> int:
    import os

    threads = os.environ.get("WGKIT_THREADS")
    if threads:  # best-effort cap on BLAS/FFT worker threads
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    ap = build_parser()
    args = ap.parse_args(argv)
    # validate shared numeric ranges up front: usage errors exit 2
    for attr, lo in (("qmax", 1), ("pmax", 2), ("samples", 1024)):
        if getattr(args, attr, None) is not None and getattr(args, attr) < lo:
            ap.error(f"--{attr} must be >= {lo}")
    if getattr(args, "k", None) is not None and isinstance(args.k, int):
        if not (3 <= args.k <= 14) and args.command != "count":
            ap.error("--k must be in 3..14")
        if args.command == "count" and args.k < 2:
            ap.error("--k must be >= 2")
    try:
        return args.func(args)
    except (VerificationError,) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except (BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
