"""Command-line front end: measure computation, figure data, verification.

Subcommands: measure, figure, verify, trace-down, dur, solve. All numeric
output is deterministic for a fixed seed; CSV uses 9 significant digits with
'.' radix and ',' separators, and JSON tags every derived number with the
method that produced it (closed-form | envelope | numeric).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import closedform, dicke, durfamily, inequalities, qcore, reesolver
from .dicke import DickeIndex, DickeMixture, QuditComposition
from .qcore import ValidationError

DEFAULT_SEED = 20240915
DEFAULT_GRID = 101

FIGURE_FAMILIES = {
    "er3": [(3, 0, 1), (3, 0, 2), (3, 1, 2)],
    "er4a": [(4, 0, 2), (4, 0, 3)],
    "er4b": [(4, 0, 1), (4, 1, 2), (4, 1, 3)],
    "erqudit": [("ab", (2, 0, 0, 1), (1, 1, 1, 0))],
}


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_kvec(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise ValidationError(f"could not parse composition {text!r}") from exc


def _load_state(path: str) -> qcore.DensityOperator:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: JSON parse error at line {exc.lineno}, column {exc.colno}") from exc
    return qcore.density_from_json(data)


def _state_from_args(args):
    """Resolve the state source flags into (description, state object)."""
    if getattr(args, "state", None):
        return f"file:{args.state}", _load_state(args.state)
    if args.N is not None:
        if args.x is None:
            raise ValidationError("--N needs --x")
        return f"dur(N={args.N},x={args.x})", durfamily.DurParams(args.N, args.x)
    if args.n is not None and args.kvec is not None:
        counts = _parse_kvec(args.kvec)
        comp = QuditComposition(args.n, len(counts), counts)
        return f"S({args.n};{counts})", comp
    if args.n is not None and args.k is not None:
        if args.k2 is not None:
            s = args.x if args.x is not None else 0.5
            m = DickeMixture.two_component(args.n, args.k, args.k2, s)
            return f"rho[{args.n};{args.k},{args.k2}]({s})", m
        return f"S({args.n},{args.k})", DickeIndex(args.n, args.k)
    raise ValidationError("no state specified: use --state, --n/--k[, --k2], --n/--kvec, or --N/--x")


def cmd_measure(args) -> int:
    desc, state = _state_from_args(args)
    cfg = reesolver.SolverConfig(seed=args.seed)
    rows = []

    def add(name, value, method):
        rows.append({"measure": name, "value": float(value), "method": method})

    if isinstance(state, DickeIndex) or isinstance(state, QuditComposition):
        lam = (
            closedform.lambda_max_dicke(state)
            if isinstance(state, DickeIndex)
            else closedform.lambda_max_qudit(state)
        )
        ree = closedform.pure_dicke_ree(state)
        add("lambda_max", lam, "closed-form")
        add("E_log", ree, "closed-form")
        add("E_R", ree, "closed-form")
        lower, upper = reesolver.robustness_bounds(state)
        add("LR_lower", lower, "closed-form")
        add("LR_upper", upper, "closed-form")
        if args.numeric:
            vec = (
                dicke.dicke_state_vector(state)
                if isinstance(state, DickeIndex)
                else dicke.qudit_dicke_state_vector(state)
            )
            add("lambda_max_numeric", reesolver.lambda_max_numeric(vec, cfg), "numeric")
            add("E_R_numeric", reesolver.minimize_ree(vec.density(), cfg).value, "numeric")
    elif isinstance(state, DickeMixture):
        value, info = closedform.mixture_ree(state)
        add("E_R", value, info["method"])
        add("E_log", closedform.e_log_mixture(state), "envelope")
        if args.numeric:
            rho = dicke.mixture_density(state)
            add("E_R_numeric", reesolver.minimize_ree(rho, cfg).value, "numeric")
    elif isinstance(state, durfamily.DurParams):
        add("E_R", durfamily.dur_ree(state), "closed-form")
        add("E_log", durfamily.dur_e_log(state), "closed-form")
        if args.numeric:
            rho = durfamily.dur_state(state)
            add("E_R_numeric", reesolver.minimize_ree(rho, cfg).value, "numeric")
            add("G", reesolver.g_of_rho(rho, cfg), "numeric")
    else:  # raw density operator
        rho = state
        rep = reesolver.minimize_ree(rho, cfg)
        add("E_R_numeric", rep.value, "numeric")
        add("gap", rep.gap, "numeric")
        add("G", reesolver.g_of_rho(rho, cfg), "numeric")
        add("entropy", qcore.von_neumann_entropy(rho), "closed-form")

    if args.format == "json":
        _emit(json.dumps({"state": desc, "results": rows}, indent=2) + "\n", args.out)
    else:
        lines = ["measure,value,method"]
        lines += [f"{r['measure']},{_fmt(r['value'])},{r['method']}" for r in rows]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _figure_rows(fig_id: str, grid: int, seed: int):
    """Grid rows (family, s, F, coF, E_R_numeric) for one figure id."""
    rows = []
    svals = np.linspace(0.0, 1.0, grid)
    for family in FIGURE_FAMILIES[fig_id]:
        if fig_id == "erqudit":
            label, ca, cb = family
            n, d = 3, 4
            curve = closedform.qudit_segment_curve(n, d, ca, cb)
            env = closedform._qudit_segment_envelope(n, d, ca, cb)

            def density(s):
                m = dicke.QuditDickeMixture.from_weights(n, d, {ca: s, cb: 1.0 - s})
                return dicke.mixture_density(m)

            name = f"rho_{label}"
        else:
            n, k1, k2 = family
            curve = closedform.two_component_curve(n, k1, k2)
            env = closedform._two_component_envelope(n, k1, k2)

            def density(s, n=n, k1=k1, k2=k2):
                return dicke.mixture_density(DickeMixture.two_component(n, k1, k2, s))

            name = f"rho[{n};{k1}-{k2}]"

        def solve_point(item):
            i, s = item
            # per-point derived seed keeps concurrent evaluation deterministic
            cfg = reesolver.SolverConfig(max_iterations=120, seed=seed * 100_003 + i)
            rep = reesolver.minimize_ree(density(float(s)), cfg)
            return i, rep.value

        numeric = {}
        with ThreadPoolExecutor(max_workers=4) as pool:
            for i, value in pool.map(solve_point, enumerate(svals)):
                numeric[i] = value
        for i, s in enumerate(svals):
            s = float(s)
            rows.append((name, s, curve.evaluator(s), env.value(s), numeric[i]))
    return rows


def cmd_figure(args) -> int:
    if args.figure not in FIGURE_FAMILIES:
        raise ValidationError(f"unknown figure id {args.figure!r}; choose from {sorted(FIGURE_FAMILIES)}")
    rows = _figure_rows(args.figure, args.grid, args.seed)
    if args.format == "json":
        payload = [
            {
                "family": fam,
                "s": s,
                "F": {"value": f, "method": "closed-form"},
                "coF": {"value": c, "method": "envelope"},
                "E_R_numeric": {"value": v, "method": "numeric"},
            }
            for fam, s, f, c, v in rows
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["family,s,F,coF,E_R_numeric"]
        lines += [f"{fam},{_fmt(s)},{_fmt(f)},{_fmt(c)},{_fmt(v)}" for fam, s, f, c, v in rows]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    reports = []
    notes = []
    selector = args.suite
    if selector in ("all", "inequalities"):
        reports.extend(inequalities.run_default_suite(samples=args.samples, seed=args.seed, quick=args.quick))
    if selector in ("all", "dur"):
        n = args.N if args.N is not None else 4
        x = args.x if args.x is not None else 0.3
        if n >= 4:
            cert = durfamily.verify_closest(durfamily.DurParams(n, x), samples=args.samples, seed=args.seed)
            reports.append(
                inequalities.CheckReport(
                    "dur-closest-separable",
                    f"N={n}, x={x}",
                    {
                        "gradient_mismatch": cert.gradient_mismatch,
                        "min_gap_sampled": cert.min_gap_sampled,
                        "min_gap_polished": cert.min_gap_polished,
                    },
                    {"passed": 0.0 if cert.passed else -1.0},
                    cert.passed,
                )
            )
    if selector in ("all", "gmax"):
        for n in ([args.N] if args.N else [3, 4, 5]):
            val, _ = durfamily.g_max(n, samples=max(args.samples, 10_000), seed=args.seed)
            if n >= 4:
                reports.append(
                    inequalities.CheckReport(
                        "g-max", f"N={n}", {"max": val}, {"le_one": 1.0 + 1e-9 - val}, val <= 1.0 + 1e-9
                    )
                )
            else:
                notes.append(f"g-max N={n}: {val:.6f} exceeds 1; outside the theorem's N >= 4 scope")
                reports.append(
                    inequalities.CheckReport(
                        "g-max-out-of-scope", f"N={n}", {"max": val}, {}, True,
                        (f"value {val:.6f} > 1 demonstrates the N >= 4 boundary",),
                    )
                )

    passed = all(r.passed for r in reports)
    if args.format == "json":
        _emit(json.dumps([r.to_json() for r in reports], indent=2) + "\n", args.out)
    else:
        lines = [r.summary() for r in reports] + notes
        lines.append(f"suite: {'pass' if passed else 'FAIL'} ({len(reports)} checks)")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if passed else 1


def cmd_trace_down(args) -> int:
    if args.n is None or args.k is None:
        raise ValidationError("trace-down needs --n and --k")
    rows = inequalities.trace_down_report(DickeIndex(args.n, args.k))
    if args.format == "json":
        payload = [
            {"state": d, "E_R": {"value": v, "method": m}} for d, v, m in rows
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["state,E_R,method"] + [f"{d.replace(',', ';')},{_fmt(v)},{m}" for d, v, m in rows]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_dur(args) -> int:
    if args.N is None or args.x is None:
        raise ValidationError("dur needs --N and --x")
    p = durfamily.DurParams(args.N, args.x)
    payload = {
        "N": args.N,
        "x": args.x,
        "E_log": {"value": durfamily.dur_e_log(p), "method": "closed-form"},
        "negativity_1_rest": {
            "value": qcore.negativity(durfamily.dur_state(p), {0}),
            "method": "numeric",
        },
    }
    if args.N >= 4:
        payload["E_R"] = {"value": durfamily.dur_ree(p), "method": "closed-form"}
        cert = durfamily.verify_closest(p, samples=args.samples, seed=args.seed)
        payload["certificate"] = cert.to_json()
    else:
        val, _ = durfamily.g_max(args.N, samples=max(args.samples, 10_000), seed=args.seed)
        payload["g_max"] = {"value": val, "method": "numeric"}
        payload["note"] = "N = 3 lies outside the exact-REE theorem; g exceeds 1"
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_solve(args) -> int:
    desc, state = _state_from_args(args)
    if isinstance(state, DickeIndex):
        rho = dicke.dicke_state_vector(state).density()
    elif isinstance(state, QuditComposition):
        rho = dicke.qudit_dicke_state_vector(state).density()
    elif isinstance(state, DickeMixture):
        rho = dicke.mixture_density(state)
    elif isinstance(state, durfamily.DurParams):
        rho = durfamily.dur_state(state)
    else:
        rho = state
    cfg = reesolver.SolverConfig(seed=args.seed, max_iterations=args.iterations)
    report = reesolver.minimize_ree(rho, cfg)
    if args.format == "csv":
        _emit(report.trace_csv(), args.out)
    else:
        payload = {"state": desc, "report": report.to_json()}
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reekit",
        description="Multipartite entanglement measures: closed forms, envelopes, and the numerical REE solver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, state_file=False):
        p.add_argument("--n", type=int, help="party count for symmetric states")
        p.add_argument("--k", type=int, help="number of 0 excitations")
        p.add_argument("--k2", type=int, help="second component for two-state mixtures")
        p.add_argument("--kvec", type=str, help="qudit composition, e.g. '2,0,0,1'")
        p.add_argument("--N", type=int, help="party count of the GHZ-diagonal family")
        p.add_argument("--x", type=float, help="mixture weight (GHZ weight or two-component s)")
        p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="grid size on [0, 1]")
        p.add_argument("--samples", type=int, default=10_000, help="random sample count")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if state_file:
            p.add_argument("--state", type=str, help="density matrix JSON file")

    p = sub.add_parser("measure", help="compute measures for one state")
    common(p, state_file=True)
    p.add_argument("--numeric", action="store_true", help="also run the numerical solver")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("figure", help="emit figure data (s, F, coF, E_R_numeric)")
    p.add_argument("figure", choices=sorted(FIGURE_FAMILIES))
    common(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", nargs="?", default="all", choices=("all", "inequalities", "dur", "gmax"))
    common(p)
    p.add_argument("--quick", action="store_true", help="reduced sample counts")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace-down", help="REE after tracing out parties one at a time")
    common(p)
    p.set_defaults(func=cmd_trace_down)

    p = sub.add_parser("dur", help="GHZ-diagonal family measures and certificate")
    common(p)
    p.set_defaults(func=cmd_dur)

    p = sub.add_parser("solve", help="run the numerical REE solver")
    common(p, state_file=True)
    p.add_argument("--iterations", type=int, default=200, help="outer iteration cap")
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
