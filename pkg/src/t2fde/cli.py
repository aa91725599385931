"""Command-line interface: ``t2fde solve | check | plot``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import checks, ivp
from .errors import IntegrationFailure, SpecParseError
from .specfile import load_spec

EXIT_OK, EXIT_PARSE, EXIT_NONE_ADMISSIBLE, EXIT_INTEGRATION, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4

COLUMNS = ("x", "beta", "alpha", "lower_left", "lower_right", "upper_left", "upper_right", "form", "valid")


def fmt(v: float) -> str:
    return f"{v:.12g}"


def form_label(form) -> str:
    return f"{form[0]}{form[1]}"


def trajectory_rows(traj: ivp.FuzzyTrajectory):
    """Rows in x, beta, alpha order, numbers already formatted."""
    label = form_label(traj.form)
    valid = "true" if traj.valid else "false"
    alphas = [fmt(a) for a in traj.agrid.levels]
    betas = [fmt(b) for b in traj.bgrid.levels]
    for k, x in enumerate(traj.x):
        xs = fmt(x)
        v = traj.values[k]
        for ib, b in enumerate(betas):
            for ia, a in enumerate(alphas):
                ends = (v[0, ib, ia, 0], v[0, ib, ia, 1], v[1, ib, ia, 0], v[1, ib, ia, 1])
                yield [xs, b, a, *(fmt(e) for e in ends), label, valid]


def write_csv(results, path: Path):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for _, traj in results:
        w.writerows(trajectory_rows(traj))
    path.write_bytes(buf.getvalue().encode("utf-8"))


def _rounded(arr) -> list:
    return [float(fmt(v)) for v in arr]


def write_json(results, path: Path):
    doc = {"columns_note": "planes hold [left, right] per beta row and alpha column", "forms": {}}
    for form, traj in results:
        by_x = {}
        for k, x in enumerate(traj.x):
            v = traj.values[k]
            by_x[fmt(x)] = {
                plane: [[_rounded(v[p, ib, ia]) for ia in range(traj.agrid.count)] for ib in range(traj.bgrid.count)]
                for p, plane in enumerate(("lower", "upper"))
            }
        doc["forms"][form_label(form)] = {
            "valid": traj.valid,
            "failure": None if traj.valid else str(traj.failure),
            "alpha": _rounded(traj.agrid.levels),
            "beta": _rounded(traj.bgrid.levels),
            "x": by_x,
        }
    path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8", newline="\n")


def _out_base(spec_path: str, out) -> Path:
    if out:
        p = Path(out)
        return p.with_suffix("") if p.suffix in (".csv", ".json") else p
    name = spec_path.split(":", 1)[1] if spec_path.startswith("bundled:") else Path(spec_path).stem
    return Path(Path(name).stem)


def cmd_solve(args) -> int:
    try:
        spec = load_spec(args.spec)
    except SpecParseError as exc:
        print(f"{args.spec}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"{args.spec}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.form:
        spec = replace(spec, form=ivp.parse_form(args.form))
    backend = {"rk4": "rk4", "closed": "closed_form"}[args.backend] if args.backend else spec.backend
    try:
        out = ivp.solve(spec, backend)
    except IntegrationFailure as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    results = out if isinstance(out, list) else [(out.form, out)]

    base = _out_base(args.spec, args.out)
    base.parent.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = base.with_name(base.name + ".csv"), base.with_name(base.name + ".json")
    write_csv(results, csv_path)
    write_json(results, json_path)
    for form, traj in results:
        verdict = "admissible" if traj.valid else f"not admissible ({traj.failure})"
        print(f"form {form_label(form)} [{traj.backend}]: {verdict}")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK if any(t.valid for _, t in results) else EXIT_NONE_ADMISSIBLE


def cmd_check(args) -> int:
    ok = checks.report(args.suite, seed=args.seed, count=args.count)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def read_rows(path: Path) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        return list(reader)


def _match(values, target, tol=1e-9):
    hits = [v for v in values if abs(v - target) <= tol]
    return hits[0] if hits else None


def cmd_plot(args) -> int:
    try:
        rows = read_rows(Path(args.csv))
    except (OSError, ValueError) as exc:
        print(f"{args.csv}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    forms = list(dict.fromkeys(r["form"] for r in rows))
    if args.form:
        form = args.form
        if form not in forms:
            print(f"form {form} is not in {args.csv} (have {', '.join(forms)})", file=sys.stderr)
            return EXIT_PARSE
    else:
        valid = [f for f in forms if any(r["form"] == f and r["valid"] == "true" for r in rows)]
        form = (valid or forms)[0]
    rows = [r for r in rows if r["form"] == form]
    alphas = sorted({float(r["alpha"]) for r in rows})
    betas = sorted({float(r["beta"]) for r in rows})
    a, b = _match(alphas, args.alpha), _match(betas, args.beta)
    if a is None or b is None:
        print(f"(alpha, beta) = ({args.alpha:g}, {args.beta:g}) is not on the stored grids", file=sys.stderr)
        return EXIT_PARSE

    def series(alpha, beta):
        pts = [r for r in rows if float(r["alpha"]) == alpha and float(r["beta"]) == beta]
        x = np.array([float(r["x"]) for r in pts])
        ends = np.array([[float(r[c]) for c in COLUMNS[3:7]] for r in pts])
        order = np.argsort(x, kind="stable")
        return x[order], ends[order]

    x, ends = series(a, b)
    xc, crisp = series(alphas[-1], betas[-1])
    render_svg(x, ends, xc, crisp[:, 0], a, b, form, Path(args.out))
    print(f"wrote {args.out}")
    return EXIT_OK


def render_svg(x, ends, xc, crisp, alpha, beta, form, out: Path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "t2fde", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        styles = (("lower plane, left", "tab:blue", "-"), ("lower plane, right", "tab:blue", "--"),
                  ("upper plane, left", "tab:red", "-"), ("upper plane, right", "tab:red", "--"))
        for k, (label, color, ls) in enumerate(styles):
            ax.plot(x, ends[:, k], color=color, linestyle=ls, label=label)
        ax.plot(xc, crisp, color="black", linewidth=1.2, label="crisp (alpha = beta = 1)")
        ax.set_xlabel("x")
        ax.set_ylabel("value")
        ax.set_title(f"form ({form[0]},{form[1]}), alpha = {alpha:.4g}, beta = {beta:.4g}")
        ax.legend(fontsize="small")
        fig.tight_layout()
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, format="svg", metadata={"Date": None})
        plt.close(fig)


def level(text: str) -> float:
    """A grid level given as a decimal or a fraction such as ``1/3``."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or fraction: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="t2fde", description="Type-2 fuzzy initial value problems.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a problem file and write CSV and JSON")
    s.add_argument("spec", help="problem file, or bundled:problem1 (problem2, problem3)")
    s.add_argument("--out", help="output path without extension (default: spec name)")
    s.add_argument("--form", choices=("auto", "11", "12", "21", "22"), help="override the file's form")
    s.add_argument("--backend", choices=("rk4", "closed"), help="override the file's backend")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="run a seeded property suite")
    c.add_argument("suite", choices=checks.SUITES)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=int, default=100)
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("plot", help="plot envelopes from a solve CSV as SVG")
    g.add_argument("csv")
    g.add_argument("--alpha", type=level, required=True, help="alpha level, e.g. 0.5 or 1/3")
    g.add_argument("--beta", type=level, required=True, help="beta level")
    g.add_argument("--out", required=True)
    g.add_argument("--form", choices=("11", "12", "21", "22"), help="default: first admissible form")
    g.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
