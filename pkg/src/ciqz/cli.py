"""Command line front end: load Matrix Market matrices, configure the region
and the solver, run, and emit machine-readable results.

Exit codes: 0 converged, 2 finished without converging (artifacts are still
written), 1 bad input or solver error (message on stderr).
"""

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .contour import Circle
from .mm_io import load_matrix_market, to_dense, write_array
from .solvers import SolverConfig, solve


@dataclass
class RunArtifacts:
    result_json: str
    history_csv: str
    vectors_text: str | None


def _parse_center(text):
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"expected RE or RE,IM, got {text!r}")


def build_parser():
    p = argparse.ArgumentParser(
        prog="ciqz",
        description=(
            "Compute the eigenvalues (and eigenvectors) of A x = lambda B x "
            "inside a circle in the complex plane."
        ),
    )
    p.add_argument("--matrix-a", required=True, help="Matrix Market file for A")
    p.add_argument(
        "--matrix-b",
        default=None,
        help="Matrix Market file for B (omitted means B = I)",
    )
    p.add_argument(
        "--center",
        required=True,
        type=_parse_center,
        metavar="RE,IM",
        help="circle center",
    )
    p.add_argument("--radius", required=True, type=float, help="circle radius")
    p.add_argument("--method", choices=("ciqz", "cirr"), default="ciqz")
    p.add_argument("--q", type=int, default=16, help="quadrature points")
    p.add_argument("--h0", type=int, default=20, help="initial probe width")
    p.add_argument("--g", type=int, default=5, help="number of moment orders")
    p.add_argument("--kappa", type=float, default=2.0, help="probe growth factor")
    p.add_argument("--eta", type=float, default=1e-3, help="filter tolerance")
    p.add_argument("--eps", type=float, default=1e-10, help="convergence tolerance")
    p.add_argument("--max-iter", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--scheme", choices=("gauss-legendre", "trapezoidal"), default="gauss-legendre"
    )
    p.add_argument("--out", default=None, help="result JSON path")
    p.add_argument("--history", default=None, help="convergence history CSV path")
    p.add_argument("--vectors", default=None, help="eigenvector dump path (Matrix Market array)")
    return p


def _sorted_report(report):
    """Order eigenvalues by (real, imaginary) with residuals and vectors
    permuted alongside, for stable diffs."""
    if len(report.eigenvalues) == 0:
        return report.eigenvalues, report.residuals, report.eigenvectors
    order = np.lexsort((report.eigenvalues.imag, report.eigenvalues.real))
    return (
        report.eigenvalues[order],
        report.residuals[order],
        report.eigenvectors[:, order],
    )


def render_result_json(report):
    values, residuals, _ = _sorted_report(report)
    doc = {
        "eigenvalues": [{"re": v.real, "im": v.imag} for v in values],
        "residuals": [float(r) for r in residuals],
        "s_detected": report.s_detected,
        "converged": report.converged,
        "h_used": report.h_used,
        "iterations": report.iterations_used,
    }
    return json.dumps(doc, indent=2) + "\n"


def render_history_csv(report):
    lines = ["k,c_k,e_k"]
    for rec in report.history:
        lines.append(f"{rec.k},{rec.c},{rec.e:.17g}")
    return "\n".join(lines) + "\n"


def emit_report(report, out=None, history=None, vectors=None):
    """Write whichever artifacts have paths; returns all rendered texts."""
    result_json = render_result_json(report)
    history_csv = render_history_csv(report)
    vectors_text = None
    if vectors is not None:
        _, _, vecs = _sorted_report(report)
        vectors_text = write_array(vecs)
    if out is not None:
        with open(out, "w") as fh:
            fh.write(result_json)
    if history is not None:
        with open(history, "w") as fh:
            fh.write(history_csv)
    if vectors is not None:
        with open(vectors, "w") as fh:
            fh.write(vectors_text)
    return RunArtifacts(result_json, history_csv, vectors_text)


def _merge_negative_values(argv):
    """Fold `--center -5.0e5,0` into `--center=-5.0e5,0`; argparse refuses
    separated option values that start with a dash unless they look like
    plain negative numbers."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--center", "--radius") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_merge_negative_values(list(argv)))
    try:
        a = to_dense(load_matrix_market(args.matrix_a))
        b = None
        if args.matrix_b is not None:
            b = to_dense(load_matrix_market(args.matrix_b))
            if b.shape != a.shape:
                raise ValueError(
                    f"A is {a.shape[0]}x{a.shape[1]} but B is "
                    f"{b.shape[0]}x{b.shape[1]}"
                )
        circle = Circle(args.center, args.radius)
        cfg = SolverConfig(
            h0=args.h0,
            g=args.g,
            q=args.q,
            kappa=args.kappa,
            eta=args.eta,
            eps=args.eps,
            max_iter=args.max_iter,
            seed=args.seed,
            scheme=args.scheme,
            method=args.method,
        )
        report = solve(a, b, circle, cfg)
        emit_report(report, out=args.out, history=args.history, vectors=args.vectors)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"ciqz: error: {exc}", file=sys.stderr)
        return 1
    return 0 if report.converged else 2


if __name__ == "__main__":
    sys.exit(main())
