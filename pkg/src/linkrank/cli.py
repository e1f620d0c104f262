"""Command-line front end: ``linkrank {rank,spectrum,diagnose,validate} FILE``.

Exit codes: 0 success, 1 I/O error, 2 usage, 3 parse error, 4 validation
error, 5 non-convergence, 6 estimator failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .errors import (
    EdgeListParseError,
    EstimatorError,
    ExactModeCapError,
    GraphValidationError,
    LinkRankError,
    NonConvergenceError,
)
from .graph_ingest import parse_edge_list, validate
from .power_engine import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    InitialVector,
    compare_inits,
    convergence_profile,
    pagerank_vector,
    power_iterate,
)
from .ranking import DEFAULT_TIE_TOL, rank_pages
from .spectral_tools import (
    EXACT_MODE_CAP,
    estimate_lambda2_deflation,
    estimate_lambda2_ratio,
    spectrum_report,
)
from .stochastic_matrix import build_matrix, matrix_to_tsv, stationary_vector_exact

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_NONCONVERGENCE = 5
EXIT_ESTIMATOR = 6

SCHEMA_RANK = "linkrank.rank/v1"
SCHEMA_DIAGNOSE = "linkrank.diagnose/v1"
SCHEMA_VALIDATE = "linkrank.validate/v1"


@dataclass
class RunConfig:
    input: Path
    command: str
    tol: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    init: str = "uniform"
    format: str = "text"
    exact: bool = False
    tie_tol: float = DEFAULT_TIE_TOL
    figures: Optional[Path] = None
    lambda2: Optional[float] = None
    matrix_tsv: Optional[Path] = None
    trace_tsv: Optional[Path] = None

    def initial_vector(self) -> InitialVector:
        if self.init.startswith("file:"):
            values = Path(self.init[5:]).read_text(encoding="utf-8").split()
            return InitialVector.custom([float(x) for x in values])
        return InitialVector(self.init)


class _Fail(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _num(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return float(x)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load(cfg: RunConfig):
    try:
        text = cfg.input.read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {cfg.input}: {exc.strerror or exc}") from exc
    try:
        graph = parse_edge_list(text)
    except EdgeListParseError as exc:
        raise _Fail(EXIT_PARSE, f"{cfg.input}: {exc}") from exc
    except GraphValidationError as exc:
        raise _Fail(EXIT_VALIDATION, f"{cfg.input}: {exc}") from exc
    return graph


def _load_matrix(cfg: RunConfig):
    graph = _load(cfg)
    try:
        return graph, build_matrix(graph)
    except GraphValidationError as exc:
        raise _Fail(EXIT_VALIDATION, f"{cfg.input}: {exc}") from exc


def cmd_validate(cfg: RunConfig, out) -> int:
    graph = _load(cfg)
    report = validate(graph)
    if cfg.format == "json":
        out.write(_dumps({"schema": SCHEMA_VALIDATE, **report.to_dict()}))
    elif cfg.format == "tsv":
        out_deg, in_deg = graph.out_degrees(), graph.in_degrees()
        out.write("label\tout_degree\tin_degree\n")
        for i, lab in enumerate(graph.labels):
            out.write(f"{lab}\t{out_deg[i]}\t{in_deg[i]}\n")
    else:
        out.write(f"pages: {report.n_pages}\nedges: {report.n_edges}\n")
        out.write(f"dangling: {', '.join(report.dangling) or 'none'}\n")
        out.write(f"no in-links: {', '.join(report.unreachable) or 'none'}\n")
        out.write(f"matrix-ready: {'yes' if report.matrix_ready else 'no'}\n")
    if not report.matrix_ready:
        return EXIT_VALIDATION
    if cfg.matrix_tsv is not None:
        cfg.matrix_tsv.write_text(matrix_to_tsv(build_matrix(graph)), encoding="utf-8")
    return EXIT_OK


def cmd_rank(cfg: RunConfig, out) -> int:
    _, M = _load_matrix(cfg)
    meta = {"init": cfg.init, "tol": cfg.tol, "max_iters": cfg.max_iters, "exact": cfg.exact}
    if cfg.exact:
        try:
            scores = stationary_vector_exact(M)
        except LinkRankError as exc:
            raise _Fail(EXIT_NONCONVERGENCE, f"exact PageRank unavailable: {exc}") from exc
        table = rank_pages(scores, M.labels, cfg.tie_tol)
        meta["verdict"] = "exact"
    else:
        try:
            result = pagerank_vector(M, cfg.initial_vector(), cfg.tol, cfg.max_iters)
        except NonConvergenceError as exc:
            v = exc.trace.verdict
            if cfg.format == "json":
                out.write(_dumps({"schema": SCHEMA_RANK, **meta,
                                  "verdict": v.kind.value, "step": v.step}))
            raise _Fail(EXIT_NONCONVERGENCE, f"power iteration {v} (init {cfg.init})") from exc
        table = rank_pages(result.scores, M.labels, cfg.tie_tol)
        meta["verdict"] = result.trace.verdict.kind.value
        meta["step"] = result.trace.verdict.step
        meta["fixed_point_residual"] = result.fixed_point_residual

    if cfg.format == "json":
        out.write(_dumps({"schema": SCHEMA_RANK, **meta, **table.to_dict()}))
    elif cfg.format == "tsv":
        out.write(table.to_tsv())
    else:
        out.write("rank\tpage\tscore\n")
        for rank, label, score in table.rows():
            out.write(f"{rank}\t{label}\t{float(score):.4f}\n")
        how = "exact rational solve" if cfg.exact else (
            f"{meta['verdict']} at step {meta['step']} (init {cfg.init}, tol {cfg.tol:g})")
        out.write(f"ranking: {table.ordering()}\n")
        out.write(f"method: {how}\n")
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, out) -> int:
    _, M = _load_matrix(cfg)
    try:
        report = spectrum_report(M, exact=True if cfg.exact else None)
    except ExactModeCapError as exc:
        raise _Fail(EXIT_ESTIMATOR, str(exc)) from exc
    except LinkRankError as exc:
        raise _Fail(EXIT_ESTIMATOR, f"spectral analysis failed: {exc}") from exc

    figures = []
    if cfg.figures is not None:
        from .plotting import plot_spectrum

        path = cfg.figures / f"{cfg.input.stem}_spectrum.png"
        figures.append(str(plot_spectrum(report, path, title=cfg.input.stem)))

    if cfg.format == "json":
        doc = report.to_dict()
        if figures:
            doc["figures"] = figures
        out.write(_dumps(doc))
    elif cfg.format == "tsv":
        out.write(report.to_tsv())
    else:
        out.write(report.to_text())
        for f in figures:
            out.write(f"figure: {f}\n")
    return EXIT_OK


def cmd_diagnose(cfg: RunConfig, out) -> int:
    graph, M = _load_matrix(cfg)
    code = EXIT_OK
    init = cfg.initial_vector()
    trace = power_iterate(M, init, cfg.tol, cfg.max_iters)

    # reference: exact fixed point at desk scale, else a tight uniform run
    reference, ref_source = None, None
    if M.n <= EXACT_MODE_CAP:
        try:
            reference = np.array([float(x) for x in stationary_vector_exact(M)])
            ref_source = "exact"
        except LinkRankError:
            pass
    if reference is None:
        try:
            reference = pagerank_vector(M, InitialVector.uniform(), min(cfg.tol, 1e-12),
                                        cfg.max_iters).scores
            ref_source = "power(uniform)"
        except NonConvergenceError:
            pass

    estimates = {}
    errors = {}
    if M.n <= EXACT_MODE_CAP:
        try:
            rep = spectrum_report(M)
            estimates["roots"] = rep.lambda2.to_dict()
        except LinkRankError as exc:
            errors["roots"] = str(exc)
    try:
        estimates["ratio"] = estimate_lambda2_ratio(trace).to_dict()
    except LinkRankError as exc:
        errors["ratio"] = str(exc)
    if reference is not None:
        try:
            estimates["deflation"] = estimate_lambda2_deflation(M, reference).to_dict()
        except LinkRankError as exc:
            errors["deflation"] = str(exc)
    else:
        errors["deflation"] = "no converged PageRank vector to deflate with"
    # a short or degenerate trace is reported, not fatal; a failed solver is
    if "roots" in errors or (reference is not None and "deflation" in errors):
        code = EXIT_ESTIMATOR

    lam_mag, lam_source = cfg.lambda2, "user"
    if lam_mag is None:
        # |lambda2| = 1 says nothing about an observed decay; prefer a rate below 1
        found = [(key, estimates[key]["magnitude"]) for key in ("roots", "deflation", "ratio")
                 if estimates.get(key, {}).get("magnitude") is not None]
        below = [kv for kv in found if kv[1] < 1 - 1e-9]
        if below or found:
            lam_source, lam_mag = (below or found)[0]
    profile = []
    if reference is not None and lam_mag is not None:
        profile = convergence_profile(trace, reference, lam_mag)

    if cfg.trace_tsv is not None:
        cfg.trace_tsv.write_text(trace.to_tsv(include_iterates=bool(trace.iterates),
                                              labels=list(M.labels)), encoding="utf-8")

    comparison = compare_inits(M, [InitialVector.e1(), InitialVector.uniform()],
                               cfg.tol, cfg.max_iters)

    figures = []
    if cfg.figures is not None:
        from .plotting import plot_convergence

        path = cfg.figures / f"{cfg.input.stem}_convergence.png"
        figures.append(str(plot_convergence(profile, trace.residuals, lam_mag, path,
                                            title=f"{cfg.input.stem}, init {cfg.init}")))

    if cfg.format == "json":
        doc = {
            "schema": SCHEMA_DIAGNOSE,
            "pages": graph.n,
            "edges": len(graph.edges),
            "settings": {"init": cfg.init, "tol": cfg.tol, "max_iters": cfg.max_iters},
            "verdict": trace.verdict.kind.value,
            "step": trace.verdict.step,
            "reference": None if reference is None else {
                "source": ref_source, "vector": [float(x) for x in reference]},
            "lambda2_magnitude": {"value": _num(lam_mag), "source": lam_source},
            "profile": [
                {"n": r.n, "error": _num(r.error), "decay": _num(r.decay), "ratio": _num(r.ratio)}
                for r in profile
            ],
            "residuals": trace.residuals,
            "estimates": estimates,
            "estimate_errors": errors,
            "initial_vectors": [
                {"init": s.init.label, "verdict": s.verdict.kind.value, "steps": s.steps}
                for s in comparison
            ],
        }
        if figures:
            doc["figures"] = figures
        out.write(_dumps(doc))
    elif cfg.format == "tsv":
        out.write("n\terror\tdecay\tratio\n")
        for r in profile:
            out.write(f"{r.n}\t{r.error!r}\t{r.decay!r}\t{r.ratio!r}\n")
    else:
        out.write(f"graph: {graph.n} pages, {len(graph.edges)} edges\n")
        out.write(f"run: init {cfg.init}, tol {cfg.tol:g}, max_iters {cfg.max_iters} -> "
                  f"{trace.verdict}\n")
        if profile:
            out.write(f"|lambda2| for decay column: {lam_mag:.4f} ({lam_source})\n")
            out.write("n\terror\t|lambda2|^n\terror/|lambda2|^n\n")
            for r in profile:
                out.write(f"{r.n}\t{r.error:.4e}\t{r.decay:.4f}\t{r.ratio:.4f}\n")
        else:
            out.write("convergence profile unavailable (no reference vector)\n")
        out.write("lambda2 estimates:\n")
        for key in ("roots", "deflation", "ratio"):
            if key in estimates:
                est = estimates[key]
                val = est["value"]
                if val is None:
                    shown = "n/a"
                elif isinstance(val, list):
                    shown = _fmt_complex(complex(*val))
                else:
                    shown = f"{val:.4f}"
                flag = f" [{est['flag']}]" if est["flag"] else ""
                out.write(f"  {key}\t{shown}{flag}\n")
            elif key in errors:
                out.write(f"  {key}\tfailed: {errors[key]}\n")
        out.write("initial vectors:\n")
        for s in comparison:
            out.write(f"  {s.init.label}\t{s.verdict}\n")
        for f in figures:
            out.write(f"figure: {f}\n")
    return code


def _fmt_complex(z: complex) -> str:
    from .spectral_tools import format_complex

    return format_complex(z)


COMMANDS = {
    "rank": cmd_rank,
    "spectrum": cmd_spectrum,
    "diagnose": cmd_diagnose,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linkrank",
        description="PageRank and spectral diagnostics for link graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", type=Path, help="edge-list file")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="L1 convergence tolerance")
    common.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    common.add_argument("--init", default="uniform",
                        help="initial vector: e1, uniform, or file:PATH")
    common.add_argument("--format", choices=("text", "json", "tsv"), default="text")
    common.add_argument("--exact", action="store_true",
                        help="exact rational scores (rank) or force the exact polynomial (spectrum)")
    common.add_argument("--tie-tol", type=float, default=DEFAULT_TIE_TOL)
    common.add_argument("--figures", type=Path, default=None, metavar="DIR",
                        help="also write PNG figures into DIR")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rank", parents=[common], help="PageRank scores and page ordering")
    sub.add_parser("spectrum", parents=[common], help="Gerschgorin discs, eigenvalues, verdict")
    p = sub.add_parser("diagnose", parents=[common], help="convergence profile and lambda2 estimates")
    p.add_argument("--lambda2", type=float, default=None,
                   help="|lambda2| for the decay column (default: best available estimate)")
    p.add_argument("--trace-tsv", type=Path, default=None, metavar="PATH",
                   help="write n, residual and the retained iterates as TSV")
    p = sub.add_parser("validate", parents=[common], help="dangling/unreachable page report")
    p.add_argument("--matrix-tsv", type=Path, default=None, metavar="PATH",
                   help="write the exact matrix dump when the graph is matrix-ready")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    if cfg.init not in ("e1", "uniform") and not cfg.init.startswith("file:"):
        err.write(f"linkrank: error: --init must be e1, uniform or file:PATH, not {cfg.init!r}\n")
        return 2
    try:
        return COMMANDS[cfg.command](cfg, out)
    except _Fail as exc:
        err.write(f"linkrank {cfg.command}: {exc}\n")
        return exc.code
    except EstimatorError as exc:
        err.write(f"linkrank {cfg.command}: {exc}\n")
        return EXIT_ESTIMATOR
    except (OSError, ValueError, LinkRankError) as exc:
        err.write(f"linkrank {cfg.command}: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
