"""Command-line front end.

Input files are UTF-8 JSON objects {"n": int, "A": [[...], ...]} with an
optional Hermitian "X" whose entries are either plain reals or [re, im]
pairs.  Reports are emitted as JSON with fixed field names or as a
plain-text table; identical invocations (same file, flags and seed)
produce byte-identical output.

Exit codes: 0 analysis completed (whatever the verdict), 1 unreadable or
invalid input, 2 internal inconsistency (two criteria contradicted each
other, which indicates a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .criteria import (
    ConditionReport,
    InternalInconsistencyError,
    Verdict,
    boundary_proposition,
    full_report,
)
from .linalg import outer_product, require_hermitian
from .maps import (
    CoefficientMatrix,
    KyeParams,
    kye_matrix,
    validate_coefficients,
)
from .search import (
    PptWitnessCertificate,
    SearchConfig,
    ViolationCertificate,
    find_positivity_violation,
    indecomposability_probe,
    verify_counterexample,
)


@dataclass(frozen=True)
class AnalysisRequest:
    matrix_path: str
    tolerance: float = 1e-9
    seed: int = 42
    starts: int = 64
    output_format: str = "text"

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.starts < 1:
            raise ValueError("starts must be at least 1")
        if self.output_format not in ("text", "json"):
            raise ValueError("format must be 'text' or 'json'")

    def search_config(self) -> SearchConfig:
        return SearchConfig(
            seed=self.seed, starts=self.starts, violation_tolerance=self.tolerance
        )


def _reject_non_finite(token: str):
    raise ValueError(f"non-finite value {token!r} in input")


def _entry_to_complex(entry) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, list) and len(entry) == 2:
        return complex(float(entry[0]), float(entry[1]))
    raise ValueError(f"matrix entry must be a real or an [re, im] pair, got {entry!r}")


def read_matrix_file(path: str) -> tuple[CoefficientMatrix, np.ndarray | None]:
    """Parse and validate an input file; returns (A, optional Hermitian X)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh, parse_constant=_reject_non_finite)
    if not isinstance(data, dict) or "A" not in data:
        raise ValueError("input must be a JSON object with an 'A' field")
    a = validate_coefficients(data["A"])
    if "n" in data and int(data["n"]) != a.n:
        raise ValueError(f"declared n = {data['n']} does not match matrix side {a.n}")
    x = None
    if "X" in data:
        rows = data["X"]
        x = require_hermitian([[_entry_to_complex(e) for e in row] for row in rows])
        if x.shape[0] != a.n:
            raise ValueError("X must have the same dimension as A")
    return a, x


def _verdict_entry(name: str, v: Verdict) -> dict:
    return {"name": name, "status": v.status, "margin": v.margin, "detail": v.detail}


def _conditions_list(report: ConditionReport) -> list[dict]:
    out = [
        _verdict_entry("cp", report.cp),
        _verdict_entry("ckl_positive", report.ckl_positive),
        _verdict_entry("ckl_indecomposable", report.ckl_indecomposable),
        _verdict_entry("kye", report.kye),
        _verdict_entry("average_necessary", report.average_necessary),
    ]
    for (i, j), v in report.pairwise_necessary:
        out.append(_verdict_entry(f"pairwise_necessary_{i}_{j}", v))
    for (i, j), v in report.pairwise_sufficient:
        out.append(_verdict_entry(f"pairwise_sufficient_{i}_{j}", v))
    out.extend(
        [
            _verdict_entry("c3_mean", report.c3_mean),
            _verdict_entry("cyclic_necessary", report.cyclic_necessary),
            _verdict_entry("b_only_necessary", report.b_only_necessary),
            _verdict_entry("scaling_sufficient", report.scaling_sufficient),
            _verdict_entry("boundary_proposition", report.boundary_proposition),
        ]
    )
    return out


def _violation_dict(cert: ViolationCertificate) -> dict:
    return {
        "p": [float(v) for v in cert.p],
        "q": [float(v) for v in cert.q],
        "gap": cert.gap,
        "residual_check": cert.residual_check,
    }


def _witness_dict(cert: PptWitnessCertificate) -> dict:
    return {
        "alpha": [[float(v) for v in row] for row in cert.state.alpha],
        "r": [[float(v) for v in row] for row in cert.state.r],
        "trace_value": cert.trace_value,
        "normalized_value": cert.normalized_value,
    }


def build_document(
    A: CoefficientMatrix,
    report: ConditionReport | None,
    violation: ViolationCertificate | None,
    witness: PptWitnessCertificate | None,
    config: dict,
    summary: tuple[str, ...],
    extra: dict | None = None,
) -> dict:
    doc: dict = {
        "input": {"n": A.n, "A": [[float(v) for v in row] for row in A.a]},
        "form": report.form.tag if report else None,
        "form_parameters": dict(report.form.parameters) if report else None,
        "conditions": _conditions_list(report) if report else [],
        "summary": list(summary),
    }
    if extra:
        doc.update(extra)
    if violation is not None:
        doc["violation_certificate"] = _violation_dict(violation)
    if witness is not None:
        doc["ppt_witness"] = _witness_dict(witness)
    doc["config"] = config
    doc["version"] = __version__
    return doc


def render_text(doc: dict) -> str:
    lines = [f"choilike {doc['version']}"]
    lines.append(f"input: n = {doc['input']['n']}, A = {doc['input']['A']}")
    if doc.get("form") is not None:
        lines.append(f"form: {doc['form']}  parameters: {doc['form_parameters']}")
    if doc.get("headline"):
        lines.append(doc["headline"])
    if doc["conditions"]:
        lines.append(f"{'condition':34s} {'status':15s} {'margin':>22s}  detail")
        for cond in doc["conditions"]:
            margin = "-" if cond["margin"] is None else f"{cond['margin']:+.12g}"
            lines.append(
                f"{cond['name']:34s} {cond['status']:15s} {margin:>22s}  {cond['detail']}"
            )
    if "counterexample_check" in doc:
        chk = doc["counterexample_check"]
        lines.append(
            "input X: psd = %s; image determinant = %s; image psd = %s"
            % (chk["input_psd"], f"{chk['det']:.12g}", chk["image_psd"])
        )
    if "violation_certificate" in doc:
        cert = doc["violation_certificate"]
        lines.append(
            "violation certificate: gap = %.12g, residual check = %.12g"
            % (cert["gap"], cert["residual_check"])
        )
        lines.append(f"  p = {cert['p']}")
        lines.append(f"  q = {cert['q']}")
    if "ppt_witness" in doc:
        w = doc["ppt_witness"]
        lines.append(
            "ppt witness: trace value = %.12g, normalized = %.12g"
            % (w["trace_value"], w["normalized_value"])
        )
        lines.append(f"  alpha = {w['alpha']}")
        lines.append(f"  r = {w['r']}")
    lines.append(f"summary: {', '.join(doc['summary'])}")
    lines.append(f"config: {doc['config']}")
    return "\n".join(lines) + "\n"


def emit(doc: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, indent=2, allow_nan=False) + "\n")
    else:
        sys.stdout.write(render_text(doc))


def _analysis_summary(
    report: ConditionReport,
    violation: ViolationCertificate | None,
) -> tuple[str, ...]:
    flags = list(report.summary)
    if violation is not None:
        if "positive_proven" in flags or "cp_proven" in flags:
            raise InternalInconsistencyError(
                "positivity was proven analytically but a violation certificate was found"
            )
        flags = ["not_positive_proven"]
    return tuple(flags)


def run_analysis(
    A: CoefficientMatrix,
    request: AnalysisRequest,
    x: np.ndarray | None = None,
) -> dict:
    """Full criteria report plus certificate searches."""
    report = full_report(A, band=request.tolerance)
    cfg = request.search_config()
    violation = find_positivity_violation(A, cfg)
    summary = _analysis_summary(report, violation)
    witness = None
    if "not_positive_proven" not in summary:
        witness = indecomposability_probe(A, cfg)
        if witness is not None:
            if "decomposable_proven" in summary:
                raise InternalInconsistencyError(
                    "decomposability was proven analytically but a witness was found"
                )
            # "inconclusive" refers to positivity and may stay alongside
            if "indecomposable_proven" not in summary:
                summary = summary + ("indecomposable_proven",)
    extra = None
    if x is not None:
        chk = verify_counterexample(A, x)
        extra = {
            "counterexample_check": {
                "input_psd": chk.input_psd,
                "det": chk.det,
                "image_psd": chk.psd,
            }
        }
    config = {
        "tolerance": request.tolerance,
        "seed": request.seed,
        "starts": request.starts,
        "format": request.output_format,
    }
    return build_document(A, report, violation, witness, config, summary, extra)


def cmd_analyze(request: AnalysisRequest) -> dict:
    A, x = read_matrix_file(request.matrix_path)
    return run_analysis(A, request, x)


def cmd_search(request: AnalysisRequest) -> dict:
    A, _ = read_matrix_file(request.matrix_path)
    cfg = request.search_config()
    violation = find_positivity_violation(A, cfg)
    summary = ("not_positive_proven",) if violation else ("inconclusive",)
    config = {
        "tolerance": request.tolerance,
        "seed": request.seed,
        "starts": request.starts,
        "format": request.output_format,
    }
    return build_document(A, None, violation, None, config, summary)


def cmd_probe(request: AnalysisRequest) -> dict:
    A, _ = read_matrix_file(request.matrix_path)
    cfg = request.search_config()
    witness = indecomposability_probe(A, cfg)
    summary = ("indecomposable_proven",) if witness else ("inconclusive",)
    config = {
        "tolerance": request.tolerance,
        "seed": request.seed,
        "starts": request.starts,
        "format": request.output_format,
    }
    return build_document(A, None, None, witness, config, summary)


def counterexample_instance() -> tuple[CoefficientMatrix, np.ndarray]:
    """The half/one/two counterexample with its rank-one input."""
    A = validate_coefficients([[0.5, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 2.0]])
    zeta = np.array([2.0 ** (1.0 / 3.0), 2.0 ** (-1.0 / 6.0), 2.0 ** (-1.0 / 6.0)])
    return A, outer_product(zeta)


def cmd_reproduce(name: str, request: AnalysisRequest, a_params: list[float] | None) -> dict:
    if name == "choi":
        A = validate_coefficients([[1, 0, 1], [1, 1, 0], [0, 1, 1]])
        doc = run_analysis(A, request)
        w = doc.get("ppt_witness")
        doc["headline"] = (
            "indecomposability witness normalized value = %.9f" % w["normalized_value"]
            if w
            else "no witness found"
        )
    elif name == "example5":
        A, x = counterexample_instance()
        doc = run_analysis(A, request, x)
        chk = doc["counterexample_check"]
        doc["headline"] = (
            "det(image of the rank-one input) = %.9f (input psd: %s, image psd: %s)"
            % (chk["det"], chk["input_psd"], chk["image_psd"])
        )
    elif name == "boundary":
        a1, a2, a3 = a_params if a_params else (0.5, 1.0, 2.0)
        if min(a1, a2, a3) <= 0:
            raise ValueError("boundary diagonals must be strictly positive")
        a_star = (a1 * a2 * a3) ** (1.0 / 3.0)
        b = 2.0 - a_star
        if b < 0:
            raise ValueError(f"a* = {a_star} exceeds 2; no boundary instance")
        A = validate_coefficients([[a1, b, 0.0], [0.0, a2, b], [b, 0.0, a3]])
        doc = run_analysis(A, request)
        v = boundary_proposition(A)
        doc["headline"] = f"boundary determinant check: {v.detail}"
    elif name == "kye-boundary":
        a = a_params[0] if a_params else 1.0
        if not 0 <= a <= 2:
            raise ValueError("kye boundary needs 0 <= a <= 2")
        c = 2.0 - a
        A = kye_matrix(KyeParams(a, c, c, c))
        doc = run_analysis(A, request)
        w = doc.get("ppt_witness")
        doc["headline"] = (
            "indecomposability witness normalized value = %.9f" % w["normalized_value"]
            if w
            else "no witness found"
        )
    else:
        raise ValueError(f"unknown reproduction name {name!r}")
    return doc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choilike",
        description="Positivity and decomposability analysis of Choi-like maps",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_input=True):
        if with_input:
            p.add_argument("-i", "--input", required=True, help="JSON matrix file")
        p.add_argument("--tol", type=float, default=1e-9, help="margin band / violation tolerance")
        p.add_argument("--seed", type=int, default=42, help="search seed")
        p.add_argument("--starts", type=int, default=64, help="number of search starts")
        p.add_argument("--format", choices=("text", "json"), default="text")

    add_common(sub.add_parser("analyze", help="full criteria report plus certificate searches"))
    add_common(sub.add_parser("search", help="positivity-violation search only"))
    add_common(sub.add_parser("probe", help="indecomposability witness search only"))
    rep = sub.add_parser("reproduce", help="rebuild a named instance and its headline check")
    rep.add_argument("name", choices=("choi", "example5", "boundary", "kye-boundary"))
    rep.add_argument("--a", type=float, nargs="+", default=None, help="diagonal parameters")
    add_common(rep, with_input=False)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "reproduce":
            request = AnalysisRequest(
                matrix_path="",
                tolerance=args.tol,
                seed=args.seed,
                starts=args.starts,
                output_format=args.format,
            )
            if args.name == "boundary" and args.a is not None and len(args.a) != 3:
                raise ValueError("boundary takes three diagonal values via --a")
            doc = cmd_reproduce(args.name, request, args.a)
        else:
            request = AnalysisRequest(
                matrix_path=args.input,
                tolerance=args.tol,
                seed=args.seed,
                starts=args.starts,
                output_format=args.format,
            )
            runner = {"analyze": cmd_analyze, "search": cmd_search, "probe": cmd_probe}
            doc = runner[args.command](request)
    except InternalInconsistencyError as exc:
        sys.stderr.write(f"internal inconsistency: {exc}\n")
        return 2
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    emit(doc, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
