"""Command-line frontend.

Exit codes: 0 success (including an empty search), 1 usage error,
2 computation error.  Human-readable notes go to stderr; machine output
(JSON, CSV, plain decimals) goes to stdout or the requested files.  CSV
report paths also get a rendered convergence figure alongside, unless
--no-figure is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cf import (
    CFError,
    GeneralizedCF,
    convergence_rows,
    convergent_stream,
    digits_per_term,
    evaluate_cf,
)
from .constants import (
    DEFAULT_MAX_DIGITS,
    ConstantError,
    ConstantSpec,
    catalog_description,
    evaluate_constant,
    list_catalog,
)
from .extraction import extract_signed_cf
from .recurrence import find_recurrence, interlace_decompose, is_significant
from .reference import ORDERING_PAIRS, reference_rows
from .search import (
    SearchError,
    SearchSpace,
    conjectures_from_json,
    conjectures_to_json,
    run_search,
    verify_conjecture,
)
from .sicf import (
    SICFError,
    SignPattern,
    form_from_json,
    form_to_json,
    mobius_to_json,
    to_general_cf,
)
from .transform import (
    TransformError,
    classify_convergence,
    fold,
    predict_degrees,
    sicf_to_simple,
)

USAGE_EXIT = 1
COMPUTE_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse default exits 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(USAGE_EXIT)


def _max_digits() -> int:
    return int(os.environ.get("CFCONJ_MAX_DIGITS", DEFAULT_MAX_DIGITS))


def _note(msg: str) -> None:
    sys.stderr.write(msg.rstrip() + "\n")


def _load_form(text: str):
    if text.lstrip().startswith("{"):
        return form_from_json(text)
    return form_from_json(Path(text).read_text())


def _parse_signs(text: str) -> SignPattern:
    parts = [p for p in text.replace(",", " ").split() if p]
    return SignPattern(tuple(int(p) for p in parts))


def _parse_window(text: str) -> tuple[int, int]:
    n0, n1 = (int(p) for p in text.split(","))
    return (n0, n1)


# ---------------------------------------------------------------------------
# plotting (report paths render a figure next to the delimited output)
# ---------------------------------------------------------------------------


def _render_figure(series: dict[str, list[tuple[int, float]]], path: Path, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, rows in series.items():
        ax.plot([r[0] for r in rows], [r[1] for r in rows], label=label, linewidth=1.2)
    ax.set_xlabel("depth")
    ax.set_ylabel("log10(error)")
    ax.set_title(title)
    if len(series) > 1:
        ax.legend(fontsize=7)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _write_rows_csv(rows: list[tuple[int, float]], path: Path) -> None:
    with open(path, "w") as fh:
        fh.write("depth,log10_error\n")
        for depth, log_err in rows:
            fh.write(f"{depth},{log_err:.6f}\n")


def emit_convergence_csv(records, out_dir: Path, depth: int = 100, figures: bool = True) -> list[Path]:
    """One (depth, log10 error) CSV per conjecture record, with a rendered
    figure alongside.  Records whose error series cannot be produced (poles,
    divergence, unresolvable precision) are reported on stderr and skipped;
    no file is written for them."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for idx, conj in enumerate(records):
        label = f"{idx:03d}_{conj.constant.label}".replace("/", "-").replace(" ", "_")
        try:
            constant = evaluate_constant(
                conj.constant, conj.search_params.verify_digits + 100, max_digits=_max_digits()
            )
            lo, hi = conj.rational_function.value_interval(constant)
            target = (lo + hi) / 2
            rows = convergence_rows(conj.cf_stream(depth + 40), target, depth)
        except (CFError, ConstantError, ZeroDivisionError) as exc:
            _note(f"no report for record {idx} ({conj.rational_function}): {exc}")
            continue
        path = out_dir / f"{label}.csv"
        _write_rows_csv(rows, path)
        if figures:
            _render_figure({str(conj.rational_function): rows}, path.with_suffix(".png"),
                           f"{conj.rational_function} of {conj.constant.label}")
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_constants(args) -> int:
    if args.action == "list":
        for spec in list_catalog():
            print(f"{spec.name}\t{catalog_description(spec.name)}")
        return 0
    spec = ConstantSpec.parse(args.name)
    value = evaluate_constant(spec, args.digits, max_digits=_max_digits())
    print(value.decimal())
    return 0


def _cmd_extract(args) -> int:
    spec = ConstantSpec.parse(args.constant)
    pattern = _parse_signs(args.signs)
    exact = spec.exact_value()
    if exact is not None:
        sample = extract_signed_cf(exact, pattern, args.depth)
    else:
        digits = args.digits or max(4 * args.depth, 200)
        constant = evaluate_constant(spec, digits, max_digits=_max_digits())
        sample = extract_signed_cf(constant, pattern, args.depth)
    for term in sample.terms:
        print(term)
    if sample.terminated:
        _note("terminated: the input is rational and reconstructs exactly")
    if sample.precision_exhausted_at is not None:
        _note(f"precision exhausted at depth {sample.precision_exhausted_at}; "
              f"{len(sample.terms)} terms are certified")
    return 0


def _cmd_bm(args) -> int:
    text = Path(args.sample).read_text() if args.sample != "-" else sys.stdin.read()
    sample = [int(tok) for tok in text.split()]
    rec = find_recurrence(sample, primes=(args.prime, 10**9 + 7, 10**18 + 9))
    out = {
        "L": rec.L,
        "connection": list(rec.connection),
        "initial": list(rec.initial),
        "prime": rec.prime,
        "lifted": rec.lifted,
        "significant": is_significant(rec.L, len(sample)),
    }
    if rec.lifted and is_significant(rec.L, len(sample)):
        closed = interlace_decompose(rec, sample)
        out["closed_form"] = form_to_json(closed) if closed else None
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _cmd_search(args) -> int:
    spec = ConstantSpec.parse(args.constant)
    space = SearchSpace(
        max_degree=args.max_degree,
        coeff_bound=args.coeff_range,
        max_sign_period=args.max_sign_period,
        depth=args.depth,
        verify_digits=args.verify_digits,
        prime=args.prime,
    )
    _note(f"search space complexity estimate: {space.complexity_estimate():.3e}"
          .replace("e+0", "e").replace("e+", "e"))
    done_note = (lambda i, n: _note(f"  {i}/{n} candidates")) if args.progress else None
    records = run_search(
        spec,
        space,
        jobs=args.jobs,
        raw_patterns=args.raw_sign_patterns,
        dedupe=not args.no_dedupe,
        progress=done_note,
    )
    payload = conjectures_to_json(records)
    if args.out:
        Path(args.out).write_text(payload)
        _note(f"{len(records)} conjectures -> {args.out}")
    else:
        sys.stdout.write(payload)
        _note(f"{len(records)} conjectures")
    if args.report_dir and records:
        written = emit_convergence_csv(records, Path(args.report_dir), figures=not args.no_figure)
        _note(f"{len(written)} convergence reports -> {args.report_dir}")
    return 0


def _cmd_verify(args) -> int:
    records = conjectures_from_json(Path(args.records).read_text())
    failures = 0
    for conj in records:
        result = verify_conjecture(conj, args.digits)
        if result.verified:
            print(f"verified\t{conj.rational_function}\t{conj.sign_pattern}\t"
                  f"{result.digits} digits at depth {result.depth_used}")
        else:
            failures += 1
            where = f"digit {result.mismatch_at}" if result.mismatch_at else result.detail
            print(f"mismatch\t{conj.rational_function}\t{conj.sign_pattern}\t{where}")
    _note(f"{len(records) - failures}/{len(records)} records verified")
    return 0


def _cmd_fold(args) -> int:
    form = _load_form(args.form)
    result = fold(form)
    print(json.dumps({
        "mobius": mobius_to_json(result.mobius),
        "b": list(result.b_poly.coeffs),
        "a": list(result.a_poly.coeffs),
        "start_index": result.start_index,
    }, indent=2, sort_keys=True))
    return 0


def _cmd_simplify(args) -> int:
    form = _load_form(args.form)
    result = sicf_to_simple(form, budget=args.budget)
    out = {"kind": result.kind, "trace": list(result.trace), "detail": result.detail}
    if result.mobius is not None:
        out["mobius"] = mobius_to_json(result.mobius)
    if result.form is not None:
        out["form"] = form_to_json(result.form)
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _cmd_predict_degrees(args) -> int:
    form = _load_form(args.form)
    pred = predict_degrees(form)
    print(json.dumps({
        "deg_b": pred.deg_b,
        "deg_a": pred.deg_a,
        "profile": list(pred.profile),
    }, indent=2, sort_keys=True))
    return 0


def _cmd_classify(args) -> int:
    form = _load_form(args.form)
    print(json.dumps({"verdict": classify_convergence(form)}, indent=2))
    return 0


def _self_limit(cf: GeneralizedCF, beyond: int, digits_hint: int = 60) -> Fraction:
    """Approximate the CF limit far beyond the measurement window."""
    target_gap = Fraction(1, 10 ** (digits_hint + 25))
    prev = None
    best = None
    for conv in convergent_stream(cf):
        if prev is not None and prev.q != 0 and conv.q != 0:
            best = conv
            if conv.depth >= beyond and Fraction(1, abs(prev.q * conv.q)) < target_gap:
                return conv.value()
        if conv.depth > beyond + 4000:
            break
        prev = conv
    if best is None:
        raise CFError("cannot estimate the CF limit")
    return best.value()


def _cmd_rate(args) -> int:
    form = _load_form(args.form)
    cf = to_general_cf(form)
    window = _parse_window(args.window)
    target = None
    if args.target:
        spec = ConstantSpec.parse(args.target)
        digits = max(1200, 14 * window[1])
        constant = evaluate_constant(spec, digits, max_digits=_max_digits())
        lo, hi = constant.interval()
        probe = _self_limit(cf, window[1] * 3, digits_hint=40)
        if lo <= probe <= hi or abs(probe - lo) < Fraction(1, 10**6):
            target = constant.as_fraction()
        else:
            _note(f"note: {args.target} is not the CF limit; measuring against "
                  f"the CF's own limit instead")
    if target is None:
        rough = digits_per_term(cf, _self_limit(cf, window[1] * 3, digits_hint=80), window)
        need = int(rough * window[1]) + 60
        target = _self_limit(cf, window[1] * 3, digits_hint=need)
    rate = digits_per_term(cf, target, window)
    print(f"{rate:.4f}")
    if args.emit_csv:
        rows = convergence_rows(cf, target, window[1])
        path = Path(args.emit_csv)
        _write_rows_csv(rows, path)
        _note(f"wrote {path}")
        if not args.no_figure:
            fig_path = path.with_suffix(".png")
            _render_figure({"cf": rows}, fig_path, "approximation error vs depth")
            _note(f"wrote {fig_path}")
    return 0


def _cmd_cf_eval(args) -> int:
    form = _load_form(args.form)
    cf = to_general_cf(form)
    value = evaluate_cf(cf, args.depth, args.digits)
    print(value.decimal())
    return 0


def _cmd_fixtures(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    digits = 1400
    series: dict[str, list[tuple[int, float]]] = {}
    lines = ["name,formula,reference_rate,measured_rate"]
    measured: dict[str, float] = {}
    for row in reference_rows():
        cf = row.cf(digits)
        target = row.target(digits)
        rate = digits_per_term(cf, target, (0, 100))
        measured[row.name] = rate
        lines.append(f"{row.name},{row.formula},{row.reference_rate},{rate:.4f}")
        series[row.name] = convergence_rows(cf, target, 100)
    (out_dir / "rates.csv").write_text("\n".join(lines) + "\n")
    _note(f"wrote {out_dir / 'rates.csv'}")
    for slow, fast in ORDERING_PAIRS:
        status = "ok" if measured[slow] < measured[fast] else "VIOLATED"
        _note(f"ordering {slow} < {fast}: {status}")
    if not args.no_figure:
        _render_figure(series, out_dir / "convergence.png", "reference expansions: error vs depth")
        _note(f"wrote {out_dir / 'convergence.png'}")
    with open(out_dir / "convergence.csv", "w") as fh:
        fh.write("name,depth,log10_error\n")
        for name, rows in series.items():
            for depth, log_err in rows:
                fh.write(f"{name},{depth},{log_err:.6f}\n")
    _note(f"wrote {out_dir / 'convergence.csv'}")
    return 0


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="cfconj", description="continued-fraction conjecture toolkit")
    parser.add_argument("--version", action="version", version=f"cfconj {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="catalog of target constants")
    psub = p.add_subparsers(dest="action", required=True)
    psub.add_parser("list", help="list catalog entries")
    pe = psub.add_parser("eval", help="evaluate a constant")
    pe.add_argument("--name", required=True)
    pe.add_argument("--digits", type=int, required=True)
    p.set_defaults(fn=_cmd_constants)

    p = sub.add_parser("extract", help="signed CF extraction")
    p.add_argument("--constant", required=True)
    p.add_argument("--signs", required=True, help="comma-separated +-1 pattern")
    p.add_argument("--depth", type=int, default=50)
    p.add_argument("--digits", type=int, default=0, help="constant digits (default 4*depth)")
    p.set_defaults(fn=_cmd_extract)

    p = sub.add_parser("bm", help="minimal linear recurrence of an integer sample")
    p.add_argument("--sample", required=True, help="file of integers, '-' for stdin")
    p.add_argument("--prime", type=int, default=199)
    p.set_defaults(fn=_cmd_bm)

    p = sub.add_parser("search", help="conjecture search on a constant")
    p.add_argument("--constant", required=True)
    p.add_argument("--max-degree", type=int, default=1)
    p.add_argument("--coeff-range", type=int, default=3)
    p.add_argument("--max-sign-period", type=int, default=5)
    p.add_argument("--depth", type=int, default=50)
    p.add_argument("--verify-digits", type=int, default=1000)
    p.add_argument("--prime", type=int, default=199)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--raw-sign-patterns", action="store_true",
                   help="enumerate all raw patterns (no expansion dedupe)")
    p.add_argument("--report-dir", default=None,
                   help="write per-conjecture convergence CSVs and figures here")
    p.add_argument("--no-figure", action="store_true")
    p.add_argument("--no-dedupe", action="store_true",
                   help="keep every verified candidate (no tail-class dedupe)")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("verify", help="re-verify stored conjecture records")
    p.add_argument("--records", required=True)
    p.add_argument("--digits", type=int, default=None)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("fold", help="fold a closed form into a polynomial CF")
    p.add_argument("--form", required=True, help="closed-form JSON (inline or path)")
    p.set_defaults(fn=_cmd_fold)

    p = sub.add_parser("simplify", help="rewrite a signed form to all-plus-one numerators")
    p.add_argument("--form", required=True)
    p.add_argument("--budget", type=int, default=64)
    p.set_defaults(fn=_cmd_simplify)

    p = sub.add_parser("predict-degrees", help="degree prediction for the folded CF")
    p.add_argument("--form", required=True)
    p.set_defaults(fn=_cmd_predict_degrees)

    p = sub.add_parser("classify", help="convergence classification")
    p.add_argument("--form", required=True)
    p.set_defaults(fn=_cmd_classify)

    for name in ("rate",):
        p = sub.add_parser(name, help="digits-per-term of a closed form")
        p.add_argument("--form", required=True)
        p.add_argument("--target", default=None, help="constant spec the CF converges to")
        p.add_argument("--window", default="0,100")
        p.add_argument("--emit-csv", default=None)
        p.add_argument("--no-figure", action="store_true")
        p.set_defaults(fn=_cmd_rate)

    p = sub.add_parser("cf", help="continued-fraction evaluation helpers")
    csub = p.add_subparsers(dest="cf_action", required=True)
    pe = csub.add_parser("eval", help="evaluate a closed form at a depth")
    pe.add_argument("--form", required=True)
    pe.add_argument("--depth", type=int, required=True)
    pe.add_argument("--digits", type=int, required=True)
    pe.set_defaults(fn=_cmd_cf_eval)
    pr = csub.add_parser("rate", help="digits-per-term (alias of top-level rate)")
    pr.add_argument("--form", required=True)
    pr.add_argument("--target", default=None)
    pr.add_argument("--window", default="0,100")
    pr.add_argument("--emit-csv", default=None)
    pr.add_argument("--no-figure", action="store_true")
    pr.set_defaults(fn=_cmd_rate)

    p = sub.add_parser("fixtures", help="regenerate the reference regression table")
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(fn=_cmd_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConstantError, CFError, SICFError, TransformError, SearchError, ValueError, OSError) as exc:
        _note(f"error: {exc}")
        return COMPUTE_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
