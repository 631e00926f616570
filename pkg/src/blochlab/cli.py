"""Declarative front end: parse a JSON run configuration, execute the
scheduled classification tasks and oracle probes, and emit a
machine-readable report (JSON) plus flat CSV tables for plotting.

Commands::

    blochlab run <config.json> [--out DIR] [--format json,csv] [--strict] [--grid K,M,ORDER]
    blochlab validate <config.json>
    blochlab battery [--out DIR] [--grid K,M,ORDER] [--strict]

Exit status is 0 on completion even when verdicts are Fails; nonzero on
errors, and 3 when ``--strict`` is set and the classifier disagrees with
the oracle trend.  ``BLOCHLAB_OUT`` overrides the default output
directory.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .battery import CURATED
from .criteria import (
    PreconditionUnmetError,
    SymbolPair,
    classify_bounded_into_bloch,
    classify_bounded_into_little_bloch,
    classify_compact_into_bloch,
    classify_compact_into_little_bloch,
    composition_limit_probe,
    derivative_limit_probe,
)
from .disk_functions import (
    Affine,
    BlaschkeFactor,
    ComposedWithSelfMap,
    CompositionMap,
    DiskFunction,
    FiniteBlaschkeProduct,
    FractionalKernel,
    MonomialPower,
    PowerSeries,
    Product,
    Scaled,
    ScaledMap,
    SelfMap,
    Sum,
    identity_map,
    validate_self_map,
)
from .norms import RadialGrid
from .oracle import compactness_probe, lower_bound_trend
from .weights import NormalWeight, SpaceSpec, check_normality

__all__ = [
    "ParseError",
    "ValidationError",
    "RunConfig",
    "Report",
    "parse_config",
    "run",
    "emit",
    "main",
]

KNOWN_TASKS = (
    "bounded_bloch",
    "compact_bloch",
    "bounded_little_bloch",
    "compact_little_bloch",
    "lemma_probes",
    "oracle",
)
_PREREQUISITE = {
    "compact_bloch": "bounded_bloch",
    "bounded_little_bloch": "bounded_bloch",
}
ENV_OUT = "BLOCHLAB_OUT"


class ParseError(ValueError):
    """The configuration document is not well-formed."""


class ValidationError(ValueError):
    """The configuration violates a structural invariant."""


# ---------------------------------------------------------------------------
# config parsing


def _complex_from(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    raise ValidationError(f"{where}: expected a number, [re, im] pair, or re/im object")


def _complex_to(value: complex):
    value = complex(value)
    if value.imag == 0.0:
        return value.real
    return [value.real, value.imag]


def _single_key(spec: dict, where: str) -> str:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ValidationError(f"{where}: expected an object with exactly one variant key")
    return next(iter(spec))


def build_function(spec, where: str = "u") -> DiskFunction:
    """Build a disk function from its config form."""
    if isinstance(spec, (int, float)):
        return PowerSeries([complex(spec)])
    key = _single_key(spec, where)
    body = spec[key]
    try:
        if key == "constant":
            return PowerSeries([_complex_from(body, where)])
        if key == "power_series":
            return PowerSeries([_complex_from(c, f"{where}.power_series") for c in body])
        if key == "log_series":
            from .disk_functions import truncated_log_series

            return truncated_log_series(int(body))
        if key == "fractional_kernel":
            return FractionalKernel(
                _complex_from(body["base"], f"{where}.base"),
                float(body["exponent"]),
                _complex_from(body.get("scale", 1.0), f"{where}.scale"),
            )
        if key == "sum":
            return Sum(tuple(build_function(s, f"{where}.sum[{i}]") for i, s in enumerate(body)))
        if key == "product":
            if len(body) != 2:
                raise ValidationError(f"{where}.product: expected exactly two factors")
            return Product(
                build_function(body[0], f"{where}.product[0]"),
                build_function(body[1], f"{where}.product[1]"),
            )
        if key == "scaled":
            return Scaled(
                _complex_from(body["factor"], f"{where}.factor"),
                build_function(body["inner"], f"{where}.inner"),
            )
        if key == "composed":
            return ComposedWithSelfMap(
                build_function(body["outer"], f"{where}.outer"),
                build_self_map(body["inner"], f"{where}.inner"),
            )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{where}.{key}: malformed body ({exc})") from exc
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"{where}.{key}: {exc}") from exc
    raise ValidationError(f"{where}: unknown function variant {key!r}")


def build_self_map(spec, where: str = "phi") -> SelfMap:
    """Build a self-map from its config form."""
    if spec == "identity":
        return identity_map()
    key = _single_key(spec, where)
    body = spec[key]
    try:
        if key == "affine":
            return Affine(_complex_from(body["a"], f"{where}.a"), _complex_from(body["b"], f"{where}.b"))
        if key == "monomial":
            return MonomialPower(int(body["degree"]), _complex_from(body.get("scale", 1.0), f"{where}.scale"))
        if key == "blaschke":
            return BlaschkeFactor(_complex_from(body["base"], f"{where}.base"))
        if key == "blaschke_product":
            return FiniteBlaschkeProduct(
                [_complex_from(b, f"{where}.bases") for b in body["bases"]],
                _complex_from(body.get("unimodular", 1.0), f"{where}.unimodular"),
            )
        if key == "scaled":
            return ScaledMap(
                _complex_from(body["factor"], f"{where}.factor"),
                build_self_map(body["inner"], f"{where}.inner"),
            )
        if key == "composition":
            return CompositionMap(
                build_self_map(body["outer"], f"{where}.outer"),
                build_self_map(body["inner"], f"{where}.inner"),
            )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{where}.{key}: malformed body ({exc})") from exc
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"{where}.{key}: {exc}") from exc
    raise ValidationError(f"{where}: unknown self-map variant {key!r}")


def _build_space(spec) -> SpaceSpec:
    if isinstance(spec, str):
        if not spec.startswith("bergman:"):
            raise ValidationError(f"space: unknown shorthand {spec!r}")
        try:
            return SpaceSpec.bergman(float(spec.split(":", 1)[1]))
        except ValueError as exc:
            raise ValidationError(f"space: {exc}") from exc
    if not isinstance(spec, dict):
        raise ValidationError("space: expected 'bergman:p' or an object")
    try:
        wspec = spec["weight"]
        weight = NormalWeight(
            float(wspec["alpha"]),
            float(wspec.get("log_exponent", 0.0)),
            float(wspec["s"]) if "s" in wspec else None,
            float(wspec["t"]) if "t" in wspec else None,
        )
        return SpaceSpec(float(spec["p"]), weight)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"space: malformed body ({exc})") from exc
    except ValueError as exc:
        raise ValidationError(f"space: {exc}") from exc


def _schedule(tasks) -> tuple:
    if not tasks:
        raise ValidationError("tasks: at least one task is required")
    ordered: list[str] = []
    for task in tasks:
        if task not in KNOWN_TASKS:
            raise ValidationError(f"tasks: unknown task {task!r}")
        prereq = _PREREQUISITE.get(task)
        if prereq and prereq not in ordered:
            ordered.append(prereq)
        if task not in ordered:
            ordered.append(task)
    return tuple(ordered)


@dataclass
class RunConfig:
    symbol: SymbolPair
    space: SpaceSpec
    grid: RadialGrid
    tasks: tuple
    strict: bool = False
    force_boundary: bool = False
    output_dir: str | None = None
    formats: tuple = ("json",)
    echo: dict = field(default_factory=dict)


def parse_config(text_or_dict) -> RunConfig:
    """Parse and eagerly validate a configuration document.

    Accepts the JSON text or an already-decoded dictionary.  All
    structural invariants (weight normality, the self-map property,
    task names and scheduling) are checked here so that ``run`` never
    starts a half-valid computation.
    """
    if isinstance(text_or_dict, str):
        try:
            doc = json.loads(text_or_dict)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    else:
        doc = text_or_dict
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    unknown = set(doc) - {"symbol", "space", "grid", "tasks", "strict", "force_boundary", "output"}
    if unknown:
        raise ValidationError(f"unknown top-level keys: {sorted(unknown)}")
    try:
        symbol_spec = doc["symbol"]
        u = build_function(symbol_spec["u"], "symbol.u")
        phi = build_self_map(symbol_spec["phi"], "symbol.phi")
    except KeyError as exc:
        raise ValidationError(f"symbol: missing field {exc}") from exc
    try:
        validate_self_map(phi)
    except ValueError as exc:
        raise ValidationError(f"symbol.phi: {exc}") from exc
    space = _build_space(doc.get("space", "bergman:2"))
    report = check_normality(space.weight)
    if not report.ok:
        raise ValidationError(
            f"space.weight: not normal for witnesses s={space.weight.s}, t={space.weight.t} "
            f"({report.detail})"
        )
    gspec = doc.get("grid", {})
    try:
        grid = RadialGrid(
            int(gspec.get("depth", 16)),
            int(gspec.get("angular_nodes", 512)),
            int(gspec.get("panel_order", 12)),
        )
    except ValueError as exc:
        raise ValidationError(f"grid: {exc}") from exc
    tasks = _schedule(doc.get("tasks", ()))
    output = doc.get("output", {})
    if not isinstance(output, dict) or not set(output) <= {"dir", "formats"}:
        raise ValidationError("output: expected an object with optional dir/formats")
    formats = tuple(output.get("formats", ("json",)))
    if not set(formats) <= {"json", "csv"}:
        raise ValidationError(f"output.formats: unknown formats in {formats!r}")
    config = RunConfig(
        symbol=SymbolPair(u, phi),
        space=space,
        grid=grid,
        tasks=tasks,
        strict=bool(doc.get("strict", False)),
        force_boundary=bool(doc.get("force_boundary", False)),
        output_dir=output.get("dir"),
        formats=formats,
        echo=_echo_config(doc, space, grid, tasks),
    )
    return config


def _echo_config(doc: dict, space: SpaceSpec, grid: RadialGrid, tasks) -> dict:
    echo = {
        "symbol": doc["symbol"],
        "space": {
            "p": space.p,
            "weight": {
                "alpha": space.weight.alpha,
                "log_exponent": space.weight.log_exponent,
                "s": space.weight.s,
                "t": space.weight.t,
            },
        },
        "grid": {"depth": grid.depth, "angular_nodes": grid.angular_nodes, "panel_order": grid.panel_order},
        "tasks": list(tasks),
        "strict": bool(doc.get("strict", False)),
        "force_boundary": bool(doc.get("force_boundary", False)),
    }
    if "output" in doc:
        echo["output"] = doc["output"]
    return echo


# ---------------------------------------------------------------------------
# execution


@dataclass
class Report:
    tool: dict
    config: dict
    results: dict
    meta: dict

    def to_dict(self) -> dict:
        return {"tool": self.tool, "config": self.config, "results": self.results, "meta": self.meta}

    def results_payload(self) -> bytes:
        """Canonical bytes of the verdict payload (excludes wall-clock)."""
        return json.dumps(self.results, sort_keys=True, indent=2, allow_nan=False).encode()


def run(config: RunConfig) -> Report:
    """Execute the scheduled tasks and assemble the report.

    Fails verdicts do not raise; computational errors are recorded per
    task with attribution and re-raised only for truly broken state.
    """
    results: dict = {"tasks": {}}
    timings: dict = {}
    bounded = None
    for task in config.tasks:
        start = time.perf_counter()
        if task == "bounded_bloch":
            bounded = classify_bounded_into_bloch(config.symbol, config.space, config.grid)
            results["tasks"][task] = bounded.to_dict()
        elif task == "compact_bloch":
            try:
                outcome = classify_compact_into_bloch(
                    config.symbol, config.space, config.grid,
                    bounded=bounded, force_boundary=config.force_boundary,
                )
                results["tasks"][task] = outcome.to_dict()
            except PreconditionUnmetError as exc:
                results["tasks"][task] = {"error": "precondition_unmet", "detail": str(exc)}
        elif task == "bounded_little_bloch":
            outcome = classify_bounded_into_little_bloch(
                config.symbol, config.space, config.grid, bounded=bounded
            )
            results["tasks"][task] = outcome.to_dict()
        elif task == "compact_little_bloch":
            outcome = classify_compact_into_little_bloch(config.symbol, config.space, config.grid)
            results["tasks"][task] = outcome.to_dict()
        elif task == "lemma_probes":
            results["tasks"][task] = {
                "derivative_limit": derivative_limit_probe(config.symbol, config.space, config.grid).to_dict(),
                "composition_limit": composition_limit_probe(config.symbol, config.space, config.grid).to_dict(),
            }
        elif task == "oracle":
            trend = lower_bound_trend(config.symbol, config.space, config.grid)
            probe = compactness_probe(config.symbol, config.space, config.grid)
            entry = {"lower_bound": trend.to_dict(), "compactness_probe": probe.to_dict()}
            entry["agreement"] = _agreement(results["tasks"].get("bounded_bloch"), trend.classification)
            results["tasks"][task] = entry
            results["constants"] = _empirical_constants(config, results["tasks"].get("bounded_bloch"))
        timings[task] = round(time.perf_counter() - start, 6)
    tool = {"name": "blochlab", "version": __version__}
    return Report(tool, config.echo, results, {"wall_clock_s": timings})


def _empirical_constants(config: RunConfig, bounded_entry) -> dict:
    """Measured constants over a small standard battery: growth-envelope
    ratios, the interval of derivative-form to direct norm ratios, and
    (for a bounded pair) the chain constant tying the image seminorm to
    the criterion suprema."""
    from .disk_functions import PowerSeries
    from .norms import (
        bergman_type_norm,
        derivative_form_norm,
        derivative_growth_envelope,
        pointwise_growth_envelope,
    )
    from .oracle import boundary_test_function, chain_constant

    battery = [
        PowerSeries([1.0]),
        PowerSeries([0, 1]),
        PowerSeries([0, 0, 1]),
        boundary_test_function(0.5, config.space),
    ]
    point_env, deriv_env, equiv = [], [], []
    for f in battery:
        norm = bergman_type_norm(f, config.space, config.grid)
        point_env.append(pointwise_growth_envelope(f, config.space, config.grid) / norm)
        deriv_env.append(derivative_growth_envelope(f, config.space, config.grid) / norm)
        equiv.append(derivative_form_norm(f, config.space, config.grid) / norm)
    out = {
        "pointwise_envelope_ratio_max": max(point_env),
        "derivative_envelope_ratio_max": max(deriv_env),
        "norm_equivalence_ratio_interval": [min(equiv), max(equiv)],
        "chain_constant": None,
    }
    if bounded_entry and bounded_entry.get("overall"):
        sups = [v["sup_estimate"] for v in bounded_entry["verdicts"]]
        if all(isinstance(s, (int, float)) for s in sups):
            out["chain_constant"] = chain_constant(
                config.symbol, config.space, battery, config.grid, sups[0], sups[1]
            )
    return out


def _agreement(bounded_entry, trend_classification: str):
    """Classifier versus oracle-trend agreement; None when undecided."""
    if bounded_entry is None or "overall" not in bounded_entry:
        return None
    if not bounded_entry.get("decided", False):
        return None
    if trend_classification == "ambiguous":
        return None
    return bool(bounded_entry["overall"] == (trend_classification == "stable"))


def strict_exit_code(report: Report) -> int:
    """0 unless the report records a classifier/oracle disagreement."""
    oracle_entry = report.results["tasks"].get("oracle")
    if oracle_entry and oracle_entry.get("agreement") is False:
        return 3
    return 0


# ---------------------------------------------------------------------------
# emission


def emit(report: Report, out_dir, formats=("json",)) -> list:
    """Write the report files and return their paths.

    JSON carries the full nested report.  CSV output is one file per
    profile with (delta, value) rows plus a flat verdict summary.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        path = out / "report.json"
        path.write_text(
            json.dumps(report.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"
        )
        written.append(path)
    if "csv" in formats:
        written.extend(_emit_csv(report, out))
    return written


def _iter_verdicts(results: dict):
    for task, entry in results["tasks"].items():
        if not isinstance(entry, dict):
            continue
        for v in entry.get("verdicts", ()):
            yield task, v
        inner = entry.get("into_bloch")
        if inner:
            for v in inner.get("verdicts", ()):
                yield f"{task}.into_bloch", v
        for probe_name in ("derivative_limit", "composition_limit"):
            probe = entry.get(probe_name)
            if probe:
                yield f"{task}.{probe_name}.lhs", probe["lhs"]
                for i, v in enumerate(probe["rhs"]):
                    yield f"{task}.{probe_name}.rhs{i}", v


def _emit_csv(report: Report, out: Path) -> list:
    written = []
    summary = out / "verdicts.csv"
    with summary.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["task", "quantity", "status", "sup_estimate", "slope"])
        for task, verdict in _iter_verdicts(report.results):
            writer.writerow(
                [
                    task,
                    verdict["quantity"],
                    verdict["status"],
                    verdict["sup_estimate"],
                    "" if verdict["divergence_slope"] is None else verdict["divergence_slope"],
                ]
            )
    written.append(summary)
    for task, verdict in _iter_verdicts(report.results):
        profile = verdict.get("profile")
        if not profile:
            continue
        stem = f"{task}.{verdict['quantity']}.profile.csv".replace("/", "_")
        path = out / stem
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["delta", "value"])
            for delta, value in zip(profile["thresholds"], profile["values"]):
                writer.writerow([delta, "" if value is None else value])
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# command line


def _parse_grid_flag(text: str) -> dict:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected K,M,ORDER")
    return {"depth": int(parts[0]), "angular_nodes": int(parts[1]), "panel_order": int(parts[2])}


def _default_out() -> str:
    return os.environ.get(ENV_OUT, "blochlab-out")


def _load_doc(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _apply_overrides(doc: dict, args) -> dict:
    doc = dict(doc)
    if getattr(args, "grid", None):
        doc["grid"] = args.grid
    if getattr(args, "strict", False):
        doc["strict"] = True
        tasks = list(doc.get("tasks", []))
        for needed in ("bounded_bloch", "oracle"):
            if needed not in tasks:
                tasks.append(needed)
        doc["tasks"] = tasks
    return doc


def _cmd_run(args) -> int:
    try:
        doc = _apply_overrides(_load_doc(args.config), args)
        config = parse_config(doc)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run(config)
    formats = tuple(args.format.split(",")) if args.format else config.formats
    out_dir = args.out or config.output_dir or _default_out()
    paths = emit(report, out_dir, formats)
    for path in paths:
        print(path)
    _print_headline(report)
    if config.strict or args.strict:
        return strict_exit_code(report)
    return 0


def _print_headline(report: Report) -> None:
    for task, entry in report.results["tasks"].items():
        if isinstance(entry, dict) and "overall" in entry:
            state = "holds" if entry["overall"] else ("fails" if entry.get("decided") else "inconclusive")
            print(f"{task}: {state}")
        elif isinstance(entry, dict) and "error" in entry:
            print(f"{task}: {entry['error']}")


def _cmd_validate(args) -> int:
    try:
        parse_config(_load_doc(args.config))
    except (ParseError, ValidationError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 2
    print("ok")
    return 0


def _cmd_battery(args) -> int:
    worst = 0
    for name, entry in CURATED.items():
        doc = _apply_overrides(dict(entry["config"]), args)
        config = parse_config(doc)
        report = run(config)
        emit(report, Path(args.out) / name, tuple(args.format.split(",")))
        expect = entry.get("expect", {})
        for task, task_entry in report.results["tasks"].items():
            if not isinstance(task_entry, dict) or "overall" not in task_entry:
                continue
            got = task_entry["overall"]
            suffix = ""
            if task in expect:
                ok = got == expect[task]
                suffix = "  [expected]" if ok else f"  [MISMATCH: expected {expect[task]}]"
                if not ok:
                    worst = max(worst, 1)
            print(f"{name}/{task}: {'holds' if got else 'fails/inconclusive'}{suffix}")
        if args.strict:
            worst = max(worst, strict_exit_code(report))
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="blochlab",
        description="Classify weighted composition operators into Bloch spaces and cross-check "
        "the verdicts with brute-force operator probes.",
    )
    parser.add_argument("--version", action="version", version=f"blochlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the tasks of a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None,
                       help="output directory (default: config, then BLOCHLAB_OUT)")
    p_run.add_argument("--format", default=None, help="comma-separated subset of json,csv")
    p_run.add_argument("--strict", action="store_true",
                       help="nonzero exit on classifier/oracle disagreement")
    p_run.add_argument("--grid", type=_parse_grid_flag, default=None, metavar="K,M,ORDER")
    p_run.set_defaults(fn=_cmd_run)

    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("config")
    p_val.set_defaults(fn=_cmd_validate)

    p_bat = sub.add_parser("battery", help="run the curated symbol battery")
    p_bat.add_argument("--out", default=_default_out())
    p_bat.add_argument("--format", default="json")
    p_bat.add_argument("--strict", action="store_true")
    p_bat.add_argument("--grid", type=_parse_grid_flag, default=None, metavar="K,M,ORDER")
    p_bat.set_defaults(fn=_cmd_battery)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # computation failures keep task attribution upstream
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
