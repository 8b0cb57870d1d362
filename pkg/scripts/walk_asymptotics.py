"""
Command-line front end for the walk asymptotics pipeline.
Classifies a model, counts its walks, evaluates the applicable theorem and
certifies the prediction against the counts.

Usage:
    python scripts/walk_asymptotics.py predict --example zerodrift-2d-weighted --second-order
    python scripts/walk_asymptotics.py verify --model model.json --max-n 400 --format table
"""

import argparse
import copy
import json
import logging
import math
import os
import sys
from typing import Any, Dict, List, Optional, Tuple

import yaml

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from scripts.asymptotics import predict  # noqa: E402
from scripts.asymptotics.base_theorem import AsymptoticPrediction  # noqa: E402
from scripts.asymptotics.gamma import gamma_set  # noqa: E402
from scripts.asymptotics.quadrature import QuadratureSpec, residue_integral_estimate  # noqa: E402
from scripts.asymptotics.saddle import critical_points, saddle_data, second_order_main  # noqa: E402
from scripts.corpus import CorpusEntry, get_example, list_examples  # noqa: E402
from scripts.diagonal import build_rep, export_rep, sigma_multipliers, verify_rep  # noqa: E402
from scripts.enumerate_walks import count_walks, export_sequence  # noqa: E402
from scripts.errors import ConfigurationError, NonZeroDrift, WalkAsymptoticsError  # noqa: E402
from scripts.fitting import ToleranceProfile, VerificationReport, compare  # noqa: E402
from scripts.logging_utils import get_logger, log_pipeline_error, set_run_context, setup_logging  # noqa: E402
from scripts.metrics import PipelineMetrics  # noqa: E402
from scripts.walk_model import (  # noqa: E402
    DriftSign,
    HighlySymmetric,
    MostlySymmetric,
    Unsupported,
    WalkModel,
    classify,
    decompose,
    fingerprint,
    load_model_file,
    model_to_dict,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2

DEFAULT_CONFIG_PATH = "../config/config.yaml"
REPORT_QUADRATURE_N = 200

DEFAULT_CONFIG: Dict[str, Any] = {
    "enumeration": {"max_table_cells": 50_000_000},
    "diagonal": {"verify_depth": {2: 15, 3: 10, "other": 8}, "max_terms": 2_000_000},
    "fitting": {"terms": 3, "window_fraction": 0.25, "stride": 4, "condition_limit": 1e14, "precision_dps": 40},
    "quadrature": {"epsilon_exponent": "7/10", "delta_exponent": "2/5", "delta_scale": math.pi, "nodes_per_axis": None},
    "verification": {"default_max_n": {2: 400, 3: 80, "other": 40}},
    "tolerance_profiles": {
        "strict": {"base_rel": 0.005, "order_abs": 0.1, "c0_rel": 0.01, "c1_rel": 0.05},
        "parity": {"base_rel": 0.005, "order_abs": 0.1, "c0_rel": 0.015, "c1_rel": None},
        "relaxed": {"base_rel": 0.01, "order_abs": 0.15, "c0_rel": 0.03, "c1_rel": None},
    },
    "logging": {"verbose": False, "quiet": False, "log_file": None},
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from YAML file and merge it over the built-in defaults.

    Args:
        config_path: Path to configuration file; None uses config/config.yaml when it exists

    Returns:
        Configuration dictionary

    Raises:
        ConfigurationError: If an explicitly requested file is missing or malformed
    """
    explicit = config_path is not None
    config_path = config_path or DEFAULT_CONFIG_PATH

    # Resolve path relative to this script or use absolute path
    if os.path.isabs(config_path) or explicit:
        full_path = os.path.abspath(config_path)
    else:
        script_dir = os.path.dirname(os.path.abspath(__file__))
        full_path = os.path.abspath(os.path.join(script_dir, config_path))

    if not os.path.exists(full_path):
        if explicit:
            raise ConfigurationError(f"Configuration file not found: {full_path}")
        return copy.deepcopy(DEFAULT_CONFIG)

    try:
        with open(full_path, "r") as f:
            loaded = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Configuration file {full_path} is not valid YAML: {e}") from e
    if not isinstance(loaded, dict):
        raise ConfigurationError(f"Configuration file {full_path} must contain a mapping")

    return _deep_merge(DEFAULT_CONFIG, loaded)


def _per_dimension(table: Any, dimension: int) -> int:
    """Look up a value keyed by dimension (int or string keys) with an 'other' fallback."""
    if not isinstance(table, dict):
        return int(table)
    for key in (dimension, str(dimension)):
        if key in table:
            return int(table[key])
    return int(table["other"])


def tolerance_profiles(config: Dict[str, Any]) -> Dict[str, ToleranceProfile]:
    section = config.get("tolerance_profiles") or {}
    if not isinstance(section, dict):
        raise ConfigurationError("'tolerance_profiles' must be a mapping of profile names")
    return {name: ToleranceProfile.from_dict(name, values or {}) for name, values in section.items()}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"Path to configuration file (default: {DEFAULT_CONFIG_PATH} if present)")
    common.add_argument("--verbose", action="store_true", help="Enable verbose logging")
    common.add_argument("--quiet", action="store_true", help="Only show warnings and errors on stderr")
    common.add_argument("--log-file", help="Path to log file (default: logs/walk_asymptotics.log)")
    common.add_argument("--metrics-file", help="Save run metrics as JSON to this path")

    model_args = argparse.ArgumentParser(add_help=False)
    selection = model_args.add_mutually_exclusive_group(required=True)
    selection.add_argument("--model", help="Path to a JSON model description")
    selection.add_argument("--example", help="Name of a built-in corpus model (see 'examples')")

    max_n_args = argparse.ArgumentParser(add_help=False)
    max_n_args.add_argument("--max-n", type=int, help="Largest walk length")

    parser = argparse.ArgumentParser(description="Asymptotics of weighted lattice walks confined to an orthant")
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("classify", parents=[common, model_args], help="Classify a model by its symmetries")

    enumerate_parser = subparsers.add_parser(
        "enumerate", parents=[common, model_args, max_n_args], help="Count walks up to a length bound"
    )
    enumerate_parser.add_argument("--float", action="store_true", help="Use the float64 dynamic program")
    enumerate_parser.add_argument("--json", action="store_true", help="Print a JSON document instead of a table")

    predict_parser = subparsers.add_parser("predict", parents=[common, model_args], help="Leading asymptotics")
    predict_parser.add_argument(
        "--second-order", action="store_true", help="Attach the second-order coefficient (zero drift models)"
    )

    subparsers.add_parser("gamma", parents=[common, model_args], help="List the critical torus points")
    subparsers.add_parser(
        "diagonal-check", parents=[common, model_args, max_n_args], help="Check the diagonal representation"
    )

    verify_parser = subparsers.add_parser(
        "verify", parents=[common, model_args, max_n_args], help="Certify the prediction against walk counts"
    )
    verify_parser.add_argument("--tolerance", help="Tolerance profile name (default: the example's, else strict)")
    verify_parser.add_argument("--format", choices=("json", "table"), default="json", help="Output format")

    report_parser = subparsers.add_parser(
        "report", parents=[common, model_args, max_n_args], help="Run the full pipeline and print one document"
    )
    report_parser.add_argument("--tolerance", help="Tolerance profile name (default: the example's, else strict)")
    report_parser.add_argument("--json", action="store_true", help="Print the deterministic JSON document")

    examples_parser = subparsers.add_parser("examples", parents=[common], help="List the built-in corpus models")
    examples_parser.add_argument("--json", action="store_true", help="Print a JSON document instead of a table")

    return parser


def _resolve_model(args: argparse.Namespace) -> Tuple[WalkModel, Optional[CorpusEntry]]:
    if getattr(args, "example", None):
        entry = get_example(args.example)
        return entry.model, entry
    return load_model_file(args.model), None


def _emit(document: Any) -> None:
    sys.stdout.write(json.dumps(document, indent=2, default=str) + "\n")


def _supports_second_order(model: WalkModel) -> bool:
    model_class, _ = classify(model)
    if isinstance(model_class, HighlySymmetric):
        return True
    return isinstance(model_class, MostlySymmetric) and model_class.drift_sign == DriftSign.ZERO


def _select_profile(
    args: argparse.Namespace, entry: Optional[CorpusEntry], config: Dict[str, Any]
) -> ToleranceProfile:
    profiles = tolerance_profiles(config)
    name = args.tolerance or (entry.profile if entry else "strict")
    if name not in profiles:
        raise ConfigurationError(f"Unknown tolerance profile '{name}'. Available profiles: {', '.join(profiles)}")
    return profiles[name]


def _verification(
    model: WalkModel,
    max_n: int,
    profile: ToleranceProfile,
    config: Dict[str, Any],
    metrics: PipelineMetrics,
    logger: logging.Logger,
) -> Tuple[AsymptoticPrediction, VerificationReport]:
    with metrics.stage("predict"):
        prediction = predict(model)
        if profile.c1_rel is not None and _supports_second_order(model):
            prediction = prediction.with_second_order(second_order_main(model))

    with metrics.stage("enumerate"):
        counts = count_walks(
            model, max_n, "float64", max_table_cells=config["enumeration"]["max_table_cells"], metrics=metrics
        )
    logger.info(f"Counted walks up to n = {max_n}")

    fitting = config["fitting"]
    with metrics.stage("fit"):
        report = compare(
            prediction,
            counts,
            profile,
            terms=int(fitting["terms"]),
            window_fraction=float(fitting["window_fraction"]),
            stride=int(fitting["stride"]),
            condition_limit=float(fitting["condition_limit"]),
            precision_dps=int(fitting["precision_dps"]),
            metrics=metrics,
        )
    return prediction, report


def _cmd_classify(model: WalkModel, **_: Any) -> Dict[str, Any]:
    model_class, permutation = classify(model)
    document: Dict[str, Any] = {
        "fingerprint": fingerprint(model),
        "model": model_to_dict(model),
        "classification": model_class.to_dict(),
    }
    if not isinstance(model_class, Unsupported):
        document["decomposition"] = decompose(model).to_dict()
    return document


def _cmd_predict(model: WalkModel, args: argparse.Namespace, **_: Any) -> Dict[str, Any]:
    prediction = predict(model, second_order=args.second_order)
    return {"fingerprint": fingerprint(model), "prediction": prediction.to_dict()}


def _cmd_gamma(model: WalkModel, **_: Any) -> Dict[str, Any]:
    return {"fingerprint": fingerprint(model), "gamma": gamma_set(model).to_dict()}


def _report_document(
    model: WalkModel,
    entry: Optional[CorpusEntry],
    max_n: int,
    profile: ToleranceProfile,
    config: Dict[str, Any],
    metrics: PipelineMetrics,
    logger: logging.Logger,
) -> Dict[str, Any]:
    """Every pipeline stage for one model, without timestamps or timings."""
    decomposition = decompose(model)
    model_class = decomposition.model_class
    zero_drift = _supports_second_order(model)
    depth = _per_dimension(config["diagonal"]["verify_depth"], model.dimension)

    document: Dict[str, Any] = {
        "example": entry.name if entry else None,
        "fingerprint": fingerprint(model),
        "model": model_to_dict(model),
        "classification": model_class.to_dict(),
        "decomposition": decomposition.to_dict(),
    }

    with metrics.stage("diagonal"):
        rep = build_rep(model)
        check = verify_rep(model, depth, rep=rep, max_terms=int(config["diagonal"]["max_terms"]), metrics=metrics)
    document["diagonal"] = {
        "representation": export_rep(rep).splitlines(),
        "agree": check.agree,
        "firstMismatch": check.first_mismatch,
        "maxN": check.max_n,
    }

    document["criticalPoints"] = [point.to_dict() for point in critical_points(model)]
    if isinstance(model_class, MostlySymmetric):
        l1, l2 = sigma_multipliers(model)
        document["sigmaMultipliers"] = [str(l1), str(l2)]

    if zero_drift:
        with metrics.stage("saddle"):
            document["gamma"] = gamma_set(model).to_dict()
            document["saddle"] = saddle_data(model).to_dict()
        if model.dimension == 2:
            spec = QuadratureSpec.from_config(config.get("quadrature"))
            with metrics.stage("quadrature"):
                oracle = count_walks(model, REPORT_QUADRATURE_N, "float64", metrics=metrics)
                estimate = residue_integral_estimate(model, REPORT_QUADRATURE_N, spec, oracle=oracle, metrics=metrics)
            document["residueIntegral"] = estimate.to_dict()

    prediction, report = _verification(model, max_n, profile, config, metrics, logger)
    document["prediction"] = prediction.to_dict()
    document["verification"] = report.to_dict()
    return document


def _report_text(document: Dict[str, Any], report: Dict[str, Any]) -> str:
    prediction = document["prediction"]
    lines = [
        f"Model {document['example'] or document['fingerprint'][:12]}",
        f"  class: {document['classification']['class']}",
        f"  diagonal representation: {'agrees' if document['diagonal']['agree'] else 'DISAGREES'}"
        f" with the oracle for n <= {document['diagonal']['maxN']}",
        f"  theorem: {prediction['theorem']} (period {prediction['period']})",
    ]
    for record in prediction["classes"]:
        lines.append(
            f"  class {record['residue']}: {record['constantExact']} * ({record['baseExact']})^n * n^(-{record['order']})"
        )
    if prediction["secondOrder"]:
        lines.append(f"  second order (all-ones point): kappa = {prediction['secondOrder']['kappaExact']}")
    if "residueIntegral" in document:
        lines.append(
            f"  residue integral at n = {REPORT_QUADRATURE_N}: relative error "
            f"{document['residueIntegral']['relativeErrorVsOracle']:.3e}"
        )
    lines.append(f"  verification ({report['profile']}, n <= {report['maxN']}): {report['verdict'].upper()}")
    return "\n".join(lines) + "\n"


def run_command(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and return its exit code.

    Result documents go to stdout; log records and errors go to stderr.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # usage errors are input errors
        return EXIT_OK if e.code == 0 else EXIT_ERROR

    set_run_context(args.command)
    setup_logging(args.verbose, args.log_file, args.quiet)
    logger = get_logger(__name__)

    metrics = PipelineMetrics(command=args.command)
    metrics.start_collection()

    try:
        config = load_config(args.config)

        # CLI flags take precedence over the logging section
        log_section = config.get("logging") or {}
        verbose = args.verbose or bool(log_section.get("verbose"))
        quiet = args.quiet or bool(log_section.get("quiet"))
        log_file = args.log_file or log_section.get("log_file")
        if (verbose, quiet, log_file) != (args.verbose, args.quiet, args.log_file):
            setup_logging(verbose, log_file, quiet)

        if args.command == "examples":
            if args.json:
                _emit({"examples": list_examples()})
            else:
                for example in list_examples():
                    sys.stdout.write(
                        f"{example['name']:<24} d={example['dimension']}  {example['theorem']}  {example['title']}\n"
                    )
            return EXIT_OK

        model, entry = _resolve_model(args)
        set_run_context(args.command, fingerprint(model))
        logger.info(f"Loaded {model.dimension}-dimensional model with {len(model)} steps ({args.command})")

        if args.command == "classify":
            _emit(_cmd_classify(model))
            return EXIT_OK

        if args.command == "predict":
            _emit(_cmd_predict(model, args=args))
            return EXIT_OK

        if args.command == "gamma":
            _emit(_cmd_gamma(model))
            return EXIT_OK

        if args.command == "enumerate":
            max_n = args.max_n if args.max_n is not None else _per_dimension(
                config["verification"]["default_max_n"], model.dimension
            )
            mode = "float64" if args.float else "exact"
            with metrics.stage("enumerate"):
                counts = count_walks(
                    model, max_n, mode, max_table_cells=config["enumeration"]["max_table_cells"], metrics=metrics
                )
            if args.json:
                values = [str(v) for v in counts.values] if counts.is_exact else [float(v) for v in counts.values]
                _emit({"fingerprint": counts.model_fingerprint, "mode": counts.arithmetic_mode.value, "values": values})
            else:
                sys.stdout.write(export_sequence(counts))
            return EXIT_OK

        if args.command == "diagonal-check":
            depth = args.max_n if args.max_n is not None else _per_dimension(
                config["diagonal"]["verify_depth"], model.dimension
            )
            with metrics.stage("diagonal"):
                rep = build_rep(model)
                check = verify_rep(model, depth, rep=rep, max_terms=int(config["diagonal"]["max_terms"]), metrics=metrics)
            _emit({"representation": export_rep(rep).splitlines(), **check.to_dict()})
            return EXIT_OK if check.agree else EXIT_VERIFICATION_FAILED

        max_n = args.max_n if args.max_n is not None else _per_dimension(
            config["verification"]["default_max_n"], model.dimension
        )
        profile = _select_profile(args, entry, config)

        if args.command == "verify":
            _, report = _verification(model, max_n, profile, config, metrics, logger)
            if args.format == "table":
                sys.stdout.write(report.to_table())
            else:
                _emit(report.to_dict())
            return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED

        document = _report_document(model, entry, max_n, profile, config, metrics, logger)
        if args.json:
            _emit(document)
        else:
            sys.stdout.write(_report_text(document, document["verification"]))
        passed = document["diagonal"]["agree"] and document["verification"]["verdict"] == "pass"
        return EXIT_OK if passed else EXIT_VERIFICATION_FAILED

    except NonZeroDrift as e:
        return log_pipeline_error(logger, e, "The second-order term and the residue integral need a zero drift model")
    except WalkAsymptoticsError as e:
        return log_pipeline_error(logger, e)
    except Exception as e:
        logger.error(f"An error occurred: {e}", exc_info=True)
        return EXIT_ERROR
    finally:
        metrics.end_collection()
        if args.metrics_file:
            metrics.log_summary(logger)
            metrics.save_to_file(args.metrics_file)


def main() -> int:
    """Main entry point for the walk asymptotics command line."""
    return run_command(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
