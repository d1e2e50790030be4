"""Command-line front end: parse a JSON scenario config, dispatch to the
computational modules, and emit a deterministic JSON report on stdout.

Exit codes: 0 = computed and the classical constraint held where one applies;
1 = computed and the constraint is violated (a scientific result, not an
error); 2 = input or validation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from typing import Any

import numpy as np

from . import __version__
from .entropy import (
    ClassicalDistribution,
    araki_lieb,
    bell_purity_bound,
    check_subadditivity,
    classical_monotonicity,
    entropy_report,
    horodecki_criterion,
    linear_entropy_criterion,
    quantum_monotonicity_gap,
)
from .errors import CommutationError, InconsistentMarginalsError
from .feasibility import (
    MarginalSet,
    contextuality_demo,
    joint_feasible,
    marginals_from_scenario,
)
from .hidden_vars import build_hv_model, verify_model
from .linalg import DensityOperator, matrix_from_lists
from .logic import Proposition, distance, quad_check, triangle_check
from .scenario import (
    TSIRELSON_BOUND,
    BellScenario,
    beta,
    chsh_value,
    correlations,
    direction_vector,
    epr_min_separation,
    preset_state,
    spin_observable,
)
from .sweeps import SWEEP_TOLERANCES, run_sweep

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2


class ConfigError(ValueError):
    """Config problem with a field-path diagnostic."""


def _expect_fields(obj: Any, where: str, required: dict[str, type], optional: dict[str, type] = {}):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    for name, kind in required.items():
        if name not in obj:
            raise ConfigError(f"{where}.{name}: required field missing")
        if kind is not object and not isinstance(obj[name], kind):
            raise ConfigError(f"{where}.{name}: expected {kind.__name__}")
    for name in obj:
        if name not in required and name not in optional:
            raise ConfigError(f"{where}.{name}: unknown field")
        if name in optional:
            kind = optional[name]
            if kind is not object and not isinstance(obj[name], kind):
                raise ConfigError(f"{where}.{name}: expected {kind.__name__}")


def _load_config(path: str, command: str, required: dict[str, type], optional: dict[str, type]) -> dict:
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        config = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    _expect_fields(config, command, {"schema": int, **required}, optional)
    if config["schema"] != SCHEMA_VERSION:
        raise ConfigError(f"{command}.schema: expected {SCHEMA_VERSION}, got {config['schema']}")
    return config


def _parse_state(node, where: str) -> DensityOperator:
    if isinstance(node, str):
        try:
            return preset_state(node)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    _expect_fields(node, where, {"matrix": list})
    try:
        return DensityOperator(matrix_from_lists(node["matrix"]))
    except ValueError as exc:
        raise ConfigError(f"{where}.matrix: {exc}") from exc


def _parse_directions(node, where: str) -> dict[str, np.ndarray]:
    _expect_fields(node, where, {k: list for k in "abcd"})
    out = {}
    for k in "abcd":
        pair = node[k]
        if len(pair) != 2 or not all(isinstance(x, (int, float)) for x in pair):
            raise ConfigError(f"{where}.{k}: expected [theta_deg, phi_deg]")
        out[k] = direction_vector(float(pair[0]), float(pair[1]))
    return out


def _parse_scenario(config: dict, where: str = "config") -> BellScenario:
    state = _parse_state(config["state"], f"{where}.state")
    has_dirs = "directions" in config
    has_obs = "observables" in config
    if has_dirs == has_obs:
        raise ConfigError(f"{where}: provide exactly one of 'directions' or 'observables'")
    if has_dirs:
        dirs = _parse_directions(config["directions"], f"{where}.directions")
        if state.dim != 4:
            raise ConfigError(f"{where}.state: direction-based scenarios need a two-qubit state")
        return BellScenario(
            a=spin_observable(dirs["a"]), b=spin_observable(dirs["b"]),
            c=spin_observable(dirs["c"]), d=spin_observable(dirs["d"]), state=state,
        )
    obs = config["observables"]
    _expect_fields(obs, f"{where}.observables", {k: list for k in "abcd"})
    try:
        return BellScenario(
            a=matrix_from_lists(obs["a"]), b=matrix_from_lists(obs["b"]),
            c=matrix_from_lists(obs["c"]), d=matrix_from_lists(obs["d"]), state=state,
        )
    except ValueError as exc:
        raise ConfigError(f"{where}.observables: {exc}") from exc


def _emit(report: dict, timing_ms: float | None) -> None:
    if timing_ms is not None:
        report = {**report, "wall_time_ms": round(timing_ms, 3)}
    print(json.dumps(report, sort_keys=True, separators=(",", ": "), indent=1))


def _report(command: str, config, args, results: dict) -> dict:
    return {
        "command": command,
        "config": config,
        "flags": {"seed": args.seed, "tol": args.tol, "base": args.base},
        "results": results,
        "version": __version__,
    }


def _write_csv(path: str, rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_chsh(args) -> tuple[dict, int]:
    config = _load_config(args.config, "chsh", {"state": object},
                          {"directions": dict, "observables": dict})
    s = _parse_scenario(config)
    corr = correlations(s)
    b = beta(s)
    tol = args.tol if args.tol is not None else 1e-9
    violated = abs(b) > 2.0 + tol
    results = {
        "beta": b,
        "abs_beta": abs(b),
        "chsh_from_correlations": chsh_value(corr),
        "correlations": {"ab": corr.ab, "bc": corr.bc, "cd": corr.cd, "ad": corr.ad},
        "tsirelson_margin": TSIRELSON_BOUND - abs(b),
        "classical_bound_satisfied": not violated,
    }
    return _report("chsh", config, args, results), EXIT_VIOLATION if violated else EXIT_OK


def _cmd_feasibility(args) -> tuple[dict, int]:
    config = _load_config(args.config, "feasibility", {},
                          {"marginals": dict, "state": object,
                           "directions": dict, "observables": dict, "contexts": bool})
    if "marginals" in config:
        if "state" in config or "directions" in config or "observables" in config:
            raise ConfigError("feasibility: give either marginals or a scenario, not both")
        try:
            marginals = MarginalSet.from_dict(config["marginals"])
        except ValueError as exc:
            raise ConfigError(f"feasibility.marginals: {exc}") from exc
        scenario = None
    else:
        scenario = _parse_scenario(config)
        marginals = marginals_from_scenario(scenario)

    verdict = joint_feasible(marginals)
    results = {
        "marginals": marginals.as_dict(),
        "feasible": verdict.feasible,
        "fine_criterion": verdict.fine_criterion,
        "chsh_values": list(verdict.chsh_values),
        "witness": None if verdict.witness is None else verdict.witness.weights.tolist(),
    }
    if config.get("contexts") and scenario is not None:
        demo = contextuality_demo(scenario)
        results["contexts"] = {
            label: {"max_error": v.max_error, "linearity_error": v.linearity_error}
            for label, v in demo.context_verifications.items()
        }
        results["all_commuting"] = demo.all_commuting
    return _report("feasibility", config, args, results), (
        EXIT_OK if verdict.feasible else EXIT_VIOLATION
    )


def _cmd_hv(args) -> tuple[dict, int]:
    config = _load_config(args.config, "hv", {"state": object, "observables": list}, {})
    state = _parse_state(config["state"], "hv.state")
    ops = {}
    for i, item in enumerate(config["observables"]):
        _expect_fields(item, f"hv.observables[{i}]", {"label": str, "matrix": list})
        if item["label"] in ops:
            raise ConfigError(f"hv.observables[{i}].label: duplicate label {item['label']!r}")
        ops[item["label"]] = matrix_from_lists(item["matrix"])
    model = build_hv_model(state, ops)
    verification = verify_model(model, state, ops)
    tol = args.tol if args.tol is not None else 1e-9
    results = {
        "atoms": list(model.atoms),
        "weights": model.weights.tolist(),
        "values": {k: v.tolist() for k, v in model.value_tables.items()},
        "max_error": verification.max_error,
        "linearity_error": verification.linearity_error,
    }
    if args.csv:
        _write_csv(args.csv, model.to_rows())
    code = EXIT_OK if verification.max_error <= tol and verification.linearity_error <= tol else EXIT_VIOLATION
    return _report("hv", config, args, results), code


def _cmd_entropy(args) -> tuple[dict, int]:
    config = _load_config(args.config, "entropy", {"kind": str},
                          {"state": object, "classical": dict, "dims": list,
                           "directions": dict, "observables": dict})
    kind = config["kind"]
    base = args.base
    tol = args.tol if args.tol is not None else 1e-10
    dims = tuple(config["dims"]) if "dims" in config else None

    if ("state" in config) == ("classical" in config):
        raise ConfigError("entropy: provide exactly one of 'state' or 'classical'")

    results: dict[str, Any]
    code = EXIT_OK
    if "classical" in config:
        _expect_fields(config["classical"], "entropy.classical", {"weights": list}, {"dims": list})
        cdims = config["classical"].get("dims")
        dist = ClassicalDistribution(
            config["classical"]["weights"], dims=tuple(cdims) if cdims else dims
        )
        if kind not in ("shannon", "linear_classical"):
            raise ConfigError(f"entropy.kind: {kind!r} does not apply to classical input")
        rep = entropy_report(dist, kind, base=base)
        results = {
            "entropies": {"s12": rep.s12, "s1": rep.s1, "s2": rep.s2,
                          "kind": rep.kind, "log_base": rep.log_base},
            "subadditivity_slack": check_subadditivity(dist, kind, base=base),
            "monotonicity_slack": classical_monotonicity(dist, kind=kind, base=base),
        }
        if results["monotonicity_slack"] < -tol:
            code = EXIT_VIOLATION
    else:
        if dims is None:
            raise ConfigError("entropy.dims: required for a quantum state")
        state = _parse_state(config["state"], "entropy.state")
        if kind not in ("von_neumann", "linear_quantum"):
            raise ConfigError(f"entropy.kind: {kind!r} does not apply to quantum input")
        rep = entropy_report(state, kind, dims=dims, base=base)
        verdict = linear_entropy_criterion(state, dims)
        gap = quantum_monotonicity_gap(state, dims, base=base)
        horodecki = horodecki_criterion(state, dims, base=base)
        results = {
            "entropies": {"s12": rep.s12, "s1": rep.s1, "s2": rep.s2,
                          "kind": rep.kind, "log_base": rep.log_base},
            "subadditivity_slack": check_subadditivity(state, kind, dims=dims, base=base),
            "triangle_slack": araki_lieb(state, dims, base=base),
            "monotonicity_gap": gap,
            "monotonicity_holds": gap >= -tol,
            "linear_entropy_condition": {
                "lhs": verdict.lhs, "rhs": verdict.rhs, "holds": verdict.holds,
                "purity_margin": verdict.purity_margin,
                "beta_bound_implied": verdict.beta_bound_implied,
            },
            "entropic_condition_holds": horodecki.condition_holds,
        }
        if "directions" in config or "observables" in config:
            results["purity_bound_slack"] = bell_purity_bound(_parse_scenario(config))
        if gap < -tol:
            code = EXIT_VIOLATION
    return _report("entropy", config, args, results), code


def _cmd_sweep(args) -> tuple[dict, int]:
    config = _load_config(args.config, "sweep", {"property": str, "samples": int},
                          {"dims": list, "dim": int, "dims_list": list})
    params = {}
    if "dims" in config:
        params["dims"] = tuple(config["dims"])
    if "dim" in config:
        params["dim"] = config["dim"]
    if "dims_list" in config:
        params["dims_list"] = tuple(tuple(d) for d in config["dims_list"])
    name = config["property"]
    seed = args.seed
    try:
        rows, min_slack = run_sweep(name, config["samples"], seed=seed, **params)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"sweep: {exc}") from exc
    tolerance = args.tol if args.tol is not None else SWEEP_TOLERANCES[name]
    passed = min_slack >= -tolerance
    if args.csv:
        table = [["seed", "kind", "slack"]] + [[r.seed, r.kind, r.slack] for r in rows]
        _write_csv(args.csv, table)
    results = {
        "property": name,
        "samples": config["samples"],
        "rows": len(rows),
        "min_slack": min_slack,
        "tolerance": tolerance,
        "pass": passed,
    }
    return _report("sweep", config, args, results), EXIT_OK if passed else EXIT_VIOLATION


def _cmd_logic(args) -> tuple[dict, int]:
    config = _load_config(args.config, "logic",
                          {"state": object, "propositions": list, "checks": list}, {})
    state = _parse_state(config["state"], "logic.state")
    props: dict[str, Proposition] = {}
    for i, item in enumerate(config["propositions"]):
        _expect_fields(item, f"logic.propositions[{i}]", {"label": str, "matrix": list})
        if item["label"] in props:
            raise ConfigError(f"logic.propositions[{i}].label: duplicate {item['label']!r}")
        try:
            props[item["label"]] = Proposition(item["label"], matrix_from_lists(item["matrix"]))
        except ValueError as exc:
            raise ConfigError(f"logic.propositions[{i}].matrix: {exc}") from exc

    def lookup(label: str, where: str) -> Proposition:
        if label not in props:
            raise ConfigError(f"{where}: unknown proposition {label!r}")
        return props[label]

    outcomes = []
    any_violated = False
    for i, check in enumerate(config["checks"]):
        where = f"logic.checks[{i}]"
        _expect_fields(check, where, {"type": str},
                       {"pair": list, "triple": list, "quad": list})
        kind = check["type"]
        if kind == "distance":
            pair = check.get("pair")
            if not pair or len(pair) != 2:
                raise ConfigError(f"{where}.pair: expected two labels")
            a, b = (lookup(x, where) for x in pair)
            rep = distance(a, b, state)
            outcomes.append({"type": "distance", "pair": pair,
                             "d": rep.d, "p_meet": rep.p_meet, "p_join": rep.p_join})
        elif kind == "triangle":
            triple = check.get("triple")
            if not triple or len(triple) != 3:
                raise ConfigError(f"{where}.triple: expected three labels")
            a, b, c = (lookup(x, where) for x in triple)
            rep = triangle_check(a, b, c, state)
            outcomes.append({"type": "triangle", "triple": triple,
                             "holds": rep.holds, "slack": rep.slack,
                             "distances": list(rep.distances)})
            any_violated = any_violated or not rep.holds
        elif kind == "quad":
            quad = check.get("quad")
            if not quad or len(quad) != 4:
                raise ConfigError(f"{where}.quad: expected four labels")
            a, b, c, d = (lookup(x, where) for x in quad)
            rep = quad_check(a, b, c, d, state)
            outcomes.append({"type": "quad", "quad": quad,
                             "holds": rep.holds, "slack": rep.slack,
                             "worst_permutation": rep.worst_permutation,
                             "per_permutation": rep.per_permutation})
            any_violated = any_violated or not rep.holds
        else:
            raise ConfigError(f"{where}.type: unknown check type {kind!r}")
    results = {"checks": outcomes}
    return _report("logic", config, args, results), (
        EXIT_VIOLATION if any_violated else EXIT_OK
    )


def _cmd_epr_distance(args) -> tuple[dict, int]:
    d = epr_min_separation(args.L, args.v)
    results = {"min_separation_m": d, "apparatus_length_m": args.L, "velocity_ms": args.v}
    return _report("epr-distance", {"L": args.L, "v": args.v}, args, results), EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bellkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, csv_opt=False, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="path to a JSON config (schema field required)")
        p.add_argument("--seed", type=int, default=0, help="base seed for stochastic commands")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
        p.add_argument("--base", choices=("e", "2"), default="e", help="entropy log base")
        p.add_argument("--timing", action="store_true", help="include wall time in the report")
        if csv_opt:
            p.add_argument("--csv", default=None, help="write row-level results to a CSV file")

    common(sub.add_parser("chsh", help="CHSH value and Tsirelson margin of a scenario"))
    common(sub.add_parser("feasibility", help="joint-distribution feasibility of marginals"))
    common(sub.add_parser("hv", help="hidden-variable model for a commuting family"), csv_opt=True)
    common(sub.add_parser("entropy", help="entropy report and inequality slacks"))
    common(sub.add_parser("sweep", help="randomized property sweep"), csv_opt=True)
    common(sub.add_parser("logic", help="distance / triangle / quadrilateral checks"))
    epr = sub.add_parser("epr-distance", help="minimum spacelike separation 2 L c / v")
    epr.add_argument("--L", type=float, required=True, help="apparatus length in meters")
    epr.add_argument("--v", type=float, required=True, help="particle velocity in m/s")
    common(epr, config_required=False)
    return parser


_HANDLERS = {
    "chsh": _cmd_chsh,
    "feasibility": _cmd_feasibility,
    "hv": _cmd_hv,
    "entropy": _cmd_entropy,
    "sweep": _cmd_sweep,
    "logic": _cmd_logic,
    "epr-distance": _cmd_epr_distance,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        report, code = _HANDLERS[args.command](args)
    except (ConfigError, CommutationError, InconsistentMarginalsError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True))
        print(f"bellkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    timing = (time.perf_counter() - started) * 1e3 if args.timing else None
    _emit(report, timing)
    return code


if __name__ == "__main__":
    sys.exit(main())
