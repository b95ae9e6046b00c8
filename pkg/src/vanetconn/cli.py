"""Command-line front end: JSON config + flag overrides, density sweeps,
canned figure presets, CSV emission, method-agreement audits, and a built-in
selftest."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import connectivity, graphs, montecarlo, ranges, traffic
from .montecarlo import (
    ANALYTIC_METHODS,
    DEFAULT_SPECTRAL_TRIALS,
    DEFAULT_TRAVERSAL_TRIALS,
    TRIAL_METHODS,
    VALID_METHODS,
    ExperimentSpec,
)
from .ranges import FixedRange, TwoTierRange, UniformRange

CSV_HEADER = "density_per_km,method,range_policy,p_hat,stderr,trials,master_seed"
OUTPUT_DIR_ENV = "VANETCONN_OUTPUT_DIR"
DEFAULT_MASTER_SEED = 1
DEFAULT_SEGMENT_LENGTH_M = 10_000.0

PRESET_DENSITIES = tuple(float(d) for d in range(2, 26))
PRESET_NAMES = ("fig1", "fig5", "fig6")

_TOP_KEYS = {
    "segment_length_m", "densities_per_km", "trials", "master_seed",
    "direction", "methods", "range_policy",
}
_POLICY_KEYS = {
    "fixed": {"type", "range_m"},
    "two_tier": {"type", "range_low_m", "range_high_m", "fraction_high", "exact_count"},
    "uniform": {"type", "mean_m", "std_m", "support"},
}


class ConfigError(ValueError):
    """Invalid run configuration; message names the offending key path."""


class RunConfig:
    """Validated experiment description plus output/verbosity settings."""

    def __init__(self, densities_per_km, segment_length_m, policy, methods,
                 direction, trials, master_seed, output=None, workers=1, verbosity=0):
        self.densities_per_km = tuple(densities_per_km)
        self.segment_length_m = segment_length_m
        self.policy = policy
        self.methods = tuple(methods)
        self.direction = direction
        self.trials = trials
        self.master_seed = master_seed
        self.output = output
        self.workers = workers
        self.verbosity = verbosity

    def experiment_spec(self) -> ExperimentSpec:
        return ExperimentSpec(
            densities_per_km=self.densities_per_km,
            segment_length_m=self.segment_length_m,
            policy=self.policy,
            methods=self.methods,
            direction=self.direction,
            trials=self.trials,
            master_seed=self.master_seed,
        )


# --- config assembly ---------------------------------------------------------


def _positive_number(raw, key):
    if not isinstance(raw, (int, float)) or isinstance(raw, bool) or raw <= 0:
        raise ConfigError(f"{key}: expected a positive number, got {raw!r}")
    return float(raw)


def _densities_from_raw(raw, key="densities_per_km"):
    if isinstance(raw, dict):
        unknown = set(raw) - {"start", "stop", "step"}
        if unknown:
            raise ConfigError(f"{key}: unknown keys {sorted(unknown)}")
        try:
            start, stop = raw["start"], raw["stop"]
        except KeyError as missing:
            raise ConfigError(f"{key}.{missing.args[0]}: required for a range grid") from None
        step = raw.get("step", 1)
        start = _positive_number(start, f"{key}.start")
        stop = _positive_number(stop, f"{key}.stop")
        step = _positive_number(step, f"{key}.step")
        if stop < start:
            raise ConfigError(f"{key}: stop {stop:g} is below start {start:g}")
        values = []
        k = 0
        while True:
            value = start + k * step
            if value > stop + 1e-9:
                break
            values.append(value)
            k += 1
        return tuple(values)
    if isinstance(raw, (list, tuple)):
        if not raw:
            raise ConfigError(f"{key}: density grid must not be empty")
        return tuple(_positive_number(v, f"{key}[{i}]") for i, v in enumerate(raw))
    raise ConfigError(f"{key}: expected a list or a start/stop/step object, got {raw!r}")


def _policy_from_raw(raw, key="range_policy"):
    if not isinstance(raw, dict):
        raise ConfigError(f"{key}: expected an object, got {raw!r}")
    kind = raw.get("type")
    if kind not in _POLICY_KEYS:
        raise ConfigError(f"{key}.type: expected one of {sorted(_POLICY_KEYS)}, got {kind!r}")
    unknown = set(raw) - _POLICY_KEYS[kind]
    if unknown:
        raise ConfigError(f"{key}: unknown keys {sorted(unknown)} for type {kind!r}")
    try:
        if kind == "fixed":
            return FixedRange(range_m=_positive_number(raw["range_m"], f"{key}.range_m"))
        if kind == "two_tier":
            fraction = raw["fraction_high"]
            if not isinstance(fraction, (int, float)) or isinstance(fraction, bool) \
                    or not 0.0 <= fraction <= 1.0:
                raise ConfigError(f"{key}.fraction_high: must be within [0, 1], got {fraction!r}")
            return TwoTierRange(
                range_low_m=_positive_number(raw["range_low_m"], f"{key}.range_low_m"),
                range_high_m=_positive_number(raw["range_high_m"], f"{key}.range_high_m"),
                fraction_high=float(fraction),
                exact_count=bool(raw.get("exact_count", False)),
            )
        support = raw.get("support", "continuous")
        if not isinstance(support, str):
            support = tuple(float(v) for v in support)
        return UniformRange(
            mean_m=_positive_number(raw["mean_m"], f"{key}.mean_m"),
            std_m=_positive_number(raw["std_m"], f"{key}.std_m"),
            support=support,
        )
    except KeyError as missing:
        raise ConfigError(f"{key}.{missing.args[0]}: required for type {kind!r}") from None
    except ConfigError:
        raise
    except ValueError as err:
        raise ConfigError(f"{key}: {err}") from None


def load_config_file(path) -> dict:
    try:
        with open(path) as handle:
            raw = json.load(handle)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file {path}: not valid JSON ({err})") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path}: top level must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"config file {path}: unknown keys {sorted(unknown)}")
    return raw


def _flag_policy(args) -> dict | None:
    """Translate policy flags into the config-file schema (None if absent)."""
    if getattr(args, "policy", None) is None and getattr(args, "comm_range", None) is None:
        return None
    kind = args.policy or "fixed"
    raw = {"type": kind}
    if kind == "fixed":
        if args.comm_range is None:
            raise ConfigError("range_policy.range_m: --range is required for a fixed policy")
        raw["range_m"] = args.comm_range
    elif kind == "two_tier":
        for flag, key in (("range_low", "range_low_m"), ("range_high", "range_high_m"),
                          ("fraction_high", "fraction_high")):
            value = getattr(args, flag)
            if value is None:
                raise ConfigError(f"range_policy.{key}: --{flag.replace('_', '-')} is required "
                                  "for a two_tier policy")
            raw[key] = value
        if args.exact_count:
            raw["exact_count"] = True
    else:
        if args.mean is None or args.std is None:
            raise ConfigError("range_policy: --mean and --std are required for a uniform policy")
        raw.update(mean_m=args.mean, std_m=args.std)
        if args.support:
            raw["support"] = [float(v) for v in args.support.split(",")]
    return raw


def parse_config(file_config: dict | None = None, flags=None) -> RunConfig:
    """Merge hard defaults, a config-file dict, and CLI flags (flags win),
    then validate everything with key-path error messages."""
    cfg = dict(file_config or {})
    args = flags or argparse.Namespace()

    if getattr(args, "density", None):
        cfg["densities_per_km"] = list(args.density)
    elif getattr(args, "density_start", None) is not None \
            or getattr(args, "density_stop", None) is not None:
        if args.density_start is None or args.density_stop is None:
            raise ConfigError("densities_per_km: both --density-start and --density-stop "
                              "are required for a range grid")
        cfg["densities_per_km"] = {
            "start": args.density_start, "stop": args.density_stop,
            "step": args.density_step if args.density_step is not None else 1,
        }
    flag_policy = _flag_policy(args)
    if flag_policy is not None:
        cfg["range_policy"] = flag_policy
    for flag, key in (("segment_length", "segment_length_m"), ("trials", "trials"),
                      ("seed", "master_seed"), ("direction", "direction")):
        value = getattr(args, flag, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, "method", None):
        cfg["methods"] = list(args.method)

    if "densities_per_km" not in cfg:
        raise ConfigError("densities_per_km: required (config key or --density flags)")
    densities = _densities_from_raw(cfg["densities_per_km"])
    if "range_policy" not in cfg:
        raise ConfigError("range_policy: required (config key or --policy/--range flags)")
    policy = _policy_from_raw(cfg["range_policy"])

    segment_length = _positive_number(
        cfg.get("segment_length_m", DEFAULT_SEGMENT_LENGTH_M), "segment_length_m")

    direction = cfg.get("direction")
    if direction is None:
        direction = "undirected" if isinstance(policy, FixedRange) else "upward"
    if direction not in montecarlo.DIRECTIONS:
        raise ConfigError(f"direction: expected one of {montecarlo.DIRECTIONS}, got {direction!r}")

    methods = cfg.get("methods")
    if methods is None:
        methods = list(TRIAL_METHODS) + ["analytic"]
        if not isinstance(policy, FixedRange):
            methods.append("analytic-chain")
    if not isinstance(methods, (list, tuple)) or not methods:
        raise ConfigError("methods: expected a non-empty list")
    for i, method in enumerate(methods):
        if method not in VALID_METHODS:
            raise ConfigError(f"methods[{i}]: unknown method {method!r}; "
                              f"valid: {sorted(VALID_METHODS)}")

    trials = cfg.get("trials")
    if trials is None:
        spectral = {"laplacian", "exponent"} & set(methods)
        trials = DEFAULT_SPECTRAL_TRIALS if spectral else DEFAULT_TRAVERSAL_TRIALS
    if not isinstance(trials, int) or isinstance(trials, bool) or trials < 1:
        raise ConfigError(f"trials: expected a positive integer, got {trials!r}")

    master_seed = cfg.get("master_seed", DEFAULT_MASTER_SEED)
    if not isinstance(master_seed, int) or isinstance(master_seed, bool):
        raise ConfigError(f"master_seed: expected an integer, got {master_seed!r}")

    run = RunConfig(
        densities_per_km=densities, segment_length_m=segment_length, policy=policy,
        methods=methods, direction=direction, trials=trials, master_seed=master_seed,
        output=getattr(args, "output", None),
        workers=getattr(args, "workers", None) or 1,
        verbosity=getattr(args, "verbose", 0) or 0,
    )
    try:
        run.experiment_spec()
    except ValueError as err:
        raise ConfigError(str(err)) from None
    return run


# --- CSV emission -------------------------------------------------------------


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def emit_csv(table, path) -> Path:
    """Write estimates as CSV: fixed header, 6 significant digits, rows sorted
    by density, then method, then policy label.  Deterministic byte-for-byte."""
    if not table:
        raise ValueError("refusing to write an empty results table")
    path = Path(path)
    rows = sorted(table, key=lambda r: (r.density_per_km, r.method, r.policy))
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join((
            _fmt(r.density_per_km), r.method, r.policy, _fmt(r.p_hat),
            _fmt(r.stderr), str(r.trials), str(r.master_seed),
        )))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path):
    """Parse an emitted CSV back into plain dict rows (floats re-parsed)."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: unexpected CSV header")
    names = CSV_HEADER.split(",")
    out = []
    for line in lines[1:]:
        parts = line.split(",")
        row = dict(zip(names, parts))
        for key in ("density_per_km", "p_hat", "stderr"):
            row[key] = float(row[key])
        for key in ("trials", "master_seed"):
            row[key] = int(row[key])
        out.append(row)
    return out


# --- figure presets -------------------------------------------------------------


def _preset_specs(name: str, master_seed: int, trials_traversal: int, trials_spectral: int):
    if name == "fig1":
        for comm_range in (500.0, 750.0, 1000.0):
            policy = FixedRange(comm_range)
            yield ExperimentSpec(PRESET_DENSITIES, DEFAULT_SEGMENT_LENGTH_M, policy,
                                 ("oracle", "chain", "analytic"), "undirected",
                                 trials_traversal, master_seed)
            yield ExperimentSpec(PRESET_DENSITIES, DEFAULT_SEGMENT_LENGTH_M, policy,
                                 ("laplacian", "exponent"), "undirected",
                                 trials_spectral, master_seed)
        return
    if name == "fig5":
        policies = [TwoTierRange(500.0, 1000.0, f) for f in (0.0, 0.25, 0.5, 0.75, 1.0)]
    elif name == "fig6":
        policies = [UniformRange(m, 100.0) for m in (500.0, 750.0, 1000.0)]
    else:
        raise ConfigError(f"unknown preset {name!r}; valid: {PRESET_NAMES}")
    for policy in policies:
        yield ExperimentSpec(PRESET_DENSITIES, DEFAULT_SEGMENT_LENGTH_M, policy,
                             ("chain", "analytic", "analytic-chain"), "upward",
                             trials_traversal, master_seed)
        yield ExperimentSpec(PRESET_DENSITIES, DEFAULT_SEGMENT_LENGTH_M, policy,
                             ("laplacian",), "upward", trials_spectral, master_seed)


def run_figure_preset(name: str, master_seed: int = DEFAULT_MASTER_SEED,
                      trials_traversal: int = DEFAULT_TRAVERSAL_TRIALS,
                      trials_spectral: int = DEFAULT_SPECTRAL_TRIALS,
                      outdir=".", workers: int = 1, verbose: int = 0) -> Path:
    """Run one canned experiment family and write <outdir>/<name>.csv.

    fig1: fixed ranges 500/750/1000 m, undirected, all methods + closed form.
    fig5: upward two-tier 500/1000 m mixes at five high-range fractions.
    fig6: upward uniform random ranges, means 500/750/1000 m, std 100 m.
    """
    table = []
    for spec in _preset_specs(name, master_seed, trials_traversal, trials_spectral):
        if verbose:
            print(f"preset {name}: {ranges.policy_label(spec.policy)} "
                  f"methods={','.join(spec.methods)} trials={spec.trials}", file=sys.stderr)
        table.extend(montecarlo.sweep(spec, workers=workers))
    return emit_csv(table, Path(outdir) / f"{name}.csv")


# --- selftest ---------------------------------------------------------------


def _golden_three_vehicle():
    """The two-range three-vehicle example with known matrices and verdicts."""
    spacing = traffic.spacing_matrix(traffic.HeadwayVector(np.array([200.0, 400.0])))
    assignment = ranges.RangeAssignment(np.array([300.0, 250.0, 500.0]))
    return graphs.build_adjacency(spacing, assignment)


def _check(name, ok, detail=""):
    status = "ok" if ok else "FAIL"
    print(f"{status:4s} - {name}" + (f" ({detail})" if detail and not ok else ""))
    return ok


def selftest(verbose: int = 0) -> int:
    """Golden matrix checks plus small-scale cross-method equivalences."""
    ok = True
    adjacency = _golden_three_vehicle()
    expected_full = np.array([[0, 1, 0], [1, 0, 0], [0, 1, 0]], dtype=bool)
    ok &= _check("three-vehicle adjacency", np.array_equal(adjacency.entries, expected_full))

    upward = graphs.project(adjacency, "upward")
    downward = graphs.project(adjacency, "downward")
    sym_up = graphs.symmetrize(upward)
    sym_down = graphs.symmetrize(downward)
    ok &= _check("upward projection",
                 np.array_equal(upward.entries, np.triu(expected_full, 1)))
    ok &= _check("downward projection",
                 np.array_equal(downward.entries, np.tril(expected_full, -1)))
    ok &= _check("symmetrized upward",
                 np.array_equal(sym_up.entries,
                                np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=bool)))
    ok &= _check("symmetrized downward",
                 np.array_equal(sym_down.entries,
                                np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=bool)))

    lap_up = graphs.laplacian(sym_up)
    lap_down = graphs.laplacian(sym_down)
    ok &= _check("upward pseudo-Laplacian",
                 np.array_equal(lap_up.entries,
                                np.array([[1., -1., 0.], [-1., 1., 0.], [0., 0., 0.]])))
    ok &= _check("downward pseudo-Laplacian",
                 np.array_equal(lap_down.entries,
                                np.array([[1., -1., 0.], [-1., 2., -1.], [0., -1., 1.]])))
    eig_up = connectivity.eigenvalues_symmetric(lap_up).eigenvalues
    eig_down = connectivity.eigenvalues_symmetric(lap_down).eigenvalues
    ok &= _check("upward spectrum {0, 0, 2}",
                 bool(np.allclose(eig_up, [0.0, 0.0, 2.0], atol=1e-9)))
    ok &= _check("downward spectrum {0, 1, 3}",
                 bool(np.allclose(eig_down, [0.0, 1.0, 3.0], atol=1e-9)))
    ok &= _check("downward connected, upward not",
                 connectivity.is_connected_laplacian(lap_down)
                 and not connectivity.is_connected_laplacian(lap_up))

    # exact-length walk verdict equals the consecutive-chain test on every
    # small index-increasing pattern
    mismatch = 0
    for n in range(2, 7):
        for pattern in _interval_patterns(n):
            a = graphs.Adjacency(pattern, "upward")
            if connectivity.is_connected_exponent(a) != connectivity.consecutive_chain(a):
                mismatch += 1
    ok &= _check("exact-walk verdict == chain on small one-way patterns",
                 mismatch == 0, f"{mismatch} mismatches")

    # all verdict routes agree under a shared fixed range
    rng = np.random.default_rng(7)
    disagreements = 0
    for _ in range(200):
        scenario = traffic.TrafficScenario(rng.uniform(0.002, 0.02), 3000.0)
        headways = traffic.sample_headways(scenario, rng)
        assignment = ranges.assign_ranges(FixedRange(rng.uniform(100, 900)),
                                          scenario.vehicle_count, rng)
        adjacency = graphs.build_adjacency(traffic.spacing_matrix(headways), assignment)
        spectral = connectivity.is_connected_laplacian(graphs.laplacian(adjacency))
        exponent = connectivity.is_connected_exponent(adjacency)
        union_find = connectivity.oracle_components(adjacency) == 1
        if not spectral == exponent == union_find:
            disagreements += 1
    ok &= _check("fixed-range methods agree on 200 random snapshots",
                 disagreements == 0, f"{disagreements} disagreements")

    # zero-eigenvalue count equals union-find component count
    mismatch = 0
    for _ in range(200):
        scenario = traffic.TrafficScenario(rng.uniform(0.001, 0.02), 4000.0)
        headways = traffic.sample_headways(scenario, rng)
        assignment = ranges.assign_ranges(FixedRange(rng.uniform(50, 700)),
                                          scenario.vehicle_count, rng)
        adjacency = graphs.build_adjacency(traffic.spacing_matrix(headways), assignment)
        spectral = connectivity.eigenvalues_symmetric(graphs.laplacian(adjacency))
        if connectivity.component_count(spectral) != connectivity.oracle_components(adjacency):
            mismatch += 1
    ok &= _check("zero-eigenvalue count == union-find components (200 snapshots)",
                 mismatch == 0, f"{mismatch} mismatches")

    # grid-aligned gaps make spacing sums exact
    scenario = traffic.TrafficScenario(0.01, 10_000.0)
    spacing = traffic.spacing_matrix(traffic.sample_headways(scenario, np.random.default_rng(3)))
    s = spacing.entries
    exact = all(
        np.array_equal(s[:j, j + 1:], s[:j, j:j + 1] + s[j:j + 1, j + 1:])
        for j in range(1, spacing.size - 1)
    )
    ok &= _check("spacing additivity is exact", exact)

    print("selftest:", "all checks passed" if ok else "FAILURES above")
    return 0 if ok else 1


def _interval_patterns(n: int):
    """All strictly-upper-triangular boolean matrices whose rows are prefix
    patterns (each transmitter covers a contiguous run of successors)."""
    import itertools

    spans = [range(n - i) for i in range(n - 1)]
    for lengths in itertools.product(*spans):
        entries = np.zeros((n, n), dtype=bool)
        for i, length in enumerate(lengths):
            entries[i, i + 1:i + 1 + length] = True
        yield entries


# --- subcommands --------------------------------------------------------------


def _warn_density(cfg: RunConfig) -> None:
    worst = max(cfg.densities_per_km)
    if worst > traffic.FREE_FLOW_MAX_DENSITY_PER_KM:
        print(f"warning: density {worst:g} veh/km exceeds the free-flow regime "
              f"(<= {traffic.FREE_FLOW_MAX_DENSITY_PER_KM:g} veh/km) the headway "
              "model assumes", file=sys.stderr)


def _print_estimates(rows) -> None:
    print(f"{'density/km':>10}  {'method':<14} {'p_hat':>9} {'stderr':>9} {'trials':>7}")
    for r in sorted(rows, key=lambda r: (r.density_per_km, r.method, r.policy)):
        print(f"{r.density_per_km:>10.6g}  {r.method:<14} {r.p_hat:>9.6g} "
              f"{r.stderr:>9.6g} {r.trials:>7}")


def _default_outdir(args) -> Path:
    if getattr(args, "output_dir", None):
        return Path(args.output_dir)
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def _cmd_single(args) -> int:
    cfg = parse_config(load_config_file(args.config) if args.config else None, args)
    if len(cfg.densities_per_km) != 1:
        raise ConfigError("densities_per_km: the single command takes exactly one density")
    _warn_density(cfg)
    rows = montecarlo.estimate(cfg.experiment_spec(), 0, workers=cfg.workers)
    _print_estimates(rows)
    if cfg.output:
        print(f"wrote {emit_csv(rows, cfg.output)}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = parse_config(load_config_file(args.config) if args.config else None, args)
    _warn_density(cfg)
    rows = montecarlo.sweep(cfg.experiment_spec(), workers=cfg.workers)
    if cfg.output:
        print(f"wrote {emit_csv(rows, cfg.output)}")
    else:
        _print_estimates(rows)
    return 0


def _cmd_analytic(args) -> int:
    cfg = parse_config(load_config_file(args.config) if args.config else None, args)
    keep = tuple(m for m in cfg.methods if m in ANALYTIC_METHODS) or ("analytic",)
    if "analytic-chain" in keep and isinstance(cfg.policy, FixedRange):
        keep = tuple(m for m in keep if m != "analytic-chain")
    cfg.methods = keep
    cfg.trials = 1
    _warn_density(cfg)
    rows = montecarlo.sweep(cfg.experiment_spec())
    if cfg.output:
        print(f"wrote {emit_csv(rows, cfg.output)}")
    else:
        _print_estimates(rows)
    return 0


def _cmd_figure(args) -> int:
    path = run_figure_preset(
        args.name,
        master_seed=args.seed if args.seed is not None else DEFAULT_MASTER_SEED,
        trials_traversal=args.trials or DEFAULT_TRAVERSAL_TRIALS,
        trials_spectral=args.trials or DEFAULT_SPECTRAL_TRIALS,
        outdir=_default_outdir(args),
        workers=args.workers or 1,
        verbose=args.verbose,
    )
    print(f"wrote {path}")
    return 0


def _cmd_compare(args) -> int:
    cfg = parse_config(load_config_file(args.config) if args.config else None, args)
    _warn_density(cfg)
    try:
        report = montecarlo.compare_methods(cfg.experiment_spec(), workers=cfg.workers)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    print(f"{'density/km':>10}  {'methods':<24} {'disagree':>9} {'trials':>7}")
    total = 0
    for row in report:
        total += row.count
        print(f"{row.density_per_km:>10.6g}  {row.method_a + ' vs ' + row.method_b:<24} "
              f"{row.count:>9} {row.trials:>7}")
    print(f"total disagreements: {total}")
    if cfg.output:
        lines = ["density_per_km,method_a,method_b,disagreements,trials"]
        lines += [f"{_fmt(r.density_per_km)},{r.method_a},{r.method_b},{r.count},{r.trials}"
                  for r in report]
        Path(cfg.output).write_text("\n".join(lines) + "\n")
        print(f"wrote {cfg.output}")
    return 0


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--density", action="append", type=float,
                        help="density in veh/km (repeatable)")
    parser.add_argument("--density-start", type=float)
    parser.add_argument("--density-stop", type=float)
    parser.add_argument("--density-step", type=float)
    parser.add_argument("--segment-length", dest="segment_length", type=float,
                        help="road length in meters (default 10000)")
    parser.add_argument("--policy", choices=("fixed", "two_tier", "uniform"))
    parser.add_argument("--range", dest="comm_range", type=float,
                        help="fixed communication range in meters")
    parser.add_argument("--range-low", dest="range_low", type=float)
    parser.add_argument("--range-high", dest="range_high", type=float)
    parser.add_argument("--fraction-high", dest="fraction_high", type=float)
    parser.add_argument("--exact-count", dest="exact_count", action="store_true",
                        help="two-tier: assign exactly round(fraction*n) high ranges")
    parser.add_argument("--mean", type=float, help="uniform policy mean range (m)")
    parser.add_argument("--std", type=float, help="uniform policy std dev (m)")
    parser.add_argument("--support", help="comma-separated discrete range levels (m)")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--method", action="append", choices=VALID_METHODS,
                        help="method to run (repeatable)")
    parser.add_argument("--direction", choices=montecarlo.DIRECTIONS)
    parser.add_argument("--output", help="CSV output path")
    parser.add_argument("--workers", type=int, help="parallel worker processes")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vanetconn",
        description="Connectivity-probability estimation for 1-D highway "
                    "vehicle networks by spectral, walk-counting, traversal, "
                    "and closed-form methods.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text, handler in (
        ("single", "estimate at one density", _cmd_single),
        ("sweep", "estimate over a density grid", _cmd_sweep),
        ("analytic", "closed-form curves only (no trials)", _cmd_analytic),
        ("compare", "per-realization method agreement audit", _cmd_compare),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_experiment_flags(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("figure", help="run a canned preset and write its CSV")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int,
                   help="override trial count for every method class")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--workers", type=int)
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.set_defaults(handler=_cmd_figure)

    p = sub.add_parser("selftest", help="run built-in golden checks")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.set_defaults(handler=lambda args: selftest(args.verbose))

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
