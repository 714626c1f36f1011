"""
condlab Command Line.

Every experiment of the laboratory is one subcommand. Results are written as a CSV
(or JSON) table next to a run manifest that records the normalised argument list,
every resolved parameter and the SHA-256 digest of the output, so that
``condlab verify <manifest>`` can replay the run and compare bytes. Without ``--out``
the table goes to stdout and the manifest to stderr.

Exit codes: 0 on success, 1 for usage errors (bad flags, parameters outside their
domain, wrong phase), 2 for numerical failures (no root, non-convergence,
irreproducible output).
"""
from __future__ import annotations

import argparse
import sys
import tempfile
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, NoReturn, Sequence

import numpy as np

from . import __version__
from .core import distributions as dist
from .core import kingman as km
from .core import panetwork as net
from .core import permutations as perm
from .core.analysis import FIT_GRID, PLATEAU_X, fit_gamma_shape
from .core.config import get_config, known_keys, using
from .core.distributions import FitnessDistribution, parse_distribution, quadrature_self_check
from .core.io import (
    RunManifest, load, manifest_path, manifest_text, read_manifest, render, save, sha256_bytes, sha256_file,
    write_manifest,
)
from .core.plotting import plot_table
from .core.random import replica_matrix, resolve_seed, stream
from .core.renewal import malthusian_root, solve, tilted_sum
from .core.table import ResultTable, format_value
from .exceptions import CondlabError, NumericalError, ReproducibilityError, UsageError

PROG = "condlab"

# Flags that never enter the normalised argument list of a manifest.
_VOLATILE = frozenset({"out", "plot", "config", "workers"})
_ALIASES = {"lambda": "lam"}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class _Command:
    handler: Callable[[dict[str, Any]], ResultTable]
    help: str
    defaults: dict[str, Any] = field(default_factory=dict)
    seeded: bool = False

# =========================================================================
# ARGUMENT TYPES
# =========================================================================

def _float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got '{text}'") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values

def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got '{text}'") from None

def _flag_bool(text: str) -> bool:
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got '{text}'")

def _znorm(text: str) -> str:
    value = str(text).strip().lower()
    if value not in ("adaptive", "default-det"):
        raise argparse.ArgumentTypeError("expected 'adaptive' or 'default-det'")
    return value

# name -> (type, help). Every flag defaults to None so that explicit values can be
# told apart from config-file values and subcommand defaults.
_FLAGS: dict[str, tuple[Callable[[str], Any], str]] = {
    "alpha": (float, "tail exponent of the mutant fitness law q = polytail(alpha)"),
    "beta": (float, "mutation probability of the Kingman model"),
    "p0": (str, "initial fitness law: polytail:A, point:A or grid:x1@w1,..."),
    "n": (int, "generation, permutation size or network size"),
    "x": (_float_list, "comma-separated wave coordinates"),
    "h": (_float_list, "comma-separated tail widths in [0, 1]"),
    "m": (_int_list, "comma-separated right-edge cutoffs"),
    "gamma": (float, "cycle-weight exponent (theta_j = j^gamma)"),
    "lam": (float, "adaptive attachment rate lambda"),
    "znorm": (_znorm, "network normalisation: adaptive or default-det"),
    "bins": (int, "grid cells of the direct iteration"),
    "plateau": (float, "plateau used to normalise a fitted wave"),
    "input": (str, "CSV/JSON table with columns x and mass"),
    "brute_check": (_flag_bool, "verify against full enumeration of S_n"),
    "seed": (int, "master seed (falls back to CONDLAB_SEED)"),
    "replicas": (int, "number of Monte Carlo replicas"),
    "workers": (int, "joblib workers for replicas"),
    "out": (str, "output table path"),
    "format": (str, "output format: csv, json or auto"),
    "plot": (str, "SVG plot path"),
    "config": (str, "key = value configuration file"),
}

_BASE_DEFAULTS: dict[str, Any] = {
    "alpha": 2.0,
    "beta": 0.25,
    "p0": "point:0.5",
    "lam": 0.5,
    "znorm": "adaptive",
    "replicas": 100,
    "format": "auto",
    "brute_check": False,
}

def _add_flags(parser: argparse.ArgumentParser) -> None:
    for name, (kind, text) in _FLAGS.items():
        if name == "brute_check":
            parser.add_argument("--brute-check", dest=name, action="store_const", const=True, default=None, help=text)
        elif name == "lam":
            parser.add_argument("--lambda", dest=name, type=kind, default=None, help=text)
        else:
            parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=kind, default=None, help=text)

# =========================================================================
# PARAMETER HELPERS
# =========================================================================

def _model(p: dict[str, Any]) -> km.ModelParams:
    q = FitnessDistribution.polytail(p["alpha"])
    if get_config("tail_method") == "quadrature":
        quadrature_self_check(q)
    return km.ModelParams(p["beta"], q, parse_distribution(p["p0"]))

def _mutant(p: dict[str, Any]) -> FitnessDistribution:
    return FitnessDistribution.polytail(p["alpha"])

def _rule(p: dict[str, Any]) -> net.NormalizationRule:
    if p["znorm"] == "adaptive":
        return net.NormalizationRule.adaptive(p["lam"])
    return net.NormalizationRule.default_deterministic(p["alpha"])

# =========================================================================
# KINGMAN MODEL
# =========================================================================

def _cmd_gamma(p: dict[str, Any]) -> ResultTable:
    return ResultTable.scalar("gamma", km.gamma_beta(_model(p)))

def _cmd_kingman_w(p: dict[str, Any]) -> ResultTable:
    params = _model(p)
    n = int(p["n"])
    u = km.weight_sequence(params, n + 1)
    k = np.arange(1, n + 1)
    values = u.values[:n]
    meta: dict[str, Any] = {"regime": km.regime(params)}
    if meta["regime"] == "condensation":
        meta["asymptotic_constant"] = km.lemma1_constant(params, u)
    return ResultTable.from_columns(
        {
            "n": k,
            "u": values,
            "log_W": np.log(values) + (k - 1) * np.log1p(-params.beta),
            "mean_fitness": (1.0 - params.beta) * u.values[1:] / values,
            "u_n_alpha": km.lemma1_diagnostic(params, u, k),
        },
        meta,
    )

def _cmd_kingman_wave(p: dict[str, Any]) -> ResultTable:
    params = _model(p)
    wave = km.wave_profile(params, int(p["n"]), p["x"])
    return ResultTable.from_columns(
        {"x": wave.xs, "mass": wave.masses, "limit": wave.limits, "rel_err": wave.rel_err},
        {"gamma": km.gamma_beta(params), "n": wave.n},
    )

def _cmd_kingman_grid_check(p: dict[str, Any]) -> ResultTable:
    params = _model(p)
    n, hs = int(p["n"]), np.asarray(p["h"], dtype=float)
    direct = dist.tail_masses(km.direct_iterate(params, int(p["bins"]), n), hs)
    exact = km.mass_profile(params, km.weight_sequence(params, n), n, hs)
    return ResultTable.from_columns(
        {"h": hs, "direct": direct, "moment": exact, "abs_diff": np.abs(direct - exact)},
        {"bins": int(p["bins"]), "n": n},
    )

def _cmd_limit_mass(p: dict[str, Any]) -> ResultTable:
    params = _model(p)
    hs = np.asarray(p["h"], dtype=float)
    return ResultTable.from_columns(
        {"h": hs, "mass": [km.limit_mass(params, float(h)) for h in hs]}, {"gamma": km.gamma_beta(params)}
    )

def _cmd_renewal_solve(p: dict[str, Any]) -> ResultTable:
    params = _model(p)
    system = km.renewal_system(params)
    n = int(p["n"])
    k = np.arange(1, n + 1)
    return ResultTable.from_columns(
        {"n": k, "kernel": system.kernel(k), "forcing": system.forcing(k), "u": solve(system, n)},
        {"kernel_total": system.kernel_total, "defective": system.defective},
    )

# =========================================================================
# PERMUTATIONS
# =========================================================================

# the tilted-sum scan reads whole chunks of h, so short requests are padded
_MALTHUS_MIN_TERMS = 4096

def _cmd_malthus(p: dict[str, Any]) -> ResultTable:
    h = perm.compute_h(perm.CycleWeights.power(p["gamma"]), max(int(p["n"]), _MALTHUS_MIN_TERMS))
    c = malthusian_root(h)
    return ResultTable.from_columns({"c_star": [c], "residual": [tilted_sum(h, c).value - 1.0]})

def _cmd_perm_h(p: dict[str, Any]) -> ResultTable:
    w = perm.CycleWeights.power(p["gamma"])
    n = int(p["n"])
    h = perm.compute_h(w, n)
    table = ResultTable.from_columns({"n": np.arange(n + 1), "h": h.values})
    if p["brute_check"]:
        if n > 8:
            raise UsageError(f"--brute-check enumerates S_n and is limited to n <= 8, got n={n}")
        brute = np.array([1.0] + [perm.brute_force_h(w, k) for k in range(1, n + 1)])
        if not np.allclose(h.values, brute, rtol=1e-12, atol=0.0):
            worst = int(np.argmax(np.abs(h.values - brute)))
            raise NumericalError(f"h_{worst} = {h.values[worst]!r} disagrees with enumeration {brute[worst]!r}")
        table.add("brute", brute)
    return table

def _cmd_perm_sample(p: dict[str, Any]) -> ResultTable:
    w = perm.CycleWeights.power(p["gamma"])
    n = int(p["n"])
    s = perm.sample_cycles(w, perm.compute_h(w, n), n, stream(p["seed"], 0), stream=0)
    lengths = np.asarray(s.lengths, dtype=np.int64)
    return ResultTable.from_columns(
        {"rank": np.arange(1, lengths.size + 1), "length": lengths, "mass": lengths / n},
        {"cycles": int(lengths.size), "seed": p["seed"]},
    )

def _cmd_perm_wave_left(p: dict[str, Any]) -> ResultTable:
    est = perm.left_wave_mc(
        perm.CycleWeights.power(p["gamma"]), int(p["n"]), p["x"], int(p["replicas"]), p["seed"], p["workers"]
    )
    return ResultTable.from_columns(
        {"x": est.points, "mean": est.mean, "stderr": est.stderr, "limit": est.comparator, "exact": est.exact},
        {"replicas": est.replicas, "seed": est.seed},
    )

def _cmd_perm_wave_right(p: dict[str, Any]) -> ResultTable:
    w = perm.CycleWeights.power(p["gamma"])
    est = perm.right_wave_mc(w, int(p["n"]), p["m"], int(p["replicas"]), p["seed"], p["workers"])
    h = perm.compute_h(w, max(int(est.points.max()), 1))
    giant = [perm.giant_cycle_limit(w, int(m), h) for m in est.points]
    return ResultTable.from_columns(
        {
            "m": est.points.astype(np.int64),
            "mean": est.mean,
            "stderr": est.stderr,
            "comparator": est.comparator,
            "exact": est.exact,
            "giant": giant,
        },
        {"replicas": est.replicas, "seed": est.seed},
    )

# =========================================================================
# NETWORKS
# =========================================================================

def _cmd_net_sim(p: dict[str, Any]) -> ResultTable:
    g = net.simulate(int(p["n"]), _rule(p), _mutant(p), seed=p["seed"])
    out = np.zeros(g.n, dtype=np.int64)
    out[1:] = g.outdegrees
    return ResultTable.from_columns(
        {"vertex": np.arange(1, g.n + 1), "fitness": g.fitness, "impact": g.impact, "outdegree": out},
        {"edges": g.edges, "total_mass": net.impact_measure(g).total, "seed": p["seed"]},
    )

def _cmd_net_phase(p: dict[str, Any]) -> ResultTable:
    q, lam = _mutant(p), float(p["lam"])
    phase = net.phase_classify(q, lam)
    return ResultTable.from_columns(
        {
            "lambda": [lam],
            "phase": [phase],
            "gap_integral": [dist.reciprocal_gap_integral(q)],
            "lambda_star": [net.fgr_lambda_star(q, lam) if phase == "FGR" else float("nan")],
            "condensate": [net.condensate_mass(q, lam)],
            "limit_lower_half": [net.limit_measure(q, lam, 0.0, 0.5)],
        }
    )

def _cmd_net_wave(p: dict[str, Any]) -> ResultTable:
    rule, q, n = _rule(p), _mutant(p), int(p["n"])
    if rule.mode != "deterministic":
        raise UsageError("net-wave needs --znorm default-det")
    rows = net.simulate_ensemble(
        n, rule, q, int(p["replicas"]), seed=p["seed"], workers=p["workers"], statistic=net.wave_statistic(p["x"])
    )
    wave = net.wave_estimate(replica_matrix(rows), p["x"], n, rule, q)
    return ResultTable.from_columns(
        {"x": wave.xs, "mean": wave.mean, "stderr": wave.stderr, "comparator": wave.comparator},
        {
            "gamma_estimate": wave.gamma_estimate,
            "monotone": wave.monotone,
            "fit_shape": wave.fit.shape if wave.fit is not None else float("nan"),
            "seed": p["seed"],
        },
    )

def _cmd_fit_wave(p: dict[str, Any]) -> ResultTable:
    if p.get("input"):
        source = load(p["input"])
        for name in ("x", "mass"):
            if name not in source.columns:
                raise UsageError(f"input table {p['input']} has no '{name}' column")
        xs, masses, plateau = source["x"], source["mass"], p.get("plateau")
    else:
        params = _model(p)
        n = int(p["n"])
        grid = np.concatenate([FIT_GRID, [PLATEAU_X]])
        profile = km.wave_profile(params, n, grid)
        xs, masses = FIT_GRID, profile.masses[:-1]
        plateau = p.get("plateau") or float(profile.masses[-1])
    fit = fit_gamma_shape(xs, masses, plateau=plateau)
    return ResultTable.from_columns({"shape": [fit.shape], "plateau": [fit.mass], "ks": [fit.ks]})

_COMMANDS: dict[str, _Command] = {
    "gamma": _Command(_cmd_gamma, "condensate mass gamma(beta)"),
    "kingman-w": _Command(_cmd_kingman_w, "tilted weights u_n, W_n and mean fitness", {"n": 1000}),
    "kingman-wave": _Command(
        _cmd_kingman_wave, "wave p_n(1 - x/n, 1] against its gamma limit", {"n": 10_000, "x": (0.5, 1.0, 2.0, 4.0)}
    ),
    "kingman-grid-check": _Command(
        _cmd_kingman_grid_check, "direct grid iteration against the moment representation",
        {"n": 50, "bins": 100_000, "h": (0.01, 0.1)},
    ),
    "limit-mass": _Command(_cmd_limit_mass, "tail masses of the limit law", {"h": (0.01, 0.1, 0.25, 0.5, 1.0)}),
    "renewal-solve": _Command(_cmd_renewal_solve, "solve the model's renewal equation", {"n": 1000}),
    "malthus": _Command(_cmd_malthus, "Malthusian parameter of h_n", {"gamma": -1.0, "n": 4096}),
    "perm-h": _Command(_cmd_perm_h, "normalisation constants h_n", {"gamma": 0.0, "n": 7}),
    "perm-sample": _Command(_cmd_perm_sample, "one cycle type", {"gamma": 0.0, "n": 1000}, seeded=True),
    "perm-wave-left": _Command(
        _cmd_perm_wave_left, "Monte Carlo left-edge wave", {"gamma": 1.0, "n": 10_000, "x": (0.5, 1.0, 2.0)},
        seeded=True,
    ),
    "perm-wave-right": _Command(
        _cmd_perm_wave_right, "Monte Carlo right-edge wave", {"gamma": -1.0, "n": 20_000, "m": (0, 1, 2, 5)},
        seeded=True,
    ),
    "net-sim": _Command(_cmd_net_sim, "grow one network", {"n": 10_000}, seeded=True),
    "net-phase": _Command(_cmd_net_phase, "phase and limits under adaptive normalisation"),
    "net-wave": _Command(
        _cmd_net_wave, "network wave under deterministic normalisation",
        {"n": 10_000, "x": (0.5, 1.0, 2.0, 4.0), "znorm": "default-det", "replicas": 20},
        seeded=True,
    ),
    "fit-wave": _Command(_cmd_fit_wave, "gamma-shape fit of a wave profile", {"n": 10_000}),
}

# =========================================================================
# PARSER, CONFIG FILES AND RESOLUTION
# =========================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Numerical laboratory for condensation waves.")
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", required=True)
    for name, cmd in _COMMANDS.items():
        _add_flags(sub.add_parser(name, help=cmd.help, description=cmd.help))
    verify = sub.add_parser("verify", help="re-run a manifest and compare output digests")
    verify.add_argument("manifest", help="path to a *.manifest.json file")
    return parser

def read_config_file(path: str | Path) -> tuple[dict[str, Any], dict[str, Any]]:
    """
    Parses ``key = value`` lines (``#`` starts a comment).

    Returns the flag values and the configuration settings found in the file.
    Flag names win over configuration keys of the same name.
    """
    target = Path(path)
    if not target.exists():
        raise UsageError(f"config file not found: {target}")
    flags: dict[str, Any] = {}
    settings: dict[str, Any] = {}
    for lineno, raw in enumerate(target.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{target}:{lineno}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        key = _ALIASES.get(key, key)
        value = value.strip()
        if key in _FLAGS and key not in ("config", "out", "plot"):
            try:
                flags[key] = _FLAGS[key][0](value)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"{target}:{lineno}: bad value for '{key}': {exc}") from None
        elif key in known_keys():
            settings[key] = _coerce_setting(key, value)
        else:
            raise UsageError(f"{target}:{lineno}: unknown key '{key}'")
    return flags, settings

def _coerce_setting(key: str, value: str) -> Any:
    current = get_config(key)
    try:
        if isinstance(current, bool):
            return _flag_bool(value)
        if isinstance(current, int) or current is None:
            return int(float(value)) if "e" in value.lower() else int(value)
        if isinstance(current, float):
            return float(value)
    except (argparse.ArgumentTypeError, ValueError):
        raise UsageError(f"bad value '{value}' for setting '{key}'") from None
    return value

def _resolve(command: str, explicit: dict[str, Any], file_flags: dict[str, Any]) -> dict[str, Any]:
    params: dict[str, Any] = {name: None for name in _FLAGS}
    params.update(_BASE_DEFAULTS)
    params.update(_COMMANDS[command].defaults)
    params.update(file_flags)
    params.update({k: v for k, v in explicit.items() if k in _FLAGS and v is not None})
    return params

def normalized_argv(command: str, params: dict[str, Any]) -> list[str]:
    """The argument list that reproduces ``params`` without any config file."""
    argv = [command]
    for name, value in params.items():
        if value is None or name in _VOLATILE or value is False:
            continue
        flag = "--lambda" if name == "lam" else f"--{name.replace('_', '-')}"
        if value is True:
            argv.append(flag)
        elif isinstance(value, (tuple, list)):
            argv.extend([flag, ",".join(format_value(v) for v in value)])
        else:
            argv.extend([flag, format_value(value)])
    return argv

def _execute(command: str, params: dict[str, Any], settings: dict[str, Any]) -> ResultTable:
    with using(**settings):
        if _COMMANDS[command].seeded:
            params["seed"] = resolve_seed(params["seed"])
        return _COMMANDS[command].handler(params)

# =========================================================================
# OUTPUT
# =========================================================================

# Output key under which a manifest records the bytes a run wrote to stdout.
STDOUT_OUTPUT = "<stdout>"

def _plot(table: ResultTable, path: str, title: str) -> Path:
    x = table.names[0]
    ys = [n for n in table.names[1:] if np.issubdtype(table[n].dtype, np.number)]
    return plot_table(table, x, ys, path, title=title)

def _stdout_bytes(table: ResultTable, params: dict[str, Any]) -> bytes:
    if len(table) == 1 and len(table.names) == 1:
        return (format_value(table[table.names[0]][0]) + "\n").encode("utf-8")
    fmt = "json" if str(params.get("format")).lower() == "json" else "csv"
    return render(table, fmt)

def _manifest(command: str, params: dict[str, Any], settings: dict[str, Any], outputs: dict[str, str],
              started: float) -> RunManifest:
    parameters = {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()}
    parameters["settings"] = dict(settings)
    return RunManifest(
        subcommand=command,
        argv=normalized_argv(command, params),
        parameters=parameters,
        seed=params["seed"] if _COMMANDS[command].seeded else None,
        version=__version__,
        outputs=outputs,
        duration=time.perf_counter() - started,
    )

def _emit(command: str, params: dict[str, Any], settings: dict[str, Any], table: ResultTable, started: float) -> None:
    if params.get("plot"):
        _plot(table, params["plot"], command)
    if not params.get("out"):
        data = _stdout_bytes(table, params)
        sys.stdout.write(data.decode("utf-8"))
        sys.stdout.flush()
        manifest = _manifest(command, params, settings, {STDOUT_OUTPUT: sha256_bytes(data)}, started)
        sys.stderr.write(manifest_text(manifest))
        warnings.warn(
            "\033[33m[condlab Warning]\033[0m No --out given: results went to stdout and the manifest to stderr.",
            UserWarning,
            stacklevel=2,
        )
        return

    path = save(params["out"], table, params["format"])
    manifest = _manifest(command, params, settings, {path.name: sha256_file(path)}, started)
    write_manifest(manifest_path(path), manifest)
    print(path)

def verify(manifest_file: str | Path) -> list[str]:
    """
    Re-runs a manifest in a scratch directory and checks every recorded digest.

    Raises:
        ManifestError: If the manifest cannot be read.
        ReproducibilityError: If a re-run output differs from the recorded bytes.
    """
    m = read_manifest(manifest_file)
    if m.version != __version__:
        warnings.warn(
            f"\033[33m[condlab Warning]\033[0m Manifest was written by condlab {m.version}, "
            f"verifying with {__version__}.",
            UserWarning,
            stacklevel=2,
        )
    if m.subcommand not in _COMMANDS:
        raise UsageError(f"manifest names unknown subcommand '{m.subcommand}'")
    args = build_parser().parse_args(m.argv)
    settings = dict(m.parameters.get("settings", {}))
    params = _resolve(m.subcommand, vars(args), {})
    checked: list[str] = []
    with tempfile.TemporaryDirectory(prefix="condlab-verify-") as tmp:
        table = _execute(m.subcommand, params, settings)
        for name, expected in m.outputs.items():
            if name == STDOUT_OUTPUT:
                received = sha256_bytes(_stdout_bytes(table, params))
            else:
                received = sha256_file(save(Path(tmp) / name, table, params["format"]))
            if received != expected:
                raise ReproducibilityError(name, expected, received)
            checked.append(name)
    return checked

# =========================================================================
# ENTRY POINT
# =========================================================================

def run(argv: Sequence[str]) -> None:
    started = time.perf_counter()
    args = build_parser().parse_args(list(argv))
    if args.command == "verify":
        for name in verify(args.manifest):
            print(f"verified {name}")
        return
    file_flags, settings = read_config_file(args.config) if args.config else ({}, {})
    params = _resolve(args.command, vars(args), file_flags)
    table = _execute(args.command, params, settings)
    _emit(args.command, params, settings, table, started)

def main(argv: Sequence[str] | None = None) -> int:
    """Runs one subcommand and maps failures to exit codes (1 usage, 2 numerical)."""
    try:
        run(sys.argv[1:] if argv is None else argv)
    except NumericalError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (CondlabError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    return 0
