"""
Command-line front end.

Subcommands: ``orbit``, ``bifurcation``, ``lyapunov``, ``gate-search``,
``funcspace`` and ``map-dump``. Every run writes its data files and the
fully resolved ``run_config.json`` into ``--out``. A JSON config given
with ``--config`` supplies option values; explicit flags override it.

Exit status: 0 on success, 1 on runtime failure, 2 on usage or
validation errors.
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import export
from .analysis import SweepSpec, bifurcation_sweep, lyapunov_sweep
from .chaogate import SearchGrid, parse_function, search_configurations
from .errors import ConfigurationError, GnmError, GridTooLargeError
from .funcspace import SpaceParams, compare_spaces
from .maps import (
    GnmParams,
    Logistic,
    Sine,
    SurrogateConstants,
    Tent,
    gnm_map,
    identity_map,
    load_tabulated,
    sample_map,
)
from .oscillator import BufferFeedback, MapFeedback, iterate

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class UsageError(Exception):
    """Bad flag or config value; maps to exit status 2."""


@dataclass(frozen=True)
class Opt:
    type: object = float
    default: object = None
    help: str = ""
    choices: tuple = None
    nargs: object = None
    required: bool = False
    check: object = None  # value -> error text or None


def _positive(v):
    return None if v > 0 else "must be > 0"


def _nonneg(v):
    return None if v >= 0 else "must be >= 0"


def _at_least(k):
    return lambda v: None if v >= k else f"must be >= {k}"


def _finite(v):
    return None if math.isfinite(v) else "must be finite"


def _bias(v):
    return None if -0.5 <= v <= 0.5 else "must lie in [-0.5, 0.5] V"


def _range3(v):
    lo, hi, steps = v
    if int(steps) != steps or steps < 1:
        return "step count must be a positive integer"
    if steps > 1 and not lo < hi:
        return "needs LO < HI"
    return None


def _range2(v):
    lo, hi = v
    return None if 1 <= lo <= hi else "needs 1 <= LO <= HI"


_MAP_OPTS = {
    "map": Opt(str, "gnm", "map family", choices=("gnm", "logistic", "tent", "sine", "tabulated")),
    "r": Opt(float, 4.0, "logistic parameter", check=_finite),
    "m": Opt(float, 2.0, "tent slope", check=_finite),
    "a": Opt(float, 1.0, "sine amplitude", check=_finite),
    "mu1": Opt(float, 1.0, "TIA gain (MOhm)", check=_positive),
    "mu2": Opt(float, 0.0, "n-channel top-gate voltage (V)", check=_bias),
    "mu3": Opt(float, 0.0, "p-channel top-gate voltage (V)", check=_bias),
    "table": Opt(str, None, "x_volts,y_volts CSV for --map tabulated"),
    "vc0": Opt(float, 2.63, "surrogate cutoff voltage (V)", check=_positive),
    "k0": Opt(float, 10e-6, "surrogate peak-current scale (A)", check=_positive),
    "gamma": Opt(float, 0.0, "surrogate asymmetry", check=_nonneg),
    "topology": Opt(str, "buffer", "feedback path", choices=("buffer", "map")),
    "fb_map": Opt(str, "gnm", "feedback map for --topology map", choices=("gnm", "identity")),
    "fb_mu1": Opt(float, 1.0, "feedback map TIA gain (MOhm)", check=_positive),
    "fb_mu2": Opt(float, 0.0, "feedback map mu2 (V)", check=_bias),
    "fb_mu3": Opt(float, 0.0, "feedback map mu3 (V)", check=_bias),
}

_SWEEP_OPTS = {
    "axis": Opt(str, None, "swept parameter", choices=("mu1", "mu2", "mu3", "r", "m", "a"), required=True),
    "from": Opt(float, None, "axis start", required=True, check=_finite),
    "to": Opt(float, None, "axis end", required=True, check=_finite),
    "steps": Opt(int, None, "number of axis values", required=True, check=_at_least(2)),
    "x0": Opt(float, None, "seed voltage (default: mid-domain)"),
    "transient": Opt(int, 1000, "discarded iterations", check=_at_least(1)),
    "retained": Opt(int, 3000, "kept iterations", check=_at_least(1)),
}

_COMMON = {
    "out": Opt(str, ".", "output directory"),
    "format": Opt(str, "csv", "output format for gate-search", choices=("csv", "json")),
    "workers": Opt(int, 1, "worker processes", check=_at_least(1)),
}

COMMANDS = {
    "orbit": dict(
        _MAP_OPTS,
        x0=Opt(float, None, "seed voltage (default: mid-domain)"),
        n=Opt(int, None, "iterations", required=True, check=_at_least(1)),
        transient=Opt(int, 0, "discarded iterations", check=_nonneg),
    ),
    "bifurcation": dict(_MAP_OPTS, **_SWEEP_OPTS),
    "lyapunov": dict(
        _MAP_OPTS,
        **_SWEEP_OPTS,
        lyap_n=Opt(int, 100_000, "iterations averaged per axis value", check=_at_least(1)),
        burn=Opt(int, None, "burn-in iterations (default: --transient)", check=_nonneg),
    ),
    "gate-search": dict(
        target=Opt(str, None, "function id 0-15 or AND/OR/XOR/NAND/NOR/XNOR", required=True),
        limit=Opt(int, 10, "maximum number of results", check=_at_least(1)),
        min_margin=Opt(float, 0.0, "minimum noise margin (V)", check=_nonneg),
        mu1_range=Opt(float, [0.90, 1.05, 16], "mu1 grid LO HI STEPS", nargs=3, check=_range3),
        mu2_values=Opt(float, [-0.3, 0.0, 0.3], "mu2 grid values", nargs="+"),
        mu3_values=Opt(float, [-0.3, 0.0, 0.3], "mu3 grid values", nargs="+"),
        cb_values=Opt(int, [0, 1], "control-bit values", nargs="+"),
        vref_range=Opt(float, [0.5, 1.6, 12], "vref grid LO HI STEPS", nargs=3, check=_range3),
        n_range=Opt(int, [1, 8], "iteration range LO HI", nargs=2, check=_range2),
        allow_clipped=Opt(bool, False, "keep configurations whose orbits saturate"),
        cap=Opt(int, 10_000_000, "refuse grids larger than this", check=_at_least(1)),
        vc0=_MAP_OPTS["vc0"],
        k0=_MAP_OPTS["k0"],
        gamma=_MAP_OPTS["gamma"],
    ),
    "funcspace": dict(
        c=Opt(int, 0, "control bits", check=_nonneg),
        nmu=Opt(int, 1, "levels of the single bifurcation parameter", check=_at_least(1)),
        nmu1=Opt(int, None, "mu1 levels (default: --nmu)", check=_at_least(1)),
        nmu2=Opt(int, None, "mu2 levels (default: --nmu)", check=_at_least(1)),
        nmu3=Opt(int, None, "mu3 levels (default: --nmu)", check=_at_least(1)),
        nvref=Opt(int, 1, "comparator reference levels", check=_at_least(1)),
        n_min=Opt(int, 1, "first iteration count", check=_at_least(1)),
        n_max=Opt(int, None, "last iteration count", required=True, check=_at_least(1)),
    ),
    "map-dump": dict(_MAP_OPTS, points=Opt(int, 1024, "sample count", check=_at_least(2))),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    out: str = "."
    format: str = "csv"
    workers: int = 1

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "out": self.out,
            "format": self.format,
            "workers": self.workers,
            "options": dict(sorted(self.options.items())),
        }

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")


def _flag(name):
    return "--" + name.replace("_", "-")


def _check_value(name, opt, value):
    if value is None:
        if opt.required:
            raise UsageError(f"{_flag(name)}: required")
        return None
    try:
        if opt.nargs is not None:
            if not isinstance(value, (list, tuple)):
                raise TypeError
            value = [opt.type(v) for v in value]
            if opt.nargs != "+" and len(value) != opt.nargs:
                raise UsageError(f"{_flag(name)}: expected {opt.nargs} values")
            if not value:
                raise UsageError(f"{_flag(name)}: expected at least one value")
        elif opt.type is bool:
            if not isinstance(value, bool):
                raise TypeError
        elif opt.type is int:
            if isinstance(value, bool) or int(value) != value:
                raise TypeError
            value = int(value)
        else:
            value = opt.type(value)
    except (TypeError, ValueError):
        raise UsageError(f"{_flag(name)}: invalid value {value!r}") from None
    if opt.choices and value not in opt.choices:
        raise UsageError(f"{_flag(name)}: must be one of {', '.join(opt.choices)}")
    if opt.check is not None:
        problem = opt.check(value)
        if problem:
            raise UsageError(f"{_flag(name)}: {problem}")
    return value


def load_config(path):
    """Read a config file into ``(command, values)``; unknown keys are rejected."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("--config: top level must be an object")
    allowed = {"schema_version", "command", "out", "format", "workers", "options"}
    unknown = set(data) - allowed
    if unknown:
        raise UsageError(f"--config: unknown keys {sorted(unknown)}")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise UsageError(f"--config: schema_version must be {SCHEMA_VERSION}")
    values = {k: data[k] for k in ("out", "format", "workers") if k in data}
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise UsageError("--config: options must be an object")
    values.update(options)
    return data.get("command"), values


def resolve(command, file_values, flag_values):
    """Merge defaults, config-file values and explicit flags into a validated RunConfig."""
    table = COMMANDS[command]
    unknown = set(file_values) - set(table) - set(_COMMON)
    if unknown:
        raise UsageError(f"--config: unknown options for {command}: {sorted(unknown)}")
    merged = {}
    for name, opt in list(_COMMON.items()) + list(table.items()):
        v = flag_values.get(name, file_values.get(name, opt.default))
        merged[name] = _check_value(name, opt, v)
    common = {k: merged.pop(k) for k in _COMMON}
    return RunConfig(command, merged, common["out"], common["format"], common["workers"])


def load_run_config(path):
    command, values = load_config(path)
    if command not in COMMANDS:
        raise UsageError(f"--config: unknown command {command!r}")
    return resolve(command, values, {})


# -- builders ----------------------------------------------------------------


def _constants(o):
    return SurrogateConstants(Vc0=o["vc0"], k0=o["k0"], gamma=o["gamma"])


def _build_map(o):
    kind = o["map"]
    if kind == "gnm":
        return gnm_map(GnmParams(o["mu1"], o["mu2"], o["mu3"]), _constants(o))
    if kind == "logistic":
        return Logistic(o["r"])
    if kind == "tent":
        return Tent(o["m"])
    if kind == "sine":
        return Sine(o["a"])
    if not o["table"]:
        raise UsageError("--table: required for --map tabulated")
    return load_tabulated(o["table"])


def _build_topology(o, fw):
    if o["topology"] == "buffer":
        return BufferFeedback()
    if o["fb_map"] == "identity":
        d = fw.domain
        return MapFeedback(identity_map(d.lo, d.hi))
    return MapFeedback(gnm_map(GnmParams(o["fb_mu1"], o["fb_mu2"], o["fb_mu3"]), _constants(o)))


def _build_sweep(o):
    if o["map"] == "tabulated":
        raise UsageError("--map: tabulated maps have no sweep axis")
    fixed = {}
    if o["map"] == "gnm":
        fixed = {k: o[k] for k in ("mu1", "mu2", "mu3") if k != o["axis"]}
    family_axis = {"gnm": ("mu1", "mu2", "mu3"), "logistic": ("r",), "tent": ("m",), "sine": ("a",)}
    if o["axis"] not in family_axis[o["map"]]:
        raise UsageError(f"--axis: {o['axis']} is not a parameter of the {o['map']} map")
    if not o["from"] < o["to"]:
        raise UsageError("--from/--to: need FROM < TO")
    try:
        spec = SweepSpec(
            o["axis"], o["from"], o["to"], o["steps"], family=o["map"], fixed=fixed,
            x0=o["x0"], transient=o["transient"], retained=o["retained"],
            constants=_constants(o),
        )
    except ConfigurationError as exc:
        raise UsageError(f"--axis: {exc}") from None
    fw = spec.map_at(spec.lo)
    return replace(spec, topology=_build_topology(o, fw))


# -- commands ----------------------------------------------------------------


def cmd_orbit(cfg, out):
    o = cfg.options
    fw = _build_map(o)
    x0 = fw.domain.mid if o["x0"] is None else o["x0"]
    if x0 not in fw.domain:
        raise UsageError(f"--x0: {x0} outside map domain [{fw.domain.lo}, {fw.domain.hi}]")
    if not o["n"] > o["transient"]:
        raise UsageError("--transient: must be smaller than --n")
    orbit = iterate(fw, _build_topology(o, fw), x0, o["n"], o["transient"])
    if orbit.clipped:
        log.warning("orbit was clipped into the map domain")
    export.write_orbit_csv(out / "orbit.csv", orbit)
    return [out / "orbit.csv"]


def cmd_bifurcation(cfg, out):
    spec = _build_sweep(cfg.options)
    data = bifurcation_sweep(spec, workers=cfg.workers)
    export.write_bifurcation_csv(out / "bifurcation.csv", data)
    (out / "bifurcation.gp").write_text(export.gnuplot_bifurcation("bifurcation.csv", spec.axis))
    return [out / "bifurcation.csv", out / "bifurcation.gp"]


def cmd_lyapunov(cfg, out):
    o = cfg.options
    spec = _build_sweep(o)
    curve = lyapunov_sweep(spec, n=o["lyap_n"], burn=o["burn"], workers=cfg.workers)
    export.write_lyapunov_csv(out / "lyapunov.csv", curve)
    (out / "lyapunov.gp").write_text(export.gnuplot_lyapunov("lyapunov.csv", spec.axis))
    return [out / "lyapunov.csv", out / "lyapunov.gp"]


def cmd_gate_search(cfg, out):
    o = cfg.options
    try:
        target = parse_function(o["target"])
    except ConfigurationError as exc:
        raise UsageError(f"--target: {exc}") from None
    lo, hi, steps = o["mu1_range"]
    vlo, vhi, vsteps = o["vref_range"]
    try:
        grid = SearchGrid.from_ranges(
            mu1=(lo, hi, int(steps)),
            mu2=(0, 0, 1), mu3=(0, 0, 1),
            cb=o["cb_values"],
            vref=(vlo, vhi, int(vsteps)),
            n=tuple(o["n_range"]),
        )
        grid = SearchGrid(grid.mu1, tuple(o["mu2_values"]), tuple(o["mu3_values"]),
                          grid.cb, grid.vref, grid.n)
    except ConfigurationError as exc:
        raise UsageError(f"grid: {exc}") from None
    log.info("searching %d grid cells", grid.size)
    try:
        results = search_configurations(
            target, grid, o["min_margin"], o["limit"],
            constants=_constants(o), allow_clipped=o["allow_clipped"],
            cap=o["cap"], workers=cfg.workers,
        )
    except GridTooLargeError as exc:
        raise UsageError(f"--cap: {exc}") from None
    if cfg.format == "json":
        path = out / "gate_search.json"
        export.write_search_json(path, results)
    else:
        path = out / "gate_search.csv"
        export.write_search_csv(path, results)
    return [path]


def cmd_funcspace(cfg, out):
    o = cfg.options
    if o["n_min"] > o["n_max"]:
        raise UsageError("--n-min: must not exceed --n-max")
    nmu = o["nmu"]
    p = SpaceParams(
        c=o["c"], n_mu=nmu,
        n_mu1=o["nmu1"] or nmu, n_mu2=o["nmu2"] or nmu, n_mu3=o["nmu3"] or nmu,
        n_vref=o["nvref"],
    )
    rows = compare_spaces(p, (o["n_min"], o["n_max"]))
    export.write_funcspace_csv(out / "funcspace.csv", rows)
    (out / "funcspace.gp").write_text(export.gnuplot_funcspace("funcspace.csv"))
    return [out / "funcspace.csv", out / "funcspace.gp"]


def cmd_map_dump(cfg, out):
    fw = _build_map(cfg.options)
    xs, ys = sample_map(fw, cfg.options["points"])
    export.write_map_csv(out / "map.csv", xs, ys)
    (out / "map.gp").write_text(export.gnuplot_transfer("map.csv"))
    return [out / "map.csv", out / "map.gp"]


HANDLERS = {
    "orbit": cmd_orbit,
    "bifurcation": cmd_bifurcation,
    "lyapunov": cmd_lyapunov,
    "gate-search": cmd_gate_search,
    "funcspace": cmd_funcspace,
    "map-dump": cmd_map_dump,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="gnmchaos", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, table in COMMANDS.items():
        p = sub.add_parser(name, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="JSON run config; flags override its values")
        for opt_name, opt in list(table.items()) + list(_COMMON.items()):
            kw = {"dest": opt_name, "help": opt.help}
            if opt.type is bool:
                kw["action"] = "store_true"
            else:
                kw["type"] = opt.type
                if opt.nargs is not None:
                    kw["nargs"] = opt.nargs
                if opt.choices:
                    kw["choices"] = opt.choices
            p.add_argument(_flag(opt_name), **kw)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = vars(parser.parse_args(argv))
        logging.basicConfig(
            level=logging.INFO if args.pop("verbose", False) else logging.WARNING,
            format="%(levelname)s: %(message)s",
        )
        command = args.pop("command")
        config_path = args.pop("config", None)
        file_values = {}
        if config_path:
            file_command, file_values = load_config(config_path)
            if file_command not in (None, command):
                raise UsageError(f"--config: file is for {file_command!r}, not {command!r}")
        cfg = resolve(command, file_values, args)
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        written = HANDLERS[command](cfg, out)
        cfg.save(out / "run_config.json")
    except UsageError as exc:
        print(f"gnmchaos: error: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, GnmError) as exc:
        print(f"gnmchaos: error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, ConfigurationError) else 1
    except OSError as exc:
        print(f"gnmchaos: error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        log.info("wrote %s", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
