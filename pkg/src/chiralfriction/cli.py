"""Command-line front end: sweeps, maps, trajectories, rates and validation.

Every subcommand shares one set of physical flags.  Values can also come
from a JSON file given with ``--config`` (same keys as the flags, dashes or
underscores); explicit flags win over the file, which wins over defaults.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
failure (affected rows are written as ``nan``).
"""
import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from . import friction as fr
from .errors import DegenerateRatesError, DomainError, QuadratureError
from .material import DrudeMetal
from .polarization import TransitionDipole, format_dipole, parse_dipole
from .quadrature import QuadratureSpec
from .units import UnitSystem

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

SWEEP_VARIABLES = ("v", "gamma_c", "omega0", "d", "pe")

DEFAULTS = {
    "omega0": 0.1,
    "d": 0.1,
    "v": 0.05,
    "gamma_c": 0.0,
    "lossless": False,
    "gamma": "0,0,1",
    "pe": 0.0,
    "pe0": 0.0,
    "sweep": None,
    "out": None,
    "format": "csv",
    "rel_tol": 1e-8,
    "threads": 1,
    "tmax": None,
    "steps": 201,
    "omega_sp_si": None,
    "dipole_si": None,
}

UNITS_NOTE = (
    "units: frequencies omega_sp, lengths c/omega_sp, velocities c, "
    "rates Gamma_0, times 1/Gamma_0, forces |F_0|; negative force = drag"
)


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument handling

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("physical parameters")
    g.add_argument("--omega0", type=float, help="transition frequency")
    g.add_argument("--d", type=float, help="height above the surface")
    g.add_argument("--v", type=float, help="velocity; negative values use the mirror symmetry")
    g.add_argument("--gamma-c", dest="gamma_c", type=float, help="Drude damping rate")
    g.add_argument("--lossless", action="store_true", default=None, help="use the closed-form lossless limit")
    g.add_argument("--gamma", help='transition dipole "cx,cy,cz", e.g. "0.7071,0,-0.7071i"')
    g.add_argument("--pe", type=float, help="excited-state probability")
    g.add_argument("--pe0", type=float, help="initial excited-state probability (evolve)")
    g.add_argument("--omega-sp-si", dest="omega_sp_si", type=float,
                   help="plasmon frequency in rad/s; switches inputs to SI "
                        "(omega0, gamma-c in rad/s, d in m, v in m/s)")
    g.add_argument("--dipole-si", dest="dipole_si", type=float,
                   help="dipole moment in C m, only used to report SI scales")
    o = common.add_argument_group("run control")
    o.add_argument("--sweep", action="append", help="var:min:max:steps[:log]")
    o.add_argument("--out", help="output path (default stdout)")
    o.add_argument("--format", choices=("csv", "json"))
    o.add_argument("--rel-tol", dest="rel_tol", type=float)
    o.add_argument("--threads", type=int)
    o.add_argument("--config", help="JSON file with default values for these flags")

    parser = argparse.ArgumentParser(
        prog="chiralfriction",
        description="Quantum friction on a moving atom above a Drude metal.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("force-sweep", parents=[common], help="force along a 1-D parameter sweep")
    ev = sub.add_parser("evolve", parents=[common], help="population and force versus time")
    ev.add_argument("--tmax", type=float, help="final time in 1/Gamma_0 (default 10 relaxation times)")
    ev.add_argument("--steps", type=int, help="number of time samples")
    sub.add_parser("map", parents=[common],
                   help="ground-state force on an omega0 x d grid (two --sweep flags)")
    sub.add_parser("rates", parents=[common], help="decay rates as JSON")
    sub.add_parser("validate", help="run the oracle suite")
    return parser


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("config file must hold a JSON object")
    config = {}
    for key, value in raw.items():
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        if key == "sweep" and isinstance(value, str):
            value = [value]
        config[key] = value
    return config


def merge_options(args):
    """Defaults, then config file, then explicit flags."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        opts.update(load_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def parse_sweep(text, allow_single=False):
    """Parse ``var:min:max:steps[:log]`` into the variable name and grid.

    With `allow_single`, ``var:a:a:1`` gives the one-point grid ``[a]``.
    """
    parts = str(text).split(":")
    if len(parts) not in (4, 5):
        raise UsageError(f"sweep {text!r} is not var:min:max:steps[:log]")
    var = parts[0].replace("-", "_")
    if var not in SWEEP_VARIABLES:
        raise UsageError(f"cannot sweep {var!r}; choose from {', '.join(SWEEP_VARIABLES)}")
    try:
        lo, hi, steps = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise UsageError(f"bad sweep range in {text!r}") from exc
    log = len(parts) == 5
    if log and parts[4] != "log":
        raise UsageError(f"unknown spacing {parts[4]!r}")
    if allow_single and steps == 1 and lo == hi:
        return var, np.array([lo])
    if not lo < hi:
        raise UsageError("sweep needs min < max")
    if steps < 2:
        raise UsageError("sweep needs at least 2 steps")
    if log:
        if lo <= 0:
            raise UsageError("log sweep needs min > 0")
        values = np.geomspace(lo, hi, steps)
    else:
        values = np.linspace(lo, hi, steps)
    return var, values


class Scenario:
    """Validated parameter set with SI input conversion applied."""

    def __init__(self, opts):
        self.opts = opts
        self.units = None
        if opts["omega_sp_si"] is not None:
            dip = opts["dipole_si"]
            self.units = (UnitSystem(opts["omega_sp_si"]) if dip is None
                          else UnitSystem(opts["omega_sp_si"], dip))
        try:
            self.dipole = parse_dipole(opts["gamma"])
        except (DomainError, ValueError) as exc:
            raise UsageError(f"bad --gamma: {exc}") from exc
        if opts["lossless"] and opts["gamma_c"] > 0:
            raise UsageError("--lossless cannot be combined with --gamma-c > 0")
        if opts["rel_tol"] <= 0 or opts["threads"] < 1:
            raise UsageError("--rel-tol must be positive and --threads at least 1")
        self.spec = QuadratureSpec(rel_tol=opts["rel_tol"])

    def convert(self, name, value):
        """Input value -> dimensionless."""
        if self.units is None:
            return float(value)
        if name in ("omega0", "gamma_c"):
            return self.units.frequency_to_dimensionless(value)
        if name == "d":
            return self.units.length_to_dimensionless(value)
        if name == "v":
            return self.units.velocity_to_dimensionless(value)
        return float(value)

    def point(self, **overrides):
        """Dimensionless (omega0, d, v, gamma_c, pe) with overrides in input units."""
        values = {k: self.opts[k] for k in ("omega0", "d", "v", "gamma_c", "pe")}
        values.update(overrides)
        out = {k: self.convert(k, val) for k, val in values.items()}
        if self.opts["lossless"] and out["gamma_c"] > 0:
            raise UsageError("--lossless cannot be combined with gamma_c > 0")
        return out

    def header(self, command, extra=None):
        params = {k: self.opts[k] for k in ("omega0", "d", "v", "gamma_c", "lossless", "pe", "pe0",
                                            "rel_tol")}
        params["gamma"] = format_dipole(self.dipole)
        params["model"] = "lossless" if self.opts["lossless"] or self.opts["gamma_c"] == 0 else "drude"
        if extra:
            params.update(extra)
        lines = [f"chiralfriction {__version__} {command}", UNITS_NOTE]
        if self.units is not None:
            lines.append("inputs in SI: omega0, gamma_c [rad/s], d [m], v [m/s]; "
                         "sweep values are reported as given")
            lines.append("SI scales: " + json.dumps(self.units.describe(), sort_keys=True))
        lines.append("parameters: " + json.dumps(params, sort_keys=True))
        return lines


# --------------------------------------------------------------------------
# evaluation (top level so worker processes can unpickle it)

def _mirror(v, dip):
    """Map v < 0 onto v > 0 via (v, gx) -> (-v, -gx); forces change sign."""
    if v < 0:
        return -v, TransitionDipole(-dip.gx, dip.gy, dip.gz), -1.0
    return v, dip, 1.0


def make_inputs(point, dip):
    v, dip, sign = _mirror(point["v"], dip)
    try:
        kin = fr.AtomKinematics(point["omega0"], point["d"], v)
        metal = None if point["gamma_c"] == 0 else DrudeMetal(point["gamma_c"])
        pe = fr._check_probability(point["pe"])
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    return kin, metal, dip, pe, sign


def evaluate_force(task):
    """Returns ``((total, excited, ground, err), None)`` or ``(None, message)``."""
    point, dip, spec = task
    kin, metal, dip, pe, sign = make_inputs(point, dip)
    try:
        f = fr.friction_force(kin, dip, pe, metal, spec)
    except (QuadratureError, DegenerateRatesError) as exc:
        return None, f"{type(exc).__name__}: {exc}"
    return (sign * f.total, sign * f.excited_channel, sign * f.ground_channel, f.err_estimate), None


def evaluate_ground(task):
    """Ground-state force only; same return convention as :func:`evaluate_force`."""
    point, dip, spec = task
    kin, metal, dip, _, sign = make_inputs(point, dip)
    try:
        g = fr.ground_state_force(kin, dip, metal, spec)
    except QuadratureError as exc:
        return None, f"{type(exc).__name__}: {exc}"
    return (sign * g, math.nan, sign * g, math.nan), None


def run_tasks(tasks, threads, func=evaluate_force):
    if threads > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (4 * threads))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(func, tasks, chunksize=chunk))
    return [func(t) for t in tasks]


# --------------------------------------------------------------------------
# output

def fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def write_table(stream, header, columns, rows, fmt_name):
    if fmt_name == "json":
        doc = {
            "header": header,
            "columns": columns,
            "rows": [[_json_value(x) for x in row] for row in rows],
        }
        stream.write(json.dumps(doc) + "\n")
        return
    for line in header:
        stream.write(f"# {line}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(fmt(x) for x in row) + "\n")


def _collect(results, labels):
    rows, failures = [], []
    for label, (values, message) in zip(labels, results):
        if values is None:
            failures.append(f"row {label}: {message}")
            values = (math.nan,) * 4
        rows.append(values)
    return rows, failures


# --------------------------------------------------------------------------
# subcommands; each returns (header, columns, rows, failures)

def cmd_force_sweep(sc):
    sweeps = sc.opts["sweep"] or []
    if len(sweeps) != 1:
        raise UsageError("force-sweep needs exactly one --sweep")
    var, values = parse_sweep(sweeps[0])
    if var == "gamma_c" and sc.opts["lossless"]:
        raise UsageError("cannot sweep gamma_c with --lossless")
    tasks = [(sc.point(**{var: float(x)}), sc.dipole, sc.spec) for x in values]
    for t in tasks:
        make_inputs(t[0], t[1])
    results = run_tasks(tasks, sc.opts["threads"])
    rows, failures = _collect(results, [fmt(x) for x in values])
    out = [(var, float(x), *r) for x, r in zip(values, rows)]
    header = sc.header("force-sweep", {"sweep": sweeps[0]})
    return header, ["var", "value", "F_total", "F_excited", "F_ground", "err"], out, failures


def cmd_map(sc):
    sweeps = sc.opts["sweep"] or []
    parsed = dict(parse_sweep(s, allow_single=True) for s in sweeps)
    if len(sweeps) != 2 or set(parsed) != {"omega0", "d"}:
        raise UsageError("map needs --sweep omega0:... and --sweep d:...")
    xs, ys = parsed["omega0"], parsed["d"]
    tasks = [(sc.point(omega0=float(x), d=float(y)), sc.dipole, sc.spec) for y in ys for x in xs]
    for t in tasks:
        make_inputs(t[0], t[1])
    labels = [f"omega0={fmt(x)} d={fmt(y)}" for y in ys for x in xs]
    func = evaluate_ground if sc.opts["pe"] == 0 else evaluate_force
    results = run_tasks(tasks, sc.opts["threads"], func)
    rows, failures = _collect(results, labels)
    out = [(float(x), float(y), r[0]) for (x, y), r in zip(((x, y) for y in ys for x in xs), rows)]
    header = sc.header("map", {"sweep": list(sweeps), "order": "omega0 fastest"})
    return header, ["omega0", "d", "F_total"], out, failures


def cmd_evolve(sc):
    kin, metal, dip, _, sign = make_inputs(sc.point(), sc.dipole)
    try:
        pe0 = fr._check_probability(sc.opts["pe0"])
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    steps = int(sc.opts["steps"])
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    tmax = sc.opts["tmax"]
    if tmax is not None and not tmax > 0:
        raise UsageError("--tmax must be positive")
    rates = fr.decay_rates(kin, dip, metal, sc.spec)
    if rates.degenerate:
        raise DegenerateRatesError("both transition rates are negligible")
    if tmax is None:
        tmax = 10.0 / rates.total
    times = np.linspace(0.0, tmax, steps)
    traj = fr.force_trajectory(kin, dip, pe0, times, metal, sc.spec)
    rows = [
        (p.t, p.pe, sign * p.force.total, sign * p.force.excited_channel,
         sign * p.force.ground_channel, p.force.err_estimate)
        for p in traj
    ]
    header = sc.header("evolve", {"tmax": tmax, "steps": steps})
    return header, ["t", "pe", "F_total", "F_excited", "F_ground", "err"], rows, []


def cmd_rates(sc):
    kin, metal, dip, _, _ = make_inputs(sc.point(), sc.dipole)
    rates = fr.decay_rates(kin, dip, metal, sc.spec)
    k_plus, k_minus = fr.plasmon_wavenumbers(kin)
    failures = []
    try:
        pe_inf = rates.pe_infinity
    except DegenerateRatesError as exc:
        pe_inf = None
        failures.append(str(exc))
    if sc.opts["v"] < 0:
        k_plus, k_minus = -k_plus, -k_minus
    doc = {
        "gamma_plus": rates.gamma_plus,
        "gamma_minus": rates.gamma_minus,
        "pe_infinity": pe_inf,
        "k_p_plus": k_plus,
        "k_p_minus": k_minus,
        "negligible_plus": rates.negligible_plus,
        "negligible_minus": rates.negligible_minus,
        "parameters": json.loads(sc.header("rates")[-1].split(": ", 1)[1]),
    }
    return doc, failures


def cmd_validate(stream):
    from . import validation

    results = validation.run_checks()
    stream.write(validation.format_table(results) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


# --------------------------------------------------------------------------

def _open_out(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate":
        return cmd_validate(sys.stdout)
    try:
        opts = merge_options(args)
        sc = Scenario(opts)
        if args.command == "rates":
            doc, failures = cmd_rates(sc)
            stream, close = _open_out(opts["out"])
            stream.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        else:
            handler = {"force-sweep": cmd_force_sweep, "map": cmd_map, "evolve": cmd_evolve}[args.command]
            header, columns, rows, failures = handler(sc)
            stream, close = _open_out(opts["out"])
            write_table(stream, header, columns, rows, opts["format"])
    except (UsageError, DomainError) as exc:
        print(f"chiralfriction: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, DegenerateRatesError) as exc:
        print(f"chiralfriction: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if close:
        stream.close()
    for note in failures:
        print(f"chiralfriction: {note}", file=sys.stderr)
    return EXIT_NUMERICAL if failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
