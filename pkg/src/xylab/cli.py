"""Command-line front end: ``xylab <command> [flags]``.

Grids accept a number, a comma list, or ``start:stop:count[:log]``.
Exit status: 0 success, 1 usage error, 2 computation or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import analysis as an
from .concurrence import approx_lower, build_A, convex_roof_upper, lower_bound, wootters
from .errors import XylabError
from .linalg import DIM_CAP
from .model import ModelParams
from .thermal import model_spectrum, thermal_ensemble

COMMANDS = ("spectrum", "thermal", "concurrence", "sweep", "transitions", "critical",
            "table1", "revival")
CONFIG_KEYS = ("command", "n", "gamma", "eta", "J", "T", "kind", "method", "trials",
               "format", "output", "seed", "threads")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 4
    gamma: tuple = ()
    eta: tuple = ()
    J: float = 1.0
    T: tuple = ()
    kind: str = "multipartite"
    method: str = "lower"
    trials: int = 20
    format: str = "csv"
    output: str | None = None
    seed: int = 0
    threads: int = 1


def parse_grid(text: str, name: str) -> tuple[float, ...]:
    text = str(text).strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "lin")):
                raise ValueError
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1 or stop < start:
                raise ValueError
            if len(parts) == 4 and parts[3] == "log":
                if start <= 0:
                    raise ValueError
                vals = np.geomspace(start, stop, count)
            else:
                vals = np.linspace(start, stop, count)
            return tuple(float(v) for v in vals)
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"malformed range for --{name}: {text!r}") from None
    if not all(math.isfinite(v) or v == math.inf for v in vals):
        raise UsageError(f"non-finite value in --{name}")
    return vals


def read_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r}")
        out[key] = value
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="xylab", description="Thermal MKB concurrence of Heisenberg XY rings.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--command", dest="command_flag", choices=COMMANDS)
    p.add_argument("--n", type=int)
    p.add_argument("--gamma")
    p.add_argument("--eta")
    p.add_argument("--J", type=float)
    p.add_argument("--T")
    p.add_argument("--kind", choices=("multipartite", "full"))
    p.add_argument("--method", choices=("lower", "approx", "upper"))
    p.add_argument("--trials", type=int)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--output")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--config")
    p.add_argument("--version", action="version", version=f"xylab {__version__}")
    return p


_DEFAULT_GRIDS = {"table1": {"gamma": (an.TABLE1_GAMMA,), "T": an.TABLE1_T, "eta": an.TABLE1_ETA}}
_REQUIRED = {
    "spectrum": ("gamma", "eta"), "thermal": ("gamma", "eta", "T"),
    "concurrence": ("gamma", "eta", "T"), "sweep": ("gamma", "eta", "T"),
    "transitions": ("gamma",), "critical": ("gamma", "eta"), "table1": (),
    "revival": ("gamma", "T"),
}


def parse_config(argv) -> RunConfig:
    """Merge the optional config file with flags (flags win) and validate."""
    ns = _build_parser().parse_args(argv)
    values = read_config_file(ns.config) if ns.config else {}
    flags = {k: v for k, v in vars(ns).items() if v is not None and k not in ("config", "command_flag")}
    if ns.command and ns.command_flag and ns.command != ns.command_flag:
        raise UsageError("conflicting commands given")
    if ns.command_flag:
        flags["command"] = ns.command_flag
    values.update(flags)
    command = values.get("command")
    if command is None:
        raise UsageError("a command is required")
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}")

    try:
        n = int(values.get("n", 4))
        J = float(values.get("J", 1.0))
        trials = int(values.get("trials", 20))
        seed = int(values.get("seed", 0))
        threads = int(values.get("threads", os.environ.get("XYLAB_THREADS", 1)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    grids = dict(_DEFAULT_GRIDS.get(command, {}))
    for name in ("gamma", "eta", "T"):
        if name in values:
            grids[name] = parse_grid(values[name], name)
    if n < 2 or n % 2:
        raise UsageError(f"n must be even and >= 2, got {n}")
    if 2**n > DIM_CAP:
        raise UsageError(f"n = {n} exceeds the dimension cap {DIM_CAP}")
    for name in _REQUIRED[command]:
        if name not in grids:
            raise UsageError(f"--{name} is required for {command}")
    if command in ("transitions", "critical", "table1", "revival") and n != 4:
        raise UsageError(f"{command} is defined for n = 4")
    if not J > 0:
        raise UsageError("J must be > 0")
    if threads < 1:
        raise UsageError("threads must be >= 1")
    if trials < 1:
        raise UsageError("trials must be >= 1")
    if any(abs(g) > 1 for g in grids.get("gamma", ())):
        raise UsageError("|gamma| must be <= 1")
    if any(t < 0 for t in grids.get("T", ())):
        raise UsageError("T must be >= 0")
    fmt = values.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt!r}")
    kind = values.get("kind", "multipartite")
    method = values.get("method", "lower")
    if kind not in ("multipartite", "full") or method not in ("lower", "approx", "upper"):
        raise UsageError("kind must be multipartite|full and method lower|approx|upper")
    return RunConfig(command, n, grids.get("gamma", ()), grids.get("eta", ()), J,
                     grids.get("T", ()), kind, method, trials, fmt, values.get("output"),
                     seed, threads)


# --- commands: each maps one grid point to a list of rows ------------------------

def _params(cfg, gamma, eta):
    return ModelParams(cfg.n, gamma, eta, cfg.J)


def _spectrum_rows(cfg, gamma, eta):
    spectrum, labels = model_spectrum(_params(cfg, gamma, eta))
    order = np.argsort(spectrum.eigenvalues, kind="stable")
    labels = labels or tuple(f"E{k}" for k in range(len(order)))
    return [[gamma, eta, i, labels[k], float(spectrum.eigenvalues[k])] for i, k in enumerate(order)]


def _pair_concurrence(cfg, ens):
    if cfg.n == 2:
        return wootters(ens.chi).value
    return lower_bound(ens, build_A(cfg.n, cfg.kind)).value


def _thermal_rows(cfg, gamma, eta, t):
    ens = thermal_ensemble(_params(cfg, gamma, eta), t)
    return [[gamma, eta, t, ens.log_partition, ens.ground_weight(), _pair_concurrence(cfg, ens)]]


def _concurrence_rows(cfg, gamma, eta, t):
    ens = thermal_ensemble(_params(cfg, gamma, eta), t)
    a = build_A(cfg.n, cfg.kind)
    if cfg.method == "lower":
        val = lower_bound(ens, a).value
    elif cfg.method == "approx":
        val = approx_lower(ens, a).value
    else:
        val = convex_roof_upper(ens, a, trials=cfg.trials, seed=cfg.seed).value
    return [[gamma, eta, t, val]]


def _sweep_rows(cfg, gamma, eta, t):
    ens = thermal_ensemble(_params(cfg, gamma, eta), t)
    if cfg.n == 2:
        return [[gamma, eta, t, ens.ground_weight(), wootters(ens.chi).value]]
    multi = lower_bound(ens, build_A(cfg.n, "multipartite")).value
    full = lower_bound(ens, build_A(cfg.n, "full")).value
    return [[gamma, eta, t, ens.ground_weight(), multi, full]]


def _transition_rows(cfg, gamma):
    tf = an.transition_fields(gamma)
    return [[gamma, tf.eta1, tf.eta2]]


def _critical_rows(cfg, gamma, eta):
    tc = an.critical_temperature(gamma, eta, cfg.J)
    return [[gamma, eta, math.nan if tc is None else tc]]


def _table1_rows(cfg, gamma, t, eta):
    r, = an.table1_compare(gamma, cfg.J, (t,), (eta,))
    return [[r["T"], r["eta"], r["chi4"], r["phi15"], r["approx"], r["w15"]]]


def _revival_rows(cfg, gamma, t):
    eta = an.revival_field(gamma, t, cfg.J)
    if eta is None:
        return [[gamma, t, math.nan, math.nan]]
    return [[gamma, t, eta, an.ground_weight_at(gamma, eta, t, cfg.J)]]


def _plan(cfg: RunConfig):
    """(header, worker, list of argument tuples in output order)."""
    c = cfg.command
    g, e, t = cfg.gamma, cfg.eta, cfg.T
    if c == "spectrum":
        return ["gamma", "eta", "index", "label", "energy"], _spectrum_rows, [(x, y) for x in g for y in e]
    if c == "thermal":
        name = "wootters" if cfg.n == 2 else f"c_{cfg.kind}"
        return (["gamma", "eta", "T", "log_Z", "ground_weight", name], _thermal_rows,
                [(x, y, z) for x in g for y in e for z in t])
    if c == "concurrence":
        return (["gamma", "eta", "T", f"{cfg.method}_{cfg.kind}"], _concurrence_rows,
                [(x, y, z) for x in g for y in e for z in t])
    if c == "sweep":
        cols = ["wootters"] if cfg.n == 2 else ["c_multipartite", "c_full"]
        return (["gamma", "eta", "T", "ground_weight"] + cols, _sweep_rows,
                [(x, y, z) for x in g for y in e for z in t])
    if c == "transitions":
        return ["gamma", "eta1", "eta2"], _transition_rows, [(x,) for x in g]
    if c == "critical":
        return ["gamma", "eta", "T_c"], _critical_rows, [(x, y) for x in g for y in e]
    if c == "table1":
        return (["T", "eta", "chi4", "phi15", "approx", "w15"], _table1_rows,
                [(g[0], z, y) for z in t for y in e])
    return ["gamma", "T", "eta_star", "ground_weight"], _revival_rows, [(x, z) for x in g for z in t]


def compute(cfg: RunConfig) -> tuple[list[str], list[list]]:
    header, worker, points = _plan(cfg)
    if cfg.threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            chunks = list(pool.map(lambda a: worker(cfg, *a), points))
    else:
        chunks = [worker(cfg, *a) for a in points]
    return header, [row for chunk in chunks for row in chunk]


# --- output ---------------------------------------------------------------------

def metadata(cfg: RunConfig) -> dict:
    """Everything that determines the output; thread count is left out on purpose."""
    return {"program": "xylab", "version": __version__, "command": cfg.command, "n": cfg.n,
            "J": cfg.J, "gamma": list(cfg.gamma), "eta": list(cfg.eta), "T": list(cfg.T),
            "kind": cfg.kind, "method": cfg.method, "trials": cfg.trials, "seed": cfg.seed}


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".16e")
    return str(v)


def format_csv(cfg, header, rows) -> str:
    buf = io.StringIO()
    for k, v in metadata(cfg).items():
        buf.write(f"# {k}: {json.dumps(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    return v


def format_json(cfg, header, rows) -> str:
    records = [{h: _json_value(v) for h, v in zip(header, row)} for row in rows]
    return json.dumps({"metadata": metadata(cfg), "records": records}, indent=1) + "\n"


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(source) -> tuple[dict, list[str], list[list]]:
    """(metadata, header, rows) from CSV text or a path written by this module."""
    if "\n" not in source:
        with open(source, encoding="utf-8") as fh:
            source = fh.read()
    meta, body = {}, []
    for line in source.splitlines():
        if line.startswith("# "):
            k, v = line[2:].split(": ", 1)
            meta[k] = json.loads(v)
        elif line:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    return meta, header, [[_parse_cell(c) for c in row] for row in reader]


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        header, rows = compute(cfg)
    except (XylabError, ArithmeticError) as exc:
        print(f"xylab: computation error: {exc}", file=sys.stderr)
        return 2
    text = (format_csv if cfg.format == "csv" else format_json)(cfg, header, rows)
    try:
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            stdout.write(text)
    except OSError as exc:
        print(f"xylab: cannot write output: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"xylab: usage error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)
