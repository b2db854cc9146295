"""Command-line interface: per-curve estimates, batch tables, sweeps and reports.

Configuration precedence, lowest first: built-in defaults, the ``--config``
INI file, then command-line flags.  ``--fast`` switches to the short Monte
Carlo profile unless ``--samples`` is also given.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace

from . import __version__
from .cost_model import (
    LINALG_FORMS,
    MODELS,
    VARIANTS,
    GridConfig,
    ModelParams,
    asymptotic_bits,
)
from .errors import InfeasibleCurveError, PairsecError, UnknownCurveError
from .families import Registry, default_registry, load_registry
from .norm_mc import AVERAGINGS, DEFAULT_SAMPLES, FAST_SAMPLES, METHODS
from .pairing_cost import DEFAULT_MODEL, PairingModel, compare_at_level
from .security import min_p_for_level, profile, sweep_family
from .tnfs_setup import H_POLICIES

SCHEMA_VERSION = "1.0"
FORMATS = ("json", "csv", "markdown")
EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2
TABLE8_LEVELS = (128, 160, 192, 256)
PAIRING_FAMILIES = ("BN", "BLS12", "KSS16", "KSS18", "BLS24")
_PAIRING_KNOBS = (
    "sqr_ratio", "sparse_ratio", "cyclo_ratio", "twist_dbl", "twist_add",
    "inversion", "word_bits", "word_exponent", "scale",
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: str = "BD"
    linalg_form: str = "algorithm"
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    fast: bool = False
    format: str = "json"
    h_policy: str = "recipe"
    search_method: str = "float"
    final_method: str = "exact"
    averaging: str = "geometric"
    log2A_max: float | None = None
    log2A_step: float = 0.5
    log2B_max: float = 128.0
    log2B_step: float = 0.5
    p_min: int = 256
    p_max: int = 768
    p_step: int = 20
    levels: tuple[int, ...] = TABLE8_LEVELS
    families: tuple[str, ...] = PAIRING_FAMILIES
    pairing: tuple[tuple[str, float], ...] = ()
    registry_path: str | None = None

    def params(self) -> ModelParams:
        return ModelParams(model=self.model, linalg_form=self.linalg_form)

    def grid(self) -> GridConfig:
        return GridConfig(
            log2A_max=self.log2A_max,
            log2A_step=self.log2A_step,
            log2B_max=self.log2B_max,
            log2B_step=self.log2B_step,
            samples=self.samples,
            search_method=self.search_method,
            final_method=self.final_method,
            averaging=self.averaging,
        )

    def pairing_model(self) -> PairingModel:
        return replace(DEFAULT_MODEL, **dict(self.pairing))

    def registry(self) -> Registry:
        reg = default_registry()
        if self.registry_path:
            reg = reg.merge(load_registry(self.registry_path))
        return reg

    def to_dict(self) -> dict:
        d = asdict(self)
        d["levels"] = list(self.levels)
        d["families"] = list(self.families)
        d["pairing"] = {k: v for k, v in self.pairing}
        return d

    def digest(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_KEYS = {name.lower(): name for name in _TYPES}  # configparser lowercases keys


def _convert(key: str, raw: str):
    kind = _TYPES[key]
    raw = raw.strip()
    if kind == "bool":
        return raw.lower() in ("1", "true", "yes", "on")
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if kind == "float | None":
        return None if raw.lower() in ("", "none") else float(raw)
    if kind == "tuple[int, ...]":
        return tuple(int(v) for v in raw.split(","))
    if kind == "tuple[str, ...]":
        return tuple(v.strip() for v in raw.split(",") if v.strip())
    if kind == "str | None":
        return raw or None
    return raw


def read_config_file(path: str) -> dict:
    """Flatten the [run], [grid], [sweep], [table8], [pairing] and [registry] sections."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out: dict = {}
    pairing = {}
    for section in cp.sections():
        for key, raw in cp[section].items():
            if section == "pairing":
                if key not in _PAIRING_KNOBS:
                    raise UsageError(f"unknown pairing key {key!r}")
                pairing[key] = float(raw)
            elif section == "registry" and key == "path":
                out["registry_path"] = raw.strip()
            elif _KEYS.get(key) and key not in ("pairing", "registry_path"):
                key = _KEYS[key]
                try:
                    out[key] = _convert(key, raw)
                except ValueError:
                    raise UsageError(f"bad value for {key}: {raw!r}") from None
            else:
                raise UsageError(f"unknown config key [{section}] {key}")
    if pairing:
        out["pairing"] = tuple(sorted(pairing.items()))
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        values.update(read_config_file(args.config))
    for key in ("model", "samples", "seed", "format"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if args.fast:
        values["fast"] = True
    if values.get("fast"):
        values.setdefault("samples", FAST_SAMPLES)
        values["final_method"] = "float"
    for key in ("p_min", "p_max", "p_step"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    checks = [
        ("model", cfg.model, MODELS),
        ("linalg_form", cfg.linalg_form, LINALG_FORMS),
        ("format", cfg.format, FORMATS),
        ("h_policy", cfg.h_policy, H_POLICIES),
        ("search_method", cfg.search_method, METHODS),
        ("final_method", cfg.final_method, METHODS),
        ("averaging", cfg.averaging, AVERAGINGS),
    ]
    for name, value, choices in checks:
        if value not in choices:
            raise UsageError(f"{name} must be one of {', '.join(choices)}")
    if cfg.samples < 1:
        raise UsageError("samples must be positive")
    if cfg.seed < 0:
        raise UsageError("seed must be nonnegative")
    if not 160 <= cfg.p_min <= cfg.p_max or cfg.p_step < 1:
        raise UsageError("sweep range needs 160 <= p_min <= p_max and p_step >= 1")


# --- per-command work --------------------------------------------------------


def _estimate_row(cfg: RunConfig, name: str) -> dict:
    reg = cfg.registry()
    inst = reg.curve(name)
    row = {"curve": name, "family": inst.family, "p_bits": inst.p_bits, "r_bits": inst.r_bits}
    try:
        prof = profile(inst, cfg.params(), cfg.seed, cfg.grid(), reg, cfg.h_policy)
    except InfeasibleCurveError as exc:
        row.update(status="infeasible", error=str(exc))
        return row
    except PairsecError as exc:
        row.update(status="error", error=str(exc))
        return row
    res = prof.field_result
    row.update(
        status="ok",
        A=res.best.A,
        log2_B=round(res.best.log2_B, 2),
        log2_N1=round(res.norm.log2_N1, 2),
        log2_N2=round(res.norm.log2_N2, 2),
        security_bits_raw=round(res.security_bits_raw, 2),
        security_bits_rounded=res.security_bits_rounded,
        curve_side_bits=round(prof.curve_side_bits, 2),
        combined_bits=round(prof.combined_bits, 2),
        model=cfg.model,
    )
    return row


def _min_p_cell(cfg: RunConfig, family: str, level: int) -> int | None:
    return min_p_for_level(family, level, cfg.params(), cfg.seed, cfg.grid(), cfg.registry())


def _sweep(cfg: RunConfig, family: str):
    pts = range(cfg.p_min, cfg.p_max + 1, cfg.p_step)
    return sweep_family(family, pts, cfg.params(), cfg.seed, cfg.grid(), cfg.registry())


def _run_batch(fn, items, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, *it) for it in items]
        return [f.result() for f in futures]


def _envelope(cmd: str, cfg: RunConfig, body: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": cmd,
        "config_hash": cfg.digest(),
        "samples": cfg.samples,
        "seed": cfg.seed,
        "model": cfg.model,
        "config": cfg.to_dict(),
        **body,
    }


def cmd_estimate(cfg: RunConfig, curve: str, jobs: int = 1) -> tuple[dict, int]:
    reg = cfg.registry()
    if curve not in reg.seeds:
        raise UsageError(f"unknown curve {curve!r}; try list-curves")
    row = _estimate_row(cfg, curve)
    code = EXIT_INFEASIBLE if row["status"] == "infeasible" else EXIT_OK
    if row["status"] == "error":
        code = EXIT_INFEASIBLE
    return _envelope("estimate", cfg, {"rows": [row]}), code


def cmd_table7(cfg: RunConfig, jobs: int = 1) -> tuple[dict, int]:
    names = cfg.registry().curve_names()
    rows = _run_batch(_estimate_row, [(cfg, n) for n in names], jobs)
    return _envelope("table7", cfg, {"rows": rows}), EXIT_OK


def cmd_table8(cfg: RunConfig, jobs: int = 1) -> tuple[dict, int]:
    reg = cfg.registry()
    for fam in cfg.families:
        reg.family(fam)
    items = [(cfg, fam, lvl) for fam in cfg.families for lvl in cfg.levels]
    cells = _run_batch(_min_p_cell, items, jobs)
    rows = []
    it = iter(cells)
    for fam in cfg.families:
        row = {"family": fam}
        for lvl in cfg.levels:
            row[str(lvl)] = next(it)
        rows.append(row)
    return _envelope("table8", cfg, {"levels": list(cfg.levels), "rows": rows}), EXIT_OK


def cmd_sweep(cfg: RunConfig, family: str, jobs: int = 1) -> tuple[dict, int]:
    cfg.registry().family(family)
    res = _sweep(cfg, family)
    body = res.to_dict()
    body["csv"] = res.to_csv()
    code = EXIT_OK if any(p.status == "ok" for p in res.points) else EXIT_INFEASIBLE
    return _envelope("sweep", cfg, body), code


def cmd_compare(cfg: RunConfig, level: float, jobs: int = 1) -> tuple[dict, int]:
    if level < 80 or level > 320:
        raise UsageError("level must lie in [80, 320]")
    fams = tuple(f for f in cfg.families if f in cfg.pairing_model().families)
    ps = _run_batch(_min_p_cell, [(cfg, f, level) for f in fams], jobs)
    ranking = compare_at_level(
        level, cfg.params(), cfg.pairing_model(), cfg.seed, cfg.grid(), cfg.registry(),
        fams, dict(zip(fams, ps)),
    )
    return _envelope("compare", cfg, ranking.to_dict()), EXIT_OK


def cmd_asymptote(cfg: RunConfig, q_bits: float, jobs: int = 1) -> tuple[dict, int]:
    if q_bits < 64:
        raise UsageError("Q_bits must be at least 64")
    rows = [
        {"variant": v.name, "c": round(v.c, 5), "log2_cost": round(asymptotic_bits(q_bits, v), 2)}
        for v in sorted(VARIANTS.values(), key=lambda v: v.c)
    ]
    return _envelope("asymptote", cfg, {"Q_bits": q_bits, "rows": rows}), EXIT_OK


def cmd_list_curves(cfg: RunConfig, jobs: int = 1) -> tuple[dict, int]:
    reg = cfg.registry()
    rows = []
    for name in reg.curve_names():
        inst = reg.curve(name)
        rows.append(
            {"curve": name, "family": inst.family, "k": inst.k, "u": hex(inst.u),
             "p_bits": inst.p_bits, "r_bits": inst.r_bits}
        )
    return _envelope("list-curves", cfg, {"rows": rows}), EXIT_OK


# --- rendering -----------------------------------------------------------------


def _table_rows(report: dict) -> tuple[list[str], list[dict]]:
    cmd = report["command"]
    if cmd == "sweep":
        cols = ["target_bits", "p_bits", "curve_bits", "field_bits", "status"]
        return cols, report["points"]
    if cmd == "compare":
        cols = ["rank", "family", "p_bits", "log2_cost"]
        rows = [{"rank": i + 1, **r} for i, r in enumerate(report["ranking"])]
        rows += [{"rank": None, "family": f, "p_bits": None, "log2_cost": None}
                 for f in report["absent"]]
        return cols, rows
    rows = report["rows"]
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols, rows


def _cell(v) -> str:
    if v is None:
        return "-"
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {', '.join(FORMATS)}")
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        if report["command"] == "sweep":
            return report["csv"]
        cols, rows = _table_rows(report)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow(["" if r.get(c) is None else r.get(c) for c in cols])
        return buf.getvalue()
    cols, rows = _table_rows(report)
    lines = [
        f"<!-- {report['command']} schema {report['schema_version']} "
        f"config {report['config_hash']} samples {report['samples']} seed {report['seed']} -->",
        "| " + " | ".join(cols) + " |",
        "|" + "---|" * len(cols),
    ]
    for r in rows:
        lines.append("| " + " | ".join(_cell(r.get(c)) for c in cols) + " |")
    if report["command"] == "sweep" and report.get("crossover_p_bits") is not None:
        lines.append("")
        lines.append(
            f"crossover: p_bits {report['crossover_p_bits']}, "
            f"security {report['crossover_security_bits']:.2f}"
        )
    return "\n".join(lines) + "\n"


# --- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=MODELS)
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--fast", action="store_true", help="short Monte Carlo profile")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--config", help="INI file; flags override its values")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batches")

    ap = argparse.ArgumentParser(prog="pairsec", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("estimate", parents=[common], help="security of one registered curve")
    p.add_argument("curve")
    sub.add_parser("table7", parents=[common], help="security of every registered curve")
    sub.add_parser("table8", parents=[common], help="minimum p per family and level")
    p = sub.add_parser("sweep", parents=[common], help="curve vs field security over p sizes")
    p.add_argument("family")
    p.add_argument("--p-min", dest="p_min", type=int)
    p.add_argument("--p-max", dest="p_max", type=int)
    p.add_argument("--p-step", dest="p_step", type=int)
    p = sub.add_parser("compare", parents=[common], help="pairing cost ranking at a level")
    p.add_argument("level", type=float)
    p = sub.add_parser("asymptote", parents=[common], help="L(1/3) estimates per NFS variant")
    p.add_argument("q_bits", type=float)
    sub.add_parser("list-curves", parents=[common], help="registered curves")
    return ap


_COMMANDS = {
    "estimate": (cmd_estimate, "curve"),
    "table7": (cmd_table7, None),
    "table8": (cmd_table8, None),
    "sweep": (cmd_sweep, "family"),
    "compare": (cmd_compare, "level"),
    "asymptote": (cmd_asymptote, "q_bits"),
    "list-curves": (cmd_list_curves, None),
}


def run(argv=None) -> tuple[str, int, str | None]:
    """Parse, compute and render; returns (text, exit code, output path).

    Usage errors raise UsageError.
    """
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    cfg = resolve_config(args)
    fn, arg = _COMMANDS[args.command]
    try:
        if arg is None:
            report, code = fn(cfg, jobs=args.jobs)
        else:
            report, code = fn(cfg, getattr(args, arg), jobs=args.jobs)
    except UnknownCurveError as exc:
        raise UsageError(str(exc)) from None
    return render(report, cfg.format), code, args.out


def main(argv=None) -> int:
    try:
        text, code, out = run(argv)
    except UsageError as exc:
        print(f"pairsec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code
