"""Command-line experiment runner.

Subcommands: tau, sieve, bias, euler, akatsuka, densities, validate.
Every command is deterministic: identical configuration produces
byte-identical CSV/JSON, independent of --threads.  Floats are emitted
with 17 significant digits, CSV is comma-separated LF-terminated UTF-8,
JSON is pretty-printed with sorted keys.

Exit codes: 0 success, 2 config error, 3 ceiling error, 4 validation
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import akatsuka as ak
from . import bias as bias_mod
from . import euler as euler_mod
from .errors import (
    CacheCorruptError,
    CeilingError,
    ConfigError,
    DrhLabError,
    ValidationError,
)
from .families import family_by_label
from .grids import DEFAULT_FACTOR, geometric_grid
from .lvalues import (
    lvalue_chi4_center,
    lvalue_chi4_center_hurwitz,
    lvalue_delta_center,
    smoothing_weight,
)
from .primes import (
    SIEVE_CEILING,
    chebyshev_psi,
    sieve_range,
    write_prime_cache,
)
from .tau import (
    TAU_EXACTNESS_CEILING,
    build_tau_table,
    exact_convolve,
    read_tau_cache,
    verify_table,
    write_tau_cache,
)

_VALIDATE_SEED = 20260809


@dataclass
class RunConfig:
    """Merged CLI/config-file settings; everything is seed-free."""

    command: str
    x_max: int = 10**6
    tau_n: int | None = None
    family: str = "chi4"
    s: float = 0.0
    grid: tuple[float, float, int] | None = None  # (start, factor, count)
    threads: int = 1
    output_path: str | None = None
    cache_dir: str = "."
    tau0: list[tuple[float, int]] = field(default_factory=lambda: [(0.0, 0)])
    self_check: bool = False
    validate: bool = False
    psi_diag: bool = False

    def __post_init__(self):
        if self.x_max > SIEVE_CEILING:
            raise CeilingError(f"x_max={self.x_max} above sieve ceiling 2^40")
        if self.x_max < 2:
            raise ConfigError(f"x_max={self.x_max} < 2")
        if self.tau_n is not None and self.tau_n > TAU_EXACTNESS_CEILING:
            raise CeilingError(
                f"tau_n={self.tau_n} above exactness ceiling {TAU_EXACTNESS_CEILING}"
            )
        if self.threads < 1:
            raise ConfigError(f"threads={self.threads} < 1")
        if self.grid is not None and self.grid[1] <= 1.0:
            raise ConfigError("grid factor must exceed 1 (ascending grid)")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _emit_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _checkpoints(cfg: RunConfig, default_start: float = 100.0) -> np.ndarray:
    if cfg.grid is not None:
        start, factor, count = cfg.grid
        pts = geometric_grid(start, factor, count=count)
    else:
        pts = geometric_grid(default_start, DEFAULT_FACTOR, stop=float(cfg.x_max))
    pts = pts[pts <= cfg.x_max]
    if len(pts) == 0 or pts[-1] < cfg.x_max:
        pts = np.append(pts, float(cfg.x_max))
    return pts


def _tau_table_cached(n: int, cfg: RunConfig):
    """Load the tau cache if valid, else build and write it atomically."""
    path = os.path.join(cfg.cache_dir, f"tau_{n}.tauc")
    if os.path.exists(path):
        try:
            table, checksum = read_tau_cache(path)
            if table.N == n:
                return table, checksum, True
        except CacheCorruptError as exc:
            print(f"rebuilding cache: {exc}", file=sys.stderr)
    table = build_tau_table(n, self_check=cfg.self_check, threads=cfg.threads)
    checksum = write_tau_cache(path, table)
    return table, checksum, False


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_tau(cfg: RunConfig) -> int:
    n = cfg.tau_n if cfg.tau_n is not None else cfg.x_max
    if n > TAU_EXACTNESS_CEILING:
        raise CeilingError(f"tau_n={n} above exactness ceiling")
    table, checksum, hit = _tau_table_cached(n, cfg)
    if hit:
        print("tau cache hit; no recompute", file=sys.stderr)
    report = verify_table(table)
    _emit_json(
        {
            "command": "tau",
            "N": table.N,
            "checksum": checksum,
            "deligne_ok": report.deligne_ok,
            "multiplicativity_ok": report.multiplicativity_ok,
            "recursion_ok": report.recursion_ok,
            "tau_head": [table.tau(i) for i in range(1, min(table.N, 10) + 1)],
        },
        cfg.output_path,
    )
    return 0


def cmd_sieve(cfg: RunConfig) -> int:
    table = sieve_range(2, cfg.x_max, threads=cfg.threads)
    path = os.path.join(cfg.cache_dir, f"primes_{cfg.x_max}.prmt")
    write_prime_cache(path, table)
    _emit_json(
        {
            "command": "sieve",
            "x_max": cfg.x_max,
            "count": len(table),
            "first": int(table.primes[0]) if len(table) else None,
            "last": int(table.primes[-1]) if len(table) else None,
        },
        cfg.output_path,
    )
    return 0


def _build_series(cfg: RunConfig, ptable):
    if cfg.family == "delta":
        n = cfg.tau_n if cfg.tau_n is not None else cfg.x_max
        if n < cfg.x_max:
            raise ConfigError(f"tau_n={n} below x_max={cfg.x_max}")
        table, _, _ = _tau_table_cached(n, cfg)
        return bias_mod.tau_bias_series(cfg.x_max, table, ptable=ptable)
    if cfg.family == "chi4":
        return bias_mod.char_bias_series(cfg.x_max, cfg.s, table=ptable)
    raise ConfigError(f"unknown family {cfg.family!r}")


def _series_rows(series):
    for b, v in zip(series.breakpoints.tolist(), np.asarray(series.values).tolist()):
        x = float(b)
        ratio = float(v) / (0.5 * math.log(math.log(x)))
        yield (b, v, ratio)


def _series_report(series, X: float) -> dict:
    report = bias_mod.densities(series, X)
    events = bias_mod.crossings(series)
    return {
        "X": report.X,
        "natural_density": report.natural_density,
        "log_density": report.log_density,
        "positive_measure": report.positive_measure,
        "crossings": [c.x for c in events if not c.zero_touch],
        "zero_touches": [c.x for c in events if c.zero_touch],
    }


def cmd_bias(cfg: RunConfig) -> int:
    ptable = sieve_range(2, cfg.x_max, threads=cfg.threads)
    series = _build_series(cfg, ptable)
    if cfg.output_path:
        _write_csv(
            cfg.output_path,
            ["x", "value", "running_loglog_ratio"],
            _series_rows(series),
        )
    payload = {"command": "bias", "family": cfg.family, "s": cfg.s}
    payload.update(_series_report(series, float(cfg.x_max)))
    _emit_json(payload, cfg.output_path + ".json" if cfg.output_path else None)
    return 0


def cmd_densities(cfg: RunConfig) -> int:
    ptable = sieve_range(2, cfg.x_max, threads=cfg.threads)
    series = _build_series(cfg, ptable)
    report = _series_report(series, float(cfg.x_max))
    if cfg.output_path:
        _write_csv(
            cfg.output_path,
            ["X", "natural_density", "log_density", "positive_measure"],
            [
                (
                    report["X"],
                    report["natural_density"],
                    report["log_density"],
                    report["positive_measure"],
                )
            ],
        )
    payload = {"command": "densities", "family": cfg.family, "s": cfg.s}
    payload.update(report)
    _emit_json(payload, cfg.output_path + ".json" if cfg.output_path else None)
    return 0


def cmd_euler(cfg: RunConfig) -> int:
    ptable = sieve_range(2, cfg.x_max, threads=cfg.threads)
    if cfg.family == "delta":
        n = cfg.tau_n if cfg.tau_n is not None else cfg.x_max
        table, _, _ = _tau_table_cached(n, cfg)
        family = family_by_label("delta", table)
        lvalue = lvalue_delta_center(table)
    else:
        family = family_by_label(cfg.family)
        lvalue = lvalue_chi4_center()
    checkpoints = _checkpoints(cfg)
    trace = euler_mod.partial_product_log(
        family, cfg.x_max, checkpoints, table=ptable, threads=cfg.threads
    )
    decomps = euler_mod.decompose_many(
        family, checkpoints, table=ptable, threads=cfg.threads
    )
    target = euler_mod.drh_target(family, lvalue)
    rows = []
    for logv, d in zip(trace.log_values.tolist(), decomps):
        identity_gap = d.I + d.II + d.III - logv
        rows.append(
            (d.x, logv, d.I, d.II, d.III, identity_gap, math.exp(logv) / target)
        )
    if cfg.output_path:
        _write_csv(
            cfg.output_path,
            ["x", "log_product", "I", "II", "III", "identity_gap", "drh_ratio"],
            rows,
        )
    _emit_json(
        {
            "command": "euler",
            "family": cfg.family,
            "lvalue": lvalue.value,
            "lvalue_method": lvalue.method,
            "drh_target": target,
            "checkpoints": len(rows),
            "max_identity_gap": max(abs(r[5]) for r in rows),
        },
        (cfg.output_path + ".json") if cfg.output_path else None,
    )
    return 0


def cmd_akatsuka(cfg: RunConfig) -> int:
    if cfg.psi_diag:
        grid = _checkpoints(cfg)
        ptable = sieve_range(2, cfg.x_max, threads=cfg.threads)
        samples = ak.psi_error_diag(grid, table=ptable, threads=cfg.threads)
        if cfg.output_path:
            _write_csv(cfg.output_path, ["x", "psi_error_norm"], samples)
        _emit_json(
            {
                "command": "akatsuka",
                "mode": "psi-diag",
                "samples": len(samples),
                "last": samples[-1][1] if samples else None,
            },
            (cfg.output_path + ".json") if cfg.output_path else None,
        )
        return 0

    grid = _checkpoints(cfg, default_start=1000.0)
    ptable = sieve_range(2, cfg.x_max, threads=cfg.threads)
    summary: dict = {"command": "akatsuka", "points": {}}
    deviations = []
    for tau0, m in cfg.tau0:
        point = ak.CriticalPoint(tau0, m)
        samples = ak.akatsuka_ratio(grid, point, table=ptable, threads=cfg.threads)
        lo, hi = ak.oscillation_band(samples)
        key = f"tau0={_fmt(tau0)},m={m}"
        summary["points"][key] = {
            "band_low": lo,
            "band_high": hi,
            "band_ratio": hi / lo if lo > 0 else None,
        }
        if cfg.output_path:
            suffix = f"_tau0_{_fmt(tau0)}_m{m}" if len(cfg.tau0) > 1 else ""
            base, ext = os.path.splitext(cfg.output_path)
            _write_csv(
                f"{base}{suffix}{ext}" if suffix else cfg.output_path,
                ["x", "re_ratio", "im_ratio", "abs_ratio"],
                (
                    (s.x, s.ratio.real, s.ratio.imag, abs(s.ratio))
                    for s in samples
                ),
            )
        if cfg.validate:
            for x in (10.0, 100.0, 1000.0):
                deviations.append(ak.validate_normalizer(x, complex(0.5, tau0)))
    if cfg.validate:
        summary["validation_max_deviation"] = max(deviations)
        summary["validation_tolerance"] = 1e-6
    _emit_json(summary, (cfg.output_path + ".json") if cfg.output_path else None)
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    """Deterministic dual-route checks; exit 4 if anything disagrees."""
    results: dict = {"command": "validate"}
    ok = True

    rng = np.random.default_rng(_VALIDATE_SEED)
    devs = []
    for _ in range(20):
        x = float(np.exp(rng.uniform(np.log(10.0), np.log(1e4))))
        tau0 = float(rng.uniform(-30.0, 30.0))
        try:
            devs.append(ak.validate_normalizer(x, complex(0.5, tau0)))
        except ValidationError:
            ok = False
            devs.append(float("inf"))
    results["normalizer_max_deviation"] = max(devs)
    results["normalizer_ok"] = max(devs) <= 1e-6

    v1 = lvalue_chi4_center()
    v2 = lvalue_chi4_center_hurwitz()
    gap = abs(v1.value - v2.value)
    results["chi4_lvalue"] = v1.value
    results["chi4_method_gap"] = gap
    results["chi4_ok"] = gap <= 1e-8

    table = build_tau_table(4096)
    lv = lvalue_delta_center(table)
    w1_gap = abs(
        smoothing_weight(1, method="series") - smoothing_weight(1, method="cf")
    )
    results["delta_lvalue"] = lv.value
    results["delta_weight_gap"] = w1_gap
    results["delta_ok"] = w1_gap <= 1e-12 and lv.value > 0

    alt = build_tau_table(4096, moduli=(998244353, 2113929217, 1811939329,
                                        469762049, 754974721))
    results["tau_backend_independent"] = table.values == alt.values
    conv = exact_convolve([1, 2], [3, 4], 998244353)
    results["convolve_ok"] = conv.tolist() == [3, 10, 8]

    z1 = ak.finite_zeta(10**4, 0.5 + 0j)
    z2 = ak.finite_zeta(10**4, 0.5 + 0j, direct=True)
    results["finite_zeta_two_path_gap"] = abs(z1 - z2) / abs(z2)
    results["finite_zeta_ok"] = abs(z1 - z2) / abs(z2) <= 1e-10

    psi_direct = chebyshev_psi(100)
    diag = ak.psi_error_diag([100.0])
    recon = diag[0][1] * math.sqrt(100.0) * math.log(100.0) + 100.0
    results["psi_crosscheck_gap"] = abs(recon - psi_direct)
    results["psi_ok"] = abs(recon - psi_direct) <= 1e-9

    ok = ok and all(
        results[k] for k in results if isinstance(results[k], bool)
    )
    results["all_ok"] = ok
    _emit_json(results, cfg.output_path)
    return 0 if ok else 4


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "x_max": int,
    "tau_n": int,
    "family": str,
    "s": float,
    "grid": str,
    "threads": int,
    "out": str,
    "cache_dir": str,
    "tau0": str,
    "self_check": lambda v: v.lower() in ("1", "true", "yes"),
}


def _parse_grid(text: str) -> tuple[float, float, int]:
    try:
        start, factor, count = text.split(":")
        return float(start), float(factor), int(count)
    except ValueError:
        raise ConfigError(f"bad --grid {text!r}; expected start:factor:count") from None


def _parse_tau0(text: str) -> list[tuple[float, int]]:
    out = []
    for chunk in text.split(","):
        try:
            if ":" in chunk:
                t, m = chunk.split(":")
                out.append((float(t), int(m)))
            else:
                out.append((float(chunk), 0))
        except ValueError:
            raise ConfigError(f"bad --tau0 entry {chunk!r}") from None
    return out


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{line_no}: expected key=value")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in _CONFIG_KEYS:
                    raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
                values[key] = _CONFIG_KEYS[key](value)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drhlab",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Config file: flat key=value lines (keys: x_max, tau_n, family, s,\n"
            "grid, threads, out, cache_dir, tau0, self_check); CLI flags win."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("tau", "sieve", "bias", "euler", "akatsuka", "densities", "validate"):
        p = sub.add_parser(name)
        p.add_argument("--x-max", type=int, default=None)
        p.add_argument("--tau-n", type=int, default=None)
        p.add_argument("--family", choices=("chi4", "delta"), default=None)
        p.add_argument("--s", type=float, default=None)
        p.add_argument("--grid", type=str, default=None,
                       help="geometric checkpoints start:factor:count")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--cache-dir", type=str, default=None)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--validate", action="store_true")
        if name == "tau":
            p.add_argument("--self-check", action="store_true")
        if name == "akatsuka":
            p.add_argument("--tau0", type=str, default=None,
                           help="comma-separated tau0:m pairs, e.g. 0:0,14.134725:1")
            p.add_argument("--psi-diag", action="store_true")
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    file_values = _read_config_file(args.config) if args.config else {}

    def pick(cli_value, key, default):
        if cli_value is not None:
            return cli_value
        if key in file_values:
            return file_values[key]
        return default

    grid_text = pick(args.grid, "grid", None)
    tau0_text = pick(getattr(args, "tau0", None), "tau0", None)
    return RunConfig(
        command=args.command,
        x_max=pick(args.x_max, "x_max", 10**6),
        tau_n=pick(args.tau_n, "tau_n", None),
        family=pick(args.family, "family", "chi4"),
        s=pick(args.s, "s", 0.0),
        grid=_parse_grid(grid_text) if grid_text else None,
        threads=pick(args.threads, "threads", 1),
        output_path=pick(args.out, "out", None),
        cache_dir=pick(args.cache_dir, "cache_dir", "."),
        tau0=_parse_tau0(tau0_text) if tau0_text else [(0.0, 0)],
        self_check=bool(getattr(args, "self_check", False)
                        or file_values.get("self_check", False)),
        validate=bool(args.validate),
        psi_diag=bool(getattr(args, "psi_diag", False)),
    )


_COMMANDS = {
    "tau": cmd_tau,
    "sieve": cmd_sieve,
    "bias": cmd_bias,
    "euler": cmd_euler,
    "akatsuka": cmd_akatsuka,
    "densities": cmd_densities,
    "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args)
        return _COMMANDS[cfg.command](cfg)
    except CeilingError as exc:
        print(f"ceiling error: {exc}", file=sys.stderr)
        return 3
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 4
    except DrhLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
