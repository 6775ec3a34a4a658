"""Command-line interface: bound sweeps, operating points, verification.

Subcommands
-----------
bound    evaluate the achievability bound over a blocklength grid and emit
         CSV (header line ``# covertcap v1``, columns
         ``n,rho,tau,log2_m,rate,asymptotic_rate[,n_min][,rate_nats]``) or JSON
optimal  report the peak-rate operating point (n*, R(n*), k*, rho*, n_min)
verify   run the oracle battery (optionally with Monte Carlo decoding)

Options can come from flags or from a JSON config file (--config); flags
override file values.  Exit codes: 0 success, 1 usage/config error,
2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

from . import bounds as bd
from .specfn import LpdBudget
from .verify import DEFAULT_SEED, run_oracle_battery

_LN2 = math.log(2.0)
CSV_VERSION_LINE = "# covertcap v1"

_CONFIG_KEYS = (
    "channel",
    "eps_rx",
    "eps_dx",
    "sigma2_rx",
    "sigma2_dx",
    "eps_det",
    "eps_dec",
    "n_grid",
    "output",
    "format",
    "nats",
    "seed",
    "scope",
    "perturb_xi",
)


class UsageError(Exception):
    """Bad flags or config; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise UsageError(message)


@dataclass
class RunConfig:
    """Resolved configuration of one CLI invocation."""

    command: str
    channel: str | None = None
    eps_rx: float | None = None
    eps_dx: float | None = None
    sigma2_rx: float | None = None
    sigma2_dx: float | None = None
    eps_det: float = 0.1
    eps_dec: float = 1e-3
    n_grid: list[float] = field(default_factory=list)
    output: str | None = None
    format: str = "csv"
    nats: bool = False
    seed: int = DEFAULT_SEED
    scope: str = "fast"
    perturb_xi: float = 1.0


def parse_n_grid(spec) -> list[float]:
    """Grid spec: an explicit list, a comma list, or start:stop:points[:log|lin]."""
    if isinstance(spec, (list, tuple)):
        grid = [float(v) for v in spec]
    elif isinstance(spec, str):
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) not in (3, 4):
                raise UsageError(f"bad grid spec {spec!r}: want start:stop:points[:log|lin]")
            try:
                start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
            except ValueError as exc:
                raise UsageError(f"bad grid spec {spec!r}: {exc}") from None
            spacing = parts[3] if len(parts) == 4 else "log"
            if spacing not in ("log", "lin"):
                raise UsageError(f"bad grid spacing {spacing!r}: want log or lin")
            if points < 1 or start <= 0 or stop <= start:
                raise UsageError(f"bad grid spec {spec!r}: need 0 < start < stop, points >= 1")
            if points == 1:
                grid = [start]
            elif spacing == "log":
                ratio = (stop / start) ** (1.0 / (points - 1))
                grid = [start * ratio**i for i in range(points)]
            else:
                step = (stop - start) / (points - 1)
                grid = [start + step * i for i in range(points)]
        else:
            try:
                grid = [float(v) for v in spec.split(",") if v.strip()]
            except ValueError as exc:
                raise UsageError(f"bad grid value: {exc}") from None
    else:
        raise UsageError(f"bad grid spec {spec!r}")
    if not grid:
        raise UsageError("blocklength grid must be nonempty")
    if any(n <= 0 for n in grid):
        raise UsageError("blocklengths must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise UsageError("blocklength grid must be strictly increasing")
    return grid


def _build_parser() -> _Parser:
    parser = _Parser(prog="covertcap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    def add_common(p):
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.add_argument("--output", help="output file path (default: stdout)")

    def add_channel(p):
        p.add_argument("--channel", choices=["bsc", "awgn"])
        p.add_argument("--eps-rx", type=float, dest="eps_rx")
        p.add_argument("--eps-dx", type=float, dest="eps_dx")
        p.add_argument("--sigma2-rx", type=float, dest="sigma2_rx")
        p.add_argument("--sigma2-dx", type=float, dest="sigma2_dx")
        p.add_argument("--eps-det", type=float, dest="eps_det")
        p.add_argument("--eps-dec", type=float, dest="eps_dec")

    p_bound = sub.add_parser("bound", help="sweep the bound over a blocklength grid")
    add_common(p_bound)
    add_channel(p_bound)
    p_bound.add_argument("--n-grid", dest="n_grid", help="comma list or start:stop:points[:log|lin]")
    p_bound.add_argument("--format", choices=["csv", "json"])
    p_bound.add_argument("--nats", action="store_true", default=None,
                         help="append a rate_nats column")

    p_opt = sub.add_parser("optimal", help="peak-rate operating point")
    add_common(p_opt)
    add_channel(p_opt)
    p_opt.add_argument("--format", choices=["text", "json"])

    p_ver = sub.add_parser("verify", help="run the oracle battery")
    add_common(p_ver)
    p_ver.add_argument("--seed", type=int)
    p_ver.add_argument("--scope", choices=["fast", "full"])
    p_ver.add_argument(
        "--perturb-xi",
        type=float,
        dest="perturb_xi",
        help="harness self-test: scale xi in the covertness check (values != 1 must fail)",
    )
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(file_cfg) - set(_CONFIG_KEYS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")

    cfg = RunConfig(command=args.command)
    default_fmt = "text" if args.command == "optimal" else "csv"
    cfg.format = default_fmt
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        value = flag if flag is not None else file_cfg.get(key)
        if value is None:
            continue
        if key == "n_grid":
            cfg.n_grid = parse_n_grid(value)
        elif key in ("eps_rx", "eps_dx", "sigma2_rx", "sigma2_dx",
                     "eps_det", "eps_dec", "perturb_xi"):
            setattr(cfg, key, float(value))
        elif key == "seed":
            cfg.seed = int(value)
        elif key == "nats":
            cfg.nats = bool(value)
        else:
            setattr(cfg, key, value)
    if cfg.format not in ("csv", "json", "text"):
        raise UsageError(f"unknown format {cfg.format!r}")
    return cfg


def _budget(cfg: RunConfig) -> LpdBudget:
    try:
        return LpdBudget(eps_det=cfg.eps_det, eps_dec=cfg.eps_dec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_channel(cfg: RunConfig) -> str:
    if cfg.channel not in ("bsc", "awgn"):
        raise UsageError("choose --channel bsc or --channel awgn")
    if cfg.channel == "bsc":
        if cfg.eps_rx is None or cfg.eps_dx is None:
            raise UsageError("bsc needs --eps-rx and --eps-dx")
        if not 0.0 <= cfg.eps_dx <= 1.0:
            raise UsageError(f"eps_dx must be in [0, 1], got {cfg.eps_dx}")
        if cfg.eps_dx == 0.5:
            if not 0.0 <= cfg.eps_rx <= 1.0:
                raise UsageError(f"eps_rx must be in [0, 1], got {cfg.eps_rx}")
            return "capacity"
        if not 0.0 < cfg.eps_rx < 0.5:
            raise UsageError(
                f"eps_rx must be in (0, 0.5), got {cfg.eps_rx}; "
                "for eps_rx > 0.5 relabel the receiver outputs first"
            )
    else:
        if cfg.sigma2_rx is None or cfg.sigma2_dx is None:
            raise UsageError("awgn needs --sigma2-rx and --sigma2-dx")
        if cfg.sigma2_rx <= 0 or cfg.sigma2_dx <= 0:
            raise UsageError("noise variances must be positive")
    return "normal"


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _bound_rows(cfg: RunConfig, budget: LpdBudget, mode: str):
    rows = []
    if mode == "capacity":
        cap = bd.bsc_capacity_bits(cfg.eps_rx)
        for n in cfg.n_grid:
            rows.append(
                {
                    "n": n,
                    "rho": float("nan"),
                    "tau": 1.0,
                    "log2_m": cap * n,
                    "rate": cap,
                    "asymptotic_rate": float("inf"),
                }
            )
        return rows, None
    if cfg.channel == "bsc":
        asym = bd.bsc_asymptote(cfg.eps_rx, cfg.eps_dx, budget)
        for n in cfg.n_grid:
            pt = bd.bsc_bound_point(n, cfg.eps_rx, cfg.eps_dx, budget)
            rows.append(
                {
                    "n": pt.n,
                    "rho": pt.rho,
                    "tau": pt.tau,
                    "log2_m": pt.log2_m,
                    "rate": pt.rate,
                    "asymptotic_rate": asym / math.sqrt(n),
                }
            )
        op = bd.bsc_operating_point(cfg.eps_rx, cfg.eps_dx, budget)
        return rows, op
    asym = bd.awgn_asymptote(cfg.sigma2_rx, cfg.sigma2_dx, budget)
    op = bd.awgn_operating_point(cfg.sigma2_rx, cfg.sigma2_dx, budget)
    for n in cfg.n_grid:
        pt = bd.awgn_bound_point(n, cfg.sigma2_rx, cfg.sigma2_dx, budget)
        rows.append(
            {
                "n": pt.n,
                "rho": pt.rho,
                "tau": pt.tau,
                "log2_m": pt.log2_m,
                "rate": pt.rate,
                "asymptotic_rate": asym / math.sqrt(n),
                "n_min": op.n_min,
            }
        )
    return rows, op


def _config_echo(cfg: RunConfig) -> dict:
    echo = {
        "channel": cfg.channel,
        "eps_det": cfg.eps_det,
        "eps_dec": cfg.eps_dec,
    }
    if cfg.channel == "bsc":
        echo["eps_rx"] = cfg.eps_rx
        echo["eps_dx"] = cfg.eps_dx
    elif cfg.channel == "awgn":
        echo["sigma2_rx"] = cfg.sigma2_rx
        echo["sigma2_dx"] = cfg.sigma2_dx
    return echo


def _op_dict(op: bd.OptimalOperating | None) -> dict | None:
    if op is None:
        return None
    return {
        "n_star": op.n_star,
        "r_star": op.r_star,
        "k_star": op.k_star,
        "rho_used": op.rho_used,
        "n_min": op.n_min,
    }


def cmd_bound(cfg: RunConfig) -> int:
    if cfg.format not in ("csv", "json"):
        raise UsageError(f"bound emits csv or json, not {cfg.format!r}")
    budget = _budget(cfg)
    mode = _check_channel(cfg)
    if not cfg.n_grid:
        cfg.n_grid = parse_n_grid("1e2:1e8:61:log")
    rows, op = _bound_rows(cfg, budget, mode)
    if mode == "capacity":
        sys.stderr.write(
            "capacity-mode: detector channel is blind (chi-squared = 0); "
            "rows report the receiver channel capacity\n"
        )

    if cfg.format == "json":
        for row in rows:
            row["rho"] = None if math.isnan(row["rho"]) else row["rho"]
            row["asymptotic_rate"] = (
                None if math.isinf(row["asymptotic_rate"]) else row["asymptotic_rate"]
            )
            if cfg.nats:
                row["rate_nats"] = row["rate"] * _LN2
        obj = {
            "config": _config_echo(cfg),
            "points": rows,
            "operating_point": _op_dict(op),
            "verification": None,
        }
        if mode == "capacity":
            obj["mode"] = "capacity"
        _write_text(cfg.output, json.dumps(obj, indent=2, sort_keys=True) + "\n")
        return 0

    columns = ["n", "rho", "tau", "log2_m", "rate", "asymptotic_rate"]
    if cfg.channel == "awgn":
        columns.append("n_min")
    if cfg.nats:
        columns.append("rate_nats")
    lines = [CSV_VERSION_LINE]
    if mode == "capacity":
        lines.append("# capacity-mode: detector-blind; rate column is Rx capacity")
    lines.append(",".join(columns))
    for row in rows:
        if cfg.nats:
            row["rate_nats"] = row["rate"] * _LN2
        lines.append(",".join(_fmt(row[c]) for c in columns))
    _write_text(cfg.output, "\n".join(lines) + "\n")
    return 0


def cmd_optimal(cfg: RunConfig) -> int:
    if cfg.format not in ("text", "json"):
        raise UsageError(f"optimal emits text or json, not {cfg.format!r}")
    budget = _budget(cfg)
    mode = _check_channel(cfg)

    if mode == "capacity":
        cap = bd.bsc_capacity_bits(cfg.eps_rx)
        if cfg.format == "json":
            obj = {
                "config": _config_echo(cfg),
                "points": [],
                "operating_point": None,
                "verification": None,
                "mode": "capacity",
                "rx_capacity_bits_per_use": cap,
            }
            _write_text(cfg.output, json.dumps(obj, indent=2, sort_keys=True) + "\n")
        else:
            _write_text(
                cfg.output,
                "capacity-mode: detector channel is blind (eps_dx = 1/2);\n"
                f"rate is limited only by the receiver capacity {cap:.6g} bits/use\n",
            )
        return 0

    try:
        if cfg.channel == "bsc":
            op = bd.bsc_operating_point(cfg.eps_rx, cfg.eps_dx, budget)
        else:
            op = bd.awgn_operating_point(cfg.sigma2_rx, cfg.sigma2_dx, budget)
    except ValueError:
        sys.stderr.write("no positive covert rate for these parameters\n")
        return 1

    if cfg.format == "json":
        obj = {
            "config": _config_echo(cfg),
            "points": [],
            "operating_point": _op_dict(op),
            "verification": None,
        }
        _write_text(cfg.output, json.dumps(obj, indent=2, sort_keys=True) + "\n")
        return 0

    lines = [
        f"n*     = {op.n_star:.6g}",
        f"R(n*)  = {op.r_star:.6g} bits/use",
        f"k*     = {op.k_star:.6g} bits",
        f"rho*   = {op.rho_used:.6g}",
    ]
    if op.n_min is not None:
        lines.append(f"n_min  = {op.n_min:.6g}")
    _write_text(cfg.output, "\n".join(lines) + "\n")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    report = run_oracle_battery(seed=cfg.seed, scope=cfg.scope, perturb_xi=cfg.perturb_xi)
    sys.stdout.write(report.format_text() + "\n")
    if cfg.output:
        payload = {
            "config": {"seed": cfg.seed, "scope": cfg.scope, "perturb_xi": cfg.perturb_xi},
            "points": [],
            "operating_point": None,
            "verification": report.to_dict(),
        }
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0 if report.all_passed else 2


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand: bound, optimal, or verify")
        cfg = _resolve_config(args)
        if cfg.command == "bound":
            return cmd_bound(cfg)
        if cfg.command == "optimal":
            return cmd_optimal(cfg)
        return cmd_verify(cfg)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
