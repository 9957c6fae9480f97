"""Command-line front end.

Every subcommand writes its result to ``<out>/<market>_<subcommand>_<scale>.<ext>``
and logs to stderr. Exit status is 0 on success, 1 for usage errors, 2 for
data errors and 3 for numeric or convergence failures; failures also print
one ``error status=<n> kind=<kind> message=<text>`` line on stderr.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import amm, garch, measures, periodicity
from .ingest import (
    DataError,
    IngestError,
    MinuteGrid,
    SyntheticSpec,
    blocks_to_minute_grid,
    load_blocks_csv,
    load_ohlcv_csv,
    save_ohlcv_csv,
    simulate_periodic_grid,
    synthetic_spec_from_mapping,
)
from .timegrid import MINUTE, SECOND

__all__ = ["run", "main", "build_parser", "UsageError"]

SCHEMA_VERSION = 1
METRIC_ALIASES = {
    "vol": "volatility",
    "volatility": "volatility",
    "volume": "volume",
    "illiq": "illiquidity",
    "illiquidity": "illiquidity",
}
RESOLUTIONS = {"1m": MINUTE, "1s": SECOND}
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("cryptoperiod")

# default parameters of `simulate --family ...`
SIM_PARAMS = {
    "GARCH": garch.GarchParams(mu=0.0, omega=0.1, alpha=0.1, beta=0.8),
    "EGARCH": garch.GarchParams(mu=0.05, omega=0.02, alpha=0.12, beta=0.95, tau=-0.03),
    "EGARCHX": garch.GarchParams(mu=0.05, omega=0.02, alpha=0.08, beta=0.95, tau=-0.03, gamma=0.3),
}
SIM_WEEKDAY = np.array([0.15, 0.1, 0.1, 0.1, 0.25, -0.4, -0.3])


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser, inputs: bool = True) -> None:
    if inputs:
        p.add_argument("--input", nargs="+", help="input file(s)")
        p.add_argument("--columns", help="column remap, e.g. timestamp=time,close=Close")
        p.add_argument("--source", choices=("ohlcv", "blocks"), default="ohlcv")
        p.add_argument("--quote-token1", action="store_true", help="blocks: quote currency is token1")
        p.add_argument("--resolution", choices=tuple(RESOLUTIONS), default="1m")
        p.add_argument("--from", dest="date_from", help="UTC start (inclusive)")
        p.add_argument("--to", dest="date_to", help="UTC end (exclusive)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--market", help="market token for output names")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="key = value file of flag defaults")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cryptoperiod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ingest-check", help="validate and summarise an input file")
    _add_common(p)

    p = sub.add_parser("rv", help="daily realized variance")
    _add_common(p)

    p = sub.add_parser("corr", help="auto or cross-correlation of returns")
    _add_common(p)
    p.add_argument("--step", type=int, default=1, help="return horizon in slots")
    p.add_argument("--max-lag", type=int, default=20)
    p.add_argument("--two-sided", action="store_true")
    p.add_argument("--exclude-filled", action="store_true")

    p = sub.add_parser("profile", help="relative profile at one scale")
    _add_common(p)
    p.add_argument("--scale", choices=tuple(periodicity.SCALES), default="hour")
    p.add_argument("--metric", choices=tuple(METRIC_ALIASES), default="vol")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--exclude-filled", action="store_true")

    p = sub.add_parser("illiquidity", help="relative hourly illiquidity")
    _add_common(p)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--exclude-filled", action="store_true")

    p = sub.add_parser("conditional", help="hour-by-weekday or minute-by-hour profile")
    _add_common(p)
    p.add_argument("--scale", choices=("hour", "minute"), default="hour")
    p.add_argument("--metric", choices=("vol", "volatility", "volume"), default="vol")

    for name, text in (("garch-fit", "fit a daily GARCH-family model"), ("garch-score", "score a fitted model")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        p.add_argument("--family", choices=("garch", "egarch", "egarchx"), default="garch")
        p.add_argument("--periodic", action="store_true")
        p.add_argument("--split", help="last in-sample date")
        if name == "garch-score":
            p.add_argument("--params", required=False, help="report written by garch-fit")

    p = sub.add_parser("amm-quote", help="constant-product swap quote")
    _add_common(p, inputs=False)
    p.add_argument("--x", type=float, required=True, help="input-side reserve")
    p.add_argument("--y", type=float, required=True, help="output-side reserve")
    p.add_argument("--fee", type=float, default=0.003)
    p.add_argument("--in", dest="x_in", type=float, required=True, help="input amount")

    p = sub.add_parser("simulate", help="synthetic minute/second bars or daily returns")
    _add_common(p, inputs=False)
    p.add_argument("--resolution", choices=tuple(RESOLUTIONS), default="1m")
    p.add_argument("--weeks", type=int, help="grid length in weeks")
    p.add_argument("--family", choices=("garch", "egarch", "egarchx"), help="simulate daily returns instead")
    p.add_argument("--periodic", action="store_true")
    p.add_argument("--days", type=int, default=2000)
    return parser


# --------------------------------------------------------------------------
# config


def _read_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    parser.optionxform = str
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IngestError(f"{path}: {exc.strerror}") from None
    parser.read_string("[config]\n" + text)
    return dict(parser["config"])


def _config_path(argv: Sequence[str]) -> Optional[str]:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> tuple[argparse.Namespace, dict]:
    """Parse ``argv``; keys of ``--config`` that name flags become defaults.

    Flags given on the command line override the file. Keys that match no
    flag are returned separately (``simulate`` reads them as synthetic spec
    fields).
    """
    command = next((tok for tok in argv if tok in COMMANDS), None)
    path = _config_path(argv)
    extra = {}
    if path and command:
        sub = parser._subparsers._group_actions[0].choices[command]
        dests = {a.dest: a for a in sub._actions}
        flag_values = {}
        for key, value in _read_config(path).items():
            dest = key.replace("-", "_")
            dest = {"from": "date_from", "to": "date_to", "in": "x_in"}.get(dest, dest)
            if dest not in dests:
                extra[key] = value
                continue
            action = dests[dest]
            if isinstance(action, argparse._StoreTrueAction):
                flag_values[dest] = value.strip().lower() in ("1", "true", "yes", "on")
            elif action.nargs == "+":
                flag_values[dest] = value.split()
            else:
                try:
                    flag_values[dest] = action.type(value) if action.type else value
                except ValueError:
                    raise UsageError(f"{path}: bad value for {key}: {value!r}") from None
                if action.choices and flag_values[dest] not in action.choices:
                    raise UsageError(f"{path}: {key} must be one of {list(action.choices)}")
            action.required = False
        sub.set_defaults(**flag_values)
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required")
    return args, extra


# --------------------------------------------------------------------------
# io helpers


def _epoch(text: Optional[str]) -> Optional[int]:
    if text is None:
        return None
    try:
        return int(np.datetime64(text.rstrip("Z"), "s").astype(np.int64))
    except ValueError:
        raise UsageError(f"cannot parse date {text!r}") from None


def _column_map(text: Optional[str]) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"--columns entry {item!r} is not key=name")
        key, name = item.split("=", 1)
        out[key.strip()] = name.strip()
    return out


def _load_grid(args, path: str) -> MinuteGrid:
    res = RESOLUTIONS[args.resolution]
    if args.source == "blocks":
        grid = blocks_to_minute_grid(
            load_blocks_csv(path), quote_is_token0=not args.quote_token1, resolution=res, name=Path(path).stem
        )
    else:
        grid = load_ohlcv_csv(path, _column_map(args.columns), resolution=res)
    start, end = _epoch(args.date_from), _epoch(args.date_to)
    if start is not None and end is not None and not start < end:
        raise UsageError("--from must precede --to")
    if start is not None or end is not None:
        grid = grid.slice_time(start, end)
    log.info("loaded %s: %d slots, %d filled", path, len(grid), int((~grid.observed).sum()))
    return grid


def _inputs(args, n_min=1, n_max=1) -> list[str]:
    paths = args.input or []
    if not n_min <= len(paths) <= n_max:
        want = str(n_min) if n_min == n_max else f"{n_min} to {n_max}"
        raise UsageError(f"--input takes {want} file(s)")
    return paths


def _market(args, fallback: str) -> str:
    return args.market or fallback


def _clean(value):
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


class _Writer:
    def __init__(self, args, market: str, command: str):
        self.out = Path(args.out)
        self.market = market
        self.command = command
        self.written: list[Path] = []

    def path(self, scale: str, ext: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        return self.out / f"{self.market}_{self.command}_{scale}.{ext}"

    def table(self, scale: str, fmt: str, columns: list, rows: list, meta: Optional[dict] = None) -> Path:
        if fmt == "csv":
            path = self.path(scale, "csv")
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(columns)
                for row in rows:
                    w.writerow([_cell(row[c]) for c in columns])
        else:
            doc = {
                "schema_version": SCHEMA_VERSION,
                "command": self.command,
                "market": self.market,
                "scale": scale,
                "metadata": meta or {},
                "columns": columns,
                "rows": rows,
            }
            path = self.document(scale, doc)
            return path
        self.written.append(path)
        return path

    def document(self, scale: str, doc: dict) -> Path:
        path = self.path(scale, "json")
        doc = {"schema_version": SCHEMA_VERSION, **doc}
        path.write_text(json.dumps(_clean(doc), indent=2) + "\n")
        self.written.append(path)
        return path


# --------------------------------------------------------------------------
# subcommands


def _cmd_ingest_check(args, extra):
    (path,) = _inputs(args)
    grid = _load_grid(args, path)
    w = _Writer(args, _market(args, grid.name), "ingest-check")
    filled = int((~grid.observed).sum())
    summary = {
        "start": str(np.datetime64(grid.spec.start, "s")),
        "end": str(np.datetime64(grid.spec.end, "s")),
        "resolution_s": grid.spec.resolution,
        "n_slots": len(grid),
        "n_observed": len(grid) - filled,
        "n_filled": filled,
        "fill_fraction": filled / len(grid),
        "n_zero_volume": int((grid.volume == 0).sum()),
        "total_volume": float(grid.volume.sum()),
        "first_close": float(math.exp(grid.log_price[0])),
        "last_close": float(math.exp(grid.log_price[-1])),
    }
    rows = [{"key": k, "value": v} for k, v in summary.items()]
    w.table(args.resolution, args.format, ["key", "value"], rows)
    return w


def _cmd_rv(args, extra):
    (path,) = _inputs(args)
    grid = _load_grid(args, path)
    rv = measures.realized_variance(grid)
    w = _Writer(args, _market(args, grid.name), "rv")
    ann = measures.annualized_vol(rv.rv)
    rows = [
        {
            "date": str(d),
            "rv": float(v),
            "annualized_vol_pct": float(a),
            "n_returns": int(n),
            "complete": int(c),
        }
        for d, v, a, n, c in zip(rv.day_index, rv.rv, np.atleast_1d(ann), rv.n_returns, rv.complete)
    ]
    meta = {"units": "squared log returns", "returns_per_day": 288}
    w.table("day", args.format, ["date", "rv", "annualized_vol_pct", "n_returns", "complete"], rows, meta)
    return w


def _cmd_corr(args, extra):
    paths = _inputs(args, 1, 2)
    grids = [_load_grid(args, p) for p in paths]
    if len(grids) == 2:
        start = max(g.spec.start for g in grids)
        end = min(g.spec.end for g in grids)
        grids = [g.slice_time(start, end) for g in grids]
    series = [measures.log_returns(g, args.step, args.exclude_filled) for g in grids]
    a, b = series[0], series[-1]
    cf = measures.cross_correlation(a, b, args.max_lag, two_sided=args.two_sided)
    market = _market(args, "-".join(g.name for g in grids))
    w = _Writer(args, market, "corr")
    rows = [
        {"lag": int(h), "rho": float(r), "band": float(b_), "n": int(n)}
        for h, r, b_, n in zip(cf.lags, cf.rho, cf.band_halfwidth, cf.n)
    ]
    meta = dict(cf.metadata, leader=grids[0].name, follower=grids[-1].name, step=args.step)
    w.table(f"{args.step}{args.resolution[-1]}", args.format, ["lag", "rho", "band", "n"], rows, meta)
    return w


def _profile_rows(profile) -> list[dict]:
    return profile.to_records()


def _cmd_profile(args, extra):
    (path,) = _inputs(args)
    grid = _load_grid(args, path)
    metric = METRIC_ALIASES[args.metric]
    prof = periodicity.relative_profile(grid, args.scale, metric, args.level, args.exclude_filled)
    w = _Writer(args, _market(args, grid.name), "profile")
    meta = dict(prof.metadata, metric=metric, level=args.level)
    w.table(args.scale, args.format, ["bin", "lambda", "ci_low", "ci_high", "n_obs"], _profile_rows(prof), meta)
    return w


def _cmd_illiquidity(args, extra):
    (path,) = _inputs(args)
    grid = _load_grid(args, path)
    prof = periodicity.relative_illiquidity_hour(grid, args.level, args.exclude_filled)
    w = _Writer(args, _market(args, grid.name), "illiquidity")
    meta = dict(prof.metadata, metric="illiquidity", level=args.level)
    w.table("hour", args.format, ["bin", "lambda", "ci_low", "ci_high", "n_obs"], _profile_rows(prof), meta)
    return w


def _cmd_conditional(args, extra):
    (path,) = _inputs(args)
    grid = _load_grid(args, path)
    metric = METRIC_ALIASES[args.metric]
    fn = periodicity.hour_by_weekday if args.scale == "hour" else periodicity.minute_by_hour
    prof = fn(grid, metric)
    w = _Writer(args, _market(args, grid.name), "conditional")
    meta = dict(prof.metadata, outer=prof.outer, metric=metric)
    w.table(args.scale, args.format, ["outer", "inner", "value"], prof.to_records(), meta)
    return w


def _load_daily(args) -> tuple[garch.DailyReturns, str]:
    (path,) = _inputs(args)
    with open(path) as fh:
        header = fh.readline()
    if "return_pct" in header.split(","):
        data = garch.load_daily_csv(path)
        name = Path(path).stem
        start, end = _epoch(args.date_from), _epoch(args.date_to)
        keep = np.ones(len(data), dtype=bool)
        secs = data.dates.astype("datetime64[s]").astype(np.int64)
        if start is not None:
            keep &= secs >= start
        if end is not None:
            keep &= secs < end
        if not keep.all():
            data = garch.DailyReturns(data.dates[keep], data.r[keep], None if data.rv is None else data.rv[keep])
    else:
        grid = _load_grid(args, path)
        data = garch.daily_returns_from_grid(grid)
        name = grid.name
    if len(data) == 0:
        raise DataError(f"{path}: no daily observations")
    return data, name


def _model_spec(args) -> garch.ModelSpec:
    try:
        return garch.ModelSpec(args.family.upper(), bool(args.periodic))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _model_token(spec: garch.ModelSpec) -> str:
    return "day-" + ("p" if spec.periodic else "") + spec.family.lower()


def _path_rows(dates, h) -> list[dict]:
    vol = np.sqrt(365.0 * h)
    return [{"date": str(d), "h": float(v), "annualized_vol_pct": float(a)} for d, v, a in zip(dates, h, vol)]


def _cmd_garch_fit(args, extra):
    spec = _model_spec(args)
    data, name = _load_daily(args)
    in_sample = data.split_index(args.split) if args.split else len(data)
    fit = garch.fit(spec, data, in_sample, seed=args.seed)
    los = garch.score_out_of_sample(fit, data) if fit.n_in < len(data) else None
    w = _Writer(args, _market(args, name), "garch-fit")
    token = _model_token(spec)
    report = fit.report(los)
    report.update(
        split=args.split,
        n_os=len(data) - fit.n_in,
        h1=fit.h1,
        sample_start=str(data.dates[0]),
        sample_end=str(data.dates[-1]),
        seed=args.seed,
    )
    w.document(token, report)
    w.table(token, "csv", ["date", "h", "annualized_vol_pct"], _path_rows(data.dates, fit.h_path))
    log.info("%s: loglik_in %.4f loglik_os %s", spec.label, fit.loglik_in, los)
    return w


def _params_from_report(report: dict) -> garch.GarchParams:
    lam = report.get("lambda")
    return garch.GarchParams(
        mu=report["mu"],
        omega=report["omega"],
        alpha=report["alpha"],
        beta=report["beta"],
        tau=report.get("tau", 0.0) or 0.0,
        gamma=report.get("gamma", 0.0) or 0.0,
        lambda_d=np.zeros(7) if lam is None else np.asarray(lam, float),
    )


def _cmd_garch_score(args, extra):
    data, name = _load_daily(args)
    if args.params:
        try:
            report = json.loads(Path(args.params).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise IngestError(f"{args.params}: cannot read report ({exc})") from None
        spec = garch.ModelSpec(report["family"], bool(report["periodic"]))
        params = _params_from_report(report)
        if spec.periodic:
            lam = params.lambda_d - params.lambda_d.mean()
            params = replace(params, lambda_d=lam)
        split = args.split or report.get("split")
        n_in = data.split_index(split) if split else len(data)
        h1 = float(np.var(data.r[:n_in]))
    else:
        spec = _model_spec(args)
        n_in = data.split_index(args.split) if args.split else len(data)
        fit = garch.fit(spec, data, n_in, seed=args.seed, compute_std_errors=False)
        params, h1 = fit.params, fit.h1
        split = args.split
    if n_in >= len(data):
        raise DataError("no out-of-sample observations after the split")
    total, per_obs = garch.log_likelihood(spec, params, data, slice(n_in, None), h1)
    h = garch.filter_variance(spec, params, data, h1)
    w = _Writer(args, _market(args, name), "garch-score")
    token = _model_token(spec)
    w.document(
        token,
        {
            "model": spec.label,
            "family": spec.family,
            "periodic": spec.periodic,
            "split": split,
            "loglik_os": total,
            "n_os": len(per_obs),
            "mean_loglik_os": total / len(per_obs),
            **params.as_dict(spec),
        },
    )
    w.table(token, "csv", ["date", "h", "annualized_vol_pct"], _path_rows(data.dates[n_in:], h[n_in:]))
    return w


def _cmd_amm_quote(args, extra):
    try:
        pool = amm.PoolState(args.x, args.y, args.fee)
        y_out, new_pool = amm.swap_out(pool, args.x_in)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    avg = amm.average_price(pool, args.x_in)
    quote = {
        "spot_price": amm.spot_price(pool),
        "y_out": y_out,
        "average_price": avg,
        "slippage": amm.slippage(pool, args.x_in),
        "new_reserve_x": new_pool.reserve_x,
        "new_reserve_y": new_pool.reserve_y,
    }
    sys.stdout.write(f"y_out {y_out:.10g}\naverage_price {avg:.10g}\n")
    w = _Writer(args, _market(args, "pool"), "amm-quote")
    if args.format == "json":
        w.document("quote", {"inputs": {"x": args.x, "y": args.y, "fee": args.fee, "x_in": args.x_in}, **quote})
    else:
        w.table("quote", "csv", ["key", "value"], [{"key": k, "value": v} for k, v in quote.items()])
    return w


def _cmd_simulate(args, extra):
    if args.family:
        spec = _model_spec(args)
        params = SIM_PARAMS[spec.family]
        if spec.periodic:
            params = replace(params, lambda_d=SIM_WEEKDAY.copy())
        data = garch.simulate_returns(spec, params, args.days, seed=args.seed)
        w = _Writer(args, _market(args, "synthetic"), "simulate")
        path = w.path(_model_token(spec), "csv")
        garch.save_daily_csv(data, path)
        w.written.append(path)
        return w
    values = dict(extra)
    values.setdefault("seed", str(args.seed))
    values.setdefault("resolution", str(RESOLUTIONS[args.resolution]))
    if args.weeks is not None:
        values["length_weeks"] = str(args.weeks)
    try:
        sspec = synthetic_spec_from_mapping(values, args.config or "flags")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, IngestError):
            raise
        raise UsageError(str(exc)) from None
    grid = simulate_periodic_grid(sspec)
    w = _Writer(args, _market(args, "synthetic"), "simulate")
    path = w.path("1m" if sspec.resolution == MINUTE else "1s", "csv")
    save_ohlcv_csv(grid, path)
    w.written.append(path)
    return w


COMMANDS = {
    "ingest-check": _cmd_ingest_check,
    "rv": _cmd_rv,
    "corr": _cmd_corr,
    "profile": _cmd_profile,
    "illiquidity": _cmd_illiquidity,
    "conditional": _cmd_conditional,
    "garch-fit": _cmd_garch_fit,
    "garch-score": _cmd_garch_score,
    "amm-quote": _cmd_amm_quote,
    "simulate": _cmd_simulate,
}


def _fail(status: int, kind: str, message: str) -> int:
    message = " ".join(str(message).split())
    sys.stderr.write(f"error status={status} kind={kind} message={message}\n")
    return status


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Execute one subcommand and return its exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args, extra = _apply_config(parser, argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except (IngestError, OSError) as exc:
        return _fail(EXIT_DATA, "data", exc)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if extra and args.command != "simulate":
        return _fail(EXIT_USAGE, "usage", f"unknown config keys {sorted(extra)}")
    try:
        writer = COMMANDS[args.command](args, extra)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except (garch.NumericError, garch.ConvergenceError, np.linalg.LinAlgError, FloatingPointError) as exc:
        return _fail(EXIT_NUMERIC, "numeric", exc)
    except (IngestError, OSError, KeyError, ValueError) as exc:
        return _fail(EXIT_DATA, "data", exc)
    for path in writer.written:
        log.info("wrote %s", path)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
