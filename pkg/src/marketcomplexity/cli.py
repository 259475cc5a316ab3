"""Command-line surface: one subcommand per measure plus a consolidated
report runner and the complexity-table generator.

Exit codes: 0 full success, 1 partial per-metric failures (report), 2
configuration or validation error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from . import __version__, align as align_mod, encode, entropy as entropy_mod
from . import fractal as fractal_mod, lzw as lzw_mod, returns as returns_mod
from .analysis import (
    MetricReport,
    compute_market_metrics,
    correlate_markets,
    pearson_correlation,
)
from .bdm import (
    CtmTable,
    bdm as bdm_fn,
    ctm_from_frequency,
    default_step_bound,
    enumerate_range,
    machine_count,
    sample_machines,
    shard_ranges,
)
from .bdm.machines import OutputDistribution, symmetrize_counts
from .errors import ConfigError, MarketComplexityError
from .ingest import KINDS, PriceSeries, parse_csv, parse_date, serialize_csv


def _read_series(path: str, id: str | None, kind: str) -> PriceSeries:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"input file not found: {path}")
    return parse_csv(p.read_bytes(), id=id or p.stem, kind=kind)


def _file_header(config_hash: str = "none") -> str:
    return f"# marketcomplexity {__version__} config={config_hash}\n"


# ---------------------------------------------------------------------------
# report configuration


@dataclass
class RunConfig:
    markets: list[tuple[str, str, str]] = field(default_factory=list)  # id, kind, path
    pairs: list[tuple[str, str]] = field(default_factory=list)
    window_start: datetime | None = None
    window_end: datetime | None = None
    max_block: int = 4
    bdm_d: int = 4
    bdm_overlap: int | None = None
    bdm_table: str | None = None
    fractal_L: int = 2
    output_dir: str = "out"
    config_hash: str = "none"

    def validate(self) -> None:
        if not self.markets:
            raise ConfigError("no markets configured (need at least one `market =` line)")
        ids = [m[0] for m in self.markets]
        if len(set(ids)) != len(ids):
            raise ConfigError("duplicate market ids in config")
        for id, kind, path in self.markets:
            if kind not in KINDS:
                raise ConfigError(f"market {id!r}: unknown kind {kind!r}")
            if not Path(path).exists():
                raise ConfigError(f"market {id!r}: file not found: {path}")
        for a, b in self.pairs:
            if a not in ids or b not in ids:
                raise ConfigError(f"pair {a},{b} references an unconfigured market")
        if self.window_start and self.window_end and self.window_start >= self.window_end:
            raise ConfigError("window.start must precede window.end")
        if self.bdm_table and not Path(self.bdm_table).exists():
            raise ConfigError(f"bdm.table file not found: {self.bdm_table}")
        if self.max_block < 1 or self.bdm_d < 1 or self.fractal_L < 2:
            raise ConfigError("invalid analysis parameters")


def parse_config(path: str) -> RunConfig:
    """Flat `key = value` config file; `market` and `pair` keys repeat."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    raw = p.read_bytes()
    cfg = RunConfig(config_hash=hashlib.sha256(raw).hexdigest()[:12])
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            _apply_config_key(cfg, key, value)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}")
    return cfg


def _apply_config_key(cfg: RunConfig, key: str, value: str) -> None:
    if key == "market":
        parts = [v.strip() for v in value.split(",")]
        if len(parts) != 3:
            raise ConfigError("market value must be `id,kind,path`")
        cfg.markets.append((parts[0], parts[1], parts[2]))
    elif key == "pair":
        parts = [v.strip() for v in value.split(",")]
        if len(parts) != 2:
            raise ConfigError("pair value must be `src_id,dst_id`")
        cfg.pairs.append((parts[0], parts[1]))
    elif key == "window.start":
        cfg.window_start = parse_date(value)
    elif key == "window.end":
        cfg.window_end = parse_date(value)
    elif key == "entropy.max_block":
        cfg.max_block = int(value)
    elif key == "bdm.d":
        cfg.bdm_d = int(value)
    elif key == "bdm.overlap":
        cfg.bdm_overlap = int(value)
    elif key == "bdm.table":
        cfg.bdm_table = value
    elif key == "fractal.L":
        cfg.fractal_L = int(value)
    elif key == "output.dir":
        cfg.output_dir = value
    else:
        raise ConfigError(f"unknown config key {key!r}")


def _window_series(s: PriceSeries, cfg: RunConfig) -> PriceSeries | None:
    if cfg.window_start is None and cfg.window_end is None:
        return s
    pts = [
        p
        for p in s.points
        if (cfg.window_start is None or p.timestamp >= cfg.window_start)
        and (cfg.window_end is None or p.timestamp <= cfg.window_end)
    ]
    if len(pts) < 2:
        return None
    return PriceSeries(id=s.id, kind=s.kind, points=tuple(pts))


def _default_table() -> CtmTable:
    # fast, deterministic stand-in when no table file is configured
    from .bdm import enumerate_machines

    return ctm_from_frequency(enumerate_machines(2), d_max=7)


# ---------------------------------------------------------------------------
# subcommands


def cmd_report(args) -> int:
    try:
        cfg = parse_config(args.config)
        if args.output_dir:
            cfg.output_dir = args.output_dir
        cfg.validate()
        table = CtmTable.load(cfg.bdm_table) if cfg.bdm_table else _default_table()
        if cfg.bdm_d > table.d_max:
            raise ConfigError(
                f"bdm.d={cfg.bdm_d} exceeds table coverage d_max={table.d_max}"
            )
        series = {
            id: _read_series(path, id, kind) for id, kind, path in cfg.markets
        }
    except MarketComplexityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    header = _file_header(cfg.config_hash)

    rows = []
    for id, kind, _ in cfg.markets:
        full = series[id]
        windowed = _window_series(full, cfg)
        rows.append(
            compute_market_metrics(
                full,
                windowed,
                table,
                max_block=cfg.max_block,
                bdm_d=cfg.bdm_d,
                bdm_overlap=cfg.bdm_overlap,
                hw_L=cfg.fractal_L,
            )
        )
    report = MetricReport(rows)
    (outdir / "report.csv").write_text(header + report.to_csv(), encoding="utf-8")

    failures = []
    for m in report.markets:
        windowed = _window_series(series[m.id], cfg)
        if windowed is not None:
            try:
                hist = returns_mod.build_histogram(returns_mod.log_returns(windowed))
                (outdir / f"{m.id}_hist.csv").write_text(
                    header + hist.to_csv(), encoding="utf-8"
                )
            except MarketComplexityError as exc:
                m.failures.setdefault("histogram", str(exc))
        failures.extend((m.id, name, reason) for name, reason in sorted(m.failures.items()))

    for src_id, dst_id in cfg.pairs:
        name = f"{src_id}__{dst_id}_aligned.csv"
        try:
            src, dst = series[src_id], series[dst_id]
            src_peaks = align_mod.detect_peaks(src, 2)
            dst_peaks = align_mod.detect_peaks(dst, 2)
            pair = align_mod.align(
                src.sampled(),
                dst.sampled(),
                (src_peaks[0][0], src_peaks[1][0]),
                (dst_peaks[0][0], dst_peaks[1][0]),
            )
            (outdir / name).write_text(header + pair.to_csv(), encoding="utf-8")
        except MarketComplexityError as exc:
            failures.append((f"{src_id}__{dst_id}", "alignment", str(exc)))

    lines = [header.rstrip("\n")]
    lines.append(f"markets={len(cfg.markets)}")
    if cfg.window_start:
        lines.append(f"window.start={cfg.window_start.date().isoformat()}")
    if cfg.window_end:
        lines.append(f"window.end={cfg.window_end.date().isoformat()}")
    lines.append(f"ctm: {table.meta.header_line()[2:]}")
    lines.append(
        f"params: max_block={cfg.max_block} bdm_d={cfg.bdm_d} "
        f"bdm_overlap={cfg.bdm_overlap or cfg.bdm_d} fractal_L={cfg.fractal_L}"
    )
    if failures:
        lines.append("failures:")
        for id, metric, reason in failures:
            lines.append(f"  {id} {metric}: {reason}")
    else:
        lines.append("failures: none")
    (outdir / "report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    for id, metric, reason in failures:
        print(f"warning: {id} {metric}: {reason}", file=sys.stderr)
    return 1 if failures else 0


def _shard_path(out: Path, i: int, shards: int) -> Path:
    return out.with_suffix(out.suffix + f".shard{i:03d}of{shards:03d}")


def _write_shard(path: Path, meta: dict, counts) -> None:
    lines = [
        "# " + " ".join(f"{k}={v}" for k, v in meta.items())
    ]
    for s in sorted(counts, key=lambda x: (len(x), x)):
        lines.append(f"{s}\t{counts[s]}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_shard(path: Path) -> tuple[dict, dict]:
    lines = path.read_text(encoding="utf-8").splitlines()
    meta = dict(tok.split("=", 1) for tok in lines[0][2:].split())
    counts = {}
    for line in lines[1:]:
        if line.strip():
            s, c = line.split("\t")
            counts[s] = int(c)
    return meta, counts


def cmd_ctm_gen(args) -> int:
    states = args.states
    out = Path(args.out)
    try:
        if states == 4 or args.budget:
            if not args.budget:
                raise ConfigError("states=4 requires --budget (sampled mode)")
            dist = sample_machines(states, args.budget, seed=args.seed)
        else:
            if states not in (1, 2, 3):
                raise ConfigError("exhaustive mode supports states 1..3")
            step_bound = default_step_bound(states)
            total = machine_count(states)
            counts: dict[str, int] = {}
            halting = 0
            shard_files = []
            for i, (start, stop) in enumerate(shard_ranges(states, args.shards)):
                spath = _shard_path(out, i, args.shards)
                shard_files.append(spath)
                if args.resume and spath.exists():
                    meta, c = _read_shard(spath)
                    if (
                        int(meta["states"]) != states
                        or int(meta["start"]) != start
                        or int(meta["stop"]) != stop
                    ):
                        raise ConfigError(f"stale shard checkpoint {spath}")
                    h = int(meta["halting"])
                else:
                    cc, h = enumerate_range(states, step_bound, start, stop)
                    c = dict(cc)
                    _write_shard(
                        spath,
                        {
                            "states": states,
                            "step_bound": step_bound,
                            "start": start,
                            "stop": stop,
                            "halting": h,
                        },
                        c,
                    )
                for s, n in c.items():
                    counts[s] = counts.get(s, 0) + n
                halting += h
            dist = OutputDistribution(
                counts=dict(symmetrize_counts(counts)),
                halting=2 * halting,
                machines=total,
                states=states,
                step_bound=step_bound,
                exhaustive=True,
            )
            table = ctm_from_frequency(dist, d_max=args.d_max)
            table.save(out)
            for spath in shard_files:
                spath.unlink(missing_ok=True)
            print(f"wrote {out} ({len(table.values)} entries, {halting} halting machines)")
            return 0
        table = ctm_from_frequency(dist, d_max=args.d_max)
        table.save(out)
        print(f"wrote {out} ({len(table.values)} entries, sampled)")
        return 0
    except MarketComplexityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def cmd_ingest(args) -> int:
    s = _read_series(args.file, args.id, args.kind)
    text = serialize_csv(s)
    if args.out:
        Path(args.out).write_text(_file_header() + text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_align(args) -> int:
    src = _read_series(args.src, args.src_id, args.src_kind)
    dst = _read_series(args.dst, args.dst_id, args.dst_kind)
    src_peaks = align_mod.detect_peaks(src, 2)
    dst_peaks = align_mod.detect_peaks(dst, 2)
    m = align_mod.fit_time_map(
        (src_peaks[0][0], src_peaks[1][0]), (dst_peaks[0][0], dst_peaks[1][0])
    )
    pair = align_mod.align(
        src.sampled(),
        dst.sampled(),
        (src_peaks[0][0], src_peaks[1][0]),
        (dst_peaks[0][0], dst_peaks[1][0]),
    )
    print(f"slope={m.slope!r} intercept={m.intercept!r} points={len(pair)}")
    if args.out:
        Path(args.out).write_text(_file_header() + pair.to_csv(), encoding="utf-8")
    return 0


def cmd_returns(args) -> int:
    s = _read_series(args.file, args.id, args.kind)
    logret = returns_mod.log_returns(s)
    st = returns_mod.moments(logret)
    print(
        f"n={st.n} mean={st.mean!r} std={st.std_dev!r} "
        f"kurtosis={st.kurtosis!r} skewness={st.skewness!r}"
    )
    if args.hist_out:
        hist = returns_mod.build_histogram(logret)
        Path(args.hist_out).write_text(_file_header() + hist.to_csv(), encoding="utf-8")
    return 0


def cmd_entropy(args) -> int:
    s = _read_series(args.file, args.id, args.kind)
    bits = encode.binarize(s).to_ascii()
    r = entropy_mod.block_entropy(bits, max_block=args.max_block)
    print(f"bits={r.bits!r} normalized={r.normalized!r} block_max={r.block_max}")
    return 0


def cmd_compress(args) -> int:
    s = _read_series(args.file, args.id, args.kind)
    if args.mode == "binary":
        data = encode.binarize(s).to_ascii().encode("ascii")
    else:
        data = encode.serialize_prices(s)
    ratio = lzw_mod.compressibility(data)
    print(f"mode={args.mode} bytes={len(data)} compressibility={ratio!r}")
    return 0


def cmd_bdm(args) -> int:
    s = _read_series(args.file, args.id, args.kind)
    table = CtmTable.load(args.table)
    bits = encode.binarize(s)
    r = bdm_fn(bits, table, d=args.d, overlap=args.overlap)
    print(
        f"k_estimate={r.k_estimate!r} normalized={r.normalized!r} "
        f"deficiency={r.deficiency!r} blocks_missing={r.blocks_missing_from_table}"
    )
    return 0


def cmd_fractal(args) -> int:
    s = _read_series(args.file, args.id, args.kind)
    grid = fractal_mod.to_unit_grid(s)
    if args.L == 2:
        est = fractal_mod.hall_wood_dimension(grid)
        print(f"dimension={est.value!r} raw={est.raw!r}")
    else:
        raw = fractal_mod.hall_wood_ols(grid, args.L)
        print(f"dimension={raw!r} raw={raw!r} L={args.L}")
    return 0


def cmd_correlate(args) -> int:
    src = _read_series(args.src, args.src_id, args.src_kind)
    dst = _read_series(args.dst, args.dst_id, args.dst_kind)
    src_peaks = align_mod.detect_peaks(src, 2)
    dst_peaks = align_mod.detect_peaks(dst, 2)
    value = correlate_markets(
        src,
        dst,
        (src_peaks[0][0], src_peaks[1][0]),
        (dst_peaks[0][0], dst_peaks[1][0]),
        movements=args.movements,
    )
    what = "movements" if args.movements else "prices"
    print(f"correlation({what})={value!r}")
    return 0


# ---------------------------------------------------------------------------


def _add_series_args(p, prefix: str = ""):
    dash = f"--{prefix}-" if prefix else "--"
    under = f"{prefix}_" if prefix else ""
    p.add_argument(f"{dash}id", dest=f"{under}id", default=None)
    p.add_argument(
        f"{dash}kind", dest=f"{under}kind", default="stock index", choices=KINDS
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marketcomplexity",
        description="Complexity measures for market price histories",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and canonicalize a price CSV")
    p.add_argument("file")
    _add_series_args(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("align", help="peak-anchor one market onto another")
    p.add_argument("src")
    p.add_argument("dst")
    _add_series_args(p, "src")
    _add_series_args(p, "dst")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_align)

    p = sub.add_parser("returns", help="log-return moment statistics")
    p.add_argument("file")
    _add_series_args(p)
    p.add_argument("--hist-out")
    p.set_defaults(fn=cmd_returns)

    p = sub.add_parser("entropy", help="block entropy of price movements")
    p.add_argument("file")
    _add_series_args(p)
    p.add_argument("--max-block", type=int, default=4)
    p.set_defaults(fn=cmd_entropy)

    p = sub.add_parser("compress", help="LZW compressibility")
    p.add_argument("file")
    _add_series_args(p)
    p.add_argument("--mode", choices=("binary", "real"), default="binary")
    p.set_defaults(fn=cmd_compress)

    p = sub.add_parser("bdm", help="block-decomposition complexity estimate")
    p.add_argument("file")
    _add_series_args(p)
    p.add_argument("--table", required=True)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--overlap", type=int, default=None)
    p.set_defaults(fn=cmd_bdm)

    p = sub.add_parser("ctm-gen", help="generate a complexity table")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--budget", type=int, default=None, help="sampled-mode machine budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d-max", type=int, default=None)
    p.set_defaults(fn=cmd_ctm_gen)

    p = sub.add_parser("fractal", help="fractal dimension of the price path")
    p.add_argument("file")
    _add_series_args(p)
    p.add_argument("--L", type=int, default=2)
    p.set_defaults(fn=cmd_fractal)

    p = sub.add_parser("correlate", help="correlation after peak alignment")
    p.add_argument("src")
    p.add_argument("dst")
    _add_series_args(p, "src")
    _add_series_args(p, "dst")
    p.add_argument("--movements", action="store_true")
    p.set_defaults(fn=cmd_correlate)

    p = sub.add_parser("report", help="full metric report from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", default=None)
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except MarketComplexityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
