import re
from datetime import date, timedelta

import numpy as np
import pytest

from marketcomplexity import __version__
from marketcomplexity.bdm import CtmTable
from marketcomplexity.bdm.machines import enumerate_range
from marketcomplexity.cli import (
    _shard_path,
    _write_shard,
    build_parser,
    main,
    parse_config,
)


def write_market(dir, name, prices, start=date(2013, 1, 1)):
    lines = [
        f"{(start + timedelta(days=i)).isoformat()},{p}"
        for i, p in enumerate(prices)
    ]
    path = dir / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def walk_prices(seed, n=120):
    rng = np.random.default_rng(seed)
    return [round(float(p), 6) for p in 50 * np.exp(np.cumsum(rng.standard_normal(n)) * 0.02)]


class TestParser:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as e:
            build_parser().parse_args(["--version"])
        assert e.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestIngest:
    def test_stdout_canonical(self, tmp_path, capsys):
        p = write_market(tmp_path, "m.csv", [1.5, 2.0, 3.25])
        assert main(["ingest", str(p)]) == 0
        out = capsys.readouterr().out
        assert out == "2013-01-01,1.5\n2013-01-02,2\n2013-01-03,3.25\n"

    def test_out_file_has_header(self, tmp_path, capsys):
        p = write_market(tmp_path, "m.csv", [1, 2, 3])
        out = tmp_path / "canon.csv"
        assert main(["ingest", str(p), "--out", str(out)]) == 0
        first = out.read_text().splitlines()[0]
        assert first == f"# marketcomplexity {__version__} config=none"

    def test_idempotent(self, tmp_path, capsys):
        p = write_market(tmp_path, "m.csv", [1.5, 2.0, 3.25])
        main(["ingest", str(p)])
        once = capsys.readouterr().out
        q = tmp_path / "again.csv"
        q.write_text(once, encoding="utf-8")
        main(["ingest", str(q)])
        assert capsys.readouterr().out == once

    def test_bad_csv_exit_2(self, tmp_path, capsys):
        p = tmp_path / "bad.csv"
        p.write_text("2013-01-01,1\n2013-01-02,not-a-price\n")
        assert main(["ingest", str(p)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exit_2(self, tmp_path, capsys):
        assert main(["ingest", str(tmp_path / "nope.csv")]) == 2


class TestMeasureCommands:
    def test_returns_values_match_library(self, tmp_path, capsys):
        from marketcomplexity.ingest import parse_csv
        from marketcomplexity.returns import log_returns, moments

        p = write_market(tmp_path, "m.csv", walk_prices(1))
        assert main(["returns", str(p)]) == 0
        out = capsys.readouterr().out
        st = moments(log_returns(parse_csv(p.read_bytes(), "m", "stock index")))
        fields = dict(tok.split("=", 1) for tok in out.split())
        assert int(fields["n"]) == st.n
        assert float(fields["mean"]) == pytest.approx(st.mean, rel=1e-12)
        assert float(fields["kurtosis"]) == pytest.approx(st.kurtosis, rel=1e-12)

    def test_entropy_smoke(self, tmp_path, capsys):
        p = write_market(tmp_path, "m.csv", walk_prices(2))
        assert main(["entropy", str(p), "--max-block", "3"]) == 0
        fields = dict(tok.split("=", 1) for tok in capsys.readouterr().out.split())
        assert 0.0 <= float(fields["normalized"]) <= 1.0
        assert int(fields["block_max"]) == 3

    def test_compress_modes_differ(self, tmp_path, capsys):
        p = write_market(tmp_path, "m.csv", walk_prices(3))
        assert main(["compress", str(p), "--mode", "binary"]) == 0
        binary = capsys.readouterr().out
        assert main(["compress", str(p), "--mode", "real"]) == 0
        real = capsys.readouterr().out
        assert "mode=binary" in binary and "mode=real" in real
        b = float(dict(t.split("=", 1) for t in binary.split())["compressibility"])
        r = float(dict(t.split("=", 1) for t in real.split())["compressibility"])
        assert b != r

    def test_fractal_smoke(self, tmp_path, capsys):
        p = write_market(tmp_path, "m.csv", walk_prices(4))
        assert main(["fractal", str(p)]) == 0
        fields = dict(tok.split("=", 1) for tok in capsys.readouterr().out.split())
        assert 1.0 <= float(fields["dimension"]) < 2.0

    def test_align_shifted_copy(self, tmp_path, capsys):
        prices = walk_prices(5)
        a = write_market(tmp_path, "a.csv", prices)
        b = write_market(tmp_path, "b.csv", prices, start=date(2015, 6, 1))
        out = tmp_path / "pair.csv"
        assert main(["align", str(a), str(b), "--out", str(out)]) == 0
        fields = dict(tok.split("=", 1) for tok in capsys.readouterr().out.split())
        assert float(fields["slope"]) == pytest.approx(1.0)
        assert out.exists() and out.read_text().startswith("# marketcomplexity")

    def test_correlate_shifted_copy(self, tmp_path, capsys):
        prices = walk_prices(6)
        a = write_market(tmp_path, "a.csv", prices)
        b = write_market(tmp_path, "b.csv", prices, start=date(2015, 6, 1))
        assert main(["correlate", str(a), str(b)]) == 0
        out = capsys.readouterr().out
        value = float(out.split("=", 1)[1])
        assert value == pytest.approx(1.0, abs=1e-9)

    def test_bdm_uses_table_file(self, tmp_path, capsys, table2):
        table_path = tmp_path / "ctm.tsv"
        table2.save(table_path)
        p = write_market(tmp_path, "m.csv", walk_prices(7))
        assert main(["bdm", str(p), "--table", str(table_path)]) == 0
        fields = dict(tok.split("=", 1) for tok in capsys.readouterr().out.split())
        assert float(fields["k_estimate"]) > 0
        assert 0.0 <= float(fields["normalized"]) <= 1.0


class TestCtmGen:
    def test_states1_matches_library(self, tmp_path, capsys):
        out = tmp_path / "ctm1.tsv"
        assert main(["ctm-gen", "--states", "1", "--out", str(out)]) == 0
        table = CtmTable.load(out)
        assert table.meta.states == 1
        assert table.meta.machines == 36

    def test_shard_count_invariance(self, tmp_path, capsys):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        assert main(["ctm-gen", "--states", "2", "--out", str(a), "--shards", "1"]) == 0
        assert main(["ctm-gen", "--states", "2", "--out", str(b), "--shards", "8"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_shard_checkpoints_removed_on_success(self, tmp_path, capsys):
        out = tmp_path / "ctm2.tsv"
        assert main(["ctm-gen", "--states", "2", "--out", str(out), "--shards", "4"]) == 0
        assert not list(tmp_path.glob("*.shard*"))

    def test_resume_from_partial_checkpoints(self, tmp_path, capsys):
        from marketcomplexity.bdm import default_step_bound, shard_ranges

        ref = tmp_path / "ref.tsv"
        assert main(["ctm-gen", "--states", "2", "--out", str(ref)]) == 0

        # simulate an interrupted 4-shard run with shard 0 already done
        out = tmp_path / "resumed.tsv"
        start, stop = shard_ranges(2, 4)[0]
        counts, halting = enumerate_range(2, default_step_bound(2), start, stop)
        _write_shard(
            _shard_path(out, 0, 4),
            {
                "states": 2,
                "step_bound": default_step_bound(2),
                "start": start,
                "stop": stop,
                "halting": halting,
            },
            dict(counts),
        )
        rc = main(
            ["ctm-gen", "--states", "2", "--out", str(out), "--shards", "4", "--resume"]
        )
        assert rc == 0
        assert out.read_bytes() == ref.read_bytes()

    def test_stale_checkpoint_rejected(self, tmp_path, capsys):
        out = tmp_path / "ctm.tsv"
        _write_shard(
            _shard_path(out, 0, 4),
            {"states": 2, "step_bound": 6, "start": 7, "stop": 9, "halting": 1},
            {"0": 1},
        )
        rc = main(
            ["ctm-gen", "--states", "2", "--out", str(out), "--shards", "4", "--resume"]
        )
        assert rc == 2

    def test_states4_requires_budget(self, tmp_path, capsys):
        assert main(["ctm-gen", "--states", "4", "--out", str(tmp_path / "x")]) == 2

    def test_sampled_mode_header(self, tmp_path, capsys):
        out = tmp_path / "sampled.tsv"
        rc = main(
            ["ctm-gen", "--states", "2", "--out", str(out), "--budget", "3000"]
        )
        assert rc == 0
        assert "mode=sampled" in out.read_text().splitlines()[0]


def write_config(tmp_path, body):
    p = tmp_path / "run.cfg"
    p.write_text(body, encoding="utf-8")
    return p


class TestReportConfig:
    def test_parse_roundtrip(self, tmp_path):
        m = write_market(tmp_path, "m.csv", [1, 2, 3])
        cfg = parse_config(
            write_config(
                tmp_path,
                f"market = BTC, cryptocurrency, {m}\n"
                "entropy.max_block = 5\n"
                "bdm.d = 6\n"
                "window.start = 2013-01-01\n"
                "window.end = 01/06/2014\n",
            )
        )
        assert cfg.markets == [("BTC", "cryptocurrency", str(m))]
        assert cfg.max_block == 5 and cfg.bdm_d == 6
        assert cfg.window_end.year == 2014 and cfg.window_end.month == 6
        assert re.fullmatch(r"[0-9a-f]{12}", cfg.config_hash)

    def test_unknown_key_rejected(self, tmp_path):
        from marketcomplexity.errors import ConfigError

        with pytest.raises(ConfigError):
            parse_config(write_config(tmp_path, "no.such.key = 1\n"))


class TestReportCommand:
    def good_config(self, tmp_path):
        a = write_market(tmp_path, "a.csv", walk_prices(10))
        b = write_market(tmp_path, "b.csv", walk_prices(11))
        return write_config(
            tmp_path,
            f"market = ALPHA, stock index, {a}\n"
            f"market = BETA, precious metal, {b}\n"
            "pair = ALPHA, BETA\n"
            f"output.dir = {tmp_path / 'out'}\n",
        )

    def test_success_writes_all_outputs(self, tmp_path, capsys):
        cfg = self.good_config(tmp_path)
        assert main(["report", "--config", str(cfg)]) == 0
        out = tmp_path / "out"
        for name in (
            "report.csv",
            "report.txt",
            "ALPHA_hist.csv",
            "BETA_hist.csv",
            "ALPHA__BETA_aligned.csv",
        ):
            assert (out / name).exists(), name
        assert "failures: none" in (out / "report.txt").read_text()
        header = (out / "report.csv").read_text().splitlines()[0]
        assert re.fullmatch(
            rf"# marketcomplexity {re.escape(__version__)} config=[0-9a-f]{{12}}",
            header,
        )

    def test_deterministic_across_runs(self, tmp_path, capsys):
        cfg = self.good_config(tmp_path)
        assert main(["report", "--config", str(cfg), "--output-dir", str(tmp_path / "r1")]) == 0
        assert main(["report", "--config", str(cfg), "--output-dir", str(tmp_path / "r2")]) == 0
        for name in ("report.csv", "report.txt", "ALPHA__BETA_aligned.csv"):
            assert (tmp_path / "r1" / name).read_bytes() == (
                tmp_path / "r2" / name
            ).read_bytes()

    def test_constant_market_gives_exit_1(self, tmp_path, capsys):
        a = write_market(tmp_path, "a.csv", walk_prices(12))
        c = write_market(tmp_path, "c.csv", [7.0] * 60)
        cfg = write_config(
            tmp_path,
            f"market = GOOD, stock index, {a}\n"
            f"market = FLAT, foreign exchange, {c}\n"
            f"output.dir = {tmp_path / 'out'}\n",
        )
        assert main(["report", "--config", str(cfg)]) == 1
        err = capsys.readouterr().err
        assert "FLAT" in err
        text = (tmp_path / "out" / "report.csv").read_text()
        assert "FAILED:" in text
        good_row = [l for l in text.splitlines() if l.startswith("GOOD,")][0]
        assert "FAILED" not in good_row

    def test_empty_window_isolates_windowed_metrics(self, tmp_path, capsys):
        a = write_market(tmp_path, "a.csv", walk_prices(13))
        cfg = write_config(
            tmp_path,
            f"market = ALPHA, stock index, {a}\n"
            "window.start = 1990-01-01\n"
            "window.end = 1990-02-01\n"
            f"output.dir = {tmp_path / 'out'}\n",
        )
        assert main(["report", "--config", str(cfg)]) == 1
        text = (tmp_path / "out" / "report.csv").read_text()
        assert "FAILED: empty window" in text
        row = text.splitlines()[-1]
        # whole-history fractal dimension still computed
        assert row.split(",")[-1] not in ("", "FAILED: empty window")

    def test_bad_config_exit_2(self, tmp_path, capsys):
        a = write_market(tmp_path, "a.csv", walk_prices(14))
        cases = [
            "",  # no markets
            f"market = A, no-such-kind, {a}\n",
            f"market = A, stock index, {tmp_path / 'missing.csv'}\n",
            f"market = A, stock index, {a}\nmarket = A, stock index, {a}\n",
            f"market = A, stock index, {a}\npair = A, B\n",
            f"market = A, stock index, {a}\n"
            "window.start = 2014-01-01\nwindow.end = 2013-01-01\n",
            f"market = A, stock index, {a}\nbdm.d = 99\n",
        ]
        for body in cases:
            cfg = write_config(tmp_path, body)
            assert main(["report", "--config", str(cfg)]) == 2, body

    def test_missing_config_exit_2(self, tmp_path, capsys):
        assert main(["report", "--config", str(tmp_path / "nope.cfg")]) == 2
