import json
import math
import os

import numpy as np
import pytest

from drhlab.cli import main
from drhlab.primes import chebyshev_psi, read_prime_cache
from drhlab.tau import read_tau_cache

from oracles import naive_tau


def run(capsys, *argv) -> tuple[int, dict]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else {})


def test_sieve_command(tmp_path, capsys):
    code, payload = run(
        capsys, "sieve", "--x-max", "1000", "--cache-dir", str(tmp_path)
    )
    assert code == 0
    assert payload["count"] == 168 and payload["last"] == 997
    cached = read_prime_cache(str(tmp_path / "primes_1000.prmt"))
    assert len(cached) == 168


def test_tau_command_matches_oracle_and_caches(tmp_path, capsys):
    code, payload = run(
        capsys, "tau", "--tau-n", "10", "--cache-dir", str(tmp_path)
    )
    assert code == 0
    assert payload["tau_head"] == naive_tau(10)[1:]
    assert payload["deligne_ok"] and payload["multiplicativity_ok"]
    cache = tmp_path / "tau_10.tauc"
    first_mtime = os.stat(cache).st_mtime_ns
    code2, payload2 = run(
        capsys, "tau", "--tau-n", "10", "--cache-dir", str(tmp_path)
    )
    assert code2 == 0
    assert payload2 == payload  # identical checksum and report
    assert os.stat(cache).st_mtime_ns == first_mtime  # no recompute


def test_tau_command_ceiling_exit_code(tmp_path, capsys):
    code, _ = run(capsys, "tau", "--tau-n", "5000000", "--cache-dir", str(tmp_path))
    assert code == 3


def test_tau_corrupt_cache_rebuilt(tmp_path, capsys):
    code, payload = run(capsys, "tau", "--tau-n", "12", "--cache-dir", str(tmp_path))
    cache = tmp_path / "tau_12.tauc"
    blob = bytearray(cache.read_bytes())
    blob[40] ^= 0x5A
    cache.write_bytes(bytes(blob))
    code2, payload2 = run(capsys, "tau", "--tau-n", "12", "--cache-dir", str(tmp_path))
    assert code2 == 0 and payload2 == payload
    table, _ = read_tau_cache(str(cache))
    assert table.tau(2) == -24


def test_bias_chi4_crossing_report(tmp_path, capsys):
    out = str(tmp_path / "bias.csv")
    code, payload = run(
        capsys, "bias", "--family", "chi4", "--s", "0", "--x-max", "30000",
        "--cache-dir", str(tmp_path), "--out", out,
    )
    assert code == 0
    assert 26861.0 in payload["crossings"]
    assert 26863.0 in payload["zero_touches"]
    header = open(out).readline().strip()
    assert header == "x,value,running_loglog_ratio"


def test_bias_chi4_half_all_positive(tmp_path, capsys):
    out = str(tmp_path / "biash.csv")
    code, payload = run(
        capsys, "bias", "--family", "chi4", "--s", "0.5", "--x-max", "20000",
        "--cache-dir", str(tmp_path), "--out", out,
    )
    assert code == 0
    values = [float(line.split(",")[1]) for line in open(out).readlines()[1:]]
    assert min(values) > 0.0
    assert payload["natural_density"] > 0.99


def test_bias_delta_density_report(tmp_path, capsys):
    code, payload = run(
        capsys, "bias", "--family", "delta", "--x-max", "20000",
        "--cache-dir", str(tmp_path),
    )
    assert code == 0
    assert payload["natural_density"] >= 0.95
    assert all(x < 10 for x in payload["crossings"])


def test_densities_command_single_row(tmp_path, capsys):
    out = str(tmp_path / "dens.csv")
    code, payload = run(
        capsys, "densities", "--family", "chi4", "--s", "0.5", "--x-max", "5000",
        "--cache-dir", str(tmp_path), "--out", out,
    )
    assert code == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "X,natural_density,log_density,positive_measure"
    assert len(lines) == 2
    assert float(lines[1].split(",")[1]) == payload["natural_density"]


def test_euler_command_identity_column(tmp_path, capsys):
    out = str(tmp_path / "euler.csv")
    code, payload = run(
        capsys, "euler", "--family", "chi4", "--x-max", "10000",
        "--cache-dir", str(tmp_path), "--out", out,
    )
    assert code == 0
    assert payload["max_identity_gap"] <= 1e-9
    rows = [line.split(",") for line in open(out).readlines()[1:]]
    assert all(abs(float(r[5])) <= 1e-9 for r in rows)
    # the x = 100 row is hand-checkable against the 25-prime direct product
    row100 = next(r for r in rows if float(r[0]) == 100.0)
    direct = 0.0
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
              67, 71, 73, 79, 83, 89, 97):
        chi = 1.0 if p % 4 == 1 else -1.0
        direct -= math.log(1.0 - chi * p**-0.5)
    assert float(row100[1]) == pytest.approx(direct, abs=1e-12)


def test_euler_delta_ratio_finite(tmp_path, capsys):
    out = str(tmp_path / "eulerd.csv")
    code, payload = run(
        capsys, "euler", "--family", "delta", "--x-max", "20000",
        "--cache-dir", str(tmp_path), "--out", out,
    )
    assert code == 0
    ratios = [float(line.split(",")[6]) for line in open(out).readlines()[1:]]
    assert all(math.isfinite(r) and r > 0 for r in ratios)


def test_akatsuka_command(tmp_path, capsys):
    out = str(tmp_path / "ak.csv")
    code, payload = run(
        capsys, "akatsuka", "--x-max", "100000", "--tau0", "0:0",
        "--cache-dir", str(tmp_path), "--out", out,
    )
    assert code == 0
    rows = [line.split(",") for line in open(out).readlines()[1:]]
    xs = [float(r[0]) for r in rows]
    assert xs == sorted(xs)
    assert all(math.isfinite(float(r[3])) and float(r[3]) > 0 for r in rows)
    band = payload["points"]["tau0=0,m=0"]
    assert band["band_ratio"] < 10.0


def test_akatsuka_validation_mode(tmp_path, capsys):
    code, payload = run(
        capsys, "akatsuka", "--x-max", "10000", "--tau0", "0:0,3.5:0",
        "--cache-dir", str(tmp_path), "--validate",
    )
    assert code == 0
    assert payload["validation_max_deviation"] <= 1e-6


def test_akatsuka_psi_diag_matches_prime_engine(tmp_path, capsys):
    out = str(tmp_path / "psi.csv")
    code, _ = run(
        capsys, "akatsuka", "--psi-diag", "--x-max", "10000",
        "--grid", "100:10:3", "--cache-dir", str(tmp_path), "--out", out,
    )
    assert code == 0
    rows = [line.split(",") for line in open(out).readlines()[1:]]
    for x_text, v_text in rows:
        x = float(x_text)
        psi = chebyshev_psi(int(x))
        assert float(v_text) == pytest.approx(
            (psi - x) / (math.sqrt(x) * math.log(x)), abs=1e-12
        )


def test_validation_failure_exit_4(tmp_path, capsys, monkeypatch):
    from drhlab import cli as cli_mod
    from drhlab.errors import NormalizerValidationError

    def broken(x, s0, tol=1e-6):
        raise NormalizerValidationError("forced for exit-code test")

    monkeypatch.setattr(cli_mod.ak, "validate_normalizer", broken)
    code = main(["akatsuka", "--x-max", "5000", "--tau0", "0:0",
                 "--cache-dir", str(tmp_path), "--validate"])
    capsys.readouterr()
    assert code == 4


def test_validate_command(tmp_path, capsys):
    code, payload = run(capsys, "validate", "--cache-dir", str(tmp_path))
    assert code == 0
    assert payload["all_ok"] is True
    assert payload["normalizer_max_deviation"] <= 1e-6
    assert payload["chi4_method_gap"] <= 1e-8
    assert payload["tau_backend_independent"] is True


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("x_max = 500\nfamily = chi4\ns = 0.5\n")
    code, payload = run(
        capsys, "densities", "--config", str(cfg), "--cache-dir", str(tmp_path)
    )
    assert code == 0 and payload["X"] == 500.0
    code, payload = run(
        capsys, "densities", "--config", str(cfg), "--x-max", "700",
        "--cache-dir", str(tmp_path),
    )
    assert code == 0 and payload["X"] == 700.0


def test_config_errors_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n")
    code, _ = run(capsys, "densities", "--config", str(cfg))
    assert code == 2
    cfg2 = tmp_path / "bad2.cfg"
    cfg2.write_text("family = chi3\n")  # library family, not a CLI one
    code, _ = run(capsys, "bias", "--config", str(cfg2), "--x-max", "100")
    assert code == 2


def test_byte_identical_outputs_across_runs_and_threads(tmp_path, capsys):
    blobs = {}
    for tag, threads in (("a", "1"), ("b", "4"), ("c", "16")):
        out = str(tmp_path / f"run_{tag}.csv")
        code, _ = run(
            capsys, "bias", "--family", "chi4", "--s", "0.5", "--x-max", "20000",
            "--threads", threads, "--cache-dir", str(tmp_path), "--out", out,
        )
        assert code == 0
        blobs[tag] = open(out, "rb").read() + open(out + ".json", "rb").read()
    assert blobs["a"] == blobs["b"] == blobs["c"]
    out2 = str(tmp_path / "run_a2.csv")
    code, _ = run(
        capsys, "bias", "--family", "chi4", "--s", "0.5", "--x-max", "20000",
        "--threads", "1", "--cache-dir", str(tmp_path), "--out", out2,
    )
    assert open(out2, "rb").read() + open(out2 + ".json", "rb").read() == blobs["a"]
