"""Test the hetcache-tool command line tool.
"""

import math
from tempfile import TemporaryFile
import pytest
import yaml
from hetcache.manifest import RunManifest, sidecar_path
from conftest import *


@pytest.fixture(scope="module")
def test_dir(tmpdir):
    write_network(tmpdir / "reference.json")
    cfg = tmpdir / "hetcache.cfg"
    with cfg.open("wt") as f:
        print("[DEFAULT]", file=f)
        print("workers = 1", file=f)
    return tmpdir

@pytest.fixture(autouse=True)
def config_env(test_dir, monkeypatch):
    monkeypatch.setenv("HETCACHE_CFG", str(test_dir / "hetcache.cfg"))
    monkeypatch.delenv("HETCACHE_WORKERS", raising=False)
    monkeypatch.chdir(test_dir)

def test_cli_ase_single_point(test_dir):
    args = ["ase", "reference.json", "-o", "single.csv"]
    callscript("hetcache-tool.py", args)
    run_id, rows = read_output_csv(test_dir / "single.csv")
    assert len(rows) == 1
    row = rows[0]
    assert row["method"] == "closed_form"
    assert row["stderr"] == ""
    assert row["status"] == "ok"
    assert float(row["lambda2_per_macro_cell"]) == pytest.approx(50)
    assert float(row["ase_bps_hz_m2"]) == pytest.approx(
        float(row["ase_nats_hz_m2"]) / math.log(2.0))
    with sidecar_path(test_dir / "single.csv").open("rb") as f:
        manifest = RunManifest(f)
    assert manifest.run_id == run_id
    assert manifest.method == "closed_form"
    assert manifest.outputs == ("single.csv",)
    assert manifest.head["Date"]

def test_cli_ase_sweep_modes(test_dir):
    """The cached network outperforms the conventional one at every
    helper density.
    """
    sweep = "lambda2=1/(500^2*pi):100/(500^2*pi):5:log"
    for mode in ("conventional", "cached"):
        args = ["ase", "reference.json", "--mode", mode, "--sweep", sweep]
        callscript("hetcache-tool.py", args)
    _, conv = read_output_csv(test_dir / "ase-conventional.csv")
    _, cached = read_output_csv(test_dir / "ase-cached.csv")
    assert len(conv) == len(cached) == 5
    for c, h in zip(conv, cached):
        assert float(c["swept_value"]) == float(h["swept_value"])
        assert float(h["ase_nats_hz_m2"]) > float(c["ase_nats_hz_m2"])

def test_cli_ase_monte_carlo(test_dir):
    """Monte Carlo runs are reproducible for a given seed.
    """
    results = []
    for name in ("mc1.csv", "mc2.csv"):
        args = ["ase", "reference.json", "--method", "monte_carlo",
                "--drops", "3", "--seed", "7", "--window-macros", "60",
                "-o", name]
        callscript("hetcache-tool.py", args)
        results.append(read_output_csv(test_dir / name))
    (id1, rows1), (id2, rows2) = results
    assert float(rows1[0]["stderr"]) > 0
    assert rows1[0]["ase_nats_hz_m2"] == rows2[0]["ase_nats_hz_m2"]
    assert id1 != id2
    with sidecar_path(test_dir / "mc1.csv").open("rb") as f:
        assert RunManifest(f).seed == 7

def test_cli_tradeoff(test_dir):
    target = "20/(500^2*pi)"
    args = ["tradeoff", "reference.json", "--target-ase", target,
            "--density-grid", "lambda2=20/(500^2*pi):200/(500^2*pi):3:log",
            "--no-verify", "-o", "tradeoff.csv"]
    callscript("hetcache-tool.py", args)
    _, rows = read_output_csv(test_dir / "tradeoff.csv")
    assert len(rows) == 3
    for row in rows:
        assert row["status"] in ("ok", "no_solution")
        if row["status"] == "ok":
            assert 0 <= float(row["eta"]) <= 1
            assert int(row["iterations"]) >= 0

def test_cli_tradeoff_unreachable(test_dir):
    args = ["tradeoff", "reference.json", "--target-ase", "1e6",
            "--density-grid", "lambda2=50/(500^2*pi):50/(500^2*pi):1",
            "--no-verify", "-o", "unreachable.csv"]
    callscript("hetcache-tool.py", args)
    _, rows = read_output_csv(test_dir / "unreachable.csv")
    assert len(rows) == 1
    assert rows[0]["status"] == "no_solution"
    assert rows[0]["eta"] == ""

def test_cli_optimal_density(test_dir):
    args = ["optimal-density", "reference.json", "--budget", "1e4/(500^2*pi)",
            "--delta-list", "0.6,1.0",
            "--density-grid", "lambda2=1/(500^2*pi):1e4/(500^2*pi):9",
            "-o", "opt"]
    callscript("hetcache-tool.py", args)
    _, summary = read_output_csv(test_dir / "opt.csv")
    assert [float(r["delta"]) for r in summary] == [0.6, 1.0]
    for delta in ("0.6", "1"):
        _, curve = read_output_csv(test_dir / ("opt-delta%s.csv" % delta))
        assert len(curve) == 9
        n_c = [float(r["cache_files"]) for r in curve]
        assert all(b <= a for a, b in zip(n_c, n_c[1:]))

def run_validate(test_dir, config, returncode=0):
    """Run the validate subcommand, return the gap in % per method.
    """
    with TemporaryFile(mode="w+t", dir=test_dir) as f:
        callscript("hetcache-tool.py", ["validate", config],
                   returncode=returncode, stdout=f)
        f.seek(0)
        out = list(get_output(f))
    assert out[0] == "mode: conventional"
    gaps = {}
    for l in out[2:]:
        fields = l.split()
        if fields[-1] == "ref":
            continue
        gaps[fields[0]] = (float(fields[-2].rstrip('%')), fields[-1])
    return gaps

@pytest.mark.slow
def test_cli_validate(test_dir):
    gaps = run_validate(test_dir, "reference.json")
    assert set(gaps) == {"closed_form", "monte_carlo"}
    closed, status = gaps["closed_form"]
    assert closed == pytest.approx(2.22, abs=0.5)
    assert status == "pass"
    assert gaps["monte_carlo"][0] < 10.0
    assert gaps["monte_carlo"][1] == "pass"

@pytest.mark.slow
@pytest.mark.parametrize(("lambda2", "gap"), [(0, 7.41), (1, 6.78)])
def test_cli_validate_low_density(test_dir, lambda2, gap):
    """At low density the closed form is off by about 7%, within the
    default tolerance.
    """
    name = "lambda2-%d.json" % lambda2
    write_network(test_dir / name,
                  tier2={"density_per_macro_cell": lambda2,
                         "power_dbm": 21, "antennas": 1, "alpha": 3.7})
    gaps = run_validate(test_dir, name)
    assert gaps["closed_form"][0] == pytest.approx(gap, abs=0.5)
    assert gaps["closed_form"][1] == "pass"

@pytest.mark.slow
def test_cli_validate_strict_tolerance(test_dir, monkeypatch):
    cfg = test_dir / "strict.cfg"
    with cfg.open("wt") as f:
        print("[validate]", file=f)
        print("closed_tol = 0.05", file=f)
    monkeypatch.setenv("HETCACHE_CFG", str(cfg))
    write_network(test_dir / "lambda2-0.json",
                  tier2={"density_per_macro_cell": 0,
                         "power_dbm": 21, "antennas": 1, "alpha": 3.7})
    gaps = run_validate(test_dir, "lambda2-0.json", returncode=1)
    assert gaps["closed_form"][1] == "FAIL"

def test_cli_validate_invalid_config(test_dir):
    path = write_network(test_dir / "bad-alpha.json",
                         tier2={"density_per_macro_cell": 50,
                                "power_dbm": 21, "antennas": 1,
                                "alpha": 1.8})
    with TemporaryFile(mode="w+t", dir=test_dir) as f:
        callscript("hetcache-tool.py", ["validate", path.name],
                   returncode=1, stdout=f)
        f.seek(0)
        out = list(get_output(f))
    assert "violation: tier-2 pathloss exponent must exceed 2" in out
