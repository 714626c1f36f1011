"""End-to-end tests of the command line: outputs, manifests, verification and exit codes."""

import json

import numpy as np
import pytest

from condlab import __version__
from condlab.cli import main, normalized_argv, read_config_file
from condlab.core.io import load, read_manifest
from condlab.exceptions import UsageError


def _run(argv):
    return main([str(a) for a in argv])


# ---------------------------------------------------------------------------
# Standard output
# ---------------------------------------------------------------------------

def test_scalar_goes_to_stdout(capsys):
    with pytest.warns(UserWarning, match="No --out"):
        assert _run(["gamma"]) == 0
    assert float(capsys.readouterr().out.strip()) == pytest.approx(0.5, rel=1e-9)


def test_table_goes_to_stdout_as_csv(capsys):
    with pytest.warns(UserWarning):
        assert _run(["kingman-w", "--n", 5]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,u,log_W,mean_fitness,u_n_alpha"
    assert len(lines) == 6


def test_stdout_runs_write_their_manifest_to_stderr(tmp_path, capsys):
    with pytest.warns(UserWarning, match="manifest to stderr"):
        assert _run(["kingman-w", "--n", 5]) == 0
    captured = capsys.readouterr()
    doc = json.loads(captured.err)
    assert doc["subcommand"] == "kingman-w"
    assert doc["argv"][0] == "kingman-w"
    assert doc["argv"][doc["argv"].index("--n") + 1] == "5"
    assert list(doc["outputs"]) == ["<stdout>"]

    saved = tmp_path / "stdout.manifest.json"
    saved.write_text(captured.err, encoding="utf-8")
    assert _run(["verify", saved]) == 0
    assert "verified <stdout>" in capsys.readouterr().out

    doc["outputs"]["<stdout>"] = "0" * 64
    saved.write_text(json.dumps(doc), encoding="utf-8")
    assert _run(["verify", saved]) == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out

# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

def test_usage_errors_exit_with_one(capsys):
    assert _run(["gamma", "--beta", 1.5]) == 1
    assert _run(["no-such-experiment"]) == 1
    assert _run(["perm-h", "--n", 9, "--brute-check"]) == 1
    assert _run(["net-phase", "--lambda", "abc"]) == 1
    assert "error" in capsys.readouterr().err


def test_brute_check_passes(tmp_path):
    out = tmp_path / "h.csv"
    assert _run(["perm-h", "--gamma", 1.0, "--n", 6, "--brute-check", "--out", out]) == 0
    table = load(out)
    np.testing.assert_allclose(table["h"], table["brute"], rtol=1e-12)


def test_decreasing_profile_is_a_numerical_failure(tmp_path):
    source = tmp_path / "wave.csv"
    source.write_text("x,mass\n1,0.5\n2,0.3\n4,0.2\n", encoding="utf-8")
    assert _run(["fit-wave", "--input", source, "--out", tmp_path / "fit.csv"]) == 2


def test_malthus_accepts_short_sequences(capsys):
    with pytest.warns(UserWarning):
        assert _run(["malthus", "--gamma", -1.0, "--n", 100]) == 0
    short = capsys.readouterr().out.strip().splitlines()
    with pytest.warns(UserWarning):
        assert _run(["malthus", "--gamma", -1.0]) == 0
    default = capsys.readouterr().out.strip().splitlines()
    assert short[0] == "c_star,residual"
    assert float(short[1].split(",")[0]) == pytest.approx(float(default[1].split(",")[0]), rel=1e-12)


def test_missing_manifest_exits_with_one(tmp_path):
    assert _run(["verify", tmp_path / "absent.manifest.json"]) == 1

# ---------------------------------------------------------------------------
# Manifests and verification
# ---------------------------------------------------------------------------

@pytest.fixture
def wave_run(tmp_path):
    out = tmp_path / "wave.csv"
    assert _run(["kingman-wave", "--n", 200, "--x", "1,2", "--out", out]) == 0
    return out, tmp_path / "wave.csv.manifest.json"


def test_manifest_records_the_run(wave_run):
    out, manifest_file = wave_run
    m = read_manifest(manifest_file)
    assert m.subcommand == "kingman-wave"
    assert m.seed is None
    assert m.parameters["n"] == 200
    assert m.parameters["x"] == [1.0, 2.0]
    assert set(m.outputs) == {out.name}
    assert "--out" not in m.argv


def test_verify_reproduces_the_output(wave_run, capsys):
    _, manifest_file = wave_run
    assert _run(["verify", manifest_file]) == 0
    assert "verified wave.csv" in capsys.readouterr().out


def test_verify_detects_a_changed_digest(wave_run):
    _, manifest_file = wave_run
    doc = json.loads(manifest_file.read_text(encoding="utf-8"))
    doc["outputs"]["wave.csv"] = "0" * 64
    manifest_file.write_text(json.dumps(doc), encoding="utf-8")
    assert _run(["verify", manifest_file]) == 2


def test_verify_warns_on_version_mismatch(wave_run):
    _, manifest_file = wave_run
    doc = json.loads(manifest_file.read_text(encoding="utf-8"))
    doc["version"] = "0.0.0"
    manifest_file.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.warns(UserWarning, match="0.0.0"):
        assert _run(["verify", manifest_file]) == 0


def test_seeded_runs_record_and_replay_the_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("CONDLAB_SEED", "77")
    out = tmp_path / "cycles.csv"
    assert _run(["perm-sample", "--gamma", 1.0, "--n", 300, "--out", out]) == 0
    manifest_file = tmp_path / "cycles.csv.manifest.json"
    assert read_manifest(manifest_file).seed == 77
    monkeypatch.delenv("CONDLAB_SEED")
    assert _run(["verify", manifest_file]) == 0
    assert load(out)["length"].sum() == 300


def test_workers_do_not_change_the_bytes(tmp_path):
    common = ["perm-wave-left", "--n", 200, "--x", "1", "--replicas", 8, "--seed", 3]
    assert _run([*common, "--workers", 1, "--out", tmp_path / "one.csv"]) == 0
    assert _run([*common, "--workers", 2, "--out", tmp_path / "two.csv"]) == 0
    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "two.csv").read_bytes()


def test_json_output(tmp_path):
    out = tmp_path / "phase.json"
    assert _run(["net-phase", "--lambda", 2.0, "--out", out]) == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert "phase" in doc["columns"]
    assert load(out)["phase"][0] == "BE"


def test_plot_is_written(tmp_path):
    pytest.importorskip("matplotlib")
    plot = tmp_path / "limit.svg"
    assert _run(["limit-mass", "--out", tmp_path / "limit.csv", "--plot", plot]) == 0
    assert plot.read_text(encoding="utf-8").lstrip().startswith("<?xml")

# ---------------------------------------------------------------------------
# Configuration files
# ---------------------------------------------------------------------------

def test_config_file_parsing(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# network\nlambda = 2\nrtol = 1e-9\nbrute-check = yes\n", encoding="utf-8")
    flags, settings = read_config_file(cfg)
    assert flags == {"lam": 2.0, "brute_check": True}
    assert settings == {"rtol": 1e-9}


def test_quadrature_runs_validate_the_rule(tmp_path):
    cfg = tmp_path / "quad.cfg"
    cfg.write_text("tail_method = quadrature\nquadrature_nodes = 4\n", encoding="utf-8")
    with pytest.warns(RuntimeWarning, match="quadrature_rtol"):
        assert _run(["kingman-w", "--n", 5, "--alpha", 2.5, "--config", cfg, "--out", tmp_path / "w.csv"]) == 0


def test_config_file_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n", encoding="utf-8")
    with pytest.raises(UsageError):
        read_config_file(cfg)
    assert _run(["net-phase", "--config", cfg]) == 1


def test_explicit_flags_beat_the_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("lambda = 2\nrtol = 1e-9\n", encoding="utf-8")
    from_file = tmp_path / "file.csv"
    explicit = tmp_path / "explicit.csv"
    assert _run(["net-phase", "--config", cfg, "--out", from_file]) == 0
    assert _run(["net-phase", "--config", cfg, "--lambda", 0.5, "--out", explicit]) == 0
    assert load(from_file)["phase"][0] == "BE"
    assert load(explicit)["phase"][0] == "FGR"
    m = read_manifest(tmp_path / "file.csv.manifest.json")
    assert m.parameters["settings"] == {"rtol": 1e-9}
    assert "--config" not in m.argv and "--lambda" in m.argv


def test_normalized_argv_skips_volatile_flags():
    argv = normalized_argv("perm-h", {"gamma": -1.0, "n": 7, "x": (0.5, 1.0), "out": "a.csv", "workers": 2,
                                      "brute_check": True, "plateau": None})
    assert argv == ["perm-h", "--gamma", "-1", "--n", "7", "--x", "0.5,1", "--brute-check"]
