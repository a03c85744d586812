import json

import pytest

from rlnet.cli import EXIT_DEGENERATE, EXIT_INPUT, EXIT_OK, main

CENTER = ["--center-lat", "42.3626", "--center-lon", "-71.0843"]


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    assert main(["synth", "--seed", "7", "--out", str(out)]) == EXIT_OK
    return out


def analyze(synth_dir, out, *extra, cmd="analyze"):
    return main([cmd, "--events", str(synth_dir / "events.csv"), "--registry", str(synth_dir / "registry.csv"),
                 *CENTER, "--mc-replicates", "20000", "--out", str(out), *extra])


def test_synth_writes_files(synth_dir):
    names = sorted(p.name for p in synth_dir.iterdir())
    assert names == ["events.csv", "planted_core.txt", "registry.csv", "synth_config.txt"]
    cfg = (synth_dir / "synth_config.txt").read_text()
    assert "seed=7\n" in cfg and "study_end=" in cfg


def test_synth_config_file_and_overrides(tmp_path):
    conf = tmp_path / "c.txt"
    conf.write_text("seed=1\nweeks=8\nn_periphery=20\n")
    assert main(["synth", "--config", str(conf), "--seed", "4", "--out", str(tmp_path / "o")]) == EXIT_OK
    text = (tmp_path / "o" / "synth_config.txt").read_text()
    assert "seed=4\n" in text and "weeks=8\n" in text and "n_periphery=20\n" in text
    conf.write_text("weeks=0\n")
    assert main(["synth", "--config", str(conf), "--out", str(tmp_path / "o")]) == EXIT_INPUT


def test_analyze_json_is_byte_identical(synth_dir, tmp_path):
    assert analyze(synth_dir, tmp_path / "a") == EXIT_OK
    assert analyze(synth_dir, tmp_path / "b") == EXIT_OK
    a = (tmp_path / "a" / "report.json").read_bytes()
    assert a == (tmp_path / "b" / "report.json").read_bytes()
    rep = json.loads(a)
    assert rep["metadata"]["window"] == {"window_length_days": 182, "step_days": 7}


def test_analyze_csv_and_metrics(synth_dir, tmp_path):
    assert analyze(synth_dir, tmp_path / "c", "--format", "csv") == EXIT_OK
    assert (tmp_path / "c" / "table4.csv").exists()
    assert analyze(synth_dir, tmp_path / "m", cmd="metrics") == EXIT_OK
    assert sorted(p.name for p in (tmp_path / "m").iterdir()) == ["firm_metrics.json"]


def test_window_flags_change_output(synth_dir, tmp_path):
    assert analyze(synth_dir, tmp_path / "w", "--window-days", "28", "--step-days", "14") == EXIT_OK
    rep = json.loads((tmp_path / "w" / "report.json").read_text())
    assert rep["metadata"]["window"] == {"window_length_days": 28, "step_days": 14}


def test_input_errors(synth_dir, tmp_path):
    assert main(["analyze", "--events", str(tmp_path / "missing.csv"), "--registry",
                 str(synth_dir / "registry.csv"), *CENTER, "--out", str(tmp_path)]) == EXIT_INPUT
    bad = tmp_path / "bad.csv"
    bad.write_text("date,reporter,partner\n2005-07-05,F01,F01\n")
    assert main(["analyze", "--events", str(bad), "--registry", str(synth_dir / "registry.csv"),
                 *CENTER, "--out", str(tmp_path)]) == EXIT_INPUT
    assert main(["analyze", "--events", str(bad), "--registry", str(synth_dir / "registry.csv"),
                 "--center-lat", "99", "--center-lon", "0", "--out", str(tmp_path)]) == EXIT_INPUT
    assert analyze(synth_dir, tmp_path, "--study-start", "2005-07-10") == EXIT_INPUT
    with pytest.raises(SystemExit) as e:
        main(["analyze", "--events", "x"])
    assert e.value.code == EXIT_INPUT


def test_degenerate_data_exit_code(tmp_path):
    reg = tmp_path / "reg.csv"
    reg.write_text("id,kind,lat,lon,in_postal_cluster,age,size,patents_2006,patents_2007\n"
                   "a,BiotechInCluster,42.37,-71.11,true,10,50,4,5\n")
    ev = tmp_path / "ev.csv"
    ev.write_text("date,reporter,partner\n")
    # an empty study period leaves no window to analyze
    assert main(["analyze", "--events", str(ev), "--registry", str(reg), *CENTER,
                 "--study-start", "2005-01-01", "--study-end", "2005-01-01", "--out", str(tmp_path)]) == EXIT_DEGENERATE
    assert main(["analyze", "--events", str(ev), "--registry", str(reg), *CENTER, "--window-days", "7",
                 "--study-start", "2005-01-01", "--study-end", "2005-01-02", "--out", str(tmp_path)]) == EXIT_OK
    # a one-firm registry cannot support any statistics but still reports them as flagged
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["table1"]["error"] == "InsufficientData"
