import json

from candyfix import __version__
from candyfix.cli import main
from candyfix.render import tables_from_json, tables_from_text
from candyfix.engine import compute_tables


def run(*argv):
    return main(list(argv))


def test_version(capsys):
    assert run("--version") == 0
    assert __version__ in capsys.readouterr().out


def test_simulate_chessboard_word(tmp_path, capsys):
    code = run("simulate", "--init", "word:0101010", "--trials", "1",
               "--out", str(tmp_path))
    assert code == 0
    assert "fixation_time 0" in capsys.readouterr().out
    lines = (tmp_path / "trajectories.jsonl").read_text().splitlines()
    assert len(lines) == 1
    rec = json.loads(lines[0])
    assert rec["fixation_time"] == 0


def test_simulate_block_all_fixate(tmp_path):
    code = run("simulate", "--init", "block", "--M", "10", "--trials", "200",
               "--seed", "5", "--out", str(tmp_path))
    assert code == 0
    for line in (tmp_path / "trajectories.jsonl").read_text().splitlines():
        assert json.loads(line)["fixation_time"] is not None
    assert (tmp_path / "aggregate.csv").read_text().startswith("t,survivors,mean_I")


def test_simulate_invalid_distribution(tmp_path, capsys):
    code = run("simulate", "--n", "3", "--p", "0.3,0.3,0.3", "--out", str(tmp_path))
    assert code == 2
    assert "must sum to 1" in capsys.readouterr().err


def test_simulate_rerun_byte_identical(tmp_path):
    args = ["simulate", "--init", "block", "--M", "6", "--trials", "25",
            "--seed", "3"]
    assert run(*args, "--out", str(tmp_path / "a")) == 0
    assert run(*args, "--out", str(tmp_path / "b")) == 0
    for name in ("trajectories.jsonl", "aggregate.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_manifest_written_and_referenced(tmp_path):
    assert run("simulate", "--init", "word:000", "--trials", "2", "--seed", "1",
               "--out", str(tmp_path)) == 0
    manifests = list(tmp_path.glob("manifest-*.json"))
    assert len(manifests) == 1
    manifest = json.loads(manifests[0].read_text())
    assert manifest["command"] == "simulate"
    assert set(manifest["outputs"]) == {"trajectories.jsonl", "aggregate.csv"}
    assert manifest["exploratory"] is False
    run_id = manifest["run_id"]
    rec = json.loads((tmp_path / "trajectories.jsonl").read_text().splitlines()[0])
    assert rec["manifest"] == run_id
    assert (tmp_path / "manifests.jsonl").read_text().count('"run_id"') == 1


def test_manifest_marks_exploratory_parameters(tmp_path):
    assert run("simulate", "--init", "word:000", "--kappa", "4", "--trials", "1",
               "--out", str(tmp_path)) == 0
    manifest = json.loads(next(iter(tmp_path.glob("manifest-*.json"))).read_text())
    assert manifest["exploratory"] is True


def test_enumerate_k1_text_and_json(tmp_path, capsys):
    assert run("enumerate", "--k", "1", "--out", str(tmp_path)) == 0
    out = capsys.readouterr().out
    for token in ("1/2", "3/4", "p_unstable = 5/2^3"):
        assert token in out
    tables = tables_from_json(json.loads((tmp_path / "tables.json").read_text()))
    assert tables == compute_tables(1)
    round_tripped = tables_from_text((tmp_path / "tables.txt").read_text())
    assert round_tripped == tables


def test_enumerate_k0_rejected(tmp_path):
    assert run("enumerate", "--k", "0", "--out", str(tmp_path)) == 2


def test_enumerate_checkpoint_resume_and_corruption(tmp_path):
    ck = tmp_path / "ck"
    assert run("enumerate", "--k", "2", "--checkpoint", str(ck),
               "--out", str(tmp_path / "r1")) == 0
    # resume over the finished state: identical tables
    assert run("enumerate", "--k", "2", "--checkpoint", str(ck),
               "--out", str(tmp_path / "r2")) == 0
    assert (tmp_path / "r1" / "tables.json").read_bytes() == \
        (tmp_path / "r2" / "tables.json").read_bytes()
    # corrupt a level: exit 3
    level = ck / "level-2.npy"
    blob = bytearray(level.read_bytes())
    blob[-1] ^= 0xFF
    level.write_bytes(bytes(blob))
    assert run("enumerate", "--k", "2", "--checkpoint", str(ck),
               "--out", str(tmp_path / "r3")) == 3


def test_certify_k1_and_k3(tmp_path, capsys):
    assert run("certify", "--k", "1", "--out", str(tmp_path / "c1")) == 0
    out = capsys.readouterr().out
    assert "c = 5/4" in out and "CONTRACTION" not in out
    assert run("certify", "--k", "3", "--out", str(tmp_path / "c3")) == 0
    out = capsys.readouterr().out
    assert "c = 55705/49152" in out


def test_certify_reuses_tables_file(tmp_path, capsys):
    assert run("enumerate", "--k", "2", "--out", str(tmp_path)) == 0
    capsys.readouterr()
    assert run("certify", "--k", "2", "--tables", str(tmp_path / "tables.json"),
               "--no-compute", "--out", str(tmp_path)) == 0
    assert "c = 121/96" in capsys.readouterr().out
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert cert["c"] == "121/96" and cert["contraction"] is False


def test_certify_no_compute_without_tables(tmp_path):
    assert run("certify", "--k", "2", "--no-compute", "--out", str(tmp_path)) == 2


def test_crosscheck_small_pass(tmp_path, capsys):
    code = run("crosscheck", "--k", "1", "--windows", "12", "--samples", "20000",
               "--seed", "2", "--out", str(tmp_path))
    assert code == 0
    report = json.loads((tmp_path / "crosscheck.json").read_text())
    assert report["failures"] == 0
    assert len(report["checks"]) == 12


def test_crosscheck_zero_samples_rejected(tmp_path):
    assert run("crosscheck", "--k", "1", "--samples", "0",
               "--out", str(tmp_path)) == 2


def test_crosscheck_detects_breach(tmp_path, monkeypatch, capsys):
    # force a wrong exact value: every window must now breach the tolerance
    import candyfix.cli as cli_mod
    from candyfix.montecarlo import WindowCheck

    def broken(window, k, trials, seed=0):
        return WindowCheck(window, 0.5, 0.0, 0.001, False)

    monkeypatch.setattr(cli_mod, "check_window_estimate", broken)
    code = run("crosscheck", "--k", "1", "--windows", "3", "--samples", "10",
               "--out", str(tmp_path))
    assert code == 1
    assert "BREACH" in capsys.readouterr().out


def test_probe_window(capsys):
    assert run("probe", "--k", "1", "110001011") == 0
    assert "3/2^3" in capsys.readouterr().out


def test_unknown_init_rejected(tmp_path):
    assert run("simulate", "--init", "nonsense", "--out", str(tmp_path)) == 2


def test_missing_subcommand_is_usage_error():
    assert run() == 2
