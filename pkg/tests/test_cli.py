import json

from modroots.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, out


def test_energy_subcommand(capsys):
    code, out = run(capsys, "energy", "--op", "T", "--nu", "2", "--k", "2", "--N", "3", "--j", "1", "--q", "7")
    assert code == 0 and out == "44"
    code, out = run(capsys, "energy", "--op", "set", "--q", "7", "--k", "2", "--members", "1,2")
    assert out == "44"
    code, out = run(capsys, "energy", "--op", "preimage", "--j", "1", "--k", "2", "--N", "3", "--q", "7")
    assert out == "1,3,4,6"


def test_gowers_subcommand(capsys):
    code, out = run(capsys, "gowers", "--op", "norm", "--q", "7", "--members", "1,3,4,6", "--k", "2")
    assert code == 0 and out == "44"
    code, out = run(capsys, "gowers", "--op", "lemmas", "--q", "7", "--members", "1,3,4,6", "--k", "2")
    assert code == 0 and "growth_ok=True" in out


def test_lattice_subcommand(capsys):
    code, out = run(capsys, "lattice", "--op", "count", "--q", "5", "--coeffs", "1,3", "--widths", "2,2")
    assert code == 0 and out == "5"
    code, out = run(capsys, "lattice", "--op", "geometry", "--q", "5", "--coeffs", "1,3", "--widths", "2,2")
    assert code == 0 and "minkowski_ok=True" in out


def test_poly_subcommand(capsys):
    code, out = run(capsys, "poly", "--op", "eval", "--k", "3", "--point", "1,8,1,8")
    assert code == 0 and out == "0"
    code, out = run(capsys, "poly", "--op", "export", "--k", "2")
    assert len(out.splitlines()) == 35


def test_discrepancy_subcommand(capsys):
    code, out = run(capsys, "discrepancy", "--op", "gamma", "--q", "7", "--P", "5")
    assert code == 0 and out == "12/7"
    code, out = run(capsys, "discrepancy", "--op", "value", "--points", "3/7,4/7")
    assert out.startswith("12/7")


def test_expsum_subcommand(capsys):
    code, out = run(capsys, "expsum", "--op", "salie", "--q", "101", "--U0", "5", "--r", "2", "--c", "1")
    assert code == 0 and "ratio=" in out


def test_sweep_subcommand(tmp_path, capsys):
    out_path = tmp_path / "r.json"
    code = main([
        "--seed", "3", "--format", "json", "--out", str(out_path),
        "sweep", "--check", "salie-moment",
        "--grid", "q=101", "--grid", "U0=4", "--grid", "r=2", "--grid", "trial=1,2",
    ])
    capsys.readouterr()
    assert code == 0
    rows = json.loads(out_path.read_text())
    assert len(rows) == 2


def test_sweep_config_error(capsys):
    code = main(["sweep", "--check", "salie-moment", "--grid", "bogus=1"])
    capsys.readouterr()
    assert code == 3


def test_sweep_exit_two_on_hard_assertion_failure(capsys, monkeypatch):
    import modroots.harness as harness

    def always_fail(params, rng, budgets):
        return harness.CellResult(measured=0, passed=False)

    monkeypatch.setitem(harness.CHECKS, "trichotomy", (always_fail, {"trial"}))
    code = main(["sweep", "--check", "trichotomy", "--grid", "trial=1,2"])
    capsys.readouterr()
    assert code == 2
