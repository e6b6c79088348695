import json
from fractions import Fraction

import pytest

from choice_attach.cli import (
    dump_csv,
    dump_json,
    exact_decimal,
    load_csv,
    load_json,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pk_csv(capsys):
    code, out, _ = run(capsys, "pk", "--r", "2", "--s", "2", "--kmax", "4")
    assert code == 0
    table = load_csv(out)
    assert table.columns == ["k", "p_k", "q_k", "repr", "log_q", "residual"]
    assert table.rows[4][1] == pytest.approx(0.7761155642, abs=1e-8)
    assert table.config["r"] == 2 and table.config["command"] == "pk"


def test_pk_standard_pa(capsys):
    _, out, _ = run(capsys, "pk", "--r", "1", "--s", "1", "--kmax", "5")
    assert load_csv(out).rows[5][1] == pytest.approx(5 / 7, abs=1e-13)


def test_pk_monotone(capsys):
    _, out, _ = run(capsys, "pk", "--r", "2", "--s", "1", "--kmax", "1000")
    ps = [row[1] for row in load_csv(out).rows]
    assert all(b > a for a, b in zip(ps, ps[1:]))


def test_logspace_label(capsys):
    _, out, _ = run(capsys, "pk", "--r", "2", "--s", "2", "--kmax", "40")
    assert load_csv(out).rows[-1][3] == "LogSpace"


@pytest.mark.parametrize("argv", [
    ["pk", "--r", "2", "--s", "2", "--kmax", "50"],
    ["pstar", "--r", "7", "--s", "2"],
    ["simulate", "--r", "2", "--s", "2", "--steps", "2000", "--seeds", "2", "--kmax", "5"],
])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip_bytes(capsys, argv, fmt):
    _, out, _ = run(capsys, *argv, "--format", fmt)
    if fmt == "csv":
        assert dump_csv(load_csv(out)) == out
    else:
        assert dump_json(load_json(out)) == out
        assert json.loads(out)["schema_version"] == "1"


def test_pstar_threshold_cutoff(capsys):
    _, out, _ = run(capsys, "pstar", "--r", "3", "--s", "1")
    row = load_csv(out).rows[0]
    assert row[2] == "Root" and row[3] == pytest.approx(0.6180339887, abs=1e-9)
    assert Fraction(row[4]) < Fraction(row[5])
    _, out, _ = run(capsys, "threshold", "--s", "2")
    assert load_csv(out).rows[0][1] == 7
    _, out, _ = run(capsys, "cutoff", "--r", "5", "--s", "2")
    assert load_csv(out).rows[0][2] == 2416
    _, out, _ = run(capsys, "classify", "--r", "2", "--s", "2")
    assert load_csv(out).rows[0][2] == "DoublyExponential"


def test_exact_decimal():
    assert exact_decimal(Fraction(3, 8)) == "0.375"
    assert exact_decimal(Fraction(-1, 4)) == "-0.25"
    assert exact_decimal(Fraction(5)) == "5"
    with pytest.raises(ValueError):
        exact_decimal(Fraction(1, 3))


def test_exit_codes(capsys):
    assert run(capsys, "pk", "--r", "1", "--s", "2")[0] == 2
    assert run(capsys, "cutoff", "--r", "7", "--s", "2")[0] == 3
    assert run(capsys, "threshold", "--s", "2", "--r-cap", "5")[0] == 3
    assert run(capsys, "simulate", "--r", "2", "--s", "2", "--steps", "100000",
               "--memory-cap-mb", "0")[0] == 4
    with pytest.raises(SystemExit) as exc:
        main(["pk", "--r", "2"])
    assert exc.value.code == 2


def test_simulate_reproducible(capsys):
    argv = ["simulate", "--r", "2", "--s", "2", "--steps", "20000", "--seeds", "3", "--base-seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    table = load_csv(a)
    assert {row[-1] for row in table.rows} == {7, 8, 9}
    assert table.config["base_seed"] == 7


def test_simulate_without_replacement(capsys):
    _, out, _ = run(capsys, "simulate", "--mode", "without-replacement", "--r", "2", "--s", "2",
                    "--steps", "100000")
    table = load_csv(out)
    final = max(row[0] for row in table.rows)
    assert all(row[5] > 0.99 for row in table.rows if row[0] == final)


def test_compare_small(capsys):
    _, out, _ = run(capsys, "compare", "--r", "1", "--s", "1", "--steps", "20000", "--seeds", "4", "--kmax", "3")
    table = load_csv(out)
    assert table.columns == ["k", "p_theory", "p_empirical", "stderr", "gap"]
    assert all(row[4] < 0.02 for row in table.rows)


def test_output_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CHOICE_ATTACH_OUT", str(tmp_path / "outdir"))
    code, out, _ = run(capsys, "threshold", "--s", "1", "--out", "elsewhere/t.csv")
    assert code == 0 and out == ""
    assert load_csv((tmp_path / "outdir" / "t.csv").read_text()).rows[0][1] == 3
    run(capsys, "threshold", "--s", "1", "--format", "json")
    assert (tmp_path / "outdir" / "threshold.json").exists()


def test_out_flag(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("CHOICE_ATTACH_OUT", raising=False)
    target = tmp_path / "pk.csv"
    run(capsys, "pk", "--r", "2", "--s", "2", "--kmax", "3", "--out", str(target))
    assert load_csv(target.read_text()).rows[-1][0] == 3
