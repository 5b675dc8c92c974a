import hashlib

import pytest

from smarand.cli import main
from smarand.enclosure import PRECISION_CAP_ENV, precision_cap


def run_main(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# eval


def test_eval_examples(capsys):
    code, out, _ = run_main(["eval", "--n", "9"], capsys)
    assert code == 0
    assert "S(n) = 6" in out and "P(n) = 3" in out
    assert "S(n) != P(n): yes" in out
    assert "factorization = 3^2" in out

    code, out, _ = run_main(["eval", "--n", "1"], capsys)
    assert code == 0
    assert "S(n) = 1" in out and "P(n) = 1" in out

    code, out, _ = run_main(["eval", "--n", "120"], capsys)
    assert code == 0
    assert "S(n) = 5" in out and "P(n) = 5" in out
    assert "S(n) != P(n): no" in out


def test_eval_rejects_malformed_n():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--n", "12.5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--n", "abc"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# census


def test_census_psi(capsys):
    code, out, _ = run_main(["census", "--kind", "psi", "--x", "10", "--y", "2"], capsys)
    assert code == 0
    assert "Psi,10,,,2,4,0.4" in out


def test_census_n_neq_p(capsys):
    code, out, _ = run_main(["census", "--kind", "n-neq-p", "--x", "10"], capsys)
    assert code == 0
    assert "N,10,,,,3,0.3" in out


def test_census_nk_scientific_notation(capsys):
    code, out, _ = run_main(["census", "--kind", "nk", "--x", "1e4", "--k", "2"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "kind,x,k_num,k_den,y,count,density"
    assert lines[1].startswith("N_k,10000,2,1,,")
    assert lines[2].startswith("N_k1,10000,2,1,,")
    assert lines[3].startswith("N_k2,10000,2,1,,")
    n_k = int(lines[1].split(",")[5])
    n_k1 = int(lines[2].split(",")[5])
    n_k2 = int(lines[3].split(",")[5])
    assert n_k == n_k1 + n_k2


def test_census_usage_errors():
    for argv in (
        ["census", "--kind", "psi", "--x", "10"],  # y missing
        ["census", "--kind", "nk", "--x", "10"],  # k missing
        ["census", "--kind", "nk", "--x", "10", "--k", "2", "--y", "3"],
        ["census", "--kind", "m", "--x", "10", "--k", "2"],
        ["census", "--kind", "psi", "--x", "1e4", "--y", "2", "--table-limit", "100"],
        ["census", "--kind", "nope", "--x", "10"],
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2, argv


def test_census_table_limit_override(capsys):
    code, out, _ = run_main(
        ["census", "--kind", "psi", "--x", "100", "--y", "3", "--table-limit", "2e4"],
        capsys,
    )
    assert code == 0
    assert "Psi,100,,,3,20," in out


def test_census_writes_manifest(tmp_path, capsys):
    out_file = tmp_path / "psi.csv"
    code, _, _ = run_main(
        ["census", "--kind", "psi", "--x", "100", "--y", "3", "--out", str(out_file)],
        capsys,
    )
    assert code == 0
    data = out_file.read_bytes()
    assert b"Psi,100,,,3,20," in data
    manifest = (tmp_path / "psi.csv.manifest").read_text()
    assert f"sha256: {hashlib.sha256(data).hexdigest()}" in manifest
    assert "param.kind: psi" in manifest
    assert "version: " in manifest


# ---------------------------------------------------------------------------
# verify


def test_verify_case_i(capsys):
    code, out, _ = run_main(["verify", "--suite", "case-i"], capsys)
    assert code == 0
    assert "PASS case-i/set-equality" in out
    assert "1 2 3 5 6 10 15 20 30 40 60 120" in out


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nonsense"])
    assert exc.value.code == 2


def test_verify_repeat_runs_are_byte_identical(tmp_path, capsys):
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_main(["verify", "--suite", "case-i", "--out", str(f1)], capsys)[0] == 0
    assert run_main(["verify", "--suite", "case-i", "--out", str(f2)], capsys)[0] == 0
    assert f1.read_bytes() == f2.read_bytes()


# ---------------------------------------------------------------------------
# sweep


def test_sweep_thm1(capsys):
    code, out, _ = run_main(
        ["sweep", "--kind", "thm1", "--k", "2", "--x", "1e4,1e5"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,k_num,k_den,exact_count,bound_core,shape_ratio"
    assert len(lines) == 3
    r1 = float(lines[1].split(",")[5])
    r2 = float(lines[2].split(",")[5])
    assert 0 < r1 < r2


def test_sweep_thm2(capsys):
    code, out, _ = run_main(["sweep", "--kind", "thm2", "--x", "100,1000"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 3


def test_sweep_usage_errors():
    for argv in (
        ["sweep", "--kind", "thm1", "--k", "2", "--x", "1e5,1e4"],  # descending
        ["sweep", "--kind", "thm1", "--k", "2", "--x", "10,100"],  # below 17
        ["sweep", "--kind", "thm1", "--k", "2", "--x", ""],  # empty grid
        ["sweep", "--kind", "thm1", "--x", "1e4"],  # k missing
        ["sweep", "--kind", "thm2", "--k", "2", "--x", "1e4"],  # stray k
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2, argv


def test_sweep_threads_do_not_change_bytes(tmp_path, capsys):
    f1, f2 = tmp_path / "t1.csv", tmp_path / "t8.csv"
    base = ["census", "--kind", "nk", "--x", "3000000", "--k", "2"]
    assert run_main(base + ["--out", str(f1), "--threads", "1"], capsys)[0] == 0
    assert run_main(base + ["--out", str(f2), "--threads", "8"], capsys)[0] == 0
    assert f1.read_bytes() == f2.read_bytes()


# ---------------------------------------------------------------------------
# sondow records


def test_sondow_command(capsys):
    code, out, _ = run_main(
        ["sondow", "--n-max", "10", "--convergents-max", "10"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("m,n,gap_lo,gap_hi,sondow_bound,dirichlet_bound")
    assert len(lines) == 1 + 9 + 3  # n in [2,10] plus convergents 8/3, 11/4, 19/7
    row_n7 = [l for l in lines if l.startswith("19,7,")]
    assert row_n7 and row_n7[0].endswith("dirichlet")


def test_sondow_epsilon_flag(capsys):
    code, out, _ = run_main(["sondow", "--n-max", "3", "--epsilon", "1/2"], capsys)
    assert code == 0
    assert ",1,2," in out  # epsilon_num=1, epsilon_den=2
    with pytest.raises(SystemExit) as exc:
        main(["sondow", "--n-max", "3", "--epsilon", "-1/2"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# precision cap environment variable


def test_precision_cap_env(monkeypatch):
    monkeypatch.delenv(PRECISION_CAP_ENV, raising=False)
    assert precision_cap() == 4096
    monkeypatch.setenv(PRECISION_CAP_ENV, "8192")
    assert precision_cap() == 8192
    monkeypatch.setenv(PRECISION_CAP_ENV, "32")
    with pytest.raises(ValueError):
        precision_cap()


def test_cap_env_drives_escalation_ceiling(monkeypatch):
    # a convergent with denominator near 1e10 needs more than 64 bits to
    # separate its gap from the factorial-side bound; the env override
    # must therefore force an indeterminate outcome
    from smarand.enclosure import IndeterminateComparisonError
    from smarand.irrationality import check_sondow_inequality, e_convergents

    m, n = e_convergents(10**10)[-1]
    monkeypatch.setenv(PRECISION_CAP_ENV, "64")
    with pytest.raises(IndeterminateComparisonError):
        check_sondow_inequality(m, n)
    monkeypatch.delenv(PRECISION_CAP_ENV)
    rec = check_sondow_inequality(m, n)
    assert rec.gap.lower > rec.sondow_bound.upper


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
