from indmom.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_basic(self, capsys):
        code, out, _ = run_cli(["eval", "1+0i", "0.5i"], capsys)
        assert code == 0
        assert "cum_p2(1+0i)" in out
        assert "det_residual" in out
        assert "cross_err(1+0i,0+0.5i)" in out  # two-variable pair block
        assert "[N=" in out  # every data line carries truncation metadata

    def test_reports_are_byte_identical(self, capsys):
        _, out1, _ = run_cli(["--seed", "7", "eval", "1+2i"], capsys)
        _, out2, _ = run_cli(["--seed", "7", "eval", "1+2i"], capsys)
        assert out1 == out2

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(["--format", "csv", "eval", "2"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "key,value,annotation"


class TestSupport:
    def test_infinite_support_contains_origin(self, capsys):
        code, out, _ = run_cli(
            ["--t", "inf", "--window", "-8:8", "--nmax", "200",
             "support", "--no-auto-window"], capsys)
        assert code == 0
        assert "x=0 " in out or "x=0\n" in out or "x=-0 " in out

    def test_csv_export(self, tmp_path, capsys):
        out_path = tmp_path / "m.csv"
        code, _, _ = run_cli(
            ["--t", "1", "--window", "-8:8", "--nmax", "200", "--format",
             "csv", "--out", str(out_path), "support", "--no-auto-window"],
            capsys)
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "x,mass"
        assert (tmp_path / "m.csv.meta").exists()


class TestMembership:
    def test_degenerate_zero_vector(self, capsys):
        code, out, _ = run_cli(["membership", "p(0.5)+(-1)*p(0.5)"], capsys)
        assert code == 0
        assert "degenerate_zero_vector = true" in out
        assert "in_DT = true" in out

    def test_eigenvector_truncation_rejected(self, capsys):
        code, out, _ = run_cli(["--nmax", "200", "membership", "p(0.7)"],
                               capsys)
        assert code == 0
        assert "in_DT = false" in out

    def test_w_combination(self, capsys):
        code, out, _ = run_cli(
            ["--nmax", "200", "membership", "w*p(1+1i)+q(1+1i)@1"], capsys)
        assert code == 0
        assert "in_DT = false" in out
        assert "in_DTt(1) = true" in out

    def test_malformed_spec_is_usage_error(self, capsys):
        code, _, err = run_cli(["membership", "p(1)+x(2)"], capsys)
        assert code == 2
        assert "position 5" in err


class TestZeros:
    def test_scan_d(self, capsys):
        code, out, _ = run_cli(
            ["--window", "-6:6", "--nmax", "200", "zeros", "D"], capsys)
        assert code == 0
        assert "count = 3" in out
        assert "suspected_missed = false" in out

    def test_rect_count(self, capsys):
        code, out, _ = run_cli(
            ["--nmax", "200", "--t", "1", "zeros", "BtD",
             "--rect", "0.5:5.5:0.4:3.0"], capsys)
        assert code == 0
        assert "zero_count = 0" in out

    def test_missing_t_is_usage_error(self, capsys):
        code, _, _ = run_cli(["--nmax", "200", "zeros", "BtD"], capsys)
        assert code == 2


class TestXi:
    def test_apply(self, tmp_path, capsys):
        vf = tmp_path / "vec.txt"
        vf.write_text("# test vector\n0\n1\n0.5+0.25i\n")
        code, out, _ = run_cli(
            ["--nmax", "200", "--z0", "0.4+1.1i", "xi", str(vf)], capsys)
        assert code == 0
        assert "resolvent_residual" in out
        assert "xi_in_DT = true" in out

    def test_bad_entry_is_usage_error(self, tmp_path, capsys):
        vf = tmp_path / "vec.txt"
        vf.write_text("1\nnot-a-number\n")
        code, _, err = run_cli(["xi", str(vf)], capsys)
        assert code == 2
        assert ":2:" in err


class TestConfigFile:
    def test_roundtrip(self, tmp_path, capsys):
        cfgfile = tmp_path / "run.ini"
        cfgfile.write_text(
            "[problem]\nkind = power_law\nc = 2.0\n"
            "[truncation]\nn_max = 150\ntail_tol = 1e-4\n"
            "[scan]\nwindow = -6:6\n"
            "[run]\nseed = 99\nprecision = standard\n")
        code, out, _ = run_cli(["--config", str(cfgfile), "eval", "1"], capsys)
        assert code == 0
        assert "n_max=150" in out
        assert "seed: 99" in out

    def test_missing_file(self, capsys):
        code, _, _ = run_cli(["--config", "/nonexistent.ini", "eval", "1"],
                             capsys)
        assert code == 2


class TestVerify:
    def test_small_level_suite_passes(self, capsys):
        code, out, err = run_cli(["--nmax", "120", "--seed", "7", "verify"],
                                 capsys)
        assert code == 0
        assert "all_checks = PASS" in out
        assert "FAIL" not in err
