import io
import json
import math
import os

import numpy as np
import pytest

from moment_utilities.cli import EXIT_INPUT, EXIT_OK, EXIT_REJECT, \
    EXIT_SINGULAR, OUTPUT_DIR_ENV, main, read_sample
from moment_utilities.distributions import LawSpec, sample
from moment_utilities.misc_helpers import SampleParseError


def write_sample(path, values):
    np.savetxt(str(path), np.asarray(values))
    return str(path)


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def tree_bytes(root):
    files = {}
    for folder, _, names in os.walk(root):
        for name in names:
            path = os.path.join(folder, name)
            with open(path, "rb") as handle:
                files[os.path.relpath(path, root)] = handle.read()
    return files


class TestReadSample:

    def test_plain(self):
        text = "# weights\n1.5\n\n  2.5  # second\n-3e-1\n"
        assert list(read_sample(io.StringIO(text))) == [1.5, 2.5, -0.3]

    def test_bad_line(self):
        with pytest.raises(SampleParseError) as err:
            read_sample(io.StringIO("1.0\n2.0\nabc\n"))
        assert err.value.line == 3
        assert str(err.value).startswith("line 3: cannot parse 'abc'")

    def test_not_finite(self):
        with pytest.raises(SampleParseError) as err:
            read_sample(io.StringIO("1.0\ninf\n"))
        assert err.value.line == 2

    @pytest.mark.parametrize("text", ["", "# nothing\n\n"])
    def test_empty(self, text):
        with pytest.raises(SampleParseError) as err:
            read_sample(io.StringIO(text))
        assert "sample is empty" in str(err.value)

    def test_csv_column(self):
        text = "id,x\n1,0.5\n2,\n3,2.5\n"
        assert list(read_sample(io.StringIO(text), "x")) == [0.5, 2.5]

    def test_csv_errors(self):
        with pytest.raises(SampleParseError) as err:
            read_sample(io.StringIO("id,x\n1,0.5\n"), "y")
        assert err.value.line == 1
        with pytest.raises(SampleParseError) as err:
            read_sample(io.StringIO("id,x\n1,0.5\n2,two\n"), "x")
        assert err.value.line == 3


class TestCoeffs:

    def test_canonical(self, capsys):
        code, doc, _ = run_json(capsys, ["coeffs", "gamma", "2", "3",
                                         "--mode", "canonical"])
        assert code == EXIT_OK
        assert doc["law"] == "Gamma(2, 3)"
        assert list(doc["modes"]) == ["canonical"]
        mode = doc["modes"]["canonical"]
        assert mode["H"]["c1"] == pytest.approx(18.0)
        for method in ("exact-moments", "exact-quadrature"):
            sigma = mode["sigmas"][method]
            assert sigma["s11"] == pytest.approx(12.0, rel=1e-5)
            assert sigma["s22"] == pytest.approx(31.5, rel=1e-5)
            assert sigma["s12"] == pytest.approx(18.0, rel=1e-5)
            assert sigma["det"] == pytest.approx(54.0, rel=1e-4)
        assert doc["published_correlation"] == 0.6976

    def test_paper_correlation(self, capsys):
        code, doc, _ = run_json(capsys, ["coeffs", "gamma", "2", "3",
                                         "--mode", "paper"])
        assert code == EXIT_OK
        sigma = doc["modes"]["paper"]["sigmas"]["exact-quadrature"]
        assert 0.70 <= sigma["correlation"] <= 0.75

    def test_text(self, capsys):
        assert main(["coeffs", "gamma", "2", "3"]) == EXIT_OK
        out = capsys.readouterr()[0]
        assert "Gamma(2, 3), canonical coefficients" in out
        assert "Gamma(2, 3), paper coefficients" in out
        assert "s11=12 s22=31.5 s12=18 det=54" in out
        assert "published correlation for Gamma(2, 3): 0.6976" in out

    def test_script_quadrature(self, capsys):
        code, doc, _ = run_json(capsys, ["coeffs", "beta", "2", "3",
                                         "--script-quadrature"])
        assert code == EXIT_OK
        sigma = doc["modes"]["canonical"]["sigmas"]["exact-quadrature"]
        exact = doc["modes"]["canonical"]["sigmas"]["exact-moments"]
        assert sigma["s11"] == pytest.approx(exact["s11"], rel=1e-3)
        assert "published_correlation" not in doc

    def test_unreadable_published_cell(self, capsys):
        code, doc, _ = run_json(capsys, ["coeffs", "gamma", "3", "10",
                                         "--mode", "paper"])
        assert code == EXIT_OK
        cell = doc["flagged_cell"]
        assert cell["entry"] == "s12"
        assert cell["published"] == "7.985.01"
        assert cell["computed"] == pytest.approx(
            doc["modes"]["paper"]["sigmas"]["exact-moments"]["s12"])
        assert main(["coeffs", "gamma", "3", "10"]) == EXIT_OK
        assert "published s12 for Gamma(3, 10) is unreadable (7.985.01)" in \
            capsys.readouterr()[0]

    def test_no_flagged_cell(self, capsys):
        _, doc, _ = run_json(capsys, ["coeffs", "gamma", "2", "3"])
        assert "flagged_cell" not in doc

    def test_missing_moment(self, capsys):
        assert main(["coeffs", "fisher", "5", "6"]) == EXIT_INPUT
        assert "fourth moment requires b>8" in capsys.readouterr()[1]

    def test_invalid_law(self, capsys):
        assert main(["coeffs", "beta", "0", "3"]) == EXIT_INPUT
        err = capsys.readouterr()[1]
        assert err.startswith("error: 1 error(s) found in this law "
                              "specification")

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as err:
            main(["coeffs", "gamma", "2", "3", "--bogus"])
        assert err.value.code == 2

    def test_unknown_law(self):
        with pytest.raises(SystemExit) as err:
            main(["coeffs", "normal", "0", "1"])
        assert err.value.code == 2


class TestEstimate:

    def test_degenerate(self, capsys, tmp_path):
        path = write_sample(tmp_path / "ones.txt", [1.0] * 4)
        assert main(["estimate", "gamma", path]) == EXIT_INPUT
        assert "S^2=0" in capsys.readouterr()[1]

    def test_uniform_inline(self, capsys):
        code, doc, _ = run_json(capsys, ["estimate", "uniform",
                                         "--values", "0,2"])
        assert code == EXIT_OK
        assert doc["a_hat"] == pytest.approx(1 - math.sqrt(6))
        assert doc["b_hat"] == pytest.approx(1 + math.sqrt(6))
        assert doc["moments"]["n"] == 2
        assert doc["moments"]["var_unbiased"] == pytest.approx(2.0)

    @pytest.mark.parametrize("flag", [
        ["--tol", "1e-6"],
        ["--script-quadrature"]
    ])
    def test_no_quadrature_flags(self, flag):
        with pytest.raises(SystemExit) as err:
            main(["estimate", "uniform", "--values", "0,2"] + flag)
        assert err.value.code == 2

    def test_csv_column(self, capsys, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("id,x\n1,0\n2,2\n")
        code, doc, _ = run_json(capsys, ["estimate", "uniform", str(path),
                                         "--column", "x"])
        assert code == EXIT_OK
        assert doc["b_hat"] == pytest.approx(1 + math.sqrt(6))

    def test_missing_column(self, capsys, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("id,x\n1,0\n2,2\n")
        assert main(["estimate", "uniform", str(path), "--column",
                     "y"]) == EXIT_INPUT
        assert "column 'y' not found" in capsys.readouterr()[1]

    def test_bad_line(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0.5\n0.7\n# fine\nnot-a-number\n")
        assert main(["estimate", "beta", str(path)]) == EXIT_INPUT
        assert "line 4: cannot parse 'not-a-number'" in \
            capsys.readouterr()[1]

    def test_comments(self, capsys, tmp_path):
        path = tmp_path / "commented.txt"
        path.write_text("# two observations\n1.0  # first\n\n3.0\n")
        code, doc, _ = run_json(capsys, ["estimate", "gamma", str(path)])
        assert code == EXIT_OK
        assert doc["moments"]["n"] == 2
        assert doc["moments"]["mean"] == 2.0

    def test_empty_file(self, capsys, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# no data\n")
        assert main(["estimate", "gamma", str(path)]) == EXIT_INPUT
        assert "sample is empty" in capsys.readouterr()[1]

    def test_missing_file(self, capsys, tmp_path):
        path = str(tmp_path / "absent.txt")
        assert main(["estimate", "gamma", path]) == EXIT_INPUT
        assert "cannot read" in capsys.readouterr()[1]

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("0.2\n0.4\n0.9\n"))
        code, doc, _ = run_json(capsys, ["estimate", "beta", "-"])
        assert code == EXIT_OK
        assert doc["law"] == "beta"
        assert doc["moments"]["n"] == 3

    @pytest.mark.slow
    def test_large_sample(self, capsys, tmp_path):
        law = LawSpec("gamma", 10, 3)
        path = write_sample(tmp_path / "big.txt", sample(law, 10 ** 6, 1))
        code, doc, _ = run_json(capsys, ["estimate", "gamma", path])
        assert code == EXIT_OK
        assert doc["a_hat"] == pytest.approx(10.0, rel=0.02)
        assert doc["b_hat"] == pytest.approx(3.0, rel=0.02)


class TestTest:

    def test_far_hypothesis_rejected(self, capsys, tmp_path):
        path = write_sample(tmp_path / "x.txt",
                            sample(LawSpec("gamma", 2, 3), 1000, 1))
        code, doc, _ = run_json(capsys, ["test", "gamma", "10", "3", path])
        assert code == EXIT_REJECT
        assert doc["tests"]["omnibus"]["reject_at_5pct"] is True
        assert doc["tests"]["omnibus"]["df"] == 2
        assert doc["tests"]["a"]["df"] == 0
        assert doc["sigma"]["method"] == "exact-moments"
        assert doc["n"] == 1000

    def test_true_hypothesis_mostly_accepted(self, capsys, tmp_path):
        law = LawSpec("gamma", 2, 3)
        accepted = 0
        for seed in range(30):
            path = write_sample(tmp_path / ("x%d.txt" % seed),
                                sample(law, 1000, seed))
            code = main(["test", "gamma", "2", "3", path])
            assert code in (EXIT_OK, EXIT_REJECT)
            accepted += code == EXIT_OK
        capsys.readouterr()
        assert accepted >= 22

    def test_text(self, capsys):
        code = main(["test", "uniform", "0", "1", "--values",
                     "0.1,0.5,0.9,0.3,0.7"])
        out = capsys.readouterr()[0]
        assert code in (EXIT_OK, EXIT_REJECT)
        assert out.startswith("H0: Uniform(0, 1), n=5")
        assert "omnibus" in out and "df=2" in out

    def test_singular_sigma(self, capsys):
        code = main(["test", "uniform", "0", "1", "--values",
                     "0.5,0.5,0.5", "--sigma", "plugin"])
        assert code == EXIT_SINGULAR
        assert "singular" in capsys.readouterr()[1]

    def test_replication_needs_seed(self, capsys):
        code = main(["test", "gamma", "2", "3", "--values", "0.5,1.0,0.2",
                     "--sigma", "replication"])
        assert code == EXIT_INPUT
        assert "requires --seed" in capsys.readouterr()[1]

    def test_replication_sigma(self, capsys, tmp_path):
        path = write_sample(tmp_path / "x.txt",
                            sample(LawSpec("gamma", 2, 3), 300, 4))
        code, doc, _ = run_json(capsys, [
            "test", "gamma", "2", "3", path, "--sigma", "replication",
            "--seed", "5", "--replications", "200"])
        assert code in (EXIT_OK, EXIT_REJECT)
        assert doc["sigma"]["method"] == "replication"
        assert doc["sigma"]["s11"] == pytest.approx(12.0, rel=0.5)


class TestSimulate:

    def test_files(self, capsys, tmp_path):
        out = str(tmp_path / "run")
        code, doc, _ = run_json(capsys, [
            "simulate", "gamma", "2", "3", "--n", "30", "--B", "20",
            "--seed", "1", "--output-dir", out])
        assert code == EXIT_OK
        assert doc["output_dir"] == out
        assert doc["reports"][0]["config"]["n"] == 30
        for name in ("error_table.csv", "ratio_table.csv", "pvalues.csv",
                     "omnibus.csv", "qq_a_plugin.csv",
                     "parzen_b_replication.csv", "report.json"):
            assert os.path.isfile(os.path.join(out, name))

    def test_requires_seed(self, capsys, tmp_path):
        code = main(["simulate", "gamma", "2", "3", "--n", "30",
                     "--output-dir", str(tmp_path)])
        assert code == EXIT_INPUT
        assert "simulate requires --seed" in capsys.readouterr()[1]
        assert os.listdir(str(tmp_path)) == []

    @pytest.mark.parametrize("flags, message", [
        (["--n", "ten"], "--n must be an integer"),
        (["--n", "30", "--sigma", "bootstrap"], "sigma_methods"),
        (["--n", "1"], "n must be an integer >= 2"),
        (["--n", "30", "--B", "1"], "B must be an integer >= 2")
    ])
    def test_bad_config(self, capsys, tmp_path, flags, message):
        code = main(["simulate", "gamma", "2", "3", "--seed", "1",
                     "--output-dir", str(tmp_path)] + flags)
        assert code == EXIT_INPUT
        assert message in capsys.readouterr()[1]

    def test_sweep(self, capsys, tmp_path):
        out = str(tmp_path)
        code = main(["simulate", "uniform", "0", "1", "--n", "20,40",
                     "--B", "10", "--seed", "3", "--sigma",
                     "exact-moments,replication", "--output-dir", out])
        assert code == EXIT_OK
        assert sorted(os.listdir(out)) == ["n20", "n40", "sweep.csv"]
        text = capsys.readouterr()[0]
        assert "Uniform(0, 1) n=20 B=10 infeasible=0" in text
        assert "tables written to %s" % out in text

    def test_output_dir_from_environment(self, capsys, tmp_path,
                                         monkeypatch):
        target = str(tmp_path / "from_env")
        monkeypatch.setenv(OUTPUT_DIR_ENV, target)
        code = main(["simulate", "beta", "2", "3", "--n", "20", "--B", "5",
                     "--seed", "2"])
        assert code == EXIT_OK
        assert os.path.isfile(os.path.join(target, "report.json"))

    def test_byte_identical_reruns(self, capsys, tmp_path):
        for name, workers in (("first", "1"), ("second", "2")):
            assert main(["simulate", "fisher", "5", "12", "--n", "40",
                         "--B", "30", "--seed", "2021", "--workers",
                         workers, "--output-dir",
                         str(tmp_path / name)]) == EXIT_OK
        capsys.readouterr()
        first = tree_bytes(str(tmp_path / "first"))
        assert first == tree_bytes(str(tmp_path / "second"))
        assert "report.json" in first
