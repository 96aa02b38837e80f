import json
import subprocess
import sys

import numpy as np
import pytest

from quatspec import cli
from quatspec.qspace import QOperator, adjoint, random_normal


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


@pytest.fixture
def diag_i3(tmp_path):
    return write(tmp_path, "d.json", {"n": 2, "entries": [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [3, 0, 0, 0]]})


class TestCommands:
    def test_spectrum_diag(self, capsys, diag_i3):
        code, out, _ = run(capsys, "spectrum", "--input", diag_i3)
        d = json.loads(out)
        assert code == 0 and d["schema"] == 1
        assert d["spheres"] == [[0, 1, 1], [3, 0, 1]]
        assert max(d["oracle"]) <= 1e-12

    def test_spectrum_identity(self, capsys, tmp_path):
        path = write(tmp_path, "i.json", QOperator.identity(3).to_json())
        code, out, _ = run(capsys, "spectrum", "--input", path)
        assert code == 0 and json.loads(out)["spheres"] == [[1, 0, 3]]

    def test_measure_identity(self, capsys, tmp_path):
        path = write(tmp_path, "i.json", QOperator.identity(2).to_json())
        code, out, _ = run(capsys, "measure", "--input", path)
        atoms = json.loads(out)["atoms"]
        assert code == 0 and len(atoms) == 1
        assert np.array_equal(QOperator.from_json(atoms[0]["projection"]).data, QOperator.identity(2).data)

    def test_decompose_self_adjoint(self, capsys, tmp_path, rng):
        A = QOperator(rng.standard_normal((3, 3, 4)))
        path = write(tmp_path, "h.json", (A + adjoint(A)).to_json())
        code, out, _ = run(capsys, "decompose", "--input", path)
        tjb = json.loads(out)["tjb"]
        assert code == 0
        assert not np.any(QOperator.from_json(tjb["B"]).data)
        assert not np.any(QOperator.from_json(tjb["J"]).data)

    def test_reconstruct_random(self, capsys):
        code, out, _ = run(capsys, "reconstruct", "--n", "8", "--seed", "0")
        d = json.loads(out)
        assert code == 0 and d["passed"]
        assert d["residuals"]["reconstruction"] <= 1e-8
        assert set(d["residuals"]) == {"normality", "measure_axioms", "reconstruction", "slice_independence"}
        assert d["residuals"]["slice_independence"] <= 1e-8

    def test_frame_option(self, capsys, diag_i3):
        code, out, _ = run(capsys, "measure", "--input", diag_i3, "--frame", "0,0,2")
        d = json.loads(out)
        assert code == 0 and d["frame"] == [0, 0, 1]
        assert np.allclose(d["spheres"], [[0, 1, 1], [3, 0, 1]], atol=1e-14)

    def test_text_format(self, capsys, diag_i3):
        code, out, _ = run(capsys, "spectrum", "--input", diag_i3, "--format", "text")
        assert code == 0 and out.startswith("spectrum") and "x1" in out


class TestVerify:
    def test_zero_trials(self, capsys):
        code, out, _ = run(capsys, "verify", "--trials", "0")
        assert code == 0 and json.loads(out)["passed"]

    def test_injected_fault(self, capsys):
        code, out, _ = run(capsys, "verify", "--trials", "2", "--n", "3", "--tol", "1e-16", "--suites", "fuglede,theorem")
        d = json.loads(out)
        assert code == 1 and not d["passed"]
        assert all(s["failures"] and "seed" in s["failures"][0] for s in d["suites"])

    def test_small_run(self, capsys):
        code, out, _ = run(capsys, "verify", "--trials", "2", "--n", "4")
        d = json.loads(out)
        assert code == 0 and [s["suite"] for s in d["suites"]] == list(cli.verify.SUITES)


class TestErrors:
    def test_non_normal(self, capsys, tmp_path):
        path = write(tmp_path, "nn.json", {"n": 2, "entries": [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]})
        code, out, err = run(capsys, "spectrum", "--input", path)
        assert code == 3 and out == "" and "||T*T - TT*||_F" in err

    @pytest.mark.parametrize(
        "content",
        ["not json", '{"n": 2, "entries": [[0,0,0,0]]}', '{"entries": []}', '{"n": 1, "entries": [["a",0,0,0]]}'],
    )
    def test_parse_errors(self, capsys, tmp_path, content):
        code, _, err = run(capsys, "spectrum", "--input", write(tmp_path, "bad.json", content))
        assert code == 2 and "error" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "measure", "--input", str(tmp_path / "nope.json"))[0] == 2

    @pytest.mark.parametrize(
        "argv",
        [["spectrum", "--frame", "0,0,0"], ["spectrum", "--frame", "1,2"], ["verify", "--suites", "bogus"], ["spectrum", "--tol-meas", "-1"]],
    )
    def test_bad_options(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2

    def test_argparse_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["nonsense"])
        assert info.value.code == 2


class TestDeterminism:
    def _invoke(self, *argv):
        return subprocess.run([sys.executable, "-m", "quatspec.cli", *argv], capture_output=True, check=False)

    def test_byte_identical(self):
        a = self._invoke("reconstruct", "--n", "5", "--seed", "7", "--profile", "clustered")
        b = self._invoke("reconstruct", "--n", "5", "--seed", "7", "--profile", "clustered")
        assert a.returncode == 0 and a.stdout == b.stdout

    def test_round_trip(self, capsys, tmp_path):
        T = random_normal(4, 1)
        path = write(tmp_path, "t.json", T.to_json())
        code, out, _ = run(capsys, "reconstruct", "--input", path)
        d = json.loads(out)
        assert cli.dumps(d) + "\n" == out
        for key in ("A", "B", "J"):
            assert QOperator.from_json(d["tjb"][key]).n == 4

    def test_dumps_precision(self):
        assert cli.dumps(0.1) == "0.10000000000000001"
        assert cli.dumps({"x": [1, float("nan"), True, None]}) == '{"x": [1, null, true, null]}'
