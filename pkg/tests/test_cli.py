import json
import subprocess
import sys

import pytest

from fracmin.cli import main
from fracmin.stepfn import INF, StepFunction
from fracmin.weights import WeightPair


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def ones_f(tmp_path):
    return write(tmp_path / "f.json", StepFunction.constant(1.0).to_dict())


@pytest.fixture
def ones_pair(tmp_path):
    c = StepFunction.constant(1.0).to_dict()
    return write(tmp_path / "pair.json", {"U": c, "V": c})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEval:
    def test_constant(self, capsys, ones_f):
        assert run(capsys, "eval", "--f", ones_f, "--mu", "0", "--x", "0") == (0, "1\n", "")

    def test_oracle(self, capsys, tmp_path):
        f = write(tmp_path / "g.json", StepFunction.on_interval([0, 2], [1]).to_dict())
        code, out, _ = run(capsys, "eval", "--f", f, "--mu", "1", "--x", "0", "--oracle")
        assert code == 0 and out.split() == ["0.5", "0.5"]

    def test_minus_and_points(self, capsys, tmp_path):
        f = write(tmp_path / "g.json", StepFunction.on_interval([-2, -1, 0], [1, 2]).to_dict())
        code, out, _ = run(capsys, "eval", "--f", f, "--x", "0,5", "--minus")
        assert code == 0 and out.split() == ["inf", "1.5", "inf", "inf"]

    def test_malformed_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, "eval", "--f", str(bad), "--x", "0")
        assert code == 2 and "malformed" in err

    def test_missing_field(self, capsys, tmp_path):
        f = write(tmp_path / "m.json", {"breakpoints": [0, 1], "values": [1], "left_tail": 1})
        code, _, err = run(capsys, "eval", "--f", f, "--x", "0")
        assert code == 2 and "right_tail" in err

    def test_negative_value(self, capsys, tmp_path):
        f = write(tmp_path / "n.json", {"breakpoints": [0, 1], "values": [-1],
                                        "left_tail": 1, "right_tail": 1})
        code, _, err = run(capsys, "eval", "--f", f, "--x", "0")
        assert code == 3 and "values[0]" in err

    def test_negative_mu(self, capsys, ones_f):
        assert run(capsys, "eval", "--f", ones_f, "--x", "0", "--mu", "-1")[0] == 3

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "eval", "--f", str(tmp_path / "nope.json"), "--x", "0")[0] == 2


class TestConstant:
    def test_wpq(self, capsys, ones_pair):
        code, out, _ = run(capsys, "constant", "--pair", ones_pair, "--window", "0,1")
        rep = json.loads(out)
        assert code == 0 and rep["ratio"] == pytest.approx(1.0) and rep["lower_bound"]
        assert rep["params"] == {"mu": 0.0, "p": 1.0, "q": 1.0}

    def test_sawyer(self, capsys, ones_pair):
        code, out, _ = run(capsys, "constant", "--pair", ones_pair, "--window", "0,1",
                           "--kind", "sawyer", "--mu", "1", "--refinement", "1", "--tol", "1e-9")
        assert code == 0 and json.loads(out)["ratio"] == pytest.approx(0.5, rel=1e-8)

    def test_eta(self, capsys, ones_pair):
        code, out, _ = run(capsys, "constant", "--pair", ones_pair, "--window", "0,1",
                           "--kind", "wpq-eta", "--eta", "0.25")
        rep = json.loads(out)
        assert code == 0 and rep["ratio"] == pytest.approx(3 / 16) and rep["extra"]["eta"] == 0.25

    def test_eta_required(self, capsys, ones_pair):
        assert run(capsys, "constant", "--pair", ones_pair, "--kind", "wpq-eta")[0] == 3

    def test_bad_exponents(self, capsys, ones_pair):
        assert run(capsys, "constant", "--pair", ones_pair, "--p", "2", "--q", "1")[0] == 3

    def test_zero_weight(self, capsys, tmp_path):
        zero = {"breakpoints": [0, 1], "values": [0], "left_tail": 1, "right_tail": 1}
        pair = write(tmp_path / "z.json", {"U": zero, "V": StepFunction.constant(1.0).to_dict()})
        assert run(capsys, "constant", "--pair", pair)[0] == 3

    def test_quadrature_failure(self, capsys, tmp_path):
        pair = str(tmp_path / "rand.json")
        assert main(["generate", "--seed", "2", "--cells", "3", "--out", pair]) == 0
        code, _, err = run(capsys, "constant", "--pair", pair, "--window", "0,1", "--refinement", "1",
                           "--kind", "sawyer", "--mu", "0.5", "--tol", "1e-300")
        assert code == 4 and "converge" in err


class TestDecompose:
    def test_unit(self, capsys):
        code, out, _ = run(capsys, "decompose", "--interval", "0,1", "--depth", "3")
        assert code == 0 and json.loads(out)["points"] == [0, 0.5, 0.75, 0.875, 0.9375]

    def test_depth_one(self, capsys):
        d = json.loads(run(capsys, "decompose", "--interval", "0,1", "--depth", "1")[1])
        assert len(d["minus"]) == len(d["plus"]) == len(d["full"]) == 1

    def test_translate(self, capsys):
        a = json.loads(run(capsys, "decompose", "--interval", "0,1")[1])["points"]
        b = json.loads(run(capsys, "decompose", "--interval", "2,3")[1])["points"]
        assert [y - x for x, y in zip(a, b)] == [2.0] * len(a)

    def test_bad_depth(self, capsys):
        assert run(capsys, "decompose", "--interval", "0,1", "--depth", "0")[0] == 3

    def test_bad_interval(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["decompose", "--interval", "1,0"])
        assert info.value.code == 2


class TestVerify:
    def test_fmt5(self, capsys):
        code, out, _ = run(capsys, "verify", "--theorem", "fmt5", "--trials", "5", "--seed", "7")
        rep = json.loads(out)
        assert code == 0 and rep["summary"]["checks"] == 7
        assert rep["config"] == {"theorem": "fmt5", "trials": 5, "seed": 7}

    def test_unknown(self, capsys):
        assert run(capsys, "verify", "--theorem", "fmt9")[0] == 2

    def test_fixtures_only_deterministic(self, capsys):
        a = run(capsys, "verify", "--theorem", "all", "--trials", "0")
        b = run(capsys, "verify", "--theorem", "all", "--trials", "0")
        assert a == b and a[0] == 0

    def test_out_writes_json_and_csv(self, capsys, tmp_path):
        code = main(["verify", "--theorem", "fml1", "--trials", "2", "--out", str(tmp_path / "r")])
        assert code == 0
        assert json.loads((tmp_path / "r.json").read_text())["summary"]["checks"] == 5
        assert (tmp_path / "r.csv").read_text().startswith("name,")

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "verify", "--theorem", "fmt4", "--trials", "1", "--format", "csv")
        assert code == 0 and out.startswith("name,instance")

    def test_flagged_envelope_exits_5(self, capsys):
        # 40 of 50 seeded fmt2 instances flag the per-piece estimate
        code, out, err = run(capsys, "verify", "--theorem", "fmt2", "--trials", "3", "--seed", "1")
        rep = json.loads(out)
        if rep["summary"]["flagged"]:
            assert code == 5 and "flagged" in err
        else:
            assert code == 0


class TestGenerate:
    def test_byte_identical(self, tmp_path, capsys):
        for name in ("a.json", "b.json"):
            assert main(["generate", "--seed", "5", "--out", str(tmp_path / name)]) == 0
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
        WeightPair.from_dict(json.loads((tmp_path / "a.json").read_text()))

    def test_function_tails(self, capsys):
        code, out, _ = run(capsys, "generate", "--kind", "function", "--seed", "3", "--cells", "4")
        f = StepFunction.from_dict(json.loads(out))
        assert code == 0 and f.left_tail == f.right_tail == INF and f.n_cells == 4

    def test_unwritable(self, capsys, tmp_path):
        assert run(capsys, "generate", "--out", str(tmp_path / "no" / "such" / "x.json"))[0] == 2


def test_module_entry_point(ones_f):
    proc = subprocess.run([sys.executable, "-m", "fracmin", "eval", "--f", ones_f, "--x", "0.5"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "1\n"
