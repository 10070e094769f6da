"""Command-line contract: verbs, exit codes, determinism."""

import csv
import hashlib
import json

import pytest

from pilp.cli import main
from pilp.model import Form, PILP, load_pilp, save_pilp
from pilp.poly import Poly
from pilp.programs import EXAMPLES

T = Poly((0, 1))


@pytest.fixture()
def ex(tmp_path):
    """Write one bundled program and return its path factory."""
    def write(name):
        path = tmp_path / f"{name}.json"
        save_pilp(EXAMPLES[name], path)
        return str(path)
    return write


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    def test_human_line(self, ex, capsys):
        code, out, _ = run(capsys, ["eval", ex("simplex"), "--t", "5",
                                    "--ell", "2"])
        assert code == 0
        assert out.strip() == "t=5 |L|=21 f1=5 f2=4"

    def test_infeasible_prints_bottom(self, ex, capsys):
        code, out, _ = run(capsys, ["eval", ex("infeasible"), "--t", "3"])
        assert code == 0 and "f1=-inf" in out

    def test_structured_schema(self, ex, capsys):
        code, out, _ = run(capsys, ["eval", ex("floor"), "--t", "9",
                                    "--format", "structured"])
        doc = json.loads(out)
        assert code == 0
        assert doc["schema"] == 1 and doc["command"] == "eval"
        assert doc["rows"] == [{"t": 9, "count": 5, "values": [4]}]
        assert len(doc["input_sha256"]) == 64

    def test_table_mode(self, ex, capsys):
        code, out, _ = run(capsys, ["eval", ex("floor"), "--table", "3:6"])
        assert code == 0
        assert [l.split()[0] for l in out.strip().splitlines()] \
            == ["t=3", "t=4", "t=5", "t=6"]

    def test_parse_error_exit(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        code, _, err = run(capsys, ["eval", str(bad), "--t", "2"])
        assert code == 2 and "bad program file" in err

    def test_missing_file_exit(self, tmp_path, capsys):
        code, _, err = run(capsys, ["eval", str(tmp_path / "nope.json")])
        assert code == 2

    def test_unbounded_exit(self, tmp_path, capsys):
        free = PILP(Form.GENERAL, 1, 1, [(0,)], [T], [1], bounded=False)
        path = tmp_path / "free.json"
        save_pilp(free, path)
        code, _, err = run(capsys, ["eval", str(path), "--t", "4"])
        assert code == 3

    def test_seedless_flag_accepted(self, ex, capsys):
        code, _, _ = run(capsys, ["eval", ex("floor"), "--t", "4",
                                  "--seedless"])
        assert code == 0


class TestInfer:
    def test_floor_certificate(self, ex, capsys):
        code, out, _ = run(capsys, ["infer", ex("floor")])
        assert code == 0
        assert "period 2" in out and "(1/2)t" in out
        assert "MISMATCH" not in out

    def test_scripted_sampler_no_fit(self, capsys):
        code, out, _ = run(capsys, ["infer", "--sampler", "sqrt-floor",
                                    "--d-max", "4", "--t-cap", "300"])
        assert code == 4 and "NO_FIT" in out

    def test_gcd_sampler(self, capsys):
        code, out, _ = run(capsys, ["infer", "--sampler", "gcd6"])
        assert code == 0 and "period 6" in out

    def test_file_or_sampler_required(self, capsys):
        code, _, err = run(capsys, ["infer"])
        assert code == 2

    def test_constructive_mode(self, ex, capsys):
        code, out, _ = run(capsys, ["infer", ex("floor"),
                                    "--mode", "constructive"])
        assert code == 0 and "mode: constructive" in out


class TestVerify:
    def test_round_trip(self, ex, tmp_path, capsys):
        cert_path = tmp_path / "cert.json"
        floor = ex("floor")
        code, _, _ = run(capsys, ["infer", floor, "--out", str(cert_path)])
        assert code == 0 and cert_path.exists()
        code, out, _ = run(capsys, ["verify", floor,
                                    "--cert", str(cert_path)])
        assert code == 0 and "all match" in out

    def test_tampered_certificate_fails(self, ex, tmp_path, capsys):
        cert_path = tmp_path / "cert.json"
        floor = ex("floor")
        run(capsys, ["infer", floor, "--out", str(cert_path)])
        doc = json.loads(cert_path.read_text())
        doc["qp"]["branches"][0] = [5, "1/2"]    # wrong polynomial
        cert_path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, ["verify", floor,
                                    "--cert", str(cert_path),
                                    "--count", "6"])
        assert code == 1 and "MISMATCH" in out


class TestDecompose:
    def test_digits_with_harness(self, ex, tmp_path, capsys):
        out_dir = tmp_path / "parts"
        code, out, _ = run(capsys, [
            "decompose", ex("digits"), "--mode", "digits", "--r", "2",
            "--out-dir", str(out_dir), "--verify", "10,11"])
        assert code == 0
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["detail"]["verify"] == {"10": "pass", "11": "pass"}
        # part files re-parse standalone
        for name in manifest["outputs"]:
            load_pilp(out_dir / name).check()

    def test_layer_counts_in_manifest(self, ex, tmp_path, capsys):
        out_dir = tmp_path / "layers"
        code, _, _ = run(capsys, [
            "decompose", ex("simplex"), "--mode", "layers", "--ell0", "2",
            "--out-dir", str(out_dir)])
        assert code == 0
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["detail"]["c"] == [3, 2, 2]

    def test_wrong_form_exit(self, ex, tmp_path, capsys):
        code, _, err = run(capsys, [
            "decompose", ex("digits"), "--mode", "slack",
            "--out-dir", str(tmp_path / "x")])
        assert code == 5 and "does not apply" in err

    def test_project_detects_residue(self, ex, tmp_path, capsys):
        out_dir = tmp_path / "proj"
        code, _, _ = run(capsys, [
            "decompose", ex("even-sum"), "--mode", "project", "--row", "2,2",
            "--rhs", "0,1", "--out-dir", str(out_dir),
            "--verify", "10,12"])
        assert code == 0
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["detail"]["residue"] == [0, 2]
        assert set(manifest["detail"]["verify"].values()) == {"pass"}


class TestHull:
    def test_triangle_with_check(self, ex, capsys):
        code, out, _ = run(capsys, ["hull", ex("triangle"),
                                    "--verify", "101,102"])
        assert code == 0
        assert "period 2" in out and "fail" not in out

    def test_structured_family(self, ex, capsys):
        code, out, _ = run(capsys, ["hull", ex("square"),
                                    "--format", "structured"])
        doc = json.loads(out)
        assert code == 0 and doc["family"]["period"] == 1

    def test_budget_no_fit(self, ex, capsys):
        code, out, _ = run(capsys, ["hull", ex("triangle"),
                                    "--t-cap", "20"])
        assert code == 4


class TestReport:
    def test_outputs_and_determinism(self, ex, tmp_path, capsys):
        floor = ex("floor")
        dirs = [tmp_path / "r1", tmp_path / "r2"]
        for d in dirs:
            code, _, _ = run(capsys, [
                "report", floor, "--out-dir", str(d), "--ell", "2",
                "--t-max", "12"])
            assert code == 0
        for name in ("values.csv", "values.png", "manifest.json"):
            a = (dirs[0] / name).read_bytes()
            b = (dirs[1] / name).read_bytes()
            assert hashlib.sha256(a).hexdigest() \
                == hashlib.sha256(b).hexdigest(), name
        with (dirs[0] / "values.csv").open() as fh:
            rows = list(csv.DictReader(fh))
        assert rows[0]["t"] == "1" and rows[-1]["t"] == "12"
        assert rows[3]["f1"] == "2"          # floor(4/2)
        assert rows[0]["f2"] == "-inf"       # one point at t=1


class TestExamples:
    def test_writes_all_bundled(self, tmp_path, capsys):
        out_dir = tmp_path / "ex"
        code, out, _ = run(capsys, ["examples", "--out-dir", str(out_dir)])
        assert code == 0
        files = sorted(p.name for p in out_dir.glob("*.json"))
        assert files == sorted(f"{n}.json" for n in EXAMPLES)
        for p in out_dir.glob("*.json"):
            load_pilp(p).check()

    def test_unknown_name_rejected(self, tmp_path, capsys):
        code, _, err = run(capsys, ["examples", "--out-dir",
                                    str(tmp_path), "zzz"])
        assert code == 2
