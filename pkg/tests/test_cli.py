import csv
import json
import math

import numpy as np
import pytest

from mobiusinfo import claims, lattice
from mobiusinfo.cli import main

LN2 = math.log(2)


@pytest.fixture
def xor_csv(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.integers(0, 2, (2000, 2))
    p = tmp_path / "xor.csv"
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["X1", "X2", "X3"])
        for a, b in x:
            w.writerow([a ^ b, a, b])
    return p


@pytest.fixture
def indep_csv(tmp_path):
    p = tmp_path / "ind.csv"
    rows = ["a,b"] + [f"{i},{j}" for i in range(3) for j in range(2)] * 5
    p.write_text("\n".join(rows) + "\n")
    return p


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(list(args) + ["-o", str(out)])
    return code, out


class TestMeasures:
    def test_interaction_of_xor(self, xor_csv, tmp_path):
        code, out = run(["measures", str(xor_csv), "--measure", "interaction"], tmp_path)
        assert code == 0
        d = json.loads(out.read_text())
        assert d["values"][7] == pytest.approx(-LN2, abs=0.01)

    def test_multi_info_of_independent_columns(self, indep_csv, tmp_path):
        code, out = run(["measures", str(indep_csv), "--measure", "multi-info"], tmp_path)
        assert code == 0
        assert np.allclose(json.loads(out.read_text())["values"], 0.0, atol=1e-12)

    def test_entropy_csv(self, xor_csv, tmp_path):
        code, out = run(["measures", str(xor_csv), "--format", "csv"], tmp_path, "h.csv")
        assert code == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["subset", "mask", "value"]
        assert rows[1] == ["{}", "0", "0.0"]
        vals = [float(r[2]) for r in rows[1:]]
        assert all(vals[m | (1 << i)] >= vals[m] for m in range(8) for i in range(3))

    def test_delta_and_symmetric(self, xor_csv, tmp_path):
        code, out = run(["measures", str(xor_csv), "--measure", "delta", "--target", "X1"], tmp_path)
        assert code == 0 and json.loads(out.read_text())["values"]["X1"] == pytest.approx(-LN2, abs=0.01)
        code, out = run(["measures", str(xor_csv), "--measure", "symmetric-delta"], tmp_path)
        assert code == 0 and json.loads(out.read_text())["value"] == pytest.approx(-LN2 ** 3, abs=0.01)

    def test_cll(self, xor_csv, tmp_path):
        code, out = run(["measures", str(xor_csv), "--measure", "cll", "--target", "X1"], tmp_path)
        d = json.loads(out.read_text())
        assert code == 0 and d["n"] == 2 and d["values"][3] == pytest.approx(0.0, abs=1e-12)

    def test_vars_and_base(self, xor_csv, tmp_path):
        code, out = run(["measures", str(xor_csv), "--vars", "X2,X3", "--log-base", "2"], tmp_path)
        assert code == 0 and json.loads(out.read_text())["values"][3] == pytest.approx(2.0, abs=0.01)

    @pytest.mark.parametrize("extra", [["--vars", "X9"], ["--measure", "cll"], ["--measure", "bogus"],
                                       ["--target", "Q", "--measure", "delta"]])
    def test_usage_errors(self, xor_csv, tmp_path, extra):
        assert run(["measures", str(xor_csv)] + extra, tmp_path)[0] == 1

    def test_missing_file(self, tmp_path):
        assert run(["measures", str(tmp_path / "none.csv")], tmp_path)[0] == 2

    def test_unwritable_output(self, xor_csv, tmp_path):
        assert main(["measures", str(xor_csv), "-o", str(tmp_path / "no" / "dir" / "x.json")]) == 2

    def test_n_cap(self, xor_csv, tmp_path):
        assert run(["measures", str(xor_csv), "--n-cap", "2"], tmp_path)[0] == 1

    def test_malformed_table(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,b\n1\n")
        assert run(["measures", str(p)], tmp_path)[0] == 1


class TestTransform:
    def lattice_file(self, tmp_path, n=3):
        f = lattice.LatticeFunction(n, np.random.default_rng(1).standard_normal(1 << n))
        p = tmp_path / "f.json"
        p.write_text(f.dumps())
        return p, f

    def test_downset_twice(self, tmp_path):
        p, f = self.lattice_file(tmp_path)
        assert main(["transform", str(p), "--op", "m", "-o", str(tmp_path / "g.json")]) == 0
        assert main(["transform", str(tmp_path / "g.json"), "--op", "m", "-o", str(tmp_path / "h.json")]) == 0
        back = lattice.LatticeFunction.loads((tmp_path / "h.json").read_text())
        np.testing.assert_allclose(back.values, f.values, atol=1e-12)

    def test_f0_equals_m_at_odd_n(self, tmp_path):
        p, _ = self.lattice_file(tmp_path)
        main(["transform", str(p), "--op", "F:0", "-o", str(tmp_path / "a.json")])
        main(["transform", str(p), "--op", "m", "-o", str(tmp_path / "b.json")])
        assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()

    def test_complement_twice_negates_at_three(self, tmp_path):
        p, f = self.lattice_file(tmp_path)
        main(["transform", str(p), "--op", "X", "-o", str(tmp_path / "a.json")])
        main(["transform", str(tmp_path / "a.json"), "--op", "X", "-o", str(tmp_path / "b.json")])
        out = lattice.LatticeFunction.loads((tmp_path / "b.json").read_text())
        np.testing.assert_array_equal(out.values, -f.values)

    @pytest.mark.parametrize("op", ["F:8", "Z"])
    def test_bad_op(self, tmp_path, op):
        p, _ = self.lattice_file(tmp_path)
        assert run(["transform", str(p), "--op", op], tmp_path)[0] == 1

    def test_bad_file(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"n": 2, "values": [1, 2]}')
        assert run(["transform", str(p), "--op", "m"], tmp_path)[0] == 1


class TestVerify:
    def test_strict_passes(self, tmp_path):
        code, out = run(["verify", "--n", "2..3", "--samples", "10", "--strict"], tmp_path)
        assert code == 0
        rep = json.loads(out.read_text())
        assert {"generated_for", "claims", "table1", "convention_ranking", "anomalies"} <= set(rep)

    def test_strict_fails_on_broken_transform(self, tmp_path, monkeypatch):
        real = lattice.coordinate_transform

        def broken(values, n, reference, convention):
            out = real(values, n, reference, convention)
            return out * 1.5 if reference == 0 else out

        monkeypatch.setattr(lattice, "coordinate_transform", broken)
        claims.clear_caches()
        try:
            code, _ = run(["verify", "--n", "2..3", "--samples", "5", "--strict"], tmp_path)
        finally:
            monkeypatch.undo()
            claims.clear_caches()
        assert code == 3

    def test_non_strict_exit_zero_even_when_broken(self, tmp_path, monkeypatch):
        monkeypatch.setattr(lattice, "coordinate_transform", lambda v, n, r, c: np.array(v, copy=True))
        claims.clear_caches()
        try:
            code, _ = run(["verify", "--n", "2..2", "--samples", "3"], tmp_path)
        finally:
            monkeypatch.undo()
            claims.clear_caches()
        assert code == 0

    @pytest.mark.parametrize("rng_arg", ["0..2", "3..9", "x"])
    def test_bad_range(self, tmp_path, rng_arg):
        assert run(["verify", "--n", rng_arg], tmp_path)[0] == 1


class TestPredict:
    def test_xor(self, xor_csv, tmp_path):
        code, out = run(["predict", str(xor_csv), "--target", "X1"], tmp_path)
        d = json.loads(out.read_text())
        assert code == 0 and d["selected"]["subset"] == ["X2", "X3"]

    def test_missing_target(self, xor_csv, tmp_path, capsys):
        code, _ = run(["predict", str(xor_csv), "--target", "nope"], tmp_path)
        assert code == 1
        assert "nope" in capsys.readouterr().err

    def test_deterministic(self, xor_csv, tmp_path):
        args = ["predict", str(xor_csv), "--target", "X1", "--holdout", "0.2", "--seed", "4"]
        _, a = run(args, tmp_path, "a.json")
        _, b = run(args, tmp_path, "b.json")
        assert a.read_text() == b.read_text()


class TestDecompose:
    def test_counts(self, tmp_path):
        code, out = run(["decompose", "--n", "3"], tmp_path)
        d = json.loads(out.read_text())
        assert code == 0 and d["formula_count"] == 48 and d["recurrence_count"] == 48

    def test_four_reports_axis_count(self, tmp_path):
        _, out = run(["decompose", "--n", "4"], tmp_path)
        d = json.loads(out.read_text())
        assert d["formula_count"] == 6912 and d["axis_recurrence_count"] == 9216 and d["notes"]

    def test_verify(self, tmp_path):
        _, out = run(["decompose", "--n", "3", "--verify", "--convention", "paper-18"], tmp_path)
        v = json.loads(out.read_text())["verify"]
        assert v["split_identity_pass"] and v["all_expressions_pass"]

    def test_range(self, tmp_path):
        assert run(["decompose", "--n", "6"], tmp_path)[0] == 1


def test_stdout_default(capsys, xor_csv):
    assert main(["measures", str(xor_csv)]) == 0
    assert json.loads(capsys.readouterr().out)["role"] == "entropy"


def test_no_subcommand():
    assert main([]) == 1
