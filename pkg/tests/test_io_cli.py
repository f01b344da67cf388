import json

import numpy as np
import pytest

from corrdist import bell, bounds, io, prob_core, qubit_core
from corrdist.cli import main
from corrdist.errors import ValidationError
from corrdist.verify import sweeps

from conftest import random_state


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestFormats:
    def test_state_json_round_trip_exact(self, tmp_path, rng):
        rho = random_state(rng)
        path = tmp_path / "s.json"
        io.write_state_json(path, rho)
        np.testing.assert_array_equal(io.read_state_json(path), rho)
        obj = json.loads(path.read_text())
        assert set(obj) == {"re", "im"} and np.shape(obj["re"]) == (4, 4)

    def test_bad_state_json(self, tmp_path):
        with pytest.raises(ValidationError):
            io.state_from_json('{"re": [[1]], "im": [[0]]}')
        with pytest.raises(ValidationError):
            io.state_from_json("not json")
        with pytest.raises(ValidationError):
            io.state_from_json(json.dumps({"re": np.eye(4).tolist(), "im": np.zeros((4, 4)).tolist()}))

    def test_table_csv(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("# joint table\n0.4,0.1\n0.2,0.3\n")
        np.testing.assert_allclose(io.read_table_csv(path), [[0.4, 0.1], [0.2, 0.3]])
        io.write_table_csv(path, [[0.25, 0.25], [0.5, 0.0]])
        np.testing.assert_array_equal(io.read_table_csv(path), [[0.25, 0.25], [0.5, 0.0]])
        path.write_text("0.4,0.1\n0.5\n")
        with pytest.raises(ValidationError):
            io.read_table_csv(path)
        path.write_text("a,b\n")
        with pytest.raises(ValidationError):
            io.read_table_csv(path)

    def test_model_json_round_trip(self, tmp_path):
        model = bell.saturating_model(0.4)
        path = tmp_path / "m.json"
        io.write_model_json(path, model)
        again = io.read_model_json(path)
        for k in bell.SETTINGS:
            np.testing.assert_array_equal(again.conditionals[k], model.conditionals[k])
        path.write_text('{"lambda_weights": [1.0]}')
        with pytest.raises(ValidationError):
            io.read_model_json(path)

    def test_data_csv(self, tmp_path):
        path = tmp_path / "d.csv"
        io.write_data_csv(path, ["a", "b"], [[1 / 3, None], [2.0, 1e-20]], ["note"])
        assert path.read_bytes() == b"# note\na,b\n0.333333333,\n2,1e-20\n"


@pytest.fixture
def werner_file(tmp_path):
    path = tmp_path / "werner_p1.json"
    assert main(["make-state", "--family", "werner", "--param", "p=1", "--out", str(path)]) == 0
    return path


class TestCli:
    def test_c0(self, capsys):
        code, out, _ = run(capsys, "c0")
        assert code == 0
        assert abs(float(out) - 0.72654) < 5e-5
        assert out == f"{bounds.c0():.9f}\n"

    def test_cdist_werner(self, capsys, werner_file):
        code, out, _ = run(capsys, "cdist", "--state", str(werner_file))
        assert (code, out) == (0, "1.500000000\n")

    def test_bell_resources(self, capsys):
        code, out, _ = run(capsys, "bell-resources", "--v", "2")
        assert code == 0
        assert out == "c_max=1.000000000\ni_min=1.000000000\n"

    @pytest.mark.parametrize(
        "argv, value",
        [
            (["classical-bound", "--c", "0.5"], lambda u: bounds.classical_tight_bound(0.5, u)),
            (["quantum-bound", "--c", "1.1"], lambda u: bounds.quantum_tight_bound(1.1, u)),
            (["pinsker", "--c", "0.7"], lambda u: bounds.pinsker_bound(0.7, u)),
            (["mi", "--binary", "0.1", "-0.2", "0.3"],
             lambda u: prob_core.classical_mutual_information(
                 prob_core.binary_joint_from_params(prob_core.BinaryParams(0.1, -0.2, 0.3)), u)),
        ],
    )
    def test_thin_adapter_and_units(self, capsys, argv, value):
        for flags, unit in (([], "bits"), (["--nats"], "nats")):
            code, out, _ = run(capsys, *flags, *argv)
            assert code == 0 and out == f"{value(unit):.9f}\n"
        code, out, _ = run(capsys, *argv, "--nats")
        assert out == f"{value('nats'):.9f}\n"

    def test_mi_and_cdist_inputs(self, capsys, tmp_path, werner_file):
        table = tmp_path / "t.csv"
        table.write_text("0.4,0.1\n0.2,0.3\n")
        _, out, _ = run(capsys, "mi", "--table", str(table))
        assert out == f"{prob_core.classical_mutual_information(io.read_table_csv(table)):.9f}\n"
        _, out, _ = run(capsys, "cdist", "--table", str(table))
        assert out == f"{prob_core.classical_correlation_distance(io.read_table_csv(table)):.9f}\n"
        _, out, _ = run(capsys, "mi", "--state", str(werner_file))
        assert out == "2.000000000\n"

    def test_entangle(self, capsys, tmp_path):
        path = tmp_path / "w.json"
        main(["make-state", "--family", "werner", "--param", "p=0.5", "--out", str(path)])
        code, out, _ = run(capsys, "entangle", "--state", str(path))
        fields = dict(line.split("=") for line in out.split())
        assert code == 0
        assert fields["covariance_criterion"] == "true"
        assert fields["purity_criterion"] == "false"
        assert fields["ppt_entangled"] == "true"
        assert fields["correlation_distance"] == "0.750000000"

    def test_make_state_families(self, tmp_path):
        table = tmp_path / "t.csv"
        table.write_text("0.4,0.1\n0.2,0.3\n")
        cases = [
            (["--family", "bell_diagonal", "--param", "r1=0.5", "--param", "r2=-0.2", "--param", "r3=0.1"],
             qubit_core.make_state("bell_diagonal", r1=0.5, r2=-0.2, r3=0.1)),
            (["--family", "saturating", "--param", "c=1.2"], qubit_core.make_state("saturating", c=1.2)),
            (["--family", "product", "--param", "u=0,0,1", "--param", "v=0.5,0,0"],
             qubit_core.make_state("product", u=np.array([0, 0, 1.0]), v=np.array([0.5, 0, 0]))),
            (["--family", "classically_correlated", "--table", str(table), "--a-axis", "1,0,0"],
             qubit_core.make_state(
                 "classically_correlated",
                 table=[[0.4, 0.1], [0.2, 0.3]],
                 bases=(qubit_core.spin_basis(np.array([1.0, 0, 0])), qubit_core.spin_basis(np.array([0, 0, 1.0]))))),
        ]
        for args, expected in cases:
            out = tmp_path / "s.json"
            assert main(["make-state", *args, "--out", str(out)]) == 0
            np.testing.assert_array_equal(io.read_state_json(out), expected)

    def test_twirl(self, capsys, tmp_path):
        src = tmp_path / "p.json"
        main(["make-state", "--family", "product", "--param", "u=0,0,1", "--param", "v=0,0,1", "--out", str(src)])
        code, out, _ = run(capsys, "twirl", "--state", str(src))
        assert code == 0
        np.testing.assert_array_equal(io.state_from_json(out), qubit_core.twirl(io.read_state_json(src)))
        dst = tmp_path / "t.json"
        assert main(["twirl", "--state", str(src), "--out", str(dst)]) == 0
        assert dst.read_text() == out

    def test_model_check(self, capsys, tmp_path):
        path = tmp_path / "m.json"
        io.write_model_json(path, bell.saturating_model(0.5))
        code, out, _ = run(capsys, "model-check", "--model", str(path))
        fields = dict(line.split("=") for line in out.split())
        assert code == 0
        assert fields["chsh"] == f"{4 / 1.5:.9f}" and fields["within_bound"] == "true"

    def test_verify_and_exit_codes(self, capsys, monkeypatch):
        code, out, _ = run(capsys, "verify", "--kind", "classical_tight", "--samples", "500", "--seed", "42")
        assert code == 0 and "violations=0" in out
        code, out, _ = run(capsys, "verify", "--kind", "conjecture_general_states", "--samples", "200", "--seed", "1")
        assert code == 0 and "asserted=false" in out

        def always_fails(seed, idx):
            return -np.ones(len(idx)), {}

        monkeypatch.setitem(sweeps.KINDS, "classical_tight", sweeps._Kind(always_fails, lambda s, i: {}))
        code, out, _ = run(capsys, "verify", "--kind", "classical_tight", "--samples", "10", "--seed", "1")
        assert code == 3 and "violations=10" in out

        monkeypatch.setitem(sweeps.KINDS, "conjecture_shift", sweeps._Kind(always_fails, lambda s, i: {}, False))
        code, _, _ = run(capsys, "verify", "--kind", "conjecture_shift", "--samples", "10", "--seed", "1")
        assert code == 0

    def test_figure(self, tmp_path):
        out = tmp_path / "f.csv"
        assert main(["figure", "--which", "fig1", "--step", "0.5", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "C,pinsker,classical_tight"
        assert main(["--nats", "figure", "--which", "fig1", "--step", "0.5", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[-1] == "1,0.5,0.693147181"

    def test_errors(self, capsys, tmp_path):
        assert run(capsys, "classical-bound", "--c", "1.5")[0] == 1
        assert run(capsys, "cdist", "--state", str(tmp_path / "missing.json"))[0] == 1
        assert run(capsys, "mi", "--binary", "1", "1", "1")[0] == 1
        assert run(capsys, "make-state", "--family", "bell_diagonal", "--param", "r1=1",
                   "--param", "r2=1", "--param", "r3=1", "--out", str(tmp_path / "x"))[0] == 1
        assert run(capsys, "make-state", "--family", "werner", "--param", "q=1", "--out", str(tmp_path / "x"))[0] == 1
        assert run(capsys, "figure", "--which", "fig1", "--step", "0.1", "--out", str(tmp_path / "no" / "f"))[0] == 1
        code, _, err = run(capsys, "bogus")
        assert code == 2 and "invalid choice" in err
        assert run(capsys, "cdist")[0] == 2
        assert run(capsys, "pinsker", "--c", "abc")[0] == 2
        assert run(capsys, "verify", "--kind", "classical_tight", "--samples", "0", "--seed", "1")[0] == 2
        assert run(capsys, "--help")[0] == 0
