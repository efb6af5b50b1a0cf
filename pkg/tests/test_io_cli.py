import json
import os
import subprocess
import sys

import numpy as np
import pytest

from eigres import io
from eigres.cli import main
from eigres.exceptions import IoError, NotHermitian, ParseError


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


class TestMatrixJson:
    def test_valid(self):
        X = io.parse_matrix_json('{"n":2,"re":[[0,1],[1,0]]}')
        np.testing.assert_array_equal(X, [[0, 1], [1, 0]])

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            io.parse_matrix_json('{"n":2,"re":[[0,1],[0,0]]}')

    def test_pauli_y(self):
        X = io.parse_matrix_json('{"n":2,"re":[[0,0],[0,0]],"im":[[0,1],[-1,0]]}')
        np.testing.assert_array_equal(X, [[0, 1j], [-1j, 0]])

    @pytest.mark.parametrize("text", ["{", "[1,2]", '{"n":2}', '{"n":2,"re":[[0,1]]}',
                                      '{"n":"2","re":[[0,1],[1,0]]}', '{"n":1,"re":[["a"]]}'])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            io.parse_matrix_json(text)

    def test_round_trip(self):
        X = np.array([[1, 2 - 1j], [2 + 1j, -3]])
        np.testing.assert_array_equal(io.matrix_from_obj(io.matrix_to_obj(X)), X)


class TestTrajectoryCsv:
    def test_empty(self, tmp_path):
        p = tmp_path / "e.csv"
        io.write_trajectory_csv(p, [], np.zeros((0, 2)), [], [], n=2)
        assert p.read_bytes() == b"t,f1,f2,angle_max_deg,overlap_min\n"

    def test_three_samples(self, tmp_path):
        p = tmp_path / "t.csv"
        ts = [0.0, 0.5, 1.0]
        vals = np.array([[-1.0, 1.0], [-0.1 / 3, 2 / 3], [np.pi, np.e]])
        io.write_trajectory_csv(p, ts, vals, [0.0, 12.3456789012345, 90.0], [1.0, 0.9, 0.8])
        raw = p.read_bytes()
        assert raw.count(b"\n") == 4 and b"\r" not in raw
        back = io.read_trajectory_csv(p)
        assert back["header"] == ["t", "f1", "f2", "angle_max_deg", "overlap_min"]
        np.testing.assert_array_equal(back["columns"]["t"], ts)
        np.testing.assert_array_equal(back["columns"]["f1"], vals[:, 0])
        np.testing.assert_array_equal(back["columns"]["f2"], vals[:, 1])
        assert raw.splitlines()[2].split(b",")[3] == b"12.3456789012"

    def test_unwritable(self, tmp_path):
        with pytest.raises(IoError):
            io.write_trajectory_csv(tmp_path / "missing" / "x.csv", [], np.zeros((0, 1)), [], [], n=1)


class TestCli:
    def test_schedule(self, capsys):
        assert main(["schedule", "--n", "3", "--flavor", "radial"]) == 0
        out = capsys.readouterr().out
        assert json.loads(out) == [[{"I": [0, 3]}], [{"I": [0, 1, 3]}, {"I": [0, 2, 3]}]]

    def test_demo_loop2x2(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        assert main(["demo", "--name", "loop2x2", "--steps", "256", "--out", str(out)]) == 0
        assert "swapDetected: true" in capsys.readouterr().out
        lines = out.read_text().splitlines()
        assert lines[0] == "t,f1,f2,angle_max_deg,overlap_min"
        assert len(lines) == 1 + 257

    def test_demo_doubled(self, capsys):
        assert main(["demo", "--name", "loop2x2", "--turns", "2", "--steps", "256"]) == 0
        assert "swapDetected: false" in capsys.readouterr().out

    def test_analyze_identity(self, tmp_path, capsys):
        path = write(tmp_path, "id3.json", {"n": 3, "re": np.eye(3).tolist()})
        out = tmp_path / "a.json"
        assert main(["analyze", "--input", path, "--out", str(out)]) == 0
        assert "isotropy index: {0,3}" in capsys.readouterr().out
        rep = json.loads(out.read_text())
        assert rep["isotropyIndex"] == [0, 3] and rep["clusters"]["sizes"] == [3]

    def test_split(self, tmp_path, capsys):
        path = write(tmp_path, "x.json", {"n": 3, "re": np.diag([-1.0, 0.5, 2.0]).tolist()})
        out = tmp_path / "s.json"
        assert main(["split", "--input", path, "--cut", "0", "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["ranks"] == [1, 2] and rep["reconstructionError"] <= 1e-8
        assert main(["split", "--input", path]) == 0
        assert "blocks: 3" in capsys.readouterr().out

    def test_lift(self, tmp_path, capsys):
        path = write(tmp_path, "y.json", {"n": 2, "re": [[3, 0], [0, 1]], "im": [[0, 1], [-1, 0]]})
        out = tmp_path / "l.json"
        assert main(["lift", "--input", path, "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["ball"] == {"a": 1.0, "c": 0.0, "d": 1.0, "tau": 2.0}
        assert rep["liftedValues"] == pytest.approx([2 - np.sqrt(2), 2 + np.sqrt(2)])
        four = write(tmp_path, "four.json", {"n": 4, "re": np.diag([-2.0, -1.5, 3.0, 4.0]).tolist()})
        assert main(["lift", "--input", four, "--bracket", "-5", "0", "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["mu"] == pytest.approx(-1.75) and rep["r"] == pytest.approx(0.25)
        assert main(["lift", "--input", four, "--bracket", "-5", "3.5"]) == 3

    def test_lift_needs_bracket(self, capsys):
        assert main(["lift", "--random", "3"]) == 3

    def test_track(self, tmp_path, capsys):
        from eigres.paths import loop2x2_matrix

        files = [write(tmp_path, f"m{i}.json", io.matrix_to_obj(loop2x2_matrix(s)))
                 for i, s in enumerate(np.linspace(0, 1, 33))]
        out = tmp_path / "t.csv"
        assert main(["track", "--input", *files, "--out", str(out)]) == 0
        assert "swapDetected: true" in capsys.readouterr().out
        assert len(out.read_text().splitlines()) == 34

    @pytest.mark.parametrize("argv, code", [
        (["bogus"], 2),
        (["demo", "--name", "loop2x2", "--steps", "8"], 2),
        (["demo", "--name", "nope"], 2),
        (["analyze", "--random", "3", "--tol", "-1"], 2),
        (["split", "--random", "3", "--nodes", "4"], 2),
        (["schedule", "--n", "13"], 3),
    ])
    def test_usage_and_validation_codes(self, argv, code, capsys):
        try:
            rc = main(argv)
        except SystemExit as exc:
            rc = exc.code
        assert rc == code

    def test_file_error_codes(self, tmp_path, capsys):
        bad = write(tmp_path, "bad.json", '{"n":2,"re":[[0,1],[0,0]]}')
        assert main(["analyze", "--input", bad]) == 3
        broken = write(tmp_path, "broken.json", "{not json")
        assert main(["analyze", "--input", broken]) == 2
        assert main(["analyze", "--random", "2", "--out", str(tmp_path / "no" / "x.json")]) == 5

    def test_numerical_code(self, tmp_path, capsys):
        a = write(tmp_path, "a.json", {"n": 2, "re": [[-1, 0], [0, 1]]})
        b = write(tmp_path, "b.json", {"n": 2, "re": [[1, 0], [0, 2]]})
        assert main(["track", "--input", a, b, "--cut", "0"]) == 4

    def test_seed_env_fallback(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("EIGRES_SEED", "17")
        main(["analyze", "--random", "3"])
        via_env = capsys.readouterr().out
        main(["analyze", "--random", "3", "--seed", "17"])
        assert capsys.readouterr().out == via_env
        main(["analyze", "--random", "3", "--seed", "18"])
        assert capsys.readouterr().out != via_env

    def test_byte_identical(self, tmp_path, capsys):
        runs = []
        for i in range(2):
            csv_path, json_path = tmp_path / f"d{i}.csv", tmp_path / f"a{i}.json"
            main(["demo", "--name", "ray3", "--steps", "64", "--out", str(csv_path)])
            main(["analyze", "--random", "6", "--seed", "4", "--out", str(json_path)])
            runs.append((csv_path.read_bytes(), json_path.read_bytes()))
        assert runs[0] == runs[1]

    def test_console_script(self):
        env = dict(os.environ)
        proc = subprocess.run([sys.executable, "-m", "eigres.cli", "schedule", "--n", "2", "--flavor", "small"],
                              capture_output=True, text=True, env=env)
        assert proc.returncode == 0 and json.loads(proc.stdout) == [[{"chain": [1, 2]}]]
        proc = subprocess.run([sys.executable, "-m", "eigres.cli", "--help"], capture_output=True, text=True)
        assert "analyze" in proc.stdout
        helps = {cmd: subprocess.run([sys.executable, "-m", "eigres.cli", cmd, "--help"],
                                     capture_output=True, text=True).stdout
                 for cmd in ("analyze", "track", "demo")}
        assert "1e-10" in helps["analyze"] and "64" in helps["analyze"]
        assert "1e-10" in helps["track"] and "64" in helps["track"]
        assert "256" in helps["demo"] and "64" in helps["demo"]
