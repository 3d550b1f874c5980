"""Command-line interface: exit codes, golden outputs, round trips."""

import numpy as np
import pytest

from conftest import F0_VALUES
from test_io import OCTA_OFF
from sftopo import checks
from sftopo.cli import main

F0_DIAGRAM_CSV = """birthVertex,deathVertex,birthValue,deathValue,persistence,pairClass
2,1,2,4,2,0-1
0,8,0,10,10,essential
"""

F0_CURVE_CSV = """threshold,pairs
0,2
2,2
10,1
"""

F0_CRITICAL_CSV = """vertexId,x,y,z,index,multiplicity,value,isBoundary
0,0,0,0,0,1,0,1
1,1,0,0,1,1,4,1
2,2,0,0,0,1,2,1
8,2,2,0,2,1,10,1
"""

F0_TREE_CSV = """arcId,downVertex,upVertex,downValue,upValue,nVertices
0,0,1,0,4,2
1,2,1,2,4,1
2,1,8,4,10,6
"""


@pytest.fixture
def f0_file(tmp_path):
    path = tmp_path / "f0.txt"
    path.write_text("".join(f"{v:g}\n" for v in F0_VALUES))
    return str(path)


def f0_args(f0_file):
    return ["--grid", "3x3", "--values", f0_file]


class TestExitCodes:
    def test_no_subcommand(self):
        assert main([]) == 1

    def test_unknown_flag(self, f0_file):
        assert main(["info", "--bogus"] + f0_args(f0_file)) == 1

    def test_mesh_and_grid_exclusive(self, f0_file):
        assert main(["info", "--mesh", "m.off"] + f0_args(f0_file)) == 1

    def test_bad_grid_string(self, f0_file):
        assert main(["info", "--grid", "3xx", "--values", f0_file]) == 1

    def test_missing_values_file(self, tmp_path):
        assert main(["info", "--grid", "3x3", "--values",
                     str(tmp_path / "none.txt")]) == 2

    def test_length_mismatch(self, tmp_path):
        path = tmp_path / "short.txt"
        path.write_text("1\n2\n3\n")
        assert main(["info", "--grid", "3x3", "--values", str(path)]) == 2

    def test_invariant_failure_exit_code(self, f0_file, monkeypatch):
        monkeypatch.setattr(
            "sftopo.cli.run_checks",
            lambda tri, field, threads=1: [
                checks.CheckResult("forced failure", False)],
        )
        assert main(["check"] + f0_args(f0_file)) == 3

    def test_success(self, f0_file):
        assert main(["info"] + f0_args(f0_file)) == 0


class TestGoldenOutputs:
    def run_to(self, tmp_path, f0_file, sub, *extra):
        out = str(tmp_path / "out")
        rc = main([sub] + f0_args(f0_file) + list(extra) + ["-o", out])
        assert rc == 0
        with open(out) as fh:
            return out, fh.read()

    def test_diagram(self, tmp_path, f0_file):
        _, text = self.run_to(tmp_path, f0_file, "persistence-diagram")
        assert text == F0_DIAGRAM_CSV

    def test_curve(self, tmp_path, f0_file):
        _, text = self.run_to(tmp_path, f0_file, "persistence-curve")
        assert text == F0_CURVE_CSV

    def test_critical_points(self, tmp_path, f0_file):
        _, text = self.run_to(tmp_path, f0_file, "critical-points")
        assert text == F0_CRITICAL_CSV

    def test_contour_tree(self, tmp_path, f0_file):
        _, text = self.run_to(tmp_path, f0_file, "contour-tree")
        assert text == F0_TREE_CSV

    def test_morse_smale_outputs(self, tmp_path, f0_file):
        out, text = self.run_to(tmp_path, f0_file, "morse-smale")
        assert text.startswith("o ")
        assert "l " in text
        desc = open(out + ".desc.labels").read().split()
        assert sorted(set(desc)) == ["0", "2"]
        assert len(open(out + ".asc.labels").read().split()) == 8


class TestSimplifyPipeline:
    def test_roundtrip_classification(self, tmp_path, f0_file):
        out = str(tmp_path / "simplified.txt")
        rc = main(["simplify", "--threshold", "3"] + f0_args(f0_file)
                  + ["-o", out])
        assert rc == 0
        cp_out = str(tmp_path / "cp.csv")
        rc = main(["critical-points", "--grid", "3x3", "--values", out,
                   "--offsets", out + ".offsets", "-o", cp_out])
        assert rc == 0
        rows = open(cp_out).read().strip().splitlines()[1:]
        indices = [int(r.split(",")[4]) for r in rows]
        assert sorted(indices) == [0, 2]    # 1 min, 1 max, no saddle

    def test_check_passes_on_fixtures(self, tmp_path, f0_file):
        assert main(["check"] + f0_args(f0_file)) == 0
        off = tmp_path / "octa.off"
        off.write_text(OCTA_OFF)
        vals = tmp_path / "octa_vals.txt"
        vals.write_text("2\n5\n3\n4\n0\n1\n")
        assert main(["check", "--mesh", str(off),
                     "--values", str(vals)]) == 0
