"""End-to-end checks of the sospack command-line tool.

Usage: cli_test.py <path to sospack binary>
"""

import hashlib
import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

BINARY = None


def run(*args, cwd):
    return subprocess.run([BINARY, *map(str, args)], cwd=cwd, capture_output=True, text=True)


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = Path(cls.tmp.name)
        for kind in ("circle_cloud", "disks_disjoint", "disks_overlapping", "scene_ex4_corrected",
                     "scene_ex4_initial"):
            r = run("fixtures", "generate", "--kind", kind, "--out", "f", cwd=cls.dir)
            assert r.returncode == 0, r.stderr

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_help_and_usage_errors(self):
        self.assertEqual(run("--help", cwd=self.dir).returncode, 0)
        self.assertEqual(run("learn", cwd=self.dir).returncode, 1)
        self.assertEqual(run("bogus", cwd=self.dir).returncode, 1)
        self.assertEqual(run("learn", "--input", "f/circle_cloud.csv", "--degree", "five",
                             "--out", "x.json", cwd=self.dir).returncode, 1)

    def test_learn_writes_shape_and_manifest(self):
        r = run("learn", "--input", "f/circle_cloud.csv", "--degree", "6", "--box", "-1.1,1.1",
                "--prior", "symmetry:neg-identity", "--out", "circle.json", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        shape = json.loads((self.dir / "circle.json").read_text())
        self.assertEqual(shape["dim"], 2)
        self.assertTrue(shape["certificate"]["verified"])
        self.assertLessEqual(shape["max_point_value"], -1e-4 + 1e-12)
        manifest = json.loads((self.dir / "circle.manifest.json").read_text())
        self.assertEqual(manifest["command"], "learn")
        digest = hashlib.sha256((self.dir / "f/circle_cloud.csv").read_bytes()).hexdigest()
        self.assertEqual(manifest["inputs"][0]["sha256"], digest)
        self.assertIn("learn", manifest["timings"])

    def test_learn_rejected_exits_2(self):
        r = run("learn", "--input", "f/circle_cloud.csv", "--degree", "6", "--max-iters", "1",
                "--out", "rejected.json", cwd=self.dir)
        self.assertEqual(r.returncode, 2)
        self.assertFalse((self.dir / "rejected.json").exists())

    def test_learn_missing_input_exits_1(self):
        r = run("learn", "--input", "f/none.csv", "--out", "x.json", cwd=self.dir)
        self.assertEqual(r.returncode, 1)
        self.assertIn("f/none.csv", r.stderr)

    def test_certify_exit_codes(self):
        self.assertEqual(run("certify", "--scene", "f/disks_disjoint.json", "--out", "a.json",
                             cwd=self.dir).returncode, 0)
        self.assertEqual(run("certify", "--scene", "f/disks_overlapping.json", "--out", "b.json",
                             cwd=self.dir).returncode, 3)
        self.assertEqual(run("certify", "--scene", "f/scene_ex4_corrected.json", "--degree", "2",
                             "--out", "c.json", cwd=self.dir).returncode, 4)
        self.assertEqual(run("certify", "--scene", "f/missing.json", "--out", "d.json",
                             cwd=self.dir).returncode, 1)
        report = json.loads((self.dir / "b.json").read_text())
        self.assertEqual(report["verdict"], "refuted")
        self.assertEqual(report["counterexamples"][0]["id"], "overlap:0:1")

    def test_certify_ex4_initial_reports_witness(self):
        r = run("certify", "--scene", "f/scene_ex4_initial.json", "--out", "e4.json", cwd=self.dir)
        self.assertEqual(r.returncode, 3)
        report = json.loads((self.dir / "e4.json").read_text())
        self.assertTrue(report["counterexamples"])
        self.assertTrue(all(len(c["point"]) == 2 for c in report["counterexamples"]))

    def test_sample_unit_disk_and_torus(self):
        disk = {"dim": 2, "terms": [{"exp": [0, 0], "coef": -1.0}, {"exp": [0, 2], "coef": 1.0},
                                    {"exp": [2, 0], "coef": 1.0}], "radius": 1.5}
        (self.dir / "disk.json").write_text(json.dumps(disk))
        r = run("sample", "--shape", "disk.json", "--resolution", "360", "--out", "d.csv",
                cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(len((self.dir / "d.csv").read_text().splitlines()), 360)

        torus = {"dim": 3, "terms": [], "radius": 2.0}
        r = run("fixtures", "generate", "--kind", "scene_ex3_initial", "--out", "f", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        scene = json.loads((self.dir / "f/scene_ex3_initial.json").read_text())
        torus["terms"] = scene["container"]["c"]["terms"]
        (self.dir / "torus.json").write_text(json.dumps(torus))
        r = run("sample", "--shape", "torus.json", "--resolution", "60", "--out", "t.csv",
                cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertGreater(len((self.dir / "t.csv").read_text().splitlines()), 100)

    def test_certify_report_is_byte_identical(self):
        for name, jobs in (("r1.json", 1), ("r2.json", 4)):
            r = run("certify", "--scene", "f/scene_ex4_corrected.json", "--jobs", jobs,
                    "--out", name, cwd=self.dir)
            self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual((self.dir / "r1.json").read_bytes(), (self.dir / "r2.json").read_bytes())

    def test_manifest_digest_tracks_input(self):
        scene = json.loads((self.dir / "f/disks_disjoint.json").read_text())
        (self.dir / "s1.json").write_text(json.dumps(scene))
        scene["gamma_cap"] = 2.0
        (self.dir / "s2.json").write_text(json.dumps(scene))
        digests = []
        for name in ("s1", "s2"):
            run("certify", "--scene", f"{name}.json", "--out", f"{name}_out.json", cwd=self.dir)
            m = json.loads((self.dir / f"{name}_out.manifest.json").read_text())
            digests.append(m["inputs"][0]["sha256"])
        self.assertNotEqual(digests[0], digests[1])

    def test_oracle_check(self):
        r = run("oracle-check", "--scene", "f/disks_overlapping.json", cwd=self.dir)
        self.assertEqual(r.returncode, 3)
        report = json.loads(r.stdout)
        self.assertTrue(report["violation"])
        r = run("oracle-check", "--scene", "f/disks_disjoint.json", "--out", "o.json", cwd=self.dir)
        self.assertEqual(r.returncode, 0)
        self.assertFalse(json.loads((self.dir / "o.json").read_text())["violation"])
        self.assertTrue((self.dir / "o.manifest.json").exists())

    def test_sample(self):
        r = run("sample", "--scene", "f/disks_disjoint.json", "--out", "b.csv", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        labels = {}
        for line in (self.dir / "b.csv").read_text().splitlines():
            label, x, y = line.split(",")
            labels[label] = labels.get(label, 0) + 1
            if label == "container":
                self.assertAlmostEqual(float(x) ** 2 + float(y) ** 2, 1.0, places=6)
        self.assertEqual(set(labels), {"container", "disk1", "disk2", "disk3", "disk4"})

        empty = {"dim": 2, "terms": [{"exp": [0, 0], "coef": 1.0}, {"exp": [2, 0], "coef": 1.0},
                                     {"exp": [0, 2], "coef": 1.0}], "radius": 1.0}
        (self.dir / "empty.json").write_text(json.dumps(empty))
        r = run("sample", "--shape", "empty.json", "--out", "e.csv", cwd=self.dir)
        self.assertEqual(r.returncode, 0)
        self.assertEqual((self.dir / "e.csv").read_text(), "")
        self.assertIn("warning", r.stderr)
        r = run("sample", "--shape", "empty.json", "--out", "no/such/dir/e.csv", cwd=self.dir)
        self.assertEqual(r.returncode, 1)

    def test_fixtures_deterministic(self):
        for out in ("g1", "g2"):
            run("fixtures", "generate", "--kind", "annulus_cloud", "--seed", "7", "--out", out,
                cwd=self.dir)
        a = (self.dir / "g1/annulus_cloud.csv").read_bytes()
        self.assertEqual(a, (self.dir / "g2/annulus_cloud.csv").read_bytes())
        self.assertEqual(run("fixtures", "generate", "--kind", "teapot", "--out", "g3",
                             cwd=self.dir).returncode, 1)


if __name__ == "__main__":
    BINARY = str(Path(sys.argv.pop(1)).resolve())
    unittest.main()
