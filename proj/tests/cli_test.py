"""End-to-end checks of the q41 executable: exit codes, schema validity, CSV shape, determinism.

usage: cli_test.py Q41_BINARY SOURCE_DIR WORK_DIR
"""
import csv
import io
import json
import math
import os
import subprocess
import sys
import unittest

import jsonschema

BIN, SRC, WORK = sys.argv[1:4]
del sys.argv[1:4]
os.makedirs(WORK, exist_ok=True)

with open(os.path.join(SRC, "schemas", "report.schema.json")) as f:
    SCHEMA = json.load(f)
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA, format_checker=jsonschema.FormatChecker())


def run(*args):
    p = subprocess.run([BIN, *args], capture_output=True, cwd=SRC)
    return p.returncode, p.stdout.decode(), p.stderr.decode()


def sample(name):
    return os.path.join(SRC, "samples", name)


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def out(name):
    return os.path.join(WORK, name)


class Cli(unittest.TestCase):
    def json_ok(self, text):
        doc = json.loads(text)
        VALIDATOR.validate(doc)
        return doc

    def error_of(self, code, stderr):
        self.assertEqual(code, 2)
        return self.json_ok(stderr.strip())

    def test_catalog_list(self):
        code, o, _ = run("catalog-list")
        self.assertEqual(code, 0)
        names = [s["name"] for s in self.json_ok(o)["surfaces"]]
        self.assertIn("torus", names)
        self.assertIn("catenoid", names)

    def test_verify_willmore_torus_passes_with_swillmore_reported(self):
        code, o, _ = run("verify", "--surface", "torus", "--param", "t=2", "--grid", "8x8")
        doc = self.json_ok(o)
        self.assertEqual(code, 0)
        self.assertTrue(doc["passed"])
        sw = next(r for r in doc["reports"] if r["name"] == "swillmore")
        self.assertFalse(sw["applicable"])
        self.assertGreater(sw["report"]["max_abs"], 0.05)

    def test_verify_non_willmore_fails_with_exit_1(self):
        code, o, _ = run("verify", "--dsl", sample("product_torus.q41"), "--param", "a=0.6", "--param", "b=0.8",
                         "--grid", "6x6")
        doc = self.json_ok(o)
        self.assertEqual(code, 1)
        names = {r["name"]: r for r in doc["reports"]}
        self.assertFalse(names["willmore"]["passed"])
        self.assertTrue(names["structure"]["passed"])
        self.assertIn("skipped", names["theta_holomorphy"])

    def test_transform_round_trip(self):
        for chain in ("L,R", "R,L"):
            code, o, _ = run("transform", "--surface", "catenoid", "--chain", chain, "--grid", "6x6")
            doc = self.json_ok(o)
            self.assertEqual(code, 0)
            self.assertTrue(doc["round_trip"])
            self.assertLess(doc["distance_to_base"]["sup"], 1e-8)

    def test_transform_adjoint_of_non_willmore_is_an_error(self):
        code, _, e = run("transform", "--dsl", sample("product_torus.q41"), "--param", "a=0.6", "--param",
                         "b=0.8", "--chain", "adjL", "--grid", "4x4")
        self.assertEqual(self.error_of(code, e)["error"], "NotWillmore")

    def test_energy_reference(self):
        code, o, _ = run("energy", "--surface", "torus", "--param", "t=3/2", "--grid", "64x64")
        doc = self.json_ok(o)
        self.assertEqual(code, 0)
        self.assertAlmostEqual(doc["reference"], 9 * math.pi ** 2 / math.sqrt(5), places=12)
        self.assertLess(doc["relative_error"], 1e-8)

    def test_energy_of_catenoid_polar_vanishes(self):
        code, o, _ = run("energy", "--surface", "catenoid", "--chain", "L", "--grid", "16x16")
        doc = self.json_ok(o)
        self.assertEqual(code, 0)
        self.assertLess(abs(doc["energy"]["value"]), 1e-8)
        self.assertNotIn("reference", doc)

    def test_invariants_csv(self):
        code, o, _ = run("invariants", "--surface", "torus", "--param", "t=2", "--grid", "4x5")
        self.assertEqual(code, 0)
        self.assertTrue(o.endswith("\r\n"))
        rows = list(csv.reader(io.StringIO(o, newline="")))
        self.assertEqual(len(rows), 1 + 20)
        header = rows[0]
        self.assertEqual(header[:2], ["u", "v"])
        self.assertEqual(header[-1], "class")
        for r in rows[1:]:
            self.assertEqual(len(r), len(header))
            rec = dict(zip(header, r))
            self.assertAlmostEqual(float(rec["s_re"]), 1 / 6, places=10)
            self.assertAlmostEqual(float(rec["kappa_pair"]), 1 / 3, places=10)

    def test_mesh_csv(self):
        code, o, _ = run("mesh", "--surface", "catenoid", "--grid", "4x4")
        self.assertEqual(code, 0)
        rows = list(csv.reader(io.StringIO(o, newline="")))
        self.assertEqual(rows[0], ["u", "v", "x1", "x2", "x3", "x4", "inf"])
        self.assertEqual(len(rows), 17)
        for r in rows[1:]:
            self.assertEqual(r[-1], "0")
            x1, x2, x3, x4 = map(float, r[2:6])
            # the catenoid sits in the slice x4 = 1 of the affine chart
            self.assertAlmostEqual(x4, 1.0, places=12)
            u, v = float(r[0]), float(r[1])
            self.assertAlmostEqual(x1, math.cosh(u) * math.cos(v), places=12)

    def test_errors(self):
        code, _, e = run("verify", "--grid", "3x8")
        self.assertEqual(self.error_of(code, e)["error"], "InvalidConfig")
        code, _, e = run("verify", "--surface", "nonesuch")
        self.assertEqual(self.error_of(code, e)["error"], "InvalidConfig")
        code, _, e = run("verify", "--tol", "bogus=1")
        self.assertEqual(self.error_of(code, e)["error"], "InvalidConfig")
        code, _, e = run("verify", "--dsl", sample("bad_syntax.q41"))
        err = self.error_of(code, e)
        self.assertEqual(err["error"], "ParseError")
        self.assertEqual((err["line"], err["column"]), (1, 28))
        code, _, e = run("verify", "--dsl", sample("does_not_exist.q41"))
        self.assertEqual(self.error_of(code, e)["error"], "IoError")
        code, _, e = run("verify", "--surface", "torus", "--param", "t=1/2")
        self.assertEqual(self.error_of(code, e)["error"], "ParameterOutOfRange")
        code, _, e = run("bogus-command")
        self.assertEqual(self.error_of(code, e)["error"], "InvalidConfig")

    def test_identical_configs_give_identical_bytes(self):
        paths = []
        for i, threads in enumerate(("1", "3")):
            p = out(f"det{i}.json")
            code, _, _ = run("verify", "--surface", "torus", "--param", "t=2", "--grid", "7x5", "--threads",
                             threads, "--out", p)
            self.assertEqual(code, 0)
            paths.append(p)
        a, b = (read_bytes(p) for p in paths)
        self.assertEqual(a, b)
        self.assertNotIn(b"generated_at", a)
        meta = json.loads(read_bytes(paths[0] + ".meta.json"))
        VALIDATOR.validate(meta)

    def test_config_file_and_flag_precedence(self):
        cfg = out("config.json")
        with open(cfg, "w") as f:
            json.dump({"surface": "torus", "params": {"t": "3/2"}, "grid": "4x4"}, f)
        code, o, _ = run("energy", "--config", cfg, "--grid", "32x32")
        doc = self.json_ok(o)
        self.assertEqual(code, 0)
        self.assertEqual(doc["params"]["t"], 1.5)
        self.assertEqual(doc["energy"]["refinements"][-1]["nu"], 32)
        code, o, _ = run("energy", "--config", cfg, "--param", "t=2", "--grid", "32x32")
        self.assertEqual(self.json_ok(o)["params"]["t"], 2.0)
        with open(cfg, "w") as f:
            json.dump({"surface": "torus", "colour": "red"}, f)
        code, _, e = run("verify", "--config", cfg)
        self.assertEqual(self.error_of(code, e)["error"], "InvalidConfig")


if __name__ == "__main__":
    unittest.main(verbosity=2)
