# Copyright 2026 The Rendezvous Solver Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""CLI output checks against the shipped schemas and the 0/1/2 exit-code contract."""

import json
import os
import socket
import subprocess
import sys
import tempfile
import time
import unittest
import urllib.error
import urllib.request
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

RDV = Path(sys.argv.pop(1)).resolve()
SCHEMAS = Path(sys.argv.pop(1)).resolve()


def load_registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        resources.append((path.name, Resource.from_contents(json.loads(path.read_text()))))
    return Registry().with_resources(resources)


REGISTRY = load_registry()


def validate(doc, schema_name):
    schema = REGISTRY.contents(schema_name)
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def run(*args, code=0):
    proc = subprocess.run([str(RDV), *map(str, args)], capture_output=True, text=True, timeout=300)
    if proc.returncode != code:
        raise AssertionError(f"{args}: exit {proc.returncode}, expected {code}\n{proc.stderr}")
    return proc


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = Path(cls.tmp.name)
        cls.p3 = cls.write("p3.json", {"n": 3, "edges": [[0, 1], [1, 2]], "s": 0, "t": 2, "k": 1})
        cls.adj = cls.write("adj.json", {"n": 2, "edges": [[0, 1]], "s": 0, "t": 1, "k": 1})
        cls.graph = cls.write("diamond.json", {"n": 4, "edges": [[0, 1], [0, 2], [1, 2], [1, 3], [2, 3]]})

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    @classmethod
    def write(cls, name, doc):
        path = cls.dir / name
        path.write_text(json.dumps(doc))
        return path

    def gen(self, family, p, k=1):
        path = self.dir / f"{family}-{p}-{k}.json"
        run("gen", family, "--p", p, "--k", k, "--out", path)
        doc = json.loads(path.read_text())
        validate(doc, "instance.schema.json")
        return path, doc

    def test_solve_reports(self):
        out = json.loads(run("solve", "--instance", self.p3).stdout)
        validate(out, "solve-report.schema.json")
        self.assertFalse(out["facilitator_wins"])
        out = json.loads(run("solve", "--instance", self.adj).stdout)
        self.assertTrue(out["facilitator_wins"])
        self.assertEqual(out["method"], "adjacent-or-equal")
        for k, wins in ((2, False), (1, True)):
            path, _ = self.gen("clique-spider", 4, k)
            out = json.loads(run("solve", "--instance", path).stdout)
            validate(out, "solve-report.schema.json")
            self.assertEqual(out["facilitator_wins"], wins)
        for mode in ("generic", "nd-fpt"):
            out = json.loads(run("solve", "--instance", self.p3, "--tau", 2, "--mode", mode, "--diagnostics").stdout)
            validate(out, "solve-report.schema.json")
            self.assertEqual(out["method"], mode)
            self.assertFalse(out["facilitator_wins"])

    def test_solve_budget(self):
        path, _ = self.gen("clique-spider", 4, 3)
        proc = run("solve", "--instance", path, "--mode", "generic", "--budget", 100, code=2)
        validate(json.loads(proc.stdout), "budget-error.schema.json")
        self.assertIn("budget-exceeded", proc.stderr)

    def test_dnumber(self):
        out = json.loads(run("dnumber", "--instance", self.p3).stdout)
        validate(out, "dnumber-report.schema.json")
        self.assertEqual(out, {"d": 1, "lambda": 1, "reason": "lambda-1"})
        path, _ = self.gen("path-spider", 3)
        out = json.loads(run("dnumber", "--instance", path).stdout)
        validate(out, "dnumber-report.schema.json")
        self.assertEqual((out["d"], out["lambda"]), (2, 3))
        out = json.loads(run("dnumber", "--graph", self.graph, "--s", 0, "--t", 3).stdout)
        validate(out, "dnumber-report.schema.json")
        self.assertEqual(out["reason"], "chordal")
        out = json.loads(run("dnumber", "--instance", self.adj).stdout)
        self.assertEqual(out["d"], "inf")
        path, _ = self.gen("clique-spider", 4, 1)
        out = json.loads(run("dnumber", "--instance", path, "--max-k", 1, code=2).stdout)
        validate(out, "dnumber-report.schema.json")
        self.assertEqual(out["d"]["lower"], 2)

    def test_lambda_and_classify(self):
        out = json.loads(run("lambda", "--instance", self.p3).stdout)
        validate(out, "lambda-report.schema.json")
        self.assertEqual(out, {"lambda": 1, "separator": [1]})
        path, _ = self.gen("clique-spider", 3)
        out = json.loads(run("classify", "--instance", path).stdout)
        validate(out, "classify-report.schema.json")
        self.assertIsNone(out["fast_path"])
        out = json.loads(run("classify", "--graph", self.graph, "--s", 0, "--t", 3).stdout)
        validate(out, "classify-report.schema.json")
        self.assertTrue(out["chordal"])

    def test_generators_and_reductions(self):
        _, doc = self.gen("clique-spider", 2)
        self.assertEqual(doc["n"], 8)
        first = run("gen", "path-spider", "--p", 3).stdout
        self.assertEqual(first, run("gen", "path-spider", "--p", 3).stdout)
        sc = self.write("sc.json", {"n": 2, "sets": [[0], [1]], "k": 1})
        doc = json.loads(run("reduce", "set-cover", "--file", sc).stdout)
        validate(doc, "instance.schema.json")
        qbf = self.write("qbf.json", {"n": 1, "clauses": [[{"var": 1, "neg": False}, {"var": 2, "neg": True}]]})
        doc = json.loads(run("reduce", "qbf", "--file", qbf).stdout)
        validate(doc, "instance.schema.json")
        self.assertEqual((doc["k"], doc["tau"]), (4, 5))
        doc = json.loads(run("reduce", "qbf-unbounded", "--file", qbf).stdout)
        validate(doc, "instance.schema.json")
        self.assertEqual(doc["k"], 14)

    def test_strategy_round_trip(self):
        tree = self.dir / "tree.json"
        run("solve", "--instance", self.p3, "--tau", 3, "--strategy-out", tree)
        doc = json.loads(tree.read_text())
        validate(doc, "strategy.schema.json")
        self.assertEqual(run("verify", "--instance", self.p3, "--strategy", tree, "--tau", 3).stdout.strip(), "valid")
        doc["children"][0]["d"] = [0]
        bad = self.write("bad-tree.json", doc)
        proc = run("verify", "--instance", self.p3, "--strategy", bad, "--tau", 3, code=1)
        self.assertTrue(proc.stdout.startswith("invalid: "))

    def test_bad_input_exit_codes(self):
        broken = self.dir / "broken.json"
        broken.write_text("{")
        for args in (
            ("solve", "--instance", broken),
            ("solve", "--instance", self.dir / "missing.json"),
            ("solve", "--instance", self.p3, "--mode", "fast"),
            ("dnumber", "--graph", self.graph, "--s", 0),
            ("gen", "star", "--p", 3),
            ("reduce", "set-cover", "--file", broken),
            ("nosuchcommand",),
        ):
            proc = run(*args, code=1)
            self.assertTrue(proc.stderr.strip(), args)
            self.assertEqual(proc.stdout, "", args)
        disconnected = self.write("disc.json", {"n": 4, "edges": [[0, 1], [2, 3]], "s": 0, "t": 2, "k": 1})
        self.assertIn("disconnected", run("solve", "--instance", disconnected, code=1).stderr)

    def test_serve(self):
        with socket.socket() as sock:
            sock.bind(("127.0.0.1", 0))
            port = sock.getsockname()[1]
        server = subprocess.Popen([str(RDV), "serve", "--host", "127.0.0.1", "--port", str(port)],
                                  stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
        base = f"http://127.0.0.1:{port}/v1/games"

        def call(method, url, body=None):
            data = None if body is None else json.dumps(body).encode()
            req = urllib.request.Request(url, data=data, method=method, headers={"Content-Type": "application/json"})
            try:
                with urllib.request.urlopen(req, timeout=30) as resp:
                    return resp.status, json.loads(resp.read())
            except urllib.error.HTTPError as err:
                return err.code, json.loads(err.read())

        try:
            for _ in range(100):
                try:
                    with socket.create_connection(("127.0.0.1", port), timeout=1):
                        break
                except OSError:
                    time.sleep(0.05)
            instance = json.loads(self.p3.read_text())
            status, created = call("POST", base, {"instance": instance, "humanRole": "Facilitator"})
            self.assertEqual(status, 201)
            validate(created["state"], "arena-state.schema.json")
            gid = created["id"]
            status, err = call("POST", f"{base}/{gid}/move", {"pair": [1, 2]})
            self.assertEqual(status, 409)
            validate(err, "arena-error.schema.json")
            status, state = call("POST", f"{base}/{gid}/move", {"pair": [0, 2]})
            self.assertEqual(status, 200)
            validate(state, "arena-state.schema.json")
            status, err = call("GET", f"{base}/missing")
            self.assertEqual(status, 404)
            validate(err, "arena-error.schema.json")
        finally:
            server.terminate()
            server.wait(timeout=30)


if __name__ == "__main__":
    unittest.main(verbosity=2)
