import io
import json
import os
import subprocess
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from src.catalog import raw_entry
from src.main import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from src.services.config_loader import use_config

D15 = [0, 1, 2, 4, 5, 8, 10]
REPO_ROOT = os.path.dirname(os.path.abspath(__file__))


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        use_config(None)
        self.tmp.cleanup()

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        return code, out.getvalue()

    def write_json(self, name, data):
        path = os.path.join(self.tmp.name, name)
        with open(path, "w") as f:
            json.dump(data, f)
        return path


class TestVerifyCommand(CliTestCase):
    def test_catalog_entry_passes(self):
        code, out = self.run_cli("verify", "--catalog", "q3star-7-q2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["observed"], "pass")

    def test_negative_entry_matches_its_expectation(self):
        code, out = self.run_cli("verify", "--catalog", "nonline-cliques-31")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["observed"], "fail")

    def test_unknown_entry_is_a_usage_error(self):
        code, _ = self.run_cli("verify", "--catalog", "no-such-entry")
        self.assertEqual(code, EXIT_USAGE)

    def test_tampered_input_fails(self):
        data = json.loads(raw_entry("singer-C7-15"))
        data["data"]["block"]["labels"][6] = 6
        path = self.write_json("tampered.json", data)
        code, out = self.run_cli("verify", "--input", path)
        self.assertEqual(code, EXIT_FAIL)
        self.assertFalse(json.loads(out)["matches_expected"])

    def test_needs_exactly_one_source(self):
        code, _ = self.run_cli("verify")
        self.assertEqual(code, EXIT_USAGE)
        code, _ = self.run_cli("verify", "--catalog", "q3star-7-q2", "--all")
        self.assertEqual(code, EXIT_USAGE)

    def test_written_certificate_does_not_depend_on_jobs(self):
        outputs = []
        for jobs in ("1", "4"):
            path = os.path.join(self.tmp.name, f"cert-{jobs}.json")
            code, _ = self.run_cli("verify", "--catalog", "cycle-7-C3-q2", "--jobs", jobs, "--output", path)
            self.assertEqual(code, EXIT_OK)
            with open(path, "rb") as f:
                outputs.append(f.read())
        self.assertEqual(outputs[0], outputs[1])

    def test_bad_jobs(self):
        code, _ = self.run_cli("verify", "--catalog", "q3star-7-q2", "--jobs", "0")
        self.assertEqual(code, EXIT_USAGE)


class TestSearchCommand(CliTestCase):
    def spec(self, **overrides):
        data = {
            "schema": "qdesign.search-spec/1",
            "target": "graceful_labeling",
            "n": 15,
            "D": D15,
            "graph": {"family": "cycle", "params": {"k": 7}},
            "lambda": 1,
        }
        data.update(overrides)
        return self.write_json("spec.json", data)

    def test_found(self):
        code, out = self.run_cli("search", "--input", self.spec(), "--emit-certificate")
        self.assertEqual(code, EXIT_OK)
        result = json.loads(out)
        self.assertEqual(result["status"], "found")
        self.assertEqual(result["certificate"]["verdict"], "pass")

    def test_exhausted(self):
        path = self.spec(graph={"family": "cycle_union", "params": {"sizes": [3, 4]}})
        code, out = self.run_cli("search", "--input", path)
        self.assertEqual(code, EXIT_FAIL)
        result = json.loads(out)
        self.assertEqual(result["status"], "exhausted")
        self.assertNotIn("certificate", result)

    def test_budget_exceeded(self):
        path = self.spec(graph={"family": "cycle_union", "params": {"sizes": [3, 4]}})
        code, out = self.run_cli("search", "--input", path, "--budget-nodes", "5")
        self.assertEqual(code, EXIT_BUDGET)
        self.assertEqual(json.loads(out)["status"], "budget-exceeded")

    def test_infeasible_counts_fail(self):
        code, _ = self.run_cli("search", "--input", self.spec(graph={"family": "cycle", "params": {"k": 6}}))
        self.assertEqual(code, EXIT_FAIL)

    def test_malformed_spec(self):
        code, _ = self.run_cli("search", "--input", self.spec(target="hamiltonian"))
        self.assertEqual(code, EXIT_USAGE)
        code, _ = self.run_cli("search", "--input", os.path.join(self.tmp.name, "missing.json"))
        self.assertEqual(code, EXIT_USAGE)


class TestTableCommands(CliTestCase):
    def test_admissible(self):
        code, out = self.run_cli("admissible", "--v", "7", "--q", "5", "--k", "3", "--steiner")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), "admissible")
        code, out = self.run_cli("admissible", "--v", "8", "--q", "2", "--k", "3", "--steiner")
        self.assertEqual(code, EXIT_FAIL)
        self.assertTrue(out.startswith("not admissible"))

    def test_admissible_graph(self):
        code, _ = self.run_cli("admissible", "--v", "7", "--q", "2", "--graph", '{"family": "q3star"}')
        self.assertEqual(code, EXIT_OK)
        code, _ = self.run_cli("admissible", "--v", "7", "--q", "2", "--graph", "{oops")
        self.assertEqual(code, EXIT_USAGE)

    def test_admissibility_table(self):
        code, out = self.run_cli("admissible", "--v", "7", "--q", "2", "--table")
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(lines[0], "k\torder\tsize\tregular_possible")
        self.assertEqual(len(lines), 1 + 3 + 2 + 3 + 5)

    def test_sizes(self):
        code, out = self.run_cli("sizes", "--v", "13", "--k", "3", "--q", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("13\t3\t2\t195\t15", out)
        code, out = self.run_cli("sizes", "--table", "fano", "--format", "json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)[0]["family_size"], 3)

    def test_sizes_usage(self):
        code, _ = self.run_cli("sizes")
        self.assertEqual(code, EXIT_USAGE)
        code, _ = self.run_cli("sizes", "--v", "8", "--k", "3", "--q", "2")
        self.assertEqual(code, EXIT_USAGE)


class TestCatalogCommands(CliTestCase):
    def test_show_prints_the_stored_bytes(self):
        code, out = self.run_cli("catalog", "show", "q3star-7-q2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, raw_entry("q3star-7-q2"))

    def test_list_and_export(self):
        code, out = self.run_cli("catalog", "list", "--format", "json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(json.loads(out)), 27)
        target = os.path.join(self.tmp.name, "export")
        code, _ = self.run_cli("catalog", "export", "--output", target)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(os.listdir(target)), 27)
        code, _ = self.run_cli("catalog", "export")
        self.assertEqual(code, EXIT_USAGE)

    def test_develop(self):
        code, out = self.run_cli("develop", "--catalog", "singer-C7-15")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["verdict"], "pass")

    def test_unknown_subcommand_and_help(self):
        self.assertEqual(self.run_cli("frobnicate")[0], EXIT_USAGE)
        self.assertEqual(self.run_cli("--help")[0], EXIT_OK)


class TestFreshInterpreter(unittest.TestCase):
    """Entry points must import cleanly without any module loaded beforehand"""

    def run_python(self, *args):
        return subprocess.run(
            [sys.executable, *args], cwd=REPO_ROOT, capture_output=True, text=True, timeout=300
        )

    def test_main_module_runs(self):
        result = self.run_python("-m", "src.main", "catalog", "list")
        self.assertEqual(result.returncode, EXIT_OK, result.stderr)
        self.assertIn("q3star-7-q2", result.stdout)

    def test_packages_import_in_any_order(self):
        for module in ("src.field", "src.geometry", "src.search", "src.services.search_service", "src.catalog"):
            with self.subTest(module=module):
                result = self.run_python("-c", f"import {module}")
                self.assertEqual(result.returncode, 0, result.stderr)


if __name__ == "__main__":
    unittest.main()
