import json
import tempfile
import unittest
from pathlib import Path

from src.catalog import (
    PACKAGED_CATALOG_DIR,
    export_entries,
    list_entries,
    load_entry,
    raw_entry,
    verify_all,
    verify_entry,
    verify_loaded_entry,
)
from src.catalog.registry import entry_context
from src.core.error_handling import CorruptEntryError, UnknownEntryError
from src.models.catalog_entry import CatalogEntry
from src.services.task_runner import ParallelRunner

NEGATIVE_ENTRIES = {"cliqueunion-15-not-D-graceful", "nested-3-in-15-negative", "nonline-cliques-31"}


class TestCatalogStorage(unittest.TestCase):
    def test_entries_are_shipped(self):
        ids = list_entries()
        self.assertEqual(len(ids), 27)
        self.assertIn("q3star-7-q2", ids)
        self.assertEqual(ids, sorted(ids))

    def test_reserialization_reproduces_the_stored_bytes(self):
        for entry_id in list_entries():
            with self.subTest(entry_id=entry_id):
                self.assertEqual(load_entry(entry_id).serialize(), raw_entry(entry_id))

    def test_export_writes_identical_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            written = export_entries(tmp)
            self.assertEqual(len(written), 27)
            for path in written:
                original = PACKAGED_CATALOG_DIR / path.name
                self.assertEqual(path.read_bytes(), original.read_bytes())

    def test_unknown_entry(self):
        with self.assertRaises(UnknownEntryError):
            load_entry("no-such-entry")

    def test_corrupt_entries(self):
        good = json.loads(raw_entry("cycle-7-C3-q2"))
        with tempfile.TemporaryDirectory() as tmp:
            Path(tmp, "broken.json").write_text("{not json")
            renamed = dict(good, id="something-else")
            Path(tmp, "renamed.json").write_text(json.dumps(renamed))
            kindless = {k: v for k, v in good.items() if k != "kind"}
            Path(tmp, "kindless.json").write_text(json.dumps(kindless))
            unknown_kind = dict(good, kind="hypergraph", id="unknown_kind")
            Path(tmp, "unknown_kind.json").write_text(json.dumps(unknown_kind))
            for entry_id in ("broken", "renamed", "kindless", "unknown_kind"):
                with self.subTest(entry_id=entry_id):
                    with self.assertRaises(CorruptEntryError):
                        load_entry(entry_id, tmp)

    def test_entry_without_field_needs_n(self):
        data = json.loads(raw_entry("paley-19-prism3"))
        data["data"].pop("n")
        with self.assertRaises(CorruptEntryError):
            CatalogEntry.from_dict(data)


class TestCatalogVerification(unittest.TestCase):
    def test_every_entry_meets_its_expectation(self):
        verdicts = verify_all(ParallelRunner(2))
        self.assertEqual(len(verdicts), 27)
        for verdict in verdicts:
            with self.subTest(entry_id=verdict.entry_id):
                self.assertTrue(verdict.matches, verdict.to_dict())
                expected = "fail" if verdict.entry_id in NEGATIVE_ENTRIES else "pass"
                self.assertEqual(verdict.observed, expected)

    def test_tampered_labels_are_caught(self):
        data = json.loads(raw_entry("cycle-7-C3-q2"))
        data["data"]["blocks"][3]["labels"][2] = 48
        verdict = verify_loaded_entry(CatalogEntry.from_dict(data))
        self.assertEqual(verdict.observed, "fail")
        self.assertFalse(verdict.matches)
        self.assertFalse(verdict.to_dict()["matches_expected"])

    def test_verdicts_are_the_same_for_any_worker_count(self):
        for entry_id in ("q3star-7-q2", "cycle-6-C3-q2-relative", "singer-C31-63"):
            with self.subTest(entry_id=entry_id):
                sequential = verify_entry(entry_id, ParallelRunner(1)).to_dict()
                self.assertEqual(verify_entry(entry_id, ParallelRunner(4)).to_dict(), sequential)


class TestCatalogContexts(unittest.TestCase):
    def test_every_spread_partitions_into_subspaces(self):
        contexts = {}
        for entry_id in list_entries():
            context = entry_context(load_entry(entry_id))
            if context is not None:
                contexts.setdefault(context.field.name, context)
        self.assertTrue(contexts)
        for name, context in sorted(contexts.items()):
            for n in range(1, context.v + 1):
                if context.v % n:
                    continue
                with self.subTest(field=name, n=n):
                    spread = context.desarguesian_spread(n)
                    points = sorted(p for points in spread.classes for p in points)
                    self.assertEqual(points, list(range(context.v_q)))
                    for points in spread.classes:
                        check = context.is_subspace(points)
                        self.assertTrue(check.is_subspace, points)
                        self.assertEqual(check.dim, n - 1)


if __name__ == "__main__":
    unittest.main()
