import json
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from cli.formats import (
    FormatError,
    parse_code,
    parse_valuation,
    parse_weights,
    serialize_code,
    serialize_valuation,
    serialize_weights,
    write_valuation,
)
from valcore.valuation import Valuation

GOLDEN = "SUBVAL 1\nK 2\n0 0\n1 5\n2 7/2\n3 8\n"

W51 = """ASSIGNW 1
5 5
32 35 25 26 22
24 30 20 21 19
16 22 14 16 14
9 15 7 9 9
2 8 1 4 5
"""


class ValuationFormatTests(SimpleTestCase):
    def test_single_good(self):
        v = parse_valuation("SUBVAL 1\nK 1\n0 0\n1 5\n")
        self.assertEqual(v.table, (0, 5))

    def test_round_trip_is_byte_identical(self):
        v = parse_valuation(GOLDEN)
        self.assertEqual(v(2), Fraction(7, 2))
        self.assertEqual(serialize_valuation(v), GOLDEN)

    def test_empty_bundle_must_be_zero(self):
        with self.assertRaises(FormatError) as ctx:
            parse_valuation("SUBVAL 1\nK 1\n0 1\n1 5\n")
        self.assertEqual(ctx.exception.line, 3)
        self.assertEqual(str(ctx.exception), "line 3: v(∅) must be 0")

    def test_bad_header(self):
        with self.assertRaises(FormatError) as ctx:
            parse_valuation("SUBVAL 2\nK 1\n0 0\n1 5\n")
        self.assertEqual(ctx.exception.line, 1)

    def test_missing_line(self):
        with self.assertRaises(FormatError) as ctx:
            parse_valuation("SUBVAL 1\nK 2\n0 0\n1 5\n2 3\n")
        self.assertEqual(ctx.exception.line, 6)

    def test_rational_not_in_lowest_terms(self):
        with self.assertRaises(FormatError) as ctx:
            parse_valuation("SUBVAL 1\nK 1\n0 0\n1 4/2\n")
        self.assertEqual(ctx.exception.line, 4)

    def test_masks_in_order(self):
        with self.assertRaises(FormatError) as ctx:
            parse_valuation("SUBVAL 1\nK 1\n1 5\n0 0\n")
        self.assertEqual(ctx.exception.line, 3)


class WeightAndCodeFormatTests(SimpleTestCase):
    def test_weights_round_trip(self):
        matrix = parse_weights(W51)
        self.assertEqual(matrix.w(1, 2), 35)
        self.assertEqual(serialize_weights(matrix), W51)

    def test_negative_weight(self):
        with self.assertRaises(FormatError) as ctx:
            parse_weights("ASSIGNW 1\n1 2\n1 -1\n")
        self.assertEqual(ctx.exception.line, 3)

    def test_code_round_trip(self):
        text = "SUBCODE 1\nK 4\n6\n9\n"
        code = parse_code(text)
        self.assertEqual(code.members, (6, 9))
        self.assertEqual(serialize_code(code), text)

    def test_invalid_code(self):
        with self.assertRaises(FormatError):
            parse_code("SUBCODE 1\nK 4\n3\n5\n")


class SubvalCommandTests(SimpleTestCase):
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.dir = Path(tmp.name)

    def path(self, name: str) -> str:
        return str(self.dir / name)

    def run_cli(self, *args) -> str:
        out = StringIO()
        call_command("subval", *args, stdout=out)
        return out.getvalue()

    def write(self, name: str, table, k: int) -> str:
        path = self.path(name)
        write_valuation(Valuation(k, tuple(table)), path)
        return path

    def assertExitCode(self, code: int, *args) -> CommandError:
        with self.assertRaises(CommandError) as ctx:
            self.run_cli(*args)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception

    # gen / check

    def test_generated_file_checks_out(self):
        path = self.path("v.txt")
        self.run_cli("gen", "--goods", "4", "--model", "sumuniform:3", "--seed", "3", "--out", path)
        out = self.run_cli("check", path, "--oracle-trials", "20")
        self.assertIn("substitute: yes", out)
        self.assertIn("oracle: pass", out)

    def test_gen_is_deterministic(self):
        a, b = self.path("a.txt"), self.path("b.txt")
        self.run_cli("gen", "--goods", "5", "--seed", "9", "--out", a)
        self.run_cli("gen", "--goods", "5", "--seed", "9", "--out", b)
        self.assertEqual(Path(a).read_bytes(), Path(b).read_bytes())

    def test_gen_batch_with_stats(self):
        stats = self.path("stats.jsonl")
        self.run_cli("gen", "--goods", "3", "--seed", "10", "--count", "3", "--out", self.path("v{seed}.txt"), "--stats", stats)
        for seed in (10, 11, 12):
            self.assertTrue(Path(self.path(f"v{seed}.txt")).exists())
        records = [json.loads(line) for line in Path(stats).read_text().splitlines()]
        self.assertEqual([r["seed"] for r in records], [10, 11, 12])
        self.assertEqual({r["goods"] for r in records}, {3})

    def test_gen_batch_needs_seed_placeholder(self):
        self.assertExitCode(2, "gen", "--goods", "3", "--count", "2", "--out", self.path("v.txt"))

    def test_gen_rejects_unknown_model(self):
        self.assertExitCode(2, "gen", "--goods", "3", "--model", "normal:2", "--out", self.path("v.txt"))

    def test_complementary_pair_fails(self):
        path = self.write("pair.txt", (0, 1, 1, 3), 2)
        out = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command("subval", "check", path, stdout=out)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("delta_{1,2|∅}", out.getvalue())
        self.assertIn("substitute: no", out.getvalue())

    def test_check_json(self):
        path = self.write("lin.txt", (0, 1, 2, 3), 2)
        data = json.loads(self.run_cli("check", path, "--json"))
        self.assertTrue(data["report"]["substitute"])

    def test_malformed_file_is_usage_error(self):
        path = self.path("bad.txt")
        Path(path).write_text("SUBVAL 1\nK 1\n0 1\n1 5\n")
        err = self.assertExitCode(2, "check", path)
        self.assertIn("line 3: v(∅) must be 0", str(err))

    # geometry

    def test_classify_three_goods(self):
        path = self.write("k3.txt", (0, 2, 3, 4, 3, 4, 4, 4), 3)
        self.assertEqual(self.run_cli("classify", path).split(), ["δ12=δ13"])

    def test_classify_four_goods(self):
        path = self.path("k4.txt")
        write_valuation(Valuation.linear((1, 2, 3, 4)), path)
        self.assertIn("assignment: yes", self.run_cli("classify", path))

    def test_classify_other_sizes(self):
        path = self.write("k2.txt", (0, 1, 1, 2), 2)
        self.assertExitCode(2, "classify", path)

    def test_census(self):
        lines = self.run_cli("census4").splitlines()
        self.assertEqual(lines[-1], "75 polyhedrons, dimension 10")
        self.assertEqual(len(lines), 76)

    # constructions

    def test_speckle_then_check(self):
        path, spec = self.path("s.txt"), self.path("s.json")
        self.run_cli("speckle", "--goods", "6", "--seed", "2", "--out", path, "--spec", spec)
        self.assertIn("substitute: yes", self.run_cli("check", path))
        self.assertEqual(json.loads(Path(spec).read_text())["k"], 6)

    def test_speckle_with_code_file(self):
        code = self.path("code.txt")
        Path(code).write_text("SUBCODE 1\nK 4\n3\n12\n")
        path = self.path("s.txt")
        out = self.run_cli("speckle", "--goods", "4", "--code", code, "--out", path)
        self.assertIn("2 codewords", out)

    def test_satiate_and_aggregate(self):
        gen = self.path("g.txt")
        self.run_cli("gen", "--goods", "4", "--seed", "1", "--out", gen)
        sat = self.path("sat.txt")
        self.run_cli("satiate", gen, "--level", "2", "--out", sat)
        self.assertIn("substitute: yes", self.run_cli("check", sat))
        agg = self.path("agg.txt")
        self.run_cli("aggregate", gen, sat, "--out", agg)
        self.assertIn("substitute: yes", self.run_cli("check", agg))

    def test_assign_eval(self):
        weights = self.path("w.txt")
        Path(weights).write_text(W51)
        self.assertEqual(self.run_cli("assign", "eval", weights, "--bundle", "3").strip(), "62 (1,2,△,△,△)")

    def test_assign_table(self):
        weights = self.path("w.txt")
        Path(weights).write_text(W51)
        table = self.path("t.txt")
        self.run_cli("assign", "table", weights, "--out", table)
        self.assertIn("substitute: yes", self.run_cli("check", table))

    # auction / dim

    def test_auction_transcript(self):
        a = self.write("a.txt", (0, 5), 1)
        b = self.write("b.txt", (0, 3), 1)
        transcript = self.path("t.log")
        out = self.run_cli("auction", a, b, "--seed", "4", "--transcript", transcript)
        self.assertIn("buyer 1: 1", out)
        self.assertIn("optimal welfare 5", out)
        lines = Path(transcript).read_text().splitlines()
        self.assertTrue(lines[0].startswith("round 1: bids=[b1:g1@0,b2:g1@0]"))

    def test_dim(self):
        files = [self.write(f"d{n}.txt", (0, n), 1) for n in range(3)]
        self.assertEqual(self.run_cli("dim", *files).strip(), "1")
