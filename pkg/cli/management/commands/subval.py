import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from assignment.matching import assignment_valuation, eval_assignment
from auction.ascending import run_auction
from auction.welfare import MAX_BUYERS, MAX_GOODS, optimal_welfare
from checks.oracle import ORACLE_MAX_GOODS, oracle_definition
from checks.properties import check_valuation
from checks.serializers import CheckReportSerializer, OracleVerdictSerializer
from cli.formats import FormatError, read_code, read_valuation, read_weights, write_valuation
from generator.algorithm import generate
from generator.batch import generate_batch
from generator.sampling import GenConfig
from generator.serializers import GenConfigSerializer, GenStatsSerializer
from geometry.k3 import classify_k3
from geometry.k4 import classify_k4, census_k4, is_assignment_k4
from geometry.sampling import descriptor_dimension
from speckled.codes import graham_sloane_code
from speckled.construct import build_speckled, random_spec
from speckled.dimension import affine_dimension
from speckled.serializers import SpeckleSpecSerializer
from valcore.exceptions import (
    NonIntegerError,
    SizeLimitError,
    UsageError,
    ValuationError,
    ValueOverflowError,
)
from valcore.operators import aggregate, satiate
from valcore.values import format_value

logger = logging.getLogger(__name__)

USAGE_ERRORS = (FormatError, UsageError, SizeLimitError, ValueOverflowError, NonIntegerError, serializers.ValidationError, OSError)


class Command(BaseCommand):
    help = "Generate, check, construct and classify substitute valuations."

    def add_arguments(self, parser):
        sub = parser.add_subparsers(dest="action", required=True)

        gen = sub.add_parser("gen", help="generate substitute valuations")
        gen.add_argument("--goods", type=int, required=True)
        gen.add_argument("--model", default="uniform:5", help="uniform:m or sumuniform:m")
        gen.add_argument("--seed", type=int, default=0)
        gen.add_argument("--mu0", type=int, nargs="*", default=[])
        gen.add_argument("--out", required=True, help="output file; must contain {seed} when --count > 1")
        gen.add_argument("--stats", help="append one JSON line of statistics per valuation")
        gen.add_argument("--count", type=int, default=1)
        gen.add_argument("--jobs", type=int, default=1)

        check = sub.add_parser("check", help="check the substitute characterization")
        check.add_argument("file")
        check.add_argument("--oracle-trials", type=int, default=0)
        check.add_argument("--seed", type=int, default=0)
        check.add_argument("--json", action="store_true")

        classify = sub.add_parser("classify", help="polyhedron memberships for K=3 or K=4")
        classify.add_argument("file")

        census = sub.add_parser("census4", help="list the maximal polyhedra for K=4")
        census.add_argument("--constraints", action="store_true", help="print every constraint")

        speckle = sub.add_parser("speckle", help="build a speckled valuation")
        speckle.add_argument("--goods", type=int, required=True)
        speckle.add_argument("--seed", type=int, default=0)
        speckle.add_argument("--code", help="code file; defaults to the checksum code")
        speckle.add_argument("--out", required=True)
        speckle.add_argument("--spec", help="write the parameters as JSON")

        sat = sub.add_parser("satiate", help="best sub-bundle of bounded size")
        sat.add_argument("file")
        sat.add_argument("--level", type=int, required=True)
        sat.add_argument("--out", required=True)

        agg = sub.add_parser("aggregate", help="optimal split between two valuations")
        agg.add_argument("first")
        agg.add_argument("second")
        agg.add_argument("--out", required=True)

        assign = sub.add_parser("assign", help="assignment valuations from a weight file")
        assign_sub = assign.add_subparsers(dest="assign_action", required=True)
        ev = assign_sub.add_parser("eval")
        ev.add_argument("weights")
        ev.add_argument("--bundle", type=int, required=True, help="bundle as a decimal mask")
        table = assign_sub.add_parser("table")
        table.add_argument("weights")
        table.add_argument("--out", required=True)

        auction = sub.add_parser("auction", help="run an ascending auction")
        auction.add_argument("files", nargs="+")
        auction.add_argument("--seed", type=int, default=0)
        auction.add_argument("--transcript")

        dim = sub.add_parser("dim", help="affine dimension of valuations")
        dim.add_argument("files", nargs="+")

    def handle(self, *args, **options):
        action = options["action"]
        try:
            getattr(self, f"do_{action}")(options)
        except CommandError:
            raise
        except USAGE_ERRORS as exc:
            raise CommandError(f"{action}: {exc}", returncode=2)
        except ValuationError as exc:
            raise CommandError(f"{action}: {exc}", returncode=1)

    def line(self, text: str = "") -> None:
        self.stdout.write(text)

    # ───────────── gen ─────────────

    def do_gen(self, options):
        count, out = options["count"], options["out"]
        if count < 1 or options["jobs"] < 1:
            raise UsageError("--count and --jobs must be positive")
        if count > 1 and "{seed}" not in out:
            raise UsageError("--out must contain {seed} when --count > 1")
        data = {"goods": options["goods"], "model": options["model"], "seed": options["seed"], "mu0": options["mu0"]}
        cfg_serializer = GenConfigSerializer(data=data)
        cfg_serializer.is_valid(raise_exception=True)
        base = cfg_serializer.save()
        configs = [
            GenConfig(k=base.k, model=base.model, m=base.m, seed=base.seed + n, mu0=base.mu0)
            for n in range(count)
        ]
        if count == 1:
            v, _, stats = generate(configs[0])
            results = [(configs[0], v, stats)]
        else:
            results = generate_batch(configs, jobs=options["jobs"], progress=options["verbosity"] > 1)

        stat_lines = []
        for cfg, v, stats in results:
            path = out.replace("{seed}", str(cfg.seed))
            write_valuation(v, path)
            record = {**stats.as_dict(), "seed": cfg.seed, "goods": cfg.k, "model": cfg.label}
            stat_lines.append(json.dumps(GenStatsSerializer(record).data, sort_keys=True))
            self.line(f"wrote {path}")
        if options["stats"]:
            with open(options["stats"], "a", encoding="utf-8", newline="\n") as fh:
                fh.writelines(f"{x}\n" for x in stat_lines)

    # ───────────── check ─────────────

    def do_check(self, options):
        v = read_valuation(options["file"])
        report = check_valuation(v)
        verdict = None
        if options["oracle_trials"]:
            if v.k > ORACLE_MAX_GOODS:
                raise SizeLimitError(f"the definition oracle is limited to K <= {ORACLE_MAX_GOODS}")
            verdict = oracle_definition(v, trials=options["oracle_trials"], seed=options["seed"])

        if options["json"]:
            data = {"report": CheckReportSerializer(report).data}
            if verdict is not None:
                data["oracle"] = OracleVerdictSerializer(verdict).data
            self.line(json.dumps(data, sort_keys=True))
        else:
            self.line(f"K={v.k} monotone={report.monotone} submodular={report.submodular} s3={report.s3}")
            for violation in report.violations[:10]:
                self.line(f"  {violation.describe(v.k)}")
            if report.violation_count > 10:
                self.line(f"  ... {report.violation_count - 10} more")
            if verdict is not None:
                self.line(f"oracle: {'pass' if verdict else 'fail'} after {verdict.trials} trials")
            self.line(f"substitute: {'yes' if report.substitute else 'no'}")

        logger.info(f"checked {options['file']}: substitute={report.substitute}, {report.violation_count} violations")
        if not report.substitute:
            raise CommandError("not a substitute valuation", returncode=1)
        if verdict is not None and not verdict:
            raise CommandError("the definition oracle found a counterexample", returncode=1)

    # ───────────── geometry ─────────────

    def do_classify(self, options):
        v = read_valuation(options["file"])
        if v.k == 3:
            for name in sorted(classify_k3(v)):
                self.line(name)
        elif v.k == 4:
            for d in classify_k4(v):
                self.line(d.name)
            self.line(f"assignment: {is_assignment_k4(v)}")
        else:
            raise UsageError(f"classify handles K=3 and K=4, got K={v.k}")

    def do_census4(self, options):
        census = census_k4()
        dims = set()
        ranks = set()
        for d in census:
            dim = descriptor_dimension(d)
            dims.add(dim)
            ranks.add(d.equality_rank())
            self.line(d.describe() if options["constraints"] else f"{d.name}: dimension {dim}")
        if len(dims) != 1 or len(ranks) != 1:
            raise CommandError(f"inconsistent dimensions {sorted(dims)} or ranks {sorted(ranks)}", returncode=1)
        self.line(f"{len(census)} polyhedrons, dimension {dims.pop()}")

    # ───────────── constructions ─────────────

    def do_speckle(self, options):
        k = options["goods"]
        code = read_code(options["code"]) if options["code"] else graham_sloane_code(k)
        if code.k != k:
            raise UsageError(f"code file is for K={code.k}, asked for K={k}")
        spec = random_spec(k, code, options["seed"])
        v = build_speckled(spec)
        write_valuation(v, options["out"])
        if options["spec"]:
            data = SpeckleSpecSerializer(spec).data
            Path(options["spec"]).write_text(json.dumps(data, sort_keys=True) + "\n", encoding="utf-8", newline="\n")
        self.line(f"wrote {options['out']} ({spec.parameter_count()} parameters, {len(code)} codewords)")

    def do_satiate(self, options):
        v = satiate(read_valuation(options["file"]), options["level"])
        write_valuation(v, options["out"])
        self.line(f"wrote {options['out']}")

    def do_aggregate(self, options):
        v = aggregate(read_valuation(options["first"]), read_valuation(options["second"]))
        write_valuation(v, options["out"])
        self.line(f"wrote {options['out']}")

    def do_assign(self, options):
        matrix = read_weights(options["weights"])
        if options["assign_action"] == "eval":
            value, sigma = eval_assignment(matrix, options["bundle"])
            self.line(f"{format_value(value)} {sigma}")
        else:
            write_valuation(assignment_valuation(matrix), options["out"])
            self.line(f"wrote {options['out']}")

    # ───────────── auction ─────────────

    def do_auction(self, options):
        vs = [read_valuation(path) for path in options["files"]]
        result = run_auction(vs, seed=options["seed"])
        if options["transcript"]:
            text = "".join(f"{x}\n" for x in result.transcript)
            Path(options["transcript"]).write_text(text, encoding="utf-8", newline="\n")
        self.line(result.describe(vs[0].k))
        if vs[0].k <= MAX_GOODS and len(vs) <= MAX_BUYERS:
            best, _ = optimal_welfare(vs)
            self.line(f"optimal welfare {format_value(best)}")

    def do_dim(self, options):
        self.line(str(affine_dimension(read_valuation(path) for path in options["files"])))
