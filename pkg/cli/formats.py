"""
Text formats for valuations, weight matrices and codes.

    SUBVAL 1        ASSIGNW 1       SUBCODE 1
    K 2             2 3             K 4
    0 0             1 2 3           6
    1 5             0 1/2 4         9
    2 3
    3 7

Values are integers or p/q in lowest terms, so serializing a parsed file
gives back the same bytes.
"""
import logging
from pathlib import Path

from assignment.matrix import WeightMatrix
from speckled.codes import CodeFamily
from valcore.exceptions import UsageError, ValuationError, ValueOverflowError
from valcore.valuation import Valuation, dense_limit, require_dense
from valcore.values import format_value, parse_value

logger = logging.getLogger(__name__)

VALUATION_HEADER = "SUBVAL 1"
WEIGHTS_HEADER = "ASSIGNW 1"
CODE_HEADER = "SUBCODE 1"


class FormatError(ValuationError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _lines(text: str) -> list[str]:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _header(lines: list[str], header: str) -> None:
    if not lines or lines[0].strip() != header:
        raise FormatError(1, f"expected header '{header}'")


def _int(text: str, line: int, what: str) -> int:
    try:
        value = parse_value(text)
    except ValueOverflowError as exc:
        raise ValueOverflowError(f"line {line}: {exc}") from exc
    except UsageError:
        raise FormatError(line, f"{what} '{text}' is not an integer")
    if not isinstance(value, int):
        raise FormatError(line, f"{what} '{text}' is not an integer")
    return value


def _value(text: str, line: int):
    try:
        return parse_value(text)
    except ValueOverflowError as exc:
        raise ValueOverflowError(f"line {line}: {exc}") from exc
    except UsageError as exc:
        raise FormatError(line, str(exc))


def _goods_line(lines: list[str]) -> int:
    if len(lines) < 2:
        raise FormatError(2, "missing 'K <goods>' line")
    fields = lines[1].split()
    if len(fields) != 2 or fields[0] != "K":
        raise FormatError(2, "expected 'K <goods>'")
    return _int(fields[1], 2, "K")


# ───────────── Valuations ─────────────

def parse_valuation(text: str) -> Valuation:
    lines = _lines(text)
    _header(lines, VALUATION_HEADER)
    k = _goods_line(lines)
    if not 1 <= k <= dense_limit():
        raise FormatError(2, f"K={k} is outside 1..{dense_limit()}")
    body = lines[2:]
    if len(body) != 1 << k:
        missing = len(body) < 1 << k
        raise FormatError(len(lines) + 1 if missing else 3 + (1 << k),
                          f"expected {1 << k} value lines, found {len(body)}")
    table = []
    for mask, raw in enumerate(body):
        n = mask + 3
        fields = raw.split()
        if len(fields) != 2:
            raise FormatError(n, "expected '<mask> <value>'")
        if _int(fields[0], n, "mask") != mask:
            raise FormatError(n, f"expected mask {mask}")
        value = _value(fields[1], n)
        if mask == 0 and value != 0:
            raise FormatError(n, "v(∅) must be 0")
        table.append(value)
    return Valuation(k, tuple(table))


def serialize_valuation(v) -> str:
    v = require_dense(v, "serialize_valuation")
    out = [VALUATION_HEADER, f"K {v.k}"]
    out += [f"{mask} {format_value(x)}" for mask, x in v.items()]
    return "\n".join(out) + "\n"


# ───────────── Weight matrices ─────────────

def parse_weights(text: str) -> WeightMatrix:
    lines = _lines(text)
    _header(lines, WEIGHTS_HEADER)
    if len(lines) < 2 or len(lines[1].split()) != 2:
        raise FormatError(2, "expected '<rows> <goods>'")
    n, k = (_int(x, 2, "size") for x in lines[1].split())
    if n < 1 or k < 1:
        raise FormatError(2, "the matrix needs at least one row and one good")
    body = lines[2:]
    if len(body) != n:
        raise FormatError(3 + min(len(body), n), f"expected {n} rows, found {len(body)}")
    rows = []
    for i, raw in enumerate(body):
        fields = raw.split()
        if len(fields) != k:
            raise FormatError(i + 3, f"expected {k} entries, found {len(fields)}")
        row = [_value(x, i + 3) for x in fields]
        if any(x < 0 for x in row):
            raise FormatError(i + 3, "weights must be nonnegative")
        rows.append(row)
    return WeightMatrix.of(rows)


def serialize_weights(matrix: WeightMatrix) -> str:
    out = [WEIGHTS_HEADER, f"{matrix.n} {matrix.k}"]
    out += [" ".join(format_value(x) for x in row) for row in matrix.rows]
    return "\n".join(out) + "\n"


# ───────────── Codes ─────────────

def parse_code(text: str, validate: bool = True) -> CodeFamily:
    lines = _lines(text)
    _header(lines, CODE_HEADER)
    k = _goods_line(lines)
    masks = [_int(raw.strip(), n, "codeword") for n, raw in enumerate(lines[2:], start=3)]
    try:
        return CodeFamily.explicit(k, masks, validate=validate)
    except UsageError as exc:
        raise FormatError(2, str(exc))


def serialize_code(code: CodeFamily) -> str:
    out = [CODE_HEADER, f"K {code.k}"]
    out += [str(m) for m in code.members]
    return "\n".join(out) + "\n"


# ───────────── Files ─────────────

def read_valuation(path) -> Valuation:
    return parse_valuation(Path(path).read_text(encoding="utf-8"))


def write_valuation(v, path) -> None:
    Path(path).write_text(serialize_valuation(v), encoding="utf-8", newline="\n")
    logger.info(f"wrote K={v.k} valuation to {path}")


def read_weights(path) -> WeightMatrix:
    return parse_weights(Path(path).read_text(encoding="utf-8"))


def read_code(path) -> CodeFamily:
    return parse_code(Path(path).read_text(encoding="utf-8"))
