"""JSON documents for tensors and matrices.

Tensor: ``{"shape": [I1, ..., IN], "entries": ["p/q" | "p", ...]}``.
Matrix: ``{"rows": R, "cols": C, "entries": [...]}``.
Entries are listed first-index-fastest (column by column for matrices).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from math import prod

from .tensor import Matrix, Tensor

_RATIONAL = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?")


class ParseError(ValueError):
    """Malformed tensor or matrix document."""


def rational_to_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ParseError(f"entries must be strings \"p/q\" or integers, got {value!r}")
    m = _RATIONAL.fullmatch(value)
    if not m:
        raise ParseError(f"not a rational: {value!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {value!r}")
    return Fraction(int(m.group(1)), den)


def _positive_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ParseError(f"{what} must be a positive integer, got {value!r}")
    return value


def _entries(doc: dict, count: int) -> tuple[Fraction, ...]:
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise ParseError("\"entries\" must be a list")
    if len(entries) != count:
        raise ParseError(f"expected {count} entries, got {len(entries)}")
    return tuple(parse_rational(e) for e in entries)


def tensor_to_dict(X: Tensor) -> dict:
    return {"shape": list(X.shape), "entries": [rational_to_str(e) for e in X.entries]}


def tensor_from_dict(doc) -> Tensor:
    if not isinstance(doc, dict):
        raise ParseError("tensor document must be a JSON object")
    shape = doc.get("shape")
    if not isinstance(shape, list) or not shape:
        raise ParseError("\"shape\" must be a nonempty list")
    shape = [_positive_int(d, "every dimension") for d in shape]
    return Tensor(tuple(shape), _entries(doc, prod(shape)))


def matrix_to_dict(A: Matrix) -> dict:
    return {"rows": A.rows, "cols": A.cols, "entries": [rational_to_str(e) for e in A.entries]}


def matrix_from_dict(doc) -> Matrix:
    if not isinstance(doc, dict):
        raise ParseError("matrix document must be a JSON object")
    rows = _positive_int(doc.get("rows"), "\"rows\"")
    cols = _positive_int(doc.get("cols"), "\"cols\"")
    return Matrix(rows, cols, _entries(doc, rows * cols))


def loads_tensor(text: str) -> Tensor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return tensor_from_dict(doc)


def loads_matrix(text: str) -> Matrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return matrix_from_dict(doc)


def dumps(doc) -> str:
    return json.dumps(doc, separators=(",", ":"))
