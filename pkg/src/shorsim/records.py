"""Line-oriented structured text format.

A document looks like::

    shorsim-records 1
    kind distribution
    meta N 15
    meta path closed-form
    columns c y probability
    row 0 1 6.2500000000000000e-02
    end

Integers are written exactly and floats with 17 significant digits, so a
document round-trips without loss and diffs cleanly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

FORMAT_NAME = "shorsim-records"
FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


def format_value(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            return repr(value)
        return f"{value:.16e}"
    text = str(value)
    if not text or any(ch.isspace() for ch in text):
        raise FormatError(f"token {text!r} must be non-empty and contain no whitespace")
    return text


def parse_value(token: str) -> Any:
    if token == "-":
        return None
    if token in ("true", "false"):
        return token == "true"
    try:
        return int(token)
    except ValueError:
        pass
    if "/" in token:
        num, _, den = token.partition("/")
        try:
            return Fraction(int(num), int(den))
        except ValueError:
            pass
    try:
        return float(token)
    except ValueError:
        return token


@dataclass
class Document:
    kind: str
    meta: dict[str, Any] = field(default_factory=dict)
    columns: tuple[str, ...] = ()
    rows: list[tuple[Any, ...]] = field(default_factory=list)

    def add_row(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise FormatError(f"row has {len(values)} fields, expected {len(self.columns)}")
        self.rows.append(tuple(values))

    def dumps(self) -> str:
        lines = [f"{FORMAT_NAME} {FORMAT_VERSION}", f"kind {format_value(self.kind)}"]
        for key, value in self.meta.items():
            lines.append(f"meta {format_value(key)} {format_value(value)}")
        lines.append("columns " + " ".join(format_value(c) for c in self.columns))
        for row in self.rows:
            lines.append("row " + " ".join(format_value(v) for v in row))
        lines.append("end")
        return "\n".join(lines) + "\n"


def dumps_many(documents: Iterable[Document]) -> str:
    return "".join(doc.dumps() for doc in documents)


def loads_many(text: str) -> list[Document]:
    docs: list[Document] = []
    current: Document | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == FORMAT_NAME:
            if current is not None:
                raise FormatError(f"line {lineno}: header inside an open document")
            if int(rest) != FORMAT_VERSION:
                raise FormatError(f"unsupported version {rest}")
            current = Document(kind="")
            continue
        if current is None:
            raise FormatError(f"line {lineno}: content outside a document")
        if head == "kind":
            current.kind = rest
        elif head == "meta":
            key, _, value = rest.partition(" ")
            current.meta[key] = parse_value(value)
        elif head == "columns":
            current.columns = tuple(rest.split())
        elif head == "row":
            values = tuple(parse_value(t) for t in rest.split())
            current.add_row(*values)
        elif head == "end":
            docs.append(current)
            current = None
        else:
            raise FormatError(f"line {lineno}: unknown record type {head!r}")
    if current is not None:
        raise FormatError("document not terminated by 'end'")
    return docs


def loads(text: str) -> Document:
    docs = loads_many(text)
    if len(docs) != 1:
        raise FormatError(f"expected one document, found {len(docs)}")
    return docs[0]


def table(kind: str, columns: Sequence[str], rows: Iterable[Sequence[Any]], **meta: Any) -> Document:
    doc = Document(kind=kind, meta=dict(meta), columns=tuple(columns))
    for row in rows:
        doc.add_row(*row)
    return doc
