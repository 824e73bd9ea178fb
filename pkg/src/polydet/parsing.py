"""Text documents for polynomial matrices, plus canonical printing.

Matrix document, one matrix per file:

    vars x y
    1 + 2*x + 3*x*y ; y^2
    -4 ; x^2 - 1

The first meaningful line declares the variable order; every following
line is one matrix row with entries separated by ';'. Expressions are
sums of terms over '+' and '-'; a term multiplies integer literals and
powered variables with '*'. Powers are written explicitly ('x^2'), so
a repeated variable like 'x*x' is a syntax error. Blank lines and '#'
comments are ignored.

Printing is canonical: terms in graded lexicographic order (total
degree first, then exponents against the declared variable order),
highest first. parse(print(poly)) is the identity.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .tensor import PolyMatrix, normalize_terms, poly_matrix

_TOKEN = re.compile(r"(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^;])|(?P<bad>\S)")


def _tokenize(text: str, line: int, column_offset: int = 0):
    tokens = []
    for match in _TOKEN.finditer(text):
        col = match.start() + 1 + column_offset
        if match.lastgroup == "bad":
            raise ParseError(f"unexpected character {match.group()!r}", line, col)
        tokens.append((match.lastgroup, match.group(), col))
    return tokens


class _PolyParser:
    """Recursive descent over one expression's token list."""

    def __init__(self, tokens, variables, line):
        self.tokens = tokens
        self.variables = variables
        self.line = line
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", self.line, self._end_col())
        self.pos += 1
        return tok

    def _end_col(self):
        return self.tokens[-1][2] + len(self.tokens[-1][1]) if self.tokens else 1

    def parse(self) -> dict:
        terms = []
        sign = 1
        tok = self.peek()
        if tok is None:
            raise ParseError("empty polynomial", self.line, 1)
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        terms.append(self._term(sign))
        while (tok := self.peek()) is not None:
            if tok[0] != "op" or tok[1] not in "+-":
                raise ParseError(f"expected '+' or '-', got {tok[1]!r}", self.line, tok[2])
            self.take()
            terms.append(self._term(-1 if tok[1] == "-" else 1))
        return normalize_terms(terms)

    def _term(self, sign):
        coeff = sign
        exps = [0] * len(self.variables)
        used = set()
        while True:
            tok = self.take()
            if tok[0] == "int":
                coeff *= int(tok[1])
            elif tok[0] == "name":
                if tok[1] not in self.variables:
                    raise ParseError(f"undeclared variable {tok[1]!r}", self.line, tok[2])
                if tok[1] in used:
                    raise ParseError(
                        f"repeated variable {tok[1]!r} in term; write {tok[1]}^k",
                        self.line,
                        tok[2],
                    )
                used.add(tok[1])
                power = 1
                nxt = self.peek()
                if nxt is not None and nxt[0] == "op" and nxt[1] == "^":
                    self.take()
                    ptok = self.take()
                    if ptok[0] != "int":
                        raise ParseError("exponent must be an integer", self.line, ptok[2])
                    power = int(ptok[1])
                exps[self.variables.index(tok[1])] = power
            else:
                raise ParseError(f"unexpected {tok[1]!r} in term", self.line, tok[2])
            nxt = self.peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "*":
                self.take()
                continue
            return (tuple(exps), coeff)


def parse_polynomial(text: str, variables, line: int = 1, column_offset: int = 0) -> dict:
    """Parse one expression into a normalized term mapping."""
    variables = tuple(variables)
    return _PolyParser(_tokenize(text, line, column_offset), variables, line).parse()


def _meaningful_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield number, line


def _parse_vars_line(number: int, line: str) -> tuple[str, ...]:
    tokens = _tokenize(line, number)
    if not tokens or tokens[0][1] != "vars":
        raise ParseError("document must begin with a 'vars' declaration", number, 1)
    names = []
    for kind, value, col in tokens[1:]:
        if kind != "name":
            raise ParseError(f"bad variable name {value!r}", number, col)
        if value in names:
            raise ParseError(f"duplicate variable {value!r}", number, col)
        names.append(value)
    if not names:
        raise ParseError("at least one variable must be declared", number, 1)
    return tuple(names)


def parse_matrix_document(text: str) -> PolyMatrix:
    """Parse a full matrix document; raises ParseError with line/column."""
    lines = list(_meaningful_lines(text))
    if not lines:
        raise ParseError("empty document", 1, 1)
    variables = _parse_vars_line(*lines[0])
    rows = []
    row_lines = lines[1:]
    if not row_lines:
        raise ParseError("no matrix rows follow the 'vars' line", lines[0][0], 1)
    for number, line in row_lines:
        cells = line.split(";")
        row = []
        offset = 0
        for cell in cells:
            if not cell.strip():
                raise ParseError("empty matrix entry", number, offset + 1)
            row.append(parse_polynomial(cell, variables, line=number, column_offset=offset))
            offset += len(cell) + 1
        rows.append(row)
    r = len(rows)
    for number_line, row in zip(row_lines, rows):
        if len(row) != r:
            raise ParseError(
                f"matrix is not square: {r} rows but a row of {len(row)} entries",
                number_line[0],
                1,
            )
    return poly_matrix(rows, variables)


def parse_pair_document(text: str) -> tuple[tuple[str, ...], dict, dict]:
    """Parse a two-polynomial document (for resultants): vars line, f, g."""
    lines = list(_meaningful_lines(text))
    if not lines:
        raise ParseError("empty document", 1, 1)
    variables = _parse_vars_line(*lines[0])
    body = lines[1:]
    if len(body) != 2:
        raise ParseError(
            f"expected exactly two polynomial lines, got {len(body)}",
            lines[0][0],
            1,
        )
    f = parse_polynomial(body[0][1], variables, line=body[0][0])
    g = parse_polynomial(body[1][1], variables, line=body[1][0])
    return variables, f, g


# -- canonical printing -------------------------------------------------------


def _term_text(exps, coeff, variables) -> str:
    parts = []
    for var, e in zip(variables, exps):
        if e == 1:
            parts.append(var)
        elif e > 1:
            parts.append(f"{var}^{e}")
    if not parts:
        return str(abs(coeff))
    body = "*".join(parts)
    mag = abs(coeff)
    return body if mag == 1 else f"{mag}*{body}"


def format_polynomial(terms, variables) -> str:
    """Canonical text: graded lexicographic order, highest terms first."""
    variables = tuple(variables)
    norm = normalize_terms(terms)
    if not norm:
        return "0"
    ordered = sorted(norm.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)
    pieces = []
    for index, (exps, coeff) in enumerate(ordered):
        text = _term_text(exps, coeff, variables)
        if index == 0:
            pieces.append(f"-{text}" if coeff < 0 else text)
        else:
            pieces.append(f"- {text}" if coeff < 0 else f"+ {text}")
    return " ".join(pieces)


def format_matrix_document(m: PolyMatrix) -> str:
    """Serialize a PolyMatrix back to document text (parse round-trips)."""
    lines = ["vars " + " ".join(m.variables)]
    for i in range(m.r):
        cells = [
            format_polynomial(m.entry(i, j).terms(), m.variables) for j in range(m.r)
        ]
        lines.append(" ; ".join(cells))
    return "\n".join(lines) + "\n"
