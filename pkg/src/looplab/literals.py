"""Compact text grammar for rings, series and matrices.

Ring descriptors look like ``Q[e]/(e^3)`` or ``Fp(7)[e,d]/(e^2,d^2,e*d)``,
series literals like ``t^-1 + 1 + 3*e*t^2 + O(t^32)``, quadratic-extension
elements as ``even | odd`` pairs, and matrices as row-major bracket lists of
element strings.  Formatting is canonical, so parse/format round-trips are
bit-exact; the certificate file format is built on these grammars.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import LoopLabError, ParseError
from .rings import (
    AlgElement,
    ArtinLocalAlgebra,
    BaseField,
    LaurentSeries,
    QuadExtElement,
)

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_RING_RE = re.compile(r"^(Q|Fp\((\d+)\))(\[([^\]]*)\])?(/\(([^)]*)\))?$")
_OH_RE = re.compile(r"^O\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(-?\d+))?\s*\)$")
_DIAGRAM_RE = re.compile(r"^([A-G])(\d+):([a-z][a-z0-9]*)$")


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------


def format_ring(alg):
    field = "Q" if alg.field.char == 0 else f"Fp({alg.field.char})"
    if not alg.gen_names:
        return field
    gens = f"[{','.join(alg.gen_names)}]"
    rels = ",".join(alg.format_monomial(r) for r in alg.relations)
    return f"{field}{gens}/({rels})"


def parse_ring(text):
    s = text.strip()
    m = _RING_RE.match(s)
    if not m:
        raise ParseError(text, 0, "malformed ring descriptor")
    char = int(m.group(2)) if m.group(2) else 0
    names = []
    if m.group(4) is not None:
        names = [n.strip() for n in m.group(4).split(",") if n.strip()]
        for n in names:
            if not _NAME_RE.match(n):
                raise ParseError(text, s.index(n), f"bad generator name '{n}'")
    rels = []
    if m.group(6) is not None:
        for chunk in m.group(6).split(","):
            chunk = chunk.strip()
            if chunk:
                rels.append(_parse_monomial(chunk, names, text))
    try:
        field = BaseField(char)
        return ArtinLocalAlgebra(field, names, rels)
    except LoopLabError as e:
        raise ParseError(text, 0, str(e)) from e


def _parse_monomial(chunk, names, full_text):
    mono = [0] * len(names)
    for part in chunk.split("*"):
        part = part.strip()
        name, _, exp = part.partition("^")
        if name not in names:
            raise ParseError(full_text, full_text.index(part), f"unknown generator '{name}'")
        try:
            e = int(exp) if exp else 1
        except ValueError:
            raise ParseError(full_text, full_text.index(part), f"bad exponent in '{part}'") from None
        if e < 1:
            raise ParseError(full_text, full_text.index(part), "relation exponents must be positive")
        mono[names.index(name)] += e
    return tuple(mono)


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


def _format_term(coef, mono, var, exp):
    parts = []
    if coef != "1" or (not mono and exp == 0):
        parts.append(coef)
    if mono:
        parts.append(mono)
    if exp == 1:
        parts.append(var)
    elif exp != 0:
        parts.append(f"{var}^{exp}")
    return "*".join(parts)


def format_alg_element(x):
    alg = x.alg
    chunks = []
    for slot, v in enumerate(x.vec):
        if not v:
            continue
        sign = "+"
        if alg.field.char == 0 and v < 0:
            sign, v = "-", -v
        term = _format_term(alg.field.format(v), alg.format_monomial(alg.basis[slot]), "", 0)
        chunks.append((sign, term))
    return _join_signed(chunks) or "0"


def _join_signed(chunks):
    out = []
    for i, (sign, term) in enumerate(chunks):
        if i == 0:
            out.append(f"-{term}" if sign == "-" else term)
        else:
            out.append(f" {sign} {term}")
    return "".join(out)


def format_series(f):
    alg, var = f.alg, f.var
    chunks = []
    for i, c in enumerate(f.coeffs):
        k = f.low + i
        for slot, v in enumerate(c.vec):
            if not v:
                continue
            sign = "+"
            if alg.field.char == 0 and v < 0:
                sign, v = "-", -v
            mono = alg.format_monomial(alg.basis[slot])
            chunks.append((sign, _format_term(alg.field.format(v), mono, var, k)))
    if not f.exact:
        chunks.append(("+", f"O({var}^{f.prec})"))
    return _join_signed(chunks) or "0"


def _split_terms(text):
    """Split a series literal on top-level + and -; a '-' directly after
    '^', '*', '/' or '(' binds to the following number instead."""
    terms = []
    buf = []
    sign = "+"
    start = 0
    prev = ""
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        if ch in "+-" and depth == 0 and prev not in "^*/(" and not (ch == "-" and prev == ""):
            if "".join(buf).strip():
                terms.append((sign, "".join(buf).strip(), start))
            buf = []
            sign = ch
            start = i + 1
            prev = ""
            continue
        if ch == "-" and prev == "" and not buf:
            # leading minus
            sign = "-"
            start = i + 1
            continue
        buf.append(ch)
        if not ch.isspace():
            prev = ch
    if "".join(buf).strip():
        terms.append((sign, "".join(buf).strip(), start))
    return terms


def parse_series(text, alg, var):
    """Parse a series literal over the given ring and variable."""
    s = text.strip()
    if s == "0":
        return LaurentSeries.zero(alg, var)
    by_exp = {}
    prec = None
    for sign, chunk, pos in _split_terms(s):
        m = _OH_RE.match(chunk)
        if m:
            if sign == "-":
                raise ParseError(text, pos, "a precision marker cannot be negated")
            if m.group(1) != var:
                raise ParseError(text, pos, f"precision marker uses '{m.group(1)}', expected '{var}'")
            if prec is not None:
                raise ParseError(text, pos, "multiple precision markers")
            prec = int(m.group(2)) if m.group(2) else 1
            continue
        coef, mono, exp = _parse_term(chunk, alg, var, text, pos)
        if sign == "-":
            coef = -coef
        slot_map = by_exp.setdefault(exp, {})
        slot_map[mono] = slot_map.get(mono, 0) + coef
    terms = {}
    for exp, slot_map in by_exp.items():
        terms[exp] = alg.element(slot_map)
    if prec is not None and any(exp >= prec for exp in terms):
        raise ParseError(text, 0, "coefficient at an exponent >= the stated precision")
    return LaurentSeries.from_terms(alg, var, terms, prec=prec)


def _parse_term(chunk, alg, var, full_text, pos):
    coef = Fraction(1)
    mono = [0] * len(alg.gen_names)
    exp = 0
    for atom in chunk.split("*"):
        atom = atom.strip()
        if not atom:
            raise ParseError(full_text, pos, "empty factor in term")
        if re.match(r"^-?\d+(/\d+)?$", atom):
            coef *= Fraction(atom)
            continue
        name, caret, e_txt = atom.partition("^")
        name = name.strip()
        if not _NAME_RE.match(name):
            raise ParseError(full_text, pos + chunk.find(atom), f"bad factor '{atom}'")
        try:
            e = int(e_txt) if caret else 1
        except ValueError:
            raise ParseError(full_text, pos + chunk.find(atom), f"bad exponent in '{atom}'") from None
        if name == var:
            exp += e
        elif name in alg.gen_names:
            if e < 0:
                raise ParseError(full_text, pos + chunk.find(atom), "nilpotent generators cannot have negative exponents")
            mono[alg.gen_names.index(name)] += e
        else:
            raise ParseError(full_text, pos + chunk.find(atom), f"unknown name '{name}'")
    return coef, tuple(mono), exp


# ---------------------------------------------------------------------------
# quadratic-extension elements and matrices
# ---------------------------------------------------------------------------


def format_quad(x):
    return f"{format_series(x.even)} | {format_series(x.odd)}"


def parse_quad(text, alg, var):
    parts = text.split("|")
    if len(parts) == 1:
        even, odd = parts[0], "0"
    elif len(parts) == 2:
        even, odd = parts
    else:
        raise ParseError(text, 0, "a quadratic-extension element has at most one '|'")
    return QuadExtElement(parse_series(even, alg, var), parse_series(odd, alg, var))


def format_entry(x):
    if isinstance(x, QuadExtElement):
        return format_quad(x)
    return format_series(x)


def parse_entry(text, alg, var, quad):
    if quad:
        return parse_quad(text, alg, var)
    if "|" in text:
        raise ParseError(text, text.index("|"), "'|' is only valid for quadratic-extension entries")
    return parse_series(text, alg, var)


def parse_matrix_strings(text):
    """Parse a matrix literal ``[[a,b],[c,d]]`` into row-major cell strings."""
    s = text.strip()
    if not s.startswith("[") or not s.endswith("]"):
        raise ParseError(text, 0, "matrix literal must be bracketed")
    inner = s[1:-1]
    rows = []
    depth = 0
    start = None
    for i, ch in enumerate(inner):
        if ch == "[":
            if depth == 0:
                start = i + 1
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ParseError(text, i + 1, "unbalanced ']'")
            if depth == 0:
                rows.append(inner[start:i])
        elif depth == 0 and ch not in ", \t\n":
            raise ParseError(text, i + 1, f"unexpected character '{ch}' between rows")
    if depth != 0:
        raise ParseError(text, len(text) - 1, "unbalanced '['")
    if not rows:
        raise ParseError(text, 0, "empty matrix literal")
    cells = [[c.strip() for c in row.split(",")] for row in rows]
    width = len(cells[0])
    if any(len(r) != width for r in cells) or len(cells) != width:
        raise ParseError(text, 0, "matrix must be square")
    return cells


def format_matrix(entries):
    rows = ", ".join("[" + ", ".join(format_entry(x) for x in row) + "]" for row in entries)
    return f"[{rows}]"


# ---------------------------------------------------------------------------
# diagrams
# ---------------------------------------------------------------------------


def parse_diagram(text):
    """Split a diagram string like ``A4:flip`` into (type, rank, automorphism)."""
    m = _DIAGRAM_RE.match(text.strip())
    if not m:
        raise ParseError(text, 0, "expected TYPE RANK ':' AUTOMORPHISM, e.g. A4:flip")
    return m.group(1), int(m.group(2)), m.group(3)
