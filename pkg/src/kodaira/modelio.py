"""Text stanzas for Weierstrass models.

    # comment
    p=3
    fieldmod=x^2+1        optional, defines F_p[g]/(fieldmod)
    a4=t
    a6=t

Keys may appear in any order; missing coefficients are zero.
"""

from __future__ import annotations

from .errors import (DomainError, MalformedExpressionError, NonPrimeError, ParseError,
                     SingularModelError, UnknownKeyError)
from .expressions import FieldConstantAlgebra, parse_expression, parse_rational
from .fields import ExtensionField, PrimeField, is_prime
from .weierstrass import KEYS, WeierstrassModel

_ALLOWED = ("p", "fieldmod") + KEYS


def parse_field(p: int, fieldmod: str | None, line: int | None = None, column: int = 0):
    base = PrimeField(p)
    if fieldmod is None:
        return base
    poly = parse_expression(fieldmod, FieldConstantAlgebra(base, "x"), line, column)
    if poly.degree < 2:
        raise MalformedExpressionError("fieldmod must have degree >= 2", line, column + 1, fieldmod)
    if not poly.monic().is_irreducible():
        raise MalformedExpressionError("fieldmod is not irreducible", line, column + 1, fieldmod)
    return ExtensionField(base, poly.monic().coeffs, name="g", check=False)


def parse_model(text: str) -> WeierstrassModel:
    entries: dict[str, tuple[str, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected key=value", lineno, col, line.strip())
        key_part, value = line.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        if key not in _ALLOWED:
            raise UnknownKeyError(f"unknown key {key!r}", lineno, key_col, key)
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", lineno, key_col, key)
        entries[key] = (value, lineno, len(key_part) + 1)

    if "p" not in entries:
        raise ParseError("missing p=<prime>", None, None, None)
    pval, pline, pcol = entries["p"]
    ptext = pval.strip()
    if not ptext.isdigit():
        raise MalformedExpressionError("p must be an integer", pline, pcol + 1, ptext)
    p = int(ptext)
    if not is_prime(p):
        raise NonPrimeError(f"p = {p} is not prime", pline, pcol + 1, ptext)
    try:
        if "fieldmod" in entries:
            fval, fline, fcol = entries["fieldmod"]
            field = parse_field(p, fval, fline, fcol)
            fieldmod = fval.strip()
        else:
            field = parse_field(p, None)
            fieldmod = None
    except DomainError as exc:
        if isinstance(exc, ParseError):
            raise
        raise NonPrimeError(str(exc), pline, pcol + 1, ptext) from exc

    coeffs = {}
    for key in KEYS:
        if key in entries:
            value, lineno, col = entries[key]
            coeffs[key] = parse_rational(value, field, "t", "g", lineno, col)
    try:
        return WeierstrassModel(field, **coeffs, fieldmod=fieldmod)
    except SingularModelError as exc:
        raise SingularModelError("discriminant vanishes identically", None, None, None) from exc


def render_model(model: WeierstrassModel) -> str:
    lines = [f"p={model.p}"]
    if model.field.degree > 1:
        lines.append(f"fieldmod={model.fieldmod or model.field.format_modulus()}")
    for key, a in zip(KEYS, model.coefficients):
        if not a.is_zero():
            lines.append(f"{key}={a.format('t')}")
    return "\n".join(lines) + "\n"


def model_to_dict(model: WeierstrassModel) -> dict:
    out = {"p": model.p, "q": model.q}
    if model.field.degree > 1:
        out["fieldmod"] = model.fieldmod or model.field.format_modulus()
    for key, a in zip(KEYS, model.coefficients):
        out[key] = a.format("t")
    out["equation"] = model.equation()
    return out


def load_model(path) -> WeierstrassModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())
