"""Deterministic text and LaTeX rendering.

Densities print with ``u``, ``u1``, ``u2``, ... and ``hbar``; the combination
(-i*hbar)^g is kept grouped because every quantum coefficient is a real
rational times that unit.  Multivariate stratum polynomials print over a
common denominator with exponent tuples sorted descending, so identical
inputs always produce identical bytes.
"""

from __future__ import annotations

from math import lcm

from .diffpoly import DiffMonomial, DiffPoly
from .scalars import MINUS_I, Scalar


def _u_factor_text(s: int, e: int) -> str:
    name = "u" if s == 0 else f"u{s}"
    return name if e == 1 else f"{name}^{e}"


def _u_factor_latex(s: int, e: int) -> str:
    name = "u" if s == 0 else f"u_{{{s}}}"
    return name if e == 1 else f"{name}^{{{e}}}"


def _term_pieces(mono: DiffMonomial, c: Scalar, latex: bool):
    """Sign, numerator factors and denominator for one rendered term."""
    g = mono.hbar
    base = c / MINUS_I**g
    factors: list[str] = []
    if g:
        unit = r"(-i\hbar)" if latex else "(-i*hbar)"
        factors.append(unit if g == 1 else f"{unit}^{g}")
    for s, e in mono.uexp:
        factors.append(_u_factor_latex(s, e) if latex else _u_factor_text(s, e))
    if base.is_real():
        num = base.re.numerator
        den = base.re.denominator
        negative = num < 0
        num = abs(num)
        if num != 1 or not factors:
            factors.insert(0, str(num))
        return negative, factors, den
    # Mixed-phase coefficient: print it verbatim as one factor.
    factors.insert(0, f"({base})")
    return False, factors, 1


def render_poly_text(f: DiffPoly) -> str:
    if f.is_zero():
        return "0"
    chunks: list[str] = []
    for mono, c in f.terms_sorted():
        negative, factors, den = _term_pieces(mono, c, latex=False)
        body = "*".join(factors)
        if den != 1:
            body = f"{body}/{den}"
        if not chunks:
            chunks.append(("-" if negative else "") + body)
        else:
            chunks.append(("- " if negative else "+ ") + body)
    return " ".join(chunks)


def render_poly_latex(f: DiffPoly) -> str:
    if f.is_zero():
        return "0"
    chunks: list[str] = []
    for mono, c in f.terms_sorted():
        negative, factors, den = _term_pieces(mono, c, latex=True)
        body = r" \, ".join(factors) if len(factors) > 1 else factors[0]
        if den != 1:
            body = rf"\frac{{{body}}}{{{den}}}"
        if not chunks:
            chunks.append(("-" if negative else "") + body)
        else:
            chunks.append(("- " if negative else "+ ") + body)
    return " ".join(chunks)


def _mpoly_term_text(exps: tuple[int, ...], coeff: int, names: list[str]) -> str:
    factors = []
    for name, e in zip(names, exps):
        if e == 0:
            continue
        factors.append(name if e == 1 else f"{name}^{e}")
    mag = abs(coeff)
    if not factors:
        return str(mag)
    body = "*".join(factors)
    return body if mag == 1 else f"{mag}*{body}"


def render_mpoly_text(poly, names: list[str]) -> str:
    """Common-denominator rendering of a rational-coefficient polynomial."""
    items = sorted(poly.items(), key=lambda kv: kv[0], reverse=True)
    items = [(e, c) for e, c in items if c]
    if not items:
        return "0"
    for _, c in items:
        if not c.is_real():
            raise ValueError(f"cannot render non-real coefficient {c}")
    den = lcm(*(c.re.denominator for _, c in items))
    pieces = []
    for exps, c in items:
        whole = c.re * den
        assert whole.denominator == 1
        coeff = whole.numerator
        term = _mpoly_term_text(exps, coeff, names)
        if not pieces:
            pieces.append(("-" if coeff < 0 else "") + term)
        else:
            pieces.append(("-" if coeff < 0 else "+") + term)
    numerator = "".join(pieces)
    if den == 1:
        return numerator
    if len(items) > 1:
        numerator = f"({numerator})"
    return f"{numerator}/{den}"


def _mpoly_term_latex(exps: tuple[int, ...], coeff: int, names: list[str]) -> str:
    factors = []
    for name, e in zip(names, exps):
        if e == 0:
            continue
        base = name if len(name) == 1 else f"m_{{{name[1:]}}}"
        factors.append(base if e == 1 else f"{base}^{{{e}}}")
    mag = abs(coeff)
    if not factors:
        return str(mag)
    body = " ".join(factors)
    return body if mag == 1 else f"{mag} {body}"


def render_mpoly_latex(poly, names: list[str]) -> str:
    items = sorted(poly.items(), key=lambda kv: kv[0], reverse=True)
    items = [(e, c) for e, c in items if c]
    if not items:
        return "0"
    den = lcm(*(c.re.denominator for _, c in items))
    pieces = []
    for exps, c in items:
        whole = c.re * den
        coeff = whole.numerator
        term = _mpoly_term_latex(exps, coeff, names)
        if not pieces:
            pieces.append(("-" if coeff < 0 else "") + term)
        else:
            pieces.append(("-" if coeff < 0 else "+") + term)
    numerator = "".join(pieces)
    if den == 1:
        return numerator
    return rf"\frac{{{numerator}}}{{{den}}}"
