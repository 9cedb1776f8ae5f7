"""Predicted intersection-number polynomials from the Hamiltonian coefficients.

Each monomial of the d-th density encodes one coefficient: writing a
monomial as (-i*hbar)^g * c * prod_j u_j^{a_j} with n = sum a_j factors, the
number K = c * prod_j a_j! is the coefficient, in the falling-factorial
basis, of the degree-2g polynomial attached to the (g, n)-stratum family.
Assembling all jet tuples of a fixed g (symmetrized over orderings) yields
that polynomial in n variables; converting falling factorials to ordinary
powers is a per-variable Stirling transform.

The structural constraint n = d + 2 - 2g per monomial is checked during
extraction, and reassembling the density from the table must reproduce it
bit-exactly (both are exercised by the suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .diffpoly import DiffMonomial, DiffPoly
from .hierarchy import wang_hamiltonian
from .scalars import MINUS_I, ONE, Scalar

MPoly = dict[tuple[int, ...], Scalar]


class WeightMismatchError(ValueError):
    """A density monomial violated the factor-count constraint n = d+2-2g."""


@lru_cache(maxsize=None)
def _stirling_first_row(n: int) -> tuple[int, ...]:
    """Signed Stirling numbers s(n, k): x falling n = sum_k s(n,k) x^k."""
    if n == 0:
        return (1,)
    prev = _stirling_first_row(n - 1)
    row = [0] * (n + 1)
    for k in range(n):
        row[k + 1] += prev[k]
        row[k] -= (n - 1) * prev[k]
    return tuple(row)


@lru_cache(maxsize=None)
def _stirling_second_row(n: int) -> tuple[int, ...]:
    """Stirling numbers S(n, k): x^n = sum_k S(n,k) x falling k."""
    if n == 0:
        return (1,)
    prev = _stirling_second_row(n - 1)
    row = [0] * (n + 1)
    for k in range(n):
        row[k] += k * prev[k]
        row[k + 1] += prev[k]
    return tuple(row)


def falling_convert(poly: MPoly, direction: str) -> MPoly:
    """Change basis between falling factorials and ordinary powers.

    ``direction`` is "to_power" (input coefficients are falling-basis) or
    "to_falling" (input is power-basis); the transform acts variable by
    variable.
    """
    if direction == "to_power":
        row_fn = _stirling_first_row
    elif direction == "to_falling":
        row_fn = _stirling_second_row
    else:
        raise ValueError(f"unknown direction {direction!r}")
    out: MPoly = {}
    for exps, c in poly.items():
        partial: dict[tuple[int, ...], Scalar] = {(): c}
        for e in exps:
            row = row_fn(e)
            nxt: dict[tuple[int, ...], Scalar] = {}
            for prefix, cc in partial.items():
                for t, r in enumerate(row):
                    if not r:
                        continue
                    key = prefix + (t,)
                    add = cc * r
                    acc = nxt.get(key)
                    tot = add if acc is None else acc + add
                    if tot:
                        nxt[key] = tot
                    elif acc is not None:
                        del nxt[key]
            partial = nxt
        for key, cc in partial.items():
            acc = out.get(key)
            tot = cc if acc is None else acc + cc
            if tot:
                out[key] = tot
            elif acc is not None:
                del out[key]
    return out


@dataclass(frozen=True)
class FallingCoeffTable:
    """Coefficients K keyed by (g, ascending jet tuple) for one index d."""

    d: int
    entries: dict[tuple[int, tuple[int, ...]], Scalar]

    def genera(self) -> list[int]:
        return sorted({g for g, _ in self.entries})

    def for_genus(self, g: int) -> dict[tuple[int, ...], Scalar]:
        return {s: K for (gg, s), K in self.entries.items() if gg == g}


def extract_coeff_table(d: int, cache_dir=None) -> FallingCoeffTable:
    """Invert the closed form: one K per monomial of the d-th density."""
    density = wang_hamiltonian(d, cache_dir).density
    entries: dict[tuple[int, tuple[int, ...]], Scalar] = {}
    for mono, c in density.terms():
        g = mono.hbar
        jets = mono.jets()
        n = len(jets)
        if n != d + 2 - 2 * g:
            raise WeightMismatchError(
                f"monomial {mono} of H_{d} has {n} factors, expected "
                f"{d + 2 - 2 * g} at hbar^{g}"
            )
        base = c / MINUS_I**g
        K = base
        for _, e in mono.uexp:
            K = K * math.factorial(e)
        entries[(g, jets)] = K
    return FallingCoeffTable(d, entries)


def reassemble_density(table: FallingCoeffTable) -> DiffPoly:
    """Rebuild the density from its coefficient table (round-trip check)."""
    out = DiffPoly.zero()
    for (g, jets), K in table.entries.items():
        exps: dict[int, int] = {}
        for s in jets:
            exps[s] = exps.get(s, 0) + 1
        c = K * MINUS_I**g
        for e in exps.values():
            c = c / math.factorial(e)
        out = out + DiffPoly({DiffMonomial.make(exps, g): c})
    return out


@dataclass(frozen=True)
class StrataPolynomial:
    """The predicted polynomial for one (d, g), in both bases."""

    d: int
    g: int
    n: int
    falling: tuple[tuple[tuple[int, ...], Scalar], ...]
    power: tuple[tuple[tuple[int, ...], Scalar], ...]

    def falling_dict(self) -> MPoly:
        return dict(self.falling)

    def power_dict(self) -> MPoly:
        return dict(self.power)

    def is_symmetric(self) -> bool:
        coeffs = self.power_dict()
        for exps, c in coeffs.items():
            for perm in permutations(exps):
                if coeffs.get(tuple(perm), Scalar()) != c:
                    return False
        return True

    def falling_degrees(self) -> set[int]:
        return {sum(exps) for exps, _ in self.falling}

    def is_constant_one(self) -> bool:
        return dict(self.falling) == {(0,) * self.n: ONE}

    def variable_names(self) -> list[str]:
        if self.n == 1:
            return ["m"]
        return [f"m{i}" for i in range(1, self.n + 1)]


def _canonical_mpoly(p: MPoly) -> tuple[tuple[tuple[int, ...], Scalar], ...]:
    return tuple(sorted(p.items(), key=lambda kv: kv[0]))


def assemble_polynomial(d: int, g: int, cache_dir=None) -> StrataPolynomial:
    """Symmetrize the genus-g coefficients of H_d into a polynomial.

    The polynomial has n = d + 2 - 2g variables; g too large for d leaves no
    stratum family (n < 1) and raises ValueError.
    """
    n = d + 2 - 2 * g
    if n < 1:
        raise ValueError(
            f"no stratum family for d={d}, g={g}: it would need n={n} "
            "marked variables, and n >= 1 is required"
        )
    if g < 0:
        raise ValueError("g must be >= 0")
    table = extract_coeff_table(d, cache_dir)
    falling: MPoly = {}
    for jets, K in table.for_genus(g).items():
        for perm in set(permutations(jets)):
            acc = falling.get(perm)
            falling[perm] = K if acc is None else acc + K
    power = falling_convert(falling, "to_power")
    return StrataPolynomial(
        d=d,
        g=g,
        n=n,
        falling=_canonical_mpoly(falling),
        power=_canonical_mpoly(power),
    )


def genus0_check(d: int, cache_dir=None) -> bool:
    """The genus-0 polynomial must be the constant 1 for every d."""
    return assemble_polynomial(d, 0, cache_dir).is_constant_one()


def as_rational_string(c: Scalar) -> str:
    if not c.is_real():
        raise ValueError(f"expected a real rational, got {c}")
    return str(c.re)
