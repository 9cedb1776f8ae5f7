"""Sparse differential polynomials in the jet variables u_0, u_1, ... and hbar.

Representation
--------------
A :class:`DiffPoly` maps :class:`DiffMonomial` to :class:`~qkdv.scalars.Scalar`.
A monomial stores its jet exponents as a tuple of ``(jet index, exponent)``
pairs sorted by jet index, plus a nonnegative hbar exponent.  Zero
coefficients and zero exponents are never stored, so structural equality is
semantic equality and every value hashes.

Conventions
-----------
``u_s`` is the s-th spatial derivative of the dependent field (``u_0`` is the
field itself).  Two gradings are used throughout:

* grade:  ``deg u_s = s``, ``deg hbar = -2``
* weight: ``deg' u_s = s + 1``, ``deg' hbar = 0``

``dx`` raises both by one; the variational derivative preserves grade and
lowers weight by one.

The deterministic monomial order (used for serialization and rendering) is
graded lexicographic on ``(hbar exponent, total u-degree, flattened jet
list)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .scalars import MINUS_I, ONE, Scalar, as_scalar


class OddPowerError(ValueError):
    """The jet-scaling substitution met a monomial of odd total jet weight."""


@dataclass(frozen=True)
class Bidegree:
    grade: int
    weight: int


@dataclass(frozen=True)
class DiffMonomial:
    """A product of jet variables and a power of hbar (coefficient-free)."""

    uexp: tuple[tuple[int, int], ...] = ()
    hbar: int = 0

    @staticmethod
    def make(uexp=(), hbar: int = 0) -> DiffMonomial:
        if isinstance(uexp, dict):
            items = uexp.items()
        else:
            items = uexp
        merged: dict[int, int] = {}
        for s, e in items:
            if s < 0:
                raise ValueError(f"negative jet index {s}")
            if e:
                merged[s] = merged.get(s, 0) + e
        if hbar < 0:
            raise ValueError(f"negative hbar exponent {hbar}")
        if any(e < 0 for e in merged.values()):
            raise ValueError("negative jet exponent")
        clean = tuple(sorted((s, e) for s, e in merged.items() if e))
        return DiffMonomial(clean, hbar)

    def grade(self) -> int:
        return sum(s * e for s, e in self.uexp) - 2 * self.hbar

    def weight(self) -> int:
        return sum((s + 1) * e for s, e in self.uexp)

    def udegree(self) -> int:
        return sum(e for _, e in self.uexp)

    def jet_weight(self) -> int:
        """Total jet weight sum_s s * exponent(u_s), hbar ignored."""
        return sum(s * e for s, e in self.uexp)

    def jets(self) -> tuple[int, ...]:
        """Jet indices with multiplicity, ascending: u_0 u_2 -> (0, 2)."""
        out: list[int] = []
        for s, e in self.uexp:
            out.extend([s] * e)
        return tuple(out)

    def sort_key(self) -> tuple:
        return (self.hbar, self.udegree(), self.jets())

    def mul(self, other: DiffMonomial) -> DiffMonomial:
        return DiffMonomial.make(self.uexp + other.uexp, self.hbar + other.hbar)

    def exponent_of(self, s: int) -> int:
        for j, e in self.uexp:
            if j == s:
                return e
        return 0

    def __str__(self) -> str:
        parts = [f"u{s}" + (f"^{e}" if e > 1 else "") for s, e in self.uexp]
        if self.hbar:
            parts.append("hbar" + (f"^{self.hbar}" if self.hbar > 1 else ""))
        return "*".join(parts) if parts else "1"


_ONE_MONO = DiffMonomial()


class DiffPoly:
    """An exact polynomial in the jet variables and hbar."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[DiffMonomial, Scalar] | None = None):
        clean: dict[DiffMonomial, Scalar] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = c
        self._terms = clean
        self._hash: int | None = None

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero() -> DiffPoly:
        return DiffPoly()

    @staticmethod
    def const(c) -> DiffPoly:
        return DiffPoly({_ONE_MONO: as_scalar(c)})

    @staticmethod
    def one() -> DiffPoly:
        return DiffPoly.const(1)

    @staticmethod
    def u(s: int, exp: int = 1) -> DiffPoly:
        return DiffPoly({DiffMonomial.make({s: exp}): ONE})

    @staticmethod
    def hbar(exp: int = 1) -> DiffPoly:
        return DiffPoly({DiffMonomial.make((), exp): ONE})

    @staticmethod
    def term(c, uexp=(), hbar: int = 0) -> DiffPoly:
        return DiffPoly({DiffMonomial.make(uexp, hbar): as_scalar(c)})

    # -- views ----------------------------------------------------------

    def terms(self) -> Iterator[tuple[DiffMonomial, Scalar]]:
        return iter(self._terms.items())

    def terms_sorted(self) -> list[tuple[DiffMonomial, Scalar]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, mono: DiffMonomial) -> Scalar:
        return self._terms.get(mono, Scalar())

    def monomial_count(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def max_jet(self) -> int:
        """Largest jet index appearing, -1 for jet-free polynomials."""
        top = -1
        for mono in self._terms:
            if mono.uexp:
                top = max(top, mono.uexp[-1][0])
        return top

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for mono, c in other._terms.items():
            acc = out.get(mono)
            new = c if acc is None else acc + c
            if new:
                out[mono] = new
            elif acc is not None:
                del out[mono]
        return DiffPoly(out)

    __radd__ = __add__

    def __neg__(self) -> DiffPoly:
        return DiffPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        out: dict[DiffMonomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = m1.mul(m2)
                c = c1 * c2
                acc = out.get(mono)
                new = c if acc is None else acc + c
                if new:
                    out[mono] = new
                elif acc is not None:
                    del out[mono]
        return DiffPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(as_scalar(other).inverse())
        return NotImplemented

    def __pow__(self, n: int) -> DiffPoly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("DiffPoly powers take nonnegative integers")
        out = DiffPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c) -> DiffPoly:
        c = as_scalar(c)
        if not c:
            return DiffPoly()
        return DiffPoly({m: v * c for m, v in self._terms.items()})

    # -- hbar bookkeeping ------------------------------------------------

    def hbar_coefficient(self, g: int) -> DiffPoly:
        """The coefficient of hbar^g, with the hbar factor removed."""
        out = {}
        for mono, c in self._terms.items():
            if mono.hbar == g:
                out[DiffMonomial(mono.uexp, 0)] = c
        return DiffPoly(out)

    def hbar_truncate(self, gmax: int) -> DiffPoly:
        return DiffPoly({m: c for m, c in self._terms.items() if m.hbar <= gmax})

    def max_hbar(self) -> int:
        return max((m.hbar for m in self._terms), default=0)

    # -- equality ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            other = DiffPoly.const(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*{m}" for m, c in self.terms_sorted())

    def __repr__(self) -> str:
        return f"DiffPoly({self})"


def _coerce_poly(x):
    if isinstance(x, DiffPoly):
        return x
    if isinstance(x, (int, Fraction, Scalar)):
        return DiffPoly.const(x)
    return NotImplemented


# -- derivations ---------------------------------------------------------


def dx(f: DiffPoly) -> DiffPoly:
    """Total x-derivative: the derivation sending u_s to u_{s+1}."""
    out: dict[DiffMonomial, Scalar] = {}
    for mono, c in f.terms():
        for idx, (s, e) in enumerate(mono.uexp):
            rest = list(mono.uexp)
            if e == 1:
                del rest[idx]
            else:
                rest[idx] = (s, e - 1)
            new = DiffMonomial.make(rest + [(s + 1, 1)], mono.hbar)
            add = c * e
            acc = out.get(new)
            tot = add if acc is None else acc + add
            if tot:
                out[new] = tot
            elif acc is not None:
                del out[new]
    return DiffPoly(out)


def partial_u(f: DiffPoly, s: int) -> DiffPoly:
    """Formal partial derivative with respect to u_s."""
    if s < 0:
        raise ValueError(f"negative jet index {s}")
    out: dict[DiffMonomial, Scalar] = {}
    for mono, c in f.terms():
        e = mono.exponent_of(s)
        if not e:
            continue
        rest = [(j, x) for j, x in mono.uexp if j != s]
        if e > 1:
            rest.append((s, e - 1))
        new = DiffMonomial.make(rest, mono.hbar)
        add = c * e
        acc = out.get(new)
        tot = add if acc is None else acc + add
        if tot:
            out[new] = tot
        elif acc is not None:
            del out[new]
    return DiffPoly(out)


def variational_derivative(f: DiffPoly) -> DiffPoly:
    """Euler operator sum_s (-dx)^s (d f / d u_s).

    Its kernel is exactly total derivatives plus constants, which is what
    makes it the membership test for functional equality.
    """
    out = DiffPoly.zero()
    for s in range(f.max_jet() + 1):
        g = partial_u(f, s)
        if not g:
            continue
        for _ in range(s):
            g = dx(g)
        if s % 2:
            g = -g
        out = out + g
    return out


def bidegree_of(f: DiffPoly) -> Bidegree | None:
    """Common (grade, weight) of all monomials, or None if mixed or zero."""
    found: Bidegree | None = None
    for mono, _ in f.terms():
        bd = Bidegree(mono.grade(), mono.weight())
        if found is None:
            found = bd
        elif bd != found:
            return None
    return found


def is_homogeneous(f: DiffPoly, grade: int, weight: int) -> bool:
    """True when every monomial has the given bidegree (zero passes)."""
    return all(
        m.grade() == grade and m.weight() == weight for m, _ in f.terms()
    )


def scale_substitute(f: DiffPoly) -> DiffPoly:
    """Substitute u_j -> lam^j u_j with lam^2 = -i*hbar.

    Each monomial acquires lam^t where t is its total jet weight; t must be
    even, so the result picks up (-i*hbar)^(t/2) and no radical is ever
    stored.  Odd t raises :class:`OddPowerError`.
    """
    out: dict[DiffMonomial, Scalar] = {}
    for mono, c in f.terms():
        t = mono.jet_weight()
        if t % 2:
            raise OddPowerError(f"odd total jet weight {t} in monomial {mono}")
        half = t // 2
        new = DiffMonomial(mono.uexp, mono.hbar + half)
        add = c * MINUS_I**half
        acc = out.get(new)
        tot = add if acc is None else acc + add
        if tot:
            out[new] = tot
        elif acc is not None:
            del out[new]
    return DiffPoly(out)


# -- serialization ---------------------------------------------------------


def to_json_dict(f: DiffPoly) -> dict:
    terms = []
    for mono, c in f.terms_sorted():
        terms.append(
            {
                "c": {"re": str(c.re), "im": str(c.im)},
                "hbar": mono.hbar,
                "u": {str(s): e for s, e in mono.uexp},
            }
        )
    return {"terms": terms}


def from_json_dict(d: dict) -> DiffPoly:
    out: dict[DiffMonomial, Scalar] = {}
    for entry in d["terms"]:
        c = Scalar(Fraction(entry["c"]["re"]), Fraction(entry["c"]["im"]))
        mono = DiffMonomial.make(
            {int(s): int(e) for s, e in entry["u"].items()}, int(entry["hbar"])
        )
        out[mono] = out.get(mono, Scalar()) + c
    return DiffPoly(out)


def to_json(f: DiffPoly) -> str:
    return json.dumps(to_json_dict(f), separators=(",", ":"))


def from_json(s: str) -> DiffPoly:
    return from_json_dict(json.loads(s))
