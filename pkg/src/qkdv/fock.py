r"""Free-boson realization of the quantum bracket, sector by sector.

States and coefficients
-----------------------
A basis state is a :class:`Partition`: the multiset of positive modes already
created from the vacuum, with momentum the sum of its parts.  Coefficients
are :class:`SectorScalar`: exact polynomials in hbar and the central zero
mode p0 over the Gaussian rationals.

Action rule
-----------
A density monomial ``c * hbar^a * u_{j_1} ... u_{j_r}`` acts as the sum over
ordered integer tuples (k_1, ..., k_r) with sum 0 of

    c * hbar^a * prod_i (i k_i)^{j_i} * :p_{k_1} ... p_{k_r}:

with creation modes (k < 0) normal-ordered to the left.  On a basis state,
annihilation modes must match existing parts (each removal of a part k
contributes ``i*hbar*k`` times the current multiplicity), zero modes multiply
by p0, and creation modes add parts.  The mode algebra behind this is
``[p_a, p_b] = i*hbar*a`` when a + b = 0 and zero otherwise, with p_0
central.

Because annihilated parts must lie in the state and created parts must
balance them, every contributing mode is bounded by the state's momentum:
each sector computation below is exact, not a truncation.

The enumeration never walks raw ordered tuples.  Per monomial and basis
state it enumerates annihilation sub-multisets, solves for creation
multisets via the zero-sum constraint, and multiplies by the combinatorial
weight of distributing that mode multiset over the monomial's positions.
Results for (monomial, partition) pairs are cached, so repeated commutator
checks share almost all their work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .diffpoly import DiffPoly
from .functionals import poisson_density
from .hierarchy import wang_hamiltonian
from .scalars import I, ONE, Scalar, as_scalar


class CommutatorNonzero(Exception):
    """Two quantized densities failed to commute on a checked sector."""

    def __init__(self, d1, d2, partition, entry, coefficient):
        self.d1 = d1
        self.d2 = d2
        self.partition = partition
        self.entry = entry
        self.coefficient = coefficient
        super().__init__(
            f"[H_{d1}, H_{d2}] nonzero on |{partition}>: "
            f"coefficient {coefficient} at |{entry}>"
        )

    def witness_dict(self) -> dict:
        return {
            "d1": self.d1,
            "d2": self.d2,
            "partition": list(self.partition.parts),
            "entry": list(self.entry.parts),
            "coefficient": str(self.coefficient),
        }


class MismatchError(Exception):
    """Order-hbar commutator disagreed with the symbolic Poisson bracket."""

    def __init__(self, f, g, partition, lhs, rhs):
        self.f = f
        self.g = g
        self.partition = partition
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"order-hbar mismatch on |{partition}> for f={f}, g={g}: "
            f"commutator gives {lhs}, bracket gives {rhs}"
        )

    def witness_dict(self) -> dict:
        return {
            "f": str(self.f),
            "g": str(self.g),
            "partition": list(self.partition.parts),
            "commutator": str(self.lhs),
            "bracket": str(self.rhs),
        }


@dataclass(frozen=True, order=True)
class Partition:
    """A multiset of positive mode numbers, stored descending."""

    parts: tuple[int, ...] = ()

    @staticmethod
    def make(parts) -> Partition:
        clean = tuple(sorted(parts, reverse=True))
        if any(not isinstance(k, int) or k < 1 for k in clean):
            raise ValueError(f"parts must be positive integers: {parts!r}")
        return Partition(clean)

    @property
    def momentum(self) -> int:
        return sum(self.parts)

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for k in self.parts:
            out[k] = out.get(k, 0) + 1
        return out

    def remove(self, multiset) -> Partition:
        c = self.counts()
        for k, a in multiset:
            c[k] -= a
            if c[k] < 0:
                raise ValueError(f"cannot remove {a} parts {k} from {self}")
        parts = []
        for k, n in c.items():
            parts.extend([k] * n)
        return Partition(tuple(sorted(parts, reverse=True)))

    def add(self, extra) -> Partition:
        return Partition(tuple(sorted(self.parts + tuple(extra), reverse=True)))

    def __str__(self) -> str:
        return ",".join(str(k) for k in self.parts) if self.parts else "0"


@lru_cache(maxsize=None)
def partitions_of(m: int) -> tuple[Partition, ...]:
    """All partitions of momentum m, in descending lexicographic order."""
    if m < 0:
        raise ValueError("momentum must be nonnegative")

    def rec(remaining: int, max_part: int):
        if remaining == 0:
            yield ()
            return
        for k in range(min(remaining, max_part), 0, -1):
            for rest in rec(remaining - k, k):
                yield (k,) + rest

    return tuple(Partition(p) for p in rec(m, m))


class SectorScalar:
    """An exact polynomial in hbar and the central mode p0."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[tuple[int, int], Scalar] | None = None):
        self._terms = {k: v for k, v in (terms or {}).items() if v}

    @staticmethod
    def zero() -> SectorScalar:
        return SectorScalar()

    @staticmethod
    def one() -> SectorScalar:
        return SectorScalar.monomial(1, 0, 0)

    @staticmethod
    def monomial(c, hbar: int = 0, p0: int = 0) -> SectorScalar:
        c = as_scalar(c)
        return SectorScalar({(hbar, p0): c} if c else {})

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def terms_sorted(self) -> list[tuple[tuple[int, int], Scalar]]:
        return sorted(self._terms.items())

    def coefficient(self, hbar: int, p0: int) -> Scalar:
        return self._terms.get((hbar, p0), Scalar())

    def hbar_coefficient(self, h: int) -> SectorScalar:
        return SectorScalar(
            {(0, p): c for (hh, p), c in self._terms.items() if hh == h}
        )

    def max_hbar(self) -> int:
        return max((h for h, _ in self._terms), default=0)

    def __add__(self, other: SectorScalar) -> SectorScalar:
        out = dict(self._terms)
        for key, c in other._terms.items():
            acc = out.get(key)
            tot = c if acc is None else acc + c
            if tot:
                out[key] = tot
            elif acc is not None:
                del out[key]
        return SectorScalar(out)

    def __neg__(self) -> SectorScalar:
        return SectorScalar({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: SectorScalar) -> SectorScalar:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if not isinstance(other, SectorScalar):
            return NotImplemented
        out: dict[tuple[int, int], Scalar] = {}
        for (h1, p1), c1 in self._terms.items():
            for (h2, p2), c2 in other._terms.items():
                key = (h1 + h2, p1 + p2)
                c = c1 * c2
                acc = out.get(key)
                tot = c if acc is None else acc + c
                if tot:
                    out[key] = tot
                elif acc is not None:
                    del out[key]
        return SectorScalar(out)

    __rmul__ = __mul__

    def scale(self, c) -> SectorScalar:
        c = as_scalar(c)
        if not c:
            return SectorScalar()
        return SectorScalar({k: v * c for k, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SectorScalar):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for (h, p), c in self.terms_sorted():
            factors = [str(c)]
            if h:
                factors.append("hbar" + (f"^{h}" if h > 1 else ""))
            if p:
                factors.append("p0" + (f"^{p}" if p > 1 else ""))
            bits.append("*".join(factors))
        return " + ".join(bits)

    def __repr__(self) -> str:
        return f"SectorScalar({self})"


class FockVector:
    """A finite combination of partition states with SectorScalar amplitudes."""

    __slots__ = ("_entries",)

    def __init__(self, entries: dict[Partition, SectorScalar] | None = None):
        self._entries = {
            lam: amp for lam, amp in (entries or {}).items() if amp
        }

    @staticmethod
    def zero() -> FockVector:
        return FockVector()

    @staticmethod
    def vacuum() -> FockVector:
        return FockVector.basis(Partition())

    @staticmethod
    def basis(lam: Partition) -> FockVector:
        return FockVector({lam: SectorScalar.one()})

    def coefficient(self, lam: Partition) -> SectorScalar:
        return self._entries.get(lam, SectorScalar.zero())

    def entries_sorted(self) -> list[tuple[Partition, SectorScalar]]:
        return sorted(self._entries.items(), key=lambda kv: kv[0].parts)

    def support(self) -> list[Partition]:
        return sorted(self._entries, key=lambda p: p.parts)

    def momenta(self) -> set[int]:
        return {lam.momentum for lam in self._entries}

    def is_zero(self) -> bool:
        return not self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __add__(self, other: FockVector) -> FockVector:
        out = dict(self._entries)
        for lam, amp in other._entries.items():
            acc = out.get(lam)
            tot = amp if acc is None else acc + amp
            if tot:
                out[lam] = tot
            elif acc is not None:
                del out[lam]
        return FockVector(out)

    def __neg__(self) -> FockVector:
        return FockVector({lam: -amp for lam, amp in self._entries.items()})

    def __sub__(self, other: FockVector) -> FockVector:
        return self + (-other)

    def scale(self, c) -> FockVector:
        if isinstance(c, (int, Scalar)):
            c = SectorScalar.monomial(c)
        if c.is_zero():
            return FockVector()
        return FockVector(
            {lam: amp * c for lam, amp in self._entries.items()}
        )

    def hbar_coefficient(self, h: int) -> FockVector:
        return FockVector(
            {
                lam: amp.hbar_coefficient(h)
                for lam, amp in self._entries.items()
            }
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._entries == other._entries

    __hash__ = None

    def __str__(self) -> str:
        if not self._entries:
            return "0"
        return " + ".join(
            f"({amp})|{lam}>" for lam, amp in self.entries_sorted()
        )

    def __repr__(self) -> str:
        return f"FockVector({self})"


def _falling(m: int, a: int) -> int:
    out = 1
    for i in range(a):
        out *= m - i
    return out


def _submultisets(items: list[tuple[int, int]], max_size: int):
    """Sub-multisets of {value: multiplicity} with at most max_size elements."""

    def rec(i: int, budget: int):
        if i == len(items):
            yield ()
            return
        k, mult = items[i]
        for take in range(min(mult, budget) + 1):
            for rest in rec(i + 1, budget - take):
                if take:
                    yield ((k, take),) + rest
                else:
                    yield rest

    yield from rec(0, max_size)


def _bounded_partitions(t: int, max_parts: int):
    """Multisets of positive integers summing to t with at most max_parts parts."""

    def rec(remaining: int, max_part: int, slots: int):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for k in range(min(remaining, max_part), 0, -1):
            for rest in rec(remaining - k, k, slots - 1):
                yield (k,) + rest

    yield from rec(t, t, max_parts)


def _mode_symbol(v: int, j: int) -> Scalar:
    """(i*v)^j, the Fourier symbol of the j-th derivative at mode v."""
    if j == 0:
        return ONE
    if v == 0:
        return Scalar()
    return (I * v) ** j


def _assignment_weight(
    groups: tuple[tuple[int, int], ...], values: tuple[tuple[int, int], ...]
) -> Scalar:
    """Sum over ordered tuples realizing a mode multiset.

    ``groups`` lists (jet index, slot count) for the monomial's positions;
    ``values`` lists (mode value, count) with matching totals.  Returns
    sum over all position assignments of prod (i*k)^j.
    """
    jets = [j for j, _ in groups]
    caps = [r for _, r in groups]
    ngroups = len(groups)
    total = Scalar()

    def rec(vi: int, acc: Scalar):
        nonlocal total
        if vi == len(values):
            total = total + acc
            return
        v, cnt = values[vi]
        syms = [_mode_symbol(v, j) for j in jets]

        def dist(gi: int, rem: int, acc2: Scalar):
            if gi == ngroups - 1:
                take = rem
                if take > caps[gi] or (take and not syms[gi]):
                    return
                caps[gi] -= take
                rec(
                    vi + 1,
                    acc2 * syms[gi] ** take / math.factorial(take),
                )
                caps[gi] += take
                return
            for take in range(min(rem, caps[gi]) + 1):
                if take and not syms[gi]:
                    continue
                caps[gi] -= take
                dist(
                    gi + 1,
                    rem - take,
                    acc2 * syms[gi] ** take / math.factorial(take),
                )
                caps[gi] += take

        if ngroups:
            dist(0, cnt, acc)
        elif cnt == 0:
            rec(vi + 1, acc)

    rec(0, ONE)
    for _, r in groups:
        total = total * math.factorial(r)
    return total


@lru_cache(maxsize=None)
def _split_apply(
    jet_groups: tuple[tuple[int, int], ...], lam: Partition
) -> tuple[tuple[Partition, Partition, SectorScalar], ...]:
    """Apply the coefficient-free monomial prod u_j to a basis state.

    Returns (surviving parts, created parts, amplitude) triples, keeping
    the state's untouched parts separate from the freshly created ones;
    amplitudes carry the hbar powers from annihilations and the p0 powers
    from zero modes.
    """
    r = sum(cnt for _, cnt in jet_groups)
    counts = lam.counts()
    part_items = sorted(counts.items())
    out: dict[tuple[Partition, Partition], SectorScalar] = {}
    for ann in _submultisets(part_items, r):
        size_a = sum(a for _, a in ann)
        t = sum(k * a for k, a in ann)
        ann_scalar = ONE
        for k, a in ann:
            ann_scalar = ann_scalar * (I * k) ** a * _falling(counts[k], a)
        stripped = lam.remove(ann)
        for creators in _bounded_partitions(t, r - size_a):
            z = r - size_a - len(creators)
            vals: dict[int, int] = {k: a for k, a in ann}
            for c in creators:
                vals[-c] = vals.get(-c, 0) + 1
            if z:
                vals[0] = z
            w = _assignment_weight(jet_groups, tuple(sorted(vals.items())))
            if not w:
                continue
            entry = SectorScalar.monomial(w * ann_scalar, size_a, z)
            key = (stripped, Partition.make(creators))
            acc = out.get(key)
            out[key] = entry if acc is None else acc + entry
    items = [(s, c, amp) for (s, c), amp in out.items() if amp]
    items.sort(key=lambda kv: (kv[0].parts, kv[1].parts))
    return tuple(items)


@lru_cache(maxsize=None)
def _bare_apply(
    jet_groups: tuple[tuple[int, int], ...], lam: Partition
) -> tuple[tuple[Partition, SectorScalar], ...]:
    """Like _split_apply but with surviving and created parts merged."""
    out: dict[Partition, SectorScalar] = {}
    for stripped, created, amp in _split_apply(jet_groups, lam):
        mu = stripped.add(created.parts)
        acc = out.get(mu)
        out[mu] = amp if acc is None else acc + amp
    items = [(mu, amp) for mu, amp in out.items() if amp]
    items.sort(key=lambda kv: kv[0].parts)
    return tuple(items)


@lru_cache(maxsize=None)
def _apply_to_basis(f: DiffPoly, lam: Partition) -> FockVector:
    out: dict[Partition, SectorScalar] = {}
    for mono, c in f.terms():
        factor = SectorScalar.monomial(c, mono.hbar, 0)
        for mu, amp in _bare_apply(mono.uexp, lam):
            contrib = amp * factor
            acc = out.get(mu)
            out[mu] = contrib if acc is None else acc + contrib
    return FockVector(out)


def apply_quantized(f: DiffPoly, v: FockVector) -> FockVector:
    """Act with the quantization of the density f on a Fock vector."""
    out = FockVector.zero()
    for lam, amp in v.entries_sorted():
        out = out + _apply_to_basis(f, lam).scale(amp)
    return out


def commutator_apply(f: DiffPoly, g: DiffPoly, v: FockVector) -> FockVector:
    """Apply the commutator of the quantizations of f and g."""
    return apply_quantized(f, apply_quantized(g, v)) - apply_quantized(
        g, apply_quantized(f, v)
    )


@lru_cache(maxsize=None)
def _tracked_single(
    jet_groups: tuple[tuple[int, int], ...],
    plain: Partition,
    marked: Partition,
) -> tuple[tuple[Partition, SectorScalar], ...]:
    """Apply a bare monomial, keeping terms that hit the marked pool once.

    The state consists of two pools of parts.  Annihilators may draw from
    either; this keeps exactly the terms where a single annihilation lands
    in the marked pool, which is how one isolates the part of an operator
    product with exactly one cross pairing.  Output parts are merged again.
    """
    r = sum(cnt for _, cnt in jet_groups)
    p_counts = plain.counts()
    m_counts = marked.counts()
    merged_counts: dict[int, int] = dict(p_counts)
    for k, n in m_counts.items():
        merged_counts[k] = merged_counts.get(k, 0) + n
    merged = plain.add(marked.parts)
    part_items = sorted(merged_counts.items())
    out: dict[Partition, SectorScalar] = {}
    for ann in _submultisets(part_items, r):
        size_a = sum(a for _, a in ann)
        t = sum(k * a for k, a in ann)
        ways = 0
        for kstar, astar in ann:
            if m_counts.get(kstar, 0) == 0:
                continue
            w = astar * _falling(p_counts.get(kstar, 0), astar - 1) * m_counts[kstar]
            for k, a in ann:
                if k != kstar:
                    w *= _falling(p_counts.get(k, 0), a)
            ways += w
        if not ways:
            continue
        ann_scalar = ONE
        for k, a in ann:
            ann_scalar = ann_scalar * (I * k) ** a
        ann_scalar = ann_scalar * ways
        stripped = merged.remove(ann)
        for creators in _bounded_partitions(t, r - size_a):
            z = r - size_a - len(creators)
            vals: dict[int, int] = {k: a for k, a in ann}
            for c in creators:
                vals[-c] = vals.get(-c, 0) + 1
            if z:
                vals[0] = z
            w = _assignment_weight(jet_groups, tuple(sorted(vals.items())))
            if not w:
                continue
            entry = SectorScalar.monomial(w * ann_scalar, size_a, z)
            mu = stripped.add(creators)
            acc = out.get(mu)
            out[mu] = entry if acc is None else acc + entry
    items = [(mu, amp) for mu, amp in out.items() if amp]
    items.sort(key=lambda kv: kv[0].parts)
    return tuple(items)


def _cross_once(f: DiffPoly, g: DiffPoly, lam: Partition) -> FockVector:
    """Terms of f-hat (g-hat |lam>) where f pairs with g's output exactly once."""
    out: dict[Partition, SectorScalar] = {}
    for mono_g, cg in g.terms():
        g_factor = SectorScalar.monomial(cg, mono_g.hbar, 0)
        for stripped, created, amp_g in _split_apply(mono_g.uexp, lam):
            if not created.parts:
                continue
            stage = amp_g * g_factor
            for mono_f, cf in f.terms():
                factor = stage * SectorScalar.monomial(cf, mono_f.hbar, 0)
                for mu, amp_f in _tracked_single(mono_f.uexp, stripped, created):
                    contrib = amp_f * factor
                    acc = out.get(mu)
                    out[mu] = contrib if acc is None else acc + contrib
    return FockVector(out)


def single_contraction_apply(
    f: DiffPoly, g: DiffPoly, lam: Partition
) -> FockVector:
    """The single-pairing part of the commutator, applied to a basis state.

    Ordering the product of two quantized densities produces one mode
    pairing per power of hbar beyond the state contractions; the terms with
    no pairing cancel between the two orders.  This isolates the terms with
    exactly one, which carry the entire first-order content of the bracket.
    """
    return _cross_once(f, g, lam) - _cross_once(g, f, lam)


@dataclass(frozen=True)
class PairStatus:
    d1: int
    d2: int
    mmax: int
    status: str


@dataclass
class CommuteReport:
    pairs: list[PairStatus]
    witness: dict | None
    sectors_checked: list[int]
    max_intermediate_dimension: int

    def to_json_dict(self) -> dict:
        return {
            "pairs": [
                {"d1": p.d1, "d2": p.d2, "mmax": p.mmax, "status": p.status}
                for p in self.pairs
            ],
            "witness": self.witness,
            "sectors_checked": self.sectors_checked,
            "max_intermediate_dimension": self.max_intermediate_dimension,
        }


def check_commute(d1: int, d2: int, mmax: int, cache_dir=None) -> CommuteReport:
    """Verify [H_d1, H_d2] = 0 on every partition of momentum <= mmax.

    Raises :class:`CommutatorNonzero` with a witness on the first failure.
    """
    f = wang_hamiltonian(d1, cache_dir).density
    g = wang_hamiltonian(d2, cache_dir).density
    max_dim = 0
    for m in range(mmax + 1):
        for lam in partitions_of(m):
            v = FockVector.basis(lam)
            fv = apply_quantized(f, v)
            gv = apply_quantized(g, v)
            max_dim = max(max_dim, len(fv), len(gv))
            w = apply_quantized(f, gv) - apply_quantized(g, fv)
            if not w.is_zero():
                mu, amp = w.entries_sorted()[0]
                raise CommutatorNonzero(d1, d2, lam, mu, amp)
    return CommuteReport(
        pairs=[PairStatus(d1, d2, mmax, "pass")],
        witness=None,
        sectors_checked=list(range(mmax + 1)),
        max_intermediate_dimension=max_dim,
    )


@dataclass
class ConsistencyReport:
    pairs: list[dict]
    witness: dict | None

    def to_json_dict(self) -> dict:
        return {"pairs": self.pairs, "witness": self.witness}


def classical_consistency(
    f: DiffPoly, g: DiffPoly, mmax: int
) -> ConsistencyReport:
    """Check the leading commutator term against the symbolic Poisson bracket.

    For hbar-free densities f and g, the single-pairing part of [f^, g^]
    applied to each basis state of momentum <= mmax must equal hbar times
    the quantization of the Poisson density applied to the same state: the
    two mode brackets differ by exactly one factor of hbar, and ordering
    the operator product resolves one pairing at a time.  A wrong sign or
    scale anywhere in the mode conventions makes this fail loudly.
    """
    if f.max_hbar() or g.max_hbar():
        raise ValueError("classical consistency needs hbar-free densities")
    p = poisson_density(f, g)
    hbar = SectorScalar.monomial(1, 1, 0)
    for m in range(mmax + 1):
        for lam in partitions_of(m):
            lhs = single_contraction_apply(f, g, lam)
            rhs = apply_quantized(p, FockVector.basis(lam)).scale(hbar)
            if lhs != rhs:
                raise MismatchError(f, g, lam, lhs, rhs)
    return ConsistencyReport(
        pairs=[{"f": str(f), "g": str(g), "mmax": mmax, "status": "pass"}],
        witness=None,
    )


def clear_fock_caches() -> None:
    """Reset the per-(monomial, state) caches (for isolation in tests)."""
    _bare_apply.cache_clear()
    _split_apply.cache_clear()
    _tracked_single.cache_clear()
    _apply_to_basis.cache_clear()
