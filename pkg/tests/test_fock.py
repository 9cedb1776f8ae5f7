"""Free-boson realization: oracle checks, integrability, calibration."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkdv import (
    DiffPoly,
    FockVector,
    Partition,
    Scalar,
    SectorScalar,
    apply_quantized,
    check_commute,
    classical_consistency,
    classical_density,
    commutator_apply,
    dx,
    partitions_of,
    poisson_density,
    wang_hamiltonian,
)
from qkdv.fock import clear_fock_caches, single_contraction_apply
from qkdv.scalars import I, as_scalar
from qkdv.verify import random_density

from conftest import diff_polys, hbar_free_polys

u = DiffPoly.u

partitions = st.builds(
    Partition.make, st.lists(st.integers(min_value=1, max_value=3), max_size=3)
)


def oracle_apply(f: DiffPoly, lam: Partition) -> FockVector:
    """Direct sum over ordered mode tuples; independent of the fast path.

    For each monomial c*hbar^a*prod u_{s_i}, sum over ordered integer tuples
    with zero total of c*hbar^a*prod (i*k)^{s_i} times the normal-ordered
    product of modes applied to |lam>.  All tuples are bounded by the state's
    momentum, so the triple loop below is finite.
    """
    out: dict[Partition, SectorScalar] = {}
    M = lam.momentum
    for mono, c in f.terms():
        jets: list[int] = []
        for j, e in mono.uexp:
            jets.extend([j] * e)
        for ks in itertools.product(range(-M, M + 1), repeat=len(jets)):
            if sum(ks):
                continue
            sym = as_scalar(c)
            for k, s in zip(ks, jets):
                sym = sym * (I * k) ** s
            if not sym:
                continue
            counts = dict(lam.counts())
            nann = nzero = 0
            created: list[int] = []
            dead = False
            for k in ks:
                if k > 0:
                    mult = counts.get(k, 0)
                    if not mult:
                        dead = True
                        break
                    sym = sym * (I * k * mult)
                    counts[k] -= 1
                    nann += 1
                elif k == 0:
                    nzero += 1
                else:
                    created.append(-k)
            if dead or not sym:
                continue
            rest = [kk for kk, n in counts.items() for _ in range(n)]
            mu = Partition.make(rest + created)
            entry = SectorScalar.monomial(sym, mono.hbar + nann, nzero)
            acc = out.get(mu)
            out[mu] = entry if acc is None else acc + entry
    return FockVector(out)


ORACLE_POLYS = [
    u(0, 3),
    u(1, 2),
    u(0) * u(2),
    u(0, 2) * u(1),
    u(4),
    u(1) * u(3),
    u(2, 2),
    u(0) * u(1) * u(2),
    DiffPoly.term(Scalar.of(0, "-1/12"), ((2, 1),), hbar=1),
    DiffPoly.term(3, ((0, 2),), hbar=2),
    wang_hamiltonian(1).density,
    wang_hamiltonian(2).density,
]


@pytest.mark.parametrize("poly_index", range(len(ORACLE_POLYS)))
def test_apply_quantized_against_tuple_oracle(poly_index):
    f = ORACLE_POLYS[poly_index]
    for m in range(4):
        for lam in partitions_of(m):
            assert apply_quantized(f, FockVector.basis(lam)) == oracle_apply(
                f, lam
            ), f"disagrees on |{lam}>"


def test_apply_quantized_oracle_momentum_four():
    for f in (u(0, 3), u(1, 2), wang_hamiltonian(1).density):
        for lam in partitions_of(4):
            assert apply_quantized(f, FockVector.basis(lam)) == oracle_apply(
                f, lam
            )


def test_partition_type():
    lam = Partition.make([1, 3, 1])
    assert lam.parts == (3, 1, 1)
    assert lam.momentum == 5
    assert lam.counts() == {3: 1, 1: 2}
    assert lam.remove([(1, 2)]) == Partition.make([3])
    assert lam.add([2]) == Partition.make([1, 1, 2, 3])
    with pytest.raises(ValueError):
        Partition.make([0, 1])
    with pytest.raises(ValueError):
        lam.remove([(3, 2)])
    assert [len(partitions_of(m)) for m in range(7)] == [1, 1, 2, 3, 5, 7, 11]


def test_first_hamiltonian_on_small_states():
    h1 = wang_hamiltonian(1).density
    got = apply_quantized(h1, FockVector.vacuum())
    assert got.coefficient(Partition()) == SectorScalar.monomial(
        Scalar.of("1/6"), 0, 3
    )
    assert len(got) == 1
    one = Partition.make([1])
    got = apply_quantized(h1, FockVector.basis(one))
    expected = SectorScalar.monomial(Scalar.of("1/6"), 0, 3) + SectorScalar.monomial(
        Scalar.of(0, 1), 1, 1
    )
    assert got.coefficient(one) == expected
    assert len(got) == 1


def test_h0_is_diagonal_with_momentum_eigenvalue():
    h0 = wang_hamiltonian(0).density
    for m in range(6):
        for lam in partitions_of(m):
            got = apply_quantized(h0, FockVector.basis(lam))
            expected = SectorScalar.monomial(
                Scalar.of("1/2"), 0, 2
            ) + SectorScalar.monomial(Scalar.of(0, m), 1, 0)
            assert got.coefficient(lam) == expected
            assert len(got) == 1


def test_h_minus_one_is_the_zero_mode():
    hm = wang_hamiltonian(-1).density
    for lam in (Partition(), Partition.make([2, 1])):
        got = apply_quantized(hm, FockVector.basis(lam))
        assert got.coefficient(lam) == SectorScalar.monomial(1, 0, 1)
        assert len(got) == 1


def test_vacuum_leading_order_is_the_classical_symbol():
    for d in range(-1, 5):
        got = apply_quantized(wang_hamiltonian(d).density, FockVector.vacuum())
        lead = got.coefficient(Partition()).coefficient(0, d + 2)
        assert lead == classical_density(d).terms_sorted()[0][1]


@settings(max_examples=30, deadline=None)
@given(diff_polys, partitions)
def test_total_derivatives_quantize_to_zero(g, lam):
    assert apply_quantized(dx(g), FockVector.basis(lam)).is_zero()


@settings(max_examples=30, deadline=None)
@given(hbar_free_polys, partitions)
def test_momentum_conservation(f, lam):
    got = apply_quantized(f, FockVector.basis(lam))
    assert got.momenta() <= {lam.momentum}


@settings(max_examples=20, deadline=None)
@given(diff_polys, partitions, partitions)
def test_linearity_in_the_state(f, lam, mu):
    c = SectorScalar.monomial(Scalar.of(2, -3), 1, 0)
    v = FockVector.basis(lam).scale(c) + FockVector.basis(mu)
    assert apply_quantized(f, v) == apply_quantized(
        f, FockVector.basis(lam)
    ).scale(c) + apply_quantized(f, FockVector.basis(mu))


@settings(max_examples=15, deadline=None)
@given(hbar_free_polys, hbar_free_polys, partitions)
def test_commutator_antisymmetry(f, g, lam):
    v = FockVector.basis(lam)
    assert commutator_apply(f, g, v) == -commutator_apply(g, f, v)


@settings(max_examples=15, deadline=None)
@given(diff_polys, partitions)
def test_zero_mode_is_central(g, lam):
    assert commutator_apply(u(0), g, FockVector.basis(lam)).is_zero()


def test_check_commute_pairs():
    rep = check_commute(1, 2, 4)
    d = rep.to_json_dict()
    assert d["witness"] is None
    assert d["pairs"] == [{"d1": 1, "d2": 2, "mmax": 4, "status": "pass"}]
    assert check_commute(-1, 3, 4).witness is None
    assert check_commute(0, 2, 5).witness is None


def test_single_contraction_matches_poisson_bracket():
    """The one-pairing slice of the commutator is hbar times the bracket."""
    f, g = u(0, 3), u(1, 2)
    hbar = SectorScalar.monomial(1, 1, 0)
    p = poisson_density(f, g)
    for m in range(5):
        for lam in partitions_of(m):
            lhs = single_contraction_apply(f, g, lam)
            rhs = apply_quantized(p, FockVector.basis(lam)).scale(hbar)
            assert lhs == rhs
    # the check is not vacuous and it is direction-sensitive
    lam = Partition.make([2, 1])
    lhs = single_contraction_apply(f, g, lam)
    assert not lhs.is_zero()
    wrong = apply_quantized(
        poisson_density(g, f), FockVector.basis(lam)
    ).scale(hbar)
    assert lhs != wrong


def test_classical_consistency_hand_pairs():
    assert classical_consistency(u(0, 3) / 6, u(0, 4) / 24, 4).witness is None
    assert classical_consistency(u(0, 3), u(1, 2), 4).witness is None
    f = u(0) * u(1, 2)
    assert classical_consistency(f, f, 3).witness is None
    with pytest.raises(ValueError):
        classical_consistency(DiffPoly.term(1, ((0, 1),), hbar=1), u(0), 2)


def test_classical_consistency_seeded_pairs():
    rng = random.Random(1723)
    for _ in range(4):
        f = random_density(rng)
        g = random_density(rng)
        assert classical_consistency(f, g, 3).witness is None


def test_commutator_order_hbar_matches_bracket_density():
    # order-hbar slice of [f^, g^] against the hbar-shifted bracket action
    f, g = u(0, 3), u(0) * u(1, 2)
    lam = Partition.make([2])
    p = poisson_density(f, g)
    lhs = commutator_apply(f, g, FockVector.basis(lam)).hbar_coefficient(2)
    rhs = (
        apply_quantized(p, FockVector.basis(lam))
        .scale(SectorScalar.monomial(1, 1, 0))
        .hbar_coefficient(2)
    )
    assert lhs == rhs


def test_functional_representatives_act_identically():
    # H_1's hbar-term is a total derivative, so it cannot act
    h1 = wang_hamiltonian(1).density
    for m in range(4):
        for lam in partitions_of(m):
            v = FockVector.basis(lam)
            assert apply_quantized(h1, v) == apply_quantized(u(0, 3) / 6, v)


def test_cache_clearing_changes_nothing():
    h2 = wang_hamiltonian(2).density
    lam = Partition.make([2, 1, 1])
    before = apply_quantized(h2, FockVector.basis(lam))
    clear_fock_caches()
    assert apply_quantized(h2, FockVector.basis(lam)) == before
