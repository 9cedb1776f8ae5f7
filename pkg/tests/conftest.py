"""Shared strategies and helpers for the test suite.

Random differential polynomials are built from explicit composition data so
that shrinking stays readable: a draw is a list of (coefficient, jets, hbar)
triples rather than an opaque object.
"""

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from qkdv import DiffPoly, Scalar

small_fraction = st.builds(
    Fraction,
    st.integers(min_value=-6, max_value=6).filter(lambda n: n != 0),
    st.integers(min_value=1, max_value=4),
)

small_scalar = st.builds(Scalar.of, small_fraction, small_fraction)

# A monomial as (coefficient, (jet orders), hbar power).  Weight stays small
# so Fock-side tests remain fast: sum (s_i + 1) <= 6.
_jets = st.lists(
    st.integers(min_value=0, max_value=3), min_size=1, max_size=3
).filter(lambda js: sum(j + 1 for j in js) <= 6)


def _to_poly(triples) -> DiffPoly:
    total = DiffPoly.zero()
    for coeff, jets, h in triples:
        uexp: dict[int, int] = {}
        for j in jets:
            uexp[j] = uexp.get(j, 0) + 1
        total = total + DiffPoly.term(coeff, tuple(sorted(uexp.items())), hbar=h)
    return total


diff_polys = st.builds(
    _to_poly,
    st.lists(
        st.tuples(small_scalar, _jets, st.integers(min_value=0, max_value=2)),
        min_size=1,
        max_size=3,
    ),
)

hbar_free_polys = st.builds(
    _to_poly,
    st.lists(st.tuples(small_scalar, _jets, st.just(0)), min_size=1, max_size=3),
)


@pytest.fixture
def tmp_cache(tmp_path):
    """An isolated cache directory, so tests never share disk state."""
    d = tmp_path / "cache"
    d.mkdir()
    return d
