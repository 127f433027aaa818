import itertools
import math

import numpy as np
import pytest

from welchbanach.asf import DualPair, LpSpace, frame_operator, gram
from welchbanach.errors import LiftTooLarge, Overflow
from welchbanach.fixtures import dual_basis, mercedes_benz, random_hilbert_pair, random_pair
from welchbanach.numkernel import eigen, spectral_verdict
from welchbanach.symlift import (
    explicit_lift,
    is_flat,
    lifted_frame_spectrum,
    lifted_gram,
    lifted_tightness,
    multinomial,
    sym_basis,
    sym_dim,
)


def test_sym_dim():
    assert sym_dim(2, 2) == 3
    assert sym_dim(3, 2) == 6
    for d in range(1, 12):
        assert sym_dim(d, 1) == d
        assert sym_dim(1, d) == 1
    with pytest.raises(ValueError):
        sym_dim(0, 2)
    with pytest.raises(Overflow):
        sym_dim(10**6, 10**5)


def test_sym_basis_enumerates_multi_indices():
    for d, m in [(2, 2), (3, 3), (4, 2)]:
        basis = sym_basis(d, m)
        assert len(basis) == sym_dim(d, m)
        assert basis == sorted(basis)
        assert all(sum(a) == m and len(a) == d for a in basis)
        assert len(set(basis)) == len(basis)


def test_multinomial_coefficients_sum_to_power():
    # sum over |alpha| = m of m!/alpha! equals d^m
    for d, m in [(2, 3), (3, 2), (4, 4)]:
        assert sum(multinomial(a) for a in sym_basis(d, m)) == d**m


def test_lifted_gram_examples():
    g = gram(mercedes_benz())
    np.testing.assert_array_equal(lifted_gram(g, 1), g)
    np.testing.assert_array_equal(lifted_gram(np.eye(4), 3), np.eye(4))
    np.testing.assert_allclose(lifted_gram(g, 2)[~np.eye(3, dtype=bool)], 0.25)


def test_explicit_lift_m1_is_identity():
    pair = mercedes_benz()
    assert explicit_lift(pair, 1) is pair


def test_explicit_lift_two_dimensional_expansion(rng):
    for _ in range(10):
        a, b, c, e = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        pair = DualPair(LpSpace(2, 2.0, "complex"), [[a, b]], [[c, e]])
        lifted = explicit_lift(pair, 2)
        value = lifted.functionals[0] @ lifted.vectors[0]
        assert value == pytest.approx(c * c * a * a + 2 * (c * e) * (a * b) + e * e * b * b, rel=1e-12)
        assert value == pytest.approx((a * c + b * e) ** 2, rel=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_pairing_power_law(rng, m):
    pair = random_pair(rng, 5, 3, p=3.0)
    lifted = explicit_lift(pair, m)
    assert lifted.d == sym_dim(3, m)
    g = gram(pair)
    np.testing.assert_allclose(gram(lifted), g**m, rtol=1e-10, atol=1e-12)


def test_explicit_lift_cap():
    with pytest.raises(LiftTooLarge):
        explicit_lift(dual_basis(20), 5)


def test_lifted_frame_spectrum_examples():
    s = lifted_frame_spectrum(dual_basis(3), 1)
    np.testing.assert_allclose(s.eigenvalues, 1)
    assert s.zero_padding == 0
    s = lifted_frame_spectrum(mercedes_benz(), 1)
    np.testing.assert_allclose(s.full(), [1.5, 1.5, 0], atol=1e-14)
    s = lifted_frame_spectrum(dual_basis(2), 3)
    assert s.zero_padding == 2 and s.order == 4


def _nonzero_sorted(w, rho):
    w = np.asarray(w)
    w = w[np.abs(w) > 1e-9 * rho]
    return np.sort_complex(w)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_lifted_spectrum_matches_explicit_frame_operator(rng, m):
    pair = random_hilbert_pair(rng, 6, 3)
    ours = lifted_frame_spectrum(pair, m).full()
    theirs = eigen(frame_operator(explicit_lift(pair, m))).full()
    rho = np.max(np.abs(ours))
    np.testing.assert_allclose(_nonzero_sorted(ours, rho), _nonzero_sorted(theirs, rho), rtol=1e-8, atol=1e-8 * rho)


def test_is_flat():
    from welchbanach.numkernel import Spectrum

    assert is_flat(Spectrum(np.array([2.0, 2.0]), 1.0, 0.0), 2)
    assert not is_flat(Spectrum(np.array([2.0, 1.0]), 1.0, 0.0), 2)
    assert is_flat(Spectrum(np.array([2.0, 2.0, 0.0]), 1.0, 0.0), 2)
    assert not is_flat(Spectrum(np.array([2.0, 2.0]), 1.0, 0.0, 1), 3)


def test_lifted_tightness():
    from welchbanach.fixtures import hesse_sic, sic_qubit

    assert lifted_tightness(mercedes_benz(), 1)
    assert not lifted_tightness(mercedes_benz(), 2)
    # a SIC is a 2-design: its lift to Sym^2 is tight
    assert lifted_tightness(sic_qubit(), 2)
    assert lifted_tightness(hesse_sic(), 2)


def test_sym_dim_agrees_with_big_integer_binomial():
    import sys

    for d in range(1, 45):
        for m in range(1, 45):
            ref = math.comb(d + m - 1, m)
            if ref > sys.maxsize:
                with pytest.raises(Overflow):
                    sym_dim(d, m)
            else:
                assert sym_dim(d, m) == ref


def test_nilpotent_lift_is_flagged_not_diagonalizable():
    # +-1 entries with sum of cubes zero make G**3 a rank one nilpotent matrix
    pair = DualPair(LpSpace(1, 2.0, "real"), np.array([[-1.0], [1], [-1], [-1]]), np.array([[1.0], [1], [-1], [1]]))
    assert not spectral_verdict(lifted_frame_spectrum(pair, 3)).diagonalizable
