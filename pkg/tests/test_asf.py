import math

import numpy as np
import pytest

from welchbanach.asf import (
    DualPair,
    LpSpace,
    analysis,
    frame_operator,
    gram,
    hilbert_embed,
    is_hilbert_embedded,
    is_normalized,
    lp_norm,
    normalization_report,
    pairing,
    synthesis,
    tightness,
    trace_S,
    trace_S2,
)
from welchbanach.errors import DimensionMismatch, IndexOutOfRange, InvalidPair, WrongExponent
from welchbanach.fixtures import dual_basis, duplicated_pair, mercedes_benz, random_pair, sic_qubit

MB_ROWS = np.array([[math.cos(a), math.sin(a)] for a in (math.pi / 2 + 2 * math.pi * k / 3 for k in range(3))])


def test_space_dual_exponents():
    assert LpSpace(3, 2.0).q == 2.0
    assert LpSpace(3, 1.0).q == math.inf
    assert LpSpace(3, math.inf).q == 1.0
    assert LpSpace(3, 4.0).q == pytest.approx(4 / 3)
    for bad in [dict(dim=0), dict(dim=2, p=0.5), dict(dim=2, field="quaternion")]:
        with pytest.raises(ValueError):
            LpSpace(**bad)


def test_lp_norm_matches_numpy():
    x = np.array([[3.0, -4.0, 0.0], [1e200, 1e200, 0.0]])
    for p in [1.0, 2.0, 3.0, math.inf]:
        ref = np.linalg.norm(x[0], p)
        assert lp_norm(x, p)[0] == pytest.approx(ref)
    # scaled evaluation does not overflow
    assert lp_norm(x, 3.0)[1] == pytest.approx(1e200 * 2 ** (1 / 3))


def test_pairing_examples():
    basis = dual_basis(3)
    assert pairing(basis, 1, 1) == 1
    assert pairing(basis, 0, 2) == 0
    pair = hilbert_embed(np.array([[1.0, 0.0], [1 / math.sqrt(2), 1 / math.sqrt(2)]]))
    assert pairing(pair, 0, 1) == pytest.approx(1 / math.sqrt(2))
    with pytest.raises(IndexOutOfRange):
        pairing(basis, 3, 0)
    with pytest.raises(IndexOutOfRange):
        pairing(basis, -1, 0)


def test_pairing_is_bilinear_not_sesquilinear():
    pair = DualPair(LpSpace(1, 2.0, "complex"), [[1j]], [[1j]])
    assert pairing(pair, 0, 0) == -1


def test_gram_examples():
    np.testing.assert_allclose(gram(dual_basis(4)), np.eye(4))
    g = gram(mercedes_benz())
    off = g[~np.eye(3, dtype=bool)]
    np.testing.assert_allclose(off, -0.5)
    single = DualPair(LpSpace(2, 2.0, "real"), [[2.0, 0.0]], [[0.5, 0.0]])
    np.testing.assert_allclose(gram(single), [[1.0]])


def test_frame_operator_examples():
    np.testing.assert_allclose(frame_operator(dual_basis(3)), np.eye(3))
    np.testing.assert_allclose(frame_operator(mercedes_benz()), 1.5 * np.eye(2), atol=1e-15)
    single = DualPair(LpSpace(2, 2.0, "real"), [[1.0, 0.0]], [[1.0, 0.0]])
    np.testing.assert_allclose(frame_operator(single), [[1, 0], [0, 0]])


def test_frame_operator_acts_as_sum_of_rank_ones(rng):
    pair = random_pair(rng, 5, 3)
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    direct = sum((pair.functionals[j] @ x) * pair.vectors[j] for j in range(5))
    np.testing.assert_allclose(frame_operator(pair) @ x, direct)


def test_analysis_and_synthesis():
    basis = dual_basis(3)
    np.testing.assert_allclose(analysis(basis, [1, 0, 0]), [1, 0, 0])
    np.testing.assert_allclose(analysis(basis, np.zeros(3)), 0)
    np.testing.assert_allclose(analysis(mercedes_benz(), [1.0, 0.0]), MB_ROWS[:, 0])
    np.testing.assert_allclose(analysis(mercedes_benz(), [1.0, 0.0]), [0, -math.sqrt(3) / 2, math.sqrt(3) / 2], atol=1e-15)
    np.testing.assert_allclose(synthesis(basis, [0, 1, 0]), [0, 1, 0])
    np.testing.assert_allclose(synthesis(basis, np.zeros(3)), 0)
    with pytest.raises(DimensionMismatch):
        analysis(basis, [1, 0])
    with pytest.raises(DimensionMismatch):
        synthesis(basis, [1, 0])


def test_mercedes_benz_along_a_frame_vector():
    # Hilbert pairing against tau_1 gives its cosines with the other vectors
    mb = mercedes_benz()
    np.testing.assert_allclose(analysis(mb, mb.vectors[0]), [1, -0.5, -0.5], atol=1e-15)


def test_synthesis_after_analysis_is_frame_operator(rng):
    pair = random_pair(rng, 7, 4, p=3.0)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    np.testing.assert_allclose(synthesis(pair, analysis(pair, x)), frame_operator(pair) @ x, atol=1e-12)


def test_traces():
    assert trace_S(dual_basis(4)) == pytest.approx(4)
    assert trace_S(mercedes_benz()) == pytest.approx(3)
    assert trace_S(sic_qubit()) == pytest.approx(4)
    assert trace_S2(dual_basis(4)) == pytest.approx(4)
    assert trace_S2(mercedes_benz()) == pytest.approx(4.5)
    single = DualPair(LpSpace(2, 2.0, "real"), [[1.0, 0.0]], [[1.0, 0.0]])
    assert trace_S2(single) == pytest.approx(1)


def test_tightness():
    t = tightness(dual_basis(3))
    assert t.tight and t.lam == pytest.approx(1)
    t = tightness(mercedes_benz())
    assert t.tight and t.lam == pytest.approx(1.5)
    t = tightness(duplicated_pair())
    assert not t.tight and t.lam == pytest.approx(1.5)


def test_normalization_report():
    assert normalization_report(dual_basis(3)).worst == 0
    pair = DualPair(LpSpace(2, 2.0, "real"), 2 * np.eye(2), np.eye(2))
    rep = normalization_report(pair)
    assert rep.max_vec_norm_dev == pytest.approx(1)
    assert rep.max_fun_norm_dev == 0
    assert rep.max_pairing_dev == pytest.approx(1)
    assert normalization_report(mercedes_benz()).worst < 1e-15
    for p in [1.0, math.inf]:
        assert normalization_report(dual_basis(3, p)).worst == 0


def test_hilbert_embed():
    v = np.array([[1.0, 2.0], [3.0, 4.0]])
    pair = hilbert_embed(v)
    np.testing.assert_array_equal(pair.functionals, pair.vectors)
    assert pair.space.field == "real"
    pair = hilbert_embed(np.array([[1j, 0]]))
    assert pairing(pair, 0, 0) == pytest.approx(1)
    sic = sic_qubit()
    np.testing.assert_allclose(np.diag(gram(sic)), 1)
    assert is_hilbert_embedded(sic) and is_normalized(sic)
    with pytest.raises(WrongExponent):
        hilbert_embed(v, LpSpace(2, 3.0, "real"))


def test_pair_validation():
    space = LpSpace(2, 2.0, "real")
    with pytest.raises(DimensionMismatch):
        DualPair(space, np.ones((2, 3)), np.ones((2, 3)))
    with pytest.raises((InvalidPair, DimensionMismatch)):
        DualPair(space, np.ones((2, 2)), np.ones((3, 2)))
    with pytest.raises(InvalidPair):
        DualPair(space, [[np.inf, 0.0]], [[1.0, 0.0]])
    with pytest.raises(InvalidPair):
        DualPair(space, [[1j, 0.0]], [[1.0, 0.0]])
    # imaginary noise below 1e-12 is accepted on the real field
    DualPair(space, [[1 + 1e-14j, 0.0]], [[1.0, 0.0]])


def test_pair_is_immutable():
    pair = dual_basis(2)
    with pytest.raises(ValueError):
        pair.vectors[0, 0] = 3.0


def test_scaled_pair_keeps_gram(rng):
    pair = random_pair(rng, 4, 3)
    np.testing.assert_allclose(gram(pair.scaled(2.5 - 1j)), gram(pair), atol=1e-14)


def test_pair_does_not_freeze_caller_arrays():
    v = np.eye(2, dtype=complex)
    pair = DualPair(LpSpace(2, 2.0, "complex"), v, v)
    v[0, 0] = 5.0
    assert pair.vectors[0, 0] == 1.0
