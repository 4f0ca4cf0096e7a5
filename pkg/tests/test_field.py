import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import naive_energy, naive_field

from dipolecone import FieldKernel, field_direct, field_fft, total_energy
from dipolecone.field import energy_from_field, field_evaluator


def random_spins(rng, n):
    s = rng.normal(size=(n, 3))
    return s / np.linalg.norm(s, axis=1, keepdims=True)


def max_rel_dev(a, b):
    return np.abs(a - b).max() / np.abs(b).max()


def test_single_site_has_no_field():
    s = np.array([[0.3, 0.4, np.sqrt(0.75)]])
    np.testing.assert_array_equal(field_direct(s), np.zeros((1, 3)))
    np.testing.assert_array_equal(field_fft(s, FieldKernel(1)), np.zeros((1, 3)))


def test_two_axial_spins():
    s = np.array([[1.0, 0, 0], [1.0, 0, 0]])
    np.testing.assert_allclose(field_direct(s), [[2, 0, 0], [2, 0, 0]])


def test_two_transverse_spins():
    s = np.array([[0, 1.0, 0], [0, 1.0, 0]])
    np.testing.assert_allclose(field_direct(s), [[0, -1, 0], [0, -1, 0]])


@pytest.mark.parametrize("alpha", [3.0, 4.0])
@pytest.mark.parametrize("n", [2, 5, 9])
def test_direct_matches_naive_loop(rng, n, alpha):
    s = random_spins(rng, n)
    assert max_rel_dev(field_direct(s, alpha, 1.7, 0.8), naive_field(s, alpha, 1.7, 0.8)) < 1e-12


@pytest.mark.parametrize("alpha", [3.0, 4.0])
@pytest.mark.parametrize("n", [2, 3, 17, 64, 257])
def test_fft_matches_direct(rng, n, alpha):
    kernel = FieldKernel(n, alpha)
    for _ in range(5):
        s = random_spins(rng, n)
        assert max_rel_dev(field_fft(s, kernel), field_direct(s, alpha)) < 1e-10


def test_kernel_padding_and_symmetry():
    k = FieldKernel(100, 3.0)
    assert k.length == 256
    assert k.kernel[0] == 0.0
    np.testing.assert_array_equal(k.kernel[1:], k.kernel[1:][::-1])


def test_kernel_size_mismatch_rejected(rng):
    with pytest.raises(ValueError, match="built for 10 sites"):
        field_fft(random_spins(rng, 11), FieldKernel(10))


def test_evaluator_crossover(rng):
    for n in (10, 100):
        s = random_spins(rng, n)
        assert max_rel_dev(field_evaluator(n, 3.0, 2.0)(s), field_direct(s, 3.0, 2.0)) < 1e-10


@settings(max_examples=30, deadline=None)
@given(a=arrays(float, (12, 3), elements=st.floats(-1, 1)),
       b=arrays(float, (12, 3), elements=st.floats(-1, 1)))
def test_field_is_linear_in_spins(a, b):
    kernel = FieldKernel(12)
    np.testing.assert_allclose(field_fft(a + b, kernel),
                               field_fft(a, kernel) + field_fft(b, kernel), atol=1e-12)
    np.testing.assert_allclose(field_direct(a + b), field_direct(a) + field_direct(b), atol=1e-12)


def test_reflection_covariance(rng):
    s = random_spins(rng, 31)
    np.testing.assert_allclose(field_direct(s[::-1]), field_direct(s)[::-1], atol=1e-14)


def test_field_sign_flips_field(rng):
    s = random_spins(rng, 8)
    np.testing.assert_allclose(field_direct(s, field_sign=-1), -field_direct(s))


def test_energy_examples():
    assert total_energy(np.array([[0, 1.0, 0], [0, 1.0, 0]])) == pytest.approx(1.0)
    assert total_energy(np.array([[1.0, 0, 0], [1.0, 0, 0]])) == pytest.approx(-2.0)


def test_energy_matches_pair_loop(rng):
    s = random_spins(rng, 10)
    assert total_energy(s, 3.0, 1.3) == pytest.approx(naive_energy(s, 3.0, 1.3), rel=1e-12, abs=1e-12)
    assert energy_from_field(s, field_direct(s, 3.0, 1.3)) == pytest.approx(
        naive_energy(s, 3.0, 1.3), rel=1e-12, abs=1e-12)


def test_field_is_negative_energy_gradient(rng):
    s = random_spins(rng, 6)
    h = 1e-6
    grad = np.zeros_like(s)
    for i in range(6):
        for c in range(3):
            sp, sm = s.copy(), s.copy()
            sp[i, c] += h
            sm[i, c] -= h
            grad[i, c] = (naive_energy(sp, 4.0) - naive_energy(sm, 4.0)) / (2 * h)
    np.testing.assert_allclose(field_direct(s, 4.0), -grad, atol=1e-8)


def _best_time(fn, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_cost_scaling(rng):
    # soft check: doubling N roughly quadruples the direct sum, the FFT grows ~2x
    n = 1024
    s1, s2 = random_spins(rng, n), random_spins(rng, 2 * n)
    k1, k2 = FieldKernel(n), FieldKernel(2 * n)
    direct_ratio = _best_time(lambda: field_direct(s2)) / _best_time(lambda: field_direct(s1))
    fft_ratio = _best_time(lambda: field_fft(s2, k2)) / _best_time(lambda: field_fft(s1, k1))
    assert direct_ratio > 2.0
    assert fft_ratio < direct_ratio
