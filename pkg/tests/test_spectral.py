import math

import numpy as np
import pytest

from _helpers import make_rng, random_game, random_kernel
from parrondo.errors import ConvergenceFailure, DegenerateDistribution
from parrondo.games import PeriodicGame, fairness_constant
from parrondo.kernels import StepDistribution, lift
from parrondo.spectral import (
    a_matrices,
    build_A,
    char_poly,
    double_root_at_one,
    eigen_magnitudes,
    monodromy,
    polynomial_roots,
)


# ---------------------------------------------------------------- build_A

def test_build_A_symmetric_walk():
    m = build_A(StepDistribution({-1: 0.5, 1: 0.5}), 1, 1)
    assert np.array_equal(m, [[2.0, -1.0], [1.0, 0.0]])


def test_build_A_lazy_walk_entries():
    a, b, c = 0.5, 0.2, 0.3
    m = build_A(StepDistribution({-1: c, 0: b, 1: a}), 1, 1)
    assert m == pytest.approx(np.array([[(1 - b) / c, -a / c], [1.0, 0.0]]))


def test_build_A_order_six_pattern():
    a, b, c, d = 0.1, 0.2, 0.3, 0.4
    m = build_A(StepDistribution({-3: b, -1: d, 1: c, 3: a}), 3, 3)
    assert m[0] == pytest.approx([0.0, -d / b, 1.0 / b, -c / b, 0.0, -a / b])
    assert np.array_equal(m[1:], np.eye(6)[:5])


def test_build_A_requires_extremal_left_mass():
    with pytest.raises(DegenerateDistribution):
        build_A(StepDistribution({-1: 0.0, 1: 1.0}), 1, 1)


def test_build_A_rows_sum_to_one():
    rng = make_rng(11)
    for _ in range(20):
        r = int(rng.integers(1, 4))
        left = int(rng.integers(1, 4))
        kernel = random_kernel(rng, int(rng.integers(1, 4)), r, left)
        for m in a_matrices(kernel):
            assert m.sum(axis=1) == pytest.approx(np.ones(r + left), abs=1e-12)


# ---------------------------------------------------------------- monodromy

def test_monodromy_symmetric_two_period():
    m = monodromy(lift(PeriodicGame.of(0.5, 0.5)))
    assert np.array_equal(m, [[3.0, -2.0], [2.0, -1.0]])


def test_monodromy_det_equals_fairness_constant():
    rng = make_rng(12)
    for _ in range(30):
        game = random_game(rng, int(rng.integers(1, 6)))
        m = monodromy(lift(game))
        assert np.linalg.det(m) == pytest.approx(fairness_constant(game), rel=1e-10)


def test_monodromy_single_residue_is_one_factor():
    kernel = lift(PeriodicGame.of(0.7))
    assert np.array_equal(monodromy(kernel), a_matrices(kernel)[0])


# ---------------------------------------------------------------- char_poly

def test_char_poly_examples():
    assert char_poly(np.eye(2)) == pytest.approx([1.0, -2.0, 1.0])
    assert char_poly(np.array([[3.0, -2.0], [2.0, -1.0]])) == pytest.approx([1.0, -2.0, 1.0])
    assert char_poly(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx([1.0, 0.0, -1.0])


def test_char_poly_matches_numpy_on_random_matrices():
    rng = make_rng(13)
    for n in (2, 3, 4, 6):
        for _ in range(10):
            m = rng.standard_normal((n, n))
            assert char_poly(m) == pytest.approx(np.poly(m), rel=1e-9, abs=1e-9)


# ---------------------------------------------------------------- roots / magnitudes

def test_polynomial_roots_simple():
    roots = sorted(polynomial_roots([1.0, -3.0, 2.0]).real)
    assert roots == pytest.approx([1.0, 2.0], abs=1e-12)


def test_polynomial_roots_handles_zero_roots():
    roots = polynomial_roots([1.0, -1.0, 0.0, 0.0])
    assert sorted(np.abs(roots)) == pytest.approx([0.0, 0.0, 1.0], abs=1e-12)


def test_eigen_magnitudes_identity():
    spec = eigen_magnitudes(np.eye(2))
    assert spec.magnitudes == pytest.approx([1.0, 1.0], abs=1e-6)
    assert spec.magnitudes[0] * spec.magnitudes[1] == pytest.approx(1.0, abs=1e-9)


def test_eigen_magnitudes_double_root_pair_product_is_stable():
    spec = eigen_magnitudes(np.array([[3.0, -2.0], [2.0, -1.0]]))
    assert spec.magnitudes == pytest.approx([1.0, 1.0], abs=1e-6)
    assert spec.magnitudes[0] * spec.magnitudes[1] == pytest.approx(1.0, abs=1e-9)


def test_eigen_magnitudes_diagonal():
    spec = eigen_magnitudes(np.diag([2.0, 0.5]))
    assert spec.magnitudes == pytest.approx([0.5, 2.0], abs=1e-12)


def test_eigen_magnitudes_matches_numpy():
    rng = make_rng(14)
    for n, left in ((1, 1), (2, 2), (3, 3)):
        for _ in range(15):
            kernel = random_kernel(rng, int(rng.integers(1, 4)), n, left)
            m = monodromy(kernel)
            spec = eigen_magnitudes(m)
            expected = np.sort(np.abs(np.linalg.eigvals(m)))
            assert spec.magnitudes == pytest.approx(expected, rel=1e-7, abs=1e-9)


def test_root_sum_matches_trace():
    rng = make_rng(15)
    for _ in range(20):
        kernel = random_kernel(rng, int(rng.integers(1, 4)), 2, 2)
        m = monodromy(kernel)
        roots = polynomial_roots(char_poly(m))
        assert roots.sum().real == pytest.approx(np.trace(m), rel=1e-9, abs=1e-9)
        assert roots.sum().imag == pytest.approx(0.0, abs=1e-9)


def test_log_magnitude_sum_matches_log_det():
    rng = make_rng(16)
    for _ in range(30):
        kernel = random_kernel(rng, int(rng.integers(1, 4)), 3, 3)
        m = monodromy(kernel)
        spec = eigen_magnitudes(m)
        lhs = sum(math.log(v) for v in spec.magnitudes)
        rhs = math.log(abs(np.linalg.det(m)))
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_monodromy_always_has_eigenvalue_one():
    # constant functions solve the backward equation, so 1 is always a root
    rng = make_rng(17)
    for _ in range(20):
        kernel = random_kernel(rng, int(rng.integers(1, 4)), 2, 2)
        roots = polynomial_roots(char_poly(monodromy(kernel)))
        assert min(abs(r - 1.0) for r in roots) == pytest.approx(0.0, abs=1e-7)


def test_convergence_failure_is_raised_for_non_finite_input():
    with pytest.raises(ValueError):
        eigen_magnitudes(np.array([[np.nan, 0.0], [0.0, 1.0]]))


# ---------------------------------------------------------------- double root check

def test_double_root_examples():
    assert double_root_at_one(np.array([[3.0, -2.0], [2.0, -1.0]]), 1e-9)
    assert double_root_at_one(np.eye(2), 1e-9)
    assert not double_root_at_one(np.diag([2.0, 0.5]), 1e-9)


def test_cyclic_rotation_leaves_magnitudes_invariant():
    rng = make_rng(18)
    for _ in range(15):
        n = int(rng.integers(2, 5))
        kernel = random_kernel(rng, n, 2, 2)
        mats = a_matrices(kernel)
        order = list(range(1, n)) + [0]
        base = None
        for shift in range(n):
            rotated = order[shift:] + order[:shift]
            m = mats[rotated[0]]
            for k in rotated[1:]:
                m = m @ mats[k]
            mags = eigen_magnitudes(m).magnitudes
            if base is None:
                base = mags
            else:
                assert np.log(mags) == pytest.approx(np.log(base), abs=1e-9)
