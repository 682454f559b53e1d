"""Tests for problem generators, the LIBSVM reader, and logistic objectives."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from softqn.experiments import fixture_dataset_path
from softqn.problems import (
    PROBLEM_DIMS,
    DatasetFormatError,
    UnknownProblemError,
    cutest_like,
    gen_random_qp,
    load_libsvm,
    logistic_problem,
    minibatch_gradient,
    toy_2d,
)


def _fd_grad(phi, x):
    g = np.empty_like(x)
    for i in range(x.size):
        h = 1e-6 * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (phi(xp) - phi(xm)) / (2 * h)
    return g


def _assert_grad_consistent(problem, points):
    for x in points:
        analytic = problem.grad(x)
        fd = _fd_grad(problem.phi, x)
        scale = max(1.0, float(np.linalg.norm(analytic)))
        assert np.linalg.norm(analytic - fd) <= 1e-5 * scale, problem.name


# ---------------------------------------------------------------------------
# random QPs


def test_qp_gradient_vanishes_at_ones():
    for seed in (0, 1, 17):
        p = gen_random_qp(12, seed)
        npt.assert_allclose(p.grad(np.ones(12)), np.zeros(12), atol=1e-12)


def test_qp_spectrum_pinned():
    for seed in range(30):
        p = gen_random_qp(8, seed)
        eigs = np.linalg.eigvalsh(p.hess(p.x0))
        assert eigs[0] == pytest.approx(0.01, abs=1e-10)
        assert eigs[-1] == pytest.approx(1.0, abs=1e-10)
        assert np.all(eigs >= 0.01 - 1e-10) and np.all(eigs <= 1.0 + 1e-10)
        # condition number is the ratio of the pinned extremes
        assert eigs[-1] / eigs[0] == pytest.approx(100.0, rel=1e-8)


def test_qp_start_suboptimality_positive():
    p = gen_random_qp(20, 3)
    a = p.hess(p.x0)
    gap = p.phi(np.zeros(20)) - p.phi(np.ones(20))
    assert gap == pytest.approx(0.5 * float(np.ones(20) @ a @ np.ones(20)))
    assert gap > 0


def test_qp_rejects_tiny_dimension():
    with pytest.raises(ValueError):
        gen_random_qp(1, 0)


def test_qp_gradient_consistency():
    rng = np.random.default_rng(2)
    p = gen_random_qp(6, 42)
    _assert_grad_consistent(p, [p.x0] + [rng.standard_normal(6) for _ in range(10)])


# ---------------------------------------------------------------------------
# 2-D toy landscape


def test_toy_minimum_value_and_location():
    p = toy_2d()
    x_star = np.array([0.7, -0.7])
    assert p.phi(x_star) == 0.0
    assert p.phi_star == 0.0
    npt.assert_allclose(p.grad(x_star), np.zeros(2), atol=1e-14)


def test_toy_hessian_at_reference_point():
    p = toy_2d()
    h = p.hess(np.array([0.543, 0.0574]))
    assert h[0, 0] == pytest.approx(1.78, abs=5e-3)
    assert h[1, 1] == pytest.approx(-1.72, abs=5e-3)
    assert h[0, 1] == 0.0


def test_toy_critical_point_census():
    # separable double well: each 1-D factor has 3 stationary points, so the sum
    # has 9 critical points: 4 minima, 4 saddles, 1 local maximum
    p = toy_2d()
    roots = []
    for a, b in zip(np.linspace(-1.2, 1.2, 400)[:-1], np.linspace(-1.2, 1.2, 400)[1:]):
        ga = p.grad(np.array([a, 0.0]))[0]
        gb = p.grad(np.array([b, 0.0]))[0]
        if ga == 0.0:
            roots.append(a)
        elif ga * gb < 0:
            lo, hi = a, b
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                gm = p.grad(np.array([mid, 0.0]))[0]
                if ga * gm <= 0:
                    hi = mid
                else:
                    lo = mid
            roots.append(0.5 * (lo + hi))
    assert len(roots) == 3
    minima = saddles = maxima = 0
    for rx in roots:
        for ry in roots:
            h = p.hess(np.array([rx, -ry]))
            signs = int(h[0, 0] > 0) + int(h[1, 1] > 0)
            if signs == 2:
                minima += 1
            elif signs == 1:
                saddles += 1
            else:
                maxima += 1
    assert (minima, saddles, maxima) == (4, 4, 1)


def test_toy_gradient_consistency():
    rng = np.random.default_rng(4)
    p = toy_2d()
    _assert_grad_consistent(p, [p.x0] + [rng.uniform(-1, 1, 2) for _ in range(10)])


# ---------------------------------------------------------------------------
# analytic test-problem registry


def test_arwhead_anchors():
    p = cutest_like("ARWHEAD")
    assert p.dim == 100
    assert p.phi(p.x0) == pytest.approx(3.0 * 99)
    assert p.phi_star == 0.0
    assert np.linalg.norm(p.grad(p.x_star)) <= 1e-6 * (1.0 + np.linalg.norm(p.grad(p.x0)))


def test_dixmaana_anchors():
    p = cutest_like("DIXMAANA")
    assert p.dim == 90
    npt.assert_array_equal(p.x0, 2.0 * np.ones(90))
    assert p.phi(p.x0) == pytest.approx(856.0)
    # minimum value 1.0, attained at the origin where every sum term vanishes
    assert p.phi_star == 1.0
    assert p.phi(np.zeros(90)) == 1.0
    assert np.linalg.norm(p.grad(np.zeros(90))) == 0.0


def test_tridia_minimum():
    p = cutest_like("TRIDIA")
    assert p.phi_star == 0.0
    assert p.phi(p.x_star) == pytest.approx(0.0, abs=1e-20)


def test_registry_gradients_consistent():
    rng = np.random.default_rng(12)
    for name in PROBLEM_DIMS:
        p = cutest_like(name, n=12 if PROBLEM_DIMS[name] == 100 else 12)
        points = [p.x0] + [p.x0 + 0.5 * rng.standard_normal(p.dim) for _ in range(10)]
        _assert_grad_consistent(p, points)


def test_registry_rejects_unknown_name():
    with pytest.raises(UnknownProblemError):
        cutest_like("NOSUCH")


def test_registry_custom_dimension():
    p = cutest_like("arwhead", n=10)
    assert p.dim == 10
    assert p.phi(p.x0) == pytest.approx(3.0 * 9)


# ---------------------------------------------------------------------------
# LIBSVM reader


def test_libsvm_parses_sparse_rows(tmp_path):
    f = tmp_path / "tiny.libsvm"
    f.write_text("+1 1:0.5 3:2.0\n0 2:1.0\n")
    data = load_libsvm(f, normalize=False)
    assert data.n_samples == 2 and data.n_features == 3
    npt.assert_allclose(data.features[0], [0.5, 0.0, 2.0])
    npt.assert_allclose(data.features[1], [0.0, 1.0, 0.0])
    npt.assert_array_equal(data.labels, [1.0, -1.0])  # 0 maps to -1


def test_libsvm_normalizes_columns(tmp_path):
    f = tmp_path / "tiny.libsvm"
    f.write_text("+1 1:3.0 2:1.0\n-1 1:4.0\n")
    data = load_libsvm(f)
    norms = np.linalg.norm(data.features, axis=0)
    npt.assert_allclose(norms, [1.0, 1.0], atol=1e-12)


def test_libsvm_error_reports_line_numbers(tmp_path):
    f = tmp_path / "bad.libsvm"
    f.write_text("+1 1:0.5\nnotalabel 1:1.0\n")
    with pytest.raises(DatasetFormatError, match=":2:"):
        load_libsvm(f)
    f.write_text("+1 1:0.5\n-1 1:oops\n")
    with pytest.raises(DatasetFormatError, match=":2:"):
        load_libsvm(f)
    f.write_text("+1 0:0.5\n")
    with pytest.raises(DatasetFormatError, match="index 0"):
        load_libsvm(f)


def test_libsvm_rejects_empty_file(tmp_path):
    f = tmp_path / "empty.libsvm"
    f.write_text("\n\n")
    with pytest.raises(DatasetFormatError, match="no data rows"):
        load_libsvm(f)


def test_libsvm_fixture_shape():
    data = load_libsvm(fixture_dataset_path())
    assert data.n_features == 22
    assert data.n_samples == 200
    assert set(np.unique(data.labels)) == {-1.0, 1.0}
    norms = np.linalg.norm(data.features, axis=0)
    nz = norms > 0
    npt.assert_allclose(norms[nz], np.ones(nz.sum()), atol=1e-12)


# ---------------------------------------------------------------------------
# logistic regression


def test_logistic_value_at_origin_is_log2():
    data = load_libsvm(fixture_dataset_path())
    p = logistic_problem(data, rho=0.1)
    assert p.dim == 23  # intercept first
    assert p.phi(np.zeros(p.dim)) == pytest.approx(math.log(2.0))


def test_logistic_gradient_consistency():
    rng = np.random.default_rng(15)
    data = load_libsvm(fixture_dataset_path())
    p = logistic_problem(data, rho=0.1)
    _assert_grad_consistent(p, [p.x0] + [0.5 * rng.standard_normal(p.dim) for _ in range(10)])


def test_minibatch_full_batch_equals_gradient():
    data = load_libsvm(fixture_dataset_path())
    p = logistic_problem(data, rho=0.1)
    rng = np.random.default_rng(0)
    x = rng.standard_normal(p.dim) * 0.3
    g_batch = minibatch_gradient(data, 0.1, x, batch=data.n_samples, rng=rng)
    npt.assert_allclose(g_batch, p.grad(x), atol=1e-12)


def test_minibatch_is_unbiased():
    data = load_libsvm(fixture_dataset_path())
    rho = 0.1
    p = logistic_problem(data, rho)
    rng = np.random.default_rng(1)
    x = 0.2 * rng.standard_normal(p.dim)
    full = p.grad(x)
    draws = np.array([minibatch_gradient(data, rho, x, 20, rng) for _ in range(4000)])
    err = draws.mean(axis=0) - full
    # three-sigma band of the Monte Carlo mean, coordinatewise
    band = 3.0 * draws.std(axis=0, ddof=1) / math.sqrt(draws.shape[0])
    assert np.all(np.abs(err) <= band + 1e-12)


def test_minibatch_validates_batch_size():
    data = load_libsvm(fixture_dataset_path())
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        minibatch_gradient(data, 0.1, np.zeros(23), 0, rng)
    with pytest.raises(ValueError):
        minibatch_gradient(data, 0.1, np.zeros(23), data.n_samples + 1, rng)
