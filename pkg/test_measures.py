"""
测试范数与权重

测试场景：
1. Lᵖ 网格/环面/频带范数的已知值
2. 加权 L² 范数与 Plancherel 一致
3. A₂ 特征值：常数、阶跃、幂权重（对照随机区间暴力搜索）
4. 二进格平均权重
"""

import os
import sys

import numpy as np
import pytest

# 添加项目路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.errors import GridError, IntervalError, QuadratureError, ValidationError, WeightError
from src.measures import (
    NormEstimate, a2_characteristic, a2_characteristic_periodic, band_lp_norm, dyadic_average_weight,
    interval_lengths, lp_norm_grid, lp_norm_periodic, lp_norm_windowed, make_constant_weight,
    make_periodic_power_weight, make_power_weight, make_step_weight, midpoint_weights,
    require_accepted, weighted_l2_norm,
)
from src.models.grid import GridFunction
from src.models.intervals import FrequencyInterval
from src.models.lattice import DyadicLattice, lattice_triple
from src.models.trig import TrigPolynomial
from src.models.weight import A2Report, Weight, WeightKind
from src.spectral import energy, forward_transform, project
from src.squarefn import square_function_periodic_S2

UNIT = FrequencyInterval(0.0, 1.0)


def _gaussian(T=8.0, n=4096):
    return GridFunction.from_callable(lambda x: np.exp(-np.pi * x ** 2), T, n)


def test_midpoint_weights_sum_to_domain_length():
    x = -1.0 + np.arange(64) / 32
    w = midpoint_weights(x, 1 / 32, FrequencyInterval(-0.3, 0.55))
    assert w.sum() == pytest.approx(0.85, abs=1e-14)
    periodic = midpoint_weights(x, 1 / 32, FrequencyInterval(-1.0, 1.0), period=2.0)
    np.testing.assert_allclose(periodic, 1 / 32)


def test_constant_function_norm():
    f = GridFunction.from_callable(lambda x: np.full_like(x, -3.0), 1.0, 256)
    for p in (1.0, 1.5, 2.0, 4.0):
        est = lp_norm_grid(f, p, UNIT, tol=1e-12)
        assert est.value == pytest.approx(3.0, abs=1e-12)
        assert est.refinement_error < 1e-12


def test_sine_l1_norm():
    """∫₀¹ |sin 2πx| dx = 2/π"""
    f = GridFunction.from_callable(lambda x: np.sin(2 * np.pi * x), 1.0, 1 << 13)
    est = require_accepted(lp_norm_grid(f, 1.0, UNIT, tol=1e-4))
    assert est.value == pytest.approx(2 / np.pi, abs=1e-6)


def test_l2_norm_matches_parseval():
    f = _gaussian()
    est = lp_norm_grid(f, 2.0)
    assert est.value ** 2 == pytest.approx(energy(f), rel=1e-12)
    assert est.value == pytest.approx(2 ** -0.25, rel=1e-10)


def test_lp_norm_validation():
    f = _gaussian()
    with pytest.raises(IntervalError):
        lp_norm_grid(f, 2.0, (7.0, 9.0))
    with pytest.raises(ValidationError):
        lp_norm_grid(f, 0.5)


def test_require_accepted_rejects_large_error():
    with pytest.raises(QuadratureError) as info:
        require_accepted(NormEstimate(1.0, 0.1, 64), tol=1e-3)
    assert info.value.refinement_error == 0.1
    with pytest.raises(QuadratureError):
        require_accepted(NormEstimate(float("nan"), 0.0, 64), tol=1e-3)


def test_periodic_norms_of_single_mode():
    f = TrigPolynomial({5: 3.0 + 4.0j})
    for p in (1.0, 1.5, 2.0, 3.0):
        assert lp_norm_periodic(f, p, tol=1e-8).value == pytest.approx(5.0, abs=1e-12)


def test_periodic_l1_of_two_modes():
    """‖1 + e^{2πiθ}‖₁ = ∫|2cos πθ| = 4/π"""
    f = TrigPolynomial({0: 1.0, 1: 1.0})
    est = require_accepted(lp_norm_periodic(f, 1.0, tol=1e-6), tol=1e-6)
    assert est.value == pytest.approx(4 / np.pi, abs=1e-6)


def test_periodic_l2_matches_plancherel():
    rng = np.random.default_rng(7)
    f = TrigPolynomial.random(60, rng)
    assert lp_norm_periodic(f, 2.0).value == pytest.approx(f.l2_norm(), rel=1e-10)
    S = square_function_periodic_S2(f)
    assert lp_norm_periodic(S, 2.0).value == pytest.approx(f.l2_norm(), rel=1e-10)


def test_band_norm_matches_grid_norm():
    """chirp-z 频带求值与网格投影后求积一致"""
    f = _gaussian()
    interval = FrequencyInterval(-1.0, 1.0)
    on_grid = lp_norm_grid(project(f, interval), 1.5, UNIT, tol=1e-8)
    band = band_lp_norm(forward_transform(f), interval, 1.5, UNIT, tol=1e-8)
    assert band.value == pytest.approx(on_grid.value, rel=1e-5)


def test_band_norm_requires_domain():
    with pytest.raises(IntervalError):
        band_lp_norm(forward_transform(_gaussian()), UNIT, 1.0, None)


def test_windowed_norm_matches_grid_norm():
    f = _gaussian(n=1024)
    plain = lp_norm_grid(f, 1.5, tol=1e-10)
    windowed = lp_norm_windowed(f, 1.5, FrequencyInterval(-4.0, 4.0), zoom=4)
    assert windowed.value == pytest.approx(plain.value, rel=1e-9)
    with pytest.raises(GridError):
        lp_norm_windowed(f, 1.5, UNIT, zoom=3)


def test_weighted_l2_norm():
    f = _gaussian()
    one = make_constant_weight(8.0, 4096)
    assert weighted_l2_norm(f, one) == pytest.approx(np.sqrt(energy(f)), rel=1e-12)
    assert weighted_l2_norm(f, one.scaled(2.0)) == pytest.approx(np.sqrt(2 * energy(f)), rel=1e-12)
    assert weighted_l2_norm(GridFunction.zeros(8.0, 4096), one) == 0.0
    with pytest.raises(WeightError):
        weighted_l2_norm(f, make_constant_weight(8.0, 2048))


def test_weighted_l2_norm_pairs_nodes_with_cell_average():
    """中点上的线性权重 5 + x 平均到节点后恰为 5 + x_j"""
    T, n = 4.0, 1024
    f = GridFunction.from_callable(lambda x: np.exp(-np.pi * (x - 1.0) ** 2), T, n)
    h = 2 * T / n
    w = Weight(5.0 + (-T + (np.arange(n) + 0.5) * h), T)
    # ∫ e^{-2π(x-1)²}(5+x) dx = 6/√2
    assert weighted_l2_norm(f, w) ** 2 == pytest.approx(3 * np.sqrt(2), rel=1e-9)


def test_interval_ladder():
    lengths = interval_lengths(4096)
    assert lengths[:8] == list(range(1, 9))
    assert all(1 << k in lengths for k in range(13))
    assert lengths[-1] == 4096
    assert all(b / a <= 2 ** 0.25 + 0.1 for a, b in zip(lengths[8:], lengths[9:]))


def test_a2_of_constant_weight():
    report = a2_characteristic(make_constant_weight(4.0, 1024, value=7.5))
    assert report.characteristic == pytest.approx(1.0, abs=1e-9)


def test_a2_is_scale_invariant():
    w = make_power_weight(0.3, 4.0, 1024)
    a = a2_characteristic(w).characteristic
    b = a2_characteristic(w.scaled(123.0)).characteristic
    assert b == pytest.approx(a, rel=1e-9)


def test_a2_of_step_weight():
    """w = 2χ_[0,1) + 1：sup 在 (1 + 2u)(1 - u) 的最大值 u = 1/4 处取到，等于 9/8"""
    w = make_step_weight(2.0, UNIT, 4.0, 4096)
    report = a2_characteristic(w)
    assert report.characteristic == pytest.approx(9 / 8, rel=1e-10)
    assert report.argmax.length == pytest.approx(2.0)


def _brute_force_a2(samples: np.ndarray, rng, trials: int) -> float:
    n = samples.size
    pw = np.concatenate([[0.0], np.cumsum(samples)])
    pv = np.concatenate([[0.0], np.cumsum(1.0 / samples)])
    lengths = np.floor(np.exp(rng.uniform(0, np.log(n), trials))).astype(int)
    lengths = np.clip(lengths, 1, n)
    starts = np.floor(rng.random(trials) * (n - lengths + 1)).astype(int)
    ends = starts + lengths
    values = (pw[ends] - pw[starts]) * (pv[ends] - pv[starts]) / lengths.astype(float) ** 2
    return float(values.max())


def test_a2_of_power_weight_against_brute_force():
    w = make_power_weight(0.5, 8.0, 4096)
    ours = a2_characteristic(w).characteristic
    brute = _brute_force_a2(w.samples, np.random.default_rng(8), 1_000_000)
    assert abs(ours - brute) / brute <= 0.02


def test_a2_periodic():
    w = make_periodic_power_weight(0.5, 1024)
    report = a2_characteristic_periodic(w)
    assert report.characteristic > 1.0
    assert a2_characteristic(w).characteristic == report.characteristic
    with pytest.raises(WeightError):
        a2_characteristic_periodic(make_constant_weight(0.5, 1024))


def test_power_weight_shape():
    w = make_power_weight(0.5, 8.0, 4096)
    np.testing.assert_array_equal(w.samples, w.samples[::-1])
    assert np.all(np.diff(w.samples[2048:]) > 0)
    np.testing.assert_array_equal(make_power_weight(0.0, 8.0, 64).samples, 1.0)
    with pytest.raises(WeightError):
        make_power_weight(1.0, 8.0, 64)


def test_weight_validation():
    with pytest.raises(WeightError):
        Weight(np.array([1.0, 0.0, 1.0, 1.0]), 1.0)
    with pytest.raises(WeightError):
        Weight(np.ones(3), 1.0)
    with pytest.raises(QuadratureError):
        A2Report(0.5, UNIT, 1)


def test_dyadic_average_weight():
    w = make_power_weight(0.5, 4.0, 1024)
    for lat in lattice_triple():
        avg = dyadic_average_weight(w, 2, lat)
        assert avg.kind is WeightKind.AVERAGED
        cells = lat.cell_index(2, w.positions)
        for j in np.unique(cells):
            inside = cells == j
            assert avg.samples[inside].sum() == pytest.approx(w.samples[inside].sum(), rel=1e-12)
        again = dyadic_average_weight(avg, 2, lat)
        np.testing.assert_allclose(again.samples, avg.samples, rtol=1e-13)


def test_dyadic_average_of_constant():
    w = make_constant_weight(4.0, 1024, value=3.0)
    avg = dyadic_average_weight(w, 0, DyadicLattice(1.0 / 3.0))
    np.testing.assert_allclose(avg.samples, 3.0, rtol=1e-14)
    with pytest.raises(GridError):
        dyadic_average_weight(w, 10, DyadicLattice())
