"""
测试辅助算子 M 与 H*

测试场景：
1. 指示函数的极大函数与极大 Hilbert 变换的已知值
2. 次线性、齐次性、逐点下界
3. 截断半径阶梯与调制版本
"""

import os
import sys

import numpy as np
import pytest

# 添加项目路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.auxops import (
    epsilon_ladder, interval_ladder, maximal_function, maximal_hilbert, modulated_maximal_hilbert,
    truncated_hilbert,
)
from src.errors import GridError
from src.models.grid import GridFunction
from src.spectral import modulate

T = 8.0
BIG = 1 << 16


def _indicator(a: float, b: float, count: int = BIG) -> GridFunction:
    return GridFunction.from_callable(lambda x: ((x >= a) & (x <= b)).astype(float), T, count)


def _random(rng, count=1024) -> GridFunction:
    return GridFunction(rng.standard_normal(count) + 1j * rng.standard_normal(count), T)


def test_maximal_function_of_indicator():
    f = _indicator(0.0, 1.0)
    Mf = maximal_function(f).samples.real
    x = f.positions
    inside = (x >= 0) & (x <= 1)
    assert np.all(Mf[inside] >= 1.0 - 1e-12)
    j = f.index_of(2.0)
    assert Mf[j] == pytest.approx(0.5, rel=0.02)


def test_maximal_function_dominates_modulus():
    f = _random(np.random.default_rng(10))
    assert np.all(maximal_function(f).samples.real >= np.abs(f.samples))


def test_maximal_function_is_sublinear():
    rng = np.random.default_rng(11)
    for _ in range(50):
        f, g = _random(rng), _random(rng)
        lhs = maximal_function(f + g).samples.real
        rhs = maximal_function(f).samples.real + maximal_function(g).samples.real
        assert np.all(lhs <= rhs + 1e-10)


def test_maximal_function_bounds_scanned_averages():
    """任何阶梯内区间的平均值都不超过区间内各点的 M(f)"""
    rng = np.random.default_rng(12)
    f = _random(rng)
    Mf = maximal_function(f).samples.real
    a = np.abs(f.samples)
    lengths = interval_ladder(f.count)
    for _ in range(200):
        L = int(rng.choice(lengths))
        s = int(rng.integers(0, f.count - L + 1))
        assert np.all(Mf[s:s + L] >= a[s:s + L].mean() - 1e-12)


def test_maximal_function_ignores_modulation():
    f = _random(np.random.default_rng(13))
    plain = maximal_function(f).samples.real
    moved = maximal_function(modulate(f, 1.25)).samples.real
    np.testing.assert_allclose(moved, plain, rtol=1e-12)


def test_maximal_hilbert_of_indicator():
    f = _indicator(-1.0, 1.0)
    H = maximal_hilbert(f).samples.real
    assert abs(H[f.index_of(0.0)]) < 1e-8
    assert H[f.index_of(2.0)] == pytest.approx(np.log(3.0), rel=0.02)


def test_maximal_hilbert_dominates_each_truncation():
    f = _random(np.random.default_rng(14))
    ladder = epsilon_ladder(f.half_width, f.count)
    H = maximal_hilbert(f, ladder).samples.real
    for eps in ladder:
        assert np.all(H >= np.abs(truncated_hilbert(f, eps).samples))


def test_maximal_hilbert_homogeneity():
    f = _random(np.random.default_rng(15))
    lam = 3.0 - 4.0j
    base = maximal_hilbert(f).samples.real
    scaled = maximal_hilbert(f * lam).samples.real
    np.testing.assert_allclose(scaled, 5.0 * base, rtol=1e-10, atol=1e-12)


def test_truncation_drops_near_points():
    """ε 不小于网格直径时 H_ε f = 0"""
    f = _random(np.random.default_rng(16), count=64)
    out = truncated_hilbert(f, 2 * T)
    np.testing.assert_allclose(out.samples, 0.0, atol=1e-12)


def test_epsilon_ladder():
    ladder = epsilon_ladder(8.0, 4096)
    assert ladder[0] == pytest.approx(2 * 16.0 / 4096)
    assert ladder[-1] <= 16.0
    assert all(b == 2 * a for a, b in zip(ladder, ladder[1:]))
    with pytest.raises(GridError):
        maximal_hilbert(_random(np.random.default_rng(17)), [])


def test_modulated_maximal_hilbert():
    f = _random(np.random.default_rng(18))
    np.testing.assert_array_equal(modulated_maximal_hilbert(f, 0.0).samples, maximal_hilbert(f).samples)
    t = 0.5
    expected = maximal_hilbert(modulate(f, -t)).samples
    np.testing.assert_allclose(modulated_maximal_hilbert(f, t).samples, expected)
