"""
测试实验与扫描

测试场景：
1. 拟合工具
2. 见证函数：频谱形状、Lᵖ 范数的 N 依赖
3. 下界机制：投影 L¹ 与闭式核一致、增长统计量
4. 加权扫描：α = 0 时平方函数是等距，ρ 随 [w]_{A₂} 缓慢增长
5. 增长指数：N = 2^6..2^14 上对 log_scale 与 log₂N 的斜率
"""

import os
import sys

import numpy as np
import pytest
from scipy import special

# 添加项目路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.errors import GridError, IntervalError, ValidationError, WeightError
from src.experiments import (
    WeightedScanConfig, auxiliary_weighted_scan, band_limited_family, eta_witness, fit_affine, fit_exponent, fit_log_log,
    l1_kernel_oracle, log_scale_offset, lower_bound_point, lower_bound_scan, oracle_affine_fit,
    projection_l1_profile, weighted_scan, witness_lp_profile, witness_scan,
    witness_spectrum,
)
from src.experiments.parallel import map_ordered
from src.models.intervals import SetKind
from src.models.record import ExperimentRecord, WitnessSpec
from src.spectral import forward_transform, spectral_energy

TOL = 1e-3


def test_fit_affine_exact_line():
    fit = fit_affine([1, 2, 3, 4], [5, 7, 9, 11])
    assert fit.slope == pytest.approx(2.0)
    assert fit.intercept == pytest.approx(3.0)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.count == 4


def test_fit_validation():
    with pytest.raises(ValidationError):
        fit_affine([1, 2], [1, 2])
    with pytest.raises(ValidationError):
        fit_affine([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValidationError):
        fit_log_log([1, 2, 0], [1, 2, 3])


def test_fit_exponent_from_records():
    records = [
        ExperimentRecord(parameters={"N": N}, measurements={"y": 3.0 * N ** 1.5}) for N in (4, 8, 16, 32)
    ]
    fit = fit_exponent(records, "N", "y")
    assert fit.slope == pytest.approx(1.5)
    assert np.exp(fit.intercept) == pytest.approx(3.0)
    with pytest.raises(ValidationError):
        fit_exponent(records, "N", "missing")


def test_map_ordered_keeps_order():
    assert map_ordered(lambda x: x * x, range(20), workers=4) == [x * x for x in range(20)]


def test_witness_spec():
    spec = WitnessSpec.for_N(16)
    assert spec.count == 4096
    assert spec.log2N == 4
    with pytest.raises(GridError):
        WitnessSpec(N=6, half_width=8.0, count=4096)
    with pytest.raises(GridError):
        WitnessSpec(N=64, half_width=8.0, count=4096)


def test_witness_spectrum_shape():
    spec = WitnessSpec.for_N(16)
    s = witness_spectrum(spec)
    xi = s.frequencies
    plateau = (np.abs(xi) >= 1) & (np.abs(xi) <= 32)
    outside = (np.abs(xi) <= 0.5) | (np.abs(xi) >= 64)
    assert np.all(s.coefficients[plateau] == 1.0)
    assert np.all(s.coefficients[outside] == 0.0)


def test_witness_is_real_and_even():
    spec = WitnessSpec.for_N(16)
    g = eta_witness(spec)
    assert np.all(g.samples.imag == 0)
    # x_j 与 x_{n-j} 关于 0 对称
    np.testing.assert_allclose(g.samples[1:], g.samples[1:][::-1], atol=1e-12)


def test_witness_norm_growth():
    """‖g_N‖_p / N^{1-1/p} 在 N 变化时保持有界"""
    records = witness_scan([16, 64], [1.5, 2.0], tol=TOL, workers=2)
    assert [(r.get("N"), r.get("p")) for r in records] == [(16, 1.5), (16, 2.0), (64, 1.5), (64, 2.0)]
    for p in (1.5, 2.0):
        small, large = [r.get("ratio") for r in records if r.get("p") == p]
        assert 0.5 < large / small < 2.0
    # p = 2：Plancherel
    l2 = [r.get("norm_p") for r in records if r.get("p") == 2.0]
    assert l2[0] ** 2 == pytest.approx(spectral_energy(witness_spectrum(WitnessSpec.for_N(16))), rel=1e-3)


def test_witness_profile_rejects_p_out_of_range():
    with pytest.raises(ValidationError):
        witness_lp_profile(WitnessSpec.for_N(16), [1.0])
    with pytest.raises(ValidationError):
        witness_lp_profile(WitnessSpec.for_N(16), [2.5])


def test_l1_kernel_oracle():
    """L = 1 时 ∫₀¹ |sin πx/(πx)| dx = Si(π)/π"""
    si, _ = special.sici(np.pi)
    assert l1_kernel_oracle(1.0) == pytest.approx(si / np.pi, abs=1e-10)
    with pytest.raises(IntervalError):
        l1_kernel_oracle(0.0)


def test_oracle_grows_logarithmically():
    """o_l 每增加 1（|I| 翻倍）约增加 (2/π²)·ln 2"""
    fit = oracle_affine_fit()
    assert fit.slope == pytest.approx(2 * np.log(2) / np.pi ** 2, rel=0.03)
    assert fit.r_squared > 0.999
    assert log_scale_offset() == pytest.approx(fit.intercept / fit.slope)


def test_projection_l1_matches_oracle():
    spec = WitnessSpec.for_N(64)
    records = projection_l1_profile(spec, k=6, l_range=range(1, 5), tol=TOL)
    assert [r.get("l") for r in records] == [1, 2, 3, 4]
    for r in records:
        assert r.get("rel_diff") < 0.01
    with pytest.raises(IntervalError):
        projection_l1_profile(spec, k=8, l_range=[1], tol=TOL)


def test_lower_bound_point():
    spec = WitnessSpec.for_N(16)
    record = lower_bound_point(SetKind.E2, 2, spec, tol=TOL)
    assert record.get("p") == pytest.approx(1.25)
    assert record.get("log2N") == 4.0
    assert record.get("log_scale") == pytest.approx(4.0 + log_scale_offset())
    assert record.get("B") > 0
    assert record.get("R") > 0
    # 平方函数包含全部平台区间：‖S‖_p >= (Σ‖P_I g‖_p²)^{1/2}（p <= 2）
    assert record.get("R") * record.get("norm_p") >= record.get("B_p") * (1 - 1e-12)
    assert record.get("quad_err") <= TOL


def test_lower_bound_scan_orders_by_N():
    records = lower_bound_scan(SetKind.E1, [32, 16], tol=TOL, workers=2)
    assert [r.get("N") for r in records] == [16, 32]
    assert records[1].get("B") > records[0].get("B")
    with pytest.raises(IntervalError):
        lower_bound_scan(SetKind.E2, [], tol=TOL)


def test_band_limited_family_lies_in_band():
    config = WeightedScanConfig()
    family = band_limited_family(config, config.collection())
    assert len(family) == 20
    for f in family:
        s = forward_transform(f)
        active = s.frequencies[np.abs(s.coefficients) > 1e-10]
        assert active.size > 0
        assert np.max(np.abs(active)) <= config.band + 1e-9
    wide = WeightedScanConfig(band=70.0)
    with pytest.raises(WeightError):
        band_limited_family(wide, wide.collection())


def test_weighted_scan_isometry_at_zero():
    records = weighted_scan([0.0, 0.5], workers=2)
    flat, weighted = records
    assert flat.get("a2") == pytest.approx(1.0, abs=1e-9)
    assert flat.get("rho") == pytest.approx(1.0, abs=1e-9)
    assert weighted.get("a2") > 1.0
    assert weighted.get("rho") >= 1.0 - 1e-9
    assert flat.get("family") == 20


def test_weighted_scan_rejects_bad_alpha():
    with pytest.raises(WeightError):
        weighted_scan([1.0])


def test_auxiliary_scan():
    (record,) = auxiliary_weighted_scan([0.25], workers=1)
    assert record.get("m_ratio") >= 1.0
    assert record.get("h_ratio") > 0
    assert record.get("a2") > 1.0


GROWTH_NS = [2 ** K for K in range(6, 15)]


@pytest.fixture(scope="module")
def growth_scans():
    """E1、E2、Ẽ2、Ẽ3 在 N = 2^6..2^14 上的下界扫描"""
    return {
        "e1": lower_bound_scan(SetKind.E1, GROWTH_NS, tol=TOL),
        "e2": lower_bound_scan(SetKind.E2, GROWTH_NS, tol=TOL),
        "et2": lower_bound_scan(SetKind.ETILDE, GROWTH_NS, order=2, tol=TOL),
        "et3": lower_bound_scan(SetKind.ETILDE, GROWTH_NS, order=3, tol=TOL),
    }


def _difference_records(upper, lower):
    return [
        ExperimentRecord(parameters={"N": a.get("N")},
                         measurements={"B": a.get("B") - b.get("B"), "log_scale": a.get("log_scale"),
                                       "log2N": a.get("log2N")})
        for a, b in zip(upper, lower)
    ]


def test_growth_exponents_against_log_scale(growth_scans):
    """B(N) ~ (log N)^{r/2}：E1 约 3/2，E2 约 2，Ẽ3 - Ẽ2 约 1/2"""
    e1 = fit_exponent(growth_scans["e1"], "log_scale", "B").slope
    e2 = fit_exponent(growth_scans["e2"], "log_scale", "B").slope
    diff = fit_exponent(_difference_records(growth_scans["et3"], growth_scans["et2"]), "log_scale", "B").slope
    assert 1.25 <= e1 <= 1.75
    assert 1.7 <= e2 <= 2.3
    assert 0.25 <= diff <= 0.75


def test_growth_exponents_against_log2N_are_smaller(growth_scans):
    """对 log₂N 本身拟合时，常数偏移把斜率压低到区间之外"""
    for key, upper in (("e1", 1.25), ("e2", 1.7)):
        literal = fit_exponent(growth_scans[key], "log2N", "B").slope
        shifted = fit_exponent(growth_scans[key], "log_scale", "B").slope
        assert literal < upper
        assert literal < shifted
    diff = fit_exponent(_difference_records(growth_scans["et3"], growth_scans["et2"]), "log2N", "B").slope
    assert 0.25 <= diff <= 0.75


def test_square_function_dominates_projection_sum(growth_scans):
    """‖S g‖_p >= (Σ‖P_I g‖_p²)^{1/2}，即 R·‖g‖_p >= B_p"""
    for records in growth_scans.values():
        for r in records:
            assert r.get("R") * r.get("norm_p") >= 0.99 * r.get("B_p")


def test_weighted_growth_is_slow():
    """ρ(α) 对 [w_α]_{A₂} 的对数斜率不超过 5/2"""
    records = weighted_scan([0.0, 0.3, 0.6, 0.8])
    assert records[0].get("rho") == pytest.approx(1.0, abs=1e-8)
    fit = fit_exponent(records[1:], "a2", "rho")
    assert fit.slope <= 2.5


def test_fit_exponent_constant_and_noisy():
    x = [2.0 ** k for k in range(2, 13)]
    flat = [ExperimentRecord(parameters={"x": v}, measurements={"y": 7.0}) for v in x]
    assert fit_exponent(flat, "x", "y").slope == pytest.approx(0.0, abs=1e-12)
    rng = np.random.default_rng(3)
    noisy = [
        ExperimentRecord(parameters={"x": v}, measurements={"y": 3.0 * v ** 1.5 * (1 + 0.01 * rng.standard_normal())})
        for v in x
    ]
    assert 1.45 <= fit_exponent(noisy, "x", "y").slope <= 1.55


def test_witness_ratio_stays_bounded_near_one():
    """‖g_N‖_p / N^{1-1/p} 在 N = 2^6..2^12 上的变化不超过 4 倍"""
    p_list = [1.1, 1.25, 1.5]
    records = witness_scan([2 ** K for K in range(6, 13)], p_list, tol=TOL)
    for p in p_list:
        ratios = [r.get("ratio") for r in records if r.get("p") == p]
        assert len(ratios) == 7
        assert max(ratios) / min(ratios) <= 4.0
