"""
下界机制：投影 L¹ 剖面与增长统计量扫描

对平台 ±[1, 2N] 内的区间 I，P_I(g_N) 是区间指示函数的逆变换乘以单模因子，
|P_I g_N(x)| ≈ |sin(π|I|x)/(πx)|，其 L¹([0,1]) 范数随 log|I| 线性增长。
"""
import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from ..config_loader import get_quad_tol
from ..errors import IntervalError
from ..lacunary import collection_for, interval_plus, plateau_intervals
from ..measures import band_lp_norm, refined_lp, require_accepted
from ..models.intervals import FrequencyInterval, IntervalCollection, LacunarySpec, SetKind, SignMode
from ..models.record import ExperimentRecord, WitnessSpec
from ..spectral.core import band_modulus, inverse_transform
from .fitting import FitResult, fit_affine
from .parallel import map_ordered
from .witness import witness_norm, witness_spectrum

logger = logging.getLogger(__name__)

UNIT = FrequencyInterval(0.0, 1.0)

# 每个 1/|I| 长度上的求值点数
DEFAULT_RESOLUTION = 256

# 确定 log_scale 偏移所用的 l 范围
OFFSET_FIT_LEVELS = tuple(range(3, 13))

LOWER_BOUND_COLUMNS = ("N", "p", "B", "R", "norm_p", "quad_err", "B_p", "log2N", "log_scale")


@lru_cache(maxsize=None)
def l1_kernel_oracle(length: float) -> float:
    """
    ∫₀¹ |sin(πLx)/(πx)| dx

    核在 j/L 处过零；在相邻零点之间分段做自适应积分，被积函数在每段内光滑。
    """
    L = float(length)
    if not L > 0:
        raise IntervalError(f"区间长度必须为正，得到 {length}")
    edges = np.arange(0, int(np.floor(L)) + 1) / L
    edges = np.unique(np.append(edges[edges < 1.0], 1.0))

    def _kernel(x: float) -> float:
        return abs(L * np.sinc(L * x))

    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        value, _ = integrate.quad(_kernel, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
        total += value
    return total


@lru_cache(maxsize=None)
def oracle_affine_fit(levels: Tuple[int, ...] = OFFSET_FIT_LEVELS) -> FitResult:
    """o_l ≈ a·l + b，|I⁺_{k,l}| = 2^{l-1}"""
    return fit_affine(levels, [l1_kernel_oracle(2.0 ** (l - 1)) for l in levels])


def log_scale_offset() -> float:
    """c = b/a：o_l ≈ a·(l + c)，增长统计量按 log₂N + c 拟合"""
    fit = oracle_affine_fit()
    return fit.intercept / fit.slope


def projection_l1_profile(spec: WitnessSpec, k: int, l_range: Sequence[int],
                          tol: Optional[float] = None,
                          resolution: int = DEFAULT_RESOLUTION) -> List[ExperimentRecord]:
    """
    m_{k,l} = ‖P_{I⁺_{k,l}}(g_N)‖_{L¹([0,1])} 与闭式核的求积值 o_l

    Raises:
        IntervalError: I⁺_{k,l} 不在平台 [1, 2N] 内（闭式不再成立）
    """
    s = witness_spectrum(spec)
    plateau = spec.plateau
    records = []
    for l in l_range:
        I = interval_plus(k, l)
        if not I.within(plateau):
            raise IntervalError(f"I⁺_{{{k},{l}}} = {I} 不在平台 {plateau} 内")
        est = require_accepted(band_lp_norm(s, I, 1.0, UNIT, resolution=resolution, tol=tol), tol)
        oracle = l1_kernel_oracle(I.length)
        records.append(ExperimentRecord(
            parameters={**spec.to_dict(), "k": k, "l": l},
            measurements={"m": est.value, "oracle": oracle, "rel_diff": abs(est.value - oracle) / oracle},
            provenance={"quad_err": est.refinement_error},
        ))
        logger.debug(f"[lower] k={k} l={l}: m={est.value:.6g} oracle={oracle:.6g}")
    return records


def _scan_spec(kind: SetKind, order: int, K: int) -> LacunarySpec:
    """端到端平方函数使用的区间族参数：覆盖见证函数的整个支撑 ±[1/2, 4N]"""
    k_min = {SetKind.E1: 0, SetKind.E2: 1}.get(kind, order - 1)
    return LacunarySpec(kind=kind, k_min=k_min, k_max=K + 2, l_min=0, sign_mode=SignMode.BOTH, order=order)


def _touches_support(I: FrequencyInterval, support: FrequencyInterval) -> bool:
    return (I.b > support.a and I.a < support.b) or (I.b > -support.b and I.a < -support.a)


def _grid_count(I: FrequencyInterval, frequencies: np.ndarray) -> int:
    return int(np.count_nonzero(I.mask(frequencies)))


def lower_bound_point(kind: SetKind, order: int, spec: WitnessSpec, tol: Optional[float] = None,
                      resolution: int = DEFAULT_RESOLUTION) -> ExperimentRecord:
    """
    单个 N 的增长统计量

    - B：平台区间 m_I 的 ℓ² 和（p = 1）
    - R：‖S_𝓘(g_N)‖_{Lᵖ([0,1])} / ‖g_N‖_{Lᵖ(ℝ)}，p = 1 + 1/log₂N
    - B_p：与 R 同一网格上平台区间 Lᵖ([0,1]) 范数的 ℓ² 和
    """
    K = spec.log2N
    p = 1.0 + 1.0 / K
    s = witness_spectrum(spec)
    xi = s.frequencies
    plateau = plateau_intervals(kind, order, K)
    for I in plateau:
        if not I.within(spec.plateau):
            raise IntervalError(f"区间 {I} 不在平台 {spec.plateau} 内")
    errors = []

    # B：平台上 |P_I g_N| 只依赖于 I 内的网格频率个数
    cache: Dict[int, float] = {}
    m_squared = 0.0
    for I in plateau:
        M = _grid_count(I, xi)
        if M not in cache:
            est = band_lp_norm(s, I, 1.0, UNIT, resolution=resolution, tol=tol)
            errors.append(est.refinement_error)
            cache[M] = est.value
        m_squared += cache[M] ** 2
    B = float(np.sqrt(m_squared))

    # R 与 B_p：公共网格步长按最长平台区间取
    L_max = max(I.length for I in plateau)
    step = 2.0 ** (-int(np.ceil(np.log2(resolution * L_max))))
    count = int(round(1.0 / step)) + 1
    x = np.arange(count) * step
    plateau_keys = {(I.a, I.b) for I in plateau}

    collection: IntervalCollection = collection_for(_scan_spec(kind, order, K))
    square = np.zeros(count, dtype=float)
    bp_squared = 0.0
    for I in collection:
        if not _touches_support(I, spec.support):
            continue
        values = band_modulus(s, I, 0.0, count, step)
        square += values ** 2
        if (I.a, I.b) in plateau_keys:
            value, err = refined_lp(values, x, step, UNIT, p)
            bp_squared += value ** 2
            errors.append(err)
    s_norm, s_err = refined_lp(np.sqrt(square), x, step, UNIT, p)
    errors.append(s_err)

    norm = witness_norm(spec, p, spectrum=s)
    errors.append(norm.refinement_error)

    quad_err = float(max(errors))
    record = ExperimentRecord(
        parameters={"set": kind.label(order), **spec.to_dict(), "p": p},
        measurements={
            "B": B,
            "R": s_norm / norm.value,
            "norm_p": norm.value,
            "B_p": float(np.sqrt(bp_squared)),
            "log2N": float(K),
            "log_scale": K + log_scale_offset(),
        },
        provenance={"quad_err": quad_err},
    )
    record.check_quality(get_quad_tol() if tol is None else tol)
    logger.info(f"[lower] {kind.label(order)} N={spec.N}: B={B:.6g} R={record.get('R'):.6g} 误差 {quad_err:.2g}")
    return record


def lower_bound_scan(kind: SetKind, N_list: Sequence[int], order: int = 0, half_width: float = 8.0,
                     margin: int = 2, tol: Optional[float] = None, resolution: int = DEFAULT_RESOLUTION,
                     workers: Optional[int] = None) -> List[ExperimentRecord]:
    """
    在 N_list 上计算增长统计量，按 N 升序返回

    Args:
        kind: 集合种类 E1 / E2 / ETILDE
        N_list: 2 的幂，每个都须满足见证函数的 Nyquist 约束
        order: Ẽ 的阶数（E1、E2 忽略）
    """
    order = order or {SetKind.E1: 1, SetKind.E2: 2}.get(kind, 2)
    specs = [WitnessSpec.for_N(int(N), half_width, margin) for N in sorted(N_list)]
    if not specs:
        raise IntervalError("N 列表为空")
    return map_ordered(lambda spec: lower_bound_point(kind, order, spec, tol, resolution), specs, workers)
