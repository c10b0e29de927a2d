"""
见证函数 g_N：ĝ_N(ξ) = ρ(ξ/(2N)) - ρ(2ξ)

ĝ_N 在 ±[1, 2N] 上恒为 1，支撑于 ±[1/2, 4N]；g_N 为实值偶函数。
"""
import logging
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..errors import ValidationError
from ..measures import NormEstimate, lp_norm_windowed, require_accepted
from ..models.grid import GridFunction, Spectrum
from ..models.intervals import FrequencyInterval
from ..models.record import ExperimentRecord, WitnessSpec
from ..spectral.bumps import make_transition
from ..spectral.core import inverse_transform
from .parallel import map_ordered

logger = logging.getLogger(__name__)

# 加密窗口半宽（以 1/N 计）与窗口内加密倍数
WINDOW_SCALE = 64.0
WINDOW_ZOOM = 64


def witness_symbol(N: int) -> Callable[[np.ndarray], np.ndarray]:
    rho = make_transition()

    def _symbol(xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return rho(xi / (2.0 * N)) - rho(2.0 * xi)

    return _symbol


def witness_spectrum(spec: WitnessSpec) -> Spectrum:
    """网格上的解析频谱 ĝ_N"""
    return Spectrum.from_symbol(witness_symbol(spec.N), spec.half_width, spec.count)


def eta_witness(spec: WitnessSpec) -> GridFunction:
    """g_N 的网格样本（虚部为舍入误差，丢弃）"""
    g = inverse_transform(witness_spectrum(spec))
    return g.with_samples(g.samples.real)


def zoom_window(spec: WitnessSpec) -> FrequencyInterval:
    """g_N 的主要质量集中在 |x| <~ 1/N"""
    W = min(spec.half_width, WINDOW_SCALE / spec.N)
    return FrequencyInterval(-W, W)


def witness_norm(spec: WitnessSpec, p: float, spectrum: Optional[Spectrum] = None,
                 g: Optional[GridFunction] = None) -> NormEstimate:
    """‖g_N‖_{Lᵖ(ℝ)}（[-T,T) 上求积，零点附近局部加密）"""
    s = spectrum if spectrum is not None else witness_spectrum(spec)
    if g is None:
        g = inverse_transform(s)
        g = g.with_samples(g.samples.real)
    return lp_norm_windowed(g, p, zoom_window(spec), zoom=WINDOW_ZOOM, spectrum=s)


def witness_lp_profile(spec: WitnessSpec, p_list: Sequence[float],
                       tol: Optional[float] = None) -> List[ExperimentRecord]:
    """
    对每个 p 记录 ‖g_N‖_p 与归一化比值 ‖g_N‖_p / N^{(p-1)/p}

    Args:
        spec: 见证函数参数
        p_list: 指数列表，每个 p ∈ (1, 2]
        tol: 加密误差阈值，缺省取 LPLAB_QUAD_TOL

    Returns:
        每个 p 一条 ExperimentRecord
    """
    for p in p_list:
        if not 1 < p <= 2:
            raise ValidationError(f"见证函数范数要求 p ∈ (1, 2]，得到 p={p}")
    s = witness_spectrum(spec)
    g = inverse_transform(s)
    g = g.with_samples(g.samples.real)

    records = []
    for p in p_list:
        est = require_accepted(witness_norm(spec, p, spectrum=s, g=g), tol)
        ratio = est.value / spec.N ** ((p - 1.0) / p)
        records.append(ExperimentRecord(
            parameters={**spec.to_dict(), "p": float(p)},
            measurements={"norm_p": est.value, "ratio": ratio},
            provenance={"quad_err": est.refinement_error},
        ))
        logger.info(f"[witness] N={spec.N} p={p}: ‖g‖_p={est.value:.6g}, 比值 {ratio:.6g}")
    return records


def witness_scan(N_list: Sequence[int], p_list: Sequence[float], half_width: float = 8.0,
                 margin: int = 2, tol: Optional[float] = None,
                 workers: Optional[int] = None) -> List[ExperimentRecord]:
    """在多个 N 上运行 witness_lp_profile，按 (N, p) 顺序合并"""
    specs = [WitnessSpec.for_N(int(N), half_width, margin) for N in N_list]
    per_N = map_ordered(lambda spec: witness_lp_profile(spec, p_list, tol), specs, workers)
    return [record for records in per_N for record in records]
