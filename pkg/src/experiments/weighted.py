"""
加权扫描：幂权重 w_α(x) = |x|^α 下平方函数与辅助算子的放大比

测试族固定且带种子：单区间函数、调制鼓包、随机相位带限函数共 20 个，
频谱都落在区间族覆盖的频带内，因此 α = 0 时 S_𝓘 是等距。
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..auxops import maximal_function, maximal_hilbert
from ..errors import WeightError
from ..lacunary import generate_points, intervals_from_points
from ..measures import a2_characteristic, make_power_weight, weighted_l2_norm
from ..models.grid import GridFunction, Spectrum
from ..models.intervals import IntervalCollection, LacunarySpec, SetKind, SignMode
from ..models.record import ExperimentRecord
from ..spectral.bumps import make_transition
from ..spectral.core import inverse_transform
from ..squarefn import square_function_grid
from .parallel import map_ordered

logger = logging.getLogger(__name__)

FAMILY_SIZE = 20


@dataclass(frozen=True)
class WeightedScanConfig:
    """加权扫描的网格与区间族参数"""
    half_width: float = 8.0
    count: int = 1 << 12
    k_min: int = 1
    k_max: int = 6
    l_min: int = -2
    band: float = 56.0          # 测试族频谱 ⊆ [-band, band]
    seed: int = 0

    def collection(self, kind: SetKind = SetKind.E2, order: int = 0) -> IntervalCollection:
        spec = LacunarySpec(kind=kind, k_min=self.k_min, k_max=self.k_max, l_min=self.l_min,
                            sign_mode=SignMode.BOTH, order=order)
        return intervals_from_points(generate_points(spec))


def _bump_spectrum(xi: np.ndarray, center: float, width: float) -> np.ndarray:
    rho = make_transition()
    return rho((xi - center) / width)


def band_limited_family(config: WeightedScanConfig, collection: IntervalCollection) -> List[GridFunction]:
    """
    固定的 20 个测试函数

    0: 频谱严格落在单个区间内；1-9: 以缺项点为中心的调制鼓包；10-19: 随机相位带限函数。
    """
    rng = np.random.default_rng(config.seed)
    T, n = config.half_width, config.count
    xi = np.arange(-n // 2, n // 2) / (2.0 * T)
    df = 1.0 / (2.0 * T)
    span = collection.span
    if span.a > -config.band or span.b <= config.band:
        raise WeightError(f"区间族 {span} 未覆盖测试频带 ±{config.band}")

    spectra = []

    # 单区间：取包含 band/3 的区间，内缩一个频率步长
    target = config.band / 3.0
    host = next(I for I in collection if I.contains(target))
    inner = (xi > host.a + df) & (xi < host.b - df)
    spectra.append(np.where(inner, 1.0, 0.0).astype(np.complex128))

    points = generate_points(LacunarySpec(kind=SetKind.E2, k_min=config.k_min, k_max=config.k_max,
                                          l_min=0, sign_mode=SignMode.BOTH))
    points = points[np.abs(points) <= config.band / 2]
    widths = (0.25, 0.5, 1.0, 2.0)
    for i in range(9):
        center = float(points[rng.integers(points.size)])
        width = widths[i % len(widths)]
        shift = rng.uniform(-2.0, 2.0)
        spectra.append(_bump_spectrum(xi, center, width) * np.exp(-2j * np.pi * xi * shift))

    for _ in range(10):
        a = rng.uniform(-config.band, config.band - 4.0)
        b = min(config.band, a + rng.uniform(2.0, 24.0))
        center, half = (a + b) / 2, (b - a) / 4
        envelope = _bump_spectrum(xi, center, half)
        phase = np.exp(2j * np.pi * rng.random(n))
        spectra.append(envelope * rng.uniform(0.5, 2.0, n) * phase)

    return [inverse_transform(Spectrum(c, T)) for c in spectra]


def _alpha_weight(alpha: float, config: WeightedScanConfig):
    if not -1 < alpha < 1:
        raise WeightError(f"幂权重要求 α ∈ (-1, 1)，得到 α={alpha}")
    return make_power_weight(alpha, config.half_width, config.count)


def weighted_scan(alpha_list: Sequence[float], kind: SetKind = SetKind.E2, order: int = 0,
                  config: Optional[WeightedScanConfig] = None,
                  workers: Optional[int] = None) -> List[ExperimentRecord]:
    """
    对每个 α 记录 [w_α]_{A₂} 与 ρ(α) = max_f ‖S_𝓘 f‖_{L²(w)} / ‖f‖_{L²(w)}

    平方函数与权重无关，每个测试函数只计算一次。
    """
    config = config or WeightedScanConfig()
    for alpha in alpha_list:
        _alpha_weight(alpha, config)
    collection = config.collection(kind, order)
    family = band_limited_family(config, collection)
    squares = [square_function_grid(f, collection, workers=1) for f in family]

    def _point(alpha: float) -> ExperimentRecord:
        w = _alpha_weight(alpha, config)
        report = a2_characteristic(w)
        ratios = [weighted_l2_norm(S, w) / weighted_l2_norm(f, w) for f, S in zip(family, squares)]
        best = int(np.argmax(ratios))
        logger.info(f"[weighted] α={alpha}: [w]_A2={report.characteristic:.6g} ρ={ratios[best]:.6g}（函数 {best}）")
        return ExperimentRecord(
            parameters={"set": kind.label(order or {SetKind.E1: 1}.get(kind, 2)), "alpha": float(alpha),
                        "family": len(family), "argmax": best},
            measurements={"a2": report.characteristic, "rho": float(ratios[best])},
            provenance={"quad_err": 0.0},
        )

    return map_ordered(_point, list(alpha_list), workers)


def auxiliary_weighted_scan(alpha_list: Sequence[float], config: Optional[WeightedScanConfig] = None,
                            workers: Optional[int] = None) -> List[ExperimentRecord]:
    """对每个 α 记录 M 与 H* 在 L²(w_α) 上对测试族的最大放大比（只观测，不断言常数）"""
    config = config or WeightedScanConfig()
    for alpha in alpha_list:
        _alpha_weight(alpha, config)
    family = band_limited_family(config, config.collection())
    maximal = [maximal_function(f) for f in family]
    hilbert = [maximal_hilbert(f) for f in family]

    def _point(alpha: float) -> ExperimentRecord:
        w = _alpha_weight(alpha, config)
        report = a2_characteristic(w)
        base = [weighted_l2_norm(f, w) for f in family]
        m_ratio = max(weighted_l2_norm(Mf, w) / b for Mf, b in zip(maximal, base))
        h_ratio = max(weighted_l2_norm(Hf, w) / b for Hf, b in zip(hilbert, base))
        return ExperimentRecord(
            parameters={"alpha": float(alpha), "family": len(family)},
            measurements={"a2": report.characteristic, "m_ratio": m_ratio, "h_ratio": h_ratio},
            provenance={"quad_err": 0.0},
        )

    return map_ordered(_point, list(alpha_list), workers)
