"""
范数与权重

- Lᵖ 范数：网格（实直线/子区间）、环面、以及只用某个频带系数的 band_lp_norm
- 加权 L² 范数、A₂ 特征值（实直线与周期）
- 权重构造与二进格平均
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .config_loader import get_quad_tol, get_worker_count
from .errors import GridError, IntervalError, QuadratureError, ValidationError, WeightError
from .models.grid import GridFunction, Spectrum, is_power_of_two
from .models.intervals import FrequencyInterval
from .models.lattice import DyadicLattice
from .models.weight import A2Report, Weight, WeightKind
from .spectral.core import evaluate_band, forward_transform, upsample

logger = logging.getLogger(__name__)

Domain = Union[FrequencyInterval, Tuple[float, float], None]

# A₂ 扫描长度阶梯：1..8 逐一，之后按 2^{1/4} 几何增长（含全部 2 的幂）
_EXACT_LENGTHS = 8
_LADDER_RATIO = 2.0 ** 0.25


@dataclass(frozen=True)
class NormEstimate:
    """范数值及其加密误差 |v(n) - v(n/2)| / v(n)"""
    value: float
    refinement_error: float
    points: int

    def __float__(self) -> float:
        return self.value


def require_accepted(estimate: NormEstimate, tol: Optional[float] = None) -> NormEstimate:
    """加密误差超过阈值时拒收"""
    tol = get_quad_tol() if tol is None else tol
    if not np.isfinite(estimate.value):
        raise QuadratureError(f"范数值非有限: {estimate.value}")
    if estimate.refinement_error > tol:
        raise QuadratureError(
            f"加密误差 {estimate.refinement_error:.3g} 超过阈值 {tol:.3g}（{estimate.points} 点）",
            refinement_error=estimate.refinement_error,
        )
    return estimate


def _as_domain(domain: Domain) -> Optional[FrequencyInterval]:
    if domain is None or isinstance(domain, FrequencyInterval):
        return domain
    a, b = domain
    return FrequencyInterval(float(a), float(b))


def midpoint_weights(positions: np.ndarray, spacing: float, domain: FrequencyInterval,
                     period: Optional[float] = None) -> np.ndarray:
    """
    复合中点规则的求积权重：样本 x_j 代表格元 [x_j - h/2, x_j + h/2)，权重为格元与 domain 的交长

    period 给定时按周期延拓计入 domain 的平移像。
    """
    lo = positions - spacing / 2
    hi = positions + spacing / 2
    shifts = (0.0,) if period is None else (-period, 0.0, period)
    weights = np.zeros(positions.size, dtype=float)
    for s in shifts:
        weights += np.clip(np.minimum(hi, domain.b + s) - np.maximum(lo, domain.a + s), 0.0, None)
    return weights


def _lp_sum(values: np.ndarray, weights: np.ndarray, p: float) -> float:
    return float(np.sum(weights * np.abs(values) ** p) ** (1.0 / p))


def _relative_gap(fine: float, coarse: float) -> float:
    if fine == 0.0:
        return 0.0 if coarse == 0.0 else float("inf")
    return abs(fine - coarse) / fine


def refined_lp(values: np.ndarray, positions: np.ndarray, spacing: float, domain: FrequencyInterval,
               p: float, period: Optional[float] = None) -> Tuple[float, float]:
    """同一组样本上的 (Lᵖ 值, 与隔点取样值的相对差)"""
    fine = _lp_sum(values, midpoint_weights(positions, spacing, domain, period), p)
    coarse = _lp_sum(values[::2], midpoint_weights(positions[::2], 2 * spacing, domain, period), p)
    return fine, _relative_gap(fine, coarse)


def _check_p(p: float):
    if not (np.isfinite(p) and p >= 1):
        raise ValidationError(f"要求 p >= 1，得到 p={p}")


def lp_norm_grid(f: GridFunction, p: float, domain: Domain = None, tol: Optional[float] = None,
                 max_oversample: int = 4) -> NormEstimate:
    """
    ‖f‖_{Lᵖ(domain)}，复合中点规则，格元与区间端点的交按分数计入

    Args:
        f: 网格函数（视为 [-T, T) 上的周期函数）
        p: 指数，p >= 1
        domain: 子区间，缺省为整个 [-T, T)
        tol: 加密误差目标；超出时对 f 做带限加密重算，直至 max_oversample 倍

    Returns:
        NormEstimate（是否接受由调用方用 require_accepted 决定）
    """
    _check_p(p)
    T = f.half_width
    dom = _as_domain(domain) or FrequencyInterval(-T, T)
    if dom.a < -T or dom.b > T:
        raise IntervalError(f"积分区间 {dom} 超出网格 [-{T}, {T})")
    tol = get_quad_tol() if tol is None else tol

    factor = 1
    g = f
    while True:
        value, err = refined_lp(g.samples, g.positions, g.spacing, dom, p, period=2 * T)
        if err <= tol or factor >= max_oversample:
            break
        factor *= 2
        g = upsample(f, factor)
        logger.debug(f"[quad] 加密误差 {err:.3g} > {tol:.3g}，加密到 {g.count} 点")
    return NormEstimate(value, err, g.count)


def lp_norm_periodic(f, p: float, tol: Optional[float] = None, max_points: int = 1 << 22) -> NormEstimate:
    """
    ‖f‖_{Lᵖ(𝕋)}，f 为 TrigPolynomial 或 PeriodicSquareFunction（需提供 degree 与 samples(m)）

    θ 网格从 max(2^14, 8·2^⌈log₂(2D+1)⌉) 起，误差不达标时加倍。
    """
    _check_p(p)
    tol = get_quad_tol() if tol is None else tol
    m = max(1 << 14, 8 * (1 << max(0, (2 * f.degree).bit_length())))
    while True:
        values = np.abs(f.samples(m))
        fine = float(np.mean(values ** p) ** (1.0 / p))
        coarse = float(np.mean(values[::2] ** p) ** (1.0 / p))
        err = _relative_gap(fine, coarse)
        if err <= tol or m >= max_points:
            return NormEstimate(fine, err, m)
        m *= 2


def band_lp_norm(s: Spectrum, interval: FrequencyInterval, p: float, domain: Domain,
                 resolution: int = 256, step: Optional[float] = None, tol: Optional[float] = None,
                 max_refine: int = 3) -> NormEstimate:
    """
    ‖P_I f‖_{Lᵖ(domain)}，P_I f 由 chirp-z 在 domain 上的均匀点直接求值

    步长缺省取 2^{-⌈log₂(resolution·|I|)⌉}，即每个 1/|I| 长度至少 resolution 个点。
    """
    _check_p(p)
    dom = _as_domain(domain)
    if dom is None:
        raise IntervalError("band_lp_norm 需要有限积分区间")
    tol = get_quad_tol() if tol is None else tol
    if step is None:
        step = 2.0 ** (-int(np.ceil(np.log2(resolution * max(interval.length, 1.0 / dom.length)))))

    for attempt in range(max_refine + 1):
        count = int(np.ceil(dom.length / step)) + 1
        x = dom.a + np.arange(count) * step
        values = evaluate_band(s, interval, dom.a, count, step)
        value, err = refined_lp(values, x, step, dom, p)
        if err <= tol or attempt == max_refine:
            break
        step /= 2
    return NormEstimate(value, err, count)


def weighted_l2_norm(f: GridFunction, w: Weight) -> float:
    """
    ‖f‖_{L²(w)} = (Σ|f_j|² w̃_j h)^{1/2}

    f 取在节点 x_j = -T + jh，w 取在中点 x_j + h/2。节点权重
    w̃_j = (w_{j-1} + w_j)/2 是对偶单元 [x_j - h/2, x_j + h/2) 两个半格中点样本的平均，
    下标按周期回绕（x_0 的左半格落在 T - h/2）。
    """
    if not w.same_grid(f):
        raise WeightError(
            f"网格不匹配：f (T={f.half_width}, n={f.count}) 与 w (T={w.half_width}, n={w.count})"
        )
    node_weight = 0.5 * (w.samples + np.roll(w.samples, 1))
    return float(np.sqrt(np.sum(np.abs(f.samples) ** 2 * node_weight) * f.spacing))


def interval_lengths(n: int, max_length: Optional[int] = None) -> List[int]:
    """A₂ 扫描用的长度阶梯（以格点数计）"""
    cap = n if max_length is None else min(max_length, n)
    lengths = set(range(1, min(_EXACT_LENGTHS, cap) + 1))
    x = float(_EXACT_LENGTHS)
    while x * _LADDER_RATIO <= cap:
        x *= _LADDER_RATIO
        lengths.add(int(round(x)))
    power = 1
    while power <= cap:
        lengths.add(power)
        power *= 2
    return sorted(lengths)


def _best_window(prefix_w: np.ndarray, prefix_v: np.ndarray, length: int, starts: int) -> Tuple[float, int]:
    sw = prefix_w[length:length + starts] - prefix_w[:starts]
    sv = prefix_v[length:length + starts] - prefix_v[:starts]
    products = sw * sv / float(length * length)
    j = int(np.argmax(products))
    return float(products[j]), j


def _scan_a2(samples: np.ndarray, lengths: Sequence[int], periodic: bool) -> Tuple[float, int, int, int]:
    n = samples.size
    w = np.concatenate([samples, samples]) if periodic else samples
    prefix_w = np.concatenate([[0.0], np.cumsum(w)])
    prefix_v = np.concatenate([[0.0], np.cumsum(1.0 / w)])

    def _one(length: int):
        starts = n if periodic else n - length + 1
        return _best_window(prefix_w, prefix_v, length, starts)

    best, best_start, best_length = -np.inf, 0, 0
    with ThreadPoolExecutor(max_workers=get_worker_count()) as pool:
        # 按长度升序归约；并列时取左端点小者，再取长度小者
        for length, (value, start) in zip(lengths, pool.map(_one, lengths)):
            if value > best or (value == best and start < best_start):
                best, best_start, best_length = value, start, length
    size = sum((n if periodic else n - L + 1) for L in lengths)
    return best, best_start, best_length, size


def a2_characteristic(w: Weight, max_length: Optional[int] = None) -> A2Report:
    """
    [w]_{A₂} = sup_I ⟨w⟩_I ⟨w⁻¹⟩_I，I 取所有网格对齐的起点与长度阶梯中的长度

    Args:
        w: 实直线网格上的权重
        max_length: 长度上限（格点数），缺省为整个网格

    Returns:
        A2Report：特征值、达到最大值的区间、扫描族大小
    """
    if w.periodic:
        return a2_characteristic_periodic(w)
    lengths = interval_lengths(w.count, max_length)
    best, start, length, size = _scan_a2(w.samples, lengths, periodic=False)
    a = w.left + start * w.spacing
    report = A2Report(best, FrequencyInterval(a, a + length * w.spacing), size)
    logger.info(f"[a2] [w]_A2 = {best:.6g}，最优区间 {report.argmax}，扫描 {size} 个区间")
    return report


def a2_characteristic_periodic(w: Weight) -> A2Report:
    """环面上的 A₂ 特征值：弧可以绕过 0"""
    if not w.periodic:
        raise WeightError("a2_characteristic_periodic 需要周期权重")
    lengths = interval_lengths(w.count)
    best, start, length, size = _scan_a2(w.samples, lengths, periodic=True)
    a = start * w.spacing
    report = A2Report(best, FrequencyInterval(a, a + length * w.spacing), size)
    logger.info(f"[a2] 周期 [w]_A2 = {best:.6g}，最优弧 {report.argmax}")
    return report


def _check_weight_grid(half_width: float, count: int):
    if not is_power_of_two(count):
        raise GridError(f"网格点数必须是 2 的幂，得到 n={count}")
    if not (np.isfinite(half_width) and half_width > 0):
        raise GridError(f"T 必须为正，得到 {half_width}")


def _centered_offsets(count: int) -> np.ndarray:
    """j + ½ - n/2：格元中点相对原点的偏移（以 h 计），关于 0 精确对称"""
    return np.arange(count) + 0.5 - count / 2


def make_power_weight(alpha: float, half_width: float, count: int) -> Weight:
    """|x|^α，x 取格元中点（不含 x = 0）"""
    if not -1 < alpha < 1:
        raise WeightError(f"幂权重要求 α ∈ (-1, 1)，得到 α={alpha}")
    _check_weight_grid(half_width, count)
    h = 2.0 * half_width / count
    x = np.abs(_centered_offsets(count)) * h
    return Weight(x ** alpha, half_width, WeightKind.POWER, alpha=float(alpha))


def make_step_weight(value: float, support: FrequencyInterval, half_width: float, count: int,
                     base: float = 1.0) -> Weight:
    """在 support 上取 value，其余取 base"""
    _check_weight_grid(half_width, count)
    h = 2.0 * half_width / count
    x = -half_width + (np.arange(count) + 0.5) * h
    return Weight(np.where(support.mask(x), value, base), half_width, WeightKind.STEP)


def make_constant_weight(half_width: float, count: int, value: float = 1.0) -> Weight:
    _check_weight_grid(half_width, count)
    return Weight(np.full(count, float(value)), half_width, WeightKind.CONSTANT)


def make_periodic_power_weight(alpha: float, count: int) -> Weight:
    """环面上的 dist(θ, ℤ)^α"""
    if not -1 < alpha < 1:
        raise WeightError(f"幂权重要求 α ∈ (-1, 1)，得到 α={alpha}")
    _check_weight_grid(0.5, count)
    theta = (np.arange(count) + 0.5) / count
    dist = np.minimum(theta, 1.0 - theta)
    return Weight(dist ** alpha, 0.5, WeightKind.POWER, alpha=float(alpha), periodic=True)


def dyadic_average_weight(sigma: Weight, nu: int, lat: DyadicLattice) -> Weight:
    """σ_{ν,lat} = Σ_{|I|=2^{-ν}} ⟨σ⟩_I χ_I：每个格元上取 σ 的平均"""
    if lat.cell_length(nu) < 2 * sigma.spacing:
        raise GridError(f"尺度 2^-{nu} 小于 2h = {2 * sigma.spacing}")
    cells = lat.cell_index(nu, sigma.positions)
    offset = cells - cells.min()
    sums = np.bincount(offset, weights=sigma.samples)
    counts = np.bincount(offset)
    averaged = (sums / np.maximum(counts, 1))[offset]
    return Weight(averaged, sigma.half_width, WeightKind.AVERAGED, periodic=sigma.periodic)


def lp_norm_windowed(f: GridFunction, p: float, window: FrequencyInterval, zoom: int = 64,
                     spectrum: Optional[Spectrum] = None) -> NormEstimate:
    """
    ‖f‖_{Lᵖ([-T,T))}，window 内改用步长 h/zoom 的 chirp-z 求值

    |f|^p 在零点处的折点误差集中在 f 振荡最剧烈的区域；只在该区域加密。
    粗细两次求值分别为（h, h/zoom）与（2h, 2h/zoom）。
    """
    _check_p(p)
    T = f.half_width
    if window.a < -T or window.b > T:
        raise IntervalError(f"加密窗口 {window} 超出网格 [-{T}, {T})")
    if not is_power_of_two(zoom):
        raise GridError(f"加密倍数必须是 2 的幂，得到 {zoom}")
    s = spectrum if spectrum is not None else forward_transform(f)
    full = FrequencyInterval(-T, T)
    band = FrequencyInterval(-s.nyquist, s.nyquist)

    step = f.spacing / zoom
    count = int(round(window.length / step)) + 1
    fine_x = window.a + np.arange(count) * step
    fine_values = evaluate_band(s, band, window.a, count, step)

    def _total(stride: int) -> float:
        pos = f.positions[::stride]
        h = f.spacing * stride
        outside = (midpoint_weights(pos, h, full, period=2 * T)
                   - midpoint_weights(pos, h, window, period=2 * T))
        inner_x = fine_x[::stride]
        inner = midpoint_weights(inner_x, step * stride, window)
        return float(np.sum(np.clip(outside, 0.0, None) * np.abs(f.samples[::stride]) ** p)
                     + np.sum(inner * np.abs(fine_values[::stride]) ** p)) ** (1.0 / p)

    fine, coarse = _total(1), _total(2)
    return NormEstimate(fine, _relative_gap(fine, coarse), f.count + count)
