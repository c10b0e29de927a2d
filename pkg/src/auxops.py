"""
辅助算子：非中心 Hardy-Littlewood 极大函数 M 与极大 Hilbert 变换 H*

两者都在受限族上取上确界：M 的区间长度取 measures.interval_lengths 的阶梯，
H* 的截断半径取 2h·2^i（i >= 0，直到 2T）。
"""
import logging
from typing import List, Optional, Sequence

import numpy as np
from scipy import signal
from scipy.ndimage import maximum_filter1d

from .errors import GridError
from .measures import interval_lengths
from .models.grid import GridFunction
from .spectral.core import modulate

logger = logging.getLogger(__name__)

# 长度不超过此值时直接卷积求窗口和，否则用前缀和
_DIRECT_SUM_MAX = 8


def interval_ladder(n: int) -> List[int]:
    """M 使用的区间长度（格点数）"""
    return interval_lengths(n)


def epsilon_ladder(half_width: float, count: int) -> List[float]:
    """H* 使用的截断半径：2h, 4h, 8h, ... <= 2T"""
    h = 2.0 * half_width / count
    ladder = []
    eps = 2.0 * h
    while eps <= 2.0 * half_width:
        ladder.append(eps)
        eps *= 2.0
    return ladder


def _window_means(values: np.ndarray, length: int, prefix: np.ndarray) -> np.ndarray:
    if length <= _DIRECT_SUM_MAX:
        sums = np.convolve(values, np.ones(length), mode="valid")
    else:
        sums = prefix[length:] - prefix[:-length]
    return sums / length


def _trailing_max(values: np.ndarray, length: int) -> np.ndarray:
    """out[j] = max(values[j-L+1 .. j])，越界部分视为 -inf"""
    n = values.size
    odd = length if length % 2 else length - 1
    padded = np.concatenate([np.full(length - 1, -np.inf), values])
    # 奇数窗口居中：centred[i] = max(padded[i-r .. i+r])
    centred = maximum_filter1d(padded, size=odd, mode="nearest")
    out = centred[np.arange(n) + length - 1 - (odd - 1) // 2]
    if odd != length:
        out = np.maximum(out, padded[:n])
    return out


def maximal_function(f: GridFunction, lengths: Optional[Sequence[int]] = None) -> GridFunction:
    """
    M(f)(x_j) = max_{I ∋ x_j} ⟨|f|⟩_I

    Args:
        f: 网格函数
        lengths: 区间长度（格点数），缺省为 interval_ladder(n)

    Returns:
        非负实值 GridFunction
    """
    a = np.abs(f.samples)
    n = a.size
    lengths = list(lengths) if lengths is not None else interval_ladder(n)
    prefix = np.concatenate([[0.0], np.cumsum(a)])
    best = np.zeros(n, dtype=float)
    for L in lengths:
        if not 1 <= L <= n:
            continue
        starts = np.full(n, -np.inf)
        starts[:n - L + 1] = _window_means(a, L, prefix)
        best = np.maximum(best, _trailing_max(starts, L))
    return GridFunction(best, f.half_width)


def truncated_hilbert(f: GridFunction, eps: float) -> GridFunction:
    """H_ε(f)(x) = ∫_{|x-y|>ε} f(y)/(x-y) dy，中点求积，f 在网格外为 0"""
    n = f.count
    h = f.spacing
    d = np.arange(-(n - 1), n)
    kernel = np.zeros(d.size, dtype=float)
    far = np.abs(d) * h > eps
    kernel[far] = 1.0 / d[far]
    full = signal.fftconvolve(f.samples, kernel, mode="full")
    return GridFunction(full[n - 1:2 * n - 1], f.half_width)


def maximal_hilbert(f: GridFunction, eps_ladder: Optional[Sequence[float]] = None) -> GridFunction:
    """H*(f) = max_ε |H_ε f|，ε 取 eps_ladder"""
    ladder = list(eps_ladder) if eps_ladder is not None else epsilon_ladder(f.half_width, f.count)
    if not ladder:
        raise GridError("截断半径阶梯为空")
    best = np.zeros(f.count, dtype=float)
    for eps in ladder:
        best = np.maximum(best, np.abs(truncated_hilbert(f, eps).samples))
    logger.debug(f"[auxops] H* 使用 {len(ladder)} 个截断半径")
    return GridFunction(best, f.half_width)


def modulated_maximal_hilbert(f: GridFunction, t: float,
                              eps_ladder: Optional[Sequence[float]] = None) -> GridFunction:
    """H*(e^{2πitx} f)：先把频谱平移 +t 再取极大 Hilbert 变换"""
    return maximal_hilbert(modulate(f, -t), eps_ladder)
