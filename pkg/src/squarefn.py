"""
Littlewood-Paley 平方函数

- square_function_grid：实直线上的 S_𝓘(f) = (Σ_I |P_I f|²)^{1/2}
- square_function_periodic_S2：环面上按 I^±_{k,l} 精确分桶的 S₂(f)
- smooth_square_function：二进格上的光滑平方函数 S_{φ,lat}
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import fft as sp_fft

from .config_loader import get_worker_count
from .errors import GridError, IntervalError
from .models.grid import GridFunction, SmoothBump, is_power_of_two
from .models.intervals import FrequencyInterval, IntervalCollection
from .models.lattice import DyadicLattice, lattice_triple
from .models.trig import TrigPolynomial
from .spectral.core import forward_transform, inverse_transform, multiply_spectrum, project_spectrum

logger = logging.getLogger(__name__)

BucketLabel = Tuple[int, int, int]


def _as_collection(c: Union[IntervalCollection, Iterable[FrequencyInterval]]) -> IntervalCollection:
    if isinstance(c, IntervalCollection):
        return c
    return IntervalCollection(tuple(sorted(c, key=lambda I: I.a)))


def square_function_grid(f: GridFunction, c: Union[IntervalCollection, Iterable[FrequencyInterval]],
                         workers: Optional[int] = None) -> GridFunction:
    """
    网格函数的平方函数 S_𝓘(f)

    Args:
        f: 输入网格函数
        c: 两两不交的频率区间族，必须落在 [-Nyquist, Nyquist] 内
        workers: 线程数，缺省取 LPLAB_THREADS

    Returns:
        非负实值 GridFunction；不含网格频率的区间贡献为 0
    """
    collection = _as_collection(c)
    s = forward_transform(f)
    xi = s.frequencies
    nyq = s.nyquist
    for I in collection:
        if I.a < -nyq or I.b > nyq:
            raise GridError(f"区间 {I} 超出 Nyquist 频率 ±{nyq}，会产生混叠")

    active = [I for I in collection if np.any(I.mask(xi))]
    skipped = len(collection) - len(active)
    if skipped:
        logger.debug(f"[squarefn] {skipped} 个区间不含网格频率，贡献为 0")

    def _power(I: FrequencyInterval) -> np.ndarray:
        return np.abs(inverse_transform(project_spectrum(s, I)).samples) ** 2

    total = np.zeros(f.count, dtype=float)
    workers = workers or get_worker_count()
    batch = max(1, 2 * workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # 分批提交，按区间顺序累加
        for start in range(0, len(active), batch):
            for power in pool.map(_power, active[start:start + batch]):
                total += power
    return GridFunction(np.sqrt(total), f.half_width)


def bucket_of(n: int) -> BucketLabel:
    """
    整数频率 n ≠ 0 所属的 (k, l, sign)

    n >= 1 时 n ∈ I⁺_{k,l}；n <= -1 时 -n ∈ I⁺_{k,l}，记 sign = -1。
    """
    n = int(n)
    if n == 0:
        raise IntervalError("n = 0 不属于任何 I^±_{k,l}（由 |f̂(0)|² 项单独处理）")
    sign = 1 if n > 0 else -1
    m = abs(n)
    k = m.bit_length()
    d = (1 << k) - m
    # 2^{l-1} < d <= 2^l
    l = (d - 1).bit_length()
    return k, l, sign


def _next_pow2(x: int) -> int:
    return 1 << max(0, int(x - 1).bit_length())


@dataclass(frozen=True, eq=False)
class PeriodicSquareFunction:
    """S₂(f)：零频项加上每个桶的部分和"""
    constant: complex
    buckets: Dict[BucketLabel, TrigPolynomial] = field(repr=False)
    degree: int = 0
    k_max: int = 0

    def default_grid(self) -> int:
        """相对次数 8 倍过采样的 θ 网格"""
        return max(1 << 14, 8 * _next_pow2(2 * self.degree + 1))

    def __call__(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        total = np.full(theta.shape, abs(self.constant) ** 2, dtype=float)
        for poly in self.buckets.values():
            total += np.abs(poly(theta)) ** 2
        return np.sqrt(total)

    def samples(self, m: Optional[int] = None) -> np.ndarray:
        """S₂(f)(j/m)，j = 0..m-1"""
        m = m or self.default_grid()
        if not is_power_of_two(m) or m <= 2 * self.degree:
            raise GridError(f"θ 网格点数 {m} 须为 2 的幂且大于 2·{self.degree}")
        total = np.full(m, abs(self.constant) ** 2, dtype=float)
        for poly in self.buckets.values():
            buf = np.zeros(m, dtype=np.complex128)
            for n, c in poly.coefficients.items():
                buf[n % m] = c
            total += np.abs(sp_fft.ifft(buf) * m) ** 2
        return np.sqrt(total)

    def l2_norm(self) -> float:
        """
        ‖S₂(f)‖_{L²(𝕋)} 的求积值

        |Δ_b f|² 是次数 <= 2D 的三角多项式，m > 2D 的等距平均即为精确积分。
        """
        m = _next_pow2(2 * self.degree + 1)
        m = max(m, 2)
        values = self.samples(m)
        return float(np.sqrt(np.mean(values ** 2)))


def square_function_periodic_S2(f: TrigPolynomial, k_max: Optional[int] = None) -> PeriodicSquareFunction:
    """
    环面平方函数 S₂(f)

    Args:
        f: 三角多项式
        k_max: 最大指数，要求 2^{k_max} > deg f；缺省取满足条件的最小值

    Returns:
        PeriodicSquareFunction，可在任意 θ 网格上求值
    """
    D = f.degree
    if k_max is None:
        k_max = max(1, D.bit_length())
    if k_max < 0 or (1 << k_max) <= D:
        raise IntervalError(f"要求 2^k_max > 次数 D，得到 k_max={k_max}, D={D}")

    grouped: Dict[BucketLabel, Dict[int, complex]] = {}
    for n, c in f.coefficients.items():
        if n == 0:
            continue
        grouped.setdefault(bucket_of(n), {})[n] = c
    buckets = {label: TrigPolynomial(coeffs) for label, coeffs in sorted(grouped.items())}
    logger.debug(f"[S2] 次数 {D}，{len(f.coefficients)} 个非零系数落入 {len(buckets)} 个桶")
    return PeriodicSquareFunction(constant=f.coefficient(0), buckets=buckets, degree=D, k_max=k_max)


def _cell_average(values: np.ndarray, cells: np.ndarray) -> np.ndarray:
    """把 values 替换为其所在格元内的平均值"""
    offset = cells - cells.min()
    sums = np.bincount(offset, weights=values)
    counts = np.bincount(offset)
    return (sums / np.maximum(counts, 1))[offset]


def smooth_square_function(g: GridFunction, phi: SmoothBump, lat: DyadicLattice,
                           nu_range: Sequence[int]) -> GridFunction:
    """
    S_{φ,lat}(g)(x) = (Σ_ν Σ_{|I|=2^{-ν}} ⟨|P̃_ν g|²⟩_I χ_I(x))^{1/2}

    P̃_ν 为符号 φ(2^{-ν}ξ) 的乘子；格元平均取格元内网格样本的平均。
    """
    nus = list(nu_range)
    if not nus:
        raise GridError("ν 范围为空")
    h = g.spacing
    for nu in nus:
        if lat.cell_length(nu) < 2 * h:
            raise GridError(f"尺度 2^-{nu} 小于 2h = {2 * h}，格元无法在网格上分辨")

    s = forward_transform(g)
    x = g.positions
    total = np.zeros(g.count, dtype=float)
    for nu in nus:
        scale = 2.0 ** (-nu)
        piece = inverse_transform(multiply_spectrum(s, lambda xi, scale=scale: phi(scale * xi)))
        total += _cell_average(np.abs(piece.samples) ** 2, lat.cell_index(nu, x))
    return GridFunction(np.sqrt(total), g.half_width)


__all__ = [
    'square_function_grid', 'bucket_of', 'PeriodicSquareFunction', 'square_function_periodic_S2',
    'smooth_square_function', 'lattice_triple',
]
