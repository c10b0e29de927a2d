"""
网格函数与频谱模型

约定：GridFunction 的样本 j 代表 x_j = -T + j·h，h = 2T/n；
Spectrum 的系数 m 代表频率 ξ_m = m/(2T)，m ∈ [-n/2, n/2)，按频率升序存放。
"""
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from ..errors import GridError
from .intervals import FrequencyInterval


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


def _frozen_complex(values, n_expected: int = None) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True).reshape(-1)
    if n_expected is not None and arr.size != n_expected:
        raise GridError(f"样本数 {arr.size} 与期望 {n_expected} 不符")
    arr.setflags(write=False)
    return arr


def _check_grid(half_width: float, n: int, values: np.ndarray):
    if not is_power_of_two(n) or n < 2:
        raise GridError(f"网格点数必须是 >= 2 的 2 的幂，得到 n={n}")
    if not (np.isfinite(half_width) and half_width > 0):
        raise GridError(f"半宽 T 必须为正有限数，得到 T={half_width}")
    if not np.all(np.isfinite(values)):
        raise GridError("样本中含有非有限值")


@dataclass(frozen=True, eq=False)
class GridFunction:
    """[-T, T) 上均匀网格的复值样本"""
    samples: np.ndarray
    half_width: float

    def __post_init__(self):
        arr = _frozen_complex(self.samples)
        _check_grid(self.half_width, arr.size, arr)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def count(self) -> int:
        return self.samples.size

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.count

    @property
    def nyquist(self) -> float:
        return self.count / (4.0 * self.half_width)

    @property
    def positions(self) -> np.ndarray:
        return -self.half_width + np.arange(self.count) * self.spacing

    def index_of(self, x: float) -> int:
        """x 所在的网格下标（要求 x 正好落在网格上）"""
        j = (x + self.half_width) / self.spacing
        if j != np.round(j) or not 0 <= j < self.count:
            raise GridError(f"x={x} 不在网格上")
        return int(j)

    def same_grid(self, other) -> bool:
        return self.half_width == other.half_width and self.count == other.count

    def with_samples(self, samples) -> 'GridFunction':
        return GridFunction(samples, self.half_width)

    def __add__(self, other: 'GridFunction') -> 'GridFunction':
        if not self.same_grid(other):
            raise GridError("网格不匹配")
        return self.with_samples(self.samples + other.samples)

    def __mul__(self, c) -> 'GridFunction':
        return self.with_samples(self.samples * c)

    __rmul__ = __mul__

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], np.ndarray], half_width: float,
                      count: int) -> 'GridFunction':
        if not is_power_of_two(count):
            raise GridError(f"网格点数必须是 2 的幂，得到 n={count}")
        x = -half_width + np.arange(count) * (2.0 * half_width / count)
        return cls(np.asarray(func(x), dtype=np.complex128), half_width)

    @classmethod
    def zeros(cls, half_width: float, count: int) -> 'GridFunction':
        return cls(np.zeros(count, dtype=np.complex128), half_width)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """GridFunction 的离散 Fourier 系数（积分逼近归一化）"""
    coefficients: np.ndarray
    half_width: float

    def __post_init__(self):
        arr = _frozen_complex(self.coefficients)
        _check_grid(self.half_width, arr.size, arr)
        object.__setattr__(self, "coefficients", arr)
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def count(self) -> int:
        return self.coefficients.size

    @property
    def nyquist(self) -> float:
        return self.count / (4.0 * self.half_width)

    @property
    def frequencies(self) -> np.ndarray:
        n = self.count
        return np.arange(-n // 2, n // 2) / (2.0 * self.half_width)

    def index_of(self, xi: float) -> int:
        m = xi * 2.0 * self.half_width
        if m != np.round(m) or not -self.count // 2 <= m < self.count // 2:
            raise GridError(f"ξ={xi} 不在频率网格上")
        return int(m) + self.count // 2

    def with_coefficients(self, coefficients) -> 'Spectrum':
        return Spectrum(coefficients, self.half_width)

    @classmethod
    def from_symbol(cls, symbol: Callable[[np.ndarray], np.ndarray], half_width: float,
                    count: int) -> 'Spectrum':
        """把解析频谱采样到频率网格上"""
        if not is_power_of_two(count):
            raise GridError(f"网格点数必须是 2 的幂，得到 n={count}")
        xi = np.arange(-count // 2, count // 2) / (2.0 * half_width)
        return cls(np.asarray(symbol(xi), dtype=np.complex128), half_width)


@dataclass(frozen=True)
class SmoothBump:
    """实值光滑鼓包：值域 [0,1]，支撑外为 0，平台上恰为 1"""
    name: str
    rule: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    support: Tuple[FrequencyInterval, ...]
    plateau: Tuple[FrequencyInterval, ...] = ()

    def __call__(self, x):
        values = self.rule(np.asarray(x, dtype=float))
        if np.ndim(x) == 0:
            return float(values)
        return values
