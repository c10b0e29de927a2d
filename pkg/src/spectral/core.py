"""
离散 Fourier 分析骨架

归一化约定（逼近连续变换 f̂(ξ) = ∫ f(x) e^{-2πiξx} dx）：
    ĉ(ξ_m) = h · Σ_k f(x_k) e^{-2πi ξ_m x_k}
    f(x_k) = (1/2T) · Σ_m ĉ(ξ_m) e^{2πi ξ_m x_k}
由 x_k = -T + k·h 可得 e^{-2πi ξ_m x_k} = (-1)^m e^{-2πi mk/n}，因此两者都是一次 FFT 加符号交替。
"""
import logging
from typing import Callable, Union

import numpy as np
from scipy import fft as sp_fft
from scipy import signal

from ..errors import GridError
from ..models.grid import GridFunction, Spectrum, is_power_of_two
from ..models.intervals import FrequencyInterval

logger = logging.getLogger(__name__)

Symbol = Union[Callable[[np.ndarray], np.ndarray], np.ndarray, float, complex]

# 频率偏移的网格容差（以频率步长 1/(2T) 为单位）
_GRID_TOL = 1e-9


def _alternating_sign(n: int) -> np.ndarray:
    m = np.arange(n) - n // 2
    return np.where(m % 2 == 0, 1.0, -1.0)


def frequencies(half_width: float, count: int) -> np.ndarray:
    """升序频率网格 ξ_m = m/(2T)，m ∈ [-n/2, n/2)"""
    if not is_power_of_two(count):
        raise GridError(f"网格点数必须是 2 的幂，得到 n={count}")
    return (np.arange(count) - count // 2) / (2.0 * half_width)


def forward_transform(f: GridFunction) -> Spectrum:
    """GridFunction → Spectrum"""
    n = f.count
    coefficients = f.spacing * _alternating_sign(n) * sp_fft.fftshift(sp_fft.fft(f.samples))
    return Spectrum(coefficients, f.half_width)


def inverse_transform(s: Spectrum) -> GridFunction:
    """Spectrum → GridFunction"""
    n = s.count
    h = 2.0 * s.half_width / n
    samples = sp_fft.ifft(sp_fft.ifftshift(s.coefficients * _alternating_sign(n))) / h
    return GridFunction(samples, s.half_width)


def _symbol_values(m: Symbol, xi: np.ndarray) -> np.ndarray:
    values = m(xi) if callable(m) else m
    values = np.broadcast_to(np.asarray(values, dtype=np.complex128), xi.shape)
    if not np.all(np.isfinite(values)):
        bad = xi[~np.isfinite(values)][0]
        raise GridError(f"乘子在网格频率 ξ={bad} 处非有限")
    return values


def multiply_spectrum(s: Spectrum, m: Symbol) -> Spectrum:
    return s.with_coefficients(s.coefficients * _symbol_values(m, s.frequencies))


def apply_multiplier(f: GridFunction, m: Symbol) -> GridFunction:
    """T_m：频谱逐点乘以 m(ξ_m) 后逆变换"""
    return inverse_transform(multiply_spectrum(forward_transform(f), m))


def project_spectrum(s: Spectrum, interval: FrequencyInterval) -> Spectrum:
    """频域上的 P_I：半开隶属 [a, b)"""
    keep = interval.mask(s.frequencies)
    return s.with_coefficients(np.where(keep, s.coefficients, 0))


def project(f: GridFunction, interval: FrequencyInterval) -> GridFunction:
    """P_I = T_{χ_I}"""
    return inverse_transform(project_spectrum(forward_transform(f), interval))


def _grid_shift(t: float, half_width: float) -> int:
    q = t * 2.0 * half_width
    if abs(q - round(q)) > _GRID_TOL * max(1.0, abs(q)):
        raise GridError(f"调制频率 t={t} 不在频率网格（步长 {1.0 / (2.0 * half_width)}）上，会产生混叠")
    return int(round(q))


def modulate(f: GridFunction, t: float) -> GridFunction:
    """
    乘以 e^{-2πitx}，频谱平移 -t

    t = q/(2T) 时 t·x_j = -q/2 + qj/n，相位按整数取模计算，平移是精确的循环移位。
    """
    q = _grid_shift(t, f.half_width)
    n = f.count
    j = np.arange(n, dtype=np.int64)
    phase = np.exp(-2j * np.pi * ((q * j) % n) / n) * (-1.0) ** (q % 2)
    return f.with_samples(f.samples * phase)


def translate(f: GridFunction, shift: float) -> GridFunction:
    """f(· - shift)，shift 须为 h 的整数倍（循环平移）"""
    d = shift / f.spacing
    if abs(d - round(d)) > _GRID_TOL * max(1.0, abs(d)):
        raise GridError(f"平移量 {shift} 不是网格间距 {f.spacing} 的整数倍")
    return f.with_samples(np.roll(f.samples, int(round(d))))


def upsample(f: GridFunction, factor: int) -> GridFunction:
    """频谱补零的带限加密，factor 为 2 的幂"""
    if not is_power_of_two(factor):
        raise GridError(f"加密倍数必须是 2 的幂，得到 {factor}")
    if factor == 1:
        return f
    s = forward_transform(f)
    n = s.count
    padded = np.zeros(n * factor, dtype=np.complex128)
    start = (n * factor) // 2 - n // 2
    padded[start:start + n] = s.coefficients
    return inverse_transform(Spectrum(padded, f.half_width))


def evaluate_band(s: Spectrum, interval: FrequencyInterval, x0: float, count: int,
                  step: float) -> np.ndarray:
    """
    在任意均匀点 x_j = x0 + j·step 上计算 P_I f，只用 I 内的系数

    f(x_j) = (1/2T) e^{2πi ξ_{m0} x_j} Σ_q b_q W^{qj}，W = e^{2πi·step/(2T)}，
    b_q = c_{m0+q} e^{2πi q x0/(2T)}；求和由 chirp-z 变换完成。
    """
    keep = np.flatnonzero(interval.mask(s.frequencies))
    if keep.size == 0:
        return np.zeros(count, dtype=np.complex128)
    lo, hi = keep[0], keep[-1] + 1
    c = s.coefficients[lo:hi]
    two_t = 2.0 * s.half_width
    xi0 = s.frequencies[lo]
    q = np.arange(c.size)
    b = c * np.exp(2j * np.pi * q * x0 / two_t)
    w = np.exp(2j * np.pi * step / two_t)
    values = signal.czt(b, m=count, w=w, a=1.0)
    x = x0 + np.arange(count) * step
    return np.exp(2j * np.pi * xi0 * x) * values / two_t


def band_modulus(s: Spectrum, interval: FrequencyInterval, x0: float, count: int,
                 step: float) -> np.ndarray:
    """
    |P_I f| 在 x_j = x0 + j·step 上的值

    I 内系数全部相同（平台区）时 |P_I f| 是 Dirichlet 核 |c|·|sin(πMx/2T)/sin(πx/2T)|/(2T)，
    直接按闭式计算；否则退回 evaluate_band。
    """
    keep = np.flatnonzero(interval.mask(s.frequencies))
    if keep.size == 0:
        return np.zeros(count, dtype=float)
    c = s.coefficients[keep[0]:keep[-1] + 1]
    if not np.all(c == c[0]):
        return np.abs(evaluate_band(s, interval, x0, count, step))
    two_t = 2.0 * s.half_width
    M = c.size
    u = np.pi * (x0 + np.arange(count) * step) / two_t
    den = np.sin(u)
    ratio = np.full(count, float(M))
    nonzero = np.abs(den) > 1e-300
    ratio[nonzero] = np.sin(M * u[nonzero]) / den[nonzero]
    return np.abs(c[0]) * np.abs(ratio) / two_t


def energy(f: GridFunction) -> float:
    """‖f‖²_{L²} 的网格求积 Σ|f|²h"""
    return float(np.sum(np.abs(f.samples) ** 2) * f.spacing)


def spectral_energy(s: Spectrum) -> float:
    """Parseval 另一侧 Σ|ĉ|²/(2T)"""
    return float(np.sum(np.abs(s.coefficients) ** 2) / (2.0 * s.half_width))
