"""
环面 𝕋 = ℝ/ℤ 上的三角多项式
"""
from dataclasses import dataclass
from typing import Dict, Mapping

import numpy as np

from ..errors import GridError, ValidationError
from .grid import is_power_of_two


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """f(θ) = Σ c_n e^{2πinθ}，只保存非零系数"""
    coefficients: Mapping[int, complex]

    def __post_init__(self):
        clean: Dict[int, complex] = {}
        for n, c in self.coefficients.items():
            c = complex(c)
            if not np.isfinite(c):
                raise ValidationError(f"系数 c_{n} 非有限")
            if c != 0:
                clean[int(n)] = c
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    @property
    def degree(self) -> int:
        return max((abs(n) for n in self.coefficients), default=0)

    def coefficient(self, n: int) -> complex:
        return self.coefficients.get(n, 0j)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=np.complex128)
        for n, c in self.coefficients.items():
            out += c * np.exp(2j * np.pi * n * theta)
        return out

    def samples(self, m: int) -> np.ndarray:
        """在 θ_j = j/m 上取值（要求 m > 2·degree，FFT 无混叠）"""
        if not is_power_of_two(m):
            raise GridError(f"θ 网格点数必须是 2 的幂，得到 {m}")
        if m <= 2 * self.degree:
            raise GridError(f"θ 网格点数 {m} 不足以表示次数 {self.degree}")
        buf = np.zeros(m, dtype=np.complex128)
        for n, c in self.coefficients.items():
            buf[n % m] += c
        return np.fft.ifft(buf) * m

    def l2_norm(self) -> float:
        """Plancherel：‖f‖_{L²(𝕋)} = (Σ|c_n|²)^{1/2}"""
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.coefficients.values())))

    def __add__(self, other: 'TrigPolynomial') -> 'TrigPolynomial':
        merged = dict(self.coefficients)
        for n, c in other.coefficients.items():
            merged[n] = merged.get(n, 0j) + c
        return TrigPolynomial(merged)

    @classmethod
    def random(cls, degree: int, rng: np.random.Generator, density: float = 1.0) -> 'TrigPolynomial':
        """随机复系数，频率取自 [-degree, degree]"""
        freqs = np.arange(-degree, degree + 1)
        keep = rng.random(freqs.size) < density
        values = rng.standard_normal(freqs.size) + 1j * rng.standard_normal(freqs.size)
        return cls({int(n): complex(v) for n, v, k in zip(freqs, values, keep) if k})
