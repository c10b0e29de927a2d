"""
光滑鼓包构造

过渡函数 s(t) = h(t) / (h(t) + h(1-t))，h(t) = exp(-1/t)（t > 0），否则为 0。
"""
import numpy as np

from ..errors import ValidationError
from ..models.grid import SmoothBump
from ..models.intervals import FrequencyInterval


def _h(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t, dtype=float)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t) -> np.ndarray:
    """C^∞ 阶跃：t <= 0 为 0，t >= 1 为 1"""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a = _h(t)
    b = _h(1.0 - t)
    return a / (a + b)


def _rho(t: np.ndarray) -> np.ndarray:
    shape = np.shape(t)
    r = np.abs(np.atleast_1d(t))
    out = smooth_step(2.0 - r)
    return out.reshape(shape)


def make_transition(rho_kind: str = "exp") -> SmoothBump:
    """
    ρ：偶函数，[-1,1] 上恒为 1，支撑于 [-2,2]

    目前只有 exp(-1/t) 一种过渡
    """
    if rho_kind not in ("exp", "standard"):
        raise ValidationError(f"未知过渡类型: {rho_kind!r}")
    return SmoothBump(
        name="rho",
        rule=_rho,
        support=(FrequencyInterval(-2.0, 2.0),),
        plateau=(FrequencyInterval(-1.0, 1.0),),
    )


def make_phi_partition() -> SmoothBump:
    """
    φ(ξ) = sqrt(ρ(ξ) - ρ(2ξ))，支撑于 ±[1/2, 2]

    Σ_ν φ²(2^{-ν}ξ) 伸缩求和为 1（ξ ≠ 0）
    """
    rho = make_transition()

    def _phi(xi: np.ndarray) -> np.ndarray:
        diff = rho(xi) - rho(2.0 * np.asarray(xi))
        return np.sqrt(np.clip(diff, 0.0, 1.0))

    return SmoothBump(
        name="phi",
        rule=_phi,
        support=(FrequencyInterval(-2.0, -0.5), FrequencyInterval(0.5, 2.0)),
    )
