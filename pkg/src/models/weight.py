"""
权重模型与 A₂ 报告
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..errors import QuadratureError, WeightError
from .grid import is_power_of_two
from .intervals import FrequencyInterval


class WeightKind(Enum):
    """权重种类标签"""
    CONSTANT = "constant"
    POWER = "power"
    STEP = "step"
    AVERAGED = "averaged"    # 二进格平均后的分段常数权重
    CUSTOM = "custom"

    @classmethod
    def from_string(cls, s: str) -> 'WeightKind':
        try:
            return cls(str(s).strip().lower())
        except ValueError:
            raise WeightError(f"未知权重种类: {s!r}（可选 constant/power/step）") from None


@dataclass(frozen=True, eq=False)
class Weight:
    """
    网格上的正权重

    样本 j 位于格元中点：实直线上 -T + (j+½)h，环面上 (j+½)h（此时 T = ½，域为 [0,1)）。
    """
    samples: np.ndarray
    half_width: float
    kind: WeightKind = WeightKind.CUSTOM
    alpha: Optional[float] = None
    periodic: bool = False

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float, copy=True).reshape(-1)
        if not is_power_of_two(arr.size):
            raise WeightError(f"权重网格点数必须是 2 的幂，得到 {arr.size}")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise WeightError("权重样本必须全部为正且有限")
        if self.kind is WeightKind.POWER and not (self.alpha is not None and -1 < self.alpha < 1):
            raise WeightError(f"幂权重要求 α ∈ (-1, 1)，得到 α={self.alpha}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def count(self) -> int:
        return self.samples.size

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.count

    @property
    def left(self) -> float:
        return 0.0 if self.periodic else -self.half_width

    @property
    def positions(self) -> np.ndarray:
        return self.left + (np.arange(self.count) + 0.5) * self.spacing

    def same_grid(self, f) -> bool:
        return self.half_width == f.half_width and self.count == f.count

    def scaled(self, c: float) -> 'Weight':
        return Weight(self.samples * c, self.half_width, self.kind, self.alpha, self.periodic)


@dataclass(frozen=True)
class A2Report:
    """[w]_{A₂} 在扫描族上的上确界"""
    characteristic: float
    argmax: FrequencyInterval
    family_size: int

    def __post_init__(self):
        # Cauchy-Schwarz: ⟨w⟩⟨w^{-1}⟩ >= 1
        if not np.isfinite(self.characteristic) or self.characteristic < 1.0 - 1e-12:
            raise QuadratureError(f"A₂ 特征值 {self.characteristic} 违反 Cauchy-Schwarz 下界 1")

    def to_dict(self) -> dict:
        return {
            "characteristic": self.characteristic,
            "a": self.argmax.a,
            "b": self.argmax.b,
            "family_size": self.family_size,
        }
