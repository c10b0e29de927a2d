"""
频率区间模型
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

import math

import numpy as np

from ..errors import IntervalError


class SignMode(Enum):
    """点集的符号选择"""
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"

    @classmethod
    def from_string(cls, s: str) -> 'SignMode':
        """从字符串转换（接受 +/-/± 简写）"""
        mapping = {
            "positive": cls.POSITIVE, "pos": cls.POSITIVE, "+": cls.POSITIVE,
            "negative": cls.NEGATIVE, "neg": cls.NEGATIVE, "-": cls.NEGATIVE,
            "both": cls.BOTH, "±": cls.BOTH,
        }
        key = str(s).strip().lower()
        if key not in mapping:
            raise IntervalError(f"未知符号模式: {s!r}（可选 positive/negative/both）")
        return mapping[key]


class SetKind(Enum):
    """缺项集种类"""
    E1 = "e1"            # {±2^k}
    E2 = "e2"            # 差形式 {±(2^k - 2^l)}
    ETILDE = "et"        # 和形式 {±(2^{k1} + ... + 2^{kN})}

    @classmethod
    def parse(cls, text: str) -> Tuple['SetKind', int]:
        """
        解析集合名称，返回 (种类, 阶数)

        e1 → (E1, 1)，e2 → (E2, 2)，et3 → (ETILDE, 3)
        """
        t = str(text).strip().lower()
        if t == "e1":
            return cls.E1, 1
        if t == "e2":
            return cls.E2, 2
        if t.startswith("et") and t[2:].isdigit() and int(t[2:]) >= 1:
            return cls.ETILDE, int(t[2:])
        raise IntervalError(f"未知集合: {text!r}（可选 e1, e2, et<N>）")

    def label(self, order: int) -> str:
        return f"et{order}" if self is SetKind.ETILDE else self.value


@dataclass(frozen=True)
class FrequencyInterval:
    """半开区间 [a, b)"""
    a: float
    b: float
    # (k, l, sign) 标签，仅用于输出，不参与比较
    label: Optional[Tuple[Optional[int], Optional[int], int]] = field(default=None, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise IntervalError(f"区间端点必须有限: [{self.a}, {self.b})")
        if not self.a < self.b:
            raise IntervalError(f"区间要求 a < b，得到 [{self.a}, {self.b})")

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, x: float) -> bool:
        return self.a <= x < self.b

    def mask(self, values: np.ndarray) -> np.ndarray:
        """半开隶属：a 保留，b 丢弃"""
        return (values >= self.a) & (values < self.b)

    def within(self, other: 'FrequencyInterval') -> bool:
        return other.a <= self.a and self.b <= other.b

    def as_fractions(self) -> Tuple[Fraction, Fraction]:
        """精确二进有理端点（浮点到分数的转换是精确的）"""
        return Fraction(self.a), Fraction(self.b)

    def __repr__(self) -> str:
        return f"[{self.a!r}, {self.b!r})"


@dataclass(frozen=True)
class IntervalCollection:
    """按左端点排序、两两不交的区间族"""
    intervals: Tuple[FrequencyInterval, ...]

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))
        for prev, nxt in zip(self.intervals, self.intervals[1:]):
            if nxt.a < prev.a:
                raise IntervalError(f"区间未按左端点排序: {prev} 之后是 {nxt}")
            if nxt.a < prev.b:
                raise IntervalError(f"区间相交: {prev} 与 {nxt}")

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[FrequencyInterval]:
        return iter(self.intervals)

    def __getitem__(self, i) -> FrequencyInterval:
        return self.intervals[i]

    @property
    def is_contiguous(self) -> bool:
        return all(p.b == q.a for p, q in zip(self.intervals, self.intervals[1:]))

    @property
    def span(self) -> FrequencyInterval:
        if not self.intervals:
            raise IntervalError("空区间族没有跨度")
        return FrequencyInterval(self.intervals[0].a, self.intervals[-1].b)

    def restricted_to(self, band: FrequencyInterval) -> 'IntervalCollection':
        """保留完全落在 band 内的区间"""
        return IntervalCollection(tuple(I for I in self.intervals if I.within(band)))

    def endpoints(self) -> List[Tuple[float, float]]:
        return [(I.a, I.b) for I in self.intervals]


@dataclass(frozen=True)
class LacunarySpec:
    """缺项点集参数"""
    kind: SetKind
    k_min: int
    k_max: int
    l_min: int = 0
    sign_mode: SignMode = SignMode.BOTH
    order: int = 0  # 0 表示由 kind 推出

    def __post_init__(self):
        if self.order == 0:
            object.__setattr__(self, "order", {SetKind.E1: 1, SetKind.E2: 2}.get(self.kind, 2))
        if self.order < 1:
            raise IntervalError(f"阶数必须 >= 1，得到 {self.order}")
        if self.kind is SetKind.E1 and self.order != 1:
            raise IntervalError("E1 的阶数固定为 1")
        if self.kind is SetKind.E2 and self.order != 2:
            raise IntervalError("E2 的阶数固定为 2")
        if self.k_max < self.k_min:
            raise IntervalError(f"要求 k_max >= k_min，得到 k_min={self.k_min}, k_max={self.k_max}")
        if self.l_min > self.k_min:
            raise IntervalError(f"要求 l_min <= k_min，得到 l_min={self.l_min}, k_min={self.k_min}")

    @classmethod
    def from_name(cls, name: str, k_min: int, k_max: int, l_min: int = 0,
                  sign: str = "both") -> 'LacunarySpec':
        kind, order = SetKind.parse(name)
        return cls(kind=kind, k_min=k_min, k_max=k_max, l_min=l_min,
                   sign_mode=SignMode.from_string(sign), order=order)

    @property
    def name(self) -> str:
        return self.kind.label(self.order)


@dataclass
class PartitionReport:
    """verify_partition 的结论（精确二进有理算术）"""
    disjoint: bool
    covering: bool
    gaps: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
    overlaps: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
