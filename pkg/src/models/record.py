"""
实验记录与见证函数参数
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence

import math

from ..errors import GridError, QuadratureError
from .grid import is_power_of_two
from .intervals import FrequencyInterval


def format_value(value: Any) -> str:
    """CSV 单元格格式：浮点 17 位有效数字，其余原样"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


def parse_value(text: str) -> Any:
    """format_value 的逆：int → float → 字符串"""
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


@dataclass(frozen=True)
class WitnessSpec:
    """
    见证函数 g_N 的参数

    ĝ_N 在 ±[1, 2N] 上恒为 1，支撑于 ±[1/2, 4N]；要求 4N < Nyquist = n/(4T)。
    """
    N: int
    half_width: float
    count: int

    def __post_init__(self):
        if not (is_power_of_two(self.N) and self.N >= 4):
            raise GridError(f"N 必须是 >= 4 的 2 的幂，得到 N={self.N}")
        if not is_power_of_two(self.count):
            raise GridError(f"网格点数必须是 2 的幂，得到 n={self.count}")
        if not 4 * self.N < self.nyquist:
            raise GridError(
                f"见证函数频谱支撑 4N={4 * self.N} 超出 Nyquist={self.nyquist}（n={self.count}, T={self.half_width}）"
            )

    @property
    def nyquist(self) -> float:
        return self.count / (4.0 * self.half_width)

    @property
    def plateau(self) -> FrequencyInterval:
        return FrequencyInterval(1.0, 2.0 * self.N)

    @property
    def support(self) -> FrequencyInterval:
        return FrequencyInterval(0.5, 4.0 * self.N)

    @property
    def log2N(self) -> int:
        return self.N.bit_length() - 1

    @classmethod
    def for_N(cls, N: int, half_width: float = 8.0, margin: int = 2) -> 'WitnessSpec':
        """取最小的 n 使 Nyquist >= margin·4N"""
        count = 1
        while count / (4.0 * half_width) < margin * 4 * N:
            count *= 2
        return cls(N=N, half_width=half_width, count=count)

    def to_dict(self) -> dict:
        return {"N": self.N, "T": self.half_width, "n": self.count}


@dataclass
class ExperimentRecord:
    """扫描中的一行：参数 → 测量值，附带数值质量信息"""
    parameters: Dict[str, Any] = field(default_factory=dict)
    measurements: Dict[str, float] = field(default_factory=dict)
    provenance: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for key, value in self.measurements.items():
            if not math.isfinite(value):
                raise QuadratureError(f"测量值 {key}={value} 非有限")

    def get(self, key: str) -> Any:
        for bucket in (self.parameters, self.measurements, self.provenance):
            if key in bucket:
                return bucket[key]
        raise KeyError(key)

    def check_quality(self, tol: float, key: str = "quad_err"):
        """加密误差超过阈值则拒收该记录"""
        err = self.provenance.get(key, 0.0)
        if err > tol:
            raise QuadratureError(
                f"记录 {self.parameters} 的加密误差 {err:.3g} 超过阈值 {tol:.3g}", refinement_error=err
            )

    @classmethod
    def from_row(cls, columns: Sequence[str], values: Sequence[str],
                 parameter_keys: Sequence[str] = (), provenance_keys: Sequence[str] = ("quad_err",)) -> 'ExperimentRecord':
        record = cls()
        for c, v in zip(columns, values):
            value = parse_value(v)
            if c in parameter_keys or not isinstance(value, (int, float)) or isinstance(value, bool):
                record.parameters[c] = value
            elif c in provenance_keys:
                record.provenance[c] = float(value)
            else:
                record.measurements[c] = float(value)
        return record

