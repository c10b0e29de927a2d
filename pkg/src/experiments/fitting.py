"""
幂律指数拟合：对 (log x, log y) 做普通最小二乘
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ValidationError
from ..models.record import ExperimentRecord


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    count: int

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r_squared, "count": self.count}


def fit_affine(x: Sequence[float], y: Sequence[float]) -> FitResult:
    """y ≈ slope·x + intercept"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ValidationError(f"x 与 y 长度不一致: {x.size} vs {y.size}")
    if x.size < 3:
        raise ValidationError(f"拟合至少需要 3 个点，得到 {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValidationError("拟合数据含非有限值")
    if np.ptp(x) == 0:
        raise ValidationError("x 全部相同，斜率不可确定")
    slope, intercept = np.polyfit(x, y, 1)
    if np.ptp(y) == 0:
        r_squared = 1.0
    else:
        residual = y - (slope * x + intercept)
        r_squared = 1.0 - float(np.sum(residual ** 2) / np.sum((y - y.mean()) ** 2))
    return FitResult(float(slope), float(intercept), r_squared, int(x.size))


def fit_log_log(x: Sequence[float], y: Sequence[float]) -> FitResult:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValidationError("对数拟合要求 x, y 全部为正")
    return fit_affine(np.log(x), np.log(y))


def fit_exponent(records: Sequence[ExperimentRecord], x_key: str, y_key: str) -> FitResult:
    """
    从记录中取 (x_key, y_key) 做对数-对数拟合

    Returns:
        FitResult：斜率即幂律指数
    """
    try:
        x = [float(r.get(x_key)) for r in records]
        y = [float(r.get(y_key)) for r in records]
    except KeyError as e:
        raise ValidationError(f"记录中缺少列 {e.args[0]!r}") from None
    return fit_log_log(x, y)
