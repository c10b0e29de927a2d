"""
异常层级

CLI 退出码约定：ValidationError → 1，QuadratureError → 2
"""


class LplabError(Exception):
    """所有 lplab 异常的基类"""


class ValidationError(LplabError, ValueError):
    """输入不合法（网格、区间、权重、配置等）"""


class GridError(ValidationError):
    """网格相关错误：点数非 2 的幂、非有限样本、超出 Nyquist、尺度小于网格间距等"""


class IntervalError(ValidationError):
    """区间/点集相关错误：a >= b、未排序、空集、指数范围溢出"""


class WeightError(ValidationError):
    """权重相关错误：非正样本、α 越界、网格不匹配"""


class ConfigError(ValidationError):
    """配置错误：缺少/未知键、类型不匹配、未知子命令"""

    def __init__(self, message: str, key: str = None):
        super().__init__(message)
        self.key = key


class QuadratureError(LplabError, ArithmeticError):
    """数值质量不达标：加密细化误差超过阈值，或测量值非有限"""

    def __init__(self, message: str, refinement_error: float = None):
        super().__init__(message)
        self.refinement_error = refinement_error
