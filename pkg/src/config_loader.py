"""
配置加载工具 - 支持从 .env 文件、key=value 配置文件和环境变量加载配置

优先级：命令行参数 > 配置文件 > 环境变量 > 默认值（命令行一层由 cli 负责）
"""
import os
from typing import Any, Dict, Optional

from dotenv import dotenv_values, load_dotenv

from .errors import ConfigError

DEFAULT_QUAD_TOL = 1e-4


def normalize_key(key: str) -> str:
    """配置键中 '-' 与 '_' 等价，统一为 '_'"""
    return key.strip().lower().replace("-", "_")


def parse_key_value_file(path: str) -> Dict[str, str]:
    """
    读取平铺的 key=value 配置文件（与 .env 同一语法）

    Args:
        path: 配置文件路径；'#' 开头为注释，空行忽略

    Returns:
        键已规范化的字符串字典
    """
    if not os.path.exists(path):
        raise ConfigError(f"配置文件不存在: {path}")
    values: Dict[str, str] = {}
    for key, value in dotenv_values(path, interpolate=False, encoding="utf-8").items():
        if value is None:
            raise ConfigError(f"{path}: 键 {key!r} 不是 key=value 格式", key=normalize_key(key))
        values[normalize_key(key)] = value.strip()
    return values


class ConfigLoader:
    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file
        self.config: Dict[str, Any] = {}
        self._load_config()

    @staticmethod
    def _get_env(*keys: str, default: str = None) -> str:
        """Return first non-empty env var among keys."""
        for k in keys:
            v = os.getenv(k)
            if v is not None and str(v).strip() != "":
                return v
        return default

    def _load_config(self):
        """加载配置：先 .env，再配置文件，再用环境变量补齐运行时参数"""
        load_dotenv()

        self.config = {"file": {}, "runtime": {}}
        if self.config_file:
            self.config["file"] = parse_key_value_file(self.config_file)

        runtime = self.config["runtime"]
        runtime["threads"] = self._get_env("LPLAB_THREADS", default=str(os.cpu_count() or 1))
        runtime["log_level"] = self._get_env("LPLAB_LOG_LEVEL", default="WARNING")
        runtime["quad_tol"] = self._get_env("LPLAB_QUAD_TOL", default=str(DEFAULT_QUAD_TOL))

    def get_config(self) -> Dict[str, Any]:
        """获取配置"""
        return self.config

    def file_values(self) -> Dict[str, str]:
        return self.config["file"]

    def validate_config(self) -> Dict[str, bool]:
        """验证运行时参数是否可用"""
        runtime = self.config["runtime"]
        validation = {}
        try:
            validation["threads"] = int(runtime["threads"]) >= 1
        except ValueError:
            validation["threads"] = False
        try:
            tol = float(runtime["quad_tol"])
            validation["quad_tol"] = 0 < tol < 1
        except ValueError:
            validation["quad_tol"] = False
        return validation


def get_worker_count() -> int:
    """线程池上限：LPLAB_THREADS，缺省为机器并行度"""
    raw = ConfigLoader._get_env("LPLAB_THREADS")
    if raw is None:
        return max(1, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"LPLAB_THREADS 必须是正整数，得到 {raw!r}", key="LPLAB_THREADS") from None
    if value < 1:
        raise ConfigError(f"LPLAB_THREADS 必须是正整数，得到 {value}", key="LPLAB_THREADS")
    return value


def get_quad_tol() -> float:
    """默认求积细化容差：LPLAB_QUAD_TOL，缺省 1e-4"""
    raw = ConfigLoader._get_env("LPLAB_QUAD_TOL")
    if raw is None:
        return DEFAULT_QUAD_TOL
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"LPLAB_QUAD_TOL 必须是实数，得到 {raw!r}", key="LPLAB_QUAD_TOL") from None
    if not 0 < value < 1:
        raise ConfigError(f"LPLAB_QUAD_TOL 必须在 (0, 1) 内，得到 {value}", key="LPLAB_QUAD_TOL")
    return value
