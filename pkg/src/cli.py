"""
命令行前端：配置解析、子命令分发、CSV 输出

退出码：0 成功；1 输入/配置错误（ValidationError）；2 数值质量不达标（QuadratureError）
"""
import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from dotenv import load_dotenv

from . import __version__
from .config_loader import ConfigLoader, normalize_key
from .errors import ConfigError, QuadratureError, ValidationError, WeightError
from .experiments import (
    LOWER_BOUND_COLUMNS, WeightedScanConfig, auxiliary_weighted_scan, fit_exponent, lower_bound_scan,
    weighted_scan, witness_scan,
)
from .lacunary import collection_for
from .measures import (
    a2_characteristic, make_constant_weight, make_periodic_power_weight, make_power_weight, make_step_weight,
)
from .models.grid import Spectrum, is_power_of_two
from .models.intervals import FrequencyInterval, LacunarySpec, SetKind
from .models.weight import WeightKind
from .report_writer import read_report, render_csv, render_records, write_text
from .spectral.core import inverse_transform
from .squarefn import square_function_grid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_QUADRATURE = 2

A2_KINDS = (WeightKind.CONSTANT, WeightKind.POWER, WeightKind.STEP)


def _parse_log_level(value: str) -> Optional[int]:
    """Parse log level from env; return None for 'OFF' (disable logging)."""
    if value is None:
        return logging.WARNING
    v = str(value).strip().upper()
    if v in {"OFF", "NONE", "DISABLE", "FALSE", "0"}:
        return None
    if v.isdigit():
        return int(v)
    return getattr(logging, v, logging.WARNING)


def configure_logging(value: Optional[str] = None):
    """按 LPLAB_LOG_LEVEL 配置根日志器；日志写 stderr，stdout 只留给 CSV"""
    if value is None:
        value = ConfigLoader().get_config()["runtime"]["log_level"]
    level = _parse_log_level(value)
    if level is None:
        logging.disable(logging.CRITICAL)
        return
    logging.disable(logging.NOTSET)
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


# ---------- 参数类型 ----------

def _to_int(text: str) -> int:
    return int(str(text).strip())


def _to_float(text: str) -> float:
    return float(str(text).strip())


def _to_bool(text: str) -> bool:
    v = str(text).strip().lower()
    if v in {"1", "true", "yes", "on"}:
        return True
    if v in {"0", "false", "no", "off"}:
        return False
    raise ValueError(text)


def _to_int_list(text: str) -> List[int]:
    return [_to_int(t) for t in str(text).split(",") if t.strip()]


def _to_float_list(text: str) -> List[float]:
    return [_to_float(t) for t in str(text).split(",") if t.strip()]


_TYPE_NAMES = {
    _to_int: "整数", _to_float: "实数", _to_bool: "布尔值", str: "字符串",
    _to_int_list: "逗号分隔的整数列表", _to_float_list: "逗号分隔的实数列表",
}


@dataclass(frozen=True)
class Option:
    key: str
    convert: Callable[[str], Any] = str
    default: Any = None
    required: bool = False
    check: Optional[Callable[[Any], Optional[str]]] = None
    help: str = ""

    @property
    def flag(self) -> str:
        return "--" + self.key.replace("_", "-")


def _powers_of_two(values: List[int]) -> Optional[str]:
    if not values:
        return "列表不能为空"
    bad = [v for v in values if not (is_power_of_two(v) and v >= 4)]
    return f"必须是 >= 4 的 2 的幂，得到 {bad}" if bad else None


def _alpha_range(value: float) -> Optional[str]:
    return None if -1 < value < 1 else f"α 必须在 (-1, 1) 内，得到 {value}"


def _alpha_list_range(values: List[float]) -> Optional[str]:
    if not values:
        return "列表不能为空"
    bad = [v for v in values if not -1 < v < 1]
    return f"α 必须在 (-1, 1) 内，得到 {bad}" if bad else None


def _p_list_range(values: List[float]) -> Optional[str]:
    if not values:
        return "列表不能为空"
    bad = [v for v in values if not 1 < v <= 2]
    return f"p 必须在 (1, 2] 内，得到 {bad}" if bad else None


def _positive(value) -> Optional[str]:
    return None if value > 0 else f"必须为正，得到 {value}"


def _grid_count(value: int) -> Optional[str]:
    return None if is_power_of_two(value) and value >= 2 else f"必须是 2 的幂，得到 {value}"


def _set_name(value: str) -> Optional[str]:
    try:
        SetKind.parse(value)
    except ValidationError as e:
        return str(e)
    return None


def _sign_name(value: str) -> Optional[str]:
    return None if value in {"positive", "negative", "both", "+", "-", "±"} else \
        f"可选 positive/negative/both，得到 {value!r}"


def _weight_kind(value: str) -> Optional[str]:
    try:
        kind = WeightKind.from_string(value)
    except WeightError as e:
        return str(e)
    return None if kind in A2_KINDS else f"可选 constant/power/step，得到 {value!r}"


_GRID = [
    Option("T", _to_float, 8.0, check=_positive, help="半宽 T，网格为 [-T, T)"),
    Option("n", _to_int, 4096, check=_grid_count, help="网格点数（2 的幂）"),
]
_TOL = Option("tol", _to_float, None, check=_positive, help="加密误差阈值（缺省 LPLAB_QUAD_TOL）")

SCHEMAS: Dict[str, List[Option]] = {
    "enumerate-intervals": [
        Option("set", str, required=True, check=_set_name, help="e1 / e2 / et<N>"),
        Option("k_min", _to_int, required=True),
        Option("k_max", _to_int, required=True),
        Option("l_min", _to_int, 0),
        Option("sign", str, "positive", check=_sign_name),
    ],
    "square-function": [
        Option("input", str, required=True, help="频谱 CSV（列 freq,re,im）"),
        Option("set", str, "e2", check=_set_name),
        Option("k_min", _to_int, 1),
        Option("k_max", _to_int, 6),
        Option("l_min", _to_int, 0),
        Option("sign", str, "both", check=_sign_name),
        *_GRID,
    ],
    "a2": [
        Option("kind", str, required=True, check=_weight_kind),
        Option("alpha", _to_float, 0.5, check=_alpha_range),
        Option("step_value", _to_float, 2.0, check=_positive),
        Option("step_a", _to_float, 0.0),
        Option("step_b", _to_float, 1.0),
        Option("periodic", _to_bool, False),
        *_GRID,
    ],
    "witness": [
        Option("n_list", _to_int_list, required=True, check=_powers_of_two),
        Option("p_list", _to_float_list, [1.1, 1.25, 1.5], check=_p_list_range),
        Option("T", _to_float, 8.0, check=_positive),
        Option("margin", _to_int, 2, check=_positive),
        _TOL,
    ],
    "lower-bound-scan": [
        Option("set", str, required=True, check=_set_name),
        Option("n_list", _to_int_list, required=True, check=_powers_of_two),
        Option("T", _to_float, 8.0, check=_positive),
        Option("margin", _to_int, 2, check=_positive),
        Option("resolution", _to_int, 256, check=_positive),
        _TOL,
    ],
    "weighted-scan": [
        Option("alpha_list", _to_float_list, [0.0, 0.3, 0.6, 0.8], check=_alpha_list_range),
        Option("set", str, "e2", check=_set_name),
        Option("k_min", _to_int, 1),
        Option("k_max", _to_int, 6),
        Option("l_min", _to_int, -2),
        Option("band", _to_float, 56.0, check=_positive),
        *_GRID,
    ],
    "aux-scan": [
        Option("alpha_list", _to_float_list, [0.0, 0.3, 0.6, 0.8], check=_alpha_list_range),
        Option("k_min", _to_int, 1),
        Option("k_max", _to_int, 6),
        Option("l_min", _to_int, -2),
        Option("band", _to_float, 56.0, check=_positive),
        *_GRID,
    ],
    "fit": [
        Option("input", str, required=True, help="扫描输出的 CSV"),
        Option("x", str, required=True, help="自变量列名"),
        Option("y", str, required=True, help="因变量列名"),
    ],
}


@dataclass
class RunConfig:
    """一次运行的完整配置"""
    subcommand: str
    params: Dict[str, Any] = field(default_factory=dict)
    output: str = "-"
    seed: int = 0

    def canonical(self) -> Dict[str, Any]:
        """写入 CSV 头行的配置（不含输出路径）"""
        items = dict(self.params)
        items["subcommand"] = self.subcommand
        items["seed"] = self.seed
        items["version"] = __version__
        return items


class _Parser(argparse.ArgumentParser):
    """参数错误抛 ConfigError，由 main 统一映射为退出码 1"""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lplab", description="缺项集 Littlewood-Paley 平方函数数值实验")
    parser.add_argument("--version", action="version", version=f"lplab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    for name, options in SCHEMAS.items():
        p = sub.add_parser(name, help=f"{name} 子命令")
        p.add_argument("--config", dest="config_file", default=None, help="key=value 配置文件")
        p.add_argument("--output", default=None, help="输出路径，缺省 '-'（stdout）")
        p.add_argument("--seed", default=None, help="随机种子（无符号整数）")
        for opt in options:
            p.add_argument(opt.flag, dest=opt.key, default=None, help=opt.help or None)
    return parser


def _convert(opt: Option, raw: Any) -> Any:
    if not isinstance(raw, str):
        return raw
    try:
        return opt.convert(raw)
    except ValueError:
        raise ConfigError(f"参数 {opt.key} 需要{_TYPE_NAMES.get(opt.convert, '合法值')}，得到 {raw!r}",
                          key=opt.key) from None


def parse_config(argv: Optional[Sequence[str]] = None, config_file: Optional[str] = None) -> RunConfig:
    """
    解析命令行与配置文件

    Args:
        argv: 命令行参数（不含程序名），缺省取 sys.argv[1:]
        config_file: 额外的配置文件（命令行 --config 优先）

    Returns:
        RunConfig：优先级为 命令行 > 配置文件 > 环境变量 LPLAB_<KEY> > 默认值
    """
    args = build_parser().parse_args(list(sys.argv[1:] if argv is None else argv))
    if not args.subcommand:
        raise ConfigError("缺少子命令（可选: " + ", ".join(SCHEMAS) + "）", key="subcommand")
    options = SCHEMAS[args.subcommand]
    known = {opt.key for opt in options}

    loader = ConfigLoader(args.config_file or config_file)
    file_values = {}
    for key, value in loader.file_values().items():
        match = next((k for k in known | {"output", "seed"} if normalize_key(k) == key), None)
        if match is None:
            raise ConfigError(f"配置文件中有未知键 {key!r}（子命令 {args.subcommand}）", key=key)
        file_values[match] = value

    params: Dict[str, Any] = {}
    for opt in options:
        raw = getattr(args, opt.key)
        if raw is None:
            raw = file_values.get(opt.key)
        if raw is None:
            raw = loader._get_env(f"LPLAB_{opt.key.upper()}")
        if raw is None:
            if opt.required:
                raise ConfigError(f"缺少必需参数 {opt.flag}", key=opt.key)
            params[opt.key] = opt.default
            continue
        value = _convert(opt, raw)
        problem = opt.check(value) if opt.check else None
        if problem:
            raise ConfigError(f"参数 {opt.key}: {problem}", key=opt.key)
        params[opt.key] = value

    output = args.output or file_values.get("output") or "-"
    seed_raw = args.seed if args.seed is not None else file_values.get("seed", loader._get_env("LPLAB_SEED", default="0"))
    try:
        seed = int(seed_raw)
    except ValueError:
        raise ConfigError(f"seed 需要无符号整数，得到 {seed_raw!r}", key="seed") from None
    if seed < 0:
        raise ConfigError(f"seed 需要无符号整数，得到 {seed}", key="seed")
    return RunConfig(subcommand=args.subcommand, params=params, output=output, seed=seed)


# ---------- 子命令 ----------

def _set_spec(params: Dict[str, Any]) -> LacunarySpec:
    return LacunarySpec.from_name(params["set"], params["k_min"], params["k_max"], params["l_min"], params["sign"])


def _cmd_enumerate_intervals(config: RunConfig) -> str:
    collection = collection_for(_set_spec(config.params))
    rows = []
    for I in collection:
        k, l, sign = I.label if I.label is not None else (None, None, None)
        rows.append([k, l, sign, I.a, I.b])
    return render_csv(config.canonical(), ["k", "l", "sign", "a", "b"], rows)


def _load_spectrum(path: str, half_width: float, count: int) -> Spectrum:
    if not os.path.exists(path):
        raise ValidationError(f"频谱文件不存在: {path}")
    coefficients = np.zeros(count, dtype=np.complex128)
    grid = Spectrum(coefficients, half_width)
    with open(path, "r", encoding="utf-8", newline="") as f:
        rows = [row for row in csv.reader(line for line in f if not line.startswith("#")) if row]
    if not rows or [c.strip() for c in rows[0]] != ["freq", "re", "im"]:
        raise ValidationError(f"{path} 的列名必须是 freq,re,im")
    for row in rows[1:]:
        try:
            freq, re, im = (float(v) for v in row)
        except ValueError:
            raise ValidationError(f"{path} 中有无法解析的行: {row}") from None
        coefficients[grid.index_of(freq)] += complex(re, im)
    return Spectrum(coefficients, half_width)


def _cmd_square_function(config: RunConfig) -> str:
    p = config.params
    s = _load_spectrum(p["input"], p["T"], p["n"])
    f = inverse_transform(s)
    S = square_function_grid(f, collection_for(_set_spec(p)))
    rows = [[float(x), float(v)] for x, v in zip(f.positions, S.samples.real)]
    return render_csv(config.canonical(), ["x", "value"], rows)


def _cmd_a2(config: RunConfig) -> str:
    p = config.params
    kind = WeightKind.from_string(p["kind"])
    if kind is WeightKind.POWER:
        w = make_periodic_power_weight(p["alpha"], p["n"]) if p["periodic"] else \
            make_power_weight(p["alpha"], p["T"], p["n"])
    elif kind is WeightKind.STEP:
        w = make_step_weight(p["step_value"], FrequencyInterval(p["step_a"], p["step_b"]), p["T"], p["n"])
    else:
        w = make_constant_weight(p["T"], p["n"])
    row = a2_characteristic(w).to_dict()
    return render_csv(config.canonical(), list(row), [list(row.values())])


def _cmd_witness(config: RunConfig) -> str:
    p = config.params
    records = witness_scan(p["n_list"], p["p_list"], half_width=p["T"], margin=p["margin"], tol=p["tol"])
    return render_records(config.canonical(), ["N", "p", "norm_p", "ratio", "quad_err"], records)


def _cmd_lower_bound_scan(config: RunConfig) -> str:
    p = config.params
    kind, order = SetKind.parse(p["set"])
    records = lower_bound_scan(kind, p["n_list"], order=order, half_width=p["T"], margin=p["margin"],
                               tol=p["tol"], resolution=p["resolution"])
    return render_records(config.canonical(), list(LOWER_BOUND_COLUMNS), records)


def _weighted_config(config: RunConfig) -> WeightedScanConfig:
    p = config.params
    return WeightedScanConfig(half_width=p["T"], count=p["n"], k_min=p["k_min"], k_max=p["k_max"],
                              l_min=p["l_min"], band=p["band"], seed=config.seed)


def _cmd_weighted_scan(config: RunConfig) -> str:
    kind, order = SetKind.parse(config.params["set"])
    records = weighted_scan(config.params["alpha_list"], kind=kind, order=order, config=_weighted_config(config))
    return render_records(config.canonical(), ["alpha", "a2", "rho", "argmax", "quad_err"], records)


def _cmd_aux_scan(config: RunConfig) -> str:
    records = auxiliary_weighted_scan(config.params["alpha_list"], config=_weighted_config(config))
    return render_records(config.canonical(), ["alpha", "a2", "m_ratio", "h_ratio"], records)


def _cmd_fit(config: RunConfig) -> str:
    p = config.params
    _, _, records = read_report(p["input"])
    row = fit_exponent(records, p["x"], p["y"]).to_dict()
    return render_csv(config.canonical(), list(row), [list(row.values())])


COMMANDS: Dict[str, Callable[[RunConfig], str]] = {
    "enumerate-intervals": _cmd_enumerate_intervals,
    "square-function": _cmd_square_function,
    "a2": _cmd_a2,
    "witness": _cmd_witness,
    "lower-bound-scan": _cmd_lower_bound_scan,
    "weighted-scan": _cmd_weighted_scan,
    "aux-scan": _cmd_aux_scan,
    "fit": _cmd_fit,
}


def run(config: RunConfig) -> int:
    """执行子命令并写出 CSV，返回退出码"""
    command = COMMANDS.get(config.subcommand)
    if command is None:
        print(f"错误: 未知子命令 {config.subcommand!r}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        text = command(config)
        write_text(text, config.output)
    except QuadratureError as e:
        logger.error(f"[cli] 数值质量不达标: {e}")
        print(f"数值质量不达标: {e}", file=sys.stderr)
        return EXIT_QUADRATURE
    except ValidationError as e:
        logger.error(f"[cli] 输入错误: {e}")
        print(f"输入错误: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    # 先加载 .env，日志级别可以写在 .env 里
    load_dotenv()
    configure_logging()
    try:
        config = parse_config(argv)
    except ValidationError as e:
        print(f"配置错误: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    logger.info(f"[cli] {config.subcommand} {config.params}")
    return run(config)
