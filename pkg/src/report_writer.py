"""
CSV 报告读写

格式：首行 `# config: k1=v1;k2=v2;...`（键排序，含 version），第二行列名，其后每条记录一行；
浮点 17 位有效数字，'\n' 换行。写文件时先写临时文件再原子替换。
"""
import csv
import io
import logging
import os
import sys
import tempfile
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from . import __version__
from .errors import ValidationError
from .models.record import ExperimentRecord, format_value

logger = logging.getLogger(__name__)

HEADER_PREFIX = "# config: "


def canonical_config(config: Mapping[str, Any]) -> str:
    """配置的规范文本：键排序，值按 CSV 单元格格式化，列表用逗号连接"""
    items = dict(config)
    items.setdefault("version", __version__)
    parts = []
    for key in sorted(items):
        value = items[key]
        if isinstance(value, (list, tuple)):
            text = ",".join(format_value(v) for v in value)
        else:
            text = format_value(value)
        parts.append(f"{key}={text}")
    return ";".join(parts)


def render_csv(config: Mapping[str, Any], columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    buf.write(HEADER_PREFIX + canonical_config(config) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def render_records(config: Mapping[str, Any], columns: Sequence[str],
                   records: Sequence[ExperimentRecord]) -> str:
    rows = []
    for record in records:
        try:
            rows.append([record.get(c) for c in columns])
        except KeyError as e:
            raise ValidationError(f"记录缺少列 {e.args[0]!r}") from None
    return render_csv(config, columns, rows)


def write_text(text: str, output: str = "-"):
    """写到 stdout（'-'）或原子地写到文件"""
    if output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(output))
    os.makedirs(directory, exist_ok=True)
    with tempfile.NamedTemporaryFile("w", dir=directory, prefix=".lplab-", suffix=".tmp",
                                     delete=False, encoding="utf-8", newline="") as tmp:
        tmp.write(text)
        tmp_path = tmp.name
    try:
        os.replace(tmp_path, output)
    except OSError:
        os.unlink(tmp_path)
        raise
    logger.info(f"[report] 已写入 {output}")


def parse_header(line: str) -> Dict[str, str]:
    if not line.startswith(HEADER_PREFIX):
        raise ValidationError(f"缺少配置头行: {line[:40]!r}")
    body = line[len(HEADER_PREFIX):].rstrip("\n")
    config = {}
    for part in body.split(";") if body else []:
        key, _, value = part.partition("=")
        config[key] = value
    return config


def read_report(path: str, parameter_keys: Sequence[str] = ("N", "k", "l", "set", "alpha", "n", "T")
                ) -> Tuple[Dict[str, str], List[str], List[ExperimentRecord]]:
    """读取 render_records 写出的 CSV，返回 (配置, 列名, 记录)"""
    if not os.path.exists(path):
        raise ValidationError(f"文件不存在: {path}")
    with open(path, "r", encoding="utf-8", newline="") as f:
        header = f.readline()
        config = parse_header(header)
        reader = csv.reader(f)
        try:
            columns = next(reader)
        except StopIteration:
            raise ValidationError(f"{path} 缺少列名行") from None
        records = [ExperimentRecord.from_row(columns, row, parameter_keys=parameter_keys) for row in reader if row]
    return config, columns, records
