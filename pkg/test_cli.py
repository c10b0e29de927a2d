"""
测试命令行与 CSV 报告

测试场景：
1. 配置优先级：命令行 > 配置文件 > 环境变量 > 默认值
2. 各子命令的输出格式与退出码
3. 报告读回与拟合
"""

import logging
import os
import sys

import numpy as np
import pytest

# 添加项目路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src import __version__
from src.cli import EXIT_OK, EXIT_QUADRATURE, EXIT_VALIDATION, configure_logging, main, parse_config
from src.config_loader import ConfigLoader, get_quad_tol, get_worker_count, parse_key_value_file
from src.errors import ConfigError
from src.models.record import ExperimentRecord
from src.report_writer import HEADER_PREFIX, parse_header, read_report, render_records, write_text


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for key in list(os.environ):
        if key.startswith("LPLAB_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("LPLAB_LOG_LEVEL", "OFF")


def _read_lines(path):
    with open(path, "r", encoding="utf-8") as f:
        return f.read().split("\n")


def test_defaults_and_flags():
    config = parse_config(["enumerate-intervals", "--set", "e2", "--k-min", "2", "--k-max", "4"])
    assert config.subcommand == "enumerate-intervals"
    assert config.params == {"set": "e2", "k_min": 2, "k_max": 4, "l_min": 0, "sign": "positive"}
    assert config.output == "-"
    assert config.seed == 0


def test_precedence(tmp_path, monkeypatch):
    conf = tmp_path / "run.conf"
    conf.write_text("# 注释\nset=e1\nk-min=1\nk_max=5\nl-min=-1\n", encoding="utf-8")
    monkeypatch.setenv("LPLAB_K_MAX", "9")
    monkeypatch.setenv("LPLAB_SIGN", "both")
    config = parse_config(["enumerate-intervals", "--config", str(conf), "--k-min", "0"])
    assert config.params["set"] == "e1"
    assert config.params["k_min"] == 0       # 命令行
    assert config.params["k_max"] == 5       # 配置文件
    assert config.params["sign"] == "both"   # 环境变量
    assert config.params["l_min"] == -1


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(["enumerate-intervals", "--set", "e2", "--k-min", "2"])
    with pytest.raises(ConfigError) as info:
        parse_config(["enumerate-intervals", "--set", "e2", "--k-min", "x", "--k-max", "4"])
    assert info.value.key == "k_min"
    with pytest.raises(ConfigError):
        parse_config(["witness", "--n-list", "16,24"])
    with pytest.raises(ConfigError):
        parse_config(["a2", "--kind", "power", "--alpha", "1.5"])
    with pytest.raises(ConfigError):
        parse_config(["a2", "--kind", "averaged"])
    conf = tmp_path / "bad.conf"
    conf.write_text("set=e2\nunknown=1\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        parse_config(["enumerate-intervals", "--config", str(conf)])
    with pytest.raises(ConfigError):
        parse_config([])


def test_key_value_file(tmp_path):
    conf = tmp_path / "a.conf"
    conf.write_text("K-Max = 7\n\n# x\n", encoding="utf-8")
    assert parse_key_value_file(str(conf)) == {"k_max": "7"}
    conf.write_text("k-max\n", encoding="utf-8")
    with pytest.raises(ConfigError) as e:
        parse_key_value_file(str(conf))
    assert e.value.key == "k_max"
    with pytest.raises(ConfigError):
        parse_key_value_file(str(tmp_path / "missing.conf"))


def test_runtime_settings(monkeypatch):
    monkeypatch.setenv("LPLAB_THREADS", "3")
    monkeypatch.setenv("LPLAB_QUAD_TOL", "1e-6")
    assert get_worker_count() == 3
    assert get_quad_tol() == 1e-6
    assert ConfigLoader().validate_config() == {"threads": True, "quad_tol": True}
    monkeypatch.setenv("LPLAB_THREADS", "0")
    with pytest.raises(ConfigError):
        get_worker_count()
    monkeypatch.setenv("LPLAB_QUAD_TOL", "2")
    with pytest.raises(ConfigError):
        get_quad_tol()


def test_log_level_from_environment(monkeypatch):
    monkeypatch.setenv("LPLAB_LOG_LEVEL", "DEBUG")
    configure_logging()
    assert logging.getLogger().level == logging.DEBUG
    assert not logging.getLogger("src").isEnabledFor(logging.DEBUG - 1)
    monkeypatch.setenv("LPLAB_LOG_LEVEL", "OFF")
    configure_logging()
    assert not logging.getLogger("src").isEnabledFor(logging.CRITICAL)


def test_enumerate_intervals_output(tmp_path):
    out = tmp_path / "e2.csv"
    code = main(["enumerate-intervals", "--set", "e2", "--k-min", "2", "--k-max", "4",
                 "--output", str(out)])
    assert code == EXIT_OK
    lines = _read_lines(out)
    assert lines[0].startswith(HEADER_PREFIX)
    header = parse_header(lines[0])
    assert header["subcommand"] == "enumerate-intervals"
    assert header["version"] == __version__
    assert lines[1] == "k,l,sign,a,b"
    rows = [line for line in lines[2:] if line]
    assert len(rows) == 2 + 3 + 4
    assert rows[0] == "2,1,1,2,3"


def test_output_is_deterministic(tmp_path):
    argv = ["enumerate-intervals", "--set", "et3", "--k-min", "2", "--k-max", "6", "--sign", "both"]
    main(argv + ["--output", str(tmp_path / "a.csv")])
    main(argv + ["--output", str(tmp_path / "b.csv")])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_stdout_output(capsys):
    code = main(["enumerate-intervals", "--set", "e1", "--k-min", "0", "--k-max", "2"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith(HEADER_PREFIX)
    assert out.endswith("\n")


def test_a2_step_weight(tmp_path):
    out = tmp_path / "a2.csv"
    code = main(["a2", "--kind", "step", "--T", "4", "--n", "4096", "--output", str(out)])
    assert code == EXIT_OK
    _, columns, records = read_report(str(out))
    assert columns == ["characteristic", "a", "b", "family_size"]
    assert records[0].get("characteristic") == pytest.approx(9 / 8, rel=1e-10)


def test_square_function_single_mode(tmp_path):
    spectrum = tmp_path / "spec.csv"
    spectrum.write_text("freq,re,im\n3.0,1.0,0.0\n", encoding="utf-8")
    out = tmp_path / "sf.csv"
    code = main(["square-function", "--input", str(spectrum), "--T", "8", "--n", "1024", "--k-max", "4",
                 "--output", str(out)])
    assert code == EXIT_OK
    _, columns, records = read_report(str(out))
    assert columns == ["x", "value"]
    assert len(records) == 1024
    values = np.array([r.get("value") for r in records])
    np.testing.assert_allclose(values, 1.0 / 16.0, atol=1e-12)


def test_square_function_bad_input(tmp_path):
    spectrum = tmp_path / "spec.csv"
    spectrum.write_text("freq,re,im\n0.01,1.0,0.0\n", encoding="utf-8")
    code = main(["square-function", "--input", str(spectrum), "--output", str(tmp_path / "x.csv")])
    assert code == EXIT_VALIDATION
    assert not (tmp_path / "x.csv").exists()


def test_quadrature_failure_exit_code(tmp_path):
    out = tmp_path / "lb.csv"
    code = main(["lower-bound-scan", "--set", "e1", "--n-list", "16", "--tol", "1e-15",
                 "--output", str(out)])
    assert code == EXIT_QUADRATURE
    assert not out.exists()


def test_validation_exit_code():
    assert main(["witness", "--n-list", "16", "--p-list", "3"]) == EXIT_VALIDATION
    assert main(["no-such-command"]) == EXIT_VALIDATION


def test_fit_reads_report(tmp_path):
    records = [
        ExperimentRecord(parameters={"N": N}, measurements={"B": 0.5 * N ** 0.5}) for N in (16, 32, 64, 128)
    ]
    report = tmp_path / "scan.csv"
    write_text(render_records({"subcommand": "lower-bound-scan"}, ["N", "B"], records), str(report))
    out = tmp_path / "fit.csv"
    code = main(["fit", "--input", str(report), "--x", "N", "--y", "B", "--output", str(out)])
    assert code == EXIT_OK
    _, columns, rows = read_report(str(out))
    assert columns == ["slope", "intercept", "r2", "count"]
    assert rows[0].get("slope") == pytest.approx(0.5)
    assert rows[0].get("count") == 4


def test_fit_missing_column(tmp_path):
    records = [ExperimentRecord(parameters={"N": N}, measurements={"B": float(N)}) for N in (16, 32, 64)]
    report = tmp_path / "scan.csv"
    write_text(render_records({}, ["N", "B"], records), str(report))
    code = main(["fit", "--input", str(report), "--x", "N", "--y", "R"])
    assert code == EXIT_VALIDATION
