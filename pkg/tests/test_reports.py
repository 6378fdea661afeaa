"""Tests for report envelopes, schema validation and writers."""

import io
import json
import math

import numpy as np
import pytest

from volsplit import __version__
from volsplit.config import build_run_config
from volsplit.errors import ConfigError, VolsplitError
from volsplit.reports import (
    SCHEMA_VERSION,
    build_report,
    encode_value,
    exit_code_for,
    load_schema,
    render_csv,
    render_json,
    write_report,
)


def test_encode_value():
    encoded = encode_value(
        {
            "a": np.array([1.0, math.inf]),
            "b": (np.int64(3), np.bool_(True)),
            "c": -math.inf,
            "d": math.nan,
            "e": np.float64(0.5),
        }
    )
    assert encoded == {"a": [1.0, "inf"], "b": [3, True], "c": "-inf", "d": "nan", "e": 0.5}
    assert type(encoded["b"][1]) is bool


def test_schema_is_packaged():
    schema = load_schema()
    assert schema["properties"]["schema_version"]["const"] == SCHEMA_VERSION


def test_build_report_envelope():
    config = build_run_config("hardy", {"inputs": {"u": "1", "v": "1/x"}})
    report = build_report(config, "bounded", {"S": math.inf})
    assert report["tool"] == "volsplit"
    assert report["version"] == __version__
    assert report["command"] == "hardy"
    assert report["result"] == {"S": "inf"}
    assert report["config"]["inputs"]["v"] == "1/x"
    assert json.loads(render_json(report)) == report


def test_empty_verdict_fails_validation():
    with pytest.raises(VolsplitError, match="schema validation"):
        build_report(build_run_config("hardy"), "", {})


@pytest.mark.parametrize("verdict, code", [("bounded", 0), ("unbounded", 0), ("inconclusive", 2)])
def test_exit_codes(verdict, code):
    assert exit_code_for(verdict) == code


def test_render_csv_union_of_keys():
    text = render_csv([{"r": 1.0, "a": 2.0}, {"r": 2.0, "b": math.inf}])
    assert text.splitlines() == ["r,a,b", "1.0,2.0,", "2.0,,inf"]


class TestWriteReport:
    def test_stdout(self):
        config = build_run_config("lemma35")
        stream = io.StringIO()
        assert write_report(build_report(config, "computed", {}), config, stream=stream) is None
        assert json.loads(stream.getvalue())["verdict"] == "computed"

    def test_file(self, tmp_path):
        target = tmp_path / "nested" / "report.json"
        config = build_run_config("lemma35", {"output": {"path": str(target)}})
        path = write_report(build_report(config, "computed", {}), config)
        assert path == target
        assert json.loads(target.read_text())["command"] == "lemma35"

    def test_csv_needs_rows(self):
        config = build_run_config("lemma35", {"output": {"format": "csv"}})
        with pytest.raises(ConfigError, match="tabular"):
            write_report(build_report(config, "computed", {}), config)

    def test_csv_rows(self):
        config = build_run_config("hardy", {"output": {"format": "csv"}})
        stream = io.StringIO()
        write_report(build_report(config, "bounded", {}), config, [{"r": 1.0, "product": 1.0}], stream)
        assert stream.getvalue() == "r,product\n1.0,1.0\n"
