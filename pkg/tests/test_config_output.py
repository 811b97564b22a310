import math

import numpy as np
import pytest

from chargecluster.config import ExperimentConfig, coerce, parse_config, parse_lines
from chargecluster.errors import ConfigError, MalformedValue, UnknownKey
from chargecluster.output import emit_csv, emit_svg, read_csv


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.cfg"
    path.write_text("")
    assert parse_config(path) == ExperimentConfig()
    assert parse_config() == ExperimentConfig()


def test_file_values_and_comments(tmp_path):
    path = tmp_path / "a.cfg"
    path.write_text("# comment\nn_qubits = 3\n\nt_end=4pi  # trailing\nemit_svg=yes\n")
    cfg = parse_config(path)
    assert cfg.n_qubits == 3
    assert cfg.t_end == pytest.approx(4 * math.pi)
    assert cfg.emit_svg is True


def test_malformed_value_reports_line(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("n_qubits=4\ndt=abc\n")
    with pytest.raises(MalformedValue) as info:
        parse_config(path)
    assert info.value.line == 2
    assert "line 2" in str(info.value)


def test_unknown_key():
    with pytest.raises(UnknownKey) as info:
        parse_lines("\nfoo=1")
    assert info.value.line == 2
    with pytest.raises(UnknownKey):
        coerce("bar", "1")


def test_missing_equals_sign():
    with pytest.raises(MalformedValue):
        parse_lines("n_qubits 4")


def test_overrides_beat_file(tmp_path):
    path = tmp_path / "a.cfg"
    path.write_text("n_qubits=3\nkappa=2.0\n")
    cfg = parse_config(path, {"n_qubits": 5, "kappa": None})
    assert cfg.n_qubits == 5 and cfg.kappa == 2.0


@pytest.mark.parametrize("text", ["dt=0", "n_qubits=1", "n_qubits=11", "kappa=-1", "scenario=bogus", "t_end=0"])
def test_validation_rejects(text):
    with pytest.raises(ConfigError):
        ExperimentConfig(**parse_lines(text)).validate()


def test_dumps_round_trip():
    cfg = ExperimentConfig(n_qubits=3, kappa=5.544504600293307, emit_svg=True)
    assert ExperimentConfig(**parse_lines(cfg.dumps())) == cfg


def test_csv_layout(tmp_path):
    path = emit_csv(tmp_path / "s.csv", [0.0, 0.5, 1.0], [1.0, 0.25, 1 / 3])
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert len(lines) == 4 and lines[0] == "t,value"
    assert lines[3] == f"1.0,{1 / 3!r}"
    t, v = read_csv(path)
    assert np.array_equal(v, [1.0, 0.25, 1 / 3])


def test_csv_byte_identical(tmp_path):
    t = np.linspace(0, 1, 50)
    a = emit_csv(tmp_path / "a.csv", t, np.sin(t)).read_bytes()
    b = emit_csv(tmp_path / "b.csv", t, np.sin(t)).read_bytes()
    assert a == b


def test_csv_rejects_mismatch(tmp_path):
    with pytest.raises(ValueError):
        emit_csv(tmp_path / "x.csv", [0.0, 1.0], [1.0])


@pytest.mark.parametrize("count", [1, 2])
def test_svg_polylines_and_legend(tmp_path, count):
    t = np.linspace(0, 4 * math.pi, 40)
    series = [(t, np.cos(t / (k + 1)) ** 2) for k in range(count)]
    labels = [f"s{k}" for k in range(count)]
    text = emit_svg(tmp_path / "p.svg", series, labels, title="demo").read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert text.count("<polyline") == count
    legend = text.split('class="legend"', 1)[1]
    assert all(f">{lab}<" in legend for lab in labels)
    assert ">3π<" in text


def test_svg_empty_series_writes_nothing(tmp_path):
    target = tmp_path / "none.svg"
    with pytest.raises(ValueError):
        emit_svg(target, [], [])
    assert not target.exists()
