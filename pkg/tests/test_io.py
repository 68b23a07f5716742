import json

import numpy as np
import pytest

from thmm import InvalidMomentSequence
from thmm.io import (
    decode_matrix,
    encode_matrix,
    moment_file_dict,
    parse_complex,
    read_moment_file,
    render_json,
)

from conftest import lebesgue, rel


@pytest.mark.parametrize("text,expected", [
    ("1.5", 1.5 + 0j),
    ("-2", -2 + 0j),
    ("3+4i", 3 + 4j),
    ("3-4i", 3 - 4j),
    ("-1.25e-2+0.5i", -0.0125 + 0.5j),
    ("0+1e3I", 1000j),
])
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["", "i", "2i", "1+i", "1+2j", "abc", "1 + 2"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)


def test_matrix_round_trip():
    m = np.array([[1.0 + 2.0j, -0.5], [0.25j, 3.0]])
    assert rel(decode_matrix(encode_matrix(m)), m) == 0.0


def test_decode_matrix_validation():
    with pytest.raises(InvalidMomentSequence):
        decode_matrix([[1.0, 2.0]])
    with pytest.raises(InvalidMomentSequence):
        decode_matrix([[[1.0, 0.0], [0.0, 0.0]]], q=2)


def test_moment_file_round_trip(tmp_path):
    seq = lebesgue(3)
    path = tmp_path / "moments.json"
    path.write_text(render_json(moment_file_dict(seq)))
    back = read_moment_file(path)
    assert back.q == 1 and back.m == 3 and back.a == 0.0 and back.b == 1.0
    for x, y in zip(back.s, seq.s):
        assert rel(x, y) == 0.0


def test_render_json_deterministic_and_parseable():
    obj = {
        "name": "x",
        "value": 1.0 / 3.0,
        "ints": [1, 2, 3],
        "matrix": encode_matrix(np.array([[0.1 + 0.2j]])),
        "flag": True,
        "none": None,
    }
    text1 = render_json(obj)
    text2 = render_json(obj)
    assert text1 == text2
    parsed = json.loads(text1)
    assert parsed["value"] == pytest.approx(1.0 / 3.0, abs=0)
    assert "0.33333333333333331" in text1  # 17 significant digits


def test_render_rejects_nonfinite():
    with pytest.raises(ValueError):
        render_json({"x": float("inf")})
