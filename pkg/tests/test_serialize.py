"""Report bundles and plot data."""

import csv
import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isodbt.chain import ChainSpec
from isodbt.exact import Poly
from isodbt.numeric import GridSpec
from isodbt.serialize import (FORMAT_VERSION, ReportBundle, decode, dumps, encode, loads,
                              plot_points, write_plot_csv)

big = st.fractions().filter(lambda f: True)
json_leaf = st.one_of(st.none(), st.booleans(), st.integers(), st.text(max_size=5),
                      st.floats(allow_nan=False, allow_infinity=False), big)
json_tree = st.recursive(json_leaf, lambda ch: st.one_of(
    st.lists(ch, max_size=4), st.dictionaries(st.text(max_size=4), ch, max_size=4)), max_leaves=15)


@given(json_tree)
def test_encode_decode_round_trip(obj):
    assert loads(dumps(obj)) == obj


@given(st.fractions())
def test_rationals_are_string_pairs(v):
    e = encode(v)
    assert e == {"num": str(v.numerator), "den": str(v.denominator)}
    assert decode(e) == v


def test_lookalike_dicts_are_left_alone():
    for d in ({"num": "a", "den": "b"}, {"num": "1", "den": "0"}, {"num": "1", "den": "-2"}):
        assert decode(d) == d


def test_huge_rationals_survive():
    v = Fraction(3 ** 200, 7 ** 150)
    assert loads(dumps({"v": v}))["v"] == v


@given(json_tree, json_tree)
def test_bundle_round_trip(inputs, checks):
    b = ReportBundle(inputs={"x": inputs}, checks={"c": checks},
                     eigenstates=[{"numerator": [Fraction(1, 3), Fraction(-2)]}])
    text = b.to_json()
    again = ReportBundle.from_json(text)
    assert again == b
    assert again.to_json() == text


def test_bundle_is_self_describing_and_versioned():
    d = loads(ReportBundle(inputs={"chain": "1+"}).to_json())
    assert d["format_version"] == FORMAT_VERSION
    bad = ReportBundle(inputs={}).to_json().replace(FORMAT_VERSION, "0.0")
    with pytest.raises(ValueError):
        ReportBundle.from_json(bad)


def test_poly_and_numpy_encoding():
    assert encode(Poly([1, Fraction(1, 2)])) == [{"num": "1", "den": "1"}, {"num": "1", "den": "2"}]
    assert encode(np.array([1.5, 2.0])) == [1.5, 2.0]
    assert encode(np.float64(0.25)) == 0.25


def test_csv_endpoints_and_header():
    g = GridSpec(100, 0.01, 8.0)
    x = plot_points(g)
    assert x[0] == g.x_min and x[-1] == g.x_max
    assert np.all(np.diff(x) > 0)
    rows = list(csv.reader(io.StringIO(write_plot_csv(ChainSpec.build(["1+"], 1, 2), 3, g))))
    assert rows[0] == ["x", "V", "psi_0", "psi_1", "psi_2"]
    assert float(rows[1][0]) == g.x_min and float(rows[-1][0]) == g.x_max


def test_csv_ground_state_peak_is_positive():
    g = GridSpec(100, 0.01, 8.0)
    text = write_plot_csv(ChainSpec.build(["1+"], 1, 2), 2, g)
    data = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1)
    peak = np.argmax(np.abs(data[:, 2]))
    assert np.isfinite(data[peak, 2]) and data[peak, 2] > 0
    assert np.all(np.isfinite(data))


def test_log_spacing_near_origin():
    x = plot_points(GridSpec(100, 1e-3, 10.0))
    ratios = x[1:10] / x[:9]
    np.testing.assert_allclose(ratios, ratios[0])
