import json
from fractions import Fraction

import pytest

from grouplab.cyclotomic import Cyclotomic
from grouplab.formats import (
    ConfigError,
    dumps,
    group_from_spec,
    group_info,
    load_json,
    matrix_from_spec,
    matrix_to_spec,
    parse_rational,
    rational_str,
    resolve_group_arg,
    space_from_spec,
    trace_report,
)
from grouplab.groups import CapExceeded
from grouplab.ring import GroupRingElement, GroupRingMatrix


def test_rationals_are_normalized():
    assert rational_str(Fraction(2, 4)) == "1/2"
    assert rational_str(Fraction(6, 3)) == "2"
    assert rational_str(Fraction(-3, 6)) == "-1/2"
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(0.25) == Fraction(1, 4)
    with pytest.raises(ConfigError):
        parse_rational("x")
    with pytest.raises(ConfigError):
        parse_rational(True)


def test_canonical_json_is_sorted_and_stable():
    obj = {"b": Fraction(2, 4), "a": [Cyclotomic.rational(3), {3, 1}], "c": (1, 2)}
    text = dumps(obj)
    assert text == dumps(json.loads(text))
    assert json.loads(text) == {"a": ["3", [1, 3]], "b": "1/2", "c": [1, 2]}
    assert list(json.loads(text)) == ["a", "b", "c"]
    assert json.loads(dumps(Cyclotomic.zeta(3)))["level"] == 3


def test_group_specs(tmp_path):
    assert group_from_spec("S3", 100).order == 6
    G = group_from_spec({"name": "Z3", "degree": 3, "generators": [[1, 2, 0]]}, 100)
    assert G.order == 3 and G.name == "Z3"
    T = group_from_spec({"table": [[0, 1], [1, 0]]}, 100)
    assert T.order == 2
    with pytest.raises(ConfigError, match=r"\[1\]\[0\]"):
        group_from_spec({"table": [[0, 1], [7, 0]]}, 100)
    with pytest.raises(ConfigError):
        group_from_spec({"degree": 3}, 100)
    with pytest.raises(CapExceeded):
        group_from_spec({"degree": 4, "generators": [[1, 2, 3, 0], [1, 0, 2, 3]]}, 10)
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"degree": 2, "generators": [[1, 0]]}))
    assert resolve_group_arg(str(path), 100).order == 2
    with pytest.raises(ConfigError):
        resolve_group_arg("nope", 100)


def test_json_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "a": 1,\n  "b": \n}')
    with pytest.raises(ConfigError, match="line 4"):
        load_json(path)
    with pytest.raises(ConfigError):
        load_json(tmp_path / "missing.json")


def test_group_info_summary(groups):
    info = group_info(groups["S3"], 48)
    assert info["order"] == 6
    assert info["class_sizes"] == [1, 3, 2]
    assert info["abelian_subgroups"] == 5
    assert info["lambda_primes"] == [2, 3]


def test_matrix_round_trip_and_trace_report(groups):
    G = groups["S3"]
    e = GroupRingElement.averaging(G)
    M = GroupRingMatrix(G, [[e, GroupRingElement.zero(G)], [GroupRingElement.zero(G), GroupRingElement.one(G)]])
    spec = matrix_to_spec(M)
    assert matrix_from_spec(G, {"entries": spec}) == M
    rep = json.loads(dumps(trace_report(M)))
    assert rep["kaplansky"] == "7/6"
    assert rep["augmentation"] == "2"
    assert rep["hs"] == {"0": "7/6", "1": "1/2", "2": "1/3"}
    assert rep["idempotent"] is True


@pytest.mark.parametrize(
    "spec",
    [[], [[[[0, 1, 0]]]], [[[[9, 1, 1]]]], [[[[0, 1]]]], [[[[0, 1, 1]], []]]],
)
def test_bad_matrices(groups, spec):
    with pytest.raises(ConfigError):
        matrix_from_spec(groups["S3"], spec)


def test_space_specs():
    X = space_from_spec({"n": 2, "d": [[0, "1/2"], ["1/2", 0]], "exact": True}, 1e-9)
    assert X.exact and X.d[0][1] == Fraction(1, 2)
    Y = space_from_spec({"d": [[0, 0.5], [0.5, 0]], "exact": False}, 1e-9)
    assert not Y.exact
    Z = space_from_spec({"kind": "cayley_ball", "group": "S3", "generators": [1, 2], "radius": 3}, 1e-9)
    assert Z.n == 6
    W = space_from_spec({"kind": "cayley_ball", "group": {"a1": "C2"}, "generators": [["t:0:+1"]], "radius": 2}, 1e-9)
    assert W.n == 5
    with pytest.raises(ConfigError):
        space_from_spec({"n": 3, "d": [[0, 1], [1, 0]]}, 1e-9)
    with pytest.raises(ConfigError):
        space_from_spec({"d": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}, 1e-9)
    with pytest.raises(ConfigError):
        space_from_spec({"kind": "grid"}, 1e-9)
