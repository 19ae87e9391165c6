import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afield.config import (SCHEMA, ScenarioConfig, config_hash, load_config, parse_config, serialize)
from afield.errors import ConfigError

MINIMAL = "scenario = cauchy\n"


def test_minimal_config_gets_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.kind == "cauchy"
    assert cfg.medium.c == 1.0
    assert cfg["initial.kind"] == "none"
    assert cfg.budget.n_theta == 32
    assert cfg.eval_points().shape == (0, 3)


def test_negative_permittivity_rejected():
    with pytest.raises(ConfigError, match="medium.epsilon must be > 0") as err:
        parse_config("scenario = cauchy\nmedium.epsilon = -1\n")
    assert err.value.line == 2 and err.value.key == "medium.epsilon"


@pytest.mark.parametrize("text, key, line, fragment", [
    ("scenario = cauchy\nmedium.foo = 1\n", "medium.foo", 2, "unknown key"),
    ("scenario = cauchy\nquadrature.n_r = 3.5\n", "quadrature.n_r", 2, "expected int"),
    ("medium.mu = 2\n", "scenario", None, "missing required key"),
    ("scenario = cauchy\nscenario = mono\n", "scenario", 2, "duplicate"),
    ("scenario = cauchy\njust words\n", None, 2, "key = value"),
    ("scenario = teleport\n", "scenario", 1, "scenario must be one of"),
    ("scenario = cauchy\nsource.p = 1, 2\n", "source.p", 2, "3 comma-separated"),
    ("scenario = cauchy\neval.points = 1j, 0, 0\n", "eval.points", 2, "real"),
    ("scenario = cauchy\neval.grid = 0:1:0, 0:1:1, 0:1:1\n", "eval.grid", 2, ">= 1"),
    ("scenario = oracle\noracle.n = 48\n", "oracle.n", 2, "power of two"),
    ("scenario = cauchy\nquadrature.n_theta = 0\n", "quadrature.n_theta", 2, ">= 1"),
])
def test_config_errors_name_line_and_key(text, key, line, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert fragment in str(err.value)
    assert err.value.key == key and err.value.line == line
    if key:
        assert key in str(err.value)


def test_missing_grid_file(tmp_path):
    text = "scenario = cauchy\ninitial.kind = custom-grid-file\ninitial.file = nowhere.npz\n"
    with pytest.raises(ConfigError, match="file not found"):
        parse_config(text, base_dir=tmp_path)
    (tmp_path / "nowhere.npz").write_bytes(b"")
    assert parse_config(text, base_dir=tmp_path)["initial.file"] == "nowhere.npz"
    assert parse_config(text, check_files=False)


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.cfg")
    bad = tmp_path / "bad.cfg"
    bad.write_bytes(b"\xff\xfe scenario")
    with pytest.raises(ConfigError, match="UTF-8"):
        load_config(bad)


def test_eval_points_grid_then_list():
    cfg = parse_config("scenario = cauchy\neval.grid = -1:1:3, 0:0:1, 2:4:2\neval.points = 9, 9, 9  # trailing\n")
    pts = cfg.eval_points()
    assert pts.shape == (7, 3)
    np.testing.assert_array_equal(pts[-1], [9, 9, 9])
    np.testing.assert_array_equal(pts[0], [-1, 0, 2])


def test_hash_is_stable_and_sensitive():
    a = parse_config(MINIMAL)
    b = parse_config("# comment\n\nscenario   =   cauchy   \n")
    assert a == b and config_hash(a) == config_hash(b)
    c = a.with_values(medium__mu=2.0)
    assert config_hash(c) != config_hash(a)
    assert isinstance(hash(a), int)


finite = st.floats(-1e6, 1e6, allow_nan=False).filter(lambda v: v != 0 or True)
pos = st.floats(1e-6, 1e6)
cplx = st.builds(complex, finite, finite)
vec = st.tuples(cplx, cplx, cplx)
pts = st.lists(st.tuples(finite, finite, finite), min_size=1, max_size=4).map(tuple)
grid = st.tuples(*[st.tuples(finite, finite, st.integers(1, 5))] * 3)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(["cauchy", "mono", "stationary", "shock-check", "oracle", "compare"]), pos, pos, vec,
       st.one_of(st.none(), pts), st.one_of(st.none(), grid), st.integers(1, 64), st.booleans(),
       st.sampled_from(["none", "gaussian-ball", "rotating-ball"]))
def test_serialize_round_trip(kind, eps, mu, p, points, grid_spec, n_r, project, source):
    cfg = parse_config(MINIMAL).with_values(
        scenario=kind, medium__epsilon=eps, medium__mu=mu, source__p=p, eval__points=points,
        eval__grid=grid_spec, quadrature__n_r=n_r, source__project=project, source__kind=source)
    again = parse_config(serialize(cfg))
    assert again == cfg
    assert config_hash(again) == config_hash(cfg)
    for key in SCHEMA:
        assert again.values[key] == cfg.values[key] or (again.values[key] is None and cfg.values[key] is None)


def test_scenario_config_resolve(tmp_path):
    cfg = ScenarioConfig(parse_config(MINIMAL).values, str(tmp_path))
    assert cfg.resolve("a.npz") == tmp_path / "a.npz"
    assert cfg.resolve("/abs/a.npz").is_absolute()
