import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptchain import config
from ptchain.config import RunConfig
from ptchain.errors import ConfigError, OmegaOutsideBand


@pytest.mark.parametrize("text, value", [
    ("0", 0.0), ("1.5", 1.5), ("pi", math.pi), ("2pi", 2 * math.pi), ("2*pi", 2 * math.pi),
    ("pi/2", math.pi / 2), ("-pi", -math.pi), ("0.5pi", 0.5 * math.pi), (" 3 pi / 4 ", 0.75 * math.pi),
])
def test_parse_angle(text, value):
    assert config.parse_angle(text) == pytest.approx(value, abs=0)


@pytest.mark.parametrize("text", ["", "tau", "2pi pi", "pi/"])
def test_parse_angle_rejects(text):
    with pytest.raises(ConfigError):
        config.parse_angle(text)


def test_parse_lists_and_ranges():
    assert config.parse_float_list("0, 0.1,0.3") == (0.0, 0.1, 0.3)
    assert config.parse_float_list("0,pi,2pi", angle=True) == (0.0, math.pi, 2 * math.pi)
    assert config.parse_float_list("") == ()
    assert config.parse_omega_range("-1.5:0.5:2001") == (-1.5, 0.5, 2001)
    for bad in ("1:2", "a:b:c", "0:1:2.5"):
        with pytest.raises(ConfigError):
            config.parse_omega_range(bad)


def test_ini_sections():
    cfg = config.from_ini_text("""
[chain]
n = 3
delta = 0.5
[coupling]
phi = 0, 2pi
[sweep]
gamma = 0.3
omega_points = 11
""")
    assert cfg.n == 3 and cfg.delta == 0.5 and cfg.phis == (0.0, 2 * math.pi)
    assert cfg.gammas == (0.3,) and cfg.omega_points == 11
    assert cfg.t_c == RunConfig().t_c


@pytest.mark.parametrize("text", ["[bogus]\nx = 1\n", "[chain]\nwidth = 3\n", "[chain]\nn = three\n", "no header"])
def test_ini_rejects(text):
    with pytest.raises(ConfigError):
        config.from_ini_text(text)


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        config.load(tmp_path / "absent.ini")


finite = st.floats(-1.0, 1.0, allow_nan=False)
configs = st.builds(
    RunConfig,
    n=st.integers(2, 9),
    e0=finite,
    t_c=st.floats(0.01, 2.0),
    t0=st.floats(0.5, 3.0),
    v0=st.floats(0.0, 2.0),
    allocation=st.sampled_from(["symmetric", "left_shifted"]),
    phis=st.lists(st.floats(0.0, 7.0), min_size=1, max_size=4).map(tuple),
    gammas=st.lists(st.floats(0.0, 0.5), min_size=1, max_size=4).map(tuple),
    omega_points=st.integers(2, 5000),
    threads=st.integers(1, 8),
    out=st.one_of(st.none(), st.sampled_from(["out.csv", "run/report.txt"])),
    antiresonance_threshold=st.floats(1e-12, 1e-3),
    phase_window=st.one_of(st.none(), st.floats(1e-4, 0.1)),
)


@given(configs)
def test_round_trip(cfg):
    assert config.from_ini_text(config.to_ini_text(cfg)) == cfg


def test_validation():
    RunConfig().validate()
    for bad in (dict(phis=()), dict(gammas=()), dict(omega_points=1), dict(n=1), dict(threads=0),
                dict(omega_min=1.0, omega_max=0.0), dict(delta=0.5, n=4), dict(allocation="diagonal"),
                dict(t_c=0.0)):
        with pytest.raises(ConfigError):
            RunConfig(**bad).validate()
    with pytest.raises(OmegaOutsideBand):
        RunConfig(omega_min=-2.0).validate()
    with pytest.raises(OmegaOutsideBand):
        RunConfig(t0=0.5, omega_max=1.2).validate()


def test_override_ignores_none():
    cfg = RunConfig().override(n=4, t_c=None)
    assert cfg.n == 4 and cfg.t_c == 0.5


def test_template_and_grid():
    cfg = RunConfig(n=3, delta=0.5, phis=(math.pi,), omega_points=5)
    spec = cfg.template()
    assert spec.n_dots == 3 and spec.chain.onsite[1] == 0.5 and spec.coupling.flux == math.pi
    assert cfg.omega_grid() == pytest.approx([-1.99, -0.995, 0.0, 0.995, 1.99], abs=1e-15)
