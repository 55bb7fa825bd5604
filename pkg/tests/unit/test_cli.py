import pytest

from mfc.cli import build_parser, parse_bodies, resolve_config
from mfc.config import AppConfig
from mfc.core.errors import MalformedInputError


def resolve(*argv, defaults=None):
    args = build_parser().parse_args(list(argv))
    return resolve_config(args, defaults or AppConfig())


def test_parse_bodies():
    assert parse_bodies("2..4,6") == [2, 3, 4, 6]
    assert parse_bodies(" 5 , 3,5") == [3, 5]
    with pytest.raises(MalformedInputError):
        parse_bodies("two")
    with pytest.raises(MalformedInputError):
        parse_bodies(",")


def test_points_flag():
    assert resolve("expand", "--profile", "p.csv", "--lam", "0.5", "--points", "5").points == 5
    assert resolve("expand", "--profile", "p.csv", "--lam", "0.5").points == 12
    with pytest.raises(MalformedInputError, match="points"):
        resolve("expand", "--profile", "p.csv", "--lam", "0.5", "--points", "0")


def test_flags_override_stored_defaults():
    stored = AppConfig(tol=1e-6, resolution=4, bodies="2..3")
    cfg = resolve("verdict", "--kernel", "k.csv", "--marginal", "mu.json", "--grid", "10", defaults=stored)
    assert (cfg.tol, cfg.resolution, cfg.bodies) == (1e-6, 10, [2, 3])
    assert cfg.inputs == {"kernel": "k.csv", "marginal": "mu.json"}
    zero_seed = resolve("expand", "--profile", "p.csv", "--lam", "1", "--seed", "0", defaults=AppConfig(seed=9))
    assert zero_seed.seed == 0
