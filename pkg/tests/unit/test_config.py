import json

import pytest

from mfc.config import AppConfig, RunConfig, config_path
from mfc.i18n.i18n import i18n


@pytest.fixture
def locale():
    saved = i18n.locale
    yield i18n
    i18n.set_locale(saved)


def test_config_path_uses_environment(isolated_config):
    assert config_path() == isolated_config
    assert str(config_path("other.json")) == "other.json"


def test_defaults_when_missing():
    cfg = AppConfig.load()
    assert cfg == AppConfig()
    assert cfg.tol == 1e-9 and cfg.resolution == 8


def test_save_and_load_round_trip(isolated_config):
    AppConfig(lang="zh-TW", resolution=12, bodies="2..6").save()
    data = json.loads(isolated_config.read_text(encoding="utf-8"))
    assert data["resolution"] == 12
    loaded = AppConfig.load()
    assert (loaded.lang, loaded.resolution, loaded.bodies) == ("zh-TW", 12, "2..6")


def test_partial_and_unreadable_config(isolated_config, caplog):
    isolated_config.write_text('{"seed": "7"}', encoding="utf-8")
    assert AppConfig.load().seed == 7

    isolated_config.write_text("not json", encoding="utf-8")
    with caplog.at_level("WARNING", logger="mfc.config"):
        assert AppConfig.load() == AppConfig()
    assert "ignoring unreadable config" in caplog.text

    isolated_config.write_text('{"resolution": "fine"}', encoding="utf-8")
    assert AppConfig.load() == AppConfig()


def test_translation_and_fallback(locale):
    locale.set_locale("en-US")
    assert locale.t("log_start", command="verdict") == "Running verdict"
    locale.set_locale("zh-TW")
    assert locale.t("log_fail", command="nbody", err="x") == "nbody 失敗：x"
    locale.set_locale("fr-FR")
    assert locale.t("log_start", command="expand") == "Running expand"
    assert locale.t("no_such_key") == "no_such_key"
    assert {"en-US", "zh-TW"} <= set(locale.get_available_locales())


def test_locales_share_keys():
    assert set(i18n.strings["en-US"]) == set(i18n.strings["zh-TW"])


def test_from_run_keeps_the_resolved_settings(isolated_config):
    run = RunConfig(command="nbody", tol=1e-7, bodies=[2, 3, 4, 6], seed=5, lang="zh-TW", points=4)
    AppConfig.from_run(run).save()
    loaded = AppConfig.load()
    assert (loaded.tol, loaded.bodies, loaded.seed, loaded.lang) == (1e-7, "2,3,4,6", 5, "zh-TW")
    assert "points" not in json.loads(isolated_config.read_text(encoding="utf-8"))
