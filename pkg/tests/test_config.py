from config.config import Config, TestingConfig, config
from config.dynamic_config import RuntimeConfig, configure, get_config


def test_override_beats_environment(monkeypatch):
    monkeypatch.setenv('E2HOMLAB_CAP', '64')
    runtime = RuntimeConfig({'ring_size_cap': 32})
    assert runtime.RING_SIZE_CAP == 32


def test_environment_beats_static(monkeypatch):
    monkeypatch.setenv('E2HOMLAB_SAMPLES', '7')
    assert RuntimeConfig().BAR_SAMPLES == 7


def test_static_default(monkeypatch):
    monkeypatch.delenv('E2HOMLAB_GROUP_CAP', raising=False)
    assert RuntimeConfig().GROUP_SIZE_CAP == Config.GROUP_SIZE_CAP


def test_none_overrides_are_ignored(monkeypatch):
    monkeypatch.delenv('E2HOMLAB_JOBS', raising=False)
    assert RuntimeConfig({'default_jobs': None}).DEFAULT_JOBS == Config.DEFAULT_JOBS


def test_bad_value_falls_back(monkeypatch):
    monkeypatch.setenv('E2HOMLAB_DEGREE', 'four')
    assert RuntimeConfig().MAX_DEGREE == Config.MAX_DEGREE


def test_update_value_clears_cached_entry():
    runtime = RuntimeConfig({'random_seed': 1})
    assert runtime.RANDOM_SEED == 1
    assert runtime.update_value('random_seed', 5)
    assert runtime.RANDOM_SEED == 5
    assert not runtime.update_value('no_such_key', 5)


def test_configure_installs_global():
    runtime = configure({'ring_size_cap': 12})
    assert get_config() is runtime
    assert get_config().RING_SIZE_CAP == 12


def test_fixture_applies_testing_caps(testing_config):
    assert testing_config.RING_SIZE_CAP == TestingConfig.RING_SIZE_CAP
    assert testing_config.DATABASE_PATH == ''


def test_families_are_copies():
    families = Config.families()
    assert list(families) == ['fields-small', 'local-char2', 'local-odd', 'products']
    families['products'].append('Z/10')
    assert 'Z/10' not in Config.families()['products']


def test_config_mapping():
    assert config['testing'] is TestingConfig
    assert config['default'] is Config
