import json
from pathlib import Path

import pytest

from horst.cli import ConfigError, load_config, validate
from horst.model import FrequencyPlan, grid_interval_for_frequency
from horst._src.cli.config import (frequency_plan, inversion_options,
                                   modeling_options, resolve_threads)

pytestmark = pytest.mark.smoke


def test_defaults_are_valid():
    config = load_config()
    validate(config)
    assert config.solver.mode == 'FR'
    assert config.threads == 1


def test_overrides_are_typed():
    config = load_config(overrides=['solver.eps_blr=1e-4',
                                    'solver.mode=BLR', 'plan.cycles=2'])
    assert config.solver.eps_blr == 1e-4
    assert isinstance(config.plan.cycles, int)


def test_config_file(tmp_path: Path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({'solver': {'mode': 'MP-BLR'},
                                'plan': {'frequencies': [3.0, 2.0]}}))
    config = load_config(path, overrides=['solver.precision=single'])
    assert config.solver.mode == 'MP-BLR'
    assert config.solver.precision == 'single'
    assert list(config.plan.frequencies) == [3.0, 2.0]


@pytest.mark.parametrize("overrides, key", [
    (['solver.bogus=1'], 'bogus'),
    (['threads=many'], 'threads'),
    (['threads'], 'threads'),
])
def test_bad_overrides_name_the_key(overrides, key):
    with pytest.raises(ConfigError) as info:
        load_config(overrides=overrides)
    assert key in info.value.key


def test_missing_config_file(tmp_path: Path):
    with pytest.raises(ConfigError) as info:
        load_config(tmp_path / "absent.json")
    assert info.value.key == '--config'


@pytest.mark.parametrize("override, key", [
    ('solver.eps_blr=0.5', 'solver.eps_blr'),
    ('solver.mode=HODLR', 'solver.mode'),
    ('physics.pml_reflection=1.5', 'physics.pml_reflection'),
    ('inversion.v_max=1000', 'inversion.v_max'),
    ('export.axis=w', 'export.axis'),
    ('survey.scale=2', 'survey.scale'),
    ('plan.ppw=2', 'plan.ppw'),
])
def test_range_checks(override: str, key: str):
    with pytest.raises(ConfigError) as info:
        validate(load_config(overrides=[override]))
    assert info.value.key == key
    assert str(info.value).startswith(key)


def test_required_paths(tmp_path: Path):
    config = load_config(overrides=[f'paths.model={tmp_path / "m.fdm"}'])
    with pytest.raises(ConfigError) as info:
        validate(config, required_paths=('model',))
    assert info.value.key == 'paths.model'
    with pytest.raises(ConfigError) as info:
        validate(config, required_paths=('dataset',))
    assert info.value.key == 'paths.dataset'


def test_thread_resolution(monkeypatch):
    config = load_config(overrides=['threads=2'])
    monkeypatch.delenv('HORST_THREADS', raising=False)
    assert resolve_threads(None, config) == 2
    monkeypatch.setenv('HORST_THREADS', '3')
    assert resolve_threads(None, config) == 3
    assert resolve_threads(5, config) == 5
    monkeypatch.setenv('HORST_THREADS', 'three')
    with pytest.raises(ConfigError):
        resolve_threads(None, config)
    with pytest.raises(ConfigError):
        resolve_threads(0, config)


def test_plan_follows_the_ladder_rule():
    config = load_config(overrides=['plan.frequencies=[5.0,2.5]',
                                    'plan.v_min=1500'])
    plan = frequency_plan(config)
    assert plan.frequencies == (2.5, 5.0)
    assert list(plan.spacings) == [grid_interval_for_frequency(f, 1500.0)
                                   for f in (2.5, 5.0)]


def test_fixed_spacing_overrides_the_ladder():
    config = load_config(overrides=['plan.frequencies=[2.0,3.0]',
                                    'plan.spacing=40', 'plan.cycles=2'])
    plan = frequency_plan(config)
    assert isinstance(plan, FrequencyPlan)
    assert list(plan.spacings) == [40.0, 40.0]
    assert len(list(plan.stages())) == 4


def test_options_are_built_from_the_tree():
    config = load_config(overrides=['solver.mode=BLR', 'solver.block_size=8',
                                    'physics.pml_width=10',
                                    'inversion.memory=3'])
    modeling = modeling_options(config, threads=4)
    assert modeling.mode == 'BLR'
    assert modeling.pml.width == 10
    assert modeling.solve_options().block_size == 8
    assert modeling.solve_options().threads == 4
    assert inversion_options(config).memory == 3


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
