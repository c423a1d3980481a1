from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from horst.cli import main
from horst.model import VtiModel, write_model
from horst.solver import SingularFrontError

pytestmark = pytest.mark.smoke


@pytest.fixture
def model_file(tmp_path: Path, ramp_model: VtiModel) -> Path:
    return write_model(ramp_model, tmp_path / "model")


def test_slice_command(tmp_path: Path, model_file: Path, config_args):
    code = main(['slice', *config_args, '--set', f'paths.model={model_file}',
                 '--set', 'export.axis=y', '--set', 'export.index=2'])
    assert code == 0
    output = tmp_path / "out"
    assert (output / "v0_y2.ppm").exists()
    assert (output / "v0_y2.csv").exists()
    assert "horst slice" in (output / "horst.log").read_text()


@pytest.mark.parametrize("overrides", [['solver.bogus=1'],
                                       ['solver.mode=HODLR'],
                                       ['threads=0']])
def test_configuration_errors_exit_with_2(config_args, overrides):
    args = ['validate', *config_args]
    for item in overrides:
        args += ['--set', item]
    assert main(args) == 2


def test_missing_input_exits_with_2(tmp_path: Path, config_args):
    assert main(['slice', *config_args, '--set',
                 f'paths.model={tmp_path / "absent.fdm"}']) == 2


def test_bad_slice_index_exits_with_2(model_file: Path, config_args):
    assert main(['slice', *config_args, '--set', f'paths.model={model_file}',
                 '--set', 'export.index=99']) == 2


def test_corrupt_model_exits_with_4(tmp_path: Path, config_args):
    path = tmp_path / "corrupt.fdm"
    path.write_bytes(b"FDM1" + bytes(7))
    assert main(['slice', *config_args, '--set',
                 f'paths.model={path}']) == 4


def test_numeric_failure_exits_with_3(monkeypatch, model_file: Path,
                                      config_args):
    def singular(*args, **kwargs):
        raise SingularFrontError("zero pivot in front 0")

    monkeypatch.setattr('horst._src.cli.main.export_slices', singular)
    assert main(['slice', *config_args, '--set',
                 f'paths.model={model_file}']) == 3


def test_failed_validation_exits_with_3(monkeypatch, tmp_path: Path,
                                        config_args):
    report = pd.DataFrame([{'check': 'a', 'value': 1.0, 'threshold': 0.5,
                            'passed': False}])
    monkeypatch.setattr('horst._src.cli.main.run_validation',
                        lambda: report)
    assert main(['validate', *config_args]) == 3
    assert (tmp_path / "out" / "validation.csv").exists()


def test_survey_without_data(tmp_path: Path, config_args):
    code = main(['survey', '--no-data', *config_args,
                 '--set', 'survey.dims=[9,9,6]', '--set', 'survey.scale=1',
                 '--set', 'survey.obn_pitch=100',
                 '--set', 'survey.shot_inline=50',
                 '--set', 'survey.shot_crossline=100',
                 '--set', 'survey.water_depth=1'])
    assert code == 0
    output = tmp_path / "out"
    true_model = VtiModel.from_file(output / "model_true.fdm")
    start_model = VtiModel.from_file(output / "model_start.fdm")
    assert true_model.dims == (9, 9, 6)
    np.testing.assert_allclose(true_model.v0, start_model.v0)
    acquisition = pd.read_csv(output / "acquisition.csv")
    assert set(acquisition['kind']) == {'source', 'receiver'}
    assert not (output / "data.fdg").exists()


@pytest.mark.slow
def test_survey_forward_and_invert(tmp_path: Path, config_args):
    common = [*config_args, '--deterministic',
              '--set', 'physics.free_surface=false',
              '--set', 'physics.pml_width=3',
              '--set', 'plan.frequencies=[3.0]',
              '--set', 'plan.spacing=25',
              '--set', 'plan.max_iterations=1']
    output = tmp_path / "out"
    assert main(['survey', *common, '--set', 'survey.dims=[10,10,10]',
                 '--set', 'survey.scale=1', '--set', 'survey.obn_pitch=100',
                 '--set', 'survey.shot_inline=75',
                 '--set', 'survey.shot_crossline=75',
                 '--set', 'survey.obn_depth=125',
                 '--set', 'survey.shot_depth=50',
                 '--set', 'survey.anomalies=[{position: [112.5, 112.5, 125.0],'
                          ' radius: 40.0, amplitude: 0.05}]']) == 0
    assert (output / "data.fdg").exists()

    assert main(['invert', *common,
                 '--set', f'paths.model={output / "model_start.fdm"}',
                 '--set', f'paths.dataset={output / "data.fdg"}']) == 0
    assert (output / "model_final.fdm").exists()
    history = pd.read_csv(output / "history.csv")
    assert history['J'].iloc[-1] <= history['J'].iloc[0]


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
