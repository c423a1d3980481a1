from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from horst.fwi import (FreqDataset, InversionOptions, InversionState,
                       MissingFrequencyError, ModelingOptions,
                       invert_frequency, run_continuation)
from horst.model import FrequencyPlan, VtiModel, read_model
from horst._src.fwi.inversion import BoundProjection

from .conftest import FREQUENCIES

pytestmark = pytest.mark.smoke

HISTORY_COLUMNS = ['cycle', 'stage', 'freq_hz', 'iter', 'J', 'grad_norm',
                   'step_len', 'n_facto', 'wall_s']


@pytest.fixture(scope="module")
def continuation(tmp_path_factory, start_model: VtiModel,
                 observed: FreqDataset, modeling: ModelingOptions):
    output_dir = tmp_path_factory.mktemp("inversion")
    plan = FrequencyPlan(frequencies=FREQUENCIES, spacings=(25.0, 25.0),
                         max_iterations=(2, 2))
    model, history = run_continuation(plan, observed, start_model,
                                      modeling=modeling,
                                      output_dir=output_dir)
    return model, history, output_dir


def test_history_table(continuation):
    _, history, output_dir = continuation
    assert list(history.columns) == HISTORY_COLUMNS
    assert set(history['freq_hz']) == set(FREQUENCIES)
    on_disk = pd.read_csv(output_dir / "history.csv")
    assert len(on_disk) == len(history)


def test_misfit_decreases_within_each_stage(continuation):
    _, history, _ = continuation
    for _, stage in history.groupby('stage'):
        assert stage['J'].iloc[-1] < stage['J'].iloc[0]
        assert np.all(np.diff(stage['J'].to_numpy()) < 0.0)


def test_model_moves_towards_the_truth(continuation, start_model: VtiModel,
                                       true_model: VtiModel):
    model, _, _ = continuation
    before = np.linalg.norm(start_model.v0 - true_model.v0)
    after = np.linalg.norm(model.v0 - true_model.v0)
    assert after < before


def test_passive_fields_and_water_are_kept(continuation,
                                           start_model: VtiModel):
    model, _, _ = continuation
    water = start_model.water_mask
    np.testing.assert_array_equal(model.v0[water], start_model.v0[water])
    np.testing.assert_array_equal(model.rho, start_model.rho)
    np.testing.assert_array_equal(model.epsilon, start_model.epsilon)
    assert model.v0.min() >= 1400.0
    assert model.v0.max() <= 6000.0


def test_stage_models_are_written(continuation):
    model, _, output_dir = continuation
    final = read_model(output_dir / "model_c0_s1.fdm")
    assert (output_dir / "model_c0_s0.fdm").exists()
    np.testing.assert_allclose(final.v0, model.v0, rtol=1e-6)


def test_zero_iterations_only_evaluate(start_model: VtiModel,
                                      observed: FreqDataset,
                                      modeling: ModelingOptions):
    state = InversionState(model=start_model)
    invert_frequency(4.0, observed, state, modeling=modeling,
                     max_iterations=0)
    assert len(state.history) == 1
    assert state.history[0]['iter'] == 0
    assert state.model is start_model
    assert not state.aborted


def test_plan_frequency_missing_from_the_data(start_model: VtiModel,
                                              observed: FreqDataset,
                                              tmp_path: Path):
    plan = FrequencyPlan.single(6.0, 25.0)
    with pytest.raises(MissingFrequencyError):
        run_continuation(plan, observed, start_model, output_dir=tmp_path)
    assert not any(tmp_path.iterdir())


def test_projected_gradient_of_clamped_and_water_cells():
    m = VtiModel.homogeneous((2, 2, 3), 25.0, v0=2000.0, water_depth=1)
    project = BoundProjection(m, InversionOptions(v_min=1500.0,
                                                  v_max=3000.0))
    water = m.water_mask.ravel()
    x = np.full(m.v0.size, 2000.0)
    below, at_lower, at_upper = np.flatnonzero(~water)[:3]
    x[below], x[at_lower], x[at_upper] = 1000.0, 1500.0, 3000.0
    g = np.full(x.size, 2.0)
    g[at_upper] = -2.0

    projected = project.gradient(x, g)
    assert np.all(projected[water] == 0.0)
    assert projected[below] == projected[at_lower] == 0.0
    assert projected[at_upper] == 0.0
    free = ~project.active(x, g)
    assert free.sum() == x.size - water.sum() - 3
    np.testing.assert_array_equal(projected[free], 2.0)

    # cells at a bound stay free when the gradient points inwards
    assert not project.active(x, -g)[at_lower]
    assert project(x)[below] == 1500.0


def test_stage_starting_on_the_velocity_bound(start_model: VtiModel,
                                             observed: FreqDataset,
                                             modeling: ModelingOptions):
    options = InversionOptions(v_min=2000.0, max_iterations=2)
    state = InversionState(model=start_model)
    invert_frequency(4.0, observed, state, options, modeling)

    assert not state.aborted
    assert len(state.history) >= 2
    assert state.misfits[-1] < state.misfits[0]
    assert state.model.v0.min() >= 2000.0
    water = start_model.water_mask
    np.testing.assert_array_equal(state.model.v0[water],
                                  start_model.v0[water])


@pytest.mark.parametrize("options", [{'memory': 0},
                                     {'max_iterations': -1},
                                     {'v_min': 3000.0, 'v_max': 2000.0}])
def test_invalid_inversion_options(options):
    with pytest.raises(ValueError):
        InversionOptions(**options)


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
