import numpy as np
import pytest

from horst.model import FrequencyPlan, Stage

pytestmark = pytest.mark.smoke


def test_from_band_defaults():
    plan = FrequencyPlan.from_band()
    assert len(plan) == 18
    assert plan.frequencies[0] == pytest.approx(1.7)
    assert plan.frequencies[12] == pytest.approx(8.55)
    assert plan.frequencies[-1] == pytest.approx(13.0)
    assert np.all(np.diff(plan.frequencies) > 0.0)
    assert np.all(np.diff(plan.spacings) <= 0.0)
    assert plan.spacings[-1] == pytest.approx(30.0)


def test_from_frequencies_follows_the_ladder_rule():
    plan = FrequencyPlan.from_frequencies([2.5, 5.0, 10.1], v_min=1500.0)
    assert plan.spacings == (150.0, 75.0, 37.5)
    assert plan.max_iterations == (15, 15, 15)


def test_per_stage_iteration_caps():
    plan = FrequencyPlan.from_frequencies([2.5, 5.0], v_min=1500.0,
                                          max_iterations=[3, 7])
    assert plan.max_iterations == (3, 7)
    with pytest.raises(ValueError):
        FrequencyPlan.from_frequencies([2.5, 5.0], v_min=1500.0,
                                       max_iterations=[3])


def test_stages_repeat_over_cycles():
    plan = FrequencyPlan((2.0, 3.0), (50.0, 50.0), (4, 5), cycles=2)
    stages = list(plan.stages())
    assert len(stages) == 4
    assert stages[0] == Stage(cycle=0, index=0, frequency=2.0, spacing=50.0,
                              max_iterations=4)
    assert [(s.cycle, s.index) for s in stages] == [(0, 0), (0, 1), (1, 0),
                                                    (1, 1)]


def test_single_stage_plan():
    plan = FrequencyPlan.single(4.0, 25.0, max_iterations=2)
    assert len(plan) == 1
    assert next(plan.stages()).spacing == 25.0


@pytest.mark.parametrize("frequencies, spacings, cycles", [
    ((), (), 1),
    ((3.0, 2.0), (50.0, 50.0), 1),
    ((2.0, 3.0), (50.0, 60.0), 1),
    ((2.0,), (50.0,), 0),
    ((0.0,), (50.0,), 1),
])
def test_invalid_plans(frequencies, spacings, cycles):
    with pytest.raises(ValueError):
        FrequencyPlan(frequencies, spacings, (1,) * len(frequencies), cycles)


def test_band_needs_ordered_edges():
    with pytest.raises(ValueError):
        FrequencyPlan.from_band(f_start=5.0, f_split=4.0, f_end=13.0)


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
