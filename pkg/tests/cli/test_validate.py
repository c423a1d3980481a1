import pytest

from horst.cli import run_validation
from horst._src.cli.validate import (check_attenuation, check_brocher,
                                     check_hicks_constant, check_ladder)

pytestmark = pytest.mark.smoke


@pytest.mark.parametrize("check", [check_hicks_constant, check_brocher,
                                   check_attenuation, check_ladder])
def test_analytic_checks_pass(check):
    value, threshold = check()
    assert value <= threshold


@pytest.mark.slow
def test_full_validation_report():
    report = run_validation()
    assert list(report.columns) == ['check', 'value', 'threshold', 'passed']
    assert len(report) == 7
    assert report['passed'].all(), report.to_string()


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
