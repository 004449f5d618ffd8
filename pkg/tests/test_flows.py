import pytest

from flows import acceptance, octonion_suite


def test_octonion_suite_passes():
    checks = octonion_suite.run(seed=2, samples=5)
    assert [c.name for c in checks if not c.passed] == []
    assert {"pentagon", "hexagon", "field_cover"} <= {c.name for c in checks}


@pytest.mark.slow
def test_octonion_suite_covers_as_many_points_as_acceptance():
    assert octonion_suite.COVER_POINTS == acceptance.PROJ_POINTS == 100
    checks = {c.name: c for c in octonion_suite.run(seed=0)}
    assert checks["field_cover"].checked == 100
    assert checks["field_cover"].passed


def test_monoidal_axioms():
    report = acceptance.monoidal_axioms()
    assert report.passed
    assert report.details["counts"]["octonion"] == {"pentagon": 4096, "hexagon": 512}


@pytest.mark.parametrize("seed", [0, 1])
def test_line_objects(seed):
    report = acceptance.line_objects(seed)
    assert report.passed, report.violations


def test_descent_with_few_round_trips():
    report = acceptance.descent(seed=4, count=2)
    assert report.passed, report.violations
    assert report.details["round_trips"] == 2


def test_proj_points_with_few_samples():
    report = acceptance.proj_points(seed=0, count=4)
    assert report.passed, report.violations
