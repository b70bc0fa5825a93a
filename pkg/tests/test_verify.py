import pytest

from udwcoherence.verify import GROUPS, STANDARD_GRID, registered_checks, relative_discrepancy, run_verify


def test_standard_grid_is_full_product():
    assert len(STANDARD_GRID) == 2 * 2 * 5 * 4 * 3


def test_every_group_has_checks():
    assert {c.group for c in registered_checks()} == set(GROUPS)


def test_only_filter():
    report = run_verify(only=["fockoracle"])
    assert report.results and all(r.group == "fockoracle" for r in report.results)
    assert report.passed


def test_unknown_group_rejected():
    with pytest.raises(ValueError):
        run_verify(only=["nonsense"])


def test_tightened_tolerance_reports_margins():
    report = run_verify(only=["specfun", "quadrature"], tolerance=1e-14)
    failed = [r for r in report.results if not r.passed]
    assert failed, "quadrature-limited checks must fail at 1e-14"
    assert all(r.margin < 0 and r.tolerance == 1e-14 for r in failed)
    assert "FAIL" in failed[0].line()
    assert not report.passed


def test_exceptions_become_failures(monkeypatch):
    from udwcoherence import verify

    def broken(spec):
        raise RuntimeError("boom")

    monkeypatch.setattr(verify, "_REGISTRY", [verify._Check("specfun", "broken", 1.0, broken)])
    report = verify.run_verify()
    assert not report.passed
    assert "RuntimeError: boom" in report.results[0].detail


def test_relative_discrepancy_floor():
    assert relative_discrepancy(1.0 + 1e-9, 1.0) == pytest.approx(1e-9)
    assert relative_discrepancy(1e-12, 0.0) == pytest.approx(1e-10)


def test_progress_callback_and_summary():
    seen = []
    report = run_verify(only=["specfun"], progress=seen.append)
    assert seen == report.results
    assert report.lines()[-1].endswith("checks passed")
