"""The ten acceptance criteria, one pass/fail line each.

Run ``pytest tests/test_acceptance.py -v`` (the lines are printed even with
output capture on) or ``python tests/test_acceptance.py``.
"""

import pytest

from jetstrata import selftest


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number, capsys):
    result = selftest.CRITERIA[number - 1]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    results = selftest.run_all()
    raise SystemExit(0 if all(r.passed for r in results) else 1)
