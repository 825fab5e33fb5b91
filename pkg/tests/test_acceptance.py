"""One test per acceptance criterion; each prints its PASS/FAIL line.

The lines are also collected into an "acceptance criteria" section of the
terminal summary (see conftest.py).
"""

import pytest

from coturan.acceptance import CRITERIA, run_criterion

RESULTS = []
SLOW = {6}


def _params():
    for number, name, *_ in CRITERIA:
        marks = [pytest.mark.slow] if number in SLOW else []
        yield pytest.param(number, marks=marks, id=f"c{number:02d}_{name.replace(' ', '_')}")


@pytest.mark.parametrize("number", list(_params()))
def test_criterion(number):
    res = run_criterion(number, seed=0, jobs=1)
    RESULTS.append(res.line())
    print(res.line())
    assert res.passed, res.line()
