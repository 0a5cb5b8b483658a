"""The acceptance table, one test per criterion, each printing a PASS/FAIL line.

The lines are repeated in the terminal summary at the end of the run.
"""

import json

import pytest

from qlab.acceptance import CRITERIA, run_criterion
from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: "criterion_%02d" % c.number)
def test_criterion(criterion):
    outcome = run_criterion(criterion)
    print()
    print(outcome.line())
    ACCEPTANCE_LINES.append(outcome.line())
    print(json.dumps(outcome.detail, default=str, sort_keys=True))
    if criterion.limit_s is not None:
        assert outcome.seconds <= criterion.limit_s, "over time limit"
    assert outcome.ok, outcome.detail
