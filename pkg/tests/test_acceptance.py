"""Acceptance suite: every release-gating criterion at its stated
tolerance, one printed verdict line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` (or the equivalent
``relaxsched acceptance``).
"""

import pytest

from relaxsched import acceptance
from relaxsched.schedulers import TopKUniformScheduler


@pytest.mark.parametrize("check", acceptance.CRITERIA,
                         ids=lambda fn: fn.__name__.removeprefix("check_"))
def test_criterion(check):
    result = check()
    print()
    print(result.line())
    assert result.passed, result.line()


def test_determinism_check_catches_lossy_scheduler():
    # faulty scheduler that drops every reinsertion on the floor
    class DropsReinserts(TopKUniformScheduler):
        def __init__(self, seed):
            super().__init__(8, seed)
            self.popped_once = False

        def approx_get_min(self):
            self.popped_once = True
            return super().approx_get_min()

        def insert(self, task, priority):
            if self.popped_once:
                return
            super().insert(task, priority)

    result = acceptance.check_determinism(
        instances=5, schedulers=[("lossy", DropsReinserts)],
        seeds_per_scheduler=1)
    assert not result.passed
