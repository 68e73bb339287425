"""Acceptance criteria G1..G10, one test per criterion.

Each test prints every check it ran; the terminal summary lists one
PASS/FAIL line per criterion.
"""

import pytest

from mukit import verify

SUMMARY = {}


@pytest.mark.parametrize("cid", list(verify.CRITERIA))
def test_criterion(cid):
    checks = verify.run_criterion(cid)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    SUMMARY[cid] = (not failed, len(checks), [c.name for c in failed])
    assert not failed, "; ".join(c.line() for c in failed)
