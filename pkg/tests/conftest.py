import numpy as np
import pytest


def random_complex(rng, n, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import SUMMARY
    except ImportError:
        return
    if not SUMMARY:
        return
    terminalreporter.section("acceptance criteria")
    for cid, (passed, total, failed) in SUMMARY.items():
        line = f"{cid:<4} {'PASS' if passed else 'FAIL'} ({total - len(failed)}/{total} checks)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
