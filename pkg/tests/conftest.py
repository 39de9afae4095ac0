import numpy as np
import pytest

from sublis.oracle import make_rng


@pytest.fixture
def rng():
    return make_rng(12345)


def lis_bruteforce(values) -> int:
    """Longest nondecreasing subsequence by subset enumeration (n <= 14)."""
    v = list(values)
    best = 0
    for mask in range(1 << len(v)):
        s = [v[i] for i in range(len(v)) if mask >> i & 1]
        if len(s) > best and all(a <= b for a, b in zip(s, s[1:])):
            best = len(s)
    return best


def random_small_array(rng, n, small_range=True):
    if small_range:
        return rng.integers(0, max(2, n // 3), size=n).astype(float)
    return rng.standard_normal(n)


np.set_printoptions(linewidth=120)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
