import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from engelcalc.words import GroupWord

settings.register_profile("default", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=1000,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def words(n: int = 4, max_len: int = 10):
    letter = st.integers(1, n).flatmap(lambda g: st.sampled_from([g, -g]))
    return st.lists(letter, max_size=max_len).map(GroupWord)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
