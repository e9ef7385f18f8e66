import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GEORGE = (
    "George NNP B-NP B-PER\n"
    "Bush NNP I-NP I-PER\n"
    "spoke VBD B-VP O\n"
    "to TO B-PP O\n"
    "Congress NNP B-NP B-ORG\n"
    "today NN B-NP O\n"
    "\n"
)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
