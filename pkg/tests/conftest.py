import sys

from hypothesis import HealthCheck, settings

# exact algebra: inputs are structurally large and slow, never flaky
settings.register_profile(
    "exact", deadline=None, derandomize=True, database=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much,
                           HealthCheck.large_base_example])
settings.load_profile("exact")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.summary_line(number))
