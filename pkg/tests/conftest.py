import sys


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance criterion verdicts after capture ends."""
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not getattr(module, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in module.RESULTS:
        terminalreporter.write_line(f"ACCEPTANCE {name}: {verdict}")
