import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: (int(k[0]), k)):
        terminalreporter.write_line(results[key].line())
    failed = sum(not r.passed for r in results.values())
    terminalreporter.write_line(f"{len(results) - failed}/{len(results)} acceptance checks passed")
