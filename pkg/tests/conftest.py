import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(mod.CRITERIA):
        if i in mod.RESULTS:
            ok, detail = mod.RESULTS[i]
            terminalreporter.write_line(f"AC{i} {'PASS' if ok else 'FAIL'}: {mod.CRITERIA[i]} -- {detail}")
        else:
            terminalreporter.write_line(f"AC{i} NOT RUN: {mod.CRITERIA[i]}")
