import re


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = {}
    for cat, label in (("passed", "PASS"), ("failed", "FAIL"),
                       ("error", "ERROR"), ("xfailed", "XFAIL (documented)"),
                       ("xpassed", "XPASS")):
        for rep in terminalreporter.stats.get(cat, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)(\w*)",
                          rep.nodeid)
            if m:
                rows[(int(m.group(1)), m.group(2))] = label
    if rows:
        terminalreporter.write_sep("=", "acceptance criteria")
        for (num, suffix), label in sorted(rows.items()):
            name = f"criterion {num}{suffix}"
            terminalreporter.write_line(f"{name}: {label}")
