import os
import re
import sys

sys.path.insert(0, os.path.dirname(__file__))

CRITERIA = {
    1: "budget example: combined budget equals the displayed B; proportional variant exact",
    2: "reserve chain: R_n, Q_n, P_0, P_1, intermediate tests, P_2 against the general formula",
    3: "encapsulation micro-examples",
    4: "signed copy and focus: byte-exact output",
    5: "axiom suite: symbolic plus 100 random ground instances per axiom",
    6: "meadow suite",
    7: "zero-test logic: truth tables and symbolic laws",
    8: "ground-term oracle: exhaustive corpus plus 10,000 random terms",
    9: "function definitions and summation over functions",
    10: "determinism of the CLI suite",
}

_NAME = re.compile(r"test_c(\d\d)_")


def pytest_terminal_summary(terminalreporter):
    outcome: dict[int, list[str]] = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", "call") != "call" and key == "passed":
                continue
            m = _NAME.search(rep.nodeid)
            if m and "test_acceptance" in rep.nodeid:
                outcome.setdefault(int(m.group(1)), []).append(key)
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in CRITERIA.items():
        results = outcome.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(r == "passed" for r in results) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {text}")
