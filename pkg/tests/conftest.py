import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from graphprod.graph import complete, cycle, discrete, path  # noqa: E402
from graphprod.words import GraphProduct  # noqa: E402


def five_graphs():
    return {
        "P2": discrete(2),
        "J2": complete(2),
        "C4": cycle(4),
        "P3": path(3),
        "C5": cycle(5),
    }


GRAPH_NAMES = list(five_graphs())


@pytest.fixture(scope="session")
def graphs():
    return five_graphs()


@pytest.fixture(scope="session")
def engines(graphs):
    return {k: GraphProduct(g) for k, g in graphs.items()}


# -- acceptance summary ----------------------------------------------------------

ACCEPTANCE = {}


def record(number, title, case, ok, detail):
    """Store one acceptance observation; printed again at the end of the run."""
    ACCEPTANCE.setdefault(number, {"title": title, "cases": []})["cases"].append((case, ok, detail))
    print(f"criterion {number} [{case}]: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        entry = ACCEPTANCE[number]
        ok = all(c[1] for c in entry["cases"])
        failing = [c[0] for c in entry["cases"] if not c[1]]
        suffix = f" (failing: {', '.join(failing)})" if failing else ""
        tr.write_line(f"criterion {number:2d} {entry['title']}: {'PASS' if ok else 'FAIL'}{suffix}")
        for case, case_ok, detail in entry["cases"]:
            tr.write_line(f"    {case}: {'PASS' if case_ok else 'FAIL'} {detail}")
