import pytest

from selfsort.generators import make_rng


@pytest.fixture
def rng():
    return make_rng(12345)


def is_sorting_order(values, order):
    return sorted(order) == list(range(len(values))) and all(
        values[a] <= values[b] for a, b in zip(order, order[1:]))


ACCEPTANCE = []


@pytest.fixture
def record():
    """Log one clause of an acceptance criterion: ``record("3", "mean <= 6n", ok, detail)``."""
    def _record(criterion, clause, ok, detail=""):
        ACCEPTANCE.append((criterion, clause, bool(ok), detail))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    by_id = {}
    for crit, clause, ok, detail in ACCEPTANCE:
        by_id.setdefault(crit, []).append((clause, ok, detail))
    for crit in sorted(by_id, key=lambda c: (int(c.rstrip("abcd")), c)):
        parts = by_id[crit]
        verdict = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        text = "; ".join(f"{clause} [{'ok' if ok else 'FAILED'}] {detail}".rstrip() for clause, ok, detail in parts)
        tr.write_line(f"{verdict} criterion {crit}: {text}")
