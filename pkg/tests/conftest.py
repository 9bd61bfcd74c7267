import pytest

from reesreg.config import bundled_corpus, build_filtration

ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def corpus():
    """Bundled corpus entries keyed by id."""
    cfg = bundled_corpus()
    return {e.id: e for e in cfg.entries}


@pytest.fixture(scope="session")
def filtrations(corpus):
    return {eid: build_filtration(spec) for eid, spec in corpus.items()}


@pytest.fixture(scope="session")
def analyses(filtrations):
    from reesreg.theorems import EntryAnalysis
    cache = {}

    def get(eid):
        if eid not in cache:
            cache[eid] = EntryAnalysis(filtrations[eid], seed=0)
        return cache[eid]
    return get


@pytest.fixture
def record_criterion():
    def rec(n, ok, detail=""):
        line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        print(line)
        ACCEPTANCE_LINES.append(line)
    return rec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
