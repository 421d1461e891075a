import pytest

# acceptance criteria record one line each here; printed in the terminal summary
ACCEPTANCE = {}


def record(key, ok, detail=""):
    ACCEPTANCE[key] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=_order):
        ok, detail = ACCEPTANCE[key]
        word = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {key}: {word}  {detail}".rstrip())


def _order(key):
    head = key.split()[0]
    return (head, key)


@pytest.fixture
def builtin_pairs():
    from eqcartan import corpus
    return corpus.pairs()
