import pytest

# one PASS/FAIL line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


def record(criterion: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {title} -- {detail}"
    ACCEPTANCE[criterion] = line
    print(line)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


@pytest.fixture
def mp():
    mpmath = pytest.importorskip("mpmath")
    old = mpmath.mp.dps
    mpmath.mp.dps = 40
    yield mpmath
    mpmath.mp.dps = old


@pytest.fixture
def both_backends():
    """Yield a function that runs ``fn`` under each backend and restores."""
    from twisted_eisenstein._backend import HAVE_NUMBA, get_backend, set_backend
    if not HAVE_NUMBA:
        pytest.skip("numba not importable")
    prev = get_backend()

    def run(fn):
        out = {}
        for b in ("numba", "numpy"):
            set_backend(b)
            out[b] = fn()
        set_backend(prev)
        return out["numba"], out["numpy"]

    yield run
    set_backend(prev)
