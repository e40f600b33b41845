import pytest

from trihmimo import SurfaceSpec, UserLayout, Wavenumber

LAM = 1.0
PITCH = 0.4


def square(n, center=(0.0, 0.0, 0.0), pitch=PITCH, width=None):
    width = pitch if width is None else width
    return SurfaceSpec(n, n, pitch, pitch, width, width, center)


@pytest.fixture
def k():
    return Wavenumber(LAM)


@pytest.fixture(scope="session")
def fig4_geometry():
    """225 tx and 225 rx patches at 0.4 lambda pitch, one user at z = lambda."""
    tx = square(15)
    return tx, UserLayout((square(15, (0, 0, 1.0)),))


def fig5_layout(zs=(0.5, 1.0, 10.0)):
    tx = square(6)
    return tx, UserLayout(tuple(square(3, (0, 0, z)) for z in zs))


@pytest.fixture(scope="session")
def fig5_geometry():
    return fig5_layout()


ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(id, text, passed, detail)``."""
    def record(cid, text, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] AC{cid:>2} {text}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_RESULTS.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
