import pytest

from vdwphase import eos, maxwell


@pytest.fixture(scope="session")
def params():
    return eos.EosParams()


@pytest.fixture(scope="session")
def land(params):
    return maxwell.construct(params)


@pytest.fixture(scope="session")
def vmid(land):
    return 0.5 * (land.alpha0 + land.beta0)


ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    A test that raises before recording still leaves a FAIL line.
    """
    seen = []

    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {detail}"
        ACCEPTANCE.append(line)
        seen.append(number)
        print(line)
        return ok

    yield record
    if not seen:
        ACCEPTANCE.append(f"FAIL  {request.node.name}: raised before reporting")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
