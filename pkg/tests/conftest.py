import pytest

from rtslip.basis import build_basis
from rtslip.forms import SlipCoefficients, assemble
from rtslip.profile import make_profile


@pytest.fixture(scope="session")
def canonical_profile():
    return make_profile("linear", (2.0, 1.0))


@pytest.fixture(scope="session")
def basis48():
    return build_basis(48)


@pytest.fixture(scope="session")
def canonical_ops(basis48, canonical_profile):
    return assemble(basis48, canonical_profile, 1.0, SlipCoefficients())


@pytest.fixture(scope="session")
def slip_ops(basis48, canonical_profile):
    return assemble(basis48, canonical_profile, 1.0, SlipCoefficients(0.3, 0.3))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
