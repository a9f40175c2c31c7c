import pytest

from kernelhier.classify import split_no_loop, split_with_loop
from kernelhier.limits import limit_measure_exact
from kernelhier.semigroup import ColorSystem, generate_semigroup, kernel_of


class Analysis:
    def __init__(self, cs):
        self.cs = cs
        self.st = generate_semigroup(cs)
        self.ks = kernel_of(self.st)
        self.lam = limit_measure_exact(cs, self.st, self.ks)


SYSTEMS = {
    "rank3": ("451314", "245631"),
    "rightgroup4": ("311644", "544123"),
    "perm4": ("2341", "1243"),
    "cerny4": ("2341", "1231"),
}


@pytest.fixture(scope="session")
def analyses():
    out = {name: Analysis(ColorSystem.from_images(cols)) for name, cols in SYSTEMS.items()}
    out["case_a"] = Analysis(split_with_loop("162345", "345612"))
    out["case_b"] = Analysis(split_no_loop("312", "231"))
    return out


@pytest.fixture(scope="session")
def rank3(analyses):
    return analyses["rank3"]


@pytest.fixture(scope="session")
def rightgroup4(analyses):
    return analyses["rightgroup4"]


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance
    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
