import pytest

from wzpairs.catalog import builtin_catalog

GOOD1 = ("z=-1/16 * poch(1/2-k;n)*poch(1/2+k;n)*poch(1/3;n)*poch(2/3;n)*poch(1/3;k)*poch(2/3;k)"
         " / (poch(1/2+k/2;n)*poch(1+k/2;n)*poch(1+k;n)*poch(1;n)*poch(1;k)^2)")
GOOD2 = ("z=-1/16 * poch(1/2;n)*poch(1/2+2k;n)*poch(1/3+k;n)*poch(2/3+k;n)*poch(1/4;k)*poch(3/4;k)"
         " / (poch(1/2+k/2;n)*poch(1+k/2;n)*poch(1+k;n)*poch(1;n)*poch(1;k)^2)")
POLE_AT_MINUS_HALF = ("z=-1/16 * poch(1/2-k;n)*poch(1/3;n)*poch(2/3;n)*poch(1/3;k)*poch(2/3;k)"
                      " / (poch(1;n)*poch(1+k;n)*poch(1+2k;n)*poch(1;k)^2)")
TERMINATES_AT_TENTH = ("z=-1 * poch(1/2;n)*poch(1/2+k;n)*poch(1/2-5k;n)*poch(1/2;k)^2"
                       " / (poch(1;n)*poch(1+k;n)^2*poch(1;k)^2)")


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def pair_entries(catalog):
    return [e for e in catalog if e.has_pair]


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
