import pytest

from hotplug_cc.designs import load_design, shipped_design_path
from hotplug_cc.hppda import man_hppda, tdesign_hppda

# Arrays exactly as printed for the two worked systems; '*' star, '-' null.
EX1_P = [
    "**----", "*-*---", "*--*--", "*---*-", "*----*",
    "-**---", "-*-*--", "-*--*-", "-*---*", "--**--",
    "--*-*-", "--*--*", "---**-", "---*-*", "----**",
]
EX1_B = [
    "*,*,1,2",
    "*,1,*,3",
    "*,2,3,*",
    "1,*,*,4",
    "2,*,4,*",
    "3,4,*,*",
]
EX2_P = [
    "**--**--", "--**--**", "-*-*-*-*", "*-*-*-*-", "*--**--*",
    "-**--**-", "****----", "----****", "**----**", "--****--",
    "*-*--*-*", "-*-**-*-", "*--*-**-", "-**-*--*",
]
EX2_B = [
    "*,*,1", "*,1,*", "1,*,*",
    "*,*,2", "*,2,*", "2,*,*",
    "*,3,4", "3,*,5", "4,5,*",
]


def star_rows(rows):
    return tuple(tuple("*" if ch == "*" else None for ch in row) for row in rows)


def int_rows(rows):
    return tuple(tuple("*" if tok == "*" else int(tok) for tok in row.split(",")) for row in rows)


@pytest.fixture(scope="session")
def design():
    return load_design(shipped_design_path())


@pytest.fixture(scope="session")
def h_man():
    return man_hppda(6, 4, 2)


@pytest.fixture(scope="session")
def h_tdesign(design):
    return tdesign_hppda(design, (1, 2))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
