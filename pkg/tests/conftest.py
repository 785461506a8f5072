import math
from dataclasses import replace

import pytest

from tractorswarm.catalog import load_boms, load_machines
from tractorswarm.d497 import load_implements
from tractorswarm.scenario import bundled_scenario_path, load_scenario

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def machines():
    return load_machines()


@pytest.fixture(scope="session")
def jd(machines):
    return machines["john_deere_8730r"]


@pytest.fixture(scope="session")
def trse(machines):
    return machines["trse"]


@pytest.fixture(scope="session")
def trse_unlimited(trse):
    return replace(trse, battery=replace(trse.battery, autonomy_per_pack=math.inf))


@pytest.fixture(scope="session")
def plow():
    return load_implements()["moldboard_plow"]


@pytest.fixture(scope="session")
def gang_plow(plow):
    return plow.with_width(4.0)


@pytest.fixture(scope="session")
def table1():
    return load_boms()["trse_table1"]


@pytest.fixture(scope="session")
def paper():
    return load_scenario(bundled_scenario_path())


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
