import random

import pytest

from specsat.graph import Graph


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="run slow tests (exhaustive n = 8 scan)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = (mark.args[0], item.name)
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        state = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _CRITERIA[key] = (mark.args[1], state)
    elif rep.failed:
        _CRITERIA[key] = (mark.args[1], "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), (title, state) in sorted(_CRITERIA.items(), key=lambda kv: kv[0]):
        terminalreporter.write_line(f"criterion {num:>2}  {state:<4}  {title}  [{name}]")
