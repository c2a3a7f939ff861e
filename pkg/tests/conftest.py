import random

import pytest

from graphroots.graph import Graph

DEFAULT_SEED = 20240611


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized tests")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


def cycle(n, prefix=""):
    names = [f"{prefix}{i}" for i in range(n)]
    return Graph(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def path(n):
    names = [str(i) for i in range(n)]
    return Graph(names, list(zip(names, names[1:])))


def complete(n):
    names = [str(i) for i in range(n)]
    return Graph(names, [(a, b) for i, a in enumerate(names) for b in names[i + 1:]])


def star(leaves):
    names = [str(i) for i in range(leaves + 1)]
    return Graph(names, [("0", v) for v in names[1:]])


def random_graph(rng, n, p):
    names = [str(i) for i in range(n)]
    return Graph(names, [(a, b) for i, a in enumerate(names) for b in names[i + 1:] if rng.random() < p])


def petersen():
    outer = [f"o{i}" for i in range(5)]
    inner = [f"i{i}" for i in range(5)]
    edges = [(outer[i], outer[(i + 1) % 5]) for i in range(5)]
    edges += [(inner[i], inner[(i + 2) % 5]) for i in range(5)]
    edges += list(zip(outer, inner))
    return Graph(outer + inner, edges)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(":")[0][1:])):
            terminalreporter.write_line(line)
