import random

import pytest

from app.services.digraph_service import Digraph
from app.services.target_service import build_target

TARGET_NAMES = ("A", "B", "C")


def cycle(n: int) -> Digraph:
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def digon() -> Digraph:
    return Digraph(2, [(0, 1), (1, 0)])


def random_digraph(rng: random.Random, n: int, max_out: int, max_in: int, density: float = 0.5) -> Digraph:
    """Loopless digraph with bounded degrees, arcs proposed in random order."""
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    rng.shuffle(pairs)
    out_deg, in_deg = [0] * n, [0] * n
    arcs = []
    for u, v in pairs:
        if rng.random() > density:
            continue
        if out_deg[u] < max_out and in_deg[v] < max_in:
            arcs.append((u, v))
            out_deg[u] += 1
            in_deg[v] += 1
    return Digraph(n, arcs)


def random_lists(rng: random.Random, n: int, colors: int = 3, full_share: float = 0.6) -> list[frozenset]:
    lists = []
    for _ in range(n):
        if rng.random() < full_share:
            lists.append(frozenset(range(colors)))
        else:
            lists.append(frozenset(x for x in range(colors) if rng.random() < 0.5))
    return lists


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=TARGET_NAMES)
def target(request):
    return build_target(request.param)


@pytest.fixture
def write(tmp_path):
    """Write text into a file under tmp_path and return its path as str."""
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write
