import pytest

from tmbreed.breeder import load_champions
from tmbreed.machine import Machine, parse_machine, random_machine
from tmbreed.rand import SplitMix64

BB2_TEXT = "1 0 -> 1 R 2\n1 1 -> 1 L 2\n2 0 -> 1 L 1\n2 1 -> 1 R 0"


@pytest.fixture
def bb2() -> Machine:
    """2-state champion: halts solo in 6 steps leaving 4 ones."""
    return parse_machine(BB2_TEXT, name="bb2")


@pytest.fixture
def champions() -> list[Machine]:
    return load_champions()


def make_sparse_machine(n_states: int, rng: SplitMix64) -> Machine:
    """Random machine with some table entries dropped, for edge coverage."""
    full = random_machine(n_states, rng)
    table = {lhs: act for lhs, act in full.table.items()
             if rng.randbelow(4) != 0}
    return Machine(n_states, table)


def random_machines(count: int, seed: int, n_states_range=(1, 3),
                    sparse_every: int = 0) -> list[Machine]:
    rng = SplitMix64(seed)
    out = []
    for i in range(count):
        n = rng.randint(*n_states_range)
        if sparse_every and i % sparse_every == 0:
            out.append(make_sparse_machine(n, rng))
        else:
            out.append(random_machine(n, rng))
    return out
