import itertools
import random
from importlib import resources

import pytest

from ssg.errors import NotContractedWithinBound, PresentationError
from ssg.presentation import NucleusAutomaton, Presentation, nucleus_closure, read_presentation

BUNDLED = ("grigorchuk", "grigorchuk-erschler", "trivial", "adding-machine", "dihedral")

# period 15 sequence from x^4 + x + 1
M_SEQUENCE = (1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1)


def load_bundled(name):
    text = (resources.files("ssg") / "data" / f"{name}.ssg").read_text(encoding="utf-8")
    return read_presentation(text).to_automaton()


def sunic_nucleus():
    """a swaps the letters; b_i = (a or e, b_{i+1}) around a cycle of length 15.

    The fixing subgraph has the 15-cycle of b's plus the identity loop, so 16
    cyclic states.
    """
    period = len(M_SEQUENCE)
    names = ["e", "a"] + [f"b{i}" for i in range(period)]
    outputs = [(0, 1), (1, 0)] + [(0, 1)] * period
    restrictions = [(0, 0), (0, 0)]
    for i, bit in enumerate(M_SEQUENCE):
        restrictions.append((1 if bit else 0, 2 + (i + 1) % period))
    return NucleusAutomaton(("0", "1"), names, outputs, restrictions, 0)


def _random_tables(rng):
    k = rng.choice((2, 3))
    n = rng.randint(2, 4)
    perms = list(itertools.permutations(range(k)))
    names = ["e"] + [f"s{i}" for i in range(1, n)]
    outputs = [tuple(range(k))]
    restrictions = [(0,) * k]
    for _ in range(1, n):
        outputs.append(rng.choice(perms))
        restrictions.append(tuple(0 if rng.random() < 0.4 else rng.randrange(n) for _ in range(k)))
    letters = tuple(str(x) for x in range(k))
    return Presentation(letters, tuple(names), tuple(outputs), tuple(restrictions), 0)


def random_nuclei(count, seed=7, max_size=4):
    """Distinct nuclei with at most ``max_size`` states, from closures of random generator tables."""
    rng = random.Random(seed)
    found = {}
    attempts = 0
    while len(found) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("random nucleus generator stalled")
        pres = _random_tables(rng)
        try:
            a = nucleus_closure(pres, 4, max_states=20)
        except (NotContractedWithinBound, PresentationError):
            continue
        if a.size > max_size:
            continue
        found.setdefault((a.letters, a.outputs, a.restrictions), a)
    return list(found.values())


@pytest.fixture(scope="session")
def grig():
    return load_bundled("grigorchuk")


@pytest.fixture(scope="session")
def ge():
    return load_bundled("grigorchuk-erschler")


@pytest.fixture(scope="session")
def bundled():
    return {name: load_bundled(name) for name in BUNDLED}


@pytest.fixture(scope="session")
def sunic():
    return sunic_nucleus()


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[number])
