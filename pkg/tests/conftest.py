from importlib import resources

import pytest

from toricfloer.lattice import Polytope, parse_polytope

CORPUS = ("p1", "p2", "p3", "p1xp1", "f1", "f2", "f3")


def corpus_text(name: str) -> str:
    return (resources.files("toricfloer") / "data" / "polytopes"
            / f"{name}.poly").read_text()


def corpus_polytope(name: str) -> Polytope:
    return parse_polytope(corpus_text(name))


@pytest.fixture(scope="session")
def corpus() -> dict[str, Polytope]:
    return {name: corpus_polytope(name) for name in CORPUS}
