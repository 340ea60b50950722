import itertools
import math
from pathlib import Path

import pytest

from torsionscan.corpus import product_corpus_4d, standard_simplex
from torsionscan.dataset import table16
from torsionscan.polytope import polar_dual

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def leibniz_det(rows):
    """Determinant by the permutation expansion; independent of the library."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inv * math.prod(rows[i][perm[i]] for i in range(n))
    return total


def minor_gcd(rows, k):
    """gcd of all k x k minors of an integer matrix."""
    m, n = len(rows), len(rows[0]) if rows else 0
    g = 0
    for ri in itertools.combinations(range(m), k):
        for ci in itertools.combinations(range(n), k):
            g = math.gcd(g, leibniz_det([[rows[i][j] for j in ci] for i in ri]))
    return g


@pytest.fixture(scope="session")
def pairs():
    return table16()


@pytest.fixture(scope="session")
def quintic_dual():
    # Fan polytope of P^4; its polar dual is the 5-fold dilated simplex.
    return standard_simplex(4)


@pytest.fixture(scope="session")
def quintic(quintic_dual):
    return polar_dual(quintic_dual)


@pytest.fixture(scope="session")
def products4():
    return product_corpus_4d()
