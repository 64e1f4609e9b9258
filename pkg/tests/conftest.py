import sys
from pathlib import Path

import pytest

from snfr import Graph

sys.path.insert(0, str(Path(__file__).parent))

# RING5: s=0, a=1, b=2, c=3, d=4 on a unit-cost cycle s-a-b-c-d-s
S, A, B, C, D = range(5)
# G2: s=0, x=1, x1=2, x2=3
X, X1, X2 = 1, 2, 3


@pytest.fixture
def ring5() -> Graph:
    return Graph(5, [(S, A, 1), (A, B, 1), (B, C, 1), (C, D, 1), (D, S, 1)])


@pytest.fixture
def g2() -> Graph:
    return Graph(4, [(S, X, 1), (X, X1, 1), (X, X2, 1), (X1, X2, 1), (X2, S, 10)])
