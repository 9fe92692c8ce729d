from __future__ import annotations

import pytest

from artifact.algebra_core import FracK, PolyA, field


@pytest.fixture
def F2():
    return field(2)


@pytest.fixture
def T2(F2):
    return PolyA.T(F2)


def frac(num, den=(1,), q=2) -> FracK:
    F = field(q)
    return FracK(PolyA(list(num), F), PolyA(list(den), F))
