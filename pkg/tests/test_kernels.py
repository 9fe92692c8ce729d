from __future__ import annotations

import random

import pytest

from artifact import _pykernels as pure
from artifact import kernels
from artifact.algebra_core import field


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
@pytest.mark.parametrize("p", [2, 3, 5])
def test_compiled_matches_pure_prime(p):
    rng = random.Random(p)
    C = kernels.compiled
    for _ in range(200):
        a = [rng.randrange(p) for _ in range(rng.randint(0, 40))]
        b = [rng.randrange(p) for _ in range(rng.randint(1, 30))]
        if not any(b):
            b[-1] = 1
        while b and not b[-1]:
            b.pop()
        assert C.conv_p(a, b, p) == pure.conv_p(a, b, p)
        assert C.conv_p(a, b, p, 7) == pure.conv_p(a, b, p, 7)
        assert C.divmod_p(a, b, p) == pure.divmod_p(a, b, p)


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
def test_compiled_matches_pure_tables_q4():
    F = field(4)
    rng = random.Random(4)
    C = kernels.compiled
    add, mul = F.add_t, F.mul_t
    for _ in range(100):
        a = [rng.randrange(4) for _ in range(rng.randint(0, 20))]
        b = [rng.randrange(4) for _ in range(rng.randint(1, 10))]
        b[-1] = b[-1] or 1
        assert C.conv_tab(a, b, add, mul, 4) == pure.conv_tab(a, b, add, mul, 4)
        assert (C.divmod_tab(a, b, add, mul, F.neg_t, F.inv_t, 4)
                == pure.divmod_tab(a, b, add, mul, F.neg_t, F.inv_t, 4))
