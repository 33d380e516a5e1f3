import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from tfgkp.exact import I, INV_SQRT2, ONE, QI2, SQRT2, eighth_root

small = st.fractions(min_value=-5, max_value=5, max_denominator=12)
elements = st.builds(QI2, small, small, small, small)


def close(a: QI2, z: complex) -> bool:
    return abs(complex(a) - z) < 1e-9 * (1 + abs(z))


@given(elements, elements)
def test_ring_operations_match_complex(a, b):
    assert close(a + b, complex(a) + complex(b))
    assert close(a - b, complex(a) - complex(b))
    assert close(a * b, complex(a) * complex(b))


@given(elements)
def test_inverse(a):
    assume(not a.is_zero())
    assert a * a.inverse() == ONE
    assert close(1 / a, 1 / complex(a))


@given(small, small)
def test_sign_is_exact(p, q):
    x = QI2(p, 0, q, 0)
    v = float(p) + math.sqrt(2) * float(q)
    assume(abs(v) > 1e-12)
    assert x.sign() == (1 if v > 0 else -1)


def test_constants():
    assert SQRT2 * SQRT2 == 2
    assert INV_SQRT2 * SQRT2 == 1
    assert I * I == -1
    for k in range(8):
        assert close(eighth_root(k), complex(math.cos(math.pi * k / 4), math.sin(math.pi * k / 4)))
        assert eighth_root(k).abs2() == 1


def test_rational_extraction():
    assert (INV_SQRT2 * INV_SQRT2).to_fraction() == Fraction(1, 2)
    with pytest.raises(ValueError):
        SQRT2.to_fraction()
    with pytest.raises(TypeError):
        QI2.coerce(0.5)
    with pytest.raises(ZeroDivisionError):
        QI2(0).inverse()
