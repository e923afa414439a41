import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subradiant.special import polylog_unit


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.floats(1e-3, 2 * np.pi - 1e-3))
def test_polylog_on_unit_circle(n, theta):
    ref = complex(mp.polylog(n, mp.expj(theta)))
    got = complex(polylog_unit(n, theta))
    assert abs(got - ref) < 1e-12 * max(1.0, abs(ref))


def test_vectorized():
    th = np.linspace(0.1, 6.0, 7)
    out = polylog_unit(2, th)
    assert out.shape == th.shape
    assert out[3] == pytest.approx(complex(mp.polylog(2, mp.expj(th[3]))), abs=1e-12)
