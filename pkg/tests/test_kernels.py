import numpy as np
import pytest
from hypothesis import given

from mintile import _pycore, kernels
from strategies import instances

try:
    from mintile import _core
except ImportError:  # pure-Python install
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled kernel not built")


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


@needs_core
@given(instances(max_n=9))
def test_compiled_matches_python(inst):
    masks = inst.maximal_scenarios
    a = _core.containment_table(inst.n, masks)
    b = _pycore.containment_table(inst.n, masks)
    assert np.array_equal(np.asarray(a), np.asarray(b))
    ra = _core.subset_dp(inst.n, a)
    rb = _pycore.subset_dp(inst.n, b)
    assert np.array_equal(np.asarray(ra[0]), np.asarray(rb[0]))
    assert np.array_equal(np.asarray(ra[1]), np.asarray(rb[1]))
    assert int(ra[2]) == int(rb[2]) and int(ra[3]) == int(rb[3])


def test_containment_table_direct():
    table = _pycore.containment_table(3, [0b011])
    assert [int(table[d]) for d in range(8)] == [1, 1, 1, 1, 0, 0, 0, 0]
