import numpy as np
import pytest

from lregular import qseries as qs


def assert_series_equal(x, y, msg=""):
    cmp_ = qs.compare(x, y)
    assert cmp_.equal, f"{msg} first mismatch at q^{cmp_.first_mismatch}"


@pytest.fixture(scope="session")
def b3_mod2_70k():
    """b_3 coefficients mod 2, shared by the self-similarity tests."""
    from lregular.partitions import regular_series

    return regular_series(3, 70_000, qs.MOD2)
