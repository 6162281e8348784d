import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from rofsum.numfield import FieldCtx, Q  # noqa: E402
from rofsum.oracle import ropset_build  # noqa: E402

FIELDS = [Q, FieldCtx.prime(2), FieldCtx.prime(3), FieldCtx.prime(7)]


@pytest.fixture(params=FIELDS, ids=lambda c: c.selector)
def ctx(request):
    return request.param


@pytest.fixture(scope="session")
def oracle_cache(tmp_path_factory):
    return str(tmp_path_factory.mktemp("ropsets"))


@pytest.fixture(scope="session")
def rs2_5(oracle_cache):
    return ropset_build(2, 5, cache_dir=oracle_cache)


@pytest.fixture(scope="session")
def rs2_4(oracle_cache):
    return ropset_build(2, 4, cache_dir=oracle_cache)


@pytest.fixture(scope="session")
def rs3_4(oracle_cache):
    return ropset_build(3, 4, cache_dir=oracle_cache)


@pytest.fixture(scope="session")
def rs5_4(oracle_cache):
    return ropset_build(5, 4, cache_dir=oracle_cache)
