import time

import pytest

from gconvex.classify import default_jobs, enumerate_rank2, enumerate_rank3


@pytest.fixture(scope="session")
def rank3_timed():
    start = time.perf_counter()
    rep = enumerate_rank3(jobs=default_jobs(), analyze=True)
    return rep, time.perf_counter() - start


@pytest.fixture(scope="session")
def rank3(rank3_timed):
    return rank3_timed[0]


@pytest.fixture(scope="session")
def rank2():
    return enumerate_rank2()
