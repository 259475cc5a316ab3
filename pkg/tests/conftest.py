from datetime import datetime, timedelta, timezone

import pytest

from marketcomplexity.bdm import ctm_from_frequency, enumerate_machines
from marketcomplexity.ingest import PricePoint, PriceSeries

START = datetime(2013, 1, 1, tzinfo=timezone.utc)


def daily_series(prices, id="TEST", kind="stock index", start=START):
    points = tuple(
        PricePoint(start + timedelta(days=i), float(p)) for i, p in enumerate(prices)
    )
    return PriceSeries(id=id, kind=kind, points=points)


@pytest.fixture(scope="session")
def dist2():
    return enumerate_machines(2)


@pytest.fixture(scope="session")
def table2(dist2):
    return ctm_from_frequency(dist2, d_max=7)


@pytest.fixture(scope="session")
def dist3():
    return enumerate_machines(3)


@pytest.fixture(scope="session")
def table3(dist3):
    return ctm_from_frequency(dist3, d_max=8)
