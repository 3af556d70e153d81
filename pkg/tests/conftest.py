import pytest

from suq2lc import certify, connection


@pytest.fixture(scope="session")
def geo():
    return connection.Geometry.load()


@pytest.fixture(scope="session")
def example_metric(geo):
    metric, coeffs = connection.example_metric(geo)
    return metric


@pytest.fixture(scope="session")
def constraint_system(geo):
    return certify.build_constraint_system(geo)


@pytest.fixture(scope="session")
def psym23(geo):
    return certify.psym23_matrix(geo)
