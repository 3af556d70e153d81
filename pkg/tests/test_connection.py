import pytest

from suq2lc import connection, linalg
from suq2lc.calculus import BASIS, PAIR_LABELS, pair_index
from suq2lc.field import ONE, QE, ZERO, from_int
from suq2lc.linalg import Mat


def test_metric_basis_dimension_and_invariance(geo):
    basis = connection.metric_basis(geo)
    assert len(basis) == 10
    sig_t = geo.braiding.sigma.transpose()
    for met in basis:
        assert sig_t * met.vec() == met.vec()
    # linearly independent as 16-vectors
    m = linalg.from_cols([met.vec().coords for met in basis], PAIR_LABELS)
    assert linalg.rank(m) == 10


def test_example_metric_properties(geo, example_metric):
    assert example_metric.check(geo.braiding)
    assert connection._is_weight_graded(example_metric.G)
    assert not linalg.det(example_metric.G).is_zero()


def test_example_metric_coefficients_are_deterministic(geo):
    _, coeffs = connection.example_metric(geo)
    _, again = connection.example_metric(geo)
    assert coeffs == again
    assert any(coeffs)


def test_metric_check_rejects_non_invariant(geo):
    grid = linalg.zeros(4, 4, BASIS, BASIS)
    for i in range(4):
        grid.entries[i][i] = ONE
    with pytest.raises(connection.SingularMetric):
        connection.Metric(grid).check(geo.braiding)


def test_metric_check_rejects_singular(geo):
    basis = connection.metric_basis(geo)
    graded = [m for m in basis if connection._is_weight_graded(m.G)]
    singular = next(m for m in graded if linalg.det(m.G).is_zero())
    with pytest.raises(connection.SingularMetric):
        singular.check(geo.braiding)


def test_parse_metric_roundtrip(example_metric):
    parsed = connection.parse_metric(example_metric.to_json())
    assert parsed.G == example_metric.G


def test_parse_metric_bad_shape():
    with pytest.raises(ValueError):
        connection.parse_metric([["1"] * 3] * 3)


def test_connection_algebra():
    z = connection.zero_connection()
    assert z.mat.is_zero()
    assert (z + z) == z
    assert z.image(1).is_zero()
    assert z.to_json()["rows"] == 16


def test_nabla0_signs_are_opposite(geo):
    plus = connection.build_nabla0("plus", geo)
    minus = connection.build_nabla0("minus", geo)
    assert plus.mat == minus.mat.scale(-ONE)
    assert not plus.mat.is_zero()


def test_nabla0_fourth_column_vanishes(geo):
    conn = connection.build_nabla0("plus", geo)
    assert conn.image(4).is_zero()


def test_weight_grading_helper():
    grid = linalg.zeros(4, 4, BASIS, BASIS)
    grid.entries[0][1] = ONE   # w1 (x) w2, weights +1 -1
    grid.entries[2][3] = QE    # w3 (x) w4, weights 0 0
    assert connection._is_weight_graded(grid)
    grid.entries[0][2] = ONE   # w1 (x) w3 breaks the grading
    assert not connection._is_weight_graded(grid)


def test_pi0_is_linear_in_the_connection(geo, example_metric):
    nab = connection.build_nabla0("plus", geo)
    single = connection.pi0(nab, example_metric, geo)
    double = connection.pi0(
        connection.Connection(nab.mat.scale(from_int(2))), example_metric,
        geo)
    assert double == single.scale(from_int(2))
