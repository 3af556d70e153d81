import random
from fractions import Fraction

import pytest

from suq2lc import linalg
from suq2lc.field import KE, ONE, QE, SE, TE, ZERO, from_int
from suq2lc.linalg import Mat, SingularMatrix, Vec


def _rand_elem(rng):
    gens = [ONE, QE, TE, KE, SE, QE * TE, SE * KE]
    x = ZERO
    for _ in range(rng.randint(1, 3)):
        x = x + from_int(rng.randint(-3, 3)) * gens[rng.randrange(len(gens))]
    return x


def _rand_mat(rng, n):
    return Mat([[_rand_elem(rng) for _ in range(n)] for _ in range(n)])


def _cofactor_det(m):
    if m.rows == 1:
        return m.entries[0][0]
    total = ZERO
    for j in range(m.cols):
        if not m.entries[0][j]:
            continue
        minor = Mat([row[:j] + row[j + 1:] for row in m.entries[1:]])
        term = m.entries[0][j] * _cofactor_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def test_vec_arithmetic():
    v = Vec([ONE, QE, ZERO])
    w = Vec([SE, -QE, TE])
    assert (v + w).coords == [ONE + SE, ZERO, TE]
    assert (v - v).is_zero()
    assert v.scale(QE).coords == [QE, QE * QE, ZERO]


def test_mat_mul_and_transpose():
    a = Mat([[ONE, QE], [ZERO, SE]])
    b = Mat([[TE, ZERO], [ONE, KE]])
    assert (a * b).entries == [[TE + QE, QE * KE], [SE, SE * KE]]
    assert a.transpose().entries == [[ONE, ZERO], [QE, SE]]
    v = Vec([ONE, ONE])
    assert (a * v).coords == [ONE + QE, SE]


def test_kron_dimensions_and_values():
    a = Mat([[ONE, QE], [ZERO, ONE]])
    b = linalg.identity(3)
    k = linalg.kron(a, b)
    assert (k.rows, k.cols) == (6, 6)
    assert k.entries[0][3] == QE
    assert k.entries[1][4] == QE
    assert k.entries[3][0] == ZERO


def test_det_agrees_with_cofactor_expansion():
    rng = random.Random(7)
    for n in (2, 3, 4):
        m = _rand_mat(rng, n)
        assert linalg.det(m) == _cofactor_det(m)


def test_det_multiplicative():
    rng = random.Random(11)
    a, b = _rand_mat(rng, 3), _rand_mat(rng, 3)
    assert linalg.det(a * b) == linalg.det(a) * linalg.det(b)


def test_det_of_block_permuted_matrix():
    # two independent 2x2 blocks scattered by a permutation exercise the
    # connected-component decomposition
    m = linalg.zeros(4, 4)
    e = m.entries
    e[0][0], e[0][2] = QE, ONE
    e[2][0], e[2][2] = ONE, QE
    e[1][1], e[1][3] = SE, TE
    e[3][1], e[3][3] = TE, SE
    expected = (QE * QE - ONE) * (SE * SE - TE * TE)
    assert linalg.det(Mat([row[:] for row in e])) == expected


def test_inverse_roundtrip():
    rng = random.Random(3)
    m = _rand_mat(rng, 3)
    while linalg.det(m).is_zero():
        m = _rand_mat(rng, 3)
    inv = linalg.inverse(m)
    assert (m * inv) == linalg.identity(3)
    assert (inv * m) == linalg.identity(3)


def test_solve_matches_known_solution():
    rng = random.Random(5)
    m = _rand_mat(rng, 4)
    while linalg.det(m).is_zero():
        m = _rand_mat(rng, 4)
    x = Vec([QE, SE, ONE / TE, KE + SE])
    sol = linalg.solve(m, m * x)
    assert sol == x


def test_solve_singular_raises():
    m = Mat([[ONE, QE], [QE, QE * QE]])
    with pytest.raises(SingularMatrix):
        linalg.solve(m, Vec([ONE, ONE]))


def test_kernel_and_rank():
    # rank-1 matrix: each row a multiple of (1, q, s)
    rows = [Vec([ONE, QE, SE]).scale(c).coords for c in (ONE, TE, SE)]
    m = Mat(rows)
    assert linalg.rank(m) == 1
    ker = linalg.kernel(m)
    assert len(ker) == 2
    for v in ker:
        assert (m * v).is_zero()


def test_kernel_of_invertible_is_trivial():
    rng = random.Random(9)
    m = _rand_mat(rng, 3)
    while linalg.det(m).is_zero():
        m = _rand_mat(rng, 3)
    assert linalg.kernel(m) == []
    assert linalg.rank(m) == 3


def test_rational_fast_paths():
    rows = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]
    assert linalg.rational_det(rows) == Fraction(-2)
    assert linalg.rational_rank(rows) == 2
    assert linalg.rational_rank([[Fraction(1), Fraction(2)],
                                 [Fraction(2), Fraction(4)]]) == 1


def test_mat_eval_at_pythagorean_point():
    m = Mat([[SE, QE], [ZERO, ONE / KE]])
    vals = m.eval(Fraction(3, 4), Fraction(2), Fraction(3))
    assert vals == [[Fraction(5, 4), Fraction(3, 4)],
                    [Fraction(0), Fraction(1, 3)]]


def test_to_json_shape():
    m = linalg.identity(2, ("a", "b"))
    j = m.to_json()
    assert j["rows"] == j["cols"] == 2
    assert j["row_basis"] == ("a", "b")
    assert j["entries"] == [["1", "0"], ["0", "1"]]
