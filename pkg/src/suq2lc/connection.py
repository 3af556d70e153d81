"""The torsionless connection nabla_0, the metric apparatus (V_g, g^(2),
Phi_g), the compatibility functional Pi^0_g and the Levi-Civita solver."""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import calculus, field, linalg
from .calculus import (BASIS, PAIRS, PAIR_LABELS, TRIPLES, TRIPLE_LABELS,
                       pair_index, pair_vec, triple_index)
from .field import FieldElem, KE, ONE, QE, SE, ZERO, from_int
from .linalg import Mat, Vec, identity, kron


class SingularMetric(ValueError):
    pass


class PhiSingular(ValueError):
    pass


class BasisChangeFailure(ValueError):
    pass


class Connection:
    """A linear map 0E -> 0E (x) 0E; column j holds the coordinates of
    nabla(w_j) over PAIRS."""

    def __init__(self, mat):
        self.mat = mat   # 16x4

    def image(self, j):
        return self.mat.col(j - 1)

    def __add__(self, other):
        return Connection(self.mat + other.mat)

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        return self.mat == other.mat

    def to_json(self):
        return self.mat.to_json()


def zero_connection():
    return Connection(linalg.zeros(16, 4, PAIR_LABELS, BASIS))


class Metric:
    """4x4 grid G with G[i][j] = g(w_i (x) w_j); sigma-invariant and
    nondegenerate."""

    def __init__(self, mat):
        self.G = mat

    def vec(self):
        return Vec([self.G.entries[i][j] for (i, j) in
                    ((a - 1, b - 1) for a, b in PAIRS)], PAIR_LABELS)

    def check(self, braiding):
        """Enforce sigma-invariance and nondegeneracy; raise SingularMetric."""
        v = self.vec()
        if braiding.sigma.transpose() * v != v:
            raise SingularMetric("metric is not sigma-invariant")
        if linalg.det(self.G).is_zero():
            raise SingularMetric("metric matrix is singular")
        return True

    def to_json(self):
        return self.G.to_json()


class Geometry:
    """Shared context: validated eigen data, braiding, wedge space, nu basis."""

    def __init__(self, data, braiding):
        self.data = data
        self.braiding = braiding
        self.psym = braiding.P1
        self.wedge = calculus.WedgeSpace(braiding)
        # matrix whose columns are nu_1..nu_10 (basis of V1)
        self.nu_mat = linalg.from_cols([v.coords for v in data.nu], PAIR_LABELS)

    @staticmethod
    def load(variant="auto"):
        data = calculus.load_tables(variant)
        braiding = calculus.validate_tables(data)
        return Geometry(data, braiding)


def _expand_in_basis(mat, basislabels, v):
    """Solve mat * x = v for a 16x10 full-column-rank mat; return (x, residual)."""
    aug = [list(row) + [v.coords[i]] for i, row in enumerate(mat.entries)]
    pivots = linalg._row_reduce(aug, mat.cols)
    x = [ZERO] * mat.cols
    for r, c in enumerate(pivots):
        x[c] = aug[r][mat.cols]
    residual = v - mat * Vec(x)
    return Vec(x, basislabels), residual


NU_LABELS = tuple(f"nu{i}" for i in range(1, 11))


# -- nabla_0 -------------------------------------------------------------------

def build_nabla0(sign, geo):
    """nabla_0(w_i) = -(wedge|_0F)^{-1} d(w_i)."""
    d = calculus.d_basis(sign, geo.wedge)
    cols = []
    for i in range(1, 5):
        rep = geo.wedge.embed(d.d(i))
        cols.append(rep.scale(-ONE).coords)
    return Connection(linalg.from_cols(cols, PAIR_LABELS, BASIS))


def nabla0_displays(sign, t):
    """The four printed theorem displays (errata applied), as 16-dim columns.

    The erratum relative to the source: the prefactors of nabla_0(w1) and
    nabla_0(w2) read q*r/(t*k*(q^2+1)^2) rather than r/(t^2*k*(q^2+1)^2)
    (the two coincide exactly when t = (q^2-1)/q is misread as free), the
    overall sign of nabla_0(w3) is flipped, and its w3(x)w3 coefficient
    carries a factor 2.
    """
    u = ONE if sign == "plus" else -ONE
    q2 = QE * QE
    c2 = (q2 + ONE) * (q2 + ONE)
    r = q2 + ONE
    sr = SE
    k = KE
    two = from_int(2)
    pref = QE * r / (t * k * c2)
    n1 = pair_vec({
        (1, 3): two * t * k / (QE * sr),
        (1, 4): t * QE,
        (3, 1): -(two * t * QE * k) / sr,
        (4, 1): t * QE,
    }).scale(-u * pref)
    n2 = pair_vec({
        (2, 3): two * t * QE * k / sr,
        (2, 4): -(t * QE),
        (3, 2): -(two * t * k) / (QE * sr),
        (4, 2): -(t * QE),
    }).scale(u * pref)
    n3 = pair_vec({
        (1, 2): two * t * k / sr,
        (2, 1): -(two * t * k) / sr,
        (3, 3): -(two * t * t * k) / sr,
        (3, 4): t * QE,
        (4, 3): t * QE,
    }).scale(-u * pref)
    n4 = linalg.zero_vec(16, PAIR_LABELS)
    return [n1, n2, n3, n4]


def torsion(conn, sign, geo):
    """T_nabla = wedge o nabla + d, column per basis vector, in the wedge model."""
    d = calculus.d_basis(sign, geo.wedge)
    cols = []
    for i in range(1, 5):
        w = geo.wedge.wedge_rep(conn.image(i)) + d.d(i)
        cols.append(w.coords)
    return linalg.from_cols(cols, calculus.WEDGE_LABELS, BASIS)


# -- metrics -------------------------------------------------------------------

def metric_basis(geo):
    """Basis of sigma-invariant metrics: kernel of (sigma^T - I), reshaped 4x4."""
    m = geo.braiding.sigma.transpose() - identity(16, PAIR_LABELS)
    out = []
    for v in linalg.kernel(m):
        grid = [[v.coords[pair_index(i, j)] for j in range(1, 5)]
                for i in range(1, 5)]
        out.append(Metric(Mat(grid, BASIS, BASIS)))
    return out


# Weights of the basis one-forms; a metric supported on opposite-weight pairs
# keeps the compatibility system block-diagonal, which the exact solver needs.
WEIGHTS = (1, -1, 0, 0)


def _is_weight_graded(grid):
    return all(not grid.entries[i][j] or WEIGHTS[i] + WEIGHTS[j] == 0
               for i in range(4) for j in range(4))


def example_metric(geo):
    """A deterministic nondegenerate integer combination of the metric basis.

    Only weight-graded combinations are considered so the Levi-Civita solve
    stays block-diagonal.
    """
    basis = metric_basis(geo)
    graded = [i for i, met in enumerate(basis) if _is_weight_graded(met.G)]
    for size in range(1, len(graded) + 1):
        for subset in itertools.combinations(graded, size):
            grid = linalg.zeros(4, 4, BASIS, BASIS)
            for i in subset:
                grid = grid + basis[i].G
            if not linalg.det(grid).is_zero():
                coeffs = [1 if i in subset else 0 for i in range(len(basis))]
                return Metric(grid), coeffs
    raise SingularMetric("no nondegenerate combination found")


def parse_metric(grid_json):
    """Metric from a JSON 4x4 grid of canonical field-element strings
    (a bare grid or an exported operator object with an "entries" key)."""
    if isinstance(grid_json, dict):
        grid_json = grid_json.get("entries", grid_json)
    if len(grid_json) != 4 or any(len(r) != 4 for r in grid_json):
        raise ValueError("metric grid must be 4x4")
    grid = [[field.parse_elem(e) for e in row] for row in grid_json]
    return Metric(Mat(grid, BASIS, BASIS))


# -- compatibility -------------------------------------------------------------

def pi0(conn, metric, geo):
    """Pi^0_g(nabla) = 2 (id (x) g)(sigma (x) id)(nabla (x) id) P_sym, as 4x16."""
    psym = geo.psym
    sigma = geo.braiding.sigma
    g = metric.G
    out_cols = []
    for col in range(16):
        x = psym.col(col)                       # in 0E (x) 0E
        # (nabla (x) id): 64-dim, coefficient of (a,b,c) from x[(i,c)] nabla(w_i)[(a,b)]
        y = [ZERO] * 64
        for (i, c_) in PAIRS:
            xc = x.coords[pair_index(i, c_)]
            if not xc:
                continue
            nab = conn.image(i)
            for (a, b_) in PAIRS:
                nc = nab.coords[pair_index(a, b_)]
                if nc:
                    idx = triple_index(a, b_, c_)
                    y[idx] = y[idx] + xc * nc
        # (sigma (x) id) on legs 1,2 then contract legs 2,3 with g
        z = [ZERO] * 4
        for (a, b_, c_) in TRIPLES:
            yv = y[triple_index(a, b_, c_)]
            if not yv:
                continue
            scol = sigma.col(pair_index(a, b_))
            for (p, r_) in PAIRS:
                sv = scol.coords[pair_index(p, r_)]
                if sv:
                    gv = g.entries[r_ - 1][c_ - 1]
                    if gv:
                        z[p - 1] = z[p - 1] + yv * sv * gv
        out_cols.append([from_int(2) * v for v in z])
    return linalg.from_cols(out_cols, BASIS, PAIR_LABELS)


def pi0_on_v1(pi0_mat, geo):
    """Restrict a 4x16 Pi^0 matrix to the nu basis: 4x10."""
    cols = []
    for b in range(10):
        nu = geo.nu_mat.col(b)
        col = [ZERO] * 4
        for j in range(16):
            c = nu.coords[j]
            if c:
                for i in range(4):
                    e = pi0_mat.entries[i][j]
                    if e:
                        col[i] = col[i] + e * c
        cols.append(col)
    return linalg.from_cols(cols, BASIS, NU_LABELS)


def _g2_on_v1(metric, geo):
    """The 10x10 grid g2[(b,c)] = g^(2)(nu_b (x) nu_c) with
    g^(2)((e1 x e2) x (e3 x e4)) = g(e2 x e3) g(e1 x e4)."""
    g = metric.G.entries
    out = []
    for b in range(10):
        vb = geo.nu_mat.col(b).coords
        row = []
        for c in range(10):
            vc = geo.nu_mat.col(c).coords
            acc = ZERO
            for (i, j) in PAIRS:
                xb = vb[pair_index(i, j)]
                if not xb:
                    continue
                for (l, m) in PAIRS:
                    xc = vc[pair_index(l, m)]
                    if xc:
                        gv = g[j - 1][l - 1] * g[i - 1][m - 1]
                        if gv:
                            acc = acc + xb * xc * gv
            row.append(acc)
        out.append(row)
    return Mat(out, NU_LABELS, NU_LABELS)


PHI_DOM_LABELS = tuple(f"nu{a}(x)w{j}" for a in range(1, 11) for j in range(1, 5))
PHI_COD_LABELS = tuple(f"w{i}(x)nu{b}" for i in range(1, 5) for b in range(1, 11))


def psym23_action(geo):
    """The 40x40 matrix of (P_sym)_23 from basis {nu_a (x) w_j} to
    {w_i (x) nu_b}, via the 64-dim lift.  Raises BasisChangeFailure if the
    image does not close in span{w_i (x) nu_b}."""
    psym = geo.psym
    cols = []
    for a in range(10):
        nu = geo.nu_mat.col(a)
        for j in range(1, 5):
            # lift nu_a (x) w_j and apply P on legs 2,3
            img = {}   # first leg index -> 16-vector over legs 2,3
            for (i, b_) in PAIRS:
                c = nu.coords[pair_index(i, b_)]
                if not c:
                    continue
                pcol = psym.col(pair_index(b_, j))
                acc = img.setdefault(i, [ZERO] * 16)
                for l in range(16):
                    pv = pcol.coords[l]
                    if pv:
                        acc[l] = acc[l] + c * pv
            col = [ZERO] * 40
            for i, legvec in img.items():
                coords, residual = _expand_in_basis(
                    geo.nu_mat, NU_LABELS, Vec(legvec, PAIR_LABELS))
                if not residual.is_zero():
                    raise BasisChangeFailure(
                        f"(P_sym)_23 image of nu{a+1}(x)w{j} does not close "
                        "in the {w_i (x) nu_b} basis")
                for b in range(10):
                    if coords.coords[b]:
                        col[10 * (i - 1) + b] = coords.coords[b]
            cols.append(col)
    return linalg.from_cols(cols, PHI_COD_LABELS, PHI_DOM_LABELS)


def phi_g(metric, geo, psym23=None):
    """The 40x40 matrix of Phi_g = (id (x) V_g2) o (P_sym)_23 o (id (x) V_g^-1)
    between Hom(0E, V1) = {nu_a (x) w_j} and Hom(V1, 0E) = {w_i (x) nu_b}."""
    gdet = linalg.det(metric.G)
    if gdet.is_zero():
        raise SingularMetric("metric matrix is singular")
    ginv = linalg.inverse(metric.G)
    p23 = psym23 if psym23 is not None else psym23_action(geo)
    g2 = _g2_on_v1(metric, geo)
    # right factor: id (x) V_g^-1 maps nu_a (x) w_j^* to sum_m Ginv^T[m][j] nu_a (x) w_m
    # left factor: w_i (x) nu_b -> sum_c g2[b][c] w_i (x) nu_c^*
    cols = []
    for a in range(10):
        for j in range(4):
            # domain basis element nu_a (x) w_j^*
            acc = [ZERO] * 40
            for m in range(4):
                w = ginv.entries[j][m]
                if not w:
                    continue
                pcol = p23.col(4 * a + m)
                for idx in range(40):
                    pv = pcol.coords[idx]
                    if pv:
                        acc[idx] = acc[idx] + w * pv
            # apply id (x) V_g2 on the nu leg
            out = [ZERO] * 40
            for i in range(4):
                for b in range(10):
                    v = acc[10 * i + b]
                    if not v:
                        continue
                    for c in range(10):
                        gv = g2.entries[b][c]
                        if gv:
                            out[10 * i + c] = out[10 * i + c] + v * gv
            cols.append(out)
    return linalg.from_cols(cols, PHI_COD_LABELS, PHI_DOM_LABELS)


def phi_g_rank_at(metric, geo, q0, t0, k0, psym23=None):
    """Rank of Phi_g specialized at a Pythagorean point (q0, t0, k0).

    Evaluates the three factors first and composes over the rationals, so
    the check is cheap; full rank at one good point certifies generic
    invertibility of the symbolic composite.
    """
    gdet = linalg.det(metric.G)
    if gdet.is_zero():
        raise SingularMetric("metric matrix is singular")
    p23 = psym23 if psym23 is not None else psym23_action(geo)
    pe = p23.eval(q0, t0, k0)
    ge = linalg.inverse(metric.G).eval(q0, t0, k0)
    g2e = _g2_on_v1(metric, geo).eval(q0, t0, k0)
    phi = [[Fraction(0)] * 40 for _ in range(40)]
    for a in range(10):
        for j in range(4):
            acc = [Fraction(0)] * 40
            for m in range(4):
                w = ge[j][m]
                if not w:
                    continue
                for idx in range(40):
                    if pe[idx][4 * a + m]:
                        acc[idx] += w * pe[idx][4 * a + m]
            for i in range(4):
                for b in range(10):
                    if not acc[10 * i + b]:
                        continue
                    for c in range(10):
                        if g2e[b][c]:
                            phi[10 * i + c][4 * a + j] += acc[10 * i + b] * g2e[b][c]
    return linalg.rational_rank(phi)


def _pi0_linear_matrix(metric, geo):
    """The 40x40 matrix of L -> Pi^0_g(L)|_{V1} for corrections
    L in Hom(0E, V1), L(w_j) = sum_a L_{aj} nu_a.

    Rows are (i, nu_b) like PHI_COD_LABELS, columns (nu_a, w_j) like
    PHI_DOM_LABELS.
    """
    cols = []
    for a in range(10):
        for j in range(4):
            lmat = [[ZERO] * 4 for _ in range(16)]
            nu = geo.nu_mat.col(a)
            for idx in range(16):
                lmat[idx][j] = nu.coords[idx]
            conn = Connection(Mat(lmat, PAIR_LABELS, BASIS))
            p = pi0(conn, metric, geo)
            pv1 = pi0_on_v1(p, geo)
            col = [pv1.entries[i][b] for i in range(4) for b in range(10)]
            cols.append(col)
    return linalg.from_cols(cols, PHI_COD_LABELS, PHI_DOM_LABELS)


def levi_civita(metric, sign, geo):
    """nabla = nabla_0 + L with L in Hom(0E, V1) solving
    Pi^0_g(nabla_0 + L) = 0 (dg = 0 on invariants)."""
    metric.check(geo.braiding)
    nabla0 = build_nabla0(sign, geo)
    rhs_mat = pi0_on_v1(pi0(nabla0, metric, geo), geo)
    rhs = Vec([-rhs_mat.entries[i][b] for i in range(4) for b in range(10)],
              PHI_COD_LABELS)
    m = _pi0_linear_matrix(metric, geo)
    try:
        l = linalg.solve(m, rhs)
    except linalg.SingularMatrix as exc:
        raise PhiSingular(
            "compatibility system is singular (exceptional q or degenerate "
            "metric)") from exc
    lmat = [[ZERO] * 4 for _ in range(16)]
    for a in range(10):
        nu = geo.nu_mat.col(a)
        for j in range(4):
            c = l.coords[4 * a + j]
            if c:
                for idx in range(16):
                    if nu.coords[idx]:
                        lmat[idx][j] = lmat[idx][j] + c * nu.coords[idx]
    correction = Connection(Mat(lmat, PAIR_LABELS, BASIS))
    return nabla0 + correction
