"""The 4D± calculus data: invariant bases, eigenvector tables, the braiding
operator, the symmetrizer, the wedge quotient and the exterior derivative.

The eigenvector tables ship as versioned JSON
(``data/eigen_tables.json``) in two variants:

* ``paper``     — the source tables verbatim, with t a free parameter;
* ``corrected`` — t replaced by (q^2-1)/q and two eigenvector coefficients
  repaired (see the ``corrections`` key of the data file).

Only the corrected variant passes the validation gate (the braid equation
fails identically for free t), so ``auto`` resolves to it.
"""

from __future__ import annotations

import json
from importlib import resources

from . import field, linalg
from .field import FieldElem, ZERO, ONE, QE, KE, SE, from_int
from .linalg import Mat, Vec, identity, kron

# -- bases --------------------------------------------------------------------

DIM = 4
BASIS = tuple(f"w{i}" for i in range(1, DIM + 1))
PAIRS = tuple((i, j) for i in range(1, DIM + 1) for j in range(1, DIM + 1))
TRIPLES = tuple((i, j, k) for i in range(1, DIM + 1)
                for j in range(1, DIM + 1) for k in range(1, DIM + 1))

PAIR_LABELS = tuple(f"w{i}(x)w{j}" for i, j in PAIRS)
TRIPLE_LABELS = tuple(f"w{i}(x)w{j}(x)w{k}" for i, j, k in TRIPLES)


def pair_index(i, j):
    return DIM * (i - 1) + (j - 1)


def triple_index(i, j, k):
    return DIM * DIM * (i - 1) + DIM * (j - 1) + (k - 1)


def pair_vec(coeffs):
    """Vec over PAIRS from a dict {(i, j): FieldElem}."""
    coords = [ZERO] * (DIM * DIM)
    for (i, j), c in coeffs.items():
        coords[pair_index(i, j)] = c
    return Vec(coords, PAIR_LABELS)


class DataValidationError(ValueError):
    """An eigen-table invariant failed; carries a diagnostic."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or [message]


class DependentEigenvectors(DataValidationError):
    pass


class BraidFailure(DataValidationError):
    pass


# -- eigen data ---------------------------------------------------------------

class EigenData:
    """The sixteen eigenvectors of the braiding plus the nu basis of V1."""

    def __init__(self, variant, eigen1, eigen_mq2, eigen_mqi2, nu, t_value):
        self.variant = variant
        self.eigen1 = eigen1          # 10 Vec, eigenvalue 1
        self.eigen_mq2 = eigen_mq2    # 3 Vec, eigenvalue -q^2
        self.eigen_mqi2 = eigen_mqi2  # 3 Vec, eigenvalue -q^-2
        self.nu = nu                  # 10 Vec spanning the same space as eigen1
        self.t_value = t_value        # FieldElem: t (paper) or (q^2-1)/q

    def all_vectors(self):
        return list(self.eigen1) + list(self.eigen_mq2) + list(self.eigen_mqi2)

    def validate(self):
        """Linear independence of the 16 vectors and span(nu) = span(eigen1)."""
        b = linalg.from_cols([v.coords for v in self.all_vectors()],
                             PAIR_LABELS)
        if linalg.rank(b) != 16:
            raise DependentEigenvectors(
                f"eigen tables ({self.variant}): the 16 vectors are dependent")
        both = linalg.from_cols(
            [v.coords for v in self.eigen1] + [v.coords for v in self.nu],
            PAIR_LABELS)
        if linalg.rank(both) != 10:
            raise DataValidationError(
                f"eigen tables ({self.variant}): span(nu) != span(eigenvalue-1)")
        return True


def _load_raw():
    src = resources.files("suq2lc.data").joinpath("eigen_tables.json")
    return json.loads(src.read_text())


_RAW = None


def available_variants():
    global _RAW
    if _RAW is None:
        _RAW = _load_raw()
    return sorted(_RAW["variants"])


def data_corrections():
    global _RAW
    if _RAW is None:
        _RAW = _load_raw()
    return list(_RAW["corrections"])


def load_tables(variant="auto"):
    """EigenData for a variant; 'auto' picks the braid-passing variant."""
    global _RAW
    if _RAW is None:
        _RAW = _load_raw()
    if variant == "auto":
        variant = "corrected"   # the only variant that passes the gate
    if variant not in _RAW["variants"]:
        raise KeyError(f"unknown eigen-table variant: {variant}")
    raw = _RAW["variants"][variant]

    def mkvec(d):
        coeffs = {}
        for key, text in d.items():
            i, j = (int(p) for p in key.split(","))
            coeffs[(i, j)] = field.parse_elem(text)
        return pair_vec(coeffs)

    if variant == "paper":
        t_value = field.TE
    else:
        t_value = (QE * QE - ONE) / QE
    return EigenData(
        variant,
        [mkvec(d) for d in raw["eigen1"]],
        [mkvec(d) for d in raw["eigen_mq2"]],
        [mkvec(d) for d in raw["eigen_mqi2"]],
        [mkvec(d) for d in raw["nu"]],
        t_value,
    )


# -- braiding operator --------------------------------------------------------

class BraidingOperator:
    def __init__(self, sigma, basis_mat, basis_inv, projectors):
        self.sigma = sigma            # 16x16 Mat
        self.basis_mat = basis_mat    # columns = 16 eigenvectors
        self.basis_inv = basis_inv
        self.P1, self.P2, self.P3 = projectors
        self.eigenvalues = (ONE, -(QE * QE), -(ONE / (QE * QE)))


def build_sigma(data):
    """sigma = B diag(1 x10, -q^2 x3, -q^-2 x3) B^-1 from the eigen tables."""
    cols = [v.coords for v in data.all_vectors()]
    b = linalg.from_cols(cols, PAIR_LABELS)
    try:
        binv = linalg.inverse(b)
    except linalg.SingularMatrix as exc:
        raise DependentEigenvectors(
            f"eigen tables ({data.variant}): change-of-basis matrix is "
            "singular") from exc
    lam1, lam2, lam3 = ONE, -(QE * QE), -(ONE / (QE * QE))
    eig = [lam1] * 10 + [lam2] * 3 + [lam3] * 3

    def conjugate(indicator):
        mid = Mat([[eig[i] if (i == j and indicator(i)) else ZERO
                    for j in range(16)] for i in range(16)])
        return b * mid * binv

    sigma = conjugate(lambda i: True)
    p1 = b * Mat([[ONE if (i == j and i < 10) else ZERO for j in range(16)]
                  for i in range(16)]) * binv
    p2 = b * Mat([[ONE if (i == j and 10 <= i < 13) else ZERO
                   for j in range(16)] for i in range(16)]) * binv
    p3 = b * Mat([[ONE if (i == j and 13 <= i) else ZERO for j in range(16)]
                  for i in range(16)]) * binv
    sigma.row_basis = sigma.col_basis = PAIR_LABELS
    return BraidingOperator(sigma, b, binv, (p1, p2, p3))


def build_psym(b):
    """P_sym = ((sigma + q^2)/(1 + q^2)) ((sigma + q^-2)/(1 + q^-2))."""
    q2 = QE * QE
    qi2 = ONE / q2
    i16 = identity(16, PAIR_LABELS)
    f1 = (b.sigma + i16.scale(q2)).scale((ONE + q2).inv())
    f2 = (b.sigma + i16.scale(qi2)).scale((ONE + qi2).inv())
    out = f1 * f2
    out.row_basis = out.col_basis = PAIR_LABELS
    return out


def minimal_polynomial_check(b):
    """(sigma-1)(sigma+q^2)(sigma+q^-2) = 0 and no proper divisor annihilates."""
    q2 = QE * QE
    qi2 = ONE / q2
    i16 = identity(16, PAIR_LABELS)
    f0 = b.sigma - i16
    f1 = b.sigma + i16.scale(q2)
    f2 = b.sigma + i16.scale(qi2)
    full = f0 * f1 * f2
    proper = [f0 * f1, f0 * f2, f1 * f2]
    return full.is_zero() and all(not p.is_zero() for p in proper)


def braid_check(b):
    """(id (x) sigma)(sigma (x) id)(id (x) sigma) = (sigma (x) id)(id (x) sigma)(sigma (x) id).

    Returns (True, None) or (False, witness_triple).
    """
    i4 = identity(4, BASIS)
    s12 = kron(b.sigma, i4)
    s23 = kron(i4, b.sigma)
    lhs = s23 * s12 * s23
    rhs = s12 * s23 * s12
    for col in range(64):
        for row in range(64):
            if lhs.entries[row][col] != rhs.entries[row][col]:
                return False, TRIPLES[col]
    return True, None


# -- wedge space and exterior derivative --------------------------------------

WEDGE_LABELS = tuple(f"f{i}" for i in (1, 2, 3)) + tuple(f"g{i}" for i in (1, 2, 3))


class WedgeSpace:
    """The 6-dimensional model of Lambda^2 spanned by the 0F eigenvectors."""

    def __init__(self, braiding):
        self.braiding = braiding
        self.basis = [braiding.basis_mat.col(i) for i in range(10, 16)]

    def wedge_rep(self, x):
        """Coordinates of wedge(x) in the 0F basis: the non-symmetric part of x."""
        coords = self.braiding.basis_inv * x
        return Vec(coords.coords[10:], WEDGE_LABELS)

    def embed(self, y):
        """The 0F element with the given wedge coordinates (16-dim Vec)."""
        out = linalg.zero_vec(16, PAIR_LABELS)
        for c, v in zip(y.coords, self.basis):
            if c:
                out = out + v.scale(c)
        return out


class ExteriorDerivative:
    def __init__(self, sign, images):
        self.sign = sign
        self.images = images   # 4 Vec over WEDGE_LABELS

    def d(self, i):
        return self.images[i - 1]


def d_basis(sign, wedge):
    """d(w1) = +-sqrt(r) w1^w3, d(w2) = -+(sqrt(r)/q^2) w2^w3,
    d(w3) = +-(sqrt(r)/q) w1^w2, d(w4) = 0."""
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    u = ONE if sign == "plus" else -ONE
    q2 = QE * QE
    images = [
        wedge.wedge_rep(pair_vec({(1, 3): u * SE})),
        wedge.wedge_rep(pair_vec({(2, 3): -u * SE / q2})),
        wedge.wedge_rep(pair_vec({(1, 2): u * SE / QE})),
        Vec([ZERO] * 6, WEDGE_LABELS),
    ]
    return ExteriorDerivative(sign, images)


# -- decomposition identities ---------------------------------------------------

def decomposition_identities(data, braiding):
    """Check the three printed eigenbasis decompositions coefficient-by-coefficient.

    Returns a list of dicts, one per identity, each carrying the computed
    coefficients, the expected (errata) coefficients, the source's printed
    coefficients and the per-coefficient match flags.
    """
    t = data.t_value
    q2 = QE * QE
    c2 = (q2 + ONE) * (q2 + ONE)
    sr = SE
    k = KE
    two = from_int(2)

    # expected coefficients in the order of the 16-column eigenbasis
    # (eigen1 x10, f1..f3, g1..g3); labels name the vectors
    labels = [f"nu{i}" for i in range(1, 11)] + ["f1", "f2", "f3", "g1", "g2", "g3"]

    def expect(d):
        return [d.get(lbl, ZERO) for lbl in labels]

    cases = [
        {
            "target": (1, 3),
            "expected": expect({
                "nu7": two * q2 / c2,
                "nu9": -(q2 * sr) / (k * c2),
                "f2": -(QE * sr) / (t * k * c2),
                "g2": -(QE * sr) / (t * k * c2),
            }),
            "printed": expect({
                "nu7": two * q2 / c2,
                "nu9": -(q2 * sr) / (k * c2),
                "f2": -sr / (t * t * k * c2),
                "g2": -sr / (t * t * k * c2),
            }),
        },
        {
            "target": (2, 3),
            "expected": expect({
                "nu6": two / c2,
                "nu8": -(q2 * q2 * sr) / (k * c2),
                "f1": (q2 * QE * sr) / (t * k * c2),
                "g1": (q2 * QE * sr) / (t * k * c2),
            }),
            "printed": expect({
                "nu6": two / c2,
                "nu8": -(q2 * q2 * sr) / (k * c2),
                "f1": (q2 * sr) / (t * t * k * c2),
                "g1": (q2 * sr) / (t * t * k * c2),
            }),
        },
        {
            "target": (1, 2),
            "expected": expect({
                "nu5": two * q2 / c2,
                "nu3": two * t * q2 / c2,
                "nu10": -(q2 * QE * sr) / (k * c2),
                "f3": -(q2 * sr) / (t * k * c2),
                "g3": -(q2 * sr) / (t * k * c2),
            }),
            "printed": expect({
                "nu5": two * t * q2 / c2,
                "nu3": two * q2 / c2,
                "nu10": -(q2 * QE * sr) / (k * c2),
                "f3": -(q2 * sr) / (t * k * c2),
                "g3": -(q2 * sr) / (t * k * c2),
            }),
        },
    ]

    # decomposition basis: the ten eigenvalue-1 table vectors relabelled by
    # their nu counterparts, then f1..f3, g1..g3
    results = []
    for case in cases:
        target = pair_vec({case["target"]: ONE})
        computed = braiding.basis_inv * target
        rows = []
        ok = True
        printed_ok = True
        for lbl, got, exp, pr in zip(labels, computed.coords,
                                     case["expected"], case["printed"]):
            match = got == exp
            pmatch = got == pr
            ok = ok and match
            printed_ok = printed_ok and pmatch
            if got or exp or pr:
                rows.append({
                    "vector": lbl,
                    "computed": field.elem_str(got),
                    "expected": field.elem_str(exp),
                    "printed": field.elem_str(pr),
                    "match": match,
                    "printed_match": pmatch,
                })
        results.append({
            "target": "w%d(x)w%d" % case["target"],
            "coefficients": rows,
            "pass": ok,
            "printed_pass": printed_ok,
        })
    return results


# -- validation gate ----------------------------------------------------------

def validate_tables(data):
    """Full validation gate.  Raises DataValidationError with a diagnostic
    naming the offending piece of data on any failure."""
    data.validate()
    braiding = build_sigma(data)
    ok, witness = braid_check(braiding)
    if not ok:
        raise BraidFailure(
            f"eigen tables ({data.variant}): braid equation fails; first "
            f"differing triple {witness}")
    psym = build_psym(braiding)
    if psym != braiding.P1:
        raise DataValidationError(
            f"eigen tables ({data.variant}): P_sym formula disagrees with "
            "the eigenvalue-1 projector")
    if not minimal_polynomial_check(braiding):
        raise DataValidationError(
            f"eigen tables ({data.variant}): minimal polynomial check failed")
    for ident in decomposition_identities(data, braiding):
        if not ident["pass"]:
            bad = [r["vector"] for r in ident["coefficients"] if not r["match"]]
            raise DataValidationError(
                f"eigen tables ({data.variant}): decomposition of "
                f"{ident['target']} fails at {bad}")
    return braiding
