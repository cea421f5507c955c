"""The (2R)!-dimensional transfer-matrix engine for triangular integrals and
group correlators.

The Gaussian integral over strictly upper triangular J/Jtilde-antisymmetric
matrices of the resolvent basis functions obeys a two-step size recursion:
peeling the first row and last column of a size-n matrix multiplies the
basis vector by a (2R)! x (2R)! matrix Mbar(x, y, alpha, beta), where
(alpha, beta) is the outermost eigenvalue pair.  Iterating down to size 2
(even n) or 1 (odd n) terminates in an explicit initial-condition vector.
Group correlators follow by weighting Mbar factors with exp(+-2 gamma Xk Yj)
inside a matrix-valued determinant and dividing by the det(2cosh)/det(2sinh)
partition determinant.

All vectors and matrices use the basis layout of tetrads.enumerate_classes
(lexicographic in the associated permutation of S_{2R}).

The recursion is derived at coupling 2 gamma = 1.  correlator_vector
therefore evaluates at gamma = 1/2 only; other couplings reduce to this case
through rescale_to_half_coupling, which maps (X, Y, x, y) to
sqrt(2 gamma) * (X, Y, x, y).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .groups import GroupSpectrum
from .tetrads import R_MAX_DEFAULT, enumerate_classes

__all__ = [
    "SingularityError",
    "SpectralPoints",
    "POLE_TOL",
    "recursion_matrix_bar",
    "recursion_matrix_unitary",
    "initial_condition",
    "triangular_expectation",
    "mdet",
    "mdet_apply",
    "commutation_residual",
    "correlator_vector",
    "rescale_to_half_coupling",
]

# a resolvent denominator below this magnitude counts as a pole hit
POLE_TOL = 1e-8


class SingularityError(ArithmeticError):
    """A spectral point collided with an eigenvalue (pole of the formula)."""

    def __init__(self, message, axis=None, index=None, sign=None):
        super().__init__(message)
        self.axis = axis
        self.index = index
        self.sign = sign


@dataclass(frozen=True)
class SpectralPoints:
    """Resolvent arguments {x_1..x_R}, {y_1..y_R} (complex allowed)."""

    x: tuple
    y: tuple

    def __init__(self, x, y):
        xs = tuple(complex(v) for v in _aslist(x))
        ys = tuple(complex(v) for v in _aslist(y))
        if len(xs) != len(ys) or not xs:
            raise ValueError("x and y must be nonempty sequences of equal length")
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "y", ys)

    @property
    def rank(self) -> int:
        return len(self.x)


def _aslist(v):
    if isinstance(v, (int, float, complex)):
        return [v]
    return list(v)


@lru_cache(maxsize=None)
def _class_arrays(r: int, max_rank: int = R_MAX_DEFAULT):
    """Per-class integer arrays: sigma, tau (one-line), s, t signs; (N, R)."""
    cls = enumerate_classes(r, max_rank=max_rank)
    sig = np.array([c.tetrad.sigma for c in cls], dtype=np.int64)
    tau = np.array([c.tetrad.tau for c in cls], dtype=np.int64)
    s = np.array([c.tetrad.s for c in cls], dtype=np.int64)
    t = np.array([c.tetrad.t for c in cls], dtype=np.int64)
    return sig, tau, s, t


def _check_poles(vals, shifts, axis, signs=(1, -1)):
    for i, v in enumerate(vals):
        for sign in signs:
            for shift, sh_sign in shifts:
                if abs(sign * v + shift) < POLE_TOL:
                    raise SingularityError(
                        f"pole: {axis}_{i + 1} with sign {sign:+d} hits "
                        f"{sh_sign}{abs(shift)}",
                        axis=axis, index=i + 1, sign=sign,
                    )


def recursion_matrix_bar(r: int, pts: SpectralPoints, alpha, beta,
                         max_rank: int = R_MAX_DEFAULT) -> np.ndarray:
    """The (2R)! x (2R)! transfer matrix Mbar(x, y, alpha, beta).

    Entry (row class w = {sigma,tau,s,t}, column class w') is the product
    over blacks i of two factors,

        [delta+_i(w,w') + 1/((s(i) x_i + alpha)(t(sigma(i)) y_sigma(i) + beta))]
      * [delta-_i(w,w') + 1/((s(i) x_i - alpha)(t(tau(i))   y_tau(i)   - beta))]

    The delta clauses compare the slot images of the two classes: when
    s(i) = s'(i) the + clause is sigma(i)=sigma'(i) and t(sigma(i)) =
    t'(sigma(i)); when the black signs differ it is sigma(i)=tau'(i) and
    t(sigma(i)) = -t'(tau'(i)) (and symmetrically for the - clause with
    sigma and tau exchanged).
    """
    if pts.rank != r:
        raise ValueError(f"points have rank {pts.rank}, expected {r}")
    alpha = complex(alpha)
    beta = complex(beta)
    x = np.asarray(pts.x)
    y = np.asarray(pts.y)
    _check_poles(pts.x, [(alpha, "+alpha="), (-alpha, "-alpha=")], "x")
    _check_poles(pts.y, [(beta, "+beta="), (-beta, "-beta=")], "y")

    sig, tau, s, t = _class_arrays(r, max_rank)
    n = sig.shape[0]
    t_at_sig = np.take_along_axis(t, sig - 1, axis=1)
    t_at_tau = np.take_along_axis(t, tau - 1, axis=1)
    y_at_sig = y[sig - 1]
    y_at_tau = y[tau - 1]

    f_plus = 1.0 / ((s * x[None, :] + alpha) * (t_at_sig * y_at_sig + beta))
    f_minus = 1.0 / ((s * x[None, :] - alpha) * (t_at_tau * y_at_tau - beta))

    def row(a):
        return a[:, None, :]

    def col(a):
        return a[None, :, :]

    same_s = row(s) == col(s)
    d_plus = np.where(
        same_s,
        (row(sig) == col(sig)) & (row(t_at_sig) == col(t_at_sig)),
        (row(sig) == col(tau)) & (row(t_at_sig) == -col(t_at_tau)),
    )
    d_minus = np.where(
        same_s,
        (row(tau) == col(tau)) & (row(t_at_tau) == col(t_at_tau)),
        (row(tau) == col(sig)) & (row(t_at_tau) == -col(t_at_sig)),
    )
    factors = (d_plus + np.broadcast_to(row(f_plus), (n, n, r))) \
        * (d_minus + np.broadcast_to(row(f_minus), (n, n, r)))
    return factors.prod(axis=2)


def recursion_matrix_unitary(two_r: int, x2, y2, xi, eta) -> np.ndarray:
    """The unitary-case transfer matrix over lexicographic S_{2R}:
    entry (pi, pi') = prod_i [delta_{pi(i),pi'(i)} + 1/((x_i - xi)(y_pi(i) - eta))].
    """
    if two_r % 2:
        raise ValueError("two_r must be even")
    x2 = np.asarray([complex(v) for v in x2])
    y2 = np.asarray([complex(v) for v in y2])
    if len(x2) != two_r or len(y2) != two_r:
        raise ValueError("x2, y2 must have length two_r")
    xi = complex(xi)
    eta = complex(eta)
    # only x_i = xi and y_j = eta are poles here (no sign images)
    _check_poles(x2, [(-xi, "xi=")], "x", signs=(1,))
    _check_poles(y2, [(-eta, "eta=")], "y", signs=(1,))
    perms = np.array(list(itertools.permutations(range(two_r))), dtype=np.int64)
    f = 1.0 / ((x2[None, :] - xi) * (y2[perms] - eta))
    delta = perms[:, None, :] == perms[None, :, :]
    return (delta + f[:, None, :]).prod(axis=2)


def initial_condition(family: str, r: int, pts: SpectralPoints | None = None,
                      max_rank: int = R_MAX_DEFAULT) -> np.ndarray:
    """Recursion terminators as basis vectors.

    family 'j', even sizes (terminates at n=2 -> 0):
        I0 entry = prod(s) prod(t) delta_{sigma,tau}
    family 'jtilde' (even sizes): I0 entry = delta_{sigma,tau}
    family 'j', odd sizes (terminates at n=1, no matrix left): I1 entry =
        prod over cycles of [t(first white) delta_{len 1} + prod_l 1/(x_l y_l)],
    which is the literal basis function evaluated on 1x1 zero matrices and
    needs the spectral points.
    """
    cls = enumerate_classes(r, max_rank=max_rank)
    if family == "j" and pts is None:
        out = np.empty(len(cls), dtype=complex)
        for k, c in enumerate(cls):
            td = c.tetrad
            out[k] = (math.prod(td.s) * math.prod(td.t)
                      if td.sigma == td.tau else 0.0)
        return out
    if family == "jtilde":
        if pts is not None:
            raise ValueError("jtilde sizes are even; no n=1 terminator exists")
        return np.array([1.0 + 0j if c.tetrad.sigma == c.tetrad.tau else 0.0
                         for c in cls])
    if family == "j":
        if pts.rank != r:
            raise ValueError(f"points have rank {pts.rank}, expected {r}")
        out = np.empty(len(cls), dtype=complex)
        for k, c in enumerate(cls):
            val = 1.0 + 0j
            for cyc in c.cycles:
                term = 1.0 + 0j
                for b, w in cyc:
                    term /= pts.x[b - 1] * pts.y[w - 1]
                if len(cyc) == 1:
                    term += c.tetrad.t[cyc[0][1] - 1]
                val *= term
            out[k] = val
        return out
    raise ValueError(f"unknown family {family!r}")


def _spectrum_values(spec):
    if isinstance(spec, GroupSpectrum):
        return list(spec.eigenvalues)
    return [float(v) for v in spec]


def triangular_expectation(family: str, n: int, x_eigs, y_eigs,
                           pts: SpectralPoints,
                           max_rank: int = R_MAX_DEFAULT) -> np.ndarray:
    """Expectation vector of the basis functions over the Gaussian triangular
    ensemble of size n (coupling 2 gamma = 1), arguments i X + T and i Y + T†.

    Equals the ordered product of Mbar(pts, i X_k, i Y_k) over eigenvalue
    pairs applied to the matching initial condition (I0 for even n, I1 for
    odd n).  The factors commute, so the order is immaterial; k = 1..m is
    used deterministically.
    """
    xv = _spectrum_values(x_eigs)
    yv = _spectrum_values(y_eigs)
    m = len(xv)
    if len(yv) != m:
        raise ValueError("x and y eigenvalue lists must have equal length")
    if family == "j":
        if n not in (2 * m, 2 * m + 1):
            raise ValueError(f"family 'j' with {m} eigenvalue pairs needs "
                             f"n in {{{2 * m}, {2 * m + 1}}}, got {n}")
    elif family == "jtilde":
        if n != 2 * m:
            raise ValueError(f"family 'jtilde' needs n = 2m = {2 * m}, got {n}")
    else:
        raise ValueError(f"unknown family {family!r}")
    r = pts.rank
    if family == "j" and n % 2:
        vec = initial_condition("j", r, pts, max_rank=max_rank)
    else:
        vec = initial_condition(family, r, max_rank=max_rank)
    for k in range(m - 1, -1, -1):
        mat = recursion_matrix_bar(r, pts, 1j * xv[k], 1j * yv[k], max_rank=max_rank)
        vec = mat @ vec
    return vec


def commutation_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of [a, b] normalized by ||a|| ||b||."""
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    return float(np.linalg.norm(a @ b - b @ a) / (na * nb))


def _check_grid_commutes(cells, tol=1e-10):
    flat = [c for rowc in cells for c in rowc]
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            a, b = flat[i], flat[j]
            lhs = np.linalg.norm(a @ b - b @ a)
            if lhs > tol * np.linalg.norm(a) * np.linalg.norm(b):
                raise ValueError(
                    f"grid cells {i} and {j} do not commute "
                    f"(residual {lhs:.3e})")


def mdet(grid, check: bool = True) -> np.ndarray:
    """Determinant-shaped sum over permutations with commuting matrix cells.

    grid is an m x m nested sequence of equal-shape square matrices; returns
    sum over permutations sigma of sign(sigma) * prod_k grid[k][sigma(k)],
    itself a matrix.  Cells must pairwise commute (checked by default), which
    makes the factor ordering immaterial.
    """
    cells = [[np.asarray(c) for c in rowc] for rowc in grid]
    m = len(cells)
    if any(len(rowc) != m for rowc in cells):
        raise ValueError("grid must be square")
    if check:
        _check_grid_commutes(cells)
    size = cells[0][0].shape[0]
    out = np.zeros((size, size), dtype=complex)
    for sig in itertools.permutations(range(m)):
        term = np.eye(size, dtype=complex)
        for k in range(m):
            term = term @ cells[k][sig[k]]
        out += _perm_sign(sig) * term
    return out


def mdet_apply(grid, vec, check: bool = True) -> np.ndarray:
    """mdet(grid) @ vec computed with matrix-vector products only."""
    cells = [[np.asarray(c) for c in rowc] for rowc in grid]
    m = len(cells)
    if check:
        _check_grid_commutes(cells)
    out = np.zeros_like(vec, dtype=complex)
    for sig in itertools.permutations(range(m)):
        v = np.asarray(vec, dtype=complex)
        for k in range(m - 1, -1, -1):
            v = cells[k][sig[k]] @ v
        out += _perm_sign(sig) * v
    return out


def _perm_sign(sig) -> int:
    seen = [False] * len(sig)
    sign = 1
    for i in range(len(sig)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = sig[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def rescale_to_half_coupling(x_eigs, y_eigs, pts: SpectralPoints, gamma: float):
    """Map a general-coupling problem to the validated gamma = 1/2 case.

    Scaling (X, Y, x, y) by sqrt(2 gamma) turns the weight
    exp(-gamma tr X Omega Y Omega^T) into exp(-(1/2) tr X' Omega Y' Omega^T)
    while each resolvent picks up the same scale, so the correlation vector
    of the basis functions at the scaled points under the original weight is
    exactly the gamma = 1/2 evaluation at scaled arguments.
    """
    scale = math.sqrt(2.0 * gamma)
    xs = [scale * v for v in _spectrum_values(x_eigs)]
    ys = [scale * v for v in _spectrum_values(y_eigs)]
    pts_s = SpectralPoints([scale * v for v in pts.x], [scale * v for v in pts.y])
    return xs, ys, pts_s


def correlator_vector(family_kind: str, x_eigs, y_eigs, pts: SpectralPoints,
                      gamma: float = 0.5, form: str = "mdet",
                      max_rank: int = R_MAX_DEFAULT) -> np.ndarray:
    """Normalized group correlator of the resolvent basis, as a basis vector.

    Computes <F(X, Omega Y Omega^{-1}) exp(-gamma tr ...)> / <exp(-gamma tr ...)>
    for family_kind in {'o-even', 'o-odd', 'sp'} at gamma = 1/2:

      numerator cell (k, j) = e^{2g Xk Yj} Mbar(pts, iXk, iYj)
                       +(-)  e^{-2g Xk Yj} Mbar(pts, iXk, -iYj)
      vector = mdet(cells) @ I / det(2cosh(2g Xk Yj)) (o-even, +, I0)
                              ... det(2sinh)          (o-odd I1(pts); sp I0~)

    form='weyl' evaluates the equivalent expansion as a sum over sign vectors
    t of sign-weighted single-exponential mdets (used as a cross check).
    Couplings other than 1/2 are refused; use rescale_to_half_coupling.
    """
    if not math.isclose(gamma, 0.5, rel_tol=0, abs_tol=0):
        raise ValueError(
            "the recursion engine is derived at coupling 2*gamma = 1; "
            "map other couplings with rescale_to_half_coupling first")
    xv = _spectrum_values(x_eigs)
    yv = _spectrum_values(y_eigs)
    m = len(xv)
    r = pts.rank
    if family_kind == "o-even":
        ivec = initial_condition("j", r, max_rank=max_rank)
        rel_sign = 1.0
    elif family_kind == "o-odd":
        ivec = initial_condition("j", r, pts, max_rank=max_rank)
        rel_sign = -1.0
    elif family_kind == "sp":
        ivec = initial_condition("jtilde", r, max_rank=max_rank)
        rel_sign = -1.0
    else:
        raise ValueError(f"no correlator for family {family_kind!r}")

    xy = 2.0 * gamma * np.outer(xv, yv)
    den = np.linalg.det(2.0 * np.cosh(xy)) if rel_sign > 0 \
        else np.linalg.det(2.0 * np.sinh(xy))
    if abs(den) < 1e-300:
        raise SingularityError("partition determinant vanishes")

    mats = {}
    for k in range(m):
        for j in range(m):
            mats[(k, j, 1)] = recursion_matrix_bar(
                r, pts, 1j * xv[k], 1j * yv[j], max_rank=max_rank)
            mats[(k, j, -1)] = recursion_matrix_bar(
                r, pts, 1j * xv[k], -1j * yv[j], max_rank=max_rank)

    if form == "mdet":
        cells = [[math.exp(xy[k, j]) * mats[(k, j, 1)]
                  + rel_sign * math.exp(-xy[k, j]) * mats[(k, j, -1)]
                  for j in range(m)] for k in range(m)]
        num = mdet_apply(cells, ivec)
        return num / den
    if form == "weyl":
        total = np.zeros_like(ivec)
        for signs in itertools.product((1, -1), repeat=m):
            weight = math.prod(signs) if rel_sign < 0 else 1.0
            cells = [[math.exp(signs[j] * xy[k, j]) * mats[(k, j, signs[j])]
                      for j in range(m)] for k in range(m)]
            total += weight * mdet_apply(cells, ivec)
        return total / den
    raise ValueError(f"unknown form {form!r}")
