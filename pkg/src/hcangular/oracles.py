"""Independent verification machinery: explicit basis-function evaluation,
Haar samplers, Gaussian triangular samplers, Monte Carlo estimators, and an
exact Wick-pairing enumerator.

Nothing here touches the recursion engine; agreement between the two routes
is the correctness argument for both.

Randomness: all samplers run on numpy's counter-based Philox generator keyed
by (seed, shard).  Estimators consume samples in fixed-size shards
(SHARD_SIZE), each with its own stream, and combine running sums, so a
result depends only on (seed, shard partition) and is reproducible
bit-for-bit on a single thread.  Shards could be evaluated concurrently and
merged in index order without changing the result.

Error bars: plain averages report stderr = sample std / sqrt(samples).
Ratio estimators r = mean(N)/mean(D) use the delta method,
    stderr^2 = (Var N - 2 Re conj(r) Cov(N, D) + |r|^2 Var D) / (n Dbar^2),
with sample (co)variances; for complex N this is the standard error of |r's|
combined real/imaginary fluctuation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .groups import (GroupSpectrum, embed, flip_matrix, quaternion_to_complex,
                     symplectic_flip)
from .recursion import SpectralPoints
from .tetrads import TetradClass

__all__ = [
    "McEstimate",
    "TriangularSample",
    "SHARD_SIZE",
    "philox_generator",
    "haar_orthogonal",
    "haar_symplectic",
    "sample_triangular",
    "triangular_propagator",
    "wick_enumerate",
    "basis_eval",
    "basis_eval_signed",
    "twist_cycle_signs",
    "mc_group_partition",
    "mc_group_correlator",
    "mc_triangular_expectation",
]

# fixed shard size; the (seed, shard index) pair keys each Philox stream
SHARD_SIZE = 65536


@dataclass(frozen=True)
class McEstimate:
    mean: complex
    stderr: float
    samples: int
    seed: int

    def z_score(self, reference) -> float:
        gap = abs(complex(reference) - self.mean)
        if self.stderr == 0.0:
            # zero-variance estimators (e.g. a trivial integration domain)
            return 0.0 if gap < 1e-12 else math.inf
        return gap / self.stderr


@dataclass(frozen=True)
class TriangularSample:
    """One strictly upper triangular J/Jtilde-antisymmetric Gaussian draw."""

    matrix: np.ndarray
    family: str


def philox_generator(seed: int, shard: int = 0) -> np.random.Generator:
    """Counter-based generator for shard `shard` of stream `seed`."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, shard & 0xFFFFFFFFFFFFFFFF],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


# ---------------------------------------------------------------------------
# Haar samplers
# ---------------------------------------------------------------------------

def _haar_orthogonal_batch(n: int, size: int, rng) -> np.ndarray:
    g = rng.standard_normal((size, n, n))
    q, r = np.linalg.qr(g)
    d = np.einsum("...ii->...i", r)
    # sign-correct the QR so the distribution is exactly Haar on O(n)
    return q * np.sign(d)[:, None, :]


def haar_orthogonal(n: int, seed: int, size: int | None = None) -> np.ndarray:
    """Haar-distributed O(n) matrix (or a (size, n, n) batch) via QR of a
    real Gaussian with R-diagonal sign correction."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = philox_generator(seed)
    batch = _haar_orthogonal_batch(n, size or 1, rng)
    return batch if size is not None else batch[0]


def _haar_symplectic_quaternion(m: int, size: int, rng) -> np.ndarray:
    """Gram-Schmidt in quaternion arithmetic on an m x m quaternion Gaussian;
    returns (size, m, m, 4) components with Q^dagger Q = 1 exactly in
    quaternion arithmetic (up to rounding)."""
    q = rng.standard_normal((size, m, m, 4))
    for j in range(m):
        for k in range(j):
            coef = _qmul(_qconj(q[:, :, k, :]), q[:, :, j, :]).sum(axis=1)
            q[:, :, j, :] -= _qmul(q[:, :, k, :], coef[:, None, :])
        norm = np.sqrt((q[:, :, j, :] ** 2).sum(axis=(1, 2)))
        q[:, :, j, :] /= norm[:, None, None]
    return q


def _qmul(a, b):
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ], axis=-1)


def _qconj(a):
    out = a.copy()
    out[..., 1:] *= -1.0
    return out


def haar_symplectic(m: int, seed: int, size: int | None = None) -> np.ndarray:
    """Haar-distributed Sp(2m) matrix in the 2m x 2m complex quaternionic
    representation (or a (size, 2m, 2m) batch)."""
    if m < 1:
        raise ValueError("m must be positive")
    rng = philox_generator(seed)
    q = _haar_symplectic_quaternion(m, size or 1, rng)
    out = quaternion_to_complex(q)
    return out if size is not None else out[0]


# ---------------------------------------------------------------------------
# Gaussian triangular ensembles (coupling 2 gamma = 1)
# ---------------------------------------------------------------------------

def _jtilde_mirror_sign(i: int, j: int, n: int) -> float:
    # T[i, j] determines T[n-1-j, n-1-i] (0-based) with this sign
    m = n // 2
    eps_row = 1.0 if i < m else -1.0
    eps_col = 1.0 if j >= m else -1.0
    return eps_row * eps_col


def _independent_entries(family: str, n: int):
    """(i, j, variance) for the independent strictly-upper entries, 0-based."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            mirror_sum = i + j  # antidiagonal is i + j == n - 1
            if mirror_sum < n - 1:
                out.append((i, j, 1.0))
            elif mirror_sum == n - 1 and family == "jtilde":
                out.append((i, j, 2.0))
    return out


def _sample_triangular_batch(family: str, n: int, size: int, rng) -> np.ndarray:
    t = np.zeros((size, n, n), dtype=complex)
    for i, j, var in _independent_entries(family, n):
        z = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) \
            * math.sqrt(var / 2.0)
        t[:, i, j] = z
        if i + j < n - 1:
            if family == "j":
                t[:, n - 1 - j, n - 1 - i] = -z
            else:
                t[:, n - 1 - j, n - 1 - i] = _jtilde_mirror_sign(i, j, n) * z
    return t


def sample_triangular(family: str, n: int, seed: int,
                      size: int | None = None):
    """Draw from the Gaussian ensemble on strictly upper triangular
    J/Jtilde-antisymmetric complex matrices with weight exp(-(1/2) tr T†T).

    Independent entries are standard complex Gaussians (<|T_1i|^2> = 1); the
    self-mirrored antidiagonal entries of the 'jtilde' family carry variance
    2, and the 'j' antidiagonal vanishes identically.
    """
    if family not in ("j", "jtilde"):
        raise ValueError(f"unknown family {family!r}")
    if family == "jtilde" and n % 2:
        raise ValueError("jtilde requires even size")
    rng = philox_generator(seed)
    batch = _sample_triangular_batch(family, n, size or 1, rng)
    if size is not None:
        return batch
    return TriangularSample(batch[0], family)


def _entry_rep(family: str, n: int, i: int, j: int):
    """(representative (i,j), coefficient, variance) of a 1-based upper entry."""
    i0, j0 = i - 1, j - 1
    if not (0 <= i0 < j0 < n):
        raise ValueError(f"entry ({i},{j}) is not strictly upper triangular")
    if i0 + j0 < n - 1:
        return (i0, j0), 1.0, 1.0
    if i0 + j0 == n - 1:
        if family == "j":
            return (i0, j0), 0.0, 0.0
        return (i0, j0), 1.0, 2.0
    ri, rj = n - 1 - j0, n - 1 - i0
    if family == "j":
        coeff = -1.0
    else:
        coeff = _jtilde_mirror_sign(ri, rj, n)
    if ri + rj == n - 1:
        var = 0.0 if family == "j" else 2.0
    else:
        var = 1.0
    return (ri, rj), coeff, var


def triangular_propagator(family: str, n: int, ij, kl) -> float:
    """Exact second moment <T_{ij} T†_{kl}> = <T_{ij} conj(T_{lk})> (1-based)."""
    rep1, c1, v1 = _entry_rep(family, n, *ij)
    rep2, c2, v2 = _entry_rep(family, n, kl[1], kl[0])
    if rep1 != rep2:
        return 0.0
    return c1 * c2 * v1


def wick_enumerate(word, family: str, n: int) -> complex:
    """Exact Gaussian moment of a word of T / T† entries by Wick pairing.

    word is a sequence of (kind, i, j) with kind 'T' or 'Td' and 1-based
    indices into the strictly upper triangle.  Only T-with-T† pairings carry
    weight; the moment is the permanent-style sum over all such matchings of
    products of exact propagators.
    """
    word = list(word)
    if len(word) % 2:
        raise ValueError("word length must be even")
    t_pos = [(i, j) for kind, i, j in word if kind == "T"]
    td_pos = [(i, j) for kind, i, j in word if kind == "Td"]
    if len(t_pos) != len(td_pos):
        return 0.0 + 0j  # unpaired holomorphic factors always average to zero
    total = 0.0
    for match in itertools.permutations(range(len(td_pos))):
        prod = 1.0
        for a, b in enumerate(match):
            prod *= triangular_propagator(family, n, t_pos[a], td_pos[b])
            if prod == 0.0:
                break
        total += prod
    return complex(total)


# ---------------------------------------------------------------------------
# Basis-function evaluation
# ---------------------------------------------------------------------------

def _resolvent(z, a):
    """(z - a)^{-1} via LU solves against identity columns; a is (..., n, n)."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[-1]
    lhs = z * np.eye(n, dtype=complex) - a
    # rhs must match lhs.ndim so numpy solves matrix-vs-matrix, not a vector stack
    rhs = np.broadcast_to(np.eye(n, dtype=complex), lhs.shape)
    return np.linalg.solve(lhs, rhs)


def _flip_for(family: str, n: int) -> np.ndarray:
    return flip_matrix(n) if family == "j" else symplectic_flip(n)


def basis_eval(cls: TetradClass, pts: SpectralPoints, a, b, family: str):
    """Literal product-of-traces basis function on matrices a, b.

    Each cycle contributes its additive term (t(first white) for 'j', 1 for
    'jtilde', length-1 cycles only) plus the trace of the alternating product
    of x- and y-resolvents, transposed where the attached sign is -1 and with
    a J/Jtilde inserted at every sign change along the cycle.

    a may be a single (n, n) matrix or a (..., n, n) batch, b likewise;
    returns a scalar or the broadcast batch of values.  This is the form
    whose arguments are J/Jtilde-antisymmetric; for plain antisymmetric or
    quaternionic group-side arguments use basis_eval_signed.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = a.shape[-1]
    jmat = _flip_for(family, n).astype(complex)
    td = cls.tetrad
    batch = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    val = np.ones(batch, dtype=complex) if batch else np.ones((), dtype=complex)
    rx = {}
    ry = {}
    for bk, wh in {p for cyc in cls.cycles for p in cyc}:
        if bk not in rx:
            rx[bk] = _resolvent(pts.x[bk - 1], a)
        if wh not in ry:
            ry[wh] = _resolvent(pts.y[wh - 1], b)
    eye = np.eye(n, dtype=complex)
    for cyc in cls.cycles:
        prod = np.broadcast_to(eye, batch + (n, n)).copy() if batch else eye.copy()
        for l, (bk, wh) in enumerate(cyc):
            fx = rx[bk]
            if td.s[bk - 1] == -1:
                fx = np.swapaxes(fx, -1, -2)
            prod = prod @ fx
            if td.s[bk - 1] != td.t[wh - 1]:
                prod = prod @ jmat
            fy = ry[wh]
            if td.t[wh - 1] == -1:
                fy = np.swapaxes(fy, -1, -2)
            prod = prod @ fy
            s_next = td.s[cyc[(l + 1) % len(cyc)][0] - 1]
            if td.t[wh - 1] != s_next:
                prod = prod @ jmat
        term = np.einsum("...ii->...", prod)
        if len(cyc) == 1:
            term = term + (td.t[cyc[0][1] - 1] if family == "j" else 1.0)
        val = val * term
    return val if batch else complex(val)


def twist_cycle_signs(cls: TetradClass, family: str):
    """Per-cycle constants relating the literal form to the signed-resolvent
    form: c_k = (-1)^{# negative signs} * eps^{# (-,+) sign junctions},
    with eps = +1 for 'j' (J^2 = 1) and -1 for 'jtilde' (Jtilde^2 = -1).
    """
    eps = 1.0 if family == "j" else -1.0
    td = cls.tetrad
    out = []
    for cyc in cls.cycles:
        signs = []
        for bk, wh in cyc:
            signs.append(td.s[bk - 1])
            signs.append(td.t[wh - 1])
        neg = sum(1 for v in signs if v < 0)
        junctions = sum(
            1 for k in range(len(signs))
            if signs[k] < 0 and signs[(k + 1) % len(signs)] > 0
        )
        out.append((-1.0) ** neg * eps ** junctions)
    return tuple(out)


def basis_eval_signed(cls: TetradClass, pts: SpectralPoints, a, b, family: str):
    """Basis function in the sign-flipped resolvent form, valid on arbitrary
    matrix arguments:

        prod over cycles of [additive + c_k tr prod_l (s x - a)^{-1} (t y - b)^{-1}]

    On J/Jtilde-antisymmetric arguments this equals basis_eval exactly (the
    transpose-plus-insertion gymnastics reduce to argument sign flips); on
    group-side arguments (plain antisymmetric, or quaternionic for 'jtilde')
    it is the invariant-polynomial extension that the angular integrals pair
    with.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = a.shape[-1]
    td = cls.tetrad
    batch = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    val = np.ones(batch, dtype=complex) if batch else np.ones((), dtype=complex)
    rx = {}
    ry = {}
    signs = twist_cycle_signs(cls, family)
    eye = np.eye(n, dtype=complex)
    for ck, cyc in zip(signs, cls.cycles):
        prod = np.broadcast_to(eye, batch + (n, n)).copy() if batch else eye.copy()
        for bk, wh in cyc:
            key = (bk, td.s[bk - 1])
            if key not in rx:
                rx[key] = _resolvent(td.s[bk - 1] * pts.x[bk - 1], a)
            kyy = (wh, td.t[wh - 1])
            if kyy not in ry:
                ry[kyy] = _resolvent(td.t[wh - 1] * pts.y[wh - 1], b)
            prod = prod @ rx[key] @ ry[kyy]
        term = ck * np.einsum("...ii->...", prod)
        if len(cyc) == 1:
            term = term + (td.t[cyc[0][1] - 1] if family == "j" else 1.0)
        val = val * term
    return val if batch else complex(val)


# ---------------------------------------------------------------------------
# Monte Carlo estimators
# ---------------------------------------------------------------------------

def _shards(samples: int):
    done = 0
    shard = 0
    while done < samples:
        take = min(SHARD_SIZE, samples - done)
        yield shard, take
        done += take
        shard += 1


def _group_setup(x: GroupSpectrum, y: GroupSpectrum):
    fam = x.family
    if fam.kind in ("o-even", "o-odd"):
        xa = embed(x, "blocks").matrix.astype(complex)
        ya = embed(y, "blocks").matrix
        return fam, xa, ya, "j"
    if fam.kind == "sp":
        xa = embed(x, "quaternion").matrix
        ya = embed(y, "quaternion").matrix
        return fam, xa, ya, "jtilde"
    raise ValueError(f"no sampler for family {fam}")


def _group_batch(fam, ya, take, rng):
    if fam.kind in ("o-even", "o-odd"):
        omega = _haar_orthogonal_batch(fam.matrix_size, take, rng)
        rotated = np.einsum("sij,jk,slk->sil", omega, ya, omega, optimize=True)
    else:
        q = _haar_symplectic_quaternion(fam.rank, take, rng)
        omega = quaternion_to_complex(q)
        rotated = np.einsum("sij,jk,slk->sil", omega, ya, omega.conj(),
                            optimize=True)
    return rotated


def mc_group_partition(x: GroupSpectrum, y: GroupSpectrum, gamma: float,
                       samples: int, seed: int) -> McEstimate:
    """Haar-measure Monte Carlo of <exp(-gamma tr(X Omega Y Omega^{-1}))>."""
    fam, xa, ya, _ = _group_setup(x, y)
    total = 0.0
    total_sq = 0.0
    for shard, take in _shards(samples):
        rng = philox_generator(seed, shard)
        rotated = _group_batch(fam, ya, take, rng)
        tr = np.einsum("ij,sji->s", xa, rotated).real
        w = np.exp(-gamma * tr)
        total += w.sum()
        total_sq += (w * w).sum()
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    stderr = math.sqrt(var / samples)
    return McEstimate(complex(mean), stderr, samples, seed)


def mc_group_correlator(x: GroupSpectrum, y: GroupSpectrum,
                        pts: SpectralPoints, cls: TetradClass, gamma: float,
                        samples: int, seed: int) -> McEstimate:
    """Ratio estimator of the normalized basis-function correlator
    <F exp(-gamma tr)> / <exp(-gamma tr)> over the group's Haar measure."""
    fam, xa, ya, tri_family = _group_setup(x, y)
    s_n = 0.0 + 0j
    s_d = 0.0
    s_nn = 0.0
    s_dd = 0.0
    s_nd = 0.0 + 0j
    for shard, take in _shards(samples):
        rng = philox_generator(seed, shard)
        rotated = _group_batch(fam, ya, take, rng)
        tr = np.einsum("ij,sji->s", xa, rotated).real
        w = np.exp(-gamma * tr)
        f = basis_eval_signed(cls, pts, xa, rotated, tri_family)
        num = f * w
        s_n += num.sum()
        s_d += w.sum()
        s_nn += (num * num.conj()).real.sum()
        s_dd += (w * w).sum()
        s_nd += (num * w).sum()
    n = samples
    mean_n = s_n / n
    mean_d = s_d / n
    r = mean_n / mean_d
    var_n = max(s_nn / n - abs(mean_n) ** 2, 0.0)
    var_d = max(s_dd / n - mean_d ** 2, 0.0)
    cov_nd = s_nd / n - mean_n * mean_d
    var_r = (var_n - 2.0 * (np.conj(r) * cov_nd).real + abs(r) ** 2 * var_d) \
        / (n * mean_d ** 2)
    stderr = math.sqrt(max(var_r, 0.0))
    return McEstimate(complex(r), stderr, samples, seed)


def mc_triangular_expectation(family: str, n: int, x_eigs, y_eigs,
                              pts: SpectralPoints, cls: TetradClass,
                              samples: int, seed: int) -> McEstimate:
    """Monte Carlo of <F(pts; iX + T, iY + T†)> over the Gaussian triangular
    ensemble (coupling 2 gamma = 1)."""
    from .recursion import _spectrum_values

    xv = _spectrum_values(x_eigs)
    yv = _spectrum_values(y_eigs)
    if family == "j" and n % 2:
        zx = np.concatenate([xv, [0.0], -np.asarray(xv)[::-1]])
        zy = np.concatenate([yv, [0.0], -np.asarray(yv)[::-1]])
    else:
        zx = np.concatenate([xv, -np.asarray(xv)[::-1]])
        zy = np.concatenate([yv, -np.asarray(yv)[::-1]])
    if len(zx) != n:
        raise ValueError(f"eigenvalue count does not match size {n}")
    ax = 1j * np.diag(zx)
    by = 1j * np.diag(zy)
    total = 0.0 + 0j
    total_sq = 0.0
    for shard, take in _shards(samples):
        rng = philox_generator(seed, shard)
        t = _sample_triangular_batch(family, n, take, rng)
        a = ax[None, :, :] + t
        b = by[None, :, :] + np.swapaxes(t, -1, -2).conj()
        f = basis_eval(cls, pts, a, b, family)
        total += f.sum()
        total_sq += (f * f.conj()).real.sum()
    mean = total / samples
    var = max(total_sq / samples - abs(mean) ** 2, 0.0)
    stderr = math.sqrt(var / samples)
    return McEstimate(complex(mean), stderr, samples, seed)
