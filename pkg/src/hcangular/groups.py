"""Group families, Cartan spectra, and Weyl-group combinatorics.

A Cartan element of so(2m), so(2m+1) or sp(2m) is parameterized by m real
"eigenvalues" X_1..X_m.  This module owns the family taxonomy, the concrete
matrix embeddings of such elements (real antisymmetric 2x2 blocks,
J-antisymmetric complex diagonals, quaternionic e2 blocks), the generalized
Vandermonde products over positive roots, and the enumeration of the signed
permutations (tau, t) indexing the critical points of the angular integral.

Conventions:
  - J is the antidiagonal flip matrix of size n (J = J^{-1}).
  - Jtilde is the 2m x 2m antidiagonal symplectic form [[0, J], [-J, 0]],
    with Jtilde^{-1} = -Jtilde.
  - quaternion units map to 2x2 complex blocks via e0 -> I, e_j -> -i sigma_j.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpectrumError",
    "GroupFamily",
    "GroupSpectrum",
    "EmbeddedCartan",
    "o_even",
    "o_odd",
    "sp",
    "unitary",
    "flip_matrix",
    "symplectic_flip",
    "quaternion_to_complex",
    "embed",
    "generalized_vandermonde",
    "weyl_elements",
    "COINCIDENCE_RTOL",
]

# Two eigenvalues count as coincident when |Xi^2 - Xj^2| falls below this
# relative threshold; closed forms divide by the Vandermonde and are genuinely
# singular there, so such spectra are rejected rather than perturbed.
COINCIDENCE_RTOL = 1e-12

_FAMILY_KINDS = ("o-even", "o-odd", "sp", "u")


class SpectrumError(ValueError):
    """Raised for invalid spectra: wrong length, zero or coincident eigenvalues."""


@dataclass(frozen=True)
class GroupFamily:
    """A classical compact group family tag plus its rank parameter.

    kind is one of 'o-even' (O(2m)), 'o-odd' (O(2m+1)), 'sp' (Sp(2m), complex
    representation of size 2m) or 'u' (U(n), partition-function cross checks
    only).  rank is m for the first three and n for 'u'.
    """

    kind: str
    rank: int

    def __post_init__(self):
        if self.kind not in _FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.rank < 1:
            raise ValueError("rank must be a positive integer")

    @property
    def matrix_size(self) -> int:
        if self.kind == "o-even":
            return 2 * self.rank
        if self.kind == "o-odd":
            return 2 * self.rank + 1
        if self.kind == "sp":
            return 2 * self.rank
        return self.rank

    @property
    def is_compact_pair(self) -> bool:
        """True for the families handled by the full correlator machinery."""
        return self.kind in ("o-even", "o-odd", "sp")

    def __str__(self):
        return f"{self.kind}(m={self.rank})" if self.kind != "u" else f"u(n={self.rank})"


def o_even(m: int) -> GroupFamily:
    return GroupFamily("o-even", m)


def o_odd(m: int) -> GroupFamily:
    return GroupFamily("o-odd", m)


def sp(m: int) -> GroupFamily:
    return GroupFamily("sp", m)


def unitary(n: int) -> GroupFamily:
    return GroupFamily("u", n)


def _check_distinct_squares(vals, family_kind):
    n = len(vals)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = vals[i], vals[j]
            if family_kind == "u":
                gap = abs(a - b)
                scale = max(1.0, abs(a), abs(b))
            else:
                gap = abs(a * a - b * b)
                scale = max(1.0, a * a, b * b)
            if gap < COINCIDENCE_RTOL * scale:
                raise SpectrumError(
                    f"coincident eigenvalues at positions {i} and {j}: {a} vs {b}"
                )


@dataclass(frozen=True)
class GroupSpectrum:
    """Eigenvalues X_1..X_m of a Cartan element, validated at construction.

    All |X_i| must be pairwise distinct.  For 'o-odd' and 'sp' the eigenvalues
    must additionally be nonzero (the Vandermonde carries a product of X_i).
    For 'u' the n eigenvalues themselves must be distinct.
    """

    family: GroupFamily
    eigenvalues: tuple

    def __init__(self, family: GroupFamily, eigenvalues):
        vals = tuple(float(v) for v in eigenvalues)
        expected = family.rank
        if len(vals) != expected:
            raise SpectrumError(
                f"{family} needs {expected} eigenvalues, got {len(vals)}"
            )
        _check_distinct_squares(vals, family.kind)
        if family.kind in ("o-odd", "sp"):
            for i, v in enumerate(vals):
                if v * v < COINCIDENCE_RTOL * max(1.0, v * v):
                    raise SpectrumError(f"eigenvalue {i} is zero ({v}); "
                                        f"{family.kind} requires nonzero eigenvalues")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "eigenvalues", vals)

    @property
    def m(self) -> int:
        return len(self.eigenvalues)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.eigenvalues, dtype=float)


@dataclass(frozen=True)
class EmbeddedCartan:
    """A concrete matrix realization of a Cartan element.

    kind: 'blocks' (real antisymmetric 2x2 blocks, trailing zero row/column
    for odd sizes), 'j-diagonal' (complex diag(Z, [0,] -Z reversed)), or
    'quaternion' (2x2 complex images of X_j e2, symplectic family only).
    """

    matrix: np.ndarray
    kind: str


def flip_matrix(n: int) -> np.ndarray:
    """The antidiagonal identity J of size n."""
    return np.fliplr(np.eye(n))


def symplectic_flip(n: int) -> np.ndarray:
    """The antidiagonal symplectic form Jtilde of even size n."""
    if n % 2:
        raise ValueError("Jtilde requires even size")
    m = n // 2
    j = flip_matrix(m)
    z = np.zeros((m, m))
    return np.block([[z, j], [-j, z]])


# quaternion units as 2x2 complex blocks, e_j -> -i sigma_j
_E2 = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)


def quaternion_to_complex(q: np.ndarray) -> np.ndarray:
    """Map an (..., m, m, 4)-component real quaternion matrix to its
    (..., 2m, 2m) complex image.

    Each entry q = q0 + q1 e1 + q2 e2 + q3 e3 becomes the block
    [[a, b], [-conj(b), conj(a)]] with a = q0 - i q3, b = -q2 - i q1.
    """
    q = np.asarray(q, dtype=float)
    a = q[..., 0] - 1j * q[..., 3]
    b = -q[..., 2] - 1j * q[..., 1]
    m = q.shape[-2]
    out = np.zeros(q.shape[:-3] + (2 * m, 2 * m), dtype=complex)
    out[..., 0::2, 0::2] = a
    out[..., 0::2, 1::2] = b
    out[..., 1::2, 0::2] = -b.conj()
    out[..., 1::2, 1::2] = a.conj()
    return out


def embed(spec: GroupSpectrum, kind: str) -> EmbeddedCartan:
    """Embed a spectrum as a concrete Cartan matrix of the requested kind."""
    fam = spec.family
    x = spec.as_array()
    m = spec.m
    if kind == "blocks":
        if fam.kind not in ("o-even", "o-odd"):
            raise ValueError(f"'blocks' embedding needs an orthogonal family, got {fam}")
        n = fam.matrix_size
        out = np.zeros((n, n))
        for j, v in enumerate(x):
            out[2 * j, 2 * j + 1] = v
            out[2 * j + 1, 2 * j] = -v
        return EmbeddedCartan(out, kind)
    if kind == "j-diagonal":
        if fam.kind == "u":
            raise ValueError("'j-diagonal' embedding is for the compact pair families")
        if fam.kind == "o-odd":
            diag = np.concatenate([x, [0.0], -x[::-1]])
        else:
            diag = np.concatenate([x, -x[::-1]])
        return EmbeddedCartan(np.diag(diag.astype(complex)), kind)
    if kind == "quaternion":
        if fam.kind != "sp":
            raise ValueError("'quaternion' embedding is only defined for the sp family")
        out = np.zeros((2 * m, 2 * m), dtype=complex)
        for j, v in enumerate(x):
            out[2 * j:2 * j + 2, 2 * j:2 * j + 2] = v * _E2
        return EmbeddedCartan(out, kind)
    raise ValueError(f"unknown embedding kind {kind!r}")


def generalized_vandermonde(spec: GroupSpectrum) -> float:
    """Product of the positive roots evaluated on the spectrum.

    o-even: prod_{i<j} (Xi^2 - Xj^2); o-odd and sp: the same times prod_i Xi;
    u: the ordinary Vandermonde prod_{i<j} (Xi - Xj).
    """
    x = spec.eigenvalues
    kind = spec.family.kind
    out = 1.0
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            if kind == "u":
                out *= x[i] - x[j]
            else:
                out *= x[i] * x[i] - x[j] * x[j]
    if kind in ("o-odd", "sp"):
        out *= math.prod(x)
    return out


def weyl_elements(family: GroupFamily):
    """Enumerate the 2^m m! signed permutations (tau, t, weight).

    tau is a permutation of {1..m} in one-line notation, t a tuple of m signs.
    weight is the signature of tau for 'o-even' and the signature times
    prod(t) for 'o-odd' and 'sp'.
    """
    if family.kind == "u":
        raise ValueError("the unitary Weyl sum is handled inside the "
                         "partition formula; weyl_elements covers o/sp only")
    m = family.rank
    odd_weight = family.kind in ("o-odd", "sp")
    out = []
    for tau in itertools.permutations(range(1, m + 1)):
        eps = _signature(tau)
        for signs in itertools.product((1, -1), repeat=m):
            w = eps * math.prod(signs) if odd_weight else eps
            out.append((tau, signs, w))
    return out


def _signature(perm) -> int:
    """Signature of a permutation given in one-line notation on 1..m."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
