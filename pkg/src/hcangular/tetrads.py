"""Tetrads, their equivalence classes, and the bijection with S_{2R}.

A tetrad {sigma, tau, s, t} consists of two permutations of {1..R} and two
sign vectors.  It encodes a product of traces of (possibly twisted)
resolvents: following sigma from black vertex i reaches white vertex
sigma(i), and tau^{-1} takes a white vertex to the next black vertex, so the
map i -> tau^{-1}(sigma(i)) decomposes the blacks into cycles.  Two tetrads
are equivalent when they differ by independent global sign flips of whole
cycles; the canonical representative has s = +1 at the smallest black vertex
of every cycle.

Equivalence classes are in bijection with permutations pi of {1..2R}.  Label
the 2R slots by alpha(i) = i for i <= R and alpha(i) = i - (2R+1) for i > R,
and let e(i) = 2R+1-i be the label-negating involution (alpha(e(i)) =
-alpha(i)).  The class {sigma, tau, s, t} corresponds to the unique pi with

    pi(slot of  s(b)*b) = slot of  t(sigma(b)) * sigma(b)
    pi(slot of -s(b)*b) = slot of -t(tau(b))   * tau(b)

for every black b.  This is the index identification under which the
orthogonal/symplectic recursion matrix coincides with the unitary one
evaluated at doubled, sign-extended spectral points.

Permutations are stored in one-line notation (1-based tuples); cycle
notation appears only in display helpers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "Tetrad",
    "TetradClass",
    "R_MAX_DEFAULT",
    "canonicalize",
    "cycle_pairs",
    "tetrad_to_perm",
    "perm_to_tetrad",
    "enumerate_classes",
    "rainbow",
]

# (2R)! growth: R = 3 already gives a 720-dimensional basis.  Larger ranks
# must be requested explicitly via max_rank.
R_MAX_DEFAULT = 3


@dataclass(frozen=True)
class Tetrad:
    """Raw tetrad {sigma, tau, s, t}; permutations in one-line notation."""

    sigma: tuple
    tau: tuple
    s: tuple
    t: tuple

    def __post_init__(self):
        r = len(self.sigma)
        for perm in (self.sigma, self.tau):
            if sorted(perm) != list(range(1, r + 1)):
                raise ValueError(f"not a permutation of 1..{r}: {perm}")
        for signs in (self.s, self.t):
            if len(signs) != r or any(v not in (1, -1) for v in signs):
                raise ValueError(f"signs must be {r} values of +-1: {signs}")

    @property
    def rank(self) -> int:
        return len(self.sigma)


def cycle_pairs(sigma, tau):
    """Cycles of i -> tau^{-1}(sigma(i)) as lists of (black, white) pairs.

    Each cycle starts at its smallest black vertex; cycles are ordered by
    that vertex.  Within a cycle, sigma(black_l) = white_l and
    tau^{-1}(white_l) = black_{l+1} (cyclically).
    """
    r = len(sigma)
    tau_inv = [0] * r
    for i, w in enumerate(tau, start=1):
        tau_inv[w - 1] = i
    seen = [False] * r
    cycles = []
    for start in range(1, r + 1):
        if seen[start - 1]:
            continue
        cyc = []
        b = start
        while not seen[b - 1]:
            seen[b - 1] = True
            w = sigma[b - 1]
            cyc.append((b, w))
            b = tau_inv[w - 1]
        cycles.append(tuple(cyc))
    return tuple(cycles)


def canonicalize(raw: Tetrad) -> Tetrad:
    """Flip cycle signs so the smallest black vertex of each cycle has s=+1.

    A global flip of one cycle negates s on its blacks and t on its whites;
    the basis functions are invariant under such flips, so this picks the
    unique class representative.
    """
    s = list(raw.s)
    t = list(raw.t)
    for cyc in cycle_pairs(raw.sigma, raw.tau):
        if s[cyc[0][0] - 1] == -1:
            for b, w in cyc:
                s[b - 1] = -s[b - 1]
                t[w - 1] = -t[w - 1]
    return Tetrad(raw.sigma, raw.tau, tuple(s), tuple(t))


@dataclass(frozen=True)
class TetradClass:
    """Canonical tetrad together with its cycles and associated pi in S_{2R}."""

    tetrad: Tetrad
    cycles: tuple
    perm: tuple

    @property
    def rank(self) -> int:
        return self.tetrad.rank

    def describe(self) -> str:
        td = self.tetrad
        return (f"pi={self.perm} sigma={td.sigma} tau={td.tau} "
                f"s={_signstr(td.s)} t={_signstr(td.t)}")


def _signstr(signs):
    return "".join("+" if v > 0 else "-" for v in signs)


def rainbow(i: int, two_r: int) -> int:
    """Label-negating involution on slots: e(i) = 2R+1-i."""
    return two_r + 1 - i


def _slot(label: int, r: int) -> int:
    return label if label > 0 else 2 * r + 1 + label


def _label(slot: int, r: int) -> int:
    return slot if slot <= r else slot - (2 * r + 1)


def tetrad_to_perm(raw: Tetrad) -> tuple:
    """The permutation of {1..2R} associated with (the class of) a tetrad."""
    td = canonicalize(raw)
    r = td.rank
    pi = [0] * (2 * r + 1)
    for b in range(1, r + 1):
        sb = td.s[b - 1]
        w_sig = td.sigma[b - 1]
        w_tau = td.tau[b - 1]
        pi[_slot(sb * b, r)] = _slot(td.t[w_sig - 1] * w_sig, r)
        pi[_slot(-sb * b, r)] = _slot(-td.t[w_tau - 1] * w_tau, r)
    return tuple(pi[1:])


def perm_to_tetrad(pi) -> TetradClass:
    """Invert the slot correspondence: recover the canonical tetrad from pi.

    Walks each cycle starting from the smallest unassigned black vertex with
    s = +1: the image of the current black's positive slot gives sigma and
    the white sign, and pulling the negated white label back through pi gives
    tau^{-1} and the next black vertex with its sign.
    """
    pi = tuple(int(v) for v in pi)
    two_r = len(pi)
    if two_r % 2 or sorted(pi) != list(range(1, two_r + 1)):
        raise ValueError(f"not a permutation of 1..2R: {pi}")
    r = two_r // 2
    pi_inv = [0] * (two_r + 1)
    for i, v in enumerate(pi, start=1):
        pi_inv[v] = i
    sigma = [0] * r
    tau = [0] * r
    s = [0] * r
    t = [0] * r
    assigned = [False] * (r + 1)
    while True:
        b0 = next((b for b in range(1, r + 1) if not assigned[b]), None)
        if b0 is None:
            break
        s[b0 - 1] = 1
        assigned[b0] = True
        b = b0
        while True:
            q = pi[_slot(s[b - 1] * b, r) - 1]
            lab = _label(q, r)
            w = abs(lab)
            sigma[b - 1] = w
            t[w - 1] = 1 if lab > 0 else -1
            p = pi_inv[_slot(-t[w - 1] * w, r)]
            lab2 = _label(p, r)
            b_next = abs(lab2)
            tau[b_next - 1] = w
            if b_next == b0:
                # closure always lands on the complementary slot of the
                # cycle opener, consistent with s(b0) = +1
                assert lab2 < 0, (pi, b0)
                break
            s[b_next - 1] = -1 if lab2 > 0 else 1
            assigned[b_next] = True
            b = b_next
    td = Tetrad(tuple(sigma), tuple(tau), tuple(s), tuple(t))
    return TetradClass(td, cycle_pairs(td.sigma, td.tau), pi)


@lru_cache(maxsize=None)
def _enumerate_cached(r: int):
    out = []
    for pi in itertools.permutations(range(1, 2 * r + 1)):
        out.append(perm_to_tetrad(pi))
    return tuple(out)


def enumerate_classes(r: int, max_rank: int = R_MAX_DEFAULT):
    """All (2R)! classes in lexicographic order of pi's one-line notation.

    This ordering is the global basis layout shared by every vector and
    matrix in the recursion engine.  Ranks beyond max_rank are refused
    (factorial growth); pass a larger max_rank to override.
    """
    if r < 1:
        raise ValueError("rank must be positive")
    if r > max_rank:
        raise ValueError(
            f"rank {r} exceeds max_rank={max_rank} ((2R)! basis would have "
            f"{_factorial(2 * r)} elements); pass max_rank explicitly to override"
        )
    return _enumerate_cached(r)


def _factorial(n):
    import math

    return math.factorial(n)
