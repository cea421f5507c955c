import itertools
from pathlib import Path

import numpy as np
import pytest

from hcangular import (Tetrad, canonicalize, cycle_pairs, enumerate_classes,
                       perm_to_tetrad, tetrad_to_perm)

GOLDEN = Path(__file__).parent / "golden" / "basis_r2.txt"


def test_class_counts_and_layout():
    ones = enumerate_classes(1)
    assert len(ones) == 2
    assert ones[0].perm == (1, 2)  # lexicographic minimum is the identity
    assert ones[0].tetrad.t == (1,) and ones[1].tetrad.t == (-1,)
    assert len(enumerate_classes(2)) == 24


def test_rank_guard():
    with pytest.raises(ValueError):
        enumerate_classes(4)
    assert len(perm_to_tetrad(tuple(range(1, 9))).tetrad.sigma) == 4


def test_roundtrip_exhaustive_small():
    for r in (1, 2):
        for pi in itertools.permutations(range(1, 2 * r + 1)):
            cls = perm_to_tetrad(pi)
            assert tetrad_to_perm(cls.tetrad) == pi
            assert cls.perm == pi


def test_roundtrip_random_r3():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        pi = tuple(int(v) for v in rng.permutation(6) + 1)
        assert tetrad_to_perm(perm_to_tetrad(pi).tetrad) == pi


def test_canonicalize_r1():
    flipped = canonicalize(Tetrad((1,), (1,), (-1,), (-1,)))
    assert flipped.s == (1,) and flipped.t == (1,)
    already = Tetrad((1,), (1,), (1,), (-1,))
    assert canonicalize(already) == already


def test_canonicalize_fixed_point_example():
    # sigma = (13)(24), tau = (1)(243), s = (+,+,+,-), t = (+,-,-,+)
    td = Tetrad((3, 4, 1, 2), (1, 4, 2, 3), (1, 1, 1, -1), (1, -1, -1, 1))
    assert canonicalize(td) == td
    cycles = cycle_pairs(td.sigma, td.tau)
    assert cycles == (((1, 3), (4, 2), (3, 1)), ((2, 4),))


def test_canonicalize_orbit_and_idempotence():
    rng = np.random.default_rng(3)
    for r in (2, 3):
        for _ in range(200):
            pi = tuple(int(v) for v in rng.permutation(2 * r) + 1)
            canon = perm_to_tetrad(pi).tetrad
            cycles = cycle_pairs(canon.sigma, canon.tau)
            s = list(canon.s)
            t = list(canon.t)
            for cyc in cycles:
                if rng.random() < 0.5:
                    for b, w in cyc:
                        s[b - 1] *= -1
                        t[w - 1] *= -1
            raw = Tetrad(canon.sigma, canon.tau, tuple(s), tuple(t))
            again = canonicalize(raw)
            assert again == canon
            assert canonicalize(again) == again
            assert cycle_pairs(raw.sigma, raw.tau) == cycles


def test_figure_example_r4():
    # Worked size-4 example: sigma = (1,2,4,3) as a cycle, tau = (1,3)(2)(4),
    # s = (+,-,+,-), t = (+,+,-,-) correspond to pi = (1,2,7,5,6,8,3)(4); any
    # other pairing of the slot images breaks the recursion-matrix
    # identification (black 1's two slots would both land on white 2).
    td = Tetrad((2, 4, 1, 3), (3, 2, 1, 4), (1, -1, 1, -1), (1, 1, -1, -1))
    pi = tetrad_to_perm(td)
    assert pi == (2, 7, 1, 4, 6, 8, 5, 3)
    back = perm_to_tetrad(pi)
    assert back.tetrad == td
    assert back.tetrad.sigma[:4] == (2, 4, 1, 3)
    assert back.tetrad.tau[:4] == (3, 2, 1, 4)
    assert back.tetrad.s[:3] == (1, -1, 1)
    assert back.tetrad.t[:3] == (1, 1, -1)
    # the transcribed cycle itself still roundtrips to a valid class
    printed = [0] * 9
    for a, b in [(1, 2), (2, 6), (6, 8), (8, 7), (7, 5), (5, 3), (3, 1), (4, 4)]:
        printed[a] = b
    printed = tuple(printed[1:])
    assert tetrad_to_perm(perm_to_tetrad(printed).tetrad) == printed


def test_golden_basis_layout_r2():
    lines = [c.describe() for c in enumerate_classes(2)]
    expected = GOLDEN.read_text().strip().splitlines()
    assert lines == expected


def test_tetrad_validation():
    with pytest.raises(ValueError):
        Tetrad((1, 1), (1, 2), (1, 1), (1, 1))
    with pytest.raises(ValueError):
        Tetrad((1, 2), (1, 2), (1, 0), (1, 1))


def test_rainbow_and_slot_labels():
    from hcangular.tetrads import _label, _slot, rainbow

    for r in (1, 2, 3, 4):
        two_r = 2 * r
        for i in range(1, two_r + 1):
            assert rainbow(rainbow(i, two_r), two_r) == i
            assert _label(rainbow(i, two_r), r) == -_label(i, r)
        for lab in list(range(1, r + 1)) + list(range(-r, 0)):
            assert _label(_slot(lab, r), r) == lab
