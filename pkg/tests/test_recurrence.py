import random

import pytest

from cfconj.intpoly import Poly
from cfconj.recurrence import (
    PRIME_LADDER,
    LinearRecurrence,
    berlekamp_massey,
    extend_sequence,
    find_recurrence,
    interlace_decompose,
    is_significant,
)
from cfconj.sicf import SignPattern, to_general_cf


def test_bm_e_pattern():
    sample = [1, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8, 1, 1, 10, 1, 1, 12]
    rec = berlekamp_massey(sample, 199)
    assert rec.L == 6
    assert rec.connection == (0, 0, -2, 0, 0, 1)  # a_j = 2 a_{j-3} - a_{j-6}
    assert rec.lifted


def test_bm_constant_sequence():
    rec = berlekamp_massey([5] * 8, 199)
    assert rec.L == 1 and rec.connection == (-1,)


def test_bm_fibonacci():
    rec = berlekamp_massey([1, 1, 2, 3, 5, 8, 13, 21, 34, 55], 199)
    assert rec.L == 2 and rec.connection == (-1, -1)
    assert extend_sequence(rec, 12)[-1] == 144


def _minimal_length_gaussian(sample, p):
    """Independent oracle: smallest l with a length-l recurrence matching the
    whole sample over GF(p), by solving the linear system directly."""
    n = len(sample)
    s = [v % p for v in sample]
    for length in range(0, n // 2 + 1):
        # unknowns c_1..c_length:  s[j] + sum c_i s[j-i] = 0 for j >= length
        rows = []
        rhs = []
        for j in range(length, n):
            rows.append([s[j - i] % p for i in range(1, length + 1)])
            rhs.append((-s[j]) % p)
        if _solve_mod(rows, rhs, p) is not None:
            return length
    return n


def _solve_mod(rows, rhs, p):
    if not rows or not rows[0]:
        return [] if all(v == 0 for v in rhs) else (None if rhs else [])
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    cols = len(rows[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(v * inv) % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [(a - factor * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(m)):
        if m[i][cols] % p:
            return None
    out = [0] * cols
    for i, c in enumerate(pivots):
        out[c] = m[i][cols]
    return out


def test_bm_minimality_against_gaussian_oracle():
    """Exact recovery of known LFSRs, conditioned on true minimality by an
    independent linear-algebra oracle."""
    rng = random.Random(31337)
    p = 199
    recovered = 0
    trials = 0
    while recovered < 500 and trials < 2000:
        trials += 1
        L = rng.randint(1, 10)
        connection = [rng.randrange(p) for _ in range(L)]
        initial = [rng.randrange(p) for _ in range(L)]
        seq = initial[:]
        for j in range(L, 2 * L + 10):
            seq.append((-sum(connection[i] * seq[j - 1 - i] for i in range(L))) % p)
        if _minimal_length_gaussian(seq, p) != L:
            continue  # degenerate draw: a shorter register generates it
        rec = berlekamp_massey(seq, p)
        assert rec.L == L
        assert tuple(c % p for c in rec.connection) == tuple(connection)
        recovered += 1
    assert recovered == 500


def test_significance_rule():
    assert is_significant(6, 50)
    assert not is_significant(25, 50)
    assert is_significant(0, 1)
    assert not is_significant(26, 50)


def test_false_positive_rarity_on_random_samples():
    rng = random.Random(7)
    hits = 0
    trials = 2000
    for _ in range(trials):
        sample = [rng.randint(0, 10**6) for _ in range(50)]
        rec = berlekamp_massey(sample, 199)
        if is_significant(rec.L, 50) and rec.lifted:
            hits += 1
    assert hits / trials < 0.01


def test_extend_examples():
    rec = LinearRecurrence(2, (-2, 1), (3, 5), 199)
    assert extend_sequence(rec, 6) == [3, 5, 7, 9, 11, 13]
    rec1 = LinearRecurrence(1, (-1,), (7,), 199)
    assert extend_sequence(rec1, 4) == [7, 7, 7, 7]
    rec2 = LinearRecurrence(4, (0, -2, 0, 1), (2, 40, 3, 56), 199)
    assert extend_sequence(rec2, 8) == [2, 40, 3, 56, 4, 72, 5, 88]


def test_prime_ladder_lifts_large_coefficients():
    # a_j = 150 a_{j-1} truncates badly at p = 199 (150 > p/2 lifts to -49)
    seq = [1]
    for _ in range(11):
        seq.append(150 * seq[-1])
    small = berlekamp_massey(seq, 199)
    assert not small.lifted
    rec = find_recurrence(seq)
    assert rec.lifted and rec.connection == (-150,)
    assert rec.prime == PRIME_LADDER[1]


def test_unlifted_recurrence_cannot_extend():
    seq = [1]
    for _ in range(11):
        seq.append(150 * seq[-1])
    rec = berlekamp_massey(seq, 199)
    with pytest.raises(ValueError):
        extend_sequence(rec, 20)


def test_decompose_interlaced_pair():
    rec = LinearRecurrence(4, (0, -2, 0, 1), (2, 40, 3, 56), 199)
    sample = extend_sequence(rec, 12)
    form = interlace_decompose(rec, sample, SignPattern((-1,)))
    assert form is not None
    assert form.beta == 2
    assert form.head == ((2, 1),)
    assert form.A == (Poly((24, 16)), Poly((2, 1)))
    assert all(b.constant_value() == -1 for b in form.B)


def test_decompose_arithmetic_progression():
    rec = LinearRecurrence(2, (-2, 1), (3, 5), 199)
    sample = extend_sequence(rec, 10)
    form = interlace_decompose(rec, sample)
    assert form is not None
    assert form.beta == 1
    assert form.head == ((3, 1),)
    assert form.A == (Poly((3, 2)),)  # layer stream 5, 7, 9, ... is 2n + 3


def test_decompose_regenerates_triple_length():
    rec = LinearRecurrence(6, (0, 0, -2, 0, 0, 1), (1, 1, 2, 1, 1, 4), 199)
    sample = extend_sequence(rec, 18)
    form = interlace_decompose(rec, sample)
    assert form is not None
    stream = to_general_cf(form)
    want = extend_sequence(rec, 3 * len(sample))
    got = [stream.a0] + [a for (a, _), _ in zip(stream.layers(), range(3 * len(sample) - 1))]
    assert got == want


def test_decompose_rejects_non_polynomial():
    # geometric growth has a recurrence but no polynomial interlace
    seq = [3 * 2**k for k in range(16)]
    rec = find_recurrence(seq)
    assert rec.lifted and rec.L == 1
    assert interlace_decompose(rec, seq) is None


def test_decompose_sign_alignment_with_period():
    rec = LinearRecurrence(2, (-2, 1), (3, 5), 199)
    sample = extend_sequence(rec, 10)
    form = interlace_decompose(rec, sample, SignPattern((1, -1)))
    assert form is not None
    assert form.beta == 2  # lcm of the a-period 1 and the sign period 2
    signs = [b.constant_value() for b in form.B]
    assert signs == [SignPattern((1, -1)).sign_at(1 + i) for i in range(2)]
