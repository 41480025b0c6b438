"""Minimal linear-recurrence synthesis over a prime field, with integer lift.

Berlekamp-Massey runs modulo a prime; the connection coefficients are then
lifted to signed representatives in (-p/2, p/2] and accepted only when the
lifted recurrence regenerates the whole sample over the integers.  A fixed
prime ladder retries the synthesis when true coefficients overflow p/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .intpoly import Poly, fit_integer_poly
from .sicf import InterlacedClosedForm, SignPattern

PRIME_LADDER = (199, 10**9 + 7, 10**18 + 9)
DEFAULT_BETA_MAX = 16
DEFAULT_DEG_MAX = 3


@dataclass(frozen=True)
class LinearRecurrence:
    """a_j = -sum(connection[i-1] * a_{j-i}) with the given initial terms.

    ``lifted`` records whether the integer lift reproduces the synthesis
    sample exactly; only lifted recurrences may be extended over Z.
    """

    L: int
    connection: tuple[int, ...]
    initial: tuple[int, ...]
    prime: int
    lifted: bool = True

    def __post_init__(self) -> None:
        if len(self.connection) != self.L or len(self.initial) != self.L:
            raise ValueError("connection and initial lists must have length L")


def berlekamp_massey(sample: Sequence[int], prime: int) -> LinearRecurrence:
    """Minimal LFSR for ``sample`` over GF(prime), lifted to signed integers.

    Always returns a register (the trivial one exists); significance is a
    separate judgement via is_significant.
    """
    s = [v % prime for v in sample]
    n = len(s)
    if n < 2:
        raise ValueError("sample too short for synthesis")
    C = [1] + [0] * n
    B = [1] + [0] * n
    L, m, b = 0, 1, 1
    for i in range(n):
        d = s[i]
        for k in range(1, L + 1):
            d = (d + C[k] * s[i - k]) % prime
        if d == 0:
            m += 1
            continue
        coef = d * pow(b, -1, prime) % prime
        if 2 * L <= i:
            T = C[:]
            for k in range(0, n - m + 1):
                C[k + m] = (C[k + m] - coef * B[k]) % prime
            L, B, b, m = i + 1 - L, T, d, 1
        else:
            for k in range(0, n - m + 1):
                C[k + m] = (C[k + m] - coef * B[k]) % prime
            m += 1
    half = prime // 2
    connection = tuple(c - prime if c > half else c for c in (C[k] % prime for k in range(1, L + 1)))
    initial = tuple(int(v) for v in sample[:L])
    rec = LinearRecurrence(L, connection, initial, prime, lifted=True)
    lifted = _reproduces(rec, sample)
    if lifted:
        return rec
    return LinearRecurrence(L, connection, initial, prime, lifted=False)


def _reproduces(rec: LinearRecurrence, sample: Sequence[int]) -> bool:
    if rec.L == 0:
        return all(v == 0 for v in sample)
    window = list(rec.initial)
    for j in range(rec.L, len(sample)):
        nxt = -sum(rec.connection[i] * window[j - 1 - i] for i in range(rec.L))
        if nxt != sample[j]:
            return False
        window.append(nxt)
    return True


def find_recurrence(sample: Sequence[int], primes: Sequence[int] = PRIME_LADDER) -> LinearRecurrence:
    """Berlekamp-Massey through the prime ladder until the lift is sound.

    Falls back to the last (unlifted) register when no prime lifts; callers
    must treat those as non-extendable.
    """
    last: LinearRecurrence | None = None
    for p in primes:
        rec = berlekamp_massey(sample, p)
        if rec.lifted:
            return rec
        last = rec
    assert last is not None
    return last


def is_significant(L: int, n: int) -> bool:
    """A register is meaningful only when its length is under half the sample."""
    return 2 * L < n


def extend_sequence(rec: LinearRecurrence, count: int) -> list[int]:
    """a_0..a_{count-1} by exact integer recursion."""
    if not rec.lifted:
        raise ValueError("recurrence did not lift to the integers; cannot extend")
    out = list(rec.initial[:count])
    while len(out) < count:
        j = len(out)
        out.append(-sum(rec.connection[i] * out[j - 1 - i] for i in range(rec.L)))
    return out


def interlace_decompose(
    rec: LinearRecurrence,
    sample: Sequence[int],
    signs: SignPattern = SignPattern((1,)),
    beta_max: int = DEFAULT_BETA_MAX,
    deg_max: int = DEFAULT_DEG_MAX,
) -> InterlacedClosedForm | None:
    """Split the extended sequence into interlaced integer polynomials.

    The sample is the full extraction output (a_0 first); a_0 and up to one
    period of off-pattern layers move into the head.  Smallest period wins;
    a fit is accepted only when it regenerates three sample-lengths of the
    recurrence's own extension.  Returns None when no polynomial interlace
    exists within the (beta_max, deg_max) budget.
    """
    if not _reproduces(rec, sample):
        raise ValueError("recurrence does not reproduce the sample")
    if not rec.lifted:
        return None
    horizon = 3 * len(sample)
    seq = extend_sequence(rec, max(horizon, len(sample) + 4 * beta_max * (deg_max + 2)))
    signs = signs.reduced()

    for beta_a in range(1, beta_max + 1):
        beta = _lcm(beta_a, signs.period)
        if beta > beta_max:
            continue
        for head_len in range(1, beta + 2):
            fit = _try_fit(seq, head_len, beta, deg_max, horizon)
            if fit is None:
                continue
            A = fit
            B = tuple(Poly.const(signs.sign_at(head_len - 1 + i)) for i in range(1, beta + 1))
            head = [(seq[0], 1)] + [(seq[p], signs.sign_at(p)) for p in range(1, head_len)]
            return InterlacedClosedForm(beta, A, B, tuple(head))
    return None


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _try_fit(seq: Sequence[int], head_len: int, beta: int, deg_max: int, horizon: int) -> tuple[Poly, ...] | None:
    """Fit one polynomial per residue class over positions head_len + ..."""
    polys: list[Poly] = []
    for i in range(beta):
        points = []
        n = 1
        while True:
            pos = head_len + (n - 1) * beta + i
            if pos >= len(seq) or len(points) >= deg_max + 3:
                break
            points.append((n, seq[pos]))
            n += 1
        if len(points) < deg_max + 2:
            return None
        poly = fit_integer_poly(points, deg_max)
        if poly is None:
            return None
        polys.append(poly)
    # verify the fitted form regenerates the extension over the whole horizon
    for pos in range(head_len, min(horizon, len(seq))):
        m = pos - head_len
        n, i = divmod(m, beta)
        if polys[i](n + 1) != seq[pos]:
            return None
    return tuple(polys)
