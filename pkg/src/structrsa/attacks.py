"""Window-scan factoring attacks on moduli built from structured primes.

Each attack knows only N, the residues r_p and r_q, and the shape. It derives
an integer window that must contain a hidden value (k*), scans it from the
bottom, and turns the first hit into a factorization that is checked exactly
before being reported.
"""

import enum
import time
from dataclasses import dataclass
from typing import Optional

from structrsa.bigmath import gcd, iroot, isqrt, perfect_root, solve_monic_quadratic
from structrsa.shapes import PQ, PSLQS, PSQ, ModulusShape

DEFAULT_BUDGET = 1 << 24


class DegenerateWindowError(ValueError):
    pass


class Status(enum.Enum):
    FACTORED = "factored"
    EXHAUSTED = "exhausted"
    PRECONDITION = "precondition_violated"


@dataclass(frozen=True)
class HintSet:
    r_p: int
    r_q: int
    shape: ModulusShape

    def __post_init__(self):
        if self.r_p < 1 or self.r_q < 1:
            raise ValueError("residue hints must be >= 1")


@dataclass(frozen=True)
class SearchWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.hi < self.lo:
            raise DegenerateWindowError(f"empty window [{self.lo}, {self.hi}]")

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, k: int) -> bool:
        return self.lo <= k <= self.hi


@dataclass(frozen=True)
class AttackOutcome:
    status: Status
    p: Optional[int] = None
    q: Optional[int] = None
    k_hit: Optional[int] = None
    iterations: int = 0
    window: Optional[SearchWindow] = None
    elapsed_ns: int = 0
    reason: Optional[str] = None

    @property
    def factored(self) -> bool:
        return self.status is Status.FACTORED

    def same_result(self, other: "AttackOutcome") -> bool:
        """Equality on every field except elapsed time."""
        return (self.status, self.p, self.q, self.k_hit, self.iterations,
                self.window, self.reason) == (
                    other.status, other.p, other.q, other.k_hit,
                    other.iterations, other.window, other.reason)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def window_pq(N: int, r_p: int, r_q: int) -> SearchWindow:
    """Window for sqrt(a^m1 * b^m2) when N = p*q.

    lo = isqrt(N) - ceil(r_q/2) - r_p - 1, hi = isqrt(N) - isqrt(r_p*r_q) + 1.
    """
    if N < 6 or r_p < 1 or r_q < 1:
        raise ValueError("window_pq needs N >= 6 and positive residues")
    root = isqrt(N)
    lo = max(0, root - _ceil_div(r_q, 2) - r_p - 1)
    hi = root - isqrt(r_p * r_q) + 1
    return SearchWindow(lo, hi)


def window_power_q(N: int, s: int, r_p: int, r_q: int) -> SearchWindow:
    """Window for p * b^(m2/s) when N = p^s * q."""
    if s < 2:
        raise ValueError("window_power_q needs s >= 2")
    root = iroot(N, s)
    lo = max(0, root - _ceil_div(r_q, s) - _ceil_div(r_p * r_q, s) - 1)
    return SearchWindow(lo, root + 1)


def pslqs_spread(s: int, l: int, r_p: int) -> int:
    """ceil(l*(s-l)*(r_p^2 + r_p^3) / (2s)), the second-order term of the Gamma bounds."""
    return _ceil_div(l * (s - l) * (r_p ** 2 + r_p ** 3), 2 * s)


def window_power_power(N: int, s: int, l: int, r_p: int) -> SearchWindow:
    """Window for Gamma = q * a^(m1*l/s) * (p*s + l*r_p) when N = p^(s+l) * q^s."""
    if l < 1 or 2 * l >= s:
        raise ValueError(f"need 1 <= l and 2*l < s, got s={s}, l={l}")
    root = iroot(N, s)
    spread = pslqs_spread(s, l, r_p)
    lo = max(0, s * root - l * r_p ** 2 - spread - s)
    hi = s * (root + 1) + spread + 1
    return SearchWindow(lo, hi)


def verify_factorization(N: int, p: int, q: int, shape: ModulusShape) -> bool:
    if p < 2 or q < 2:
        return False
    return shape.modulus(p, q) == N


def _scan(N: int, window: SearchWindow, budget: int, step, started: int) -> AttackOutcome:
    if window.width > budget:
        return AttackOutcome(
            Status.PRECONDITION, window=window,
            elapsed_ns=time.perf_counter_ns() - started,
            reason=f"window of {window.width} candidates exceeds budget {budget}")
    iterations = 0
    for k in range(window.lo, window.hi + 1):
        iterations += 1
        found = step(k)
        if found is not None:
            p, q = found
            return AttackOutcome(Status.FACTORED, p, q, k, iterations, window,
                                 time.perf_counter_ns() - started)
    return AttackOutcome(Status.EXHAUSTED, iterations=iterations, window=window,
                         elapsed_ns=time.perf_counter_ns() - started)


def _precondition(reason: str, started: int) -> AttackOutcome:
    return AttackOutcome(Status.PRECONDITION, reason=reason,
                         elapsed_ns=time.perf_counter_ns() - started)


def attack_pq(N: int, hints: HintSet, budget: int = DEFAULT_BUDGET) -> AttackOutcome:
    """Factor N = (a^m1 + r_p)(b^m2 + r_q) given r_p, r_q.

    For each k, k^2 stands in for a^m1*b^m2, and the roots of
    X^2 - (N - k^2 - r_p*r_q)X + k^2*r_p*r_q are a^m1*r_q and b^m2*r_p
    at the right k.
    """
    started = time.perf_counter_ns()
    if hints.shape.kind != PQ:
        raise ValueError(f"attack_pq needs shape pq, got {hints.shape}")
    r_p, r_q = hints.r_p, hints.r_q
    try:
        window = window_pq(N, r_p, r_q)
    except ValueError as exc:
        return _precondition(str(exc), started)
    rr = r_p * r_q

    def step(k):
        M = k * k
        S = N - M - rr
        if S <= 0:
            return None
        roots = solve_monic_quadratic(S, M * rr)
        if roots is None:
            return None
        for X in roots:
            if X % r_q == 0:
                p = X // r_q + r_p
                if 1 < p < N and N % p == 0:
                    return p, N // p
            if X % r_p == 0:
                q = X // r_p + r_q
                if 1 < q < N and N % q == 0:
                    return N // q, q
        return None

    return _scan(N, window, budget, step, started)


def attack_power_q(N: int, hints: HintSet, budget: int = DEFAULT_BUDGET) -> AttackOutcome:
    """Factor N = p^s * q: at k = p*b^(m2/s), N - k^s = p^s * r_q."""
    started = time.perf_counter_ns()
    if hints.shape.kind != PSQ:
        raise ValueError(f"attack_power_q needs shape psq, got {hints.shape}")
    s, r_q = hints.shape.s, hints.r_q
    try:
        window = window_power_q(N, s, hints.r_p, r_q)
    except ValueError as exc:
        return _precondition(str(exc), started)
    n_mod = N % r_q

    def step(k):
        # cheap residue test before the full power
        if r_q > 1 and pow(k, s, r_q) != n_mod:
            return None
        D = N - k ** s
        if D <= 0 or D % r_q:
            return None
        p = perfect_root(D // r_q, s)
        if p is None or p < 2:
            return None
        q, rem = divmod(N, p ** s)
        if rem or q < 2:
            return None
        return p, q

    return _scan(N, window, budget, step, started)


def attack_power_power(N: int, hints: HintSet, budget: int = DEFAULT_BUDGET) -> AttackOutcome:
    """Factor N = p^(s+l) * q^s: gcd(N, Gamma) is a power of q."""
    started = time.perf_counter_ns()
    if hints.shape.kind != PSLQS:
        raise ValueError(f"attack_power_power needs shape pslqs, got {hints.shape}")
    s, l = hints.shape.s, hints.shape.l
    try:
        window = window_power_power(N, s, l, hints.r_p)
    except ValueError as exc:
        return _precondition(str(exc), started)

    def step(k):
        g = gcd(N, k)
        if g == 1 or g == N:
            return None
        for r in range(1, s + 1):
            root = perfect_root(g, r)
            if root is None or root < 2:
                continue
            # g as a power of q
            cof, rem = divmod(N, root ** s)
            if not rem:
                p = perfect_root(cof, s + l)
                if p is not None and p >= 2:
                    return p, root
            # g as a power of p
            cof, rem = divmod(N, root ** (s + l))
            if not rem:
                q = perfect_root(cof, s)
                if q is not None and q >= 2:
                    return root, q
        return None

    return _scan(N, window, budget, step, started)


_ATTACKS = {PQ: attack_pq, PSQ: attack_power_q, PSLQS: attack_power_power}


def attack(N: int, hints: HintSet, budget: int = DEFAULT_BUDGET) -> AttackOutcome:
    """Run the attack that matches hints.shape."""
    return _ATTACKS[hints.shape.kind](N, hints, budget)


def window_for(N: int, hints: HintSet) -> SearchWindow:
    shape = hints.shape
    if shape.kind == PQ:
        return window_pq(N, hints.r_p, hints.r_q)
    if shape.kind == PSQ:
        return window_power_q(N, shape.s, hints.r_p, hints.r_q)
    return window_power_power(N, shape.s, shape.l, hints.r_p)
