"""Slow but independent factorizers used to cross-check the attacks."""

from typing import NamedTuple, Optional

from structrsa.bigmath import iroot, isqrt, perfect_root


def trial_division(n: int, bound: int) -> tuple[list[tuple[int, int]], int]:
    """Strip every prime factor <= bound from n.

    Returns ([(prime, multiplicity), ...], cofactor); cofactor is 1 when the
    factorization is complete.
    """
    if n < 2:
        raise ValueError("trial_division needs n >= 2")
    factors = []
    d = 2
    while d <= bound and d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors.append((d, e))
        d += 1 if d == 2 else 2
    # leftover has no factor below d, so it is prime when < d*d
    if 1 < n <= bound:
        factors.append((n, 1))
        n = 1
    return factors, n


def fermat_factor(N: int, max_steps: int) -> Optional[tuple[int, int]]:
    """Find N = (x - y)(x + y) by raising x from ceil(sqrt(N)).

    Returns (p, q) with p <= q, or None when no nontrivial split appears
    within max_steps values of x.
    """
    if N < 9 or N % 2 == 0:
        raise ValueError("fermat_factor needs odd N >= 9")
    x = isqrt(N)
    if x * x < N:
        x += 1
    for _ in range(max_steps):
        y2 = x * x - N
        y = 0 if y2 == 0 else perfect_root(y2, 2)
        if y is not None:
            p, q = x - y, x + y
            return (p, q) if p > 1 else None
        x += 1
    return None


class Representation(NamedTuple):
    a: int
    m: int
    r: int

    @property
    def degenerate(self) -> bool:
        # p = a + r carries no structure an attack can use
        return self.m == 1


def brute_force_structured(p: int, r_max: int, m_max: int) -> list[Representation]:
    """Every (a >= 2, 1 <= m <= m_max, 1 <= r <= r_max) with a**m + r == p."""
    if p < 3:
        raise ValueError("brute_force_structured needs p >= 3")
    found = []
    for m in range(1, m_max + 1):
        for r in range(1, min(r_max, p - 2) + 1):
            a = iroot(p - r, m)
            if a >= 2 and a ** m == p - r:
                found.append(Representation(a, m, r))
    return found
