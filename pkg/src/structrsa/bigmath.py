"""Exact integer primitives shared by the attacks.

Everything here works on Python ints, so there is no overflow at any size.
"""

import functools
import math
import random
from typing import Optional

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
    151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229,
)

# Strong-pseudoprime bases that are exact for every n < 3.3 * 10**24.
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Moduli used to reject non-powers before taking a full root.
_FILTER_MODULI = (64, 63, 65, 11, 17, 19, 23, 37)

DEFAULT_MR_ROUNDS = 40


def isqrt(n: int) -> int:
    """Floor of the square root of n."""
    return math.isqrt(n)


def iroot(n: int, s: int) -> int:
    """Return the largest r with r**s <= n.

    Newton iteration started above the root, followed by a correction
    step so the result is exact regardless of rounding in the iteration.
    """
    if s < 1:
        raise ValueError(f"root index must be >= 1, got {s}")
    if n < 0:
        raise ValueError("iroot of a negative number")
    if n < 2 or s == 1:
        return n
    if s == 2:
        return math.isqrt(n)
    if s >= n.bit_length():
        return 1

    bits = n.bit_length()
    if bits > 128 * s:
        # root of the top half of the digits, rounded up: an upper bound
        # with about half the bits already correct
        k = bits // (2 * s)
        x = (iroot(n >> (s * k), s) + 1) << k
    else:
        x = 1 << ((bits + s - 1) // s)
    while True:
        y = ((s - 1) * x + n // x ** (s - 1)) // s
        if y >= x:
            break
        x = y
    while x ** s > n:
        x -= 1
    while (x + 1) ** s <= n:
        x += 1
    return x


@functools.lru_cache(maxsize=None)
def _power_residues(s: int, m: int) -> frozenset:
    return frozenset(pow(x, s, m) for x in range(m))


def perfect_root(n: int, s: int) -> Optional[int]:
    """Return r with r**s == n, or None when n is not a perfect s-th power."""
    if s < 1:
        raise ValueError(f"root index must be >= 1, got {s}")
    if n < 0:
        return None
    if n < 2 or s == 1:
        return n
    for m in _FILTER_MODULI:
        if n % m not in _power_residues(s, m):
            return None
    r = iroot(n, s)
    return r if r ** s == n else None


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def _strong_probable_prime(n: int, base: int, d: int, r: int) -> bool:
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = DEFAULT_MR_ROUNDS) -> bool:
    """Miller-Rabin primality test.

    Exact for n < 2**64 (fixed witness set). Above that, `rounds` witnesses
    drawn from a generator seeded by n, so the verdict for a given n never
    changes between runs. A False answer is always correct.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False

    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1

    if n < (1 << 64):
        bases = _DETERMINISTIC_BASES
    else:
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(rounds)]
    return all(_strong_probable_prime(n, a, d, r) for a in bases)


def solve_monic_quadratic(S: int, C: int) -> Optional[tuple[int, int]]:
    """Integer roots of X**2 - S*X + C = 0.

    Returns (X1, X2) with X1 <= X2 when both roots are integers, else None.
    """
    D = S * S - 4 * C
    if D < 0:
        return None
    root = 0 if D == 0 else perfect_root(D, 2)
    if root is None or (S - root) % 2:
        return None
    return (S - root) // 2, (S + root) // 2
