"""Generation of deliberately weak keys with structured primes p = a**m + r.

Every generated key satisfies the hypotheses its attack relies on, so the
attacks can be checked against known factors. Keys round-trip through a
flat JSON object whose values are all decimal strings.
"""

import dataclasses
import json
import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

from structrsa.bigmath import iroot, is_probable_prime, perfect_root
from structrsa.shapes import PQ, PSLQS, PSQ, ModulusShape

DEFAULT_E = 65537
MIN_PRIME_BITS = 16
_MAX_ATTEMPTS = 200_000
_MAX_KEY_RETRIES = 64


class ExhaustedError(RuntimeError):
    """No prime a**m + r exists for any admissible residue."""


class InfeasibleParametersError(RuntimeError):
    """The requested sizes cannot satisfy the shape's constraints."""


class NotInvertibleError(ValueError):
    """The public exponent shares a factor with phi(N)."""


@dataclass(frozen=True)
class StructuredPrime:
    p: int
    a: int
    m: int
    r: int

    def __post_init__(self):
        if self.a < 2 or self.m < 1 or self.r < 1:
            raise ValueError(
                f"need a >= 2, m >= 1, r >= 1; got a={self.a}, m={self.m}, r={self.r}")
        if self.a ** self.m + self.r != self.p:
            raise ValueError(f"{self.p} != {self.a}**{self.m} + {self.r}")
        if not is_probable_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def power(self) -> int:
        """The a**m part of the prime."""
        return self.p - self.r


@dataclass(frozen=True)
class VulnerableKey:
    shape: ModulusShape
    prime_p: StructuredPrime
    prime_q: StructuredPrime
    n: int
    e: Optional[int] = None
    d: Optional[int] = None

    @property
    def p(self) -> int:
        return self.prime_p.p

    @property
    def q(self) -> int:
        return self.prime_q.p

    def phi(self) -> int:
        ep, eq = self.shape.exponents
        p, q = self.p, self.q
        return p ** (ep - 1) * (p - 1) * q ** (eq - 1) * (q - 1)

    def violations(self) -> list[str]:
        """Return every broken shape hypothesis; an empty list means valid."""
        out = []
        sp, sq = self.prime_p, self.prime_q
        A, B = sp.power, sq.power
        s, l = self.shape.s, self.shape.l
        if self.n != self.shape.modulus(self.p, self.q):
            out.append("n does not match the shape")

        if self.shape.kind == PQ:
            if not A < B <= 2 * A:
                out.append("need a^m1 < b^m2 < 2a^m1 + 1")
            if sp.m % 2 and sq.m % 2:
                out.append("need m1 or m2 even")
            if perfect_root(A * B, 2) is None:
                out.append("a^m1 * b^m2 is not a perfect square")
        elif self.shape.kind == PSQ:
            if not self.q > self.p:
                out.append("need q > p")
            if sq.m % s:
                out.append("s must divide m2")
            elif not B > A * sq.a ** (sq.m // s):
                out.append("need b^m2 > a^m1 * b^(m2/s)")
        else:
            if not self.p > self.q:
                out.append("need p > q")
            if (sp.m * l) % s:
                out.append("s must divide m1*l")
            elif not A > self.q * sp.a ** (sp.m * l // s):
                out.append("need a^m1 > q * a^(m1*l/s)")

        if self.e is not None and self.d is not None:
            if (self.e * self.d) % self.phi() != 1 % self.phi():
                out.append("e*d is not 1 mod phi(N)")
        return out

    def validate(self) -> "VulnerableKey":
        bad = self.violations()
        if bad:
            raise ValueError(f"invalid {self.shape} key: " + "; ".join(bad))
        return self

    def target(self) -> int:
        """The value each attack's search window must contain.

        pq: sqrt(a^m1 * b^m2); psq: p * b^(m2/s);
        pslqs: q * a^(m1*l/s) * (p*s + l*r_p).
        """
        sp, sq = self.prime_p, self.prime_q
        s, l = self.shape.s, self.shape.l
        if self.shape.kind == PQ:
            return math.isqrt(sp.power * sq.power)
        if self.shape.kind == PSQ:
            return self.p * sq.a ** (sq.m // s)
        return self.q * sp.a ** (sp.m * l // s) * (self.p * s + l * sp.r)


def build_key(shape: ModulusShape, prime_p: StructuredPrime,
              prime_q: StructuredPrime) -> VulnerableKey:
    """Assemble and validate a key from two known structured primes."""
    n = shape.modulus(prime_p.p, prime_q.p)
    return VulnerableKey(shape, prime_p, prime_q, n).validate()


def gen_structured_prime(base_bits: int, m: int, r_max: int, rng_seed: int,
                         *, a: Optional[int] = None) -> StructuredPrime:
    """Smallest-residue prime a**m + r for a random base a of `base_bits` bits.

    Residues are scanned upward from 1, skipping those that make a**m + r
    even. Pass `a` to fix the base instead of drawing it.
    """
    if base_bits < 2 or r_max < 2 or m < 1:
        raise ValueError("need base_bits >= 2, m >= 1, r_max >= 2")
    if a is None:
        rng = random.Random(rng_seed)
        a = rng.getrandbits(base_bits) | (1 << (base_bits - 1))
    power = a ** m
    start = 1 if power % 2 == 0 else 2
    for r in range(start, r_max + 1, 2):
        if is_probable_prime(power + r):
            return StructuredPrime(power + r, a, m, r)
    raise ExhaustedError(f"no prime {a}^{m} + r with r <= {r_max}")


def assemble_rsa(key: VulnerableKey, e: int = DEFAULT_E) -> VulnerableKey:
    """Attach e and d = e^-1 mod phi(N)."""
    phi = key.phi()
    if e < 1 or math.gcd(e, phi) != 1:
        raise NotInvertibleError(f"gcd(e, phi(N)) != 1 for e={e}")
    return dataclasses.replace(key, e=e, d=pow(e, -1, phi))


def _exact_bits_range(bits: int, m: int) -> tuple[int, int]:
    """[lo, hi] such that x**m has exactly `bits` bits for lo <= x <= hi."""
    return iroot((1 << (bits - 1)) - 1, m) + 1, iroot((1 << bits) - 1, m)


def _residue(rng: random.Random, bits: int, fixed: Optional[int]) -> int:
    if fixed is not None:
        return fixed
    return rng.randrange(1 << (bits - 1), 1 << bits)


def _draw(rng: random.Random, lo: int, hi: int, odd: bool) -> Optional[int]:
    lo = max(lo, 2)
    if lo > hi:
        return None
    x = rng.randint(lo, hi)
    if x % 2 != odd:
        x = x + 1 if x < hi else x - 1
    if x < lo or x % 2 != odd:
        return None
    return x


def _search_prime(rng: random.Random, m: int, lo: int, hi: int,
                  r_bits: int, r_fixed: Optional[int], *,
                  square_base: bool = False,
                  accept: Callable[[int], bool] = lambda x: True,
                  attempts: int = _MAX_ATTEMPTS) -> StructuredPrime:
    """Draw (base, residue) pairs until base**m + residue is an acceptable prime.

    [lo, hi] bounds the drawn value x; the base is x, or x**2 when
    `square_base` is set. Parity of x is matched to the residue so the
    candidate is odd.
    """
    for _ in range(attempts):
        r = _residue(rng, r_bits, r_fixed)
        x = _draw(rng, lo, hi, odd=(r % 2 == 0))
        if x is None:
            if r_fixed is not None:
                break
            continue
        a = x * x if square_base else x
        cand = a ** m + r
        if accept(cand) and is_probable_prime(cand):
            return StructuredPrime(cand, a, m, r)
    raise InfeasibleParametersError(
        f"no prime base^{m} + r found with base drawn from [{lo}, {hi}]")


def gen_key(shape: ModulusShape, prime_bits: int, r_bits: int, rng_seed: int,
            *, rp_bits: Optional[int] = None, rq_bits: Optional[int] = None,
            r_p: Optional[int] = None, r_q: Optional[int] = None,
            m1: Optional[int] = None, m2: Optional[int] = None) -> VulnerableKey:
    """Generate a key of the given shape whose factors the matching attack recovers.

    Args:
      shape: modulus shape.
      prime_bits: bit size of a^m1 (p's power part). For psq, q is larger;
        for pslqs, q is smaller.
      r_bits: residues are drawn with exactly this many bits, unless
        overridden per prime by rp_bits/rq_bits or fixed by r_p/r_q.
      rng_seed: seed; the same arguments always give the same key.
      m1, m2: exponents. Defaults: pq (2, 2); psq (2, s);
        pslqs (s / gcd(s, l), 2).

    Raises:
      InfeasibleParametersError: the shape constraints cannot be met.
    """
    if prime_bits < MIN_PRIME_BITS:
        raise ValueError(f"prime_bits must be >= {MIN_PRIME_BITS}")
    rp_bits = rp_bits or r_bits
    rq_bits = rq_bits or r_bits
    if min(rp_bits, rq_bits) < 1:
        raise ValueError("residue bit sizes must be >= 1")
    for name, r in (("r_p", r_p), ("r_q", r_q)):
        if r is not None and r < 1:
            raise ValueError(f"{name} must be >= 1")

    s, l = shape.s, shape.l
    if shape.kind == PQ:
        m1, m2 = m1 or 2, m2 or 2
    elif shape.kind == PSQ:
        m1, m2 = m1 or 2, m2 or s
        if m2 % s:
            raise ValueError(f"s={s} must divide m2={m2}")
    else:
        m1, m2 = m1 or s // math.gcd(s, l), m2 or 2
        if (m1 * l) % s:
            raise ValueError(f"s={s} must divide m1*l={m1 * l}")

    rng = random.Random(rng_seed)
    make_q = {PQ: _q_for_pq, PSQ: _q_for_psq, PSLQS: _q_for_pslqs}[shape.kind]
    square_p = shape.kind == PQ and m1 % 2 == 1
    for _ in range(_MAX_KEY_RETRIES):
        m1_eff = 2 * m1 if square_p else m1
        lo, hi = _exact_bits_range(prime_bits, m1_eff)
        sp = _search_prime(rng, m1, lo, hi, rp_bits, r_p, square_base=square_p)
        try:
            sq = make_q(rng, shape, sp, prime_bits, m2, rq_bits, r_q)
        except InfeasibleParametersError:
            continue
        key = VulnerableKey(shape, sp, sq, shape.modulus(sp.p, sq.p))
        if not key.violations():
            return key
    raise InfeasibleParametersError(
        f"could not satisfy {shape} constraints at prime_bits={prime_bits}")


def _q_for_pq(rng, shape, sp, prime_bits, m2, rq_bits, r_q):
    # b^m2 must land in (A, 2A]; odd m2 needs a square base so A*B is square.
    A = sp.power
    square = m2 % 2 == 1
    k = 2 * m2 if square else m2
    lo, hi = iroot(A, k) + 1, iroot(2 * A, k)
    if lo > hi:
        raise InfeasibleParametersError("no b^m2 strictly between A and 2A")
    return _search_prime(rng, m2, lo, hi, rq_bits, r_q, square_base=square,
                         attempts=_MAX_ATTEMPTS // 10)


def _q_for_psq(rng, shape, sp, prime_bits, m2, rq_bits, r_q):
    # Need b^(m2*(s-1)/s) > A; aim q at s/(s-1) times p's size plus guard bits.
    s = shape.s
    A = sp.power
    b_min = iroot(A, m2 * (s - 1) // s) + 1
    q_bits = -(-prime_bits * s // (s - 1)) + 2
    for bits in range(q_bits, q_bits + m2 + 1):
        lo, hi = _exact_bits_range(bits, m2)
        lo = max(lo, b_min)
        if lo <= hi:
            return _search_prime(
                rng, m2, lo, hi, rq_bits, r_q,
                accept=lambda q: q > sp.p, attempts=_MAX_ATTEMPTS // 10)
    raise InfeasibleParametersError("no room for b above the psq bound")


def _q_for_pslqs(rng, shape, sp, prime_bits, m2, rq_bits, r_q):
    # q must stay below a^m1 / a^(m1*l/s), about prime_bits*(s-l)/s bits.
    s, l = shape.s, shape.l
    A = sp.power
    c = sp.a ** (sp.m * l // s)
    q_bits = prime_bits * (s - l) // s - 2
    if q_bits < 3:
        raise InfeasibleParametersError(
            f"q would have only {q_bits} bits at prime_bits={prime_bits}")
    for bits in range(q_bits, max(q_bits - m2, 2), -1):
        lo, hi = _exact_bits_range(bits, m2)
        if lo <= hi and hi >= 2:
            return _search_prime(
                rng, m2, lo, hi, rq_bits, r_q,
                accept=lambda q: q < sp.p and A > q * c,
                attempts=_MAX_ATTEMPTS // 10)
    raise InfeasibleParametersError("no room for q below the pslqs bound")


_FIELDS = ("shape", "s", "l", "n", "p", "q", "a", "b", "m1", "m2", "rp", "rq", "e", "d")


def key_to_dict(key: VulnerableKey) -> dict[str, str]:
    sp, sq = key.prime_p, key.prime_q
    values = {
        "shape": key.shape.kind,
        "s": key.shape.s if key.shape.kind != PQ else None,
        "l": key.shape.l if key.shape.kind == PSLQS else None,
        "n": key.n, "p": sp.p, "q": sq.p, "a": sp.a, "b": sq.a,
        "m1": sp.m, "m2": sq.m, "rp": sp.r, "rq": sq.r,
        "e": key.e, "d": key.d,
    }
    return {k: str(values[k]) for k in _FIELDS if values[k] is not None}


def key_to_json(key: VulnerableKey) -> str:
    return json.dumps(key_to_dict(key), separators=(",", ":"))


def key_from_dict(obj: dict) -> VulnerableKey:
    kind = obj["shape"]
    if kind == PQ:
        shape = ModulusShape.pq()
    elif kind == PSQ:
        shape = ModulusShape.psq(int(obj["s"]))
    else:
        shape = ModulusShape.pslqs(int(obj["s"]), int(obj["l"]))
    sp = StructuredPrime(int(obj["p"]), int(obj["a"]), int(obj["m1"]), int(obj["rp"]))
    sq = StructuredPrime(int(obj["q"]), int(obj["b"]), int(obj["m2"]), int(obj["rq"]))
    e = int(obj["e"]) if "e" in obj else None
    d = int(obj["d"]) if "d" in obj else None
    key = VulnerableKey(shape, sp, sq, int(obj["n"]), e, d)
    return key.validate()


def key_from_json(text: str) -> VulnerableKey:
    return key_from_dict(json.loads(text))
