"""Modulus shapes: N = p*q, N = p**s * q, N = p**(s+l) * q**s."""

from dataclasses import dataclass

PQ = "pq"
PSQ = "psq"
PSLQS = "pslqs"
KINDS = (PQ, PSQ, PSLQS)


@dataclass(frozen=True)
class ModulusShape:
    kind: str
    s: int = 1
    l: int = 0

    def __post_init__(self):
        if self.kind == PQ:
            if (self.s, self.l) != (1, 0):
                raise ValueError("shape pq takes no s or l")
        elif self.kind == PSQ:
            if self.s < 2:
                raise ValueError(f"shape psq needs s >= 2, got s={self.s}")
            if self.l != 0:
                raise ValueError("shape psq takes no l")
        elif self.kind == PSLQS:
            if self.l < 1:
                raise ValueError(f"shape pslqs needs l >= 1, got l={self.l}")
            if 2 * self.l >= self.s:
                raise ValueError(
                    f"shape pslqs needs 2*l < s, got s={self.s}, l={self.l}")
        else:
            raise ValueError(f"unknown shape {self.kind!r}")

    @classmethod
    def pq(cls) -> "ModulusShape":
        return cls(PQ)

    @classmethod
    def psq(cls, s: int) -> "ModulusShape":
        return cls(PSQ, s)

    @classmethod
    def pslqs(cls, s: int, l: int) -> "ModulusShape":
        return cls(PSLQS, s, l)

    @property
    def exponents(self) -> tuple[int, int]:
        """Exponents (of p, of q) in N."""
        if self.kind == PQ:
            return 1, 1
        if self.kind == PSQ:
            return self.s, 1
        return self.s + self.l, self.s

    def modulus(self, p: int, q: int) -> int:
        ep, eq = self.exponents
        return p ** ep * q ** eq

    def __str__(self):
        if self.kind == PQ:
            return "pq"
        if self.kind == PSQ:
            return f"psq(s={self.s})"
        return f"pslqs(s={self.s}, l={self.l})"
