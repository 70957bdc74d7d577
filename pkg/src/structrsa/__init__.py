"""Factoring attacks on RSA-type moduli whose primes have the form a**m + r."""

from structrsa.attacks import (
    AttackOutcome, HintSet, SearchWindow, Status, attack, attack_pq,
    attack_power_power, attack_power_q, verify_factorization, window_power_power,
    window_power_q, window_pq)
from structrsa.keygen import (
    StructuredPrime, VulnerableKey, assemble_rsa, build_key, gen_key,
    gen_structured_prime)
from structrsa.shapes import ModulusShape

__all__ = [
    "AttackOutcome", "HintSet", "ModulusShape", "SearchWindow", "Status",
    "StructuredPrime", "VulnerableKey", "assemble_rsa", "attack", "attack_pq",
    "attack_power_power", "attack_power_q", "build_key", "gen_key",
    "gen_structured_prime", "verify_factorization", "window_power_power",
    "window_power_q", "window_pq",
]
