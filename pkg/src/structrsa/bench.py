"""Sweeps over residue size (and l) recording window width, iterations and time."""

import csv
import dataclasses
import statistics
import sys
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

from structrsa.attacks import DEFAULT_BUDGET, HintSet, attack, verify_factorization
from structrsa.keygen import gen_key
from structrsa.shapes import PSLQS, ModulusShape


class BenchFailure(RuntimeError):
    """An attack failed on a key it must factor."""


@dataclass(frozen=True)
class BenchRecord:
    shape: str
    prime_bits: int
    r_p_bits: int
    r_q_bits: int
    s: int
    l: int
    window_width: int
    iterations: int
    elapsed_ns: int
    success: bool
    seed: int


FIELDS = tuple(f.name for f in dataclasses.fields(BenchRecord))


def run_point(shape: ModulusShape, prime_bits: int, r_bits: int, seed: int, *,
              r_p: Optional[int] = None, r_q: Optional[int] = None,
              budget: int = DEFAULT_BUDGET) -> BenchRecord:
    key = gen_key(shape, prime_bits, r_bits, seed, r_p=r_p, r_q=r_q)
    hints = HintSet(key.prime_p.r, key.prime_q.r, shape)
    out = attack(key.n, hints, budget)
    ok = (out.factored and (out.p, out.q) == (key.p, key.q)
          and verify_factorization(key.n, out.p, out.q, shape))
    if not ok:
        raise BenchFailure(
            f"{shape} attack returned {out.status.value} on a valid key "
            f"(seed={seed}, prime_bits={prime_bits}, r_bits={r_bits})")
    return BenchRecord(
        shape=shape.kind, prime_bits=prime_bits,
        r_p_bits=key.prime_p.r.bit_length(), r_q_bits=key.prime_q.r.bit_length(),
        s=shape.s, l=shape.l, window_width=out.window.width,
        iterations=out.iterations, elapsed_ns=out.elapsed_ns, success=True,
        seed=seed)


def run_sweep(shape: ModulusShape, prime_bits: int, r_bits_range: Iterable[int],
              trials_per_point: int, seed: int, csv_out: Optional[str] = None, *,
              l_values: Optional[Iterable[int]] = None,
              r_p: Optional[int] = None, r_q: Optional[int] = None,
              budget: int = DEFAULT_BUDGET,
              out: TextIO = sys.stdout) -> list[BenchRecord]:
    """Generate and attack `trials_per_point` keys at every grid point.

    The grid is r_bits_range x l_values (l_values only for pslqs). Residues
    fixed through r_p / r_q stay fixed while the other one follows r_bits.
    Trial seeds are seed, seed+1, ... in grid order, so a sweep is
    reproducible. Raises BenchFailure on the first failed attack.
    """
    r_bits_range = list(r_bits_range)
    if not r_bits_range or trials_per_point < 1:
        raise ValueError("need a nonempty r_bits range and at least one trial")
    if l_values is None:
        shapes = [shape]
    else:
        if shape.kind != PSLQS:
            raise ValueError("l sweeps apply to pslqs only")
        shapes = [ModulusShape.pslqs(shape.s, l) for l in l_values]

    records = []
    trial_seed = seed
    for sh in shapes:
        for r_bits in r_bits_range:
            point = []
            for _ in range(trials_per_point):
                point.append(run_point(sh, prime_bits, r_bits, trial_seed,
                                       r_p=r_p, r_q=r_q, budget=budget))
                trial_seed += 1
            records.extend(point)
            print(f"{sh} r_bits={r_bits}: "
                  f"median width={statistics.median(r.window_width for r in point)} "
                  f"iterations={statistics.median(r.iterations for r in point)} "
                  f"time={statistics.median(r.elapsed_ns for r in point) / 1e6:.3f}ms",
                  file=out)

    if csv_out is not None:
        write_csv(records, csv_out)
    return records


def write_csv(records: list[BenchRecord], path: str) -> None:
    rows = sorted(records, key=lambda r: r.seed)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FIELDS)
        for rec in rows:
            row = dataclasses.astuple(rec)
            writer.writerow(["true" if v is True else "false" if v is False else v
                             for v in row])


def read_csv(path: str) -> list[BenchRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [BenchRecord(
            shape=row["shape"], success=row["success"] == "true",
            **{k: int(row[k]) for k in FIELDS if k not in ("shape", "success")})
            for row in reader]
