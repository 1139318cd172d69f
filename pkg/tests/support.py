"""Shared test helpers that are not oracles."""

from __future__ import annotations

import dataclasses
import random

from ternary_algebra.scalars import Q, Cyclotomic3

DELTAS = (Cyclotomic3(1), Cyclotomic3(-1), Cyclotomic3(2), Q)


def constant_slots(A):
    """Every stored nonzero structure constant, one slot per antisymmetric pair of f."""
    slots = []
    for table in ("f", "r1", "r2", "t1", "t2"):
        for key, vec in sorted(getattr(A, table).items()):
            if table == "f" and key[0] > key[1]:
                continue
            slots.extend((table, key, out) for out in sorted(vec))
    return slots


def mutate(A, table, key, out, delta):
    """Shift one structure constant by ``delta``; f keeps its antisymmetry."""
    data = {k: dict(v) for k, v in getattr(A, table).items()}
    pairs = [(key, delta)]
    if table == "f":
        pairs.append(((key[1], key[0]), -delta))
    for k, d in pairs:
        vec = data.setdefault(k, {})
        vec[out] = vec.get(out, Cyclotomic3(0)) + d
        data[k] = {o: c for o, c in vec.items() if c}
    return dataclasses.replace(A, **{table: data})


def random_mutations(A, seed, count):
    rng = random.Random(seed)
    slots = constant_slots(A)
    for _ in range(count):
        table, key, out = rng.choice(slots)
        delta = rng.choice(DELTAS)
        yield (table, key, out, delta), mutate(A, table, key, out, delta)
