"""Independent oracles and generators shared by the test modules.

Everything here is deliberately naive: exhaustive enumeration, dense matrix
powers, float bisection.  The point is to check the library against code
that shares none of its machinery.
"""

from __future__ import annotations

import math
import random
from math import gcd

Edge = tuple[str, str]


def simple_cycle_lengths(vertices: list[str], edges: list[Edge]) -> list[int]:
    """Lengths of all vertex-simple cycles, by exhaustive DFS."""
    succ = {v: sorted({w for u, w in edges if u == v}) for v in vertices}
    lengths = []
    order = {v: i for i, v in enumerate(sorted(vertices))}

    def walk(start, current, seen):
        for nxt in succ[current]:
            if nxt == start:
                lengths.append(len(seen))
            # only enumerate cycles whose smallest vertex is the start
            elif nxt not in seen and order[nxt] > order[start]:
                walk(start, nxt, seen | {nxt})

    for v in sorted(vertices):
        walk(v, v, {v})
    return sorted(lengths)


def period_by_cycles(vertices: list[str], edges: list[Edge]) -> int:
    lens = simple_cycle_lengths(vertices, edges)
    out = 0
    for n in lens:
        out = gcd(out, n)
    return out


def dense_loop_counts(
    vertices: list[str], edges: list[Edge], base: str, l_max: int
) -> list[int]:
    """Loops at base via integer matrix powers; index n holds the count."""
    order = sorted(vertices)
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    a = [[0] * n for _ in range(n)]
    for u, v in edges:
        a[idx[u]][idx[v]] += 1
    out = [0] * (l_max + 1)
    power = [row[:] for row in a]
    for step in range(1, l_max + 1):
        if step > 1:
            power = [
                [sum(row[k] * a[k][j] for k in range(n)) for j in range(n)]
                for row in power
            ]
        out[step] = power[idx[base]][idx[base]]
    return out


def first_returns_from_loops(loops: list[int]) -> list[int]:
    """Invert the renewal identity l_n = sum f_m l_{n-m} with l_0 = 1."""
    l_max = len(loops) - 1
    f = [0] * (l_max + 1)
    for n in range(1, l_max + 1):
        f[n] = loops[n] - sum(f[m] * loops[n - m] for m in range(1, n))
    return f


def is_even_shift_word(word: str) -> bool:
    """Maximal 0-blocks lying between two 1s must have even length."""
    first = word.find("1")
    if first < 0:
        return True
    last = word.rfind("1")
    for block in word[first:last].split("1"):
        if len(block) % 2 == 1:
            return False
    return True


def two_length_growth_rate(l1: int, l2: int) -> float:
    """log of the root of x^-l1 + x^-l2 = 1, by float bisection."""
    lo, hi = 1.0, 2.0
    while lo ** -l1 + lo ** -l2 <= 1.0:
        lo *= 0.99
    while hi ** -l1 + hi ** -l2 >= 1.0:
        hi *= 2.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid ** -l1 + mid ** -l2 > 1.0:
            lo = mid
        else:
            hi = mid
    return math.log((lo + hi) / 2)


def count_label_words(edges: list[Edge], labels: dict[Edge, str], length: int) -> set:
    """All edge-label words of paths with `length` edges (multigraph unaware:
    call with distinct edge keys when labels differ on parallel edges)."""
    words = {("", v) for v in {u for u, _ in edges} | {w for _, w in edges}}
    for _ in range(length):
        words = {
            (word + labels[(u, v)], v)
            for word, at in words
            for u, v in edges
            if u == at
        }
    return {word for word, _ in words}


def random_strongly_connected(rng: random.Random, n_max: int = 8):
    """Simple strongly connected digraph: a full cycle plus random chords."""
    n = rng.randint(2, n_max)
    vs = [f"v{i}" for i in range(n)]
    shuffled = vs[:]
    rng.shuffle(shuffled)
    edges = {
        (shuffled[i], shuffled[(i + 1) % n]) for i in range(n)
    }
    for _ in range(rng.randint(0, 2 * n)):
        u, v = rng.choice(vs), rng.choice(vs)
        edges.add((u, v))
    return vs, sorted(edges)


GOLDEN_ENTROPY = math.log((1 + math.sqrt(5)) / 2)
LOG2 = math.log(2)
LOG3 = math.log(3)
