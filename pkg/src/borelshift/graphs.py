"""Irreducible components, periods, cyclic classes, and loop counting."""

from __future__ import annotations

import math
from typing import Union

from .presentations import FiniteGraph, LoopSchema, ShiftPresentation


def strongly_connected_components(graph: FiniteGraph) -> list[list[str]]:
    """Tarjan's algorithm, iterative; components sorted by smallest member."""
    succ = {v: [] for v in graph.vertices}
    for v, w in set(graph.edges):
        succ[v].append(w)
    for v in succ:
        succ[v].sort()

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    components: list[list[str]] = []

    for root in sorted(graph.vertices):
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(sorted(comp))
    components.sort(key=lambda c: c[0])
    return components


def is_strongly_connected(graph: FiniteGraph) -> bool:
    comps = strongly_connected_components(graph)
    return len(comps) == 1 and component_has_cycle(graph, comps[0])


def component_has_cycle(graph: FiniteGraph, comp: list[str]) -> bool:
    cset = set(comp)
    return any(v in cset and w in cset for v, w in graph.edges)


def irreducible_components(p: ShiftPresentation) -> list[tuple[str, ShiftPresentation]]:
    """Irreducible components with stable ids; loop schemas are their own component."""
    if isinstance(p, LoopSchema):
        return [("c0", p)]
    out = []
    i = 0
    for comp in strongly_connected_components(p):
        if not component_has_cycle(p, comp):
            continue
        out.append((f"c{i}", p.induced(comp)))
        i += 1
    return out


def period_of_component(c: Union[FiniteGraph, LoopSchema]) -> int:
    """gcd of all cycle lengths of an irreducible presentation."""
    if isinstance(c, LoopSchema):
        return schema_period(c)
    if not is_strongly_connected(c):
        raise ValueError("period is defined for strongly connected graphs only")
    root = sorted(c.vertices)[0]
    dist = {root: 0}
    queue = [root]
    succ = {v: c.successors(v) for v in c.vertices}
    while queue:
        nxt = []
        for v in queue:
            for w in succ[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        queue = nxt
    g = 0
    for v, w in set(c.edges):
        g = math.gcd(g, dist[v] + 1 - dist[w])
    return g


def schema_period(schema: LoopSchema) -> int:
    """gcd of the loop-length support, tail included.

    Once two consecutive support points of the tail progression carry positive
    counts, every further tail length is a multiple of their gcd with the
    stride pattern, so the gcd is exact, not a truncation artifact.
    """
    g = 0
    for n, c in schema.counts:
        if c > 0:
            g = math.gcd(g, n)
    t = schema.tail
    if t is None:
        if g == 0:
            raise ValueError("schema with no positive count")
        return g
    # walk the tail support until two consecutive support points are positive
    n = t.n0
    prev_positive = False
    seen_positive = 0
    while True:
        c = t.count(n)
        if c > 0:
            g = math.gcd(g, n)
            seen_positive += 1
            if prev_positive:
                break
            prev_positive = True
        else:
            prev_positive = False
        n += t.stride
        if n > t.n0 + 10000 * t.stride and seen_positive == 0:
            raise ValueError("tail support appears empty; cannot certify period")
    return g


def cyclic_classes(c: FiniteGraph, period: int | None = None) -> list[list[str]]:
    """Partition D_0..D_{p-1} with every edge moving one class forward."""
    p = period if period is not None else period_of_component(c)
    root = sorted(c.vertices)[0]
    dist = {root: 0}
    queue = [root]
    while queue:
        nxt = []
        for v in queue:
            for w in c.successors(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        queue = nxt
    classes = [[] for _ in range(p)]
    for v in sorted(c.vertices):
        classes[dist[v] % p].append(v)
    for v, w in c.edges:
        if (dist[v] + 1) % p != dist[w] % p:
            raise AssertionError("cyclic class consistency violated")
    return classes


def is_single_cycle(c: FiniteGraph) -> bool:
    """True iff the component is one periodic orbit (every degree exactly 1)."""
    out_deg = {v: 0 for v in c.vertices}
    in_deg = {v: 0 for v in c.vertices}
    for v, w in c.edges:
        out_deg[v] += 1
        in_deg[w] += 1
    return all(out_deg[v] == 1 and in_deg[v] == 1 for v in c.vertices)


def first_return_counts(c: FiniteGraph, base: str, limit: int) -> list[int]:
    """f[n] = number of length-n loops at `base` avoiding `base` in between.

    Multigraph edges count with multiplicity, i.e. loops are edge paths.
    """
    if base not in c.vertices:
        raise ValueError(f"base {base!r} not a vertex")
    succ: dict[str, dict[str, int]] = {}
    for v, w in c.edges:
        row = succ.setdefault(v, {})
        row[w] = row.get(w, 0) + 1
    f = [0] * (limit + 1)
    # weight[v] = number of paths base -> v of current length avoiding base in between
    weight = {base: 1}
    for step in range(1, limit + 1):
        new: dict[str, int] = {}
        for v, wv in weight.items():
            for w, mult in succ.get(v, {}).items():
                new[w] = new.get(w, 0) + wv * mult
        f[step] = new.pop(base, 0)
        weight = new
        if not weight:
            break
    return f


def schema_first_return_counts(schema: LoopSchema, limit: int) -> list[int]:
    return schema.counts_upto(limit)


def renewal_loop_counts(f: list[int]) -> list[int]:
    """Total loop counts from first-return counts: l_n = sum f_m * l_{n-m}."""
    limit = len(f) - 1
    l = [0] * (limit + 1)
    l[0] = 1
    for n in range(1, limit + 1):
        l[n] = sum(f[m] * l[n - m] for m in range(1, n + 1) if f[m])
    return l


def entropy_by_loop_count(
    p: ShiftPresentation, base: str | None, l_max: int
) -> list[tuple[int, int, float]]:
    """(n, loop count, log(count)/n) for 1 <= n <= l_max, zero counts skipped.

    Loop counts are the renewal sums over first-return decompositions, which
    for a graph equal the diagonal entries of adjacency powers.
    """
    if isinstance(p, LoopSchema):
        f = schema_first_return_counts(p, l_max)
    else:
        b = base if base is not None else sorted(p.vertices)[0]
        comp = None
        for _, c in irreducible_components(p):
            if isinstance(c, FiniteGraph) and b in c.vertices:
                comp = c
                break
        if comp is None:
            raise ValueError(f"base {b!r} lies on no cycle")
        f = first_return_counts(comp, b, l_max)
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    l = renewal_loop_counts(f)
    return [(n, l[n], math.log(l[n]) / n) for n in range(1, l_max + 1) if l[n] > 0]


def loop_entropy_estimate(seq: list[tuple[int, int, float]], period: int = 1) -> float:
    """Slope estimate log(l_n/l_{n-p})/p at the largest usable n.

    The difference quotient cancels polynomial prefactors that bias the plain
    (1/n) log l_n estimate for damped schemas.
    """
    if not seq:
        raise ValueError("empty loop count sequence")
    by_n = {n: c for n, c, _ in seq}
    ns = sorted(by_n)
    for n in reversed(ns):
        if n - period in by_n:
            return (math.log(by_n[n]) - math.log(by_n[n - period])) / period
    # single point: fall back to the plain slope
    n = ns[-1]
    return math.log(by_n[n]) / n
