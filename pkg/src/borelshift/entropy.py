"""Gurevich entropy values: exact algebraic where possible, certified intervals otherwise.

An entropy is log(lambda) for the Perron-like growth rate lambda.  The exact
form stores the minimal polynomial of lambda with an isolating rational
interval; the approximate form stores a certified rational enclosure of the
entropy itself.  Zero and Infinity are explicit so that degenerate components
and unattained suprema never masquerade as numeric values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .graphs import is_single_cycle, is_strongly_connected
from .intervals import RatInterval, log_fraction, log_interval
from .presentations import FiniteGraph

DEFAULT_TOL = Fraction(1, 10**9)
ENCLOSURE_WIDTH = Fraction(1, 10**12)
EXACT_VERTEX_CAP = 60

_X = sympy.symbols("x")


class ExtendedEntropy:
    """Base class; concrete values are ExactAlgebraic, IntervalApprox, Zero, Infinity."""

    def is_finite(self) -> bool:
        return True

    def log_enclosure(self, max_width: Fraction = ENCLOSURE_WIDTH) -> RatInterval:
        raise NotImplementedError

    def __float__(self) -> float:
        enc = self.log_enclosure()
        return float(enc.mid)


class ZeroEntropy(ExtendedEntropy):
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def log_enclosure(self, max_width: Fraction = ENCLOSURE_WIDTH) -> RatInterval:
        return RatInterval.point(0)

    def lambda_enclosure(self, max_width: Fraction = ENCLOSURE_WIDTH) -> RatInterval:
        return RatInterval.point(1)

    def __repr__(self):
        return "Entropy(0)"

    def __eq__(self, other):
        return isinstance(other, ZeroEntropy)

    def __hash__(self):
        return hash("ZeroEntropy")


class InfiniteEntropy(ExtendedEntropy):
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def is_finite(self) -> bool:
        return False

    def log_enclosure(self, max_width: Fraction = ENCLOSURE_WIDTH) -> RatInterval:
        raise ValueError("infinite entropy has no finite enclosure")

    def __repr__(self):
        return "Entropy(inf)"

    def __eq__(self, other):
        return isinstance(other, InfiniteEntropy)

    def __hash__(self):
        return hash("InfiniteEntropy")


ZERO_ENTROPY = ZeroEntropy()
INFINITE_ENTROPY = InfiniteEntropy()


@dataclass(frozen=True)
class ExactAlgebraic(ExtendedEntropy):
    """Entropy log(lambda) with minpoly(lambda) and an isolating interval.

    `minpoly` is the ascending integer coefficient tuple of the minimal
    polynomial, primitive with positive leading coefficient.  The interval
    [root_lo, root_hi] contains exactly that one root of minpoly and its
    endpoints are not roots (unless degenerate, when the root is rational).
    """

    minpoly: tuple[int, ...]
    root_lo: Fraction
    root_hi: Fraction

    def __post_init__(self):
        if len(self.minpoly) < 2 or self.minpoly[-1] <= 0:
            raise ValueError("minpoly must be nonconstant with positive leading coefficient")
        if self.root_lo > self.root_hi or self.root_hi <= 0:
            raise ValueError("isolating interval must be nonempty and positive")

    def rational_root(self) -> Fraction | None:
        if len(self.minpoly) == 2:
            c0, c1 = self.minpoly
            return Fraction(-c0, c1)
        return None

    def lambda_enclosure(self, max_width: Fraction = ENCLOSURE_WIDTH) -> RatInterval:
        r = self.rational_root()
        if r is not None:
            return RatInterval.point(r)
        lo, hi = self.root_lo, self.root_hi
        while hi - lo > max_width:
            lo, hi = _bisect_simple_root(self.minpoly, lo, hi)
        return RatInterval(lo, hi)

    def log_enclosure(self, max_width: Fraction = ENCLOSURE_WIDTH) -> RatInterval:
        r = self.rational_root()
        if r is not None:
            return log_fraction(r, max_width)
        lam = self.lambda_enclosure(max_width / 4)
        return log_interval(lam, max_width)

    def __repr__(self):
        return f"Entropy(log root of {self.minpoly} in [{self.root_lo},{self.root_hi}])"


@dataclass(frozen=True)
class IntervalApprox(ExtendedEntropy):
    """Certified enclosure [lo, hi] of the entropy value itself."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty entropy interval")

    def log_enclosure(self, max_width: Fraction = ENCLOSURE_WIDTH) -> RatInterval:
        return RatInterval(self.lo, self.hi)

    def __repr__(self):
        return f"Entropy[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def _poly_eval(coeffs: tuple[int, ...], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _bisect_simple_root(coeffs, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """One bisection step; requires a sign change across [lo, hi]."""
    flo = _poly_eval(coeffs, lo)
    mid = (lo + hi) / 2
    fmid = _poly_eval(coeffs, mid)
    if fmid == 0:
        return mid, mid
    if (flo < 0) != (fmid < 0):
        return lo, mid
    return mid, hi


def _count_roots(coeffs, lo: Fraction, hi: Fraction) -> int:
    poly = sympy.Poly(list(reversed(coeffs)), _X, domain="QQ")
    return poly.count_roots(sympy.Rational(lo), sympy.Rational(hi))


def identify_algebraic(coeffs: tuple[int, ...], enclosure: RatInterval, refine) -> ExactAlgebraic:
    """Minimal polynomial of the unique root of `coeffs` inside `enclosure`.

    `refine` maps an enclosure to a strictly tighter one still containing the
    root; it is called until exactly one irreducible factor isolates.
    """
    poly = sympy.Poly(list(reversed(coeffs)), _X, domain="QQ")
    _, factors = poly.factor_list()
    cands = [f for f, _ in factors if f.degree() >= 1]
    lo, hi = enclosure.lo, enclosure.hi
    for _ in range(200):
        hits = []
        for f in cands:
            n = f.count_roots(sympy.Rational(lo), sympy.Rational(hi))
            if n:
                hits.append((f, n))
        if len(hits) == 1 and hits[0][1] == 1:
            f = hits[0][0]
            cs = [int(c) for c in f.all_coeffs()]  # descending
            if cs[0] < 0:
                cs = [-c for c in cs]
            return ExactAlgebraic(tuple(reversed(cs)), lo, hi)
        nxt = refine(RatInterval(lo, hi))
        if nxt.width >= hi - lo:
            raise ArithmeticError("enclosure refinement stalled during identification")
        lo, hi = nxt.lo, nxt.hi
    raise ArithmeticError("could not isolate an irreducible factor")


def _charpoly_coeffs(mat) -> tuple[int, ...]:
    m = sympy.Matrix(mat)
    cp = m.charpoly(_X)
    return tuple(int(c) for c in reversed(cp.all_coeffs()))  # ascending


def collatz_wielandt_enclosure(
    mat, rel_target: Fraction = Fraction(1, 10**13), max_iters: int = 60000
) -> RatInterval:
    """Certified enclosure of the Perron root of an irreducible nonnegative
    integer matrix via min/max of (Av)_i / v_i over a positive vector.

    The vector is iterated under A + I (primitive whenever A is irreducible),
    entirely in integer arithmetic, so the returned bounds are exact.
    """
    n = len(mat)
    rows = [[(j, mij) for j, mij in enumerate(row) if mij] for row in mat]
    v = [1] * n

    def step(vec):
        return [vec[i] + sum(m * vec[j] for j, m in rows[i]) for i in range(n)]

    def bounds(vec):
        lo = hi = None
        for i in range(n):
            s = sum(m * vec[j] for j, m in rows[i])
            q = Fraction(s, vec[i])
            lo = q if lo is None or q < lo else lo
            hi = q if hi is None or q > hi else hi
        return lo, hi

    batch = 4
    done = 0
    lo, hi = bounds(v)
    while done < max_iters:
        for _ in range(batch):
            v = step(v)
        done += batch
        top = max(v).bit_length()
        if top > 4096:
            shift = top - 1024
            v = [max(1, x >> shift) for x in v]
        lo, hi = bounds(v)
        if hi - lo <= rel_target * lo:
            break
        batch = min(batch * 2, 1024)
    return RatInterval(lo, hi)


def perron_entropy(c: FiniteGraph, exact_cap: int = EXACT_VERTEX_CAP) -> ExtendedEntropy:
    """Entropy log(Perron root) of a strongly connected multigraph.

    Exact algebraic whenever the characteristic polynomial is within reach
    (vertex count <= exact_cap); otherwise a certified interval of width
    <= 1e-12.
    """
    if not is_strongly_connected(c):
        raise ValueError("perron_entropy needs a strongly connected graph")
    if is_single_cycle(c):
        return ZERO_ENTROPY
    mat, _ = c.adjacency()
    lam = collatz_wielandt_enclosure(mat)
    if len(mat) <= exact_cap:
        coeffs = _charpoly_coeffs(mat)

        def refine(iv: RatInterval) -> RatInterval:
            # keep the upper part: the Perron root is the largest real root
            mid = iv.mid
            if _count_roots(coeffs, mid, iv.hi) >= 1:
                return RatInterval(mid, iv.hi)
            return RatInterval(iv.lo, mid)

        return identify_algebraic(coeffs, lam, refine)
    h = log_interval(lam, ENCLOSURE_WIDTH)
    return IntervalApprox(h.lo, h.hi)


def compare_entropy(a: ExtendedEntropy, b: ExtendedEntropy, tol: Fraction = DEFAULT_TOL) -> str:
    """Compare at tolerance: 'eq' | 'lt' | 'gt' | 'unknown'.

    'eq' certifies |a-b| <= tol, 'lt'/'gt' certify |a-b| > tol with the given
    order.  Exact algebraic pairs short-circuit through minimal polynomial
    identity; 'unknown' survives only when the true difference straddles the
    tolerance beyond refinement reach.
    """
    a_inf = not a.is_finite()
    b_inf = not b.is_finite()
    if a_inf or b_inf:
        if a_inf and b_inf:
            return "eq"
        return "gt" if a_inf else "lt"
    if _same_algebraic(a, b):
        return "eq"
    width = min(tol / 8, ENCLOSURE_WIDTH)
    for _ in range(6):
        ia = a.log_enclosure(width)
        ib = b.log_enclosure(width)
        diff_lo = ia.lo - ib.hi
        diff_hi = ia.hi - ib.lo
        if -tol <= diff_lo and diff_hi <= tol:
            return "eq"
        if diff_hi < -tol:
            return "lt"
        if diff_lo > tol:
            return "gt"
        refinable = isinstance(a, (ExactAlgebraic, ZeroEntropy)) or isinstance(
            b, (ExactAlgebraic, ZeroEntropy)
        )
        if not refinable:
            return "unknown"
        width /= 1024
    return "unknown"


def _same_algebraic(a: ExtendedEntropy, b: ExtendedEntropy) -> bool:
    if isinstance(a, ZeroEntropy) and isinstance(b, ZeroEntropy):
        return True
    if not (isinstance(a, ExactAlgebraic) and isinstance(b, ExactAlgebraic)):
        return False
    if a.minpoly != b.minpoly:
        return False
    lo, hi = min(a.root_lo, b.root_lo), max(a.root_hi, b.root_hi)
    if _count_roots(a.minpoly, lo, hi) == 1:
        return True
    # distinct roots of the same polynomial: separate by refinement
    ia, ib = a.lambda_enclosure(), b.lambda_enclosure()
    for _ in range(200):
        if ia.hi < ib.lo or ib.hi < ia.lo:
            return False
        if _count_roots(a.minpoly, min(ia.lo, ib.lo), max(ia.hi, ib.hi)) == 1:
            return True
        ia = RatInterval(*_bisect_simple_root(a.minpoly, ia.lo, ia.hi))
        ib = RatInterval(*_bisect_simple_root(b.minpoly, ib.lo, ib.hi))
    raise ArithmeticError("root identity could not be settled")


def entropy_from_log_value(value: Fraction) -> ExtendedEntropy:
    """Entropy equal to log(value) for rational value >= 1, in exact form."""
    v = Fraction(value)
    if v == 1:
        return ZERO_ENTROPY
    return ExactAlgebraic((-v.numerator, v.denominator), v, v)


def max_entropy(values, tol: Fraction = DEFAULT_TOL) -> ExtendedEntropy:
    """Maximum under compare_entropy; 'unknown' comparisons raise."""
    best = None
    for v in values:
        if best is None:
            best = v
            continue
        c = compare_entropy(v, best, tol)
        if c == "unknown":
            raise ArithmeticError("entropy maximum inconclusive at tolerance")
        if c == "gt":
            best = v
    if best is None:
        return ZERO_ENTROPY
    return best
