"""Recurrence trichotomy for loop schemas via the first-return generating function.

Phi(x) = sum c_n x^n with radius of convergence R.  Transient iff Phi(R) < 1;
recurrent iff Phi(r) = 1 for some r <= R; positive vs null recurrent by
finiteness of r * Phi'(r).  Entropy is -log r for the root, else -log R.
Every bound is an exact rational enclosure, and a verdict that would need to
distinguish Phi(R) from 1 below certification width is reported as
undecidable rather than coerced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .entropy import (
    ENCLOSURE_WIDTH,
    ExactAlgebraic,
    ExtendedEntropy,
    IntervalApprox,
    ZERO_ENTROPY,
    identify_algebraic,
)
from .graphs import schema_period
from .intervals import INF, Infinite, RatInterval, log_interval
from .presentations import DampedTail, GeometricTail, LoopSchema

POSITIVE_RECURRENT = "positive-recurrent"
NULL_RECURRENT = "null-recurrent"
TRANSIENT = "transient"

EXACT_DEGREE_CAP = 64


class UndecidableAtTolerance(ArithmeticError):
    """Phi(R) cannot be separated from 1 at certification width."""


@dataclass
class RecurrenceReport:
    recurrence: str
    entropy: ExtendedEntropy
    period: int
    radius: Union[Fraction, Infinite]
    root: Optional[RatInterval]
    phi_at_radius: Union[RatInterval, Infinite, None]
    mean_return: Union[RatInterval, Infinite, None]
    mme: bool


@dataclass(frozen=True)
class ComponentSummary:
    """One irreducible component: (period, entropy, has an MME?, recurrence)."""

    period: int
    entropy: ExtendedEntropy
    mme: bool
    recurrence: str
    source: str = ""


def schema_radius(schema: LoopSchema) -> Union[Fraction, Infinite]:
    """Radius of convergence of Phi; 1/k for a tail of ratio k, else infinite."""
    t = schema.tail
    if t is None:
        return INF
    return Fraction(1) / Fraction(t.k)


def _explicit_eval(schema: LoopSchema, x: Fraction) -> Fraction:
    return sum(c * x**n for n, c in schema.counts if c)


def _explicit_deriv_eval(schema: LoopSchema, x: Fraction) -> Fraction:
    """x * d/dx of the explicit part, i.e. sum n c_n x^n."""
    return sum(n * c * x**n for n, c in schema.counts if c)


def _geometric_tail_sum(t: GeometricTail, x: Fraction) -> Union[Fraction, Infinite]:
    y = Fraction(t.k) * x
    if y >= 1:
        return INF
    return t.a * y**t.n0 / (1 - y**t.stride)


def _geometric_tail_weighted(t: GeometricTail, x: Fraction) -> Union[Fraction, Infinite]:
    """sum n c_n x^n over the tail, closed form."""
    y = Fraction(t.k) * x
    if y >= 1:
        return INF
    s = t.stride
    base = t.a * y**t.n0 / (1 - y**s)
    return base * t.n0 + t.a * y**t.n0 * s * y**s / (1 - y**s) ** 2


def _damped_tail_enclosure(
    t: DampedTail, x: Fraction, max_width: Fraction, weighted: bool
) -> Union[RatInterval, Infinite]:
    """Enclosure of sum floor(a k^n / n^d) x^n (times n if weighted) over the tail.

    At x = 1/k the remainder shrinks only polynomially, so the term count is
    capped; the returned enclosure is then wider than requested but still valid.
    """
    k = Fraction(t.k)
    q = k * x
    if q > 1:
        return INF
    d_eff = t.d - 1 if weighted else t.d
    if q == 1 and d_eff <= 1:
        # sum a/n^{d_eff} diverges and the floor correction converges
        return INF
    s = t.stride
    cap = 4096 if q == 1 else 16384
    xs = x**s
    ks = k**s
    partial = Fraction(0)
    n = t.n0
    xp = x**n
    kp = k**n
    done = 0
    terms = 64
    while True:
        while done < terms:
            c = int(t.a * kp / Fraction(n) ** t.d)
            if c:
                partial += (n * c if weighted else c) * xp
            n += s
            xp *= xs
            kp *= ks
            done += 1
        m = n  # first uncomputed support point
        if q < 1:
            upper_main = t.a * q**m / (1 - q**s) / Fraction(m) ** d_eff
        else:
            # q == 1, d_eff >= 2: integral bound on sum over n^{-d_eff}
            upper_main = t.a * (
                Fraction(m) ** (-d_eff) + Fraction(m) ** (1 - d_eff) / (s * (d_eff - 1))
            )
        floor_loss = xp / (1 - xs)
        if weighted:
            floor_loss = xp * (Fraction(m) / (1 - xs) + s * xs / (1 - xs) ** 2)
        lower = partial + max(Fraction(0), t.a * q**m / Fraction(m) ** d_eff - floor_loss)
        upper = partial + upper_main
        if upper - lower <= max_width or terms >= cap:
            return RatInterval(lower, upper)
        terms *= 2


def loop_gf_eval(
    schema: LoopSchema, x: Fraction, max_width: Fraction = Fraction(1, 10**18)
) -> Union[RatInterval, Infinite]:
    """Certified enclosure of Phi(x), or INF where the series diverges."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("loop_gf_eval needs x > 0")
    explicit = _explicit_eval(schema, x)
    t = schema.tail
    if t is None:
        return RatInterval.point(explicit)
    if isinstance(t, GeometricTail):
        tail = _geometric_tail_sum(t, x)
        if tail is INF:
            return INF
        return RatInterval.point(explicit + tail)
    tail = _damped_tail_enclosure(t, x, max_width, weighted=False)
    if tail is INF:
        return INF
    return tail + explicit


def loop_gf_mean_eval(
    schema: LoopSchema, x: Fraction, max_width: Fraction = Fraction(1, 10**18)
) -> Union[RatInterval, Infinite]:
    """Certified enclosure of x * Phi'(x) = sum n c_n x^n."""
    x = Fraction(x)
    explicit = _explicit_deriv_eval(schema, x)
    t = schema.tail
    if t is None:
        return RatInterval.point(explicit)
    if isinstance(t, GeometricTail):
        tail = _geometric_tail_weighted(t, x)
        if tail is INF:
            return INF
        return RatInterval.point(explicit + tail)
    tail = _damped_tail_enclosure(t, x, max_width, weighted=True)
    if tail is INF:
        return INF
    return tail + explicit


def _phi_versus_one(schema: LoopSchema, x: Fraction) -> str:
    """'lt' | 'gt' | 'unknown' comparing Phi(x) with 1, refining as needed."""
    width = Fraction(1, 10**18)
    for _ in range(4):
        val = loop_gf_eval(schema, x, width)
        if val is INF:
            return "gt"
        if val.hi < 1:
            return "lt"
        if val.lo > 1:
            return "gt"
        if val.width == 0:
            return "unknown"  # exactly 1
        width = val.width / Fraction(10**12)
    return "unknown"


def _bracket_and_bisect_root(
    schema: LoopSchema, hi_limit: Fraction, rel_width: Fraction
) -> RatInterval:
    """Root of Phi(x)=1 in (0, hi_limit), certified; Phi(hi_limit) must exceed 1
    in the limit (walked from below when the endpoint itself diverges)."""
    lo = hi_limit / 2
    while _phi_versus_one(schema, lo) != "lt":
        lo /= 2
        if lo < Fraction(1, 10**400):
            raise ArithmeticError("failed to bracket root from below")
    hi = hi_limit
    if _phi_versus_one(schema, hi) != "gt":
        j = 1
        while True:
            cand = hi_limit * (1 - Fraction(1, 2**j))
            if cand > lo and _phi_versus_one(schema, cand) == "gt":
                hi = cand
                break
            j += 1
            if j > 5000:
                raise ArithmeticError("failed to bracket root from above")
    while hi - lo > rel_width * lo:
        mid = (lo + hi) / 2
        side = _phi_versus_one(schema, mid)
        if side == "unknown":
            # midpoint collides with the root; nudge off-center
            mid = lo + (hi - lo) * Fraction(29, 64)
            side = _phi_versus_one(schema, mid)
            if side == "unknown":
                return RatInterval(lo, hi)
        if side == "lt":
            lo = mid
        else:
            hi = mid
    return RatInterval(lo, hi)


def _entropy_from_root(schema: LoopSchema, root: RatInterval) -> ExtendedEntropy:
    """Entropy -log r, exact algebraic when the closed-form polynomial is small."""
    if root.lo == root.hi == 1:
        return ZERO_ENTROPY
    coeffs = _phi_polynomial(schema)
    if coeffs is not None and len(coeffs) - 1 <= EXACT_DEGREE_CAP:
        state = {"iv": root}

        def refine(lam_iv: RatInterval) -> RatInterval:
            r = state["iv"]
            mid = (r.lo + r.hi) / 2
            side = _phi_versus_one(schema, mid)
            if side == "unknown":
                mid = r.lo + (r.hi - r.lo) * Fraction(29, 64)
                side = _phi_versus_one(schema, mid)
            if side == "lt":
                state["iv"] = RatInterval(mid, r.hi)
            elif side == "gt":
                state["iv"] = RatInterval(r.lo, mid)
            else:
                raise ArithmeticError("root refinement stalled")
            r = state["iv"]
            return RatInterval(1 / r.hi, 1 / r.lo)

        lam = RatInterval(1 / root.hi, 1 / root.lo)
        rev = tuple(reversed(coeffs))
        return identify_algebraic(rev, lam, refine)
    lam = RatInterval(1 / root.hi, 1 / root.lo)
    h = log_interval(lam, ENCLOSURE_WIDTH)
    return IntervalApprox(h.lo, h.hi)


def _phi_polynomial(schema: LoopSchema) -> Optional[tuple[int, ...]]:
    """Integer polynomial (ascending) whose positive roots include the root of
    Phi(x) = 1, available for finite and geometric-tailed schemas."""
    t = schema.tail
    if t is None:
        top = schema.max_explicit_length()
        coeffs = [0] * (top + 1)
        coeffs[0] = -1
        for n, c in schema.counts:
            coeffs[n] += c
        return _clear_denominators(coeffs)
    if isinstance(t, GeometricTail):
        # (explicit(x) - 1)(1 - (kx)^s) + a k^n0 x^n0 = 0
        top = max(schema.max_explicit_length(), 0)
        base = [Fraction(0)] * (top + 1)
        base[0] = Fraction(-1)
        for n, c in schema.counts:
            base[n] += c
        s = t.stride
        ks = Fraction(t.k) ** s
        out = [Fraction(0)] * (top + s + 1)
        for i, b in enumerate(base):
            out[i] += b
            out[i + s] -= b * ks
        while len(out) <= t.n0:
            out.append(Fraction(0))
        out[t.n0] += t.a * Fraction(t.k) ** t.n0
        return _clear_denominators(out)
    return None


def _clear_denominators(coeffs) -> tuple[int, ...]:
    from math import lcm

    fracs = [Fraction(c) for c in coeffs]
    den = 1
    for f in fracs:
        den = lcm(den, f.denominator)
    out = [int(f * den) for f in fracs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def classify_recurrence(schema: LoopSchema) -> RecurrenceReport:
    """Vere-Jones trichotomy with certified enclosures throughout."""
    period = schema_period(schema)
    radius = schema_radius(schema)
    rel = Fraction(1, 2 * 10**13)

    if schema.tail is None:
        total = sum(c for _, c in schema.counts)
        if total == 1:
            n = next(n for n, c in schema.counts if c)
            return RecurrenceReport(
                POSITIVE_RECURRENT,
                ZERO_ENTROPY,
                period,
                radius,
                RatInterval.point(1),
                INF,
                RatInterval.point(n),
                mme=False,
            )
        root = _bracket_and_bisect_root(schema, Fraction(1), rel)
        entropy = _entropy_from_root(schema, root)
        mean = _mean_return_enclosure(schema, root)
        return RecurrenceReport(
            POSITIVE_RECURRENT, entropy, period, radius, root, INF, mean, mme=True
        )

    r_radius = Fraction(1) / Fraction(schema.tail.k)
    phi_r = INF
    for w in (Fraction(1, 8), Fraction(1, 10**3), Fraction(1, 10**9), Fraction(1, 10**18)):
        phi_r = loop_gf_eval(schema, r_radius, w)
        if phi_r is INF or phi_r.lo > 1 or phi_r.hi < 1 or phi_r.width == 0:
            break
    if phi_r is INF or phi_r.lo > 1:
        # root strictly inside the disc; positive recurrent
        root = _bracket_and_bisect_root(schema, r_radius, rel)
        entropy = _entropy_from_root(schema, root)
        mean = _mean_return_enclosure(schema, root)
        return RecurrenceReport(
            POSITIVE_RECURRENT, entropy, period, radius, root, phi_r, mean, mme=True
        )
    if phi_r.hi < 1:
        entropy = _transient_entropy(r_radius)
        return RecurrenceReport(
            TRANSIENT, entropy, period, radius, None, phi_r, None, mme=False
        )
    if phi_r.lo == phi_r.hi == 1:
        # certified exact criticality: null recurrent iff R*Phi'(R) diverges
        mean = loop_gf_mean_eval(schema, r_radius)
        rec = NULL_RECURRENT if mean is INF else POSITIVE_RECURRENT
        entropy = _transient_entropy(r_radius)
        return RecurrenceReport(
            rec,
            entropy,
            period,
            radius,
            RatInterval.point(r_radius),
            phi_r,
            mean,
            mme=(rec == POSITIVE_RECURRENT),
        )
    raise UndecidableAtTolerance(
        f"Phi(R) enclosure [{float(phi_r.lo):.12f}, {float(phi_r.hi):.12f}] "
        "straddles 1 at certification width"
    )


def _transient_entropy(r_radius: Fraction) -> ExtendedEntropy:
    k = 1 / r_radius
    if k == 1:
        return ZERO_ENTROPY
    return ExactAlgebraic((-k.numerator, k.denominator), k, k)


def _mean_return_enclosure(schema: LoopSchema, root: RatInterval) -> Union[RatInterval, Infinite]:
    lo_val = loop_gf_mean_eval(schema, root.lo)
    hi_val = loop_gf_mean_eval(schema, root.hi)
    if lo_val is INF or hi_val is INF:
        return INF
    return RatInterval(lo_val.lo, hi_val.hi)


def summarize_schema(schema: LoopSchema, source: str = "") -> ComponentSummary:
    rep = classify_recurrence(schema)
    return ComponentSummary(rep.period, rep.entropy, rep.mme, rep.recurrence, source)
