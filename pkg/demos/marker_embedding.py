"""Synthesize an injective subsystem of a non-injective factor code above a
target entropy, then audit the certificate: block structure, certified
entropy, and the injectivity of the composed code.
"""

from fractions import Fraction

from borelshift import (
    BlockCode,
    IntervalApprox,
    check_injective,
    first_return_counts,
    golden_mean_graph,
    make_subsystem_code,
    synthesize_injective_subsystem,
)


def main():
    code = BlockCode(
        golden_mean_graph(), (("e0", "1"), ("e1", "0"), ("e2", "0")), mode="edge"
    )
    target = IntervalApprox(Fraction(1, 5), Fraction(1, 5))
    cert = synthesize_injective_subsystem(code, target)

    print("tier:", cert.tier)
    print("states:", len(cert.presentation.vertices))
    print("certified entropy:", float(cert.entropy), ">= target", float(target))
    p = cert.params
    print(
        f"marker parameters: base={p.base} loop={''.join(p.ell)} "
        f"alt={''.join(p.ell_tilde)} A={p.A} C={p.C} N={p.N} K={p.K}"
    )

    # the built graph is a renewal chain: one marker block plus K gallery
    # slots between returns, gallery^K choices per block
    m1, m2 = p.marker_words()
    b1 = len(m1) + p.K * p.N
    b2 = len(m2) + p.K * p.N
    counts = first_return_counts(cert.presentation, "m1.0", b1 + b2)
    print("first return lengths:", [(n, c) for n, c in enumerate(counts) if c])

    sub = make_subsystem_code(cert, code.labeled())
    print("composed code injective:", check_injective(sub).injective)
    print("image alphabet:", sub.labeled().alphabet())


if __name__ == "__main__":
    main()
