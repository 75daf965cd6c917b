"""Compute the classification pair (u, eta), decide isomorphism between
presentations, and realize an invariants document back into loop schemas.
"""

from borelshift import (
    decide_almost_borel_iso,
    format_invariants,
    full_shift_graph,
    golden_mean_graph,
    invariants_of,
    parse_invariants,
    pair_of_realization,
    realize_invariants,
)


def main():
    golden = golden_mean_graph()
    full2 = full_shift_graph(("a", "b"))

    with_low = invariants_of((full2, golden))
    alone = invariants_of((full2,))
    print("full2 + golden invariants:")
    print(format_invariants(with_low), end="")
    print("full2 alone:")
    print(format_invariants(alone), end="")

    # the golden component is strictly below the top entropy at the same
    # period, so it is invisible to the pair
    v = decide_almost_borel_iso(with_low, alone)
    print("full2+golden ~ full2:", v.isomorphic)

    # a second copy of the maximal component does change eta
    doubled = decide_almost_borel_iso(invariants_of((full2, full2)), alone)
    print(
        "full2+full2 ~ full2:",
        doubled.isomorphic,
        "| witness period:",
        doubled.witness_period,
        "|",
        doubled.detail,
    )

    # realization: parse a document, build schemas, recover the same pair
    doc = "gen 1 log 2 1\ngen 3 log 5 2\n"
    pair = parse_invariants(doc)
    real = realize_invariants(pair)
    for role, schema in real.components:
        print(f"realized {role}: counts {schema.counts_upto(6)}")
    back = pair_of_realization(real)
    print("round trip isomorphic:", decide_almost_borel_iso(back, pair).isomorphic)


if __name__ == "__main__":
    main()
