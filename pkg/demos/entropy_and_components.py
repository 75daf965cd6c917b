"""Walk a reducible presentation: irreducible components, periods, and
certified Perron entropy with the identified minimal polynomial.
"""

from borelshift import (
    ExactAlgebraic,
    FiniteGraph,
    golden_mean_graph,
    irreducible_components,
    is_single_cycle,
    perron_entropy,
    period_of_component,
)


def main():
    # one source component feeding a golden-mean block and a 3-cycle
    g = FiniteGraph.from_edges(
        [
            ("s", "s"),
            ("s", "a"),
            ("a", "a"),
            ("a", "b"),
            ("b", "a"),
            ("s", "p"),
            ("p", "q"),
            ("q", "r"),
            ("r", "p"),
        ]
    )
    print("vertices:", len(g.vertices), "edges:", len(g.edges))
    for name, comp in irreducible_components(g):
        if is_single_cycle(comp):
            print(f"component {name}: cycle of length {len(comp.vertices)}, entropy 0")
            continue
        h = perron_entropy(comp)
        enc = h.log_enclosure()
        print(
            f"component {name}: {len(comp.vertices)} states, "
            f"period {period_of_component(comp)}, entropy {float(h):.12f}"
        )
        print(f"  certified enclosure [{float(enc.lo):.15f}, {float(enc.hi):.15f}]")

    h = perron_entropy(golden_mean_graph())
    if isinstance(h, ExactAlgebraic):
        print("golden mean root minimal polynomial coefficients:", h.minpoly)


if __name__ == "__main__":
    main()
