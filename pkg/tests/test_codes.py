"""1-block codes on the golden mean shift, checked against hand derivations.

The running example maps the golden mean edge shift onto the even shift:
edges a->a = "1", a->b = "0", b->a = "0", so 1s are separated by runs of 0s
of even length.
"""

import itertools
import pytest

from borelshift import (
    BlockCode,
    FiniteGraph,
    ParseError,
    SymbolRelation,
    build_fibered_product_Fm,
    check_finite_to_one,
    check_injective,
    compare_entropy,
    extract_tilde_Xm,
    format_code,
    format_relation,
    full_shift_graph,
    golden_mean_graph,
    image_entropy,
    image_words,
    label_fiber_product,
    minimal_relation,
    parse_code,
    parse_relation,
    perron_entropy,
    prune_to_biinfinite,
    quotient_psi,
    verify_bowen_relation,
)

from helpers import is_even_shift_word


def even_code() -> BlockCode:
    g = golden_mean_graph()  # edges e0: a->a, e1: a->b, e2: b->a
    return BlockCode(g, (("e0", "1"), ("e1", "0"), ("e2", "0")), mode="edge")


def identity_code() -> BlockCode:
    g = golden_mean_graph()
    return BlockCode(g, (("a", "a"), ("b", "b")), mode="vertex")


# === structural plumbing ===

def test_labeled_line_graph_of_edge_code():
    lg = even_code().labeled()
    assert sorted(lg.graph.vertices) == ["e0", "e1", "e2"]
    # line graph: e follows f when head(f) = tail(e)
    assert ("e0", "e1") in lg.graph.edges
    assert ("e1", "e2") in lg.graph.edges
    assert ("e2", "e0") in lg.graph.edges
    assert ("e1", "e1") not in lg.graph.edges
    assert lg.label("e0") == "1" and lg.label("e1") == "0"
    assert lg.alphabet() == ("0", "1")


def test_vertex_mode_rejects_parallel_edges():
    g = FiniteGraph(("u",), (("u", "u"), ("u", "u")))
    with pytest.raises(ValueError):
        BlockCode(g, (("u", "x"),), mode="vertex")


def test_mapping_must_cover_keys():
    g = golden_mean_graph()
    with pytest.raises(ValueError):
        BlockCode(g, (("e0", "1"),), mode="edge")
    with pytest.raises(ValueError):
        BlockCode(g, (("a", "x"),), mode="vertex")


def test_prune_to_biinfinite_removes_transients():
    g = FiniteGraph.from_edges([("a", "a"), ("a", "m"), ("m", "z"), ("z", "z")])
    pruned = prune_to_biinfinite(g)
    # m sits on a one-way street between two loops: it does survive, since it
    # extends to a bi-infinite path through a ... m ... z
    assert set(pruned.vertices) == {"a", "m", "z"}
    g2 = FiniteGraph.from_edges([("a", "a"), ("a", "dead")])
    assert set(prune_to_biinfinite(g2).vertices) == {"a"}


def test_label_fiber_product_diagonal_always_present():
    lg = even_code().labeled()
    prod = prune_to_biinfinite(label_fiber_product(lg, lg))
    verts = set(prod.vertices)
    assert {"e0|e0", "e1|e1", "e2|e2"} <= verts
    # equal labels only: e0 (label 1) never pairs with e1 (label 0)
    assert "e0|e1" not in verts
    assert "e1|e2" in verts and "e2|e1" in verts


# === injectivity ===

def test_identity_code_injective():
    assert check_injective(identity_code()).injective


def test_even_code_not_injective_with_periodic_witness():
    rep = check_injective(even_code())
    assert not rep.injective
    assert rep.periodic
    first, second = rep.witness
    assert first != second
    lg = even_code().labeled()
    assert [lg.label(v) for v in first] == [lg.label(v) for v in second]
    # witness paths are genuine paths of the line graph
    for path in (first, second):
        for u, w in zip(path, path[1:]):
            assert w in lg.graph.successors(u)
    # the cycle closes up: last vertex connects back to the first
    for path in (first, second):
        assert path[0] in lg.graph.successors(path[-1])


def test_injective_after_symbol_split():
    # distinguishing the two 0-edges restores injectivity
    g = golden_mean_graph()
    code = BlockCode(g, (("e0", "1"), ("e1", "0"), ("e2", "2")), mode="edge")
    assert check_injective(code).injective


# === finite-to-one ===

def test_even_code_finite_to_one():
    rep = check_finite_to_one(even_code())
    assert rep.finite_to_one
    assert rep.diamond is None


def test_collapsing_code_infinite_to_one():
    code = BlockCode(full_shift_graph("ab"), (("a", "0"), ("b", "0")), mode="vertex")
    rep = check_finite_to_one(code)
    assert not rep.finite_to_one
    first, second = rep.diamond
    assert first != second
    assert first[0] == second[0] and first[-1] == second[-1]
    lg = code.labeled()
    assert [lg.label(v) for v in first] == [lg.label(v) for v in second]


# === the sofic image ===

def test_image_words_match_even_shift_language():
    code = even_code()
    for n in range(1, 9):
        got = {"".join(w) for w in image_words(code, n)}
        want = {
            "".join(bits)
            for bits in itertools.product("01", repeat=n)
            if is_even_shift_word("".join(bits))
        }
        assert got == want


def test_image_entropy_of_even_shift_is_golden():
    h = image_entropy(even_code())
    assert compare_entropy(h, perron_entropy(golden_mean_graph())) == "eq"


def test_image_entropy_of_collapsed_code_is_zero():
    code = BlockCode(full_shift_graph("ab"), (("a", "0"), ("b", "0")), mode="vertex")
    assert float(image_entropy(code)) == 0.0


# === symbol relations and the compatibility check ===

def test_minimal_relation_frozen_value():
    rel = minimal_relation(even_code())
    assert rel.pairs == frozenset(
        [("e0", "e0"), ("e1", "e1"), ("e2", "e2"), ("e1", "e2"), ("e2", "e1")]
    )


def test_bowen_holds_for_minimal_relation():
    code = even_code()
    rep = verify_bowen_relation(code, minimal_relation(code))
    assert rep.holds and rep.complete and rep.label_equal
    assert rep.symmetric and rep.reflexive
    assert rep.failures == ()


def test_bowen_detects_missing_pair():
    code = even_code()
    rel = SymbolRelation.of(
        [("e0", "e0"), ("e1", "e1"), ("e2", "e2"), ("e2", "e1")]
    )
    rep = verify_bowen_relation(code, rel)
    assert not rep.holds
    assert not rep.complete
    assert not rep.symmetric
    assert any("e1" in f for f in rep.failures)


def test_bowen_detects_cross_label_pair():
    code = even_code()
    rel = SymbolRelation.of(
        list(minimal_relation(code).pairs) + [("e0", "e1"), ("e1", "e0")]
    )
    rep = verify_bowen_relation(code, rel)
    assert not rep.holds
    assert not rep.label_equal
    assert rep.complete  # still contains every extendable pair


def test_identity_relation_on_injective_code():
    code = identity_code()
    rel = minimal_relation(code)
    assert rel.pairs == frozenset([("a", "a"), ("b", "b")])
    assert verify_bowen_relation(code, rel).holds


# === fibered products and the quotient map ===

def test_fibered_product_F2_of_even_code():
    code = even_code()
    rel = minimal_relation(code)
    f2 = build_fibered_product_Fm(code, rel, 2)
    assert sorted(f2.vertices) == ["e0,e0", "e1,e1", "e1,e2", "e2,e1", "e2,e2"]
    # componentwise edges: (e1,e2) -> (e2,e0) needs rel(e2,e0), absent
    assert ("e1,e2", "e2,e1") in f2.edges
    assert ("e0,e0", "e1,e1") in f2.edges


def test_fibered_product_F1_is_domain():
    code = even_code()
    rel = minimal_relation(code)
    f1 = build_fibered_product_Fm(code, rel, 1)
    assert sorted(f1.vertices) == ["e0", "e1", "e2"]
    assert len(f1.edges) == len(code.labeled().graph.edges)


def test_distinct_entry_product_and_quotient():
    code = even_code()
    rel = minimal_relation(code)
    x2 = extract_tilde_Xm(code, rel, 2)
    assert sorted(x2.vertices) == ["e1,e2", "e2,e1"]
    rep = quotient_psi(code, rel, 2)
    assert rep.right_resolving and rep.left_resolving
    assert rep.fibers_complete
    assert rep.preimage_count == 2
    assert rep.failures == ()


def test_quotient_psi_empty_beyond_multiplicity():
    code = even_code()
    rel = minimal_relation(code)
    rep = quotient_psi(code, rel, 3)
    assert rep.preimage_count is None
    assert "empty" in rep.failures[0]


# === document round trips ===

def test_code_document_round_trip():
    code = even_code()
    text = format_code(code)
    assert parse_code(text) == code
    vcode = identity_code()
    assert parse_code(format_code(vcode)) == vcode


def test_relation_document_round_trip():
    rel = minimal_relation(even_code())
    assert parse_relation(format_relation(rel)) == rel


def test_parse_code_errors():
    with pytest.raises(ParseError):
        parse_code("")
    with pytest.raises(ParseError):
        parse_code("code diagonal\nedge a a\nmap e0 1\n")
    with pytest.raises(ParseError):
        parse_code("code edge\nedge a a\nmap e0\n")
    # mapping must cover the keys
    with pytest.raises(ParseError):
        parse_code("code edge\nedge a a\nedge a a x\nmap e0 1\n")


def test_parse_relation_errors():
    with pytest.raises(ParseError):
        parse_relation("")
    with pytest.raises(ParseError):
        parse_relation("relation\npair a\n")
