"""Edge contraction of simplex graphs and codes on the contracted vertices."""

import pytest

from rainbow import graphs as gr
from rainbow import products as pr
from rainbow.assembly import Assignment, AssemblyError, assemble
from rainbow.contraction import (
    ContractedGraph,
    contract,
    contracted_code,
    contractibility_check,
)
from rainbow.distance import exact_distance_upto
from rainbow.graphs import GraphError
from rainbow.subgraphs import maximal_subgraphs

X_ONE = [("x", c, "maximal") for c in ((0, 1, 2), (0, 1, 3), (1, 2, 3))]
Z_ONE = [("z", c, "maximal") for c in ((0, 1), (1, 2), (1, 3), (2, 3))]
X_TWO = [("x", c, "maximal") for c in ((0, 1, 2), (1, 2, 3))]
Z_TWO = [("z", c, "maximal") for c in ((0, 1), (1, 2), (2, 3))]

FLAT = [("x", c, "maximal") for c in ((0, 1), (1, 2))] + [
    ("z", c, "maximal") for c in ((0, 1), (1, 2))
]


def simplex(*factors):
    return pr.build_simplex_graph(pr.cartesian_product(list(factors)))


def torus3(side=4):
    return simplex(*([gr.make_cycle(side)] * 3))


# -- the contraction map -----------------------------------------------------------


def test_contract_validates_the_colour():
    g = simplex(gr.make_cycle(4), gr.make_cycle(4))
    with pytest.raises(GraphError, match="out of range"):
        contract(g, 7)
    with pytest.raises(GraphError, match="already contracted"):
        contract(contract(g, 0), 0)


def test_contracted_vertices_are_the_single_colour_subgraphs():
    for factors in (
        [gr.make_cycle(4)] * 2,
        [gr.make_cycle(4), gr.make_cycle(6)],
        [gr.make_figure_eight(), gr.make_cycle(4)],
    ):
        g = simplex(*factors)
        for colour in range(g.n_colours):
            cg = contract(g, colour)
            assert cg.n_vertices == len(maximal_subgraphs(g, (colour,)))
            assert sorted(map(sorted, cg.classes())) == sorted(
                sorted(s.support) for s in maximal_subgraphs(g, (colour,))
            )


def test_contractions_commute():
    g = torus3()
    assert contract(contract(g, 0), 3) == contract(contract(g, 3), 0)


def test_map_support_collapses_classes_to_points():
    g = simplex(gr.make_cycle(4), gr.make_cycle(4))
    cg = contract(g, 0)
    for v, cls in enumerate(cg.classes()):
        assert cg.map_support(cls) == (v,)
    everything = cg.map_support(range(g.n_flags))
    assert everything == tuple(range(cg.n_vertices))


def test_surviving_edges_drop_internal_adjacencies():
    g = simplex(gr.make_cycle(4), gr.make_cycle(4))
    cg = contract(g, 0)
    assert all(c != 0 for _, _, c in cg.edges)
    assert all(u != v for u, v, _ in cg.edges)


# -- screening ---------------------------------------------------------------------


def test_outer_colours_are_contractible_and_middle_ones_are_not():
    g = torus3()
    assert contractibility_check(g, 0).ok
    assert contractibility_check(g, 3).ok
    rep = contractibility_check(g, 1)
    assert not rep.ok
    for pair, _, size in rep.violations:
        assert 1 in pair and size % 4 != 0


def test_screening_accepts_the_flat_torus():
    g = simplex(gr.make_cycle(4), gr.make_cycle(4))
    assert contractibility_check(g, 0).ok
    with pytest.raises(GraphError, match="out of range"):
        contractibility_check(g, 5)


# -- codes on contracted vertices --------------------------------------------------


def test_flat_contraction_halves_the_colour_code():
    g = simplex(gr.make_cycle(4), gr.make_cycle(4))
    base = assemble(g, Assignment("pin", 2, 2))
    code = contracted_code(contract(g, 0), FLAT)
    assert (base.n, base.k) == (32, 4)
    assert (code.n, code.k) == (16, 4)
    rep = exact_distance_upto(code, side="both", wmax=4)
    assert rep.best_upper == 4 and rep.certified


def test_rainbow_families_match_maximal_ones_on_the_torus():
    cg = contract(simplex(gr.make_cycle(4), gr.make_cycle(4)), 0)
    a = contracted_code(cg, FLAT)
    rainbow = [("x", c, "maximal") for c in ((0, 1), (1, 2))] + [
        ("z", c, "rainbow") for c in ((0, 1), (1, 2))
    ]
    b = contracted_code(cg, rainbow)
    assert a.hz == b.hz and a.k == b.k


def test_mixed_cycle_contraction_keeps_distance():
    g = simplex(gr.make_cycle(4), gr.make_cycle(6))
    code = contracted_code(contract(g, 0), FLAT)
    assert (code.n, code.k) == (24, 2)


def test_contraction_chain_on_the_384_code():
    g = torus3()
    step = contracted_code(contract(g, 0), X_ONE + Z_ONE)
    assert (step.n, step.k) == (192, 9)
    final_graph = contract(contract(g, 0), 3)
    final = contracted_code(final_graph, X_TWO + Z_TWO)
    assert (final.n, final.k) == (96, 9)
    rep = exact_distance_upto(final, side="both", wmax=4)
    assert rep.best_upper == 4 and rep.certified


def test_contraction_chain_loses_logicals_on_longer_cycles():
    g = torus3(6)
    base = assemble(g, Assignment("generic", 3, 2))
    assert (base.n, base.k) == (1296, 9)
    step = contracted_code(contract(g, 0), X_ONE + Z_ONE)
    assert (step.n, step.k) == (648, 6)
    final = contracted_code(contract(contract(g, 0), 3), X_TWO + Z_TWO)
    assert (final.n, final.k) == (324, 6)


def test_families_may_reference_removed_colours():
    # Z families through the removed colour stay meaningful: they are
    # enumerated on the base graph and mapped through the contraction.
    cg = contract(simplex(gr.make_cycle(4), gr.make_cycle(4)), 0)
    code = contracted_code(cg, FLAT)
    assert any(set(o.colours) == {0, 1} for o in code.z_origins)


def test_anticommuting_family_choice_is_rejected_with_the_pair():
    cg = contract(simplex(gr.make_cycle(4), gr.make_cycle(4)), 0)
    with pytest.raises(AssemblyError, match="anticommutes") as err:
        contracted_code(
            cg, [("x", (0, 1), "maximal"), ("z", (0, 2), "maximal")]
        )
    assert err.value.pair == (0, 0)


def test_family_spec_validation():
    cg = contract(simplex(gr.make_cycle(4), gr.make_cycle(4)), 0)
    with pytest.raises(AssemblyError, match="side"):
        contracted_code(cg, [("q", (0, 1), "maximal")])
    with pytest.raises(AssemblyError, match="unknown family kind"):
        contracted_code(
            cg, [("x", (0, 1), "frob"), ("z", (0, 1), "maximal")]
        )
    with pytest.raises(AssemblyError, match="colour pairs"):
        contracted_code(
            cg, [("x", (0, 1, 2), "rainbow"), ("z", (0, 1), "maximal")]
        )
    with pytest.raises(AssemblyError, match="at least one family"):
        contracted_code(cg, [("x", (0, 1), "maximal")])
