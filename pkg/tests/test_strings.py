"""Labelled string logicals and the label-level CCZ census."""

from collections import Counter

import numpy as np
import pytest

from rainbow import gf2
from rainbow import graphs as gr
from rainbow import products as pr
from rainbow.assembly import Assignment, AssemblyError, assemble, coloured_logicals
from rainbow.strings import (
    StringLabel,
    factor_cycles,
    install_strings,
    labelled_interactions,
)
from rainbow.transversal import orientation_bipartition


def build(factors, kind):
    p = pr.cartesian_product(factors)
    g = pr.build_simplex_graph(p)
    return p, g, assemble(g, Assignment(kind, 3, 2))


def torus():
    return build([gr.make_cycle(4)] * 3, "generic")


def eights():
    return build([gr.make_figure_eight()] * 3, "mixed")


# -- labels ------------------------------------------------------------------------


def test_label_repr_is_compact():
    assert repr(StringLabel(0, 2)) == "c0d2"
    assert repr(StringLabel(1, 0, (1,))) == "c1d0l1"
    assert repr(StringLabel(0, 1, (0, 1))) == "c0d1l01"


def test_factor_cycle_counts():
    assert len(factor_cycles(gr.make_cycle(4))) == 1
    assert len(factor_cycles(gr.make_figure_eight())) == 2


def test_cycle_product_carries_one_string_per_colour_and_direction():
    p, g, code = torus()
    labels = install_strings(code, p)
    assert len(labels) == code.k == 9
    assert Counter(l.colour for l in labels) == {0: 3, 1: 3, 2: 3}
    assert Counter(l.direction for l in labels) == {0: 3, 1: 3, 2: 3}
    assert all(l.lobes == () for l in labels)


def test_cycle_string_weights_double_for_middle_colours():
    p, g, code = torus()
    labels = install_strings(code, p)
    for label, weight in zip(labels, code.lz.row_weights().tolist()):
        assert weight == (4 if label.colour == 0 else 8)


def test_installed_strings_keep_the_symplectic_pairing():
    p, g, code = torus()
    install_strings(code, p)
    pairing = gf2.matmul_t(code.lx, code.lz)
    assert np.array_equal(pairing, np.eye(9, dtype=np.uint8))


def test_installed_strings_are_pure_colour_classes():
    p, g, code = torus()
    labels = install_strings(code, p)
    for colour in (0, 1, 2):
        m = coloured_logicals(code, g, set(range(4)) - {colour}, "z")
        basis, piv = gf2.rref(gf2.vstack([m, code.hz]))
        for i, label in enumerate(labels):
            if label.colour == colour:
                assert gf2.rows_in_span(code.lz.row(i), basis, piv)[0]


def test_two_lobe_mixed_strings_split_by_lobe():
    p, g, code = eights()
    labels = install_strings(code, p)
    assert len(labels) == code.k == 24
    assert Counter(l.colour for l in labels) == {0: 12, 1: 6, 2: 6}
    # Middle colours wrap one lobe; colour 0 picks one lobe per transverse axis.
    assert all(len(l.lobes) == 1 for l in labels if l.colour in (1, 2))
    assert all(len(l.lobes) == 2 for l in labels if l.colour == 0)
    assert set(code.lz.row_weights().tolist()) == {8}


def test_no_string_basis_for_two_dimensional_products():
    p2 = pr.cartesian_product([gr.make_cycle(4)] * 2)
    g2 = pr.build_simplex_graph(p2)
    code2 = assemble(g2, Assignment("pin", 2, 2))
    with pytest.raises(AssemblyError, match="no labelled string basis"):
        install_strings(code2, p2)


def test_single_cycle_disguises_install_fine():
    # kbip(2,2) is a 4-cycle with relabelled levels, so the cycle basis applies.
    pk, gk, codek = build([gr.make_complete_bipartite(2, 2)] * 3, "mixed")
    labels = install_strings(codek, pk)
    assert len(labels) == codek.k == 9
    assert all(l.lobes == () for l in labels)


def test_generic_two_lobe_code_has_no_string_basis():
    p, g, code = build([gr.make_figure_eight()] * 3, "generic")
    with pytest.raises(AssemblyError, match="no labelled string basis"):
        install_strings(code, p)


# -- label-level census ------------------------------------------------------------


def test_cycle_census_pairs_distinct_colours_and_directions():
    p, g, code = torus()
    labels = install_strings(code, p)
    a = orientation_bipartition(p).a
    triples = labelled_interactions(code, a, labels)
    assert len(triples) == 6
    for t in triples:
        assert sorted(l.colour for l in t) == [0, 1, 2]
        assert sorted(l.direction for l in t) == [0, 1, 2]
    # cyclic pairings share one colour-to-direction shift across the triple
    cyclic = [
        t for t in triples if len({(l.direction - l.colour) % 3 for l in t}) == 1
    ]
    assert len(cyclic) == 3


def test_census_is_sorted_and_deterministic():
    p, g, code = torus()
    labels = install_strings(code, p)
    a = orientation_bipartition(p).a
    triples = labelled_interactions(code, a, labels)
    assert triples == sorted(triples)
    assert triples == labelled_interactions(code, a, labels)


def test_two_lobe_census_degrees():
    p, g, code = eights()
    labels = install_strings(code, p)
    a = orientation_bipartition(p).a
    triples = labelled_interactions(code, a, labels)
    assert len(triples) == 24
    degree = Counter()
    for t in triples:
        for label in t:
            degree[label] += 1
    assert all(degree[l] == 2 for l in labels if l.colour == 0)
    assert all(degree[l] == 4 for l in labels if l.colour in (1, 2))
