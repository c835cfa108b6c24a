"""Transversal T/T-dagger patterns: bipartitions, conditions, CCZ census."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from rainbow import gf2
from rainbow import graphs as gr
from rainbow import products as pr
from rainbow.assembly import Assignment, CssCode, assemble, logical_basis
from rainbow.gf2 import BitMatrix
from rainbow.graphs import GraphError
from rainbow.products import Flag, SimplexGraph
from rainbow.transversal import (
    Bipartition,
    TransversalError,
    ccz_interactions,
    check_triorthogonality,
    find_bipartition,
    orientation_bipartition,
)


def torus(dim, kind="pin", x=2, z=2):
    p = pr.cartesian_product([gr.make_cycle(4)] * dim)
    g = pr.build_simplex_graph(p)
    return p, g, assemble(g, Assignment(kind, x, z))


def fig8_cubed():
    p = pr.cartesian_product([gr.make_figure_eight()] * 3)
    return p, pr.build_simplex_graph(p)


def cube_code():
    """Eight qubits on cube vertices, faces as Z checks, one global X check."""
    verts = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    idx = {v: i for i, v in enumerate(verts)}
    faces = [
        [idx[v] for v in verts if v[axis] == side]
        for axis in range(3)
        for side in (0, 1)
    ]
    code = CssCode(
        n=8,
        hx=BitMatrix.from_dense([[1] * 8]),
        hz=BitMatrix.from_supports(faces, 8),
        assignment=None,
        x_origins=(),
        z_origins=(),
    )
    a = np.array([sum(v) % 2 for v in verts], dtype=np.uint8)
    return code, a


def cubic_triples_from_statevector(code, a):
    """CCZ triples read off the simulated diagonal action, via the mod-8
    phase polynomial evaluated on codeword representatives."""
    lx, _ = logical_basis(code)
    diag = oracle.t_pattern_diagonal(a)
    n = code.n

    def phase_exponent(subset):
        v = np.zeros(n, dtype=np.uint8)
        for i in subset:
            v ^= lx.row(i).to_dense()[0]
        idx = 0
        for q in range(n):
            idx = (idx << 1) | int(v[q])
        angle = np.angle(diag[idx]) / (np.pi / 4)
        return int(round(angle)) % 8

    triples = []
    for t in itertools.combinations(range(lx.nrows), 3):
        total = 0
        for r in range(4):
            for s in itertools.combinations(t, r):
                total += (-1) ** r * phase_exponent(s)
        if (total // 4) % 2:
            triples.append(t)
    return triples


# -- bipartitions ------------------------------------------------------------------


def test_bipartition_normalizes_and_complements():
    b = Bipartition([1, 0, 1, 1])
    assert b.halves() == (3, 1)
    assert np.array_equal(b.complement().a, [0, 1, 0, 0])
    assert np.array_equal(b.complement().complement().a, b.a)


def test_bipartition_rejects_non_flat_input():
    with pytest.raises(TransversalError, match="flat"):
        Bipartition(np.zeros((2, 2)))


def test_two_colouring_splits_every_edge():
    p, g, code = torus(2)
    b = find_bipartition(g)
    assert b.halves() == (16, 16)
    for u, v, _ in g.edges:
        assert b.a[u] != b.a[v]


def test_two_colouring_rejects_odd_cycles():
    flags = [Flag((i,)) for i in range(3)]
    triangle = SimplexGraph(flags, 3, [(0, 1, 0), (1, 2, 1), (2, 0, 2)])
    with pytest.raises(GraphError, match="odd cycle"):
        find_bipartition(triangle)


def test_two_colouring_rejects_two_lobe_products():
    p, g = fig8_cubed()
    with pytest.raises(GraphError):
        find_bipartition(g)


def test_orientation_fallback_agrees_on_bipartite_products():
    for dim in (2, 3):
        p = pr.cartesian_product([gr.make_cycle(4)] * dim)
        g = pr.build_simplex_graph(p)
        assert np.array_equal(orientation_bipartition(p).a, find_bipartition(g).a)


def test_orientation_fallback_balances_two_lobe_products():
    p, g = fig8_cubed()
    b = orientation_bipartition(p)
    assert b.halves() == (1536, 1536)


# -- the five conditions -----------------------------------------------------------


def test_condition_matrix_on_two_lobe_products():
    p, g = fig8_cubed()
    a = orientation_bipartition(p).a
    verdicts = {}
    for kind in ("pin", "generic", "anti_generic", "mixed"):
        code = assemble(g, Assignment(kind, 3, 2))
        rep = check_triorthogonality(code, a)
        verdicts[kind] = {c.number: c.ok for c in rep.conditions}
    assert all(verdicts["generic"].values())
    assert all(verdicts["mixed"].values())
    assert verdicts["pin"][1] and not verdicts["pin"][2]
    assert verdicts["anti_generic"][4] and not verdicts["anti_generic"][1]


def test_failing_conditions_carry_counterexamples():
    p, g = fig8_cubed()
    a = orientation_bipartition(p).a
    code = assemble(g, Assignment("pin", 3, 2))
    rep = check_triorthogonality(code, a)
    assert not rep.gate_found
    bad = rep.condition(2)
    assert not bad.ok and bad.counterexample is not None


def test_two_dimensional_code_admits_no_gate():
    p, g, code = torus(2)
    rep = check_triorthogonality(code, find_bipartition(g).a)
    assert not rep.gate_found
    assert rep.condition(4).ok and not rep.condition(2).ok


def test_verdicts_are_invariant_under_half_swap():
    p, g, code = torus(2)
    b = find_bipartition(g)
    r1 = check_triorthogonality(code, b.a)
    r2 = check_triorthogonality(code, b.complement().a)
    assert [c.ok for c in r1.conditions] == [c.ok for c in r2.conditions]


def test_pattern_length_is_validated():
    p, g, code = torus(2)
    with pytest.raises(TransversalError, match="length"):
        check_triorthogonality(code, np.zeros(7, dtype=np.uint8))


def test_verdicts_survive_a_logical_rebase():
    from rainbow.assembly import rebase_z_logicals

    p, g, code = torus(2)
    a = find_bipartition(g).a
    before = [c.ok for c in check_triorthogonality(code, a).conditions]
    lx, lz = logical_basis(code)
    rebase_z_logicals(code, BitMatrix(lz.data[::-1].copy(), lz.ncols))
    after = [c.ok for c in check_triorthogonality(code, a).conditions]
    assert before == after


# -- CCZ census --------------------------------------------------------------------


def test_census_requires_a_passing_report():
    p, g = fig8_cubed()
    code = assemble(g, Assignment("pin", 3, 2))
    with pytest.raises(TransversalError, match="condition"):
        ccz_interactions(code, orientation_bipartition(p).a)


def test_census_is_empty_below_three_logicals():
    free = CssCode(
        n=1,
        hx=BitMatrix.zeros(0, 1),
        hz=BitMatrix.zeros(0, 1),
        assignment=None,
        x_origins=(),
        z_origins=(),
    )
    rep = check_triorthogonality(free, np.array([1], dtype=np.uint8))
    assert rep.gate_found
    assert ccz_interactions(free, np.array([1], dtype=np.uint8)) == []


def test_cube_code_couples_its_three_logicals():
    code, a = cube_code()
    rep = check_triorthogonality(code, a)
    assert rep.gate_found
    assert ccz_interactions(code, a) == [(0, 1, 2)]


# -- state-vector cross-checks -----------------------------------------------------


def assert_report_matches_simulator(code, a):
    """The conditions split cleanly against the simulated action: 1, 2, 4
    and 5 together say the pattern fixes the codespace, and condition 3
    separates the logical identity (every product of X logicals is a Z
    stabiliser, reported without a counterexample) from a nontrivial
    gate."""
    rep = check_triorthogonality(code, a)
    preserved, nontrivial = oracle.t_pattern_preserves_codespace(
        code.hx.to_dense(), code.hz.to_dense(), a
    )
    commuting = all(rep.condition(i).ok for i in (1, 2, 4, 5))
    assert commuting == preserved
    if preserved:
        c3 = rep.condition(3)
        identity = not c3.ok and c3.counterexample is None
        assert identity == (not nontrivial)
    assert rep.gate_found == (preserved and nontrivial)
    return rep


def test_cube_code_action_matches_the_simulator():
    code, a = cube_code()
    rep = assert_report_matches_simulator(code, a)
    assert rep.gate_found
    assert cubic_triples_from_statevector(code, a) == [(0, 1, 2)]


def test_toy_code_verdict_matches_the_simulator():
    row = BitMatrix.from_dense([[1, 1, 1, 1]])
    code = CssCode(
        n=4, hx=row, hz=row.copy(), assignment=None, x_origins=(), z_origins=()
    )
    assert_report_matches_simulator(code, np.array([1, 1, 0, 0], dtype=np.uint8))


@settings(max_examples=20)
@given(seed=st.integers(0, 10**6))
def test_random_small_codes_agree_with_the_simulator(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    hx = rng.integers(0, 2, size=(rng.integers(1, 3), n), dtype=np.uint8)
    hx_m = BitMatrix.from_dense(hx)
    ker = gf2.kernel(hx_m)
    take = [i for i in range(ker.nrows) if rng.integers(0, 2)]
    hz_m = ker.take_rows(take) if take else BitMatrix.zeros(0, n)
    code = CssCode(
        n=n, hx=hx_m, hz=hz_m, assignment=None, x_origins=(), z_origins=()
    )
    a = rng.integers(0, 2, size=n, dtype=np.uint8)
    assert_report_matches_simulator(code, a)
