#!/usr/bin/env python3
"""
Test posets, covector posets, coatom orderings, order complexes and flag counts
"""

from itertools import permutations

import pytest

from src.core.config import settings
from src.core.errors import CapExceededError, InputError, PreconditionError
from src.core.progress_tracker import progress_tracker
from src.oriented.orient import topes
from src.topology.complexes import homology_evidence, order_complex
from src.topology.covector_poset import (
    TOP,
    augment,
    covector_poset,
    is_eulerian,
    is_thin,
    rank_cell_counts,
    tope_graph,
    tope_graph_dot,
    tope_poset,
    two_topes_per_subtope,
)
from src.topology.flags import flag_count, flag_table, sphere_report, underlying_flat_embedding_checks
from src.topology.poset import FinitePoset, boolean_lattice, chain_poset
from src.topology.rco import RcoNode, recursive_coatom_ordering, verify_rco


def linear_extensions(poset):
    return [list(order) for order in permutations(poset.elements) if poset.is_linear_extension(order)]


# ---------------------------------------------------------------- poset kernel


def test_poset_rejects_bad_relations():
    with pytest.raises(InputError):
        FinitePoset.from_covers(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(InputError):
        FinitePoset.from_covers(["a"], [("a", "b")])
    with pytest.raises(InputError):
        FinitePoset.from_relation(["a", "b"], lambda x, y: True)
    with pytest.raises(InputError):
        FinitePoset.from_relation(["a", "a"], lambda x, y: x == y)


def test_boolean_lattice():
    cube = boolean_lattice(["a", "b", "c"])
    low, high = frozenset(), frozenset("abc")
    assert cube.bottom == low and cube.top == high
    assert cube.is_lattice() and cube.is_graded()
    assert cube.length == 3
    assert cube.mobius(low, high) == -1
    assert len(list(cube.maximal_chains())) == 6
    assert cube.meet(frozenset("ab"), frozenset("bc")) == frozenset("b")
    assert cube.join(frozenset("a"), frozenset("c")) == frozenset("ac")
    assert cube.hasse_graph().number_of_edges() == 12
    assert cube.lower_semimodular_violation() is None


def test_chain_and_linear_extensions():
    chain = chain_poset(3)
    assert chain.covers() == [(0, 1), (1, 2)]
    assert chain.is_linear_extension([0, 1, 2])
    assert not chain.is_linear_extension([1, 0, 2])
    assert chain.mobius(0, 2) == 0
    with pytest.raises(PreconditionError):
        chain.mobius(2, 0)
    dot = chain.to_dot()
    assert dot.startswith("digraph poset {")
    assert dot.count("->") == 2


def test_thin_and_eulerian_controls():
    assert is_thin(boolean_lattice(["a", "b"])) == (True, None)
    assert is_eulerian(boolean_lattice(["a", "b", "c"]))
    thin, witness = is_thin(chain_poset(3))
    assert not thin and witness == (0, 2)
    assert not is_eulerian(chain_poset(3))
    with pytest.raises(PreconditionError):
        is_thin(FinitePoset.from_covers(["a", "b"], []))


# ---------------------------------------------------------------- covector posets


def test_augmented_colinear(colinear_oig):
    poset = augment(colinear_oig)
    assert len(poset) == 20
    assert poset.top == TOP and poset.bottom == "000"
    assert poset.length == 4
    assert is_thin(poset)[0]
    assert is_eulerian(poset)
    assert rank_cell_counts(poset) == [6, 8, 4]
    assert covector_poset(colinear_oig).bottom == "000"


def test_augmented_rank1_complex(rank1_complex):
    poset = augment(rank1_complex)
    assert poset.length == 3
    assert rank_cell_counts(poset) == [2, 2]
    assert is_thin(poset)[0]


def test_supports_cover_preserving(colinear_oig, three_vectors):
    for oig in (colinear_oig, three_vectors):
        phi = oig.lattice.as_poset()
        poset = covector_poset(oig)
        for lower, upper in poset.covers():
            assert phi.is_cover(oig.get(lower).support, oig.get(upper).support)


def test_tope_graph(colinear_oig, three_vectors):
    graph = tope_graph(colinear_oig)
    assert sorted(graph.nodes) == ["+1+", "+1-", "-1+", "-1-"]
    assert graph.number_of_edges() == 4
    assert all(d == 2 for _, d in graph.degree)
    assert two_topes_per_subtope(colinear_oig)

    hexagon = tope_graph(three_vectors)
    assert hexagon.number_of_nodes() == 6 and hexagon.number_of_edges() == 6

    dot = tope_graph_dot(graph)
    assert dot.startswith("graph topes {")
    assert dot.count("--") == 4


def test_tope_poset(colinear_oig):
    poset = tope_poset(colinear_oig, "+1+")
    assert poset.bottom == "+1+"
    assert poset.top == "-1-"
    assert len(poset.covers()) == 4
    with pytest.raises(PreconditionError):
        tope_poset(colinear_oig, "0++")


# ---------------------------------------------------------------- coatom orderings


def test_rco_every_base(colinear_oig, three_vectors):
    for oig in (colinear_oig, three_vectors):
        for tope in topes(oig):
            ordering = recursive_coatom_ordering(oig, tope.signs)
            assert ordering.passed
            assert ordering.root.top == TOP
            assert set(ordering.root.coatoms) == {t.signs for t in topes(oig)}
            assert ordering.to_model().passed


def test_rco_every_extension(colinear_oig, three_vectors):
    for oig in (colinear_oig, three_vectors):
        base = topes(oig)[0].signs
        extensions = linear_extensions(tope_poset(oig, base))
        assert len(extensions) == (2 if oig is colinear_oig else 6)
        for ext in extensions:
            assert recursive_coatom_ordering(oig, base, ext).passed


def test_rco_rank1_complex(rank1_complex):
    for tope in topes(rank1_complex):
        assert recursive_coatom_ordering(rank1_complex, tope.signs).passed


def test_rco_rejects_bad_input(colinear_oig):
    base = "+1+"
    order = list(tope_poset(colinear_oig, base).elements)
    with pytest.raises(PreconditionError):
        recursive_coatom_ordering(colinear_oig, base, list(reversed(order)))
    with pytest.raises(PreconditionError):
        recursive_coatom_ordering(colinear_oig, "000")


def test_verify_rco_negative(colinear_oig):
    ordering = recursive_coatom_ordering(colinear_oig, "+1+")
    root = ordering.root
    dropped = RcoNode(root.top, root.coatoms[:-1], root.children[:-1])
    passed, violation = verify_rco(ordering.poset, dropped)
    assert not passed
    assert violation
    with pytest.raises(InputError):
        verify_rco(ordering.poset, RcoNode("nowhere", []))


def test_verify_rco_shared_coatoms_must_come_first(colinear_oig):
    ordering = recursive_coatom_ordering(colinear_oig, "+1+")
    root, poset = ordering.root, ordering.poset
    i, child = next(
        (i, child) for i, child in enumerate(root.children[1:], start=1)
        if 0 < sum(any(poset.leq(c, r) for r in root.coatoms[:i]) for c in child.coatoms) < len(child.coatoms)
    )
    rotated = RcoNode(child.top, child.coatoms[1:] + child.coatoms[:1], child.children[1:] + child.children[:1])
    children = root.children[:i] + [rotated] + root.children[i + 1:]
    passed, violation = verify_rco(poset, RcoNode(root.top, root.coatoms, children))
    assert not passed
    assert "do not come first" in violation


def test_verify_rco_needs_a_shared_facet():
    """Two segments glued only at the bottom: the second has nothing in common with the first"""
    poset = FinitePoset.from_covers(
        ["0", "a", "b", "c", "d", "P", "Q", "T"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("0", "d"),
         ("a", "P"), ("b", "P"), ("c", "Q"), ("d", "Q"), ("P", "T"), ("Q", "T")],
    )

    def segment(top, ends):
        return RcoNode(top, list(ends), [RcoNode(e, ["0"]) for e in ends])

    passed, violation = verify_rco(poset, RcoNode("T", ["P", "Q"], [segment("P", "ab"), segment("Q", "cd")]))
    assert not passed
    assert "lies under no shared facet" in violation
    assert violation.startswith("at T, 0 below Q")

    passed, _ = verify_rco(poset, segment("P", "ab"))
    assert passed


def test_rco_progress_stays_bounded(colinear_oig):
    progress_tracker.reset()
    for _ in range(5):
        recursive_coatom_ordering(colinear_oig, "+1+")
    assert list(progress_tracker.component_status) == ["rco"]
    assert progress_tracker.component_status["rco"].message == "verified"


# ---------------------------------------------------------------- homology


def test_colinear_order_complex(colinear_oig):
    complex_ = order_complex(augment(colinear_oig))
    assert complex_.f_vector == [18, 48, 32]
    assert complex_.euler == 2
    report = homology_evidence(complex_)
    assert report.reduced_betti == [0, 0, 1]
    assert not report.torsion
    assert report.is_sphere(2)
    assert not report.is_sphere(1)


def test_rank1_complex_circle(rank1_complex):
    report = homology_evidence(order_complex(augment(rank1_complex)))
    assert report.f_vector == [4, 4]
    assert report.euler == 0
    assert report.reduced_betti == [0, 1]
    assert report.is_sphere(1)


def test_two_points_sphere():
    report = homology_evidence(order_complex(boolean_lattice(["a", "b"])))
    assert report.f_vector == [2]
    assert report.reduced_betti == [1]
    assert report.is_sphere(0)


def test_order_complex_cap(monkeypatch, colinear_oig):
    monkeypatch.setattr(settings, "homology_max_faces", 50)
    with pytest.raises(CapExceededError):
        order_complex(augment(colinear_oig))


# ---------------------------------------------------------------- flags


def test_flag_counts_colinear(colinear_oig):
    lattice = colinear_oig.lattice
    top, bottom = lattice.top, lattice.bottom
    x = lattice.flat_of(lattice.ground.mask(["x"]))

    tope_count = flag_count(colinear_oig, [top, bottom])
    assert (tope_count.observed, tope_count.predicted) == (4, 4)
    flag = flag_count(colinear_oig, [top, x, bottom])
    assert (flag.observed, flag.predicted) == (8, 8)
    assert flag.to_model().chain == [top, x, bottom]

    with pytest.raises(PreconditionError):
        flag_count(colinear_oig, [bottom, top])
    with pytest.raises(PreconditionError):
        flag_count(colinear_oig, [top, x])
    with pytest.raises(PreconditionError):
        flag_count(colinear_oig, [])
    with pytest.raises(PreconditionError):
        flag_count(colinear_oig, [top, 99])


def test_flag_tables(colinear_oig, three_vectors):
    assert flag_table(colinear_oig).all_agree
    table = flag_table(three_vectors)
    assert table.all_agree
    lattice = three_vectors.lattice
    row = next(r for r in table.rows if r.chain == [lattice.top, lattice.bottom])
    assert row.observed == 6
    assert table.to_model().all_agree


def test_flag_table_cap(monkeypatch, colinear_oig):
    monkeypatch.setattr(settings, "flag_table_max_flats", 3)
    with pytest.raises(CapExceededError):
        flag_table(colinear_oig)


def test_flat_embedding(colinear_oig, three_vectors):
    lattice = colinear_oig.lattice
    report = underlying_flat_embedding_checks(colinear_oig)
    expected = sorted([lattice.top, lattice.flat_of(lattice.ground.mask(["x"])),
                       lattice.flat_of(lattice.ground.mask(["z"])), lattice.flat_of(lattice.ground.mask(["x", "z"]))])
    assert report.image == expected
    assert report.phi_sum == report.image_sum == 4
    assert report.passed
    assert underlying_flat_embedding_checks(three_vectors).passed


# ---------------------------------------------------------------- sphericity


def test_sphere_reports(colinear_oig, rank1_complex, three_vectors):
    report = sphere_report(colinear_oig)
    assert report.sphere_evidence
    assert report.cell_counts == [6, 8, 4]
    assert report.homology.reduced_betti == [0, 0, 1]
    assert report.to_model().sphere_evidence

    assert sphere_report(rank1_complex).sphere_evidence
    assert sphere_report(three_vectors, base=topes(three_vectors)[-1].signs).sphere_evidence
