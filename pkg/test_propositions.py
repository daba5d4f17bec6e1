#!/usr/bin/env python3
"""
Structural properties checked over every small interval greedoid and every
small antimatroid orientation
"""

from functools import lru_cache

import pytest

from conftest import small_interval_greedoids
from src.core.config import settings
from src.greedoids.flats import flat_lattice
from src.greedoids.setsys import check_axioms
from src.models.schemas import AxiomClass
from src.oriented.covectors import CovectorAlgebra, separation_set
from src.oriented.orient import (
    bottom,
    check_contraction_semigroup,
    check_restriction_semigroup,
    classify_rank1,
    contract_oig,
    drop_witness,
    oig_from_antimatroid,
    rank,
    restrict_to_xi,
    topes,
    underlying_oriented_matroid,
)
from src.topology.covector_poset import augment, covector_poset, is_thin, two_topes_per_subtope
from src.topology.flags import flag_table, sphere_report, underlying_flat_embedding_checks

ANTIMATROIDS = tuple(
    s for s in small_interval_greedoids(4) if check_axioms(s, AxiomClass.ANTIMATROID).passed
)

# order complexes past this many covectors need Smith forms too large for a unit run
HOMOLOGY_COVECTORS = 40

each_antimatroid = pytest.mark.parametrize("index", range(len(ANTIMATROIDS)))


@lru_cache(maxsize=None)
def antimatroid_oig(index: int):
    return oig_from_antimatroid(ANTIMATROIDS[index])


def test_generator_sizes(small_greedoids, small_antimatroids):
    assert small_antimatroids == ANTIMATROIDS
    assert len(small_antimatroids) > 0
    assert len(small_antimatroids) < len(small_greedoids)
    assert {s.ground.size for s in small_greedoids} == {1, 2, 3, 4}


def test_separation_lemma(interval_greedoids):
    """Products in either order can only differ on separating elements"""
    for sys in interval_greedoids:
        algebra = CovectorAlgebra(flat_lattice(sys))
        covectors = algebra.all_covectors()
        for a in covectors:
            for b in covectors:
                ab, ba = algebra.circ(a, b).signs, algebra.circ(b, a).signs
                sep = separation_set(a, b)
                for y in range(len(ab)):
                    if ab[y] != ba[y]:
                        assert sep >> y & 1
                        assert a.signs[y] in "+-"


@each_antimatroid
def test_unique_bottom(index):
    oig = antimatroid_oig(index)
    low = bottom(oig)
    assert set(low.signs) <= {"0", "1"}
    assert all(oig.algebra.leq(low, c) for c in oig.covectors)


@each_antimatroid
def test_graded_and_thin(index):
    oig = antimatroid_oig(index)
    poset = augment(oig)
    assert is_thin(poset)[0]
    for c in oig.covectors:
        assert poset.rank(c.signs) == rank(oig) - oig.lattice.flats[c.support].corank


@each_antimatroid
def test_supports_cover_preserving(index):
    oig = antimatroid_oig(index)
    phi = oig.lattice.as_poset()
    for lower, upper in covector_poset(oig).covers():
        assert phi.is_cover(oig.get(lower).support, oig.get(upper).support)


@each_antimatroid
def test_rank1_three_elements(index):
    """Every rank-1 contraction has exactly bottom, beta and -beta"""
    oig = antimatroid_oig(index)
    lattice = oig.lattice
    for x in oig.greedoid.members:
        if lattice.flats[lattice.flat_of(x)].corank == rank(oig) - 1:
            low, beta, minus = classify_rank1(contract_oig(oig, x))
            assert beta.signs != minus.signs


@each_antimatroid
def test_drop_witnesses_exist(index):
    oig = antimatroid_oig(index)
    lattice = oig.lattice
    for a in oig.covectors:
        for b in oig.covectors:
            if lattice.leq(a.support, b.support) and not oig.algebra.leq(a, b):
                drop_witness(oig, a, b)


@each_antimatroid
def test_minor_semigroups(index):
    """Contraction and restriction to xi are semigroup isomorphisms of the right size"""
    oig = antimatroid_oig(index)
    lattice = oig.lattice
    for x in oig.greedoid.members:
        fx = lattice.flat_of(x)
        assert check_contraction_semigroup(oig, x)
        below = sum(1 for c in oig.covectors if lattice.leq(c.support, fx))
        assert len(contract_oig(oig, x)) == below

        assert check_restriction_semigroup(oig, x)
        anchor = next(c for c in oig.covectors if c.support == fx)
        above = sum(1 for c in oig.covectors if oig.algebra.leq(anchor, c))
        assert len(restrict_to_xi(oig, x)) == above


@each_antimatroid
def test_topes_match_underlying_matroid(index):
    oig = antimatroid_oig(index)
    om = underlying_oriented_matroid(oig)
    assert len(topes(om)) == len(topes(oig))
    assert two_topes_per_subtope(oig)


@each_antimatroid
def test_flag_formula(index, monkeypatch):
    oig = antimatroid_oig(index)
    monkeypatch.setattr(settings, "flag_table_max_flats", len(oig.lattice))
    assert flag_table(oig).all_agree


@each_antimatroid
def test_coatom_meets(index):
    assert underlying_flat_embedding_checks(antimatroid_oig(index)).passed


@each_antimatroid
def test_sphere_evidence(index):
    oig = antimatroid_oig(index)
    if len(oig) > HOMOLOGY_COVECTORS:
        pytest.skip(f"{len(oig)} covectors is past the homology size for a unit run")
    report = sphere_report(oig)
    assert report.sphere_evidence, oig.greedoid.to_model()
    assert sum(report.cell_counts) == len(oig) - 1
