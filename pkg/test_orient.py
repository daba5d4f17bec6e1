#!/usr/bin/env python3
"""
Test oriented interval greedoids: validation, minors and classification
"""

from itertools import product

import pytest

from conftest import small_interval_greedoids
from src.core.errors import InputError, NotFeasibleError, PreconditionError
from src.core.progress_tracker import progress_tracker
from src.core.utils import mask_of
from src.geometry.arrangements import om_from_vectors
from src.greedoids.setsys import build_set_system, check_axioms
from src.models.schemas import AxiomClass, Rank2Class
from src.oriented.covectors import negate_signs
from src.oriented.orient import (
    bottom,
    check_contraction_semigroup,
    check_restriction_semigroup,
    classify_rank1,
    classify_rank2,
    contract_oig,
    drop_witness,
    load_bundle,
    og4_witnesses,
    oig_from_antimatroid,
    rank,
    restrict_oig,
    restrict_to_xi,
    subtopes,
    topes,
    underlying_oriented_matroid,
    validate_oig,
    validate_om,
)


ANTIMATROIDS = tuple(
    s for s in small_interval_greedoids(4) if check_axioms(s, AxiomClass.ANTIMATROID).passed
)


def mask(oig, *labels):
    return oig.lattice.ground.mask(labels)


def test_colinear_orientation(colinear_oig):
    assert colinear_oig.report.passed
    assert len(colinear_oig) == 19
    assert rank(colinear_oig) == 3
    assert {t.signs for t in topes(colinear_oig)} == {"+1+", "+1-", "-1+", "-1-"}
    assert len(subtopes(colinear_oig)) == 8


def test_bottom_only_fails_og1(colinear_system):
    oig = validate_oig(colinear_system, ["000"])
    assert not oig.report.passed
    assert len(oig.report.og1_missing) == 6
    model = oig.report.to_model(oig.lattice)
    assert ["x", "y", "z"] not in model.og1_missing_flats
    assert [] in model.og1_missing_flats


def test_missing_pair_fails(colinear_oig, colinear_system):
    kept = colinear_oig.keys - {"0++", "0--"}
    assert not validate_oig(colinear_system, kept).report.passed


def test_non_covectors_reported(colinear_system):
    oig = validate_oig(colinear_system, ["000", "1++", "(0,0,0)"])
    assert oig.report.non_covectors == ["1++"]
    assert len(oig) == 1
    with pytest.raises(InputError):
        validate_oig(colinear_system, ["00x"])


def test_every_pair_deletion_fails(colinear_oig, colinear_system):
    """The antimatroid orientation is the only one: no (covector, negation) pair can go"""
    pairs = {frozenset((c.signs, negate_signs(c))) for c in colinear_oig.covectors if c.signs != "000"}
    assert len(pairs) == 9
    for pair in pairs:
        reduced = validate_oig(colinear_system, colinear_oig.keys - pair)
        assert not reduced.report.passed, sorted(pair)


@pytest.mark.slow
@pytest.mark.parametrize("index", range(len(ANTIMATROIDS)))
def test_pair_deletions_small_antimatroids(index):
    """No (covector, negation) pair can be dropped from any small antimatroid orientation"""
    sys = ANTIMATROIDS[index]
    oig = oig_from_antimatroid(sys)
    for c in oig.covectors:
        if c == bottom(oig):
            continue
        pair = {c.signs, negate_signs(c)}
        assert not validate_oig(sys, oig.keys - pair, lattice=oig.lattice).report.passed


def test_exhaustive_collects_more(colinear_oig, colinear_system):
    kept = colinear_oig.keys - {"+1+", "-1-", "+1-", "-1+"}
    first = validate_oig(colinear_system, kept)
    every = validate_oig(colinear_system, kept, exhaustive=True)
    assert len(first.report.og3_missing) == 1
    assert len(every.report.og3_missing) > 1


def test_og4_witnesses(colinear_oig):
    a, b = colinear_oig.parse("+1+"), colinear_oig.parse("-1+")
    assert og4_witnesses(colinear_oig, a, b, 0) == ["0++", "0-+", "00+"]
    with pytest.raises(PreconditionError):
        og4_witnesses(colinear_oig, a, b, 2)


def test_single_element_antimatroid():
    oig = oig_from_antimatroid(build_set_system(["e"], [[], ["e"]]))
    assert oig.keys == {"0", "+", "-"}
    low, beta, minus = classify_rank1(oig)
    assert (low.signs, beta.signs, minus.signs) == ("0", "+", "-")


def test_two_point_antimatroid():
    oig = oig_from_antimatroid(build_set_system(["x", "y"], [[], ["x"], ["y"], ["x", "y"]]))
    assert len(oig) == 9


def test_contract(colinear_oig):
    by_x = contract_oig(colinear_oig, mask(colinear_oig, "x"))
    assert by_x.report.passed
    assert by_x.greedoid.ground.labels == ("y", "z")
    assert len(by_x) == 9

    assert contract_oig(colinear_oig, 0).keys == colinear_oig.keys
    assert len(contract_oig(colinear_oig, colinear_oig.lattice.ground.full)) == 1

    with pytest.raises(NotFeasibleError):
        contract_oig(colinear_oig, mask(colinear_oig, "y"))


def test_contraction_semigroup(debug_checks, colinear_oig):
    for x in colinear_oig.greedoid.members:
        assert check_contraction_semigroup(colinear_oig, x)
        below = [c for c in colinear_oig.covectors
                 if colinear_oig.lattice.leq(c.support, colinear_oig.lattice.flat_of(x))]
        assert len(contract_oig(colinear_oig, x)) == len(below)


def test_restrict(colinear_oig):
    restricted = restrict_oig(colinear_oig, mask(colinear_oig, "x", "y"))
    assert restricted.oig.keys == {"+1", "-1", "0+", "0-", "00"}
    assert not restricted.hypothesis_holds
    assert restricted.oig.report.passed_og123
    assert restricted.to_model().hypothesis_holds is False

    whole = restrict_oig(colinear_oig, colinear_oig.lattice.ground.full)
    assert whole.hypothesis_holds
    assert whole.oig.keys == colinear_oig.keys

    with pytest.raises(InputError):
        restrict_oig(colinear_oig, 1 << 7)


def test_restrict_to_xi(colinear_oig):
    single = restrict_to_xi(colinear_oig, mask(colinear_oig, "x"))
    assert single.greedoid.ground.labels == ("x",)
    assert single.keys == {"0", "+", "-"}

    empty = restrict_to_xi(colinear_oig, 0)
    assert empty.greedoid.ground.labels == ()
    assert len(empty) == 1


def test_restriction_semigroup(colinear_oig):
    """Restricting to xi([X]) matches the covectors above any anchor with support [X]"""
    lattice = colinear_oig.lattice
    for x in colinear_oig.greedoid.members:
        fx = lattice.flat_of(x)
        restricted = restrict_to_xi(colinear_oig, x)
        for anchor in (c for c in colinear_oig.covectors if c.support == fx):
            assert check_restriction_semigroup(colinear_oig, x, anchor)
            above = [c for c in colinear_oig.covectors if colinear_oig.algebra.leq(anchor, c)]
            assert len(restricted) == len(above)
    with pytest.raises(PreconditionError):
        check_restriction_semigroup(colinear_oig, mask(colinear_oig, "x"), colinear_oig.parse("+1+"))


def test_underlying_oriented_matroid(colinear_oig, rank1_complex, three_vectors):
    om = underlying_oriented_matroid(colinear_oig)
    assert om.greedoid.ground.labels == ("x", "z")
    assert len(om) == 9
    assert validate_om(2, om.keys).passed

    assert underlying_oriented_matroid(three_vectors).keys == three_vectors.keys

    complex_om = underlying_oriented_matroid(rank1_complex)
    assert complex_om.greedoid.ground.labels == ("H0^R",)
    assert len(complex_om) == 3


def test_bottom(colinear_oig, rank1_complex, three_vectors):
    assert bottom(colinear_oig).signs == "000"
    assert bottom(rank1_complex).signs == "00"
    assert bottom(three_vectors).signs == "000"


def test_drop_witness(colinear_oig):
    a, b = colinear_oig.parse("-+0"), colinear_oig.parse("+1+")
    assert drop_witness(colinear_oig, a, b).signs == "0++"

    with pytest.raises(PreconditionError):
        drop_witness(colinear_oig, bottom(colinear_oig), b)
    with pytest.raises(PreconditionError):
        drop_witness(colinear_oig, b, a)


def test_drop_witness_rank1_complex(rank1_complex):
    """(-,0) lies below (1,+), so there is nothing to drop"""
    a, b = rank1_complex.parse("-0"), rank1_complex.parse("1+")
    with pytest.raises(PreconditionError):
        drop_witness(rank1_complex, a, b)


def test_drop_witness_everywhere(colinear_oig, three_vectors):
    for oig in (colinear_oig, three_vectors):
        for a in oig.covectors:
            for b in oig.covectors:
                if oig.lattice.leq(a.support, b.support) and not oig.algebra.leq(a, b):
                    delta = drop_witness(oig, a, b)
                    assert oig.algebra.leq(delta, b) and delta != b


def test_classify_rank1(colinear_oig):
    oig = contract_oig(colinear_oig, mask(colinear_oig, "x", "y"))
    low, beta, minus = classify_rank1(oig)
    assert low.signs == "0"
    assert negate_signs(beta) == minus.signs
    with pytest.raises(PreconditionError):
        classify_rank1(colinear_oig)


def test_classify_rank2(colinear_oig, rank1_complex):
    assert classify_rank2(rank1_complex) == Rank2Class.SPECIAL
    free = om_from_vectors([(1, 0), (0, 1)], labels=["a", "b"])
    assert classify_rank2(free) == Rank2Class.ORIENTED_MATROID
    assert classify_rank2(contract_oig(colinear_oig, mask(colinear_oig, "x"))) == Rank2Class.ORIENTED_MATROID
    with pytest.raises(PreconditionError):
        classify_rank2(colinear_oig)


def test_validate_om():
    assert validate_om(2, ["00", "+0", "-0", "0+", "0-", "++", "+-", "-+", "--"]).passed
    assert not validate_om(2, ["+0", "-0"]).has_zero
    assert validate_om(2, ["00", "+0"]).om2_missing == ["+0"]
    with pytest.raises(InputError):
        validate_om(2, ["1+"])


def test_om_and_oig_validators_agree(three_vectors):
    """Both validators on single and paired perturbations of the vector configuration"""
    sys, lattice = three_vectors.greedoid, three_vectors.lattice
    flat_zeros = {lattice.xi(f) for f in range(len(lattice))}
    base = three_vectors.keys
    assert validate_om(3, base).passed
    assert three_vectors.report.passed

    candidates = []
    for v in ("".join(p) for p in product("+-0", repeat=3)):
        candidates.append(base ^ {v})
        candidates.append(base ^ {v, negate_signs(v)})
    for candidate in candidates:
        zeros_are_flats = all(mask_of(e for e, s in enumerate(c) if s == "0") in flat_zeros for c in candidate)
        as_oig = validate_oig(sys, candidate, lattice=lattice)
        assert as_oig.report.passed == (validate_om(3, candidate).passed and zeros_are_flats), sorted(candidate)


def test_bundle_round_trip(colinear_oig):
    bundle = colinear_oig.to_bundle()
    assert bundle.covectors == sorted(bundle.covectors)
    loaded = load_bundle(bundle)
    assert loaded.report.passed
    assert loaded.keys == colinear_oig.keys


def test_validation_progress(colinear_oig, colinear_system):
    progress_tracker.reset()
    validate_oig(colinear_system, colinear_oig.keys - {"0++", "0--"})
    summary = progress_tracker.get_status_summary()
    assert summary["total_components"] == 4
    assert summary["overall_progress"] == pytest.approx((25 + 50 + 75 + 100) / 4)
    assert "OG1" not in {c["id"] for c in summary["failed_components"]}
    assert summary["failed_components"]
