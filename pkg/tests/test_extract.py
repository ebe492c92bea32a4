import itertools
import random
from fractions import Fraction

from interpforce.core import BUILTINS, z_of
from interpforce.extract import (IN, OUT, Extraction, complete_enumeration, extract_domain, extract_quotient,
                                 extract_relation, extract_sim, find_isomorphism, frak_F, verify_extraction)
from interpforce.forcing import Bounds
from interpforce.functors import ConstantFunctor, FracFieldFunctor, IdentityFunctor, copy_iso, sample_copies
from interpforce.report import Report

pureset, omega, pairs, zring = (BUILTINS[n]() for n in ("pureset", "omega", "pairs", "zring"))
wide = Bounds(pool=10, length=3, depth=4)
on_omega = IdentityFunctor(omega.signature, omega.universe_hint)
constant = ConstantFunctor(omega, pureset.signature)


def test_domain_examples():
    assert extract_domain(on_omega, omega, (4, 7), 1, wide) == IN
    assert extract_domain(on_omega, omega, (4,), 3, wide) == OUT
    assert extract_domain(constant, pureset, (), 5, wide) == IN


def test_sim_examples():
    assert extract_sim(on_omega, omega, ((4, 7), 1), ((7,), 0), wide) == IN
    assert extract_sim(on_omega, omega, ((4, 7), 0), ((7,), 0), wide) == OUT
    assert extract_sim(constant, pureset, ((0,), 2), ((1,), 2), wide) == IN
    assert extract_sim(constant, pureset, ((0,), 2), ((1,), 3), wide) == OUT


def test_sim_is_reflexive_on_domain():
    ex = Extraction(on_omega, Bounds(pool=5, length=2, depth=4))
    for c in itertools.permutations(range(5), 2):
        for i in range(2):
            assert ex.sim(omega, (c, i), (c, i)) == IN


def test_relation_examples():
    assert extract_relation(on_omega, omega, "Lt", [((3, 9), 0), ((9,), 0)], wide) == IN
    assert extract_relation(constant, pureset, "Lt", [((), 2), ((), 5)], wide) == IN
    assert extract_relation(constant, pureset, "Lt", [((), 5), ((), 2)], wide) == OUT


def test_relation_is_stable_under_sim():
    ex = Extraction(on_omega, wide)
    first = ex.relation(omega, "Lt", [((3, 9), 0), ((9,), 0)])[0]
    swapped = ex.relation(omega, "Lt", [((3,), 0), ((9,), 0)])[0]
    assert first == swapped == IN


def test_generic_map_examples():
    assert frak_F((9, 2), 1, on_omega, wide, base=omega) == ((9, 2), 1)
    ex = Extraction(constant, wide)
    assert ex.frak_generic(pureset, (3, 1, 0), 4)[1] == 4


def test_generic_map_independent_of_generic_up_to_sim():
    ex = Extraction(on_omega, Bounds(pool=8, length=3, depth=4))
    x = ex.frak_generic(omega, (5, 2, 7), 1)
    y = ex.frak_generic(omega, (3, 2, 6), 1)
    assert ex.sim(omega, x, y) == IN


def test_complete_enumeration_is_bijective_prefix_extension():
    fn = complete_enumeration((4, 1, 7))
    vals = [fn(k) for k in range(12)]
    assert vals[:3] == [4, 1, 7] and sorted(vals) == list(range(12))


def test_brute_force_isomorphism():
    chain = {"Lt": {(a, b) for a in range(4) for b in range(4) if a < b}}
    reversed_chain = {"Lt": {(b, a) for a, b in chain["Lt"]}}
    iso = find_isomorphism(4, chain, reversed_chain, {"Lt": 2})
    assert iso == {0: 3, 1: 2, 2: 1, 3: 0}
    assert find_isomorphism(3, {"Lt": set()}, {"Lt": {(0, 1)}}, {"Lt": 2}) is None


def test_identity_ladder_on_pairs():
    F = IdentityFunctor(pairs.signature, pairs.universe_hint)
    g = list(range(6))
    random.Random(1).shuffle(g)
    cs = sample_copies(pairs, 4, seed=3)
    res = verify_extraction(F, pairs, Bounds(pool=6, length=3, depth=4), g,
                            morphisms=[copy_iso(cs[0], cs[1])], index_bound=6, compare_with=pairs)
    assert res.report.gate, [r.as_json() for r in res.report.failures()]
    assert res.isomorphism is not None


def test_constant_extraction_sim_is_index_equality():
    res = verify_extraction(constant, pureset, Bounds(pool=4, length=2, depth=4), [2, 0, 1, 3],
                            index_bound=8, compare_with=omega)
    assert res.report.gate and res.fragment.size == 8
    by_index = {}
    for x in res.fragment.elements:
        by_index.setdefault(x[1], set()).add(res.fragment.class_of[x])
    assert all(len(v) == 1 for v in by_index.values()) and len(by_index) == 8


def rationals_along(g, count):
    """Independent oracle: rationals z(g a)/z(g b) in height order of index pairs (a, b)."""
    out, h = [], 0
    while len(out) < count:
        for a, b in itertools.product(range(h + 1), repeat=2):
            if max(a, b) != h or z_of(g[b]) == 0:
                continue
            q = Fraction(z_of(g[a]), z_of(g[b]))
            if q not in out and len(out) < count:
                out.append(q)
        h += 1
    return out


def test_fraction_field_extraction_matches_rationals():
    g = list(range(200))
    g[3], g[5] = g[5], g[3]
    report = Report("extraction")
    frak, rels, _ = extract_quotient(Extraction(FracFieldFunctor(), Bounds(pool=8, length=3, depth=4)),
                                     zring, g, 8, report)
    vals = rationals_along(g, 8)
    assert report.gate
    for i, j, k in itertools.product(range(8), repeat=3):
        assert ((i, j, k) in rels["Add"]) == (vals[i] + vals[j] == vals[k])
        assert ((i, j, k) in rels["Mul"]) == (vals[i] * vals[j] == vals[k])
