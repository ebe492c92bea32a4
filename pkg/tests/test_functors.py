import pytest

from interpforce.core import BUILTINS, FinitePerm
from interpforce.functors import (ConstantFunctor, CopyStandardizer, FracFieldFunctor, IdentityFunctor,
                                  NaturalTransformation, automorphism, check_adjoint_equivalence,
                                  check_functor_laws, check_natural_iso, check_restriction,
                                  class_collapse_homomorphism, composable_samples, copy_iso,
                                  functor_from_homomorphism, functor_by_name, identity_homomorphism,
                                  identity_morphism, identity_transformation, iso_from_equivalence,
                                  sample_copies)
from interpforce.core import RejectedInput

pureset, pairs, omega, zring = (BUILTINS[n]() for n in ("pureset", "pairs", "omega", "zring"))


def morphisms(base, n, seed=0):
    cs = sample_copies(base, 2 * n, seed=seed)
    return [copy_iso(cs[2 * k], cs[2 * k + 1]) for k in range(n)]


def test_identity_functor_laws():
    F = IdentityFunctor(pairs.signature, pairs.universe_hint)
    rep = check_functor_laws(F, composable_samples(pairs, 10))
    assert rep.gate and len(rep.records) == 30


def test_constant_functor_sends_everything_to_identity():
    C = ConstantFunctor(omega, pureset.signature)
    rep = check_functor_laws(C, composable_samples(pureset, 10))
    assert rep.gate
    h = morphisms(pureset, 1)[0]
    assert [C.morphism(h)(i) for i in range(8)] == list(range(8))


def test_fraction_field_functor_laws_on_integer_copies():
    rep = check_functor_laws(FracFieldFunctor(), composable_samples(zring, 5), bound=16)
    assert rep.gate, [r.as_json() for r in rep.failures()]


def test_identity_transformation_is_natural():
    F = IdentityFunctor(pairs.signature, pairs.universe_hint)
    assert check_natural_iso(F, F, identity_transformation(), morphisms(pairs, 6)).gate


def test_corrupted_transformation_reports_square():
    F = IdentityFunctor(pureset.signature, pureset.universe_hint)
    swap = FinitePerm.swap(0, 1)
    eta = NaturalTransformation("swapped", lambda X: swap, lambda X: swap.inv)
    rep = check_natural_iso(F, F, eta, morphisms(pureset, 6), negative=True)
    bad = [r for r in rep.records if r.verdict == "fail"]
    assert bad and bad[0].witness is not None and bad[0].negative_control
    assert rep.gate


def test_identity_adjoint_equivalence_passes():
    F = IdentityFunctor(pairs.signature, pairs.universe_hint)
    ms = morphisms(pairs, 4)
    rep = check_adjoint_equivalence(F, F, identity_transformation(), identity_transformation(), ms, ms)
    assert rep.gate and any(r.check == "triangle-F" for r in rep.records)


def test_perturbed_counit_fails_triangle():
    F = IdentityFunctor(pureset.signature, pureset.universe_hint)
    swap = FinitePerm.swap(2, 3)
    eps = NaturalTransformation("bent", lambda X: swap, lambda X: swap.inv)
    ms = morphisms(pureset, 3)
    rep = check_adjoint_equivalence(F, F, identity_transformation(), eps, ms, ms, negative=True)
    assert any(r.check == "triangle-F" and r.verdict == "fail" for r in rep.records)


def test_homomorphism_functor_identity_on_pure_set():
    G = functor_from_homomorphism(identity_homomorphism(), CopyStandardizer(pureset), pureset)
    f = automorphism(pureset, FinitePerm.swap(3, 5))
    assert [G.morphism(f)(i) for i in range(8)] == [f(i) for i in range(8)]
    assert check_restriction(G, identity_homomorphism(), [f]).gate
    idm = G.morphism(identity_morphism(pureset))
    assert [idm(i) for i in range(8)] == list(range(8))


def test_class_collapse_of_within_pair_swap_is_identity():
    H = class_collapse_homomorphism()
    G = functor_from_homomorphism(H, CopyStandardizer(pairs), pureset)
    f = automorphism(pairs, FinitePerm.swap(0, 1))
    assert [G.morphism(f)(k) for k in range(6)] == list(range(6))
    across = automorphism(pairs, FinitePerm.from_map({0: 2, 1: 3, 2: 0, 3: 1}))
    assert [H.apply(across)(k) for k in range(3)] == [1, 0, 2]


def test_identity_equivalence_yields_identity_homomorphisms():
    F = IdentityFunctor(pureset.signature, pureset.universe_hint)
    autos = [automorphism(pureset, FinitePerm.swap(a, a + 1)) for a in range(4)]
    H1, H2, rep = iso_from_equivalence(F, F, identity_transformation(), identity_transformation(),
                                       pureset, autos, autos)
    assert rep.gate
    assert [H1.apply(autos[0])(i) for i in range(4)] == [1, 0, 2, 3]
    assert [H2.apply(autos[1])(i) for i in range(4)] == [0, 2, 1, 3]


def test_functor_registry():
    assert functor_by_name("identity", pairs).name
    with pytest.raises(RejectedInput):
        functor_by_name("no-such-functor", pairs)
