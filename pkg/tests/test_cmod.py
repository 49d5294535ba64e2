import random

import pytest
from hypothesis import given, settings, strategies as st

from kanex.cmod import (
    CO,
    CONTRA,
    CModule,
    CModuleMap,
    ModulePresentation,
    PreaddCat,
    RingPresentation,
    comparison_map,
    free_module,
    free_presentation,
    module_direct_sum,
    module_kernel_cokernel,
    module_to_functor,
    opposite_preadd,
    preadd_skeleton,
    regular_module,
    ring_to_category,
    tensor_bilinear_oracle,
    tensor_coend,
    tensor_coend_data,
    tensor_coend_map,
    tensor_coend_underlying,
    tensor_resolution,
    tensor_resolution_data,
    tensor_resolution_map,
    underlying_category,
    validate_module,
    validate_module_map,
    validate_preadd,
    validate_ring,
    yoneda_map,
    zero_module,
)
from kanex.errors import IllDefinedAction, InvalidRing
from kanex.finab import AbMap, FgAbGroup, copair, direct_sum, is_epi, is_exact
from kanex.fincat import validate_category
import corpus
import oracles

seeds = st.integers(0, 2**32 - 1)


def triangular(n: int) -> PreaddCat:
    """Objects 1, 2 with hom(2, 1) = 0 and every other hom group Z/n; composition is multiplication."""
    objs = ("1", "2")
    hom = {}
    for x in objs:
        for y in objs:
            hom[(x, y)] = FgAbGroup.zero() if (x, y) == ("2", "1") else FgAbGroup.from_invariants([n])
    table = {}
    for x in objs:
        for y in objs:
            for z in objs:
                rz, ry = hom[(y, z)].rank, hom[(x, y)].rank
                table[(x, y, z)] = [[[1] * hom[(x, z)].rank for _ in range(ry)] for _ in range(rz)]
    return PreaddCat(objs, hom, table, {"1": (1,), "2": (1,)})


def doubled_ring(n: int) -> PreaddCat:
    """Two isomorphic copies of Z/n."""
    objs = ("A", "B")
    hom = {(x, y): FgAbGroup.from_invariants([n]) for x in objs for y in objs}
    table = {(x, y, z): [[[1]]] for x in objs for y in objs for z in objs}
    return PreaddCat(objs, hom, table, {"A": (1,), "B": (1,)})


def modules_over(c: PreaddCat, variance: str):
    """Representables, their sums, and quotients of free modules."""
    out = [free_module(c, [x], variance) for x in c.objects]
    out.append(free_module(c, list(c.objects), variance))
    for x in c.objects:
        P = free_module(c, [x], variance)
        y = c.objects[-1]
        for v in ([2], [1]):
            vec = [k for k in v] + [0] * (P.values[x].rank - 1)
            if len(vec) == P.values[x].rank:
                kc = module_kernel_cokernel(yoneda_map(free_module(c, [x], variance), P, [tuple(vec)]))
                out.append(kc.cokernel)
        out.append(module_direct_sum([P, free_module(c, [y], variance)])[0])
    return out


@pytest.mark.parametrize("c", [triangular(2), triangular(3), doubled_ring(2), doubled_ring(4)])
def test_preadditive_categories_are_valid(c):
    assert validate_preadd(c) == []
    assert validate_preadd(opposite_preadd(c)) == []
    U, reps = underlying_category(c)
    assert validate_category(U) == []


def test_bad_composition_detected():
    c = triangular(2)
    t = dict(c.table)
    t[("1", "1", "1")] = [[[0]]]
    bad = PreaddCat(c.objects, c.hom, t, c.identity)
    assert validate_preadd(bad)


def test_infinite_hom_rejected():
    c = PreaddCat(("*",), {("*", "*"): FgAbGroup.free(1)}, {("*", "*", "*"): [[[1]]]}, {"*": (1,)})
    assert validate_preadd(c)[0].law == "preadd.hom"


@pytest.mark.parametrize("c", [triangular(2), doubled_ring(2), triangular(3)])
def test_modules_are_valid(c):
    for var in (CONTRA, CO):
        for m in modules_over(c, var):
            assert validate_module(m) == []


def test_skeleton_of_doubled_ring():
    sk = preadd_skeleton(doubled_ring(2))
    assert sk.category.objects == ("A",)
    assert sk.representative == {"A": "A", "B": "A"}


@pytest.mark.parametrize("c", [triangular(2), doubled_ring(2), triangular(3)])
def test_tensor_methods_agree(c):
    for f in modules_over(c, CO):
        for g in modules_over(c, CONTRA):
            res = tensor_resolution(f, g)
            cot = tensor_coend(f, g)
            assert res.invariants == cot.invariants
            assert tensor_coend(f, g, use_skeleton=False).invariants == cot.invariants
            assert comparison_map(f, g).is_iso()


@pytest.mark.parametrize("c", [triangular(2), doubled_ring(2)])
def test_generator_coend_matches_elementwise_coend(c):
    for f in modules_over(c, CO)[:3]:
        for g in modules_over(c, CONTRA)[:3]:
            assert tensor_coend_underlying(f, g).invariants == tensor_coend(f, g).invariants


@pytest.mark.parametrize("c", [triangular(2), triangular(3), doubled_ring(4)])
def test_yoneda_reduction(c):
    # F ⊗ Hom(−, X) ≅ F(X)
    for f in modules_over(c, CO):
        for x in c.objects:
            assert tensor_coend(f, free_module(c, [x], CONTRA)).invariants == f.values[x].invariants


def test_free_presentation_is_exact():
    c = triangular(2)
    for g in modules_over(c, CONTRA):
        p = free_presentation(g)
        assert validate_module_map(p.epsilon) == []
        for x in c.objects:
            assert is_epi(p.epsilon.components[x])
            assert is_exact(p.d.components[x], p.epsilon.components[x])


def test_zero_module_tensor():
    c = triangular(2)
    z = zero_module(c, CONTRA)
    f = free_module(c, ["1"], CO)
    assert tensor_coend(f, z).render() == "0"
    assert tensor_resolution(f, z).render() == "0"


def test_two_object_example_values():
    c = triangular(2)
    f = free_module(c, ["1"], CO)  # Hom(1, −)
    g = free_module(c, ["2"], CONTRA)  # Hom(−, 2)
    assert tensor_coend(f, g).render() == "Z/2"  # Hom(1, 2)
    assert tensor_coend(free_module(c, ["2"], CO), free_module(c, ["1"], CONTRA)).render() == "0"


# ------------------------------------------------------------------ rings


def test_ring_validation():
    assert validate_ring(corpus.cyclic_ring(4)) == (1,)
    assert validate_ring(corpus.boolean_square_ring()) == (1, 1)
    with pytest.raises(InvalidRing):
        validate_ring(RingPresentation([4], [[2]]))  # no unit
    with pytest.raises(InvalidRing):
        validate_ring(RingPresentation([0], [[1]]))
    with pytest.raises(InvalidRing):
        # e1·e2 = e1 but e2·e1 = 0 breaks associativity
        validate_ring(RingPresentation([2, 2], [[[1, 0], [1, 0]], [[0, 0], [0, 1]]]))


def test_additivity_violation_rejected():
    r = corpus.cyclic_ring(4)
    m = ModulePresentation(r, [2], {1: [[1]], 2: [[1]]}, "right")
    with pytest.raises(IllDefinedAction):
        module_to_functor(m)


def test_action_must_respect_relations():
    r = corpus.cyclic_ring(2)
    with pytest.raises(IllDefinedAction):
        module_to_functor(ModulePresentation(r, [4], {1: [[1]]}, "left"))


def test_pinned_tensor_values():
    r = corpus.cyclic_ring(4)
    a = ModulePresentation(r, [2], {1: [[1]]}, "right")
    b = ModulePresentation(r, [2], {1: [[1]]}, "left")
    base = ring_to_category(r)
    fa, fb = module_to_functor(a, base), module_to_functor(b, base)
    assert tensor_coend(fb, fa).render() == "Z/2"
    assert tensor_resolution(fb, fa).render() == "Z/2"
    assert tensor_bilinear_oracle(a, b).render() == "Z/2"


@pytest.mark.parametrize("name,ring", corpus.ring_corpus(), ids=[n for n, _ in corpus.ring_corpus()])
def test_regular_module_is_a_unit(name, ring):
    base = ring_to_category(ring)
    reg = module_to_functor(regular_module(ring, "right"), base)
    for b in corpus.ring_modules(ring, "left"):
        fb = module_to_functor(b, base)
        assert tensor_coend(fb, reg).invariants == b.group.invariants
        assert tensor_resolution(fb, reg).invariants == b.group.invariants


@pytest.mark.parametrize("name,ring", corpus.ring_corpus(), ids=[n for n, _ in corpus.ring_corpus()])
def test_oracle_agrees_with_dual_counts(name, ring):
    for a in corpus.ring_modules(ring, "right"):
        for b in corpus.ring_modules(ring, "left")[:4]:
            t = tensor_bilinear_oracle(a, b)
            assert oracles.matches_dual_counts(t.invariants, a, b)


# ---------------------------------------------- exactness and coproducts


def _ring_setup(n=4):
    r = corpus.cyclic_ring(n)
    base = ring_to_category(r)
    rights = [module_to_functor(m, base) for m in corpus.ring_modules(r, "right") if len(m.invariants) <= 2]
    lefts = [module_to_functor(m, base) for m in corpus.ring_modules(r, "left") if len(m.invariants) <= 2]
    return rights, lefts


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_right_exactness(seed):
    rng = random.Random(seed)
    rights, lefts = _ring_setup(rng.choice([4, 6]))
    f = rng.choice(lefts)
    for i, p in corpus.short_exact_sequences(rng, rights, 2):
        fi, fp = tensor_coend_map(f, i), tensor_coend_map(f, p)
        assert is_exact(fi, fp)
        assert is_epi(fp)
        ri, rp = tensor_resolution_map(f, i), tensor_resolution_map(f, p)
        assert is_exact(ri, rp) and is_epi(rp)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_coproduct_preservation(seed):
    rng = random.Random(seed)
    rights, lefts = _ring_setup(rng.choice([2, 4]))
    f, g1, g2 = rng.choice(lefts), rng.choice(rights), rng.choice(rights)
    S, inj = module_direct_sum([g1, g2])
    whole = tensor_coend_data(f, S)
    parts = [tensor_coend(f, g1), tensor_coend(f, g2)]
    total, _ = direct_sum(parts)
    assert whole.group.invariants == total.invariants
    legs = [tensor_coend_map(f, k, dst=whole) for k in inj]
    assert copair(total, legs, whole.group).is_iso()


def test_maps_compose():
    rights, lefts = _ring_setup(4)
    f = lefts[2]
    g = rights[2]
    ident = CModuleMap(g, g, {"*": AbMap.identity(g.values["*"])})
    assert tensor_coend_map(f, ident) == AbMap.identity(tensor_coend(f, g))
    data = tensor_resolution_data(f, g)
    assert tensor_resolution_map(f, ident, data, data) == AbMap.identity(data.group)


def test_modules_with_wrong_variance_rejected():
    rights, lefts = _ring_setup(2)
    with pytest.raises(Exception):
        tensor_coend(rights[1], lefts[1])
    assert isinstance(rights[1], CModule)
