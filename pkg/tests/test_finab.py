import pytest
from hypothesis import given, settings, strategies as st

from kanex.errors import IllDefinedMap
from kanex.finab import (
    AbMap,
    FgAbGroup,
    are_isomorphic,
    coequalizer_ab,
    copair,
    direct_sum,
    direct_sum_projections,
    is_epi,
    is_exact,
    is_mono,
    kernel_cokernel,
    lift,
    render_invariants,
    tensor_maps,
    tensor_z,
)
from oracles import sympy_invariants

factors = st.lists(st.sampled_from([0, 1, 2, 3, 4, 6, 8, 9, 12]), max_size=4)


def presentations():
    return st.integers(0, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), max_size=4).map(
            lambda rels: FgAbGroup(n, rels)))


@settings(max_examples=100, deadline=None)
@given(presentations())
def test_invariants_match_sympy(g):
    assert g.invariants == sympy_invariants(g.rank, g.relators)


@settings(max_examples=60, deadline=None)
@given(factors)
def test_from_invariants_is_canonical(fs):
    g = FgAbGroup.from_invariants(fs)
    assert g.invariants == sympy_invariants(len(fs), [[d if i == j else 0 for i in range(len(fs))]
                                                     for j, d in enumerate(fs) if d])


def test_cyclic_decomposition():
    assert FgAbGroup.from_invariants([2, 3]).render() == "Z/6"
    assert FgAbGroup.from_invariants([0, 2, 4]).render() == "Z ⊕ Z/2 ⊕ Z/4"
    assert FgAbGroup.from_invariants([0, 0]).render() == "Z^2"
    assert FgAbGroup.zero().render() == "0"
    assert render_invariants(()) == "0"
    assert FgAbGroup.from_invariants([1, 1]).render() == "0"


def test_order_and_elements():
    g = FgAbGroup.from_invariants([2, 4])
    assert g.order() == 8
    assert len(list(g.elements())) == 8
    assert FgAbGroup.free(1).order() is None


@settings(max_examples=60, deadline=None)
@given(factors, factors)
def test_tensor_over_z(a, b):
    A, B = FgAbGroup.from_invariants(a), FgAbGroup.from_invariants(b)
    T = tensor_z(A, B)
    from math import gcd
    want = [gcd(x, y) for x in a for y in b]
    assert T.invariants == FgAbGroup.from_invariants(want).invariants


def test_small_tensors():
    assert tensor_z(FgAbGroup.from_invariants([4]), FgAbGroup.from_invariants([6])).render() == "Z/2"
    assert tensor_z(FgAbGroup.free(1), FgAbGroup.from_invariants([5])).render() == "Z/5"


def test_map_equality_is_modulo_relations():
    z2 = FgAbGroup.from_invariants([2])
    assert AbMap(z2, z2, [[3]]) == AbMap.identity(z2)
    assert AbMap(z2, z2, [[2]]).is_zero()


def test_ill_defined_map_rejected():
    z2, z3 = FgAbGroup.from_invariants([2]), FgAbGroup.from_invariants([3])
    assert not AbMap(z2, z3, [[1]]).is_well_defined()
    with pytest.raises(IllDefinedMap):
        kernel_cokernel(AbMap(z2, z3, [[1]]))


def test_kernel_cokernel_of_multiplication():
    z = FgAbGroup.free(1)
    kc = kernel_cokernel(AbMap(z, z, [[2]]))
    assert kc.kernel.render() == "0"
    assert kc.cokernel.render() == "Z/2"
    z4 = FgAbGroup.from_invariants([4])
    kc = kernel_cokernel(AbMap(z4, z4, [[2]]))
    assert kc.kernel.render() == "Z/2" and kc.cokernel.render() == "Z/2"
    assert is_exact(kc.inclusion, AbMap(z4, z4, [[2]]))


def random_map(data, A, B):
    m = data.draw(st.lists(st.lists(st.integers(-4, 4), min_size=A.rank, max_size=A.rank),
                           min_size=B.rank, max_size=B.rank))
    f = AbMap(A, B, m)
    return f


@settings(max_examples=60, deadline=None)
@given(factors, factors, st.data())
def test_kernel_cokernel_sequence_is_exact(a, b, data):
    A, B = FgAbGroup.from_invariants(a), FgAbGroup.from_invariants(b)
    f = random_map(data, A, B)
    if not f.is_well_defined():
        return
    kc = kernel_cokernel(f)
    assert is_mono(kc.inclusion)
    assert is_epi(kc.projection)
    assert is_exact(kc.inclusion, f)
    assert is_exact(f, kc.projection)
    assert kc.projection.compose(f).is_zero()


@settings(max_examples=40, deadline=None)
@given(factors, factors, st.data())
def test_lift_finds_preimages(a, b, data):
    A, B = FgAbGroup.from_invariants(a), FgAbGroup.from_invariants(b)
    f = random_map(data, A, B)
    x = data.draw(st.lists(st.integers(-5, 5), min_size=A.rank, max_size=A.rank))
    y = lift(f, f(x))
    assert y is not None and B.equal(f(y), f(x))


@settings(max_examples=40, deadline=None)
@given(st.lists(factors, min_size=1, max_size=3))
def test_direct_sum_universal(parts):
    groups = [FgAbGroup.from_invariants(p) for p in parts]
    S, inj = direct_sum(groups)
    proj = direct_sum_projections(S, groups)
    for i, p in enumerate(proj):
        for j, q in enumerate(inj):
            want = AbMap.identity(groups[i]) if i == j else AbMap.zero(groups[j], groups[i])
            assert p.compose(q) == want
    assert copair(S, inj, S) == AbMap.identity(S)


def test_coequalizer_of_parallel_pair():
    z = FgAbGroup.free(1)
    q, proj = coequalizer_ab(AbMap(z, z, [[3]]), AbMap(z, z, [[1]]))
    assert q.render() == "Z/2"
    assert proj.compose(AbMap(z, z, [[3]])) == proj.compose(AbMap(z, z, [[1]]))


def test_tensor_maps_functorial():
    z4, z6 = FgAbGroup.from_invariants([4]), FgAbGroup.from_invariants([6])
    f, g = AbMap(z4, z4, [[3]]), AbMap(z6, z6, [[5]])
    assert tensor_maps(f, g).compose(tensor_maps(f, g)) == tensor_maps(f.compose(f), g.compose(g))
    assert tensor_maps(AbMap.identity(z4), AbMap.identity(z6)) == AbMap.identity(tensor_z(z4, z6))


def test_isomorphism_is_by_invariants():
    assert are_isomorphic(FgAbGroup(2, [[2, 0], [0, 3]]), FgAbGroup.from_invariants([6]))
    assert not are_isomorphic(FgAbGroup.from_invariants([4]), FgAbGroup.from_invariants([2, 2]))
