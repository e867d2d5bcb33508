import pytest
from hypothesis import given, settings, strategies as st

from kgt.catalog import b1, one_square, two_loop
from kgt.groups import (
    FiniteGroup,
    ProfiniteElement,
    all_elements,
    bd_chain,
    check_homomorphism,
    cocycle_of_path,
    cyclic_chain,
    multiply,
    project_Qn,
    s3_chain,
    trivial_chain,
    truncate,
    validate_chain,
    validate_cocycle,
)
from kgt.errors import (
    ChainIncompatible,
    GroupAxiomError,
    GroupTooLarge,
    MissingLabel,
    NotAHomomorphism,
    SquareIncompatible,
    SurjectivityFailure,
)


def test_group_axioms_rejected():
    with pytest.raises(GroupAxiomError):
        FiniteGroup([0, 1], [[0, 1], [1, 1]])  # 1 has no inverse
    with pytest.raises(GroupAxiomError):
        FiniteGroup([0, 1], [[0, 0], [0, 0]])  # no identity
    with pytest.raises(GroupAxiomError):
        FiniteGroup.from_products(["e", "x"], [["e", "x"], ["x", "y"]])


def test_group_size_cap(monkeypatch):
    monkeypatch.setenv("KGT_MAX_GROUP", "8")
    FiniteGroup.cyclic(8)
    with pytest.raises(GroupTooLarge):
        FiniteGroup.cyclic(9)


def test_symmetric_group_is_nonabelian():
    s3 = FiniteGroup.symmetric(3)
    assert len(s3) == 6 and s3.identity == (0, 1, 2)
    t, r = (1, 0, 2), (1, 2, 0)
    assert s3.mul(t, r) != s3.mul(r, t)
    assert s3.mul(r, s3.inv(r)) == s3.identity
    assert s3.element([1, 2, 0]) == r


def test_homomorphism_checks():
    z4, z2 = FiniteGroup.cyclic(4), FiniteGroup.cyclic(2)
    check_homomorphism(z4, z2, {x: x % 2 for x in z4})
    with pytest.raises(NotAHomomorphism):
        check_homomorphism(z4, z2, {0: 0, 1: 1, 2: 1, 3: 0})
    with pytest.raises(SurjectivityFailure):
        check_homomorphism(z4, z2, {x: 0 for x in z4})


def test_cocycle_examples():
    z2 = FiniteGroup.cyclic(2)
    validate_cocycle(b1(), {"f": 1}, z2)
    validate_cocycle(two_loop(), {"a": 0, "b": 0}, z2)
    with pytest.raises(MissingLabel):
        validate_cocycle(two_loop(), {"a": 0}, z2)
    s3 = FiniteGroup.symmetric(3)
    with pytest.raises(SquareIncompatible):
        validate_cocycle(one_square(), {"a": (1, 0, 2), "b": (1, 2, 0)}, s3)


def test_cocycle_of_path():
    cc = bd_chain(4)
    f = cc.graph.path(["f"] * 5)
    for n in range(1, 5):
        assert cc.c(n)(f) == 5 % 2 ** (n - 1)
    assert cc.c(3)(cc.graph.vertex("v")) == 0
    s3 = FiniteGroup.symmetric(3)
    g = one_square()
    c = validate_cocycle(g, {"a": (1, 2, 0), "b": (2, 0, 1)}, s3)
    ab = g.path(["a", "b"])
    assert cocycle_of_path(c, ab) == s3.mul(c("a"), c("b")) == s3.mul(c("b"), c("a"))


def test_chain_examples():
    cc = bd_chain(3)
    assert len(cc.group(3)) == 4
    assert list(bd_chain(1).group(1)) == [0]
    assert cc.chain.q(2, 3) == 1
    trivial_chain(b1(), 3)
    chain = cyclic_chain([1, 2, 4])
    g = b1()
    cocycles = [validate_cocycle(g, {"f": x}, chain.group(n)) for n, x in zip((1, 2, 3), (0, 0, 3))]
    with pytest.raises(ChainIncompatible) as ei:
        validate_chain(chain, cocycles)
    assert ei.value.details["level"] == 2 and ei.value.details["edge"] == "f"


def test_profinite_examples():
    cc = bd_chain(4)
    g = ProfiniteElement.from_top(cc.chain, 1)
    assert g.components == (0, 1, 1, 1)
    assert multiply(g, g).components == (0, 0, 2, 2)
    assert g * ProfiniteElement.identity(cc.chain) == g
    assert project_Qn(cc.profinite_value(cc.graph.path(["f"])), 3) == 1
    assert truncate(g, 2).components == (0, 1)
    with pytest.raises(ChainIncompatible):
        ProfiniteElement(cc.chain, (0, 1, 2, 2))


def test_s3_chain_is_nonabelian_and_compatible():
    cc = s3_chain()
    assert [len(cc.group(n)) for n in (1, 2, 3)] == [1, 2, 6]
    top = cc.c(3)
    s3 = cc.group(3)
    assert s3.mul(top("a0"), top("b0")) != s3.mul(top("b0"), top("a0"))
    assert cc.graph.k == 2


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 31), st.integers(0, 31), st.integers(0, 31))
def test_profinite_group_laws(a, b, c):
    chain = bd_chain(6).chain
    x, y, z = (ProfiniteElement.from_top(chain, t) for t in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * x.inverse() == ProfiniteElement.identity(chain)
    for n in range(1, 7):
        assert (x * y).project(n) == chain.group(n).mul(x.project(n), y.project(n))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_cocycle_is_multiplicative(data):
    cc = s3_chain()
    g = cc.graph
    n = data.draw(st.integers(1, 3))
    d1 = (data.draw(st.integers(0, 2)), data.draw(st.integers(0, 2)))
    d2 = (data.draw(st.integers(0, 2)), data.draw(st.integers(0, 2)))
    mu = data.draw(st.sampled_from(g.paths_of_degree(d1)))
    nu = data.draw(st.sampled_from(g.paths_of_degree(d2)))
    from kgt.core import compose

    c = cc.c(n)
    assert c(compose(mu, nu)) == cc.group(n).mul(c(mu), c(nu))


def test_all_elements_counts():
    chain = bd_chain(4).chain
    assert len(all_elements(chain)) == 8
    assert len(all_elements(chain, 2)) == 2
