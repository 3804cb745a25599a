import pytest
from hypothesis import given, settings, strategies as st

from pelks.algebra import LocalSeriesElement as S
from pelks.cyclic_algebra import (
    CyclicAlgebraDescriptor,
    CyclicAlgebraElement,
    discriminant_report,
)

QUAT = CyclicAlgebraDescriptor(n=2, residue_size=2)
BC = CyclicAlgebraDescriptor(n=2, residue_size=3, conjugation_power=1)
CUBIC = CyclicAlgebraDescriptor(n=3, residue_size=2)
SPLIT = CyclicAlgebraDescriptor(n=1, residue_size=5, split=True)


def _elements(desc, maxval=2):
    field = desc.field

    def build(data):
        coeffs = []
        for code, v in data:
            if code:
                coeffs.append(S(field, v, (field(code),)))
            else:
                coeffs.append(S.zero(field))
        return desc.element(coeffs)

    return st.lists(
        st.tuples(st.integers(0, field.size - 1), st.integers(0, maxval)),
        min_size=desc.n,
        max_size=desc.n,
    ).map(build)


# -- descriptor validation ----------------------------------------------------


def test_descriptor_rejects_bad_frobenius_power():
    with pytest.raises(ValueError):
        CyclicAlgebraDescriptor(n=2, residue_size=3, frobenius_power=2)


def test_descriptor_rejects_bad_conjugation_power():
    with pytest.raises(ValueError):
        CyclicAlgebraDescriptor(n=3, residue_size=2, conjugation_power=1)


def test_descriptor_accepts_half_period_conjugation():
    CyclicAlgebraDescriptor(n=4, residue_size=3, conjugation_power=2)


def test_split_descriptor_needs_degree_one():
    with pytest.raises(ValueError):
        CyclicAlgebraDescriptor(n=2, residue_size=3, split=True)


# -- multiplication -----------------------------------------------------------


@given(_elements(BC), _elements(BC), _elements(BC))
@settings(max_examples=40, deadline=None)
def test_multiplication_is_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_u_commutation_rule():
    for desc in (QUAT, BC, CUBIC):
        u = desc.u()
        zeta = desc.scalar(S(desc.field, 0, (desc.field.generator,)))
        tau_zeta = desc.scalar(desc.tau(zeta.coeffs[0]))
        assert u * zeta == tau_zeta * u


def test_u_power_is_uniformizer():
    for desc in (QUAT, BC, CUBIC):
        acc = desc.one()
        for _ in range(desc.n):
            acc = acc * desc.u()
        assert acc == desc.scalar(S.pi_power(desc.field, 1))


# -- matrix model -------------------------------------------------------------


@given(_elements(BC), _elements(BC))
@settings(max_examples=40, deadline=None)
def test_matrix_model_is_a_ring_homomorphism(a, b):
    assert (a * b).to_matrix().agrees_with(a.to_matrix() @ b.to_matrix())
    assert (a + b).to_matrix().agrees_with(a.to_matrix() + b.to_matrix())


@given(_elements(CUBIC))
@settings(max_examples=30, deadline=None)
def test_matrix_roundtrip(a):
    assert CyclicAlgebraElement.from_matrix(CUBIC, a.to_matrix()) == a


def test_from_matrix_rejects_noncyclic():
    field = QUAT.field
    z = S.zero(field)
    zeta = S(field, 0, (field.generator,))
    M = QUAT.scalar(zeta).to_matrix()
    M.rows[1][1] = M.rows[0][0]  # diag(zeta, zeta) is not diag(x, tau x)
    with pytest.raises(ValueError):
        CyclicAlgebraElement.from_matrix(QUAT, M)
    assert z.is_zero


# -- maximal order ------------------------------------------------------------


def test_integral_coordinates_lie_in_maximal_order():
    one = S.one(BC.field)
    assert BC.element([one, S.pi_power(BC.field, 1)]).in_maximal_order()
    assert BC.u().in_maximal_order()


def test_polar_part_fails_membership():
    field = BC.field
    bad0 = BC.element([S.pi_power(field, -1), S.zero(field)])
    assert not bad0.in_maximal_order()
    bad1 = BC.element([S.zero(field), S.pi_power(field, -1)])
    assert not bad1.in_maximal_order()


# -- involution ---------------------------------------------------------------


def test_star_fixes_u_and_conjugates_scalars():
    zeta = S(BC.field, 0, (BC.field.generator,))
    assert BC.u().involution_star() == BC.u()
    assert BC.scalar(zeta).involution_star() == BC.scalar(BC.bar(zeta))
    # orthogonal-type data: conjugation trivial on E
    w = S(QUAT.field, 0, (QUAT.field.generator,))
    assert QUAT.scalar(w).involution_star() == QUAT.scalar(w)


@given(_elements(BC), _elements(BC))
@settings(max_examples=40, deadline=None)
def test_star_is_an_anti_involution(a, b):
    assert (a * b).involution_star() == b.involution_star() * a.involution_star()
    assert a.involution_star().involution_star() == a


def test_star_leaves_cyclic_locus_for_higher_degree():
    zeta = S(CUBIC.field, 0, (CUBIC.field.generator,))
    with pytest.raises(ValueError):
        CUBIC.scalar(zeta).involution_star()
    # rational scalars survive: their diagonal is tau-invariant
    assert CUBIC.one().involution_star() == CUBIC.one()


# -- discriminant -------------------------------------------------------------


@pytest.mark.parametrize(
    "desc,expected",
    [(QUAT, 2), (BC, 2), (CUBIC, 6), (CyclicAlgebraDescriptor(n=2, residue_size=5), 2)],
)
def test_division_algebra_discriminant(desc, expected):
    rep = discriminant_report(desc)
    assert rep.is_division
    assert rep.multiplier == 1
    assert rep.disc_exponent == expected
    assert rep.gram_exponent == expected
    assert rep.consistent


def test_split_discriminant_vanishes():
    rep = discriminant_report(SPLIT)
    assert not rep.is_division
    assert rep.multiplier == 0
    assert rep.disc_exponent == 0
    assert rep.gram_exponent == 0
    assert rep.consistent
