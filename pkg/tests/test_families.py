import pytest

from parorbit.exact import QQ, GF, ExactMatrix, jordan_matrix, DimensionTooLarge
from parorbit.families import (FAMILY_NAMES, FamilySpec, InfiniteType, NotInParabolic, ParamOutOfRange,
                               build_family_member, centralizer_in_p, certify_family, commuting_pair,
                               commuting_x, distinguished_census, family_covering_rep, injectivity_violations,
                               is_cyclic_vector, is_distinguished)
from parorbit.oracle import random_group_element
from parorbit.parabolic import contains, in_nilpotent_cone, shape_of
from parorbit.quiver import is_isomorphic, matrix_to_rep


def test_levi_nilr_member():
    F = GF(7)
    m = build_family_member(FamilySpec("levi_nilr_111"), 3, F)
    assert m.to_rows() == [[0, 1, 3], [0, 0, 1], [0, 0, 0]]


@pytest.mark.parametrize("t", [0, 1])
def test_d4_member_in_cone(t):
    F = GF(5)
    spec = FamilySpec("d4_222")
    m = build_family_member(spec, t, F)
    assert in_nilpotent_cone(shape_of((2, 2, 2)), m)
    assert set(m.entries()) <= {0, 1, t}


@pytest.mark.parametrize("name", [n for n in FAMILY_NAMES if n not in ("ext_kk", "commuting_pair")])
def test_members_have_declared_block_vector(name):
    spec = FamilySpec(name)
    m = build_family_member(spec, 2, GF(5))
    assert m.shape == (spec.shape.n, spec.shape.n)
    assert contains(spec.shape, m)


def test_covering_maps_injective():
    for name in ("d4_222", "e6_66", "e6_12121"):
        r = family_covering_rep(FamilySpec(name), 2, GF(5))
        assert injectivity_violations(r) == []


def test_param_out_of_range():
    with pytest.raises(ParamOutOfRange):
        FamilySpec("ext_kk", 5, 12)
    with pytest.raises(ParamOutOfRange):
        FamilySpec("commuting_pair", 6, 11)
    with pytest.raises(ParamOutOfRange):
        FamilySpec("ext_kk")


def test_duplicate_parameter_fails_certificate():
    cert = certify_family(FamilySpec("e6_66"), [1, 1, 2], GF(5))
    assert not cert.passed
    assert cert.checks["non_isomorphic"]["witness"] == [1, 1]
    assert cert.checks["membership"]["pass"]


def test_certificate_passes_and_serializes():
    cert = certify_family(FamilySpec("levi_cone_22"), [1, 2, 3], GF(5))
    assert cert.passed
    j = cert.to_json()
    assert j["pass"] and set(j["checks"]) == {"membership", "non_isomorphic"}


def test_isomorphic_control():
    # a P-conjugate of a family member is recognized as isomorphic; the certifier would flag it
    F = GF(5)
    spec = FamilySpec("e6_414")
    m = build_family_member(spec, 2, F)
    import random
    g = random_group_element(spec.bv, 5, "P", random.Random(2))
    a = matrix_to_rep(spec.shape, m)
    b = matrix_to_rep(spec.shape, g @ m @ g.inverse())
    assert is_isomorphic(a, b)


def test_commuting_x_arrow_list():
    n, k = 12, 6
    x = commuting_x(n, k, 5, GF(101))

    def image(i):
        col = x.col(i - 1)
        return [r + 1 for r, v in enumerate(col) if v]

    # e_n -> ... -> e_{k+4} -> e_{k+3} -> e_{k-1} -> e_{k-5} -> ... -> e_1 -> 0
    chain = [n]
    while image(chain[-1]):
        (nxt,) = image(chain[-1])
        chain.append(nxt)
    assert chain == [12, 11, 10, 9, 5, 1]


def test_commuting_pair_corrected_and_printed():
    F = GF(101)
    x, y = commuting_pair(12, 6, 7, F)
    shape = shape_of((6, 6))
    assert (x @ y - y @ x).is_zero()
    assert contains(shape, y) and in_nilpotent_cone(shape, x)
    assert is_cyclic_vector(x, y, [0] * 11 + [1])
    # the printed choice of the last image commutes but does not preserve U = <e_1..e_k>
    xp, yp = commuting_pair(12, 6, 7, F, "printed")
    assert (xp @ yp - yp @ xp).is_zero()
    assert not contains(shape, yp)


def test_centralizer_examples():
    F = QQ
    assert centralizer_in_p((2, 3), ExactMatrix.zero(F, 5)).dim == 4 + 6 + 9
    assert centralizer_in_p((5,), jordan_matrix(F, (5,))).dim == 5
    c = centralizer_in_p((1, 1), ExactMatrix.unit(F, 2, 2, 0, 1))
    assert c.dim == 2 and c.contains([1, 0, 0, 1]) and c.contains([0, 1, 0, 0])
    with pytest.raises(NotInParabolic):
        centralizer_in_p((1, 1), ExactMatrix.unit(F, 2, 2, 1, 0))


def test_distinguished_examples():
    F = QQ
    assert is_distinguished((4,), jordan_matrix(F, (4,))).distinguished
    assert not is_distinguished((2, 2), ExactMatrix.zero(F, 4)).distinguished
    r = is_distinguished((1, 1), ExactMatrix.unit(F, 2, 2, 0, 1))
    assert r.distinguished and r.method == "both"


def test_distinguished_char_divides_n():
    # over GF(2) with n = 2 the trace-free part of gl_2 contains the identity; only the idempotent route is used
    r = is_distinguished((2,), jordan_matrix(GF(2), (2,)))
    assert r.distinguished and r.method == "idempotent_search"
    assert r.routes["nilpotent_centralizer"]["status"] == "characteristic_divides_n"


def test_distinguished_budget_exhaustion():
    with pytest.raises(DimensionTooLarge):
        is_distinguished((3,), ExactMatrix.zero(GF(5), 3), budget=1, idempotent_budget=1)


def test_census_small():
    assert distinguished_census((1,)).count == 1
    assert distinguished_census((2,)).count == 1
    c = distinguished_census((1, 1))
    assert (c.orbit_count, c.count) == (2, 1)
    with pytest.raises(InfiniteType):
        distinguished_census((2, 2, 2))
