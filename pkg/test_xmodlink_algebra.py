"""
Tests for finite groups, homomorphisms, subgroups, the group algebra and
enhanced words.

What it checks
--------------
1. Cayley-table validation (identity, inverses, associativity)
2. Named families: S_n naming and composition order, Q8, dihedral, GL(2,5)
3. Subgroups, quotients and isomorphism search
4. Group algebra arithmetic and rendering
5. Enhanced words: parsing, evaluation, reversal (property based)
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xmodlink_algebra import (
    centralizer,
    commutator_subgroup,
    cyclic_group,
    dihedral_group,
    direct_product,
    element_order,
    evaluate_word,
    find_isomorphism,
    ga_basis,
    ga_equal,
    ga_from_counts,
    ga_zero,
    general_linear_extension,
    group_from_cayley,
    group_from_matrix_generators,
    group_hom,
    parse_word,
    quaternion_group,
    quotient_group,
    reverse_star,
    subgroup_generated,
    symmetric_group,
    word_from_indices,
)
from xmodlink_config import XmodlinkConfig
from xmodlink_errors import (
    BoundExceeded,
    GroupMismatch,
    IndexOutOfRange,
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotAHomomorphism,
    NotNormal,
    SingularGenerator,
)


@pytest.fixture
def s3():
    return symmetric_group(3)


@pytest.fixture
def s4():
    return symmetric_group(4)


# ------------------------------------------------------------------
# 1.  Cayley tables

def test_cayley_table_of_z2():
    """A two-element table validates with identity 0 and self-inverse generator."""
    g = group_from_cayley(["e", "a"], [[0, 1], [1, 0]], name="Z2")
    assert g.order == 2
    assert g.identity == 0
    assert g.inv(1) == 1


def test_cayley_without_identity():
    """A constant table has no two-sided identity."""
    with pytest.raises(NoIdentity):
        group_from_cayley(["a", "b"], [[0, 0], [0, 0]])


def test_cayley_without_inverse():
    """An absorbing element has no inverse."""
    with pytest.raises(NoInverse) as info:
        group_from_cayley(["e", "z"], [[0, 1], [1, 1]])
    assert info.value.witness == ("z",)


def test_cayley_non_associative_loop():
    """The order-5 loop with all squares trivial is not a group."""
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NonAssociative) as info:
        group_from_cayley(list("abcde"), loop)
    assert len(info.value.witness) == 3


def test_cayley_entry_out_of_range():
    """Entries must be element indices."""
    with pytest.raises(IndexOutOfRange):
        group_from_cayley(["e", "a"], [[0, 1], [1, 2]])


# ------------------------------------------------------------------
# 2.  Named families

def test_symmetric_group_naming(s3):
    """S3 is indexed lexicographically and named in cycle notation."""
    assert s3.names == ("id", "(23)", "(12)", "(123)", "(132)", "(13)")


def test_symmetric_group_composition_order(s3):
    """(σ·τ) applies σ first: (12)·(23) = (132)."""
    product = s3.element("(12)") * s3.element("(23)")
    assert product.name == "(132)"


def test_symmetric_group_degree_bound():
    """Degrees above the configured bound are refused."""
    with pytest.raises(BoundExceeded):
        symmetric_group(4, XmodlinkConfig(max_symmetric_degree=3))


def test_quaternion_relations():
    """i·j = k and i² = -1."""
    q = quaternion_group()
    assert (q.element("i") * q.element("j")).name == "k"
    assert (q.element("i") * q.element("i")).name == "-1"


def test_dihedral_order():
    """D4 has order 8 and is not abelian."""
    d4 = dihedral_group(4)
    assert d4.order == 8
    r, s = d4.element("r"), d4.element("s")
    assert r * s != s * r


def test_general_linear_extension():
    """GL(2,5) has order 480 and projects onto PGL(2,5) of order 120."""
    gl, pgl, projection = general_linear_extension(5)
    assert gl.order == 480
    assert pgl.order == 120
    assert projection.is_surjective()
    assert len(projection.kernel()) == 4


def test_singular_generator():
    """A singular matrix cannot generate a group."""
    with pytest.raises(SingularGenerator):
        group_from_matrix_generators([[[1, 2], [2, 4]]], 5)


def test_mixing_groups_is_refused(s3):
    """Elements of different groups do not multiply."""
    with pytest.raises(GroupMismatch):
        s3.element("(12)") * cyclic_group(6).element("1")


# ------------------------------------------------------------------
# 3.  Subgroups, quotients, isomorphisms

def test_commutator_subgroups(s3, s4):
    """S3′ = A3 and S4′ = A4."""
    assert commutator_subgroup(s3)[0].order == 3
    assert commutator_subgroup(s4)[0].order == 12


def test_centralizer_of_transposition(s4):
    """C((12)) in S4 has order 4."""
    sub, inclusion = centralizer(s4, "(12)")
    assert sub.order == 4
    assert s4.index("(34)") in inclusion.image_set()


def test_subgroup_generated(s4):
    """A 4-cycle generates a cyclic subgroup of order 4."""
    sub, _ = subgroup_generated(s4, ["(1234)"])
    assert sub.order == 4
    assert element_order(s4, "(1234)") == 4


def test_quotient_by_alternating_group(s3):
    """S3/A3 has two cosets named by their least member."""
    quotient, projection = quotient_group(s3, ["id", "(123)", "(132)"])
    assert quotient.names == ("~id", "~(23)")
    assert projection(s3.index("(13)")) == 1


def test_quotient_by_non_normal_subgroup(s3):
    """⟨(12)⟩ is not normal in S3."""
    with pytest.raises(NotNormal):
        quotient_group(s3, ["id", "(12)"])


def test_homomorphism_validation(s3):
    """The sign map is a hom; a broken table is not."""
    z2 = cyclic_group(2)
    sign = group_hom(s3, z2, [0, 1, 1, 0, 0, 1])
    assert sign.kernel() == [0, 3, 4]
    with pytest.raises(NotAHomomorphism):
        group_hom(s3, z2, [0, 1, 0, 0, 0, 1])


def test_find_isomorphism():
    """Z6 ≅ Z2×Z3 but Z4 ≇ Z2×Z2."""
    assert find_isomorphism(cyclic_group(6), direct_product(cyclic_group(2), cyclic_group(3))) is not None
    assert find_isomorphism(cyclic_group(4), direct_product(cyclic_group(2), cyclic_group(2))) is None


# ------------------------------------------------------------------
# 4.  Group algebra

def test_group_algebra_render(s3):
    """Terms render in index order with integer coefficients."""
    element = ga_from_counts(s3, {"(12)": 5, "id": 1})
    assert element.render() == "id + 5*(12)"
    assert ga_zero(s3).render() == "0"
    assert (-ga_basis(s3, "id")).render() == "-id"


def test_group_algebra_arithmetic(s3):
    """Addition merges coefficients and drops zeros."""
    a = ga_from_counts(s3, {"id": 2, "(12)": 1})
    b = ga_from_counts(s3, {"(12)": -1, "(13)": 3})
    total = a + b
    assert total.as_dict() == {s3.index("id"): 2, s3.index("(13)"): 3}
    assert ga_equal(total - b, a)
    assert (3 * a).total() == 9


def test_group_algebra_push_forward(s3):
    """Pushing along the sign map sums coefficients per parity."""
    z2 = cyclic_group(2)
    sign = group_hom(s3, z2, [0, 1, 1, 0, 0, 1])
    element = ga_from_counts(s3, {"id": 1, "(123)": 2, "(12)": 4})
    pushed = element.push_forward(sign)
    assert pushed.as_dict() == {0: 3, 1: 4}


# ------------------------------------------------------------------
# 5.  Enhanced words

def test_parse_and_evaluate_word(s3):
    """`(12), (123)*` evaluates to (12)·(123)⁻¹ = (23)."""
    w = parse_word(s3, "(12), (123)*")
    assert w.indices() == (2, 3)
    assert w.signature() == ("v", "^")
    assert evaluate_word(w).name == "(23)"


def test_empty_word(s3):
    """The empty word evaluates to the identity and renders as nothing."""
    w = parse_word(s3, "∅")
    assert len(w) == 0
    assert evaluate_word(w).is_identity()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 23), st.booleans()), max_size=6),
       st.lists(st.tuples(st.integers(0, 23), st.booleans()), max_size=6))
def test_word_evaluation_is_multiplicative(left, right):
    """e(w·w′) = e(w)e(w′)."""
    s4 = symmetric_group(4)
    w1 = word_from_indices(s4, [i for i, _ in left], ["^" if s else "v" for _, s in left])
    w2 = word_from_indices(s4, [i for i, _ in right], ["^" if s else "v" for _, s in right])
    assert evaluate_word(w1 + w2) == evaluate_word(w1) * evaluate_word(w2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 23), st.booleans()), max_size=6))
def test_reverse_star_inverts(entries):
    """Reversing a word and toggling its stars inverts its value."""
    s4 = symmetric_group(4)
    w = word_from_indices(s4, [i for i, _ in entries], ["^" if s else "v" for _, s in entries])
    assert evaluate_word(reverse_star(w)) == evaluate_word(w).inverse()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 23), st.integers(0, 23), st.integers(0, 23))
def test_symmetric_group_laws(a, b, c):
    """Associativity and inverses hold in S4."""
    s4 = symmetric_group(4)
    assert s4.product(a, b, c) == s4.mul(a, s4.mul(b, c))
    assert s4.mul(a, s4.inv(a)) == s4.identity


def test_matrix_names_are_row_major():
    """GL(2,5) elements are named `(a b;c d)` and the identity comes first."""
    gl, _, _ = general_linear_extension(5)
    assert gl.names[0] == "(1 0;0 1)"
    m = gl.element("(2 0;0 1)")
    assert (m * m).name == "(4 0;0 1)"
    assert np.array_equal(gl.mult[0], np.arange(gl.order))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
