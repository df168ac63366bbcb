"""
Tests for crossed modules, racks, rack cocycles and central extensions.

What it checks
--------------
1. Crossed module validation: both Peiffer equations and the action laws
2. Racks and quandles: built-ins, rejection of bad tables, Eisermann quandles
3. Rack 2-cocycles: validation and brute-force enumeration
4. Central extensions: rejection paths, section independence of the bracket
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest

from xmodlink_algebra import cyclic_group, group_hom, quaternion_group, quotient_group, symmetric_group
from xmodlink_errors import (
    CocycleViolation,
    KernelNotCentral,
    NonAbelianV,
    NotAnAction,
    NotBijective,
    NotSurjective,
    Peiffer1Violation,
    Peiffer2Violation,
    SelfDistributivityViolation,
)
from xmodlink_xmod import (
    bracket_table,
    central_extension_new,
    cocycle_new,
    conjugation_quandle,
    cyclic_rack,
    dihedral_quandle,
    eisermann_projection,
    eisermann_quandle,
    find_rack_cocycles,
    is_quandle,
    is_quandle_cocycle,
    is_rack_morphism,
    nelson_check,
    perturb_section,
    rack_new,
    xmod_from_central_extension,
    xmod_identity_conj,
    xmod_new,
    xmod_product,
)


@pytest.fixture
def s3():
    return symmetric_group(3)


@pytest.fixture
def q8_extension():
    q8 = quaternion_group()
    _, projection = quotient_group(q8, ["1", "-1"], name="V4")
    return central_extension_new(q8, projection)


# ------------------------------------------------------------------
# 1.  Crossed modules

def test_identity_conjugation_module(s3):
    """(id, conjugation) on S3 is a crossed module with trivial kernel."""
    xmod = xmod_identity_conj(s3)
    assert xmod.kernel() == [s3.identity]
    assert xmod.act(s3.index("(12)"), s3.index("(123)")) == s3.index("(132)")


def test_product_module(s3):
    """G×V over G with V abelian."""
    xmod = xmod_product(s3, cyclic_group(3))
    assert xmod.E.order == 18
    assert len(xmod.kernel()) == 3


def test_product_module_needs_abelian_v(s3):
    with pytest.raises(NonAbelianV):
        xmod_product(s3, s3)


def test_peiffer_one_violation(s3):
    """A3 → S3 with the trivial action breaks ∂(g▷e) = g∂(e)g⁻¹."""
    z3 = cyclic_group(3)
    inclusion = group_hom(z3, s3, [0, s3.index("(123)"), s3.index("(132)")])
    trivial = np.repeat(np.arange(3)[None, :], s3.order, axis=0)
    with pytest.raises(Peiffer1Violation):
        xmod_new(s3, z3, inclusion, trivial)


def test_peiffer_two_violation(s3):
    """A non-abelian E over the trivial group breaks ∂(e)▷f = efe⁻¹."""
    one = cyclic_group(1)
    boundary = group_hom(s3, one, [0] * s3.order)
    trivial = np.arange(s3.order)[None, :]
    with pytest.raises(Peiffer2Violation):
        xmod_new(one, s3, boundary, trivial)


def test_identity_must_act_trivially():
    """Moving an element by the identity is not an action."""
    z2 = cyclic_group(2)
    boundary = group_hom(z2, z2, [0, 0])
    with pytest.raises(NotAnAction):
        xmod_new(z2, z2, boundary, [[1, 0], [0, 1]])


# ------------------------------------------------------------------
# 2.  Racks and quandles

def test_builtin_racks():
    """R3 is a quandle, the cyclic rack is not, both pass the Nelson check."""
    r3, c3 = dihedral_quandle(3), cyclic_rack(3)
    assert is_quandle(r3)
    assert not is_quandle(c3)
    assert nelson_check(r3) and nelson_check(c3)
    assert r3.left[0, 1] == 2
    assert r3.right[1, r3.left[0, 1]] == 0


def test_rack_rejects_non_bijective_column():
    with pytest.raises(NotBijective):
        rack_new(["a", "b"], [[0, 0], [0, 1]])


def test_rack_rejects_non_distributive_table():
    """A single swapped column is not self-distributive."""
    table = [[1, 0, 0], [0, 1, 1], [2, 2, 2]]
    with pytest.raises(SelfDistributivityViolation):
        rack_new(["0", "1", "2"], table)


def test_conjugation_quandle_of_transpositions(s3):
    quandle = conjugation_quandle(s3, ["(12)", "(13)", "(23)"])
    assert quandle.size == 3
    assert is_quandle(quandle)


def test_eisermann_projection_is_a_rack_morphism(s3):
    """p(g) = g⁻¹xg intertwines the Eisermann quandle and the conjugation quandle."""
    source, target, table = eisermann_projection(s3, "(12)", on_derived=False)
    assert source.size == 6
    assert target.size == 3
    assert is_rack_morphism(source, target, table)


def test_eisermann_quandle_on_derived_subgroup():
    s4 = symmetric_group(4)
    quandle = eisermann_quandle(s4, "(1234)", restrict_to_derived=True)
    assert quandle.size == 12
    assert is_quandle(quandle)


# ------------------------------------------------------------------
# 3.  Rack cocycles

def test_zero_cocycle_is_valid():
    c = cocycle_new(dihedral_quandle(3), cyclic_group(3), np.zeros((3, 3), dtype=int))
    assert is_quandle_cocycle(c)


def test_cocycle_violation_on_cyclic_rack():
    """w(x, y) = y is not a cocycle on the cyclic rack of order 3."""
    table = np.repeat(np.arange(3)[None, :], 3, axis=0)
    with pytest.raises(CocycleViolation):
        cocycle_new(cyclic_rack(3), cyclic_group(3), table)


def test_cocycle_search_on_dihedral_quandle():
    """The search finds at least the nine coboundaries, zero table first."""
    found = find_rack_cocycles(dihedral_quandle(3), cyclic_group(3), quandle_only=True)
    assert len(found) >= 9
    assert not found[0].any()
    for w in found:
        assert is_quandle_cocycle(cocycle_new(dihedral_quandle(3), cyclic_group(3), w))


# ------------------------------------------------------------------
# 4.  Central extensions

def test_q8_extension_module(q8_extension):
    """Q8 → V4 yields a crossed module whose brackets land in {±1}."""
    xmod = xmod_from_central_extension(q8_extension)
    assert xmod.G.order == 4
    brackets = bracket_table(q8_extension)
    assert set(brackets.ravel().tolist()) <= {0, 4}


def test_bracket_ignores_the_section(q8_extension):
    rng = np.random.default_rng(7)
    moved = perturb_section(q8_extension, rng)
    assert np.array_equal(bracket_table(moved), bracket_table(q8_extension))


def test_extension_needs_central_kernel(s3):
    _, projection = quotient_group(s3, ["id", "(123)", "(132)"])
    with pytest.raises(KernelNotCentral):
        central_extension_new(s3, projection)


def test_extension_needs_surjection():
    z2 = cyclic_group(2)
    with pytest.raises(NotSurjective):
        central_extension_new(z2, group_hom(z2, z2, [0, 0]))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
