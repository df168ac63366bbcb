"""
Tests for the built-in registries.

What it checks
--------------
1. Group, rack, pair and diagram keys resolve to the right objects
2. Unknown or malformed keys raise UnknownBuiltin
3. The listing names every family
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest

from xmodlink_algebra import symmetric_group
from xmodlink_builtins import (
    AVAILABLE_DIAGRAMS,
    AVAILABLE_PAIRS,
    describe_builtins,
    resolve_builtin,
    resolve_diagram,
    resolve_group,
    resolve_pair,
    resolve_rack,
)
from xmodlink_errors import UnknownBuiltin
from xmodlink_pairs import ReidemeisterPair, check_unframed, eisermann_pair
from xmodlink_xmod import Rack, is_quandle


@pytest.mark.parametrize("key,order", [
    ("group:S4", 24),
    ("S3", 6),
    ("group:Z5", 5),
    ("group:D4", 8),
    ("group:Q8", 8),
])
def test_groups(key, order):
    assert resolve_group(key).order == order


def test_symmetric_groups_are_shared():
    assert resolve_group("group:S4") is symmetric_group(4)


def test_racks():
    assert resolve_rack("rack:dihedral:5").size == 5
    assert not is_quandle(resolve_rack("rack:cyclic:4"))
    eisermann = resolve_rack("rack:eisermann:S3:x=(12)")
    assert eisermann.size == 6 and is_quandle(eisermann)


def test_eisermann_pair_key():
    pair = resolve_pair("eisermann:S3:x=(12)")
    expected = eisermann_pair(symmetric_group(3), "(12)", on_derived=False)
    assert np.array_equal(pair.psi, expected.psi)
    assert np.array_equal(pair.phi, expected.phi)


def test_derived_pair_key():
    assert resolve_pair("eisermann-derived:S4:x=(1234)").G.order == 12


def test_rack_pair_keys():
    assert check_unframed(resolve_pair("rack-pair:dihedral:5")).passed
    assert check_unframed(resolve_pair("rack-pair:cyclic:3")).failed_axioms() == ["R1"]


def test_cocycle_pair_keys():
    pair = resolve_pair("cocycle:dihedral3:1")
    assert pair.G.order == 3 and pair.E.order == 9
    with pytest.raises(UnknownBuiltin):
        resolve_pair("cocycle:dihedral3:999")


def test_pgl_pair_key():
    """`I` names the identity matrix."""
    pair = resolve_pair("unlifted:pgl25:x=I")
    assert pair.G.order == 120
    assert (np.diagonal(pair.psi) == pair.G.identity).all()


def test_diagrams():
    assert resolve_diagram("closed:trefoil+").top == ()
    assert resolve_diagram("diagram:figure8-string").top == ("v",)
    for key in AVAILABLE_DIAGRAMS:
        resolve_diagram(key)


def test_dispatch_by_prefix():
    assert isinstance(resolve_builtin("rack:dihedral:3"), Rack)
    assert isinstance(resolve_builtin("eisermann:S3:x=id"), ReidemeisterPair)
    assert resolve_builtin("group:Q8").order == 8


@pytest.mark.parametrize("key", [
    "group:X9",
    "group:Z0",
    "rack:quartic:3",
    "diagram:hopf",
    "nonsense",
    "eisermann:S3:x=(99)",
])
def test_unknown_keys(key):
    with pytest.raises(UnknownBuiltin):
        resolve_builtin(key)


def test_listing_names_every_family():
    listing = describe_builtins()
    for title in ("Groups:", "Racks:", "Pairs:", "Diagrams:"):
        assert title in listing
    for key in AVAILABLE_PAIRS + AVAILABLE_DIAGRAMS:
        assert f"  {key}" in listing


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
