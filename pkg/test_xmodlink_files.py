"""
Tests for the text file formats.

What it checks
--------------
1. Groups and racks: tables by name, located errors
2. Crossed modules, cocycles and pairs referencing other files by relative path
3. Diagrams and TSV results on disk
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest

from xmodlink_algebra import parse_word, symmetric_group
from xmodlink_diagram import trefoil_plus_string
from xmodlink_errors import FileNotFound, FormatError, UnknownToken
from xmodlink_files import (
    parse_group,
    read_cocycle,
    read_diagram,
    read_group,
    read_pair,
    read_rack,
    read_xmod,
    results_to_tsv,
    write_results,
)
from xmodlink_invariant import invariant_matrix
from xmodlink_pairs import check_unframed, eisermann_pair
from xmodlink_xmod import dihedral_quandle, is_quandle_cocycle

Z2_TEXT = """\
# cyclic group of order two
group Z2 2
elements e a
e a
a e
"""

Z3_TEXT = """\
group Z3 3
elements 0 1 2
0 1 2
1 2 0
2 0 1
"""

R3_TEXT = """\
rack R3 3
elements 0 1 2
0 2 1
2 1 0
1 0 2
"""

XMOD_TEXT = """\
xmod Z2-self
G: z2.grp
E: z2.grp
default: trivial
boundary:
e -> e
a -> a
"""

PAIR_TEXT = """\
pair trivial
xmod: z2.xmod
psi:
e e -> e
e a -> e
a e -> e
a a -> e
phi:
e e -> e
e a -> e
a e -> e
a a -> e
"""


def _write(directory, name, text):
    path = directory / name
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture
def library(tmp_path):
    """A directory holding one file of every format"""
    _write(tmp_path, "z2.grp", Z2_TEXT)
    _write(tmp_path, "z3.grp", Z3_TEXT)
    _write(tmp_path, "r3.rck", R3_TEXT)
    _write(tmp_path, "z2.xmod", XMOD_TEXT)
    _write(tmp_path, "trivial.pair", PAIR_TEXT)
    zeros = "\n".join(["0 0 0"] * 3)
    _write(tmp_path, "zero.coc", f"cocycle zero\nrack: r3.rck\nV: z3.grp\n{zeros}\n")
    return tmp_path


# ------------------------------------------------------------------
# 1.  Groups and racks

def test_read_group(library):
    group = read_group(str(library / "z2.grp"))
    assert group.name == "Z2"
    assert group.names == ("e", "a")
    assert group.mul(1, 1) == 0


def test_unknown_element_is_located():
    with pytest.raises(UnknownToken) as info:
        parse_group("group Z2 2\nelements e a\ne a\na q\n", "bad.grp")
    assert (info.value.line, info.value.column) == (4, 3)
    assert str(info.value).startswith("bad.grp:4:3:")


def test_missing_rows():
    with pytest.raises(FormatError):
        parse_group("group Z2 2\nelements e a\ne a\n")


def test_non_group_table_reports_the_file():
    """Algebraic failures surface as format errors naming the file."""
    with pytest.raises(FormatError) as info:
        parse_group("group bad 2\nelements e z\ne z\nz z\n", "bad.grp")
    assert str(info.value).startswith("bad.grp:")


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFound):
        read_group(str(tmp_path / "absent.grp"))


def test_read_rack(library):
    rack = read_rack(str(library / "r3.rck"))
    assert np.array_equal(rack.left, dihedral_quandle(3).left)


# ------------------------------------------------------------------
# 2.  Crossed modules, cocycles, pairs

def test_read_xmod_with_trivial_default(library):
    xmod = read_xmod(str(library / "z2.xmod"))
    assert xmod.G.order == 2
    assert xmod.kernel() == [0]


def test_xmod_action_must_be_complete(library):
    path = _write(library, "partial.xmod", XMOD_TEXT.replace("default: trivial\n", ""))
    with pytest.raises(FormatError) as info:
        read_xmod(path)
    assert "default: trivial" in str(info.value)


def test_read_cocycle(library):
    cocycle = read_cocycle(str(library / "zero.coc"))
    assert is_quandle_cocycle(cocycle)


def test_read_pair(library):
    pair = read_pair(str(library / "trivial.pair"))
    assert pair.name == "trivial"
    assert check_unframed(pair).passed


def test_pair_tables_must_cover_g_squared(library):
    path = _write(library, "short.pair", PAIR_TEXT.replace("a a -> e\nphi:", "phi:"))
    with pytest.raises(FormatError) as info:
        read_pair(path)
    assert "psi block misses (a, a)" in str(info.value)


# ------------------------------------------------------------------
# 3.  Diagrams and results

def test_read_diagram(tmp_path):
    path = _write(tmp_path, "trefoil.tng", "top: v\nid+ cup<\nx+ id-\nx+ id-\nx+ id-\nid+ cap>\n")
    assert read_diagram(path) == trefoil_plus_string()


def test_write_results(tmp_path):
    G = symmetric_group(3)
    pair = eisermann_pair(G, "(12)", on_derived=False)
    results = list(invariant_matrix(trefoil_plus_string(), pair, parse_word(G, "id")).values())
    target = tmp_path / "out" / "trefoil.tsv"
    write_results(str(target), results)
    text = target.read_text(encoding="utf-8")
    assert text == results_to_tsv(results)
    assert text.startswith("source: id\n")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
