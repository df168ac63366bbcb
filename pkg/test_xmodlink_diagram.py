"""
Tests for sliced diagrams.

What it checks
--------------
1. The `.tng` text format: round trips and located errors
2. Diagram algebra: compose, tensor, mirror, normalize, split
3. String knots, closures and component counts
4. Move fixtures and the arc partition
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xmodlink_diagram import (
    FRAMED_RELATIONS,
    RELATION_IDS,
    UNFRAMED_RELATIONS,
    Generator,
    arc_index,
    closure,
    components,
    compose,
    crossing_count,
    diagram_parse,
    diagram_serialize,
    figure_eight_string,
    identity_diagram,
    mirror,
    move_fixtures,
    normalize,
    random_diagram,
    split,
    strand_walk,
    tensor,
    trefoil_minus_string,
    trefoil_plus_string,
    unknot_string,
    writhe,
)
from xmodlink_errors import (
    ClosureShapeMismatch,
    EmptyDiagram,
    SignatureMismatch,
    TextSignatureMismatch,
    UnknownToken,
)


# ------------------------------------------------------------------
# 1.  Text format

def test_parse_simple_diagram():
    d = diagram_parse("# two strands crossing\ntop: v v\nx+\nid+ id+\n")
    assert d.top == ("v", "v")
    assert d.height == 2
    assert d.slices[0].pieces == (Generator.X_PLUS,)


def test_unknown_token_is_located():
    with pytest.raises(UnknownToken) as info:
        diagram_parse("top: v\nid+ foo\n", "knot.tng")
    assert info.value.line == 2
    assert info.value.column == 5
    assert str(info.value).startswith("knot.tng:2:5:")


def test_signature_mismatch_between_slices():
    with pytest.raises(TextSignatureMismatch) as info:
        diagram_parse("top: v\nid+\nx+\n", "bad.tng")
    assert info.value.line == 3
    assert isinstance(info.value, SignatureMismatch)


def test_diagram_without_slices():
    with pytest.raises(EmptyDiagram):
        diagram_parse("top: v\n")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 4), st.integers(1, 6))
def test_serialize_round_trip(seed, max_width, height):
    """parse(serialize(d)) == d for random diagrams."""
    d = random_diagram(np.random.default_rng(seed), max_width, height)
    assert diagram_parse(diagram_serialize(d)) == d


# ------------------------------------------------------------------
# 2.  Diagram algebra

def test_compose_requires_matching_signatures():
    with pytest.raises(SignatureMismatch):
        compose(identity_diagram(("v",)), identity_diagram(("^",)))


def test_tensor_pads_the_shorter_side():
    d = tensor(trefoil_plus_string(), unknot_string())
    assert d.top == ("v", "v")
    assert d.height == trefoil_plus_string().height
    assert crossing_count(d) == (3, 0)


def test_mirror_swaps_crossings():
    assert crossing_count(trefoil_minus_string()) == (0, 3)
    assert writhe(trefoil_minus_string()) == -3
    assert mirror(trefoil_minus_string()) == trefoil_plus_string()


def test_normalize_splits_interchange():
    """Side-by-side crossings become one crossing per slice."""
    d = diagram_parse("top: v v v v\nx+ x-\n")
    expected = diagram_parse("top: v v v v\nx+ id+ id+\nid+ id+ x-\n")
    assert normalize(d) == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 6))
def test_split_then_compose(seed, height):
    d = random_diagram(np.random.default_rng(seed), 4, height)
    for k in range(1, d.height):
        assert compose(*split(d, k)) == d


# ------------------------------------------------------------------
# 3.  String knots and closures

def test_string_knots_have_one_component():
    for d in (trefoil_plus_string(), trefoil_minus_string(), figure_eight_string(), unknot_string()):
        assert d.top == ("v",) and d.bottom == ("v",)
        assert components(d) == 1


def test_figure_eight_crossings():
    assert crossing_count(figure_eight_string()) == (2, 2)


def test_closure_of_trefoil():
    closed = closure(trefoil_plus_string())
    assert closed.top == () and closed.bottom == ()
    assert components(closed) == 1
    assert crossing_count(closed) == (3, 0)


def test_closure_needs_a_string():
    with pytest.raises(ClosureShapeMismatch):
        closure(identity_diagram(("v", "v")))


# ------------------------------------------------------------------
# 4.  Fixtures and arcs

def test_fixtures_cover_every_relation():
    fixtures = move_fixtures()
    assert {f.id for f in fixtures} == set(RELATION_IDS)
    for f in fixtures:
        assert f.lhs.top == f.rhs.top and f.lhs.bottom == f.rhs.bottom


def test_relation_sets():
    assert UNFRAMED_RELATIONS == RELATION_IDS and len(UNFRAMED_RELATIONS) == 12
    assert len(FRAMED_RELATIONS) == 11 and "R1" not in FRAMED_RELATIONS


def test_trefoil_arcs():
    """A string knot with n crossings has n + 1 arcs, three roles per crossing."""
    arcs = arc_index(trefoil_plus_string())
    assert len(arcs) == 4
    assert len(arcs.crossings) == 3
    for c in arcs.crossings:
        assert len({c.over, c.under_in, c.under_out}) == 3
        assert c.sign == 1


def test_every_node_lies_on_one_arc():
    d = figure_eight_string()
    arcs = arc_index(d)
    nodes = [node for arc in arcs.arcs for node in arc]
    assert len(nodes) == len(set(nodes)) == len(arcs.arc_of)


def test_strand_walk_passes_each_crossing_twice():
    d = trefoil_plus_string()
    visited, steps = strand_walk(d, (0, 0))
    assert visited[-1] == (d.height, 0)
    assert sorted(s.crossing for s in steps) == [0, 0, 1, 1, 2, 2]
    assert sum(s.under for s in steps) == 3


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
