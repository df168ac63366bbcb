"""
xmodlink Categorical Group
Morphisms (U, e): U → ∂(e)U of the categorical group of a crossed module,
their composition and tensor product, and evaluation of coloured diagrams
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from xmodlink_algebra import GroupElement
from xmodlink_config import XmodlinkConfig, get_logger, resolve_config
from xmodlink_diagram import ArcIndex, Generator, SlicedDiagram, arc_index
from xmodlink_errors import InconsistentColours, ModuleMismatch, NotComposable
from xmodlink_pairs import ReidemeisterPair
from xmodlink_xmod import CrossedModule

logger = get_logger(__name__)


@dataclass(frozen=True)
class CGMorphism:
    """(U, e) with source U in G, label e in E and target ∂(e)·U"""
    xmod: CrossedModule
    source: GroupElement
    label: GroupElement

    def __repr__(self) -> str:
        return f"CGMorphism({self.source.name} -> {self.target.name}, {self.label.name})"

    @property
    def target(self) -> GroupElement:
        return GroupElement(self.xmod.G, self.xmod.G.mul(self.xmod.boundary(self.label.index), self.source.index))


def cg_identity(xmod: CrossedModule, U: GroupElement) -> CGMorphism:
    return CGMorphism(xmod, U, xmod.E.one())


def _same_module(m1: CGMorphism, m2: CGMorphism):
    if m1.xmod is not m2.xmod:
        raise ModuleMismatch(f"morphisms over {m1.xmod!r} and {m2.xmod!r}")


def cg_compose(m1: CGMorphism, m2: CGMorphism) -> CGMorphism:
    """m1 then m2: (U, e) then (V, f) is (U, f·e)"""
    _same_module(m1, m2)
    if m1.target != m2.source:
        raise NotComposable(f"target {m1.target.name} does not match source {m2.source.name}")
    return CGMorphism(m1.xmod, m1.source, m2.label * m1.label)


def cg_tensor(m1: CGMorphism, m2: CGMorphism) -> CGMorphism:
    """(U, e) ⊗ (W, f) = (UW, (V▷f)·e) with V = ∂(e)U; the target is V·∂(f)W"""
    _same_module(m1, m2)
    xmod = m1.xmod
    V = m1.target
    acted = GroupElement(xmod.E, xmod.act(V.index, m2.label.index))
    return CGMorphism(xmod, m1.source * m2.source, acted * m1.label)


def generator_morphism(gen: Generator, colours: Sequence[GroupElement], pair: ReidemeisterPair) -> CGMorphism:
    """
    Morphism of one coloured piece; colours list the piece's top endpoints
    left to right, then its bottom endpoints

    Raises:
        InconsistentColours
    """
    xmod, G = pair.xmod, pair.G
    colours = list(colours)
    width = len(gen.top) + len(gen.bottom)
    if len(colours) != width:
        raise InconsistentColours(f"{gen.value} takes {width} colours, got {len(colours)}")
    one = xmod.E.one()
    if gen == Generator.ID_DOWN or gen == Generator.ID_UP:
        if colours[0] != colours[1]:
            raise InconsistentColours(f"{gen.value} changes colour", witness=[c.name for c in colours])
        X = colours[0]
        return CGMorphism(xmod, X if gen == Generator.ID_DOWN else X.inverse(), one)
    if gen.is_crossing:
        top_left, top_right, bottom_left, bottom_right = colours
        if gen == Generator.X_PLUS:
            Z, X, Y = top_left, top_right, bottom_right
            over_ok = bottom_left == X
            expected = pair.zpsi[X.index, Y.index]
            label = pair.psi[X.index, Y.index]
            source = Z * X
        else:
            X, Z, Y = top_left, top_right, bottom_left
            over_ok = bottom_right == X
            expected = pair.zphi[X.index, Y.index]
            label = pair.phi[X.index, Y.index]
            source = X * Z
        if not over_ok or Z.index != expected:
            raise InconsistentColours(f"{gen.value} colouring breaks the crossing rule",
                                      witness=[c.name for c in colours])
        return CGMorphism(xmod, source, GroupElement(xmod.E, label))
    if colours[0] != colours[1]:
        raise InconsistentColours(f"{gen.value} legs carry different colours", witness=[c.name for c in colours])
    return CGMorphism(xmod, G.one(), one)


def _piece_colours(colouring, k: int, t: int, b: int, gen: Generator) -> List[GroupElement]:
    tops = [colouring.strand_colours[(k, t + i)] for i in range(len(gen.top))]
    bottoms = [colouring.strand_colours[(k + 1, b + i)] for i in range(len(gen.bottom))]
    return tops + bottoms


def evaluate_diagram(d: SlicedDiagram, colouring, pair: ReidemeisterPair) -> CGMorphism:
    """Tensor the pieces of each slice left to right, then compose the slices top to bottom"""
    xmod = pair.xmod
    result: Optional[CGMorphism] = None
    for k, piece_row in enumerate(d.slices):
        row = cg_identity(xmod, pair.G.one())
        t = b = 0
        for gen in piece_row.pieces:
            row = cg_tensor(row, generator_morphism(gen, _piece_colours(colouring, k, t, b, gen), pair))
            t += len(gen.top)
            b += len(gen.bottom)
        result = row if result is None else cg_compose(result, row)
    return result


# === INDEX-LEVEL EVALUATION ===========================================

@dataclass(frozen=True)
class EvaluationPlan:
    """
    Per slice, (generator, a, b, c) with arc ids: the colour of an identity
    piece in a, and (X, Y, Z) of a crossing in (a, b, c)
    """
    slices: Tuple[Tuple[Tuple[Generator, int, int, int], ...], ...]


def evaluation_plan(d: SlicedDiagram, arcs: Optional[ArcIndex] = None) -> EvaluationPlan:
    arcs = arcs or arc_index(d)
    node = arcs.arc_of
    rows: List[List[Tuple[Generator, int, int, int]]] = [[] for _ in d.slices]
    for k, _, gen, t, b in d.pieces():
        if gen.is_identity:
            rows[k].append((gen, node[(k, t)], -1, -1))
        elif gen == Generator.X_PLUS:
            rows[k].append((gen, node[(k, t + 1)], node[(k + 1, b + 1)], node[(k, t)]))
        elif gen == Generator.X_MINUS:
            rows[k].append((gen, node[(k, t)], node[(k + 1, b)], node[(k, t + 1)]))
        else:
            rows[k].append((gen, -1, -1, -1))
    return EvaluationPlan(tuple(tuple(row) for row in rows))


def evaluate_plan(plan: EvaluationPlan, colours: Sequence[int], pair: ReidemeisterPair,
                  config: Optional[XmodlinkConfig] = None) -> Tuple[int, int]:
    """
    Source and label indices of a coloured diagram, given one G-index per arc

    With debug checks on, every vertical junction is re-checked for composability.
    """
    G, E = pair.G, pair.E
    gm, em = G.mult, E.mult
    boundary, act = pair.xmod.boundary.image, pair.xmod.action
    debug = resolve_config(config).debug_checks if config is not None else False
    source = None
    label = E.identity
    previous_target = None
    for row in plan.slices:
        U, e = G.identity, E.identity
        for gen, a, b, c in row:
            if gen == Generator.ID_DOWN:
                W, f = colours[a], E.identity
            elif gen == Generator.ID_UP:
                W, f = G.inverse[colours[a]], E.identity
            elif gen == Generator.X_PLUS:
                W, f = gm[colours[c], colours[a]], pair.psi[colours[a], colours[b]]
            elif gen == Generator.X_MINUS:
                W, f = gm[colours[a], colours[c]], pair.phi[colours[a], colours[b]]
            else:
                continue
            V = gm[boundary[e], U]
            U, e = gm[U, W], em[act[V, f], e]
        if debug:
            if previous_target is not None and previous_target != U:
                raise NotComposable(f"slice source {G.names[U]} does not match {G.names[previous_target]}")
            previous_target = int(gm[boundary[e], U])
        if source is None:
            source = int(U)
        label = em[e, label]
    return source, int(label)
