"""
xmodlink Diagrams
Sliced oriented tangle diagrams over the elementary generators: the `.tng`
text format, composition, tensor and mirror, the move fixtures, the string
knot fixtures and the arc partition used for colourings
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from xmodlink_algebra import DOWN, UP
from xmodlink_config import get_logger
from xmodlink_errors import (
    ClosureShapeMismatch,
    DiagramError,
    EmptyDiagram,
    FormatError,
    SignatureMismatch,
    TextSignatureMismatch,
    UnknownToken,
)

logger = get_logger(__name__)

Signature = Tuple[str, ...]
Node = Tuple[int, int]


class Generator(Enum):
    """Pieces of a slice, valued by their `.tng` token"""
    ID_DOWN = "id+"
    ID_UP = "id-"
    X_PLUS = "x+"
    X_MINUS = "x-"
    CAP_LR = "cap>"
    CAP_RL = "cap<"
    CUP_LR = "cup>"
    CUP_RL = "cup<"

    @property
    def top(self) -> Signature:
        return _SIGNATURES[self][0]

    @property
    def bottom(self) -> Signature:
        return _SIGNATURES[self][1]

    @property
    def is_crossing(self) -> bool:
        return self in (Generator.X_PLUS, Generator.X_MINUS)

    @property
    def is_identity(self) -> bool:
        return self in (Generator.ID_DOWN, Generator.ID_UP)


_SIGNATURES: Dict[Generator, Tuple[Signature, Signature]] = {
    Generator.ID_DOWN: ((DOWN,), (DOWN,)),
    Generator.ID_UP: ((UP,), (UP,)),
    Generator.X_PLUS: ((DOWN, DOWN), (DOWN, DOWN)),
    Generator.X_MINUS: ((DOWN, DOWN), (DOWN, DOWN)),
    Generator.CAP_LR: ((DOWN, UP), ()),
    Generator.CAP_RL: ((UP, DOWN), ()),
    Generator.CUP_LR: ((), (UP, DOWN)),
    Generator.CUP_RL: ((), (DOWN, UP)),
}

_TOKENS = {g.value: g for g in Generator}
_MIRROR = {Generator.X_PLUS: Generator.X_MINUS, Generator.X_MINUS: Generator.X_PLUS}


def identity_piece(orientation: str) -> Generator:
    return Generator.ID_DOWN if orientation == DOWN else Generator.ID_UP


def render_signature(signature: Signature) -> str:
    return " ".join(signature) if signature else "∅"


# === TYPES ============================================================

@dataclass(frozen=True)
class Slice:
    pieces: Tuple[Generator, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise EmptyDiagram("a slice needs at least one piece")

    @property
    def top(self) -> Signature:
        return tuple(s for piece in self.pieces for s in piece.top)

    @property
    def bottom(self) -> Signature:
        return tuple(s for piece in self.pieces for s in piece.bottom)

    def render(self) -> str:
        return " ".join(piece.value for piece in self.pieces)


@dataclass(frozen=True)
class SlicedDiagram:
    """A vertical stack of slices; level k sits above slice k, level len(slices) is the bottom"""
    top: Signature
    slices: Tuple[Slice, ...]

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(self.top))
        object.__setattr__(self, "slices", tuple(s if isinstance(s, Slice) else Slice(tuple(s)) for s in self.slices))
        if not self.slices:
            raise EmptyDiagram("a diagram needs at least one slice")
        current = self.top
        for k, piece_row in enumerate(self.slices):
            if piece_row.top != current:
                raise SignatureMismatch(f"slice {k + 1} expects {render_signature(piece_row.top)} "
                                        f"but receives {render_signature(current)}")
            current = piece_row.bottom

    @property
    def bottom(self) -> Signature:
        return self.slices[-1].bottom

    @property
    def height(self) -> int:
        return len(self.slices)

    def level_signature(self, level: int) -> Signature:
        return self.top if level == 0 else self.slices[level - 1].bottom

    def pieces(self):
        """(slice, piece index, generator, top offset, bottom offset) for every piece"""
        for k, piece_row in enumerate(self.slices):
            t = b = 0
            for j, piece in enumerate(piece_row.pieces):
                yield k, j, piece, t, b
                t += len(piece.top)
                b += len(piece.bottom)


@dataclass(frozen=True)
class MoveFixture:
    """One local picture of a relation; a relation holds when all its fixtures hold"""
    id: str
    lhs: SlicedDiagram
    rhs: SlicedDiagram
    variant: str = ""

    def __post_init__(self):
        if self.lhs.top != self.rhs.top or self.lhs.bottom != self.rhs.bottom:
            raise SignatureMismatch(f"fixture {self.variant or self.id} sides have different boundaries")


# === TEXT FORMAT ======================================================

def diagram_parse(text: str, path: Optional[str] = None) -> SlicedDiagram:
    """
    Parse the `.tng` format: a `top: v ^ ...` line, then one slice per line of
    piece tokens; `#` starts a comment

    Raises:
        UnknownToken, TextSignatureMismatch, EmptyDiagram
    """
    top: Optional[Signature] = None
    current: Signature = ()
    slices: List[Slice] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        if top is None:
            match = re.match(r"\s*top:", content)
            if match is None:
                raise FormatError("expected the `top:` line first", path, lineno, 1)
            orientations = []
            for token in re.finditer(r"\S+", content[match.end():]):
                if token.group() not in (DOWN, UP):
                    raise UnknownToken(f"unknown orientation {token.group()!r}", path, lineno,
                                       match.end() + token.start() + 1)
                orientations.append(token.group())
            top = current = tuple(orientations)
            continue

        pieces = []
        for token in re.finditer(r"\S+", content):
            if token.group() not in _TOKENS:
                raise UnknownToken(f"unknown piece {token.group()!r}", path, lineno, token.start() + 1)
            pieces.append(_TOKENS[token.group()])
        piece_row = Slice(tuple(pieces))
        if piece_row.top != current:
            raise TextSignatureMismatch(f"slice expects {render_signature(piece_row.top)} but the strands "
                                        f"above are {render_signature(current)}", path, lineno, 1)
        slices.append(piece_row)
        current = piece_row.bottom

    if top is None:
        raise EmptyDiagram(f"{path or '<text>'}: no `top:` line")
    if not slices:
        raise EmptyDiagram(f"{path or '<text>'}: diagram has no slices")
    return SlicedDiagram(top, tuple(slices))


def diagram_serialize(d: SlicedDiagram) -> str:
    head = "top: " + " ".join(d.top) if d.top else "top:"
    return "\n".join([head] + [piece_row.render() for piece_row in d.slices]) + "\n"


# === DIAGRAM ALGEBRA ==================================================

def identity_slice(signature: Signature) -> Slice:
    return Slice(tuple(identity_piece(s) for s in signature))


def identity_diagram(signature: Signature, height: int = 1) -> SlicedDiagram:
    return SlicedDiagram(tuple(signature), tuple(identity_slice(signature) for _ in range(height)))


def compose(d1: SlicedDiagram, d2: SlicedDiagram) -> SlicedDiagram:
    """d1 on top of d2"""
    if d1.bottom != d2.top:
        raise SignatureMismatch(f"cannot stack {render_signature(d1.bottom)} onto {render_signature(d2.top)}")
    return SlicedDiagram(d1.top, d1.slices + d2.slices)


def _padded(d: SlicedDiagram, height: int) -> List[Tuple[Generator, ...]]:
    rows = [piece_row.pieces for piece_row in d.slices]
    rows += [tuple(identity_piece(s) for s in d.bottom)] * (height - d.height)
    return rows


def tensor(d1: SlicedDiagram, d2: SlicedDiagram) -> SlicedDiagram:
    """d1 to the left of d2, the shorter one extended by identity slices"""
    height = max(d1.height, d2.height)
    rows = [left + right for left, right in zip(_padded(d1, height), _padded(d2, height))]
    return SlicedDiagram(d1.top + d2.top, tuple(Slice(row) for row in rows if row))


def mirror(d: SlicedDiagram) -> SlicedDiagram:
    return SlicedDiagram(d.top, tuple(Slice(tuple(_MIRROR.get(p, p) for p in piece_row.pieces))
                                      for piece_row in d.slices))


def normalize(d: SlicedDiagram) -> SlicedDiagram:
    """Interchange normal form: at most one non-identity piece per slice"""
    rows: List[Slice] = []
    for piece_row in d.slices:
        active = [j for j, p in enumerate(piece_row.pieces) if not p.is_identity]
        if not active:
            rows.append(piece_row)
            continue
        for j in active:
            row: List[Generator] = []
            for i, p in enumerate(piece_row.pieces):
                if i == j:
                    row.append(p)
                elif p.is_identity:
                    row.append(p)
                elif i < j:
                    row.extend(identity_piece(s) for s in p.bottom)
                else:
                    row.extend(identity_piece(s) for s in p.top)
            rows.append(Slice(tuple(row)))
    return SlicedDiagram(d.top, tuple(rows))


def split(d: SlicedDiagram, k: int) -> Tuple[SlicedDiagram, SlicedDiagram]:
    """Cut after slice k, so that compose(*split(d, k)) == d"""
    if not 1 <= k < d.height:
        raise DiagramError(f"cannot cut a diagram of height {d.height} after slice {k}")
    return SlicedDiagram(d.top, d.slices[:k]), SlicedDiagram(d.slices[k - 1].bottom, d.slices[k:])


def crossing_count(d: SlicedDiagram) -> Tuple[int, int]:
    pieces = [p for _, _, p, _, _ in d.pieces()]
    return pieces.count(Generator.X_PLUS), pieces.count(Generator.X_MINUS)


def writhe(d: SlicedDiagram) -> int:
    plus, minus = crossing_count(d)
    return plus - minus


def random_diagram(rng: np.random.Generator, max_width: int, height: int) -> SlicedDiagram:
    """A random valid diagram whose levels never exceed max_width strands"""
    if max_width < 1:
        raise DiagramError("random diagrams need room for at least one strand")
    width = int(rng.integers(0 if max_width >= 2 else 1, max_width + 1))
    top = tuple(DOWN if rng.random() < 0.5 else UP for _ in range(width))
    current = top
    rows = []
    for _ in range(height):
        row: List[Generator] = []
        out_width = 0
        i = 0
        while i < len(current) or not row:
            options: List[Generator] = []
            remaining = len(current) - i
            if out_width + remaining + 2 <= max_width:
                options.extend([Generator.CUP_LR, Generator.CUP_RL])
            if i < len(current):
                options.append(identity_piece(current[i]))
                pair = current[i:i + 2]
                if pair == (DOWN, DOWN):
                    options.extend([Generator.X_PLUS, Generator.X_MINUS])
                elif pair == (DOWN, UP):
                    options.append(Generator.CAP_LR)
                elif pair == (UP, DOWN):
                    options.append(Generator.CAP_RL)
            if not options:
                break
            piece = options[int(rng.integers(0, len(options)))]
            row.append(piece)
            i += len(piece.top)
            out_width += len(piece.bottom)
        rows.append(Slice(tuple(row)))
        current = rows[-1].bottom
    return SlicedDiagram(top, tuple(rows))


# === STRING KNOTS AND CLOSURES ========================================

TREFOIL_PLUS_TEXT = """\
# positive trefoil as a string knot; the cup spawns the return strand the cap closes
top: v
id+ cup<
x+ id-
x+ id-
x+ id-
id+ cap>
"""

FIGURE_EIGHT_TEXT = """\
# figure-eight knot as a string knot: a three-strand braid with alternating crossings
top: v
id+ cup<
id+ id+ cup< id-
x+ id+ id- id-
id+ x- id- id-
x+ id+ id- id-
id+ x- id- id-
id+ id+ cap> id-
id+ cap>
"""


def trefoil_plus_string() -> SlicedDiagram:
    return diagram_parse(TREFOIL_PLUS_TEXT, "<trefoil+>")


def trefoil_minus_string() -> SlicedDiagram:
    return mirror(trefoil_plus_string())


def figure_eight_string() -> SlicedDiagram:
    return diagram_parse(FIGURE_EIGHT_TEXT, "<figure-eight>")


def unknot_string() -> SlicedDiagram:
    return identity_diagram((DOWN,))


def closure(d: SlicedDiagram) -> SlicedDiagram:
    """
    Close a string knot: a cup spawns the strand entering the top and a return
    strand on the right, which meets the bottom endpoint again in a cap

    Raises:
        ClosureShapeMismatch: top or bottom is not a single downward strand
    """
    if d.top != (DOWN,) or d.bottom != (DOWN,):
        raise ClosureShapeMismatch(f"closure needs a single downward strand at both ends, got "
                                   f"{render_signature(d.top)} / {render_signature(d.bottom)}")
    rows = [Slice((Generator.CUP_RL,))]
    rows += [Slice(piece_row.pieces + (Generator.ID_UP,)) for piece_row in d.slices]
    rows.append(Slice((Generator.CAP_LR,)))
    return SlicedDiagram((), tuple(rows))


# === MOVE FIXTURES ====================================================

def _d(text: str) -> SlicedDiagram:
    return diagram_parse(text, "<fixture>")


def _sideways(kind: str, down_up: bool) -> str:
    """A crossing turned on its side with caps and cups; [↑,↓]→[↓,↑] or [↓,↑]→[↑,↓]"""
    if down_up:
        return f"cup> id+ id-\nid- {kind} id-\nid- id+ cap>\n"
    return f"id- id+ cup<\nid- {kind} id-\ncap< id+ id-\n"


def _kink(kind: str) -> str:
    return f"id+ cup<\n{kind} id-\nid+ cap>\n"


def move_fixtures() -> List[MoveFixture]:
    """Local pictures of every relation, grouped by relation id"""
    strand_down = _d("top: v\nid+\n")
    strand_up = _d("top: ^\nid-\n")
    fixtures = [
        MoveFixture("R0A", _d("top: v\nid+ cup>\ncap> id+\n"), strand_down, "R0A.1"),
        MoveFixture("R0A", _d("top: v\ncup< id+\nid+ cap<\n"), strand_down, "R0A.2"),
        MoveFixture("R0B", _d("top: ^\nid- cup<\ncap< id-\n"), strand_up, "R0B.1"),
        MoveFixture("R0B", _d("top: ^\ncup> id-\nid- cap>\n"), strand_up, "R0B.2"),
    ]
    for relation, kind in (("R0C", "x+"), ("R0D", "x-")):
        fixtures.append(MoveFixture(
            relation,
            _d(f"top: v v ^\n{kind} id-\nid+ cap>\n"),
            _d(f"top: v v ^\nid+ cup> id+ id-\nid+ id- {kind} id-\nid+ id- id+ cap>\ncap> id+\n"),
            relation,
        ))
    fixtures += [
        MoveFixture("R1", _d("top: v\n" + _kink("x+")), strand_down, "R1.1"),
        MoveFixture("R1", _d("top: v\n" + _kink("x-")), strand_down, "R1.2"),
        MoveFixture("R1′", _d("top: v\n" + _kink("x-") + _kink("x+")), strand_down, "R1′.1"),
        MoveFixture("R1′", _d("top: v\n" + _kink("x+") + _kink("x-")), strand_down, "R1′.2"),
        MoveFixture("R2A", _d("top: v v\nx+\nx-\n"), _d("top: v v\nid+ id+\n"), "R2A.1"),
        MoveFixture("R2A", _d("top: v v\nx-\nx+\n"), _d("top: v v\nid+ id+\n"), "R2A.2"),
        MoveFixture("R2B", _d("top: ^ v\n" + _sideways("x-", False) + _sideways("x+", True)),
                    _d("top: ^ v\nid- id+\n"), "R2B.1"),
        MoveFixture("R2B", _d("top: ^ v\n" + _sideways("x+", False) + _sideways("x-", True)),
                    _d("top: ^ v\nid- id+\n"), "R2B.2"),
        MoveFixture("R2C", _d("top: v ^\n" + _sideways("x+", True) + _sideways("x-", False)),
                    _d("top: v ^\nid+ id-\n"), "R2C.1"),
        MoveFixture("R2C", _d("top: v ^\n" + _sideways("x-", True) + _sideways("x+", False)),
                    _d("top: v ^\nid+ id-\n"), "R2C.2"),
    ]
    for variant, kind in (("R3.1", "x-"), ("R3.2", "x+")):
        fixtures.append(MoveFixture(
            "R3",
            _d(f"top: v v v\n{kind} id+\nid+ {kind}\n{kind} id+\n"),
            _d(f"top: v v v\nid+ {kind}\n{kind} id+\nid+ {kind}\n"),
            variant,
        ))
    fixtures += [
        MoveFixture("Identity", _d("top: v ^\nid+ id-\n"), _d("top: v ^\nid+ id-\nid+ id-\n"), "Identity.1"),
        MoveFixture("Identity", _d("top: v v\nx+\n"), _d("top: v v\nx+\nid+ id+\n"), "Identity.2"),
        MoveFixture("Interchange", _d("top: v v v v\nx+ x-\n"),
                    _d("top: v v v v\nx+ id+ id+\nid+ id+ x-\n"), "Interchange.1"),
        MoveFixture("Interchange", _d("top: v v\nx+ cup>\n"),
                    _d("top: v v\nx+\nid+ id+ cup>\n"), "Interchange.2"),
    ]
    return fixtures


RELATION_IDS = ("R0A", "R0B", "R0C", "R0D", "R1", "R1′", "R2A", "R2B", "R2C", "R3", "Identity", "Interchange")
# R1′ follows from the unframed moves; the framed set drops R1
UNFRAMED_RELATIONS = RELATION_IDS
FRAMED_RELATIONS = tuple(r for r in RELATION_IDS if r != "R1")


# === ARCS AND STRAND WALKS ============================================

@dataclass(frozen=True)
class CrossingArcs:
    """Arc ids meeting at one crossing; sign is +1 for x+ and -1 for x-"""
    slice: int
    piece: int
    sign: int
    over: int
    under_in: int
    under_out: int


@dataclass(frozen=True)
class ArcIndex:
    arcs: Tuple[Tuple[Node, ...], ...]
    arc_of: Dict[Node, int] = field(compare=False)
    crossings: Tuple[CrossingArcs, ...] = ()

    def __len__(self) -> int:
        return len(self.arcs)


class _UnionFind:
    def __init__(self, nodes):
        self.parent = {node: node for node in nodes}

    def find(self, node):
        while self.parent[node] != node:
            self.parent[node] = self.parent[self.parent[node]]
            node = self.parent[node]
        return node

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def all_nodes(d: SlicedDiagram) -> List[Node]:
    return [(level, pos) for level in range(d.height + 1) for pos in range(len(d.level_signature(level)))]


def _crossing_nodes(piece: Generator, k: int, t: int, b: int) -> Tuple[Tuple[Node, Node], Node, Node]:
    """(over strand ends, under-in node, under-out node)"""
    if piece == Generator.X_PLUS:
        return ((k, t + 1), (k + 1, b)), (k, t), (k + 1, b + 1)
    return ((k, t), (k + 1, b + 1)), (k, t + 1), (k + 1, b)


def _merge(d: SlicedDiagram, through_under: bool) -> _UnionFind:
    uf = _UnionFind(all_nodes(d))
    for k, _, piece, t, b in d.pieces():
        if piece.is_identity:
            uf.union((k, t), (k + 1, b))
        elif piece.is_crossing:
            over, under_in, under_out = _crossing_nodes(piece, k, t, b)
            uf.union(*over)
            if through_under:
                uf.union(under_in, under_out)
        elif piece in (Generator.CAP_LR, Generator.CAP_RL):
            uf.union((k, t), (k, t + 1))
        else:
            uf.union((k + 1, b), (k + 1, b + 1))
    return uf


def arc_index(d: SlicedDiagram) -> ArcIndex:
    """
    Partition the strand segments into arcs: segments join through identity
    pieces, turns and over-strands, and break under a crossing
    """
    uf = _merge(d, through_under=False)
    members: Dict[Node, List[Node]] = {}
    for node in all_nodes(d):
        members.setdefault(uf.find(node), []).append(node)
    groups = sorted((tuple(sorted(nodes)) for nodes in members.values()), key=lambda nodes: nodes[0])
    arc_of = {node: i for i, nodes in enumerate(groups) for node in nodes}

    crossings = []
    for k, j, piece, t, b in d.pieces():
        if piece.is_crossing:
            over, under_in, under_out = _crossing_nodes(piece, k, t, b)
            crossings.append(CrossingArcs(k, j, 1 if piece == Generator.X_PLUS else -1,
                                          arc_of[over[0]], arc_of[under_in], arc_of[under_out]))
    return ArcIndex(tuple(groups), arc_of, tuple(crossings))


def components(d: SlicedDiagram) -> int:
    """Number of link components, counting open strands and closed loops"""
    uf = _merge(d, through_under=True)
    return len({uf.find(node) for node in all_nodes(d)})


@dataclass(frozen=True)
class WalkStep:
    """One crossing passed on a strand walk, as under- or over-strand"""
    crossing: int
    under: bool


def _piece_at(d: SlicedDiagram, k: int, position: int, from_top: bool):
    for kk, j, piece, t, b in d.pieces():
        if kk != k:
            continue
        lo = t if from_top else b
        width = len(piece.top if from_top else piece.bottom)
        if lo <= position < lo + width:
            return j, piece, t, b
    raise DiagramError(f"no piece at slice {k + 1} position {position}")


def strand_walk(d: SlicedDiagram, start: Node) -> Tuple[List[Node], List[WalkStep]]:
    """
    Follow the orientation from a node until the strand leaves the diagram or
    returns to its start; returns the visited nodes and crossings passed
    """
    crossing_ids = {(k, j): i for i, (k, j, piece, _, _) in
                    enumerate(p for p in d.pieces() if p[2].is_crossing)}
    visited: List[Node] = [start]
    steps: List[WalkStep] = []
    node = start
    while True:
        level, pos = node
        going_down = d.level_signature(level)[pos] == DOWN
        if going_down and level == d.height or not going_down and level == 0:
            break
        if going_down:
            j, piece, t, b = _piece_at(d, level, pos, from_top=True)
            if piece == Generator.ID_DOWN:
                node = (level + 1, b)
            elif piece.is_crossing:
                over, under_in, under_out = _crossing_nodes(piece, level, t, b)
                under = node == under_in
                steps.append(WalkStep(crossing_ids[(level, j)], under))
                node = under_out if under else over[1]
            elif piece == Generator.CAP_LR:
                node = (level, t + 1)
            else:
                node = (level, t)
        else:
            j, piece, t, b = _piece_at(d, level - 1, pos, from_top=False)
            if piece == Generator.ID_UP:
                node = (level - 1, t)
            elif piece == Generator.CUP_LR:
                node = (level, b + 1)
            else:
                node = (level, b)
        if node == start:
            break
        visited.append(node)
    return visited, steps
