"""
xmodlink Tables
The trefoil tables: the Eisermann invariant over S5, and the lifted (GL(2,5))
and unlifted (PGL(2,5)) Eisermann invariants
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from xmodlink_algebra import GroupAlgebraElement, parse_word, symmetric_group
from xmodlink_builtins import resolve_pair
from xmodlink_config import XmodlinkConfig, get_logger, resolve_config
from xmodlink_diagram import SlicedDiagram, trefoil_minus_string, trefoil_plus_string
from xmodlink_invariant import boundary_sum
from xmodlink_pairs import ReidemeisterPair, eisermann_pair

logger = get_logger(__name__)

# Conjugacy class representatives of S5, in column order
S5_CLASSES = ("id", "(12)", "(12)(34)", "(123)", "(123)(45)", "(1234)", "(12345)")

# GL(2,5) matrices whose PGL(2,5) classes run through the same S5 classes
GL25_CLASSES = ("(1 0;0 1)", "(1 3;4 4)", "(0 1;1 0)", "(4 1;4 0)", "(3 1;4 4)", "(2 0;0 1)", "(3 0;3 3)")

KNOTS = {
    "K-": trefoil_minus_string,
    "K+": trefoil_plus_string,
}

AVAILABLE_TABLES = ["eisermann-s5", "lifted-gl25", "unlifted-pgl25"]


@dataclass
class TrefoilTable:
    """Rows per knot, one group-algebra entry per column"""
    title: str
    columns: List[str]
    rows: Dict[str, List[GroupAlgebraElement]] = field(default_factory=dict)

    def entry(self, knot: str, column: str) -> GroupAlgebraElement:
        return self.rows[knot][self.columns.index(column)]

    def render(self) -> str:
        """Plain-text grid with x-values as columns and knots as rows, tab separated"""
        lines = [self.title, "\t".join(["x"] + self.columns)]
        for knot, entries in self.rows.items():
            lines.append("\t".join([knot] + [entry.render() for entry in entries]))
        return "\n".join(lines)


def _fill(table: TrefoilTable, knots: Sequence[str], pairs: Sequence[ReidemeisterPair], top_fixed: bool,
          config: XmodlinkConfig, workers: Optional[int]) -> TrefoilTable:
    for knot in knots:
        d: SlicedDiagram = KNOTS[knot]()
        entries = []
        for pair in pairs:
            one = parse_word(pair.G, pair.G.names[pair.G.identity])
            if top_fixed:
                entries.append(boundary_sum(d, pair, top=one, config=config, workers=workers))
            else:
                entries.append(boundary_sum(d, pair, bottom=one, config=config, workers=workers))
            logger.debug("%s %s: %s", knot, pair.name, entries[-1].render())
        table.rows[knot] = entries
    return table


def eisermann_s5_table(config: Optional[XmodlinkConfig] = None, workers: Optional[int] = None) -> TrefoilTable:
    """Σ_a ⟨1 | I(K) | a⟩ for the Eisermann pair on S5"""
    config = resolve_config(config)
    logger.info("🚀 Computing the Eisermann invariant table over S5")
    G = symmetric_group(5, config)
    pairs = [eisermann_pair(G, x, on_derived=False, config=config) for x in S5_CLASSES]
    table = TrefoilTable("Eisermann invariant of the trefoils, G = S5", list(S5_CLASSES))
    return _fill(table, ("K-", "K+"), pairs, True, config, workers)


def lifted_gl25_table(config: Optional[XmodlinkConfig] = None, workers: Optional[int] = None) -> TrefoilTable:
    """Σ_s ⟨s | I(K) | 1⟩ for the lifted Eisermann pair of GL(2,5) → PGL(2,5)"""
    config = resolve_config(config)
    logger.info("🚀 Computing the lifted Eisermann invariant table over GL(2,5)")
    pairs = [resolve_pair(f"lifted:gl25:x={x}", config) for x in GL25_CLASSES]
    table = TrefoilTable("Lifted Eisermann invariant of the trefoils, GL(2,5) -> PGL(2,5)",
                         ["~" + x for x in GL25_CLASSES])
    return _fill(table, ("K+", "K-"), pairs, False, config, workers)


def unlifted_pgl25_table(config: Optional[XmodlinkConfig] = None, workers: Optional[int] = None) -> TrefoilTable:
    """Σ_s ⟨s | I(K) | 1⟩ for the Eisermann pair on PGL(2,5)"""
    config = resolve_config(config)
    logger.info("🚀 Computing the unlifted Eisermann invariant table over PGL(2,5)")
    pairs = [resolve_pair(f"unlifted:pgl25:x={x}", config) for x in GL25_CLASSES]
    table = TrefoilTable("Unlifted Eisermann invariant of the trefoils, G = PGL(2,5)",
                         ["~" + x for x in GL25_CLASSES])
    return _fill(table, ("K+", "K-"), pairs, False, config, workers)


TABLES = {
    "eisermann-s5": eisermann_s5_table,
    "lifted-gl25": lifted_gl25_table,
    "unlifted-pgl25": unlifted_pgl25_table,
}