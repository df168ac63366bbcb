"""
xmodlink Invariant Engine
Reidemeister colourings of sliced diagrams, the state sum I_Φ, rack colouring
counts, move-invariance and TQFT harnesses, and the Wirtinger/longitude oracle
for Eisermann invariants
"""

import itertools
import weakref
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from xmodlink_algebra import (
    EnhancedWord,
    FiniteGroup,
    GroupAlgebraElement,
    GroupElement,
    GroupHom,
    commutator_subgroup,
    evaluate_word,
    ga_from_counts,
    word_from_indices,
)
from xmodlink_catgroup import EvaluationPlan, evaluate_plan, evaluation_plan
from xmodlink_config import XmodlinkConfig, get_logger, resolve_config
from xmodlink_diagram import (
    DOWN,
    FRAMED_RELATIONS,
    UNFRAMED_RELATIONS,
    ArcIndex,
    MoveFixture,
    SlicedDiagram,
    arc_index,
    components,
    compose,
    move_fixtures,
    render_signature,
    strand_walk,
)
from xmodlink_errors import (
    InvariantError,
    MultipleComponents,
    NotAStringKnot,
    SignatureMismatch,
    WordSignatureMismatch,
)
from xmodlink_pairs import ReidemeisterPair
from xmodlink_xmod import Rack

logger = get_logger(__name__)

PSI, PHI = 0, 1


# === TYPES ============================================================

@dataclass(frozen=True, eq=False)
class Colouring:
    """
    A Reidemeister colouring: one G-element per strand segment end, constant
    along arcs, and the E-label of every crossing (numbered in piece order)
    """
    strand_colours: Dict[Tuple[int, int], GroupElement]
    crossing_labels: Dict[int, GroupElement]
    arc_colours: Tuple[int, ...] = ()


@dataclass(frozen=True)
class InvariantResult:
    """⟨source_word | I | target_word⟩ as label multiplicities over E"""
    source_word: EnhancedWord
    target_word: EnhancedWord
    label_group: FiniteGroup
    terms: Tuple[Tuple[int, int], ...] = ()

    def as_dict(self) -> Dict[int, int]:
        return dict(self.terms)

    def as_algebra(self) -> GroupAlgebraElement:
        return ga_from_counts(self.label_group, self.as_dict())

    def total(self) -> int:
        return sum(c for _, c in self.terms)

    def render(self) -> str:
        return f"⟨{_word_text(self.source_word)} | I | {_word_text(self.target_word)}⟩ = {self.as_algebra().render()}"

    def to_tsv(self) -> str:
        lines = [f"source: {_word_text(self.source_word)}", f"target: {_word_text(self.target_word)}"]
        lines += [f"{c}\t{self.label_group.names[e]}" for e, c in self.terms]
        return "\n".join(lines) + "\n"


def _word_text(w: EnhancedWord) -> str:
    return w.render() if len(w) else "∅"


def _result(source: EnhancedWord, target: EnhancedWord, E: FiniteGroup, counts) -> InvariantResult:
    return InvariantResult(source, target, E, tuple(sorted((int(e), int(c)) for e, c in counts.items() if c)))


@dataclass(frozen=True)
class WirtingerData:
    """
    Arcs of a string knot in travel order from the top endpoint; crossing i is
    passed underneath between arc i and arc i+1, with sign signs[i] and over
    arc at travel position over_positions[i]
    """
    arcs: Tuple[int, ...]
    crossings: Tuple[int, ...]
    signs: Tuple[int, ...]
    over_positions: Tuple[int, ...]
    base: int = 0

    @property
    def longitude_word(self) -> Tuple[Tuple[int, int], ...]:
        """(travel position, exponent) factors of ∏ m_i^{-θ_i} m_{j_i}^{θ_i}"""
        word = []
        for i, (theta, j) in enumerate(zip(self.signs, self.over_positions)):
            word += [(i, -theta), (j, theta)]
        return tuple(word)


# === CONSTRAINT SOLVER ================================================

def _inverse_rows(table: np.ndarray) -> List[List[Tuple[int, ...]]]:
    """result[X][Z] lists every Y with table[X, Y] == Z"""
    n = table.shape[0]
    result: List[List[Tuple[int, ...]]] = [[() for _ in range(n)] for _ in range(n)]
    for X in range(n):
        buckets = defaultdict(list)
        for Y, Z in enumerate(table[X].tolist()):
            buckets[Z].append(Y)
        for Z, ys in buckets.items():
            result[X][Z] = tuple(ys)
    return result


class _CrossingSolver:
    """Forward Z-tables of a pair or rack and their inverse multimaps"""

    def __init__(self, order: int, zpsi: np.ndarray, zphi: np.ndarray):
        self.order = order
        self.forward = (zpsi.tolist(), zphi.tolist())
        self.under_out = (_inverse_rows(zpsi), _inverse_rows(zphi))
        self.over = (_inverse_rows(zpsi.T), _inverse_rows(zphi.T))

    def lookup(self, rows: List[List[Tuple[int, ...]]], a: int, z: int) -> Tuple[int, ...]:
        return rows[a][z]


_SOLVERS: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _solver_for(pair: ReidemeisterPair) -> _CrossingSolver:
    solver = _SOLVERS.get(pair)
    if solver is None:
        solver = _CrossingSolver(pair.G.order, pair.zpsi, pair.zphi)
        _SOLVERS[pair] = solver
    return solver


def _rack_solver(rack: Rack) -> _CrossingSolver:
    # zpsi(b, a) = b▷a and zphi(b, a) = a◁b
    solver = _SOLVERS.get(rack)
    if solver is None:
        solver = _CrossingSolver(rack.size, np.asarray(rack.right), np.asarray(rack.left).T)
        _SOLVERS[rack] = solver
    return solver


@dataclass(frozen=True)
class _ColouringProblem:
    """Arc variables of one diagram and its crossing constraints (table, over, under-in, under-out)"""
    arc_count: int
    crossings: Tuple[Tuple[int, int, int, int], ...]
    incidence: Tuple[Tuple[int, ...], ...]

    def consistent(self, solver: _CrossingSolver, colours: List[int], k: int) -> bool:
        table, over, under_in, under_out = self.crossings[k]
        X, Z, Y = colours[over], colours[under_in], colours[under_out]
        if X < 0 or Z < 0 or Y < 0:
            return True
        return solver.forward[table][X][Y] == Z

    def candidates(self, solver: _CrossingSolver, colours: List[int], arc: int) -> Sequence[int]:
        result: Optional[Sequence[int]] = None
        for k in self.incidence[arc]:
            table, over, under_in, under_out = self.crossings[k]
            roles = (over, under_in, under_out)
            if roles.count(arc) != 1 or any(colours[r] < 0 for r in roles if r != arc):
                continue
            if arc == under_in:
                options: Sequence[int] = (solver.forward[table][colours[over]][colours[under_out]],)
            elif arc == under_out:
                options = solver.lookup(solver.under_out[table], colours[over], colours[under_in])
            else:
                options = solver.lookup(solver.over[table], colours[under_out], colours[under_in])
            if result is None:
                result = options
            else:
                allowed = set(options)
                result = tuple(v for v in result if v in allowed)
            if not result:
                return ()
        return range(solver.order) if result is None else result

    def choose(self, solver: _CrossingSolver, colours: List[int]) -> Tuple[int, Sequence[int]]:
        """Most constrained free arc; ties go to the arc on more crossings, then the lower id"""
        best = None
        for arc in range(self.arc_count):
            if colours[arc] >= 0:
                continue
            options = self.candidates(solver, colours, arc)
            key = (len(options), -len(self.incidence[arc]), arc)
            if best is None or key < best[0]:
                best = (key, arc, options)
                if not options:
                    break
        return best[1], best[2]

    def seed(self, solver: _CrossingSolver, fixed: Dict[int, int]) -> Optional[List[int]]:
        colours = [-1] * self.arc_count
        for arc, value in fixed.items():
            if colours[arc] >= 0 and colours[arc] != value:
                return None
            colours[arc] = value
        if not all(self.consistent(solver, colours, k) for k in range(len(self.crossings))):
            return None
        return colours

    def branch(self, solver: _CrossingSolver, colours: List[int], arc: int,
               values: Sequence[int]) -> Iterator[Tuple[int, ...]]:
        for value in values:
            colours[arc] = value
            if all(self.consistent(solver, colours, k) for k in self.incidence[arc]):
                yield from self.search(solver, colours)
        colours[arc] = -1

    def search(self, solver: _CrossingSolver, colours: List[int]) -> Iterator[Tuple[int, ...]]:
        if all(c >= 0 for c in colours):
            yield tuple(colours)
            return
        arc, options = self.choose(solver, colours)
        yield from self.branch(solver, colours, arc, options)


@dataclass(frozen=True)
class _Compiled:
    arcs: ArcIndex
    problem: _ColouringProblem
    plan: EvaluationPlan


@lru_cache(maxsize=512)
def _compile(d: SlicedDiagram) -> _Compiled:
    arcs = arc_index(d)
    crossings = tuple((PSI if c.sign > 0 else PHI, c.over, c.under_in, c.under_out) for c in arcs.crossings)
    incidence: List[List[int]] = [[] for _ in arcs.arcs]
    for k, (_, over, under_in, under_out) in enumerate(crossings):
        for arc in sorted({over, under_in, under_out}):
            incidence[arc].append(k)
    problem = _ColouringProblem(len(arcs), crossings, tuple(tuple(i) for i in incidence))
    return _Compiled(arcs, problem, evaluation_plan(d, arcs))


def _solve_chunk(problem: _ColouringProblem, solver: _CrossingSolver, colours: List[int],
                 arc: int, values: Sequence[int]) -> List[Tuple[int, ...]]:
    return list(problem.branch(solver, list(colours), arc, values))


def _chunks(values: Sequence[int], parts: int) -> List[List[int]]:
    values = list(values)
    size = -(-len(values) // parts)
    return [values[i:i + size] for i in range(0, len(values), size)]


def _solve(compiled: _Compiled, solver: _CrossingSolver, fixed: Dict[int, int],
           workers: int) -> Iterator[Tuple[int, ...]]:
    """
    Arc colourings extending the fixed arcs, in search order; with several
    workers the first branching arc is split into contiguous value ranges
    and the per-range results are concatenated in range order
    """
    problem = compiled.problem
    colours = problem.seed(solver, fixed)
    if colours is None:
        return
    if workers <= 1 or all(c >= 0 for c in colours):
        yield from problem.search(solver, colours)
        return
    arc, options = problem.choose(solver, colours)
    if len(options) < 2:
        yield from problem.branch(solver, colours, arc, options)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_solve_chunk, problem, solver, colours, arc, chunk)
                   for chunk in _chunks(options, workers)]
        for future in futures:
            yield from future.result()


def _boundary_fixing(d: SlicedDiagram, compiled: _Compiled, top: Optional[Sequence[int]],
                     bottom: Optional[Sequence[int]]) -> Tuple[Dict[int, int], bool]:
    """Arc values forced by the boundary words, and whether two of them collide"""
    fixed: Dict[int, int] = {}
    conflicts = False
    for level, word in ((0, top), (d.height, bottom)):
        if word is None:
            continue
        for pos, value in enumerate(word):
            arc = compiled.arcs.arc_of[(level, pos)]
            if fixed.get(arc, value) != value:
                conflicts = True
            fixed[arc] = int(value)
    return {} if conflicts else fixed, conflicts


def _check_word(w: Optional[EnhancedWord], signature, side: str, G: FiniteGroup) -> Optional[Tuple[int, ...]]:
    if w is None:
        return None
    if w.signature() != tuple(signature):
        raise WordSignatureMismatch(f"{side} word {_word_text(w)} does not fit signature "
                                    f"{render_signature(tuple(signature))}")
    if not w.group.is_same(G):
        raise WordSignatureMismatch(f"{side} word lives over {w.group.name}, colours live in {G.name}")
    return w.indices()


def _arc_colourings(d: SlicedDiagram, solver: _CrossingSolver, top: Optional[Sequence[int]],
                    bottom: Optional[Sequence[int]], workers: int) -> Iterator[Tuple[int, ...]]:
    compiled = _compile(d)
    fixed, conflicts = _boundary_fixing(d, compiled, top, bottom)
    if conflicts:
        return iter(())
    return _solve(compiled, solver, fixed, workers)


def _workers(config: XmodlinkConfig, workers: Optional[int]) -> int:
    return workers if workers is not None else config.workers


# === COLOURINGS AND STATE SUMS ========================================

def enumerate_colourings(d: SlicedDiagram, pair: ReidemeisterPair, top: Optional[EnhancedWord],
                         bottom: Optional[EnhancedWord] = None, config: Optional[XmodlinkConfig] = None,
                         workers: Optional[int] = None) -> Iterator[Colouring]:
    """
    Every Reidemeister colouring of d extending the given boundary words

    Raises:
        WordSignatureMismatch
    """
    config = resolve_config(config)
    G, E = pair.G, pair.E
    top_idx = _check_word(top, d.top, "top", G)
    bottom_idx = _check_word(bottom, d.bottom, "bottom", G)
    compiled = _compile(d)
    for colours in _arc_colourings(d, _solver_for(pair), top_idx, bottom_idx, _workers(config, workers)):
        strands = {node: GroupElement(G, colours[arc]) for node, arc in compiled.arcs.arc_of.items()}
        labels = {}
        for k, (table, over, _, under_out) in enumerate(compiled.problem.crossings):
            source = pair.psi if table == PSI else pair.phi
            labels[k] = GroupElement(E, int(source[colours[over], colours[under_out]]))
        yield Colouring(strands, labels, colours)


def _word_at(d: SlicedDiagram, compiled: _Compiled, colours: Tuple[int, ...], level: int) -> Tuple[int, ...]:
    width = len(d.level_signature(level))
    return tuple(colours[compiled.arcs.arc_of[(level, pos)]] for pos in range(width))


def _label_counts(d: SlicedDiagram, pair: ReidemeisterPair, top: Optional[Sequence[int]],
                  bottom: Optional[Sequence[int]], config: XmodlinkConfig,
                  workers: int) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Counter]:
    """(top colours, bottom colours) ↦ Counter of E-labels over all matching colourings"""
    compiled = _compile(d)
    boundary = pair.xmod.boundary.image
    closed = not d.top and not d.bottom
    table: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Counter] = defaultdict(Counter)
    for colours in _arc_colourings(d, _solver_for(pair), top, bottom, workers):
        _, label = evaluate_plan(compiled.plan, colours, pair, config)
        if config.debug_checks and closed and boundary[label] != pair.G.identity:
            raise InvariantError(f"closed diagram evaluated outside ker ∂: {pair.E.names[label]}")
        key = (_word_at(d, compiled, colours, 0), _word_at(d, compiled, colours, d.height))
        table[key][label] += 1
    return table


def state_sum(d: SlicedDiagram, pair: ReidemeisterPair, top: EnhancedWord, bottom: EnhancedWord,
              config: Optional[XmodlinkConfig] = None, workers: Optional[int] = None) -> InvariantResult:
    """
    ⟨top | I_Φ(d) | bottom⟩: the evaluations of all colourings with the given
    boundary, collected per E-label

    Raises:
        WordSignatureMismatch
    """
    config = resolve_config(config)
    top_idx = _check_word(top, d.top, "top", pair.G)
    bottom_idx = _check_word(bottom, d.bottom, "bottom", pair.G)
    counts: Counter = Counter()
    for labels in _label_counts(d, pair, top_idx, bottom_idx, config, _workers(config, workers)).values():
        counts.update(labels)
    result = _result(top, bottom, pair.E, counts)
    if config.debug_checks:
        source, target = evaluate_word(top).index, evaluate_word(bottom).index
        boundary = pair.xmod.boundary.image
        for e, _ in result.terms:
            if pair.G.mul(int(boundary[e]), source) != target:
                raise InvariantError(f"term {pair.E.names[e]} does not map {_word_text(top)} to {_word_text(bottom)}")
    logger.debug("state sum of %d colourings for %s", result.total(), pair.name)
    return result


def invariant_matrix(d: SlicedDiagram, pair: ReidemeisterPair, top: EnhancedWord,
                     config: Optional[XmodlinkConfig] = None,
                     workers: Optional[int] = None) -> Dict[EnhancedWord, InvariantResult]:
    """⟨top | I_Φ(d) | ω⟩ for every bottom word ω that some colouring realises, ordered by ω"""
    config = resolve_config(config)
    top_idx = _check_word(top, d.top, "top", pair.G)
    table = _label_counts(d, pair, top_idx, None, config, _workers(config, workers))
    matrix = {}
    for (_, bottom_idx), labels in sorted(table.items()):
        bottom = word_from_indices(pair.G, bottom_idx, d.bottom)
        matrix[bottom] = _result(top, bottom, pair.E, labels)
    return matrix


def boundary_sum(d: SlicedDiagram, pair: ReidemeisterPair, top: Optional[EnhancedWord] = None,
                 bottom: Optional[EnhancedWord] = None, config: Optional[XmodlinkConfig] = None,
                 workers: Optional[int] = None) -> GroupAlgebraElement:
    """Sum of the labels of all colourings with the given boundary; an omitted side ranges freely"""
    config = resolve_config(config)
    top_idx = _check_word(top, d.top, "top", pair.G)
    bottom_idx = _check_word(bottom, d.bottom, "bottom", pair.G)
    counts: Counter = Counter()
    for labels in _label_counts(d, pair, top_idx, bottom_idx, config, _workers(config, workers)).values():
        counts.update(labels)
    return ga_from_counts(pair.E, counts)


def projected_result(result: InvariantResult, hom: GroupHom) -> InvariantResult:
    """Push every label forward along hom, typically the boundary map of a lifted pair"""
    pushed = result.as_algebra().push_forward(hom)
    return InvariantResult(result.source_word, result.target_word, hom.target, pushed.coeffs)


# === RACK INVARIANTS ==================================================

def rack_colouring_count(d: SlicedDiagram, rack: Rack, top: Optional[Sequence[Union[int, str]]] = None,
                         bottom: Optional[Sequence[Union[int, str]]] = None) -> int:
    """
    Number of arc colourings by rack elements obeying the rack rules at every
    crossing, with optional fixed boundary colours

    Raises:
        WordSignatureMismatch
    """
    words = []
    for side, word, signature in (("top", top, d.top), ("bottom", bottom, d.bottom)):
        if word is None:
            words.append(None)
            continue
        if len(word) != len(signature):
            raise WordSignatureMismatch(f"{side} colours {list(word)} do not fit width {len(signature)}")
        words.append(tuple(rack.index(w) for w in word))
    return sum(1 for _ in _arc_colourings(d, _rack_solver(rack), words[0], words[1], 1))


def rack_tangle_terms(d: SlicedDiagram, rack: Rack, group_law: FiniteGroup,
                      top: EnhancedWord) -> Dict[EnhancedWord, InvariantResult]:
    """
    The state sum of pair_from_rack(rack, group_law) predicted from rack
    colourings alone: each colouring from ω to ω′ contributes e(ω′)e(ω)⁻¹
    """
    top_idx = _check_word(top, d.top, "top", group_law)
    compiled = _compile(d)
    source = evaluate_word(top).index
    table: Dict[Tuple[int, ...], Counter] = defaultdict(Counter)
    for colours in _arc_colourings(d, _rack_solver(rack), top_idx, None, 1):
        bottom_idx = _word_at(d, compiled, colours, d.height)
        target = evaluate_word(word_from_indices(group_law, bottom_idx, d.bottom)).index
        table[bottom_idx][group_law.mul(target, group_law.inv(source))] += 1
    terms = {}
    for bottom_idx, labels in sorted(table.items()):
        bottom = word_from_indices(group_law, bottom_idx, d.bottom)
        terms[bottom] = _result(top, bottom, group_law, labels)
    return terms


# === MOVE INVARIANCE AND TQFT =========================================

@dataclass
class MoveCheck:
    relation: str
    variant: str
    holds: bool
    boundaries_checked: int
    counterexample: Optional[str] = None

    def render(self) -> str:
        if self.holds:
            return f"✅ {self.variant} holds ({self.boundaries_checked} boundary words)"
        return f"❌ {self.variant} FAILED ({self.counterexample})"


def _boundary_words(G: FiniteGroup, width: int, config: XmodlinkConfig) -> Iterator[Tuple[int, ...]]:
    if G.order ** width <= config.exhaustive_boundary_cap:
        yield from itertools.product(range(G.order), repeat=width)
        return
    rng = np.random.default_rng(config.random_seed)
    for _ in range(config.boundary_samples):
        yield tuple(int(v) for v in rng.integers(0, G.order, size=width))


def _render_labels(E: FiniteGroup, labels: Counter) -> str:
    return ga_from_counts(E, labels).render()


def check_move_invariance(pair: ReidemeisterPair, fixture: MoveFixture,
                          config: Optional[XmodlinkConfig] = None) -> MoveCheck:
    """
    Compare the state sums of both sides for every top enhancement (sampled
    when the boundary is too wide), against every bottom at once
    """
    config = resolve_config(config)
    G = pair.G
    checked = 0
    for top in _boundary_words(G, len(fixture.lhs.top), config):
        checked += 1
        lhs = _label_counts(fixture.lhs, pair, top, None, config, 1)
        rhs = _label_counts(fixture.rhs, pair, top, None, config, 1)
        if lhs == rhs:
            continue
        for key in sorted(set(lhs) | set(rhs)):
            if lhs.get(key, Counter()) != rhs.get(key, Counter()):
                top_word = word_from_indices(G, key[0], fixture.lhs.top)
                bottom_word = word_from_indices(G, key[1], fixture.lhs.bottom)
                detail = (f"witness top={_word_text(top_word)} bottom={_word_text(bottom_word)}: "
                          f"lhs {_render_labels(pair.E, lhs.get(key, Counter()))} "
                          f"vs rhs {_render_labels(pair.E, rhs.get(key, Counter()))}")
                logger.debug("move %s breaks for %s: %s", fixture.variant, pair.name, detail)
                return MoveCheck(fixture.id, fixture.variant, False, checked, detail)
    return MoveCheck(fixture.id, fixture.variant, True, checked)


@dataclass
class RelationReport:
    """Per relation id, the fixture checks; a relation holds when all of its fixtures hold"""
    framed: bool
    checks: Dict[str, List[MoveCheck]] = field(default_factory=dict)

    def holds(self, relation: str) -> bool:
        return all(c.holds for c in self.checks[relation])

    @property
    def passed(self) -> bool:
        return all(self.holds(r) for r in self.checks)

    def held_count(self) -> int:
        return sum(1 for r in self.checks if self.holds(r))

    def failed_relations(self) -> List[str]:
        return [r for r in self.checks if not self.holds(r)]

    def render(self) -> str:
        lines = []
        for relation, checks in self.checks.items():
            failures = [c for c in checks if not c.holds]
            if failures:
                lines.append(f"❌ {relation} FAILED ({failures[0].counterexample})")
            else:
                lines.append(f"✅ {relation} holds")
        kind = "framed" if self.framed else "unframed"
        lines.append(f"{self.held_count()}/{len(self.checks)} relations hold ({kind} set)")
        return "\n".join(lines)


def check_relations(pair: ReidemeisterPair, framed: bool = False,
                    config: Optional[XmodlinkConfig] = None) -> RelationReport:
    """Run every fixture of the unframed (or framed) relation set"""
    config = resolve_config(config)
    relations = FRAMED_RELATIONS if framed else UNFRAMED_RELATIONS
    report = RelationReport(framed, {r: [] for r in relations})
    logger.info("🧪 Checking %d relations for %s", len(relations), pair.name)
    for fixture in move_fixtures():
        if fixture.id in report.checks:
            report.checks[fixture.id].append(check_move_invariance(pair, fixture, config))
    logger.info("%s %d/%d relations hold for %s", "✅" if report.passed else "❌",
                report.held_count(), len(relations), pair.name)
    return report


def tqft_check(d1: SlicedDiagram, d2: SlicedDiagram, pair: ReidemeisterPair, top: EnhancedWord,
               bottom: EnhancedWord, config: Optional[XmodlinkConfig] = None) -> bool:
    """
    State sum of d1 then d2 against the sum over middle enhancements of the
    composed state sums of the two halves

    Raises:
        SignatureMismatch
    """
    if d1.bottom != d2.top:
        raise SignatureMismatch(f"cannot stack {render_signature(d1.bottom)} over {render_signature(d2.top)}")
    config = resolve_config(config)
    E = pair.E
    whole = state_sum(compose(d1, d2), pair, top, bottom, config)
    composed: Counter = Counter()
    for middle, upper in invariant_matrix(d1, pair, top, config).items():
        lower = state_sum(d2, pair, middle, bottom, config)
        for e, m in upper.terms:
            for f, n in lower.terms:
                composed[E.mul(f, e)] += m * n
    return whole.terms == _result(top, bottom, E, composed).terms


# === WIRTINGER ORACLE =================================================

def diagram_to_wirtinger(d: SlicedDiagram) -> WirtingerData:
    """
    Raises:
        NotAStringKnot: the boundary is not a single downward strand
        MultipleComponents: closed loops besides the string
    """
    if d.top != (DOWN,) or d.bottom != (DOWN,):
        raise NotAStringKnot(f"boundary {render_signature(d.top)} / {render_signature(d.bottom)} is not v / v")
    if components(d) != 1:
        raise MultipleComponents(f"diagram has {components(d)} components")
    arcs = arc_index(d)
    _, steps = strand_walk(d, (0, 0))
    order = [arcs.arc_of[(0, 0)]]
    crossing_ids = []
    for step in steps:
        if step.under:
            crossing_ids.append(step.crossing)
            order.append(arcs.crossings[step.crossing].under_out)
    position = {arc: i for i, arc in enumerate(order)}
    signs = tuple(arcs.crossings[c].sign for c in crossing_ids)
    overs = tuple(position[arcs.crossings[c].over] for c in crossing_ids)
    return WirtingerData(tuple(order), tuple(crossing_ids), signs, overs)


def _conjugate_step(G: FiniteGroup, sign: int, m_in: int, m_over: int) -> int:
    if sign > 0:
        return G.product(G.inv(m_over), m_in, m_over)
    return G.product(m_over, m_in, G.inv(m_over))


def partial_longitudes(G: FiniteGroup, w: WirtingerData, meridians: Sequence[int]) -> List[int]:
    """l_1 = 1 and l_{i+1} = l_i m_in^{-θ} m_over^{θ} along the travel order"""
    def power(g: int, k: int) -> int:
        return g if k > 0 else G.inv(g)

    result = [G.identity]
    for i, (theta, j) in enumerate(zip(w.signs, w.over_positions)):
        result.append(G.product(result[-1], power(meridians[i], -theta), power(meridians[j], theta)))
    return result


def _conjugacy_class(G: FiniteGroup, x: int) -> List[int]:
    return sorted({G.product(G.inv(g), x, g) for g in range(G.order)})


def wirtinger_colourings(G: FiniteGroup, x: Union[int, str, GroupElement],
                         w: WirtingerData) -> Iterator[Tuple[int, ...]]:
    """Meridian colourings in travel order with the base arc coloured x"""
    xi = G.index(x)
    values = _conjugacy_class(G, xi)
    colours: List[Optional[int]] = [None] * len(w.arcs)
    colours[w.base] = xi

    def step(i: int) -> Iterator[Tuple[int, ...]]:
        if i == len(w.signs):
            yield tuple(colours)
            return
        j = w.over_positions[i]
        if colours[j] is None:
            for value in values:
                colours[j] = value
                yield from propagate(i)
            colours[j] = None
        else:
            yield from propagate(i)

    def propagate(i: int) -> Iterator[Tuple[int, ...]]:
        value = _conjugate_step(G, w.signs[i], colours[i], colours[w.over_positions[i]])
        if colours[i + 1] is None:
            colours[i + 1] = value
            yield from step(i + 1)
            colours[i + 1] = None
        elif colours[i + 1] == value:
            yield from step(i + 1)

    yield from step(0)


def eisermann_oracle(G: FiniteGroup, x: Union[int, str, GroupElement], d: SlicedDiagram) -> Dict[int, int]:
    """
    Knot-group representations sending the base meridian to x, counted per
    image of the longitude; no crossed modules involved
    """
    w = diagram_to_wirtinger(d)
    counts: Counter = Counter()
    for meridians in wirtinger_colourings(G, x, w):
        counts[partial_longitudes(G, w, meridians)[-1]] += 1
    return dict(sorted(counts.items()))


def eisermann_invariant(G: FiniteGroup, x: Union[int, str, GroupElement], d: SlicedDiagram) -> GroupAlgebraElement:
    """
    Oracle counts as an element of ℤ[G]; every longitude lies in G′ ∩ C(x)

    Raises:
        InvariantError: a longitude escaped G′ ∩ C(x)
    """
    xi = G.index(x)
    counts = eisermann_oracle(G, xi, d)
    derived = set(commutator_subgroup(G)[1].image.tolist())
    for l in counts:
        if l not in derived or G.mul(l, xi) != G.mul(xi, l):
            raise InvariantError(f"longitude {G.names[l]} is outside G′ ∩ C({G.names[xi]})", witness=(G.names[l],))
    return ga_from_counts(G, counts)


def _words(G: FiniteGroup, *factors):
    result = factors[0]
    for f in factors[1:]:
        result = G.mult[result, f]
    return result


def trefoil_closed_form(G: FiniteGroup, x: Union[int, str, GroupElement], sign: int) -> Dict[int, int]:
    """
    Bottom colour ↦ number of trefoil colourings with top colour 1, straight
    from the two counting equations of each trefoil
    """
    xi = G.index(x)
    inv = G.inverse
    x1, xm = xi, int(inv[xi])
    g = np.arange(G.order)[:, None]
    h = np.arange(G.order)[None, :]
    ginv, hinv = inv[g], inv[h]
    if sign > 0:
        # rows g are the bottom colour, columns h run through G
        top = _words(G, x1, x1, x1, h, ginv, xm, g, hinv, xm, h, ginv, xm, g)
        loop = _words(G, x1, x1, g, hinv, xm, h, ginv, xm, g)
        hits = (top == G.identity) & (loop == h)
        counts = hits.sum(axis=1)
        return {int(b): int(c) for b, c in enumerate(counts) if c}
    # columns h are the bottom colour, rows g run through G
    loop = _words(G, xm, xm, xm, h, ginv, x1, g, hinv, x1, h, ginv, x1, g)
    top = _words(G, xm, xm, g, hinv, x1, h, ginv, x1, g)
    hits = (loop == g) & (top == G.identity)
    counts = hits.sum(axis=0)
    return {int(b): int(c) for b, c in enumerate(counts) if c}
