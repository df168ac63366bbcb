"""
xmodlink Files
Readers for the .grp, .xmod, .rck, .coc, .pair and .tng text formats and the
TSV writer for invariant results

All formats are UTF-8 text; `#` starts a comment and blank lines are ignored.
Paths inside a file are resolved relative to that file's directory. Element
names are whitespace-free tokens.
"""

import os
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from xmodlink_algebra import FiniteGroup, group_from_cayley, group_hom
from xmodlink_config import XmodlinkConfig, get_logger
from xmodlink_diagram import SlicedDiagram, diagram_parse
from xmodlink_errors import FileNotFound, FormatError, UnknownToken, XmodlinkError
from xmodlink_invariant import InvariantResult
from xmodlink_pairs import ReidemeisterPair, pair_new
from xmodlink_xmod import CrossedModule, Rack, RackCocycle, cocycle_new, rack_new, xmod_new

logger = get_logger(__name__)

Line = Tuple[int, List[str]]


# === HELPERS ==========================================================

def _read(path: str) -> str:
    if not os.path.isfile(path):
        raise FileNotFound(f"{path}: no such file")
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _lines(text: str) -> List[Line]:
    """(line number, tokens) for every non-blank line, comments stripped"""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            lines.append((lineno, tokens))
    return lines


def _column(text: str, lineno: int, token: str) -> int:
    line = text.splitlines()[lineno - 1]
    return line.find(token) + 1 if token in line else 1


def _expect_header(lines: List[Line], keyword: str, arity: int, path: str) -> List[str]:
    if not lines:
        raise FormatError(f"empty file, expected `{keyword}`", path, 1, 1)
    lineno, tokens = lines[0]
    if tokens[0] != keyword or len(tokens) != arity + 1:
        raise FormatError(f"expected `{keyword}` followed by {arity} field(s)", path, lineno, 1)
    return tokens[1:]


def _int_field(value: str, path: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise FormatError(f"expected an integer, got {value!r}", path, lineno, 1) from None


def _name_map(group: FiniteGroup) -> Dict[str, int]:
    return {label: i for i, label in enumerate(group.names)}


def _relative(base: str, target: str) -> str:
    return target if os.path.isabs(target) else os.path.join(os.path.dirname(base), target)


def _reference(lines: Iterator[Line], keyword: str, path: str) -> str:
    lineno, tokens = next(lines, (None, None))
    if tokens is None or tokens[0] != f"{keyword}:" or len(tokens) != 2:
        raise FormatError(f"expected `{keyword}: <path>`", path, lineno or 1, 1)
    return _relative(path, tokens[1])


def _lookup(names: Dict[str, int], token: str, what: str, text: str, path: str, lineno: int) -> int:
    if token not in names:
        raise UnknownToken(f"unknown {what} {token!r}", path, lineno, _column(text, lineno, token))
    return names[token]


def _table(rows: List[Line], names: Dict[str, int], size: int, text: str, path: str, what: str) -> np.ndarray:
    if len(rows) != size:
        lineno = rows[-1][0] if rows else 1
        raise FormatError(f"expected {size} table rows, found {len(rows)}", path, lineno, 1)
    table = np.empty((size, size), dtype=np.int64)
    for i, (lineno, tokens) in enumerate(rows):
        if len(tokens) != size:
            raise FormatError(f"row has {len(tokens)} entries, expected {size}", path, lineno, 1)
        for j, token in enumerate(tokens):
            table[i, j] = _lookup(names, token, what, text, path, lineno)
    return table


def _wrap(parse, path: str):
    """Re-raise algebraic validation errors with the file as context"""
    try:
        return parse()
    except FormatError:
        raise
    except XmodlinkError as e:
        raise FormatError(str(e), path) from e


# === GROUPS AND RACKS =================================================

def parse_group(text: str, path: str = "<text>", config: Optional[XmodlinkConfig] = None) -> FiniteGroup:
    """
    `group <name> <order>`, then `elements <n0> <n1> ...`, then one row per
    element where row i column j names i·j
    """
    lines = _lines(text)
    name, order_text = _expect_header(lines, "group", 2, path)
    order = _int_field(order_text, path, lines[0][0])
    if len(lines) < 2 or lines[1][1][0] != "elements":
        raise FormatError("expected the `elements` line", path, lines[1][0] if len(lines) > 1 else 1, 1)
    lineno, tokens = lines[1]
    names = tokens[1:]
    if len(names) != order:
        raise FormatError(f"{len(names)} element names for order {order}", path, lineno, 1)
    seen: Dict[str, int] = {}
    for i, label in enumerate(names):
        if label in seen:
            raise FormatError(f"duplicate element name {label!r}", path, lineno, _column(text, lineno, label))
        seen[label] = i
    table = _table(lines[2:], seen, order, text, path, "element")
    return _wrap(lambda: group_from_cayley(names, table, name=name, config=config), path)


def read_group(path: str, config: Optional[XmodlinkConfig] = None) -> FiniteGroup:
    return parse_group(_read(path), path, config)


def parse_rack(text: str, path: str = "<text>", config: Optional[XmodlinkConfig] = None) -> Rack:
    """`rack <name> <size>`, `elements ...`, then rows of x◁y"""
    lines = _lines(text)
    name, size_text = _expect_header(lines, "rack", 2, path)
    size = _int_field(size_text, path, lines[0][0])
    if len(lines) < 2 or lines[1][1][0] != "elements" or len(lines[1][1]) != size + 1:
        raise FormatError(f"expected `elements` with {size} names", path, lines[1][0] if len(lines) > 1 else 1, 1)
    names = lines[1][1][1:]
    lookup = {label: i for i, label in enumerate(names)}
    table = _table(lines[2:], lookup, size, text, path, "rack element")
    return _wrap(lambda: rack_new(names, table, name=name, config=config), path)


def read_rack(path: str, config: Optional[XmodlinkConfig] = None) -> Rack:
    return parse_rack(_read(path), path, config)


# === CROSSED MODULES, COCYCLES, PAIRS =================================

def _blocks(lines: Sequence[Line], keywords: Sequence[str], path: str) -> Dict[str, List[Line]]:
    """Split `keyword:` sections; every line belongs to the last section opened"""
    blocks: Dict[str, List[Line]] = {}
    current: Optional[str] = None
    for lineno, tokens in lines:
        head = tokens[0].rstrip(":")
        if tokens[0].endswith(":") and head in keywords and len(tokens) == 1:
            current = head
            blocks[current] = []
        elif current is None:
            raise FormatError(f"expected one of {', '.join(k + ':' for k in keywords)}", path, lineno, 1)
        else:
            blocks[current].append((lineno, tokens))
    return blocks


def _arrow(tokens: List[str], arity: int, path: str, lineno: int) -> Tuple[List[str], str]:
    if len(tokens) != arity + 2 or tokens[arity] != "->":
        raise FormatError(f"expected {arity} name(s), `->` and a result", path, lineno, 1)
    return tokens[:arity], tokens[-1]


def parse_xmod(text: str, path: str = "<text>", config: Optional[XmodlinkConfig] = None) -> CrossedModule:
    """
    `xmod <name>`, `G: <path.grp>`, `E: <path.grp>`, an optional
    `default: trivial`, then a `boundary:` block of `e -> g` lines and an
    `action:` block of `g e -> e'` lines
    """
    lines = _lines(text)
    _expect_header(lines, "xmod", 1, path)
    rest = iter(lines[1:])
    G = read_group(_reference(rest, "G", path), config)
    E = read_group(_reference(rest, "E", path), config)
    remaining = list(rest)
    trivial_default = False
    if remaining and remaining[0][1] == ["default:", "trivial"]:
        trivial_default = True
        remaining = remaining[1:]
    blocks = _blocks(remaining, ("boundary", "action"), path)
    g_names, e_names = _name_map(G), _name_map(E)

    image = np.full(E.order, -1, dtype=np.int64)
    for lineno, tokens in blocks.get("boundary", []):
        (e,), g = _arrow(tokens, 1, path, lineno)
        image[_lookup(e_names, e, "E element", text, path, lineno)] = _lookup(g_names, g, "G element", text,
                                                                              path, lineno)
    if (image < 0).any():
        missing = E.names[int(np.nonzero(image < 0)[0][0])]
        raise FormatError(f"boundary block does not map {missing!r}", path, lines[-1][0], 1)

    action = np.full((G.order, E.order), -1, dtype=np.int64)
    if trivial_default:
        action[:] = np.arange(E.order)[None, :]
    for lineno, tokens in blocks.get("action", []):
        (g, e), result = _arrow(tokens, 2, path, lineno)
        action[_lookup(g_names, g, "G element", text, path, lineno),
               _lookup(e_names, e, "E element", text, path, lineno)] = _lookup(e_names, result, "E element",
                                                                               text, path, lineno)
    if (action < 0).any():
        g, e = np.argwhere(action < 0)[0]
        raise FormatError(f"action of {G.names[g]!r} on {E.names[e]!r} is missing (add `default: trivial`?)",
                          path, lines[-1][0], 1)
    return _wrap(lambda: xmod_new(G, E, group_hom(E, G, image), action, config), path)


def read_xmod(path: str, config: Optional[XmodlinkConfig] = None) -> CrossedModule:
    return parse_xmod(_read(path), path, config)


def parse_cocycle(text: str, path: str = "<text>", config: Optional[XmodlinkConfig] = None) -> RackCocycle:
    """`cocycle <name>`, `rack: <path.rck>`, `V: <path.grp>`, then rows of w(x, y)"""
    lines = _lines(text)
    _expect_header(lines, "cocycle", 1, path)
    rest = iter(lines[1:])
    rack = read_rack(_reference(rest, "rack", path), config)
    V = read_group(_reference(rest, "V", path), config)
    table = _table(list(rest), _name_map(V), rack.size, text, path, "V element")
    return _wrap(lambda: cocycle_new(rack, V, table, config), path)


def read_cocycle(path: str, config: Optional[XmodlinkConfig] = None) -> RackCocycle:
    return parse_cocycle(_read(path), path, config)


def parse_pair(text: str, path: str = "<text>", config: Optional[XmodlinkConfig] = None) -> ReidemeisterPair:
    """`pair <name>`, `xmod: <path.xmod>`, then `psi:` and `phi:` blocks of `X Y -> e` lines covering G×G"""
    lines = _lines(text)
    (name,) = _expect_header(lines, "pair", 1, path)
    rest = iter(lines[1:])
    xmod = read_xmod(_reference(rest, "xmod", path), config)
    G, E = xmod.G, xmod.E
    blocks = _blocks(list(rest), ("psi", "phi"), path)
    g_names, e_names = _name_map(G), _name_map(E)
    tables = []
    for label in ("psi", "phi"):
        table = np.full((G.order, G.order), -1, dtype=np.int64)
        for lineno, tokens in blocks.get(label, []):
            (X, Y), e = _arrow(tokens, 2, path, lineno)
            table[_lookup(g_names, X, "G element", text, path, lineno),
                  _lookup(g_names, Y, "G element", text, path, lineno)] = _lookup(e_names, e, "E element",
                                                                                  text, path, lineno)
        if (table < 0).any():
            X, Y = np.argwhere(table < 0)[0]
            raise FormatError(f"{label} block misses ({G.names[X]}, {G.names[Y]})", path, lines[-1][0], 1)
        tables.append(table)
    return _wrap(lambda: pair_new(xmod, tables[0], tables[1], name=name), path)


def read_pair(path: str, config: Optional[XmodlinkConfig] = None) -> ReidemeisterPair:
    return parse_pair(_read(path), path, config)


def read_diagram(path: str) -> SlicedDiagram:
    return diagram_parse(_read(path), path)


# === RESULTS ==========================================================

def results_to_tsv(results: Sequence[InvariantResult]) -> str:
    """Results one after another, separated by a blank line"""
    return "\n".join(result.to_tsv() for result in results)


def write_results(path: str, results: Sequence[InvariantResult]) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(results_to_tsv(results))
    logger.info("✅ Wrote %d result(s) to %s", len(results), path)
