"""
xmodlink Built-ins
Named groups, racks, Reidemeister pairs and diagrams, addressed by structured keys
such as `eisermann:S5:x=(12345)` or `lifted:gl25:x=(2 0;0 1)`
"""

import re
from typing import Callable, Dict, Optional, Tuple, Union

from xmodlink_algebra import (
    FiniteGroup,
    GroupHom,
    cyclic_group,
    dihedral_group,
    general_linear_extension,
    matrix_name,
    quaternion_group,
    symmetric_group,
)
from xmodlink_config import XmodlinkConfig, get_logger
from xmodlink_diagram import (
    SlicedDiagram,
    closure,
    figure_eight_string,
    trefoil_minus_string,
    trefoil_plus_string,
    unknot_string,
)
from xmodlink_errors import UnknownBuiltin, XmodlinkError
from xmodlink_pairs import (
    ReidemeisterPair,
    eisermann_pair,
    lifted_eisermann_pair,
    pair_from_rack,
    pair_from_rack_cocycle,
)
from xmodlink_xmod import (
    Rack,
    central_extension_new,
    cocycle_new,
    cyclic_rack,
    dihedral_quandle,
    eisermann_quandle,
    find_rack_cocycles,
)

logger = get_logger(__name__)

Builtin = Union[FiniteGroup, Rack, ReidemeisterPair, SlicedDiagram]


# === GROUPS ===========================================================
GROUP_FAMILIES = {
    "group:S<n>": "symmetric group on n letters",
    "group:Z<n>": "cyclic group of order n",
    "group:D<n>": "dihedral group of order 2n",
    "group:Q8": "quaternion group",
    "group:GL25": "GL(2,5), order 480",
    "group:PGL25": "PGL(2,5), order 120",
}

AVAILABLE_GROUPS = list(GROUP_FAMILIES.keys())

# === RACKS ============================================================
RACK_FAMILIES = {
    "rack:dihedral:<n>": "x◁y = 2y − x mod n",
    "rack:cyclic:<n>": "x◁y = x + 1 mod n",
    "rack:eisermann:<group>:x=<elt>": "h◁g = x⁻¹hg⁻¹xg on the whole group",
}

AVAILABLE_RACKS = list(RACK_FAMILIES.keys())

# === PAIRS ============================================================
PAIR_FAMILIES = {
    "eisermann:<group>:x=<elt>": "Eisermann pair over (id: G → G, conjugation)",
    "eisermann-derived:<group>:x=<elt>": "Eisermann pair over the commutator subgroup",
    "rack-pair:dihedral:<n>": "dihedral quandle pair with cyclic group law",
    "rack-pair:cyclic:<n>": "cyclic rack pair with cyclic group law (framed only)",
    "cocycle:dihedral3:<k>": "k-th Z3-valued quandle 2-cocycle pair on the dihedral quandle of order 3",
    "lifted:gl25:x=<matrix>": "lifted Eisermann pair for GL(2,5) → PGL(2,5)",
    "unlifted:pgl25:x=<matrix>": "Eisermann pair on PGL(2,5)",
}

AVAILABLE_PAIRS = list(PAIR_FAMILIES.keys())

# === DIAGRAMS =========================================================
DIAGRAMS: Dict[str, Callable[[], SlicedDiagram]] = {
    "diagram:trefoil+string": trefoil_plus_string,
    "diagram:trefoil-string": trefoil_minus_string,
    "diagram:figure8-string": figure_eight_string,
    "diagram:unknot-string": unknot_string,
    "closed:trefoil+": lambda: closure(trefoil_plus_string()),
    "closed:trefoil-": lambda: closure(trefoil_minus_string()),
    "closed:figure8": lambda: closure(figure_eight_string()),
    "closed:unknot": lambda: closure(unknot_string()),
}

AVAILABLE_DIAGRAMS = list(DIAGRAMS.keys())


# === RESOLUTION =======================================================

def resolve_group(key: str, config: Optional[XmodlinkConfig] = None) -> FiniteGroup:
    """Accepts `group:S4` as well as the bare `S4` used inside pair keys"""
    name = key[len("group:"):] if key.startswith("group:") else key
    family = re.fullmatch(r"([SZD])(\d+)", name)
    if family:
        letter, n = family.group(1), int(family.group(2))
        if n < 1:
            raise UnknownBuiltin(f"group order must be positive in {key!r}")
        if letter == "S":
            return symmetric_group(n, config)
        return cyclic_group(n) if letter == "Z" else dihedral_group(n)
    if name == "Q8":
        return quaternion_group()
    if name in ("GL25", "PGL25"):
        gl, pgl, _ = general_linear_extension(5)
        return gl if name == "GL25" else pgl
    raise UnknownBuiltin(f"unknown group {key!r}; try one of {', '.join(AVAILABLE_GROUPS)}")


def _pgl_class(x: str) -> Tuple[FiniteGroup, FiniteGroup, GroupHom, int]:
    """A PGL(2,5) class named by any GL(2,5) representative; `I` is the identity matrix"""
    gl, pgl, projection = general_linear_extension(5)
    label = matrix_name([[1, 0], [0, 1]]) if x.strip() == "I" else x.strip()
    return gl, pgl, projection, int(projection(gl.index(label)))


def resolve_rack(key: str, config: Optional[XmodlinkConfig] = None) -> Rack:
    match = re.fullmatch(r"rack:(dihedral|cyclic):(\d+)", key)
    if match:
        n = int(match.group(2))
        return dihedral_quandle(n) if match.group(1) == "dihedral" else cyclic_rack(n)
    match = re.fullmatch(r"rack:eisermann:([^:]+):x=(.+)", key)
    if match:
        G = resolve_group(match.group(1), config)
        return eisermann_quandle(G, G.index(match.group(2)), restrict_to_derived=False)
    raise UnknownBuiltin(f"unknown rack {key!r}; try one of {', '.join(AVAILABLE_RACKS)}")


def resolve_pair(key: str, config: Optional[XmodlinkConfig] = None) -> ReidemeisterPair:
    match = re.fullmatch(r"(eisermann|eisermann-derived):([^:]+):x=(.+)", key)
    if match:
        G = resolve_group(match.group(2), config)
        return eisermann_pair(G, G.index(match.group(3)), on_derived=match.group(1) == "eisermann-derived",
                              config=config)
    match = re.fullmatch(r"rack-pair:(dihedral|cyclic):(\d+)", key)
    if match:
        rack = resolve_rack(f"rack:{match.group(1)}:{match.group(2)}", config)
        return pair_from_rack(rack, cyclic_group(rack.size), config)
    match = re.fullmatch(r"cocycle:dihedral3:(\d+)", key)
    if match:
        rack, V = dihedral_quandle(3), cyclic_group(3)
        cocycles = find_rack_cocycles(rack, V, quandle_only=True, config=config)
        k = int(match.group(1))
        if k >= len(cocycles):
            raise UnknownBuiltin(f"only {len(cocycles)} quandle cocycles exist, {key!r} asks for #{k}")
        return pair_from_rack_cocycle(cocycle_new(rack, V, cocycles[k], config), cyclic_group(3), config)
    match = re.fullmatch(r"(lifted:gl25|unlifted:pgl25):x=(.+)", key)
    if match:
        gl, pgl, projection, x = _pgl_class(match.group(2))
        if match.group(1) == "unlifted:pgl25":
            return eisermann_pair(pgl, x, on_derived=False, config=config)
        return lifted_eisermann_pair(central_extension_new(gl, projection), x, config)
    raise UnknownBuiltin(f"unknown pair {key!r}; try one of {', '.join(AVAILABLE_PAIRS)}")


def resolve_diagram(key: str) -> SlicedDiagram:
    if key not in DIAGRAMS:
        raise UnknownBuiltin(f"unknown diagram {key!r}; try one of {', '.join(AVAILABLE_DIAGRAMS)}")
    return DIAGRAMS[key]()


def resolve_builtin(key: str, config: Optional[XmodlinkConfig] = None) -> Builtin:
    """Dispatch a key to the matching registry by its prefix"""
    logger.debug("resolving builtin %s", key)
    try:
        if key.startswith("group:"):
            return resolve_group(key, config)
        if key.startswith("rack:"):
            return resolve_rack(key, config)
        if key.startswith(("diagram:", "closed:")):
            return resolve_diagram(key)
        return resolve_pair(key, config)
    except UnknownBuiltin:
        raise
    except XmodlinkError as e:
        raise UnknownBuiltin(f"cannot build {key!r}: {e}") from e


def describe_builtins() -> str:
    """Text listing of every registry, one family per line"""
    sections = [
        ("Groups", GROUP_FAMILIES),
        ("Racks", RACK_FAMILIES),
        ("Pairs", PAIR_FAMILIES),
        ("Diagrams", {key: "" for key in AVAILABLE_DIAGRAMS}),
    ]
    lines = []
    for title, registry in sections:
        lines.append(f"{title}:")
        for key, about in registry.items():
            lines.append(f"  {key}" + (f"  {about}" if about else ""))
    return "\n".join(lines)
