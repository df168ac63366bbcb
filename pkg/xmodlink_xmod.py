"""
xmodlink Crossed Modules
Crossed modules with Peiffer validation, racks and quandles, rack 2-cocycles
and central extensions with their bracket
"""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from xmodlink_algebra import (
    FiniteGroup,
    GroupElement,
    GroupHom,
    INDEX_DTYPE,
    commutator_subgroup,
    direct_product,
    group_hom,
    index_batches,
    is_abelian,
)
from xmodlink_config import XmodlinkConfig, get_logger, resolve_config
from xmodlink_errors import (
    BoundExceeded,
    CocycleViolation,
    KernelNotCentral,
    NonAbelianV,
    NotAnAction,
    NotAutomorphisms,
    NotBijective,
    NotClosed,
    NotSurjective,
    Peiffer1Violation,
    Peiffer2Violation,
    SelfDistributivityViolation,
    XmodError,
)

logger = get_logger(__name__)


def _frozen(table) -> np.ndarray:
    array = np.array(table, dtype=INDEX_DTYPE)
    array.setflags(write=False)
    return array


# === CROSSED MODULES ==================================================

@dataclass(frozen=True, eq=False, repr=False)
class CrossedModule:
    """∂: E → G with a left G-action on E by automorphisms; action[g, e] = g▷e"""
    G: FiniteGroup
    E: FiniteGroup
    boundary: GroupHom
    action: np.ndarray

    def __repr__(self) -> str:
        return f"CrossedModule({self.E.name} -> {self.G.name})"

    def act(self, g: int, e: int) -> int:
        return int(self.action[g, e])

    def kernel(self) -> List[int]:
        return self.boundary.kernel()


def xmod_new(G: FiniteGroup, E: FiniteGroup, boundary: GroupHom, action,
             config: Optional[XmodlinkConfig] = None) -> CrossedModule:
    """
    Validate the action laws and both Peiffer equations

    Raises:
        NotAnAction, NotAutomorphisms, Peiffer1Violation, Peiffer2Violation
    """
    config = resolve_config(config)
    if not (boundary.source.is_same(E) and boundary.target.is_same(G)):
        raise XmodError(f"boundary must map {E.name} to {G.name}, got {boundary!r}")
    action = np.asarray(action)
    if action.shape != (G.order, E.order) or ((action < 0) | (action >= E.order)).any():
        raise NotAnAction(f"action table must be {G.order}x{E.order} with entries in {E.name}")

    unmoved = np.nonzero(action[G.identity] != np.arange(E.order))[0]
    if len(unmoved):
        raise NotAnAction("identity does not act trivially", witness=(E.names[unmoved[0]],))
    for g, h, e in index_batches((G.order, G.order, E.order), config):
        bad = np.nonzero(action[G.mult[g, h], e] != action[g, action[h, e]])[0]
        if len(bad):
            k = bad[0]
            raise NotAnAction("(gh)▷e != g▷(h▷e)", witness=(G.names[g[k]], G.names[h[k]], E.names[e[k]]))

    for g, e, f in index_batches((G.order, E.order, E.order), config):
        bad = np.nonzero(action[g, E.mult[e, f]] != E.mult[action[g, e], action[g, f]])[0]
        if len(bad):
            k = bad[0]
            raise NotAutomorphisms("g▷(ef) != (g▷e)(g▷f)", witness=(G.names[g[k]], E.names[e[k]], E.names[f[k]]))
    not_onto = [g for g in range(G.order) if len(np.unique(action[g])) != E.order]
    if not_onto:
        raise NotAutomorphisms("g▷(-) is not a bijection", witness=(G.names[not_onto[0]],))

    d = boundary.image
    left = d[action]
    right = G.mult[G.mult[np.arange(G.order)[:, None], d[None, :]], G.inverse[:, None]]
    bad = np.argwhere(left != right)
    if len(bad):
        g, e = bad[0]
        raise Peiffer1Violation("∂(g▷e) != g∂(e)g⁻¹", witness=(G.names[g], E.names[e]))

    left = action[d[:, None], np.arange(E.order)[None, :]]
    right = E.mult[E.mult, E.inverse[:, None]]
    bad = np.argwhere(left != right)
    if len(bad):
        e, f = bad[0]
        raise Peiffer2Violation("∂(e)▷f != efe⁻¹", witness=(E.names[e], E.names[f]))

    logger.debug("✅ Crossed module %s -> %s validated", E.name, G.name)
    return CrossedModule(G, E, boundary, _frozen(action))


def xmod_identity_conj(G: FiniteGroup, config: Optional[XmodlinkConfig] = None) -> CrossedModule:
    """(id: G → G, conjugation)"""
    identity = group_hom(G, G, np.arange(G.order))
    action = G.mult[G.mult, G.inverse[:, None]]
    return xmod_new(G, G, identity, action, config)


def xmod_product(G: FiniteGroup, V: FiniteGroup, config: Optional[XmodlinkConfig] = None) -> CrossedModule:
    """
    E = G×V with ∂(g, v) = g and g•(h, v) = (ghg⁻¹, v)

    Raises:
        NonAbelianV
    """
    if not is_abelian(V):
        raise NonAbelianV(f"{V.name} is not abelian")
    E = direct_product(G, V)
    idx = np.arange(E.order)
    h_part, v_part = idx // V.order, idx % V.order
    boundary = group_hom(E, G, h_part)
    conj = G.mult[G.mult[:, h_part], G.inverse[:, None]]
    action = conj.astype(np.int64) * V.order + v_part[None, :]
    return xmod_new(G, E, boundary, action, config)


# === CENTRAL EXTENSIONS ===============================================

@dataclass(frozen=True, eq=False, repr=False)
class CentralExtension:
    """Surjection ∂: E → G with central kernel and a fixed section s"""
    E: FiniteGroup
    G: FiniteGroup
    boundary: GroupHom
    section: np.ndarray

    def __repr__(self) -> str:
        return f"CentralExtension({self.E.name} -> {self.G.name})"


def central_extension_new(E: FiniteGroup, boundary: GroupHom,
                          section: Optional[Sequence[int]] = None) -> CentralExtension:
    """
    Validate a central extension; the default section takes the least E-index in each fiber

    Raises:
        NotSurjective, KernelNotCentral
    """
    G = boundary.target
    if not boundary.source.is_same(E):
        raise XmodError(f"boundary starts at {boundary.source.name}, not {E.name}")
    if not boundary.is_surjective():
        missing = sorted(set(range(G.order)) - set(boundary.image.tolist()))
        raise NotSurjective(f"{E.name} -> {G.name} is not surjective", witness=(G.names[missing[0]],))
    kernel = np.array(boundary.kernel())
    bad = np.argwhere(E.mult[kernel, :] != E.mult[:, kernel].T)
    if len(bad):
        k, e = bad[0]
        raise KernelNotCentral("kernel element does not commute", witness=(E.names[kernel[k]], E.names[e]))

    if section is None:
        section = [int(np.nonzero(boundary.image == g)[0][0]) for g in range(G.order)]
    section = np.asarray(section)
    if section.shape != (G.order,) or (boundary.image[section] != np.arange(G.order)).any():
        raise XmodError("section does not split the boundary")
    return CentralExtension(E, G, boundary, _frozen(section))


def perturb_section(ext: CentralExtension, rng: np.random.Generator) -> CentralExtension:
    """Same extension with a random representative picked in every fiber"""
    fibers = [np.nonzero(ext.boundary.image == g)[0] for g in range(ext.G.order)]
    section = [int(rng.choice(fiber)) for fiber in fibers]
    return central_extension_new(ext.E, ext.boundary, section)


def bracket_table(ext: CentralExtension) -> np.ndarray:
    """{g, h} = [s(g), s(h)] for all g, h as a |G|×|G| table of E-indices"""
    E, s = ext.E, ext.section
    a, b = s[:, None], s[None, :]
    return E.mult[E.mult[a, b], E.mult[E.inverse[a], E.inverse[b]]]


def bracket(ext: CentralExtension, g: Union[int, GroupElement], h: Union[int, GroupElement]) -> GroupElement:
    gi, hi = ext.G.index(g), ext.G.index(h)
    return GroupElement(ext.E, ext.E.commutator(int(ext.section[gi]), int(ext.section[hi])))


def xmod_from_central_extension(ext: CentralExtension, config: Optional[XmodlinkConfig] = None) -> CrossedModule:
    """Crossed module with g▷e = s(g) e s(g)⁻¹"""
    E, s = ext.E, ext.section
    action = E.mult[E.mult[s[:, None], np.arange(E.order)[None, :]], E.inverse[s][:, None]]
    return xmod_new(ext.G, E, ext.boundary, action, config)


# === RACKS AND QUANDLES ===============================================

@dataclass(frozen=True, eq=False, repr=False)
class Rack:
    """
    left[x, y] = x◁y, right[x, y] = x▷y with x▷(y◁x) = y

    Racks built from a group remember which group element each rack element is.
    """
    name: str
    names: Tuple[str, ...]
    left: np.ndarray
    right: np.ndarray
    carrier_group: Optional[FiniteGroup] = None
    carrier: Optional[np.ndarray] = None

    def __repr__(self) -> str:
        return f"Rack({self.name}, size={self.size})"

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, key: Union[int, str]) -> int:
        if isinstance(key, str):
            if key not in self.names:
                raise XmodError(f"unknown element {key!r} of rack {self.name}")
            return self.names.index(key)
        if not 0 <= int(key) < self.size:
            raise XmodError(f"index {key} outside rack {self.name}")
        return int(key)


def rack_new(names: Sequence[str], left_table, name: str = "R",
             carrier_group: Optional[FiniteGroup] = None, carrier: Optional[Sequence[int]] = None,
             config: Optional[XmodlinkConfig] = None) -> Rack:
    """
    Validate a rack from its x◁y table and derive the x▷y table

    Raises:
        NotBijective, SelfDistributivityViolation
    """
    names = tuple(str(label) for label in names)
    n = len(names)
    left = np.asarray(left_table)
    if left.shape != (n, n) or ((left < 0) | (left >= n)).any():
        raise NotBijective(f"rack table must be {n}x{n} with entries in the carrier")
    for y in range(n):
        if len(np.unique(left[:, y])) != n:
            raise NotBijective("x ↦ x◁y is not a bijection", witness=(names[y],))

    right = np.empty_like(left)
    for x in range(n):
        right[x, left[:, x]] = np.arange(n)

    for x, y, z in index_batches((n, n, n), config):
        bad = np.nonzero(left[left[x, y], z] != left[left[x, z], left[y, z]])[0]
        if len(bad):
            k = bad[0]
            raise SelfDistributivityViolation("(x◁y)◁z != (x◁z)◁(y◁z)",
                                              witness=(names[x[k]], names[y[k]], names[z[k]]))
        bad = np.nonzero(right[x, right[y, z]] != right[right[x, y], right[x, z]])[0]
        if len(bad):
            k = bad[0]
            raise SelfDistributivityViolation("x▷(y▷z) != (x▷y)▷(x▷z)",
                                              witness=(names[x[k]], names[y[k]], names[z[k]]))
    return Rack(name, names, _frozen(left), _frozen(right), carrier_group,
                None if carrier is None else _frozen(carrier))


def is_quandle(r: Rack) -> bool:
    return bool((np.diagonal(r.left) == np.arange(r.size)).all())


def nelson_check(r: Rack) -> bool:
    """x ↦ x◁x and x ↦ x▷x are both bijections"""
    return (len(np.unique(np.diagonal(r.left))) == r.size
            and len(np.unique(np.diagonal(r.right))) == r.size)


def dihedral_quandle(n: int) -> Rack:
    """x◁y = 2y − x mod n"""
    x = np.arange(n)
    return rack_new([str(i) for i in range(n)], (2 * x[None, :] - x[:, None]) % n, name=f"R{n}")


def cyclic_rack(n: int) -> Rack:
    """x◁y = x + 1 mod n"""
    x = np.arange(n)
    return rack_new([str(i) for i in range(n)], np.repeat(((x + 1) % n)[:, None], n, axis=1), name=f"C{n}")


def _carrier_rack(G: FiniteGroup, members: Sequence[int], operation: np.ndarray, name: str) -> Rack:
    """Restrict a G×G → G operation to a carrier set, checking closure"""
    members = np.sort(np.asarray(members, dtype=np.int64))
    position = np.full(G.order, -1, dtype=np.int64)
    position[members] = np.arange(len(members))
    table = position[operation[np.ix_(members, members)]]
    bad = np.argwhere(table < 0)
    if len(bad):
        a, b = bad[0]
        raise NotClosed(f"{name} carrier is not closed", witness=(G.names[members[a]], G.names[members[b]]))
    return rack_new([G.names[i] for i in members], table, name=name, carrier_group=G, carrier=members)


def conjugation_quandle(G: FiniteGroup, elements: Sequence[Union[int, GroupElement]]) -> Rack:
    """h◁g = g⁻¹hg on a conjugation-closed subset"""
    members = sorted({G.index(e) for e in elements})
    operation = G.mult[G.mult[G.inverse[None, :], np.arange(G.order)[:, None]], np.arange(G.order)[None, :]]
    return _carrier_rack(G, members, operation, f"Conj({G.name})")


def eisermann_operation(G: FiniteGroup, x: int) -> np.ndarray:
    """Full G×G table of h◁g = x⁻¹hg⁻¹xg"""
    h = np.arange(G.order)[:, None]
    g = np.arange(G.order)[None, :]
    xinv = G.inverse[x]
    return G.mult[G.mult[G.mult[G.mult[xinv, h], G.inverse[g]], x], g]


def eisermann_quandle(G: FiniteGroup, x: Union[int, GroupElement], restrict_to_derived: bool) -> Rack:
    """h◁g = x⁻¹hg⁻¹xg on G, or on the commutator subgroup G′"""
    xi = G.index(x)
    if restrict_to_derived:
        _, embedding = commutator_subgroup(G)
        members = embedding.image
    else:
        members = np.arange(G.order)
    suffix = "'" if restrict_to_derived else ""
    return _carrier_rack(G, members, eisermann_operation(G, xi), f"Eis({G.name}{suffix},{G.names[xi]})")


def eisermann_carriers(G: FiniteGroup, x: Union[int, GroupElement]) -> Tuple[List[int], List[int]]:
    """Q = {g⁻¹xg : g ∈ G′} and Q̄ = {g⁻¹xg : g ∈ G} as sorted index lists"""
    xi = G.index(x)
    conjugates = G.mult[G.mult[G.inverse, xi], np.arange(G.order)]
    _, embedding = commutator_subgroup(G)
    derived = embedding.image
    return sorted(set(conjugates[derived].tolist())), sorted(set(conjugates.tolist()))


def carrier_quandle(G: FiniteGroup, x: Union[int, GroupElement], on_derived: bool) -> Rack:
    small, full = eisermann_carriers(G, x)
    return conjugation_quandle(G, small if on_derived else full)


def eisermann_projection(G: FiniteGroup, x: Union[int, GroupElement], on_derived: bool) -> Tuple[Rack, Rack, np.ndarray]:
    """
    p(g) = g⁻¹xg from the Eisermann quandle onto its carrier quandle

    Returns:
        (eisermann quandle, carrier quandle, table of rack indices)
    """
    xi = G.index(x)
    source = eisermann_quandle(G, xi, on_derived)
    target = carrier_quandle(G, xi, on_derived)
    position = {int(g): k for k, g in enumerate(target.carrier)}
    table = [position[G.product(G.inv(int(g)), xi, int(g))] for g in source.carrier]
    return source, target, np.array(table, dtype=INDEX_DTYPE)


def is_rack_morphism(source: Rack, target: Rack, table: Sequence[int]) -> bool:
    """p(a◁b) = p(a)◁p(b) for all a, b"""
    p = np.asarray(table)
    return bool((p[source.left] == target.left[p[:, None], p[None, :]]).all())


# === RACK COCYCLES ====================================================

@dataclass(frozen=True, eq=False, repr=False)
class RackCocycle:
    """w: R×R → V with V abelian, w[x, y] an index of V"""
    rack: Rack
    V: FiniteGroup
    w: np.ndarray

    def __repr__(self) -> str:
        return f"RackCocycle({self.rack.name}, {self.V.name})"


def _cocycle_witness(rack: Rack, V: FiniteGroup, w: np.ndarray,
                     config: Optional[XmodlinkConfig] = None) -> Optional[Tuple[int, int, int]]:
    L, n = rack.left, rack.size
    for x, y, z in index_batches((n, n, n), config):
        left = V.mult[w[x, y], w[L[x, y], z]]
        right = V.mult[w[x, z], w[L[x, z], L[y, z]]]
        bad = np.nonzero(left != right)[0]
        if len(bad):
            k = bad[0]
            return int(x[k]), int(y[k]), int(z[k])
    return None


def cocycle_new(rack: Rack, V: FiniteGroup, w_table, config: Optional[XmodlinkConfig] = None) -> RackCocycle:
    """
    Validate w(x,y) + w(x◁y, z) = w(x,z) + w(x◁z, y◁z)

    Raises:
        NonAbelianV, CocycleViolation
    """
    if not is_abelian(V):
        raise NonAbelianV(f"{V.name} is not abelian")
    w = np.asarray(w_table)
    if w.shape != (rack.size, rack.size) or ((w < 0) | (w >= V.order)).any():
        raise CocycleViolation(f"cocycle table must be {rack.size}x{rack.size} with values in {V.name}")
    witness = _cocycle_witness(rack, V, w, config)
    if witness is not None:
        raise CocycleViolation("rack 2-cocycle condition fails", witness=tuple(rack.names[i] for i in witness))
    return RackCocycle(rack, V, _frozen(w))


def is_quandle_cocycle(c: RackCocycle) -> bool:
    return bool((np.diagonal(c.w) == c.V.identity).all())


def find_rack_cocycles(rack: Rack, V: FiniteGroup, quandle_only: bool,
                       config: Optional[XmodlinkConfig] = None) -> List[np.ndarray]:
    """
    Every w-table that is a rack 2-cocycle, by brute force over all maps
    (diagonal pinned to 0 when quandle_only)

    Raises:
        NonAbelianV, BoundExceeded
    """
    config = resolve_config(config)
    if not is_abelian(V):
        raise NonAbelianV(f"{V.name} is not abelian")
    n = rack.size
    free = [(x, y) for x in range(n) for y in range(n) if not (quandle_only and x == y)]
    candidates = V.order ** len(free)
    if candidates > config.closure_cap:
        raise BoundExceeded(f"{candidates} candidate cocycles exceed the cap {config.closure_cap}")
    rows, cols = (np.array(axis, dtype=np.int64) for axis in zip(*free)) if free else (np.array([]), np.array([]))
    found = []
    for values in itertools.product(range(V.order), repeat=len(free)):
        w = np.full((n, n), V.identity, dtype=INDEX_DTYPE)
        if free:
            w[rows, cols] = values
        if _cocycle_witness(rack, V, w, config) is None:
            w.setflags(write=False)
            found.append(w)
    logger.info("🧪 Found %d cocycles on %s with values in %s", len(found), rack.name, V.name)
    return found
