"""
xmodlink Reidemeister Pairs
Crossing-label tables (ψ, φ), their unframed and framed axiom checks,
and the rack, rack-cocycle, Eisermann and lifted Eisermann constructions
"""

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from xmodlink_algebra import (
    FiniteGroup,
    GroupElement,
    GroupHom,
    INDEX_DTYPE,
    commutator_subgroup,
    index_batches,
)
from xmodlink_config import XmodlinkConfig, get_logger, resolve_config
from xmodlink_errors import BoundExceeded, IncompleteTable, PairError, SizeMismatch
from xmodlink_xmod import (
    CentralExtension,
    CrossedModule,
    Rack,
    RackCocycle,
    bracket_table,
    xmod_from_central_extension,
    xmod_identity_conj,
    xmod_product,
)

logger = get_logger(__name__)

# Variable names used when rendering each axiom's witness
WITNESS_LABELS = {
    "R1": ("X",),
    "R2": ("X", "Y"),
    "R2′": ("Y", "X"),
    "R3": ("X", "Y", "T"),
    "R3′": ("X", "Y", "Z"),
    "R3⟺R3′": ("X", "Y", "Z"),
    "F1": ("Z",),
    "F2": ("A",),
}


# === TYPES ============================================================

@dataclass(frozen=True, eq=False, repr=False)
class ReidemeisterPair:
    """
    psi[X, Y] and phi[X, Y] are E-indices; zpsi and zphi are the derived
    G-colours of the remaining crossing strand
    """
    name: str
    xmod: CrossedModule
    psi: np.ndarray
    phi: np.ndarray
    zpsi: np.ndarray
    zphi: np.ndarray
    embedding: Optional[GroupHom] = None

    def __repr__(self) -> str:
        return f"ReidemeisterPair({self.name})"

    @property
    def G(self) -> FiniteGroup:
        return self.xmod.G

    @property
    def E(self) -> FiniteGroup:
        return self.xmod.E


@dataclass
class AxiomReport:
    violations: List[Tuple[str, Tuple[GroupElement, ...]]] = field(default_factory=list)
    checked: List[str] = field(default_factory=list)
    limit: int = 100

    @property
    def passed(self) -> bool:
        return not self.violations

    def full(self) -> bool:
        return len(self.violations) >= self.limit

    def add(self, axiom: str, witness: Tuple[GroupElement, ...]):
        if not self.full():
            self.violations.append((axiom, witness))

    def failed_axioms(self) -> List[str]:
        return sorted({axiom for axiom, _ in self.violations}, key=self.checked.index)

    def render(self) -> str:
        lines = []
        for axiom in self.checked:
            hits = [w for a, w in self.violations if a == axiom]
            if not hits:
                lines.append(f"✅ {axiom} holds")
                continue
            labels = WITNESS_LABELS.get(axiom, tuple(f"a{i}" for i in range(len(hits[0]))))
            first = ", ".join(f"{label}={g.name}" for label, g in zip(labels, hits[0]))
            lines.append(f"❌ {axiom} FAILED (witness {first}; {len(hits)} witness(es) recorded)")
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class FramedStructure:
    """f and g as G-index tables with f∘g = g∘f = id"""
    f: np.ndarray
    g: np.ndarray


# === CONSTRUCTION =====================================================

def _z_tables(xmod: CrossedModule, psi: np.ndarray, phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    G, d = xmod.G, xmod.boundary.image
    X = np.arange(G.order)[:, None]
    Y = np.arange(G.order)[None, :]
    # zpsi = ∂ψ(X,Y)⁻¹ X Y X⁻¹
    zpsi = G.mult[G.mult[G.mult[G.inverse[d[psi]], X], Y], G.inverse[X]]
    # zphi = X⁻¹ ∂φ(X,Y)⁻¹ Y X
    zphi = G.mult[G.mult[G.mult[G.inverse[X], G.inverse[d[phi]]], Y], X]
    return zpsi, zphi


def _frozen(table) -> np.ndarray:
    array = np.array(table, dtype=INDEX_DTYPE)
    array.setflags(write=False)
    return array


def pair_new(xmod: CrossedModule, psi_table, phi_table, name: str = "pair",
             embedding: Optional[GroupHom] = None) -> ReidemeisterPair:
    """
    Wrap ψ and φ tables over a crossed module and derive the Z-tables;
    no axioms are assumed

    Raises:
        IncompleteTable: a table is not |G|×|G| or holds a non-element of E
    """
    n, m = xmod.G.order, xmod.E.order
    tables = []
    for label, table in (("psi", psi_table), ("phi", phi_table)):
        array = np.asarray(table)
        if array.shape != (n, n):
            raise IncompleteTable(f"{label} table has shape {array.shape}, expected ({n}, {n})")
        if not np.issubdtype(array.dtype, np.integer) or ((array < 0) | (array >= m)).any():
            raise IncompleteTable(f"{label} table holds values outside {xmod.E.name}")
        tables.append(array)
    psi, phi = tables
    zpsi, zphi = _z_tables(xmod, psi, phi)
    return ReidemeisterPair(name, xmod, _frozen(psi), _frozen(phi), _frozen(zpsi), _frozen(zphi), embedding)


def pair_from_rack(r: Rack, group_law: FiniteGroup, config: Optional[XmodlinkConfig] = None) -> ReidemeisterPair:
    """
    ψ(b,a) = b a b⁻¹ (b▷a)⁻¹ and φ(b,a) = a b (a◁b)⁻¹ b⁻¹ over (id, conjugation);
    rack element i is group element i

    Raises:
        SizeMismatch
    """
    if r.size != group_law.order:
        raise SizeMismatch(f"rack {r.name} has {r.size} elements, group {group_law.name} has {group_law.order}")
    G = group_law
    b = np.arange(G.order)[:, None]
    a = np.arange(G.order)[None, :]
    psi = G.mult[G.mult[G.mult[b, a], G.inverse[b]], G.inverse[r.right[b, a]]]
    phi = G.mult[G.mult[G.mult[a, b], G.inverse[r.left[a, b]]], G.inverse[b]]
    return pair_new(xmod_identity_conj(G, config), psi, phi, name=f"rack-pair({r.name},{G.name})")


def pair_from_rack_cocycle(c: RackCocycle, group_law: FiniteGroup,
                           config: Optional[XmodlinkConfig] = None) -> ReidemeisterPair:
    """
    ψ(b,a) = (bab⁻¹(b▷a)⁻¹, w(b▷a, b)) and φ(b,a) = (ab(a◁b)⁻¹b⁻¹, −w(a,b)) over G×V

    Raises:
        SizeMismatch
    """
    r, V = c.rack, c.V
    if r.size != group_law.order:
        raise SizeMismatch(f"rack {r.name} has {r.size} elements, group {group_law.name} has {group_law.order}")
    plain = pair_from_rack(r, group_law, config)
    b = np.arange(r.size)[:, None]
    a = np.arange(r.size)[None, :]
    psi = plain.psi.astype(np.int64) * V.order + c.w[r.right[b, a], b]
    phi = plain.phi.astype(np.int64) * V.order + V.inverse[c.w[a, b]]
    xmod = xmod_product(group_law, V, config)
    return pair_new(xmod, psi, phi, name=f"cocycle-pair({r.name},{V.name})")


def _commutators(G: FiniteGroup, a, b):
    return G.mult[G.mult[a, b], G.mult[G.inverse[a], G.inverse[b]]]


def eisermann_tables(G: FiniteGroup, x: int, carrier: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """φˣ(g,h) = [hx⁻¹, gx⁻¹] and ψˣ(g,h) = [g,h][hg⁻¹,x], as G-indices over carrier×carrier"""
    g = carrier[:, None]
    h = carrier[None, :]
    xinv = G.inverse[x]
    phi = _commutators(G, G.mult[h, xinv], G.mult[g, xinv])
    psi = G.mult[_commutators(G, g, h), _commutators(G, G.mult[h, G.inverse[g]], x)]
    return psi, phi


def eisermann_pair(G: FiniteGroup, x: Union[int, str, GroupElement], on_derived: bool,
                   config: Optional[XmodlinkConfig] = None) -> ReidemeisterPair:
    """
    Eisermann pair over (id, conjugation) on G, or on the commutator subgroup
    G′ with the formulas evaluated in G
    """
    xi = G.index(x)
    if on_derived:
        carrier_group, embedding = commutator_subgroup(G)
        carrier = embedding.image.astype(np.int64)
    else:
        carrier_group, embedding = G, None
        carrier = np.arange(G.order)
    psi, phi = eisermann_tables(G, xi, carrier)
    position = np.full(G.order, -1, dtype=np.int64)
    position[carrier] = np.arange(len(carrier))
    psi, phi = position[psi], position[phi]
    if (psi < 0).any() or (phi < 0).any():
        raise PairError("Eisermann labels left the commutator subgroup")
    suffix = "'" if on_derived else ""
    return pair_new(xmod_identity_conj(carrier_group, config), psi, phi,
                    name=f"eisermann({G.name}{suffix},x={G.names[xi]})", embedding=embedding)


def lifted_eisermann_pair(ext: CentralExtension, x: Union[int, str, GroupElement],
                          config: Optional[XmodlinkConfig] = None) -> ReidemeisterPair:
    """φˣ(g,h) = {hx⁻¹, gx⁻¹} and ψˣ(g,h) = {g,h}{hg⁻¹,x} with {g,h} = [s(g), s(h)]"""
    G, E = ext.G, ext.E
    xi = G.index(x)
    brackets = bracket_table(ext)
    g = np.arange(G.order)[:, None]
    h = np.arange(G.order)[None, :]
    xinv = G.inverse[xi]
    phi = brackets[G.mult[h, xinv], G.mult[g, xinv]]
    psi = E.mult[brackets[g, h], brackets[G.mult[h, G.inverse[g]], xi]]
    return pair_new(xmod_from_central_extension(ext, config), psi, phi,
                    name=f"lifted({E.name}->{G.name},x={G.names[xi]})")


# === AXIOM CHECKS =====================================================

def _elements(G: FiniteGroup, *indices) -> Tuple[GroupElement, ...]:
    return tuple(GroupElement(G, int(i)) for i in indices)


def _check_r1(p: ReidemeisterPair, report: AxiomReport):
    report.checked.append("R1")
    for X in np.nonzero(np.diagonal(p.psi) != p.E.identity)[0]:
        report.add("R1", _elements(p.G, X))


def _check_r2(p: ReidemeisterPair, report: AxiomReport):
    """φ(X,Y) ψ(X,Z) = 1 with Z = zphi(X,Y)"""
    report.checked.append("R2")
    X = np.arange(p.G.order)[:, None]
    values = p.E.mult[p.phi, p.psi[X, p.zphi]]
    for X, Y in np.argwhere(values != p.E.identity):
        report.add("R2", _elements(p.G, X, Y))


def check_r2_second_form(p: ReidemeisterPair, config: Optional[XmodlinkConfig] = None) -> AxiomReport:
    """ψ(Y,X) φ(Y,T) = 1 with T = zpsi(Y,X), reported as R2′"""
    report = AxiomReport(limit=resolve_config(config).max_violations)
    report.checked.append("R2′")
    Y = np.arange(p.G.order)[:, None]
    values = p.E.mult[p.psi, p.phi[Y, p.zpsi]]
    for Y, X in np.argwhere(values != p.E.identity):
        report.add("R2′", _elements(p.G, Y, X))
    return report


def _check_r3(p: ReidemeisterPair, report: AxiomReport, config: XmodlinkConfig):
    """
    φ(Y,X)(Y▷φ(T,Z))φ(T,Y) = (X▷φ(T,Y))φ(T,X)(T▷φ(V,W))
    with Z = zphi(Y,X), V = zphi(T,Y), W = zphi(T,X)
    """
    report.checked.append("R3")
    E, act, phi, zphi = p.E, p.xmod.action, p.phi, p.zphi
    n = p.G.order
    for X, Y, T in index_batches((n, n, n), config, exhaustive=True):
        Z, V, W = zphi[Y, X], zphi[T, Y], zphi[T, X]
        left = E.mult[E.mult[phi[Y, X], act[Y, phi[T, Z]]], phi[T, Y]]
        right = E.mult[E.mult[act[X, phi[T, Y]], phi[T, X]], act[T, phi[V, W]]]
        for k in np.nonzero(left != right)[0]:
            report.add("R3", _elements(p.G, X[k], Y[k], T[k]))
        if report.full():
            return


def _check_r3_prime(p: ReidemeisterPair, report: AxiomReport, config: XmodlinkConfig):
    """
    ψ(X,Y)(A▷ψ(X,Z))ψ(A,B) = (X▷ψ(Y,Z))ψ(X,C)(D▷ψ(X,Y))
    with A = zpsi(X,Y), B = zpsi(X,Z), C = zpsi(Y,Z), D = zpsi(X,C)
    """
    report.checked.append("R3′")
    E, act, psi, zpsi = p.E, p.xmod.action, p.psi, p.zpsi
    n = p.G.order
    for X, Y, Z in index_batches((n, n, n), config, exhaustive=True):
        A, B, C = zpsi[X, Y], zpsi[X, Z], zpsi[Y, Z]
        D = zpsi[X, C]
        left = E.mult[E.mult[psi[X, Y], act[A, psi[X, Z]]], psi[A, B]]
        right = E.mult[E.mult[act[X, psi[Y, Z]], psi[X, C]], act[D, psi[X, Y]]]
        for k in np.nonzero(left != right)[0]:
            report.add("R3′", _elements(p.G, X[k], Y[k], Z[k]))
        if report.full():
            return


def _check_r3_equivalence(report: AxiomReport):
    """Where R2 holds, R3 and R3′ hold or fail together"""
    report.checked.append("R3⟺R3′")
    failed = set(report.failed_axioms())
    if "R2" in failed or report.full():
        return
    if ("R3" in failed) != ("R3′" in failed):
        broken = "R3" if "R3" in failed else "R3′"
        report.add("R3⟺R3′", next(w for a, w in report.violations if a == broken))


def check_unframed(p: ReidemeisterPair, also_r3prime: bool = False,
                   config: Optional[XmodlinkConfig] = None) -> AxiomReport:
    """
    Exhaustive R1, R2 and R3 check; violations are data, never errors

    Args:
        also_r3prime: additionally check the alternative third-move form R3′
            and that it agrees with R3 whenever R2 holds
    """
    config = resolve_config(config)
    report = AxiomReport(limit=config.max_violations)
    _check_r1(p, report)
    _check_r2(p, report)
    _check_r3(p, report, config)
    if also_r3prime:
        _check_r3_prime(p, report, config)
        _check_r3_equivalence(report)
    logger.debug("%s Unframed check of %s: %d violation(s)", "✅" if report.passed else "❌",
                p.name, len(report.violations))
    return report


def check_framed(p: ReidemeisterPair,
                 config: Optional[XmodlinkConfig] = None) -> Tuple[AxiomReport, Optional[FramedStructure]]:
    """
    R2 and R3, then (i) ∂(φ(A,Z))·A = Z has exactly one solution A = f(Z) for
    each Z, and (ii) f∘g = g∘f = id for g(A) = ∂ψ(A,A)⁻¹A
    """
    config = resolve_config(config)
    report = AxiomReport(limit=config.max_violations)
    _check_r2(p, report)
    _check_r3(p, report, config)

    G, d = p.G, p.xmod.boundary.image
    n = G.order
    A = np.arange(n)[:, None]
    Z = np.arange(n)[None, :]
    solves = G.mult[d[p.phi], A] == Z
    report.checked.append("F1")
    counts = solves.sum(axis=0)
    for z in np.nonzero(counts != 1)[0]:
        report.add("F1", _elements(G, z))
    structure = None
    if (counts == 1).all():
        f = solves.argmax(axis=0)
        g = G.mult[G.inverse[d[np.diagonal(p.psi)]], np.arange(n)]
        report.checked.append("F2")
        for a in np.nonzero((f[g] != np.arange(n)) | (g[f] != np.arange(n)))[0]:
            report.add("F2", _elements(G, a))
        if report.passed:
            structure = FramedStructure(_frozen(f), _frozen(g))
    logger.debug("%s Framed check of %s: %d violation(s)", "✅" if report.passed else "❌",
                p.name, len(report.violations))
    return report, structure


def _ambient_and_x(p: ReidemeisterPair, x: Union[int, str, GroupElement]) -> Tuple[FiniteGroup, np.ndarray, int]:
    """Group in which the Eisermann formulas live, the carrier inside it, and x there"""
    if p.embedding is not None:
        ambient = p.embedding.target
        return ambient, p.embedding.image.astype(np.int64), ambient.index(x)
    return p.G, np.arange(p.G.order), p.G.index(x)


def is_eisermann_lifting(p: ReidemeisterPair, x: Union[int, str, GroupElement],
                         config: Optional[XmodlinkConfig] = None) -> bool:
    """True iff the pair is unframed and ∂ reproduces the Eisermann tables for x"""
    ambient, carrier, xi = _ambient_and_x(p, x)
    expected_psi, expected_phi = eisermann_tables(ambient, xi, carrier)
    d = p.xmod.boundary.image
    if not (np.array_equal(carrier[d[p.psi]], expected_psi) and np.array_equal(carrier[d[p.phi]], expected_phi)):
        return False
    return check_unframed(p, config=config).passed


def check_alternative_psi(p: ReidemeisterPair, x: Union[int, str, GroupElement]) -> bool:
    """
    ψˣ(L,M) = {xML⁻¹x⁻¹Lx⁻¹, Lx⁻¹}⁻¹, with {a,b} the commutator of any lifts of a and b
    """
    ambient, carrier, xi = _ambient_and_x(p, x)
    L = carrier[:, None]
    M = carrier[None, :]
    A = ambient
    xinv = A.inverse[xi]
    first = A.mult[A.mult[A.mult[A.mult[A.mult[xi, M], A.inverse[L]], xinv], L], xinv]
    second = A.mult[L, xinv]
    if p.embedding is not None:
        expected = A.inverse[_commutators(A, first, second)]
        return bool(np.array_equal(carrier[p.psi], expected))
    E, d = p.E, p.xmod.boundary.image
    lift = np.array([np.nonzero(d == g)[0][0] for g in range(p.G.order)])
    expected = E.inverse[_commutators(E, lift[first], lift[second])]
    return bool(np.array_equal(p.psi, expected))


def enumerate_pairs(xmod: CrossedModule, framed: bool,
                    config: Optional[XmodlinkConfig] = None) -> List[ReidemeisterPair]:
    """
    Every unframed (or framed) pair over a tiny crossed module

    Each row φ(X, ·) whose Z-row is a bijection forces the row ψ(X, ·) through
    R2; the rows are combined and filtered by the remaining axioms.
    """
    config = resolve_config(config)
    G, E, d = xmod.G, xmod.E, xmod.boundary.image
    n = G.order
    rows = []
    for X in range(n):
        options = []
        for labels in itertools.product(range(E.order), repeat=n):
            labels = np.array(labels)
            Z = G.mult[G.mult[G.mult[G.inverse[X], G.inverse[d[labels]]], np.arange(n)], X]
            if len(np.unique(Z)) != n:
                continue
            psi_row = np.empty(n, dtype=np.int64)
            psi_row[Z] = E.inverse[labels]
            if not framed and psi_row[X] != E.identity:
                continue
            options.append((labels, psi_row))
        rows.append(options)
    total = int(np.prod([len(options) for options in rows], dtype=np.float64))
    if total > config.closure_cap:
        raise BoundExceeded(f"{total} candidate pairs exceed the cap {config.closure_cap}")

    found = []
    for choice in itertools.product(*rows):
        phi = np.array([labels for labels, _ in choice])
        psi = np.array([psi_row for _, psi_row in choice])
        candidate = pair_new(xmod, psi, phi, name=f"candidate{len(found)}")
        if framed:
            report, _ = check_framed(candidate, config)
        else:
            report = check_unframed(candidate, config=config)
        if report.passed:
            found.append(candidate)
    logger.info("🧪 Found %d %s pairs over %r", len(found), "framed" if framed else "unframed", xmod)
    return found
