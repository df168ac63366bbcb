"""
xmodlink Algebra
Finite groups as validated Cayley tables, homomorphisms, subgroups,
enhanced words and the integer group algebra
"""

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime, primitive_root
from sympy.combinatorics import Permutation

from xmodlink_config import XmodlinkConfig, get_logger, resolve_config
from xmodlink_errors import (
    AlgebraError,
    BoundExceeded,
    GroupMismatch,
    IndexOutOfRange,
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotAHomomorphism,
    NotNormal,
    SingularGenerator,
)

logger = get_logger(__name__)

INDEX_DTYPE = np.int32

# Strand orientations; a starred word entry sits on an upward strand
DOWN = "v"
UP = "^"


# === GROUPS ===========================================================

@dataclass(frozen=True, eq=False, repr=False)
class FiniteGroup:
    """A finite group stored as its multiplication table over indices 0..order-1"""
    name: str
    mult: np.ndarray
    identity: int
    inverse: np.ndarray
    names: Tuple[str, ...]
    _lookup: Dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.mult.setflags(write=False)
        self.inverse.setflags(write=False)
        self._lookup.update({label: i for i, label in enumerate(self.names)})

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.names)

    def index(self, key: Union[int, str, "GroupElement"]) -> int:
        """Resolve an element index from an index, a display name or an element"""
        if isinstance(key, GroupElement):
            if not self.is_same(key.group):
                raise GroupMismatch(f"element {key.name} belongs to {key.group.name}, not {self.name}")
            return key.index
        if isinstance(key, str):
            if key not in self._lookup:
                raise IndexOutOfRange(f"unknown element {key!r} of {self.name}")
            return self._lookup[key]
        index = int(key)
        if not 0 <= index < self.order:
            raise IndexOutOfRange(f"index {index} outside {self.name} of order {self.order}")
        return index

    def element(self, key: Union[int, str, "GroupElement"]) -> "GroupElement":
        return GroupElement(self, self.index(key))

    def elements(self) -> List["GroupElement"]:
        return [GroupElement(self, i) for i in range(self.order)]

    def one(self) -> "GroupElement":
        return GroupElement(self, self.identity)

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def product(self, *indices: int) -> int:
        result = self.identity
        for i in indices:
            result = int(self.mult[result, i])
        return result

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a b a⁻¹ b⁻¹"""
        return self.product(a, b, self.inv(a), self.inv(b))

    def is_same(self, other: "FiniteGroup") -> bool:
        if self is other:
            return True
        return (self.order == other.order and self.names == other.names
                and np.array_equal(self.mult, other.mult))


@dataclass(frozen=True)
class GroupElement:
    group: FiniteGroup
    index: int

    def __post_init__(self):
        index = int(self.index)
        if not 0 <= index < self.group.order:
            raise IndexOutOfRange(f"index {index} outside {self.group.name} of order {self.group.order}")
        object.__setattr__(self, "index", index)

    def __repr__(self) -> str:
        return f"GroupElement({self.group.name}:{self.name})"

    def __str__(self) -> str:
        return self.name

    @property
    def name(self) -> str:
        return self.group.names[self.index]

    def _check(self, other: "GroupElement"):
        if not self.group.is_same(other.group):
            raise GroupMismatch(f"cannot combine elements of {self.group.name} and {other.group.name}",
                                witness=(self.name, other.name))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.group, self.group.mul(self.index, other.index))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inv(self.index))

    def is_identity(self) -> bool:
        return self.index == self.group.identity


def index_batches(sizes: Sequence[int], config: Optional[XmodlinkConfig] = None,
                  exhaustive: bool = False) -> Iterator[Tuple[np.ndarray, ...]]:
    """
    Index arrays covering the grid sizes[0]×sizes[1]×..., one batch per value of
    the first coordinate; unless exhaustive is forced, a single random sample
    replaces the grid when it exceeds the cube of the exhaustive axiom order
    """
    config = resolve_config(config)
    total = int(np.prod(sizes, dtype=np.int64))
    if exhaustive or total <= config.exhaustive_axiom_order ** 3:
        rest = np.indices(tuple(sizes[1:])).reshape(len(sizes) - 1, -1)
        for first in range(sizes[0]):
            yield (np.full(rest.shape[1], first, dtype=np.int64),) + tuple(rest)
        return
    rng = np.random.default_rng(config.random_seed)
    yield tuple(rng.integers(0, s, config.random_axiom_samples) for s in sizes)


def _associativity_witness(mult: np.ndarray, config: XmodlinkConfig) -> Optional[Tuple[int, int, int]]:
    """First triple with (ab)c != a(bc), exhaustive up to the configured order, sampled above"""
    n = mult.shape[0]
    if n <= config.exhaustive_axiom_order:
        for a in range(n):
            left = mult[mult[a]]          # [b, c] -> (ab)c
            right = mult[a][mult]         # [b, c] -> a(bc)
            bad = np.argwhere(left != right)
            if len(bad):
                b, c = bad[0]
                return a, int(b), int(c)
        return None
    rng = np.random.default_rng(config.random_seed)
    a, b, c = (rng.integers(0, n, config.random_axiom_samples) for _ in range(3))
    bad = np.nonzero(mult[mult[a, b], c] != mult[a, mult[b, c]])[0]
    if len(bad):
        k = bad[0]
        return int(a[k]), int(b[k]), int(c[k])
    return None


def _build_group(name: str, table, names: Sequence[str],
                 config: Optional[XmodlinkConfig] = None) -> FiniteGroup:
    config = resolve_config(config)
    names = tuple(str(label) for label in names)
    n = len(names)
    if n == 0:
        raise IndexOutOfRange("a group needs at least one element")
    if len(set(names)) != n:
        duplicates = sorted(label for label, k in Counter(names).items() if k > 1)
        raise AlgebraError("duplicate element names", witness=duplicates)

    mult = np.asarray(table)
    if mult.shape != (n, n):
        raise IndexOutOfRange(f"table has shape {mult.shape}, expected ({n}, {n})")
    if not np.issubdtype(mult.dtype, np.integer):
        raise IndexOutOfRange("table entries must be element indices")
    outside = np.argwhere((mult < 0) | (mult >= n))
    if len(outside):
        i, j = outside[0]
        raise IndexOutOfRange("table entry is not an element index", witness=(names[i], names[j], int(mult[i, j])))
    mult = mult.astype(INDEX_DTYPE, copy=True)

    everything = np.arange(n)
    candidates = np.nonzero((mult == everything[None, :]).all(axis=1)
                            & (mult == everything[:, None]).all(axis=0))[0]
    if len(candidates) == 0:
        raise NoIdentity(f"{name} has no two-sided identity")
    identity = int(candidates[0])

    hits = mult == identity
    both = hits & hits.T
    missing = np.nonzero(~both.any(axis=1))[0]
    if len(missing):
        raise NoInverse(f"{name} has an element without a two-sided inverse", witness=(names[missing[0]],))
    inverse = both.argmax(axis=1).astype(INDEX_DTYPE)

    witness = _associativity_witness(mult, config)
    if witness is not None:
        raise NonAssociative(f"{name} is not associative", witness=tuple(names[i] for i in witness))

    logger.debug("✅ Built group %s of order %d", name, n)
    return FiniteGroup(name=name, mult=mult, identity=identity, inverse=inverse, names=names)


def group_from_cayley(names: Sequence[str], table, name: str = "G",
                      config: Optional[XmodlinkConfig] = None) -> FiniteGroup:
    """
    Validate a Cayley table and wrap it as a group

    Args:
        names: distinct display names, one per element
        table: order×order matrix, entry [i][j] is the index of names[i]·names[j]

    Raises:
        NonAssociative, NoIdentity, NoInverse, IndexOutOfRange
    """
    return _build_group(name, table, names, config)


def _permutation_name(perm: Sequence[int]) -> str:
    cycles = Permutation(list(perm)).cyclic_form
    if not cycles:
        return "id"
    sep = "" if len(perm) <= 9 else ","
    return "".join("(" + sep.join(str(i + 1) for i in cycle) + ")" for cycle in cycles)


@lru_cache(maxsize=None)
def _symmetric_group(n: int) -> FiniteGroup:
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = perms @ weights
    mult = np.empty((len(perms), len(perms)), dtype=INDEX_DTYPE)
    for s in range(len(perms)):
        # row t holds t∘s, i.e. apply s first then t
        mult[s] = np.searchsorted(codes, perms[:, perms[s]] @ weights)
    names = [_permutation_name(p) for p in perms]
    return _build_group(f"S{n}", mult, names)


def symmetric_group(n: int, config: Optional[XmodlinkConfig] = None) -> FiniteGroup:
    """
    S_n with (σ·τ)(i) = τ(σ(i)), elements in lexicographic order of their
    one-line form, named in 1-based cycle notation with `id` for the identity
    """
    config = resolve_config(config)
    if n < 1:
        raise AlgebraError(f"symmetric group degree must be positive, got {n}")
    if n > config.max_symmetric_degree:
        raise BoundExceeded(f"S{n} exceeds the configured degree bound {config.max_symmetric_degree}")
    return _symmetric_group(n)


def matrix_name(matrix) -> str:
    m = np.asarray(matrix).reshape(2, 2)
    return f"({m[0, 0]} {m[0, 1]};{m[1, 0]} {m[1, 1]})"


def _matrix_code(matrix: np.ndarray, p: int) -> int:
    a, b, c, d = (int(v) for v in np.asarray(matrix).reshape(4))
    return ((a * p + b) * p + c) * p + d


def _matrix_from_code(code: int, p: int) -> np.ndarray:
    digits = []
    for _ in range(4):
        code, digit = divmod(code, p)
        digits.append(digit)
    return np.array(digits[::-1], dtype=np.int64).reshape(2, 2)


def group_from_matrix_generators(generators: Sequence, modulus: int, name: Optional[str] = None,
                                 config: Optional[XmodlinkConfig] = None) -> FiniteGroup:
    """
    Closure of invertible 2×2 matrices mod a prime; identity first, then by matrix code

    Raises:
        SingularGenerator, BoundExceeded
    """
    config = resolve_config(config)
    p = int(modulus)
    if not isprime(p):
        raise AlgebraError(f"modulus {p} is not prime")
    gens = []
    for matrix in generators:
        m = np.asarray(matrix, dtype=np.int64) % p
        if m.shape != (2, 2):
            raise AlgebraError(f"generator {matrix!r} is not a 2x2 matrix")
        if (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) % p == 0:
            raise SingularGenerator(f"generator is singular mod {p}", witness=(matrix_name(m),))
        gens.append(m)

    identity = _matrix_code(np.eye(2, dtype=np.int64), p)
    seen = {identity}
    frontier = [identity]
    while frontier:
        grown = []
        for code in frontier:
            m = _matrix_from_code(code, p)
            for g in gens:
                product = _matrix_code((m @ g) % p, p)
                if product not in seen:
                    seen.add(product)
                    grown.append(product)
                    if len(seen) > config.closure_cap:
                        raise BoundExceeded(f"matrix closure exceeds {config.closure_cap} elements")
        frontier = grown

    codes = np.array([identity] + sorted(seen - {identity}), dtype=np.int64)
    mats = np.array([_matrix_from_code(int(c), p) for c in codes])
    order = np.argsort(codes)
    sorted_codes = codes[order]
    weights = np.array([p ** 3, p ** 2, p, 1], dtype=np.int64)
    n = len(codes)
    mult = np.empty((n, n), dtype=INDEX_DTYPE)
    for i in range(n):
        products = np.einsum("jk,nkl->njl", mats[i], mats) % p
        mult[i] = order[np.searchsorted(sorted_codes, products.reshape(n, 4) @ weights)]
    names = [matrix_name(m) for m in mats]
    return _build_group(name or f"M{n}(p={p})", mult, names, config)


def cyclic_group(n: int) -> FiniteGroup:
    everything = np.arange(n)
    return _build_group(f"Z{n}", (everything[:, None] + everything[None, :]) % n,
                        [str(i) for i in range(n)])


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; element r^a s^e has index a + n·e"""
    total = 2 * n
    a, e = np.arange(total) % n, np.arange(total) // n
    sign = np.where(e == 1, -1, 1)
    rot = (a[:, None] + sign[:, None] * a[None, :]) % n
    flip = (e[:, None] + e[None, :]) % 2
    names = []
    for k in range(total):
        power = "" if a[k] == 0 else ("r" if a[k] == 1 else f"r{a[k]}")
        label = power + ("s" if e[k] else "")
        names.append(label or "e")
    return _build_group(f"D{n}", rot + n * flip, names)


_QUATERNION_UNITS = {
    (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
    (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
    (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
    (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
}


def quaternion_group() -> FiniteGroup:
    """Q8 = {±1, ±i, ±j, ±k}; index is 4·(negative) + unit"""
    table = np.empty((8, 8), dtype=INDEX_DTYPE)
    for x in range(8):
        for y in range(8):
            flip, unit = _QUATERNION_UNITS[(x % 4, y % 4)]
            table[x, y] = 4 * ((x // 4 + y // 4 + flip) % 2) + unit
    return _build_group("Q8", table, ["1", "i", "j", "k", "-1", "-i", "-j", "-k"])


def direct_product(g: FiniteGroup, h: FiniteGroup, name: Optional[str] = None) -> FiniteGroup:
    """G×H with (a, b) at index a·|H| + b"""
    nh = h.order
    idx = np.arange(g.order * nh)
    first, second = idx // nh, idx % nh
    mult = g.mult[first[:, None], first[None, :]].astype(np.int64) * nh + h.mult[second[:, None], second[None, :]]
    names = [f"({g.names[a]},{h.names[b]})" for a, b in zip(first, second)]
    return _build_group(name or f"{g.name}x{h.name}", mult, names)


# === HOMOMORPHISMS AND SUBGROUPS ======================================

@dataclass(frozen=True, eq=False, repr=False)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    image: np.ndarray

    def __repr__(self) -> str:
        return f"GroupHom({self.source.name} -> {self.target.name})"

    def __call__(self, x: Union[int, GroupElement]):
        if isinstance(x, GroupElement):
            return GroupElement(self.target, int(self.image[self.source.index(x)]))
        return int(self.image[x])

    def kernel(self) -> List[int]:
        return [int(i) for i in np.nonzero(self.image == self.target.identity)[0]]

    def image_set(self) -> List[int]:
        return sorted(int(i) for i in set(self.image.tolist()))

    def is_surjective(self) -> bool:
        return len(set(self.image.tolist())) == self.target.order


def group_hom(source: FiniteGroup, target: FiniteGroup, image: Sequence[int]) -> GroupHom:
    """Validated homomorphism from an index table"""
    image = np.asarray(image, dtype=np.int64)
    if image.shape != (source.order,):
        raise IndexOutOfRange(f"hom table has {image.shape} entries, expected {source.order}")
    if ((image < 0) | (image >= target.order)).any():
        raise IndexOutOfRange("hom table entry outside the target group")
    if image[source.identity] != target.identity:
        raise NotAHomomorphism("identity is not mapped to identity",
                               witness=(source.names[source.identity],))
    bad = np.argwhere(image[source.mult] != target.mult[image[:, None], image[None, :]])
    if len(bad):
        a, b = bad[0]
        raise NotAHomomorphism("image(ab) != image(a)image(b)", witness=(source.names[a], source.names[b]))
    image = image.astype(INDEX_DTYPE)
    image.setflags(write=False)
    return GroupHom(source, target, image)


def _closure(group: FiniteGroup, generators: Iterable[int]) -> np.ndarray:
    gens = np.unique(np.asarray(list(generators), dtype=np.int64))
    members = np.unique(np.concatenate([[group.identity], gens]))
    if len(gens) == 0:
        return members
    while True:
        grown = np.union1d(members, group.mult[np.ix_(members, gens)].ravel())
        if len(grown) == len(members):
            return members
        members = grown


def _subgroup_from_indices(group: FiniteGroup, members: np.ndarray, name: str) -> Tuple[FiniteGroup, GroupHom]:
    members = np.sort(np.asarray(members, dtype=np.int64))
    position = np.full(group.order, -1, dtype=np.int64)
    position[members] = np.arange(len(members))
    table = position[group.mult[np.ix_(members, members)]]
    sub = _build_group(name, table, [group.names[i] for i in members])
    return sub, GroupHom(sub, group, members.astype(INDEX_DTYPE))


def subgroup_generated(group: FiniteGroup, elements: Iterable[Union[int, GroupElement]],
                       name: Optional[str] = None) -> Tuple[FiniteGroup, GroupHom]:
    """Closure of a set of elements, returned as a standalone group plus its inclusion"""
    indices = [group.index(e) for e in elements]
    return _subgroup_from_indices(group, _closure(group, indices), name or f"<{group.name}>")


def commutator_subgroup(group: FiniteGroup) -> Tuple[FiniteGroup, GroupHom]:
    mult, inv = group.mult, group.inverse
    commutators = mult[mult, mult[inv[:, None], inv[None, :]]]
    return subgroup_generated(group, np.unique(commutators).tolist(), f"{group.name}'")


def centralizer(group: FiniteGroup, x: Union[int, GroupElement]) -> Tuple[FiniteGroup, GroupHom]:
    xi = group.index(x)
    members = np.nonzero(group.mult[:, xi] == group.mult[xi, :])[0]
    return _subgroup_from_indices(group, members, f"C({group.names[xi]})")


def center(group: FiniteGroup) -> List[int]:
    return [int(z) for z in np.nonzero((group.mult == group.mult.T).all(axis=1))[0]]


def is_abelian(group: FiniteGroup) -> bool:
    return bool((group.mult == group.mult.T).all())


def element_order(group: FiniteGroup, g: Union[int, GroupElement]) -> int:
    gi = group.index(g)
    power, k = gi, 1
    while power != group.identity:
        power = group.mul(power, gi)
        k += 1
    return k


def quotient_group(group: FiniteGroup, normal: Iterable[Union[int, GroupElement]],
                   name: Optional[str] = None) -> Tuple[FiniteGroup, GroupHom]:
    """
    G/N with cosets ordered by their least member; each coset is named
    `~` plus the name of that member

    Raises:
        NotNormal: N is not a subgroup closed under conjugation
    """
    members = np.unique([group.index(n) for n in normal])
    inside = np.zeros(group.order, dtype=bool)
    inside[members] = True
    if not inside[group.identity] or not inside[group.mult[np.ix_(members, members)]].all():
        raise NotNormal(f"given set is not a subgroup of {group.name}")
    conjugates = group.mult[group.mult[:, members], group.inverse[:, None]]
    bad = np.argwhere(~inside[conjugates])
    if len(bad):
        g, k = bad[0]
        raise NotNormal("subgroup is not closed under conjugation",
                        witness=(group.names[g], group.names[members[k]]))

    least = group.mult[:, members].min(axis=1)
    reps = np.unique(least)
    coset_of = np.searchsorted(reps, least)
    table = coset_of[group.mult[np.ix_(reps, reps)]]
    quotient = _build_group(name or f"{group.name}/N", table, ["~" + group.names[r] for r in reps])
    return quotient, group_hom(group, quotient, coset_of)


@lru_cache(maxsize=None)
def general_linear_extension(p: int = 5) -> Tuple[FiniteGroup, FiniteGroup, GroupHom]:
    """GL(2,p), PGL(2,p) and the projection killing the scalar matrices"""
    root = int(primitive_root(p))
    gl = group_from_matrix_generators([[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[root, 0], [0, 1]]],
                                      p, name=f"GL(2,{p})")
    scalars = [gl.index(matrix_name([[k, 0], [0, k]])) for k in range(1, p)]
    pgl, projection = quotient_group(gl, scalars, name=f"PGL(2,{p})")
    logger.info("✅ Built %s (order %d) over %s (order %d)", gl.name, gl.order, pgl.name, pgl.order)
    return gl, pgl, projection


def _generating_set(group: FiniteGroup) -> List[int]:
    gens: List[int] = []
    span = {group.identity}
    by_order = sorted(range(group.order), key=lambda g: (-element_order(group, g), g))
    for g in by_order:
        if g not in span:
            gens.append(g)
            span = set(_closure(group, gens).tolist())
        if len(span) == group.order:
            break
    return gens


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> Optional[np.ndarray]:
    """
    Brute-force renaming search: try every assignment of generator images
    with matching element orders and keep the first that is a bijective hom
    """
    if g.order != h.order:
        return None
    gens = _generating_set(g)
    tree: List[Tuple[int, int, int]] = []
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        grown = []
        for u in frontier:
            for k, gen in enumerate(gens):
                v = g.mul(u, gen)
                if v not in seen:
                    seen.add(v)
                    tree.append((v, u, k))
                    grown.append(v)
        frontier = grown

    h_orders = [element_order(h, y) for y in range(h.order)]
    choices = [[y for y in range(h.order) if h_orders[y] == element_order(g, gen)] for gen in gens]
    for images in itertools.product(*choices):
        mapping = np.full(g.order, -1, dtype=np.int64)
        mapping[g.identity] = h.identity
        for v, u, k in tree:
            mapping[v] = h.mult[mapping[u], images[k]]
        if len(set(mapping.tolist())) != g.order:
            continue
        if (mapping[g.mult] == h.mult[mapping[:, None], mapping[None, :]]).all():
            return mapping
    return None


# === GROUP ALGEBRA ====================================================

@dataclass(frozen=True)
class GroupAlgebraElement:
    """Integer combination of group elements, stored zero-free and index-sorted"""
    group: FiniteGroup
    coeffs: Tuple[Tuple[int, int], ...] = ()

    def __repr__(self) -> str:
        return f"GroupAlgebraElement({self.group.name}: {self.render()})"

    def as_dict(self) -> Dict[int, int]:
        return dict(self.coeffs)

    def coefficient(self, key: Union[int, str, GroupElement]) -> int:
        return self.as_dict().get(self.group.index(key), 0)

    def total(self) -> int:
        return sum(c for _, c in self.coeffs)

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for index, c in self.coeffs:
            label = self.group.names[index]
            term = label if abs(c) == 1 else f"{abs(c)}*{label}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {term}")
        return " ".join(parts)

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return ga_add(self, other)

    def __neg__(self) -> "GroupAlgebraElement":
        return ga_scale(-1, self)

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return ga_add(self, ga_scale(-1, other))

    def __rmul__(self, k: int) -> "GroupAlgebraElement":
        return ga_scale(k, self)

    def push_forward(self, hom: GroupHom) -> "GroupAlgebraElement":
        if not hom.source.is_same(self.group):
            raise GroupMismatch(f"hom starts at {hom.source.name}, element lives over {self.group.name}")
        counts: Dict[int, int] = {}
        for index, c in self.coeffs:
            target = hom(index)
            counts[target] = counts.get(target, 0) + c
        return ga_from_counts(hom.target, counts)


def ga_from_counts(group: FiniteGroup, counts: Mapping[Union[int, str, GroupElement], int]) -> GroupAlgebraElement:
    merged: Dict[int, int] = {}
    for key, c in counts.items():
        index = group.index(key)
        merged[index] = merged.get(index, 0) + int(c)
    return GroupAlgebraElement(group, tuple(sorted((i, c) for i, c in merged.items() if c != 0)))


def ga_zero(group: FiniteGroup) -> GroupAlgebraElement:
    return GroupAlgebraElement(group, ())


def ga_basis(group: FiniteGroup, key: Union[int, str, GroupElement], k: int = 1) -> GroupAlgebraElement:
    return ga_from_counts(group, {group.index(key): k})


def _same_algebra(a: GroupAlgebraElement, b: GroupAlgebraElement):
    if not a.group.is_same(b.group):
        raise GroupMismatch(f"group algebra elements over {a.group.name} and {b.group.name}")


def ga_add(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    _same_algebra(a, b)
    counts = a.as_dict()
    for index, c in b.coeffs:
        counts[index] = counts.get(index, 0) + c
    return ga_from_counts(a.group, counts)


def ga_scale(k: int, a: GroupAlgebraElement) -> GroupAlgebraElement:
    return ga_from_counts(a.group, {i: k * c for i, c in a.coeffs})


def ga_equal(a: GroupAlgebraElement, b: GroupAlgebraElement) -> bool:
    _same_algebra(a, b)
    return a.coeffs == b.coeffs


# === ENHANCED WORDS ===================================================

@dataclass(frozen=True)
class EnhancedWord:
    """Boundary enhancement: each entry is an element plus a starred flag (upward strand)"""
    group: FiniteGroup
    entries: Tuple[Tuple[GroupElement, bool], ...] = ()

    def __post_init__(self):
        entries = tuple((g, bool(starred)) for g, starred in self.entries)
        for g, _ in entries:
            if not self.group.is_same(g.group):
                raise GroupMismatch(f"word over {self.group.name} contains an element of {g.group.name}",
                                    witness=(g.name,))
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __add__(self, other: "EnhancedWord") -> "EnhancedWord":
        if not self.group.is_same(other.group):
            raise GroupMismatch(f"cannot concatenate words over {self.group.name} and {other.group.name}")
        return EnhancedWord(self.group, self.entries + other.entries)

    def indices(self) -> Tuple[int, ...]:
        return tuple(g.index for g, _ in self.entries)

    def signature(self) -> Tuple[str, ...]:
        return tuple(UP if starred else DOWN for _, starred in self.entries)

    def render(self) -> str:
        return ", ".join(g.name + ("*" if starred else "") for g, starred in self.entries)


def word_from_indices(group: FiniteGroup, indices: Sequence[int], signature: Sequence[str]) -> EnhancedWord:
    if len(indices) != len(signature):
        raise IndexOutOfRange(f"{len(indices)} colours for a signature of width {len(signature)}")
    return EnhancedWord(group, tuple((GroupElement(group, i), s == UP) for i, s in zip(indices, signature)))


def _split_top_level(text: str) -> List[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts]


def parse_word(group: FiniteGroup, text: str) -> EnhancedWord:
    """`g, h*, k`: comma separated element names, `*` marks a starred entry; empty text is ∅"""
    text = text.strip()
    if not text or text == "∅":
        return EnhancedWord(group, ())
    entries = []
    for token in _split_top_level(text):
        starred = token.endswith("*")
        label = token[:-1].strip() if starred else token
        entries.append((group.element(label), starred))
    return EnhancedWord(group, tuple(entries))


def reverse_star(w: EnhancedWord) -> EnhancedWord:
    return EnhancedWord(w.group, tuple((g, not starred) for g, starred in reversed(w.entries)))


def evaluate_word(w: EnhancedWord) -> GroupElement:
    """Left-to-right product with starred entries inverted; e(∅) = 1"""
    group = w.group
    result = group.identity
    for g, starred in w.entries:
        result = group.mul(result, group.inv(g.index) if starred else g.index)
    return GroupElement(group, result)
