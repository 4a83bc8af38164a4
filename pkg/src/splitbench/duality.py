"""Finite restricted Priestley duality.

All spaces are finite, so the topology is discrete and "clopen up-set"
just means up-set; conditions on spaces that only constrain the topology
are vacuous here and are not modelled.
"""

from dataclasses import dataclass

from .errors import (AxiomError, BadParameter, NotDistributive, NotRegular,
                     SizeError)
from .lattice import FinLattice
from .poset import (DEFAULT_UPSET_CAP, FinPoset, bits, enumerate_up_sets,
                    is_connected, popcount)

MORPHISM_BUDGET = 50_000_000


class UpSetAlgebra:
    """The algebra of up-sets of a finite ordered set.

    Elements are up-set bitmasks.  The operations are total and follow
    the down-/up-closure formulas of the finite duality; ``elements`` is
    only materialised on demand since carriers can be large.
    """

    __slots__ = ("base", "_elements", "_index")

    def __init__(self, base: FinPoset):
        self.base = base
        self._elements = None
        self._index = None

    # -- carrier ---------------------------------------------------------

    def materialize(self, cap: int = DEFAULT_UPSET_CAP) -> list[int]:
        if self._elements is None:
            self._elements = enumerate_up_sets(self.base, cap)
            self._index = {m: i for i, m in enumerate(self._elements)}
        return self._elements

    @property
    def elements(self) -> list[int]:
        return self.materialize()

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, u: int) -> int:
        self.materialize()
        return self._index[u]

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return self.base.all_mask

    @property
    def bottom(self) -> int:
        return 0

    # -- operations (masks in, masks out) ---------------------------------

    def leq(self, u: int, v: int) -> bool:
        return not (u & ~v)

    def meet(self, u: int, v: int) -> int:
        return u & v

    def join(self, u: int, v: int) -> int:
        return u | v

    def neg(self, u: int) -> int:
        return self.one & ~self.base.down_mask(u)

    def dpc(self, u: int) -> int:
        return self.base.up_mask(self.one & ~u)

    def arrow(self, u: int, v: int) -> int:
        return self.one & ~self.base.down_mask(u & ~v)

    def coarrow(self, u: int, v: int) -> int:
        return self.base.up_mask(u & ~v)

    def delta(self, u: int) -> int:
        return self.neg(self.dpc(u))

    def sigma(self, u: int) -> int:
        return self.dpc(self.neg(u))

    def __repr__(self):
        return f"UpSetAlgebra(base size {self.base.size})"


def up_set_algebra(x: FinPoset, cap: int = DEFAULT_UPSET_CAP) -> UpSetAlgebra:
    """Build Up(x) and assert the defining adjunctions on all elements."""
    alg = UpSetAlgebra(x)
    elems = alg.materialize(cap)
    for u in elems:
        if alg.delta(u) != alg.neg(alg.dpc(u)) or \
                alg.sigma(u) != alg.dpc(alg.neg(u)):
            raise AxiomError(f"delta/sigma table identity fails at {u:b}")
    for u in elems:
        nu = alg.dpc(u)
        au0 = alg.arrow(u, 0)
        if au0 != alg.neg(u):
            raise AxiomError(f"neg is not arrow-to-zero at {u:b}")
        for w in elems:
            if (alg.join(u, w) == alg.one) != alg.leq(nu, w):
                raise AxiomError(f"dual pseudocomplement law fails at ({u:b},{w:b})")
        for v in elems:
            uv = alg.arrow(u, v)
            duv = alg.coarrow(u, v)
            for w in elems:
                if alg.leq(alg.meet(w, u), v) != alg.leq(w, uv):
                    raise AxiomError(f"residuation fails at ({u:b},{v:b},{w:b})")
                if alg.leq(u, alg.join(w, v)) != alg.leq(duv, w):
                    raise AxiomError(f"dual residuation fails at ({u:b},{v:b},{w:b})")
    return alg


def dual_poset(lat: FinLattice) -> tuple[FinPoset, list[int]]:
    """Join-irreducibles of a finite distributive lattice, ordered so that
    its up-set lattice reconstructs the input.

    Returns the poset and the list of lattice elements realising it.  The
    order is the reverse of the lattice order on join-irreducibles, which
    makes the round trip the identity on labels for up-set-lattice inputs.
    """
    if not lat.is_distributive():
        raise NotDistributive("dual poset requires a distributive lattice")
    irr = []
    for x in range(lat.size):
        if x == lat.zero:
            continue
        below = lat.poset.down[x] & ~(1 << x)
        if lat.join_all(below) != x:
            irr.append(x)
    rows = []
    for j in irr:
        row = 0
        for k, other in enumerate(irr):
            if lat.leq(other, j):
                row |= 1 << k
        rows.append(row)
    return FinPoset(rows), irr


def birkhoff_map(lat: FinLattice, irr: list[int]) -> dict[int, int]:
    """x -> mask of join-irreducibles below x, an up-set of the dual."""
    out = {}
    for x in range(lat.size):
        mask = 0
        for k, j in enumerate(irr):
            if lat.leq(j, x):
                mask |= 1 << k
        out[x] = mask
    return out


@dataclass(frozen=True)
class PosetMap:
    source: FinPoset
    target: FinPoset
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.source.size:
            raise BadParameter("map is not total")
        for v in self.values:
            if not 0 <= v < self.target.size:
                raise BadParameter("value out of target range")

    def image_mask(self, s: int) -> int:
        out = 0
        for i in bits(s):
            out |= 1 << self.values[i]
        return out

    def is_surjective(self) -> bool:
        return self.image_mask(self.source.all_mask) == self.target.all_mask


@dataclass(frozen=True)
class MapClass:
    is_priestley: bool
    m1: bool
    m2: bool
    m3: bool

    @property
    def heyting(self) -> bool:
        return self.m1

    @property
    def hplus(self) -> bool:
        return self.m1 and self.m3

    @property
    def dheyting(self) -> bool:
        return self.m1 and self.m2


def classify_map(phi: PosetMap) -> MapClass:
    """Pointwise morphism classification.

    m1: images of principal up-sets are principal up-sets of the target;
    m2 dually; m3: images of the minimal elements below a point are the
    minimal elements below its image.
    """
    x, y, f = phi.source, phi.target, phi.values
    order_ok = all(y.leq(f[i], f[j])
                   for i in range(x.size) for j in bits(x.up[i]))
    m1 = order_ok and all(phi.image_mask(x.up[i]) == y.up[f[i]]
                          for i in range(x.size))
    m2 = order_ok and all(phi.image_mask(x.down[i]) == y.down[f[i]]
                          for i in range(x.size))
    ymin = y.minimals()
    xmin = x.minimals()
    m3 = all(phi.image_mask(x.down[i] & xmin) == y.down[f[i]] & ymin
             for i in range(x.size))
    return MapClass(order_ok, m1, m2, m3)


_KIND_FLAGS = {
    "heyting": lambda c: c.heyting,
    "hplus": lambda c: c.hplus,
    "dh": lambda c: c.dheyting,
}


def enumerate_morphisms(x: FinPoset, y: FinPoset, kind: str = "hplus",
                        surjective_only: bool = False,
                        budget: int = MORPHISM_BUDGET) -> list[PosetMap]:
    """All maps of the requested kind, via pruned backtracking.

    Backtracking prunes on order preservation only; the M-conditions are
    not monotone under partial assignment and are checked post hoc.
    """
    return list(iter_morphisms(x, y, kind, surjective_only, budget))


def iter_morphisms(x: FinPoset, y: FinPoset, kind: str = "hplus",
                   surjective_only: bool = False,
                   budget: int = MORPHISM_BUDGET):
    if kind not in _KIND_FLAGS:
        raise BadParameter(f"unknown morphism kind {kind!r}")
    flag = _KIND_FLAGS[kind]
    n, m = x.size, y.size
    if surjective_only and m > n:
        return
    # assign along a linear extension so comparabilities point backwards
    order = sorted(range(n), key=lambda i: popcount(x.down[i]))
    pos = {e: k for k, e in enumerate(order)}
    values = [0] * n
    nodes = 0
    # every kind includes the principal-up-set condition, whose image
    # cannot grow; the down-set condition only binds for the dh kind
    up_x = [popcount(x.up[i]) for i in range(n)]
    up_y = [popcount(y.up[j]) for j in range(m)]
    down_bound = kind == "dh"
    down_x = [popcount(x.down[i]) for i in range(n)]
    down_y = [popcount(y.down[j]) for j in range(m)]

    def rec(k: int, image: int):
        nonlocal nodes
        if k == n:
            if surjective_only and image != y.all_mask:
                return
            phi = PosetMap(x, y, tuple(values))
            if flag(classify_map(phi)):
                yield phi
            return
        e = order[k]
        earlier = [d for d in bits(x.up[e] | x.down[e]) if pos[d] < k and d != e]
        for v in range(m):
            nodes += 1
            if nodes > budget:
                raise SizeError("morphism search budget exceeded")
            if up_y[v] > up_x[e]:
                continue
            if down_bound and down_y[v] > down_x[e]:
                continue
            ok = True
            for d in earlier:
                fd = values[d]
                if x.leq(d, e) and not y.leq(fd, v):
                    ok = False
                    break
                if x.leq(e, d) and not y.leq(v, fd):
                    ok = False
                    break
            if not ok:
                continue
            img2 = image | (1 << v)
            if surjective_only and popcount(y.all_mask & ~img2) > n - k - 1:
                continue
            values[e] = v
            yield from rec(k + 1, img2)

    yield from rec(0, 0)


def never_maps_onto(x: FinPoset, y: FinPoset,
                    budget: int = MORPHISM_BUDGET) -> bool:
    """True iff no surjective hplus-morphism x -> y exists."""
    for _ in iter_morphisms(x, y, "hplus", surjective_only=True,
                            budget=budget):
        return False
    return True


@dataclass(frozen=True)
class AlgebraClass:
    simple: bool
    rdp: bool
    boolean: bool


def classify_algebra(x: FinPoset) -> AlgebraClass:
    """Dual-side classification of Up(x)."""
    discrete = all(x.up[i] == 1 << i for i in range(x.size))
    return AlgebraClass(
        simple=is_connected(x),
        rdp=(x.minimals() | x.maximals()) == x.all_mask,
        boolean=discrete,
    )


def katrinak_arrow(alg: UpSetAlgebra, u: int, v: int) -> int:
    """The Heyting arrow recovered from the two pseudocomplements.

    Only valid over bases of height <= 1 (the regular case); the result
    coincides with the algebra's arrow table there.
    """
    if not classify_algebra(alg.base).rdp:
        raise NotRegular("base has an element that is neither minimal nor maximal")
    n, s, m, j = alg.neg, alg.dpc, alg.meet, alg.join
    left = n(n(j(n(u), n(n(v)))))
    right = j(j(j(s(j(u, n(u))), n(u)), v), n(v))
    return m(left, right)


def generate_subalgebra(alg, gens, signature: str = "hplus") -> set:
    """Closure of gens plus the bounds under the signature's operations."""
    ops = _SIGNATURE_OPS[signature]
    current = set(gens) | {alg.zero, alg.one}
    frontier = list(current)
    while frontier:
        nxt = []
        items = list(current)
        for name, arity in ops:
            fn = getattr(alg, name)
            if arity == 1:
                for a in frontier:
                    r = fn(a)
                    if r not in current:
                        current.add(r)
                        nxt.append(r)
            else:
                for a in frontier:
                    for b in items:
                        for r in (fn(a, b), fn(b, a)):
                            if r not in current:
                                current.add(r)
                                nxt.append(r)
        frontier = nxt
    return current


_SIGNATURE_OPS = {
    "heyting": [("meet", 2), ("join", 2), ("arrow", 2)],
    "hplus": [("meet", 2), ("join", 2), ("arrow", 2), ("dpc", 1)],
    "dheyting": [("meet", 2), ("join", 2), ("arrow", 2), ("coarrow", 2)],
    "dp": [("meet", 2), ("join", 2), ("neg", 1), ("dpc", 1)],
}


# -- congruences of double p-algebras (for the regularity check) ----------

_DP_OPS = (("meet", 2), ("join", 2), ("neg", 1), ("dpc", 1))


def _principal_congruence(alg, elements, index, seed_pairs):
    """Partition generated by seed_pairs, closed under the dp operations."""
    parent = list(range(len(elements)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    work = []

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri
            work.append((ri, rj))

    for a, b in seed_pairs:
        union(index[a], index[b])
    while work:
        i, j = work.pop()
        a, b = elements[i], elements[j]
        for name, arity in _DP_OPS:
            fn = getattr(alg, name)
            if arity == 1:
                union(index[fn(a)], index[fn(b)])
            else:
                for c in elements:
                    union(index[fn(a, c)], index[fn(b, c)])
    return tuple(find(i) for i in range(len(elements)))


def _congruence_classes(rep_vector):
    classes = {}
    for i, r in enumerate(rep_vector):
        classes.setdefault(r, []).append(i)
    return frozenset(frozenset(c) for c in classes.values())


def dp_congruences(alg, cap: int = 64) -> list[frozenset]:
    """All congruences of the double-p reduct, as sets of classes.

    Principal congruences are closed under pairwise join; sizes beyond
    the cap are refused since the closure is quadratic in the carrier.
    """
    elements = list(alg.elements)
    if len(elements) > cap:
        raise SizeError(f"congruence enumeration capped at {cap} elements")
    index = {e: i for i, e in enumerate(elements)}
    seen = set()
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            vec = _principal_congruence(alg, elements, index,
                                        [(elements[i], elements[j])])
            seen.add(_congruence_classes(vec))
    identity = frozenset(frozenset([i]) for i in range(len(elements)))
    seen.add(identity)
    # close under join: join = congruence generated by the union's pairs
    frontier = list(seen)
    while frontier:
        nxt = []
        for c1 in frontier:
            for c2 in list(seen):
                pairs = []
                for cls in (*c1, *c2):
                    members = sorted(cls)
                    pairs.extend((elements[members[0]], elements[m])
                                 for m in members[1:])
                vec = _principal_congruence(alg, elements, index, pairs)
                j = _congruence_classes(vec)
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(seen, key=lambda c: (len(c), sorted(map(sorted, c))))


@dataclass(frozen=True)
class VarletReport:
    regular: bool
    determined_by_pcs: bool
    height_at_most_one: bool
    distributive_identity: bool

    @property
    def all_agree(self) -> bool:
        return len({self.regular, self.determined_by_pcs,
                    self.height_at_most_one,
                    self.distributive_identity}) == 1


def varlet_report(alg, congruence_cap: int = 64) -> VarletReport:
    """The four regularity conditions, each computed independently.

    Works for any algebra exposing meet/join/neg/dpc over a finite
    element list (up-set algebras or explicit tables).
    """
    elements = list(alg.elements)

    cons = dp_congruences(alg, congruence_cap)
    regular = True
    class_sets = [set(c) for c in cons]
    for i in range(len(cons)):
        for j in range(i + 1, len(cons)):
            if class_sets[i] & class_sets[j]:
                regular = False
                break
        if not regular:
            break

    determined = True
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            if alg.neg(a) == alg.neg(b) and alg.dpc(a) == alg.dpc(b):
                determined = False
                break
        if not determined:
            break

    height_ok = _join_prime_poset_height(alg, elements) <= 1

    identity = True
    distributive = True
    for a in elements:
        for b in elements:
            if not alg.leq(alg.meet(alg.dpc(a), a),
                           alg.join(b, alg.neg(b))):
                identity = False
                break
            for c in elements:
                if alg.meet(a, alg.join(b, c)) != \
                        alg.join(alg.meet(a, b), alg.meet(a, c)):
                    distributive = False
                    break
            if not distributive:
                break
        if not identity or not distributive:
            break

    return VarletReport(regular, determined, height_ok,
                        distributive and identity)


def _join_prime_poset_height(alg, elements) -> int:
    """Height of the ordered set of join-prime elements.

    Principal filters of a finite lattice are exactly the filters, and a
    principal filter is prime iff its generator is join-prime; this is
    the prime-filter space without building filters explicitly.
    """
    primes = []
    for p in elements:
        if p == alg.zero:
            continue
        ok = True
        for x in elements:
            for y in elements:
                if alg.leq(p, alg.join(x, y)) and \
                        not alg.leq(p, x) and not alg.leq(p, y):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            primes.append(p)
    depth = {}
    for p in sorted(primes, key=lambda e: sum(alg.leq(q, e) for q in primes)):
        below = [q for q in primes if q != p and alg.leq(q, p)]
        depth[p] = 1 + max((depth[q] for q in below), default=-1)
    return max(depth.values(), default=0)
