"""Depth-doubling expansion of a commutative integral residuated lattice.

A new element d_a is inserted between c*a and a for every a where those
differ; the resulting ordered monoid is completed to a residuated
lattice through the Galois closure of a nuclear relation.
"""

from dataclasses import dataclass

from .errors import AxiomError, BadParameter, NotSI
from .lattice import FinLattice
from .poset import FinPoset, bits
from .residuated import CIRLTable, monolith_info, validate_cirl


class ExpandedMonoid:
    """The ordered commutative monoid on A plus the inserted elements.

    Elements 0..|A|-1 are the base algebra's; the rest are the inserted
    d_a in ascending order of a.
    """

    __slots__ = ("base", "c", "a0", "d_index", "base_of", "size",
                 "le", "mul", "one", "bottom")

    def __init__(self, base: CIRLTable, c: int):
        n = base.size
        a0 = [a for a in range(n) if base.mul[c][a] != a]
        self.base = base
        self.c = c
        self.a0 = a0
        self.d_index = {a: n + k for k, a in enumerate(a0)}
        self.base_of = list(range(n)) + a0
        self.size = n + len(a0)
        self._build_order()
        self._build_mul()
        self.one = base.one
        full = (1 << self.size) - 1
        self.bottom = next(i for i in range(self.size) if self.le[i] == full)
        self._check_pomonoid()

    def _build_order(self):
        base, c = self.base, self.c
        n = base.size
        rows = []
        for x in range(self.size):
            row = 0
            xd = x >= n
            xa = self.base_of[x]
            for y in range(self.size):
                yd = y >= n
                ya = self.base_of[y]
                if not xd and not yd:
                    ok = base.leq(xa, ya)
                elif xd and not yd:
                    ok = base.leq(xa, ya)
                elif not xd and yd:
                    ok = base.leq(xa, base.mul[c][ya])
                else:
                    ok = base.leq(xa, ya)
                if ok:
                    row |= 1 << y
            rows.append(row)
        self.le = rows

    def _build_mul(self):
        base, c = self.base, self.c
        n = base.size
        tab = [[0] * self.size for _ in range(self.size)]
        for x in range(self.size):
            for y in range(x, self.size):
                xd, yd = x >= n, y >= n
                xa, ya = self.base_of[x], self.base_of[y]
                if not xd and not yd:
                    v = base.mul[xa][ya]
                elif xd and yd:
                    v = base.mul[base.mul[c][xa]][ya]
                else:
                    prod = base.mul[xa][ya]
                    if base.mul[c][prod] != prod:
                        v = self.d_index[prod]
                    else:
                        v = prod
                tab[x][y] = tab[y][x] = v
        self.mul = tab

    def _check_pomonoid(self):
        le, mul, n = self.le, self.mul, self.size
        for i in range(n):
            if not le[i] & (1 << i):
                raise AxiomError("order not reflexive")
            for j in bits(le[i]):
                if i != j and le[j] & (1 << i):
                    raise AxiomError("order not antisymmetric")
                if le[j] & ~le[i]:
                    raise AxiomError("order not transitive")
        one = self.base.one
        for x in range(n):
            if mul[x][one] != x:
                raise AxiomError("unit law fails in expansion monoid")
            if not le[x] & (1 << one):
                raise AxiomError("expansion monoid not integral")
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if mul[mul[x][y]][z] != mul[x][mul[y][z]]:
                        raise AxiomError(
                            f"associativity fails at ({x},{y},{z})")
                    if le[y] & (1 << z) and not le[mul[x][y]] & (1 << mul[x][z]):
                        raise AxiomError(
                            f"monotonicity fails at ({x},{y},{z})")

    def leq(self, x: int, y: int) -> bool:
        return bool(self.le[x] & (1 << y))

    @property
    def d(self) -> int:
        return self.d_index[self.base.one]

    def poset(self) -> FinPoset:
        return FinPoset(self.le)


class NuclearFrame:
    """The pair set W = P x A with x N (u,s) iff u*x <= s.

    Basic closed sets are materialised once; the Galois closure of any
    subset is then the meet of the basic sets containing it.
    """

    __slots__ = ("monoid", "pairs", "basic")

    def __init__(self, monoid: ExpandedMonoid):
        self.monoid = monoid
        base_n = monoid.base.size
        pairs = [(u, s) for u in range(monoid.size) for s in range(base_n)]
        basic = []
        for u, s in pairs:
            m = 0
            for x in range(monoid.size):
                if monoid.leq(monoid.mul[u][x], s):
                    m |= 1 << x
            basic.append(m)
        self.pairs = pairs
        self.basic = basic


def build_expansion_monoid(base: CIRLTable, c: int | None = None) -> ExpandedMonoid:
    if c is None:
        info = monolith_info(base)
        if not info.is_si:
            raise BadParameter("base is not SI; pass c explicitly")
        c = info.coatom
    if c == base.one:
        raise BadParameter("c must be strictly negative")
    return ExpandedMonoid(base, c)


def gamma_closure(frame: NuclearFrame, z: int) -> int:
    """Intersection of the basic closed sets containing z."""
    out = (1 << frame.monoid.size) - 1
    for m in frame.basic:
        if not (z & ~m):
            out &= m
    if z & ~out:
        raise AxiomError("closure is not extensive")
    return out


@dataclass
class LpResult:
    algebra: CIRLTable
    closed_sets: list[int]
    embedding: list[int]
    d_element: int


def lp_algebra(frame: NuclearFrame) -> LpResult:
    """The residuated lattice of closed subsets of the monoid.

    Candidates come from the canonical form (a down-set of a base
    element joined with a down-set of d times a base element) and are
    verified closed; meet is intersection and the remaining operations
    come from the closure.
    """
    mon = frame.monoid
    base = mon.base
    d = mon.d

    def down(x):
        out = 0
        for y in range(mon.size):
            if mon.leq(y, x):
                out |= 1 << y
        return out

    cands = set()
    for a in range(base.size):
        for b in range(base.size):
            cands.add(down(a) | down(mon.mul[d][b]))
    closed = sorted(m for m in cands if gamma_closure(frame, m) == m)
    index = {m: i for i, m in enumerate(closed)}
    n = len(closed)

    rows = []
    for m in closed:
        row = 0
        for j, other in enumerate(closed):
            if not (m & ~other):
                row |= 1 << j
        rows.append(row)
    lat = FinLattice(FinPoset(rows))
    for i, m in enumerate(closed):
        for j, other in enumerate(closed):
            expect = index.get(m & other)
            if expect is None or lat.meet[i][j] != expect:
                raise AxiomError("meet of closed sets is not intersection")

    mul = [[0] * n for _ in range(n)]
    arrow = [[0] * n for _ in range(n)]
    for i, mi in enumerate(closed):
        for j, mj in enumerate(closed):
            prod = 0
            for x in bits(mi):
                for y in bits(mj):
                    prod |= 1 << mon.mul[x][y]
            mul[i][j] = index[gamma_closure(frame, prod)]
            res = 0
            for z in range(mon.size):
                if all((mj >> mon.mul[z][x]) & 1 for x in bits(mi)):
                    res |= 1 << z
            k = index.get(res)
            if k is None:
                raise AxiomError("residual of closed sets is not closed")
            arrow[i][j] = k
    alg = validate_cirl(lat, mul, arrow)
    if closed[alg.one] != gamma_closure(frame, 1 << base.one):
        raise AxiomError("unit of the closure algebra is not gamma(1)")

    embedding = [index[down(a)] for a in range(base.size)]
    return LpResult(alg, closed, embedding, index[down(d)])


@dataclass
class ExpansionResult:
    algebra: CIRLTable
    embedding: list[int]
    rounds: int
    depth: int


def expand_once(base: CIRLTable, c: int | None = None) -> LpResult:
    return lp_algebra(NuclearFrame(build_expansion_monoid(base, c)))


def expand_to_depth(base: CIRLTable, k: int) -> ExpansionResult:
    """Iterate the expansion until the monolith depth reaches k.

    Each round is checked against its contract: the result is SI, its
    depth at least doubles, the monolith restricts to the base's, and
    the quotient by the monolith is isomorphic to the base's.
    """
    info = monolith_info(base)
    if not info.is_si:
        raise NotSI("expansion target must be SI")
    alg = base
    emb = list(range(base.size))
    rounds = 0
    depth = info.depth
    while depth < k:
        prev, prev_info = alg, monolith_info(alg)
        step = expand_once(alg)
        alg = step.algebra
        emb = [step.embedding[e] for e in emb]
        rounds += 1
        info = monolith_info(alg)
        if not info.is_si:
            raise AxiomError("expansion lost subdirect irreducibility")
        if info.depth < 2 * prev_info.depth:
            raise AxiomError("expansion did not double the monolith depth")
        _check_monolith_restricts(prev, step, info)
        depth = info.depth
    return ExpansionResult(alg, emb, rounds, depth)


def _check_monolith_restricts(prev: CIRLTable, step: LpResult,
                              info) -> None:
    """Monolith filter of the expansion meets the base in the base's."""
    from .residuated import is_isomorphic, quotient

    prev_info = monolith_info(prev)
    restricted = sorted(e for e in range(prev.size)
                        if info.mu_filter & (1 << step.embedding[e]))
    expected = sorted(bits(prev_info.mu_filter))
    if restricted != expected:
        raise AxiomError("monolith does not restrict to the base monolith")
    q_new = quotient(step.algebra, info.mu_filter).algebra
    q_old = quotient(prev, prev_info.mu_filter).algebra
    if not is_isomorphic(q_new, q_old):
        raise AxiomError("quotient by the monolith changed under expansion")
