"""Finite commutative integral residuated lattices as explicit tables."""

from dataclasses import dataclass, field

from .errors import AxiomError, BadParameter, NotACongruenceFilter
from .lattice import FinLattice
from .poset import FinPoset, bits, popcount


class CIRLTable:
    """Lattice plus commutative monoid and residual tables.

    The multiplicative unit is the lattice top (integrality).  Instances
    are expected to come from validate_cirl or from the constructors in
    this module, all of which check the laws.
    """

    __slots__ = ("lattice", "mul", "arrow")
    kind = "cirl"

    def __init__(self, lattice: FinLattice, mul, arrow):
        self.lattice = lattice
        self.mul = mul
        self.arrow = arrow

    @property
    def size(self) -> int:
        return self.lattice.size

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def one(self) -> int:
        return self.lattice.one

    @property
    def bottom(self) -> int:
        return self.lattice.zero

    def leq(self, a: int, b: int) -> bool:
        return self.lattice.leq(a, b)

    def meet(self, a: int, b: int) -> int:
        return self.lattice.meet[a][b]

    def join(self, a: int, b: int) -> int:
        return self.lattice.join[a][b]

    def mult(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def res(self, a: int, b: int) -> int:
        return self.arrow[a][b]

    def iff(self, a: int, b: int) -> int:
        return self.meet(self.meet(self.res(a, b), self.res(b, a)), self.one)

    def power(self, a: int, k: int) -> int:
        out = self.one
        for _ in range(k):
            out = self.mul[out][a]
        return out

    def potency(self) -> int:
        """Least n with x^(n+1) = x^n for all x."""
        if self.size == 1:
            return 0
        n = 1
        cur = list(range(self.size))
        while True:
            nxt = [self.mul[c][x] for x, c in enumerate(cur)]
            if nxt == cur:
                return n
            cur = nxt
            n += 1

    def idempotents(self) -> list[int]:
        return [x for x in range(self.size) if self.mul[x][x] == x]

    def __repr__(self):
        return f"CIRLTable(size={self.size})"


def validate_cirl(lattice: FinLattice, mul, arrow) -> CIRLTable:
    """Check every CIRL law, naming the first failure with a witness."""
    n = lattice.size
    one = lattice.one
    leq = lattice.leq
    for x in range(n):
        if mul[x][one] != x or mul[one][x] != x:
            raise AxiomError(f"unit law fails at x={x}")
        if not leq(x, one):
            raise AxiomError(f"integrality fails at x={x}")
    for x in range(n):
        for y in range(n):
            if mul[x][y] != mul[y][x]:
                raise AxiomError(f"commutativity fails at ({x},{y})")
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if mul[mul[x][y]][z] != mul[x][mul[y][z]]:
                    raise AxiomError(f"associativity fails at ({x},{y},{z})")
                if leq(y, z) and not leq(mul[x][y], mul[x][z]):
                    raise AxiomError(f"monotonicity fails at ({x},{y},{z})")
                if leq(mul[x][z], y) != leq(z, arrow[x][y]):
                    raise AxiomError(f"residuation fails at ({x},{y},{z})")
    return CIRLTable(lattice, mul, arrow)


def derive_arrow(lattice: FinLattice, mul):
    """Residual table from a multiplication, or None where no max exists."""
    n = lattice.size
    arrow = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            cands = 0
            for z in range(n):
                if lattice.leq(mul[x][z], y):
                    cands |= 1 << z
            best = None
            for z in bits(cands):
                if not (cands & ~lattice.poset.down[z]):
                    best = z
                    break
            arrow[x][y] = best
    return arrow


def wajsberg_hoop(n: int) -> CIRLTable:
    """The n-element chain of powers of its coatom, with clipped exponents.

    Element i is the i-th power of the coatom, so 0 is the unit and n-1
    the bottom; exponents add and clip at n-1, and the residual
    subtracts and clips at 0.
    """
    if n < 2:
        raise BadParameter("hoop needs at least two elements")
    rows = []
    for i in range(n):
        row = 0
        for j in range(n):
            if j <= i:
                row |= 1 << j
        rows.append(row)
    lat = FinLattice(FinPoset(rows))
    mul = [[min(n - 1, a + b) for b in range(n)] for a in range(n)]
    arrow = [[max(0, b - a) for b in range(n)] for a in range(n)]
    return validate_cirl(lat, mul, arrow)


def congruence_filters(alg: CIRLTable) -> list[int]:
    """All masks of lattice filters containing 1 and closed under squaring.

    Finite lattice filters are principal, so these are the up-sets of
    the square-idempotent elements; they biject with the congruences.
    """
    out = []
    for g in range(alg.size):
        f = alg.lattice.poset.up[g]
        if all(alg.leq(g, alg.mul[x][x]) for x in bits(f)):
            out.append(f)
    return sorted(out, key=popcount)


@dataclass(frozen=True)
class MonolithInfo:
    is_si: bool
    coatom: int | None = None
    mu_filter: int | None = None
    mu_bottom: int | None = None
    depth: int | None = None


def monolith_info(alg: CIRLTable) -> MonolithInfo:
    """SI detection plus the monolith filter and its power depth."""
    one = alg.one
    coatoms = [x for x in range(alg.size)
               if x != one and popcount(alg.lattice.poset.up[x]) == 2]
    strictly_negative = [x for x in range(alg.size) if x != one]
    top_neg = [c for c in coatoms
               if all(alg.leq(x, c) for x in strictly_negative)]
    if len(top_neg) != 1:
        return MonolithInfo(is_si=False)
    coatom = top_neg[0]
    filters = congruence_filters(alg)
    nontrivial = [f for f in filters if f != 1 << one]
    if not nontrivial:
        return MonolithInfo(is_si=False)
    mu = min(nontrivial, key=popcount)
    if any(mu & ~f for f in nontrivial):
        # some nontrivial congruence does not contain the candidate monolith
        return MonolithInfo(is_si=False)
    mu_bottom = next(x for x in bits(mu)
                     if not (mu & ~alg.lattice.poset.up[x]))
    depth = 0
    for a in bits(mu):
        if a == one:
            continue
        # least n with a^(n+1) = a^n; the loop counts strict power drops
        k, cur = 1, a
        while alg.mul[cur][a] != cur:
            cur = alg.mul[cur][a]
            k += 1
        depth = max(depth, k)
    return MonolithInfo(True, coatom, mu, mu_bottom, depth)


def truncated_product(a: CIRLTable, b: CIRLTable,
                      c: int | None = None, q: int | None = None) -> CIRLTable:
    """Product of the cones below c and q, plus a fresh shared top.

    c and q default to the unique coatoms and must be strictly negative.
    """
    if c is None:
        info = monolith_info(a)
        if not info.is_si:
            raise BadParameter("left factor is not SI; pass c explicitly")
        c = info.coatom
    if q is None:
        info = monolith_info(b)
        if not info.is_si:
            raise BadParameter("right factor is not SI; pass q explicitly")
        q = info.coatom
    if c == a.one or q == b.one:
        raise BadParameter("c and q must be strictly negative")
    cone_a = list(bits(a.lattice.poset.down[c]))
    cone_b = list(bits(b.lattice.poset.down[q]))
    elems = [(x, y) for x in cone_a for y in cone_b]
    elems.append((a.one, b.one))
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)

    def pair_leq(e, f):
        return a.leq(e[0], f[0]) and b.leq(e[1], f[1])

    rows = []
    for e in elems:
        row = 0
        for j, f in enumerate(elems):
            if pair_leq(e, f):
                row |= 1 << j
        rows.append(row)
    lat = FinLattice(FinPoset(rows))

    def clip(e):
        # products of cone elements stay in the cone, but guard anyway
        x, y = e
        return (a.meet(x, c), b.meet(y, q)) if e != (a.one, b.one) else e

    mul = [[0] * n for _ in range(n)]
    arrow = [[0] * n for _ in range(n)]
    for i, (x, u) in enumerate(elems):
        for j, (y, v) in enumerate(elems):
            prod = (a.mul[x][y], b.mul[u][v])
            if prod != (a.one, b.one):
                prod = clip(prod)
            mul[i][j] = index[prod]
            xley = a.leq(x, y)
            ulev = b.leq(u, v)
            if not xley and ulev:
                res = (a.meet(a.res(x, y), c), q)
            elif xley and not ulev:
                res = (c, b.meet(b.res(u, v), q))
            elif not xley and not ulev:
                res = (a.meet(a.res(x, y), c), b.meet(b.res(u, v), q))
            else:
                res = (a.one, b.one)
            arrow[i][j] = index[res]
    return validate_cirl(lat, mul, arrow)


@dataclass
class Quotient:
    algebra: CIRLTable
    projection: list[int] = field(default_factory=list)


def quotient(alg: CIRLTable, filter_mask: int) -> Quotient:
    """Quotient by the congruence of a filter, with the projection map."""
    if filter_mask not in congruence_filters(alg):
        raise NotACongruenceFilter(f"mask {filter_mask:b}")

    def equiv(x, y):
        return bool(filter_mask & (1 << alg.iff(x, y)))

    reps = []
    proj = [None] * alg.size
    for x in range(alg.size):
        for k, r in enumerate(reps):
            if equiv(x, r):
                proj[x] = k
                break
        else:
            proj[x] = len(reps)
            reps.append(x)
    n = len(reps)
    rows = []
    for r in reps:
        row = 0
        for k, s in enumerate(reps):
            if equiv(alg.join(r, s), s):
                row |= 1 << k
        rows.append(row)
    lat = FinLattice(FinPoset(rows))
    mul = [[proj[alg.mul[reps[i]][reps[j]]] for j in range(n)]
           for i in range(n)]
    arrow = [[proj[alg.res(reps[i], reps[j])] for j in range(n)]
             for i in range(n)]
    return Quotient(validate_cirl(lat, mul, arrow), proj)


def find_embedding(a: CIRLTable, b: CIRLTable):
    """Injective operation-preserving map a -> b, or None.

    Backtracks over elements in lattice-rank order so that every op
    instance is checked as soon as its arguments are placed.
    """
    from .diagram import CIRL, search_embedding

    return search_embedding(a, b, CIRL)


def is_isomorphic(a: CIRLTable, b: CIRLTable) -> bool:
    if a.size != b.size:
        return False
    if sorted(map(popcount, a.lattice.poset.down)) != \
            sorted(map(popcount, b.lattice.poset.down)):
        return False
    if len(a.idempotents()) != len(b.idempotents()):
        return False
    return find_embedding(a, b) is not None
