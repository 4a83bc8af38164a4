"""Term-diagrams: algebras described by one big conjunction.

The diagram of a finite algebra has one variable per element and one
conjunct per operation-table entry; evaluating it in another algebra
locates copies of the source.  Everything here is generic over the
three signatures via a symbol-to-method map, so table algebras and
up-set algebras are handled uniformly.
"""

import itertools
from dataclasses import dataclass, field

from .errors import BadParameter, NotSI, SignatureMismatch, SizeError
from .lattice import FinLattice
from .poset import FinPoset, bits

ASSIGNMENT_CAP = 2_000_000


@dataclass(frozen=True)
class Signature:
    """Which operations a diagram mentions and how iff/delta unfold."""

    tag: str
    binary: tuple[tuple[str, str], ...]   # (symbol, method name)
    unary: tuple[tuple[str, str], ...]
    consts: tuple[str, ...]               # attribute names

    def supports(self, alg) -> bool:
        for _, meth in self.binary + self.unary:
            if not callable(getattr(alg, meth, None)):
                return False
        return all(hasattr(alg, c) for c in self.consts)

    def require(self, alg):
        if not self.supports(alg):
            raise SignatureMismatch(
                f"algebra {alg!r} does not carry the {self.tag} operations")

    def iff(self, alg, x, y):
        if self.tag == "cirl":
            fwd = alg.res(x, y)
            bwd = alg.res(y, x)
            return alg.meet(alg.meet(fwd, bwd), alg.one)
        fwd = alg.arrow(x, y)
        bwd = alg.arrow(y, x)
        return alg.meet(fwd, bwd)

    def delta(self, alg, x):
        if self.tag == "cirl":
            return alg.mult(x, x)
        if self.tag == "hplus":
            return alg.arrow(alg.dpc(x), alg.zero)
        return alg.arrow(alg.coarrow(alg.one, x), alg.zero)


CIRL = Signature(
    "cirl",
    (("meet", "meet"), ("join", "join"), ("mul", "mult"), ("arrow", "res")),
    (),
    ("one",),
)
HPLUS = Signature(
    "hplus",
    (("meet", "meet"), ("join", "join"), ("arrow", "arrow")),
    (("dpc", "dpc"),),
    ("zero", "one"),
)
DHEYTING = Signature(
    "dheyting",
    (("meet", "meet"), ("join", "join"), ("arrow", "arrow"),
     ("coarrow", "coarrow")),
    (),
    ("zero", "one"),
)

SIGNATURES = {s.tag: s for s in (CIRL, HPLUS, DHEYTING)}


def get_signature(sig) -> Signature:
    if isinstance(sig, Signature):
        return sig
    try:
        return SIGNATURES[sig]
    except KeyError:
        raise BadParameter(f"unknown signature {sig!r}") from None


@dataclass(frozen=True)
class TermDiagram:
    source: object
    signature: Signature
    variables: tuple          # source elements, one variable each
    conjuncts: tuple          # (method, arg positions, result position)
    const_conjuncts: tuple    # (const attr, position)

    @property
    def var_count(self) -> int:
        return len(self.variables)

    def position(self, element) -> int:
        return self.variables.index(element)


@dataclass(frozen=True)
class Assignment:
    target: object
    values: tuple


def build_diagram(a, sig) -> TermDiagram:
    sig = get_signature(sig)
    sig.require(a)
    elements = tuple(a.elements)
    pos = {e: i for i, e in enumerate(elements)}
    conjuncts = []
    for _, meth in sig.binary:
        fn = getattr(a, meth)
        for x in elements:
            for y in elements:
                conjuncts.append((meth, (pos[x], pos[y]), pos[fn(x, y)]))
    for _, meth in sig.unary:
        fn = getattr(a, meth)
        for x in elements:
            conjuncts.append((meth, (pos[x],), pos[fn(x)]))
    const_conjuncts = tuple((c, pos[getattr(a, c)]) for c in sig.consts)
    return TermDiagram(a, sig, elements, tuple(conjuncts), const_conjuncts)


def eval_diagram(d: TermDiagram, asg: Assignment):
    """Fold the conjuncts under the target's meet, with bottom early-exit."""
    sig = d.signature
    b = asg.target
    sig.require(b)
    if len(asg.values) != d.var_count:
        raise BadParameter("assignment arity mismatch")
    vals = asg.values
    bottom = getattr(b, "bottom", None)
    out = b.one
    for cname, p in d.const_conjuncts:
        out = b.meet(out, sig.iff(b, vals[p], getattr(b, cname)))
        if out == bottom:
            return out
    for meth, args, res in d.conjuncts:
        fn = getattr(b, meth)
        val = fn(*[vals[i] for i in args])
        out = b.meet(out, sig.iff(b, vals[res], val))
        if out == bottom:
            return out
    return out


# -- SI structure, generically --------------------------------------------


@dataclass(frozen=True)
class SiStructure:
    is_si: bool
    mu_bottom: object = None
    simple: bool = False


def si_structure(alg, sig) -> SiStructure:
    """SI detection and the least element of the monolith class of 1.

    For the lattice-based signatures the congruence filters are the
    principal filters of delta-fixed elements; the monolith exists iff
    the join of the fixed points below 1 stays below 1.
    """
    sig = get_signature(sig)
    sig.require(alg)
    if sig.tag == "cirl":
        from .residuated import monolith_info

        info = monolith_info(alg)
        if not info.is_si:
            return SiStructure(False)
        return SiStructure(True, info.mu_bottom,
                           simple=(alg.bottom == info.mu_bottom))
    elements = list(alg.elements)
    if len(elements) < 2:
        return SiStructure(False)
    # zero is always delta-fixed; the monolith generator is the largest
    # fixed point below 1, which exists iff the join of them stays below 1
    m = alg.zero
    for x in elements:
        if x != alg.one and sig.delta(alg, x) == x:
            m = alg.join(m, x)
    if m == alg.one:
        return SiStructure(False)
    return SiStructure(True, m, simple=(m == alg.zero))


def congruence_filters_generic(alg, sig) -> list[list]:
    """Filters of delta-fixed generators, as element lists."""
    sig = get_signature(sig)
    out = []
    for g in alg.elements:
        if sig.delta(alg, g) == g:
            out.append([x for x in alg.elements if alg.leq(g, x)])
    out.sort(key=len)
    return out


class TableAlgebra:
    """A finite algebra given by explicit operation tables."""

    def __init__(self, kind: str, size: int, tables: dict, consts: dict):
        self.kind = kind
        self.size = size
        self.tables = tables
        self.consts = consts

    @property
    def elements(self):
        return range(self.size)

    def __getattr__(self, name):
        tables = object.__getattribute__(self, "tables")
        if name in tables:
            t = tables[name]
            if t and isinstance(t[0], list):
                return lambda a, b: t[a][b]
            return lambda a: t[a]
        consts = object.__getattribute__(self, "consts")
        if name in consts:
            return consts[name]
        raise AttributeError(name)

    @property
    def bottom(self):
        return self.consts.get("zero")

    def leq(self, a, b):
        return self.tables["meet"][a][b] == a

    def __repr__(self):
        return f"TableAlgebra({self.kind}, size={self.size})"


_METHOD_TO_TABLE = {"meet": "meet", "join": "join", "arrow": "arrow",
                    "coarrow": "coarrow", "dpc": "dpc", "neg": "neg",
                    "mult": "mul", "res": "arrow"}


def quotient_generic(alg, sig, filter_elems) -> tuple[TableAlgebra, dict]:
    """Quotient by the congruence of a delta-closed filter."""
    sig = get_signature(sig)
    felems = set(filter_elems)

    def equiv(x, y):
        return sig.iff(alg, x, y) in felems

    elements = list(alg.elements)
    reps = []
    proj = {}
    for x in elements:
        for k, r in enumerate(reps):
            if equiv(x, r):
                proj[x] = k
                break
        else:
            proj[x] = len(reps)
            reps.append(x)
    n = len(reps)
    tables = {}
    for _, meth in sig.binary:
        fn = getattr(alg, meth)
        tables[_METHOD_TO_TABLE[meth]] = [
            [proj[fn(reps[i], reps[j])] for j in range(n)] for i in range(n)]
    for _, meth in sig.unary:
        fn = getattr(alg, meth)
        tables[_METHOD_TO_TABLE[meth]] = [proj[fn(reps[i])] for i in range(n)]
    consts = {c: proj[getattr(alg, c)] for c in sig.consts}
    return TableAlgebra(sig.tag, n, tables, consts), proj


# -- embedding searches ----------------------------------------------------


def _rank_order(alg):
    elements = list(alg.elements)
    return sorted(elements, key=lambda e: sum(alg.leq(f, e) for f in elements))


def search_hom(a, b, sig, require_injective: bool,
               forbid=None):
    """Backtracking search for an operation-preserving map a -> b.

    Elements are placed in lattice-rank order so every table entry is
    validated as soon as its arguments and value are all placed.
    ``forbid`` is an optional (element, value) pair to exclude, used for
    the diagram-style separation condition.
    """
    sig = get_signature(sig)
    sig.require(a)
    sig.require(b)
    a_elems = _rank_order(a)
    pos = {e: i for i, e in enumerate(a_elems)}
    b_elems = list(b.elements)
    n = len(a_elems)
    forced = {}
    for c in sig.consts:
        e = getattr(a, c)
        v = getattr(b, c)
        if e in forced and forced[e] != v:
            return None
        forced[e] = v
    ops = [(getattr(a, meth), getattr(b, meth), ar)
           for meth, ar in
           [(m, 2) for _, m in sig.binary] + [(m, 1) for _, m in sig.unary]]
    assignment = {}

    def consistent(e):
        fe = assignment[e]
        for f, ff in assignment.items():
            if f == e:
                continue
            if a.leq(e, f) and not b.leq(fe, ff):
                return False
            if a.leq(f, e) and not b.leq(ff, fe):
                return False
        placed = list(assignment)
        for fa, fb, ar in ops:
            if ar == 1:
                for x in placed:
                    r = fa(x)
                    if r in assignment and e in (x, r):
                        if fb(assignment[x]) != assignment[r]:
                            return False
            else:
                for x in placed:
                    for y in placed:
                        r = fa(x, y)
                        if r in assignment and e in (x, y, r):
                            if fb(assignment[x], assignment[y]) != assignment[r]:
                                return False
        return True

    def rec(k: int, used: set):
        if k == n:
            return dict(assignment)
        e = a_elems[k]
        if e in forced:
            cands = [forced[e]]
        else:
            cands = b_elems
        for v in cands:
            if require_injective and v in used:
                continue
            if forbid is not None and (e, v) == forbid:
                continue
            assignment[e] = v
            if consistent(e):
                got = rec(k + 1, used | {v})
                if got is not None:
                    return got
            del assignment[e]
        return None

    return rec(0, set())


def search_embedding(a, b, sig):
    """Injective operation-preserving map, or None."""
    if len(list(a.elements)) > len(list(b.elements)):
        return None
    return search_hom(a, b, sig, require_injective=True)


def embedding_by_diagram(a, b, sig):
    """Assignment making the diagram of a evaluate to 1 while keeping the
    monolith-bottom variable away from 1, or None.

    Every conjunct must individually reach 1, so the search is a
    homomorphism search with one value constraint.
    """
    sig = get_signature(sig)
    info = si_structure(a, sig)
    if not info.is_si:
        raise NotSI("diagram criterion needs an SI source")
    hom = search_hom(a, b, sig, require_injective=False,
                     forbid=(info.mu_bottom, b.one))
    if hom is None:
        return None
    d = build_diagram(a, sig)
    values = tuple(hom[e] for e in d.variables)
    asg = Assignment(b, values)
    if eval_diagram(d, asg) != b.one:
        raise SignatureMismatch("diagram value is not 1 on a homomorphism")
    return asg


def delta_power_witness(a, b, i: int, sig, candidates=(),
                        cap: int = ASSIGNMENT_CAP):
    """Assignment with the i-fold delta of the diagram not below the
    monolith-bottom variable, or None after exhaustive search."""
    sig = get_signature(sig)
    info = si_structure(a, sig)
    if not info.is_si:
        raise NotSI("witness needs an SI source")
    d = build_diagram(a, sig)
    mu_pos = d.position(info.mu_bottom)

    def check(values):
        asg = Assignment(b, tuple(values))
        val = eval_diagram(d, asg)
        for _ in range(i):
            val = sig.delta(b, val)
        if not b.leq(val, values[mu_pos]):
            return asg
        return None

    for cand in candidates:
        got = check(cand)
        if got is not None:
            return got
    b_elems = list(b.elements)
    total = len(b_elems) ** d.var_count
    if total > cap:
        raise SizeError(f"{total} assignments exceed cap {cap}")
    for values in itertools.product(b_elems, repeat=d.var_count):
        got = check(values)
        if got is not None:
            return got
    return None


def in_hs(a, b, sig) -> bool:
    """True iff a embeds into some quotient of b."""
    sig = get_signature(sig)
    a_n = len(list(a.elements))
    if sig.tag == "cirl":
        from .residuated import congruence_filters, quotient

        for f in congruence_filters(b):
            q = quotient(b, f).algebra
            if a_n <= q.size and search_embedding(a, q, sig) is not None:
                return True
        return False
    for f in congruence_filters_generic(b, sig):
        q, _ = quotient_generic(b, sig, f)
        if a_n <= q.size and search_embedding(a, q, sig) is not None:
            return True
    return False


# -- the witness suite -----------------------------------------------------


@dataclass
class WitnessEntry:
    i: int
    b_size: int | None
    delta_witness_found: bool
    excluded: bool | None
    detail: dict = field(default_factory=dict)


@dataclass
class WitnessReport:
    tag: str
    a_size: int
    exempt: bool
    note: str
    entries: list[WitnessEntry] = field(default_factory=list)


def witness_suite(a, i_max: int, sig) -> WitnessReport:
    """For each i <= i_max build the canonical counterexample algebra and
    run both halves of the non-splitting check against it.

    The report demonstrates the constructions at the requested indices;
    it does not (and cannot) quantify over all i.
    """
    sig = get_signature(sig)
    if sig.tag == "cirl":
        return _witness_suite_cirl(a, i_max, sig)
    return _witness_suite_order(a, i_max, sig)


def _witness_suite_cirl(a, i_max, sig) -> WitnessReport:
    from .expansion import expand_to_depth
    from .residuated import monolith_info, truncated_product, wajsberg_hoop

    info = monolith_info(a)
    if not info.is_si:
        raise NotSI("witness suite needs an SI algebra")
    small = a.size < 3
    note = ("two-element case: only the tuple computation is checked; "
            "excluding it from generated classes needs the infinite hoop"
            if small else "")
    report = WitnessReport("cirl", a.size, exempt=False, note=note)
    n = info.depth
    for i in range(i_max + 1):
        need = max(n + 1, 2 ** i + 1)
        exp = expand_to_depth(a, need)
        e, m = exp.algebra, exp.depth
        e_info = monolith_info(e)
        p = _first_prime_at_least(e.size)
        hoop = wajsberg_hoop(p + 1)
        big = truncated_product(e, hoop)
        w = _canonical_tuple(a, e, exp.embedding, e_info, hoop, big)
        witness = delta_power_witness(a, big, i, sig, candidates=[w])
        excluded = None if small else not in_hs(a, big, sig)
        report.entries.append(WitnessEntry(
            i=i, b_size=big.size,
            delta_witness_found=witness is not None,
            excluded=excluded,
            detail={"expansion_size": e.size, "expansion_depth": m,
                    "prime": p, "canonical_tuple": list(w)},
        ))
    return report


def _canonical_tuple(a, e, embedding, e_info, hoop, big):
    """The tuple sending 1 to (1,1) and every other element x to (x, q)."""
    pair_of = _pair_index(e, hoop, big)
    q = 1  # coatom of the hoop is its first power
    values = []
    for x in a.elements:
        if x == a.one:
            values.append(pair_of[(e.one, hoop.one)])
        else:
            values.append(pair_of[(embedding[x], q)])
    return tuple(values)


def _pair_index(e, hoop, big):
    """Recover the pair labelling of a truncated product's elements."""
    pairs = {}
    k = 0
    e_info_coatom = None
    from .residuated import monolith_info

    e_info_coatom = monolith_info(e).coatom
    q = monolith_info(hoop).coatom
    cone_e = [x for x in range(e.size) if e.leq(x, e_info_coatom)]
    cone_h = [y for y in range(hoop.size) if hoop.leq(y, q)]
    for x in cone_e:
        for y in cone_h:
            pairs[(x, y)] = k
            k += 1
    pairs[(e.one, hoop.one)] = k
    assert k + 1 == big.size
    return pairs


def _first_prime_at_least(n: int) -> int:
    m = max(n, 2)
    while True:
        if all(m % d for d in range(2, int(m ** 0.5) + 1)):
            return m
        m += 1


def _witness_suite_order(a, i_max, sig) -> WitnessReport:
    from .duality import UpSetAlgebra
    from .hplus_witness import (build_witness_algebra, diagram_final_check,
                                fence_for_target, never_maps_onto_check)

    if not isinstance(a, UpSetAlgebra):
        a = _as_up_set_algebra(a)
    if a.size <= 3:
        return WitnessReport(sig.tag, a.size, exempt=True,
                             note="two- and three-element algebras split; "
                                  "suite skipped")
    x = double_point(a.base)
    fence = fence_for_target(x)
    report = WitnessReport(sig.tag, a.size, exempt=False, note="")
    for i in range(i_max + 1):
        w = build_witness_algebra(x, fence, i)
        value = diagram_final_check(w, sig.tag)
        not_onto = never_maps_onto_check(x, fence, i + 2)
        carrier = w.carrier.size
        report.entries.append(WitnessEntry(
            i=i,
            b_size=len(w.algebra.elements) if carrier <= 16 else None,
            delta_witness_found=value != 0,
            excluded=not_onto,
            detail={"carrier_size": carrier, "fence_case": fence.case},
        ))
    return report


def _as_up_set_algebra(alg):
    """Rebuild a table algebra as the up-set algebra of its dual.

    Any finite algebra on a distributive lattice is isomorphic to one of
    these, so only the carrier representation changes.
    """
    from .duality import dual_poset, up_set_algebra

    rows = []
    for x in alg.elements:
        row = 0
        for y in alg.elements:
            if alg.leq(x, y):
                row |= 1 << y
        rows.append(row)
    lat = FinLattice(FinPoset(rows))
    base, _ = dual_poset(lat)
    rebuilt = up_set_algebra(base)
    if rebuilt.size != alg.size:
        raise BadParameter("carrier is not the up-set lattice of its dual")
    return rebuilt


def double_point(p: FinPoset):
    """Choose a minimal bot lying below a maximal top."""
    from .poset import DoublePointedPoset

    mins = list(bits(p.minimals()))
    for b in mins:
        above = p.up[b] & p.maximals()
        for t in bits(above):
            if t != b:
                return DoublePointedPoset(p, b, t)
    raise BadParameter("poset has no comparable (bot, top) pair")
