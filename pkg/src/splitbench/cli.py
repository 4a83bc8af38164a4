"""Command-line surface: JSON file formats and subcommands.

Algebras and ordered sets travel as JSON objects; "-" means stdin, and
every command writes JSON to stdout so commands compose by piping.
Exit codes: 0 success, 1 validation failure, 2 property or witness not
found, 3 input/format/size trouble.
"""

import argparse
import json
import os
import sys

from . import diagram as diagram_mod
from . import duality, filtration, hplus_witness, residuated
from .errors import FormatError, SizeError, SplitbenchError
from .lattice import FinLattice, all_splitting_pairs
from .poset import (DoublePointedPoset, FinPoset, MAX_POSET_SIZE, bits,
                    build_poset, find_tails, is_connected, is_fence,
                    order_isolated, power_chain, searrow)

SCHEMA = 1

ENV_MAX_POSET = "SPLITBENCH_MAX_POSET"
ENV_MAX_UPSETS = "SPLITBENCH_MAX_UPSETS"
ENV_BUDGET = "SPLITBENCH_BUDGET"


# -- file formats ----------------------------------------------------------


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(str(exc)) from None


def poset_to_json(p: FinPoset, bot: int | None = None,
                  top: int | None = None) -> dict:
    out = {"schema": SCHEMA, "kind": "poset", "size": p.size,
           "le": [[a, b] for a, b in p.covers()]}
    if bot is not None:
        out["bot"] = bot
    if top is not None:
        out["top"] = top
    return out


def poset_from_json(obj, max_size: int) -> tuple[FinPoset, int | None, int | None]:
    if obj.get("kind") != "poset":
        raise FormatError("expected a poset object")
    size = obj.get("size")
    if not isinstance(size, int) or size < 1:
        raise FormatError("poset size must be a positive integer")
    if size > max_size:
        raise SizeError(f"poset size {size} exceeds cap {max_size}")
    pairs = [(int(a), int(b)) for a, b in obj.get("le", [])]
    p = build_poset(size, pairs)
    return p, obj.get("bot"), obj.get("top")


def load_double_pointed(obj, max_size: int) -> DoublePointedPoset:
    p, bot, top = poset_from_json(obj, max_size)
    if bot is None or top is None:
        raise FormatError("bot and top are required for this command")
    return DoublePointedPoset(p, bot, top)


_ALG_OPS = {
    "cirl": (["meet", "join", "mul", "arrow"], [], ["one"]),
    "heyting": (["meet", "join", "arrow"], [], ["zero", "one"]),
    "hplus": (["meet", "join", "arrow"], ["dpc"], ["zero", "one"]),
    "dheyting": (["meet", "join", "arrow", "coarrow"], [], ["zero", "one"]),
    "dp": (["meet", "join"], ["neg", "dpc"], ["zero", "one"]),
}


def algebra_to_json(alg, kind: str, labels=None) -> dict:
    binary, unary, consts = _ALG_OPS[kind]
    out = {"schema": SCHEMA, "kind": kind, "size": alg.size}
    for name in binary:
        fn = _op_of(alg, name)
        out[name] = [[fn(a, b) for b in range(alg.size)]
                     for a in range(alg.size)]
    for name in unary:
        fn = _op_of(alg, name)
        out[name] = [fn(a) for a in range(alg.size)]
    for name in consts:
        out[name] = getattr(alg, name)
    if labels is not None:
        out["labels"] = list(labels)
    return out


def _op_of(alg, name: str):
    if name == "mul":
        return alg.mult
    if name == "arrow" and alg.kind == "cirl":
        return alg.res
    return getattr(alg, name)


def upalgebra_to_json(alg: duality.UpSetAlgebra, kind: str = "hplus") -> dict:
    elements = alg.elements
    index = {m: i for i, m in enumerate(elements)}
    binary, unary, consts = _ALG_OPS[kind]
    out = {"schema": SCHEMA, "kind": kind, "size": len(elements)}
    for name in binary:
        fn = getattr(alg, name)
        out[name] = [[index[fn(u, v)] for v in elements] for u in elements]
    for name in unary:
        fn = getattr(alg, name)
        out[name] = [index[fn(u)] for u in elements]
    out["zero"] = index[alg.zero]
    out["one"] = index[alg.one]
    out["labels"] = [format(m, "b") for m in elements]
    return out


def algebra_from_json(obj):
    kind = obj.get("kind")
    if kind not in _ALG_OPS:
        raise FormatError(f"unknown algebra kind {kind!r}")
    size = obj.get("size")
    binary, unary, consts = _ALG_OPS[kind]
    tables = {}
    for name in binary:
        t = obj.get(name)
        if (not isinstance(t, list) or len(t) != size or
                any(len(r) != size for r in t)):
            raise FormatError(f"table {name} is not {size}x{size}")
        tables[name] = t
    for name in unary:
        t = obj.get(name)
        if not isinstance(t, list) or len(t) != size:
            raise FormatError(f"table {name} is not length {size}")
        tables[name] = t
    for name in consts:
        v = obj.get(name)
        if not isinstance(v, int) or not 0 <= v < size:
            raise FormatError(f"constant {name} missing or out of range")

    rows = []
    meet = tables["meet"]
    for a in range(size):
        row = 0
        for b in range(size):
            if meet[a][b] == a:
                row |= 1 << b
        rows.append(row)
    lat = FinLattice(FinPoset(rows))
    for a in range(size):
        for b in range(size):
            if lat.meet[a][b] != meet[a][b]:
                raise FormatError(f"meet table disagrees with the order "
                                  f"at ({a},{b})")
            if lat.join[a][b] != tables["join"][a][b]:
                raise FormatError(f"join table disagrees with the order "
                                  f"at ({a},{b})")
    if kind == "cirl":
        if obj["one"] != lat.one:
            raise FormatError("unit is not the lattice top")
        return residuated.validate_cirl(lat, tables["mul"], tables["arrow"])
    alg = diagram_mod.TableAlgebra(
        kind, size, {k: v for k, v in tables.items() if k != "mul"},
        {c: obj[c] for c in consts})
    _validate_order_algebra(alg, lat, kind)
    return alg


def _validate_order_algebra(alg, lat: FinLattice, kind: str):
    from .errors import AxiomError

    n = alg.size
    if alg.zero != lat.zero or alg.one != lat.one:
        raise AxiomError("constants are not the lattice bounds")
    if kind in ("heyting", "hplus", "dheyting"):
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if lat.leq(lat.meet[z][x], y) != lat.leq(z, alg.arrow(x, y)):
                        raise AxiomError(f"arrow residuation fails at "
                                         f"({x},{y},{z})")
    if kind == "dheyting":
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if lat.leq(x, lat.join[z][y]) != lat.leq(alg.coarrow(x, y), z):
                        raise AxiomError(f"coarrow residuation fails at "
                                         f"({x},{y},{z})")
    if kind in ("hplus", "dp"):
        for x in range(n):
            for y in range(n):
                if (lat.join[x][y] == lat.one) != lat.leq(alg.dpc(x), y):
                    raise AxiomError(f"dual pseudocomplement law fails at "
                                     f"({x},{y})")
    if kind == "dp":
        for x in range(n):
            for y in range(n):
                if (lat.meet[x][y] == lat.zero) != lat.leq(y, alg.neg(x)):
                    raise AxiomError(f"pseudocomplement law fails at "
                                     f"({x},{y})")


# -- helpers ---------------------------------------------------------------


def _emit(obj):
    json.dump(obj, sys.stdout, indent=1)
    sys.stdout.write("\n")


def _lattice_of(obj, max_size: int) -> FinLattice:
    if obj.get("kind") == "poset":
        p, _, _ = poset_from_json(obj, max_size)
        return FinLattice(p)
    alg = algebra_from_json(obj)
    if alg.kind == "cirl":
        return alg.lattice
    rows = []
    for a in range(alg.size):
        row = 0
        for b in range(alg.size):
            if alg.meet(a, b) == a:
                row |= 1 << b
        rows.append(row)
    return FinLattice(FinPoset(rows))


# -- subcommands -----------------------------------------------------------


def _cmd_validate(args):
    obj = _read_json(args.file)
    if obj.get("kind") == "poset":
        p, bot, top = poset_from_json(obj, args.max_poset)
        if bot is not None and top is not None:
            DoublePointedPoset(p, bot, top)
        _emit({"schema": SCHEMA, "command": "validate", "ok": True,
               "kind": "poset", "size": p.size})
        return 0
    alg = algebra_from_json(obj)
    _emit({"schema": SCHEMA, "command": "validate", "ok": True,
           "kind": obj["kind"], "size": alg.size})
    return 0


def _cmd_analyze(args):
    obj = _read_json(args.file)
    if obj.get("kind") == "poset":
        p, _, _ = poset_from_json(obj, args.max_poset)
        _emit({"schema": SCHEMA, "command": "analyze", "kind": "poset",
               "size": p.size,
               "connected": is_connected(p),
               "fence": is_fence(p),
               "tails": find_tails(p),
               "order_isolated": sorted(bits(order_isolated(p))),
               "height": p.height()})
        return 0
    alg = algebra_from_json(obj)
    if obj["kind"] == "cirl":
        info = residuated.monolith_info(alg)
        out = {"schema": SCHEMA, "command": "analyze", "kind": "cirl",
               "size": alg.size, "si": info.is_si,
               "potency": alg.potency(),
               "congruence_filters": len(residuated.congruence_filters(alg))}
        if info.is_si:
            out.update(coatom=info.coatom, depth=info.depth,
                       mu_bottom=info.mu_bottom,
                       mu_filter=sorted(bits(info.mu_filter)))
        _emit(out)
        return 0
    if obj["kind"] == "dp":
        rep = duality.varlet_report(alg)
        _emit({"schema": SCHEMA, "command": "analyze", "kind": "dp",
               "size": alg.size,
               "regular": rep.regular,
               "determined_by_pcs": rep.determined_by_pcs,
               "height_at_most_one": rep.height_at_most_one,
               "distributive_identity": rep.distributive_identity,
               "all_agree": rep.all_agree})
        return 0
    sig = {"heyting": None, "hplus": diagram_mod.HPLUS,
           "dheyting": diagram_mod.DHEYTING}[obj["kind"]]
    out = {"schema": SCHEMA, "command": "analyze", "kind": obj["kind"],
           "size": alg.size}
    if sig is not None:
        info = diagram_mod.si_structure(alg, sig)
        out.update(si=info.is_si, simple=info.simple)
        if info.is_si:
            out["mu_bottom"] = info.mu_bottom
    _emit(out)
    return 0


def _cmd_hoop(args):
    alg = residuated.wajsberg_hoop(args.n)
    _emit(algebra_to_json(alg, "cirl",
                          labels=[f"q^{i}" for i in range(args.n)]))
    return 0


def _cmd_expand(args):
    from .expansion import expand_once, expand_to_depth

    alg = algebra_from_json(_read_json(args.file))
    if alg.kind != "cirl":
        raise FormatError("expand needs a cirl algebra")
    if args.rounds is not None:
        emb = list(range(alg.size))
        for _ in range(args.rounds):
            step = expand_once(alg)
            emb = [step.embedding[e] for e in emb]
            alg = step.algebra
        _emit(algebra_to_json(alg, "cirl"))
        return 0
    res = expand_to_depth(alg, args.depth)
    _emit(algebra_to_json(res.algebra, "cirl"))
    return 0


def _cmd_truncprod(args):
    a = algebra_from_json(_read_json(args.a))
    b = algebra_from_json(_read_json(args.b))
    if a.kind != "cirl" or b.kind != "cirl":
        raise FormatError("truncprod needs two cirl algebras")
    alg = residuated.truncated_product(a, b, args.c, args.q)
    _emit(algebra_to_json(alg, "cirl"))
    return 0


def _cmd_dual(args):
    lat = _lattice_of(_read_json(args.file), args.max_poset)
    p, irr = duality.dual_poset(lat)
    _emit({**poset_to_json(p), "elements": irr})
    return 0


def _cmd_upalg(args):
    p, _, _ = poset_from_json(_read_json(args.file), args.max_poset)
    alg = duality.up_set_algebra(p, cap=args.max_upsets)
    _emit(upalgebra_to_json(alg, args.kind))
    return 0


def _cmd_searrow(args):
    s = load_double_pointed(_read_json(args.p), args.max_poset)
    t = load_double_pointed(_read_json(args.q), args.max_poset)
    g = searrow(s, t)
    _emit(poset_to_json(g.poset, g.bot, g.top))
    return 0


def _cmd_powerchain(args):
    x = load_double_pointed(_read_json(args.p), args.max_poset)
    g = power_chain(x, args.n)
    _emit(poset_to_json(g.poset, g.bot, g.top))
    return 0


def _cmd_diagram(args):
    alg = _algebra_for_sig(args.file, args.sig, args.max_upsets)
    sig = diagram_mod.get_signature(args.sig)
    d = diagram_mod.build_diagram(alg, sig)
    identity = diagram_mod.Assignment(alg, d.variables)
    value = diagram_mod.eval_diagram(d, identity)
    _emit({"schema": SCHEMA, "command": "diagram", "sig": sig.tag,
           "variables": d.var_count,
           "conjuncts": len(d.conjuncts) + len(d.const_conjuncts),
           "identity_value_is_one": value == alg.one})
    return 0


def _algebra_for_sig(path: str, sig_tag: str, max_upsets: int):
    obj = _read_json(path)
    if obj.get("kind") == "poset" and sig_tag in ("hplus", "dheyting"):
        p, _, _ = poset_from_json(obj, MAX_POSET_SIZE)
        return duality.up_set_algebra(p, cap=max_upsets)
    alg = algebra_from_json(obj)
    return alg


def _cmd_witness(args):
    alg = _algebra_for_sig(args.file, args.sig, args.max_upsets)
    sig = diagram_mod.get_signature(args.sig)
    rep = diagram_mod.witness_suite(alg, args.imax, sig)
    out = {"schema": SCHEMA, "command": "witness", "sig": rep.tag,
           "a_size": rep.a_size, "exempt": rep.exempt, "note": rep.note,
           "entries": [
               {"i": e.i, "b_size": e.b_size,
                "delta_witness_found": e.delta_witness_found,
                "excluded": e.excluded, "detail": e.detail}
               for e in rep.entries]}
    _emit(out)
    ok = rep.exempt or all(
        e.delta_witness_found and e.excluded in (True, None)
        for e in rep.entries)
    return 0 if ok else 2


def _cmd_hwitness(args):
    x = load_double_pointed(_read_json(args.x), args.max_poset)
    if args.y == "auto":
        fence = hplus_witness.fence_for_target(x)
        y = fence.poset
        case = fence.case
    else:
        y = load_double_pointed(_read_json(args.y), args.max_poset)
        case = "explicit"
    w = hplus_witness.build_witness_algebra(x, y, args.n)
    sig = diagram_mod.get_signature(args.sig)
    value = hplus_witness.diagram_final_check(w, sig)
    out = {"schema": SCHEMA, "command": "hwitness", "sig": sig.tag,
           "n": args.n, "carrier_size": w.carrier.size,
           "fence_case": case,
           "delta_power_nonempty": value != 0,
           "delta_power_value": sorted(bits(value))}
    if args.check_onto:
        out["never_maps_onto"] = hplus_witness.never_maps_onto_check(
            x, y, args.n + 2, budget=args.budget)
    _emit(out)
    return 0 if value != 0 else 2


def _cmd_morphisms(args):
    x, _, _ = poset_from_json(_read_json(args.x), args.max_poset)
    y, _, _ = poset_from_json(_read_json(args.y), args.max_poset)
    maps = duality.enumerate_morphisms(x, y, args.kind, args.surjective,
                                       budget=args.budget)
    _emit({"schema": SCHEMA, "command": "morphisms", "kind": args.kind,
           "surjective": args.surjective, "count": len(maps),
           "maps": [list(m.values) for m in maps]})
    return 0 if maps else 2


def _cmd_splittings(args):
    lat = _lattice_of(_read_json(args.file), args.max_poset)
    pairs = all_splitting_pairs(lat)
    _emit({"schema": SCHEMA, "command": "splittings", "size": lat.size,
           "pairs": [list(p) for p in pairs]})
    return 0 if pairs else 2


def _cmd_filtrate(args):
    p, _, _ = poset_from_json(_read_json(args.file), args.max_poset)
    fam = [int(g) for g in args.gens]
    if args.close_dpc:
        alg = duality.UpSetAlgebra(p)
        fam = filtration.close_under_dpc(alg, fam)
    fil = filtration.filtrate(p, fam)
    alg = duality.UpSetAlgebra(p)
    preserved = True
    in_fam = set(fam)
    unary = [alg.neg, alg.dpc]
    binary = [alg.meet, alg.join, alg.arrow, alg.coarrow]
    for u in fam:
        for fn in unary:
            r = fn(u)
            if r in in_fam and getattr(fil.algebra, fn.__name__)(fil.phi(u)) \
                    != fil.phi(r):
                preserved = False
        for v in fam:
            for fn in binary:
                r = fn(u, v)
                if r in in_fam and getattr(fil.algebra, fn.__name__)(
                        fil.phi(u), fil.phi(v)) != fil.phi(r):
                    preserved = False
    _emit({"schema": SCHEMA, "command": "filtrate",
           "family": fam,
           "classes": [sorted(bits(c)) for c in fil.classes],
           "quotient": poset_to_json(fil.quotient),
           "preserved": preserved})
    return 0 if preserved else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="splitbench",
        description="finite-algebra workbench: splittings, dualities, "
                    "expansions")
    ap.add_argument("--max-poset", type=int,
                    default=int(os.environ.get(ENV_MAX_POSET, MAX_POSET_SIZE)))
    ap.add_argument("--max-upsets", type=int,
                    default=int(os.environ.get(ENV_MAX_UPSETS, 1 << 16)))
    ap.add_argument("--budget", type=int,
                    default=int(os.environ.get(ENV_BUDGET,
                                               duality.MORPHISM_BUDGET)))
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", _cmd_validate)
    sp.add_argument("file")
    sp = add("analyze", _cmd_analyze)
    sp.add_argument("file")
    sp = add("hoop", _cmd_hoop)
    sp.add_argument("n", type=int)
    sp = add("expand", _cmd_expand)
    sp.add_argument("file")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--depth", type=int)
    group.add_argument("--rounds", type=int)
    sp = add("truncprod", _cmd_truncprod)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--c", type=int, default=None)
    sp.add_argument("--q", type=int, default=None)
    sp = add("dual", _cmd_dual)
    sp.add_argument("file")
    sp = add("upalg", _cmd_upalg)
    sp.add_argument("file")
    sp.add_argument("--kind", default="hplus",
                    choices=["heyting", "hplus", "dheyting", "dp"])
    sp = add("searrow", _cmd_searrow)
    sp.add_argument("p")
    sp.add_argument("q")
    sp = add("powerchain", _cmd_powerchain)
    sp.add_argument("p")
    sp.add_argument("n", type=int)
    sp = add("diagram", _cmd_diagram)
    sp.add_argument("file")
    sp.add_argument("--sig", required=True,
                    choices=["cirl", "hplus", "dheyting"])
    sp = add("witness", _cmd_witness)
    sp.add_argument("file")
    sp.add_argument("--imax", type=int, default=1)
    sp.add_argument("--sig", required=True,
                    choices=["cirl", "hplus", "dheyting"])
    sp = add("hwitness", _cmd_hwitness)
    sp.add_argument("x")
    sp.add_argument("y", help="poset file or 'auto' for a fence choice")
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--sig", default="hplus", choices=["hplus", "dheyting"])
    sp.add_argument("--check-onto", action="store_true")
    sp = add("morphisms", _cmd_morphisms)
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--kind", default="hplus",
                    choices=["heyting", "hplus", "dh"])
    sp.add_argument("--surjective", action="store_true")
    sp = add("splittings", _cmd_splittings)
    sp.add_argument("file")
    sp = add("filtrate", _cmd_filtrate)
    sp.add_argument("file")
    sp.add_argument("--gens", nargs="+", required=True)
    sp.add_argument("--close-dpc", action="store_true")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (FormatError, SizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SplitbenchError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
