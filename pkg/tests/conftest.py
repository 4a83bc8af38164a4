"""Shared builders, generators and brute-force oracles."""

import itertools

import pytest

from splitbench.lattice import FinLattice
from splitbench.poset import (FinPoset, bits, build_poset, canonical_key,
                              enumerate_posets, is_connected)
from splitbench.residuated import CIRLTable, derive_arrow, validate_cirl
from splitbench.errors import NotALattice, SplitbenchError


# -- standard posets -------------------------------------------------------


def chain(n: int) -> FinPoset:
    return build_poset(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> FinPoset:
    return build_poset(n, [])


def fence(n: int, start_up: bool = True) -> FinPoset:
    pairs = []
    for k in range(n - 1):
        if (k % 2 == 0) == start_up:
            pairs.append((k, k + 1))
        else:
            pairs.append((k + 1, k))
    return build_poset(n, pairs)


def crown4() -> FinPoset:
    return build_poset(4, [(0, 2), (0, 3), (1, 2), (1, 3)])


def vee() -> FinPoset:
    return build_poset(3, [(0, 1), (2, 1)])


def m3() -> FinLattice:
    return FinLattice(build_poset(
        5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]))


def n5() -> FinLattice:
    return FinLattice(build_poset(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]))


def diamond() -> FinLattice:
    return FinLattice(build_poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)]))


def boolean_lattice(n: int) -> FinLattice:
    masks = list(range(1 << n))
    rows = []
    for a in masks:
        row = 0
        for b in masks:
            if a & ~b == 0:
                row |= 1 << b
        rows.append(row)
    return FinLattice(FinPoset(rows))


# -- cached exhaustive families ---------------------------------------------


_poset_cache: dict[tuple, list] = {}


def all_posets(max_size: int, connected_only: bool = False,
               dedupe: bool = False) -> list[FinPoset]:
    key = (max_size, connected_only, dedupe)
    if key not in _poset_cache:
        out = []
        seen = set()
        for n in range(1, max_size + 1):
            for p in enumerate_posets(n):
                if connected_only and not is_connected(p):
                    continue
                if dedupe:
                    k = canonical_key(p)
                    if k in seen:
                        continue
                    seen.add(k)
                out.append(p)
        _poset_cache[key] = out
    return _poset_cache[key]


def all_lattices(max_size: int) -> list[FinLattice]:
    key = ("lat", max_size)
    if key not in _poset_cache:
        out = []
        for p in all_posets(max_size, dedupe=True):
            try:
                out.append(FinLattice(p))
            except NotALattice:
                continue
        _poset_cache[key] = out
    return _poset_cache[key]


# -- brute-force oracles ----------------------------------------------------


def oracle_up_sets(p: FinPoset) -> list[int]:
    """Independent subset filter using only the raw relation."""
    out = []
    for s in range(1 << p.size):
        good = True
        for i in range(p.size):
            if not s & (1 << i):
                continue
            for j in range(p.size):
                if p.leq(i, j) and not s & (1 << j):
                    good = False
        if good:
            out.append(s)
    return out


def lattices_isomorphic(a: FinLattice, b: FinLattice) -> bool:
    """Permutation search on the underlying orders."""
    if a.size != b.size:
        return False
    return canonical_key(a.poset) == canonical_key(b.poset)


def enumerate_cirls(lat: FinLattice) -> list[CIRLTable]:
    """All commutative integral residuated multiplications on a lattice.

    Backtracks over the sub-diagonal entries with monotonicity and
    meet-bound pruning; associativity and residual existence are checked
    on the completed tables.
    """
    n = lat.size
    one = lat.one
    rest = [x for x in range(n) if x != one]
    slots = [(x, y) for i, x in enumerate(rest) for y in rest[i:]]
    mul = [[None] * n for _ in range(n)]
    for x in range(n):
        mul[x][one] = x
        mul[one][x] = x
    out = []

    def monotone_ok(x, y, v):
        for (a, b) in itertools.product(range(n), repeat=2):
            w = mul[a][b]
            if w is None:
                continue
            if lat.leq(a, x) and lat.leq(b, y) and not lat.leq(w, v):
                return False
            if lat.leq(x, a) and lat.leq(y, b) and not lat.leq(v, w):
                return False
        return True

    def rec(k):
        if k == len(slots):
            tab = [row[:] for row in mul]
            for x in range(n):
                for y in range(n):
                    for z in range(n):
                        if tab[tab[x][y]][z] != tab[x][tab[y][z]]:
                            return
            arrow = derive_arrow(lat, tab)
            if any(v is None for row in arrow for v in row):
                return
            try:
                out.append(validate_cirl(lat, tab, arrow))
            except SplitbenchError:
                pass
            return
        x, y = slots[k]
        bound = lat.meet[x][y]
        for v in bits(lat.poset.down[bound]):
            if monotone_ok(x, y, v):
                mul[x][y] = mul[y][x] = v
                rec(k + 1)
                mul[x][y] = mul[y][x] = None

    rec(0)
    return out


@pytest.fixture(scope="session")
def small_posets():
    return all_posets(5)


@pytest.fixture(scope="session")
def small_connected_deduped():
    return all_posets(5, connected_only=True, dedupe=True)
