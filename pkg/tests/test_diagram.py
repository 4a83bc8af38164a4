import itertools

import pytest

from conftest import all_lattices, all_posets, enumerate_cirls
from splitbench.diagram import (CIRL, DHEYTING, HPLUS, Assignment,
                                TableAlgebra, build_diagram,
                                delta_power_witness, embedding_by_diagram,
                                eval_diagram, get_signature, in_hs,
                                search_embedding, si_structure, witness_suite)
from splitbench.duality import up_set_algebra
from splitbench.errors import BadParameter, NotSI, SignatureMismatch
from splitbench.poset import build_poset, is_connected
from splitbench.residuated import monolith_info, wajsberg_hoop


def test_signature_dispatch():
    assert get_signature("cirl") is CIRL
    with pytest.raises(BadParameter):
        get_signature("boolean")
    c3 = wajsberg_hoop(3)
    with pytest.raises(SignatureMismatch):
        build_diagram(c3, HPLUS)


def test_diagram_shape_and_identity_value():
    c3 = wajsberg_hoop(3)
    d = build_diagram(c3, CIRL)
    assert d.var_count == 3
    assert len(d.conjuncts) == 4 * 9
    assert eval_diagram(d, Assignment(c3, tuple(c3.elements))) == c3.one

    alg = up_set_algebra(build_poset(2, [(0, 1)]))
    dh = build_diagram(alg, DHEYTING)
    assert len(dh.const_conjuncts) == 2
    assert {c for c, _ in dh.const_conjuncts} == {"zero", "one"}
    assert eval_diagram(dh, Assignment(alg, tuple(alg.elements))) == alg.one
    hp = build_diagram(alg, HPLUS)
    assert eval_diagram(hp, Assignment(alg, tuple(alg.elements))) == alg.one


def test_si_structure():
    c3 = wajsberg_hoop(3)
    got = si_structure(c3, CIRL)
    assert got.is_si and got.mu_bottom == 2 and got.simple
    alg = up_set_algebra(build_poset(2, [(0, 1)]))
    got = si_structure(alg, HPLUS)
    assert got.is_si and got.simple and got.mu_bottom == alg.zero
    boolean4 = up_set_algebra(build_poset(2, []))
    assert not si_structure(boolean4, HPLUS).is_si


def test_embedding_by_diagram_on_hoops():
    c2, c3 = wajsberg_hoop(2), wajsberg_hoop(3)
    assert embedding_by_diagram(c2, c3, CIRL) is not None
    assert embedding_by_diagram(c3, c2, CIRL) is None
    got = embedding_by_diagram(c2, c3, CIRL)
    d = build_diagram(c2, CIRL)
    assert eval_diagram(d, got) == c3.one


def test_diagram_embedding_agreement_cirl_all_small_pairs():
    algebras = []
    for lat in all_lattices(5):
        algebras.extend(enumerate_cirls(lat))
    si = [a for a in algebras if monolith_info(a).is_si]
    assert len(si) >= 30
    for a in si:
        for b in si:
            via_diagram = embedding_by_diagram(a, b, CIRL) is not None
            direct = search_embedding(a, b, CIRL) is not None
            assert via_diagram == direct


def test_diagram_embedding_agreement_hplus_small_pairs():
    sources = []
    targets = []
    for p in all_posets(4, dedupe=True):
        alg = up_set_algebra(p)
        targets.append(alg)
        if is_connected(p):
            sources.append(alg)
    for a in sources:
        for b in targets:
            via_diagram = embedding_by_diagram(a, b, HPLUS) is not None
            direct = search_embedding(a, b, HPLUS) is not None
            assert via_diagram == direct


def test_delta_power_monotone_in_i():
    c3 = wajsberg_hoop(3)
    c9 = wajsberg_hoop(9)
    d = build_diagram(c3, CIRL)
    for values in itertools.product(range(9), repeat=3):
        val = eval_diagram(d, Assignment(c9, values))
        prev = val
        for _ in range(3):
            nxt = CIRL.delta(c9, prev)
            assert c9.leq(nxt, prev)
            prev = nxt


def test_witness_at_large_power_gives_witness_at_small():
    # a witness for a later delta power is one for every earlier power
    c3 = wajsberg_hoop(3)
    c9 = wajsberg_hoop(9)
    for i in (0, 1, 2):
        late = delta_power_witness(c3, c9, i + 1, CIRL)
        if late is not None:
            early = delta_power_witness(c3, c9, i, CIRL,
                                        candidates=[late.values])
            assert early is not None and early.values == late.values


def test_delta_power_witness_identity_case():
    c3 = wajsberg_hoop(3)
    got = delta_power_witness(c3, c3, 0, CIRL,
                              candidates=[tuple(c3.elements)])
    assert got is not None and got.values == tuple(c3.elements)


def test_in_hs():
    c2, c3, c5 = wajsberg_hoop(2), wajsberg_hoop(3), wajsberg_hoop(5)
    assert in_hs(c2, c3, CIRL)
    assert in_hs(c3, c5, CIRL)
    assert not in_hs(c3, wajsberg_hoop(4), CIRL)
    # a trivial target admits nothing but trivial sources
    from splitbench.residuated import congruence_filters, quotient

    full = congruence_filters(c3)[-1]
    triv = quotient(c3, full).algebra
    assert not in_hs(c2, triv, CIRL)
    assert in_hs(triv, c2, CIRL)


def test_in_hs_hplus():
    three = up_set_algebra(build_poset(2, [(0, 1)]))
    f4 = up_set_algebra(build_poset(4, [(0, 1), (2, 1), (2, 3)]))
    assert in_hs(three, f4, HPLUS)
    assert not in_hs(f4, three, HPLUS)


def test_witness_suite_cirl_c3():
    rep = witness_suite(wajsberg_hoop(3), 1, CIRL)
    assert not rep.exempt
    for entry in rep.entries:
        assert entry.delta_witness_found
        assert entry.excluded is True
        assert entry.detail["prime"] >= entry.detail["expansion_size"]


def test_small_si_algebras_excluded_from_their_glued_products():
    # every 3- and 4-element SI algebra misses every quotient of its own
    # glued expansion product, and the delta witness is found
    from conftest import all_lattices, enumerate_cirls

    si = []
    for lat in all_lattices(4):
        for c in enumerate_cirls(lat):
            if 3 <= c.size <= 4 and monolith_info(c).is_si:
                si.append(c)
    assert len(si) == 8
    for a in si:
        rep = witness_suite(a, 0, CIRL)
        entry = rep.entries[0]
        assert entry.delta_witness_found and entry.excluded is True


def test_two_element_tuple_value():
    # the canonical pair computation for the two-element source
    from splitbench.diagram import _canonical_tuple, _first_prime_at_least, \
        _pair_index
    from splitbench.expansion import expand_to_depth
    from splitbench.residuated import truncated_product

    c2 = wajsberg_hoop(2)
    exp = expand_to_depth(c2, 3)          # expansion of depth 4
    e = exp.algebra
    e_info = monolith_info(e)
    hoop = wajsberg_hoop(_first_prime_at_least(e.size) + 1)
    big = truncated_product(e, hoop)
    pair_of = _pair_index(e, hoop, big)
    w = _canonical_tuple(c2, e, exp.embedding, e_info, hoop, big)
    assert w[c2.one] == pair_of[(e.one, hoop.one)]
    assert w[1] == pair_of[(exp.embedding[1], 1)]
    d = build_diagram(c2, CIRL)
    value = eval_diagram(d, Assignment(big, w))
    assert value == pair_of[(e_info.coatom, 1)]
    # powers stay above the bottom variable strictly below the depth
    mu_pos = d.position(1)
    for k in range(1, exp.depth):
        assert not big.leq(big.power(value, k), w[mu_pos])


def test_some_assignment_witnesses_the_depth_boundary():
    # the canonical tuple stops at the depth, but some assignment still
    # witnesses the depth power itself
    from splitbench.diagram import _canonical_tuple, _first_prime_at_least, \
        _pair_index, delta_power_witness
    from splitbench.expansion import expand_to_depth
    from splitbench.residuated import truncated_product

    a = wajsberg_hoop(3)
    exp = expand_to_depth(a, 3)
    e = exp.algebra
    m = exp.depth
    hoop = wajsberg_hoop(_first_prime_at_least(e.size) + 1)
    big = truncated_product(e, hoop)
    w = _canonical_tuple(a, e, exp.embedding, monolith_info(e), hoop, big)
    d = build_diagram(a, CIRL)
    value = eval_diagram(d, Assignment(big, w))
    mu_pos = d.position(monolith_info(a).mu_bottom)
    assert big.leq(big.power(value, m), w[mu_pos])
    found = None
    for values in itertools.product(range(big.size), repeat=3):
        v = eval_diagram(d, Assignment(big, values))
        if not big.leq(big.power(v, m), values[mu_pos]):
            found = values
            break
    assert found is not None


def test_witness_suite_cirl_c2_partial():
    rep = witness_suite(wajsberg_hoop(2), 1, CIRL)
    assert not rep.exempt and "two-element" in rep.note
    for entry in rep.entries:
        assert entry.delta_witness_found
        assert entry.excluded is None


def test_witness_suite_hplus_exempt_for_three():
    three = up_set_algebra(build_poset(2, [(0, 1)]))
    rep = witness_suite(three, 1, HPLUS)
    assert rep.exempt


def test_witness_suite_hplus_fence():
    f4 = up_set_algebra(build_poset(4, [(0, 1), (2, 1), (2, 3)]))
    rep = witness_suite(f4, 0, HPLUS)
    assert not rep.exempt
    for entry in rep.entries:
        assert entry.delta_witness_found
        assert entry.excluded is True
