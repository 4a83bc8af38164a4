import random

import pytest

from conftest import chain, crown4, fence, vee
from splitbench.duality import UpSetAlgebra, enumerate_morphisms, up_set_algebra
from splitbench.errors import BadParameter
from splitbench.hplus_witness import (build_witness_algebra, chi, chi_plus,
                                      copy_union, diagram_final_check,
                                      fence_for_target, make_fence,
                                      never_maps_onto_check, u_map)
from splitbench.poset import (DoublePointedPoset, bits, build_poset,
                              enumerate_up_sets, find_tails, is_fence,
                              popcount, power_chain, searrow)


def dp(poset, bot, top):
    return DoublePointedPoset(poset, bot, top)


def glued_pairs():
    xs = [dp(chain(2), 0, 1), dp(fence(4), 0, 1), dp(vee(), 0, 1),
          dp(chain(3), 0, 2)]
    ys = [dp(chain(2), 0, 1), dp(fence(4), 2, 3), dp(vee(), 2, 1)]
    for x in xs:
        for y in ys:
            yield x, y


def test_ring_operation_formulas():
    # inner ops agree with outer for join/meet/coarrow; the dual
    # pseudocomplement gains the right block plus the glue top
    for x, y in glued_pairs():
        g = searrow(x, y)
        alg = UpSetAlgebra(g.poset)
        left = sum(1 << i for i in g.parts[0])
        right = sum(1 << i for i in g.parts[1])
        top_x = x.top
        bot_y = g.parts[1][y.bot]
        ups_x = [u for u in enumerate_up_sets(x.poset)]
        for u in ups_x:
            for v in ups_x:
                assert alg.meet(u, v) == u & v
                assert alg.join(u, v) == u | v
                inner_co = x.poset.up_mask(u & ~v)
                assert alg.coarrow(u, v) == inner_co
                inner_dpc = x.poset.up_mask(x.poset.all_mask & ~u)
                assert alg.dpc(u) == inner_dpc | right | (1 << top_x)
                inner_arrow = x.poset.all_mask & ~x.poset.down_mask(u & ~v)
                if not (u & ~v) & (1 << top_x):
                    assert alg.arrow(u, v) == inner_arrow | right
                else:
                    assert alg.arrow(u, v) == \
                        inner_arrow | (right & ~(1 << bot_y))


def test_chi_is_whole_left_part():
    rng = random.Random(3)
    count = 0
    for x, y in glued_pairs():
        g = searrow(x, y)
        left = sum(1 << i for i in g.parts[0])
        ups = enumerate_up_sets(x.poset)
        for u in ups:
            for v in ups:
                assert chi(g, u, v) == left
                count += 1
    assert count >= 100
    _ = rng


def test_chi_plus_case_split():
    for x, y in glued_pairs():
        g = searrow(x, y)
        alg = UpSetAlgebra(g.poset)
        left = sum(1 << i for i in g.parts[0])
        ups = enumerate_up_sets(x.poset)
        for u in ups:
            for v in ups:
                got = chi_plus(g, u, v)
                inner_dpc = x.poset.up_mask(x.poset.all_mask & ~u)
                if inner_dpc & (1 << x.top):
                    assert got == left
                else:
                    assert got == left & ~alg.base.down_mask(1 << x.top)
        # the two forced cases
        assert chi_plus(g, 0, 0) == left
        full = x.poset.all_mask
        expected = left & ~alg.base.down_mask(1 << x.top)
        assert chi_plus(g, full, full) == expected


def test_chi_rejects_bad_operands():
    x, y = dp(chain(2), 0, 1), dp(chain(2), 0, 1)
    g = searrow(x, y)
    with pytest.raises(BadParameter):
        chi(g, 0b0100, 0)           # right-part element
    with pytest.raises(BadParameter):
        chi(g, 0b0001, 0)           # not an up-set of the carrier


def test_u_map_bounds_and_gate():
    x = dp(chain(2), 0, 1)
    w = build_witness_algebra(x, dp(chain(2), 0, 1), 0)
    assert u_map(w, 0) == 0
    assert u_map(w, x.poset.all_mask) == w.left_mask
    bad = dp(fence(4), 0, 3)
    assert not bad.bot_below_top
    with pytest.raises(BadParameter):
        build_witness_algebra(bad, dp(chain(2), 0, 1), 0)


def test_u_map_is_homomorphism_into_power_chain():
    for base, bot, top in ((chain(2), 0, 1), (fence(4), 0, 1)):
        x = dp(base, bot, top)
        src = up_set_algebra(base)
        for n in (1, 2):
            pc = power_chain(x, n)
            big = UpSetAlgebra(pc.poset)
            U = lambda a: copy_union(pc.parts, a)
            for a in src.elements:
                for b in src.elements:
                    assert U(src.meet(a, b)) == big.meet(U(a), U(b))
                    assert U(src.join(a, b)) == big.join(U(a), U(b))
                    assert U(src.arrow(a, b)) == big.arrow(U(a), U(b))
                    assert U(src.coarrow(a, b)) == big.coarrow(U(a), U(b))
                assert U(src.neg(a)) == big.neg(U(a))
                assert U(src.dpc(a)) == big.dpc(U(a))
            assert U(src.zero) == 0 and U(src.one) == pc.poset.all_mask


def test_u_map_dual_is_projection():
    x = dp(chain(2), 0, 1)
    pc = power_chain(x, 3)
    proj = [0] * pc.size
    for copy in pc.parts:
        for e, w in enumerate(copy):
            proj[w] = e
    for a in enumerate_up_sets(x.poset):
        preimage = sum(1 << w for w in range(pc.size)
                       if a & (1 << proj[w]))
        assert preimage == copy_union(pc.parts, a)


def test_diagram_final_check_closed_forms():
    for base, bt in ((chain(2), (0, 1)), (fence(4), (0, 1))):
        x = dp(base, *bt)
        for y in (dp(chain(2), 0, 1), dp(fence(4), 2, 1)):
            for n in (0, 1):
                w = build_witness_algebra(x, y, n)
                for sig in ("dheyting", "hplus"):
                    value = diagram_final_check(w, sig)
                    assert value != 0


def test_fence_for_target_cases():
    f = fence_for_target(dp(fence(4), 0, 1))
    assert f.case == "both-tails" and f.poset.size == 5
    assert f.poset.bot == 1
    tails = find_tails(f.poset.poset)
    assert {k for k, _, _ in tails} == {"up"}

    f = fence_for_target(dp(fence(3, start_up=True), 0, 1))
    assert f.case == "only-down-tails" and f.poset.size == 4
    assert ("down", f.poset.bot, 1) in find_tails(f.poset.poset)

    f = fence_for_target(dp(fence(3, start_up=False), 1, 0))
    assert f.case == "only-up-tails" and f.poset.size == 5
    assert {k for k, _, _ in find_tails(f.poset.poset)} == {"down"}

    f = fence_for_target(dp(crown4(), 0, 2))
    assert f.case == "not-a-fence" and f.poset.size == 5

    f = fence_for_target(dp(chain(3), 0, 2))
    assert f.case == "not-a-fence"

    with pytest.raises(BadParameter):
        fence_for_target(dp(chain(2), 0, 1))


def test_never_maps_onto_check_small_instances():
    # non-fence targets, one copy
    for target in (crown4(), chain(3)):
        x = dp(target, 0, target.size - 1 if target is chain(3) else 2)
        fc = fence_for_target(x)
        assert never_maps_onto_check(x, fc, 1)
    # the tailored fence for a 4-fence target
    x = dp(fence(4), 0, 1)
    assert never_maps_onto_check(x, fence_for_target(x), 1)
    with pytest.raises(BadParameter):
        never_maps_onto_check(x, fence_for_target(x), 0)
    # fence targets with a single tail kind exercise the other branches
    down_only = dp(fence(3, start_up=True), 0, 1)
    assert never_maps_onto_check(down_only, fence_for_target(down_only), 1)
    up_only = dp(fence(3, start_up=False), 1, 0)
    assert never_maps_onto_check(up_only, fence_for_target(up_only), 1)


def test_glued_fence_images():
    # non-constant morphisms on glued fences: not injective on the fence
    # forces a fence image; top of the left block escaping the fence
    # image forces injectivity on the fence
    from conftest import all_posets

    targets = all_posets(5, connected_only=True, dedupe=True)
    combos = [(dp(chain(2), 0, 1), dp(make_fence(4), 0, 1)),
              (dp(vee(), 0, 1), dp(make_fence(5), 0, 1)),
              (dp(chain(2), 0, 1), dp(make_fence(5), 0, 1))]
    for s, f in combos:
        assert ("down", f.bot, 1) in find_tails(f.poset)
        g = searrow(s, f)
        fmask = sum(1 << i for i in g.parts[1])
        top_s = s.top
        for y in targets:
            for phi in enumerate_morphisms(g.poset, y, "hplus"):
                img = phi.image_mask(g.poset.all_mask)
                if popcount(img) == 1:
                    continue
                fence_values = [phi.values[i] for i in g.parts[1]]
                injective = len(set(fence_values)) == len(fence_values)
                if phi.values[top_s] not in fence_values:
                    assert injective
                if not injective:
                    sub, _ = y.restrict(img)
                    assert is_fence(sub)
