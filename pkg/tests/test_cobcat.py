"""The reduced cobordism category: composition, reduction, degrees."""

import random

import pytest

from foamcat.cobcat import Cobordism, Smoothing, juxtapose
from foamcat.ring import RingElement

R1 = RingElement.one()
Ra = RingElement.gen_a()
Rh = RingElement.gen_h()

S0 = Smoothing(0, 0, [], 0)
S1 = Smoothing(0, 0, [], 1)
S2 = Smoothing(0, 0, [], 2)


def birth(dots=0):
    return Cobordism.from_blocks(S0, S1, [((0,), dots, 1)])


def death(dots=0):
    return Cobordism.from_blocks(S1, S0, [((0,), dots, 1)])


def split():
    return Cobordism.from_blocks(S1, S2, [((0, 1, 2), 0, -1)])


def merge():
    return Cobordism.from_blocks(S2, S1, [((0, 1, 2), 0, -1)])


def loop_identity(dots=0):
    return Cobordism.from_blocks(S1, S1, [((0, 1), dots, 0)])


class TestComposition:
    def test_identity_composes(self):
        i = Cobordism.identity(S1)
        assert i.compose(i) == i

    def test_handle_operator(self):
        # split then merge acts on the loop by 2*dot - h
        handle = split().compose(merge())
        expected = loop_identity(1).scale(2) - loop_identity().scale(Rh)
        assert handle == expected

    def test_sphere_vanishes(self):
        sphere = birth().compose(death())
        assert sphere.is_zero()

    def test_dotted_sphere_is_one(self):
        once = birth(1).compose(death())
        assert once.terms == {(): R1}

    def test_twice_dotted_sphere_is_h(self):
        tw = birth(1).compose(death(1))
        assert tw.terms == {(): Rh}

    def test_thrice_dotted_sphere(self):
        c = birth(1).compose(loop_identity(1)).compose(death(1))
        assert c.terms == {(): Rh * Rh + Ra}

    def test_torus_is_two(self):
        torus = birth().compose(split()).compose(merge()).compose(death())
        assert torus.terms == {(): RingElement.from_gaussian(2)}

    def test_genus_two_closed_is_zero(self):
        g1 = split().compose(merge())
        c = birth().compose(g1).compose(g1).compose(death())
        assert c.is_zero()

    def test_smoothing_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            birth().compose(merge())


class TestReduction:
    def test_two_dots_reduce(self):
        c = loop_identity(2)
        assert c == loop_identity(1).scale(Rh) + loop_identity(0).scale(Ra)

    def test_dot_then_dot(self):
        c = loop_identity().add_dot("src", 0).add_dot("tgt", 0)
        assert c == loop_identity(1).scale(Rh) + loop_identity(0).scale(Ra)

    def test_add_dot_to_dotted_sphere(self):
        c = birth(1).compose(death()).add_dot  # scalar already; dot on nothing
        sphere2 = birth(1).compose(death(1))
        assert sphere2.terms == {(): Rh}

    def test_unknown_dot_location(self):
        with pytest.raises(ValueError, match="no element"):
            loop_identity().add_dot("src", 3)

    def test_confluence_under_block_order(self):
        rng = random.Random(42)
        for _ in range(80):
            nsrc = rng.randint(1, 3)
            ntgt = rng.randint(1, 3)
            src = Smoothing(0, 0, [], nsrc)
            tgt = Smoothing(0, 0, [], ntgt)
            els = list(range(nsrc + ntgt))
            rng.shuffle(els)
            blocks = []
            while els:
                k = rng.randint(1, len(els))
                grp = tuple(sorted(els[:k]))
                del els[:k]
                g = rng.randint(0, 2)
                d = rng.randint(0, 3)
                blocks.append((grp, d, 2 - len(grp) - 2 * g))
            ref = Cobordism.from_blocks(src, tgt, blocks)
            for _ in range(3):
                rng.shuffle(blocks)
                assert Cobordism.from_blocks(src, tgt, blocks) == ref

    def test_associativity_random(self):
        rng = random.Random(7)

        def rand_cob(src, tgt):
            els = list(range(src.n_elements + tgt.n_elements))
            rng.shuffle(els)
            blocks = []
            while els:
                k = rng.randint(1, len(els))
                grp = tuple(sorted(els[:k]))
                del els[:k]
                blocks.append((grp, rng.randint(0, 1),
                               2 - len(grp) - 2 * rng.randint(0, 1)))
            return Cobordism.from_blocks(src, tgt, blocks)

        for _ in range(40):
            a, b, c, d = (rng.randint(1, 3) for _ in range(4))
            A, B, C, D = (Smoothing(0, 0, [], k) for k in (a, b, c, d))
            f = rand_cob(A, B)
            g = rand_cob(B, C)
            h = rand_cob(C, D)
            assert f.compose(g).compose(h) == f.compose(g.compose(h))


class TestDegree:
    def test_identity_of_two_strand_smoothing(self):
        s = Smoothing(2, 2, [(0, 2), (1, 3)], 0)
        assert Cobordism.identity(s).degree() == 0

    def test_saddle_degree(self):
        src = Smoothing(2, 2, [(0, 1), (2, 3)], 0)
        tgt = Smoothing(2, 2, [(0, 2), (1, 3)], 0)
        saddle = Cobordism.from_blocks(src, tgt, [((0, 1, 2, 3), 0, 1)])
        assert saddle.degree() == 1

    def test_birth_degree(self):
        assert birth().degree() == -1
        assert death().degree() == -1

    def test_degree_additive(self):
        rng = random.Random(3)
        for _ in range(30):
            k1, k2, k3 = (rng.randint(1, 3) for _ in range(3))
            A, B, C = (Smoothing(0, 0, [], k) for k in (k1, k2, k3))

            def rand_cob(src, tgt):
                els = list(range(src.n_elements + tgt.n_elements))
                rng.shuffle(els)
                blocks = []
                while els:
                    k = rng.randint(1, len(els))
                    grp = tuple(sorted(els[:k]))
                    del els[:k]
                    blocks.append((grp, rng.randint(0, 1),
                                   2 - len(grp) - 2 * rng.randint(0, 1)))
                return Cobordism.from_blocks(src, tgt, blocks)

            f, g = rand_cob(A, B), rand_cob(B, C)
            fg = f.compose(g)
            if f.is_zero() or g.is_zero() or fg.is_zero():
                continue
            try:
                df, dg = f.degree(), g.degree()
            except ValueError:
                continue
            assert fg.degree() == df + dg


class TestJuxtapose:
    def test_identity_juxtapose(self):
        s = Smoothing(1, 1, [(0, 1)], 0)
        i = Cobordism.identity(s)
        ii = juxtapose(i, i)
        s2 = Smoothing(2, 2, [(0, 2), (1, 3)], 0)
        assert ii == Cobordism.identity(s2)

    def test_saddle_juxtaposed_with_identity(self):
        src = Smoothing(2, 2, [(0, 1), (2, 3)], 0)
        tgt = Smoothing(2, 2, [(0, 2), (1, 3)], 0)
        saddle = Cobordism.from_blocks(src, tgt, [((0, 1, 2, 3), 0, 1)])
        sheet = Cobordism.identity(Smoothing(1, 1, [(0, 1)], 0))
        j = juxtapose(saddle, sheet)
        assert j.src.nb == 3 and j.degree() == 1

    def test_bilinearity_of_coefficients(self):
        u = loop_identity().scale(RingElement.imag())
        v = loop_identity().scale(Rh)
        j = juxtapose(u, v)
        (coef,) = j.terms.values()
        assert coef == RingElement.imag() * Rh


class TestNeckCutting:
    def test_annulus_equals_cut_form_mod_relations(self):
        annulus = loop_identity()
        cut = (Cobordism.from_blocks(S1, S1, [((0,), 1, 1), ((1,), 0, 1)])
               + Cobordism.from_blocks(S1, S1, [((0,), 0, 1), ((1,), 1, 1)])
               - Cobordism.from_blocks(S1, S1, [((0,), 0, 1), ((1,), 0, 1)]).scale(Rh))
        assert annulus != cut
        assert annulus.equals_mod_relations(cut)

    def test_dotted_annulus_cut(self):
        dotted = loop_identity(1)
        cut = (Cobordism.from_blocks(S1, S1, [((0,), 1, 1), ((1,), 1, 1)])
               + Cobordism.from_blocks(S1, S1, [((0,), 0, 1), ((1,), 0, 1)]).scale(Ra))
        assert dotted.equals_mod_relations(cut)

    def test_zero_mod_relations_detects_actual_zero(self):
        assert Cobordism.zero(S1, S1).is_zero_mod_relations()
        assert not loop_identity().is_zero_mod_relations()


class TestDescribe:
    def test_stable_description(self):
        c = split().compose(merge())
        assert "{" in c.describe()
        assert c.describe() == split().compose(merge()).describe()
