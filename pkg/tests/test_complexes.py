"""Cubes of resolutions, delooping, elimination, vertical composition."""

import pytest

from foamcat.complexes import (
    ChainMap,
    build_cube,
    compose_complexes,
    compose_complexes_indexed,
    deloop,
    gauss_eliminate,
    glue_chain_maps,
    simplify,
)
from foamcat.cobcat import Cobordism, Smoothing
from foamcat.diagrams import (
    Slice,
    TangleDiagram,
    compose_vertical,
    figure_eight_diagram,
    hopf_diagram,
    parse_tangle,
    trefoil_diagram,
    unknot_diagram,
    unknot_with_kink,
)


class TestBuildCube:
    def test_zero_crossing_unknot(self):
        C = build_cube(unknot_diagram())
        assert C.heights() == [0]
        assert len(C.objects[0]) == 1
        o = C.objects[0][0]
        assert o.smoothing.loops == 1 and o.shift == 0

    def test_kink_cube(self):
        C = build_cube(unknot_with_kink(+1))
        assert C.heights() == [0, 1]
        assert C.objects[0][0].smoothing.loops == 2
        assert C.objects[1][0].smoothing.loops == 1
        assert C.check_d_squared(mod_relations=False)
        assert C.check_degrees()

    def test_trefoil_cube_ranks(self):
        C = build_cube(trefoil_diagram())
        assert C.heights() == [0, 1, 2, 3]
        assert [len(C.objects[h]) for h in C.heights()] == [1, 3, 3, 1]

    def test_d_squared_small_corpus(self):
        for D in [unknot_with_kink(+1), unknot_with_kink(-1), hopf_diagram(),
                  trefoil_diagram(), trefoil_diagram(right=False),
                  figure_eight_diagram()]:
            C = build_cube(D)
            assert C.check_d_squared(mod_relations=False), D
            assert C.check_degrees(), D

    def test_open_tangle_cube(self):
        D = parse_tangle("in: [u d]\nx+ 1\n")
        C = build_cube(D)
        assert C.heights() == [-1, 0]  # antiparallel x+ is a negative crossing
        assert C.check_degrees()


class TestDeloop:
    def test_single_loop_object(self):
        C = build_cube(unknot_diagram())
        C2, eq = deloop(C)
        assert C2.total_objects() == 2
        shifts = sorted(o.shift for o in C2.objects[0])
        assert shifts == [-1, 1]
        # strict composite on the small side
        comp = eq.g.compose(eq.f)
        ident = ChainMap.identity(C2)
        for h, m in ident.comps.items():
            for key, cob in m.items():
                got = comp.entry(h, *key)
                assert got is not None and (got - cob).is_zero()
        for h, m in comp.comps.items():
            for (i, j), cob in m.items():
                if i != j and not cob.is_zero():
                    raise AssertionError("offdiagonal strict composite")

    def test_two_loops_gives_four(self):
        D = parse_tangle("in: []\ncup 1\ncap 1\ncup 1\ncap 1\n")
        C = build_cube(D)
        C2, _eq = deloop(C)
        assert C2.total_objects() == 4
        assert sorted(o.shift for o in C2.objects[0]) == [-2, 0, 0, 2]

    def test_loop_free_unchanged(self):
        D = parse_tangle("in: [u d]\nid\n")
        C = build_cube(D)
        C2, _eq = deloop(C)
        assert C2.total_objects() == 1

    def test_deloop_preserves_d_squared_mod_relations(self):
        C = build_cube(hopf_diagram())
        C2, _eq = deloop(C)
        assert C2.check_d_squared(mod_relations=True)
        assert C2.check_degrees()


class TestEliminate:
    def test_two_term_identity_collapses(self):
        s = Smoothing(1, 1, [(0, 1)], 0)
        o = s
        from foamcat.complexes import FormalComplex, FormalObject
        C = FormalComplex(1, 1,
                          {0: [FormalObject(o, 0)], 1: [FormalObject(o, 0)]},
                          {0: {(0, 0): Cobordism.identity(s)}})
        C2, eq = gauss_eliminate(C)
        assert C2.is_zero()

    def test_unit_i_entry_eliminated(self):
        from foamcat.complexes import FormalComplex, FormalObject
        from foamcat.ring import RingElement
        s = Smoothing(1, 1, [(0, 1)], 0)
        C = FormalComplex(1, 1,
                          {0: [FormalObject(s, 0)], 1: [FormalObject(s, 0)]},
                          {0: {(0, 0): Cobordism.identity(s).scale(
                              RingElement.imag())}})
        C2, _eq = gauss_eliminate(C)
        assert C2.is_zero()

    def test_dot_entry_not_eliminated(self):
        from foamcat.complexes import FormalComplex, FormalObject
        s = Smoothing(1, 1, [(0, 1)], 0)
        dotted = Cobordism.identity(s).add_dot("src", 0)
        C = FormalComplex(1, 1,
                          {0: [FormalObject(s, 0)], 1: [FormalObject(s, 2)]},
                          {0: {(0, 0): dotted}})
        C2, _eq = gauss_eliminate(C)
        assert C2.total_objects() == 2


class TestSimplify:
    def test_unknot_simplifies_to_two_objects(self):
        C, eq = simplify(build_cube(unknot_diagram()))
        assert C.total_objects() == 2
        assert not C.diff

    def test_kink_homotopy_type(self):
        # cube of the kinked unknot retracts to the unknot's delooped form
        C, _ = simplify(build_cube(unknot_with_kink(+1)))
        assert C.total_objects() == 2
        assert sorted(o.shift for o in C.objects[0]) == [-1, 1]
        C2, _ = simplify(build_cube(unknot_with_kink(-1)))
        assert sorted(o.shift for o in C2.objects[0]) == [-1, 1]

    def test_zero_complex(self):
        from foamcat.complexes import FormalComplex
        C, _ = simplify(FormalComplex.zero())
        assert C.is_zero()

    def test_trefoil_small(self):
        C, eq = simplify(build_cube(trefoil_diagram()))
        assert C.total_objects() <= 8
        assert C.check_d_squared()
        # strict composite f g = id
        comp = eq.f.compose(eq.g) if False else eq.g.compose(eq.f)
        # g: small->big then f: big->small gives id_small
        for h, objs in C.objects.items():
            for i in range(len(objs)):
                got = comp.entry(h, i, i)
                want = Cobordism.identity(objs[i].smoothing)
                assert got is not None and (got - want).is_zero()
                for j in range(len(objs)):
                    if j == i:
                        continue
                    e = comp.entry(h, i, j)
                    assert e is None or e.is_zero()

    def test_equivalence_chain_maps(self):
        C0 = build_cube(hopf_diagram())
        C, eq = simplify(C0)
        assert eq.f.commutes_with_differentials()
        assert eq.g.commutes_with_differentials()


class TestCompose:
    def test_single_objects_glue(self):
        bot = parse_tangle("in: []\ncup 1\n")
        top = parse_tangle("in: [u d]\ncap 1\n")
        C1 = build_cube(bot)
        C2 = build_cube(top)
        C = compose_complexes(C1, C2)
        assert C.total_objects() == 1
        assert C.objects[0][0].smoothing.loops == 1

    def test_compose_with_identity_tangle(self):
        D = parse_tangle("in: [u d]\nx+ 1\n")
        I = parse_tangle("in: [u d]\nid\n")
        C = compose_complexes(build_cube(I), build_cube(D))
        ref = build_cube(D)
        assert C.total_objects() == ref.total_objects()
        assert C.check_d_squared()

    def test_trefoil_from_halves_d_squared(self):
        lower = TangleDiagram([], [Slice("cup", 1), Slice("cup", 2),
                                   Slice("x+", 3), Slice("x+", 3)])
        upper = TangleDiagram(lower.top_orients,
                              [Slice("x+", 3), Slice("cap", 2), Slice("cap", 1)])
        C = compose_complexes(build_cube(lower), build_cube(upper))
        assert C.total_objects() == build_cube(trefoil_diagram()).total_objects()
        assert C.check_d_squared()
        assert C.check_degrees()

    def test_boundary_mismatch(self):
        D = parse_tangle("in: [u d]\nid\n")
        E = parse_tangle("in: [u u]\nid\n")
        from foamcat.diagrams import DiagramError
        with pytest.raises(DiagramError):
            compose_complexes(build_cube(D), build_cube(E))

    def test_glued_chain_maps_identity(self):
        bot = parse_tangle("in: []\ncup 1\n")
        top = parse_tangle("in: [u d]\ncap 1\n")
        C1 = build_cube(bot)
        C2 = build_cube(top)
        C, index = compose_complexes_indexed(C1, C2)
        m = glue_chain_maps(ChainMap.identity(C1), ChainMap.identity(C2),
                            C, C, index, index)
        got = m.entry(0, 0, 0)
        want = Cobordism.identity(C.objects[0][0].smoothing)
        assert got is not None and (got - want).is_zero()
