"""Slice-form diagrams: parsing, PD import, composition, cabling."""

import pytest

from foamcat.diagrams import (
    DiagramError,
    Slice,
    TangleDiagram,
    braid_closure,
    cable,
    cable_crossing_count,
    compose_vertical,
    figure_eight_diagram,
    hopf_diagram,
    import_pd,
    parse_tangle,
    serialize,
    trefoil_diagram,
    unknot_diagram,
    unknot_with_kink,
)

TREFOIL_TEXT = """\
# right trefoil as a closed 2-strand braid
in: []
cup 1
cup 2
x+ 3
x+ 3
x+ 3
cap 2
cap 1
"""


class TestParsing:
    def test_trefoil_text(self):
        D = parse_tangle(TREFOIL_TEXT)
        assert D.n_crossings == 3
        assert D.num_components == 1
        assert D.is_closed()

    def test_identity_tangle(self):
        D = parse_tangle("in: [u]\nid\nout: [u]\n")
        assert D.n_crossings == 0
        assert D.top_orients == (1,)

    def test_cup_out_of_range(self):
        with pytest.raises(DiagramError, match="line 2"):
            parse_tangle("in: [u]\ncup 3\n")

    def test_malformed_slice_reports_line(self):
        with pytest.raises(DiagramError, match="line 3"):
            parse_tangle("in: []\ncup 1\nzap 2\n")

    def test_unknown_component_in_colors(self):
        with pytest.raises(DiagramError, match="component"):
            parse_tangle("in: []\ncolors: {5: 2}\ncup 1\ncap 1\n")

    def test_round_trip(self):
        for D in [trefoil_diagram(), hopf_diagram(), figure_eight_diagram(),
                  unknot_with_kink(+1), unknot_with_kink(-1),
                  parse_tangle("in: [u d]\nx+ 1\nid\nx- 1\n")]:
            assert parse_tangle(serialize(D)) == D

    def test_serialization_deterministic(self):
        D = trefoil_diagram().with_colors({0: 2})
        assert serialize(D) == serialize(parse_tangle(serialize(D)))


class TestDiagnostics:
    def test_trefoil_writhe(self):
        D = trefoil_diagram()
        rep = D.validate()
        assert rep["crossings"] == 3
        assert rep["components"] == 1
        assert rep["writhe_total"] == 3
        assert rep["writhe_per_component"] == {0: 3}

    def test_left_trefoil_writhe(self):
        assert trefoil_diagram(right=False).writhe() == -3

    def test_unlink_two_components(self):
        D = parse_tangle("in: []\ncup 1\ncap 1\ncup 1\ncap 1\n")
        rep = D.validate()
        assert rep["components"] == 2
        assert rep["writhe_total"] == 0

    def test_figure_eight_writhe_zero(self):
        assert figure_eight_diagram().writhe() == 0

    def test_kinks(self):
        assert unknot_with_kink(+1).writhe() == 1
        assert unknot_with_kink(-1).writhe() == -1

    def test_hopf(self):
        D = hopf_diagram()
        assert D.num_components == 2
        assert D.writhe() == 2
        assert D.writhe(0) == 0 and D.writhe(1) == 0

    def test_cap_orientation_conflict(self):
        with pytest.raises(DiagramError, match="orientation"):
            TangleDiagram([1, 1], [Slice("cap", 1)])


class TestCompose:
    def test_identity_compose(self):
        D = parse_tangle("in: [u d]\nx+ 1\n")
        I = parse_tangle("in: [u d]\nid\n")
        C = compose_vertical(I, D)
        assert C.n_crossings == 1
        assert C.bottom_orients == (1, -1)

    def test_cap_then_cup_unknot(self):
        bot = parse_tangle("in: []\ncup 1\n")
        top = parse_tangle("in: [u d]\ncap 1\n")
        C = compose_vertical(bot, top)
        assert C.is_closed() and C.num_components == 1

    def test_mismatch_orientation_named_point(self):
        D1 = parse_tangle("in: [u u]\nid\n")  # top: u u
        D2 = parse_tangle("in: [u d]\nid\n")
        with pytest.raises(DiagramError, match="point 2"):
            compose_vertical(D1, D2)

    def test_trefoil_from_halves(self):
        lower = TangleDiagram([], [Slice("cup", 1), Slice("cup", 2),
                                   Slice("x+", 3), Slice("x+", 3)])
        upper = TangleDiagram(lower.top_orients,
                              [Slice("x+", 3), Slice("cap", 2), Slice("cap", 1)])
        assert compose_vertical(lower, upper) == trefoil_diagram()


class TestCable:
    def test_cable_one_is_identity(self):
        for D in [trefoil_diagram(), figure_eight_diagram(),
                  parse_tangle("in: [u d]\nx+ 1\n")]:
            assert cable(D, 1) == TangleDiagram(D.bottom_orients, D.slices,
                                                D.flips)

    def test_trefoil_3_cable_crossings(self):
        D3 = cable(trefoil_diagram(), 3)
        assert D3.n_crossings == 27
        assert cable_crossing_count(trefoil_diagram(), 3) == 27

    def test_unknot_2_cable(self):
        D2 = cable(unknot_diagram(), 2)
        assert D2.n_crossings == 0
        assert D2.num_components == 2

    def test_zero_cable_empty(self):
        D0 = cable(trefoil_diagram(), 0)
        assert D0.num_components == 0
        assert not D0.slices or all(s.kind == "id" for s in D0.slices)

    def test_alternating_orientations(self):
        D2 = cable(unknot_diagram(), 2)
        # two concentric circles with opposite orientations: total writhe 0,
        # and composing with nothing keeps both components closed
        assert D2.validate()["components"] == 2
        D4 = cable(unknot_diagram(), 4)
        assert D4.num_components == 4

    def test_cable_respects_composition(self):
        lower = TangleDiagram([], [Slice("cup", 1), Slice("cup", 2),
                                   Slice("x+", 3), Slice("x+", 3)])
        upper = TangleDiagram(lower.top_orients,
                              [Slice("x+", 3), Slice("cap", 2), Slice("cap", 1)])
        m = 2
        via_whole = cable(compose_vertical(lower, upper), m)
        via_parts = compose_vertical(cable(lower, m), cable(upper, m))
        assert via_whole.slices == via_parts.slices
        assert via_whole.bottom_orients == via_parts.bottom_orients

    def test_cable_crossing_count_formula(self):
        D = hopf_diagram()
        assert cable_crossing_count(D, {0: 2, 1: 1}) == 2 * 2 * 1
        D21 = cable(D, {0: 2, 1: 1})
        assert D21.n_crossings == 4

    def test_mixed_cable_writhe_signs(self):
        # 2-cable of the positive kink: 2x2 grid, alternating orientations
        D = cable(unknot_with_kink(+1), 2)
        assert D.n_crossings == 4
        signs = sorted(D.crossing_signs())
        assert signs == [-1, -1, 1, 1]


class TestPDImport:
    def test_trefoil_pd(self):
        D = import_pd([(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)])
        assert D.is_closed()
        assert D.n_crossings == 3
        assert D.num_components == 1
        assert D.writhe() == 3

    def test_unknot_pd(self):
        D = import_pd([])
        assert D.n_crossings == 0 and D.num_components == 1

    def test_figure_eight_pd(self):
        # walked off the closure of (s1 s2^-1)^2
        D = import_pd([(4, 1, 5, 2), (2, 8, 3, 7), (8, 5, 1, 6), (6, 4, 7, 3)])
        assert D.n_crossings == 4
        assert D.num_components == 1
        assert D.writhe() == 0

    def test_repeated_edge_label_error(self):
        with pytest.raises(DiagramError, match="3 times|used"):
            import_pd([(1, 1, 2, 2), (1, 3, 3, 2)])

    def test_hopf_pd(self):
        D = import_pd([(3, 1, 4, 2), (2, 4, 1, 3)])
        assert D.num_components == 2
        assert D.writhe() == 2
