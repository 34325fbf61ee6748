"""Chain maps induced by elementary cobordism events.

Births, deaths and saddles act objectwise on cubes of resolutions.  The
Reidemeister 1/2 removal maps are produced by delooping the curl circle and
eliminating the prescribed contractible pairs, which yields the standard
strong deformation retract with its strict composite on the small side; the
retained complex is checked object-for-object against the small diagram's
cube.
"""

from __future__ import annotations

from .cobcat import Cobordism, Smoothing
from .diagrams import DiagramError, Slice, TangleDiagram
from .ring import RingElement

R_h = RingElement.gen_h()


class EventError(DiagramError):
    """An event is not applicable to the diagram."""


# -- element matching between resolutions of related diagrams --------------------


def _match_spectators(s_big: Smoothing, sigs_big, s_small: Smoothing,
                      sigs_small, translate, skip_big=()):
    """Identity pairs (big_el, small_el) for all elements outside skip_big.

    Arcs match by boundary endpoints; loops match by closing signature, with
    big-diagram signatures mapped through translate (returning None for
    events that do not survive).  Returns (pairs, unmatched_big_loops) or
    None if arcs cannot be matched.
    """
    pairs = []
    small_arc_index = {a: i for i, a in enumerate(s_small.arcs)}
    for i, a in enumerate(s_big.arcs):
        if i in skip_big:
            continue
        j = small_arc_index.get(a)
        if j is None:
            return None
        pairs.append((i, j))
    small_loop_index = {}
    for i, sig in enumerate(sigs_small):
        small_loop_index[sig] = s_small.n_arcs + i
    unmatched = []
    for i, sig in enumerate(sigs_big):
        e = s_big.n_arcs + i
        if e in skip_big:
            continue
        tsig = translate(sig)
        j = small_loop_index.get(tsig) if tsig is not None else None
        if j is None:
            unmatched.append(e)
        else:
            pairs.append((e, j))
    return pairs, unmatched


def _slice_shift_translator(shift_fn):
    """Signature translator moving only the slice index."""

    def tr(sig):
        sl, sub, pos = sig
        nsl = shift_fn(sl)
        return None if nsl is None else (nsl, sub, pos)

    return tr


# -- objectwise events: saddle, birth, death ----------------------------------------


def _insert_slices(D: TangleDiagram, level: int, newved) -> TangleDiagram:
    slices = list(D.slices)
    slices[level:level] = newved
    return TangleDiagram(D.bottom_orients, slices)


from .diagrams import inherit_orientations as _carry_orientations  # noqa: E402


from .complexes import (  # noqa: E402
    ChainMap,
    CubeData,
    Equivalence,
    FormalComplex,
    cube_with_index,
    eliminate_at,
    resolve_diagram,
    saddle_blocks,
)


def saddle_map(D: TangleDiagram, level: int, pos: int):
    """Saddle between the antiparallel strands at (level, pos), (level, pos+1).

    Returns (D2, ChainMap [D] -> [D2]) where D2 has a cap and a cup spliced
    in at the site.
    """
    w = D.widths[level] if level <= len(D.slices) else None
    if w is None or not (1 <= pos <= w - 1):
        raise EventError(f"no adjacent strand pair at level {level}, position {pos}")
    if D.component_direction(level, pos - 1) == D.component_direction(level, pos):
        raise EventError("saddle requires antiparallel adjacent strands")
    probe = _insert_slices(D, level, [Slice("cap", pos), Slice("cup", pos)])

    def lmap(plvl):
        if plvl <= level:
            return plvl
        if plvl >= level + 2:
            return plvl - 2
        return None

    D2 = _carry_orientations(D, probe, lmap)

    cube1 = cube_with_index(D)
    cube2 = cube_with_index(D2)
    translate = _slice_shift_translator(
        lambda sl: sl if sl < level else sl + 2)

    comps: dict = {}
    c = D.n_crossings
    for u, (h, j) in cube1.vertex_index.items():
        res = [0] * c
        for k in range(c):
            res[cube1.order[k]] = u[k]
        s1, _p1, sigs1, pr1 = resolve_diagram(D, res, probes=[(level, pos - 1),
                                                              (level, pos)])
        s2, _p2, sigs2, pr2 = resolve_diagram(
            D2, res, probes=[(level, pos - 1), (level, pos),
                             (level + 2, pos - 1), (level + 2, pos)])
        site_src = {pr1[(level, pos - 1)], pr1[(level, pos)]}
        site_tgt = {pr2[(level, pos - 1)], pr2[(level, pos)],
                    pr2[(level + 2, pos - 1)], pr2[(level + 2, pos)]}
        skip = set(site_src)
        res2 = _match_spectators(s1, sigs1, s2, sigs2, translate, skip)
        if res2 is None:
            raise AssertionError("saddle spectators failed to match")
        pairs, unmatched = res2
        if unmatched:
            raise AssertionError("saddle spectators failed to match loops")
        covered_tgt = {b for (_a, b) in pairs} | site_tgt
        if len(covered_tgt) != s2.n_elements:
            raise AssertionError("saddle target elements not covered")
        blocks = saddle_blocks(s1, s2, site_src, site_tgt, pairs)
        cob = Cobordism.from_blocks(s1, s2, blocks)
        (h2, i) = cube2.vertex_index[u]
        if h2 != h:
            raise AssertionError("saddle changed cube heights")
        comps.setdefault(h, {})[(i, j)] = cob
    return D2, ChainMap(cube1.complex, cube2.complex, comps)


def birth_map(D: TangleDiagram, level: int, pos: int):
    """Birth of a free circle at (level, pos): returns (D2, [D] -> [D2])."""
    w = D.widths[level] if level <= len(D.slices) else None
    if w is None or not (1 <= pos <= w + 1):
        raise EventError(f"cannot place a circle at level {level}, position {pos}")
    probe = _insert_slices(D, level, [Slice("cup", pos), Slice("cap", pos)])

    def lmap(plvl):
        if plvl <= level:
            return plvl
        if plvl >= level + 2:
            return plvl - 2
        return None

    D2 = _carry_orientations(D, probe, lmap)
    return D2, _disc_map(D, D2, (level + 1, 0, pos), birth=True,
                         translate=_slice_shift_translator(
                             lambda sl: sl if sl < level else sl + 2))


def death_map(D: TangleDiagram, component: int):
    """Death of a crossing-free closed circle of D (component index).

    Returns (D2, ChainMap) where D2 is D with the circle's slices removed.
    """
    if component not in D._closed_components:
        raise EventError(f"component {component} is not a closed circle")
    for x in D.crossings:
        if component in x["components"]:
            raise EventError("dying circle passes through a crossing")

    circ = {lvl: sorted(p for p in range(D.widths[lvl])
                        if D.component_at(lvl, p) == component)
            for lvl in range(len(D.slices) + 1)}

    def pos_shift(lvl, pos1):
        return sum(1 for c in circ[lvl] if c < pos1 - 1)

    new_slices = []
    slice_map = {}
    closing_cap = None
    for k, s in enumerate(D.slices):
        q = s.pos - 1
        if s.kind == "cup":
            mine = D.component_at(k + 1, q) == component
        elif s.kind == "cap":
            mine = D.component_at(k, q) == component
            if mine:
                closing_cap = (k, 0, s.pos)
        else:
            mine = False
        if mine:
            continue
        slice_map[k] = len(new_slices)
        if s.kind == "id":
            new_slices.append(s)
        else:
            new_slices.append(Slice(s.kind, s.pos - pos_shift(k, s.pos)))
    if closing_cap is None:
        raise EventError("circle has no closing cap")

    probe = TangleDiagram(D.bottom_orients, new_slices)
    inv_map = {v: k for k, v in slice_map.items()}

    def lmap(plvl):
        if plvl == 0:
            return 0
        if (plvl - 1) in inv_map:
            return inv_map[plvl - 1] + 1
        return None

    D2 = _carry_orientations(D, probe, lmap)

    def translate(sig):
        sl, sub, pos = sig
        if sl not in slice_map:
            return None
        return (slice_map[sl], sub, pos - pos_shift(sl, pos))

    return D2, _disc_map(D, D2, closing_cap, birth=False, translate=translate)


def _disc_map(D, D2, circle_sig, birth: bool, translate):
    """Shared builder for birth (D -> D2 gains circle) and death maps.

    For birth=True the circle lives in D2 with the given signature under D2's
    slice indexing and translate maps D slices to D2 slices; for death the
    circle lives in D (signature in D's indexing) and translate maps D to D2.
    """
    cube1 = cube_with_index(D)
    cube2 = cube_with_index(D2)
    comps: dict = {}
    c = D.n_crossings
    for u, (h, j) in cube1.vertex_index.items():
        res = [0] * c
        for k in range(c):
            res[cube1.order[k]] = u[k]
        s1, _p, sigs1, _ = resolve_diagram(D, res)
        s2, _p2, sigs2, _ = resolve_diagram(D2, res)
        if birth:
            try:
                idx = sigs2.index(circle_sig)
            except ValueError:
                raise AssertionError("birth circle not found in target")
            e_new = s2.n_arcs + idx
            out = _match_spectators(s1, sigs1, s2, sigs2, translate)
            if out is None or out[1]:
                raise AssertionError("birth spectators failed to match")
            pairs = out[0]
            blocks = [((a, s1.n_elements + b), 0,
                       1 if a < s1.n_arcs else 0) for (a, b) in pairs]
            blocks.append(((s1.n_elements + e_new,), 0, 1))
        else:
            try:
                idx = sigs1.index(circle_sig)
            except ValueError:
                raise AssertionError("dying circle not found in source")
            e_old = s1.n_arcs + idx
            out = _match_spectators(s1, sigs1, s2, sigs2, translate,
                                    skip_big={e_old})
            if out is None or out[1]:
                raise AssertionError("death spectators failed to match")
            pairs = out[0]
            blocks = [((a, s1.n_elements + b), 0,
                       1 if a < s1.n_arcs else 0) for (a, b) in pairs]
            blocks.append(((e_old,), 0, 1))
        cob = Cobordism.from_blocks(s1, s2, blocks)
        h2, i = cube2.vertex_index[u]
        if h2 != h:
            raise AssertionError("disc event changed cube heights")
        comps.setdefault(h, {})[(i, j)] = cob
    return ChainMap(cube1.complex, cube2.complex, comps)


# -- Reidemeister removals via targeted simplification --------------------------------


class _Workspace:
    """A complex with stable object handles surviving eliminations."""

    def __init__(self, C: FormalComplex):
        self.C = C
        self.eq = Equivalence.identity(C)
        self.uids = {}
        nxt = 0
        for h in C.heights():
            self.uids[h] = list(range(nxt, nxt + len(C.objects[h])))
            nxt += len(C.objects[h])

    def locate(self, uid):
        for h, lst in self.uids.items():
            if uid in lst:
                return h, lst.index(uid)
        return None

    def eliminate(self, uid_src, uid_tgt):
        loc1 = self.locate(uid_src)
        loc2 = self.locate(uid_tgt)
        if loc1 is None or loc2 is None:
            raise AssertionError("pivot object vanished")
        h, j_p = loc1
        h2, i_p = loc2
        if h2 != h + 1:
            raise AssertionError("pivot heights mismatched")
        C2, eq, (map_h, map_h1) = eliminate_at(self.C, h, i_p, j_p, True)
        self.C = C2
        self.eq = self.eq.then(eq)
        self.uids[h] = [u for idx, u in enumerate(self.uids[h]) if idx != j_p]
        self.uids[h + 1] = [u for idx, u in enumerate(self.uids[h + 1])
                            if idx != i_p]
        for hh in (h, h + 1):
            if not self.uids.get(hh):
                self.uids.pop(hh, None)


def _deloop_selected(C: FormalComplex, selected):
    """Deloop one chosen loop per selected object.

    selected: dict (h, idx) -> loop_index.  Returns (C2, Equivalence,
    fan: dict (h, idx) -> ((h, new_minus), (h, new_plus)) and ident: dict
    (h, idx) -> (h, new_idx) for untouched objects).
    """
    from .complexes import _birth_cobordism, _cap_cobordism, FormalObject
    from .complexes import ChainMap as CM

    new_objects: dict = {}
    fan_out = {}
    placement = {}
    for h in C.heights():
        lst = []
        for j, o in enumerate(C.objects[h]):
            s = o.smoothing
            if (h, j) in selected:
                li = selected[(h, j)]
                small = s.drop_loop(li)
                f_minus = _cap_cobordism(s, li, 1) - _cap_cobordism(s, li, 0).scale(R_h)
                f_plus = _cap_cobordism(s, li, 0)
                g_minus = _birth_cobordism(small, li, 0, s)
                g_plus = _birth_cobordism(small, li, 1, s)
                i_minus = len(lst)
                lst.append(FormalObject(small, o.shift - 1))
                i_plus = len(lst)
                lst.append(FormalObject(small, o.shift + 1))
                fan_out[(h, j)] = [(i_minus, f_minus, g_minus),
                                   (i_plus, f_plus, g_plus)]
                placement[(h, j)] = ((h, i_minus), (h, i_plus))
            else:
                idx = len(lst)
                lst.append(o)
                ident = Cobordism.identity(s)
                fan_out[(h, j)] = [(idx, ident, ident)]
                placement[(h, j)] = ((h, idx),)
        new_objects[h] = lst

    new_diff: dict = {}
    for h, entries in C.diff.items():
        out = new_diff.setdefault(h, {})
        for (i, j), cob in entries.items():
            for (j2, _fj, gj) in fan_out[(h, j)]:
                half = gj.compose(cob)
                if half.is_zero():
                    continue
                for (i2, fi, _gi) in fan_out[(h + 1, i)]:
                    comp = half.compose(fi)
                    if comp.is_zero():
                        continue
                    key = (i2, j2)
                    cur = out.get(key)
                    comp = comp if cur is None else cur + comp
                    if comp.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = comp
    C2 = FormalComplex(C.nb, C.nt, new_objects, new_diff,
                       C.bottom_orients, C.top_orients)
    f_comps: dict = {}
    g_comps: dict = {}
    for (h, j), fan in fan_out.items():
        fm = f_comps.setdefault(h, {})
        gm = g_comps.setdefault(h, {})
        for (i2, f_cob, g_cob) in fan:
            fm[(i2, j)] = f_cob
            gm[(j, i2)] = g_cob
    eq = Equivalence(CM(C, C2, f_comps), CM(C2, C, g_comps))
    return C2, eq, placement


def _relabel_map(C_from: FormalComplex, C_to: FormalComplex, assignment):
    """Identity-cobordism chain map along a bijection (h, i_from) -> (h, i_to)."""
    comps: dict = {}
    for (h, i_from), (h2, i_to) in assignment.items():
        if h != h2:
            raise AssertionError("relabeling across heights")
        o1 = C_from.objects[h][i_from]
        o2 = C_to.objects[h2][i_to]
        if o1 != o2:
            raise AssertionError("relabeled objects differ")
        comps.setdefault(h, {})[(i_to, i_from)] = Cobordism.identity(o1.smoothing)
    return ChainMap(C_from, C_to, comps)


def crossing_removal(D: TangleDiagram, slice_indices, D2=None):
    """Remove the crossings at the given slices by the R1/R2 retraction.

    slice_indices: the slices to delete from D (for an R2 pair: the two
    crossing slices; for an R1 curl: cup, crossing, cap).  Exactly one
    crossing branch must produce a free circle; the branch matching D2's
    cube object-for-object is retained.  Returns (D2, f, g) with
    f: [D] -> [D2], g backwards, f g = id strictly.
    """
    kill = sorted(slice_indices)
    cr_slices = [k for k in kill if D.slices[k].kind in ("x+", "x-")]
    if not cr_slices:
        raise EventError("no crossing among the removed slices")
    cr_ids = [ci for ci, x in enumerate(D.crossings)
              if x["slice"] in cr_slices]
    if len(cr_ids) != len(cr_slices):
        raise AssertionError("crossing bookkeeping out of sync")
    if D2 is None:
        slices = [s for k, s in enumerate(D.slices) if k not in kill]
        probe = TangleDiagram(D.bottom_orients, slices)

        def lmap(plvl):
            # probe level -> D level: reinsert the removed slices below
            dl = plvl
            for k in kill:
                if k < dl:
                    dl += 1
            return dl

        D2 = _carry_orientations(D, probe, lmap)

    def translate(sl):
        if sl in kill:
            return None
        return sl - sum(1 for k in kill if k < sl)

    keep_ids = [ci for ci in range(D.n_crossings) if ci not in cr_ids]
    order = keep_ids + cr_ids
    cube_big = cube_with_index(D, order)
    cube_small = cube_with_index(D2)
    nk = len(keep_ids)
    m = len(cr_ids)
    c = D.n_crossings

    def res_list(u):
        res = [0] * c
        for k in range(c):
            res[order[k]] = u[k]
        return res

    # classify branch vectors on the all-zero spectator resolution
    u0 = (0,) * nk
    small_res0 = [0] * D2.n_crossings
    s_small0, _pp, sigs_small0, _ = resolve_diagram(D2, small_res0)
    circle_branch = None
    retained_branch = None
    branch_info = {}
    for bm in range(1 << m):
        r = tuple((bm >> t) & 1 for t in range(m))
        s_b, _p, sigs_b, _ = resolve_diagram(D, res_list(u0 + r))
        out = _match_spectators(s_b, sigs_b, s_small0, sigs_small0, translate)
        if out is None:
            continue
        pairs, unmatched = out
        if len(unmatched) == 0 and s_b.loops == s_small0.loops and \
                s_b.arcs == s_small0.arcs:
            branch_info[r] = "plain"
        elif len(unmatched) == 1 and s_b.loops == s_small0.loops + 1 and \
                s_b.arcs == s_small0.arcs:
            branch_info[r] = "circle"
    circles = [r for r, kind in branch_info.items() if kind == "circle"]
    if len(circles) != 1:
        raise EventError("removed crossings do not form a single curl circle")
    circle_branch = circles[0]

    # deloop the curl circle in every circle-branch object
    selected = {}
    for mu in range(1 << nk):
        u = tuple((mu >> t) & 1 for t in range(nk))
        s_b, _p, sigs_b, _ = resolve_diagram(D, res_list(u + circle_branch))
        # kept crossings appear in D2 in the same slice order
        res_small = list(u)
        s_s, _ps, sigs_s, _ = resolve_diagram(D2, res_small)
        out = _match_spectators(s_b, sigs_b, s_s, sigs_s, translate)
        if out is None or len(out[1]) != 1:
            raise EventError("curl circle is not coherent across resolutions")
        e_circle = out[1][0]
        (h, idx) = cube_big.vertex_index[u + circle_branch]
        selected[(h, idx)] = e_circle - s_b.n_arcs
    Cd, eq_deloop, placement = _deloop_selected(cube_big.complex, selected)

    ws = _Workspace(Cd)
    ws.eq = eq_deloop.then(ws.eq)
    uid_lookup = {}
    for h, lst in ws.uids.items():
        for idx, uid in enumerate(lst):
            uid_lookup[(h, idx)] = uid

    def uid_at(h, idx):
        return uid_lookup[(h, idx)]

    retained_uids = {}
    for mu in range(1 << nk):
        u = tuple((mu >> t) & 1 for t in range(nk))
        h_c, idx_c = cube_big.vertex_index[u + circle_branch]
        (loc_minus, loc_plus) = placement[(h_c, idx_c)]
        sh_minus = Cd.objects[loc_minus[0]][loc_minus[1]].shift
        hs, is_ = cube_small.vertex_index[tuple(u)]
        small_shift = cube_small.complex.objects[hs][is_].shift
        keep_loc = loc_minus if sh_minus == small_shift else loc_plus
        retained_uids[u] = (uid_at(*keep_loc), hs, is_)

    # eliminate: every non-retained object must die; pivots pair the dropped
    # copies and the plain branches along unit entries
    retained_set = {v[0] for v in retained_uids.values()}

    def run_eliminations():
        progress = True
        while progress:
            progress = False
            for h in sorted(ws.C.heights()):
                entries = ws.C.diff.get(h, {})
                found = None
                for (i, j) in sorted(entries):
                    cob = entries[(i, j)]
                    if ws.C.objects[h][j] != ws.C.objects[h + 1][i]:
                        continue
                    if cob.is_unit_identity() is None:
                        continue
                    u1 = ws.uids[h][j]
                    u2 = ws.uids[h + 1][i]
                    if u1 in retained_set or u2 in retained_set:
                        continue
                    found = (u1, u2)
                    break
                if found:
                    ws.eliminate(*found)
                    progress = True
                    break

    run_eliminations()
    livebuids = {u for lst in ws.uids.values() for u in lst}
    if livebuids != retained_set:
        raise AssertionError("curl retraction left unexpected objects")

    # identify the retained complex with the small cube
    assignment = {}
    for u, (uid, hs, is_) in retained_uids.items():
        loc = ws.locate(uid)
        if loc is None:
            raise AssertionError("retained object vanished")
        if loc[0] != hs:
            raise AssertionError("retained heights disagree with the small cube")
        assignment[loc] = (hs, is_)
    iso_f = _relabel_map(ws.C, cube_small.complex, assignment)
    iso_g = _relabel_map(cube_small.complex, ws.C,
                         {v: k for k, v in assignment.items()})
    # differentials must agree on the nose
    for h, ent in ws.C.diff.items():
        for (i, j), cob in ent.items():
            hs1, js = assignment[(h, j)]
            hs2, is_ = assignment[(h + 1, i)]
            small_cob = cube_small.complex.entry(hs1, is_, js)
            if small_cob is None or not (small_cob - cob).is_zero():
                raise AssertionError("retained differential differs from the "
                                     "small cube")
    f = ws.eq.f.compose(iso_f)
    g = iso_g.compose(ws.eq.g)
    return D2, f, g


def r2_removal(D: TangleDiagram, slice_a: int, slice_b: int, D2=None):
    """Remove a poke pair of crossings; returns (D2, f, g)."""
    for k in (slice_a, slice_b):
        if not (0 <= k < len(D.slices)) or D.slices[k].kind not in ("x+", "x-"):
            raise EventError(f"slice {k} is not a crossing")
    if D.slices[slice_a].kind == D.slices[slice_b].kind:
        raise EventError("a poke pair needs crossings of opposite kinds")
    return crossing_removal(D, [slice_a, slice_b], D2)


def r1_removal(D: TangleDiagram, slice_start: int, D2=None):
    """Remove a curl spanning slices [slice_start, slice_start+3)."""
    ks = list(range(slice_start, slice_start + 3))
    if ks[-1] >= len(D.slices):
        raise EventError("curl slices out of range")
    kinds = sorted(D.slices[k].kind for k in ks)
    if kinds != ["cap", "cup", "x+"] and kinds != ["cap", "cup", "x-"]:
        raise EventError("slices do not form a curl")
    return crossing_removal(D, ks, D2)


# -- movies ----------------------------------------------------------------------------


def event_map(D: TangleDiagram, event):
    """One elementary event on D: returns (D2, forward map[, backward map]).

    event: ("birth", level, pos) | ("death", cup_slice)
         | ("saddle", level, pos) | ("r2-", slice_a, slice_b)
         | ("r1-", slice_start) | ("r2+", ...) is the g of the removal.
    """
    kind = event[0]
    if kind == "birth":
        D2, f = birth_map(D, event[1], event[2])
        return D2, f, None
    if kind == "death":
        D2, f = death_map(D, event[1])
        return D2, f, None
    if kind == "saddle":
        D2, f = saddle_map(D, event[1], event[2])
        return D2, f, None
    if kind == "r2-":
        D2, f, g = r2_removal(D, event[1], event[2])
        return D2, f, g
    if kind == "r1-":
        D2, f, g = r1_removal(D, event[1])
        return D2, f, g
    raise EventError(f"unknown event {kind!r}")


def movie_map(D: TangleDiagram, events):
    """Compose the chain maps of a list of events; returns (D_final, map).

    The empty movie gives the identity chain map of the cube of D.
    """
    from .complexes import build_cube
    cur = D
    total = None
    for ev in events:
        D2, f, _g = event_map(cur, ev)
        total = f if total is None else total.compose(f)
        cur = D2
    if total is None:
        return D, ChainMap.identity(build_cube(D))
    return cur, total
