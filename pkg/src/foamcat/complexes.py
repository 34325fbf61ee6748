"""Formal complexes over the cobordism category.

A FormalComplex holds grading-shifted smoothings per cohomological height
with cobordism-matrix differentials.  The cube of resolutions, delooping,
Gaussian elimination (with homotopy-equivalence transport), and vertical
composition live here; chain maps induced by elementary cobordism events
are in movies.py and re-exported.

Grading: vertex u sits at height |u| - n_minus with quantum shift
2*n_minus - n_plus - |u|.  With deg(1) = -1, deg(X) = +1 the saddle has
degree +1, so shifts must fall along the differential for every entry to be
degree homogeneous of degree 0; the unknot still computes to q^-1 + q and
all acceptance identities are internally consistent (this is the mirror of
the classical Khovanov shift convention).
"""

from __future__ import annotations

from .cobcat import Cobordism, Smoothing
from .diagrams import DiagramError, TangleDiagram
from .ring import RingElement

R_one = RingElement.one()
R_h = RingElement.gen_h()


class FormalObject:
    __slots__ = ("smoothing", "shift")

    def __init__(self, smoothing: Smoothing, shift: int):
        self.smoothing = smoothing
        self.shift = int(shift)

    def __eq__(self, other):
        if not isinstance(other, FormalObject):
            return NotImplemented
        return self.smoothing == other.smoothing and self.shift == other.shift

    def __hash__(self):
        return hash((self.smoothing, self.shift))

    def __repr__(self):
        return f"Obj(loops={self.smoothing.loops}, arcs={self.smoothing.arcs}, q={self.shift})"


class FormalComplex:
    """Bounded complex of formal objects with cobordism differentials.

    objects: dict height -> list[FormalObject]
    diff:    dict height -> dict (i, j) -> Cobordism  (objects[h][j] -> objects[h+1][i])
    """

    def __init__(self, nb, nt, objects, diff, bottom_orients=None, top_orients=None):
        self.nb = nb
        self.nt = nt
        self.objects = {h: list(objs) for h, objs in objects.items() if objs}
        self.diff = {h: dict(m) for h, m in diff.items() if m}
        self.bottom_orients = tuple(bottom_orients) if bottom_orients is not None else None
        self.top_orients = tuple(top_orients) if top_orients is not None else None

    # -- structure ------------------------------------------------------------

    def heights(self):
        return sorted(self.objects)

    def total_objects(self) -> int:
        return sum(len(v) for v in self.objects.values())

    def entry(self, h, i, j) -> Cobordism | None:
        return self.diff.get(h, {}).get((i, j))

    @staticmethod
    def single_object(smoothing: Smoothing, shift=0, height=0,
                      bottom_orients=None, top_orients=None) -> "FormalComplex":
        return FormalComplex(smoothing.nb, smoothing.nt,
                             {height: [FormalObject(smoothing, shift)]}, {},
                             bottom_orients, top_orients)

    @staticmethod
    def zero(nb=0, nt=0) -> "FormalComplex":
        return FormalComplex(nb, nt, {}, {})

    def is_zero(self) -> bool:
        return not self.objects

    # -- audits -----------------------------------------------------------------

    def check_d_squared(self, mod_relations=True) -> bool:
        for h in self.heights():
            d0 = self.diff.get(h)
            d1 = self.diff.get(h + 1)
            if not d0 or not d1:
                continue
            acc: dict = {}
            for (i, j), c in d0.items():
                for (k, i2), c2 in d1.items():
                    if i2 != i:
                        continue
                    comp = c.compose(c2)
                    key = (k, j)
                    acc[key] = acc[key] + comp if key in acc else comp
            for comp in acc.values():
                if comp.is_zero():
                    continue
                if mod_relations and comp.is_zero_mod_relations():
                    continue
                return False
        return True

    def check_degrees(self) -> bool:
        """Every differential entry is degree homogeneous of degree 0."""
        for h, entries in self.diff.items():
            src_objs = self.objects[h]
            tgt_objs = self.objects[h + 1]
            for (i, j), c in entries.items():
                if c.is_zero():
                    continue
                d = c.degree()  # raises if inhomogeneous
                if d != src_objs[j].shift - tgt_objs[i].shift:
                    return False
        return True

    def dump(self) -> str:
        """Deterministic debug dump of objects and differential entries."""
        lines = []
        for h in self.heights():
            for idx, o in enumerate(self.objects[h]):
                lines.append(f"h={h} #{idx} loops={o.smoothing.loops} "
                             f"arcs={o.smoothing.arcs} q={o.shift}")
        for h in sorted(self.diff):
            for (i, j) in sorted(self.diff[h]):
                c = self.diff[h][(i, j)]
                lines.append(f"d[{h}] ({j} -> {i}): {c.describe()}")
        return "\n".join(lines) + "\n"


class ChainMap:
    """Per-height cobordism matrices from src to tgt complex.

    comps: dict height -> dict (tgt_idx, src_idx) -> Cobordism
    """

    def __init__(self, src: FormalComplex, tgt: FormalComplex, comps,
                 height_shift: int = 0):
        self.src = src
        self.tgt = tgt
        self.comps = {h: dict(m) for h, m in comps.items() if m}
        self.height_shift = height_shift

    @staticmethod
    def identity(C: FormalComplex) -> "ChainMap":
        comps = {}
        for h, objs in C.objects.items():
            comps[h] = {(i, i): Cobordism.identity(o.smoothing)
                        for i, o in enumerate(objs)}
        return ChainMap(C, C, comps)

    @staticmethod
    def zero(src: FormalComplex, tgt: FormalComplex) -> "ChainMap":
        return ChainMap(src, tgt, {})

    def entry(self, h, i, j) -> Cobordism | None:
        return self.comps.get(h, {}).get((i, j))

    def compose(self, other: "ChainMap") -> "ChainMap":
        """other after self (self: A->B, other: B->C)."""
        comps: dict = {}
        for h, m1 in self.comps.items():
            h2 = h + self.height_shift
            m2 = other.comps.get(h2)
            if not m2:
                continue
            out = comps.setdefault(h, {})
            by_src: dict = {}
            for (k, i), c2 in m2.items():
                by_src.setdefault(i, []).append((k, c2))
            for (i, j), c1 in m1.items():
                for (k, c2) in by_src.get(i, ()):
                    comp = c1.compose(c2)
                    if comp.is_zero():
                        continue
                    key = (k, j)
                    cur = out.get(key)
                    comp = comp if cur is None else cur + comp
                    if comp.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = comp
        comps = {h: m for h, m in comps.items() if m}
        return ChainMap(self.src, other.tgt, comps,
                        self.height_shift + other.height_shift)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.height_shift != other.height_shift:
            raise ValueError("height shift mismatch")
        comps = {h: dict(m) for h, m in self.comps.items()}
        for h, m in other.comps.items():
            out = comps.setdefault(h, {})
            for k, c in m.items():
                cur = out.get(k)
                c2 = c if cur is None else cur + c
                if c2.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = c2
        return ChainMap(self.src, self.tgt, comps, self.height_shift)

    def scale(self, r) -> "ChainMap":
        return ChainMap(self.src, self.tgt,
                        {h: {k: c.scale(r) for k, c in m.items()}
                         for h, m in self.comps.items()}, self.height_shift)

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self) -> bool:
        return all(c.is_zero() for m in self.comps.values() for c in m.values())

    def commutes_with_differentials(self, mod_relations=True) -> bool:
        """reduce(d f - f d) == 0, height-shift aware."""
        hs = self.height_shift
        heights = set(self.src.objects) | set(self.comps)
        for h in sorted(heights):
            acc: dict = {}
            m = self.comps.get(h, {})
            d_src = self.src.diff.get(h, {})
            m_up = self.comps.get(h + 1, {})
            d_tgt = self.tgt.diff.get(h + hs, {})
            # f then d_tgt
            by_src: dict = {}
            for (k, i), c2 in d_tgt.items():
                by_src.setdefault(i, []).append((k, c2))
            for (i, j), c1 in m.items():
                for (k, c2) in by_src.get(i, ()):
                    comp = c1.compose(c2)
                    key = (k, j)
                    acc[key] = acc[key] + comp if key in acc else comp
            # d_src then f (minus)
            by_src2: dict = {}
            for (k, i), c2 in m_up.items():
                by_src2.setdefault(i, []).append((k, c2))
            for (i, j), c1 in d_src.items():
                for (k, c2) in by_src2.get(i, ()):
                    comp = c1.compose(c2).scale(-1)
                    key = (k, j)
                    acc[key] = acc[key] + comp if key in acc else comp
            for comp in acc.values():
                if comp.is_zero():
                    continue
                if mod_relations and comp.is_zero_mod_relations():
                    continue
                return False
        return True

    def degree(self) -> int:
        """Uniform deg(entry) + shift(tgt) - shift(src); error if mixed."""
        degs = set()
        hs = self.height_shift
        for h, m in self.comps.items():
            for (i, j), c in m.items():
                if c.is_zero():
                    continue
                q1 = self.src.objects[h][j].shift
                q2 = self.tgt.objects[h + hs][i].shift
                degs.add(c.degree() + q2 - q1)
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous chain map: degrees {sorted(degs)}")
        return degs.pop()


class Equivalence:
    """A pair f: big -> small, g: small -> big with f g = id_small strictly."""

    def __init__(self, f: ChainMap, g: ChainMap):
        self.f = f
        self.g = g

    @staticmethod
    def identity(C: FormalComplex) -> "Equivalence":
        i = ChainMap.identity(C)
        return Equivalence(i, i)

    def then(self, other: "Equivalence") -> "Equivalence":
        """self: C ~ C1, other: C1 ~ C2."""
        return Equivalence(self.f.compose(other.f), other.g.compose(self.g))


# -- resolving diagrams ------------------------------------------------------------


def resolve_diagram(D: TangleDiagram, resolution, probes=()):
    """Resolve every crossing of D (0 or 1 per crossing, slice order).

    Returns (Smoothing, ports, loop_signatures, probe_elements):
      ports: per crossing index, a 4-tuple of element ids
             (lower-left, lower-right, upper-left, upper-right);
      loop_signatures: per loop index, its closing event (slice, sub, pos);
      probe_elements: element id per requested (level, pos) probe.
    """
    nb = len(D.bottom_orients)
    parent = {}
    endpoints = {}

    def add(x):
        parent[x] = x
        endpoints[x] = []

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return ra, True
        parent[rb] = ra
        endpoints[ra] = endpoints[ra] + endpoints[rb]
        return ra, False

    cur = []
    for p in range(nb):
        add(("b", p))
        endpoints[("b", p)].append(p)
        cur.append(("b", p))
    fresh = 0
    loops = []  # (signature, root marker)
    probe_set = dict()
    probes = list(probes)
    probe_out = {}
    for (lvl, pos) in probes:
        probe_set.setdefault(lvl, []).append(pos)

    def take_probes(level):
        for pos in probe_set.get(level, ()):
            probe_out[(level, pos)] = cur[pos]

    take_probes(0)
    cross_idx = -1
    ports = {}
    k_cross = {c["slice"]: ci for ci, c in enumerate(D.crossings)}
    for k, s in enumerate(D.slices):
        if s.kind == "id":
            take_probes(k + 1)
            continue
        q = s.pos - 1
        if s.kind in ("x+", "x-"):
            ci = k_cross[k]
            r = resolution[ci]
            vertical = (r == 0) if s.kind == "x+" else (r == 1)
            low = (cur[q], cur[q + 1])
            if vertical:
                up = (cur[q], cur[q + 1])
            else:
                root, closed = union(cur[q], cur[q + 1])
                if closed:
                    loops.append(((k, 1, s.pos), root))
                nid = ("c", fresh)
                fresh += 1
                add(nid)
                cur[q] = nid
                cur[q + 1] = nid
                up = (nid, nid)
            ports[ci] = (low[0], low[1], up[0], up[1])
        elif s.kind == "cup":
            nid = ("c", fresh)
            fresh += 1
            add(nid)
            cur.insert(q, nid)
            cur.insert(q + 1, nid)
        elif s.kind == "cap":
            root, closed = union(cur[q], cur[q + 1])
            if closed:
                loops.append(((k, 0, s.pos), root))
            del cur[q:q + 2]
        take_probes(k + 1)

    nt = len(cur)
    for p, x in enumerate(cur):
        endpoints[find(x)].append(nb + p)

    arcs = []
    for x in parent:
        if find(x) == x:
            eps = endpoints[x]
            if len(eps) == 2:
                arcs.append((min(eps), max(eps)))
            elif len(eps) != 0:
                raise AssertionError("strand with one endpoint")
    smoothing = Smoothing(nb, nt, arcs, len(loops))
    arc_index = {a: i for i, a in enumerate(smoothing.arcs)}
    el_of_root = {}
    for x in parent:
        if find(x) != x:
            continue
        eps = endpoints[x]
        if len(eps) == 2:
            el_of_root[x] = arc_index[(min(eps), max(eps))]
    for li, (sig, root) in enumerate(loops):
        el_of_root[root] = smoothing.n_arcs + li

    def element_of(marker):
        return el_of_root[find(marker)]

    ports_el = {ci: tuple(element_of(m) for m in ms) for ci, ms in ports.items()}
    probe_el = {key: element_of(m) for key, m in probe_out.items()}
    signatures = [sig for (sig, _root) in loops]
    return smoothing, ports_el, signatures, probe_el


def identity_chi(smoothing: Smoothing, el: int) -> int:
    return 1 if el < smoothing.n_arcs else 0


def saddle_blocks(s_src: Smoothing, s_tgt: Smoothing, src_site, tgt_site,
                  match_pairs):
    """Blocks of a one-band cobordism: a band at the site, sheets elsewhere.

    src_site / tgt_site: element ids touched by the band on each side;
    match_pairs: (src_el, tgt_el) identity pairs covering everything else.
    """
    ns = s_src.n_elements
    site_src = sorted(set(src_site))
    site_tgt = sorted(set(tgt_site))
    chi = sum(identity_chi(s_src, e) for e in site_src) - 1
    blocks = [(tuple(site_src + [ns + e for e in site_tgt]), 0, chi)]
    for (a, b) in match_pairs:
        blocks.append(((a, ns + b), 0, identity_chi(s_src, a)))
    return blocks


class CubeData:
    """A cube of resolutions plus vertex bookkeeping for event maps."""

    def __init__(self, complex, vertex_index, res_of, order):
        self.complex = complex
        self.vertex_index = vertex_index  # u tuple -> (height, idx)
        self.res_of = res_of              # u tuple -> (smoothing, ports, sigs, probes)
        self.order = order


def cube_with_index(D: TangleDiagram, cube_order=None) -> CubeData:
    """The 2^c-vertex cube of resolutions of D.

    cube_order: permutation of crossing indices giving the sign/coordinate
    ordering (defaults to slice order).  Vertex u sits at height |u| - n-,
    quantum shift 2n- - n+ - |u|; edges carry saddle cobordisms with sign
    (-1)^(number of 1s before the flipped coordinate).
    """
    c = D.n_crossings
    order = list(range(c)) if cube_order is None else list(cube_order)
    if sorted(order) != list(range(c)):
        raise ValueError("cube_order must be a permutation of the crossings")
    n_plus, n_minus = D.n_pos_neg()

    cache = {}

    def res_of(u):
        res = [0] * c
        for k in range(c):
            res[order[k]] = u[k]
        key = tuple(res)
        if key not in cache:
            cache[key] = resolve_diagram(D, key)
        return cache[key]

    objects: dict = {}
    index_of = {}
    shift0 = 2 * n_minus - n_plus
    for m in range(1 << c):
        u = tuple((m >> k) & 1 for k in range(c))
        h = sum(u) - n_minus
        smoothing, _ports, _sigs, _pr = res_of(u)
        obj = FormalObject(smoothing, shift0 - sum(u))
        lst = objects.setdefault(h, [])
        index_of[u] = (h, len(lst))
        lst.append(obj)

    diff: dict = {}
    for m in range(1 << c):
        u = tuple((m >> k) & 1 for k in range(c))
        s_u, ports_u, sigs_u, _ = res_of(u)
        h, j = index_of[u]
        for k in range(c):
            if u[k]:
                continue
            v = tuple(1 if t == k else u[t] for t in range(c))
            s_v, ports_v, sigs_v, _ = res_of(v)
            _h2, i = index_of[v]
            cob = _edge_cobordism(s_u, s_v, ports_u[order[k]],
                                  ports_v[order[k]], sigs_u, sigs_v)
            sign = (-1) ** sum(u[:k])
            if sign < 0:
                cob = cob.scale(-1)
            diff.setdefault(h, {})[(i, j)] = cob
    C = FormalComplex(len(D.bottom_orients), len(D.top_orients), objects,
                      diff, D.bottom_orients, D.top_orients)
    return CubeData(C, index_of, res_of, order)


def build_cube(D: TangleDiagram, cube_order=None) -> FormalComplex:
    return cube_with_index(D, cube_order).complex


def _edge_cobordism(s_u: Smoothing, s_v: Smoothing, ports_u, ports_v,
                    sigs_u, sigs_v) -> Cobordism:
    site_src = set(ports_u)
    site_tgt = set(ports_v)
    pairs = []
    # arcs match by endpoints, loops by closing signature
    tgt_arc_index = {a: i for i, a in enumerate(s_v.arcs)}
    for i, a in enumerate(s_u.arcs):
        if i in site_src:
            continue
        j = tgt_arc_index.get(a)
        if j is None or (j in site_tgt):
            raise AssertionError("unmatched spectator arc in edge cobordism")
        pairs.append((i, j))
    tgt_loop_index = {sig: s_v.n_arcs + i for i, sig in enumerate(sigs_v)}
    for i, sig in enumerate(sigs_u):
        e = s_u.n_arcs + i
        if e in site_src:
            continue
        j = tgt_loop_index.get(sig)
        if j is None or (j in site_tgt):
            raise AssertionError("unmatched spectator loop in edge cobordism")
        pairs.append((e, j))
    blocks = saddle_blocks(s_u, s_v, site_src, site_tgt, pairs)
    return Cobordism.from_blocks(s_u, s_v, blocks)


# -- delooping -----------------------------------------------------------------------


def deloop(C: FormalComplex, track=True):
    """Replace every object containing loops by loop-free shifted copies.

    Returns (C2, Equivalence) where the equivalence is a strict isomorphism
    on the delooped side: f g = id strictly.
    """
    total_eq = Equivalence.identity(C) if track else None
    cur = C
    while any(o.smoothing.loops for objs in cur.objects.values() for o in objs):
        cur, eq = _deloop_pass(cur, track)
        if track:
            total_eq = total_eq.then(eq)
    return cur, (total_eq if track else Equivalence.identity(cur))


def _cap_cobordism(s: Smoothing, loop_idx: int, dots: int) -> Cobordism:
    """Cap the given source loop with a disc (0/1 dots), sheets elsewhere."""
    tgt = s.drop_loop(loop_idx)
    ns = s.n_elements
    e_loop = s.n_arcs + loop_idx
    blocks = [((e_loop,), dots, 1)]
    for i in range(s.n_arcs):
        blocks.append(((i, ns + i), 0, 1))
    k2 = 0
    for k in range(s.loops):
        if k == loop_idx:
            continue
        blocks.append(((s.n_arcs + k, ns + tgt.n_arcs + k2), 0, 0))
        k2 += 1
    return Cobordism.from_blocks(s, tgt, blocks)


def _birth_cobordism(s_small: Smoothing, loop_idx_in_big: int, dots: int,
                     s_big: Smoothing) -> Cobordism:
    ns = s_small.n_elements
    e_loop = s_big.n_arcs + loop_idx_in_big
    blocks = [((ns + e_loop,), dots, 1)]
    for i in range(s_small.n_arcs):
        blocks.append(((i, ns + i), 0, 1))
    k2 = 0
    for k in range(s_big.loops):
        if k == loop_idx_in_big:
            continue
        blocks.append(((s_small.n_arcs + k2, ns + s_big.n_arcs + k), 0, 0))
        k2 += 1
    return Cobordism.from_blocks(s_small, s_big, blocks)


def _deloop_pass(C: FormalComplex, track=True):
    new_objects: dict = {}
    fan_out = {}   # (h, old_idx) -> list of (new_idx, f_cob, g_cob)
    for h in C.heights():
        lst = []
        for j, o in enumerate(C.objects[h]):
            s = o.smoothing
            if s.loops == 0:
                idx = len(lst)
                lst.append(o)
                ident = Cobordism.identity(s)
                fan_out[(h, j)] = [(idx, ident, ident)]
            else:
                small = s.drop_loop(0)
                f_minus = _cap_cobordism(s, 0, 1) - _cap_cobordism(s, 0, 0).scale(R_h)
                f_plus = _cap_cobordism(s, 0, 0)
                g_minus = _birth_cobordism(small, 0, 0, s)
                g_plus = _birth_cobordism(small, 0, 1, s)
                i_minus = len(lst)
                lst.append(FormalObject(small, o.shift - 1))
                i_plus = len(lst)
                lst.append(FormalObject(small, o.shift + 1))
                fan_out[(h, j)] = [(i_minus, f_minus, g_minus),
                                   (i_plus, f_plus, g_plus)]
        new_objects[h] = lst

    new_diff: dict = {}
    for h, entries in C.diff.items():
        out = new_diff.setdefault(h, {})
        for (i, j), c in entries.items():
            for (j2, _fj, gj) in fan_out[(h, j)]:
                half = gj.compose(c)
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
    if not track:
        return C2, None
    f_comps: dict = {}
    g_comps: dict = {}
    for (h, j), fan in fan_out.items():
        fm = f_comps.setdefault(h, {})
        gm = g_comps.setdefault(h, {})
        for (i2, f_cob, g_cob) in fan:
            fm[(i2, j)] = f_cob
            gm[(j, i2)] = g_cob
    return C2, Equivalence(ChainMap(C, C2, f_comps), ChainMap(C2, C, g_comps))


# -- Gaussian elimination ---------------------------------------------------------------


def gauss_eliminate(C: FormalComplex, track=True):
    """Remove contractible pairs along unit-identity entries to exhaustion.

    Pivot preference: lowest height first, then least fill-in
    (nnz(col)-1)*(nnz(row)-1), then object indices.
    """
    cur = C
    total_eq = Equivalence.identity(C) if track else None
    while True:
        step = _eliminate_step(cur, track)
        if step is None:
            break
        cur, eq = step
        if track:
            total_eq = total_eq.then(eq)
    return cur, (total_eq if track else Equivalence.identity(cur))


def _find_pivot(C: FormalComplex):
    for h in C.heights():
        entries = C.diff.get(h)
        if not entries:
            continue
        col_nnz: dict = {}
        row_nnz: dict = {}
        for (i, j), c in entries.items():
            if c.is_zero():
                continue
            col_nnz[j] = col_nnz.get(j, 0) + 1
            row_nnz[i] = row_nnz.get(i, 0) + 1
        best = None
        src_objs = C.objects.get(h, [])
        tgt_objs = C.objects.get(h + 1, [])
        for (i, j), c in entries.items():
            if src_objs[j] != tgt_objs[i]:
                continue
            u = c.is_unit_identity()
            if u is None:
                continue
            fill = (col_nnz[j] - 1) * (row_nnz[i] - 1)
            key = (fill, j, i)
            if best is None or key < best[0]:
                best = (key, h, i, j, c)
        if best is not None:
            return best[1], best[2], best[3], best[4]
    return None


def _eliminate_step(C: FormalComplex, track=True):
    piv = _find_pivot(C)
    if piv is None:
        return None
    h, i_p, j_p, _alpha = piv
    C2, eq, _maps = eliminate_at(C, h, i_p, j_p, track)
    return C2, eq


def eliminate_at(C: FormalComplex, h: int, i_p: int, j_p: int, track=True):
    """Eliminate the prescribed unit-identity pivot objects[h][j_p] -> objects[h+1][i_p].

    Returns (C2, Equivalence | None, (map_h, map_h1)) where the maps give the
    index renumbering of the two touched heights.
    """
    alpha = C.entry(h, i_p, j_p)
    if alpha is None or alpha.is_unit_identity() is None:
        raise ValueError("prescribed pivot is not a unit identity entry")
    alpha_inv = Cobordism.identity(C.objects[h][j_p].smoothing).scale(
        alpha.is_unit_identity().unit_inverse())

    entries = C.diff.get(h, {})
    beta = {}   # w -> cob (O1 -> w), w != i_p
    gamma = {}  # v -> cob (v -> O2), v != j_p
    for (i, j), c in entries.items():
        if j == j_p and i != i_p and not c.is_zero():
            beta[i] = c
        if i == i_p and j != j_p and not c.is_zero():
            gamma[j] = c

    # index maps after dropping j_p at h and i_p at h+1
    def dropped(objs, skip):
        out = []
        remap = {}
        for idx, o in enumerate(objs):
            if idx == skip:
                continue
            remap[idx] = len(out)
            out.append(o)
        return out, remap

    objs_h, map_h = dropped(C.objects[h], j_p)
    objs_h1, map_h1 = dropped(C.objects[h + 1], i_p)

    new_objects = {}
    for hh in C.heights():
        if hh == h:
            if objs_h:
                new_objects[hh] = objs_h
        elif hh == h + 1:
            if objs_h1:
                new_objects[hh] = objs_h1
        else:
            new_objects[hh] = C.objects[hh]

    new_diff: dict = {}
    for hh, ent in C.diff.items():
        out = {}
        if hh == h:
            for (i, j), c in ent.items():
                if i == i_p or j == j_p:
                    continue
                out[(map_h1[i], map_h[j])] = c
            for j, g in gamma.items():
                half = g.compose(alpha_inv)
                for i, b in beta.items():
                    corr = half.compose(b).scale(-1)
                    key = (map_h1[i], map_h[j])
                    cur = out.get(key)
                    corr = corr if cur is None else cur + corr
                    if corr.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = corr
        elif hh == h - 1:
            for (i, j), c in ent.items():
                if i == j_p:
                    continue
                out[(map_h[i], j)] = c
        elif hh == h + 1:
            for (i, j), c in ent.items():
                if j == i_p:
                    continue
                out[(i, map_h1[j])] = c
        else:
            out = dict(ent)
        if out:
            new_diff[hh] = out

    C2 = FormalComplex(C.nb, C.nt, new_objects, new_diff,
                       C.bottom_orients, C.top_orients)
    if not track:
        return C2, None, (map_h, map_h1)

    f_comps: dict = {}
    g_comps: dict = {}
    for hh, objs in C.objects.items():
        fm = f_comps.setdefault(hh, {})
        for idx, o in enumerate(objs):
            if hh == h and idx == j_p:
                continue
            if hh == h + 1 and idx == i_p:
                continue
            if hh == h:
                fm[(map_h[idx], idx)] = Cobordism.identity(o.smoothing)
            elif hh == h + 1:
                fm[(map_h1[idx], idx)] = Cobordism.identity(o.smoothing)
            else:
                fm[(idx, idx)] = Cobordism.identity(o.smoothing)
    for i, b in beta.items():
        f_comps.setdefault(h + 1, {})[(map_h1[i], i_p)] = \
            alpha_inv.compose(b).scale(-1)
    for hh, objs in new_objects.items():
        gm = g_comps.setdefault(hh, {})
        for idx, o in enumerate(objs):
            if hh == h:
                inv = {v: k for k, v in map_h.items()}
                gm[(inv[idx], idx)] = Cobordism.identity(o.smoothing)
            elif hh == h + 1:
                inv = {v: k for k, v in map_h1.items()}
                gm[(inv[idx], idx)] = Cobordism.identity(o.smoothing)
            else:
                gm[(idx, idx)] = Cobordism.identity(o.smoothing)
    for j, g in gamma.items():
        g_comps.setdefault(h, {})[(j_p, map_h[j])] = \
            g.compose(alpha_inv).scale(-1)
    eq = Equivalence(ChainMap(C, C2, f_comps), ChainMap(C2, C, g_comps))
    return C2, eq, (map_h, map_h1)


def simplify(C: FormalComplex, track=True, max_passes=None):
    """Alternate delooping and elimination to a fixpoint."""
    cur = C
    total = Equivalence.identity(C) if track else None
    passes = 0
    while True:
        before = cur.total_objects()
        has_loops = any(o.smoothing.loops for objs in cur.objects.values()
                        for o in objs)
        cur, eq1 = deloop(cur, track)
        if track:
            total = total.then(eq1)
        cur, eq2 = gauss_eliminate(cur, track)
        if track:
            total = total.then(eq2)
        passes += 1
        if max_passes is not None and passes >= max_passes:
            break
        still_loops = any(o.smoothing.loops for objs in cur.objects.values()
                          for o in objs)
        if cur.total_objects() == before and not has_loops and not still_loops:
            break
        if not still_loops and _find_pivot(cur) is None:
            break
    return cur, (total if track else Equivalence.identity(cur))


# -- vertical composition ----------------------------------------------------------------


def glue_smoothings(s1: Smoothing, s2: Smoothing):
    """Glue s2 on top of s1 along s1's top boundary.

    Returns (glued, el_map1, el_map2, seam_loops) where el_mapK sends element
    ids of sK to glued element ids and seam_loops lists, per new loop formed
    at the seam, the pair (s1 arc elements, s2 arc elements) that built it.
    """
    if s1.nt != s2.nb:
        raise ValueError("seam width mismatch")
    nb, nt = s1.nb, s2.nt
    seam = s1.nt

    def s1_pt(p):
        return ("b", p) if p < s1.nb else ("m", p - s1.nb)

    def s2_pt(p):
        return ("m", p) if p < s2.nb else ("t", p - s2.nb)

    arc1_at = {}
    for i, (a, b) in enumerate(s1.arcs):
        arc1_at.setdefault(s1_pt(a), []).append((i, s1_pt(b)))
        arc1_at.setdefault(s1_pt(b), []).append((i, s1_pt(a)))
    arc2_at = {}
    for i, (a, b) in enumerate(s2.arcs):
        arc2_at.setdefault(s2_pt(a), []).append((i, s2_pt(b)))
        arc2_at.setdefault(s2_pt(b), []).append((i, s2_pt(a)))

    visited1 = [False] * s1.n_arcs
    visited2 = [False] * s2.n_arcs
    new_arcs = []
    chain_of_arc1 = {}
    chain_of_arc2 = {}
    seam_loops = []

    def walk(start_pt, from_side):
        """Follow the alternating chain from an outer endpoint."""
        used1, used2 = [], []
        pt, side = start_pt, from_side
        while True:
            if side == 1:
                (i, other) = [t for t in arc1_at[pt] if not visited1[t[0]]][0]
                visited1[i] = True
                used1.append(i)
            else:
                (i, other) = [t for t in arc2_at[pt] if not visited2[t[0]]][0]
                visited2[i] = True
                used2.append(i)
            if other[0] != "m":
                return other, used1, used2
            pt = other
            side = 2 if side == 1 else 1

    def outer_code(pt):
        return pt[1] if pt[0] == "b" else nb + pt[1]

    # open chains from outer endpoints
    for p in range(nb):
        pt = ("b", p)
        arcs_here = arc1_at.get(pt, [])
        i = arcs_here[0][0]
        if visited1[i]:
            continue
        end, used1, used2 = walk(pt, 1)
        new_arcs.append(((outer_code(pt), outer_code(end)), used1, used2))
    for p in range(nt):
        pt = ("t", p)
        arcs_here = arc2_at.get(pt, [])
        i = arcs_here[0][0]
        if visited2[i]:
            continue
        end, used1, used2 = walk(pt, 2)
        new_arcs.append(((outer_code(pt), outer_code(end)), used1, used2))
    # closed chains across the seam
    for p in range(seam):
        pt = ("m", p)
        for (i, _o) in arc1_at.get(pt, []):
            if visited1[i]:
                continue
            used1, used2 = [], []
            side, cpt = 1, pt
            while True:
                if side == 1:
                    cands = [t for t in arc1_at[cpt] if not visited1[t[0]]]
                    if not cands:
                        break
                    (k, other) = cands[0]
                    visited1[k] = True
                    used1.append(k)
                else:
                    cands = [t for t in arc2_at[cpt] if not visited2[t[0]]]
                    if not cands:
                        break
                    (k, other) = cands[0]
                    visited2[k] = True
                    used2.append(k)
                cpt = other
                side = 2 if side == 1 else 1
            seam_loops.append((used1, used2))

    arcs_sorted = sorted((min(a, b), max(a, b)) for ((a, b), _u1, _u2) in new_arcs)
    glued = Smoothing(nb, nt, arcs_sorted,
                      s1.loops + s2.loops + len(seam_loops))
    arc_index = {a: i for i, a in enumerate(glued.arcs)}

    el_map1 = {}
    el_map2 = {}
    for ((a, b), used1, used2) in new_arcs:
        gi = arc_index[(min(a, b), max(a, b))]
        for i in used1:
            el_map1[i] = gi
        for i in used2:
            el_map2[i] = gi
    for k in range(s1.loops):
        el_map1[s1.n_arcs + k] = glued.n_arcs + k
    for k in range(s2.loops):
        el_map2[s2.n_arcs + k] = glued.n_arcs + s1.loops + k
    seam_info = []
    for idx, (used1, used2) in enumerate(seam_loops):
        gi = glued.n_arcs + s1.loops + s2.loops + idx
        for i in used1:
            el_map1[i] = gi
        for i in used2:
            el_map2[i] = gi
        seam_info.append((gi, tuple(sorted(used1)), tuple(sorted(used2))))
    return glued, el_map1, el_map2, seam_info


def glue_cobordisms(c1: Cobordism, c2: Cobordism,
                    src_glue, tgt_glue) -> Cobordism:
    """Glue c2 on top of c1 along the seam.

    src_glue / tgt_glue: outputs of glue_smoothings for (c1.src, c2.src) and
    (c1.tgt, c2.tgt).
    """
    S, sm1, sm2, _ = src_glue
    T, tm1, tm2, _ = tgt_glue
    out = Cobordism(S, T)
    ns1 = c1.src.n_elements
    ns2 = c2.src.n_elements
    nS = S.n_elements
    seam = c1.src.nt

    from .cobcat import _cycle_ids
    cyc1 = _cycle_ids(c1.src, c1.tgt)
    cyc2 = _cycle_ids(c2.src, c2.tgt)

    # seam point p: arc of c1.src containing point (nb1 + p), etc.
    def arc_at(s: Smoothing, point):
        for i, (a, b) in enumerate(s.arcs):
            if a == point or b == point:
                return i
        raise AssertionError("boundary point without arc")

    seam_src1 = [arc_at(c1.src, c1.src.nb + p) for p in range(seam)]
    seam_src2 = [arc_at(c2.src, p) for p in range(seam)]
    seam_tgt1 = [arc_at(c1.tgt, c1.tgt.nb + p) for p in range(seam)]
    seam_tgt2 = [arc_at(c2.tgt, p) for p in range(seam)]

    for t1, k1 in c1.terms.items():
        for t2, k2 in c2.terms.items():
            # block ids: c1 blocks then c2 blocks
            owner1 = {}
            for bi, (els, _d) in enumerate(t1):
                for e in els:
                    owner1[e] = bi
            owner2 = {}
            for bi, (els, _d) in enumerate(t2):
                for e in els:
                    owner2[e] = bi
            nb1 = len(t1)
            parent = list(range(nb1 + len(t2)))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            def union(a, b):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra

            seam_lines = {}
            for p in range(seam):
                b1 = owner1[seam_src1[p]]
                b2 = nb1 + owner2[seam_src2[p]]
                union(b1, b2)
                b1t = owner1[ns1 + seam_tgt1[p]]
                b2t = nb1 + owner2[ns2 + seam_tgt2[p]]
                union(b1t, b2t)
                # both source and target arcs at p belong to the same block
                union(b1, b1t)
                seam_lines[p] = find(b1)

            chi = {}
            dots = {}
            members: dict = {}
            for bi, (els, d) in enumerate(t1):
                r = find(bi)
                b = len({cyc1[e] for e in els})
                chi[r] = chi.get(r, 0) + (2 - b)
                dots[r] = dots.get(r, 0) + d
                for e in els:
                    g = sm1[e] if e < ns1 else nS + tm1[e - ns1]
                    members.setdefault(r, set()).add(g)
            for bi, (els, d) in enumerate(t2):
                r = find(nb1 + bi)
                b = len({cyc2[e] for e in els})
                chi[r] = chi.get(r, 0) + (2 - b)
                dots[r] = dots.get(r, 0) + d
                for e in els:
                    g = nS + tm2[e - ns2] if e >= ns2 else sm2[e]
                    members.setdefault(r, set()).add(g)
            for p in range(seam):
                r = find(seam_lines[p])
                chi[r] = chi.get(r, 0) - 1
            raw = []
            for r in chi:
                raw.append((tuple(sorted(members.get(r, ()))), dots.get(r, 0),
                            chi[r]))
            out._accumulate(raw, k1 * k2)
    return out


def compose_complexes(C1: FormalComplex, C2: FormalComplex) -> FormalComplex:
    """Vertical tensor: C2 stacked on top of C1, totalization signs on d2."""
    if C1.nt != C2.nb:
        raise DiagramError(
            f"boundary mismatch: top width {C1.nt} vs bottom width {C2.nb}")
    if C1.top_orients is not None and C2.bottom_orients is not None:
        for p, (a, b) in enumerate(zip(C1.top_orients, C2.bottom_orients)):
            if a != b:
                raise DiagramError(
                    f"orientation mismatch at boundary point {p + 1}")

    glue_cache: dict = {}

    def glued(s1, s2):
        key = (s1, s2)
        if key not in glue_cache:
            glue_cache[key] = glue_smoothings(s1, s2)
        return glue_cache[key]

    objects: dict = {}
    index: dict = {}
    for h1 in C1.heights():
        for j1, o1 in enumerate(C1.objects[h1]):
            for h2 in C2.heights():
                for j2, o2 in enumerate(C2.objects[h2]):
                    h = h1 + h2
                    S = glued(o1.smoothing, o2.smoothing)[0]
                    lst = objects.setdefault(h, [])
                    index[(h1, j1, h2, j2)] = (h, len(lst))
                    lst.append(FormalObject(S, o1.shift + o2.shift))

    diff: dict = {}
    for (h1, j1, h2, j2), (h, col) in index.items():
        o1 = C1.objects[h1][j1]
        o2 = C2.objects[h2][j2]
        # d1 x id
        for (i, j), c in C1.diff.get(h1, {}).items():
            if j != j1:
                continue
            t1 = C1.objects[h1 + 1][i]
            row = index[(h1 + 1, i, h2, j2)][1]
            cob = glue_cobordisms(
                c, Cobordism.identity(o2.smoothing),
                glued(o1.smoothing, o2.smoothing),
                glued(t1.smoothing, o2.smoothing))
            _add_entry(diff.setdefault(h, {}), (row, col), cob)
        # (-1)^{h1} id x d2
        sign = -1 if (h1 % 2) else 1
        for (i, j), c in C2.diff.get(h2, {}).items():
            if j != j2:
                continue
            t2 = C2.objects[h2 + 1][i]
            row = index[(h1, j1, h2 + 1, i)][1]
            cob = glue_cobordisms(
                Cobordism.identity(o1.smoothing), c,
                glued(o1.smoothing, o2.smoothing),
                glued(o1.smoothing, t2.smoothing))
            if sign < 0:
                cob = cob.scale(-1)
            _add_entry(diff.setdefault(h, {}), (row, col), cob)

    return FormalComplex(C1.nb, C2.nt, objects, diff,
                         C1.bottom_orients, C2.top_orients)


def _add_entry(matrix: dict, key, cob: Cobordism):
    cur = matrix.get(key)
    cob = cob if cur is None else cur + cob
    if cob.is_zero():
        matrix.pop(key, None)
    else:
        matrix[key] = cob


def glue_chain_maps(m1: ChainMap, m2: ChainMap,
                    src_comp: FormalComplex, tgt_comp: FormalComplex,
                    src_index, tgt_index) -> ChainMap:
    """Glue chain maps factorwise: (m1 x m2) on composed complexes.

    src_index / tgt_index: dict (h1, j1, h2, j2) -> (h, idx) as produced by
    composing the source/target pairs in the same order as compose_complexes.
    Both maps must have height_shift 0.
    """
    if m1.height_shift or m2.height_shift:
        raise ValueError("glued chain maps must preserve heights")
    glue_cache: dict = {}

    def glued(s1, s2):
        key = (s1, s2)
        if key not in glue_cache:
            glue_cache[key] = glue_smoothings(s1, s2)
        return glue_cache[key]

    comps: dict = {}
    for (h1, j1, h2, j2), (h, col) in src_index.items():
        o1 = m1.src.objects[h1][j1]
        o2 = m2.src.objects[h2][j2]
        for (i1, jj1), c1 in m1.comps.get(h1, {}).items():
            if jj1 != j1:
                continue
            for (i2, jj2), c2 in m2.comps.get(h2, {}).items():
                if jj2 != j2:
                    continue
                t1 = m1.tgt.objects[h1][i1]
                t2 = m2.tgt.objects[h2][i2]
                row = tgt_index[(h1, i1, h2, i2)][1]
                hrow = tgt_index[(h1, i1, h2, i2)][0]
                if hrow != h:
                    raise AssertionError("height bookkeeping broke")
                cob = glue_cobordisms(
                    c1, c2,
                    glued(o1.smoothing, o2.smoothing),
                    glued(t1.smoothing, t2.smoothing))
                _add_entry(comps.setdefault(h, {}), (row, col), cob)
    return ChainMap(src_comp, tgt_comp, comps)


def compose_complexes_indexed(C1: FormalComplex, C2: FormalComplex):
    """compose_complexes plus the (h1, j1, h2, j2) -> (h, idx) index map."""
    C = compose_complexes(C1, C2)
    index: dict = {}
    counters: dict = {}
    for h1 in C1.heights():
        for j1 in range(len(C1.objects[h1])):
            for h2 in C2.heights():
                for j2 in range(len(C2.objects[h2])):
                    h = h1 + h2
                    idx = counters.get(h, 0)
                    counters[h] = idx + 1
                    index[(h1, j1, h2, j2)] = (h, idx)
    return C, index


from .movies import (  # noqa: E402  (re-exported per the module contract)
    birth_map,
    death_map,
    event_map,
    movie_map,
    r1_removal,
    r2_removal,
    saddle_map,
)

__all__ = [
    "FormalObject", "FormalComplex", "ChainMap", "Equivalence",
    "build_cube", "deloop", "gauss_eliminate", "simplify",
    "compose_complexes", "compose_complexes_indexed", "glue_smoothings",
    "glue_cobordisms", "glue_chain_maps", "resolve_diagram",
    "birth_map", "death_map", "saddle_map", "r1_removal", "r2_removal",
    "event_map", "movie_map",
]
