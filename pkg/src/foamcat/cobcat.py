"""The reduced cobordism category between crossingless diagrams.

Objects (Smoothing) are planar matchings of boundary points plus closed
loops.  Morphisms (Cobordism) are R-linear combinations of decorated
orientable surfaces, stored by component partition and dot count only.
Reduction rewrites every term so that each component has genus zero and at
most one dot, and closed components are evaluated to scalars:

    two dots      ->  h * (one dot) + a * (no dots)
    genus g >= 1  ->  2 * (g-1, extra dot) - h * (g-1)
    closed, 0/1 dots -> 0 / 1

Equality tests that must hold only modulo the local relations (neck
cutting) go through `neckcut_key`, which cuts every component into
single-cycle discs; reduce() itself never cuts necks.
"""

from __future__ import annotations

from functools import lru_cache

from .ring import RingElement

R_one = RingElement.one()
R_h = RingElement.gen_h()
R_a = RingElement.gen_a()


class Smoothing:
    """A crossingless diagram: arcs matching boundary points, plus loops.

    Boundary points are indexed 0..nb-1 (bottom, left to right) then
    nb..nb+nt-1 (top).  Elements are arcs (in sorted order) then loops.
    """

    __slots__ = ("nb", "nt", "arcs", "loops", "_hash")

    def __init__(self, nb: int, nt: int, arcs, loops: int):
        self.nb = nb
        self.nt = nt
        self.arcs = tuple(sorted((min(a, b), max(a, b)) for (a, b) in arcs))
        self.loops = int(loops)
        if 2 * len(self.arcs) != nb + nt:
            raise ValueError("arcs must perfectly match the boundary points")
        self._hash = hash((self.nb, self.nt, self.arcs, self.loops))

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    @property
    def n_elements(self) -> int:
        return len(self.arcs) + self.loops

    def drop_loop(self, k: int) -> "Smoothing":
        if not (0 <= k < self.loops):
            raise ValueError("no such loop")
        return Smoothing(self.nb, self.nt, self.arcs, self.loops - 1)

    def add_loop(self) -> "Smoothing":
        return Smoothing(self.nb, self.nt, self.arcs, self.loops + 1)

    def __eq__(self, other):
        if not isinstance(other, Smoothing):
            return NotImplemented
        return (self.nb, self.nt, self.arcs, self.loops) == \
            (other.nb, other.nt, other.arcs, other.loops)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Smoothing(nb={self.nb}, nt={self.nt}, arcs={self.arcs}, loops={self.loops})"


@lru_cache(maxsize=200000)
def _arc_cycles(nb, nt, src_arcs, tgt_arcs):
    """Cycles of the union of the two matchings on the boundary points.

    Returns (cycle_of_src_arc, cycle_of_tgt_arc, n_cycles): maps from arc
    index to cycle id.
    """
    n = nb + nt
    src_at = {}
    for i, (a, b) in enumerate(src_arcs):
        src_at[a] = i
        src_at[b] = i
    tgt_at = {}
    for i, (a, b) in enumerate(tgt_arcs):
        tgt_at[a] = i
        tgt_at[b] = i
    cyc_src = [-1] * len(src_arcs)
    cyc_tgt = [-1] * len(tgt_arcs)
    seen = [False] * n
    ncyc = 0
    for start in range(n):
        if seen[start]:
            continue
        p = start
        while not seen[p]:
            seen[p] = True
            i = src_at[p]
            cyc_src[i] = ncyc
            (a, b) = src_arcs[i]
            p2 = b if p == a else a
            seen[p2] = True
            j = tgt_at[p2]
            cyc_tgt[j] = ncyc
            (a, b) = tgt_arcs[j]
            p = b if p2 == a else a
        ncyc += 1
    return tuple(cyc_src), tuple(cyc_tgt), ncyc


def _cycle_ids(src: Smoothing, tgt: Smoothing):
    """Cycle id per element code of a cobordism src -> tgt.

    Element codes: src arcs, src loops, tgt arcs, tgt loops.  Loops each get
    their own fresh cycle id.
    """
    cyc_src, cyc_tgt, ncyc = _arc_cycles(src.nb, src.nt, src.arcs, tgt.arcs)
    ids = list(cyc_src)
    ids.extend(range(ncyc, ncyc + src.loops))
    ids.extend(cyc_tgt)  # tgt arcs share the cycles of src arcs
    off = ncyc + src.loops
    ids.extend(range(off, off + tgt.loops))
    return ids


def _reduce_linear(c1: RingElement, c0: RingElement, dots: int, genus: int):
    """(c1*X + c0) * X^dots * (2X-h)^genus reduced mod X^2 = hX + a."""
    for _ in range(dots):
        c1, c0 = c1 * R_h + c0, c1 * R_a
    for _ in range(genus):
        c1, c0 = c1 * R_h + 2 * c0, 2 * (c1 * R_a) - c0 * R_h
    return c1, c0


class Cobordism:
    """An R-linear combination of decorated surfaces between two smoothings."""

    __slots__ = ("src", "tgt", "terms")

    def __init__(self, src: Smoothing, tgt: Smoothing, terms=None):
        if (src.nb, src.nt) != (tgt.nb, tgt.nt):
            raise ValueError("cobordism endpoints must share their boundary")
        self.src = src
        self.tgt = tgt
        self.terms = dict(terms) if terms else {}

    # -- construction --------------------------------------------------------

    @staticmethod
    def zero(src, tgt) -> "Cobordism":
        return Cobordism(src, tgt)

    @staticmethod
    def from_blocks(src, tgt, blocks, coeff=None) -> "Cobordism":
        """Build from raw components and normalize.

        blocks: iterable of (elements, dots, chi) with elements over the
        combined coding (src elements then tgt elements, tgt offset by
        src.n_elements).  Every element must appear in exactly one block.
        """
        coeff = R_one if coeff is None else coeff
        out = Cobordism(src, tgt)
        out._accumulate(blocks, coeff)
        return out

    @staticmethod
    def identity(s: Smoothing) -> "Cobordism":
        n = s.n_elements
        blocks = []
        for i in range(s.n_arcs):
            blocks.append(((i, n + i), 0, 0))  # chi of a sheet: computed below
        for k in range(s.loops):
            e = s.n_arcs + k
            blocks.append(((e, n + e), 0, 0))
        # identity chi: sheet over an arc = disc (chi 1); annulus over loop = 0
        fixed = []
        for (els, d, _chi) in blocks:
            is_loop = els[0] >= s.n_arcs
            fixed.append((els, d, 0 if is_loop else 1))
        return Cobordism.from_blocks(s, s, fixed)

    def _accumulate(self, blocks, coeff: RingElement):
        """Normalize raw (elements, dots, chi) blocks into terms."""
        if coeff.is_zero():
            return
        cyc = _cycle_ids(self.src, self.tgt)
        branches = [((), coeff)]  # (tuple of (els, dot) blocks, coefficient)
        for (els, dots, chi) in sorted(blocks, key=lambda b: b[0]):
            els = tuple(sorted(els))
            if not els:
                b = 0
            else:
                b = len({cyc[e] for e in els})
            g2 = 2 - b - chi
            if g2 % 2:
                raise ValueError(f"component has non-integral genus: chi={chi}, b={b}")
            genus = g2 // 2
            if genus < 0:
                raise ValueError(f"component has negative genus: chi={chi}, b={b}")
            c1, c0 = _reduce_linear(RingElement.zero(), R_one, dots, genus)
            if not els:
                # closed component evaluates by the counit: eps(c1 X + c0) = c1
                branches = [(bl, cf * c1) for (bl, cf) in branches if not (cf * c1).is_zero()]
                continue
            new = []
            for (bl, cf) in branches:
                if not c1.is_zero():
                    v = cf * c1
                    if not v.is_zero():
                        new.append((bl + ((els, 1),), v))
                if not c0.is_zero():
                    v = cf * c0
                    if not v.is_zero():
                        new.append((bl + ((els, 0),), v))
            branches = new
        for (bl, cf) in branches:
            key = tuple(sorted(bl))
            cur = self.terms.get(key)
            cur = cf if cur is None else cur + cf
            if cur.is_zero():
                self.terms.pop(key, None)
            else:
                self.terms[key] = cur

    # -- linear structure ------------------------------------------------------

    def __add__(self, other: "Cobordism") -> "Cobordism":
        if self.src != other.src or self.tgt != other.tgt:
            raise ValueError("cannot add cobordisms with different endpoints")
        t = dict(self.terms)
        for k, c in other.terms.items():
            cur = t.get(k)
            cur = c if cur is None else cur + c
            if cur.is_zero():
                t.pop(k, None)
            else:
                t[k] = cur
        return Cobordism(self.src, self.tgt, t)

    def __sub__(self, other):
        return self + other.scale(RingElement.from_gaussian(-1))

    def __neg__(self):
        return self.scale(RingElement.from_gaussian(-1))

    def scale(self, c: RingElement) -> "Cobordism":
        if isinstance(c, int):
            c = RingElement.from_gaussian(c)
        if c.is_zero():
            return Cobordism(self.src, self.tgt)
        return Cobordism(self.src, self.tgt,
                         {k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Cobordism):
            return NotImplemented
        return (self.src == other.src and self.tgt == other.tgt
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.src, self.tgt,
                     tuple(sorted((k, hash(v)) for k, v in self.terms.items()))))

    # -- composition -----------------------------------------------------------

    def compose(self, other: "Cobordism") -> "Cobordism":
        """other after self: self: u -> v, other: v -> w gives u -> w."""
        if self.tgt != other.src:
            raise ValueError("smoothing mismatch in composition")
        u, v, w = self.src, self.tgt, other.tgt
        nu, nv, nw = u.n_elements, v.n_elements, w.n_elements
        out = Cobordism(u, w)
        if not self.terms or not other.terms:
            return out

        cyc_uv = _cycle_ids(u, v)
        cyc_vw = _cycle_ids(v, w)
        ntot = nu + nv + nw

        for termP, coefP in self.terms.items():
            for termQ, coefQ in other.terms.items():
                parent = list(range(ntot))

                def find(x):
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    return x

                def union(x, y):
                    rx, ry = find(x), find(y)
                    if rx != ry:
                        parent[ry] = rx

                # unite: blocks of self use u-els (0..nu-1) and v-els (nu..);
                # blocks of other map v-els to nu+e and w-els to nu+nv+(e-nv)
                for (els, _dot) in termP:
                    root = els[0]
                    for e in els[1:]:
                        union(root, e)
                for (els, _dot) in termQ:
                    mapped = [nu + e if e < nv else nu + nv + (e - nv) for e in els]
                    root = mapped[0]
                    for e in mapped[1:]:
                        union(root, e)

                chi_final = {}
                dot_final = {}
                for (els, dot) in termP:
                    b = len({cyc_uv[e] for e in els})
                    r = find(els[0])
                    chi_final[r] = chi_final.get(r, 0) + (2 - b)
                    dot_final[r] = dot_final.get(r, 0) + dot
                for (els, dot) in termQ:
                    b = len({cyc_vw[e] for e in els})
                    r = find(nu + els[0] if els[0] < nv else nu + nv + (els[0] - nv))
                    chi_final[r] = chi_final.get(r, 0) + (2 - b)
                    dot_final[r] = dot_final.get(r, 0) + dot
                # interface corrections: each v element was counted in one
                # block on each side; glue along it (arc: chi 1, loop: 0)
                for e in range(nv):
                    r = find(nu + e)
                    chi_final[r] = chi_final.get(r, 0) - (1 if e < v.n_arcs else 0)

                blocks = {}
                for x in range(ntot):
                    if nu <= x < nu + nv:
                        continue
                    r = find(x)
                    code = x if x < nu else nu + (x - nu - nv)
                    blocks.setdefault(r, []).append(code)
                raw = []
                for r, els in blocks.items():
                    raw.append((tuple(sorted(els)), dot_final.get(r, 0),
                                chi_final.get(r, 0)))
                # roots that contain only v elements (fully closed interface)
                for r in chi_final:
                    if r not in blocks:
                        raw.append(((), dot_final.get(r, 0), chi_final.get(r, 0)))
                out._accumulate(raw, coefP * coefQ)
        return out

    # -- reduction-facing queries ------------------------------------------------

    def block_chis(self, term) -> list[int]:
        cyc = _cycle_ids(self.src, self.tgt)
        return [2 - len({cyc[e] for e in els}) for (els, _d) in term]

    def degree(self) -> int:
        """-chi + |B|/2 + 2*dots + deg(coefficient); error if inhomogeneous."""
        if not self.terms:
            raise ValueError("degree of the zero cobordism is undefined")
        B = self.src.nb + self.src.nt
        degs = set()
        for term, coef in self.terms.items():
            chi = sum(self.block_chis(term))
            dots = sum(d for (_els, d) in term)
            cd = coef.degree()
            if cd is None:
                raise ValueError("inhomogeneous coefficient")
            degs.add(-chi + B // 2 + 2 * dots + cd)
        if len(degs) != 1:
            raise ValueError(f"inhomogeneous cobordism: degrees {sorted(degs)}")
        return degs.pop()

    def add_dot(self, side: str, index: int) -> "Cobordism":
        """A dot on the component containing the given arc/loop."""
        s = self.src if side == "src" else self.tgt
        if not (0 <= index < s.n_elements):
            raise ValueError(f"no element {index} on side {side!r}")
        e = index if side == "src" else self.src.n_elements + index
        out = Cobordism(self.src, self.tgt)
        cyc = _cycle_ids(self.src, self.tgt)
        for term, coef in self.terms.items():
            raw = []
            for (els, d) in term:
                b = len({cyc[x] for x in els})
                dd = d + 1 if e in els else d
                raw.append((els, dd, 2 - b))
            out._accumulate(raw, coef)
        return out

    def is_unit_identity(self):
        """The unit u with self == u * identity, else None (needs src == tgt)."""
        if self.src != self.tgt or len(self.terms) != 1:
            return None
        (term, coef), = self.terms.items()
        if not coef.is_unit():
            return None
        n = self.src.n_elements
        want = tuple(sorted((((i, n + i)), 0) for i in range(n)))
        return coef if term == want else None

    # -- equality modulo the local relations ---------------------------------------

    def neckcut_key(self):
        """Canonical fully-neck-cut expansion, hashable.

        Every component is cut along each boundary cycle; the result is a map
        from single-cycle disc configurations to coefficients, which is a
        faithful invariant for everything the TQFT can see.
        """
        cyc = _cycle_ids(self.src, self.tgt)
        acc: dict = {}
        for term, coef in self.terms.items():
            branches = [((), coef)]
            for (els, d) in sorted(term):
                groups: dict = {}
                for e in els:
                    groups.setdefault(cyc[e], []).append(e)
                cycles = [tuple(sorted(g)) for g in
                          sorted(groups.values(), key=lambda g: g[0])]
                if len(cycles) == 1:
                    add = [(((cycles[0], d),), R_one)]
                else:
                    # comultiply X^d across the cycles
                    vec = {(d,): R_one} if d <= 1 else None
                    if vec is None:
                        raise AssertionError("normal form has dots > 1")
                    for _ in range(len(cycles) - 1):
                        nxt: dict = {}
                        for bits, c in vec.items():
                            x0 = bits[0]
                            if x0 == 1:
                                pieces = [((1, 1), c), ((0, 0), c * R_a)]
                            else:
                                pieces = [((0, 1), c), ((1, 0), c),
                                          ((0, 0), -(c * R_h))]
                            for (pair, cc) in pieces:
                                key = pair + bits[1:]
                                cur = nxt.get(key)
                                cur = cc if cur is None else cur + cc
                                if cur.is_zero():
                                    nxt.pop(key, None)
                                else:
                                    nxt[key] = cur
                        vec = nxt
                    add = []
                    for bits, c in vec.items():
                        blocks = tuple(sorted((cycles[i], bits[i])
                                              for i in range(len(cycles))))
                        add.append((blocks, c))
                new = []
                for (bl, cf) in branches:
                    for (blocks, c) in add:
                        v = cf * c
                        if not v.is_zero():
                            new.append((bl + blocks, v))
                branches = new
            for (bl, cf) in branches:
                key = tuple(sorted(bl))
                cur = acc.get(key)
                cur = cf if cur is None else cur + cf
                if cur.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = cur
        return tuple(sorted((k, tuple(sorted(v.terms.items())))
                            for k, v in acc.items()))

    def is_zero_mod_relations(self) -> bool:
        if not self.terms:
            return True
        return not self.neckcut_key()

    def equals_mod_relations(self, other: "Cobordism") -> bool:
        return (self - other).is_zero_mod_relations()

    # -- presentation ---------------------------------------------------------------

    def describe(self) -> str:
        """Stable debug serialization: partition + dots + coefficient."""
        if not self.terms:
            return "0"
        lines = []
        for term in sorted(self.terms):
            coef = self.terms[term]
            blocks = " ".join(
                "{" + ",".join(self._el_name(e) for e in els) +
                ("}." if d else "}") for (els, d) in term)
            lines.append(f"({coef}) {blocks}")
        return " + ".join(lines)

    def _el_name(self, e: int) -> str:
        ns = self.src.n_elements
        if e < ns:
            s, i = self.src, e
            side = "s"
        else:
            s, i = self.tgt, e - ns
            side = "t"
        if i < s.n_arcs:
            return f"{side}a{i}"
        return f"{side}o{i - s.n_arcs}"

    def __repr__(self):
        return f"Cobordism({self.describe()})"


def juxtapose(c1: Cobordism, c2: Cobordism) -> Cobordism:
    """Side-by-side disjoint union, c2 placed to the right of c1."""
    s1, t1, s2, t2 = c1.src, c1.tgt, c2.src, c2.tgt

    def shift_smoothing(s: Smoothing, base: Smoothing) -> Smoothing:
        def shift_pt(p):
            if p < s.nb:
                return p + base.nb
            return p + base.nb + base.nt
        arcs = [(shift_pt(a), shift_pt(b)) for (a, b) in s.arcs]
        return arcs

    nb, nt = s1.nb + s2.nb, s1.nt + s2.nt

    def glue(sa: Smoothing, sb: Smoothing) -> Smoothing:
        arcs = list(sa.arcs)
        fixed = [(a if a < sa.nb else a + sb.nb,
                  b if b < sa.nb else b + sb.nb) for (a, b) in arcs]
        moved = [(a + sa.nb if a < sb.nb else a + sa.nb + sa.nt,
                  b + sa.nb if b < sb.nb else b + sa.nb + sa.nt)
                 for (a, b) in sb.arcs]
        return Smoothing(nb, nt, fixed + moved, sa.loops + sb.loops)

    src = glue(s1, s2)
    tgt = glue(t1, t2)

    # element renumbering: the combined smoothing re-sorts its arcs
    def arc_index(s: Smoothing, arc) -> int:
        return s.arcs.index(arc)

    def map_left(s_old: Smoothing, s_new: Smoothing):
        m = {}
        for i, (a, b) in enumerate(s_old.arcs):
            na = a if a < s_old.nb else a + s2.nb
            nb_ = b if b < s_old.nb else b + s2.nb
            m[i] = arc_index(s_new, (min(na, nb_), max(na, nb_)))
        for k in range(s_old.loops):
            m[s_old.n_arcs + k] = s_new.n_arcs + k
        return m

    def map_right(s_old: Smoothing, s_new: Smoothing, left_old: Smoothing):
        m = {}
        for i, (a, b) in enumerate(s_old.arcs):
            na = a + left_old.nb if a < s_old.nb else a + left_old.nb + left_old.nt
            nb_ = b + left_old.nb if b < s_old.nb else b + left_old.nb + left_old.nt
            m[i] = arc_index(s_new, (min(na, nb_), max(na, nb_)))
        for k in range(s_old.loops):
            m[s_old.n_arcs + k] = s_new.n_arcs + left_old.loops + k
        return m

    src_l = map_left(s1, src)
    src_r = map_right(s2, src, s1)
    tgt_l = map_left(t1, tgt)
    tgt_r = map_right(t2, tgt, t1)

    out = Cobordism(src, tgt)
    ns_new = src.n_elements
    for termP, coefP in c1.terms.items():
        for termQ, coefQ in c2.terms.items():
            raw = []
            for (els, d) in termP:
                chi = 2 - len({_cycle_ids(s1, t1)[e] for e in els})
                mapped = tuple(sorted(
                    src_l[e] if e < s1.n_elements
                    else ns_new + tgt_l[e - s1.n_elements] for e in els))
                raw.append((mapped, d, chi))
            for (els, d) in termQ:
                chi = 2 - len({_cycle_ids(s2, t2)[e] for e in els})
                mapped = tuple(sorted(
                    src_r[e] if e < s2.n_elements
                    else ns_new + tgt_r[e - s2.n_elements] for e in els))
                raw.append((mapped, d, chi))
            out._accumulate(raw, coefP * coefQ)
    return out
