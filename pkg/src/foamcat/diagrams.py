"""Oriented framed tangle diagrams in slice (Morse) form.

A diagram is a bottom boundary configuration followed by a list of slices,
each one of: identity, a positive or negative crossing at a position, a cup
(two new adjacent endpoints), or a cap (two adjacent strands joined).
Orientations are propagated through the slices; a closed component gets a
deterministic default orientation (first point of its first cup points up)
unless explicitly flipped.  Framing is always the blackboard framing of the
diagram; framing changes are expressed by explicit kinks.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass


class DiagramError(ValueError):
    """Raised for malformed or inconsistent diagrams."""


@dataclass(frozen=True)
class Slice:
    kind: str  # "id", "x+", "x-", "cup", "cap"
    pos: int = 0  # 1-based; unused for "id"

    def width_delta(self) -> int:
        if self.kind == "cup":
            return 2
        if self.kind == "cap":
            return -2
        return 0

    def __str__(self):
        return self.kind if self.kind == "id" else f"{self.kind} {self.pos}"


class _ParityDSU:
    """Union-find tracking a relative sign to the class representative."""

    def __init__(self):
        self.parent: dict = {}
        self.sign: dict = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.sign[x] = 1

    def find(self, x):
        path = []
        s = 1
        while self.parent[x] != x:
            path.append((x, s))
            s *= self.sign[x]
            x = self.parent[x]
        root = x
        for node, upto in path:
            total = 1
            y = node
            while self.parent[y] != y:
                total *= self.sign[y]
                y = self.parent[y]
            self.parent[node] = root
            self.sign[node] = total
        return root

    def rel_sign(self, x):
        self.find(x)
        return self.sign[x] if self.parent[x] != x else 1

    def union(self, x, y, rel):
        """Impose sign(x) == rel * sign(y).  Returns False on conflict."""
        rx, ry = self.find(x), self.find(y)
        sx = self.sign[x] if self.parent[x] != x else 1
        sy = self.sign[y] if self.parent[y] != y else 1
        if rx == ry:
            return sx == rel * sy
        self.parent[ry] = rx
        self.sign[ry] = sx * rel * sy  # sign of ry relative to rx
        return True


class TangleDiagram:
    """A slice-form oriented framed tangle diagram.

    bottom_orients: +1 for a strand directed upward (into the diagram) at a
    bottom point, -1 for downward.  flips: component indices whose closed
    curves take the non-default orientation.  colors: component -> color.
    """

    def __init__(self, bottom_orients, slices, flips=(), colors=None):
        self.bottom_orients = tuple(int(x) for x in bottom_orients)
        if any(x not in (1, -1) for x in self.bottom_orients):
            raise DiagramError("bottom orientations must be +1/-1")
        self.slices = tuple(slices)
        self.flips = frozenset(int(x) for x in flips)
        self.colors = dict(colors) if colors else {}
        self._analyze()
        for c in self.flips:
            if c not in self._closed_components:
                raise DiagramError(f"component {c} is not closed; cannot flip")
        for c in self.colors:
            if c not in range(self.num_components):
                raise DiagramError(f"unknown component {c} in color map")

    # -- structural analysis -------------------------------------------------

    def _analyze(self):
        widths = [len(self.bottom_orients)]
        for k, s in enumerate(self.slices):
            w = widths[-1]
            if s.kind in ("x+", "x-"):
                if not (1 <= s.pos <= w - 1):
                    raise DiagramError(
                        f"slice {k + 1}: crossing position {s.pos} out of range "
                        f"for width {w}")
            elif s.kind == "cap":
                if not (1 <= s.pos <= w - 1):
                    raise DiagramError(
                        f"slice {k + 1}: cap position {s.pos} out of range "
                        f"for width {w}")
            elif s.kind == "cup":
                if not (1 <= s.pos <= w + 1):
                    raise DiagramError(
                        f"slice {k + 1}: cup position {s.pos} out of range "
                        f"for width {w}")
            elif s.kind != "id":
                raise DiagramError(f"slice {k + 1}: unknown kind {s.kind!r}")
            widths.append(w + s.width_delta())
        self.widths = widths

        dsu = _ParityDSU()
        L = len(self.slices)
        for p in range(widths[0]):
            dsu.add((0, p))
        for k, s in enumerate(self.slices):
            w = widths[k]
            for p in range(widths[k + 1]):
                dsu.add((k + 1, p))
            q = s.pos - 1  # 0-based
            if s.kind == "id":
                for p in range(w):
                    dsu.union((k, p), (k + 1, p), 1)
            elif s.kind in ("x+", "x-"):
                for p in range(w):
                    if p == q:
                        dsu.union((k, p), (k + 1, p + 1), 1)
                    elif p == q + 1:
                        dsu.union((k, p), (k + 1, p - 1), 1)
                    else:
                        dsu.union((k, p), (k + 1, p), 1)
            elif s.kind == "cup":
                for p in range(w):
                    tgt = p if p < q else p + 2
                    dsu.union((k, p), (k + 1, tgt), 1)
                if not dsu.union((k + 1, q), (k + 1, q + 1), -1):
                    raise DiagramError(f"slice {k + 1}: inconsistent orientation at cup")
            elif s.kind == "cap":
                if not dsu.union((k, q), (k, q + 1), -1):
                    raise DiagramError(
                        f"slice {k + 1}: cap at {s.pos} joins strands with "
                        f"incompatible orientations")
                for p in range(w):
                    if p in (q, q + 1):
                        continue
                    tgt = p if p < q else p - 2
                    dsu.union((k, p), (k + 1, tgt), 1)

        # Group nodes into curves, ordered by first node.
        nodes = sorted(dsu.parent.keys())
        roots: dict = {}
        for n in nodes:
            r = dsu.find(n)
            roots.setdefault(r, []).append(n)
        curves = sorted(roots.values(), key=lambda ns: ns[0])
        comp_of_root = {}
        for idx, ns in enumerate(curves):
            comp_of_root[dsu.find(ns[0])] = idx
        self.num_components = len(curves)
        self._curve_first_node = {i: ns[0] for i, ns in enumerate(curves)}

        # Anchor directions at the bottom boundary; curves not reaching it
        # (closed curves and top-only arcs) default to direction +1 at their
        # first node, subject to explicit flips.
        anchor: dict = {}
        free = set(range(self.num_components))
        for p, o in enumerate(self.bottom_orients):
            r = dsu.find((0, p))
            c = comp_of_root[r]
            free.discard(c)
            want = o * dsu.rel_sign((0, p))
            if c in anchor and anchor[c] != want:
                raise DiagramError(
                    f"inconsistent orientation forced at bottom point {p + 1}")
            anchor[c] = want
        self._closed_components = free
        for c in free:
            first = self._curve_first_node[c]
            want = dsu.rel_sign(first)  # direction +1 at the first node
            anchor[c] = want if c not in self.flips else -want

        def direction(node):
            c = comp_of_root[dsu.find(node)]
            return anchor[c] * dsu.rel_sign(node)

        self._comp_of_node = lambda node: comp_of_root[dsu.find(node)]
        self._dir_of_node = direction
        self.top_orients = tuple(direction((L, p)) for p in range(widths[-1]))
        self.bottom_components = tuple(
            comp_of_root[dsu.find((0, p))] for p in range(widths[0]))
        self.top_components = tuple(
            comp_of_root[dsu.find((L, p))] for p in range(widths[-1]))

        # Crossing data in slice order.
        self.crossings = []
        for k, s in enumerate(self.slices):
            if s.kind not in ("x+", "x-"):
                continue
            q = s.pos - 1
            dl = direction((k, q))
            dr = direction((k, q + 1))
            parallel = dl == dr
            sign = (1 if parallel else -1) * (1 if s.kind == "x+" else -1)
            self.crossings.append({
                "slice": k,
                "pos": s.pos,
                "kind": s.kind,
                "sign": sign,
                "components": (self._comp_of_node((k, q)),
                               self._comp_of_node((k, q + 1))),
            })

    # -- basic queries ---------------------------------------------------------

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def crossing_signs(self) -> list[int]:
        return [c["sign"] for c in self.crossings]

    def n_pos_neg(self) -> tuple[int, int]:
        signs = self.crossing_signs()
        return sum(1 for s in signs if s > 0), sum(1 for s in signs if s < 0)

    def is_closed(self) -> bool:
        return not self.bottom_orients and not self.top_orients

    def writhe(self, component=None) -> int:
        if component is None:
            return sum(c["sign"] for c in self.crossings)
        return sum(c["sign"] for c in self.crossings
                   if c["components"] == (component, component))

    def component_direction(self, level: int, pos: int) -> int:
        return self._dir_of_node((level, pos))

    def component_at(self, level: int, pos: int) -> int:
        return self._comp_of_node((level, pos))

    def color_of(self, component: int) -> int:
        return self.colors.get(component, 1)

    def with_colors(self, colors) -> "TangleDiagram":
        return TangleDiagram(self.bottom_orients, self.slices, self.flips, colors)

    def __eq__(self, other):
        if not isinstance(other, TangleDiagram):
            return NotImplemented
        return (self.bottom_orients == other.bottom_orients
                and self.slices == other.slices
                and self.flips == other.flips
                and self.colors == other.colors)

    def __hash__(self):
        return hash((self.bottom_orients, self.slices, self.flips,
                     tuple(sorted(self.colors.items()))))

    def __repr__(self):
        b = "".join("u" if o > 0 else "d" for o in self.bottom_orients)
        return (f"TangleDiagram(in={b!r}, {len(self.slices)} slices, "
                f"{self.n_crossings} crossings)")

    # -- diagnostics ----------------------------------------------------------

    def validate(self) -> dict:
        """Structural report: writhes, crossing count, components, orientations."""
        per_comp = {c: self.writhe(c) for c in range(self.num_components)}
        return {
            "crossings": self.n_crossings,
            "components": self.num_components,
            "writhe_total": self.writhe(),
            "writhe_per_component": per_comp,
            "closed": sorted(self._closed_components),
            "bottom": ["u" if o > 0 else "d" for o in self.bottom_orients],
            "top": ["u" if o > 0 else "d" for o in self.top_orients],
            "colors": {c: self.color_of(c) for c in range(self.num_components)},
        }


# -- text format ---------------------------------------------------------------

def serialize(D: TangleDiagram) -> str:
    lines = ["in: [" + " ".join("u" if o > 0 else "d"
                                for o in D.bottom_orients) + "]"]
    if D.colors:
        body = ", ".join(f"{c}: {n}" for c, n in sorted(D.colors.items()))
        lines.append("colors: {" + body + "}")
    if D.flips:
        lines.append("flips: [" + " ".join(str(c) for c in sorted(D.flips)) + "]")
    lines.extend(str(s) for s in D.slices)
    return "\n".join(lines) + "\n"


_SLICE_RE = re.compile(r"^(id|x\+|x-|cup|cap)(?:\s+(\d+))?$")


def parse_tangle(text: str) -> TangleDiagram:
    bottom = None
    colors = {}
    flips = ()
    out_check = None
    slices = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("in:"):
            body = line[3:].strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise DiagramError(f"line {ln}: malformed in: header")
            toks = body[1:-1].replace(",", " ").split()
            try:
                bottom = tuple({"u": 1, "d": -1}[t] for t in toks)
            except KeyError:
                raise DiagramError(f"line {ln}: orientations must be u or d")
            continue
        if line.startswith("out:"):
            body = line[4:].strip()
            toks = body[1:-1].replace(",", " ").split()
            try:
                out_check = tuple({"u": 1, "d": -1}[t] for t in toks)
            except KeyError:
                raise DiagramError(f"line {ln}: orientations must be u or d")
            continue
        if line.startswith("colors:"):
            body = line[len("colors:"):].strip()
            if not (body.startswith("{") and body.endswith("}")):
                raise DiagramError(f"line {ln}: malformed colors map")
            colors = {}
            inner = body[1:-1].strip()
            if inner:
                for item in inner.split(","):
                    try:
                        k, v = item.split(":")
                        colors[int(k)] = int(v)
                    except ValueError:
                        raise DiagramError(f"line {ln}: malformed colors map")
            continue
        if line.startswith("flips:"):
            body = line[len("flips:"):].strip()
            toks = body[1:-1].replace(",", " ").split()
            try:
                flips = tuple(int(t) for t in toks)
            except ValueError:
                raise DiagramError(f"line {ln}: malformed flips list")
            continue
        m = _SLICE_RE.match(line)
        if not m:
            raise DiagramError(f"line {ln}: malformed slice {line!r}")
        kind, pos = m.group(1), m.group(2)
        if kind == "id":
            slices.append((Slice("id"), ln))
        else:
            if pos is None:
                raise DiagramError(f"line {ln}: {kind} needs a position")
            slices.append((Slice(kind, int(pos)), ln))
    if bottom is None:
        raise DiagramError("missing in: header")
    slice_lines = [ln for (_s, ln) in slices]
    slices = [s for (s, _ln) in slices]
    try:
        D = TangleDiagram(bottom, slices, flips, colors)
    except DiagramError as e:
        msg = str(e)
        m = re.match(r"slice (\d+): (.*)", msg)
        if m:
            k = int(m.group(1)) - 1
            if 0 <= k < len(slice_lines):
                raise DiagramError(f"line {slice_lines[k]}: {m.group(2)}")
        raise
    if out_check is not None and D.top_orients != out_check:
        raise DiagramError("out: header does not match derived top orientations")
    return D


# -- vertical composition --------------------------------------------------------

def compose_vertical(D1: TangleDiagram, D2: TangleDiagram) -> TangleDiagram:
    """Stack D2 on top of D1.  Boundaries must match pointwise."""
    if len(D1.top_orients) != len(D2.bottom_orients):
        raise DiagramError(
            f"boundary mismatch: top width {len(D1.top_orients)} vs "
            f"bottom width {len(D2.bottom_orients)}")
    for p, (a, b) in enumerate(zip(D1.top_orients, D2.bottom_orients)):
        if a != b:
            raise DiagramError(f"orientation mismatch at boundary point {p + 1}")
        c1 = D1.top_components[p]
        c2 = D2.bottom_components[p]
        if c1 in D1.colors and c2 in D2.colors and \
                D1.colors[c1] != D2.colors[c2]:
            raise DiagramError(f"color mismatch at boundary point {p + 1}")
    merged = TangleDiagram(D1.bottom_orients, D1.slices + D2.slices)
    shift = len(D1.slices)
    colors = {}
    for c, n in D1.colors.items():
        lvl, pos = D1._curve_first_node[c]
        colors[merged.component_at(lvl, pos)] = n
    for c, n in D2.colors.items():
        lvl, pos = D2._curve_first_node[c]
        colors[merged.component_at(lvl + shift, pos)] = n
    # Closed curves of the composite inherit the factor orientations.
    flips = []
    for c in merged._closed_components:
        lvl, pos = merged._curve_first_node[c]
        if lvl <= shift:
            want = D1.component_direction(lvl, pos)
        else:
            want = D2.component_direction(lvl - shift, pos)
        if merged.component_direction(lvl, pos) != want:
            flips.append(c)
    return TangleDiagram(merged.bottom_orients, merged.slices, flips, colors)


# -- cabling ---------------------------------------------------------------------

def cable(D: TangleDiagram, mult) -> TangleDiagram:
    """Replace each strand of component c by mult(c) blackboard parallels.

    Adjacent cable strands take opposite orientations; strand 1 (leftmost
    along the forward direction) keeps the original orientation.  A zero
    multiplicity removes the component (the empty cable).
    """
    if isinstance(mult, int):
        m_of = {c: mult for c in range(D.num_components)}
    else:
        m_of = {c: int(mult.get(c, 0)) for c in range(D.num_components)}
    for c, m in m_of.items():
        if m < 0:
            raise DiagramError("cable multiplicities must be nonnegative")

    def bundle(level):
        return [(D.component_at(level, p), D.component_direction(level, p))
                for p in range(D.widths[level])]

    new_slices: list[Slice] = []
    new_bottom: list[int] = []
    level_map = [0]  # original level -> cable level
    # bottom boundary
    for (c, d) in bundle(0):
        m = m_of[c]
        for k in range(m):
            j = k + 1 if d > 0 else m - k  # strand index at this column
            new_bottom.append(d if j % 2 == 1 else -d)

    for lvl, s in enumerate(D.slices):
        cur = bundle(lvl)
        offs = [0]
        for (c, _d) in cur:
            offs.append(offs[-1] + m_of[c])
        if s.kind == "id":
            if offs[-1] > 0:
                new_slices.append(Slice("id"))
        elif s.kind in ("x+", "x-"):
            q = s.pos - 1
            ml = m_of[cur[q][0]]
            mr = m_of[cur[q + 1][0]]
            base = offs[q]
            for i in range(ml - 1, -1, -1):
                for j in range(mr):
                    new_slices.append(Slice(s.kind, base + i + j + 1))
        elif s.kind == "cup":
            q = s.pos - 1
            c = bundle(lvl + 1)[q][0]
            m = m_of[c]
            base = offs[q]
            for k in range(m):
                new_slices.append(Slice("cup", base + k + 1))
        elif s.kind == "cap":
            q = s.pos - 1
            c = cur[q][0]
            m = m_of[c]
            base = offs[q]
            for k in range(m):
                new_slices.append(Slice("cap", base + m - k))
        level_map.append(len(new_slices))

    probe = TangleDiagram(new_bottom, new_slices)

    # Orientation flips for orientation-free cable curves: cable strand j of
    # an original strand takes the original direction when j is odd, the
    # reverse when j is even.  Decide each cable curve at the first original
    # level it appears on.
    decided: dict = {}
    for lvl in range(len(D.slices) + 1):
        cur = bundle(lvl)
        clvl = level_map[lvl]
        col = 0
        for (c, d) in cur:
            m = m_of[c]
            for k in range(m):
                cc = probe.component_at(clvl, col)
                if cc in probe._closed_components and cc not in decided:
                    j = k + 1 if d > 0 else m - k
                    want = d if j % 2 == 1 else -d
                    decided[cc] = probe.component_direction(clvl, col) != want
                col += 1
    flips = sorted(cc for cc, f in decided.items() if f)
    return TangleDiagram(new_bottom, new_slices, flips)


def cable_crossing_count(D: TangleDiagram, mult) -> int:
    if isinstance(mult, int):
        m_of = {c: mult for c in range(D.num_components)}
    else:
        m_of = {c: int(mult.get(c, 0)) for c in range(D.num_components)}
    return sum(m_of[c1] * m_of[c2] for x in D.crossings
               for (c1, c2) in [x["components"]])


# -- PD code import ---------------------------------------------------------------

def import_pd(pd_code) -> TangleDiagram:
    """Build a closed slice diagram from a planar diagram code.

    Crossings are 4-tuples listed counterclockwise from the incoming
    under-strand.  Edge labels must each occur exactly twice.  The sweep
    places crossings greedily (leftmost available position first), with
    backtracking; inconsistent or non-planar codes raise DiagramError.
    """
    crossings = [tuple(int(x) for x in c) for c in pd_code]
    if any(len(c) != 4 for c in crossings):
        raise DiagramError("PD crossings must be 4-tuples")
    counts: dict = {}
    for c in crossings:
        for e in c:
            counts[e] = counts.get(e, 0) + 1
    for e, n in counts.items():
        if n != 2:
            raise DiagramError(f"edge label {e} used {n} times (expected 2)")
    if not crossings:
        return TangleDiagram([], [Slice("cup", 1), Slice("cap", 1)])

    # Orient each crossing: the under-strand runs a -> c; the over-strand
    # direction must give every edge exactly one head and one tail.  Edge
    # numbering ascending along the orientation is preferred where it applies.
    heads: dict = {}
    tails: dict = {}
    over_in_at_b: dict = {}

    def place(ci, b_in):
        a, b, c, d = crossings[ci]
        pairs = [(a, "t"), (c, "h")]
        pairs += [(b, "t"), (d, "h")] if b_in else [(d, "t"), (b, "h")]
        done = []
        for e, role in pairs:
            store = tails if role == "t" else heads
            if e in store:
                for e2, role2 in done:
                    (tails if role2 == "t" else heads).pop(e2)
                return False
            store[e] = ci
            done.append((e, role))
        over_in_at_b[ci] = b_in
        return True

    def unplace(ci):
        a, b, c, d = crossings[ci]
        b_in = over_in_at_b.pop(ci)
        tails.pop(a)
        heads.pop(c)
        if b_in:
            tails.pop(b)
            heads.pop(d)
        else:
            tails.pop(d)
            heads.pop(b)

    def orient(ci):
        if ci == len(crossings):
            return True
        n2 = 2 * len(crossings)
        a, b, c, d = crossings[ci]
        if (d - b) % n2 == 1:
            prefer = [True, False]  # over runs b -> d
        elif (b - d) % n2 == 1:
            prefer = [False, True]  # over runs d -> b
        else:
            prefer = [True, False]
        for b_in in prefer:
            if place(ci, b_in):
                if orient(ci + 1):
                    return True
                unplace(ci)
        return False

    if not orient(0):
        raise DiagramError("PD code admits no consistent orientation")

    def crossing_rotations(ci):
        """All four placements of crossing ci in the sweep.

        Each entry: (BL, dl, BR, dr, TL, TR, kind).  BL/BR are the edge ends
        at the bottom (left/right), dl/dr their strand directions (+1 when the
        strand climbs through this level), TL/TR the ends at the top, kind the
        slice type realized ("x+" when the BL--TR strand is over).
        """
        a, b, c, d = crossings[ci]
        oin = b if over_in_at_b[ci] else d
        incoming = {a, oin}
        # Corner order fixed so that X[1,4,2,5],X[3,6,4,1],X[5,2,6,3] is the
        # writhe +3 trefoil.
        ents = [a, b, c, d]
        outs = []
        for r in range(4):
            BL, TL, TR, BR = (ents[r], ents[(r + 1) % 4],
                              ents[(r + 2) % 4], ents[(r + 3) % 4])
            kind = "x-" if {BL, TR} == {a, c} else "x+"
            dl = 1 if BL in incoming else -1
            dr = 1 if BR in incoming else -1
            outs.append((BL, dl, BR, dr, TL, TR, kind))
        return outs

    front: list = []  # (edge, dirflag): dirflag +1 = strand pointing up here
    slices_acc: list[Slice] = []
    cup_records: list = []  # (level, pos0, intended_dir) for flip fixing
    placed = [False] * len(crossings)
    memo_fail: set = set()

    def emit_cup(i0, left_end, right_end):
        """Insert two new front ends at 0-based position i0."""
        slices_acc.append(Slice("cup", i0 + 1))
        front.insert(i0, left_end)
        front.insert(i0 + 1, right_end)
        lvl = len(slices_acc)
        cup_records.append((lvl, i0, left_end[1]))
        cup_records.append((lvl, i0 + 1, right_end[1]))

    def caps_forced():
        while True:
            hit = False
            for i in range(len(front) - 1):
                if front[i][0] == front[i + 1][0]:
                    if front[i][1] == front[i + 1][1]:
                        return False
                    slices_acc.append(Slice("cap", i + 1))
                    del front[i:i + 2]
                    hit = True
                    break
            if not hit:
                return True

    def search():
        key = (tuple(front), tuple(placed))
        if key in memo_fail:
            return False
        mark = len(slices_acc)
        mark_cups = len(cup_records)
        save_front = list(front)
        save_placed = list(placed)

        def undo():
            del slices_acc[mark:]
            del cup_records[mark_cups:]
            front[:] = save_front
            placed[:] = save_placed

        if not caps_forced():
            undo()
            memo_fail.add(key)
            return False
        if all(placed):
            if not front:
                return True
            undo()
            memo_fail.add(key)
            return False

        open_edges = {e for (e, _d) in front}
        candidates = []
        for ci in range(len(crossings)):
            if placed[ci]:
                continue
            for rot in crossing_rotations(ci):
                BL, dl, BR, dr, TL, TR, kind = rot
                for i in range(len(front) - 1):
                    if front[i] == (BL, dl) and front[i + 1] == (BR, dr):
                        candidates.append((0, i, ci, rot))
                for i in range(len(front)):
                    if front[i] == (BL, dl) and BR not in open_edges:
                        candidates.append((1, i, ci, rot))
                    if front[i] == (BR, dr) and BL not in open_edges:
                        candidates.append((2, i, ci, rot))
        if not front:
            ci0 = min(ci for ci in range(len(crossings)) if not placed[ci])
            for rot in crossing_rotations(ci0):
                candidates.append((3, 0, ci0, rot))
        candidates.sort(key=lambda t: (t[0], t[1], t[2]))

        for (mode, i, ci, rot) in candidates:
            BL, dl, BR, dr, TL, TR, kind = rot
            mark2 = len(slices_acc)
            mark2_cups = len(cup_records)
            save2 = list(front)
            if mode == 0:
                pos = i
            elif mode == 1:
                emit_cup(i + 1, (BR, dr), (BR, -dr))
                pos = i
            elif mode == 2:
                emit_cup(i, (BL, -dl), (BL, dl))
                pos = i + 1
            else:
                emit_cup(0, (BL, -dl), (BL, dl))
                emit_cup(2, (BR, dr), (BR, -dr))
                pos = 1
            slices_acc.append(Slice(kind, pos + 1))
            front[pos] = (TL, dr)       # TL continues the BR strand
            front[pos + 1] = (TR, dl)   # TR continues the BL strand
            placed[ci] = True
            if search():
                return True
            placed[ci] = False
            del slices_acc[mark2:]
            del cup_records[mark2_cups:]
            front[:] = save2
        undo()
        memo_fail.add(key)
        return False

    if not search():
        raise DiagramError("PD code could not be realized as a planar sweep")

    probe = TangleDiagram([], slices_acc)
    intended: dict = {}
    for (lvl, pos0, want) in cup_records:
        comp = probe.component_at(lvl, pos0)
        have = probe.component_direction(lvl, pos0)
        flip = have != want
        if comp in intended and intended[comp] != flip:
            raise DiagramError("PD orientation is inconsistent on a component")
        intended[comp] = flip
    flips = tuple(sorted(c for c, f in intended.items() if f))
    return TangleDiagram([], slices_acc, flips)


# -- diagram surgery -----------------------------------------------------------

def inherit_orientations(D: TangleDiagram, probe: TangleDiagram, level_map):
    """Rebuild probe with closed-curve orientations inherited from D.

    level_map: probe level -> D level (or None where no correspondence).
    """
    flips = []
    for c in sorted(probe._closed_components):
        found = None
        for plvl in range(len(probe.slices) + 1):
            dl = level_map(plvl)
            if dl is None:
                continue
            for p in range(probe.widths[plvl]):
                if probe.component_at(plvl, p) == c:
                    found = (plvl, p, dl)
                    break
            if found:
                break
        if found is None:
            continue
        plvl, p, dl = found
        if probe.component_direction(plvl, p) != D.component_direction(dl, p):
            flips.append(c)
    return TangleDiagram(probe.bottom_orients, probe.slices, flips, {})


def insert_kink(D: TangleDiagram, level: int, pos: int, sign: int) -> TangleDiagram:
    """A curl of the given writhe on the strand at (level, pos)."""
    kind = "x+" if sign > 0 else "x-"
    new = [Slice("cup", pos + 1), Slice(kind, pos), Slice("cap", pos + 1)]
    slices = list(D.slices)
    slices[level:level] = new
    probe = TangleDiagram(D.bottom_orients, slices)

    def lmap(plvl):
        if plvl <= level:
            return plvl
        if plvl >= level + 3:
            return plvl - 3
        return None

    out = inherit_orientations(D, probe, lmap)
    if out.writhe() != D.writhe() + sign:
        raise DiagramError("kink insertion failed to add the requested writhe")
    return out


def insert_r2(D: TangleDiagram, level: int, pos: int,
              first="x+") -> TangleDiagram:
    """A poke pair (opposite crossings) between strands pos, pos+1."""
    second = "x-" if first == "x+" else "x+"
    new = [Slice(first, pos), Slice(second, pos)]
    slices = list(D.slices)
    slices[level:level] = new
    probe = TangleDiagram(D.bottom_orients, slices)

    def lmap(plvl):
        if plvl <= level:
            return plvl
        if plvl >= level + 2:
            return plvl - 2
        return None

    out = inherit_orientations(D, probe, lmap)
    if out.writhe() != D.writhe():
        raise DiagramError("poke insertion changed the writhe")
    return out


# -- corpus builders ----------------------------------------------------------

def braid_closure(n_strands: int, word) -> TangleDiagram:
    """Trace closure of a braid word (entries +-k for sigma_k^{+-1})."""
    slices = [Slice("cup", p + 1) for p in range(n_strands)]
    base = n_strands
    for w in word:
        k = abs(w)
        if not (1 <= k <= n_strands - 1):
            raise DiagramError(f"braid generator {w} out of range")
        slices.append(Slice("x+" if w > 0 else "x-", base + k))
    slices.extend(Slice("cap", n_strands - p) for p in range(n_strands))
    return TangleDiagram([], slices)


def unknot_diagram() -> TangleDiagram:
    return TangleDiagram([], [Slice("cup", 1), Slice("cap", 1)])


def unknot_with_kink(sign: int) -> TangleDiagram:
    """One-crossing unknot; sign +1 gives writhe +1, -1 gives writhe -1.

    The curl crossing sees the two branches with parallel directions, so the
    positive kink is realized by an x+ slice.
    """
    kind = "x+" if sign > 0 else "x-"
    return TangleDiagram([], [Slice("cup", 1), Slice("cup", 3),
                              Slice(kind, 2), Slice("cap", 3), Slice("cap", 1)])


def trefoil_diagram(right: bool = True) -> TangleDiagram:
    return braid_closure(2, [1, 1, 1] if right else [-1, -1, -1])


def hopf_diagram(positive: bool = True) -> TangleDiagram:
    return braid_closure(2, [1, 1] if positive else [-1, -1])


def figure_eight_diagram() -> TangleDiagram:
    return braid_closure(3, [1, -2, 1, -2])
