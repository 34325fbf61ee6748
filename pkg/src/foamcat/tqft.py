"""The functor from closed formal complexes to complexes of free R-modules.

A closed smoothing with L loops goes to the L-fold tensor power of the free
rank-two module on 1, X (deg(1) = -1, deg(X) = +1), shifted by the object's
quantum shift.  A cobordism component with p source loops, q target loops
and d dots acts by multiply-everything, multiply by X^d, then comultiply
q - 1 times, with

    eps(1) = 0, eps(X) = 1,
    delta(1) = 1 x X + X x 1 - h 1 x 1,
    delta(X) = X x X + a 1 x 1.

Homology is computed over Z[i] after specializing (a, h); at (0, 0) the
quantum grading survives and Smith normal form runs per degree, otherwise
the homology is reported ungraded per height.
"""

from __future__ import annotations

from .cobcat import Cobordism
from .complexes import ChainMap, FormalComplex
from .diagrams import TangleDiagram
from .gaussian import GaussianInteger
from .ring import LaurentPolynomial, RingElement
from .smith import (
    identity as snf_identity,
    kernel_basis,
    mat_mul,
    quotient_group,
    smith_normal_form,
    solve_exact,
)

R_a = RingElement.gen_a()
R_h = RingElement.gen_h()
R_one = RingElement.one()


class ModuleComplex:
    """Heights -> graded free modules; differentials as R-matrices.

    basis[h]: list of (object_index, bits) with bits[k] = 0 for 1, 1 for X
    on the k-th loop; degree[h]: parallel list of quantum degrees;
    diff[h]: dict (i, j) -> RingElement.
    """

    def __init__(self, basis, degree, diff):
        self.basis = basis
        self.degree = degree
        self.diff = diff

    def heights(self):
        return sorted(self.basis)

    def dim(self, h) -> int:
        return len(self.basis.get(h, ()))

    def check_d_squared(self) -> bool:
        for h in self.heights():
            d0 = self.diff.get(h)
            d1 = self.diff.get(h + 1)
            if not d0 or not d1:
                continue
            acc = {}
            for (i, j), c in d0.items():
                for (k, i2), c2 in d1.items():
                    if i2 != i:
                        continue
                    key = (k, j)
                    acc[key] = acc.get(key, RingElement.zero()) + c2 * c
            if any(not v.is_zero() for v in acc.values()):
                return False
        return True


def _mul_in_A(vals):
    """Product of basis letters in A = R[X]/(X^2 - hX - a) as (c1, c0)."""
    c1, c0 = RingElement.zero(), R_one
    for v in vals:
        if v == 0:
            continue
        # multiply by X
        c1, c0 = c1 * R_h + c0, c1 * R_a
    return c1, c0


def _comultiply(c1, c0, q):
    """Coefficients of Delta^(q) applied to c1*X + c0 in basis {1, X}^q."""
    if q == 0:
        return {(): c1}  # counit
    vec = {(1,): c1, (0,): c0}
    vec = {k: v for k, v in vec.items() if not v.is_zero()}
    while len(next(iter(vec), ())) < q:
        nxt = {}
        for bits, c in vec.items():
            x0 = bits[0]
            if x0 == 1:
                pieces = [((1, 1), c), ((0, 0), c * R_a)]
            else:
                pieces = [((0, 1), c), ((1, 0), c), ((0, 0), -(c * R_h))]
            for pair, cc in pieces:
                key = pair + bits[1:]
                cur = nxt.get(key)
                cc = cc if cur is None else cur + cc
                if cc.is_zero():
                    nxt.pop(key, None)
                else:
                    nxt[key] = cc
        vec = nxt
        if not vec:
            return {}
    return vec


def functor_on_cobordism(cob: Cobordism):
    """Matrix entries of the induced map as {(tgt_bits, src_bits): R}."""
    sL = cob.src.loops
    tL = cob.tgt.loops
    ns = cob.src.n_elements
    out: dict = {}
    for term, coef in cob.terms.items():
        blocks = []
        for (els, d) in term:
            src_loops = [e - cob.src.n_arcs for e in els if e < ns]
            tgt_loops = [e - ns - cob.tgt.n_arcs for e in els if e >= ns]
            blocks.append((src_loops, tgt_loops, d))
        if sum(len(b[0]) for b in blocks) != sL or \
                sum(len(b[1]) for b in blocks) != tL:
            raise ValueError("functor needs closed smoothings (no arcs)")
        for m in range(1 << sL):
            src_bits = tuple((m >> k) & 1 for k in range(sL))
            pieces = [({}, coef)]
            dead = False
            for (src_loops, tgt_loops, d) in blocks:
                vals = [src_bits[k] for k in src_loops]
                c1, c0 = _mul_in_A(vals)
                for _ in range(d):
                    c1, c0 = c1 * R_h + c0, c1 * R_a
                vec = _comultiply(c1, c0, len(tgt_loops))
                if not vec:
                    dead = True
                    break
                new_pieces = []
                for (assign, cc) in pieces:
                    for bits, c in vec.items():
                        a2 = dict(assign)
                        for pos, k in enumerate(tgt_loops):
                            a2[k] = bits[pos]
                        v = cc * c
                        if not v.is_zero():
                            new_pieces.append((a2, v))
                pieces = new_pieces
                if not pieces:
                    dead = True
                    break
            if dead:
                continue
            for (assign, cc) in pieces:
                tgt_bits = tuple(assign[k] for k in range(tL))
                key = (tgt_bits, src_bits)
                cur = out.get(key)
                cc2 = cc if cur is None else cur + cc
                if cc2.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = cc2
    return out


def apply_functor(C: FormalComplex) -> ModuleComplex:
    """Turn a closed formal complex into a complex of graded free modules."""
    if C.nb != 0 or C.nt != 0:
        raise ValueError("the module functor applies to closed diagrams only")
    basis: dict = {}
    degree: dict = {}
    offsets: dict = {}
    for h in C.heights():
        bl = []
        dl = []
        offs = []
        for oi, o in enumerate(C.objects[h]):
            offs.append(len(bl))
            L = o.smoothing.loops
            for m in range(1 << L):
                bits = tuple((m >> k) & 1 for k in range(L))
                bl.append((oi, bits))
                dl.append(o.shift + sum(1 if b else -1 for b in bits))
        basis[h] = bl
        degree[h] = dl
        offsets[h] = offs

    diff: dict = {}
    for h, entries in C.diff.items():
        out = diff.setdefault(h, {})
        for (i, j), cob in entries.items():
            ents = functor_on_cobordism(cob)
            off_j = offsets[h][j]
            off_i = offsets[h + 1][i]
            sL = cob.src.loops
            tL = cob.tgt.loops
            for (tgt_bits, src_bits), c in ents.items():
                row = off_i + sum(tgt_bits[k] << k for k in range(tL))
                col = off_j + sum(src_bits[k] << k for k in range(sL))
                cur = out.get((row, col))
                c2 = c if cur is None else cur + c
                if c2.is_zero():
                    out.pop((row, col), None)
                else:
                    out[(row, col)] = c2
    return ModuleComplex(basis, degree, diff)


def _object_offsets(M: ModuleComplex):
    offs: dict = {}
    for h, bl in M.basis.items():
        m = {}
        for pos, (oi, _bits) in enumerate(bl):
            m.setdefault(oi, pos)
        offs[h] = m
    return offs


def functor_on_chain_map(f: ChainMap, M_src: ModuleComplex,
                         M_tgt: ModuleComplex):
    """Per-height R-matrices of the induced module map."""
    src_offs = _object_offsets(M_src)
    tgt_offs = _object_offsets(M_tgt)
    out: dict = {}
    hs = f.height_shift
    for h, m in f.comps.items():
        mat = out.setdefault(h, {})
        for (i, j), cob in m.items():
            ents = functor_on_cobordism(cob)
            off_j = src_offs[h][j]
            off_i = tgt_offs[h + hs][i]
            sL = cob.src.loops
            tL = cob.tgt.loops
            for (tgt_bits, src_bits), c in ents.items():
                row = off_i + sum(tgt_bits[k] << k for k in range(tL))
                col = off_j + sum(src_bits[k] << k for k in range(sL))
                cur = mat.get((row, col))
                c2 = c if cur is None else cur + c
                if c2.is_zero():
                    mat.pop((row, col), None)
                else:
                    mat[(row, col)] = c2
    return out


def euler_characteristic(M: ModuleComplex) -> LaurentPolynomial:
    terms: dict = {}
    for h in M.heights():
        s = -1 if h % 2 else 1
        for d in M.degree[h]:
            terms[d] = terms.get(d, 0) + s
    return LaurentPolynomial(terms)


def graded_state_sum(D: TangleDiagram) -> LaurentPolynomial:
    """Kauffman-style state sum of a closed diagram in the pinned convention:

        sum over u of (-1)^(|u| - n-) q^(2n- - n+ - |u|) (q + 1/q)^loops(u).
    """
    if not D.is_closed():
        raise ValueError("state sum needs a closed diagram")
    from .complexes import resolve_diagram
    c = D.n_crossings
    n_plus, n_minus = D.n_pos_neg()
    qq = LaurentPolynomial({1: 1, -1: 1})
    acc = LaurentPolynomial.zero()
    for m in range(1 << c):
        u = [(m >> k) & 1 for k in range(c)]
        s, _p, _sigs, _pr = resolve_diagram(D, u)
        w = sum(u)
        term = (qq ** s.loops) * LaurentPolynomial.q_power(
            2 * n_minus - n_plus - w, (-1) ** ((w - n_minus) % 2))
        acc = acc + term
    return acc


class HomologyTable:
    """Free ranks and torsion per (height, quantum degree)."""

    def __init__(self, rows, graded: bool, specialization):
        # rows: dict (h, k or None) -> (free_rank, [torsion strings])
        self.rows = rows
        self.graded = graded
        self.specialization = specialization

    def rank(self, h, k=None) -> int:
        return self.rows.get((h, k), (0, []))[0]

    def total_rank(self) -> int:
        return sum(v[0] for v in self.rows.values())

    def poincare_q(self) -> LaurentPolynomial:
        if not self.graded:
            raise ValueError("ungraded table has no q-polynomial")
        terms: dict = {}
        for (h, k), (free, _t) in self.rows.items():
            if h % 2 == 0:
                terms[k] = terms.get(k, 0) + free
            else:
                terms[k] = terms.get(k, 0) - free
        return LaurentPolynomial(terms)

    def to_rows(self):
        out = []
        for (h, k) in sorted(self.rows, key=lambda t: (t[0], t[1] if t[1] is not None else 0)):
            free, torsion = self.rows[(h, k)]
            row = {"i": h, "free_rank": free, "torsion": list(torsion)}
            if self.graded:
                row["k"] = k
            out.append(row)
        return out

    def __eq__(self, other):
        if not isinstance(other, HomologyTable):
            return NotImplemented
        return (self.graded == other.graded and self.rows == other.rows)

    def __repr__(self):
        return f"HomologyTable({self.to_rows()})"


def _specialized_blocks(M: ModuleComplex, a0, h0):
    """Matrices over Z[i] per height, with basis grouped per quantum degree
    when (a0, h0) == (0, 0)."""
    graded = a0 == GaussianInteger.zero() and h0 == GaussianInteger.zero()
    groups: dict = {}
    for h in M.heights():
        if graded:
            for pos, d in enumerate(M.degree[h]):
                groups.setdefault((h, d), []).append(pos)
        else:
            groups[(h, None)] = list(range(M.dim(h)))
    mats = {}
    for (h, k), cols in groups.items():
        rows = groups.get((h + 1, k), [])
        if not rows:
            continue
        mat = [[GaussianInteger.zero() for _ in cols] for _ in rows]
        ent = M.diff.get(h, {})
        rindex = {p: r for r, p in enumerate(rows)}
        cindex = {p: c for c, p in enumerate(cols)}
        for (i, j), c in ent.items():
            if j in cindex and i in rindex:
                mat[rindex[i]][cindex[j]] = c.specialize(a0, h0)
        mats[(h, k)] = mat
    return groups, mats, graded


def homology(M: ModuleComplex, a0=None, h0=None) -> HomologyTable:
    a0 = GaussianInteger.zero() if a0 is None else a0
    h0 = GaussianInteger.zero() if h0 is None else h0
    groups, mats, graded = _specialized_blocks(M, a0, h0)
    rows = {}
    for (h, k), cols in sorted(groups.items(),
                               key=lambda t: (t[0][0], str(t[0][1]))):
        dim = len(cols)
        d_out = mats.get((h, k), [])
        d_in_mat = mats.get((h - 1, k), [])
        d_in = []
        if d_in_mat:
            # incoming matrix has our group as rows; pass as dim x cols
            d_in = d_in_mat
        free, torsion = quotient_group(d_out, d_in, dim)
        if free or torsion:
            rows[(h, k)] = (free, torsion)
    return HomologyTable(rows, graded, (str(a0), str(h0)))


def homology_of_diagram(D: TangleDiagram, a0=None, h0=None,
                        simplify_first=True) -> HomologyTable:
    from .complexes import build_cube, simplify as simplify_cx
    C = build_cube(D)
    if simplify_first:
        C, _ = simplify_cx(C, track=False)
    return homology(apply_functor(C), a0, h0)


class HomologyPresentation:
    """Generators of ker/im at one (height, degree) block over Z[i]."""

    def __init__(self, dim, kernel, gen_in_kernel_coords, invariants):
        self.dim = dim
        self.kernel = kernel                    # dim x k
        self.gens = gen_in_kernel_coords        # k x k (column i = generator)
        self.invariants = invariants            # list of GaussianInteger (0 = free)

    def generators_ambient(self):
        if not self.kernel or not self.gens:
            return []
        return mat_mul(self.kernel, self.gens)


def _presentation(d_out, d_in, dim) -> HomologyPresentation:
    if dim == 0:
        return HomologyPresentation(0, [], [], [])
    if not d_out or not (d_out[0] if d_out else None):
        K = snf_identity(dim)
    else:
        K = kernel_basis(d_out)
    k = len(K[0]) if K and K[0] is not None else 0
    if k == 0:
        return HomologyPresentation(dim, K, [], [])
    if not d_in or not (d_in[0] if d_in else None):
        return HomologyPresentation(dim, K, snf_identity(k),
                                    [GaussianInteger.zero()] * k)
    Y = solve_exact(K, d_in)
    snf = smith_normal_form(Y)
    # Z^k / im(Y): on the basis U^{-1} e_i the quotient is + Z/(d_i)
    Uinv = solve_exact(snf.U, snf_identity(k))
    diag = snf.diagonal()
    invs = []
    for i in range(k):
        d = diag[i] if i < len(diag) else GaussianInteger.zero()
        invs.append(d.canonical_associate())
    return HomologyPresentation(dim, K, Uinv, invs)


def induced_on_homology(f: ChainMap, a0=None, h0=None):
    """Matrices induced on homology presentations by a chain map.

    Returns dict (h, k) -> {"matrix": [[str]], "src": descriptor,
    "tgt": descriptor} where descriptors list the invariant factors
    ("0" meaning a free summand).
    """
    a0 = GaussianInteger.zero() if a0 is None else a0
    h0 = GaussianInteger.zero() if h0 is None else h0
    M_src = apply_functor(f.src)
    M_tgt = apply_functor(f.tgt)
    fmats = functor_on_chain_map(f, M_src, M_tgt)
    g_src, m_src, graded = _specialized_blocks(M_src, a0, h0)
    g_tgt, m_tgt, _ = _specialized_blocks(M_tgt, a0, h0)
    hs = f.height_shift
    out = {}
    for (h, k), cols in g_src.items():
        tkey = (h + hs, k)
        rows_t = g_tgt.get(tkey)
        if rows_t is None:
            continue
        P_src = _presentation(m_src.get((h, k), []),
                              m_src.get((h - 1, k), []), len(cols))
        P_tgt = _presentation(m_tgt.get(tkey, []),
                              m_tgt.get((tkey[0] - 1, k), []), len(rows_t))
        ks = len(P_src.gens)
        kt = len(P_tgt.gens)
        if ks == 0 and kt == 0:
            continue
        F = [[GaussianInteger.zero() for _ in cols] for _ in rows_t]
        fm = fmats.get(h, {})
        cindex = {p: c for c, p in enumerate(cols)}
        rindex = {p: r for r, p in enumerate(rows_t)}
        for (i, j), c in fm.items():
            if j in cindex and i in rindex:
                F[rindex[i]][cindex[j]] = c.specialize(a0, h0)
        if ks == 0 or kt == 0:
            mat = [[]]
        else:
            src_gens = mat_mul(P_src.kernel, P_src.gens)
            img = mat_mul(F, src_gens)
            Y = solve_exact(P_tgt.kernel, img)
            # coordinates in target generators: gens = K * Uinv, so
            # K-coords -> generator coords via U
            U = solve_exact(P_tgt.gens, Y)
            mat = [[str(x) for x in row] for row in U]
        out[(h, k)] = {
            "matrix": mat,
            "src": [str(d) for d in P_src.invariants],
            "tgt": [str(d) for d in P_tgt.invariants],
        }
    return out
