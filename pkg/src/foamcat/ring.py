"""The coefficient ring R = Z[i][a,h] and the graded dimension polynomials.

R is graded by deg(a) = 4 and deg(h) = 2.  Elements are kept sparse: a map
from exponent pairs (d_a, d_h) to nonzero Gaussian-integer coefficients.
LaurentPolynomial (variable q, integer coefficients) carries graded Euler
characteristics; TriPolynomial (variables r, t, q) carries rank generating
functions of triply-graded homology.
"""

from __future__ import annotations

from .gaussian import GaussianInteger, _coerce


class RingElement:
    """A sparse polynomial in a, h over Z[i]."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        t = {}
        if terms:
            for key, c in terms.items():
                c = _coerce(c)
                if not c.is_zero():
                    da, dh = key
                    t[(int(da), int(dh))] = c
        self.terms = t

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "RingElement":
        return RingElement()

    @staticmethod
    def one() -> "RingElement":
        return RingElement({(0, 0): GaussianInteger.one()})

    @staticmethod
    def from_gaussian(c) -> "RingElement":
        return RingElement({(0, 0): _coerce(c)})

    @staticmethod
    def gen_a() -> "RingElement":
        return RingElement({(1, 0): GaussianInteger.one()})

    @staticmethod
    def gen_h() -> "RingElement":
        return RingElement({(0, 1): GaussianInteger.one()})

    @staticmethod
    def imag() -> "RingElement":
        return RingElement({(0, 0): GaussianInteger.i()})

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        other = _coerce_ring(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
        out = RingElement.__new__(RingElement)
        out.terms = t
        return out

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce_ring(other))

    def __rsub__(self, other):
        return _coerce_ring(other) + (-self)

    def __neg__(self):
        out = RingElement.__new__(RingElement)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __mul__(self, other):
        other = _coerce_ring(other)
        t: dict = {}
        for (da1, dh1), c1 in self.terms.items():
            for (da2, dh2), c2 in other.terms.items():
                k = (da1 + da2, dh1 + dh2)
                c = c1 * c2
                s = t.get(k)
                s = c if s is None else s + c
                if s.is_zero():
                    t.pop(k, None)
                else:
                    t[k] = s
        out = RingElement.__new__(RingElement)
        out.terms = t
        return out

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, GaussianInteger)):
            other = RingElement.from_gaussian(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- structure -----------------------------------------------------------

    def is_unit(self) -> bool:
        """True iff the element is a constant with coefficient in {1,-1,i,-i}."""
        if len(self.terms) != 1:
            return False
        c = self.terms.get((0, 0))
        return c is not None and c.is_unit()

    def unit_inverse(self) -> "RingElement":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of Z[i][a,h]")
        return RingElement.from_gaussian(self.terms[(0, 0)].inverse_unit())

    def constant(self) -> GaussianInteger:
        return self.terms.get((0, 0), GaussianInteger.zero())

    def degree(self) -> int | None:
        """Degree under deg(a)=4, deg(h)=2 if homogeneous, else None.

        The zero element is homogeneous of every degree and reports None.
        """
        degs = {4 * da + 2 * dh for (da, dh) in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        return len({4 * da + 2 * dh for (da, dh) in self.terms}) <= 1

    def specialize(self, a0, h0) -> GaussianInteger:
        """Evaluation homomorphism a -> a0, h -> h0 into Z[i]."""
        a0, h0 = _coerce(a0), _coerce(h0)
        acc = GaussianInteger.zero()
        for (da, dh), c in self.terms.items():
            v = c
            for _ in range(da):
                v = v * a0
            for _ in range(dh):
                v = v * h0
            acc = acc + v
        return acc

    # -- presentation --------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (da, dh) in sorted(self.terms):
            c = self.terms[(da, dh)]
            mono = ""
            if da:
                mono += "a" if da == 1 else f"a^{da}"
            if dh:
                mono += ("*" if mono else "") + ("h" if dh == 1 else f"h^{dh}")
            cs = str(c)
            if mono:
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append(f"-{mono}")
                elif c.re and c.im:
                    parts.append(f"({cs})*{mono}")
                else:
                    parts.append(f"{cs}*{mono}")
            else:
                parts.append(cs if not (c.re and c.im) else f"({cs})")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"RingElement({self})"


def _coerce_ring(x) -> RingElement:
    if isinstance(x, RingElement):
        return x
    if isinstance(x, (int, GaussianInteger)):
        return RingElement.from_gaussian(x)
    raise TypeError(f"cannot coerce {x!r} into Z[i][a,h]")


R_ZERO = RingElement.zero()
R_ONE = RingElement.one()
R_A = RingElement.gen_a()
R_H = RingElement.gen_h()
R_I = RingElement.imag()


class LaurentPolynomial:
    """A Laurent polynomial in q with integer coefficients, kept sparse."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        t = {}
        if terms:
            for k, c in terms.items():
                if c:
                    t[int(k)] = int(c)
        self.terms = t

    @staticmethod
    def zero() -> "LaurentPolynomial":
        return LaurentPolynomial()

    @staticmethod
    def one() -> "LaurentPolynomial":
        return LaurentPolynomial({0: 1})

    @staticmethod
    def q_power(k: int, c: int = 1) -> "LaurentPolynomial":
        return LaurentPolynomial({k: c})

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return LaurentPolynomial(t)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LaurentPolynomial({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPolynomial({k: c * other for k, c in self.terms.items()})
        t: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                t[k] = t.get(k, 0) + c1 * c2
        return LaurentPolynomial(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("only nonnegative powers")
        out = LaurentPolynomial.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                qpow = "q" if k == 1 else f"q^{k}"
                body = qpow if mag == 1 else f"{mag}*{qpow}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPolynomial({self})"


def quantum_integer(n: int) -> LaurentPolynomial:
    """[n] = q^(n-1) + q^(n-3) + ... + q^(1-n); [0] = 0, [1] = 1."""
    if n < 0:
        raise ValueError("quantum integers are defined for n >= 0")
    return LaurentPolynomial({n - 1 - 2 * j: 1 for j in range(n)})


class TriPolynomial:
    """Rank generating polynomial in (r, t, q), nonnegative coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        t = {}
        if terms:
            for key, c in terms.items():
                c = int(c)
                if c < 0:
                    raise ValueError("rank coefficients must be >= 0")
                if c:
                    i, j, k = key
                    t[(int(i), int(j), int(k))] = c
        self.terms = t

    def add_rank(self, i: int, j: int, k: int, rank: int) -> None:
        if rank < 0:
            raise ValueError("rank coefficients must be >= 0")
        if rank:
            key = (i, j, k)
            self.terms[key] = self.terms.get(key, 0) + rank

    def evaluate_rt(self, r_val: int, t_val: int) -> LaurentPolynomial:
        """Specialize r and t to integers (typically -1, -1), leaving q."""
        out: dict = {}
        for (i, j, k), c in self.terms.items():
            out[k] = out.get(k, 0) + c * (r_val ** i) * (t_val ** j)
        return LaurentPolynomial(out)

    def __eq__(self, other):
        if not isinstance(other, TriPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j, k) in sorted(self.terms):
            c = self.terms[(i, j, k)]
            factors = []
            if i:
                factors.append("r" if i == 1 else f"r^{i}")
            if j:
                factors.append("t" if j == 1 else f"t^{j}")
            if k:
                factors.append("q" if k == 1 else f"q^{k}")
            if not factors:
                body = str(c)
            else:
                mono = " ".join(factors)
                body = mono if c == 1 else f"{c} {mono}"
            parts.append(body)
        return " + ".join(parts)

    def __repr__(self):
        return f"TriPolynomial({self})"
