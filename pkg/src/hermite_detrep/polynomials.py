"""Sparse multivariate polynomials, polynomial matrices, rational functions.

Coefficients live in one of two fields: exact rationals (``Fraction``,
the default, used for every algebraic identity) or doubles (used for
inputs containing square roots and for SDP-derived data).  Arithmetic
dispatches through ordinary Python operators, so mixing a Fraction
polynomial with a float one silently produces a float polynomial; the
exact-only operations guard against that explicitly.

Monomial order is lexicographic with x1 > x2 > ... > xn; exponent tuples
compare in that order directly.  The text grammar round-trips exactly:
terms joined by ``+``/``-``; a term is ``coeff``, ``coeff*mono`` or
``mono``; a mono is ``x<i>^<e>`` factors joined by ``*``; rational
coefficients print as ``a/b``, doubles as their shortest repr.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence

NEG_INF = float("-inf")

_TOKEN = re.compile(r"\s*(?:(?P<sign>[+-])|(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?(?:/\d+)?)"
                    r"|(?P<var>x\d+)|(?P<op>[*^]))")


def _coerce(c, field: str):
    if field == "double":
        return float(c)
    if isinstance(c, float):
        raise TypeError("float coefficient in rational field")
    return Fraction(c)


class Polynomial:
    """Immutable sparse polynomial: exponent tuple -> nonzero coefficient."""

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: dict, nvars: int):
        clean = {}
        for exps, c in terms.items():
            if c:
                if len(exps) != nvars:
                    raise ValueError("exponent vector length != nvars")
                clean[tuple(exps)] = c
        self.terms = clean
        self.nvars = nvars
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int, field: str = "rational") -> "Polynomial":
        return cls({(0,) * nvars: _coerce(c, field)}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int, field: str = "rational") -> "Polynomial":
        if not 0 <= i < nvars:
            raise ValueError("variable index out of range")
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): _coerce(1, field)}, nvars)

    @classmethod
    def linear_form(cls, coeffs: Sequence, field: str = "rational") -> "Polynomial":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = _coerce(c, field)
        return cls(terms, n)

    # -- basic protocol ----------------------------------------------------

    @property
    def field(self) -> str:
        for c in self.terms.values():
            return "double" if isinstance(c, float) else "rational"
        return "rational"

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _check_compatible(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError(f"mismatched nvars: {self.nvars} vs {other.nvars}")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.nvars,
                                        "double" if isinstance(other, float) else "rational")
        self._check_compatible(other)
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e, 0) + c
            if s:
                res[e] = s
            else:
                res.pop(e, None)
        return Polynomial(res, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if not other:
                return Polynomial.zero(self.nvars)
            return Polynomial({e: c * other for e, c in self.terms.items()}, self.nvars)
        self._check_compatible(other)
        res: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = res.get(e, 0) + c1 * c2
                if s:
                    res[e] = s
                else:
                    res.pop(e, None)
        return Polynomial(res, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- structure ---------------------------------------------------------

    @property
    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def homogeneous_part(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("degree must be >= 0")
        return Polynomial({e: c for e, c in self.terms.items() if sum(e) == k}, self.nvars)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0) if self.field == "rational" else 0.0)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), Fraction(0) if self.field == "rational" else 0.0)

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError("point dimension != nvars")
        total = 0
        for e, c in self.terms.items():
            v = c
            for a, k in zip(point, e):
                if k:
                    v = v * a ** k
            total = total + v
        return total

    def restrict_to_line(self, point: Sequence) -> "Polynomial":
        """Univariate polynomial p(t*a): coefficient of t^k is p_k(a)."""
        if len(point) != self.nvars:
            raise ValueError("point dimension != nvars")
        coeffs: dict = {}
        for e, c in self.terms.items():
            v = c
            for a, k in zip(point, e):
                if k:
                    v = v * a ** k
            d = sum(e)
            s = coeffs.get((d,), 0) + v
            if s:
                coeffs[(d,)] = s
            else:
                coeffs.pop((d,), None)
        return Polynomial(coeffs, 1)

    def substitute_linear(self, s: Sequence[Sequence]) -> "Polynomial":
        """p(Sx): substitute x_i <- sum_j S[i][j] x_j."""
        n = self.nvars
        forms = [Polynomial.linear_form(row) if not isinstance(row, Polynomial) else row
                 for row in s]
        out = Polynomial.zero(n)
        for e, c in self.terms.items():
            term = Polynomial.constant(c, n, self.field)
            for i, k in enumerate(e):
                if k:
                    term = term * forms[i] ** k
            out = out + term
        return out

    def to_double(self) -> "Polynomial":
        return Polynomial({e: float(c) for e, c in self.terms.items()}, self.nvars)

    def map_coefficients(self, fn) -> "Polynomial":
        return Polynomial({e: fn(c) for e, c in self.terms.items()}, self.nvars)

    def max_coeff_distance(self, other: "Polynomial") -> float:
        """Largest absolute coefficient of self - other (for double checks)."""
        self._check_compatible(other)
        keys = set(self.terms) | set(other.terms)
        return max((abs(float(self.terms.get(e, 0)) - float(other.terms.get(e, 0)))
                    for e in keys), default=0.0)

    # -- printing / parsing --------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        # graded order, lex-descending within a degree: 1 + 2*x1 - x1^2*x2
        keys = sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e)))
        parts = []
        for e, idx in zip(keys, range(len(keys))):
            c = self.terms[e]
            mono = "*".join(
                f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}"
                for i, k in enumerate(e) if k
            )
            neg = c < 0
            mag = -c if neg else c
            if mono and mag == 1 and not isinstance(mag, float):
                body = mono
            else:
                cs = str(mag) if not isinstance(mag, float) else repr(mag)
                body = f"{cs}*{mono}" if mono else cs
            if idx == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self}, nvars={self.nvars})"


class PolynomialParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def parse_polynomial(text: str, nvars: Optional[int] = None,
                     field: str = "rational") -> Polynomial:
    """Parse the canonical text grammar; inverse of ``str(p)``."""
    terms: list[tuple[int, object, dict]] = []  # (sign, coeff or None, exps dict)
    pos = 0
    n = len(text)

    def skip_ws(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    pos = skip_ws(pos)
    if pos == n:
        raise PolynomialParseError("empty input", pos)
    first = True
    max_var = 0
    while pos < n:
        sign = 1
        pos = skip_ws(pos)
        if pos < n and text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = skip_ws(pos + 1)
        elif not first:
            raise PolynomialParseError("expected '+' or '-'", pos)
        first = False
        coeff = None
        exps: dict[int, int] = {}
        saw_factor = False
        while True:
            m = re.match(r"\d+(?:\.\d*)?(?:[eE][+-]?\d+)?", text[pos:])
            if m and not saw_factor and coeff is None:
                tok = m.group(0)
                pos += len(tok)
                if pos < n and text[pos] == "/" and "." not in tok and "e" not in tok.lower():
                    m2 = re.match(r"\d+", text[pos + 1:])
                    if not m2:
                        raise PolynomialParseError("expected denominator", pos + 1)
                    coeff = Fraction(int(tok), int(m2.group(0)))
                    pos += 1 + len(m2.group(0))
                elif "." in tok or "e" in tok.lower():
                    coeff = float(tok)
                else:
                    coeff = Fraction(int(tok))
            else:
                m = re.match(r"x(\d+)(?:\^(\d+))?", text[pos:])
                if not m:
                    raise PolynomialParseError("expected coefficient or variable", pos)
                i = int(m.group(1))
                if i < 1:
                    raise PolynomialParseError("variable indices start at x1", pos)
                e = int(m.group(2) or 1)
                exps[i - 1] = exps.get(i - 1, 0) + e
                max_var = max(max_var, i)
                pos += len(m.group(0))
                saw_factor = True
            pos = skip_ws(pos)
            if pos < n and text[pos] == "*":
                pos = skip_ws(pos + 1)
                continue
            break
        if coeff is None:
            if not saw_factor:
                raise PolynomialParseError("empty term", pos)
            coeff = Fraction(1)
        terms.append((sign, coeff, exps))
        pos = skip_ws(pos)
    if nvars is None:
        nvars = max_var
    elif max_var > nvars:
        raise PolynomialParseError(f"variable x{max_var} exceeds nvars={nvars}", 0)
    out: dict = {}
    for sign, coeff, exps in terms:
        c = _coerce(coeff, field) * sign
        e = tuple(exps.get(i, 0) for i in range(nvars))
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return Polynomial(out, nvars)


def exact_divide(f: Polynomial, p: Polynomial) -> Optional[Polynomial]:
    """Quotient f/p when p divides f exactly, else None.

    Single-divisor long division in lex order over the rationals; the
    remainder is zero iff p divides f.
    """
    f._check_compatible(p)
    if p.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.field != "rational" or p.field != "rational":
        raise TypeError("exact division requires rational coefficients")
    lead_p = max(p.terms) if p.terms else None
    cp = p.terms[lead_p]
    rem = dict(f.terms)
    quot: dict = {}
    while rem:
        lead_f = max(rem)
        diff = tuple(a - b for a, b in zip(lead_f, lead_p))
        if any(d < 0 for d in diff):
            return None
        c = rem[lead_f] / cp
        quot[diff] = quot.get(diff, Fraction(0)) + c
        for e, ce in p.terms.items():
            key = tuple(a + b for a, b in zip(diff, e))
            s = rem.get(key, Fraction(0)) - c * ce
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    return Polynomial(quot, f.nvars)


class PolyMatrix:
    """Rectangular matrix of polynomials sharing one variable set."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Polynomial],
                 symmetric: bool = False):
        if len(entries) != rows * cols:
            raise ValueError("entry count != rows*cols")
        nv = {e.nvars for e in entries}
        if len(nv) > 1:
            raise ValueError("entries disagree on nvars")
        self.rows = rows
        self.cols = cols
        self.entries = list(entries)
        if symmetric and not self.is_symmetric():
            raise ValueError("matrix marked symmetric but is not")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]], **kw) -> "PolyMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = [p for row in rows for p in row]
        return cls(r, c, flat, **kw)

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        return cls(n, n, [Polynomial.one(nvars) if i == j else Polynomial.zero(nvars)
                          for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int, nvars: int) -> "PolyMatrix":
        z = Polynomial.zero(nvars)
        return cls(rows, cols, [z] * (rows * cols))

    @classmethod
    def from_scalar_matrix(cls, m: Sequence[Sequence], nvars: int,
                           field: str = "rational") -> "PolyMatrix":
        rows = len(m)
        cols = len(m[0]) if rows else 0
        return cls(rows, cols, [Polynomial.constant(x, nvars, field) if x else
                                Polynomial.zero(nvars)
                                for row in m for x in row])

    @property
    def nvars(self) -> int:
        return self.entries[0].nvars if self.entries else 0

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Polynomial]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entry(i, j) == self.entry(j, i)
            for i in range(self.rows) for j in range(i + 1, self.rows)
        )

    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix(self.cols, self.rows,
                          [self.entry(i, j) for j in range(self.cols)
                           for i in range(self.rows)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            self.entries == other.entries

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(self.rows, self.cols,
                          [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(self.rows, self.cols,
                          [a - b for a, b in zip(self.entries, other.entries)])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        nv = self.nvars if self.entries else other.nvars
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                s = Polynomial.zero(nv)
                for t in range(self.cols):
                    a = self.entry(i, t)
                    b = other.entry(t, j)
                    if a and b:
                        s = s + a * b
                out.append(s)
        return PolyMatrix(self.rows, other.cols, out)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, [e * c for e in self.entries])

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, [fn(e) for e in self.entries])

    def to_double(self) -> "PolyMatrix":
        return self.map(lambda p: p.to_double())

    def evaluate(self, point: Sequence) -> list[list]:
        return [[self.entry(i, j).evaluate(point) for j in range(self.cols)]
                for i in range(self.rows)]

    def max_coeff_distance(self, other: "PolyMatrix") -> float:
        return max((a.max_coeff_distance(b)
                    for a, b in zip(self.entries, other.entries)), default=0.0)

    def det(self, max_size: int = 12) -> Polynomial:
        """Exact determinant by cofactor expansion with memoized minors.

        Entries are sparse and sizes small, so sharing the 2^n column-subset
        minors beats fraction-heavy elimination here.
        """
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n > max_size:
            raise ValueError(f"matrix size {n} exceeds determinant bound {max_size}")
        nv = self.nvars
        if n == 0:
            return Polynomial.one(nv)
        memo: dict[int, Polynomial] = {}

        def minor(mask: int) -> Polynomial:
            got = memo.get(mask)
            if got is not None:
                return got
            cols = [j for j in range(n) if mask >> j & 1]
            r = n - len(cols)
            if not cols:
                return Polynomial.one(nv)
            acc = Polynomial.zero(nv)
            for pos, j in enumerate(cols):
                e = self.entry(r, j)
                if not e:
                    continue
                sub = minor(mask & ~(1 << j))
                term = e * sub
                acc = acc + term if pos % 2 == 0 else acc - term
            memo[mask] = acc
            return acc

        return minor((1 << n) - 1)

    def adjugate(self) -> "PolyMatrix":
        """Exact adjugate: self @ adjugate() == det() * I."""
        if not self.is_square():
            raise ValueError("adjugate of a non-square matrix")
        n = self.rows
        nv = self.nvars
        if n == 0:
            return PolyMatrix(0, 0, [])
        if n == 1:
            return PolyMatrix(1, 1, [Polynomial.one(nv)])
        out = [Polynomial.zero(nv)] * (n * n)
        for i in range(n):
            for j in range(n):
                sub = PolyMatrix(n - 1, n - 1,
                                 [self.entry(r, c)
                                  for r in range(n) if r != i
                                  for c in range(n) if c != j])
                cof = sub.det(max_size=max(12, n))
                if (i + j) % 2:
                    cof = -cof
                out[j * n + i] = cof  # transposed placement
        return PolyMatrix(n, n, out)

    def __str__(self) -> str:
        return "[" + "; ".join(
            ", ".join(str(self.entry(i, j)) for j in range(self.cols))
            for i in range(self.rows)) + "]"

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}: {self})"


class RationalFunction:
    """Quotient num/den with no gcd normalization.

    Equality is decided by cross-multiplication, so representatives need not
    be reduced; degree is deg(num) - deg(den).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        num._check_compatible(den)
        self.num = num
        self.den = den

    @property
    def degree(self):
        if self.num.is_zero():
            return NEG_INF
        return self.num.total_degree - self.den.total_degree

    def is_homogeneous(self) -> bool:
        return self.num.is_homogeneous() and self.den.is_homogeneous()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("unreduced rational functions are not hashable")

    def evaluate(self, point: Sequence):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        n = self.num.evaluate(point)
        if isinstance(n, Fraction) and isinstance(d, Fraction):
            return n / d
        return float(n) / float(d)

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"
