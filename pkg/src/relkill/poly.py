"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` lives in a fixed, ordered variable universe.  Terms map an
exponent tuple to a nonzero coefficient; coefficients are :class:`fractions.Fraction`
values, stored as plain ``int`` whenever they are integral (cheaper arithmetic,
equal under ``==``).  Monomials are ordered graded-lexicographically with the
first variable of the universe most significant.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from math import lcm as ilcm
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Rat = Fraction

__all__ = [
    "Rat",
    "as_rat",
    "Poly",
    "VariableMismatchError",
    "NotDivisibleError",
    "poly_gcd",
    "poly_divexact",
    "poly_exquo",
    "poly_lcm",
    "grlex_key",
]


class VariableMismatchError(ValueError):
    """Operands live in different variable universes."""


class NotDivisibleError(ArithmeticError):
    """Exact division was requested but the divisor does not divide."""


def as_rat(value) -> Fraction:
    """Convert int, Fraction, or a decimal/fraction string to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def _c(value):
    """Canonical scalar storage: ints for integral values, Fraction otherwise."""
    if isinstance(value, int):
        return value
    if value.denominator == 1:
        return int(value.numerator)
    return value


def grlex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), exps)


class Poly:
    """Immutable sparse polynomial over Q in an ordered variable universe."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping | Iterable = ()):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError(f"duplicate variable names in {vars}")
        n = len(vars)
        clean: dict[tuple[int, ...], object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coef in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} has wrong length for {vars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coef = as_rat(coef) if not isinstance(coef, int) else coef
            clean[exps] = clean.get(exps, 0) + coef
        self.vars = vars
        self.terms = {e: _c(c) for e, c in clean.items() if c != 0}
        self._hash = None

    @classmethod
    def _new(cls, vars: tuple[str, ...], terms: dict) -> "Poly":
        obj = object.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # ---- constructors -------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Poly":
        return cls._new(tuple(vars), {})

    @classmethod
    def constant(cls, vars: Sequence[str], value) -> "Poly":
        vars = tuple(vars)
        value = _c(as_rat(value)) if not isinstance(value, int) else value
        if value == 0:
            return cls._new(vars, {})
        return cls._new(vars, {(0,) * len(vars): value})

    @classmethod
    def one(cls, vars: Sequence[str]) -> "Poly":
        return cls.constant(vars, 1)

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "Poly":
        vars = tuple(vars)
        i = _index(vars, name)
        exps = [0] * len(vars)
        exps[i] = 1
        return cls._new(vars, {tuple(exps): 1})

    @classmethod
    def monomial(cls, vars: Sequence[str], exps: Sequence[int], coef=1) -> "Poly":
        return cls(vars, {tuple(exps): coef})

    # ---- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return Fraction(next(iter(self.terms.values())))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> float | int:
        """Total degree; ``float('-inf')`` for the zero polynomial."""
        if not self.terms:
            return float("-inf")
        return max(sum(e) for e in self.terms)

    def degree_in(self, v) -> float | int:
        i = self._idx(v)
        if not self.terms:
            return float("-inf")
        return max(e[i] for e in self.terms)

    def used_vars(self) -> set[int]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return used

    def leading_term(self) -> tuple[tuple[int, ...], object]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def leading_coefficient(self) -> Fraction:
        return Fraction(self.leading_term()[1])

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def _idx(self, v) -> int:
        if isinstance(v, int):
            if not 0 <= v < len(self.vars):
                raise ValueError(f"variable index {v} out of range")
            return v
        return _index(self.vars, v)

    def _check(self, other: "Poly") -> None:
        if self.vars is not other.vars and self.vars != other.vars:
            raise VariableMismatchError(f"{self.vars} vs {other.vars}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.vars, other)
        return NotImplemented

    # ---- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e, 0) + c
            if s:
                res[e] = _c(s)
            else:
                res.pop(e, None)
        return Poly._new(self.vars, res)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._new(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Poly":
        if not isinstance(c, int):
            c = _c(as_rat(c))
        if c == 0:
            return Poly._new(self.vars, {})
        if c == 1:
            return self
        return Poly._new(self.vars, {e: _c(v * c) for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly._new(self.vars, {})
        if len(a) < len(b):
            a, b = b, a
        res: dict = {}
        get = res.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                res[e] = get(e, 0) + ca * cb
        return Poly._new(self.vars, {e: _c(c) for e, c in res.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .parser import format_poly

        return f"Poly({format_poly(self)!r})"

    # ---- calculus and evaluation --------------------------------------
    def diff(self, v) -> "Poly":
        i = self._idx(v)
        res = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                res[ne] = c * k
        return Poly._new(self.vars, res)

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate at a point mapping every used variable to a value.

        Rational inputs give an exact ``Fraction``; any float input gives a float.
        """
        vals = []
        for i, name in enumerate(self.vars):
            if name in point:
                vals.append(point[name])
            else:
                vals.append(None)
        for i in self.used_vars():
            if vals[i] is None:
                raise ValueError(f"variable {self.vars[i]!r} is unbound")
        use_float = any(isinstance(v, float) for v in vals if v is not None)
        total = 0.0 if use_float else Fraction(0)
        for e, c in self.terms.items():
            t = float(c) if use_float else Fraction(c)
            for i, k in enumerate(e):
                if k:
                    v = vals[i]
                    t *= (float(v) if use_float else as_rat(v)) ** k
            total += t
        return total

    # ---- structure ----------------------------------------------------
    def coeffs_in(self, v) -> dict[int, "Poly"]:
        """Split as a polynomial in one variable: ``{k: coefficient}``."""
        i = self._idx(v)
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            parts.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Poly._new(self.vars, t) for k, t in parts.items()}

    def coeff_in(self, i: int, k: int) -> "Poly":
        res = {}
        for e, c in self.terms.items():
            if e[i] == k:
                res[e[:i] + (0,) + e[i + 1:]] = c
        return Poly._new(self.vars, res)

    def shift(self, i: int, k: int) -> "Poly":
        """Multiply by ``vars[i] ** k``."""
        if k == 0:
            return self
        return Poly._new(
            self.vars, {e[:i] + (e[i] + k,) + e[i + 1:]: c for e, c in self.terms.items()}
        )

    def rational_content(self) -> Fraction:
        """Rational c with ``self / c`` integral, coprime, positive leading coefficient."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            if isinstance(c, int):
                num = igcd(num, c)
            else:
                num = igcd(num, c.numerator)
                den = ilcm(den, c.denominator)
        content = Fraction(num, den)
        if self.leading_term()[1] < 0:
            content = -content
        return content

    def primitive(self) -> "Poly":
        """Integral, coprime coefficients with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.rational_content()
        if c == 1:
            return self
        inv = 1 / c
        return Poly._new(self.vars, {e: _c(v * inv) for e, v in self.terms.items()})

    def compose(self, mapping: Mapping[int, "Poly"]) -> "Poly":
        """Substitute polynomials for the variables at the given indices."""
        result = Poly.zero(self.vars)
        powers: dict[tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            rest = list(e)
            t = None
            for i, sub in mapping.items():
                k = e[i]
                rest[i] = 0
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = sub ** k
                    t = powers[key] if t is None else t * powers[key]
            mono = Poly._new(self.vars, {tuple(rest): c})
            result = result + (mono if t is None else mono * t)
        return result

    def in_universe(self, vars: Sequence[str]) -> "Poly":
        """Re-embed into another universe containing every used variable."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = {}
        for i in self.used_vars():
            name = self.vars[i]
            if name not in vars:
                raise VariableMismatchError(f"{name!r} missing from {vars}")
        for j, name in enumerate(vars):
            if name in self.vars:
                pos[self.vars.index(name)] = j
        res = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for i, k in enumerate(e):
                if k:
                    ne[pos[i]] = k
            res[tuple(ne)] = c
        return Poly._new(vars, res)


def _index(vars: tuple[str, ...], name: str) -> int:
    try:
        return vars.index(name)
    except ValueError:
        raise ValueError(f"unknown variable {name!r}; universe is {vars}") from None


# ---------------------------------------------------------------------------
# exact division
# ---------------------------------------------------------------------------

def poly_exquo(a: Poly, b: Poly) -> Poly | None:
    """Return q with ``a == q*b`` or ``None`` if b does not divide a."""
    a._check(b)
    if not b.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a.terms:
        return a
    if b.is_constant():
        return a.scale(Fraction(1) / Fraction(b.constant_value()))
    if len(b.terms) == 1:
        (eb, cb), = b.terms.items()
        inv = Fraction(1) / Fraction(cb)
        res = {}
        for e, c in a.terms.items():
            ne = tuple(x - y for x, y in zip(e, eb))
            if min(ne) < 0:
                return None
            res[ne] = _c(c * inv)
        return Poly._new(a.vars, res)
    # cheap necessary condition: per-variable degrees
    n = len(a.vars)
    for i in b.used_vars():
        if a.degree_in(i) < b.degree_in(i):
            return None
    lb, cb = b.leading_term()
    inv = Fraction(1) / Fraction(cb)
    btail = [(e, c) for e, c in b.terms.items() if e != lb]
    r = dict(a.terms)
    q = {}
    while r:
        lr = max(r, key=grlex_key)
        shift = tuple(x - y for x, y in zip(lr, lb))
        if min(shift) < 0:
            return None
        f = _c(r.pop(lr) * inv)
        q[shift] = f
        for e, c in btail:
            ne = tuple(shift[i] + e[i] for i in range(n))
            s = r.get(ne, 0) - f * c
            if s:
                r[ne] = s
            else:
                r.pop(ne, None)
    return Poly._new(a.vars, q)


def poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact quotient ``a / b``; raises :class:`NotDivisibleError` otherwise."""
    q = poly_exquo(a, b)
    if q is None:
        raise NotDivisibleError("divisor does not divide dividend exactly")
    return q


# ---------------------------------------------------------------------------
# gcd: primitive polynomial remainder sequences, recursive in the variables
# ---------------------------------------------------------------------------

def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor, primitive with positive leading coefficient.

    ``gcd(0, b)`` is the normalized ``b``; ``gcd(0, 0)`` is 0.
    """
    a._check(b)
    if not a.terms:
        return b.primitive()
    if not b.terms:
        return a.primitive()
    if a.is_constant() or b.is_constant():
        return Poly.one(a.vars)
    return _gcd(a.primitive(), b.primitive()).primitive()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a.terms or not b.terms:
        return Poly.zero(a.vars)
    g = poly_gcd(a, b)
    return (poly_divexact(a, g) * b).primitive()


def _monomial_gcd(mono: Poly, f: Poly) -> Poly:
    (e,) = mono.terms
    low = list(e)
    for ef in f.terms:
        low = [min(x, y) for x, y in zip(low, ef)]
    return Poly._new(f.vars, {tuple(low): 1})


def _gcd(a: Poly, b: Poly) -> Poly:
    """gcd of two nonzero polynomials, up to a rational unit."""
    if not a.terms or not b.terms:
        return a if b.terms == {} else b
    if a.is_constant() or b.is_constant():
        return Poly.one(a.vars)
    if a == b:
        return a
    if len(a.terms) == 1:
        return _monomial_gcd(a, b)
    if len(b.terms) == 1:
        return _monomial_gcd(b, a)
    ua, ub = a.used_vars(), b.used_vars()
    # a variable present in only one operand: gcd divides its content there
    only_a = ua - ub
    if only_a:
        return _gcd_with_coeffs(b, a, only_a)
    only_b = ub - ua
    if only_b:
        return _gcd_with_coeffs(a, b, only_b)
    v = max(ua)
    ca = _content_in(a, v)
    cb = _content_in(b, v)
    c = _gcd(ca, cb)
    pa = poly_divexact(a, ca) if not ca.is_constant() else a
    pb = poly_divexact(b, cb) if not cb.is_constant() else b
    g = _prs_gcd(pa, pb, v)
    return (c * g).primitive()


def _coeffs_outside(f: Poly, vs: set[int]) -> list[Poly]:
    """Coefficients of f viewed as a polynomial in the variables ``vs``."""
    groups: dict[tuple, dict] = {}
    for e, c in f.terms.items():
        key = tuple(e[i] for i in sorted(vs))
        rest = tuple(0 if i in vs else x for i, x in enumerate(e))
        groups.setdefault(key, {})[rest] = c
    return [Poly._new(f.vars, t) for t in groups.values()]


def _gcd_with_coeffs(g: Poly, f: Poly, vs: set[int]) -> Poly:
    """gcd(g, f) when g does not involve the variables ``vs``."""
    for c in sorted(_coeffs_outside(f, vs), key=lambda p: len(p.terms)):
        g = _gcd(g, c.primitive())
        if g.is_constant():
            return Poly.one(f.vars)
    return g


def _content_in(f: Poly, v: int) -> Poly:
    """gcd of the coefficients of f viewed as a polynomial in variable v."""
    coeffs = sorted(f.coeffs_in(v).values(), key=lambda p: len(p.terms))
    g = coeffs[0].primitive()
    for c in coeffs[1:]:
        if g.is_constant():
            return Poly.one(f.vars)
        g = _gcd(g, c.primitive())
    return g.primitive()


def _pp_in(f: Poly, v: int) -> Poly:
    c = _content_in(f, v)
    if c.is_constant():
        return f.primitive()
    return poly_divexact(f, c).primitive()


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    db = b.degree_in(v)
    lcb = b.coeff_in(v, db)
    r = a
    while r.terms:
        dr = r.degree_in(v)
        if dr < db:
            break
        lcr = r.coeff_in(v, dr)
        r = r * lcb - (lcr * b).shift(v, dr - db)
    return r


def _prs_gcd(a: Poly, b: Poly, v: int) -> Poly:
    """gcd of two polynomials primitive in v (over the other variables)."""
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    while True:
        r = _prem(a, b, v)
        if not r.terms:
            return b.primitive()
        if r.degree_in(v) == 0:
            return Poly.one(a.vars)
        a, b = b, _pp_in(r, v)
