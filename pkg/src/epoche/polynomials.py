"""Sparse Laurent polynomials in the variables q[i,j] (i < j) over Q.

Only the variables q[i,j] with i < j are stored.  ``q[i,i]`` is 1 and
``q[j,i]`` is ``q[i,j]**-1``; both rules are applied by :meth:`LaurentPolynomial.q`.

Exponent vectors are tuples indexed by a triangular enumeration of the pairs
(i < j), ordered by ``j`` then ``i``, with trailing zeros stripped.  The
enumeration does not depend on the dimension, so polynomials built for
different alphabets mix freely.

Rational functions keep their denominator as a multiset of normalised
polynomial factors.  No multivariate GCD is computed; sums take the
least common multiple of the factor multisets and exact division removes
factors from the numerator where it can.  Equality is decided on the
numerator of the difference, which is exact regardless of whether the
representation is fully reduced.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class ZeroDivision(ZeroDivisionError):
    pass


def pair_index(i: int, j: int) -> int:
    """Position of q[i,j] (1 <= i < j) in exponent vectors."""
    return (j - 1) * (j - 2) // 2 + (i - 1)


def index_pair(k: int) -> Tuple[int, int]:
    j = 2
    while pair_index(1, j + 1) <= k:
        j += 1
    return k - pair_index(1, j) + 1, j


def _strip(e: Iterable[int]) -> Exponents:
    e = list(e)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


def _add_exp(a: Exponents, b: Exponents) -> Exponents:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    out = list(a)
    for k, v in enumerate(b):
        out[k] += v
    if len(a) == len(b):
        return _strip(out)
    return tuple(out)


def _neg_exp(a: Exponents) -> Exponents:
    return tuple(-v for v in a)


def _scale_exp(a: Exponents, s: int) -> Exponents:
    return _strip(v * s for v in a)


class LaurentPolynomial:
    """Immutable sparse Laurent polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponents, Scalar]] = None):
        clean: Dict[Exponents, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    e = _strip(e)
                    c = clean.get(e, 0) + Fraction(c)
                    if c:
                        clean[e] = c
                    else:
                        clean.pop(e, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponents, Fraction]) -> "LaurentPolynomial":
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def const(cls, c: Scalar) -> "LaurentPolynomial":
        return cls._raw({(): Fraction(c)} if c else {})

    @classmethod
    def monomial(cls, exps: Mapping[Tuple[int, int], int], c: Scalar = 1) -> "LaurentPolynomial":
        """``c * prod q[i,j]**e`` for a mapping ``{(i, j): e}``."""
        vec: Dict[int, int] = {}
        for (i, j), e in exps.items():
            if i == j:
                continue
            if i > j:
                i, j, e = j, i, -e
            k = pair_index(i, j)
            vec[k] = vec.get(k, 0) + e
        n = max(vec, default=-1) + 1
        return cls({tuple(vec.get(k, 0) for k in range(n)): c})

    @classmethod
    def q(cls, i: int, j: int, power: int = 1) -> "LaurentPolynomial":
        return cls.monomial({(i, j): power})

    # basic protocol

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.const(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self._terms.get((), Fraction(0))

    def variables(self) -> set:
        return {index_pair(k) for e in self._terms for k, v in enumerate(e) if v}

    # arithmetic

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial._raw({e: -c for e, c in self._terms.items()})

    def __add__(self, other) -> "LaurentPolynomial":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentPolynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPolynomial":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPolynomial":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPolynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPolynomial._raw({})
            return LaurentPolynomial._raw({e: c * other for e, c in self._terms.items()})
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (eb, cb), = b.items()
            return LaurentPolynomial._raw({_add_exp(ea, eb): ca * cb for ea, ca in a.items()})
        out: Dict[Exponents, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = _add_exp(ea, eb)
                v = out.get(e, 0) + ca * cb
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPolynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            return self.invert_monomial() ** (-k)
        if self.is_monomial():
            (e, c), = self._terms.items()
            return LaurentPolynomial._raw({_scale_exp(e, k): c ** k})
        result = LaurentPolynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def invert_monomial(self) -> "LaurentPolynomial":
        if not self.is_monomial():
            raise ZeroDivision("only monomials are units in the Laurent ring")
        (e, c), = self._terms.items()
        return LaurentPolynomial._raw({_neg_exp(e): 1 / c})

    def evaluate(self, spec: "Specialization") -> Fraction:
        values = spec.vector(max((len(e) for e in self._terms), default=0))
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for k, v in enumerate(e):
                if v:
                    term *= values[k] ** v
            total += term
        return total

    # helpers for rational-function normalisation

    def min_exponents(self) -> Exponents:
        n = max((len(e) for e in self._terms), default=0)
        mins = [0] * n
        first = True
        for e in self._terms:
            padded = e + (0,) * (n - len(e))
            if first:
                mins = list(padded)
                first = False
            else:
                mins = [min(a, b) for a, b in zip(mins, padded)]
        return _strip(mins)

    def shift(self, e: Exponents) -> "LaurentPolynomial":
        return LaurentPolynomial._raw({_add_exp(k, e): c for k, c in self._terms.items()})

    def leading(self) -> Tuple[Exponents, Fraction]:
        n = max((len(e) for e in self._terms), default=0)
        e = max(self._terms, key=lambda x: x + (0,) * (n - len(x)))
        return e, self._terms[e]

    def content(self) -> Fraction:
        """Positive rational ``c`` making ``self / c`` primitive over Z."""
        nums = [c.numerator for c in self._terms.values()]
        dens = [c.denominator for c in self._terms.values()]
        g = reduce(gcd, nums, 0)
        lcm = reduce(lambda a, b: a * b // gcd(a, b), dens, 1)
        return Fraction(abs(g), lcm) if g else Fraction(1)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({format_laurent(self)!r})"

    def __str__(self) -> str:
        return format_laurent(self)


def _as_poly(x) -> Optional[LaurentPolynomial]:
    if isinstance(x, LaurentPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPolynomial.const(x)
    return None


ONE = LaurentPolynomial.const(1)
ZERO = LaurentPolynomial.const(0)


def divide_exact(f: LaurentPolynomial, g: LaurentPolynomial) -> Optional[LaurentPolynomial]:
    """Return ``f / g`` if ``g`` divides ``f`` in the Laurent ring, else None.

    ``g`` must have no monomial factor (minimum exponent zero in every
    variable); :func:`normalize_factor` guarantees that.
    """
    if not f:
        return ZERO
    shift = _neg_exp(f.min_exponents())
    n = max(max((len(e) for e in f.terms), default=0),
            max((len(e) for e in g.terms), default=0))

    def pad(e):
        return e + (0,) * (n - len(e))

    rem = {pad(_add_exp(e, shift)): c for e, c in f.terms.items()}
    gt = {pad(e): c for e, c in g.terms.items()}
    glead = max(gt)
    gcoef = gt[glead]
    quot: Dict[Exponents, Fraction] = {}
    while rem:
        lead = max(rem)
        diff = tuple(a - b for a, b in zip(lead, glead))
        if any(v < 0 for v in diff):
            return None
        c = rem[lead] / gcoef
        quot[diff] = quot.get(diff, 0) + c
        for e, v in gt.items():
            key = tuple(a + b for a, b in zip(e, diff))
            w = rem.get(key, 0) - c * v
            if w:
                rem[key] = w
            else:
                rem.pop(key, None)
    return LaurentPolynomial(quot).shift(_neg_exp(shift))


def normalize_factor(p: LaurentPolynomial) -> Tuple[LaurentPolynomial, LaurentPolynomial]:
    """Split ``p = unit * core``.

    ``unit`` is a rational multiple of a Laurent monomial; ``core`` is a
    primitive integer polynomial with no monomial factor and positive
    leading coefficient (``1`` when ``p`` is itself a unit).
    """
    if not p:
        raise ZeroDivision("zero polynomial")
    mins = p.min_exponents()
    core = p.shift(_neg_exp(mins))
    c = core.content()
    core = core * (1 / c)
    if core.leading()[1] < 0:
        core, c = -core, -c
    unit = LaurentPolynomial._raw({mins: c})
    return unit, core


Denominator = Tuple[Tuple[LaurentPolynomial, int], ...]


def _den_key(item):
    poly, _ = item
    return (len(poly), sorted(poly.terms.items()))


class RationalFunction:
    """``numerator / prod(factor ** mult)`` with normalised factors."""

    __slots__ = ("num", "den")

    def __init__(self, num, den: Mapping[LaurentPolynomial, int] | Denominator = ()):
        self.num = _as_poly(num) if not isinstance(num, LaurentPolynomial) else num
        if self.num is None:
            raise TypeError(f"cannot build a rational function from {num!r}")
        items = den.items() if isinstance(den, Mapping) else den
        self.den = tuple(sorted(((p, m) for p, m in items if m), key=_den_key))
        if not self.num:
            self.den = ()

    @classmethod
    def of(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return cls(x)

    # protocol

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return not self.den

    def denominator(self) -> LaurentPolynomial:
        out = ONE
        for p, m in self.den:
            out = out * p ** m
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, LaurentPolynomial)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return not (self - other).num

    __hash__ = None  # equality is semantic, not structural

    # arithmetic

    def __neg__(self) -> "RationalFunction":
        return _rf(-self.num, self.den)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return _reduce(self.num + other.num, dict(self.den))
        da, db = dict(self.den), dict(other.den)
        lcm = dict(da)
        for p, m in db.items():
            if lcm.get(p, 0) < m:
                lcm[p] = m
        num = self.num * _cofactor(lcm, da) + other.num * _cofactor(lcm, db)
        return _reduce(num, lcm)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)):
            return _rf(self.num * other, self.den)
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return RationalFunction(ZERO)
        if not other.den:
            return _reduce(self.num * other.num, dict(self.den))
        if not self.den:
            return _reduce(self.num * other.num, dict(other.den))
        den = dict(self.den)
        for p, m in other.den:
            den[p] = den.get(p, 0) + m
        # cross-cancel against the other side's factors only
        num = self.num * other.num
        return _reduce(num, den)

    __rmul__ = __mul__

    def invert(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivision("division by zero rational function")
        unit, core = normalize_factor(self.num)
        num = unit.invert_monomial() * self.denominator()
        if core == ONE:
            return RationalFunction(num)
        return _reduce(num, {core: 1})

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other) -> "RationalFunction":
        return _as_rf(other) * self.invert()

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return self.invert() ** (-k)
        return _rf(self.num ** k, tuple((p, m * k) for p, m in self.den))

    def evaluate(self, spec: "Specialization") -> Fraction:
        value = self.num.evaluate(spec)
        for p, m in self.den:
            value /= p.evaluate(spec) ** m
        return value

    def __repr__(self) -> str:
        return f"RationalFunction({format_rational(self)!r})"

    def __str__(self) -> str:
        return format_rational(self)


def _rf(num: LaurentPolynomial, den) -> RationalFunction:
    r = object.__new__(RationalFunction)
    r.num = num
    r.den = tuple(den) if num else ()
    return r


def _as_rf(x) -> Optional[RationalFunction]:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction, LaurentPolynomial)):
        return RationalFunction(x)
    return None


def _cofactor(lcm: Dict[LaurentPolynomial, int], den: Dict[LaurentPolynomial, int]) -> LaurentPolynomial:
    out = ONE
    for p, m in lcm.items():
        k = m - den.get(p, 0)
        if k:
            out = out * p ** k
    return out


_CANCEL_LIMIT = 4000


def _reduce(num: LaurentPolynomial, den: Dict[LaurentPolynomial, int]) -> RationalFunction:
    if not num:
        return RationalFunction(ZERO)
    if len(num) <= _CANCEL_LIMIT:
        for p in list(den):
            while den[p] and len(num) >= len(p):
                q = divide_exact(num, p)
                if q is None:
                    break
                num = q
                den[p] -= 1
    return _rf(num, sorted(((p, m) for p, m in den.items() if m), key=_den_key))


# -- specialisation ------------------------------------------------------------


class Specialization:
    """Positive rational values for the q[i,j], i < j."""

    def __init__(self, values: Mapping[Tuple[int, int], Scalar], default: Optional[Scalar] = None):
        vec: Dict[int, Fraction] = {}
        for (i, j), v in values.items():
            v = Fraction(v)
            if i == j:
                raise ValueError("q[i,i] is fixed to 1")
            if i > j:
                i, j, v = j, i, 1 / v
            if v <= 0:
                raise ValueError(f"specialization values must be positive, got q[{i},{j}]={v}")
            vec[pair_index(i, j)] = v
        if default is not None and Fraction(default) <= 0:
            raise ValueError("default specialization value must be positive")
        self._vec = vec
        self.default = None if default is None else Fraction(default)

    @classmethod
    def all_ones(cls) -> "Specialization":
        return cls({}, default=1)

    @classmethod
    def random(cls, d: int, rng, lo: int = 1, hi: int = 9) -> "Specialization":
        values = {}
        for j in range(2, 2 * d + 1):
            for i in range(1, j):
                v = Fraction(1)
                while v == 1:  # q = 1 would hide every q-dependence at that pair
                    v = Fraction(rng.randint(lo, hi), rng.randint(lo, hi))
                values[(i, j)] = v
        return cls(values)

    def value(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(1)
        if i > j:
            return 1 / self.value(j, i)
        return self._lookup(pair_index(i, j))

    def _lookup(self, k: int) -> Fraction:
        v = self._vec.get(k)
        if v is None:
            if self.default is None:
                i, j = index_pair(k)
                raise KeyError(f"no value for q[{i},{j}]")
            return self.default
        return v

    def vector(self, n: int):
        return [self._lookup(k) for k in range(n)]

    def items(self):
        return sorted((index_pair(k), v) for k, v in self._vec.items())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Specialization)
                and self._vec == other._vec and self.default == other.default)

    def __hash__(self) -> int:
        return hash((frozenset(self._vec.items()), self.default))

    def __repr__(self) -> str:
        body = ", ".join(f"q[{i},{j}]={v}" for (i, j), v in self.items())
        if self.default is not None:
            body = (body + ", " if body else "") + f"default={self.default}"
        return f"Specialization({body})"


# -- text ------------------------------------------------------------------------


def _format_monomial(e: Exponents) -> str:
    parts = []
    for k, v in enumerate(e):
        if v:
            i, j = index_pair(k)
            parts.append(f"q[{i},{j}]" if v == 1 else f"q[{i},{j}]^{v}")
    return " ".join(parts)


def _sorted_terms(p: LaurentPolynomial):
    n = max((len(e) for e in p.terms), default=0)
    return sorted(p.terms.items(), key=lambda kv: kv[0] + (0,) * (n - len(kv[0])))


def format_laurent(p: LaurentPolynomial) -> str:
    """``3/2 q[1,2]^-1 q[1,3]^2 + ...``; ``0`` for the zero polynomial."""
    if not p:
        return "0"
    out = []
    for idx, (e, c) in enumerate(_sorted_terms(p)):
        sign = "-" if c < 0 else "+"
        c = abs(c)
        mono = _format_monomial(e)
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c} {mono}"
        if idx == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def format_rational(r: RationalFunction) -> str:
    if not r.den:
        return format_laurent(r.num)
    return f"({format_laurent(r.num)})/({format_laurent(r.denominator())})"


_COEFF_TOKEN = re.compile(
    r"\s*(?:(?P<q>q\[\s*(?P<i>[0-9]+)\s*,\s*(?P<j>[0-9]+)\s*\](?:\s*\^\s*(?P<e>-?[0-9]+))?)"
    r"|(?P<num>[0-9]+(?:/[0-9]+)?)|(?P<op>[-+()/*]))"
)


class CoefficientSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def parse_laurent(text: str) -> LaurentPolynomial:
    p, end = parse_laurent_prefix(text, 0)
    if text[end:].strip():
        raise CoefficientSyntaxError("trailing input", end)
    return p


def parse_laurent_prefix(text: str, pos: int) -> Tuple[LaurentPolynomial, int]:
    """Parse ``term (('+'|'-') term)*`` where a term is ``[rational] q[i,j]^e ...``."""
    total = ZERO
    sign = 1
    m = _COEFF_TOKEN.match(text, pos)
    if m and m.group("op") in ("+", "-"):
        sign = -1 if m.group("op") == "-" else 1
        pos = m.end()
    while True:
        term, pos = _parse_coeff_term(text, pos)
        total = total + term * sign
        m = _COEFF_TOKEN.match(text, pos)
        if m and m.group("op") in ("+", "-"):
            # a '+'/'-' followed by something that is not a coefficient term ends the polynomial
            nxt = _COEFF_TOKEN.match(text, m.end())
            if nxt and (nxt.group("q") or nxt.group("num")):
                sign = -1 if m.group("op") == "-" else 1
                pos = m.end()
                continue
        return total, pos


def _parse_coeff_term(text: str, pos: int) -> Tuple[LaurentPolynomial, int]:
    c = Fraction(1)
    exps: Dict[Tuple[int, int], int] = {}
    seen = False
    m = _COEFF_TOKEN.match(text, pos)
    if m and m.group("num"):
        c = Fraction(m.group("num"))
        pos = m.end()
        seen = True
        m = _COEFF_TOKEN.match(text, pos)
    while m and m.group("q"):
        i, j = int(m.group("i")), int(m.group("j"))
        e = int(m.group("e")) if m.group("e") else 1
        if i == 0 or j == 0:
            raise CoefficientSyntaxError("q indices start at 1", m.start())
        key = (i, j)
        exps[key] = exps.get(key, 0) + e
        pos = m.end()
        seen = True
        m = _COEFF_TOKEN.match(text, pos)
    if not seen:
        raise CoefficientSyntaxError("expected coefficient term", pos)
    return LaurentPolynomial.monomial(exps, c), pos


def parse_rational_prefix(text: str, pos: int) -> Tuple[RationalFunction, int]:
    """Parse ``(poly)/(poly)``, ``(poly)`` or a single coefficient term."""
    m = _COEFF_TOKEN.match(text, pos)
    if m and m.group("op") == "(":
        num, pos = parse_laurent_prefix(text, m.end())
        m = _COEFF_TOKEN.match(text, pos)
        if not m or m.group("op") != ")":
            raise CoefficientSyntaxError("expected ')'", pos)
        pos = m.end()
        m = _COEFF_TOKEN.match(text, pos)
        if m and m.group("op") == "/":
            m2 = _COEFF_TOKEN.match(text, m.end())
            if not m2 or m2.group("op") != "(":
                raise CoefficientSyntaxError("expected '(' after '/'", m.end())
            den, p2 = parse_laurent_prefix(text, m2.end())
            m3 = _COEFF_TOKEN.match(text, p2)
            if not m3 or m3.group("op") != ")":
                raise CoefficientSyntaxError("expected ')'", p2)
            if not den:
                raise ZeroDivision("zero denominator")
            return RationalFunction(num) / RationalFunction(den), m3.end()
        return RationalFunction(num), pos
    term, pos = _parse_coeff_term(text, pos)
    return RationalFunction(term), pos


def parse_rational(text: str) -> RationalFunction:
    r, end = parse_rational_prefix(text, 0)
    if text[end:].strip():
        raise CoefficientSyntaxError("trailing input", end)
    return r
