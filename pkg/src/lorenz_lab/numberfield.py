"""Exact arithmetic in a real number field Q(beta).

beta is a chosen real root of an integer polynomial, pinned down by a rational
isolating interval. Elements are rational coefficient vectors reduced modulo
the defining polynomial; signs are decided by refining the isolating interval
and evaluating a certified enclosure of the element.

The defining polynomial only has to be squarefree. When an inversion or a
zero test meets a nontrivial common factor with the modulus, the modulus is
split and the factor vanishing at beta is kept (dynamic evaluation).

A second, inexact backend (:class:`FloatField`) tracks mpmath intervals at a
fixed precision; it exposes the same element interface and is meant for
parameter scans.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence, Union

import mpmath
from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .errors import (
    DivisionByZero,
    FieldMismatch,
    MultipleRootsInInterval,
    NonSquarefree,
    NoRootInInterval,
    ZeroDivisor,
)

Rational = Union[int, Fraction]

__all__ = [
    "FieldContext",
    "FieldElement",
    "FloatField",
    "FloatElement",
    "field_new",
    "fe_arith",
    "fe_sign",
    "fe_approx",
    "parse_rational",
    "bucket_key",
]


def parse_rational(value) -> Fraction:
    """Parse ``3``, ``"3/4"``, ``"-0.25"`` or a Fraction into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


# ---------------------------------------------------------------------------
# polynomials over Q, coefficient lists from low to high degree


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    _trim(a)
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    lead = b[-1]
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        t = a[-1] / lead
        q[shift] = t
        for j, bj in enumerate(b):
            a[shift + j] -= t * bj
        a.pop()
        _trim(a)
    return _trim(q), a


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _psub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def _pgcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def _pderiv(p: Sequence[Fraction]) -> list:
    return _trim([Fraction(i) * p[i] for i in range(1, len(p))])


def _peval(p: Sequence[Rational], x: Rational) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(p):
        acc = acc * x + coeff
    return acc


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sturm_count(p: Sequence[Fraction], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of a squarefree ``p`` in ``(lo, hi]``."""
    seq = [list(map(Fraction, p)), _pderiv(p)]
    while seq[-1] and len(seq[-1]) > 1:
        _, r = _pdivmod(seq[-2], seq[-1])
        seq.append([-x for x in r])
    seq = [s for s in seq if s]

    def changes(x):
        signs = [_sign(_peval(s, x)) for s in seq]
        signs = [s for s in signs if s]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    return changes(lo) - changes(hi)


def _primitive(p: Sequence[Fraction]) -> tuple:
    """Scale a rational polynomial to coprime integers with positive leading term."""
    p = _trim([Fraction(x) for x in p])
    den = 1
    for x in p:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in p]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    if ints[-1] < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _mpf_to_fraction(x) -> Fraction:
    man, exp = x.man_exp
    if exp >= 0:
        return Fraction(man * (1 << exp))
    return Fraction(man, 1 << -exp)


# ---------------------------------------------------------------------------


class FieldContext:
    """The field Q(beta) for one real root beta of ``poly``.

    ``poly`` is given by integer coefficients from the constant term upward and
    must be squarefree; ``root_interval`` must contain exactly one of its real
    roots. With ``dynamic=False`` a reducible modulus discovered during an
    inversion raises :class:`ZeroDivisor` instead of being split.
    """

    exact = True

    def __init__(self, poly: Sequence[int], root_interval, *, dynamic: bool = True):
        coeffs = [int(c) for c in poly]
        if any(Fraction(c) != c for c in poly):
            raise ValueError("defining polynomial must have integer coefficients")
        _trim(coeffs)
        if len(coeffs) < 2:
            raise ValueError("defining polynomial must be nonconstant")
        lo, hi = (parse_rational(x) for x in root_interval)
        if lo > hi:
            lo, hi = hi, lo
        fr = [Fraction(c) for c in coeffs]
        g = _pgcd(fr, _pderiv(fr))
        if len(g) > 1:
            raise NonSquarefree(_primitive(g))
        n_roots = _sturm_count(fr, lo, hi) + (1 if _peval(fr, lo) == 0 else 0)
        if n_roots == 0:
            raise NoRootInInterval(f"no root of {coeffs} in [{lo}, {hi}]")
        if n_roots > 1:
            raise MultipleRootsInInterval(f"{n_roots} roots of {coeffs} in [{lo}, {hi}]")
        if _peval(fr, lo) == 0:
            hi = lo
        elif _peval(fr, hi) == 0:
            lo = hi
        self.defining_poly = tuple(coeffs)
        self.root_interval_initial = (lo, hi)
        self.dynamic = dynamic
        self._modulus = _primitive(fr)
        self._lo, self._hi = lo, hi
        self._lock = threading.RLock()
        self.generation = 0
        self._zero = None

    # -- basic data -------------------------------------------------------
    @property
    def modulus(self) -> tuple:
        """Current modulus (a factor of the defining polynomial)."""
        return self._modulus

    @property
    def degree(self) -> int:
        return len(self._modulus) - 1

    def __repr__(self):
        lo, hi = self.root_interval(20)
        return f"FieldContext({list(self.defining_poly)}, root~{float((lo + hi) / 2):.10g})"

    def to_spec(self) -> dict:
        lo, hi = self.root_interval_initial
        return {"poly": list(self.defining_poly), "root_interval": [str(lo), str(hi)]}

    @classmethod
    def from_spec(cls, spec: dict) -> "FieldContext":
        return cls(spec["poly"], spec["root_interval"])

    # -- element construction --------------------------------------------
    def element(self, coeffs: Iterable) -> "FieldElement":
        fr = [parse_rational(c) for c in coeffs]
        den = 1
        for x in fr:
            den = den * x.denominator // math.gcd(den, x.denominator)
        num = [int(x * den) for x in fr]
        return FieldElement._make(self, num, den)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            self._check(value)
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.element([value])

    @property
    def zero(self) -> "FieldElement":
        return self.element([0])

    @property
    def one(self) -> "FieldElement":
        return self.element([1])

    @property
    def gen(self) -> "FieldElement":
        """beta itself."""
        return self.element([0, 1])

    def _check(self, x: "FieldElement"):
        if x.ctx is not self:
            raise FieldMismatch("elements belong to different fields")

    # -- root isolation -----------------------------------------------------
    def root_interval(self, bits: int) -> tuple:
        """Certified interval around beta of width at most ``2**-bits``."""
        eps = Fraction(1, 1 << bits)
        if self._hi - self._lo <= eps:
            return self._lo, self._hi
        with self._lock:
            self._refine(bits)
            return self._lo, self._hi

    def _msign(self, x: Fraction) -> int:
        return _sign(_peval(self._modulus, x))

    def _refine(self, bits: int):
        eps = Fraction(1, 1 << bits)
        m = self._modulus
        while self._hi - self._lo > eps:
            lo, hi = self._lo, self._hi
            s_lo = self._msign(lo)
            # Newton in floating point, then certify by a sign change.
            prec = bits + 48
            with mpmath.workprec(prec):
                x = mpmath.mpf(lo.numerator) / lo.denominator / 2 + mpmath.mpf(hi.numerator) / hi.denominator / 2
                poly = [mpmath.mpf(c) for c in reversed(m)]
                dpoly = [mpmath.mpf(c * (len(m) - 1 - i)) for i, c in enumerate(reversed(m))][:-1]
                ok = True
                for _ in range(200):
                    fx = mpmath.polyval(poly, x)
                    dfx = mpmath.polyval(dpoly, x)
                    if dfx == 0:
                        ok = False
                        break
                    step = fx / dfx
                    x -= step
                    if abs(step) < mpmath.ldexp(1, -(prec - 8)):
                        break
                else:
                    ok = False
                xf = _mpf_to_fraction(x) if ok and mpmath.isfinite(x) else None
            if xf is not None:
                delta = Fraction(1, 1 << (bits + 4))
                a, b = xf - delta, xf + delta
                if lo <= a and b <= hi:
                    sa, sb = self._msign(a), self._msign(b)
                    if sa != 0 and sb != 0 and sa != sb:
                        self._lo, self._hi = a, b
                        continue
            # fallback: exact bisection
            for _ in range(32):
                mid = (lo + hi) / 2
                sm = self._msign(mid)
                if sm == 0:
                    lo = hi = mid
                    break
                if sm == s_lo:
                    lo = mid
                else:
                    hi = mid
            self._lo, self._hi = lo, hi

    # -- dynamic evaluation -------------------------------------------------
    def _split(self, factor: Sequence[Fraction]):
        """Replace the modulus by whichever of factor, modulus/factor vanishes at beta."""
        with self._lock:
            m = [Fraction(c) for c in self._modulus]
            q, r = _pdivmod(m, factor)
            if r:
                raise ArithmeticError("split factor does not divide the modulus")
            lo, hi = self._lo, self._hi
            if lo == hi:
                keep = factor if _peval(factor, lo) == 0 else q
            else:
                keep = factor if _sign(_peval(factor, lo)) != _sign(_peval(factor, hi)) else q
            self._modulus = _primitive(keep)
            self.generation += 1


class FieldElement:
    """Immutable element of Q(beta): ``sum(num[i] * beta**i) / den``."""

    __slots__ = ("ctx", "_num", "_den", "_gen", "_approx")

    def __init__(self, *args, **kwargs):
        raise TypeError("use FieldContext.element(...) or ctx(value)")

    @classmethod
    def _make(cls, ctx: FieldContext, num: Sequence[int], den: int, reduced: bool = False):
        self = object.__new__(cls)
        self.ctx = ctx
        if not reduced:
            num, den = _reduce(list(num), den, ctx._modulus)
        self._num = num
        self._den = den
        self._gen = ctx.generation
        self._approx = None
        return self

    # -- representation ----------------------------------------------------
    def _canon(self):
        if self._gen != self.ctx.generation:
            num, den = _reduce(list(self._num), self._den, self.ctx._modulus)
            self._num, self._den, self._gen = num, den, self.ctx.generation
            self._approx = None
        return self._num, self._den

    @property
    def coeffs(self) -> tuple:
        """Rational coefficients w.r.t. 1, beta, beta**2, ..."""
        num, den = self._canon()
        return tuple(Fraction(n, den) for n in num)

    def is_rational(self) -> bool:
        num, _ = self._canon()
        return all(n == 0 for n in num[1:])

    def to_json(self) -> list:
        return [str(c) if c.denominator != 1 else int(c) for c in self.coeffs]

    def __repr__(self):
        return f"FieldElement({float(self):.12g}; {[str(c) for c in self.coeffs]})"

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise FieldMismatch("elements belong to different fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ctx.element([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, da = self._canon()
        b, db = other._canon()
        return FieldElement._make(self.ctx, [x * db + y * da for x, y in zip(a, b)], da * db)

    __radd__ = __add__

    def __neg__(self):
        a, da = self._canon()
        return FieldElement._make(self.ctx, [-x for x in a], da, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, da = self._canon()
        b, db = other._canon()
        if all(x == 0 for x in b[1:]):
            return FieldElement._make(self.ctx, [x * b[0] for x in a], da * db)
        if all(x == 0 for x in a[1:]):
            return FieldElement._make(self.ctx, [a[0] * y for y in b], da * db)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return FieldElement._make(self.ctx, out, da * db)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        ctx = self.ctx
        while True:
            num, den = self._canon()
            if all(x == 0 for x in num):
                raise DivisionByZero("division by zero in Q(beta)")
            if all(x == 0 for x in num[1:]):
                return FieldElement._make(ctx, [den], num[0])
            a = _trim([Fraction(x) for x in num])
            m = [Fraction(x) for x in ctx._modulus]
            r0, r1 = m, a
            s0, s1 = [], [Fraction(1)]
            while r1:
                q, r = _pdivmod(r0, r1)
                r0, r1 = r1, r
                s0, s1 = s1, _psub(s0, _pmul(q, s1))
            if len(r0) == 1:
                inv = [x * den / r0[0] for x in s0]
                return ctx.element(inv)
            if not ctx.dynamic:
                raise ZeroDivisor(f"modulus has factor {_primitive(r0)}")
            ctx._split(r0)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ctx.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- sign and order -----------------------------------------------------
    def enclosure(self, bits: int) -> tuple:
        """Certified rational interval containing the value, from a root interval of ``bits``."""
        num, den = self._canon()
        if all(x == 0 for x in num[1:]):
            v = Fraction(num[0], den)
            return v, v
        lo, hi = self.ctx.root_interval(bits)
        return _enclose(num, den, lo, hi)

    def sign(self) -> int:
        num, den = self._canon()
        if all(x == 0 for x in num[1:]):
            return _sign(num[0])
        size = max(abs(x) for x in num).bit_length() - den.bit_length()
        bits = max(64, size + 64)
        tried_gcd = False
        while True:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if not tried_gcd:
                tried_gcd = True
                if self._vanishes_symbolically():
                    return 0
                num, den = self._canon()
                if all(x == 0 for x in num):
                    return 0
            bits *= 2

    def _vanishes_symbolically(self) -> bool:
        """Detect a zero divisor vanishing at beta; splits the modulus when found."""
        num, _ = self._canon()
        a = _trim([Fraction(x) for x in num])
        g = _pgcd([Fraction(x) for x in self.ctx._modulus], a)
        if len(g) <= 1:
            return False
        self.ctx._split(g)
        num, _ = self._canon()
        return all(x == 0 for x in num)

    def is_zero(self) -> bool:
        return self.sign() == 0

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare FieldElement with {type(other)!r}")
        # fast path: disjoint cached approximations
        a, b = self._approx_interval(), other._approx_interval()
        if a[1] < b[0]:
            return -1
        if b[1] < a[0]:
            return 1
        return (self - other).sign()

    def _approx_interval(self):
        num, den = self._canon()
        if self._approx is None:
            self._approx = self.enclosure(64)
        return self._approx

    def __eq__(self, other):
        if not isinstance(other, (FieldElement, int, Fraction)) or isinstance(other, bool):
            return NotImplemented
        try:
            return self._cmp(other) == 0
        except FieldMismatch:
            return False

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    __hash__ = None  # equality is decided at beta, not on coefficients

    def approx(self, bits: int) -> tuple:
        """Certified interval of width at most ``2**-bits`` containing the value."""
        target = Fraction(1, 1 << bits)
        cached = self._approx
        if cached is not None and cached[1] - cached[0] <= target:
            return cached
        rb = bits + 8
        while True:
            lo, hi = self.enclosure(rb)
            if hi - lo <= target:
                return lo, hi
            rb *= 2

    def __float__(self):
        lo, hi = self.approx(60)
        return float((lo + hi) / 2)


def _reduce(num: list, den: int, m: Sequence[int]):
    """Reduce an integer numerator polynomial modulo the integer polynomial m."""
    d = len(m) - 1
    lc = m[-1]
    for i in range(len(num) - 1, d - 1, -1):
        t = num[i]
        if t == 0:
            continue
        if lc != 1:
            g = math.gcd(t, lc)
            s = abs(lc) // g
            if s != 1:
                num = [x * s for x in num]
                den *= s
                t = num[i]
            q = t // lc
        else:
            q = t
        base = i - d
        for j in range(d + 1):
            num[base + j] -= q * m[j]
    num = num[:d] + [0] * (d - len(num))
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = den
    for x in num:
        if g == 1:
            break
        g = math.gcd(g, x)
    if g > 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


def _enclose(num: Sequence[int], den: int, lo: Fraction, hi: Fraction) -> tuple:
    """Mean-value enclosure of ``num(x)/den`` for x in [lo, hi].

    Evaluation runs on integers (homogeneous Horner) with one division at the end.
    """
    d = len(num) - 1
    mid = (lo + hi) / 2
    rad = (hi - lo) / 2
    p, q = mid.numerator, mid.denominator
    acc, qpow = num[d], 1
    for i in range(d - 1, -1, -1):
        qpow *= q
        acc = acc * p + num[i] * qpow
    val = Fraction(acc, qpow * den)
    if not rad or d == 0:
        return val, val
    bound = max(abs(lo), abs(hi))
    bp, bq = bound.numerator, bound.denominator
    dacc, bpow = d * abs(num[d]), 1
    for i in range(d - 1, 0, -1):
        bpow *= bq
        dacc = dacc * bp + i * abs(num[i]) * bpow
    spread = rad * Fraction(dacc, bpow * den)
    return val - spread, val + spread


# ---------------------------------------------------------------------------
# interval-tracked floating backend


class FloatField:
    """Inexact stand-in for :class:`FieldContext` backed by mpmath intervals.

    Signs of intervals straddling zero are reported as 0, so equality means
    "indistinguishable at this precision".
    """

    exact = False

    def __init__(self, bits: int = 128):
        self.bits = int(bits)
        self._iv = MPIntervalContext()
        self._iv.prec = self.bits
        self.degree = 1
        self.generation = 0

    def __repr__(self):
        return f"FloatField({self.bits} bits)"

    def __call__(self, value) -> "FloatElement":
        if isinstance(value, FloatElement):
            return value
        if isinstance(value, FieldElement):
            lo, hi = value.approx(self.bits + 8)
            return FloatElement(self, self._iv.mpf([_frac_mpf(lo, self), _frac_mpf(hi, self)]))
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            return FloatElement(self, self._iv.mpf(value.numerator) / value.denominator)
        return FloatElement(self, self._iv.mpf(value))

    element = __call__

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def to_spec(self) -> dict:
        return {"float_bits": self.bits}


def _raw_to_fraction(raw) -> Fraction:
    p, q = libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def _frac_mpf(x: Fraction, field: FloatField):
    return field._iv.mpf(x.numerator) / x.denominator


class FloatElement:
    __slots__ = ("ctx", "iv")

    def __init__(self, ctx: FloatField, iv):
        self.ctx = ctx
        self.iv = iv

    def _coerce(self, other):
        if isinstance(other, FloatElement):
            if other.ctx is not self.ctx:
                raise FieldMismatch("elements belong to different float fields")
            return other.iv
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ctx(other).iv
        return NotImplemented

    def _wrap(self, iv):
        return FloatElement(self.ctx, iv)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.iv + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.iv - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.iv)

    def __neg__(self):
        return self._wrap(-self.iv)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.iv * o)

    __rmul__ = __mul__

    def inverse(self):
        if self.sign() == 0:
            raise DivisionByZero("interval contains zero")
        return self._wrap(1 / self.iv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if 0 in o:
            raise DivisionByZero("interval contains zero")
        return self._wrap(self.iv / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(o).__truediv__(self)

    def __pow__(self, n: int):
        result = self.ctx.one
        for _ in range(abs(n)):
            result = result * self
        return result.inverse() if n < 0 else result

    def sign(self) -> int:
        if self.iv.a > 0:
            return 1
        if self.iv.b < 0:
            return -1
        return 0

    def is_zero(self) -> bool:
        return self.sign() == 0

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError("incomparable")
        return self._wrap(self.iv - o).sign()

    def __eq__(self, other):
        if not isinstance(other, (FloatElement, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    __hash__ = None

    def approx(self, bits: int) -> tuple:
        """Endpoints of the tracked interval; ``bits`` is ignored."""
        a, b = self.iv._mpi_
        return _raw_to_fraction(a), _raw_to_fraction(b)

    def is_rational(self) -> bool:
        return True

    @property
    def coeffs(self) -> tuple:
        lo, hi = self.approx(0)
        return ((lo + hi) / 2,)

    def to_json(self) -> list:
        return [float(self)]

    def __float__(self):
        lo, hi = self.approx(0)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"FloatElement({float(self):.12g})"


# ---------------------------------------------------------------------------
# functional interface


def field_new(poly: Sequence[int], iso) -> FieldContext:
    return FieldContext(poly, iso)


def fe_arith(op: str, a, b):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def fe_sign(a) -> int:
    return a.sign()


def fe_approx(a, bits: int) -> tuple:
    return a.approx(bits)


def bucket_key(x, bits: int = 32) -> int:
    """Integer key such that equal values get keys differing by at most one."""
    lo, hi = x.approx(bits + 2)
    return math.floor((lo + hi) / 2 * (1 << bits))
