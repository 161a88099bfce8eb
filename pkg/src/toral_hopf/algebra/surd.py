"""Exact arithmetic in multi-quadratic fields Q(sqrt(p1), ..., sqrt(pm), i).

Frequencies of the form sqrt(n) and the complex unit are the only irrational
quantities the normal-form engine needs.  An element is stored as a sparse map
from a basis key (a frozenset of generators, each a prime or -1) to a rational
coefficient; the key {2, 3} stands for sqrt(6), {-1} for i.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

_EMPTY = frozenset()


@lru_cache(maxsize=None)
def _squarefree_split(n: int) -> tuple[int, frozenset]:
    """Return (s, key) with n = s^2 * prod(key) for positive n."""
    if n <= 0:
        raise ValueError("expected positive integer")
    s, primes, m, p = 1, [], n, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            primes.append(p)
        p += 1
    if m > 1:
        primes.append(m)
    return s, frozenset(primes)


@lru_cache(maxsize=None)
def _key_product(k1: frozenset, k2: frozenset) -> tuple[int, frozenset]:
    factor = 1
    for p in k1 & k2:
        factor *= p
    return factor, k1 ^ k2


def _key_float(key: frozenset) -> complex | float:
    val: complex | float = 1.0
    for p in key:
        val = val * (1j if p == -1 else math.sqrt(p))
    return val


class Surd:
    """Exact element of a multi-quadratic extension of Q (optionally with i)."""

    __slots__ = ("_c",)

    def __init__(self, value=0, _terms: dict | None = None):
        if _terms is not None:
            self._c = _terms
            return
        if isinstance(value, Surd):
            self._c = dict(value._c)
            return
        if isinstance(value, (int, Rational)):
            q = Fraction(value)
            self._c = {_EMPTY: q} if q else {}
            return
        raise TypeError(f"cannot build Surd from {type(value).__name__}")

    # construction -------------------------------------------------------
    @classmethod
    def sqrt(cls, n) -> "Surd":
        """sqrt of an integer or rational (negative values give i*sqrt(|n|))."""
        q = Fraction(n)
        if q == 0:
            return cls(0)
        neg = q < 0
        q = abs(q)
        # sqrt(a/b) = sqrt(a*b)/b
        s, key = _squarefree_split(q.numerator * q.denominator)
        coeff = Fraction(s, q.denominator)
        if neg:
            key = key | {-1}
        return cls(_terms={key: coeff})

    @classmethod
    def i(cls) -> "Surd":
        return cls(_terms={frozenset({-1}): Fraction(1)})

    # basic protocol -------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Rational)):
            return Surd(other)
        return None

    def __bool__(self):
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_fraction())
        return hash(frozenset(self._c.items()))

    def __neg__(self):
        return Surd(_terms={k: -v for k, v in self._c.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._c)
        for k, v in o._c.items():
            w = out.get(k, 0) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return Surd(_terms=out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for k1, v1 in self._c.items():
            for k2, v2 in o._c.items():
                f, k = _key_product(k1, k2)
                w = out.get(k, 0) + f * v1 * v2
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return Surd(_terms=out)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        if not self._c:
            raise ZeroDivisionError("Surd division by zero")
        if len(self._c) == 1:
            (k, v), = self._c.items()
            # 1/(v*sqrt(P)) = sqrt(P)/(v*P) where P is the signed product
            f, _ = _key_product(k, k)
            return Surd(_terms={k: 1 / (v * f)})
        gens = set().union(*self._c.keys())
        p = max(gens, key=abs)
        u = Surd(_terms={k: v for k, v in self._c.items() if p not in k})
        w = Surd(_terms={k - {p}: v for k, v in self._c.items() if p in k})
        rp = Surd(_terms={frozenset({p}): Fraction(1)})
        denom = u * u - w * w * p
        return (u - w * rp) * denom.inverse()

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out, base = Surd(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # views --------------------------------------------------------------
    def conjugate(self) -> "Surd":
        return Surd(_terms={k: (-v if -1 in k else v) for k, v in self._c.items()})

    @property
    def real(self) -> "Surd":
        return Surd(_terms={k: v for k, v in self._c.items() if -1 not in k})

    @property
    def imag(self) -> "Surd":
        return Surd(_terms={k - {-1}: v for k, v in self._c.items() if -1 in k})

    def is_real(self) -> bool:
        return all(-1 not in k for k in self._c)

    def is_rational(self) -> bool:
        return all(not k for k in self._c)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._c.get(_EMPTY, Fraction(0))

    def terms(self) -> dict:
        return dict(self._c)

    def __complex__(self):
        return complex(sum(float(v) * _key_float(k) for k, v in self._c.items()))

    def __float__(self):
        if not self.is_real():
            raise TypeError("complex Surd has no float value")
        return float(sum(float(v) * _key_float(k) for k, v in self._c.items()))

    def sign(self) -> int:
        """Sign of a real element (exact for rationals, float check otherwise)."""
        if not self._c:
            return 0
        if self.is_rational():
            return 1 if self.to_fraction() > 0 else -1
        return 1 if float(self) > 0 else -1

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        return f"Surd({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, key=lambda k: (len(k), sorted(k))):
            v = self._c[k]
            radicand = math.prod(p for p in k if p != -1)
            unit = "*i" if -1 in k else ""
            root = f"*sqrt({radicand})" if radicand != 1 else ""
            parts.append(f"{v}{root}{unit}")
        return " + ".join(parts)


def as_exact(x) -> Fraction | Surd:
    """Collapse a rational Surd to Fraction; leave other values unchanged."""
    if isinstance(x, Surd) and x.is_rational():
        return x.to_fraction()
    return x
