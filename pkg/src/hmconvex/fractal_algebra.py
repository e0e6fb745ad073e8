"""Arithmetic on the fractal set R^alpha and the Gamma-type constants.

An element nu^alpha of R^alpha is stored by its base ``nu``.  Addition and
multiplication act on bases (nu^a + mu^a = (nu+mu)^a, nu^a mu^a = (nu mu)^a),
so every ring axiom holds bit-for-bit because it reduces to float arithmetic
on bases.  The order is the base order and |x^a| = |x|^a.

The order alpha is *not* stored on a value.  It lives on :class:`Alpha`,
which doubles as the computation context: it converts between bases and the
real number conventionally written nu^alpha (the signed power
``sign(nu) |nu|^alpha``) and scales elements by real constants such as
Gamma ratios.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, MixedAlphaError

__all__ = [
    "Alpha",
    "FractalArray",
    "FractalNumber",
    "as_alpha",
    "beta_alpha",
    "fa_add",
    "fa_mul",
    "gamma",
    "gamma_ratio",
    "lift",
    "project",
    "real_power",
    "signed_power",
]

AlphaLike = Union["Alpha", float, int]


def signed_power(x: float, p: float) -> float:
    """sign(x) * |x|**p, odd-symmetric in ``x``."""
    if x == 0.0:
        return 0.0
    return math.copysign(abs(x) ** p, x)


class FractalNumber:
    """An element of R^alpha represented by its base.

    Immutable, hashable and ordered by base.  Hand-rolled with ``__slots__``
    rather than a dataclass because arithmetic allocates one per operation.
    """

    __slots__ = ("base",)

    def __init__(self, base: float):
        object.__setattr__(self, "base", float(base))

    def __setattr__(self, name, value):
        raise AttributeError("FractalNumber is immutable")

    __delattr__ = __setattr__

    def __reduce__(self):
        return (FractalNumber, (self.base,))

    def __eq__(self, other):
        if isinstance(other, FractalNumber):
            return self.base == other.base
        return NotImplemented

    def __hash__(self):
        return hash((FractalNumber, self.base))

    def __lt__(self, other):
        if isinstance(other, FractalNumber):
            return self.base < other.base
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, FractalNumber):
            return self.base <= other.base
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, FractalNumber):
            return self.base > other.base
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, FractalNumber):
            return self.base >= other.base
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, FractalNumber):
            return _make(self.base + other.base)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, FractalNumber):
            return _make(self.base - other.base)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, FractalNumber):
            return _make(self.base * other.base)
        return NotImplemented

    def __truediv__(self, other):
        if not isinstance(other, FractalNumber):
            return NotImplemented
        if other.base == 0.0:
            raise ZeroDivisionError("division by the additive identity 0^alpha")
        return _make(self.base / other.base)

    def __neg__(self):
        return _make(-self.base)

    def __abs__(self):
        return _make(abs(self.base))

    def __pow__(self, p):
        # (x^a)^p read on bases; only used with |x| or integral exponents.
        return FractalNumber(signed_power(self.base, float(p)))

    def __repr__(self):
        return f"FractalNumber(base={self.base!r})"


_new = object.__new__
_set = object.__setattr__


def _make(base: float) -> FractalNumber:
    # fast path for results of float arithmetic, skips the float() coercion
    x = _new(FractalNumber)
    _set(x, "base", base)
    return x


ZERO = FractalNumber(0.0)
ONE = FractalNumber(1.0)


class FractalArray:
    """A batch of R^alpha elements: an immutable float64 array of bases.

    Operators mirror :class:`FractalNumber` elementwise; ``==`` returns a
    boolean array.  Indexing yields scalars.
    """

    __slots__ = ("bases",)

    def __init__(self, bases):
        b = np.array(bases, dtype=float)
        b.setflags(write=False)
        object.__setattr__(self, "bases", b)

    def __setattr__(self, name, value):
        raise AttributeError("FractalArray is immutable")

    @classmethod
    def of(cls, xs) -> "FractalArray":
        return cls([x.base for x in xs])

    def __len__(self):
        return self.bases.shape[0]

    def __getitem__(self, i):
        if isinstance(i, (int, np.integer)):
            return FractalNumber(self.bases[i])
        return FractalArray(self.bases[i])

    def __iter__(self):
        return (FractalNumber(b) for b in self.bases)

    def _other(self, other):
        if isinstance(other, FractalArray):
            return other.bases
        if isinstance(other, FractalNumber):
            return other.base
        return None

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FractalArray(self.bases + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FractalArray(self.bases - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FractalArray(o - self.bases)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else FractalArray(self.bases * o)

    __rmul__ = __mul__

    def __neg__(self):
        return FractalArray(-self.bases)

    def __eq__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else self.bases == o

    __hash__ = None

    def __repr__(self):
        return f"FractalArray({self.bases!r})"


def fa_add(x: FractalNumber, y: FractalNumber) -> FractalNumber:
    return x + y


def fa_mul(x: FractalNumber, y: FractalNumber) -> FractalNumber:
    return x * y


@dataclass(frozen=True)
class Alpha:
    """Fractal order ``0 < value <= 1`` and the context for conversions."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (math.isfinite(v) and 0.0 < v <= 1.0):
            raise DomainError(f"alpha must lie in (0, 1], got {self.value!r}")
        object.__setattr__(self, "value", v)

    def __float__(self):
        return self.value

    @property
    def is_classical(self) -> bool:
        return self.value == 1.0

    def require_same(self, other: "Alpha") -> "Alpha":
        if as_alpha(other).value != self.value:
            raise MixedAlphaError(
                f"mixed fractal orders: {self.value} and {as_alpha(other).value}"
            )
        return self

    # -- conversions -------------------------------------------------------
    def lift(self, base: float) -> FractalNumber:
        return FractalNumber(base)

    def real_power(self, x: FractalNumber) -> float:
        if self.value == 1.0:
            return x.base
        return signed_power(x.base, self.value)

    def from_real(self, value: float) -> FractalNumber:
        """The element whose real reading is ``value``."""
        if self.value == 1.0:
            return FractalNumber(value)
        return FractalNumber(signed_power(value, 1.0 / self.value))

    def scale(self, x: FractalNumber, r: float) -> FractalNumber:
        """Multiply the real reading of ``x`` by the real constant ``r``."""
        return x * self.from_real(r)

    def base_error(self, value: float, err: float) -> float:
        """Propagate an absolute error on a real reading into base units."""
        if err == 0.0:
            return 0.0
        if self.value == 1.0:
            return abs(err)
        hi = self.from_real(value + abs(err)).base
        lo = self.from_real(value - abs(err)).base
        return max(abs(hi - self.from_real(value).base), abs(self.from_real(value).base - lo))

    @property
    def zero(self) -> FractalNumber:
        return ZERO

    @property
    def one(self) -> FractalNumber:
        return ONE


def as_alpha(alpha: AlphaLike) -> Alpha:
    return alpha if isinstance(alpha, Alpha) else Alpha(float(alpha))


def lift(base: float, alpha: AlphaLike | None = None) -> FractalNumber:
    """Canonical embedding b -> b^alpha (alpha only validated, never stored)."""
    if alpha is not None:
        as_alpha(alpha)
    return FractalNumber(base)


def project(x: FractalNumber) -> float:
    return x.base


def real_power(x: FractalNumber, alpha: AlphaLike) -> float:
    """sign(base) |base|^alpha; exact identity at alpha = 1."""
    return as_alpha(alpha).real_power(x)


# -- special functions ------------------------------------------------------

def gamma(z: float) -> float:
    """Gamma function for positive real arguments.

    Backed by the C library ``tgamma`` (max relative error a few ulp on
    (0, 171)); beyond that range the value overflows and we raise.
    """
    z = float(z)
    if not (z > 0.0) or not math.isfinite(z):
        raise DomainError(f"gamma is only evaluated for z > 0, got {z!r}")
    try:
        return math.gamma(z)
    except OverflowError as exc:
        raise DomainError(f"gamma({z}) overflows double precision") from exc


def _log_gamma(z: float) -> float:
    if not (z > 0.0):
        raise DomainError(f"log-gamma needs z > 0, got {z!r}")
    return math.lgamma(z)


def gamma_ratio(k: float, alpha: AlphaLike) -> float:
    """Gamma(1 + k alpha) / Gamma(1 + (k+1) alpha).

    This is the prefactored local fractional integral of x^{k alpha} over
    [0, 1].  ``k`` is normally a nonnegative integer; real ``k >= 0`` is
    accepted for fractional powers such as gamma^{s alpha}.
    """
    a = as_alpha(alpha).value
    if k < 0:
        raise DomainError(f"gamma_ratio needs k >= 0, got {k!r}")
    if a == 1.0 and float(k).is_integer():
        return 1.0 / (k + 1.0)
    z1, z2 = 1.0 + k * a, 1.0 + (k + 1.0) * a
    if z2 < 170.0:
        return math.gamma(z1) / math.gamma(z2)
    return math.exp(_log_gamma(z1) - _log_gamma(z2))


def beta_alpha(nu: float, mu: float, alpha: AlphaLike, scheme=None) -> FractalNumber:
    """Generalized Beta: the un-prefactored integral of
    gamma^{(nu-1) alpha} (1-gamma)^{(mu-1) alpha} over [0, 1].

    Integer arguments are expanded into a generalized-monomial series and
    integrated term by term; otherwise the right-kernel quadrature is used.
    An explicit ``scheme`` overrides that choice.
    """
    # lazy: both modules import this one
    from .functions import BaseMapped, MonomialSeries
    from .lfi import IntegralScheme, SchemeKind, lfi

    A = as_alpha(alpha)
    if nu < 1 or mu < 1:
        raise DomainError("beta_alpha needs nu, mu >= 1")
    integer_args = float(nu).is_integer() and float(mu).is_integer()
    if integer_args:
        f = MonomialSeries.power(0.0, int(nu) - 1) * MonomialSeries(0.0, [(0, 1.0), (1, -1.0)]) ** (int(mu) - 1)
    else:
        f = BaseMapped(
            lambda g: g ** (nu - 1.0) * (1.0 - g) ** (mu - 1.0), domain=(0.0, 1.0)
        )
    if scheme is None:
        kind = SchemeKind.EXACT_MONOMIAL if integer_args else SchemeKind.KERNEL_RIGHT
        scheme = IntegralScheme(kind)
    res = lfi(f, 0.0, 1.0, A, scheme)
    return A.from_real(gamma(1.0 + A.value) * res.real)
