"""Sparse multivariate Laurent polynomials over the rationals.

Every polynomial lives over the same fixed, ordered set of parameters
``VARIABLES``; ``h`` stands for the square root of hbar, so hbar = h**2 and
half-integer powers of hbar become integer powers of ``h``.

Monomials are stored as a single packed integer (one biased 16-bit field per
variable), which makes multiplying monomials a single integer addition.
Negative exponents are allowed; the rescalings between the ``q`` and ``T``
normalizations need them transiently.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Union

VARIABLES = ("h", "eps2", "U0", "sigma", "V0", "z", "rho")
NVARS = len(VARIABLES)
_INDEX = {name: i for i, name in enumerate(VARIABLES)}

_BITS = 16
_BIAS = 1 << (_BITS - 1)
_MASK = (1 << _BITS) - 1
ONE_KEY = sum(_BIAS << (_BITS * i) for i in range(NVARS))

Number = Union[int, Fraction]


def var_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise ValueError(f"unknown variable {name!r}") from None


def pack(exps: Iterable[int]) -> int:
    key = 0
    n = 0
    for i, e in enumerate(exps):
        if not -_BIAS <= e < _BIAS:
            raise OverflowError(f"exponent {e} out of range")
        key |= (e + _BIAS) << (_BITS * i)
        n += 1
    if n != NVARS:
        raise ValueError(f"exponent vector must have length {NVARS}")
    return key


def unpack(key: int) -> tuple[int, ...]:
    return tuple(((key >> (_BITS * i)) & _MASK) - _BIAS for i in range(NVARS))


def key_exp(key: int, i: int) -> int:
    return ((key >> (_BITS * i)) & _MASK) - _BIAS


def _shift_key(i: int, k: int) -> int:
    return k << (_BITS * i)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class Poly:
    """Immutable polynomial; ``terms`` maps packed monomial keys to nonzero Fractions."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, Fraction] | None = None):
        self._t = {} if terms is None else {k: v for k, v in terms.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p._t = terms
        p._hash = None
        return p

    # -- construction -------------------------------------------------------

    @classmethod
    def const(cls, c: Number) -> "Poly":
        c = _as_fraction(c)
        return cls._raw({ONE_KEY: c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        return cls._raw({ONE_KEY + _shift_key(var_index(name), power): Fraction(1)})

    @classmethod
    def monomial(cls, coeff: Number = 1, **exps: int) -> "Poly":
        coeff = _as_fraction(coeff)
        if not coeff:
            return cls._raw({})
        key = ONE_KEY
        for name, e in exps.items():
            key += _shift_key(var_index(name), e)
        return cls._raw({key: coeff})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Iterable[int], Number]]) -> "Poly":
        out: dict[int, Fraction] = {}
        for exps, c in items:
            k = pack(exps)
            v = out.get(k, 0) + _as_fraction(c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return cls._raw(out)

    @staticmethod
    def coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return Poly.const(x)

    # -- inspection ---------------------------------------------------------

    @property
    def raw_terms(self) -> dict[int, Fraction]:
        return self._t

    def terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms as (exponent vector, coefficient), lexicographically sorted."""
        return sorted((unpack(k), v) for k, v in self._t.items())

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and ONE_KEY in self._t)

    def constant_term(self) -> Fraction:
        return self._t.get(ONE_KEY, Fraction(0))

    def as_constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"polynomial {self} is not constant")
        return self.constant_term()

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def variables(self) -> set[str]:
        used = set()
        for k in self._t:
            for i, e in enumerate(unpack(k)):
                if e:
                    used.add(VARIABLES[i])
        return used

    def free_of(self, name: str) -> bool:
        i = var_index(name)
        return all(key_exp(k, i) == 0 for k in self._t)

    def degree(self, name: str) -> int:
        """Highest exponent of ``name``; -1 for the zero polynomial."""
        i = var_index(name)
        return max((key_exp(k, i) for k in self._t), default=-1)

    def min_degree(self, name: str) -> int:
        i = var_index(name)
        return min((key_exp(k, i) for k in self._t), default=0)

    def collect(self, name: str) -> dict[int, "Poly"]:
        """Split by powers of ``name``: {power: coefficient free of name}."""
        i = var_index(name)
        out: dict[int, dict[int, Fraction]] = {}
        for k, v in self._t.items():
            e = key_exp(k, i)
            out.setdefault(e, {})[k - _shift_key(i, e)] = v
        return {e: Poly._raw(t) for e, t in out.items()}

    def coeff(self, name: str, power: int) -> "Poly":
        i = var_index(name)
        shift = _shift_key(i, power)
        return Poly._raw({k - shift: v for k, v in self._t.items() if key_exp(k, i) == power})

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        if len(self._t) < len(other._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        out = dict(a)
        for k, v in b.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s += v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({k: -v for k, v in self._t.items()})

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                c = Fraction(other)
                if not c:
                    return Poly._raw({})
                return Poly._raw({k: v * c for k, v in self._t.items()})
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return Poly._raw({})
        if len(b) == 1:
            (kb, vb), = b.items()
            off = kb - ONE_KEY
            return Poly._raw({k + off: v * vb for k, v in a.items()})
        if len(a) == 1:
            (ka, va), = a.items()
            off = ka - ONE_KEY
            return Poly._raw({k + off: v * va for k, v in b.items()})
        out: dict[int, Fraction] = {}
        get = out.get
        for ka, va in a.items():
            off = ka - ONE_KEY
            for kb, vb in b.items():
                k = kb + off
                out[k] = get(k, 0) + va * vb
        return Poly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Poly):
            return self.divide_exact(other)
        return NotImplemented

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative powers only for monomials")
            (k, v), = self._t.items()
            inv = Poly._raw({2 * ONE_KEY - k: 1 / v})
            return inv ** (-n)
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, name: str, power: int) -> "Poly":
        """Multiply by ``name**power`` (power may be negative)."""
        off = _shift_key(var_index(name), power)
        return Poly._raw({k + off: v for k, v in self._t.items()})

    def mul_monomial(self, coeff: Number, exps: Mapping[str, int]) -> "Poly":
        off = 0
        for name, e in exps.items():
            off += _shift_key(var_index(name), e)
        c = _as_fraction(coeff)
        if not c:
            return Poly._raw({})
        return Poly._raw({k + off: v * c for k, v in self._t.items()})

    def diff(self, name: str) -> "Poly":
        i = var_index(name)
        one = _shift_key(i, 1)
        out = {}
        for k, v in self._t.items():
            e = key_exp(k, i)
            if e:
                out[k - one] = v * e
        return Poly._raw(out)

    def divide_exact(self, other: "Poly") -> "Poly":
        """Exact quotient ``self / other``; raises ArithmeticError if it does not exist."""
        other = Poly.coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_monomial():
            (kb, vb), = other._t.items()
            off = kb - ONE_KEY
            inv = 1 / vb
            return Poly._raw({k - off: v * inv for k, v in self._t.items()})
        # Strip monomial content so both sides are genuine polynomials; in the
        # Laurent ring monomials are units, so this does not change exactness.
        sa, sb = self._min_key(), other._min_key()
        rem = {k - sa + ONE_KEY: v for k, v in self._t.items()}
        div = {k - sb + ONE_KEY: v for k, v in other._t.items()}
        lead_b = max(div, key=unpack)
        lead_bexp = unpack(lead_b)
        lead_bc = div[lead_b]
        quot: dict[int, Fraction] = {}
        while rem:
            lead = max(rem, key=unpack)
            if any(x < y for x, y in zip(unpack(lead), lead_bexp)):
                raise ArithmeticError("polynomial division is not exact")
            c = rem[lead] / lead_bc
            off = lead - lead_b
            quot[off + ONE_KEY] = c
            for k, v in div.items():
                kk = k + off
                s = rem.get(kk, 0) - c * v
                if s:
                    rem[kk] = s
                else:
                    rem.pop(kk, None)
        shift = sa - sb
        return Poly._raw({k + shift: v for k, v in quot.items()})

    def _min_key(self) -> int:
        if not self._t:
            return ONE_KEY
        exps = [unpack(k) for k in self._t]
        return pack(min(col) for col in zip(*exps))

    # -- substitution ---------------------------------------------------------

    def subs(self, name: str, value) -> "Poly":
        """Substitute the variable ``name`` by ``value`` (a Poly or a number)."""
        i = var_index(name)
        value = Poly.coerce(value)
        parts = self.collect(name)
        out = Poly()
        powers: dict[int, Poly] = {}
        for e, c in parts.items():
            if e not in powers:
                powers[e] = value ** e
            out = out + c * powers[e]
        del i
        return out

    def evaluate(self, values: Mapping[str, Number] | None = None, **kw: Number) -> "Poly":
        """Substitute numbers for some variables; returns a Poly in the rest."""
        vals = dict(values or {})
        vals.update(kw)
        idx = {var_index(n): _as_fraction(v) for n, v in vals.items()}
        out: dict[int, Fraction] = {}
        for k, v in self._t.items():
            kk = k
            c = v
            for i, x in idx.items():
                e = key_exp(k, i)
                if e:
                    if not x and e < 0:
                        raise ZeroDivisionError("negative power evaluated at zero")
                    c *= x ** e
                    kk -= _shift_key(i, e)
            if c:
                s = out.get(kk, 0) + c
                if s:
                    out[kk] = s
                else:
                    out.pop(kk, None)
        return Poly._raw(out)

    def map_coeffs(self, fn) -> "Poly":
        return Poly._raw({k: fn(v) for k, v in self._t.items() if fn(v)})

    # -- comparison / hashing ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == Poly.const(other)._t
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": list(VARIABLES),
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Poly":
        names = list(data["vars"])
        items = []
        for t in data["terms"]:
            exps = [0] * NVARS
            for name, e in zip(names, t["exp"]):
                exps[var_index(name)] = int(e)
            items.append((exps, Fraction(int(t["num"]), int(t["den"]))))
        return cls.from_terms(items)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self._t:
            return "0"
        pieces = []
        for exps, c in sorted(self.terms(), key=lambda t: tuple(-x for x in t[0])):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(VARIABLES, exps)
                if e
            )
            if not mono:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{c}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")


ZERO = Poly()
ONE = Poly.const(1)


def var(name: str, power: int = 1) -> Poly:
    return Poly.var(name, power)


def const(c: Number) -> Poly:
    return Poly.const(c)
