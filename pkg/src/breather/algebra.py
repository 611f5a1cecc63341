"""Exact arithmetic kernel.

Four value types live here, all immutable:

``ParamPoly``
    Sparse polynomial with rational coefficients in ``w`` (standing for
    eps**2) and the coefficient symbols ``g2, g3, ...``.
``FactoredRational``
    ``content * num / (w**k * prod h(l, q)**m)``, the rational functions of
    ``w`` produced by the exponential-series recursion.  Denominators stay
    factored so that pole provenance survives.
``HarmonicPoly``
    Finite cosine series ``sum_q c_q cos(q tau)`` over any coefficient ring
    supporting ``+``, ``*`` and multiplication by ``Fraction``.
``SechPoly``
    Polynomial ``sum_p c_p S**p`` in the soliton profile ``S``.

Monomials of a ``ParamPoly`` are packed into a single Python ``int`` with 16
bits per variable slot (slot 0 is ``w``, slot ``m - 1`` is ``g_m``), so that
multiplying monomials is integer addition.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
import re

from .errors import PoleAtEvaluationPoint

__all__ = [
    "ParamPoly",
    "FactoredRational",
    "HarmonicPoly",
    "SechPoly",
    "cos_mul",
    "harmonic_pow",
    "h_factor",
    "h_root",
    "rf_cancel",
    "laurent_lead",
    "laurent_principal",
    "eval_w",
    "root_label",
    "eps_label",
]

_BITS = 16
_SLOT_MASK = (1 << _BITS) - 1
_MAX_SLOTS = 64
_HIGH = sum(1 << (_BITS * i + _BITS - 1) for i in range(_MAX_SLOTS))
_VAR_RE = re.compile(r"g(\d+)")


def _slot(name: str) -> int:
    if name == "w":
        return 0
    m = _VAR_RE.fullmatch(name)
    if m is None or int(m.group(1)) < 2 or int(m.group(1)) > _MAX_SLOTS:
        raise ValueError(f"unknown variable {name!r}; expected 'w' or g2..g{_MAX_SLOTS}")
    return int(m.group(1)) - 1


def _slot_name(i: int) -> str:
    return "w" if i == 0 else f"g{i + 1}"


def _unpack(key: int) -> list[tuple[int, int]]:
    out = []
    i = 0
    while key:
        e = key & _SLOT_MASK
        if e:
            out.append((i, e))
        key >>= _BITS
        i += 1
    return out


def _wexp(key: int) -> int:
    return key & _SLOT_MASK


def _total_degree(key: int) -> int:
    return sum(e for _, e in _unpack(key))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"exact rational expected, got {type(c).__name__}")


class ParamPoly:
    """Polynomial in ``w, g2, g3, ...`` with rational coefficients.

    Stored as integer coefficients over a common positive denominator, with
    ``gcd(den, *coeffs) == 1``.
    """

    __slots__ = ("_t", "_d", "_hash")

    def __init__(self, value=0):
        if isinstance(value, ParamPoly):
            self._t, self._d = value._t, value._d
        else:
            c = _as_fraction(value)
            self._t = {0: c.numerator} if c else {}
            self._d = c.denominator
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, den: int = 1) -> "ParamPoly":
        obj = cls.__new__(cls)
        obj._hash = None
        if not terms:
            obj._t, obj._d = {}, 1
            return obj
        g = gcd(den, *terms.values())
        if den < 0:
            g = -g
        if g != 1:
            terms = {k: v // g for k, v in terms.items()}
            den //= g
        obj._t, obj._d = terms, den
        return obj

    @classmethod
    def var(cls, name: str, power: int = 1) -> "ParamPoly":
        if power < 0 or power >= 1 << (_BITS - 1):
            raise ValueError("exponent out of range")
        return cls._raw({power << (_BITS * _slot(name)): 1})

    @classmethod
    def from_terms(cls, terms) -> "ParamPoly":
        """Build from ``{((name, exp), ...): coeff}``; an empty tuple is the constant."""
        acc: dict[int, Fraction] = {}
        for mono, c in terms.items():
            key = 0
            for name, e in mono:
                key += e << (_BITS * _slot(name))
            acc[key] = acc.get(key, Fraction(0)) + _as_fraction(c)
        return cls._from_fractions(acc)

    @classmethod
    def _from_fractions(cls, acc: dict) -> "ParamPoly":
        acc = {k: v for k, v in acc.items() if v}
        if not acc:
            return cls._raw({})
        den = lcm(*(v.denominator for v in acc.values()))
        return cls._raw({k: v.numerator * (den // v.denominator) for k, v in acc.items()}, den)

    @classmethod
    def parse(cls, text: str) -> "ParamPoly":
        """Parse an expression such as ``"1 - 120*g5"`` or ``"3/2*w^2*g3"``."""
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        return _eval_ast(tree.body)

    # -- inspection ---------------------------------------------------------
    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_term(self) -> Fraction:
        return Fraction(self._t.get(0, 0), self._d)

    def terms(self) -> dict:
        """``{((name, exp), ...): Fraction}`` in canonical descending order."""
        return {
            tuple((_slot_name(i), e) for i, e in _unpack(k)): Fraction(self._t[k], self._d)
            for k in self._sorted_keys()
        }

    def variables(self) -> set[str]:
        out = set()
        for k in self._t:
            out.update(_slot_name(i) for i, _ in _unpack(k))
        return out

    def degree(self, name: str | None = None) -> int:
        if not self._t:
            return -1
        if name is None:
            return max(_total_degree(k) for k in self._t)
        s = _BITS * _slot(name)
        return max((k >> s) & _SLOT_MASK for k in self._t)

    def __len__(self):
        return len(self._t)

    def _sorted_keys(self):
        def order(k):
            up = _unpack(k)
            vec = [0] * ((up[-1][0] + 1) if up else 0)
            for i, e in up:
                vec[i] = e
            vec += [0] * (_MAX_SLOTS - len(vec))
            return (sum(vec), vec)

        return sorted(self._t, key=order, reverse=True)

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ParamPoly | None":
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._t:
            return self
        if not self._t:
            return o
        d = lcm(self._d, o._d)
        fa, fb = d // self._d, d // o._d
        t = {k: v * fa for k, v in self._t.items()} if fa != 1 else dict(self._t)
        for k, v in o._t.items():
            nv = t.get(k, 0) + v * fb
            if nv:
                t[k] = nv
            else:
                t.pop(k, None)
        return ParamPoly._raw(t, d)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly._raw({k: -v for k, v in self._t.items()}, self._d)

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
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c or not self._t:
                return ParamPoly._raw({})
            return ParamPoly._raw(
                {k: v * c.numerator for k, v in self._t.items()}, self._d * c.denominator
            )
        if not isinstance(other, ParamPoly):
            return NotImplemented
        if not self._t or not other._t:
            return ParamPoly._raw({})
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        get = out.get
        for kb, vb in b.items():
            for ka, va in a.items():
                k = ka + kb
                out[k] = get(k, 0) + va * vb
        if any(k & _HIGH for k in out):
            raise OverflowError("monomial exponent exceeds packed range")
        out = {k: v for k, v in out.items() if v}
        return ParamPoly._raw(out, self._d * other._d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return self * (1 / c)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("non-negative integer exponent required")
        result = ParamPoly(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._d == o._d and self._t == o._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._d, frozenset(self._t.items())))
        return self._hash

    # -- substitution -------------------------------------------------------
    def subs(self, bindings: dict) -> "ParamPoly":
        """Substitute ``name -> Fraction | ParamPoly`` for any subset of variables."""
        if not bindings:
            return self
        slots = {_slot(n): (v if isinstance(v, ParamPoly) else ParamPoly(v)) for n, v in bindings.items()}
        cache: dict[tuple[int, int], ParamPoly] = {}
        acc = ParamPoly(0)
        numeric: dict[int, Fraction] = {}
        all_const = all(v.is_constant() for v in slots.values())
        for k, v in self._t.items():
            keep = 0
            factor: Fraction | ParamPoly = Fraction(v, self._d)
            for i, e in _unpack(k):
                if i in slots:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = slots[i] ** e
                    sub = cache[key]
                    factor = factor * (sub.constant_term() if all_const else sub)
                else:
                    keep += e << (_BITS * i)
            if all_const:
                numeric[keep] = numeric.get(keep, Fraction(0)) + factor
            else:
                acc = acc + ParamPoly._raw({keep: 1}) * factor
        if all_const:
            return ParamPoly._from_fractions(numeric)
        return acc

    def w_coefficients(self) -> dict[int, "ParamPoly"]:
        """Split as ``sum_e A_e(g) w**e``; returns ``{e: A_e}``."""
        parts: dict[int, dict[int, int]] = {}
        for k, v in self._t.items():
            e = k & _SLOT_MASK
            parts.setdefault(e, {})[k - e] = v
        return {e: ParamPoly._raw(t, self._d) for e, t in parts.items()}

    @classmethod
    def from_w_coefficients(cls, parts: dict[int, "ParamPoly"]) -> "ParamPoly":
        acc = ParamPoly(0)
        for e, p in parts.items():
            if p:
                acc = acc + p * ParamPoly.var("w", e)
        return acc

    def at_w(self, w0: Fraction) -> "ParamPoly":
        """Evaluate at ``w = w0``, leaving the g-symbols free."""
        w0 = _as_fraction(w0)
        acc: dict[int, Fraction] = {}
        for k, v in self._t.items():
            e = k & _SLOT_MASK
            g = k - e
            acc[g] = acc.get(g, Fraction(0)) + Fraction(v, self._d) * w0**e
        return ParamPoly._from_fractions(acc)

    def divmod_linear_w(self, c0: Fraction, c1: Fraction) -> tuple["ParamPoly", "ParamPoly"]:
        """Divide by ``c0 + c1*w`` (``c1 != 0``) as polynomials in ``w``."""
        parts = self.w_coefficients()
        if not parts:
            return ParamPoly(0), ParamPoly(0)
        n = max(parts)
        inv = 1 / _as_fraction(c1)
        c0 = _as_fraction(c0)
        quot: dict[int, ParamPoly] = {}
        carry = ParamPoly(0)
        for e in range(n, 0, -1):
            a = parts.get(e, ParamPoly(0)) - carry
            q = a * inv
            quot[e - 1] = q
            carry = q * c0
        rem = parts.get(0, ParamPoly(0)) - carry
        return ParamPoly.from_w_coefficients(quot), rem

    def primitive(self) -> tuple[Fraction, "ParamPoly"]:
        """``(content, p)`` with ``self == content * p``, ``p`` integral, gcd 1,
        leading coefficient (graded-lex order) positive."""
        if not self._t:
            return Fraction(0), self
        g = gcd(*self._t.values())
        lead = self._t[self._sorted_keys()[0]]
        if lead < 0:
            g = -g
        return Fraction(g, self._d), ParamPoly._raw({k: v // g for k, v in self._t.items()}, 1)

    def lead_sign(self) -> int:
        if not self._t:
            return 0
        return 1 if self._t[self._sorted_keys()[0]] > 0 else -1

    # -- text ---------------------------------------------------------------
    def text(self) -> str:
        if not self._t:
            return "0"
        pieces = []
        for k in self._sorted_keys():
            c = Fraction(self._t[k], self._d)
            mono = "*".join(
                _slot_name(i) if e == 1 else f"{_slot_name(i)}^{e}" for i, e in _unpack(k)
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(("+ " if c > 0 else "- ") + body)
        return " ".join(pieces)

    __str__ = text

    def __repr__(self):
        return f"ParamPoly({self.text()!r})"


def _eval_ast(node) -> ParamPoly:
    if isinstance(node, ast.BinOp):
        left = _eval_ast(node.left)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("exponent must be an integer literal")
            return left ** node.right.value
        right = _eval_ast(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or not right:
                raise ValueError("division only by nonzero constants")
            return left * (1 / right.constant_term())
    elif isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return -_eval_ast(node.operand)
        if isinstance(node.op, ast.UAdd):
            return _eval_ast(node.operand)
    elif isinstance(node, ast.Constant) and isinstance(node.value, int):
        return ParamPoly(node.value)
    elif isinstance(node, ast.Name):
        return ParamPoly.var(node.id)
    raise ValueError(f"unsupported syntax in polynomial: {ast.dump(node)}")


# ---------------------------------------------------------------------------
# Linear divisors h(l, q)
# ---------------------------------------------------------------------------

def h_factor(l: int, q: int) -> ParamPoly:
    """``h(l, q) = (1 - q^2) - w (l^2 - q^2)``."""
    if l < 1 or q < 0:
        raise ValueError("need l >= 1 and q >= 0")
    p = ParamPoly(1 - q * q) - ParamPoly.var("w") * (l * l - q * q)
    if not p:
        raise ValueError(f"h({l},{q}) is identically zero")
    return p


def h_root(l: int, q: int) -> Fraction | None:
    """Root in ``w`` of ``h(l, q)``, or ``None`` when ``h`` is constant."""
    if l == q:
        return None
    return Fraction(1 - q * q, l * l - q * q)


@lru_cache(maxsize=None)
@lru_cache(maxsize=None)
def _canonical_label(l: int, q: int) -> tuple[int, int]:
    """Smallest ``(l', q')`` whose ``h`` has the same root as ``h(l, q)``."""
    w0 = h_root(l, q)
    for ll in range(2, l + 1):
        for qq in range(ll % 2, ll, 2):
            if qq != 1 and h_root(ll, qq) == w0:
                return (ll, qq)
    return (l, q)


def root_label(w0: Fraction) -> tuple[int, int] | None:
    """Canonical ``(l, q)`` label of a nonzero root, searching ``l <= 200``."""
    w0 = Fraction(w0)
    for ll in range(2, 201):
        for qq in range(ll % 2, ll, 2):
            if qq != 1 and h_root(ll, qq) == w0:
                return (ll, qq)
    return None


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def eps_label(w0: Fraction) -> str:
    """Display form of ``eps = sqrt(w0)``, e.g. ``-1/2 -> 'i/√2'``."""
    w0 = Fraction(w0)
    if w0 == 0:
        return "0"
    n, d = abs(w0).numerator, abs(w0).denominator
    rn, rd = _isqrt_exact(n), _isqrt_exact(d)
    if rn is not None and rd is not None:
        mag = str(rn) if rd == 1 else f"{rn}/{rd}"
    elif rn is not None:
        mag = f"{rn}/√{d}"
    elif d == 1:
        mag = f"√{n}"
    else:
        mag = f"√({n}/{d})"
    if w0 > 0:
        return mag
    if mag == "1":
        return "i"
    if mag.startswith("1/"):
        return "i" + mag[1:]
    if mag[0].isdigit():
        top, _, rest = mag.partition("/")
        return f"{top}i/{rest}" if rest else f"{top}i"
    return "i" + mag


# ---------------------------------------------------------------------------
# Factored rational functions of w
# ---------------------------------------------------------------------------

def _hc(lq: tuple[int, int]) -> tuple[int, int]:
    l, q = lq
    return 1 - q * q, -(l * l - q * q)


class FactoredRational:
    """``content * num / (w**wpow * prod_{(l,q)} h(l,q)**m)``.

    ``num`` is a primitive integral ``ParamPoly`` with positive leading
    coefficient; factors are keyed by the canonical label of their root, so
    two labels with the same root are merged.  The canonical zero has
    ``content == 0``.
    """

    __slots__ = ("num", "factors", "wpow", "content", "_hash")

    def __init__(self, num=0, factors=(), wpow: int = 0, content=1):
        if not isinstance(num, ParamPoly):
            num = ParamPoly(num)
        c0, p = num.primitive()
        content = _as_fraction(content) * c0
        self._hash = None
        if not content:
            self.num, self.factors, self.wpow, self.content = ParamPoly(0), (), 0, Fraction(0)
            return
        # normalise labels: constant h(l,l) goes into the content, h(l,1) is
        # a multiple of w, anything else is keyed by its canonical label
        fd: dict = {}
        for (l, q), m in dict(factors).items():
            if not m:
                continue
            if l == q:
                if l == 1:
                    raise ZeroDivisionError("h(1,1) is identically zero")
                content /= Fraction(1 - l * l) ** m
            elif q == 1:
                wpow += m
                content /= Fraction(-(l * l - 1)) ** m
            else:
                lab = _canonical_label(l, q)
                if lab != (l, q):
                    content /= Fraction(1 - q * q, 1 - lab[1] * lab[1]) ** m
                fd[lab] = fd.get(lab, 0) + m
        self.num = p
        self.factors = tuple(sorted(fd.items()))
        self.wpow = wpow
        self.content = content

    @classmethod
    def const(cls, c) -> "FactoredRational":
        return cls(ParamPoly(1), (), 0, _as_fraction(c))

    @classmethod
    def from_poly(cls, p) -> "FactoredRational":
        return cls(p)

    def __bool__(self):
        return bool(self.content)

    def is_zero(self) -> bool:
        return not self.content

    def _fdict(self) -> dict:
        return dict(self.factors)

    def roots(self) -> dict[Fraction, tuple[tuple[int, int] | None, int]]:
        """``{w0: (label, multiplicity)}`` for every denominator root (``w`` gives ``w0 = 0``)."""
        out = {}
        if self.wpow:
            out[Fraction(0)] = (None, self.wpow)
        for lq, m in self.factors:
            out[h_root(*lq)] = (lq, m)
        return out

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, FactoredRational):
            return other
        if isinstance(other, (ParamPoly, int, Fraction)):
            return FactoredRational(other)
        return None

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c or not self.content:
                return _FR_ZERO
            return _fr_raw(self.num, self.factors, self.wpow, self.content * c)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.content or not o.content:
            return _FR_ZERO
        f = self._fdict()
        for lq, m in o.factors:
            f[lq] = f.get(lq, 0) + m
        return FactoredRational(self.num * o.num, f, self.wpow + o.wpow, self.content * o.content).cancel()

    __rmul__ = __mul__

    def __neg__(self):
        return _fr_raw(self.num, self.factors, self.wpow, -self.content)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.content:
            return self
        if not self.content:
            return o
        fa, fb = self._fdict(), o._fdict()
        keys = set(fa) | set(fb)
        common = {k: max(fa.get(k, 0), fb.get(k, 0)) for k in keys}
        wp = max(self.wpow, o.wpow)
        na = _lift(self.num, fa, common, wp - self.wpow)
        nb = _lift(o.num, fb, common, wp - o.wpow)
        num = na * self.content + nb * o.content
        return FactoredRational(num, common, wp, 1).cancel()

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

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / _as_fraction(other))
        return NotImplemented

    def div_h(self, l: int, q: int) -> "FactoredRational":
        """Divide by ``h(l, q)``."""
        if not self.content:
            return self
        if l == q:
            if l == 1:
                raise ZeroDivisionError("h(1,1) is identically zero")
            return self * Fraction(1, 1 - l * l)
        if q == 1:
            res = _fr_raw(self.num, self.factors, self.wpow + 1, self.content / (-(l * l - 1)))
            return res.cancel(only=[], check_w=True)
        lab = _canonical_label(l, q)
        ratio = Fraction(1 - q * q, 1 - lab[1] * lab[1])
        f = self._fdict()
        f[lab] = f.get(lab, 0) + 1
        res = _fr_raw(self.num, tuple(sorted(f.items())), self.wpow, self.content / ratio)
        return res.cancel(only=[lab], check_w=False)

    def mul_w(self, k: int = 1) -> "FactoredRational":
        if k < 0:
            raise ValueError("use div_w for negative powers")
        if not self.content or k == 0:
            return self
        take = min(k, self.wpow)
        num = self.num * ParamPoly.var("w", k - take) if k > take else self.num
        return _fr_raw(num, self.factors, self.wpow - take, self.content)

    def cancel(self, only=None, check_w: bool = True) -> "FactoredRational":
        """Remove every denominator factor that divides the numerator.

        ``only`` restricts the divisibility tests to the listed labels
        (``None`` means all, including ``w``).
        """
        if not self.content:
            return self
        num, content = self.num, self.content
        f = self._fdict()
        wp = self.wpow
        labels = list(f) if only is None else [lq for lq in only if lq in f]
        changed = False
        for lq in labels:
            c0, c1 = _hc(lq)
            while f.get(lq, 0) > 0:
                q, r = num.divmod_linear_w(c0, c1)
                if r:
                    break
                num = q
                f[lq] -= 1
                changed = True
        if check_w or only is None:
            while wp > 0 and num and all((k & _SLOT_MASK) for k in num._t):
                num = ParamPoly._raw({k - 1: v for k, v in num._t.items()}, num._d)
                wp -= 1
                changed = True
        if not changed:
            return self
        return FactoredRational(num, f, wp, content)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.factors, self.wpow, self.content))
        return self._hash

    # -- evaluation helpers ---------------------------------------------------
    def denominator_poly(self) -> ParamPoly:
        """Expanded denominator ``w**wpow * prod h**m`` (without ``content``)."""
        d = ParamPoly.var("w", self.wpow)
        for lq, m in self.factors:
            d = d * h_factor(*lq) ** m
        return d

    def numerator_poly(self) -> ParamPoly:
        return self.num * self.content

    def subs(self, bindings: dict) -> "FactoredRational":
        """Substitute numeric values (or polynomials) for g-symbols and cancel."""
        if "w" in bindings:
            raise ValueError("use eval_w for w")
        num = self.num.subs(bindings)
        return FactoredRational(num, self.factors, self.wpow, self.content).cancel()

    def text(self) -> str:
        if not self.content:
            return "0"
        den = []
        if self.wpow:
            den.append("w" if self.wpow == 1 else f"w^{self.wpow}")
        for (l, q), m in self.factors:
            den.append(f"h({l},{q})" if m == 1 else f"h({l},{q})^{m}")
        if self.num.is_constant():
            body = str(self.content * self.num.constant_term())
        elif self.content == 1:
            body = f"({self.num.text()})"
        elif self.content == -1:
            body = f"-({self.num.text()})"
        else:
            body = f"{self.content}*({self.num.text()})"
        if den:
            return f"{body} / ({'*'.join(den)})"
        return body

    __str__ = text

    def __repr__(self):
        return f"FactoredRational({self.text()!r})"


def _fr_raw(num, factors, wpow, content) -> FactoredRational:
    obj = FactoredRational.__new__(FactoredRational)
    obj._hash = None
    if not content:
        obj.num, obj.factors, obj.wpow, obj.content = ParamPoly(0), (), 0, Fraction(0)
        return obj
    obj.num = num
    obj.factors = tuple((lq, m) for lq, m in factors if m)
    obj.wpow = wpow
    obj.content = content
    return obj


_FR_ZERO = _fr_raw(ParamPoly(0), (), 0, Fraction(0))


def _lift(num: ParamPoly, have: dict, want: dict, wextra: int) -> ParamPoly:
    out = num
    for lq, m in want.items():
        k = m - have.get(lq, 0)
        if k:
            out = out * h_factor(*lq) ** k
    if wextra:
        out = out * ParamPoly.var("w", wextra)
    return out


def rf_cancel(x: FactoredRational) -> FactoredRational:
    """Cancel every tracked denominator factor dividing the numerator."""
    return x.cancel(only=None)


def _series_inv_linear(a: Fraction, b: Fraction, n: int) -> list[Fraction]:
    """Taylor coefficients of ``1/(a + b t)`` up to ``t**(n-1)``."""
    out = []
    c = 1 / a
    r = -b / a
    for _ in range(n):
        out.append(c)
        c *= r
    return out


def _series_mul(x: list, y: list, n: int) -> list:
    out = []
    for k in range(n):
        s = 0
        for i in range(k + 1):
            if i < len(x) and k - i < len(y):
                s = s + x[i] * y[k - i]
        out.append(s)
    return out


def laurent_principal(x: FactoredRational, w0) -> list[tuple[int, ParamPoly]]:
    """Principal part of ``x`` at ``w = w0``: ``[(k, c_k), ...]`` for the
    coefficients of ``(w - w0)**(-k)``, ``k`` from the pole order down to 1.
    Zero coefficients are kept.  Empty when there is no pole."""
    w0 = _as_fraction(w0)
    if not x.content:
        return []
    d = 0
    rest = []
    if w0 == 0:
        d = x.wpow
    elif x.wpow:
        rest.append((w0, Fraction(1), x.wpow))
    for lq, m in x.factors:
        c0, c1 = _hc(lq)
        if h_root(*lq) == w0:
            d += m
            lead_scale = Fraction(c1) ** m
            rest.append(("pole", lead_scale, m))
        else:
            rest.append((Fraction(c0) + Fraction(c1) * w0, Fraction(c1), m))
    if d == 0:
        return []
    # num(w0 + t) Taylor coefficients up to t**(d-1)
    parts = x.num.w_coefficients()
    ncoef = []
    from math import comb

    for j in range(d):
        acc = ParamPoly(0)
        for e, a in parts.items():
            if e >= j:
                acc = acc + a * (comb(e, j) * w0 ** (e - j))
        ncoef.append(acc)
    inv = [Fraction(1)] + [Fraction(0)] * (d - 1)
    scale = x.content
    for a, b, m in rest:
        if a == "pole":
            scale /= b
            continue
        if a == 0:
            raise PoleAtEvaluationPoint("w", w0)
        s = _series_inv_linear(a, b, d)
        for _ in range(m):
            inv = _series_mul(inv, s, d)
    coeffs = _series_mul(ncoef, inv, d)
    return [(d - j, (coeffs[j] * scale) if coeffs[j] else ParamPoly(0)) for j in range(d)]


def laurent_lead(x: FactoredRational, w0) -> tuple[int, ParamPoly]:
    """Pole order at ``w0`` and the leading Laurent coefficient.

    The order is the denominator multiplicity minus the vanishing order of
    the numerator.  The coefficient is returned primitive (integral, gcd 1,
    positive leading term).  Without a pole the order is ``<= 0`` and the
    coefficient is the value there (or ``0``).
    """
    principal = laurent_principal(x, w0)
    for k, c in principal:
        if c:
            return k, c.primitive()[1]
    # no pole: order is minus the vanishing order of the whole function
    d = len(principal)
    w0 = _as_fraction(w0)
    val_num = x.num.at_w(w0)
    if d == 0:
        if val_num:
            return 0, (val_num * x.content).primitive()[1]
        return -1, ParamPoly(0)
    return 0, ParamPoly(0)


def eval_w(x: FactoredRational, w0, bindings: dict | None = None) -> Fraction:
    """Exact value at ``w = w0`` with every g-symbol bound."""
    w0 = _as_fraction(w0)
    y = x.subs(bindings) if bindings else x.cancel()
    if not y.content:
        return Fraction(0)
    if y.num.variables() - {"w"}:
        raise ValueError(f"unbound symbols: {sorted(y.num.variables() - {'w'})}")
    if w0 == 0 and y.wpow:
        raise PoleAtEvaluationPoint("w", w0)
    den = Fraction(1)
    for lq, m in y.factors:
        c0, c1 = _hc(lq)
        v = c0 + c1 * w0
        if v == 0:
            raise PoleAtEvaluationPoint(f"h({lq[0]},{lq[1]})", w0)
        den *= Fraction(v) ** m
    den *= w0 ** y.wpow
    return y.content * y.num.at_w(w0).constant_term() / den


# ---------------------------------------------------------------------------
# Cosine harmonic polynomials
# ---------------------------------------------------------------------------

_HALF = Fraction(1, 2)


class HarmonicPoly:
    """``sum_q c_q cos(q tau)`` with ``q >= 0``; zero coefficients are dropped."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        items = coeffs.items() if isinstance(coeffs, dict) else (coeffs or ())
        c = {}
        for q, v in items:
            if q < 0:
                raise ValueError("harmonic index must be >= 0")
            if v:
                c[q] = v
        self._c = c

    @classmethod
    def cos(cls, q: int, coeff=Fraction(1)) -> "HarmonicPoly":
        return cls({q: coeff})

    def __bool__(self):
        return bool(self._c)

    def __getitem__(self, q):
        return self._c[q]

    def get(self, q, default=None):
        return self._c.get(q, default)

    def __contains__(self, q):
        return q in self._c

    def items(self):
        return sorted(self._c.items())

    def harmonics(self) -> list[int]:
        return sorted(self._c)

    def max_harmonic(self) -> int:
        return max(self._c) if self._c else -1

    def __add__(self, other):
        if not isinstance(other, HarmonicPoly):
            return NotImplemented
        out = dict(self._c)
        for q, v in other._c.items():
            out[q] = out[q] + v if q in out else v
        return HarmonicPoly(out)

    def __neg__(self):
        return HarmonicPoly({q: -v for q, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, HarmonicPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "HarmonicPoly":
        """Multiply every coefficient by the scalar ``c`` (on the right)."""
        return HarmonicPoly({q: v * c for q, v in self._c.items()})

    def map(self, fn) -> "HarmonicPoly":
        return HarmonicPoly({q: fn(q, v) for q, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, HarmonicPoly):
            return cos_mul(self, other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, HarmonicPoly):
            return NotImplemented
        keys = set(self._c) | set(other._c)
        for q in keys:
            a, b = self._c.get(q), other._c.get(q)
            if a is None or b is None:
                return False
            if a != b:
                return False
        return True

    def __repr__(self):
        body = " + ".join(f"({v})*cos({q}t)" for q, v in self.items())
        return f"HarmonicPoly({body or '0'})"


def cos_mul(a: HarmonicPoly, b: HarmonicPoly) -> HarmonicPoly:
    """Product in the cosine basis: ``cos(p)cos(q) = (cos(p+q) + cos(p-q))/2``."""
    out: dict = {}
    for p, x in a._c.items():
        for q, y in b._c.items():
            xy = x * y * _HALF
            for r in (p + q, abs(p - q)):
                out[r] = out[r] + xy if r in out else xy
    return HarmonicPoly(out)


def harmonic_pow(a: HarmonicPoly, m: int) -> HarmonicPoly:
    if not isinstance(m, int) or m < 1:
        raise ValueError("power must be an integer >= 1")
    out = a
    for _ in range(m - 1):
        out = cos_mul(out, a)
    return out


# ---------------------------------------------------------------------------
# Polynomials in the soliton profile S
# ---------------------------------------------------------------------------

class SechPoly:
    """``sum_p c_p S**p`` with rational ``c_p``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        items = coeffs.items() if isinstance(coeffs, dict) else (coeffs or ())
        c = {}
        for p, v in items:
            if p < 0:
                raise ValueError("power must be >= 0")
            v = _as_fraction(v)
            if v:
                c[p] = c.get(p, Fraction(0)) + v
        self._c = {p: v for p, v in c.items() if v}

    @classmethod
    def monomial(cls, p: int, c=1) -> "SechPoly":
        return cls({p: c})

    def __bool__(self):
        return bool(self._c)

    def coeff(self, p: int) -> Fraction:
        return self._c.get(p, Fraction(0))

    def items(self):
        return sorted(self._c.items())

    def powers(self) -> list[int]:
        return sorted(self._c)

    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def low_degree(self) -> int:
        return min(self._c) if self._c else -1

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SechPoly({0: other})
        if not isinstance(other, SechPoly):
            return NotImplemented
        out = dict(self._c)
        for p, v in other._c.items():
            out[p] = out.get(p, Fraction(0)) + v
        return SechPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SechPoly({p: -v for p, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SechPoly({p: v * other for p, v in self._c.items()})
        if not isinstance(other, SechPoly):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for p, x in self._c.items():
            for q, y in other._c.items():
                out[p + q] = out.get(p + q, Fraction(0)) + x * y
        return SechPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SechPoly({0: other})
        if not isinstance(other, SechPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __call__(self, s):
        """Evaluate at a numeric value of ``S``."""
        return sum(v * s**p for p, v in self._c.items())

    def text(self) -> str:
        if not self._c:
            return "0"
        pieces = []
        for p, v in sorted(self._c.items()):
            mono = "" if p == 0 else ("S" if p == 1 else f"S^{p}")
            mag = abs(v)
            body = (str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}"))
            if not pieces:
                pieces.append(body if v > 0 else f"-{body}")
            else:
                pieces.append(("+ " if v > 0 else "- ") + body)
        return " ".join(pieces)

    __str__ = text

    def __repr__(self):
        return f"SechPoly({self.text()!r})"
