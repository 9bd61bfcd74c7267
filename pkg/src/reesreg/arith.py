"""Prime-field scalars, weighted polynomial rings and monomial orders.

Polynomials are sparse maps from exponent tuples to residues mod p.  Every
variable carries a bidegree (x-weight, t-degree); the total of the two is the
positive "sugar" degree used by the Groebner engine.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

DEFAULT_PRIME = 32003

NEG_INF = float("-inf")


class RingMismatch(ValueError):
    pass


class ParseError(ValueError):
    """Raised by the polynomial parser; carries the offending column."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at column {pos + 1}: {text!r}")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldScalar:
    """An element of GF(p)."""

    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.p != self.p:
                raise RingMismatch("scalars over different primes")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FieldScalar(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldScalar(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldScalar(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldScalar(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(-self.value, self.p)

    def inverse(self) -> "FieldScalar":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in GF(p)")
        return FieldScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldScalar(self._coerce(other), self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value


def symmetric(c: int, p: int) -> int:
    """Representative of c mod p in (-p/2, p/2], used for printing."""
    c %= p
    return c - p if c > p // 2 else c


# ---------------------------------------------------------------- monomials

def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(i + j for i, j in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    """True if the monomial a divides b."""
    return all(i <= j for i, j in zip(a, b))


def mono_div(b: tuple, a: tuple) -> tuple:
    return tuple(j - i for i, j in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(i, j) for i, j in zip(a, b))


def mono_gcd(a: tuple, b: tuple) -> tuple:
    return tuple(min(i, j) for i, j in zip(a, b))


# ---------------------------------------------------------------- rings

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class PolyRing:
    """Polynomial ring over GF(char) with bigraded variables.

    ``xweights[i]`` and ``tdegs[i]`` give the bidegree of variable i.
    """

    names: tuple
    xweights: tuple
    tdegs: tuple
    char: int = DEFAULT_PRIME

    def __post_init__(self):
        if not (len(self.names) == len(self.xweights) == len(self.tdegs)):
            raise ValueError("names, weights and t-degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        for n in self.names:
            if not _NAME.fullmatch(n):
                raise ValueError(f"malformed variable name {n!r}")
        if any(w < 0 for w in self.xweights) or any(t < 0 for t in self.tdegs):
            raise ValueError("variable degrees must be nonnegative")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def total_weights(self) -> tuple:
        return tuple(w + t for w, t in zip(self.xweights, self.tdegs))

    def bidegree(self, exps: tuple) -> tuple:
        return (sum(w * e for w, e in zip(self.xweights, exps)),
                sum(t * e for t, e in zip(self.tdegs, exps)))

    def zero_exps(self) -> tuple:
        return (0,) * self.nvars

    # constructors
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.zero_exps(): 1})

    def const(self, c: int) -> "Polynomial":
        return Polynomial(self, {self.zero_exps(): c})

    def gen(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list:
        return [self.gen(n) for n in self.names]

    def monomial(self, exps: tuple, c: int = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): c})

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def extend(self, names, xweights, tdegs) -> "PolyRing":
        """A ring with extra variables appended after the current ones."""
        return PolyRing(self.names + tuple(names), self.xweights + tuple(xweights),
                        self.tdegs + tuple(tdegs), self.char)

    def embed(self, f: "Polynomial") -> "Polynomial":
        """Map f from a ring whose variables are a subset of ours (by name)."""
        if f.ring == self:
            return f
        pos = [self.index(n) for n in f.ring.names]
        out = {}
        z = [0] * self.nvars
        for e, c in f.terms.items():
            v = list(z)
            for i, k in zip(pos, e):
                v[i] = k
            out[tuple(v)] = c
        return Polynomial(self, out)

    def restrict(self, f: "Polynomial") -> "Polynomial":
        """Map f into this ring; f may only involve variables we have."""
        idx = {n: i for i, n in enumerate(self.names)}
        out = {}
        for e, c in f.terms.items():
            v = [0] * self.nvars
            for n, k in zip(f.ring.names, e):
                if k:
                    if n not in idx:
                        raise RingMismatch(f"variable {n} not in target ring")
                    v[idx[n]] = k
            out[tuple(v)] = c
        return Polynomial(self, out)


def _normalize(terms: Mapping, p: int) -> dict:
    out = {}
    for e, c in terms.items():
        c %= p
        if c:
            out[e] = c
    return out


class Polynomial:
    """Immutable sparse polynomial: ``terms`` maps exponent tuples to residues."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping, normalized: bool = False):
        self.ring = ring
        self.terms = dict(terms) if normalized else _normalize(terms, ring.char)

    # basic protocol
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other) -> "Polynomial":
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, Polynomial):
            raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatch("polynomials over different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Polynomial(self.ring, add_terms(self.terms, other.terms, 1, self.ring.char), True)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Polynomial(self.ring, add_terms(self.terms, other.terms, -1, self.ring.char), True)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        p = self.ring.char
        return Polynomial(self.ring, {e: (-c) % p for e, c in self.terms.items()}, True)

    def __mul__(self, other):
        other = self._check(other)
        return Polynomial(self.ring, mul_terms(self.terms, other.terms, self.ring.char), True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.char
        return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()})

    def monomials(self) -> list:
        return list(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(self.ring.zero_exps(), 0)

    def bidegrees(self) -> set:
        return {self.ring.bidegree(e) for e in self.terms}

    def sorted_terms(self, order: "MonomialOrder | None" = None) -> list:
        order = order or MonomialOrder.degrevlex(self.ring)
        return sorted(self.terms.items(), key=lambda kv: order.key(kv[0]), reverse=True)

    def leading_monomial(self, order: "MonomialOrder | None" = None) -> tuple:
        order = order or MonomialOrder.degrevlex(self.ring)
        return max(self.terms, key=order.key)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_poly(self)


def add_terms(a: Mapping, b: Mapping, sign: int, p: int) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = (out.get(e, 0) + sign * c) % p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def mul_terms(a: Mapping, b: Mapping, p: int) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(i + j for i, j in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.ring != b.ring:
        raise RingMismatch("polynomials over different rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def weighted_degree(f: Polynomial, grading: str = "x-weight"):
    """Common degree of all terms of f, or the string "non-homogeneous"."""
    if f.is_zero():
        raise ValueError("degree of the zero polynomial")
    if grading in ("x", "x-weight"):
        w = f.ring.xweights
    elif grading in ("t", "t-degree"):
        w = f.ring.tdegs
    elif grading == "total":
        w = f.ring.total_weights()
    else:
        raise ValueError(f"unknown grading {grading!r}")
    degs = {sum(a * b for a, b in zip(w, e)) for e in f.terms}
    if len(degs) != 1:
        return "non-homogeneous"
    return degs.pop()


def is_bihomogeneous(f: Polynomial) -> bool:
    return f.is_zero() or len(f.bidegrees()) == 1


def format_poly(f: Polynomial, order: "MonomialOrder | None" = None) -> str:
    if f.is_zero():
        return "0"
    p = f.ring.char
    parts = []
    for e, c in f.sorted_terms(order):
        c = symmetric(c, p)
        factors = []
        for n, k in zip(f.ring.names, e):
            if k == 1:
                factors.append(n)
            elif k > 1:
                factors.append(f"{n}^{k}")
        mono = "*".join(factors)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((sign, body))
    s = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


class _Parser:
    """Recursive descent: expr := term (('+'|'-') term)*, term := factor ('*' factor)*,
    factor := unary ('^' int)?, unary := '-' unary | atom."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError("unexpected character", text, pos)
            start = m.start(m.lastindex)
            kind = ("num", "name", "op")[m.lastindex - 1]
            val = m.group(m.lastindex)
            if val == "**":
                val = "^"
            self.toks.append((kind, val, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> Polynomial:
        if not self.toks:
            raise ParseError("empty polynomial", self.text, 0)
        f = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", self.text, pos)
        return f

    def expr(self) -> Polynomial:
        f = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> Polynomial:
        f = self.factor()
        while self.peek()[1] == "*":
            self.take()
            f = f * self.factor()
        return f

    def factor(self) -> Polynomial:
        f = self.unary()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", self.text, pos)
            f = f ** int(val)
        return f

    def unary(self) -> Polynomial:
        kind, val, pos = self.peek()
        if val == "-":
            self.take()
            return -self.unary()
        if val == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.const(int(val))
        if kind == "name":
            if val not in self.ring.names:
                raise ParseError(f"undeclared variable {val!r}", self.text, pos)
            return self.ring.gen(val)
        if val == "(":
            f = self.expr()
            kind2, val2, pos2 = self.take()
            if val2 != ")":
                raise ParseError("expected ')'", self.text, pos2)
            return f
        raise ParseError(f"unexpected {val!r}" if val else "unexpected end of input",
                         self.text, pos)


# ---------------------------------------------------------------- orders

@dataclass(frozen=True)
class MonomialOrder:
    """Term order given by a sort key; larger key means larger monomial.

    ``kind`` is one of "degrevlex", "lex", "elimination"; ``block`` lists the
    eliminated variable indices for elimination orders.  Degrees use the
    ring's total weights (x-weight + t-degree), which are positive.
    """

    kind: str
    weights: tuple
    block: tuple = ()
    key: Callable = field(compare=False, hash=False, repr=False, default=None)

    @staticmethod
    def degrevlex(ring: PolyRing, weights: tuple | None = None) -> "MonomialOrder":
        w = tuple(weights or ring.total_weights())
        if any(x <= 0 for x in w):
            raise ValueError("degrevlex needs positive weights")
        n = len(w)

        def key(e, w=w, n=n):
            return (sum(a * b for a, b in zip(w, e)),) + tuple(-e[i] for i in range(n - 1, -1, -1))

        return MonomialOrder("degrevlex", w, (), key)

    @staticmethod
    def lex(ring: PolyRing) -> "MonomialOrder":
        return MonomialOrder("lex", (1,) * ring.nvars, (), lambda e: e)

    @staticmethod
    def elimination(ring: PolyRing, block: Iterable[int], weights: tuple | None = None) -> "MonomialOrder":
        """Block order: first the block degree, then weighted degrevlex.

        Variables of weight 0 are allowed inside the block.
        """
        block = tuple(sorted(block))
        w = list(weights or ring.total_weights())
        for i in block:
            if w[i] <= 0:
                w[i] = 0
        if any(w[i] <= 0 for i in range(len(w)) if i not in block):
            raise ValueError("non-block variables need positive weights")
        w = tuple(w)
        n = len(w)
        bset = block

        def key(e, w=w, n=n, bset=bset):
            return ((sum(e[i] for i in bset), sum(a * b for a, b in zip(w, e)))
                    + tuple(-e[i] for i in range(n - 1, -1, -1)))

        return MonomialOrder("elimination", w, block, key)


# ---------------------------------------------------------------- base rings

@dataclass(frozen=True)
class RingDescriptor:
    """The weighted graded ring A = k[x]/Q, local at (x), plus optional y/t blocks.

    y-variables carry t-degree 1 and an x-weight (the weight of the element
    they stand for), t carries t-degree 1 and x-weight 0.
    """

    x_vars: tuple
    x_weights: tuple
    y_vars: tuple = ()
    y_weights: tuple = ()
    has_t: bool = False
    char: int = DEFAULT_PRIME
    quotient_gens: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "x_vars", tuple(self.x_vars))
        object.__setattr__(self, "x_weights", tuple(self.x_weights))
        object.__setattr__(self, "y_vars", tuple(self.y_vars))
        yw = tuple(self.y_weights) if self.y_weights else (0,) * len(self.y_vars)
        object.__setattr__(self, "y_weights", yw)
        if len(self.x_vars) != len(self.x_weights):
            raise ValueError("one weight per x-variable is required")
        if any(w <= 0 for w in self.x_weights):
            raise ValueError("x-weights must be positive integers")
        if len(yw) != len(self.y_vars):
            raise ValueError("one x-weight per y-variable is required")
        if not is_prime(self.char):
            raise ValueError(f"characteristic {self.char} is not prime")
        q = []
        for f in self.quotient_gens:
            if isinstance(f, str):
                f = self.base.parse(f)
            if f.ring != self.base:
                f = self.base.restrict(f)
            if not f.is_zero() and weighted_degree(f, "x-weight") == "non-homogeneous":
                raise ValueError(f"quotient generator {f} is not weighted-homogeneous")
            if not f.is_zero():
                q.append(f)
        object.__setattr__(self, "quotient_gens", tuple(q))

    @property
    def base(self) -> PolyRing:
        return PolyRing(self.x_vars, self.x_weights, (0,) * len(self.x_vars), self.char)

    @property
    def ring(self) -> PolyRing:
        names = self.x_vars + self.y_vars + (("t",) if self.has_t else ())
        xw = self.x_weights + self.y_weights + ((0,) if self.has_t else ())
        td = (0,) * len(self.x_vars) + (1,) * len(self.y_vars) + ((1,) if self.has_t else ())
        return PolyRing(names, xw, td, self.char)

    def with_quotient(self, extra) -> "RingDescriptor":
        return RingDescriptor(self.x_vars, self.x_weights, self.y_vars, self.y_weights,
                              self.has_t, self.char, tuple(self.quotient_gens) + tuple(extra))

    def parse(self, text: str) -> Polynomial:
        return self.base.parse(text)

    def is_unit(self, f: Polynomial) -> bool:
        """Units of the graded-local ring: nonzero constant term."""
        return f.constant_term() != 0
