"""Exact multivariate polynomial arithmetic with weighted gradings.

Coefficients are exact rationals (``fractions.Fraction``); degrees live in a
lexicographically ordered ``Z^r`` extended by a bottom element for the zero
polynomial.  Everything here is immutable by convention: operations return
fresh values and never mutate their inputs, so all types are safe to share
across threads.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence


# ---------------------------------------------------------------------------
# Degree values
# ---------------------------------------------------------------------------


@functools.total_ordering
class DegreeValue:
    """Element of lex-ordered Z^r, or Bottom (the degree of 0).

    Bottom compares below every vector and absorbs under addition.
    """

    __slots__ = ("vec",)

    def __init__(self, vec: Optional[Sequence[int]]):
        self.vec = None if vec is None else tuple(int(c) for c in vec)

    @staticmethod
    def bottom() -> "DegreeValue":
        return _BOTTOM

    @staticmethod
    def of(*components: int) -> "DegreeValue":
        return DegreeValue(components)

    @property
    def is_bottom(self) -> bool:
        return self.vec is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DegreeValue):
            return NotImplemented
        return self.vec == other.vec

    def __lt__(self, other: "DegreeValue") -> bool:
        if self.vec is None:
            return other.vec is not None
        if other.vec is None:
            return False
        if len(self.vec) != len(other.vec):
            raise ValueError("comparing degree vectors of different rank")
        return self.vec < other.vec

    def __hash__(self) -> int:
        return hash(self.vec)

    def __add__(self, other: "DegreeValue") -> "DegreeValue":
        if self.vec is None or other.vec is None:
            return _BOTTOM
        return DegreeValue(tuple(a + b for a, b in zip(self.vec, other.vec)))

    def __sub__(self, other: "DegreeValue") -> "DegreeValue":
        if self.vec is None or other.vec is None:
            return _BOTTOM
        return DegreeValue(tuple(a - b for a, b in zip(self.vec, other.vec)))

    def __rmul__(self, k: int) -> "DegreeValue":
        if self.vec is None:
            return _BOTTOM
        return DegreeValue(tuple(k * c for c in self.vec))

    def __neg__(self) -> "DegreeValue":
        return -1 * self

    @property
    def first(self) -> int:
        """First component; used for the lex-leading search cutoffs."""
        if self.vec is None:
            raise ValueError("Bottom has no components")
        return self.vec[0]

    def is_positive(self) -> bool:
        return self.vec is not None and any(self.vec) and self.vec > (0,) * len(self.vec)

    def to_json(self):
        return None if self.vec is None else list(self.vec)

    def __repr__(self) -> str:
        if self.vec is None:
            return "DegreeValue(bottom)"
        return f"DegreeValue{self.vec}"


_BOTTOM = DegreeValue(None)


ZERO = Fraction(0)
ONE = Fraction(1)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c)!r}")


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Sparse multivariate polynomial over Q.

    ``terms`` maps exponent tuples of length ``n`` to nonzero Fractions; the
    zero polynomial is the empty map.  Construction normalizes, so equal
    polynomials have identical term maps (canonical form).
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[dict] = None):
        self.n = n
        clean: dict = {}
        if terms:
            for mono, coeff in terms.items():
                c = _as_fraction(coeff)
                if c == 0:
                    continue
                if len(mono) != n:
                    raise ValueError(f"monomial {mono} has arity {len(mono)}, expected {n}")
                clean[tuple(int(e) for e in mono)] = c
        self.terms = clean

    # -- constructors --

    @staticmethod
    def zero(n: int) -> "Poly":
        return Poly(n)

    @staticmethod
    def constant(c, n: int) -> "Poly":
        return Poly(n, {(0,) * n: _as_fraction(c)})

    @staticmethod
    def variable(i: int, n: int) -> "Poly":
        """The variable x_{i+1} (0-based index i)."""
        if not 0 <= i < n:
            raise ValueError(f"variable index {i} out of range for {n} variables")
        mono = tuple(1 if j == i else 0 for j in range(n))
        return Poly(n, {mono: ONE})

    # -- predicates --

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.n, ZERO)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- ring operations --

    def _check_arity(self, other: "Poly") -> None:
        if self.n != other.n:
            raise ValueError(f"arity mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check_arity(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, ZERO) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        out = Poly.__new__(Poly)
        out.n = self.n
        out.terms = terms
        return out

    def __neg__(self) -> "Poly":
        out = Poly.__new__(Poly)
        out.n = self.n
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check_arity(other)
        # Clear denominators once so the inner loop runs on native ints.
        da = 1
        for c in self.terms.values():
            da = da * c.denominator // math.gcd(da, c.denominator)
        db = 1
        for c in other.terms.values():
            db = db * c.denominator // math.gcd(db, c.denominator)
        A = [(m, int(c * da)) for m, c in self.terms.items()]
        B = [(m, int(c * db)) for m, c in other.terms.items()]
        acc: dict = {}
        if self.n == 3:
            for (a0, a1, a2), c1 in A:
                for (b0, b1, b2), c2 in B:
                    m = (a0 + b0, a1 + b1, a2 + b2)
                    v = acc.get(m)
                    acc[m] = c1 * c2 if v is None else v + c1 * c2
        else:
            for m1, c1 in A:
                for m2, c2 in B:
                    m = tuple(a + b for a, b in zip(m1, m2))
                    v = acc.get(m)
                    acc[m] = c1 * c2 if v is None else v + c1 * c2
        den = da * db
        if den == 1:
            terms = {m: Fraction(v) for m, v in acc.items() if v}
        else:
            terms = {m: Fraction(v, den) for m, v in acc.items() if v}
        out = Poly.__new__(Poly)
        out.n = self.n
        out.terms = terms
        return out

    def scale(self, c) -> "Poly":
        c = _as_fraction(c)
        if c == 0:
            return Poly.zero(self.n)
        out = Poly.__new__(Poly)
        out.n = self.n
        out.terms = {m: c * v for m, v in self.terms.items()}
        return out

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(1, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def diff(self, i: int) -> "Poly":
        """Partial derivative in x_{i+1}, exact integer scaling per term."""
        terms: dict = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            dm = tuple(v - 1 if j == i else v for j, v in enumerate(m))
            terms[dm] = terms.get(dm, ZERO) + c * e
        return Poly(self.n, terms)

    def compose(self, subs: Sequence["Poly"]) -> "Poly":
        """Substitute subs[i] for x_{i+1}; exact full expansion.

        Powers of each substituted polynomial are cached across terms.
        """
        if len(subs) != self.n:
            raise ValueError(f"expected {self.n} substitutions, got {len(subs)}")
        m = subs[0].n if subs else self.n
        for s in subs:
            if s.n != m:
                raise ValueError("substitution polynomials must share arity")
        power_cache: list[dict[int, Poly]] = [dict() for _ in range(self.n)]

        def power(i: int, e: int) -> Poly:
            cache = power_cache[i]
            if e not in cache:
                if e == 0:
                    cache[e] = Poly.constant(1, m)
                elif e == 1:
                    cache[e] = subs[i]
                else:
                    cache[e] = power(i, e - 1) * subs[i]
            return cache[e]

        acc = Poly.zero(m)
        for mono, coeff in sorted(self.terms.items()):
            prod = Poly.constant(coeff, m)
            for i, e in enumerate(mono):
                if e:
                    prod = prod * power(i, e)
            acc = acc + prod
        return acc

    def monomials(self) -> Iterator[tuple]:
        return iter(sorted(self.terms, reverse=True))

    def total_degree(self) -> int:
        """Max exponent sum; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def __repr__(self) -> str:
        return f"Poly({poly_to_text(self)!r})"


# ---------------------------------------------------------------------------
# Weight systems and weighted degrees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightSystem:
    """n strictly positive weight vectors in lex-ordered Z^r."""

    weights: tuple

    def __post_init__(self):
        ws = tuple(tuple(int(c) for c in w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if not ws:
            raise ValueError("empty weight system")
        r = len(ws[0])
        for w in ws:
            if len(w) != r:
                raise ValueError("weight vectors must share rank")
            if not w > (0,) * r:
                raise ValueError(f"weight {w} is not lex-positive")
        object.__setattr__(self, "_deg_cache", {})
        object.__setattr__(self, "_is_total", all(w == (1,) for w in ws))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def r(self) -> int:
        return len(self.weights[0])

    @property
    def total(self) -> DegreeValue:
        """Sum of the variable weights: the degree floor for automorphisms."""
        acc = [0] * self.r
        for w in self.weights:
            for k, c in enumerate(w):
                acc[k] += c
        return DegreeValue(acc)

    def rank(self) -> int:
        """Rank of the integer lattice spanned by the weight vectors."""
        return _int_matrix_rank([list(w) for w in self.weights])

    def monomial_degree(self, mono: Sequence[int]) -> DegreeValue:
        if len(mono) != self.n:
            raise ValueError(f"monomial arity {len(mono)} != weight count {self.n}")
        cache = self._deg_cache
        mono = tuple(mono)
        hit = cache.get(mono)
        if hit is not None:
            return hit
        if self._is_total:
            d = DegreeValue((sum(mono),))
        else:
            acc = [0] * self.r
            for e, w in zip(mono, self.weights):
                if e:
                    for k, c in enumerate(w):
                        acc[k] += e * c
            d = DegreeValue(acc)
        if len(cache) < 200_000:
            cache[mono] = d
        return d

    def deg(self, f: Poly) -> DegreeValue:
        """Weighted degree of f; Bottom iff f = 0."""
        if f.is_zero:
            return _BOTTOM
        best: Optional[DegreeValue] = None
        for m in f.terms:
            d = self.monomial_degree(m)
            if best is None or d > best:
                best = d
        return best

    def leading_form(self, f: Poly) -> Poly:
        """Sum of the terms of top weighted degree; rejects f = 0."""
        if f.is_zero:
            raise ValueError("the zero polynomial has no leading form")
        d = self.deg(f)
        return Poly(f.n, {m: c for m, c in f.terms.items() if self.monomial_degree(m) == d})

    def is_homogeneous(self, f: Poly) -> bool:
        if f.is_zero:
            return True
        degs = {self.monomial_degree(m) for m in f.terms}
        return len(degs) == 1

    def deg_endo(self, components: Sequence[Poly]) -> DegreeValue:
        acc = DegreeValue((0,) * self.r)
        for f in components:
            acc = acc + self.deg(f)
        return acc

    def describe(self) -> dict:
        return {"r": self.r, "vectors": [list(w) for w in self.weights]}


def total_weight(n: int) -> WeightSystem:
    """w = (1,...,1) on Z: weighted degree equals total degree."""
    return WeightSystem(tuple((1,) for _ in range(n)))


def lex_weight(n: int) -> WeightSystem:
    """w = (e_1,...,e_n) on lex Z^n (maximal rank)."""
    return WeightSystem(tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n)))


def _int_matrix_rank(rows: list[list[int]]) -> int:
    """Rank over Q via fraction-free Gaussian elimination."""
    mat = [list(r) for r in rows]
    rank = 0
    col = 0
    ncols = len(mat[0]) if mat else 0
    while rank < len(mat) and col < ncols:
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for i in range(rank + 1, len(mat)):
            if mat[i][col]:
                a, b = mat[rank][col], mat[i][col]
                mat[i] = [a * x - b * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# Integer-lattice helpers on degree values
# ---------------------------------------------------------------------------


def z_independent(d1: DegreeValue, d2: DegreeValue) -> bool:
    """True iff no nonzero integer pair (m1, m2) has m1*d1 == m2*d2.

    Decided by 2x2 minors: the vectors are dependent over Z exactly when
    they are parallel over Q (or one is zero).
    """
    if d1.is_bottom or d2.is_bottom:
        raise ValueError("z_independent requires vector degrees")
    a, b = d1.vec, d2.vec
    if not any(a) or not any(b):
        return False
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] * b[j] - a[j] * b[i]:
                return True
    return False


def _primitive_direction(vec: tuple) -> tuple:
    g = 0
    for c in vec:
        g = math.gcd(g, abs(c))
    prim = tuple(c // g for c in vec)
    if prim < (0,) * len(prim):
        prim = tuple(-c for c in prim)
    return prim


def _parallel_multiplier(vec: tuple, direction: tuple) -> Optional[int]:
    """Integer m with vec == m * direction, if one exists."""
    for v, d in zip(vec, direction):
        if d:
            if v % d:
                return None
            m = v // d
            break
    else:
        return 0 if not any(vec) else None
    if all(v == m * d for v, d in zip(vec, direction)):
        return m
    return None


def semigroup_member(
    d: DegreeValue, d1: DegreeValue, d2: DegreeValue
) -> Optional[tuple[int, int]]:
    """Some (p, q) >= 0 with p*d1 + q*d2 == d, else None.

    Solved exactly: a 2x2 linear system when d1, d2 span a plane, and a
    one-dimensional coin problem (smallest p wins) when they are parallel.
    """
    if d.is_bottom or d1.is_bottom or d2.is_bottom:
        raise ValueError("semigroup_member requires vector degrees")
    if not (d1.is_positive() and d2.is_positive()):
        raise ValueError("generators must be positive")
    a, b, t = d1.vec, d2.vec, d.vec
    r = len(t)
    # Independent case: at most one rational solution.
    for i in range(r):
        for j in range(i + 1, r):
            det = a[i] * b[j] - a[j] * b[i]
            if det:
                p_num = t[i] * b[j] - t[j] * b[i]
                q_num = a[i] * t[j] - a[j] * t[i]
                if p_num % det or q_num % det:
                    return None
                p, q = p_num // det, q_num // det
                if p < 0 or q < 0:
                    return None
                if all(p * a[k] + q * b[k] == t[k] for k in range(r)):
                    return (p, q)
                return None
    # Parallel case: reduce along the common primitive direction.
    e = _primitive_direction(a)
    ma = _parallel_multiplier(a, e)
    mb = _parallel_multiplier(b, e)
    mt = _parallel_multiplier(t, e)
    if mb is None or mt is None or ma is None:
        return None
    if ma <= 0 or mb <= 0 or mt < 0:
        return None
    for p in range(mt // ma + 1):
        rem = mt - p * ma
        if rem % mb == 0:
            return (p, rem // mb)
    return None


def all_semigroup_pairs(
    d: DegreeValue, d1: DegreeValue, d2: DegreeValue, guard: int = 4000
) -> list[tuple[int, int]]:
    """Every (p, q) >= 0 with p*d1 + q*d2 == d (finite for positive d1, d2)."""
    if d.is_bottom or d1.is_bottom or d2.is_bottom:
        raise ValueError("requires vector degrees")
    a, b, t = d1.vec, d2.vec, d.vec
    r = len(t)
    for i in range(r):
        for j in range(i + 1, r):
            if a[i] * b[j] - a[j] * b[i]:
                sol = semigroup_member(d, d1, d2)
                return [sol] if sol else []
    e = _primitive_direction(a)
    ma = _parallel_multiplier(a, e)
    mb = _parallel_multiplier(b, e)
    mt = _parallel_multiplier(t, e)
    if mb is None or mt is None or ma is None or ma <= 0 or mb <= 0 or mt < 0:
        return []
    if mt // ma > guard:
        raise ValueError(f"semigroup enumeration exceeds guard ({mt // ma} > {guard})")
    return [(p, (mt - p * ma) // mb) for p in range(mt // ma + 1) if (mt - p * ma) % mb == 0]


def half(d: DegreeValue) -> Optional[DegreeValue]:
    """d/2 when every component is even, else None; no rational degrees."""
    if d.is_bottom:
        raise ValueError("half requires a vector degree")
    if any(c % 2 for c in d.vec):
        return None
    return DegreeValue(tuple(c // 2 for c in d.vec))


def exists_multiple_exceeding(base: DegreeValue, bound: DegreeValue) -> bool:
    """Whether l*base > bound for some positive integer l (base lex-positive)."""
    if base.is_bottom or bound.is_bottom:
        raise ValueError("requires vector degrees")
    if not base.is_positive():
        raise ValueError("base must be positive")
    a = next(i for i, c in enumerate(base.vec) if c)
    for k in range(a):
        if bound.vec[k]:
            return bound.vec[k] < 0
    return True  # l*base[a] eventually exceeds bound[a]


@dataclass(frozen=True)
class ScaledPair:
    """Coprime positive (p, q) witnessing a power-proportionality of forms."""

    p: int
    q: int

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0 or math.gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.p}, {self.q}) is not a coprime positive pair")


# ---------------------------------------------------------------------------
# Text grammar: parsing and canonical printing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<var>x\d+)|(?P<op>[\^*+-]))"
)


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def parse_poly(text: str, n: int) -> Poly:
    """Parse the flat polynomial grammar: terms of rationals and x-powers.

    Terms are joined by ``+``/``-``; a term is an optional rational
    coefficient and ``*``-separated powers ``xk^e`` (the ``*`` between the
    coefficient and the first power may be omitted).  Whitespace is
    insignificant.
    """
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
        pos = m.end()
        for kind in ("number", "var", "op"):
            val = m.group(kind)
            if val is not None:
                tokens.append((kind, val, m.start()))
                break
    if not tokens:
        raise PolyParseError("empty polynomial", 0)

    result = Poly.zero(n)
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
            first = False
        if i >= len(tokens):
            raise PolyParseError("dangling sign", tokens[-1][2])
        if not first and sign == 1 and tokens[i - 1][1] not in "+-":
            raise PolyParseError("missing operator between terms", tokens[i][2])
        coeff = Fraction(sign)
        mono = [0] * n
        saw_factor = False
        expect_factor = True
        while i < len(tokens):
            kind, val, at = tokens[i]
            if kind == "number" and expect_factor:
                coeff *= Fraction(val)
                saw_factor = True
                expect_factor = False
                i += 1
            elif kind == "var" and expect_factor:
                idx = int(val[1:]) - 1
                if not 0 <= idx < n:
                    raise PolyParseError(f"variable {val} out of range (n={n})", at)
                exp = 1
                i += 1
                if i < len(tokens) and tokens[i] == ("op", "^", tokens[i][2]):
                    i += 1
                    if i >= len(tokens) or tokens[i][0] != "number" or "/" in tokens[i][1]:
                        raise PolyParseError("expected integer exponent after ^", at)
                    exp = int(tokens[i][1])
                    i += 1
                mono[idx] += exp
                saw_factor = True
                expect_factor = False
            elif kind == "op" and val == "*" and not expect_factor:
                expect_factor = True
                i += 1
            elif kind == "var" and not expect_factor:
                # juxtaposition after a coefficient: allow "2x1" style input
                expect_factor = True
            else:
                break
        if not saw_factor:
            raise PolyParseError("empty term", tokens[i][2] if i < len(tokens) else len(text))
        if expect_factor and saw_factor and i < len(tokens):
            raise PolyParseError("dangling '*'", tokens[i][2])
        result = result + Poly(n, {tuple(mono): coeff})
        first = False
    return result


def _format_coeff(c: Fraction) -> str:
    return str(c)


def poly_to_text(f: Poly) -> str:
    """Canonical printer: terms in descending lex monomial order."""
    if f.is_zero:
        return "0"
    parts: list[str] = []
    for mono in sorted(f.terms, reverse=True):
        c = f.terms[mono]
        powers = []
        for i, e in enumerate(mono):
            if e == 1:
                powers.append(f"x{i + 1}")
            elif e > 1:
                powers.append(f"x{i + 1}^{e}")
        mag = abs(c)
        if not powers:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(powers)
        else:
            body = "*".join([_format_coeff(mag)] + powers)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Exact linear algebra over Q (used by the membership searches)
# ---------------------------------------------------------------------------


def solve_sparse_int(rows, ncols: int) -> Optional[list[Fraction]]:
    """Exact solve of a sparse system; free unknowns get 0.

    ``rows`` is an iterable of ``(coeffs, rhs)`` with ``coeffs`` a dict
    mapping unknown index to a nonzero int (or Fraction).  Deterministic:
    rows are processed in the given order and pivots are the smallest
    unknown index.  Pivot rows are normalized to leading coefficient one,
    which keeps rational entry sizes close to the answer's own complexity.
    """
    pivots: dict[int, tuple[dict, Fraction]] = {}
    for coeffs, rhs in rows:
        row = dict(coeffs)
        rhs = Fraction(rhs)
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                break
            prow, prhs = piv
            factor = row.pop(lead)
            for k, v in prow.items():
                if k == lead:
                    continue
                nv = row.get(k, 0) - factor * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            if prhs:
                rhs = rhs - factor * prhs
        if row:
            lead = min(row)
            inv = row[lead]
            if inv != 1:
                row = {k: Fraction(v) / inv for k, v in row.items()}
                rhs = rhs / inv
            pivots[lead] = (row, rhs)
        elif rhs:
            return None
    x = [ZERO] * ncols
    for lead in sorted(pivots, reverse=True):
        prow, prhs = pivots[lead]
        acc = prhs
        for k, v in prow.items():
            if k != lead and x[k]:
                acc -= v * x[k]
        x[lead] = acc
    return x


def solve_linear(rows: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """One exact solution of A x = b (free variables set to 0), or None.

    Deterministic: Gaussian elimination with first-nonzero pivoting in the
    given row/column order.
    """
    m = len(rows)
    if m == 0:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [v - factor * w for v, w in zip(aug[i], aug[row])]
        pivots.append((row, col))
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if aug[i][ncols] != 0:
            return None
    x = [ZERO] * ncols
    for prow, pcol in pivots:
        x[pcol] = aug[prow][ncols]
    return x


def poly_sqrt(p: Poly) -> Optional[Poly]:
    """Exact square root of p, or None.  Leading coefficient must be a
    rational square; works term-by-term from the lex-leading monomial."""
    if p.is_zero:
        return Poly.zero(p.n)
    lead = max(p.terms)
    if any(e % 2 for e in lead):
        return None
    c = p.terms[lead]
    if c < 0:
        return None
    num, den = c.numerator, c.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    u = Poly(p.n, {tuple(e // 2 for e in lead): Fraction(rn, rd)})
    lead_term = Poly(p.n, {tuple(e // 2 for e in lead): Fraction(rn, rd)})
    # Peel: each step determines the next-highest term of the root.
    for _ in range(2 * len(p.terms) + 2):
        r = p - u * u
        if r.is_zero:
            return u
        mr = max(r.terms)
        # next term t satisfies 2*lead_term*t = leading of r
        half_mono = tuple(a - b for a, b in zip(mr, max(lead_term.terms)))
        if any(e < 0 for e in half_mono):
            return None
        t = Poly(p.n, {half_mono: r.terms[mr] / (2 * lead_term.terms[max(lead_term.terms)])})
        if max(t.terms) >= max(u.terms):
            return None
        u = u + t
    return None


def sqrt_up_to_scalar(p: Poly) -> Optional[tuple[Fraction, Poly]]:
    """(c, u) with p = c * u^2 and u having leading coefficient 1, or None."""
    if p.is_zero:
        return (ZERO, Poly.zero(p.n))
    lead = max(p.terms)
    c = p.terms[lead]
    u = poly_sqrt(p.scale(1 / c))
    if u is None:
        return None
    return (c, u)


def proportionality(h1: Poly, h2: Poly) -> Optional[Fraction]:
    """Scalar t with h1 == t*h2, or None.  Zero inputs rejected."""
    if h1.is_zero or h2.is_zero:
        raise ValueError("proportionality requires nonzero polynomials")
    if set(h1.terms) != set(h2.terms):
        return None
    items = iter(h1.terms.items())
    m0, c0 = next(items)
    t = c0 / h2.terms[m0]
    for m, c in items:
        if c != t * h2.terms[m]:
            return None
    return t
