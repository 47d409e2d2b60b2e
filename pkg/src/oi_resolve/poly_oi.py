"""Monomials of ``A(w) = k[x_{i,j} : 1 <= i <= d, 1 <= j <= w]``.

The OI-algebra has ``d`` rows of width-1 variables; a morphism acts on the
column index only.  With ``d = 1`` this is ``k[x_1, ..., x_w]`` and
monomials print as ``x1*x3``; otherwise they print as ``x1_1*x2_3``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

from .oi_core import OIMorphism, WidthMismatchError, check_width

MAX_INCLUSION_EXCLUSION_GENS = 20

Scalar = int | Fraction


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class AlgebraSignature:
    """Number of variable rows ``d`` and the prime used for homology."""

    rows: int = 1
    base_field_prime: int = 2

    def __post_init__(self) -> None:
        if self.rows < 1:
            raise ValueError("an algebra needs at least one row of variables")
        if not is_prime(self.base_field_prime) or self.base_field_prime > 2**31:
            raise ValueError(f"{self.base_field_prime} is not a usable prime")

    def n_variables(self, w: int) -> int:
        return self.rows * w

    def to_json(self) -> dict:
        return {"rows": self.rows, "prime": self.base_field_prime}

    @classmethod
    def from_json(cls, obj: Mapping) -> "AlgebraSignature":
        return cls(int(obj.get("rows", 1)), int(obj.get("prime", 2)))


@dataclass(frozen=True, order=True)
class Monomial:
    """A monomial stored as sorted ``(row, col, exponent)`` triples.

    Equality and hashing are structural.  The ordering compares the triples
    lexicographically, which for squarefree monomials in one row is the
    lexicographic order of their index tuples.
    """

    exps: tuple[tuple[int, int, int], ...]
    width: int
    rows: int = 1

    def __init__(self, width: int, exps: Iterable[Sequence[int]] = (), rows: int = 1):
        acc: dict[tuple[int, int], int] = {}
        for i, j, e in exps:
            if e == 0:
                continue
            if e < 0:
                raise ValueError("exponents must be nonnegative")
            if not (1 <= i <= rows and 1 <= j <= width):
                raise ValueError(
                    f"variable x_({i},{j}) outside {rows} rows x {width} columns"
                )
            acc[(i, j)] = acc.get((i, j), 0) + int(e)
        object.__setattr__(self, "width", int(width))
        object.__setattr__(self, "rows", int(rows))
        object.__setattr__(
            self, "exps", tuple((i, j, e) for (i, j), e in sorted(acc.items()))
        )

    # constructors -------------------------------------------------------
    @classmethod
    def one(cls, width: int, rows: int = 1) -> "Monomial":
        return cls(width, (), rows)

    @classmethod
    def var(cls, width: int, col: int, row: int = 1, rows: int = 1) -> "Monomial":
        return cls(width, [(row, col, 1)], rows)

    @classmethod
    def from_cols(cls, width: int, cols: Iterable[int]) -> "Monomial":
        """Product of ``x_c`` over ``cols`` in the one-row algebra."""
        return cls(width, [(1, c, 1) for c in cols], 1)

    @classmethod
    def from_row_cols(cls, width: int, cols: Sequence[int]) -> "Monomial":
        """``x_{1,c_1} x_{2,c_2} ... x_{d,c_d}`` with ``d = len(cols)``."""
        return cls(width, [(r, c, 1) for r, c in enumerate(cols, start=1)], len(cols))

    @classmethod
    def parse(cls, text: str, width: int, rows: int = 1) -> "Monomial":
        """Parse ``"x1*x2^2"`` (one row) or ``"x1_2*x2_3"`` (row_col)."""
        text = text.strip()
        if text in ("1", ""):
            return cls.one(width, rows)
        exps = []
        for part in text.split("*"):
            m = re.fullmatch(r"x(\d+)(?:_(\d+))?(?:\^(\d+))?", part.strip())
            if m is None:
                raise ValueError(f"cannot parse monomial factor {part!r}")
            a, b, e = m.groups()
            if b is None:
                if rows != 1:
                    raise ValueError(f"{part!r} needs a row index when rows = {rows}")
                exps.append((1, int(a), int(e or 1)))
            else:
                exps.append((int(a), int(b), int(e or 1)))
        return cls(width, exps, rows)

    # basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        return sum(e for _, _, e in self.exps)

    @property
    def is_one(self) -> bool:
        return not self.exps

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, _, e in self.exps)

    def exp_dict(self) -> dict[tuple[int, int], int]:
        return {(i, j): e for i, j, e in self.exps}

    def support(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j, _ in self.exps)

    def cols(self) -> tuple[int, ...]:
        """Column indices with multiplicity, sorted (one-row algebras)."""
        return tuple(sorted(itertools.chain.from_iterable([j] * e for _, j, e in self.exps)))

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        parts = []
        for i, j, e in self.exps:
            name = f"x{j}" if self.rows == 1 else f"x{i}_{j}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Monomial({self})"

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "Monomial") -> None:
        if self.width != other.width:
            raise WidthMismatchError(f"widths {self.width} and {other.width} differ")
        if self.rows != other.rows:
            raise ValueError(f"mixing {self.rows}-row and {other.rows}-row monomials")

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return NotImplemented
        self._check(other)
        return Monomial(self.width, self.exps + other.exps, self.rows)

    def divides(self, other: "Monomial") -> bool:
        self._check(other)
        od = other.exp_dict()
        return all(od.get((i, j), 0) >= e for i, j, e in self.exps)

    def to_json(self) -> dict:
        return {"width": self.width, "exps": [list(t) for t in self.exps]}

    @classmethod
    def from_json(cls, obj, rows: int = 1, width: int | None = None) -> "Monomial":
        if isinstance(obj, str):
            if width is None:
                raise ValueError("string monomials need an explicit width")
            return cls.parse(obj, width, rows)
        return cls(int(obj["width"]), [tuple(t) for t in obj["exps"]], rows)


def act(eps: OIMorphism, m: Monomial) -> Monomial:
    """Apply ``A(eps)``: ``x_{i,j} -> x_{i,eps(j)}``."""
    if m.width != eps.source_width:
        raise WidthMismatchError(
            f"monomial of width {m.width} cannot be moved by {eps}"
        )
    return Monomial(eps.target_width, [(i, eps(j), e) for i, j, e in m.exps], m.rows)


def lcm(a: Monomial, b: Monomial) -> Monomial:
    a._check(b)
    da, db = a.exp_dict(), b.exp_dict()
    keys = set(da) | set(db)
    return Monomial(a.width, [(i, j, max(da.get((i, j), 0), db.get((i, j), 0))) for i, j in keys], a.rows)


def lcm_all(ms: Iterable[Monomial]) -> Monomial:
    it = iter(ms)
    out = next(it)
    for m in it:
        out = lcm(out, m)
    return out


def divide(a: Monomial, b: Monomial) -> Monomial:
    """``a / b``; raises if ``b`` does not divide ``a``."""
    if not b.divides(a):
        raise ValueError(f"{b} does not divide {a}")
    da = a.exp_dict()
    for i, j, e in b.exps:
        da[(i, j)] -= e
    return Monomial(a.width, [(i, j, e) for (i, j), e in da.items()], a.rows)


def monomials_of_degree(width: int, rows: int, degree: int) -> Iterator[Monomial]:
    """All monomials of a given total degree in ``rows * width`` variables."""
    if degree < 0:
        return
    variables = [(i, j) for i in range(1, rows + 1) for j in range(1, width + 1)]
    for combo in itertools.combinations_with_replacement(range(len(variables)), degree):
        yield Monomial(width, [(*variables[k], 1) for k in combo], rows)


def count_monomials(n_vars: int, degree: int) -> int:
    if degree < 0:
        return 0
    if n_vars == 0:
        return 1 if degree == 0 else 0
    return comb(degree + n_vars - 1, n_vars - 1)


class Poly:
    """A finite linear combination of monomials of one width.

    Coefficients are ``int`` or ``Fraction``; zero terms are dropped.
    """

    __slots__ = ("terms", "width", "rows")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None, *, width: int, rows: int = 1):
        self.width = width
        self.rows = rows
        clean: dict[Monomial, Scalar] = {}
        for m, c in (terms or {}).items():
            if m.width != width or m.rows != rows:
                raise WidthMismatchError(f"{m!r} does not live in width {width}")
            if c:
                clean[m] = _normalize(c)
        self.terms = clean

    @classmethod
    def monomial(cls, m: Monomial, coeff: Scalar = 1) -> "Poly":
        return cls({m: coeff}, width=m.width, rows=m.rows)

    @classmethod
    def constant(cls, c: Scalar, width: int, rows: int = 1) -> "Poly":
        return cls({Monomial.one(width, rows): c}, width=width, rows=rows)

    @classmethod
    def zero(cls, width: int, rows: int = 1) -> "Poly":
        return cls({}, width=width, rows=rows)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(other, self.width, self.rows)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.width == other.width and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.width, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m in sorted(self.terms):
            c = self.terms[m]
            if m.is_one:
                out.append(f"{c}")
            elif c == 1:
                out.append(f"{m}")
            elif c == -1:
                out.append(f"-{m}")
            else:
                out.append(f"{c}*{m}")
        return " + ".join(out).replace("+ -", "- ")

    def _like(self, terms: dict) -> "Poly":
        return Poly(terms, width=self.width, rows=self.rows)

    def __add__(self, other: "Poly") -> "Poly":
        if other.width != self.width:
            raise WidthMismatchError("cannot add polynomials of different widths")
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return self._like(t)

    def __neg__(self) -> "Poly":
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self._like({m: c * other for m, c in self.terms.items()})
        if isinstance(other, Monomial):
            return self._like({m * other: c for m, c in self.terms.items()})
        if isinstance(other, Poly):
            t: dict[Monomial, Scalar] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = m1 * m2
                    t[m] = t.get(m, 0) + c1 * c2
            return self._like(t)
        return NotImplemented

    __rmul__ = __mul__

    def act(self, eps: OIMorphism) -> "Poly":
        return Poly(
            {act(eps, m): c for m, c in self.terms.items()},
            width=eps.target_width,
            rows=self.rows,
        )

    @property
    def constant_term(self) -> Scalar:
        return self.terms.get(Monomial.one(self.width, self.rows), 0)

    @property
    def is_monomial_term(self) -> bool:
        return len(self.terms) == 1

    def single_term(self) -> tuple[Monomial, Scalar]:
        if len(self.terms) != 1:
            raise ValueError(f"{self} is not a single term")
        return next(iter(self.terms.items()))

    def degrees(self) -> set[int]:
        return {m.degree for m in self.terms}

    def is_homogeneous_of(self, degree: int) -> bool:
        return all(m.degree == degree for m in self.terms)

    def to_json(self) -> list:
        return [[_scalar_json(c), m.to_json()] for m, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, obj, width: int, rows: int = 1) -> "Poly":
        terms: dict[Monomial, Scalar] = {}
        for c, m in obj:
            mono = Monomial.from_json(m, rows, width)
            if mono.width != width:
                raise WidthMismatchError(f"coefficient monomial {mono} is not of width {width}")
            terms[mono] = terms.get(mono, 0) + _scalar_from_json(c)
        return cls(terms, width=width, rows=rows)


def _normalize(c: Scalar) -> Scalar:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _scalar_json(c: Scalar):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return int(c)


def _scalar_from_json(c) -> Scalar:
    if isinstance(c, str):
        return _normalize(Fraction(c))
    return int(c)


def scalar_mod_p(c: Scalar, p: int) -> int:
    if isinstance(c, Fraction):
        if c.denominator % p == 0:
            raise ZeroDivisionError(f"coefficient {c} is not defined mod {p}")
        return c.numerator * pow(c.denominator, -1, p) % p
    return int(c) % p


def hilbert_numerator(quotient_gens: Sequence[Monomial], w: int, max_degree: int, rows: int | None = None) -> list[int]:
    """Numerator ``K(t)`` of the Hilbert series of ``A(w)/I``, truncated.

    ``HS(A(w)/I, t) = K(t) / (1 - t)^(rows * w)`` with
    ``K(t) = sum over subsets S of (-1)^|S| t^deg(lcm S)``.  The sum is
    accumulated generator by generator on a table of distinct lcms.
    """
    if len(quotient_gens) > MAX_INCLUSION_EXCLUSION_GENS:
        raise ValueError(
            f"inclusion-exclusion is limited to {MAX_INCLUSION_EXCLUSION_GENS} generators"
        )
    check_width(w)
    if rows is None:
        rows = quotient_gens[0].rows if quotient_gens else 1
    one = Monomial.one(w, rows)
    table: dict[Monomial, int] = {one: 1}
    for g in quotient_gens:
        if g.width != w:
            raise WidthMismatchError(f"{g} is not of width {w}")
        new = dict(table)
        for m, c in table.items():
            l = lcm(m, g)
            new[l] = new.get(l, 0) - c
        table = {m: c for m, c in new.items() if c}
    coeffs = [0] * (max_degree + 1)
    for m, c in table.items():
        if m.degree <= max_degree:
            coeffs[m.degree] += c
    return coeffs


def hilbert_function_from_numerator(numerator: Sequence[int], n_vars: int, max_degree: int) -> list[int]:
    """Expand ``K(t) / (1 - t)^n`` into Hilbert function values."""
    return [
        sum(c * count_monomials(n_vars, t - k) for k, c in enumerate(numerator) if k <= t)
        for t in range(max_degree + 1)
    ]


def standard_monomial_counts(gens: Sequence[Monomial], w: int, rows: int, max_degree: int) -> list[int]:
    """Count monomials outside the ideal, degree by degree, by enumeration."""
    out = []
    for t in range(max_degree + 1):
        out.append(sum(
            1 for u in monomials_of_degree(w, rows, t)
            if not any(g.divides(u) for g in gens)
        ))
    return out
