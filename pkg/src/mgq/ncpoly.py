"""Noncommutative *-polynomial relations with exact Gaussian-rational
coefficients, and their two evaluation modes: Boolean commutative (for
classical points) and finite-dimensional matrix (for representation
residuals).

Relations are data, never rewritten: deciding consequences of these
presentations is undecidable in general, so everything downstream only ever
evaluates them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class NCPolyError(Exception):
    pass


class MissingSymbolError(NCPolyError):
    pass


class DimensionMismatchError(NCPolyError):
    pass


# -- coefficients -----------------------------------------------------------

@dataclass(frozen=True)
class GQ:
    """A Gaussian rational re + im*i with exact Fraction parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, x) -> "GQ":
        if isinstance(x, GQ):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(Fraction(x))

    def __add__(self, other):
        other = GQ.of(other)
        return GQ(self.re + other.re, self.im + other.im)

    def __mul__(self, other):
        other = GQ.of(other)
        return GQ(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    def __neg__(self):
        return GQ(-self.re, -self.im)

    def conjugate(self):
        return GQ(self.re, -self.im)

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def serialize(self):
        return [f"{self.re.numerator}/{self.re.denominator}",
                f"{self.im.numerator}/{self.im.denominator}"]

    @classmethod
    def deserialize(cls, data) -> "GQ":
        return cls(Fraction(data[0]), Fraction(data[1]))


ONE = GQ(Fraction(1))
ZERO = GQ(Fraction(0))


# -- symbols and monomials ----------------------------------------------------

FAMILY_ARITY = {"u": 2, "q": 2, "P": 4, "gamma": 4, "nu": 4, "x": 2}


@dataclass(frozen=True)
class Sym:
    """A generator symbol: family tag plus an index tuple.

    Index layouts: u -> (sigma, tau) edge ids; q and x -> (i, j) vertex ids;
    P -> (i, j, r, s); gamma -> (m, k, s, r); nu -> (m, l, s, r).
    """

    family: str
    index: tuple

    def __post_init__(self):
        if self.family not in FAMILY_ARITY:
            raise NCPolyError(f"unknown symbol family: {self.family}")
        if len(self.index) != FAMILY_ARITY[self.family]:
            raise NCPolyError(
                f"family {self.family} wants {FAMILY_ARITY[self.family]} indices, "
                f"got {self.index}")

    def key(self):
        return (self.family,
                tuple((0, x) if isinstance(x, int) else (1, x) for x in self.index))

    def text(self) -> str:
        return self.family + "".join(f"[{x}]" for x in self.index)


def u_(sigma, tau): return Sym("u", (sigma, tau))
def q_(i, j): return Sym("q", (i, j))
def x_(i, j): return Sym("x", (i, j))
def P_(i, j, r, s): return Sym("P", (i, j, r, s))
def gamma_(m, k, s, r): return Sym("gamma", (m, k, s, r))
def nu_(m, l, s, r): return Sym("nu", (m, l, s, r))


def parse_symbol(text: str) -> Sym:
    """Inverse of Sym.text: e.g. "q[a][b]" or "gamma[2][a][1][2]"."""
    head, _, rest = text.partition("[")
    if not rest or not text.endswith("]"):
        raise NCPolyError(f"bad symbol: {text}")
    parts = rest[:-1].split("][")
    if head in ("gamma", "nu"):
        index = (int(parts[0]), parts[1], int(parts[2]), int(parts[3]))
    elif head == "P":
        index = (parts[0], parts[1], int(parts[2]), int(parts[3]))
    else:
        index = tuple(parts)
    return Sym(head, index)


# A monomial is a tuple of (Sym, starred) factors; () is the unit.
# A formal sum is a normalized tuple of (GQ coefficient, monomial) terms.

def mono(*factors) -> tuple:
    """Build a monomial from Sym values or (Sym, starred) pairs."""
    out = []
    for f in factors:
        if isinstance(f, Sym):
            out.append((f, False))
        else:
            out.append((f[0], bool(f[1])))
    return tuple(out)


def mono_star(m: tuple) -> tuple:
    return tuple((s, not star) for s, star in reversed(m))


def _mono_key(m: tuple):
    return (len(m), tuple((s.key(), star) for s, star in m))


def fs(*terms) -> tuple:
    """Normalize terms (coeff, monomial) into a canonical formal sum."""
    acc: dict = {}
    for coeff, m in terms:
        coeff = GQ.of(coeff)
        acc[m] = acc.get(m, ZERO) + coeff
    out = [(c, m) for m, c in acc.items() if not c.is_zero]
    out.sort(key=lambda t: _mono_key(t[1]))
    return tuple(out)


def fs_sym(s: Sym, star: bool = False, coeff=1) -> tuple:
    return fs((coeff, mono((s, star))))


def fs_one(coeff=1) -> tuple:
    return fs((coeff, ()))


def fs_zero() -> tuple:
    return ()


def fs_add(*sums) -> tuple:
    terms = [t for s in sums for t in s]
    return fs(*terms)


def fs_scale(s: tuple, coeff) -> tuple:
    coeff = GQ.of(coeff)
    return fs(*((c * coeff, m) for c, m in s))


def fs_mul(a: tuple, b: tuple) -> tuple:
    return fs(*((ca * cb, ma + mb) for ca, ma in a for cb, mb in b))


def fs_star(a: tuple) -> tuple:
    return fs(*((c.conjugate(), mono_star(m)) for c, m in a))


@dataclass(frozen=True)
class Relation:
    """left = right, both formal sums; ``note`` records which condition of
    which presentation produced it and does not affect identity."""

    left: tuple
    right: tuple
    note: str = field(default="", compare=False)

    def symbols(self) -> set:
        return {s for side in (self.left, self.right) for _, m in side for s, _ in m}

    def with_note(self, note: str) -> "Relation":
        return Relation(self.left, self.right, note)

    # -- serialization ----------------------------------------------------

    @staticmethod
    def _terms_out(side):
        return [[c.serialize(), [[s.family, list(s.index), star] for s, star in m]]
                for c, m in side]

    @staticmethod
    def _terms_in(data):
        terms = []
        for coeff, factors in data:
            m = tuple((Sym(fam, tuple(idx)), bool(star)) for fam, idx, star in factors)
            terms.append((GQ.deserialize(coeff), m))
        return fs(*terms)

    def to_dict(self) -> dict:
        return {"left": self._terms_out(self.left),
                "right": self._terms_out(self.right),
                "note": self.note}

    @classmethod
    def from_dict(cls, data) -> "Relation":
        return cls(cls._terms_in(data["left"]), cls._terms_in(data["right"]),
                   data.get("note", ""))


def relation(left, right, note: str = "") -> Relation:
    return Relation(fs(*left) if not isinstance(left, tuple) else left,
                    fs(*right) if not isinstance(right, tuple) else right,
                    note)


def dedup_relations(relations) -> tuple:
    """Merge syntactically identical relations, accumulating their notes."""
    seen: dict = {}
    order = []
    for rel in relations:
        key = (rel.left, rel.right)
        if key in seen:
            old = seen[key]
            if rel.note and rel.note not in old.note:
                seen[key] = Relation(old.left, old.right,
                                     old.note + "; " + rel.note if old.note else rel.note)
        else:
            seen[key] = rel
            order.append(key)
    return tuple(seen[k] for k in order)


# -- evaluation ---------------------------------------------------------------

def _lookup(assignment, sym: Sym):
    try:
        return assignment[sym]
    except KeyError:
        raise MissingSymbolError(f"no value assigned to {sym.text()}") from None


def eval_boolean_commutative(rel: Relation, assignment: dict) -> bool:
    """Truth of the relation when symbols take values in {0, 1}, the product
    is commutative and the star acts as the identity."""

    def side(terms):
        total = ZERO
        for coeff, m in terms:
            prod = 1
            for s, _star in m:
                v = _lookup(assignment, s)
                if v not in (0, 1):
                    raise NCPolyError(f"non-Boolean value for {s.text()}: {v!r}")
                prod *= v
                if prod == 0:
                    break
            if prod:
                total = total + coeff
        return total

    return side(rel.left) == side(rel.right)


def eval_matrix(rel: Relation, assignment: dict) -> float:
    """Operator-norm residual of left - right under a matrix assignment;
    the star is the conjugate transpose."""
    dim = None
    for s in rel.symbols():
        m = _lookup(assignment, s)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"{s.text()}: matrix is not square")
        if dim is None:
            dim = m.shape[0]
        elif m.shape[0] != dim:
            raise DimensionMismatchError(
                f"{s.text()}: dimension {m.shape[0]} != {dim}")
    if dim is None:
        dim = 1

    def side(terms):
        total = np.zeros((dim, dim), dtype=complex)
        for coeff, m in terms:
            prod = np.eye(dim, dtype=complex)
            for s, star in m:
                mat = np.asarray(_lookup(assignment, s), dtype=complex)
                prod = prod @ (mat.conj().T if star else mat)
            total += coeff.to_complex() * prod
        return total

    diff = side(rel.left) - side(rel.right)
    return float(np.linalg.norm(diff, 2))


def substitute(rel: Relation, mapping: dict) -> Relation:
    """Replace each symbol by a formal sum and expand with exact coefficients."""

    def side(terms):
        out = fs_zero()
        for coeff, m in terms:
            prod = fs_one(coeff)
            for s, star in m:
                image = mapping.get(s)
                if image is None:
                    raise MissingSymbolError(f"no substitution for {s.text()}")
                prod = fs_mul(prod, fs_star(image) if star else image)
            out = fs_add(out, prod)
        return out

    return Relation(side(rel.left), side(rel.right), rel.note)
