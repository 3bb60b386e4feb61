"""Boolean polynomials in algebraic normal form.

A formula is an XOR of monomials, a monomial is an AND of variables.
Monomials are stored as nonnegative integers: bit ``i`` set means variable
``x_i`` occurs in the product, and ``0`` is the empty product (the constant 1).
Python integers are unbounded, so the same encoding serves formulas over
thousands of variables.

A :class:`Formula` holds a frozenset of distinct monomials.  Because the
representation is canonical, two formulas denote the same boolean function
exactly when their term sets are equal.

Text form (ASCII)::

    formula := "0" | "1" | term (" + " term)*
    term    := "1" | var+
    var     := "x" decimal-index

``+`` stands for exclusive-or.  Printing sorts terms by degree, then
lexicographically by variable indices.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from functools import lru_cache, reduce

import numpy as np

Monomial = int

# Conjunctions over at most this many variables may be computed on dense
# coefficient vectors (2**DENSE_MAX_VARS bytes each).
DENSE_MAX_VARS = 24

# Rough cost of one Python-level monomial toggle, measured in numpy element
# operations.  Used to pick between sparse and dense conjunction.
_TOGGLE_COST = 150


class ANFSyntaxError(ValueError):
    """Raised by :func:`parse` on malformed input."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class MissingVariableError(KeyError):
    """An assignment did not cover every variable of a formula."""


def monomial(*indices: int) -> Monomial:
    """Return the monomial ``x_i x_j ...`` for the given variable indices."""
    m = 0
    for i in indices:
        if i < 0:
            raise ValueError(f"variable index must be nonnegative, got {i}")
        m |= 1 << i
    return m


def monomial_indices(m: Monomial) -> tuple[int, ...]:
    """Variable indices of a monomial in ascending order."""
    out = []
    i = 0
    while m:
        low = m & -m
        i = low.bit_length() - 1
        out.append(i)
        m ^= low
    return tuple(out)


def _degree(m: Monomial) -> int:
    return m.bit_count()


def _graded_key(m: Monomial) -> tuple[int, tuple[int, ...]]:
    return (m.bit_count(), monomial_indices(m))


class Formula:
    """An immutable ANF boolean polynomial.

    ``terms`` must be a collection of *distinct* monomials; use
    :meth:`from_monomials` to build from a sequence where repeated monomials
    should cancel.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[Monomial] = ()):
        self.terms: frozenset[Monomial] = (
            terms if isinstance(terms, frozenset) else frozenset(terms)
        )
        self._hash: int | None = None

    @classmethod
    def from_monomials(cls, monomials: Iterable[Monomial]) -> Formula:
        """Build a formula, cancelling monomials that occur an even number of times."""
        acc: set[int] = set()
        for m in monomials:
            if m in acc:
                acc.remove(m)
            else:
                acc.add(m)
        return cls(frozenset(acc))

    # -- queries -------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms)

    def __contains__(self, m: object) -> bool:
        return m in self.terms

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_one(self) -> bool:
        return len(self.terms) == 1 and 0 in self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self) -> int | None:
        """0 or 1 for a constant formula, ``None`` otherwise."""
        if not self.terms:
            return 0
        if self.is_one:
            return 1
        return None

    @property
    def support(self) -> int:
        """Bitmask of all variables occurring in the formula."""
        return reduce(int.__or__, self.terms, 0)

    def variables(self) -> tuple[int, ...]:
        return monomial_indices(self.support)

    @property
    def degree(self) -> int:
        """Largest monomial degree; -1 for the zero formula."""
        return max((m.bit_count() for m in self.terms), default=-1)

    def sorted_terms(self) -> list[Monomial]:
        return sorted(self.terms, key=_graded_key)

    # -- algebra -------------------------------------------------------------

    def __xor__(self, other: Formula) -> Formula:
        return xor(self, other)

    def __and__(self, other: Formula) -> Formula:
        return and_(self, other)

    def __invert__(self) -> Formula:
        return not_(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        text = to_text(self)
        if len(text) > 80:
            text = text[:77] + "..."
        return f"Formula({text!r})"


ZERO = Formula(frozenset())
ONE = Formula(frozenset((0,)))


def zero() -> Formula:
    return ZERO


def one() -> Formula:
    return ONE


def var(i: int) -> Formula:
    """The single-variable formula ``x_i``."""
    return Formula(frozenset((monomial(i),)))


def xor(f: Formula, g: Formula) -> Formula:
    if not g.terms:
        return f
    if not f.terms:
        return g
    return Formula(f.terms ^ g.terms)


def not_(f: Formula) -> Formula:
    return Formula(f.terms ^ ONE.terms)


def and_(f: Formula, g: Formula) -> Formula:
    return conjoin((f, g))


def _mul_sparse(big: frozenset[int], small: frozenset[int]) -> frozenset[int]:
    support = reduce(int.__or__, big, 0)
    acc: set[int] = set()
    for b in small:
        if b & support == 0:
            # b shares no variable with `big`: the products are all distinct
            acc.symmetric_difference_update({a | b for a in big})
            continue
        for a in big:
            m = a | b
            if m in acc:
                acc.remove(m)
            else:
                acc.add(m)
    return frozenset(acc)


@lru_cache(maxsize=4)
def _index_vector(k: int) -> np.ndarray:
    dtype = np.uint32 if k <= 32 else np.uint64
    return np.arange(1 << k, dtype=dtype)


def _butterfly(coeffs: np.ndarray, k: int) -> np.ndarray:
    """In-place GF(2) subset-sum transform over ``k`` variables.

    The transform is an involution: it maps ANF coefficients to a truth
    table and a truth table back to ANF coefficients.
    """
    for i in range(k):
        view = coeffs.reshape(-1, 2, 1 << i)
        view[:, 1, :] ^= view[:, 0, :]
    return coeffs


def _dense_truth_table(terms: frozenset[int], k: int) -> np.ndarray:
    if len(terms) <= k:
        idx = _index_vector(k)
        table = np.zeros(1 << k, dtype=np.bool_)
        for m in terms:
            if m == 0:
                table ^= True
            else:
                table ^= (idx & m) == m
        return table
    coeffs = np.zeros(1 << k, dtype=np.bool_)
    coeffs[np.fromiter(terms, dtype=np.int64, count=len(terms))] = True
    return _butterfly(coeffs, k)


def _conjoin_dense(factors: list[frozenset[int]], k: int) -> frozenset[int]:
    table = _dense_truth_table(factors[0], k)
    for terms in factors[1:]:
        table &= _dense_truth_table(terms, k)
    coeffs = _butterfly(table, k)
    return frozenset(np.flatnonzero(coeffs).tolist())


def conjoin(formulas: Iterable[Formula]) -> Formula:
    """AND of any number of formulas (the empty product is 1)."""
    factors: list[frozenset[int]] = []
    for f in formulas:
        if not f.terms:
            return ZERO
        if len(f.terms) == 1 and 0 in f.terms:
            continue
        factors.append(f.terms)
    if not factors:
        return ONE
    if len(factors) == 1:
        return Formula(factors[0])
    if all(len(t) == 1 for t in factors):
        m = 0
        for t in factors:
            (single,) = t
            m |= single
        return Formula(frozenset((m,)))

    support = 0
    for t in factors:
        for m in t:
            support |= m
    k = support.bit_length()
    if k <= DENSE_MAX_VARS:
        sparse_cost = 1
        for t in factors:
            sparse_cost *= len(t)
            if sparse_cost > 1 << 40:
                break
        dense_cost = (1 << k) * sum(min(len(t), k) + 1 for t in factors) // _TOGGLE_COST
        if sparse_cost > dense_cost:
            return Formula(_conjoin_dense(factors, k))

    factors.sort(key=len)
    acc = factors[0]
    for t in factors[1:]:
        if not acc:
            break
        acc = _mul_sparse(t, acc) if len(t) >= len(acc) else _mul_sparse(acc, t)
    return Formula(acc)


def evaluate(f: Formula, assignment: Mapping[int, int] | int) -> int:
    """Value of ``f`` at a point.

    ``assignment`` is either a mapping from variable index to bit, which must
    cover every variable of ``f``, or an integer whose bit ``i`` is ``x_i``.
    """
    if isinstance(assignment, int):
        x = assignment
    else:
        x = 0
        for i, bit in assignment.items():
            if bit:
                x |= 1 << i
        missing = f.support & ~monomial(*assignment.keys())
        if missing:
            raise MissingVariableError(
                "assignment lacks variables "
                + ", ".join(f"x{i}" for i in monomial_indices(missing))
            )
    parity = 0
    for m in f.terms:
        if m & x == m:
            parity ^= 1
    return parity


def truth_table(f: Formula, n: int) -> np.ndarray:
    """Boolean vector of ``f`` over all ``2**n`` points, ``x_0`` least significant.

    Evaluates term by term (no transform), so it can serve as a check on
    :func:`mobius`.
    """
    if f.support >> n:
        raise ValueError(f"formula mentions variables beyond x{n - 1}")
    idx = _index_vector(n)
    table = np.zeros(1 << n, dtype=np.bool_)
    for m in f.terms:
        if m == 0:
            table ^= True
        else:
            table ^= (idx & m) == m
    return table


def mobius(table: Sequence[int] | np.ndarray) -> Formula:
    """ANF of the boolean function given by its truth table.

    Entry ``i`` of the table is the function value at the point whose binary
    expansion is ``i`` (``x_0`` least significant).
    """
    size = len(table)
    if size == 0 or size & (size - 1):
        raise ValueError(f"truth table length must be a power of two, got {size}")
    k = size.bit_length() - 1
    coeffs = np.array(table, dtype=np.uint8).astype(np.bool_)
    _butterfly(coeffs, k)
    return Formula(frozenset(np.flatnonzero(coeffs).tolist()))


def min_degree_monomial(f: Formula) -> Monomial:
    """A monomial of least degree; ties go to the smallest integer encoding."""
    if not f.terms:
        raise ValueError("the zero formula has no monomials")
    return min(f.terms, key=lambda m: (m.bit_count(), m))


# -- text ----------------------------------------------------------------------


def monomial_text(m: Monomial) -> str:
    if m == 0:
        return "1"
    return "".join(f"x{i}" for i in monomial_indices(m))


def to_text(f: Formula) -> str:
    if not f.terms:
        return "0"
    return " + ".join(monomial_text(m) for m in f.sorted_terms())


_TOKEN = re.compile(r"\s*(?:(?P<plus>\+)|(?P<var>x\d+)|(?P<const>[01])(?!\d)|(?P<bad>\S))")


def parse(text: str) -> Formula:
    """Parse the ASCII ANF grammar; repeated terms cancel, variables may appear in any order."""
    pos = 0
    terms: list[int] = []
    current: int | None = None
    current_is_const = False
    expect_term = True
    end = len(text.rstrip())
    while pos < end:
        tok = _TOKEN.match(text, pos)
        assert tok is not None
        start = tok.start(tok.lastgroup)
        kind = tok.lastgroup
        if kind == "bad":
            raise ANFSyntaxError(f"unexpected character {tok.group('bad')!r}", text, start)
        if kind == "plus":
            if expect_term:
                raise ANFSyntaxError("expected a term", text, start)
            terms.append(current)
            current = None
            current_is_const = False
            expect_term = True
        elif kind == "const":
            if not expect_term:
                raise ANFSyntaxError("constant inside a product", text, start)
            value = tok.group("const")
            if value == "0":
                if terms or text[tok.end():].strip():
                    raise ANFSyntaxError("'0' must stand alone", text, start)
                return ZERO
            current = 0
            current_is_const = True
            expect_term = False
        else:
            if current_is_const:
                raise ANFSyntaxError("variable after constant", text, start)
            index = int(tok.group("var")[1:])
            current = (current or 0) | (1 << index)
            expect_term = False
        pos = tok.end()
    if expect_term:
        raise ANFSyntaxError("expected a term", text, len(text))
    terms.append(current)
    return Formula.from_monomials(terms)
