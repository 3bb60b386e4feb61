"""Answering oracle problems from retrodictive equations.

Each driver builds (or receives) the classical oracle circuit, runs it
symbolically with the input register left as variables, and reads the answer
off the resulting formulas:

* Deutsch-Jozsa: constant iff the formula has no variables.
* Bernstein-Vazirani: the secret has a 1 exactly at the indices of the
  (linear) formula's variables.
* Grover: the shortest monomial of the oracle's ANF spells the marked input.
* Simon: the two solutions of the equations differ by the hidden mask.
* Shor: the solutions form ``{0, r, 2r, ...}``; when the equations only
  force ``x_0 .. x_{k-1}`` to zero the period is ``2**k`` without any search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Literal, Sequence

from retrodict.anf import ZERO, Formula, min_degree_monomial
from retrodict.arith import ModExpSpec, modexp_circuit
from retrodict.circuit import Circuit, oracle_from_function
from retrodict.evaluator import (
    Direction,
    Equation,
    SymState,
    initial_state,
    int_to_bits,
    retrodict,
    retrodictive_equations,
    run,
    solutions,
)

SIMON_MAX_BITS = 16
SHOR_MAX_BITS = 24


class PromiseViolation(ValueError):
    """The oracle does not satisfy the problem's promise."""


@dataclass(frozen=True)
class DJVerdict:
    verdict: Literal["constant", "balanced"]
    formula: Formula

    @property
    def is_constant(self) -> bool:
        return self.verdict == "constant"


@dataclass(frozen=True)
class PeriodResult:
    period: int
    solved_by: Literal["equation-structure", "brute-force"]
    equations: list[Equation] = field(default_factory=list, compare=False)
    gate_count: int = field(default=0, compare=False)


def output_formula(c: Circuit, observed: int = 0) -> Formula:
    """Formula on the single output wire after running back from ``observed``."""
    if len(c.output_span) != 1:
        raise ValueError("expected a single output wire")
    state = retrodict(c, [observed])
    return state[c.output_span[0]]


def deutsch_jozsa(table: Sequence[int]) -> DJVerdict:
    """Classify a promised constant-or-balanced function given by its truth table.

    The promise is not checked: any formula mentioning a variable is taken to
    mean "balanced".
    """
    n = len(table).bit_length() - 1
    c = oracle_from_function(n, 1, table)
    # observing 0 and reconciling with the initial 0 yields the equation f(x) = 0
    formula = output_formula(c, 0)
    return DJVerdict("constant" if formula.is_constant else "balanced", formula)


def bernstein_vazirani(oracle: Circuit, n: int) -> int:
    formula = output_formula(oracle, 0)
    if formula.degree > 1 or 0 in formula.terms:
        raise PromiseViolation(f"formula {formula} is not a parity of input bits")
    s = formula.support
    if s >> n:
        raise PromiseViolation(f"formula mentions variables beyond x{n - 1}")
    return s


def grover_formula(oracle: Circuit) -> Formula:
    """ANF of the oracle's function: one forward run with the output wire at 0."""
    fixed = [0] * (len(oracle.output_span) + len(oracle.ancilla_span))
    state = run(oracle, initial_state(oracle, fixed), Direction.FORWARD)
    return state[oracle.output_span[0]]


def grover_search(n: int, oracle: Circuit) -> int:
    formula = grover_formula(oracle)
    if formula.is_zero:
        raise PromiseViolation("no marked input")
    u = min_degree_monomial(formula)
    if u >> n:
        raise PromiseViolation(f"marked input {u} exceeds {n} bits")
    return u


def simon_table(n: int, a: int) -> list[int]:
    """A 2-to-1 function with ``f(x) = f(x ^ a)``: each coset maps to its smaller member."""
    return [min(x, x ^ a) for x in range(1 << n)]


def _evaluate_at_zero(c: Circuit) -> int:
    # forward run with every wire constant, so each formula folds to a bit
    state = run(c, SymState([ZERO] * c.width))
    return sum(state[w].constant_value() << i for i, w in enumerate(c.output_span))


def simon(oracle: Circuit, n: int, max_bits: int = SIMON_MAX_BITS) -> int:
    """Hidden XOR mask, from the two solutions of the equations for ``f(x) = f(0)``.

    Solutions are enumerated, so ``n`` is limited to ``max_bits``.
    """
    if n > max_bits:
        raise ValueError(f"Simon enumeration limited to n <= {max_bits}")
    w = _evaluate_at_zero(oracle)
    n_out, n_anc = len(oracle.output_span), len(oracle.ancilla_span)
    eqs = retrodictive_equations(oracle, int_to_bits(w, n_out), [0] * (n_out + n_anc))
    sols = solutions(eqs, n)
    if len(sols) != 2:
        raise PromiseViolation(f"expected 2 solutions for f(x) = f(0), found {len(sols)}")
    return sols[0] ^ sols[1]


def _structural_period(eqs: list[Equation]) -> int | None:
    support = 0
    for eq in eqs:
        support |= eq.lhs.support
    k = support.bit_length()
    if k == 0 or support != (1 << k) - 1:
        return None
    if solutions(eqs, k) != [0]:
        return None
    return 1 << k


def shor_period(a: int, N: int, exp_bits: int | None = None) -> PeriodResult:
    """Period of ``a**x mod N`` read from the equations for ``a**x mod N = 1``."""
    if gcd(a, N) != 1:
        raise ValueError(f"gcd({a}, {N}) != 1")
    spec = ModExpSpec(a % N, N, exp_bits=exp_bits)
    c = modexp_circuit(spec)
    n = spec.val_bits
    one = int_to_bits(1, n)
    eqs = retrodictive_equations(c, one, one + [0] * len(c.ancilla_span))
    m = spec.exp_bits

    r = _structural_period(eqs)
    if r is not None and r < 1 << m:
        return PeriodResult(r, "equation-structure", eqs, len(c))

    if m > SHOR_MAX_BITS:
        raise ValueError(f"enumeration limited to {SHOR_MAX_BITS} exponent bits")
    sols = solutions(eqs, m)
    nonzero = [x for x in sols if x]
    if not nonzero:
        raise PromiseViolation(f"no nonzero solution below 2**{m}; enlarge the exponent register")
    r = nonzero[0]
    if sols != list(range(0, 1 << m, r)):
        raise PromiseViolation("solutions are not an arithmetic progression from 0")
    return PeriodResult(r, "brute-force", eqs, len(c))


def factor(N: int, a: int, period: int | None = None) -> tuple[int, int] | None:
    """Nontrivial factors of ``N`` from the period of ``a``, or ``None`` to retry with another base."""
    if gcd(a, N) != 1:
        raise ValueError(f"gcd({a}, {N}) != 1")
    r = period if period is not None else shor_period(a, N).period
    if r % 2:
        return None
    half = pow(a, r // 2, N)
    if half == N - 1:
        return None
    p, q = gcd(half - 1, N), gcd(half + 1, N)
    if p in (1, N) or q in (1, N):
        return None
    return (min(p, q), max(p, q))
