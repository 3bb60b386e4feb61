"""Symbolic partial evaluation of reversible circuits.

Each wire carries an ANF formula.  Running a circuit forward applies its
gates in order; running it retrodictively applies them in reverse order, which
is the inverse map because every generalized Toffoli gate is self-inverse.
After a run, :func:`reconcile` equates the wire formulas with known boundary
bits, producing equations over the unknown input variables.
"""

from __future__ import annotations

import enum
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from retrodict.anf import ONE, ZERO, Formula, conjoin, evaluate, not_, parse, truth_table, var, xor
from retrodict.circuit import Circuit, CircuitError, Gate


class Direction(str, enum.Enum):
    FORWARD = "forward"
    RETRODICTIVE = "retrodictive"


class WidthMismatch(ValueError):
    pass


def constant(bit: int) -> Formula:
    return ONE if bit else ZERO


class SymState:
    """Per-wire formulas, mutated in place by :func:`apply_gate`.

    ``applied`` counts gate applications on this state.
    """

    __slots__ = ("values", "applied")

    def __init__(self, values: Iterable[Formula]):
        self.values: list[Formula] = list(values)
        self.applied = 0

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, wire: int) -> Formula:
        return self.values[wire]

    def copy(self) -> SymState:
        return SymState(self.values)

    def register(self, span: range) -> list[Formula]:
        return [self.values[w] for w in span]

    def __repr__(self) -> str:
        return "|" + ", ".join(str(f) for f in self.values) + ">"


def default_initial(c: Circuit) -> list[int]:
    """Output register at ``c.output_init``, ancillas at 0."""
    return int_to_bits(c.output_init, len(c.output_span)) + [0] * len(c.ancilla_span)


def initial_state(c: Circuit, fixed: Sequence[int] | None = None) -> SymState:
    """Fresh variables ``x_0..`` on the input register, constants elsewhere.

    ``fixed`` lists the bits of the output register followed by the ancilla
    register; it defaults to :func:`default_initial`.
    """
    n_rest = len(c.output_span) + len(c.ancilla_span)
    if fixed is None:
        fixed = default_initial(c)
    if len(fixed) != n_rest:
        raise WidthMismatch(f"expected {n_rest} fixed bits, got {len(fixed)}")
    values = [ZERO] * c.width
    for i, w in enumerate(c.input_span):
        values[w] = var(i)
    for w, bit in zip([*c.output_span, *c.ancilla_span], fixed):
        values[w] = constant(bit)
    return SymState(values)


def apply_gate(state: SymState, g: Gate) -> SymState:
    """Target becomes ``target xor AND(controls, negated where polarity is negative)``."""
    values = state.values
    factors = []
    for wire, positive in g.controls:
        f = values[wire]
        if not positive:
            f = not_(f)
        if not f.terms:
            break
        factors.append(f)
    else:
        values[g.target] = xor(values[g.target], conjoin(factors))
    state.applied += 1
    return state


def run(c: Circuit, init: SymState, direction: Direction | str = Direction.FORWARD) -> SymState:
    """One pass over the circuit; ``init`` is left untouched."""
    if len(init) != c.width:
        raise WidthMismatch(f"state has {len(init)} wires, circuit has {c.width}")
    direction = Direction(direction)
    state = init.copy()
    gates = c.gates if direction is Direction.FORWARD else reversed(c.gates)
    for g in gates:
        apply_gate(state, g)
    return state


@dataclass(frozen=True)
class Equation:
    lhs: Formula
    rhs: int

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"

    def holds(self, x: int) -> bool:
        return evaluate(self.lhs, x) == self.rhs

    @property
    def is_contradiction(self) -> bool:
        return self.lhs.is_constant and self.lhs.constant_value() != self.rhs


_EQUATION = re.compile(r"^(.*)=\s*([01])\s*$")


def parse_equation(text: str) -> Equation:
    m = _EQUATION.match(text.strip())
    if not m:
        raise ValueError(f"not an equation: {text!r}")
    return Equation(parse(m.group(1)), int(m.group(2)))


def reconcile(state: SymState, span: Sequence[int], expected: Sequence[int]) -> list[Equation]:
    """Equations ``state[w] = expected[k]`` for the ``k``-th wire ``w`` of ``span``.

    Tautologies are dropped and repeated equations kept once; order follows
    ``span``.  A contradiction such as ``1 = 0`` is returned as is.
    """
    if len(expected) != len(span):
        raise WidthMismatch(f"expected {len(span)} bits, got {len(expected)}")
    out: list[Equation] = []
    seen = set()
    for w, bit in zip(span, expected):
        lhs = state.values[w]
        if lhs.constant_value() == bit:
            continue
        eq = Equation(lhs, int(bit))
        if eq not in seen:
            seen.add(eq)
            out.append(eq)
    return out


def retrodict(c: Circuit, observed: Sequence[int], ancilla: Sequence[int] | None = None) -> SymState:
    """Run backwards from ``observed`` on the output register.

    Input wires start as fresh variables; ancillas start at ``ancilla``
    (default all zeros), i.e. they are assumed returned to their initial values.
    """
    if len(observed) != len(c.output_span):
        raise WidthMismatch(
            f"observed has {len(observed)} bits, output register has {len(c.output_span)}"
        )
    if ancilla is None:
        ancilla = [0] * len(c.ancilla_span)
    start = initial_state(c, [*observed, *ancilla])
    return run(c, start, Direction.RETRODICTIVE)


def retrodictive_equations(
    c: Circuit, observed: Sequence[int], initial: Sequence[int] | None = None
) -> list[Equation]:
    """Equations over the input variables characterizing ``{x : f(x) = observed}``.

    ``initial`` gives the forward-time values of the output register followed
    by the ancilla register (default :func:`default_initial`).  Ancillas are reconciled as well, so a circuit
    that leaves garbage contributes the condition that the garbage vanishes.
    The circuit must not write to its input register.
    """
    n_out, n_anc = len(c.output_span), len(c.ancilla_span)
    if initial is None:
        initial = default_initial(c)
    if len(initial) != n_out + n_anc:
        raise WidthMismatch(f"initial has {len(initial)} bits, expected {n_out + n_anc}")
    inputs = c.input_span
    if any(g.target in inputs for g in c.gates):
        raise CircuitError("retrodictive equations need a circuit that leaves its inputs unchanged")
    state = retrodict(c, observed, initial[n_out:])
    return reconcile(state, [*c.output_span, *c.ancilla_span], initial)


def solutions(equations: Sequence[Equation], n: int) -> list[int]:
    """All ``x < 2**n`` satisfying every equation, by exhaustive enumeration."""
    ok = np.ones(1 << n, dtype=np.bool_)
    for eq in equations:
        table = truth_table(eq.lhs, n)
        ok &= table if eq.rhs else ~table
    return np.flatnonzero(ok).tolist()


def int_to_bits(value: int, width: int) -> list[int]:
    """Little-endian bits; the register's first wire gets the least significant bit."""
    if value < 0 or value >> width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return [(value >> i) & 1 for i in range(width)]


def bits_to_int(bits: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))
