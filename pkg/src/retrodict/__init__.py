"""Symbolic retrodictive execution of reversible classical circuits.

Wires carry boolean formulas in algebraic normal form.  Running an oracle
circuit backwards from an observed output yields equations over the input
variables whose solutions are exactly the preimage of that output; the
algorithm drivers read answers (balanced/constant, hidden strings, marked
inputs, periods) directly from those equations.
"""

from retrodict.anf import Formula, conjoin, mobius, parse, var
from retrodict.circuit import Circuit, Gate, read_circuit, write_circuit
from retrodict.evaluator import Direction, Equation, retrodict, retrodictive_equations, run, solutions

__all__ = [
    "Circuit",
    "Direction",
    "Equation",
    "Formula",
    "Gate",
    "conjoin",
    "mobius",
    "parse",
    "read_circuit",
    "retrodict",
    "retrodictive_equations",
    "run",
    "solutions",
    "var",
    "write_circuit",
]
