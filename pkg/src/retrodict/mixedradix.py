"""A minimal qutrit circuit model with concrete evaluation.

Gates act on trits (values 0, 1, 2):

* ``X t``: ``t <- t + 1 mod 3``
* ``SUM a b``: ``b <- a + b mod 3``
* ``CX c t``: ``t <- t + 1 mod 3`` when ``c == 2``

There is no symbolic calculus over trits; the period of a qutrit oracle is
found by enumerating the input register, which is exact at the sizes used
here.  Registers are read as base-3 little-endian numbers.

Text format::

    qwidth 5
    registers input 0..2 output 2..5 ancilla 5..5
    qgate X 2
    qgate SUM 0 3
    qgate CX 0 4
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import product
from typing import Literal

from retrodict.circuit import CircuitFormatError, parse_registers

GateKind = Literal["X", "SUM", "CX"]
_ARITY = {"X": 1, "SUM": 2, "CX": 2}
MAX_INPUT_TRITS = 8


class QutritError(ValueError):
    pass


class NonPeriodic(QutritError):
    """Solution set is not ``{0, r, 2r, ...}`` for any ``r > 0``."""


@dataclass(frozen=True)
class QutritGate:
    kind: GateKind
    wires: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise QutritError(f"unknown qutrit gate {self.kind!r}")
        if len(self.wires) != _ARITY[self.kind]:
            raise QutritError(f"{self.kind} takes {_ARITY[self.kind]} wire(s), got {len(self.wires)}")
        if len(set(self.wires)) != len(self.wires):
            raise QutritError(f"{self.kind} needs distinct wires, got {self.wires}")

    def __str__(self) -> str:
        return "qgate " + " ".join([self.kind, *map(str, self.wires)])


@dataclass(frozen=True)
class QutritCircuit:
    width: int
    input_span: range
    output_span: range
    ancilla_span: range = range(0)
    gates: tuple[QutritGate, ...] = field(default=(), repr=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not self.ancilla_span:
            object.__setattr__(self, "ancilla_span", range(self.width, self.width))
        covered = sorted([*self.input_span, *self.output_span, *self.ancilla_span])
        if covered != list(range(self.width)):
            raise QutritError("register spans must be disjoint and cover every trit")
        for g in self.gates:
            if max(g.wires) >= self.width or min(g.wires) < 0:
                raise QutritError(f"{g} references a trit outside width {self.width}")


def apply_qutrit_gate(trits: list[int], g: QutritGate) -> None:
    if g.kind == "X":
        (t,) = g.wires
        trits[t] = (trits[t] + 1) % 3
    elif g.kind == "SUM":
        a, b = g.wires
        trits[b] = (trits[a] + trits[b]) % 3
    else:
        c, t = g.wires
        if trits[c] == 2:
            trits[t] = (trits[t] + 1) % 3


def eval_qutrit(c: QutritCircuit, trits: Sequence[int]) -> list[int]:
    if len(trits) != c.width:
        raise QutritError(f"expected {c.width} trits, got {len(trits)}")
    state = list(trits)
    for i, v in enumerate(state):
        if v not in (0, 1, 2):
            raise QutritError(f"trit {i} has value {v}")
    for g in c.gates:
        apply_qutrit_gate(state, g)
    return state


def inverse_gates(g: QutritGate) -> list[QutritGate]:
    """Gates undoing ``g``: X and CX are order 3, SUM is undone by two more SUMs."""
    return [g, g]


def trits_to_int(trits: Sequence[int]) -> int:
    return sum(t * 3**i for i, t in enumerate(trits))


def int_to_trits(value: int, width: int) -> list[int]:
    if value < 0 or value >= 3**width:
        raise QutritError(f"{value} does not fit in {width} trits")
    out = []
    for _ in range(width):
        value, r = divmod(value, 3)
        out.append(r)
    return out


def preimage_qutrit(c: QutritCircuit, observed: Sequence[int], rest: Sequence[int] | None = None) -> list[int]:
    """Input values (base-3 integers) whose forward run leaves ``observed`` on the output register."""
    m = len(c.input_span)
    if m > MAX_INPUT_TRITS:
        raise QutritError(f"enumeration limited to {MAX_INPUT_TRITS} input trits")
    if len(observed) != len(c.output_span):
        raise QutritError(f"observed has {len(observed)} trits, output register has {len(c.output_span)}")
    fixed = [*c.output_span, *c.ancilla_span]
    if rest is None:
        rest = [0] * len(fixed)
    state = [0] * c.width
    for w, v in zip(fixed, rest):
        state[w] = v
    hits = []
    for digits in product(range(3), repeat=m):
        # product varies the last position fastest; reverse for little-endian order
        x = digits[::-1]
        for w, v in zip(c.input_span, x):
            state[w] = v
        out = eval_qutrit(c, state)
        if [out[w] for w in c.output_span] == list(observed):
            hits.append(trits_to_int(x))
    return sorted(hits)


def progression_step(sols: Sequence[int], domain: int) -> int:
    """``r`` such that ``sols == [0, r, 2r, ...]`` below ``domain``."""
    if not sols or sols[0] != 0 or len(sols) < 2:
        raise NonPeriodic(f"no nonzero period in solution set {list(sols)}")
    r = sols[1]
    if list(sols) != list(range(0, domain, r)) or len(sols) == domain:
        raise NonPeriodic(f"solution set {list(sols)} is not a proper progression from 0")
    return r


def qutrit_period(c: QutritCircuit, observed: Sequence[int], rest: Sequence[int] | None = None) -> int:
    sols = preimage_qutrit(c, observed, rest)
    return progression_step(sols, 3 ** len(c.input_span))


def four_pow_mod_21() -> QutritCircuit:
    """Three gates computing ``4**x mod 21`` on two input trits.

    Input ``x0, x1`` on trits 0-1; the value register ``a0, a1, a2`` on trits
    2-4 starts at 0 and ends holding 1, 4 or 16 in base 3.
    """
    gates = (QutritGate("X", (2,)), QutritGate("SUM", (0, 3)), QutritGate("CX", (0, 4)))
    return QutritCircuit(5, range(0, 2), range(2, 5), range(5, 5), gates)


# -- text format ----------------------------------------------------------------


def format_qutrit(c: QutritCircuit) -> str:
    def span(r: range) -> str:
        return f"{r.start}..{r.stop}"

    lines = [
        f"qwidth {c.width}",
        f"registers input {span(c.input_span)} output {span(c.output_span)} ancilla {span(c.ancilla_span)}",
        *map(str, c.gates),
    ]
    return "\n".join(lines) + "\n"


_QGATE = re.compile(r"^qgate\s+(X|SUM|CX)((?:\s+\d+)+)$")


def parse_qutrit_lines(lines: Iterable[str]) -> QutritCircuit:
    width = None
    spans = None
    gates = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head == "qwidth":
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit() or width is not None:
                raise CircuitFormatError(f"bad qwidth line {line!r}", lineno)
            width = int(parts[1])
        elif head == "registers":
            spans = parse_registers(line.split()[1:], lineno)
        elif head == "qgate":
            m = _QGATE.match(line)
            if not m:
                raise CircuitFormatError(f"malformed qutrit gate {line!r}", lineno)
            try:
                gates.append(QutritGate(m.group(1), tuple(int(w) for w in m.group(2).split())))
            except QutritError as exc:
                raise CircuitFormatError(str(exc), lineno) from None
        else:
            raise CircuitFormatError(f"unknown directive {head!r}", lineno)
    if width is None or spans is None:
        raise CircuitFormatError("missing qwidth or registers declaration", 0)
    try:
        return QutritCircuit(width, spans["input"], spans["output"], spans["ancilla"], tuple(gates))
    except QutritError as exc:
        raise CircuitFormatError(str(exc), 0) from None


def parse_qutrit(text: str) -> QutritCircuit:
    return parse_qutrit_lines(text.splitlines())


def read_qutrit(path) -> QutritCircuit:
    with open(path) as fh:
        return parse_qutrit_lines(fh)
