"""Generalized Toffoli gates and reversible circuits.

A gate flips its target wire when every control wire matches its polarity
(``True`` = positive, fires on 1; ``False`` = negative, fires on 0).  Every
such gate is its own inverse, so a circuit is inverted by reversing its gate
list.

Wire layout used by all builders here: the input register occupies the lowest
wires (variable ``x_i`` on wire ``i``), the output register comes next and
ancillas last.

File format, one item per line, ``#`` starts a comment::

    width 6
    registers input 0..3 output 3..6 ancilla 6..6
    gate [-0] 3
    gate [+0] 5

Register spans are half-open (``3..6`` is wires 3, 4, 5).  The optional
``init`` line gives the value the output register holds before the circuit
runs (ancillas always start at 0); it defaults to 0.
"""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path

from retrodict.anf import mobius

POS = True
NEG = False

Control = tuple[int, bool]


class CircuitError(ValueError):
    """Invalid gate or circuit structure."""


class CircuitFormatError(CircuitError):
    """Malformed circuit text; carries the 1-based line number."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True, slots=True)
class Gate:
    controls: tuple[Control, ...]
    target: int

    def __post_init__(self):
        seen = set()
        for wire, _ in self.controls:
            if wire == self.target:
                raise CircuitError(f"target wire {wire} is also a control")
            if wire in seen:
                raise CircuitError(f"duplicate control on wire {wire}")
            seen.add(wire)

    @property
    def arity(self) -> int:
        return len(self.controls)

    def wires(self) -> Iterator[int]:
        for wire, _ in self.controls:
            yield wire
        yield self.target

    def __str__(self) -> str:
        ctrl = " ".join(f"{'+' if pol else '-'}{w}" for w, pol in self.controls)
        return f"gate [{ctrl}] {self.target}"


def make_gate(controls: Iterable[Control], target: int) -> Gate:
    """Validated gate; ``controls`` are ``(wire, polarity)`` pairs."""
    return Gate(tuple((int(w), bool(p)) for w, p in controls), int(target))


def x_gate(target: int) -> Gate:
    return Gate((), target)


def cx(control: int, target: int, polarity: bool = POS) -> Gate:
    return Gate(((control, polarity),), target)


def ccx(c1: int, c2: int, target: int) -> Gate:
    return Gate(((c1, POS), (c2, POS)), target)


@dataclass(frozen=True)
class Circuit:
    width: int
    input_span: range
    output_span: range
    ancilla_span: range
    gates: tuple[Gate, ...] = field(default=(), repr=False)
    output_init: int = 0

    def __post_init__(self):
        if not isinstance(self.gates, tuple):
            object.__setattr__(self, "gates", tuple(self.gates))
        spans = sorted((self.input_span, self.output_span, self.ancilla_span), key=lambda r: r.start)
        pos = 0
        for span in spans:
            if span.step != 1 or span.start != pos or span.stop < span.start:
                raise CircuitError(
                    "register spans must be disjoint and cover wires 0..width"
                )
            pos = span.stop
        if pos != self.width:
            raise CircuitError(f"register spans cover {pos} wires, width is {self.width}")
        for g in self.gates:
            for w in g.wires():
                if not 0 <= w < self.width:
                    raise CircuitError(f"{g} references wire {w} outside width {self.width}")
        if not 0 <= self.output_init < 1 << len(self.output_span):
            raise CircuitError(f"initial output value {self.output_init} does not fit the output register")

    def __len__(self) -> int:
        return len(self.gates)


def layout(n_in: int, n_out: int, n_anc: int = 0) -> tuple[int, range, range, range]:
    """Width and spans for the standard input/output/ancilla ordering."""
    return (
        n_in + n_out + n_anc,
        range(0, n_in),
        range(n_in, n_in + n_out),
        range(n_in + n_out, n_in + n_out + n_anc),
    )


def reverse(c: Circuit) -> Circuit:
    """The inverse circuit (gates are self-inverse)."""
    return replace(c, gates=c.gates[::-1])


def histogram(c: Circuit) -> dict[int, int]:
    """Gate counts keyed by number of controls."""
    return dict(sorted(Counter(g.arity for g in c.gates).items()))


# -- oracle builders ------------------------------------------------------------


def oracle_from_function(n_in: int, n_out: int, table: Sequence[int]) -> Circuit:
    """Circuit for ``|x, y> -> |x, f(x) xor y>`` with ``f`` given by its table.

    ``table[x]`` is an ``n_out``-bit integer.  Each output bit gets one
    positive-control gate per monomial of its ANF.
    """
    if len(table) != 1 << n_in:
        raise CircuitError(f"table has {len(table)} entries, expected {1 << n_in}")
    limit = 1 << n_out
    for x, v in enumerate(table):
        if not 0 <= v < limit:
            raise CircuitError(f"table[{x}] = {v} does not fit in {n_out} bits")
    width, inp, out, anc = layout(n_in, n_out)
    gates = []
    for j in range(n_out):
        anf = mobius([(v >> j) & 1 for v in table])
        for m in anf.sorted_terms():
            controls = tuple((i, POS) for i in range(n_in) if m >> i & 1)
            gates.append(Gate(controls, out[j]))
    return Circuit(width, inp, out, anc, tuple(gates))


def grover_oracle(n: int, u: int) -> Circuit:
    """One gate that flips the output wire exactly on input ``u``."""
    if not 0 <= u < 1 << n:
        raise CircuitError(f"marked input {u} out of range for n={n}")
    width, inp, out, anc = layout(n, 1)
    controls = tuple((i, bool(u >> i & 1)) for i in range(n))
    return Circuit(width, inp, out, anc, (Gate(controls, out[0]),))


def bv_oracle(n: int, s: int) -> Circuit:
    """Oracle for ``f(x) = s . x mod 2``: one CX per set bit of ``s``."""
    if not 0 <= s < 1 << n:
        raise CircuitError(f"secret {s} out of range for n={n}")
    width, inp, out, anc = layout(n, 1)
    gates = tuple(cx(i, out[0]) for i in range(n) if s >> i & 1)
    return Circuit(width, inp, out, anc, gates)


# -- text format ----------------------------------------------------------------


def _span_text(r: range) -> str:
    return f"{r.start}..{r.stop}"


def format_circuit(c: Circuit) -> str:
    return "".join(iter_circuit_lines(c))


def iter_circuit_lines(c: Circuit) -> Iterator[str]:
    yield f"width {c.width}\n"
    yield (
        f"registers input {_span_text(c.input_span)} output {_span_text(c.output_span)}"
        f" ancilla {_span_text(c.ancilla_span)}\n"
    )
    if c.output_init:
        yield f"init {c.output_init}\n"
    for g in c.gates:
        yield f"{g}\n"


def write_circuit(c: Circuit, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.writelines(iter_circuit_lines(c))


_SPAN = re.compile(r"^(\d+)\.\.(\d+)$")
_GATE = re.compile(r"^gate\s*\[([^\]]*)\]\s*(\S+)$")
_CONTROL = re.compile(r"^([+-])(\d+)$")


def _parse_span(token: str, lineno: int) -> range:
    m = _SPAN.match(token)
    if not m:
        raise CircuitFormatError(f"bad register span {token!r}", lineno)
    return range(int(m.group(1)), int(m.group(2)))


def parse_registers(tokens: list[str], lineno: int) -> dict[str, range]:
    if len(tokens) != 6:
        raise CircuitFormatError("registers line needs input, output and ancilla spans", lineno)
    spans = {}
    for name, span in zip(tokens[::2], tokens[1::2]):
        if name not in ("input", "output", "ancilla") or name in spans:
            raise CircuitFormatError(f"unexpected register name {name!r}", lineno)
        spans[name] = _parse_span(span, lineno)
    return spans


def _parse_gate(line: str, lineno: int) -> Gate:
    m = _GATE.match(line)
    if not m:
        raise CircuitFormatError(f"malformed gate {line!r}", lineno)
    controls = []
    for tok in m.group(1).split():
        cm = _CONTROL.match(tok)
        if not cm:
            raise CircuitFormatError(f"malformed control {tok!r}", lineno)
        controls.append((int(cm.group(2)), cm.group(1) == "+"))
    if not m.group(2).isdigit():
        raise CircuitFormatError(f"malformed target {m.group(2)!r}", lineno)
    try:
        return Gate(tuple(controls), int(m.group(2)))
    except CircuitError as exc:
        raise CircuitFormatError(str(exc), lineno) from None


def parse_circuit_lines(lines: Iterable[str]) -> Circuit:
    """Streaming parser for the circuit text format."""
    width = None
    spans = None
    init = 0
    gates: list[Gate] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head == "gate":
            if width is None:
                raise CircuitFormatError("gate before width declaration", lineno)
            g = _parse_gate(line, lineno)
            for w in g.wires():
                if w >= width:
                    raise CircuitFormatError(f"wire {w} outside width {width}", lineno)
            gates.append(g)
        elif head == "width":
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit() or width is not None:
                raise CircuitFormatError(f"bad width line {line!r}", lineno)
            width = int(parts[1])
        elif head == "registers":
            spans = parse_registers(line.split()[1:], lineno)
        elif head == "init":
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise CircuitFormatError(f"bad init line {line!r}", lineno)
            init = int(parts[1])
        else:
            raise CircuitFormatError(f"unknown directive {head!r}", lineno)
    if width is None:
        raise CircuitFormatError("missing width declaration", 0)
    if spans is None:
        raise CircuitFormatError("missing registers declaration", 0)
    try:
        return Circuit(width, spans["input"], spans["output"], spans["ancilla"], tuple(gates), init)
    except CircuitError as exc:
        raise CircuitFormatError(str(exc), 0) from None


def parse_circuit(text: str) -> Circuit:
    return parse_circuit_lines(text.splitlines())


def read_circuit(path: str | Path) -> Circuit:
    with open(path) as fh:
        return parse_circuit_lines(fh)
