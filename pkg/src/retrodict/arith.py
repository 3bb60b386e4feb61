"""Reversible arithmetic built from generalized Toffoli gates.

The construction is the classic ripple-carry family: a plain adder with
explicit carry ancillas, a modular adder made of five adder passes, a
controlled modular multiplier that accumulates shifted constants, and modular
exponentiation as a cascade of in-place controlled multipliers, one per
exponent bit.

Register conventions (all little-endian, wire lists):

* ``a``: ``n``-bit addend
* ``b``: ``n+1``-bit accumulator; the extra bit receives the carry-out
* ``c``: ``n`` carry ancillas
* ``l``: ``n``-bit scratch register for the modulus
* ``t``: one flag ancilla
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from retrodict.circuit import NEG, POS, Circuit, Gate, ccx, cx, layout, x_gate


class SynthesisError(ValueError):
    pass


def _carry(c: int, a: int, b: int, c_next: int) -> list[Gate]:
    return [ccx(a, b, c_next), cx(a, b), ccx(c, b, c_next)]


def _sum(c: int, a: int, b: int) -> list[Gate]:
    return [cx(a, b), cx(c, b)]


def adder_gates(a: list[int], b: list[int], c: list[int]) -> list[Gate]:
    """``b <- (a + b) mod 2**(n+1)``; carries return to 0."""
    n = len(a)
    if len(b) != n + 1 or len(c) != n:
        raise SynthesisError("adder needs |b| = n+1 and |c| = n")
    gates: list[Gate] = []
    for i in range(n):
        gates += _carry(c[i], a[i], b[i], c[i + 1] if i < n - 1 else b[n])
    gates.append(cx(a[n - 1], b[n - 1]))
    gates += _sum(c[n - 1], a[n - 1], b[n - 1])
    for i in range(n - 2, -1, -1):
        gates += _carry(c[i], a[i], b[i], c[i + 1])[::-1]
        gates += _sum(c[i], a[i], b[i])
    return gates


def _bits(value: int) -> list[int]:
    return [j for j in range(value.bit_length()) if value >> j & 1]


def modadd_gates(
    a: list[int], b: list[int], c: list[int], l: list[int], t: int, modulus: int
) -> list[Gate]:
    """``b <- (a + b) mod N`` for ``a, b < N``; ``c``, ``l``, ``t`` return to 0."""
    n = len(a)
    if not 0 < modulus < 1 << n:
        raise SynthesisError(f"modulus {modulus} needs 0 < N < 2**{n}")
    add = adder_gates(a, b, c)
    add_l = adder_gates(l, b, c)
    load = [x_gate(l[j]) for j in _bits(modulus)]
    cload = [cx(t, l[j]) for j in _bits(modulus)]
    msb = b[n]
    return (
        add
        + load + add_l[::-1] + load     # b = a + b - N, msb set on underflow
        + [cx(msb, t)]
        + cload + add_l + cload         # add N back when it underflowed
        + add[::-1]
        + [Gate(((msb, NEG),), t)]      # b - a underflows iff no wrap happened
        + add
    )


@dataclass
class _Workspace:
    """Ancilla registers shared by the multiplier blocks."""

    z: list[int]
    a: list[int]
    c: list[int]
    l: list[int]
    t: int


def _cmult_gates(
    ctrl: int, xreg: list[int], ws: _Workspace, k: int, modulus: int, block: list[Gate]
) -> list[Gate]:
    """``z <- k*x mod N`` if ctrl else ``z <- x``, with ``z`` initially 0."""
    gates: list[Gate] = []
    for i, xi in enumerate(xreg):
        const = (k << i) % modulus
        load = [Gate(((ctrl, POS), (xi, POS)), ws.a[j]) for j in _bits(const)]
        gates += load
        gates += block
        gates += load
    gates += [Gate(((ctrl, NEG), (xj, POS)), ws.z[j]) for j, xj in enumerate(xreg)]
    return gates


def ctrl_modmul_gates(
    ctrl: int, v: list[int], ws: _Workspace, k: int, modulus: int, block: list[Gate] | None = None
) -> list[Gate]:
    """In place: ``v <- k*v mod N`` when ``ctrl`` is 1; ancillas end at 0.

    Requires ``v < N`` on entry.  ``block`` may pass a precomputed modular
    adder on the workspace so repeated stages share gate objects.
    """
    if gcd(k, modulus) != 1:
        raise SynthesisError(f"{k} is not invertible modulo {modulus}")
    if block is None:
        block = modadd_gates(ws.a, ws.z, ws.c, ws.l, ws.t, modulus)
    k %= modulus
    k_inv = pow(k, -1, modulus)
    swap: list[Gate] = []
    for vj, zj in zip(v, ws.z):
        swap += [cx(vj, zj), cx(zj, vj), cx(vj, zj)]
    return (
        _cmult_gates(ctrl, v, ws, k, modulus, block)
        + swap
        + _cmult_gates(ctrl, v, ws, k_inv, modulus, block)[::-1]
    )


def _workspace(first: int, n: int) -> tuple[_Workspace, int]:
    z = list(range(first, first + n + 1))
    a = list(range(z[-1] + 1, z[-1] + 1 + n))
    c = list(range(a[-1] + 1, a[-1] + 1 + n))
    l = list(range(c[-1] + 1, c[-1] + 1 + n))
    t = l[-1] + 1
    return _Workspace(z, a, c, l, t), 4 * n + 2


# -- standalone circuits --------------------------------------------------------


def adder(n: int) -> Circuit:
    """Input ``a`` (n wires), output ``b`` (n+1 wires), ancilla carries (n wires)."""
    if n < 1:
        raise SynthesisError("adder needs n >= 1")
    width, inp, out, anc = layout(n, n + 1, n)
    return Circuit(width, inp, out, anc, tuple(adder_gates(list(inp), list(out), list(anc))))


def modular_adder(n: int, modulus: int) -> Circuit:
    """Input ``a`` (n), output ``b`` (n+1); ancillas: carries, modulus scratch, flag."""
    width, inp, out, anc = layout(n, n + 1, 2 * n + 1)
    c = list(anc[:n])
    l = list(anc[n:2 * n])
    t = anc[2 * n]
    return Circuit(width, inp, out, anc, tuple(modadd_gates(list(inp), list(out), c, l, t, modulus)))


def ctrl_modmul(n: int, modulus: int, k: int) -> Circuit:
    """Input: one control wire; output: ``v`` (n wires); ancillas: workspace."""
    if not 0 < modulus < 1 << n:
        raise SynthesisError(f"modulus {modulus} needs 0 < N < 2**{n}")
    ws, n_anc = _workspace(1 + n, n)
    width, inp, out, anc = layout(1, n, n_anc)
    gates = ctrl_modmul_gates(inp[0], list(out), ws, k, modulus)
    return Circuit(width, inp, out, anc, tuple(gates))


@dataclass(frozen=True)
class ModExpSpec:
    """``f(x) = a**x mod N`` on an ``exp_bits`` exponent register.

    ``exp_bits`` defaults to ``ceil(log2(N**2))``, ``val_bits`` to the bit
    length of ``N``.
    """

    a: int
    N: int
    exp_bits: int | None = None
    val_bits: int | None = None

    def __post_init__(self):
        if self.N < 2:
            raise SynthesisError(f"modulus must be at least 2, got {self.N}")
        if not 0 < self.a < self.N:
            raise SynthesisError(f"base must satisfy 0 < a < N, got a={self.a}, N={self.N}")
        if gcd(self.a, self.N) != 1:
            raise SynthesisError(f"gcd({self.a}, {self.N}) != 1")
        if self.exp_bits is None:
            object.__setattr__(self, "exp_bits", (self.N * self.N - 1).bit_length())
        if self.val_bits is None:
            object.__setattr__(self, "val_bits", self.N.bit_length())
        if self.exp_bits < 1:
            raise SynthesisError("exponent register needs at least one wire")
        if self.val_bits < self.N.bit_length():
            raise SynthesisError(f"value register of {self.val_bits} bits cannot hold residues of {self.N}")

    @property
    def total_wires(self) -> int:
        return self.exp_bits + 5 * self.val_bits + 2


def modexp_circuit(spec: ModExpSpec) -> Circuit:
    """``|x; 1; 0...> -> |x; a**x mod N; 0...>``.

    Stage ``i`` multiplies the value register by ``a**(2**i) mod N`` under
    control of exponent wire ``i``.
    """
    m, n, N = spec.exp_bits, spec.val_bits, spec.N
    ws, n_anc = _workspace(m + n, n)
    width, inp, out, anc = layout(m, n, n_anc)
    v = list(out)
    block = modadd_gates(ws.a, ws.z, ws.c, ws.l, ws.t, N)
    gates: list[Gate] = []
    k = spec.a % N
    for i in range(m):
        gates += ctrl_modmul_gates(inp[i], v, ws, k, N, block)
        k = k * k % N
    return Circuit(width, inp, out, anc, tuple(gates), output_init=1)


def compact_4_mod_15(exp_bits: int = 3) -> Circuit:
    """Hand-optimized two-gate circuit XOR-ing ``4**x mod 15`` into a 3-bit register."""
    width, inp, out, anc = layout(exp_bits, 3)
    gates = (Gate(((inp[0], NEG),), out[0]), Gate(((inp[0], POS),), out[2]))
    return Circuit(width, inp, out, anc, gates)
