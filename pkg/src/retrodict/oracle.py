"""Ground truth by brute force.

Nothing here touches the symbolic engine: circuits are simulated on concrete
bits, preimages are found by enumeration, and equations are checked point by
point.  The module also holds the small state-level computations (purity,
mixed-radix product test) used to discuss entanglement of the superpositions
the symbolic states stand for.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from math import gcd, prod

import numpy as np

from retrodict.anf import Formula
from retrodict.circuit import Circuit, Gate, layout


class ConcreteSimulator:
    """Bit-level executor; the whole register file is one integer (wire ``w`` is bit ``w``)."""

    def __init__(self, c: Circuit):
        self.circuit = c
        self._ops = []
        for g in c.gates:
            pos = neg = 0
            for wire, positive in g.controls:
                if positive:
                    pos |= 1 << wire
                else:
                    neg |= 1 << wire
            self._ops.append((pos, neg, 1 << g.target))

    def __call__(self, state: int) -> int:
        for pos, neg, flip in self._ops:
            if state & pos == pos and not state & neg:
                state ^= flip
        return state

    def run_reversed(self, state: int) -> int:
        for pos, neg, flip in reversed(self._ops):
            if state & pos == pos and not state & neg:
                state ^= flip
        return state


def pack_registers(c: Circuit, x: int, rest: int = 0) -> int:
    """Register file with ``x`` on the input span and ``rest`` on output+ancilla wires in order."""
    state = 0
    for i, w in enumerate(c.input_span):
        if x >> i & 1:
            state |= 1 << w
    for i, w in enumerate([*c.output_span, *c.ancilla_span]):
        if rest >> i & 1:
            state |= 1 << w
    return state


def read_register(state: int, span: Iterable[int]) -> int:
    return sum(((state >> w) & 1) << i for i, w in enumerate(span))


def simulate_concrete(c: Circuit, bits: Sequence[int]) -> list[int]:
    """Classical run on a full bit vector (one entry per wire)."""
    if len(bits) != c.width:
        raise ValueError(f"input has {len(bits)} bits, circuit width is {c.width}")
    state = sum(int(b) << i for i, b in enumerate(bits))
    out = ConcreteSimulator(c)(state)
    return [(out >> i) & 1 for i in range(c.width)]


def circuit_function(c: Circuit, rest: int = 0, include_ancilla: bool = False) -> Callable[[int], int]:
    """``x -> output register`` (optionally followed by the ancillas) of a forward run."""
    sim = ConcreteSimulator(c)
    span = [*c.output_span, *c.ancilla_span] if include_ancilla else list(c.output_span)

    def f(x: int) -> int:
        return read_register(sim(pack_registers(c, x, rest)), span)

    return f


def preimage(f: Callable[[int], int], y: int, n: int) -> set[int]:
    """``{x < 2**n : f(x) == y}``."""
    return {x for x in range(1 << n) if f(x) == y}


def _formula_values(lhs: Formula, n: int) -> np.ndarray:
    # independent point evaluation, vectorized over the 2**n inputs
    xs = np.arange(1 << n, dtype=np.int64)
    acc = np.zeros(1 << n, dtype=np.bool_)
    for m in lhs.terms:
        acc ^= (xs & m) == m
    return acc


def verify_equations(equations: Sequence, f: Callable[[int], int], w: int, n: int) -> bool:
    """True iff, for every ``x < 2**n``, all equations hold exactly when ``f(x) == w``."""
    if n > 24:
        raise ValueError("enumeration bound is n <= 24")
    holds = np.ones(1 << n, dtype=np.bool_)
    for eq in equations:
        if eq.lhs.support >> n:
            return False
        vals = _formula_values(eq.lhs, n)
        holds &= vals if eq.rhs else ~vals
    target = np.fromiter((f(x) == w for x in range(1 << n)), dtype=np.bool_, count=1 << n)
    return bool(np.array_equal(holds, target))


def multiplicative_order(a: int, N: int) -> int:
    """Smallest ``r > 0`` with ``a**r = 1 (mod N)``, by iteration."""
    if gcd(a, N) != 1:
        raise ValueError(f"gcd({a}, {N}) != 1")
    r, v = 1, a % N
    while v != 1 % N:
        v = v * a % N
        r += 1
    return r


# -- superpositions of basis states ---------------------------------------------


@dataclass(frozen=True)
class SupportState:
    """Uniform, phase-free superposition over ``support``; site ``i`` has radix ``dims[i]``.

    Basis index ``m`` decodes little-endian: ``m = sum(d_i * prod(dims[:i]))``.
    """

    support: frozenset[int]
    dims: tuple[int, ...]

    def __init__(self, support: Iterable[int], dims: Sequence[int]):
        object.__setattr__(self, "support", frozenset(support))
        object.__setattr__(self, "dims", tuple(dims))
        size = prod(self.dims)
        if not self.support:
            raise ValueError("empty support")
        bad = [s for s in self.support if not 0 <= s < size]
        if bad:
            raise ValueError(f"basis indices {sorted(bad)} outside 0..{size - 1}")

    def digits(self, m: int) -> tuple[int, ...]:
        out = []
        for d in self.dims:
            m, r = divmod(m, d)
            out.append(r)
        return tuple(out)


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def purity_qubit(state: SupportState) -> float:
    """Average over sites of the summed squared Pauli expectations.

    The state is normalized first.  0 means every single-qubit reduced state
    is maximally mixed; 1 means a product of pure qubit states.
    """
    if any(d != 2 for d in state.dims):
        raise ValueError(f"purity_qubit needs qubit sites, got dims {state.dims}")
    n = len(state.dims)
    psi = np.zeros(1 << n, dtype=complex)
    psi[sorted(state.support)] = 1.0
    psi /= np.linalg.norm(psi)
    # axis k of the reshaped tensor is site n-1-k (little-endian index)
    tensor = psi.reshape((2,) * n)
    total = 0.0
    for site in range(n):
        axis = n - 1 - site
        for sigma in _PAULI.values():
            moved = np.moveaxis(np.tensordot(sigma, tensor, axes=([1], [axis])), 0, axis)
            expectation = np.vdot(tensor, moved)
            total += expectation.real ** 2
    return total / n


def is_product_mixed_radix(state: SupportState) -> bool:
    """Whether the support is the Cartesian product of its per-site digit sets."""
    digit_rows = [state.digits(m) for m in state.support]
    per_site = [set(col) for col in zip(*digit_rows)]
    return len(state.support) == prod(len(s) for s in per_site)


def site_projections(state: SupportState) -> list[set[int]]:
    return [set(col) for col in zip(*(state.digits(m) for m in state.support))]


# -- circuit-level checks -------------------------------------------------------


def check_preimage(c: Circuit, equations: Sequence, observed: Sequence[int], initial: Sequence[int]) -> bool:
    """Whether ``equations`` hold exactly on ``{x : run(x, initial) ends at observed}``.

    ``observed`` covers the output register; ``initial`` covers the output
    register followed by the ancillas, which must come back to their initial
    values for ``x`` to count.
    """
    n_out = len(c.output_span)
    rest = sum(int(b) << i for i, b in enumerate(initial))
    target = [*observed, *initial[n_out:]]
    w = sum(int(b) << i for i, b in enumerate(target))
    f = circuit_function(c, rest=rest, include_ancilla=True)
    return verify_equations(equations, f, w, len(c.input_span))


def random_uf_circuit(rng: random.Random, max_width: int = 12, max_gates: int = 40) -> Circuit:
    """Random circuit that never writes its input register.

    Controls may sit on any wire (either polarity); targets are output or
    ancilla wires, so ancillas may be left dirty.
    """
    n_in = rng.randint(1, max(1, min(6, max_width - 2)))
    n_out = rng.randint(1, max(1, min(4, max_width - n_in - 1)))
    n_anc = rng.randint(0, max_width - n_in - n_out)
    width, inp, out, anc = layout(n_in, n_out, n_anc)
    writable = [*out, *anc]
    gates = []
    for _ in range(rng.randint(0, max_gates)):
        target = rng.choice(writable)
        others = [w for w in range(width) if w != target]
        k = rng.randint(0, min(3, len(others)))
        controls = tuple((w, rng.random() < 0.5) for w in rng.sample(others, k))
        gates.append(Gate(controls, target))
    init = rng.randrange(1 << n_out)
    return Circuit(width, inp, out, anc, tuple(gates), init)
