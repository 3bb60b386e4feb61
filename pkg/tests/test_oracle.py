import random
from itertools import permutations

import pytest

from retrodict.anf import parse
from retrodict.arith import compact_4_mod_15
from retrodict.circuit import Circuit, Gate, layout
from retrodict.evaluator import Equation, parse_equation
from retrodict.oracle import (
    SupportState,
    circuit_function,
    is_product_mixed_radix,
    multiplicative_order,
    preimage,
    purity_qubit,
    random_uf_circuit,
    simulate_concrete,
    site_projections,
    verify_equations,
)


def test_simulate_concrete_examples():
    c = compact_4_mod_15()
    out = simulate_concrete(c, [1, 0, 0, 0, 0, 0])
    assert out[3:] == [0, 0, 1]  # output register reads 4
    width, inp, out_span, anc = layout(1, 1)
    assert simulate_concrete(Circuit(width, inp, out_span, anc), [1, 0]) == [1, 0]
    assert simulate_concrete(Circuit(width, inp, out_span, anc, (Gate((), 0),)), [0, 0]) == [1, 0]
    with pytest.raises(ValueError):
        simulate_concrete(c, [0])


def test_preimage_examples():
    assert preimage(lambda x: pow(7, x, 15), 4, 4) == {2, 6, 10, 14}
    assert preimage(lambda x: pow(7, x, 15), 5, 4) == set()
    assert preimage(lambda x: x, 9, 4) == {9}


def test_preimage_partitions_domain():
    f = lambda x: (x * x + 3) % 7  # noqa: E731
    parts = [preimage(f, y, 5) for y in range(7)]
    assert set().union(*parts) == set(range(32))
    assert sum(map(len, parts)) == 32


def test_verify_equations_examples():
    eqs = [parse_equation("x0 = 0"), parse_equation("1 + x0 = 1")]
    assert verify_equations(eqs, lambda x: pow(4, x, 15), 1, 9)
    assert not verify_equations([Equation(parse("1"), 0)], lambda x: pow(4, x, 15), 1, 4)
    u5 = [Equation(parse("x0x2 + x0x2x3 + x0x1x2 + x0x1x2x3"), 1)]
    assert verify_equations(u5, lambda x: int(x == 5), 1, 4)
    assert not verify_equations(u5, lambda x: int(x == 6), 1, 4)


def test_preimage_equations_for_seven():
    eqs = [parse_equation("x1 = 1"), parse_equation("x0 = 0")]
    assert verify_equations(eqs, lambda x: pow(7, x, 15), 4, 4)


def test_verify_rejects_out_of_range_variables():
    assert not verify_equations([parse_equation("x5 = 0")], lambda x: 0, 0, 3)
    with pytest.raises(ValueError):
        verify_equations([], lambda x: 0, 0, 25)


def test_circuit_function_with_ancilla():
    rng = random.Random(2)
    c = random_uf_circuit(rng, max_width=8)
    f = circuit_function(c, rest=c.output_init, include_ancilla=True)
    for x in range(1 << len(c.input_span)):
        bits = [(x >> i) & 1 for i in range(len(c.input_span))]
        bits += [(c.output_init >> i) & 1 for i in range(len(c.output_span))]
        bits += [0] * len(c.ancilla_span)
        out = simulate_concrete(c, bits)
        tail = out[len(c.input_span):]
        assert f(x) == sum(b << i for i, b in enumerate(tail))


def test_multiplicative_order():
    assert multiplicative_order(4, 15) == 2
    assert multiplicative_order(7, 15) == 4
    assert multiplicative_order(4, 21) == 3
    assert multiplicative_order(4, 196611) == 16
    with pytest.raises(ValueError):
        multiplicative_order(3, 15)


SIX = [0, 3, 6, 9, 12, 15]


def test_purity_examples():
    assert purity_qubit(SupportState(SIX, (2, 2, 2, 2))) == pytest.approx(0.0, abs=1e-9)
    assert purity_qubit(SupportState(range(16), (2, 2, 2, 2))) == pytest.approx(1.0, abs=1e-9)
    assert purity_qubit(SupportState([0], (2, 2, 2))) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        purity_qubit(SupportState([0], (3, 3)))


def test_purity_bell_state():
    assert purity_qubit(SupportState([0, 3], (2, 2))) == pytest.approx(0.0, abs=1e-9)
    assert purity_qubit(SupportState([0, 1], (2, 2))) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("basis", range(16))
def test_purity_of_basis_states(basis):
    assert purity_qubit(SupportState([basis], (2, 2, 2, 2))) == pytest.approx(1.0, abs=1e-9)


def _permute_sites(support, perm, n):
    out = []
    for m in support:
        bits = [(m >> i) & 1 for i in range(n)]
        out.append(sum(bits[perm[i]] << i for i in range(n)))
    return out


def test_purity_invariant_under_site_permutation():
    support = [0b0001, 0b0110, 0b1011, 0b0100, 0b1111]
    base = purity_qubit(SupportState(support, (2, 2, 2, 2)))
    for perm in permutations(range(4)):
        moved = _permute_sites(support, perm, 4)
        assert purity_qubit(SupportState(moved, (2, 2, 2, 2))) == pytest.approx(base, abs=1e-9)


def test_mixed_radix_product():
    t = SupportState(SIX, (3, 3, 3, 3))
    assert is_product_mixed_radix(t)
    assert site_projections(t) == [{0}, {0, 1, 2}, {0, 1}, {0}]
    assert not is_product_mixed_radix(SupportState(SIX, (2, 2, 2, 2)))
    assert is_product_mixed_radix(SupportState([7], (2, 2, 2)))


def test_support_state_validation():
    with pytest.raises(ValueError):
        SupportState([], (2,))
    with pytest.raises(ValueError):
        SupportState([4], (2, 2))
    assert SupportState([5], (3, 2)).digits(5) == (2, 1)
