"""Command-line front end.

Bitstrings on the command line are written most significant bit first and
zero-extended to the register width, so ``--observed 1`` on a 3-wire
register means wires (1, 0, 0) in register order.

Exit codes: 0 success, 1 user error, 2 promise violation, 3 internal failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from contextlib import contextmanager
from math import gcd
from pathlib import Path

import numpy as np

from retrodict import algorithms as algo
from retrodict.anf import ONE, ZERO, ANFSyntaxError
from retrodict.arith import ModExpSpec, SynthesisError, compact_4_mod_15, modexp_circuit
from retrodict.circuit import (
    Circuit,
    CircuitError,
    bv_oracle,
    format_circuit,
    grover_oracle,
    histogram,
    oracle_from_function,
    read_circuit,
)
from retrodict.evaluator import (
    Direction,
    WidthMismatch,
    bits_to_int,
    default_initial,
    initial_state,
    int_to_bits,
    parse_equation,
    retrodictive_equations,
    run,
)
from retrodict.mixedradix import (
    NonPeriodic,
    QutritError,
    eval_qutrit,
    four_pow_mod_21,
    int_to_trits,
    preimage_qutrit,
    qutrit_period,
    read_qutrit,
    trits_to_int,
)
from retrodict.oracle import check_preimage, random_uf_circuit, verify_equations

EXIT_OK, EXIT_USER, EXIT_PROMISE, EXIT_INTERNAL = 0, 1, 2, 3
USER_ERRORS = (ValueError, KeyError, OSError, CircuitError, SynthesisError, WidthMismatch, ANFSyntaxError, QutritError)


class UsageError(ValueError):
    pass


def parse_bits(text: str, width: int) -> list[int]:
    """MSB-first bitstring -> little-endian wire values, zero-extended to ``width``."""
    text = text.strip().replace("_", "")
    if not text or set(text) - {"0", "1"}:
        raise UsageError(f"not a bitstring: {text!r}")
    value = int(text, 2)
    if value >> width:
        raise UsageError(f"{text} does not fit in {width} bits")
    return int_to_bits(value, width)


def format_bits(bits) -> str:
    return "".join(str(int(b)) for b in reversed(bits)) or "0"


def parse_int_list(text: str) -> list[int]:
    """``"3,5,8-10"`` -> ``[3, 5, 8, 9, 10]``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty list: {text!r}")
    return out


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(args, payload: dict, lines: list[str]) -> None:
    with _output(args.out) as fh:
        if args.json:
            fh.write(json.dumps(payload) + "\n")
        else:
            for line in lines:
                fh.write(line + "\n")


# -- synth / run / retro ---------------------------------------------------------


def cmd_synth(args) -> int:
    if args.two_gate:
        if (args.a, args.N) != (4, 15):
            raise UsageError("--two-gate is only available for a=4, N=15")
        c = compact_4_mod_15(args.exp_bits or 3)
    else:
        c = modexp_circuit(ModExpSpec(args.a, args.N, exp_bits=args.exp_bits, val_bits=args.val_bits))
    hist = histogram(c)
    summary = {
        "a": args.a,
        "N": args.N,
        "width": c.width,
        "gate_total": len(c),
        "histogram": {str(k): v for k, v in hist.items()},
    }
    if args.out:
        Path(args.out).write_text(format_circuit(c))
        report = sys.stdout
    else:
        sys.stdout.write(format_circuit(c))
        report = sys.stderr
    if args.json:
        report.write(json.dumps(summary) + "\n")
    else:
        report.write(f"width {c.width}, {len(c)} gates\n")
        for arity, count in hist.items():
            report.write(f"  {arity} controls: {count}\n")
    return EXIT_OK


def _initial_bits(c: Circuit, initial: str | None, ancilla: str | None) -> list[int]:
    bits = default_initial(c)
    n_out = len(c.output_span)
    if initial is not None:
        bits[:n_out] = parse_bits(initial, n_out)
    if ancilla is not None:
        bits[n_out:] = parse_bits(ancilla, len(c.ancilla_span))
    return bits


def cmd_run(args) -> int:
    c = read_circuit(args.circuit)
    fixed = _initial_bits(c, args.initial, args.ancilla)
    direction = Direction.RETRODICTIVE if args.backward else Direction.FORWARD
    state = initial_state(c, fixed)
    if args.input is not None:
        x = bits_to_int(parse_bits(args.input, len(c.input_span)))
        for i, w in enumerate(c.input_span):
            state.values[w] = ONE if x >> i & 1 else ZERO
    t0 = time.perf_counter()
    final = run(c, state, direction)
    elapsed = (time.perf_counter() - t0) * 1000
    if final.applied != len(c):
        raise AssertionError(f"applied {final.applied} gates, circuit has {len(c)}")
    outputs = [str(final[w]) for w in c.output_span]
    payload = {
        "direction": direction.value,
        "output": outputs,
        "gate_count": len(c),
        "gates_applied": final.applied,
        "wall_time_ms": elapsed,
    }
    if all(final[w].is_constant for w in c.output_span):
        payload["output_bits"] = format_bits([final[w].constant_value() for w in c.output_span])
        lines = [payload["output_bits"]]
    else:
        lines = [f"y{i} = {f}" for i, f in enumerate(outputs)]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_retro(args) -> int:
    c = read_circuit(args.circuit)
    observed = parse_bits(args.observed, len(c.output_span))
    initial = _initial_bits(c, args.initial, args.ancilla)
    t0 = time.perf_counter()
    eqs = retrodictive_equations(c, observed, initial)
    elapsed = (time.perf_counter() - t0) * 1000
    payload = {"equations": [str(e) for e in eqs], "gate_count": len(c), "wall_time_ms": elapsed}
    _emit(args, payload, [str(e) for e in eqs])
    return EXIT_OK


# -- algo ------------------------------------------------------------------------


def _table_from_text(text: str) -> list[int]:
    if set(text) - {"0", "1"} or len(text) & (len(text) - 1) or len(text) < 2:
        raise UsageError("--table needs 2**n characters 0/1, f(0) first")
    return [int(ch) for ch in text]


def _algo_result(args, name: str, inputs: dict, run_fn) -> int:
    t0 = time.perf_counter()
    answer, equations, solved_by, gate_count = run_fn()
    elapsed = (time.perf_counter() - t0) * 1000
    payload = {
        "algorithm": name,
        "inputs": inputs,
        "equations": [str(e) for e in equations],
        "answer": answer,
        "solved_by": solved_by,
        "gate_count": gate_count,
        "wall_time_ms": elapsed,
    }
    lines = [*payload["equations"], f"answer: {answer}"]
    if solved_by:
        lines.append(f"solved by: {solved_by}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_algo(args) -> int:
    name = args.algorithm
    if name == "dj":
        table = _table_from_text(args.table)

        def go():
            verdict = algo.deutsch_jozsa(table)
            n = len(table).bit_length() - 1
            gates = len(oracle_from_function(n, 1, table))
            return verdict.verdict, [f"{verdict.formula} = 0"], "formula", gates

        return _algo_result(args, name, {"table": args.table}, go)

    if name == "bv":
        c = read_circuit(args.circuit) if args.circuit else bv_oracle(args.n, args.s)
        n = len(c.input_span)

        def go():
            s = algo.bernstein_vazirani(c, n)
            return s, [f"{algo.output_formula(c, 0)} = 0"], "formula", len(c)

        return _algo_result(args, name, {"n": n, "s": args.s}, go)

    if name == "grover":
        c = read_circuit(args.circuit) if args.circuit else grover_oracle(args.n, args.u)
        n = len(c.input_span)

        def go():
            u = algo.grover_search(n, c)
            formula = algo.grover_formula(c)
            text = str(formula) if len(formula.terms) <= args.max_terms else f"<{len(formula.terms)} terms>"
            shown = [f"{text} = 1"]
            return u, shown, "formula", len(c)

        return _algo_result(args, name, {"n": n, "u": args.u}, go)

    if name == "simon":
        if args.circuit:
            c = read_circuit(args.circuit)
        else:
            if args.n is None or args.mask is None:
                raise UsageError("simon needs --circuit or both --n and --mask")
            c = oracle_from_function(args.n, args.n, algo.simon_table(args.n, args.mask))
        n = len(c.input_span)

        def go():
            return algo.simon(c, n), [], "brute-force", len(c)

        return _algo_result(args, name, {"n": n, "mask": args.mask}, go)

    if name == "shor":

        def go():
            res = algo.shor_period(args.a, args.N, args.exp_bits)
            return res.period, res.equations, res.solved_by, res.gate_count

        return _algo_result(args, name, {"a": args.a, "N": args.N, "exp_bits": args.exp_bits}, go)

    if name == "factor":
        rng = random.Random(args.seed)

        def go():
            N = args.N
            if N % 2 == 0:
                return [2, N // 2], [], "even", 0
            bases = [args.a] if args.a else rng.sample(range(2, N - 1), min(args.tries, N - 3))
            for a in bases:
                if gcd(a, N) != 1:
                    g = gcd(a, N)
                    return sorted([g, N // g]), [], "gcd", 0
                res = algo.shor_period(a, N)
                pq = algo.factor(N, a, res.period)
                if pq:
                    return list(pq), res.equations, res.solved_by, res.gate_count
            raise algo.PromiseViolation(f"no base among {bases} yielded a factor")

        return _algo_result(args, name, {"N": args.N, "a": args.a}, go)

    raise UsageError(f"unknown algorithm {name!r}")


# -- verify ----------------------------------------------------------------------


def _verify_equation_file(args) -> list[dict]:
    with open(args.equations) as fh:
        eqs = [parse_equation(line) for line in fh if line.split("#", 1)[0].strip()]
    if args.table:
        with open(args.table) as fh:
            table = [int(tok) for tok in fh.read().split()]
        n = len(table).bit_length() - 1
        if len(table) != 1 << n:
            raise UsageError("truth table length must be a power of two")
        f = table.__getitem__
    elif args.a is not None and args.N is not None:
        n = args.exp_bits or ModExpSpec(args.a % args.N, args.N).exp_bits
        a, N = args.a, args.N
        f = lambda x: pow(a, x, N)  # noqa: E731
    else:
        raise UsageError("--equations needs --table or both --a and --N")
    if n > 24:
        raise UsageError("verification enumerates inputs; at most 24 input bits")
    if args.observed is None:
        raise UsageError("--equations needs --observed (an integer)")
    w = int(args.observed, 0)
    return [{"observed": w, "ok": verify_equations(eqs, f, w, n)}]


def cmd_verify(args) -> int:
    results = []
    if args.equations:
        results = _verify_equation_file(args)
    elif args.circuit:
        c = read_circuit(args.circuit)
        if len(c.input_span) > 24:
            raise UsageError("verification enumerates inputs; at most 24 input wires")
        initial = _initial_bits(c, args.initial, args.ancilla)
        n_out = len(c.output_span)
        if args.observed is not None:
            observed_values = [parse_bits(args.observed, n_out)]
        else:
            if n_out > 12:
                raise UsageError("give --observed for output registers wider than 12 bits")
            observed_values = [int_to_bits(v, n_out) for v in range(1 << n_out)]
        for obs in observed_values:
            eqs = retrodictive_equations(c, obs, initial)
            results.append({"observed": format_bits(obs), "ok": check_preimage(c, eqs, obs, initial)})
    else:
        rng = random.Random(args.seed)
        for k in range(args.random):
            c = random_uf_circuit(rng, args.max_width)
            obs = int_to_bits(rng.randrange(1 << len(c.output_span)), len(c.output_span))
            initial = default_initial(c)
            eqs = retrodictive_equations(c, obs, initial)
            results.append({"case": k, "width": c.width, "ok": check_preimage(c, eqs, obs, initial)})
    failed = [r for r in results if not r["ok"]]
    payload = {"checked": len(results), "failed": failed}
    _emit(args, payload, [f"checked {len(results)}, failed {len(failed)}", *map(str, failed)])
    if failed and args.equations:
        # supplied equations that miss the preimage are a property of the input, not the engine
        return EXIT_USER
    if failed:
        raise AssertionError(f"{len(failed)} preimage check(s) failed")
    return EXIT_OK


# -- bench -----------------------------------------------------------------------


def grover_timing_rows(ns, u_kind: str, repeat: int = 1):
    for n in ns:
        u = 0 if u_kind == "zero" else (1 << n) - 1
        c = grover_oracle(n, u)
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            found = algo.grover_search(n, c)
            best = min(best, (time.perf_counter() - t0) * 1000)
            if found != u:
                raise AssertionError(f"grover returned {found}, expected {u}")
        yield {"n": n, "u_kind": u_kind, "wall_ms": best}


def gate_count_rows(moduli, a: int = 2):
    for N in moduli:
        c = modexp_circuit(ModExpSpec(a % N, N))
        hist = histogram(c)
        yield {
            "N": N,
            "a": a,
            "total_wires": c.width,
            "gate_total": len(c),
            "arity1": hist.get(1, 0),
            "arity2": hist.get(2, 0),
            "arity3plus": sum(v for k, v in hist.items() if k >= 3),
        }


def loglog_slope(xs, ys) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def cmd_bench(args) -> int:
    if args.experiment == "grover-timing":
        rows = list(grover_timing_rows(parse_int_list(args.n), args.u_kind, args.repeat))
        xs, ys, label = [1 << r["n"] for r in rows], [r["wall_ms"] for r in rows], "wall_ms vs 2**n"
    else:
        rows = list(gate_count_rows(parse_int_list(args.moduli), args.a))
        xs, ys, label = [r["total_wires"] for r in rows], [r["gate_total"] for r in rows], "gate_total vs total_wires"
    with _output(args.out) as fh:
        if args.json:
            fh.write(json.dumps(rows) + "\n")
        else:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    if len(rows) >= 2 and min(ys) > 0:
        sys.stderr.write(f"log-log slope ({label}): {loglog_slope(xs, ys):.3f}\n")
    return EXIT_OK


# -- qutrit ----------------------------------------------------------------------


def _parse_trits(text: str, width: int) -> list[int]:
    """MSB-first base-3 digit string, zero-extended."""
    if not text or set(text) - {"0", "1", "2"}:
        raise UsageError(f"not a trit string: {text!r}")
    return int_to_trits(int(text, 3), width)


def cmd_qutrit(args) -> int:
    c = read_qutrit(args.circuit) if args.circuit else four_pow_mod_21()
    n_out = len(c.output_span)
    if args.action == "eval":
        state = [0] * c.width
        x = _parse_trits(args.input, len(c.input_span))
        for w, v in zip(c.input_span, x):
            state[w] = v
        out = eval_qutrit(c, state)
        value = trits_to_int([out[w] for w in c.output_span])
        _emit(args, {"input": args.input, "output": value, "trits": out}, [str(value)])
        return EXIT_OK
    observed = int_to_trits(args.observed, n_out)
    sols = preimage_qutrit(c, observed)
    try:
        r = qutrit_period(c, observed)
    except NonPeriodic as exc:
        raise algo.PromiseViolation(str(exc)) from None
    _emit(args, {"solutions": sols, "period": r}, [f"solutions: {sols}", f"period: {r}"])
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized sweeps")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write results to this path")

    p = argparse.ArgumentParser(prog="retrodict", description="Symbolic retrodictive execution of reversible circuits.")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="synthesize a modular exponentiation circuit")
    s.add_argument("a", type=int)
    s.add_argument("N", type=int)
    s.add_argument("--exp-bits", type=int)
    s.add_argument("--val-bits", type=int)
    s.add_argument("--two-gate", action="store_true", help="hand-optimized 4**x mod 15 circuit")
    s.set_defaults(func=cmd_synth)

    def add_boundary(q):
        q.add_argument("circuit")
        q.add_argument("--initial", help="output register before the run (MSB first)")
        q.add_argument("--ancilla", help="ancilla register before the run (MSB first); default 0")

    r = sub.add_parser("run", parents=[common], help="symbolic or concrete run of a circuit file")
    add_boundary(r)
    r.add_argument("--input", help="concrete input register (MSB first); default symbolic")
    r.add_argument("--backward", action="store_true", help="apply the gates in reverse order")
    r.set_defaults(func=cmd_run)

    r = sub.add_parser("retro", parents=[common], help="equations for inputs that produce an observed output")
    add_boundary(r)
    r.add_argument("--observed", required=True, help="observed output register (MSB first)")
    r.set_defaults(func=cmd_retro)

    a = sub.add_parser("algo", parents=[common], help="run an algorithm driver")
    a.add_argument("algorithm", choices=["dj", "bv", "simon", "grover", "shor", "factor"])
    a.add_argument("--circuit", help="oracle circuit file instead of a generated oracle")
    a.add_argument("--table", help="dj: truth table as 0/1 characters, f(0) first")
    a.add_argument("--n", type=int)
    a.add_argument("--s", type=int, help="bv secret")
    a.add_argument("--u", type=int, help="grover marked input")
    a.add_argument("--mask", type=int, help="simon hidden mask")
    a.add_argument("--a", type=int, help="shor/factor base")
    a.add_argument("--N", type=int, help="shor/factor modulus")
    a.add_argument("--exp-bits", type=int)
    a.add_argument("--tries", type=int, default=8, help="factor: random bases to try")
    a.add_argument("--max-terms", type=int, default=64, help="grover: print formulas up to this many terms")
    a.set_defaults(func=cmd_algo)

    v = sub.add_parser("verify", parents=[common], help="check equations against brute-force preimages")
    v.add_argument("circuit", nargs="?")
    v.add_argument("--equations", help="equations file, checked against --a/--N or --table")
    v.add_argument("--a", type=int, help="function a**x mod N")
    v.add_argument("--N", type=int)
    v.add_argument("--exp-bits", type=int)
    v.add_argument("--table", help="file of integers f(0) f(1) ...")
    v.add_argument("--observed", help="observed output (bits for circuits, integer with --equations)")
    v.add_argument("--initial")
    v.add_argument("--ancilla")
    v.add_argument("--random", type=int, default=200, help="random circuits when no file is given")
    v.add_argument("--max-width", type=int, default=12)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", parents=[common], help="benchmark sweeps as CSV")
    b.add_argument("experiment", choices=["grover-timing", "gate-counts"])
    b.add_argument("--n", default="16-24", help="grover-timing: sizes, e.g. 16-24 or 10,100,1000")
    b.add_argument("--u-kind", choices=["zero", "ones"], default="zero")
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("--moduli", default="15,21,51,85,771")
    b.add_argument("--a", type=int, default=2)
    b.set_defaults(func=cmd_bench)

    q = sub.add_parser("qutrit", parents=[common], help="qutrit circuits (default: 4**x mod 21)")
    q.add_argument("action", choices=["eval", "period"])
    q.add_argument("circuit", nargs="?")
    q.add_argument("--input", default="0", help="eval: input register, base-3 digits MSB first")
    q.add_argument("--observed", type=int, default=1, help="period: observed output value")
    q.set_defaults(func=cmd_qutrit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except algo.PromiseViolation as exc:
        _report_error(args, "promise-violation", exc)
        return EXIT_PROMISE
    except USER_ERRORS as exc:
        _report_error(args, "user-error", exc)
        return EXIT_USER
    except Exception as exc:  # noqa: BLE001
        _report_error(args, "internal-error", exc)
        return EXIT_INTERNAL


def _report_error(args, kind: str, exc: BaseException) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(json.dumps({"error": kind, "message": str(exc)}) + "\n")
    else:
        sys.stderr.write(f"{kind}: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
