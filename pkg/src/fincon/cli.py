"""Command-line front end.

``fincon analyze|lie|synthesize|simulate|demo`` reads a system JSON file,
runs one operation and writes a JSON report.  Exit status is 0 on success,
1 on a domain failure (no certificate, dark transition, leakage) and 2 on
bad input or I/O trouble.  The report always embeds the resolved system.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import evolution, graph, lie, models, synthesis
from .jsonio import dumps, load_json, load_state, state_to_dict, write_atomic
from .pulses import Pulse, PulseSequence

__all__ = ["main", "build_parser", "run"]

DEMOS = ("kneer-law", "electron", "drive", "l0-escape")


class InputError(Exception):
    """Validation or I/O problem: exit status 2."""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fincon", description="Finite-controllability analysis and pulse synthesis.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec_required=True):
        sp.add_argument("--spec", required=spec_required, help="system JSON file")
        sp.add_argument("--out", help="report path (default: print the report)")
        sp.add_argument("--seed", type=int, help="seed for a random input state when --in is absent")
        sp.add_argument("--normalize", action="store_true", help="normalize input amplitudes")

    common(sub.add_parser("analyze", help="transfer graph and controllability verdict"))
    lp = sub.add_parser("lie", help="numerical Lie closure of the control operators")
    common(lp)
    lp.add_argument("--max-dim", type=int, default=24)
    lp.add_argument("--max-depth", type=int, default=8)
    sp = sub.add_parser("synthesize", help="pulse sequence to the ground state or to --target")
    common(sp)
    sp.add_argument("--in", dest="inp", help="input state JSON")
    sp.add_argument("--target", help="target state JSON")
    mp = sub.add_parser("simulate", help="apply a pulse sequence")
    common(mp)
    mp.add_argument("--in", dest="inp", help="input state JSON")
    mp.add_argument("--target", help="target state JSON")
    mp.add_argument("--pulses", required=True, help="pulse sequence JSON")
    mp.add_argument("--trace", help="write a CSV population trace here")
    dp = sub.add_parser("demo", help="built-in demonstrations")
    common(dp, spec_required=False)
    dp.add_argument("name", nargs="?", default="kneer-law", choices=DEMOS)
    return p


def _load_model(path):
    try:
        return models.SystemModel.from_dict(load_json(path))
    except OSError as exc:
        raise InputError(f"cannot read system spec: {exc}") from None
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid system spec {path}: {exc}") from None


def _load_state(model, path, normalize):
    try:
        return load_state(model, load_json(path), normalize)
    except OSError as exc:
        raise InputError(f"cannot read state: {exc}") from None
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid state {path}: {exc}") from None


def _random_state(model, seed: int, support: int = 8) -> np.ndarray:
    rng = np.random.default_rng(seed)
    inter = model.interior_indices()
    idx = rng.choice(inter, size=min(support, inter.size), replace=False)
    x = np.zeros(model.dim, dtype=complex)
    x[idx] = rng.normal(size=idx.size) + 1j * rng.normal(size=idx.size)
    return x / np.linalg.norm(x)


def _input_state(model, args):
    if getattr(args, "inp", None):
        return _load_state(model, args.inp, args.normalize)
    if args.seed is not None:
        return _random_state(model, args.seed)
    raise InputError("need --in or --seed")


def _cmd_analyze(model, args):
    ops = models.build_operators(model)
    v = graph.fct_verdict(model, ops)
    g = graph.build_transfer_graph(ops)
    report = {
        "verdict": v.to_dict(),
        "operators": [{"id": op.id, "edges": len(op.edges)} for op in ops],
        "graph": {"vertices": g.n_vertices, "edges": len(g.edges)},
    }
    return 0, report, f"{model.family.value}/{model.scheme}: {v.kind.value}"


def _cmd_lie(model, args):
    ops = [op for op in models.build_operators(model)]
    r = lie.closure(
        [op.matrix for op in ops],
        max_dim=args.max_dim,
        interior=model.interior_indices(),
        max_depth=args.max_depth,
        ids=[op.id for op in ops],
    )
    state = "saturated" if r.saturated else "not saturated"
    return 0, {"closure": r.to_dict()}, f"Lie closure dimension {r.dimension_found} ({state}, depth {r.depth})"


def _cmd_synthesize(model, args):
    ops = models.build_operators(model)
    v = graph.fct_verdict(model, ops)
    report = {"verdict": v.to_dict()}
    if not v.ok:
        return 1, report, f"cannot synthesize: {v.kind.value}"
    x = _input_state(model, args)
    guard = model.guard_indices()
    if args.target:
        y = _load_state(model, args.target, args.normalize)
    else:
        y = np.zeros(model.dim, dtype=complex)
        y[v.root] = 1.0
    try:
        seq = synthesis.transfer(x, y, v, ops, guard) if args.target else synthesis.sweep_to_ground(x, v, ops, guard)
    except synthesis.GuardSupportError as exc:
        raise InputError(str(exc)) from None
    sim = evolution.simulate(x, seq, ops, target=y, guard=guard)
    report.update(
        {
            "input": state_to_dict(x),
            "target": state_to_dict(y),
            "sequence": seq.to_dict(),
            "simulation": _sim_summary(sim),
        }
    )
    return 0, report, f"{len(seq)} pulses, fidelity {sim.fidelity_to_target:.12f}"


def _sim_summary(sim):
    d = sim.to_dict()
    d["final_state"] = state_to_dict(sim.final_state)
    return d


def _cmd_simulate(model, args):
    ops = models.build_operators(model)
    try:
        seq = PulseSequence.from_dict(load_json(args.pulses))
        seq.check_ops(ops)
    except OSError as exc:
        raise InputError(f"cannot read pulses: {exc}") from None
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"invalid pulse sequence: {exc}") from None
    x = _input_state(model, args)
    y = _load_state(model, args.target, args.normalize) if args.target else None
    guard = model.guard_indices()
    trace = [] if args.trace else None
    sim = evolution.simulate(x, seq, ops, target=y, guard=guard, trace=trace)
    if args.trace:
        try:
            write_atomic(args.trace, evolution.population_trace_csv(trace, guard))
        except OSError as exc:
            raise InputError(f"cannot write trace: {exc}") from None
    report = {"input": state_to_dict(x), "pulses": len(seq), "simulation": _sim_summary(sim)}
    fid = "n/a" if sim.fidelity_to_target is None else f"{sim.fidelity_to_target:.12f}"
    return 0, report, f"{len(seq)} pulses simulated, fidelity {fid}, leakage {sim.leakage_guard:.3e}"


def _demo_model(name, args):
    if args.spec:
        return _load_model(args.spec)
    defaults = {
        "kneer-law": models.SystemModel("SpinOscillator", eta=0.1, n_max=6),
        "electron": models.SystemModel("SpinTwoOscillators", n_max=1, l_max=1, guard=0),
        "drive": models.SystemModel("HarmonicOscillator", n_max=32, guard=8),
        "l0-escape": models.SystemModel("BlockExample", n_max=7, guard=0),
    }
    return defaults[name]


def _cmd_demo(model, args):
    name = args.name
    if name == "kneer-law":
        if model.family is not models.Family.SPIN_OSCILLATOR:
            raise InputError("kneer-law demo needs a SpinOscillator system")
        ops = models.build_operators(model)
        v = graph.fct_verdict(model, ops)
        if not v.ok:
            return 1, {"verdict": v.to_dict()}, f"cannot synthesize: {v.kind.value}"
        x = models.basis_state(model, models.SpinHO(models.Spin.UP, 3))
        x += models.basis_state(model, models.SpinHO(models.Spin.DOWN, 2))
        x /= math.sqrt(2)
        seq = synthesis.sweep_to_ground(x, v, ops, model.guard_indices())
        ground = models.basis_state(model, models.SpinHO(models.Spin.DOWN, 0))
        sim = evolution.simulate(ground, synthesis.invert(seq), ops, target=x, guard=model.guard_indices())
        report = {"sweep": seq.to_dict(), "prepare_from_ground": _sim_summary(sim)}
        return 0, report, f"{len(seq)} pulses {'-'.join(seq.op_ids)}; prepared fidelity {sim.fidelity_to_target:.12f}"
    if name == "electron":
        if model.family is not models.Family.SPIN_TWO_OSCILLATORS:
            raise InputError("electron demo needs a SpinTwoOscillators system")
        ops = models.build_operators(model)
        ix = lambda k: models.canonical_index(model, models.electron_ket(k))  # noqa: E731
        seq = PulseSequence(
            (
                Pulse("s", (ix("000"), ix("001")), math.pi, 0.0, "|000> -> |001>"),
                Pulse("sa", (ix("001"), ix("010")), math.pi, 0.0, "|001> -> |010>"),
                Pulse("sc", (ix("010"), ix("111")), math.pi, 0.0, "|010> -> |111>"),
            )
        )
        e000 = models.basis_state(model, models.electron_ket("000"))
        e111 = models.basis_state(model, models.electron_ket("111"))
        a = evolution.simulate(e000, seq, ops, target=e111)
        b = evolution.simulate((e000 + e111) / math.sqrt(2), seq, ops, target=e000)
        v = graph.fct_verdict(model, ops)
        report = {
            "verdict": v.to_dict(),
            "sequence": seq.to_dict(),
            "eigenstate_fidelity": a.fidelity_to_target,
            "superposition_fidelity_to_000": b.fidelity_to_target,
        }
        return 0, report, (
            f"|000> -> |111> fidelity {a.fidelity_to_target:.12f}; "
            f"superposition keeps fidelity {b.fidelity_to_target:.12f} to |000>"
        )
    if name == "drive":
        if model.family is not models.Family.HARMONIC_OSCILLATOR:
            raise InputError("drive demo needs a HarmonicOscillator system")
        psi, tr = evolution.drive_oscillator(0.1, 1200, 0.05, model, trace=True)
        fit = evolution.fit_coherent(psi)
        report = {
            "amplitude": 0.1,
            "steps": 1200,
            "dt": 0.05,
            "final_alpha": [fit.alpha.real, fit.alpha.imag],
            "min_coherent_fidelity": float(tr.coherent_fidelity.min()),
            "max_number_state_fidelity": float(tr.max_number_fidelity.max()),
            "final_mean_occupation": float(tr.mean_occupation[-1]),
            "max_leakage": float(tr.leakage.max()),
        }
        return 0, report, (
            f"<n> = {tr.mean_occupation[-1]:.4f}, min coherent fidelity {tr.coherent_fidelity.min():.12f}"
        )
    if model.family is not models.Family.BLOCK_EXAMPLE:
        raise InputError("l0-escape demo needs a BlockExample system")
    r = evolution.l0_escape_demo(model.dim)
    report = {k: val for k, val in r.items() if not k.endswith("_state")}
    return 0, report, f"alternating support {r['alternating_support']}, sum support {r['sum_support']} of {r['dim']}"


_COMMANDS = {
    "analyze": _cmd_analyze,
    "lie": _cmd_lie,
    "synthesize": _cmd_synthesize,
    "simulate": _cmd_simulate,
    "demo": _cmd_demo,
}

_DOMAIN_ERRORS = (
    synthesis.SynthesisError,
    evolution.DarkTransitionError,
    evolution.TruncationLeakageError,
)


def run(args: argparse.Namespace) -> int:
    try:
        model = _demo_model(args.name, args) if args.command == "demo" else _load_model(args.spec)
        try:
            code, body, summary = _COMMANDS[args.command](model, args)
        except _DOMAIN_ERRORS as exc:
            code, body, summary = 1, {"error": f"{type(exc).__name__}: {exc}"}, f"failed: {exc}"
        report = {"command": args.command, "system": model.to_dict(), "status": "ok" if code == 0 else "failed"}
        if args.seed is not None:
            report["seed"] = args.seed
        report.update(body)
        text = dumps(report)
        if args.out:
            try:
                write_atomic(args.out, text)
            except OSError as exc:
                raise InputError(f"cannot write report: {exc}") from None
        else:
            sys.stdout.write(text)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(summary)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
