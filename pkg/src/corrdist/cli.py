"""Command-line front end.

Every subcommand is a thin adapter over a library call. Numbers are printed
with nine digits after the decimal point; ``--nats`` switches information
quantities from bits to nats. Exit status: 0 success, 1 invalid input or
domain error, 2 usage error, 3 an asserted sweep found violations.
"""

import argparse
import sys

import numpy as np

from . import bell, bounds, io, prob_core, qubit_core
from .errors import ConsistencyError, DomainError, ValidationError
from .units import BITS, NATS
from .verify import KINDS, emit_figure, run_sweep

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3


def fmt(value):
    return f"{float(value):.9f}"


def _unit(args):
    return NATS if args.nats else BITS


def _vector(text):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if len(values) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers")
    return np.array(values)


def _key_value(text):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, value


def _load_input(args):
    """('classical', table) or ('quantum', state) from --table/--state/--binary."""
    if args.table is not None:
        return "classical", io.read_table_csv(args.table)
    if args.state is not None:
        return "quantum", io.read_state_json(args.state)
    x, y, r = args.binary
    return "classical", prob_core.binary_joint_from_params(prob_core.BinaryParams(x, y, r))


def cmd_mi(args):
    kind, obj = _load_input(args)
    if kind == "classical":
        value = prob_core.classical_mutual_information(obj, unit=_unit(args))
    else:
        value = qubit_core.quantum_mutual_information(obj, unit=_unit(args))
    print(fmt(value))


def cmd_cdist(args):
    kind, obj = _load_input(args)
    if kind == "classical":
        value = prob_core.classical_correlation_distance(obj)
    else:
        value = qubit_core.quantum_correlation_distance(obj)
    print(fmt(value))


def cmd_classical_bound(args):
    print(fmt(bounds.classical_tight_bound(args.c, unit=_unit(args))))


def cmd_quantum_bound(args):
    print(fmt(bounds.quantum_tight_bound(args.c, unit=_unit(args))))


def cmd_pinsker(args):
    print(fmt(bounds.pinsker_bound(args.c, unit=_unit(args))))


def cmd_c0(args):
    print(fmt(bounds.c0()))


def cmd_entangle(args):
    report = qubit_core.entanglement_report(io.read_state_json(args.state))
    print(f"correlation_distance={fmt(report.correlation_distance)}")
    print(f"purity_bound={fmt(report.purity_bound)}")
    print(f"covariance_sum={fmt(report.covariance_sum)}")
    print(f"min_pt_eigenvalue={fmt(report.min_pt_eigenvalue)}")
    for name in ("cdist_gt_one", "purity_criterion", "covariance_criterion", "ppt_entangled"):
        print(f"{name}={str(bool(getattr(report, name))).lower()}")


_SCALAR_PARAMS = {"p", "c", "r1", "r2", "r3"}
_VECTOR_PARAMS = {"u", "v"}


def _state_params(args):
    params = {}
    for key, value in args.param or []:
        if key in _SCALAR_PARAMS:
            try:
                params[key] = float(value)
            except ValueError:
                raise ValidationError(f"parameter {key} needs a number, got {value!r}")
        elif key in _VECTOR_PARAMS:
            try:
                params[key] = _vector(value)
            except argparse.ArgumentTypeError as exc:
                raise ValidationError(f"parameter {key}: {exc}")
        else:
            raise ValidationError(f"unknown state parameter {key!r}")
    if args.family == "classically_correlated":
        if args.table is None:
            raise ValidationError("classically_correlated needs --table")
        params["table"] = io.read_table_csv(args.table)
        if args.a_axis is not None or args.b_axis is not None:
            a = args.a_axis if args.a_axis is not None else np.array([0.0, 0.0, 1.0])
            b = args.b_axis if args.b_axis is not None else np.array([0.0, 0.0, 1.0])
            params["bases"] = (qubit_core.spin_basis(a), qubit_core.spin_basis(b))
    return params


def cmd_make_state(args):
    rho = qubit_core.make_state(args.family, **_state_params(args))
    io.write_state_json(args.out, rho)


def cmd_twirl(args):
    rho = qubit_core.twirl(io.read_state_json(args.state))
    if args.out is None:
        sys.stdout.write(io.state_to_json(rho))
    else:
        io.write_state_json(args.out, rho)


def cmd_bell_resources(args):
    res = bell.simulation_resources(args.v, unit=_unit(args))
    print(f"c_max={fmt(res.c_max_required)}")
    print(f"i_min={fmt(res.i_min)}")


def cmd_model_check(args):
    model = io.read_model_json(args.model)
    a = bell.model_analysis(model)
    bound = bell.relaxed_chsh_bound(min(a.c_max, 1.0))
    print(f"chsh={fmt(a.chsh)}")
    print(f"c_max={fmt(a.c_max)}")
    print(f"outcome_independent={str(a.outcome_independent).lower()}")
    print(f"relaxed_bound={fmt(bound)}")
    print(f"within_bound={str(a.chsh <= bound + 1e-9).lower()}")


def cmd_verify(args):
    report = run_sweep(args.kind, args.samples, args.seed, workers=args.workers)
    for line in report.summary_lines():
        print(line)
    print(f"worst_case={report.worst_case}")
    if report.failed:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_figure(args):
    emit_figure(args.which, args.step, args.out, unit=_unit(args))


def build_parser():
    # --nats is accepted both before and after the subcommand name.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--nats", action="store_true", default=argparse.SUPPRESS, help="report in nats"
    )
    parser = argparse.ArgumentParser(
        prog="corrdist",
        description="Correlation distance and mutual-information bounds for bits and qubits.",
    )
    parser.add_argument("--nats", action="store_true", help="report in nats (default bits)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    for name, func, text in (
        ("mi", cmd_mi, "mutual information of a table or state"),
        ("cdist", cmd_cdist, "correlation distance of a table or state"),
    ):
        p = add(name, func, text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--table", help="joint table CSV")
        src.add_argument("--state", help="two-qubit state JSON")
        src.add_argument(
            "--binary", nargs=3, type=float, metavar=("X", "Y", "R"), help="2x2 table parameters"
        )

    for name, func, text in (
        ("classical-bound", cmd_classical_bound, "tight classical lower bound at C"),
        ("quantum-bound", cmd_quantum_bound, "tight qubit lower bound at C"),
        ("pinsker", cmd_pinsker, "Pinsker lower bound at C"),
    ):
        add(name, func, text).add_argument("--c", type=float, required=True)

    add("c0", cmd_c0, "branch threshold of the qubit bound")

    add("entangle", cmd_entangle, "entanglement criteria for a state").add_argument(
        "--state", required=True
    )

    p = add("make-state", cmd_make_state, "write a state from a named family")
    p.add_argument("--family", required=True, choices=qubit_core.FAMILIES)
    p.add_argument(
        "--param", action="append", type=_key_value, metavar="KEY=VALUE",
        help="family parameter (p, c, r1, r2, r3, u=x,y,z, v=x,y,z); repeatable",
    )
    p.add_argument("--table", help="joint table CSV for classically_correlated")
    p.add_argument("--a-axis", type=_vector, help="measurement axis on A, x,y,z")
    p.add_argument("--b-axis", type=_vector, help="measurement axis on B, x,y,z")
    p.add_argument("--out", required=True)

    p = add("twirl", cmd_twirl, "twirl a state")
    p.add_argument("--state", required=True)
    p.add_argument("--out", help="output JSON (default stdout)")

    add("bell-resources", cmd_bell_resources, "correlation needed for a CHSH violation").add_argument(
        "--v", type=float, required=True, help="violation V = CHSH - 2"
    )

    add("model-check", cmd_model_check, "analyse a hidden-variable model").add_argument(
        "--model", required=True
    )

    p = add("verify", cmd_verify, "run a seeded property sweep")
    p.add_argument("--kind", required=True, choices=sorted(KINDS))
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)

    p = add("figure", cmd_figure, "write bound-curve CSV data")
    p.add_argument("--which", required=True, choices=("fig1", "fig2"))
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--out", required=True)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if not hasattr(args, "nats"):
        args.nats = False
    try:
        code = args.func(args)
    except (ValidationError, DomainError, ConsistencyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
