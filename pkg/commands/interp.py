"""
interp --t <real> [--phi <layer descriptor>]

Solves the two-point Schur interpolation s(t) = 0, s(1) = 1 and prints
the solution with its certificate.
"""
import argparse

from pydantic import TypeAdapter, ValidationError

from core.errors import ScenarioValidationError
from models.schur_map import InterpolationProblem, Polynomial
from runner.builder import build_map
from schemas.scenario import LayerDescriptor
from services.schur_interp import solve_two_point, verify_interpolation

layer_adapter = TypeAdapter(LayerDescriptor)


def parse_phi(document: str):
    try:
        descriptor = layer_adapter.validate_json(document)
    except ValidationError as e:
        fields = [".".join(str(part) for part in error["loc"]) for error in e.errors()]
        raise ScenarioValidationError(f"invalid --phi descriptor: {e.error_count()} error(s)", fields=fields) from e
    return build_map(descriptor)


def handle(args: argparse.Namespace) -> int:
    phi = parse_phi(args.phi) if args.phi else Polynomial((1.0,))
    problem = InterpolationProblem(args.t)
    solution = solve_two_point(problem, phi)
    report = verify_interpolation(solution.s, problem)

    icon = "✅" if report.passed else "❌"
    print(f"{icon} s(z) = {solution.description}")
    print(f"   |s(t)|     = {solution.certificate.residual_at_t:.3e}")
    print(f"   |s(1) - 1| = {solution.certificate.residual_at_1:.3e}")
    print(f"   grid sup   = {solution.certificate.sup_estimate:.12f}")
    if args.json:
        print(solution.model_dump_json(indent=2))
    return 0 if report.passed else 1


def register(subparsers) -> None:
    parser = subparsers.add_parser("interp", help="Two-point Schur interpolation")
    parser.add_argument("--t", type=float, required=True, help="Interior node in [0, 1)")
    parser.add_argument("--phi", default=None, help="Layer descriptor JSON (default: constant 1)")
    parser.add_argument("--json", action="store_true", help="Also print the solution document")
    parser.set_defaults(func=handle)
