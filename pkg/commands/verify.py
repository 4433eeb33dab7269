"""verify [--suite all|scalar|matrix|engine|fixtures] [--seed N]"""
import argparse

from runner.verify import SUITES, run_suites


def handle(args: argparse.Namespace) -> int:
    results = run_suites(args.suite, args.seed)
    failed = [name for name, result in results.items() if not result.passed]
    for name, result in results.items():
        mark = "✔" if result.passed else "✘"
        detail = f" ({result.detail})" if result.detail else ""
        print(f"   {mark} {name}: {result.residual:.3e}{detail}")

    if failed:
        print(f"❌ {len(failed)} of {len(results)} checks failed")
        return 1
    print(f"✅ {len(results)} checks passed")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Run the seeded self-check suites")
    parser.add_argument("--suite", choices=("all",) + SUITES, default="all")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the randomized suites")
    parser.set_defaults(func=handle)
