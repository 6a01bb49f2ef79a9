"""Command-line surface for the pipeline.

Five subcommands tie the library together::

    scaledph sample two-circles --seed 7 --n 500 --out cloud.csv
    scaledph ph cloud.csv --filtration dvr --n 1 --k auto --out diag.json
    scaledph knn-diag cloud.csv --k-max 30
    scaledph bottleneck a.json b.json --dim 1
    scaledph plot diag.json --out diag.svg

``sample`` writes point-cloud CSV (with a density column when the
generator knows exact densities), ``ph`` writes diagram JSON and
optionally an SVG, ``knn-diag`` writes the k versus component-count
table that the k-selection heuristic reads, ``bottleneck`` prints a
distance with 9 significant digits (``inf`` when infinite-bar counts
differ), and ``plot`` renders a stored diagram.

Runs are deterministic: the same command on the same inputs produces
byte-identical output files.

Exit codes: 0 success, 2 usage error, 3 input error (missing, malformed
or invalid data), 4 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from .datasets import (
    lorenz_delay_cloud,
    make_rng,
    sample_cassini,
    sample_noisy_circle,
    sample_two_circles,
    sample_two_squares,
)
from .density import KERNEL_FAMILIES
from .diagram_metrics import bottleneck
from .filtrations import FiltrationSpec, build_filtration
from .io import read_diagram, read_point_cloud, write_diagram, write_point_cloud
from .persistence import persistence_diagram
from .plotting import write_diagram_svg
from .scaled_metric import NoPlateauError, component_counts

__all__ = [
    "RunConfig",
    "cmd_bottleneck",
    "cmd_knn_diag",
    "cmd_ph",
    "cmd_plot",
    "cmd_sample",
    "main",
]

FILTRATION_FAMILIES = ("vr", "dvr", "wvr", "knn", "cech")


class CliError(Exception):
    """Carries the exit code for a failed command."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters for one persistence run."""

    filtration: str = "vr"
    intrinsic_dim: int = 1
    k: int | str = "auto"
    ell: int = 5
    kernel: str = "biweight"
    field: int = 11
    max_dim: int = 1
    cap: float | None = None
    seed: int = 0
    input_path: str | None = None
    out_path: str | None = None
    svg_path: str | None = None

    def __post_init__(self) -> None:
        if self.filtration not in FILTRATION_FAMILIES:
            raise ValueError(f"unknown filtration {self.filtration!r}")
        if self.intrinsic_dim < 1:
            raise ValueError("intrinsic dimension must be >= 1")
        if self.k != "auto":
            if not isinstance(self.k, int) or self.k < 1:
                raise ValueError('k must be a positive integer or "auto"')
        elif self.ell < 1:
            raise ValueError('k = "auto" requires ell >= 1')
        if self.kernel not in KERNEL_FAMILIES:
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if not _is_prime(self.field):
            raise ValueError(f"field must be prime, got {self.field}")
        if self.max_dim < 0:
            raise ValueError("max-dim must be >= 0")
        if self.cap is not None and not self.cap > 0:
            raise ValueError("cap must be positive")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


def _parse_k(text: str) -> int | str:
    if text == "auto":
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'expected an integer or "auto", got {text!r}'
        ) from None


def _two_circles(rng, n):
    return sample_two_circles(rng, n=n)


def _cassini(rng, n):
    return sample_cassini(rng, n=n)


def _noisy_circle(rng, n):
    return sample_noisy_circle(rng, n_circle=n)


def _two_squares(rng, n):
    return sample_two_squares(rng, n=n)


_DATASETS = {
    "two-circles": (_two_circles, 500),
    "cassini": (_cassini, 200),
    "noisy-circle": (_noisy_circle, 200),
    "two-squares": (_two_squares, 200),
}


def cmd_sample(args: argparse.Namespace) -> int:
    if args.dataset == "lorenz-delay":
        # deterministic trajectory; size fixed by the time grid
        if args.n is not None:
            raise CliError(2, "lorenz-delay has a fixed size; --n does not apply")
        cloud = lorenz_delay_cloud()
    else:
        builder, default_n = _DATASETS[args.dataset]
        n = default_n if args.n is None else args.n
        if n < 1:
            raise CliError(2, "--n must be >= 1")
        cloud = builder(make_rng(args.seed), n)
    write_point_cloud(args.out, cloud)
    return 0


def cmd_ph(args: argparse.Namespace) -> int:
    try:
        config = RunConfig(
            filtration=args.filtration,
            intrinsic_dim=args.n,
            k=args.k,
            ell=args.ell,
            kernel=args.kernel,
            field=args.field,
            max_dim=args.max_dim,
            cap=args.cap,
            input_path=args.input,
            out_path=args.out,
            svg_path=args.svg,
        )
    except ValueError as exc:
        raise CliError(2, str(exc)) from None
    cloud = read_point_cloud(config.input_path)
    spec = FiltrationSpec(
        family=config.filtration,
        max_dim=config.max_dim,
        cap=config.cap,
        intrinsic_dim=float(config.intrinsic_dim),
        k=config.k,
        ell=config.ell,
        kernel_family=config.kernel,
    )
    fc, meta = build_filtration(cloud, spec)
    diagram = persistence_diagram(fc, p=config.field)
    if config.cap is not None:
        meta["cap"] = config.cap
    if config.filtration in ("dvr", "wvr"):
        meta["intrinsic_dim"] = config.intrinsic_dim
    write_diagram(
        config.out_path, diagram, field=config.field, max_dim=config.max_dim,
        meta=meta,
    )
    if config.svg_path is not None:
        write_diagram_svg(config.svg_path, diagram)
    return 0


def cmd_knn_diag(args: argparse.Namespace) -> int:
    cloud = read_point_cloud(args.input)
    counts = component_counts(cloud, args.k_max)
    lines = ["k,components"]
    lines += [f"{k},{int(c)}" for k, c in enumerate(counts, start=1)]
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


def cmd_bottleneck(args: argparse.Namespace) -> int:
    diag_a, _, _, _ = read_diagram(args.diagram_a)
    diag_b, _, _, _ = read_diagram(args.diagram_b)
    dist = bottleneck(diag_a, diag_b, args.dim)
    print("inf" if np.isinf(dist) else format(dist, ".9g"))
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    diagram, _, _, _ = read_diagram(args.diagram)
    write_diagram_svg(args.out, diagram)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scaledph",
        description="Density-scaled Vietoris-Rips persistence pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="write a synthetic dataset as CSV")
    p.add_argument(
        "dataset", choices=sorted(_DATASETS) + ["lorenz-delay"],
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--n", type=int, default=None,
        help="sample size (dataset-specific default; fixed for lorenz-delay)",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("ph", help="compute a persistence diagram")
    p.add_argument("input", help="point-cloud CSV")
    p.add_argument("--filtration", choices=FILTRATION_FAMILIES, default="vr")
    p.add_argument(
        "--n", type=int, default=1, dest="n",
        help="intrinsic dimension for density scaling (dvr, wvr)",
    )
    p.add_argument(
        "--k", type=_parse_k, default="auto",
        help='neighbour count for dvr, or "auto" for plateau selection',
    )
    p.add_argument("--ell", type=int, default=5, help="plateau window for --k auto")
    p.add_argument("--kernel", choices=sorted(KERNEL_FAMILIES), default="biweight")
    p.add_argument("--field", type=int, default=11, help="coefficient prime")
    p.add_argument("--max-dim", type=int, default=1, dest="max_dim")
    p.add_argument(
        "--cap", type=float, default=None,
        help="censor simplices above this filtration value (rank cap for knn)",
    )
    p.add_argument("--out", required=True, help="diagram JSON path")
    p.add_argument("--svg", default=None, help="also render the diagram here")
    p.set_defaults(func=cmd_ph)

    p = sub.add_parser(
        "knn-diag", help="component counts of the k-NN graph for k = 1..k_max"
    )
    p.add_argument("input", help="point-cloud CSV")
    p.add_argument("--k-max", type=int, required=True, dest="k_max")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_knn_diag)

    p = sub.add_parser("bottleneck", help="distance between two stored diagrams")
    p.add_argument("diagram_a")
    p.add_argument("diagram_b")
    p.add_argument("--dim", type=int, default=1, help="homology dimension")
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("plot", help="render a stored diagram to SVG")
    p.add_argument("diagram", help="diagram JSON path")
    p.add_argument("--out", required=True, help="SVG path")
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"scaledph: {exc.message}", file=sys.stderr)
        return exc.code
    except (OSError, ValueError) as exc:
        print(f"scaledph: {exc}", file=sys.stderr)
        return 3
    except (NoPlateauError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"scaledph: numeric failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
