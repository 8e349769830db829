"""Command-line interface for holdermap.

Every subcommand reads space files (distance-matrix CSV, space JSON or point-cloud
JSON), writes JSON to standard output or `--output`, and reports diagnostics on the
error stream.

Usage:
    holdermap gen cantor --depth 3          # 16 endpoints of the Cantor set
    holdermap validate space.csv            # Size, diameter and ultrametricity
    holdermap delta space.csv --s 0.6309    # Exact delta^s of a small space
    holdermap boxdim cloud.json --radii 0.1,0.01,0.001
    holdermap ssc-check --q 2 --r 0.3333333333333333 --ratios 0.5,0.25

Exit status is 0 on success, 2 on invalid input and 3 when a size cap or search
budget is exceeded.
"""

__all__ = ["cli", "emit_profile_csv"]

import csv
import functools
import io
import logging
import math
import os
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, TypeVar, Union

import click
import numpy as np
from pydantic import TypeAdapter, ValidationError

from holdermap import (
    __version__,
    chain_energy,
    cover_numbers,
    delta_solver,
    fractal_gen,
    holder_map,
    lip_cover,
    metric_core,
    selfsimilar_check,
    ultra_tools,
)
from holdermap.exceptions import (
    BudgetExceededError,
    InvalidInputError,
    LimitExceededError,
    MalformedFileError,
    VerificationFailureError,
)
from holdermap.schemas import BaseModel
from holdermap.schemas.chain import DeltaMode, ProfileRow
from holdermap.schemas.cover import TruncatedCoverValue
from holdermap.schemas.config import OutputFormat, RunConfig
from holdermap.schemas.fractal import CarpetSpec, IfsSpec
from holdermap.schemas.metric import FiniteMetricSpace, PointCloud, SpaceSummary
from holdermap.schemas.selfsimilar import HomogeneousSpec
from holdermap.schemas.ultrametric import MapTable

LOGGER = logging.getLogger(__name__)
EXIT_INVALID = 2
EXIT_LIMIT = 3
INPUT_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)
OUTPUT_FILE = click.Path(dir_okay=False, writable=True, path_type=Path)
ModelT = TypeVar("ModelT", bound=BaseModel)


class NumberList(click.ParamType):
    """Comma separated numbers, parsed with `kind` (int, float or Fraction)."""

    name = "list"

    def __init__(self, kind: Callable[[str], Any]):
        self.kind = kind

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> list:
        if isinstance(value, list):
            return value
        try:
            return [self.kind(x.strip()) for x in str(value).split(",") if x.strip()]
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a comma separated list of numbers", param, ctx)


def handle_errors(func: Callable) -> Callable:
    """Map holdermap errors onto exit statuses, printing them on the error stream."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except LimitExceededError as err:
            click.echo(f"Error: {err}", err=True)
            sys.exit(EXIT_LIMIT)
        except (InvalidInputError, ValidationError) as err:
            click.echo(f"Error: {err}", err=True)
            sys.exit(EXIT_INVALID)
        except VerificationFailureError as err:
            click.echo(f"Internal error: {err}", err=True)
            sys.exit(1)

    return wrapper


def _configure(subcommand: str, **flags) -> RunConfig:
    ctx = click.get_current_context()
    flags = {key: value for key, value in flags.items() if value is not None}
    config = RunConfig(subcommand=subcommand, threads=ctx.obj["threads"], **flags)
    LOGGER.debug("Running %s", config)
    return config


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        click.echo(text, nl=False)
    else:
        output.write_text(text, encoding="utf-8")


def _dump_all(models: Sequence[ModelT], model: type[ModelT]) -> str:
    return TypeAdapter(list[model]).dump_json(list(models), indent=2).decode() + "\n"


def _dump(model: BaseModel, **kwargs) -> str:
    return model.model_dump_json(indent=2, **kwargs) + "\n"


def _read_model(path: Path, model: type[ModelT]) -> ModelT:
    try:
        return model.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as err:
        field = ".".join(str(x) for x in err.errors()[0]["loc"]) or None
        raise MalformedFileError(path, str(err), field=field) from err


def _require(value: Any, flag: str, subcommand: str) -> None:
    if value is None:
        raise InvalidInputError(f"{subcommand} needs {flag}")


def _cell(value: Union[bool, int, float, str]) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_profile_csv(
    rows: Sequence[Sequence[Union[bool, int, float, str]]],
    header: Sequence[str],
    path: Optional[Path] = None,
) -> str:
    """Render plot data as CSV, writing it to `path` when given.

    Floats are written with `repr`, so the decimal point never depends on the locale
    and values read back unchanged.

    Args:
        rows: Data rows, each as long as the header.
        header: Column names.
        path: Destination file.

    Returns:
        The CSV text.

    Raises:
        InvalidInputError: If a row's length differs from the header's.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise InvalidInputError(f"Row {list(row)} does not match columns {list(header)}")
        writer.writerow([_cell(x) for x in row])
    text = buffer.getvalue()
    if path is not None:
        path.write_text(text, encoding="utf-8")
    return text


def _sorted_order(sample: Union[FiniteMetricSpace, PointCloud]) -> list[int]:
    if not isinstance(sample, PointCloud) or sample.arity != 1:
        raise InvalidInputError("--sorted needs a point cloud in R")
    return np.argsort(sample.points[:, 0], kind="stable").tolist()


@click.group()
@click.version_option(version=__version__, prog_name="holdermap")
@click.option("-v", "--verbose", count=True, help="Log INFO with -v and DEBUG with -vv.")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker threads, all cores by default.")
@click.pass_context
def cli(ctx: click.Context, verbose: int, threads: Optional[int]):
    """Hölder parametrizations, chain energies and cover numbers of finite metric spaces.

    Examples:

        holdermap gen cantor --depth 3 -o cantor.json

        holdermap delta cantor.json --s 0.6309 --mode nettree

        holdermap cover cantor.json --r 0.05 --exact
    """
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"threads": threads or os.cpu_count() or 1}


@cli.command()
@click.argument("kind", type=click.Choice(["cantor", "ifs", "carpet", "tree", "grid", "random"]))
@click.option("--depth", type=int, help="Construction depth.")
@click.option("--hole", default="1/3", show_default=True, help="Removed middle fraction of the Cantor set.")
@click.option("--spec", "spec_path", type=INPUT_FILE, help="IFS or carpet JSON description.")
@click.option("--arities", type=NumberList(int), help="Children per tree level, root first.")
@click.option("--diams", type=NumberList(float), help="Leaf distance per tree level, decreasing.")
@click.option("--count", type=int, help="Number of points (grid, random) or most leaves (tree).")
@click.option("--dim", type=click.IntRange(min=1), default=2, show_default=True, help="Dimension of random clouds.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-depth", type=int, default=fractal_gen.MAX_CANTOR_DEPTH, show_default=True)
@click.option("--format", "fmt", type=click.Choice([x.value for x in OutputFormat]), default="json")
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def gen(
    kind: str,
    depth: Optional[int],
    hole: str,
    spec_path: Optional[Path],
    arities: Optional[list[int]],
    diams: Optional[list[float]],
    count: Optional[int],
    dim: int,
    seed: int,
    max_depth: int,
    fmt: str,
    output: Optional[Path],
):
    """Generate a sample space.

    Clouds are written as JSON point clouds or, with --format csv, as distance matrices.

    Examples:

        holdermap gen cantor --depth 3

        holdermap gen carpet --spec carpet.json --depth 2 --format csv

        holdermap gen tree --arities 2,3 --diams 1,0.25
    """
    config = _configure(
        "gen",
        inputs=[spec_path] if spec_path else None,
        depth=depth,
        seed=seed,
        output=output,
        format=fmt,
    )
    if kind in ("cantor", "ifs", "carpet"):
        _require(config.depth, "--depth", f"gen {kind}")
    if kind in ("ifs", "carpet"):
        _require(spec_path, "--spec", f"gen {kind}")
    if kind in ("grid", "random"):
        _require(count, "--count", f"gen {kind}")

    sample: Union[FiniteMetricSpace, PointCloud]
    if kind == "cantor":
        try:
            hole_value = Fraction(hole)
        except (ValueError, ZeroDivisionError) as err:
            raise InvalidInputError(f"--hole {hole!r} is not a fraction") from err
        sample = fractal_gen.cantor_endpoints(config.depth, hole=hole_value, max_depth=max_depth)
    elif kind == "ifs":
        sample = fractal_gen.ifs_sample(_read_model(spec_path, IfsSpec), config.depth)
    elif kind == "carpet":
        sample = fractal_gen.carpet_sample(_read_model(spec_path, CarpetSpec), config.depth)
    elif kind == "tree":
        if arities is None and diams is None:
            sample = fractal_gen.random_tree_space(max_leaves=count or 64, seed=config.seed)
        else:
            _require(arities, "--arities", "gen tree")
            _require(diams, "--diams", "gen tree")
            sample = fractal_gen.ultrametric_tree_space(arities, diams)
    elif kind == "grid":
        sample = fractal_gen.uniform_grid(count)
    else:
        sample = fractal_gen.random_cloud(count, arity=dim, seed=config.seed)
    LOGGER.info("Generated %d points (%s)", sample.size, kind)

    if config.format is OutputFormat.CSV:
        space = metric_core.from_points(sample) if isinstance(sample, PointCloud) else sample
        _emit(metric_core.format_csv(space), config.output)
    elif isinstance(sample, PointCloud):
        _emit(_dump(sample), config.output)
    else:
        _emit(_dump(sample, exclude_none=True), config.output)


@cli.command()
@click.argument("path", type=INPUT_FILE)
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def validate(path: Path, output: Optional[Path]):
    """Check that a file holds a metric space and summarize it."""
    config = _configure("validate", inputs=[path], output=output)
    sample = metric_core.read_sample(path)
    if isinstance(sample, PointCloud):
        sample = metric_core.from_points(sample)
    summary = SpaceSummary(
        size=sample.size,
        diameter=metric_core.diameter(sample),
        min_distance=metric_core.min_distance(sample) if sample.size > 1 else None,
        ultrametric=ultra_tools.is_ultrametric(sample).is_ultrametric,
    )
    _emit(_dump(summary, exclude_none=True), config.output)


@cli.command()
@click.argument("path", type=INPUT_FILE)
@click.option("--s", "s", type=float, required=True, help="Exponent of the chain energy.")
@click.option("--order", type=NumberList(int), help="Permutation of the point indices.")
@click.option("--sorted", "sort", is_flag=True, help="Order points of R increasingly.")
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def zscore(path: Path, s: float, order: Optional[list[int]], sort: bool, output: Optional[Path]):
    """Z^s of one ordering of a space."""
    config = _configure("zscore", inputs=[path], s=s, output=output)
    if order is None and not sort:
        raise InvalidInputError("zscore needs --order or --sorted")
    sample = metric_core.read_sample(path)
    if sort:
        order = _sorted_order(sample)
    chain = chain_energy.ordered_chain(sample, order, config.s)
    _emit(_dump(chain, exclude={"space"}), config.output)


@cli.command()
@click.argument("path", type=INPUT_FILE)
@click.option("--s", "s", type=float, help="Exponent; required unless --profile is given.")
@click.option("--mode", type=click.Choice([x.value for x in DeltaMode]), default="exact", show_default=True)
@click.option("--u", "u", type=float, default=0.5, show_default=True, help="Net tree radius ratio.")
@click.option("--budget", type=int, default=delta_solver.DEFAULT_NODE_BUDGET, show_default=True)
@click.option("--max-points", type=int, default=delta_solver.EXACT_MAX_POINTS, show_default=True)
@click.option("--strict", is_flag=True, help="Exit 3 when the node budget runs out.")
@click.option("--profile", type=NumberList(float), help="Exponent grid s1,s2,... for a dimension profile.")
@click.option("--format", "fmt", type=click.Choice([x.value for x in OutputFormat]), default="json")
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def delta(
    path: Path,
    s: Optional[float],
    mode: str,
    u: float,
    budget: int,
    max_points: int,
    strict: bool,
    profile: Optional[list[float]],
    fmt: str,
    output: Optional[Path],
):
    """delta^s of a space, or a profile of delta^s and the covering bound over exponents.

    Examples:

        holdermap delta space.csv --s 0.6309

        holdermap delta cloud.json --profile 0.5,0.6,0.7 --format csv -o profile.csv
    """
    config = _configure(
        "delta", inputs=[path], s=s, u=u, budget=budget, output=output, format=fmt
    )
    if profile is not None:
        if any(not x > 0 for x in profile):
            raise InvalidInputError("Profile exponents must be positive")
        sample = metric_core.read_sample(path)
        rows = delta_solver.dimension_profile(sample, profile, u=config.u, threads=config.threads)
        if config.format is OutputFormat.CSV:
            table = [(x.s, x.delta, x.exact, x.bound) for x in rows]
            _emit(emit_profile_csv(table, ("s", "delta", "exact", "bound")), config.output)
        else:
            _emit(_dump_all(rows, ProfileRow), config.output)
        return
    _require(config.s, "--s", "delta")
    if config.format is OutputFormat.CSV:
        raise InvalidInputError("delta writes CSV only for --profile")
    sample = metric_core.read_sample(path)
    try:
        result = delta_solver.delta_finite(
            sample,
            config.s,
            mode=DeltaMode(mode),
            u=config.u,
            node_budget=config.budget,
            max_points=max_points,
            threads=config.threads,
            strict=strict,
        )
    except BudgetExceededError as err:
        _emit(_dump(err.best), config.output)
        raise
    _emit(_dump(result), config.output)


@cli.command()
@click.argument("path", type=INPUT_FILE)
@click.option("--s", "s", type=float, required=True, help="Exponent; the map is (1/s)-Hölder.")
@click.option("--order", type=NumberList(int), help="Ordering to parametrize along.")
@click.option("--sorted", "sort", is_flag=True, help="Order points of R increasingly.")
@click.option("--mode", type=click.Choice([x.value for x in DeltaMode]), default="exact", show_default=True)
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def holder(
    path: Path, s: float, order: Optional[list[int]], sort: bool, mode: str, output: Optional[Path]
):
    """A 1-Hölder parametrization of a space by anchors in [0, Z^s].

    Without --order or --sorted the ordering comes from `delta --mode`.
    """
    config = _configure("holder", inputs=[path], s=s, output=output)
    sample = metric_core.read_sample(path)
    if sort:
        order = _sorted_order(sample)
    elif order is None:
        order = delta_solver.delta_finite(
            sample, config.s, mode=DeltaMode(mode), threads=config.threads
        ).order
    parametrization = holder_map.build_parametrization(sample, order, config.s)
    _emit(_dump(parametrization, by_alias=True), config.output)


@cli.command()
@click.argument("path", type=INPUT_FILE)
@click.option("--r", "r", type=float, required=True, help="Ball radius.")
@click.option("--exact", is_flag=True, help="Minimum cover by 0-1 integer programming.")
@click.option("--size-cap", type=int, default=cover_numbers.COVER_EXACT_MAX_POINTS, show_default=True)
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def cover(path: Path, r: float, exact: bool, size_cap: int, output: Optional[Path]):
    """Number of closed r-balls centred at points of the space that cover it.

    Centres are restricted to the space's points, which changes counts by a bounded
    factor and leaves dimension estimates unchanged.
    """
    config = _configure("cover", inputs=[path], r=r, output=output)
    sample = metric_core.read_sample(path)
    if exact:
        report = cover_numbers.covering_number_exact(sample, config.r, size_cap=size_cap)
    else:
        report = cover_numbers.covering_number_greedy(sample, config.r)
    _emit(_dump(report), config.output)


@cli.command()
@click.argument("path", type=INPUT_FILE)
@click.option("--radii", type=NumberList(float), required=True, help="At least three radii.")
@click.option("--emit-csv", type=OUTPUT_FILE, help="Write (log 1/r, log count) pairs here.")
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def boxdim(path: Path, radii: list[float], emit_csv: Optional[Path], output: Optional[Path]):
    """Least-squares box dimension from greedy cover counts."""
    config = _configure("boxdim", inputs=[path], output=output)
    sample = metric_core.read_sample(path)
    estimate = cover_numbers.box_dimension_estimate(sample, radii)
    if emit_csv is not None:
        table = [(math.log(1 / r), math.log(n)) for r, n in zip(estimate.radii, estimate.counts)]
        emit_profile_csv(table, ("log_inv_r", "log_count"), emit_csv)
    _emit(_dump(estimate), config.output)


@cli.command("cantor-test")
@click.argument("path", type=INPUT_FILE)
@click.option("--depth", type=int, required=True, help="Largest n, covering at radius 3^-n.")
@click.option("--exact-cap", type=int, default=cover_numbers.COVER_EXACT_MAX_POINTS, show_default=True)
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def cantor_test(path: Path, depth: int, exact_cap: int, output: Optional[Path]):
    """Trend of b_n / 2^n, the cover counts at radius 3^-n against those of the Cantor set."""
    config = _configure("cantor-test", inputs=[path], depth=depth, output=output)
    sample = metric_core.read_sample(path)
    report = cover_numbers.cantor_image_test(sample, config.depth, exact_cap=exact_cap)
    _emit(_dump(report), config.output)


def _read_space(path: Path) -> FiniteMetricSpace:
    sample = metric_core.read_sample(path)
    return metric_core.from_points(sample) if isinstance(sample, PointCloud) else sample


@cli.command()
@click.argument("path", type=INPUT_FILE)
@click.option("--subset", type=NumberList(int), required=True, help="Indices of the subset A.")
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def retract(path: Path, subset: list[int], output: Optional[Path]):
    """A Lipschitz-1 retraction of an ultrametric space onto a subset."""
    config = _configure("retract", inputs=[path], output=output)
    table = ultra_tools.retraction(_read_space(path), subset)
    _emit(_dump(table, include={"image"}), config.output)


@cli.command()
@click.argument("path", type=INPUT_FILE)
@click.argument("target", type=INPUT_FILE)
@click.option("--subset", type=NumberList(int), required=True, help="Indices of the subset A.")
@click.option("--map", "image", type=NumberList(int), required=True, help="Target index of each point of A.")
@click.option("--lipschitz", type=float, default=1.0, show_default=True, help="Lipschitz constant L.")
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def extend(
    path: Path,
    target: Path,
    subset: list[int],
    image: list[int],
    lipschitz: float,
    output: Optional[Path],
):
    """Extend an L-Lipschitz map from a subset of an ultrametric space to all of it."""
    config = _configure("extend", inputs=[path, target], output=output)
    space = _read_space(path)
    codomain = metric_core.read_sample(target)
    domain = metric_core.subspace(space, subset)
    table = MapTable(domain=domain, codomain=codomain, image=tuple(image))
    extended = ultra_tools.extend_lipschitz(space, subset, table, lipschitz)
    _emit(_dump(extended, include={"image"}), config.output)


@cli.command()
@click.argument("source", type=INPUT_FILE)
@click.argument("target", type=INPUT_FILE)
@click.option("--max-maps", type=int, default=lip_cover.MAX_MAPS, show_default=True)
@click.option("--experimental", is_flag=True, help="Read IFS files and report truncated values.")
@click.option("--depth", type=NumberList(int), help="Sample depths for --experimental.")
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def fab(
    source: Path,
    target: Path,
    max_maps: int,
    experimental: bool,
    depth: Optional[list[int]],
    output: Optional[Path],
):
    """F(A, B), the fewest Lipschitz-1 images of A that cover B.

    With --experimental both files describe function systems and the values of F on
    their depth-k samples are reported; whether they converge is not established.
    """
    config = _configure("fab", inputs=[source, target], output=output)
    if experimental:
        _require(depth, "--depth", "fab --experimental")
        LOGGER.warning("Truncated values of F are experimental")
        values = lip_cover.truncated_cover_values(
            _read_model(source, IfsSpec), _read_model(target, IfsSpec), depth, max_maps=max_maps
        )
        _emit(_dump_all(values, TruncatedCoverValue), config.output)
        return
    witness = lip_cover.f_cover_number(
        metric_core.read_sample(source), metric_core.read_sample(target), max_maps=max_maps
    )
    _emit(_dump(witness), config.output)


@cli.command("ssc-check")
@click.option("--q", "q", type=int, required=True, help="Pieces of the homogeneous set A.")
@click.option("--r", "r", type=float, required=True, help="Similarity ratio of A.")
@click.option("--ratios", type=NumberList(float), help="Similarity ratios of B.")
@click.option("--exact", "exponents", type=NumberList(Fraction), help="Exponents p/q with beta_j = r^(p/q).")
@click.option("--tol", type=float, default=selfsimilar_check.DEFAULT_TOL, show_default=True)
@click.option("-o", "--output", type=OUTPUT_FILE)
@handle_errors
def ssc_check(
    q: int,
    r: float,
    ratios: Optional[list[float]],
    exponents: Optional[list[Fraction]],
    tol: float,
    output: Optional[Path],
):
    """Whether a homogeneous self-similar set maps Lipschitz onto another one.

    Examples:

        holdermap ssc-check --q 2 --r 0.3333333333333333 --exact 1,2,2
    """
    config = _configure("ssc-check", tol=tol, output=output)
    homogeneous = HomogeneousSpec(q=q, r=r)
    if exponents is not None:
        report = selfsimilar_check.compatibility_exact(homogeneous, exponents)
    else:
        _require(ratios, "--ratios or --exact", "ssc-check")
        report = selfsimilar_check.lipschitz_onto_compatibility(homogeneous, ratios, tol=config.tol)
    _emit(_dump(report), config.output)
