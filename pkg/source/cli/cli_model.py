"""
The four batch commands. Each builds its RunConfig, computes, writes one self-describing file and
returns its path.
"""
import logging
import os
from math import pi

import numpy as np

from source import settings
from source.cli import cli_utils as utils
from source.core.grid import Axis, GridDensity, tensor_mesh
from source.core.samplers import sample_spectra
from source.core.spaces import (
    Domain, EnsembleSpec, Gaussian, Ginibre, HaarUniform, MatrixSpace, SpaceKind, WishartLike,
)
from source.core.spectrum import extract_spectra, principal_minors
from source.derivative.convolution import additive_convolve
from source.derivative.principles import derivative_principle
from source.errors import ConfigurationError, DomainMismatchError
from source.haarparam.coordinates import UnitaryCoordinates
from source.haarparam.haar_model import build_unitary
from source.haarparam.sampling import sample_haar_coordinates
from source.verify.verify_model import run_suite
from source.weights.library import BUILTINS, builtin_spec, diagonal_weight
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)

DEFAULT_SAMPLE_OUTPUT_DIR = settings.DEFAULT_SAMPLE_OUTPUT_DIR
DEFAULT_DENSITY_OUTPUT_DIR = settings.DEFAULT_DENSITY_OUTPUT_DIR
DEFAULT_CONVOLVE_OUTPUT_DIR = settings.DEFAULT_CONVOLVE_OUTPUT_DIR

DEFAULT_GRIDS = {
    Domain.REAL_LINE: (-4.0, 4.0, 81),
    Domain.HALF_LINE: (0.05, 10.0, 200),
    Domain.TORUS: (-pi, pi, 64),
}
CONVOLUTION_AXIS = Axis(-8.0, 8.0, 321)
# appendixB names the alpha/phi/psi parametrisation of the unitary group
COORDINATE_ALIASES = {"appendixB": "angles"}


# -----------
# ARGUMENT HELPERS
# -----------
def build_spec(space, n, nu=None, density="gaussian", scale=1.0, dof=None):
    """
    EnsembleSpec from command-line values.
    Params:
        space: Space name (herm, io_even, io_odd, usp, chiral, herm_plus, unitary)
        n: Number of spectral values
        nu: Chiral parameter
        density: gaussian, ginibre, wishart or haar
        scale: Gaussian / Ginibre scale
        dof: Wishart degrees of freedom (default n)
    """
    matrix_space = MatrixSpace(space, n, nu)
    makers = {
        "gaussian": lambda: Gaussian(scale),
        "ginibre": lambda: Ginibre(scale),
        "wishart": lambda: WishartLike(int(dof) if dof is not None else matrix_space.n),
        "haar": HaarUniform,
    }
    if density not in makers:
        raise ConfigurationError(f"unknown density {density!r}, choose from {sorted(makers)}")
    return EnsembleSpec(matrix_space, makers[density]())


def grid_axes(grid, n, domain):
    """
    Output axes from repeated (lo, hi, count) triples, broadcast when a single one is given.
    Torus axes are periodic.
    """
    grid = grid or [DEFAULT_GRIDS[domain]]
    if len(grid) not in (1, n):
        raise ConfigurationError(f"give one grid or {n} grids, got {len(grid)}")
    periodic = domain == Domain.TORUS
    axes = []
    for lo, hi, count in grid:
        if int(count) != count:
            raise ConfigurationError(f"grid count must be an integer, got {count}")
        axes.append(Axis(float(lo), float(hi), int(count), periodic))
    return tuple(axes) * n if len(axes) == 1 else tuple(axes)


def load_weight(source, matrix_space: MatrixSpace, scale=1.0):
    """
    A WeightFunction from a JSON file or the f_diag / LU / torus weight of a builtin ensemble.
    A builtin must live on the requested space.
    """
    if os.path.isfile(str(source)):
        return WeightFunction.load(source)
    if source in BUILTINS:
        kind = BUILTINS[source][0]
        if kind != matrix_space.kind:
            raise DomainMismatchError(f"builtin {source!r} lives on {kind.value}, not {matrix_space.kind.value}")
        return diagonal_weight(builtin_spec(source, matrix_space.n, matrix_space.nu or 0, scale))
    raise ConfigurationError(f"{source!r} is neither a weight file nor a builtin ({sorted(BUILTINS)})")


def _evaluate(density, domain, axes):
    mesh = tensor_mesh(axes)
    values = np.real_if_close(np.asarray(density(mesh)), tol=1e6)
    if np.iscomplexobj(values):
        logger.warning("density has an imaginary part up to %.3e; writing the real part", np.abs(values.imag).max())
        values = values.real
    grid = GridDensity(domain, axes, values.reshape(tuple(a.count for a in axes)), tol=None, signed=True)
    return mesh, values, grid.integral()


def _columns(prefix, n):
    return [f"{prefix}{j + 1}" for j in range(n)]


# -----------
# COMMANDS
# -----------
def cmd_sample(space, n, nu=None, density="gaussian", scale=1.0, dof=None, count=1000,
               seed=settings.DEFAULT_SEED, aux="none", coords="none", out=None, workers=None):
    """
    Samples spectra of an ensemble to CSV: sorted spectral values, then the auxiliary values,
    then (coords="angles", unitary only) the alpha/phi/psi replay columns.
    Returns:
        Path of the CSV file
    """
    spec = build_spec(space, n, nu, density, scale, dof)
    if count < 1:
        raise ConfigurationError(f"count must be positive, got {count}")
    params = {"space": spec.space.kind.value, "n": spec.space.n, "nu": str(spec.space.nu), "density": density,
              "describe": spec.describe(), "count": int(count), "seed": seed, "aux": aux, "coords": coords}
    config = utils.RunConfig("sample", params, seed)
    utils.print_banner(config)

    n = spec.space.n
    columns = _columns("x", n)
    coords = COORDINATE_ALIASES.get(coords, coords)
    if coords == "angles":
        if spec.space.kind != SpaceKind.UNITARY:
            raise ConfigurationError("angle coordinates exist for the unitary space only")
        rng = np.random.default_rng(seed)
        coordinates = [sample_haar_coordinates(n, rng) for _ in range(count)]
        V = np.stack([build_unitary(c) for c in coordinates])
        values = extract_spectra(V, spec.space)
        blocks = [values]
        if aux == "lu":
            blocks.append(np.abs(principal_minors(V)))
            columns += _columns("aux", n)
        elif aux != "none":
            raise ConfigurationError(f"auxiliary {aux!r} is not available on unitary")
        blocks.append(np.stack([c.flat() for c in coordinates]))
        columns += UnitaryCoordinates.flat_header(n)
    elif coords == "none":
        sample = sample_spectra(spec, count, seed, workers, auxiliary=aux)
        blocks = [sample.values]
        if sample.auxiliary is not None:
            blocks.append(np.real(sample.auxiliary))
            columns += _columns("aux", n)
    else:
        raise ConfigurationError(f"unknown coordinate system {coords!r}")

    rows = np.column_stack(blocks)
    path = utils.resolve_output(out, DEFAULT_SAMPLE_OUTPUT_DIR, utils.make_key("sample", params), "csv")
    config.output_path = path
    utils.write_csv(path, config, columns, rows)
    utils.print_output(path, len(rows))
    return path


def cmd_density(space=None, n=2, nu=None, builtin=None, weight_file=None, grid=None, scale=1.0, dof=None,
                out=None):
    """
    Evaluates the derivative-principle density of a builtin ensemble or of a weight file on a grid.
    The trapezoid normalisation is written to the header.
    Returns:
        (path, normalisation)
    """
    if (builtin is None) == (weight_file is None):
        raise ConfigurationError("give exactly one of --builtin and --weight-file")
    if builtin is not None:
        spec = builtin_spec(builtin, n, nu or 0, scale, dof)
        if space is not None and SpaceKind(space) != spec.space.kind:
            raise DomainMismatchError(f"builtin {builtin!r} lives on {spec.space.kind.value}, not {space}")
        matrix_space = spec.space
        weight = diagonal_weight(spec)
    else:
        if space is None:
            raise ConfigurationError("a weight file needs --space")
        weight = WeightFunction.load(weight_file)
        matrix_space = MatrixSpace(space, weight.n, nu)

    params = {"space": matrix_space.kind.value, "n": matrix_space.n, "nu": str(matrix_space.nu),
              "builtin": builtin, "weight_file": weight_file, "grid": grid, "scale": scale, "dof": dof}
    config = utils.RunConfig("density", params)
    utils.print_banner(config)

    domain = matrix_space.spectral_domain
    axes = grid_axes(grid, matrix_space.n, domain)
    density = derivative_principle(matrix_space, weight, x_axes=axes)
    mesh, values, normalization = _evaluate(density, domain, axes)

    path = utils.resolve_output(out, DEFAULT_DENSITY_OUTPUT_DIR, utils.make_key("density", params), "csv")
    config.output_path = path
    utils.write_csv(path, config, _columns("x", matrix_space.n) + ["density"], np.column_stack([mesh, values]),
                    space=matrix_space.label(), domain=domain.value, normalization=f"{normalization:.10g}")
    utils.print_output(path, len(mesh), normalization=normalization)
    return path, normalization


def cmd_convolve(space, n, weight_a, weight_b, nu=None, grid=None, scale=1.0, out=None):
    """
    Spectral density of A + B from the (pseudo-)diagonal weights of A and B (builtin names or weight files).
    Returns:
        (path, normalisation)
    """
    matrix_space = MatrixSpace(space, n, nu)
    wa = load_weight(weight_a, matrix_space, scale)
    wb = load_weight(weight_b, matrix_space, scale)
    params = {"space": matrix_space.kind.value, "n": matrix_space.n, "nu": str(matrix_space.nu),
              "weight_a": weight_a, "weight_b": weight_b, "grid": grid, "scale": scale}
    config = utils.RunConfig("convolve", params)
    utils.print_banner(config)

    domain = matrix_space.spectral_domain
    axes = grid_axes(grid, matrix_space.n, domain)
    density = additive_convolve(wa, wb, matrix_space, axes=CONVOLUTION_AXIS, x_axes=axes)
    mesh, values, normalization = _evaluate(density, domain, axes)

    path = utils.resolve_output(out, DEFAULT_CONVOLVE_OUTPUT_DIR, utils.make_key("convolve", params), "csv")
    config.output_path = path
    utils.write_csv(path, config, _columns("x", matrix_space.n) + ["density"], np.column_stack([mesh, values]),
                    space=matrix_space.label(), domain=domain.value, normalization=f"{normalization:.10g}")
    utils.print_output(path, len(mesh), normalization=normalization)
    return path, normalization


def cmd_verify(suite, budget, seed=settings.DEFAULT_SEED, negative_control=False, out=None, workers=None):
    """
    Runs a verification suite and writes its JSONL reports.
    Returns:
        (path, all passed)
    """
    if budget != int(budget):
        raise ConfigurationError(f"budget must be an integer, got {budget}")
    output_dir = None
    if out:
        output_dir = os.path.dirname(out) or "."
    reports, path = run_suite(suite, int(budget), seed, negative_control, output_dir, workers)
    if out and path != out:
        os.replace(path, out)
        path = out
    return path, all(r.passed for r in reports)
