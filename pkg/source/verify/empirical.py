import logging

import numpy as np

from source.core.grid import Axis, GridDensity
from source.core.spaces import Domain, SpectralSample
from source.errors import DataError

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000
DEFAULT_BINS = 41


def collect_values(samples):
    """
    Stacks spectral values from a SpectralSample, an array (count, n) or an iterable of either.
    Returns:
        array (count, n)
    """
    if isinstance(samples, SpectralSample):
        values = np.atleast_2d(samples.values)
    elif isinstance(samples, np.ndarray):
        values = samples[:, None] if samples.ndim == 1 else samples
    else:
        parts = [collect_values(s) for s in samples]
        if not parts:
            raise DataError("empty sample stream")
        values = np.concatenate(parts)
    if values.size == 0:
        raise DataError("empty sample stream")
    return np.asarray(values)


def bin_edges(axis: Axis):
    """Edges of the bins centred on the axis nodes."""
    h = axis.step if axis.count > 1 else 1.0
    return np.concatenate([axis.nodes - h / 2, [axis.nodes[-1] + h / 2]])


def bin_volume(axes):
    return float(np.prod([a.step if a.count > 1 else 1.0 for a in axes]))


def _default_axes(values, bins):
    axes = []
    for j in range(values.shape[1]):
        lo, hi = float(values[:, j].min()), float(values[:, j].max())
        if hi - lo < 1e-12:
            axes.append(Axis(lo, lo, 1))
        else:
            axes.append(Axis(lo, hi, bins))
    return tuple(axes)


def empirical_density(samples, binning=None, domain=Domain.REAL_LINE):
    """
    Normalised histogram of spectral samples on bins centred on the grid nodes.
    Params:
        samples: SpectralSample, array (count, n) or iterable of them
        binning: Axis (broadcast), one Axis per coordinate, or None for the data range with 41 bins
        domain: Domain recorded on the result
    Returns:
        GridDensity (unnormalised-check off) with meta counts, masses, stderr (per bin density) and outside mass
    """
    values = collect_values(samples)
    count, n = values.shape
    if count < MIN_SAMPLES:
        logger.warning("empirical density from only %d samples", count)
    if binning is None:
        axes = _default_axes(values, DEFAULT_BINS)
    elif isinstance(binning, Axis):
        axes = (binning,) * n
    else:
        axes = tuple(binning)
    if len(axes) != n:
        raise DataError(f"{len(axes)} binning axes for {n}-dimensional samples")

    counts, _ = np.histogramdd(values, bins=[bin_edges(a) for a in axes])
    volume = bin_volume(axes)
    masses = counts / count
    density = masses / volume
    stderr = np.sqrt(masses * (1 - masses) / count) / volume
    outside = 1.0 - float(masses.sum())
    if outside > 0:
        logger.debug("%.3e of the sample mass falls outside the bins", outside)
    return GridDensity(domain, axes, density, tol=None, meta={
        "counts": counts, "masses": masses, "stderr": stderr, "samples": count, "outside": outside,
        "scheme": "histogram",
    })
