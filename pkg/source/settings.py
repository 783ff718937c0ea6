import os

from source import __version__

current_dir = os.getcwd()

# -----------
# OUTPUT
# -----------
DEFAULT_RES_DIR = os.path.join(current_dir, 'res')
DEFAULT_SAMPLE_OUTPUT_DIR = os.path.join(DEFAULT_RES_DIR, 'sample')
DEFAULT_DENSITY_OUTPUT_DIR = os.path.join(DEFAULT_RES_DIR, 'density')
DEFAULT_CONVOLVE_OUTPUT_DIR = os.path.join(DEFAULT_RES_DIR, 'convolve')
DEFAULT_VERIFY_OUTPUT_DIR = os.path.join(DEFAULT_RES_DIR, 'verify')

VERSION = __version__

GAUSSIAN_CONVENTION = (
    "herm: diag N(0,s^2), offdiag re/im N(0,s^2/2); "
    "io_even/io_odd: X=iA, A_jk N(0,s^2); "
    "usp: diagonal blocks N(0,s^2), offdiagonal blocks N(0,s^2/2); "
    "chiral: density exp(-|z|^2/s^2)/(pi s^2); "
    "herm_plus: X=G^H G, G complex Ginibre unit variance"
)

# -----------
# SAMPLING
# -----------
DEFAULT_SEED = 42
SAMPLE_CHUNK_SIZE = 10_000


def max_workers():
    """
    Number of worker threads allowed by the environment.
    Returns:
        RMT_THREADS when set to a positive integer, the CPU count otherwise.
    """
    value = os.getenv("RMT_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return os.cpu_count() or 1


def log_level():
    return os.getenv("RMT_LOG_LEVEL", "WARNING").upper()


# -----------
# TOLERANCES
# -----------
DEGENERACY_TOLERANCE = 1e-8
PRUNE_TOLERANCE = 1e-14
GRID_NORMALIZATION_TOLERANCE = 1e-3
FINITE_DIFFERENCE_TOLERANCE = 1e-3
IO_ODD_ZERO_TOLERANCE = 1e-8
RADIUS_TOLERANCE = 1e-9
TERM_CAP = 10**6

# Regulator schedule for the epsilon -> 0 limits of the inverse transforms
EPSILON_START = 1e-2
EPSILON_FLOOR = 1e-7
EPSILON_TOLERANCE = 1e-4

# Contour functionals for divided differences
CONTOUR_POINTS = 48

# z3 exact identity checks
Z3_TIMEOUT_MS = 60_000
Z3_RANDOM_SEED = 42
