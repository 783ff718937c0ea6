from source.cli.cli_model import build_spec, cmd_convolve, cmd_density, cmd_sample, cmd_verify, grid_axes, load_weight
from source.cli.cli_utils import RunConfig
