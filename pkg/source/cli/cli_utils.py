import json
import os
from dataclasses import dataclass, field

import numpy as np

from source import settings


@dataclass
class RunConfig:
    """
    Everything needed to reproduce one command; embedded in the header of every output file.
    """
    command: str
    params: dict = field(default_factory=dict)
    seed: int = None
    output_path: str = None
    format: str = "CSV"

    def header(self, **extra):
        """Ordered (key, value) pairs of the file header."""
        items = [
            ("command", self.command),
            ("version", settings.VERSION),
            ("seed", self.seed),
            ("gaussian_convention", settings.GAUSSIAN_CONVENTION),
            ("config", json.dumps(self.params, sort_keys=True)),
        ]
        items.extend(extra.items())
        return items


def make_key(command, params):
    """
    Creates a file name stem from the command and its main parameters.
    Returns:
        e.g. "sample_herm_n2_nu0_gaussian_s7"
    """
    parts = [command]
    for name in ("space", "builtin", "weight_file", "n", "nu", "density", "dof", "weight_a", "weight_b", "seed"):
        value = params.get(name)
        if value is None or value is False:
            continue
        if name.startswith("weight"):
            value = os.path.splitext(os.path.basename(str(value)))[0]
        else:
            value = str(value).replace("/", "over")
        prefix = {"n": "n", "nu": "nu", "dof": "dof", "seed": "s"}.get(name, "")
        parts.append(f"{prefix}{value}")
    return "_".join(parts)


def resolve_output(out, default_dir, key, extension):
    if out:
        directory = os.path.dirname(out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        return out
    os.makedirs(default_dir, exist_ok=True)
    return os.path.join(default_dir, f"{key}.{extension}")


def write_csv(path, config: RunConfig, columns, rows, **extra):
    """
    Writes "# key: value" header lines, a column header row and the rows.
    Params:
        path: Output file
        config: RunConfig recorded in the header
        columns: Column names
        rows: array (count, len(columns))
        extra: Additional header entries (e.g. normalisation)
    """
    rows = np.asarray(rows, dtype=float)
    with open(path, "w") as f:
        for key, value in config.header(**extra):
            f.write(f"# {key}: {value}\n")
        f.write(",".join(columns) + "\n")
        np.savetxt(f, rows, fmt="%.17g", delimiter=",")
    return path


def print_banner(config: RunConfig):
    lines = [f"\nRunning {config.command}"]
    for key, value in config.params.items():
        if value is not None:
            lines.append(f"  - {key} = {value}")
    print("\n".join(lines))


def print_output(path, count, **extra):
    print(f"\nWrote {count} rows to {path}")
    for key, value in extra.items():
        print(f"  {key}: {value}")
    print()
