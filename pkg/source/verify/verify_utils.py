import json
import os

import numpy as np

from source import settings


def make_key(suite, budget, seed, negative_control=False):
    """
    Creates a unique key for a verification run.
    Returns:
        e.g. "herm_b100000_s1" or "all_b100000_s1_neg"
    """
    parts = [suite, f"b{int(budget)}", f"s{seed}"]
    if negative_control:
        parts.append("neg")
    return "_".join(parts)


def print_report(report):
    mark = "PASS" if report.passed else "FAIL"
    print(f"  [{mark}] {report.test_name:<70} {report.distance_kind.value:<13} "
          f"{report.statistic:.4g} <= {report.threshold:.4g}")


def print_summary(key, reports):
    """
    Prints every report of a run followed by the pass count.
    Params:
        key: Run key
        reports: list of ComparisonReport
    """
    print(f"\nVerification {key}:")
    for report in reports:
        print_report(report)
    failed = [r for r in reports if not r.passed]
    print(f"\n{len(reports) - len(failed)}/{len(reports)} checks passed" + (f", {len(failed)} failed" if failed else ""))
    print()


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def write_reports(output_dir, key, reports, config):
    """
    Writes one JSON lines file: a metadata record, then one record per report.
    Params:
        output_dir: Directory of the file
        key: Run key, used as file name
        reports: list of ComparisonReport
        config: Run configuration recorded in the metadata record
    Returns:
        Path of the file
    """
    os.makedirs(output_dir, exist_ok=True)
    out_path = os.path.join(output_dir, f"{key}.jsonl")
    meta = {
        "record": "meta",
        "command": "verify",
        "version": settings.VERSION,
        "gaussian_convention": settings.GAUSSIAN_CONVENTION,
        "config": config,
    }
    with open(out_path, "w") as f:
        f.write(json.dumps(_jsonable(meta), sort_keys=True) + "\n")
        for report in reports:
            record = {"record": "report", **report.to_dict()}
            f.write(json.dumps(_jsonable(record), sort_keys=True) + "\n")
    return out_path
