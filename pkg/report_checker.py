import argparse
import json
import math
import os
import sys

HEADER_KEYS = ("command", "version", "seed", "gaussian_convention", "config")
REPORT_KEYS = ("test_name", "samples_used", "distance_kind", "statistic", "threshold", "pass", "seed")
DISTANCE_KINDS = {"KS", "L1_histogram", "Chi2", "MomentZ", "MaxAbs", "Exact"}


def read_csv_header(path):
    """
    Splits a CSV output into its "# key: value" header, column names and rows.
    Returns:
        (header dict, columns, rows as lists of strings)
    """
    header, columns, rows = {}, None, []
    with open(path, "r") as f:
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                header[key] = value
            elif columns is None:
                columns = line.split(",")
            elif line:
                rows.append(line.split(","))
    return header, columns or [], rows


def check_csv(path):
    header, columns, rows = read_csv_header(path)
    errors = [f"missing header entry {key!r}" for key in HEADER_KEYS if key not in header]
    if errors:
        return errors

    try:
        config = json.loads(header["config"])
    except json.JSONDecodeError as e:
        return [f"config is not JSON: {e}"]

    if not rows:
        errors.append("no data rows")
    if any(len(r) != len(columns) for r in rows):
        errors.append("rows do not match the column header")
    try:
        values = [[float(v) for v in r] for r in rows]
    except ValueError:
        return errors + ["non-numeric values"]

    command = header["command"]
    n = config.get("n")
    x_columns = [c for c in columns if c.startswith("x")]
    if n is not None and len(x_columns) != n:
        errors.append(f"{len(x_columns)} spectral columns for n={n}")

    if command == "sample":
        if config.get("count") is not None and len(rows) != config["count"]:
            errors.append(f"{len(rows)} rows for count={config['count']}")
        # spectral values are written sorted
        if any(r[:len(x_columns)] != sorted(r[:len(x_columns)]) for r in values):
            errors.append("spectral values are not sorted")
    elif command in ("density", "convolve"):
        if "density" not in columns:
            errors.append("missing density column")
        try:
            normalization = float(header.get("normalization", "nan"))
        except ValueError:
            normalization = math.nan
        if not math.isfinite(normalization):
            errors.append("missing or invalid normalization")
    else:
        errors.append(f"unknown command {command!r}")
    return errors


def check_report(record):
    errors = [f"missing key {key!r}" for key in REPORT_KEYS if key not in record]
    if errors:
        return errors
    if record["distance_kind"] not in DISTANCE_KINDS:
        errors.append(f"unknown distance kind {record['distance_kind']!r}")
    statistic, threshold = float(record["statistic"]), float(record["threshold"])
    expected = math.isfinite(statistic) and statistic <= threshold
    if bool(record["pass"]) != expected:
        errors.append(f"pass={record['pass']} disagrees with {statistic} <= {threshold}")
    return errors


def check_jsonl(path):
    """
    Validates a verify output: one meta record followed by report records.
    Returns:
        (errors, number of reports, number of failed reports)
    """
    try:
        with open(path, "r") as f:
            records = [json.loads(line) for line in f if line.strip()]
    except (OSError, json.JSONDecodeError) as e:
        return [f"cannot read records: {e}"], 0, 0

    if not records or records[0].get("record") != "meta":
        return ["first record is not the meta record"], 0, 0
    meta = records[0]
    errors = [f"meta record misses {key!r}" for key in ("command", "version", "gaussian_convention", "config")
              if key not in meta]

    reports = records[1:]
    failed = 0
    for i, record in enumerate(reports):
        if record.get("record") != "report":
            errors.append(f"record {i + 1} is not a report")
            continue
        errors.extend(f"{record.get('test_name', i + 1)}: {e}" for e in check_report(record))
        failed += not record.get("pass", False)
    return errors, len(reports), failed


def check_file(path):
    if path.endswith(".jsonl"):
        errors, count, failed = check_jsonl(path)
        return errors, f"{count} reports, {failed} failed"
    errors = check_csv(path)
    return errors, None


if __name__ == '__main__':

    parser = argparse.ArgumentParser(description="Check the structure of sample/density/convolve CSV and verify JSONL outputs.")
    parser.add_argument("directory", help="Directory containing the output files (searched recursively)")
    args = parser.parse_args()

    if not os.path.isdir(args.directory):
        print(f"Not a directory: {args.directory}")
        sys.exit(1)

    invalid = 0
    for root, _, files in os.walk(args.directory):
        for name in sorted(f for f in files if f.endswith((".csv", ".jsonl"))):
            path = os.path.join(root, name)
            errors, summary = check_file(path)
            status = "VALID" if not errors else "INVALID"
            invalid += bool(errors)
            reason = summary if not errors else "\n\t  ".join(errors)
            print(f"File: {os.path.relpath(path, args.directory)}\n    Status: {status}\n    Reason: {reason}\n")
    sys.exit(1 if invalid else 0)
