import json

import report_checker
from entrypoint import main
from source.verify.compare import DistanceKind, make_report
from source.verify.verify_utils import write_reports


def test_sample_output_is_valid(tmp_path):
    out = tmp_path / "sample.csv"
    main(["sample", "--space", "chiral", "--n", "2", "--nu", "1", "--count", "30", "--aux", "pseudo",
          "--out", str(out)])
    errors, _ = report_checker.check_file(str(out))
    assert errors == []


def test_density_output_is_valid(tmp_path):
    out = tmp_path / "density.csv"
    main(["density", "--builtin", "wishart", "--n", "2", "--grid", "0.1", "6", "30", "--out", str(out)])
    assert report_checker.check_csv(str(out)) == []


def test_tampered_csv(tmp_path):
    out = tmp_path / "sample.csv"
    main(["sample", "--space", "herm", "--n", "2", "--count", "10", "--out", str(out)])
    lines = out.read_text().splitlines()
    without_seed = [line for line in lines if not line.startswith("# seed")]
    out.write_text("\n".join(without_seed) + "\n")
    assert "missing header entry 'seed'" in report_checker.check_csv(str(out))

    swapped = list(lines)
    x1, x2 = swapped[-1].split(",")
    swapped[-1] = f"{x2},{x1}" if float(x1) != float(x2) else "1.0,0.0"
    out.write_text("\n".join(swapped) + "\n")
    assert "spectral values are not sorted" in report_checker.check_csv(str(out))


def test_report_records(tmp_path):
    reports = [make_report("ok", DistanceKind.MAX_ABS, 0.0, 1.0), make_report("bad", DistanceKind.KS, 2.0, 1.0)]
    path = write_reports(str(tmp_path), "herm_b10_s1", reports, {"suite": "herm"})
    assert report_checker.check_jsonl(path) == ([], 2, 1)

    with open(path) as f:
        records = [json.loads(line) for line in f]
    records[1]["pass"] = False
    with open(path, "w") as f:
        f.write("\n".join(json.dumps(r) for r in records) + "\n")
    errors, _, failed = report_checker.check_jsonl(path)
    assert failed == 2
    assert any("disagrees" in e for e in errors)


def test_jsonl_without_meta(tmp_path):
    path = tmp_path / "bare.jsonl"
    path.write_text(json.dumps({"record": "report"}) + "\n")
    errors, count, _ = report_checker.check_jsonl(str(path))
    assert errors == ["first record is not the meta record"] and count == 0
