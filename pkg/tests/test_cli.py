import csv
import json

import numpy as np
import pytest

from agccz.artifacts import (
    backend_from_dict,
    canonical_dumps,
    css_from_dict,
    css_to_dict,
    curve_to_dict,
    gatelist_from_dict,
    gatelist_to_dict,
    load_json,
    schedule_from_dict,
    schedule_to_dict,
)
from agccz.cli import main
from agccz.css import build_css
from agccz.curve import CurveSpec, build_backend, builtin_toy_r2, toy_spec
from agccz.field import field
from agccz.scheduler import greedy_schedule
from agccz.synth import synth


@pytest.fixture(scope="module")
def toy_backend():
    return build_backend(toy_spec(builtin_toy_r2()))


def test_round_trip_curve_artifact(toy_backend):
    d = curve_to_dict(toy_backend)
    d2 = curve_to_dict(backend_from_dict(d))
    assert canonical_dumps(d) == canonical_dumps(d2)

    be4 = build_backend(CurveSpec(field(2), s=18))
    d4 = curve_to_dict(be4)
    assert canonical_dumps(curve_to_dict(backend_from_dict(d4))) == canonical_dumps(d4)


def test_round_trip_css_gatelist_schedule(toy_backend):
    css = build_css(toy_backend)
    d = css_to_dict(css, curve_ref=None)
    css2 = css_from_dict(d)
    assert canonical_dumps(css_to_dict(css2, curve_ref=None)) == canonical_dumps(d)
    assert np.array_equal(css2.G, css.G)

    gl = synth(css, "112", 1, 2, 1, 2)
    gd = gatelist_to_dict(gl)
    gl2 = gatelist_from_dict(gd)
    assert canonical_dumps(gatelist_to_dict(gl2)) == canonical_dumps(gd)

    sched = greedy_schedule(gl)
    sd = schedule_to_dict(sched)
    assert canonical_dumps(schedule_to_dict(schedule_from_dict(sd))) == canonical_dumps(sd)


def test_cli_end_to_end_r4(tmp_path, capsys):
    out = str(tmp_path)
    assert main(["build", "--r", "4", "--s", "18", "--out-dir", out]) == 0
    assert (tmp_path / "curve.json").exists() and (tmp_path / "css.json").exists()
    css_dict = load_json(tmp_path / "css.json")
    assert css_dict["params"]["k"] == 4 and css_dict["params"]["n"] == 60

    css_path = str(tmp_path / "css.json")
    gates = str(tmp_path / "gates.json")
    assert main(["synth", "--css", css_path, "--pattern", "123", "--A", "1", "--B", "2",
                 "--C", "3", "--gamma", "1", "--out", gates]) == 0
    sched = str(tmp_path / "schedule.json")
    assert main(["schedule", "--gates", gates, "--out", sched]) == 0
    assert load_json(sched)["depth"] == 1

    cert = str(tmp_path / "cert.json")
    assert main(["verify", "--css", css_path, "--gates", gates, "--out", cert]) == 0
    assert load_json(cert)["result"] == "PASS"

    intra = str(tmp_path / "intra.json")
    assert main(["synth", "--css", css_path, "--pattern", "intra", "--A", "2", "--B", "2",
                 "--C", "4", "--gamma", "3", "--out", intra]) == 0
    sched2 = str(tmp_path / "sched2.json")
    assert main(["schedule", "--gates", intra, "--out", sched2]) == 0
    assert load_json(sched2)["depth"] <= 7


def test_cli_verify_tampered_gates_exit_4(tmp_path):
    out = str(tmp_path)
    main(["build", "--r", "4", "--s", "18", "--out-dir", out])
    css_path = str(tmp_path / "css.json")
    gates = str(tmp_path / "gates.json")
    main(["synth", "--css", css_path, "--pattern", "112", "--A", "1", "--B", "3",
          "--C", "2", "--gamma", "1", "--out", gates])
    data = load_json(gates)
    data["gates"][0]["coeff"] = "0x1" if data["gates"][0]["coeff"] != "0x1" else "0x2"
    (tmp_path / "gates.json").write_text(json.dumps(data))
    cert = str(tmp_path / "cert.json")
    assert main(["verify", "--css", css_path, "--gates", gates, "--out", cert]) == 4
    assert load_json(cert)["result"] == "FAIL"
    assert load_json(cert)["witness"] is not None


def test_cli_all_triples_toy(tmp_path):
    out = str(tmp_path)
    assert main(["build", "--kind", "exhaustive_toy", "--out-dir", out]) == 0
    css_path = str(tmp_path / "css.json")
    cert = str(tmp_path / "sweep.json")
    assert main(["verify", "--css", css_path, "--all-triples", "--out", cert]) == 0
    payload = load_json(cert)
    assert payload["all_pass"]
    assert len(payload["runs"]) == 3 * 8 * 2  # patterns * triples * gammas


def test_cli_exit_codes(tmp_path):
    # config error: bad pole bound (4s exceeds N + 2g - 2)
    assert main(["build", "--r", "4", "--s", "40", "--out-dir", str(tmp_path)]) == 2
    # axiom failure: the r=2 curve instance cannot reach the systematic form
    assert main(["build", "--r", "2", "--s", "2", "--out-dir", str(tmp_path)]) == 3
    # config error: r not a power of two
    assert main(["build", "--r", "3", "--s", "2", "--out-dir", str(tmp_path)]) == 2
    # argparse usage error is also exit code 2
    with pytest.raises(SystemExit) as exc:
        main(["params"])
    assert exc.value.code == 2


def test_cli_params_table(tmp_path, capsys):
    assert main(["params", "--r", "8", "--r", "4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    rows = list(csv.DictReader(lines))
    by_r = {row["r"]: row for row in rows}
    assert by_r["8"]["rate_lb"] == "1/56"
    assert by_r["8"]["rel_dist_lb"] == "1/56"
    assert by_r["8"]["ineq1"] == "True" and by_r["8"]["ineq2"] == "True"
    assert by_r["8"]["good"] == "True"
    assert by_r["4"]["good"] == "False"


def test_cli_params_with_tower_file_and_instance(tmp_path, capsys):
    tower = tmp_path / "tower.json"
    tower.write_text(json.dumps([
        {"i": 1, "deg_a": 8, "deg_b": 1},
        {"i": 2, "deg_a": 8, "deg_b": 1, "exp_t": 1, "exp_r": 1, "exp_s": 1},
    ]))
    out = tmp_path / "params.csv"
    assert main(["params", "--r", "8", "--tower-file", str(tower), "--s", "18",
                 "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 3
    assert {row["i_or_s"] for row in rows} == {"i=1", "i=2", "s=18"}


def test_cli_report(tmp_path):
    main(["build", "--kind", "exhaustive_toy", "--out-dir", str(tmp_path)])
    rep = tmp_path / "rep"
    assert main(["report", "--css", str(tmp_path / "css.json"), "--out-dir", str(rep)]) == 0
    assert (rep / "report.csv").exists()
    for name in ["depth_by_pattern.png", "gate_counts.png", "fiber_map.png", "layer_sizes.png"]:
        assert (rep / name).stat().st_size > 0
    manifest = load_json(rep / "report.json")
    assert manifest["all_verified"] and manifest["tool_version"]
    rows = list(csv.DictReader((rep / "report.csv").read_text().splitlines()))
    assert all(r["verified"] == "PASS" for r in rows)
    assert max(int(r["depth"]) for r in rows if r["pattern"] == "three_block") <= 1


def test_artifact_dir_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("AGCCZ_ARTIFACT_DIR", str(tmp_path / "artifacts"))
    assert main(["build", "--kind", "exhaustive_toy"]) == 0
    assert (tmp_path / "artifacts" / "css.json").exists()


def test_cli_artifact_files_round_trip_byte_identical(tmp_path):
    main(["build", "--r", "4", "--s", "18", "--out-dir", str(tmp_path)])
    raw = (tmp_path / "css.json").read_text()
    data = json.loads(raw)
    css2 = css_from_dict(data)
    assert canonical_dumps(css_to_dict(css2, curve_ref=data["curve_ref"])) == raw
    curve_raw = (tmp_path / "curve.json").read_text()
    be = backend_from_dict(json.loads(curve_raw))
    assert canonical_dumps(curve_to_dict(be)) == curve_raw


def test_cli_toy_file_and_gamma_all(tmp_path):
    toy = tmp_path / "toy.json"
    toy.write_text(json.dumps(builtin_toy_r2()))
    out = str(tmp_path / "work")
    assert main(["build", "--kind", "exhaustive_toy", "--toy-file", str(toy),
                 "--out-dir", out]) == 0
    cert = str(tmp_path / "sweep.json")
    assert main(["verify", "--css", str(tmp_path / "work" / "css.json"), "--all-triples",
                 "--gammas", "all", "--out", cert]) == 0
    payload = load_json(cert)
    assert payload["all_pass"] and len(payload["runs"]) == 3 * 8 * 3  # nonzero gammas


def test_cli_params_json_mode(tmp_path, capsys):
    assert main(["params", "--r", "8", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["rate_lb"] == "1/56" and payload[0]["k"] == 1


def test_cli_all_triples_r4_within_budget(tmp_path):
    import time

    main(["build", "--r", "4", "--s", "18", "--out-dir", str(tmp_path)])
    cert = str(tmp_path / "sweep.json")
    t0 = time.perf_counter()
    assert main(["verify", "--css", str(tmp_path / "css.json"), "--all-triples",
                 "--out", cert]) == 0
    assert time.perf_counter() - t0 < 60
    payload = load_json(cert)
    assert payload["all_pass"] and len(payload["runs"]) == 3 * 64 * 2


def test_cli_sampled_verify_requires_seed(tmp_path):
    main(["build", "--r", "4", "--s", "18", "--out-dir", str(tmp_path)])
    css_path = str(tmp_path / "css.json")
    gates = str(tmp_path / "gates.json")
    main(["synth", "--css", css_path, "--pattern", "123", "--A", "1", "--B", "2",
          "--C", "3", "--gamma", "1", "--out", gates])
    # sampled state oracle without a seed is a config error
    assert main(["verify", "--css", css_path, "--gates", gates, "--state-oracle",
                 "--samples", "50", "--out", str(tmp_path / "c.json")]) == 2
    assert main(["verify", "--css", css_path, "--gates", gates, "--state-oracle",
                 "--samples", "50", "--seed", "5", "--out", str(tmp_path / "c.json")]) == 0
    payload = load_json(tmp_path / "c.json")
    assert [c["method"] for c in payload] == ["tensor", "state"]
    assert payload[1]["seed"] == 5 and payload[1]["mode"] == "sampled"
