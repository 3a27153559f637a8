import json

import pytest

from agmlift.cli import main


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_count_verified_curve(capsys):
    code, out = run_cli(capsys, ["count", "--d", "1", "--a2", "0", "--a6", "1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["trace"] == -1 and doc["order"] == 4


def test_count_twist(capsys):
    code, out = run_cli(capsys, ["count", "--d", "1", "--a2", "1", "--a6", "1"])
    assert code == 0
    assert json.loads(out)["trace"] == 1


def test_count_invalid_curve_exits_2(capsys):
    code, out = run_cli(capsys, ["count", "--d", "1", "--a2", "0", "--a6", "0"])
    assert code == 2
    assert "error" in json.loads(out)


def test_count_batch(capsys, tmp_path):
    path = tmp_path / "curves.json"
    path.write_text(
        json.dumps(
            [
                {"d": 1, "a2": "0", "a6": "1"},
                {"d": 2, "a2": "3", "a6": "2"},
            ]
        )
    )
    code, out = run_cli(capsys, ["count", "--d", "1", "--batch", str(path)])
    assert code == 0
    results = json.loads(out)["results"]
    assert len(results) == 2
    assert results[0]["order"] == 4


def test_output_is_byte_deterministic(capsys):
    argv = ["count", "--d", "4", "--random", "--rng-seed", "9"]
    _, first = run_cli(capsys, argv)
    _, second = run_cli(capsys, argv)
    assert first == second
    argv2 = ["lift", "--g", "1", "--d", "2", "--seed", "3", "--precision", "12"]
    _, a = run_cli(capsys, argv2)
    _, b = run_cli(capsys, argv2)
    assert a == b


def test_lift_command(capsys):
    code, out = run_cli(
        capsys, ["lift", "--g", "1", "--d", "1", "--seed", "1", "--precision", "3"]
    )
    assert code == 0
    doc = json.loads(out)
    assert int(doc["omega"][0], 16) % 8 == 5
    assert doc["residual_valuation"] >= 3


def test_lift_degenerate_seed_fails(capsys):
    code, out = run_cli(
        capsys, ["lift", "--g", "1", "--d", "1", "--seed", "0", "--precision", "3"]
    )
    assert code == 3


def test_lift_dimension_two(capsys):
    code, out = run_cli(
        capsys,
        ["lift", "--g", "2", "--d", "1", "--seed", "1,1,1", "--precision", "8"],
    )
    assert code == 0
    assert json.loads(out)["residual_valuation"] >= 8


def test_agm_constant_start(capsys):
    code, out = run_cli(
        capsys,
        ["agm", "--g", "1", "--d", "1", "--start", "17,17", "--steps", "2",
         "--precision", "16"],
    )
    assert code == 0
    doc = json.loads(out)
    for entry in doc["steps"]:
        assert entry["diff_valuations"] == [None]


def test_agm_contraction_run(capsys):
    code, out = run_cli(
        capsys,
        ["agm", "--g", "1", "--d", "1", "--start", "1,17", "--steps", "3",
         "--precision", "16"],
    )
    assert code == 0
    doc = json.loads(out)
    mins = [s["min_diff_valuation"] for s in doc["steps"]]
    assert mins == sorted(mins)


def test_agm_gate_exits_3(capsys):
    code, _ = run_cli(capsys, ["agm", "--g", "1", "--d", "1", "--start", "1,3",
                               "--steps", "1"])
    assert code == 3


def test_agm_bad_start_list_exits_2(capsys):
    code, _ = run_cli(capsys, ["agm", "--g", "1", "--d", "1", "--start", "1,x",
                               "--steps", "1"])
    assert code == 2


def test_verify_round_trip(capsys, tmp_path):
    code, out = run_cli(
        capsys, ["lift", "--g", "1", "--d", "1", "--seed", "1", "--precision", "16"]
    )
    lift = json.loads(out)
    doc = {
        "g": 1,
        "d": 1,
        "N": 16,
        "level_exp": 1,
        "point": lift["point"],
        "omega": lift["omega"],
    }
    path = tmp_path / "point.json"
    path.write_text(json.dumps(doc))
    code, out = run_cli(capsys, ["verify", "--file", str(path)])
    assert code == 0
    ver = json.loads(out)
    assert ver["min_valuation"] is None
    assert ver["point_canonical_mod2"] is True


def test_verify_missing_file_exits_2(capsys):
    code, _ = run_cli(capsys, ["verify", "--file", "/nonexistent.json"])
    assert code == 2


def test_selftest_subset_lines(capsys):
    code, out = run_cli(capsys, ["selftest", "--only", "transform_matrix"])
    assert code == 0
    assert out.startswith("PASS transform_matrix:")
    assert out.rstrip().endswith("all passed")


def test_selftest_subset_json(capsys):
    code, out = run_cli(
        capsys, ["selftest", "--json", "--only", "transform_matrix,canonical_reduction"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert len(doc["items"]) == 2


def test_selftest_unknown_item_exits_2(capsys):
    code, _ = run_cli(capsys, ["selftest", "--only", "missing_item"])
    assert code == 2
