import json

import pytest

from oi_resolve.cli import run
from oi_resolve.oi_free_complex import FreeOIComplex
from oi_resolve.oi_ideal import MonomialOIIdeal
from oi_resolve.resolution import GradedFreeComplex


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv, "--format", "json")
    return code, json.loads(out) if out else None, err


def test_expand_five_generators(capsys):
    code, obj, _ = call_json(capsys, "expand", "--ideal", "fixture:cob", "--width", "5")
    assert code == 0
    assert obj["count"] == 9 and obj["schema"] == "oi-resolve/1"


def test_resolve_betti_principal(capsys):
    code, obj, _ = call_json(capsys, "resolve", "--ideal", "fixture:principal-d2", "--width", "4", "--betti")
    assert code == 0
    betti = {(i, d): n for i, d, n in obj["betti"]}
    assert betti == {(0, 0): 1, (1, 2): 6, (2, 3): 8, (3, 4): 3}


def test_resolve_betti_text(capsys):
    code, out, _ = call(capsys, "resolve", "--ideal", "fixture:principal-d2", "--width", "4", "--betti")
    assert code == 0
    assert "1 2 6" in out.splitlines() and "3 4 3" in out.splitlines()


def test_family_flat_not_free(capsys):
    code, obj, _ = call_json(capsys, "family", "--ideal", "fixture:koszul-w2", "--max-width", "6", "--classify")
    assert code == 0
    assert obj["levels"][1]["classification"]["kind"] == "FLAT_NOT_FREE"


def test_family_naturality(capsys):
    code, obj, _ = call_json(capsys, "family", "--ideal", "fixture:stable-j", "--max-width", "5",
                             "--verify-naturality")
    assert code == 0 and obj["naturality"]["ok"]


def test_resolve_verify_exit_zero(capsys):
    code, obj, _ = call_json(capsys, "resolve", "--ideal", "fixture:cob", "--width", "4", "--verify",
                             "--second-prime", "3")
    assert code == 0 and obj["ok"]


def test_resolve_insufficient_degree_bound_is_input_error(capsys):
    code, _, err = call(capsys, "resolve", "--ideal", "fixture:cob", "--width", "4", "--verify",
                        "--degree-bound", "2")
    assert code == 2 and "degree bound" in err


def test_boxes_reject_cube(capsys):
    code, _, err = call(capsys, "boxes", "--ideal", "fixture:cube", "--width", "2")
    assert code == 2 and err.startswith("oi-resolve: error")


def test_classify_cube(capsys):
    code, obj, _ = call_json(capsys, "classify", "--ideal", "fixture:cube", "--width", "2")
    assert code == 0
    assert obj["classes"]["strongly_stable"] is False


def test_malformed_json_reports_pointers(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "oi-resolve/1", "gen_width": "two", "generators": []}')
    code, _, err = call(capsys, "expand", "--ideal", str(bad), "--width", "3")
    assert code == 2
    assert "/gen_width" in err


def test_unparseable_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = call(capsys, "expand", "--ideal", str(bad), "--width", "3")
    assert code == 2


def test_missing_file(capsys):
    code, _, _ = call(capsys, "expand", "--ideal", "/nonexistent/x.json", "--width", "3")
    assert code == 2


def test_width_cap(capsys):
    code, _, err = call(capsys, "expand", "--ideal", "fixture:cob", "--width", "13")
    assert code == 2
    code, obj, _ = call_json(capsys, "expand", "--ideal", "fixture:koszul-w1", "--width", "13", "--width-cap", "13")
    assert code == 0 and obj["count"] == 13


def test_minimize_notwwmin(capsys):
    code, obj, _ = call_json(capsys, "minimize", "--complex", "fixture:notwwmin", "--verify")
    assert code == 0
    assert obj["minimal"] is True and obj["widthwise_minimal"] is False


def test_verification_failure_exit_one(tmp_path, capsys):
    # both maps multiply by x1, so the composite is x1^2 and d^2 fails
    obj = {
        "schema": "oi-resolve/1",
        "signature": {"rows": 1, "prime": 2},
        "levels": [[{"width": 0, "degree": 0}], [{"width": 1, "degree": 1}], [{"width": 1, "degree": 2}]],
        "maps": {
            "1": [{"source": 0, "target": 0, "epsilon": {"source": 0, "target": 1, "values": []},
                   "coefficient": [[1, "x1"]]}],
            "2": [{"source": 0, "target": 0, "epsilon": {"source": 1, "target": 1, "values": [1]},
                   "coefficient": [[1, "x1"]]}],
        },
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    code, out, _ = call(capsys, "minimize", "--complex", str(path), "--verify", "--format", "json")
    assert code == 1
    assert json.loads(out)["ok"] is False


def test_fixture_export_round_trips(tmp_path, capsys):
    code, _, _ = call(capsys, "fixtures", "--export", str(tmp_path))
    assert code == 0
    for f in sorted(tmp_path.glob("*.json")):
        obj = json.loads(f.read_text())
        if "generators" in obj:
            I = MonomialOIIdeal.from_json(obj)
            assert MonomialOIIdeal.from_json(I.to_json()) == I
        else:
            C = FreeOIComplex.from_json(obj)
            assert FreeOIComplex.from_json(C.to_json()) == C


def test_resolve_json_round_trip(tmp_path, capsys):
    out = tmp_path / "res.json"
    code, _, _ = call(capsys, "resolve", "--ideal", "fixture:cob", "--width", "4", "--format", "json",
                      "--output", str(out))
    assert code == 0
    obj = json.loads(out.read_text())
    G = GradedFreeComplex.from_json(obj["complex"])
    assert GradedFreeComplex.from_json(G.to_json()) == G
    assert G.ranks() == [1, 5, 6, 2]


@pytest.mark.parametrize("argv", [
    ["resolve", "--ideal", "fixture:stable-j", "--width", "5", "--verify", "--betti", "--dump-matrices"],
    ["family", "--ideal", "fixture:principal-d2", "--max-width", "6", "--classify", "--verify-naturality"],
    ["boxes", "--ideal", "fixture:cob", "--width", "5", "--emit-fvector"],
])
def test_text_reports_are_deterministic(capsys, argv):
    first = call(capsys, *argv)
    second = call(capsys, *argv)
    assert first == second and first[0] == 0


def test_dump_matrices_format(capsys):
    code, out, _ = call(capsys, "resolve", "--ideal", "fixture:cob", "--width", "4", "--dump-matrices")
    assert code == 0
    assert "# d2 5x6" in out
