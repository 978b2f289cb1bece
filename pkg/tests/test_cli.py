import json

import pytest

from clusterdual.cli import main
from clusterdual.polygon import Triangulation, complete_a0
from clusterdual.seed import Seed, mutate_word


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_seed_mutate(tmp_path, capsys):
    s = Seed([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    path = write(tmp_path, "s.json", s.to_json())
    code, out, _ = run(capsys, ["seed", "mutate", "--in", path, "--word", "1,2"])
    assert code == 0
    assert Seed.from_json(json.loads(out)) == mutate_word(s, [0, 1])


def test_cluster_fpoly(tmp_path, capsys):
    path = write(tmp_path, "s.json", Seed([[0, 1], [-1, 0]]).to_json())
    code, out, _ = run(capsys, ["cluster", "fpoly", "--seed", path, "--word", "1", "--target", "1"])
    data = json.loads(out)
    assert code == 0 and data["g"] == [-1, 0]
    assert len(data["F"]) == 2


def test_tropical_mutate(tmp_path, capsys):
    pt = write(tmp_path, "p.json", {"type": "d", "coords": ["1", "0", "2", "0"], "eps": [[0, 1], [-1, 0]]})
    code, out, _ = run(capsys, ["tropical", "mutate", "--type", "d", "--point", pt, "--word", "1"])
    assert code == 0
    assert json.loads(out)["coords"] == ["-1", "0", "-2", "2"]


def test_polygon_commands(tmp_path, capsys):
    code, out, _ = run(capsys, ["polygon", "count", "--n", "6"])
    assert code == 0 and json.loads(out)["triangulations"] == 14
    code, out, _ = run(capsys, ["polygon", "snake", "--n", "5", "--arc", "2,5"])
    data = json.loads(out)
    assert code == 0 and len(data["tiles"]) == 2 and data["matchings"] == 3
    tri = write(tmp_path, "t.json", Triangulation(4, ((0, 2),)).to_json())
    code, out, _ = run(capsys, ["polygon", "snake", "--tri", tri, "--arc", "2,4"])
    assert json.loads(out)["matchings"] == 2


def test_duality_ia(tmp_path, capsys):
    lam = write(tmp_path, "l.json", complete_a0(6, {(1, 4): 1}).to_json())
    code, out, _ = run(capsys, ["duality", "ia", "--n", "6", "--lam", lam])
    assert code == 0 and json.loads(out)["coeff_ring"] == "Z"
    code, out, _ = run(capsys, ["duality", "ia", "--n", "6", "--lam", lam, "--quantum"])
    data = json.loads(out)
    assert code == 0 and data["coeff_ring"] == "Z[q,q^-1]"
    assert all("coef" in t for t in data["terms"])


def test_duality_ia_rejects_odd_parity(tmp_path, capsys):
    lam = write(tmp_path, "l.json", {"n": 4, "curves": [{"segments": [0, 2], "weight": "1"}]})
    code, _, err = run(capsys, ["duality", "ia", "--n", "4", "--lam", lam, "--quantum"])
    assert code == 1
    assert json.loads(err)["error"] == "a0_parity"


def test_duality_id(tmp_path, capsys):
    C = write(tmp_path, "c.json", complete_a0(5, {(0, 2): 1}).to_json())
    Cm = write(tmp_path, "m.json", complete_a0(5, {(1, 3): 1}).to_json())
    code, out, _ = run(capsys, ["duality", "id", "--n", "5", "--lam", C, "--mirror", Cm])
    data = json.loads(out)
    assert code == 0 and data["quantum"] is False
    assert [f["arc"] for f in data["den_factors"]] == [[0, 2]]


def test_quantum_commands(capsys):
    code, out, _ = run(capsys, ["quantum", "psi", "--order", "4"])
    assert code == 0 and json.loads(out)["order"] == 4
    code, out, _ = run(capsys, ["quantum", "fpoly", "--n", "5", "--arc", "2,5"])
    assert code == 0 and len(json.loads(out)["F"]) == 3


def test_malformed_json(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", "{not json")
    code, _, err = run(capsys, ["seed", "mutate", "--in", bad, "--word", "1"])
    assert code == 1 and json.loads(err)["error"] == "malformed_json"
    wrong = write(tmp_path, "wrong.json", {"eps": "nope"})
    code, _, err = run(capsys, ["seed", "mutate", "--in", wrong, "--word", "1"])
    assert code == 1 and json.loads(err)["error"] == "malformed_json"


@pytest.mark.parametrize("argv", [
    ["seed"],
    ["bogus"],
    ["polygon", "snake", "--arc", "1,3"],
    ["polygon", "count", "--n", "5", "--unknown"],
    ["quantum", "psi", "--order", "40"],
    ["polygon", "snake", "--n", "5", "--arc", "1,2"],
    ["verify", "nosuch"],
])
def test_usage_errors(argv, capsys):
    code, _, err = run(capsys, argv)
    assert code == 1 and json.loads(err)["error"] == "usage"


def test_verify(capsys):
    code, out, _ = run(capsys, ["verify", "census", "--level", "quick"])
    assert code == 0 and out.startswith("PASS census")
    code, out, _ = run(capsys, ["verify", "census", "--level", "quick", "--json"])
    assert json.loads(out)["passed"] is True
