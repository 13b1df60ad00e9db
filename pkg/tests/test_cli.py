import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from affine_char import SceneError, scene as scenes
from affine_char.cli import main

import generators as gen

seeds = st.integers(0, 2 ** 32)

IDENTITY_SCENE = """\
[tori.T2]
rank = 2

[levels.tau]
torus = "T2"
K = [[-2, 1], [1, -3]]

[morphisms.id]
source = "T2"
target = "T2"
matrix = [[1, 0], [0, 1]]
kind = "finite_covering"
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


@pytest.fixture
def identity_scene(tmp_path):
    p = tmp_path / "identity.toml"
    p.write_text(IDENTITY_SCENE, encoding="utf-8")
    return str(p)


def as_table(images):
    return {tuple(e["orbit"]): {tuple(t["orbit"]): t["coeff"] for t in e["image"]}
            for e in images}


# -- orbits ---------------------------------------------------------------------


def test_orbits_counterexample_h_level(capsys):
    code, doc = run_json(capsys, "orbits", "--scene", "builtin:counterexample", "--level", "h_tau")
    assert code == 0
    assert doc["results"]["count"] == 4
    assert doc["results"]["orbits"] == [[0], [1], [2], [3]]


def test_orbits_unimodular(capsys):
    code, doc = run_json(capsys, "orbits", "--scene", "builtin:counterexample", "--level", "tau")
    assert (code, doc["results"]["count"]) == (0, 1)


def test_orbits_u3_group(capsys):
    code, doc = run_json(capsys, "orbits", "--scene", "builtin:u3", "--group", "U3")
    res = doc["results"]
    assert code == 0 and res["count"] == 1 and res["weyl_order"] == 6
    assert len(res["regular_orbits"][0]["members"]) == 6


def test_orbits_text_output(capsys):
    code, out = run(capsys, "orbits", "--scene", "builtin:counterexample", "--level", "g_tau")
    assert code == 0
    assert out.splitlines()[0] == "level g_tau: 4 orbit(s)"


# -- induce ---------------------------------------------------------------------


def test_induce_f_at_g_tau(capsys):
    code, doc = run_json(capsys, "induce", "--scene", "builtin:counterexample",
                         "--morphism", "f", "--level", "g_tau", "--basis=0,0")
    assert code == 0
    assert doc["results"]["images"] == [{"orbit": [0, 0], "image": [
        {"orbit": [0], "coeff": 1}, {"orbit": [2], "coeff": 1}]}]
    assert doc["results"]["pulled_back_level"] == [[-4]]


@pytest.mark.parametrize("view", ["char", "k", "rl"])
def test_induce_identity_is_identity(capsys, identity_scene, view):
    code, doc = run_json(capsys, "induce", "--scene", identity_scene, "--morphism", "id",
                         "--level", "tau", "--view", view, "--all")
    assert code == 0
    table = as_table(doc["results"]["images"])
    assert len(table) == 5
    assert all(img == {orbit: 1} for orbit, img in table.items())


@pytest.mark.parametrize("morphism,level", [("f", "g_tau"), ("h", "tau"), ("g", "tau"),
                                            ("g", "g_tau")])
def test_induce_views_agree(capsys, morphism, level):
    tables = []
    for view in ("char", "k", "rl"):
        code, doc = run_json(capsys, "induce", "--scene", "builtin:counterexample",
                             "--morphism", morphism, "--level", level, "--view", view, "--all")
        assert code == 0
        tables.append(as_table(doc["results"]["images"]))
    assert tables[0] == tables[1] == tables[2]


def test_induce_group_morphism(capsys):
    code, doc = run_json(capsys, "induce", "--scene", "builtin:u3", "--morphism", "f", "--all")
    assert code == 0
    (entry,) = doc["results"]["images"]
    image = {(tuple(t["orbit"]), t["coeff"]) for t in entry["image"]}
    assert image == {((0,), 2), ((1,), 2), ((2,), 2)}


def test_induce_group_morphism_rejects_other_views(capsys):
    code, doc = run_json(capsys, "induce", "--scene", "builtin:u3", "--morphism", "f",
                         "--all", "--view", "k")
    assert code == 2 and "error" in doc


def test_induce_needs_basis_or_all(capsys):
    code, doc = run_json(capsys, "induce", "--scene", "builtin:counterexample",
                         "--morphism", "f", "--level", "g_tau")
    assert code == 2


def test_induce_names_violated_condition(capsys):
    # h lands in a rank 2 torus, h_tau lives on a rank 1 torus
    code, doc = run_json(capsys, "induce", "--scene", "builtin:counterexample",
                         "--morphism", "h", "--level", "h_tau", "--basis=0")
    assert code == 2
    assert doc["error"]["condition"] == "objects must live on tori of matching rank"


def test_induce_basis_of_wrong_length_exits_two(capsys):
    code, doc = run_json(capsys, "induce", "--scene", "builtin:counterexample",
                         "--morphism", "f", "--level", "g_tau", "--basis=0")
    assert code == 2 and doc["error"]["condition"]


# -- decompose ------------------------------------------------------------------


def test_decompose_f(capsys):
    code, doc = run_json(capsys, "decompose", "--scene", "builtin:counterexample",
                         "--morphism", "f", "--level", "g_tau")
    res = doc["results"]
    assert code == 0
    assert res["q"] == [[1]]
    assert res["fj"] == [[1, 1], [-1, 1]]
    assert res["perp_basis"] == [[1], [1]]
    assert res["degrees"] == {"q": 1, "fj": 2}
    assert res["split_levels"] == [[[-4]], [[-4]]]


def test_decompose_h(capsys):
    code, doc = run_json(capsys, "decompose", "--scene", "builtin:counterexample",
                         "--morphism", "h", "--level", "tau")
    assert code == 0
    assert doc["results"]["q"] == [[2]] and doc["results"]["degrees"]["q"] == 2


# -- verify ---------------------------------------------------------------------


@pytest.mark.parametrize("check", ["counterexample", "u3", "rho-shift"])
def test_verify_builtins_pass(capsys, check):
    code, doc = run_json(capsys, "verify", check)
    assert code == 0 and doc["results"]["ok"]


def test_verify_counterexample_reports_factor_two(capsys):
    code, out = run(capsys, "verify", "counterexample")
    assert code == 0
    assert "2" in out and out.rstrip().endswith("all checks passed")


def test_verify_u3_mentions_naive_image(capsys):
    code, doc = run_json(capsys, "verify", "u3")
    notes = [n for r in doc["results"]["reports"] for n in r["notes"]]
    assert code == 0 and notes


def test_verify_rho_shift_inconsistent_exits_one(capsys):
    code, doc = run_json(capsys, "verify", "rho-shift", "--scene", "builtin:rho-shift-inconsistent")
    assert code == 1
    (report,) = doc["results"]["reports"]
    assert report["checks"][0]["detail"]["condition"]


@pytest.mark.parametrize("check", ["functoriality", "naturality-k", "naturality-rl", "fht"])
def test_verify_pair_checks_on_counterexample(capsys, check):
    code, doc = run_json(capsys, "verify", check, "--scene", "builtin:counterexample")
    assert code == 0
    subjects = {r["subject"] for r in doc["results"]["reports"]}
    assert {"f@g_tau", "g@tau", "h@tau"} <= subjects


@pytest.mark.parametrize("check", ["naturality-k", "naturality-rl", "fht"])
def test_verify_identity_passes(capsys, identity_scene, check):
    assert run(capsys, "verify", check, "--scene", identity_scene)[0] == 0


# -- errors ---------------------------------------------------------------------


BAD_SCENES = {
    "asymmetric": IDENTITY_SCENE.replace("[[-2, 1], [1, -3]]", "[[-2, 1], [0, -3]]"),
    "wrong_kind": IDENTITY_SCENE.replace("[[1, 0], [0, 1]]", "[[1, 0], [0, 0]]"),
    "bad_ref": IDENTITY_SCENE.replace('torus = "T2"', 'torus = "T9"'),
    "syntax": IDENTITY_SCENE + "\n[[[",
    "float": IDENTITY_SCENE.replace("-3]]", "-3.0]]"),
    "unknown_section": IDENTITY_SCENE + "\n[extras]\nx = 1\n",
}


@pytest.mark.parametrize("name", sorted(BAD_SCENES))
def test_invalid_scene_exits_two(capsys, tmp_path, name):
    p = tmp_path / "bad.toml"
    p.write_text(BAD_SCENES[name], encoding="utf-8")
    code, out = run(capsys, "orbits", "--scene", str(p), "--level", "tau")
    assert code == 2
    err = json.loads(out)["error"]
    assert err["condition"] and err["message"]


def test_missing_file_exits_two(capsys, tmp_path):
    code, out = run(capsys, "orbits", "--scene", str(tmp_path / "nope.toml"))
    assert code == 2 and "error" in json.loads(out)


def test_non_positive_level_exits_two(capsys, tmp_path):
    p = tmp_path / "neg.toml"
    p.write_text(IDENTITY_SCENE.replace("[[-2, 1], [1, -3]]", "[[2, 0], [0, 3]]"))
    code, out = run(capsys, "orbits", "--scene", str(p), "--level", "tau")
    assert code == 2


def test_json_scene_accepted(capsys, tmp_path):
    p = tmp_path / "s.json"
    p.write_text(scenes.dumps(scenes.loads(IDENTITY_SCENE), "json"))
    code, doc = run_json(capsys, "orbits", "--scene", str(p), "--level", "tau")
    assert code == 0 and doc["results"]["count"] == 5


# -- determinism and round trips ------------------------------------------------


def test_console_script_is_deterministic(identity_scene):
    argv = [sys.executable, "-m", "affine_char.cli", "induce", "--scene", "builtin:counterexample",
            "--morphism", "f", "--level", "g_tau", "--all", "--view", "k", "--json"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["provenance"]["input_sha256"]


def test_result_document_round_trip(capsys):
    _, out = run(capsys, "verify", "fht", "--scene", "builtin:counterexample", "--json")
    assert json.dumps(json.loads(out), sort_keys=True, indent=2) + "\n" == out


@pytest.mark.parametrize("name", sorted(scenes.BUILTIN))
def test_builtin_scene_round_trip(name):
    sc = scenes.builtin(name)
    for fmt in ("toml", "json"):
        text = scenes.dumps(sc, fmt)
        again = scenes.loads(text, fmt)
        assert again == sc
        assert scenes.dumps(again, fmt) == text


def test_examples_command(capsys):
    code, out = run(capsys, "examples")
    assert code == 0 and "counterexample" in out
    code, out = run(capsys, "examples", "u3")
    assert scenes.loads(out) == scenes.builtin("u3")


def random_scene(rng: random.Random) -> scenes.Scene:
    data = {"tori": {}, "levels": {}, "morphisms": {}}
    for i in range(rng.randint(1, 3)):
        f, tau = gen.local_injection(rng, max_source=3, max_target=3, max_det=40)
        src, tgt = f"S{i}", f"T{i}"
        data["tori"][src] = {"rank": f.source.rank}
        data["tori"][tgt] = {"rank": f.target.rank}
        data["levels"][f"tau{i}"] = {"torus": tgt, "K": tau.K.tolist()}
        entry = {"source": src, "target": tgt, "matrix": f.F.tolist()}
        if rng.random() < 0.5:
            entry["kind"] = "local_injection"
        data["morphisms"][f"f{i}"] = entry
    return scenes.from_dict(data)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_random_scene_round_trip(seed):
    sc = random_scene(random.Random(seed))
    for fmt in ("toml", "json"):
        text = scenes.dumps(sc, fmt)
        assert scenes.loads(text, fmt) == sc
        assert scenes.dumps(scenes.loads(text, fmt), fmt) == text


def test_scene_error_is_raised_for_bad_text():
    with pytest.raises(SceneError):
        scenes.loads("[levels.x]\ntorus = 3\n")
