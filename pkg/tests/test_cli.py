import json

import pytest

from coturan import embedding, sufficient, zycle
from coturan.cli import main, run
from coturan.embedding import EmbeddingWitness
from coturan.families import tight_cycle_minus
from coturan.hypergraph import random_hypergraph, read, write


def _report(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(out[-1]) if out else None


def test_gen_zycle(tmp_path, capsys):
    out = tmp_path / "z.hg"
    code, rep = _report(capsys, ["gen", "--family", "zycle", "--k", "3", "--l", "3", "--out", str(out)])
    assert code == 0 and rep["verdict"] == "GENERATED"
    G = read(out)
    assert (G.n, G.num_edges()) == (6, 6)


def test_gen_default_name(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, rep = _report(capsys, ["gen", "--family", "complete_kpartite", "--k", "3", "--t", "2"])
    assert code == 0
    assert read(tmp_path / rep["details"]["out"]).num_edges() == 8


def test_embed_reduction(tmp_path, capsys):
    write(tight_cycle_minus(3, 8), tmp_path / "p.hg")
    write(tight_cycle_minus(3, 5), tmp_path / "h.hg")
    wpath = tmp_path / "w.json"
    code, rep = _report(capsys, ["embed", "--pattern", str(tmp_path / "p.hg"), "--host", str(tmp_path / "h.hg"),
                                 "--mode", "hom", "--witness-out", str(wpath)])
    assert code == 0 and rep["verdict"] == "WITNESS"
    w = EmbeddingWitness.from_json(json.loads(wpath.read_text()))
    assert embedding.verify(tight_cycle_minus(3, 8), tight_cycle_minus(3, 5), w)


def test_embed_none_exit_code(tmp_path, capsys):
    write(tight_cycle_minus(3, 5), tmp_path / "p.hg")
    write(tight_cycle_minus(3, 8), tmp_path / "h.hg")
    code, rep = _report(capsys, ["embed", "--pattern", str(tmp_path / "p.hg"), "--host", str(tmp_path / "h.hg"),
                                 "--mode", "ord"])
    # consecutive edges force consecutive images, then {0,3,4} lands on a non-edge
    assert (code, rep["verdict"]) == (1, "NONE")
    code, rep = _report(capsys, ["embed", "--pattern", str(tmp_path / "h.hg"), "--host", str(tmp_path / "p.hg")])
    assert (code, rep["verdict"]) == (1, "NONE")


def test_theorem2_witness_file(tmp_path, capsys):
    F = tight_cycle_minus(4, 9)
    write(F, tmp_path / "f.hg")
    wpath = tmp_path / "t.json"
    code, rep = _report(capsys, ["theorem2", "--pattern", str(tmp_path / "f.hg"), "--witness-out", str(wpath)])
    assert code == 0
    assert sufficient.validate(F, sufficient.ConditionWitness.from_json(json.loads(wpath.read_text())))


def test_theorem2_no(tmp_path, capsys):
    from coturan.families import tight_cycle
    write(tight_cycle(3, 7), tmp_path / "c.hg")
    code, rep = _report(capsys, ["theorem2", "--pattern", str(tmp_path / "c.hg")])
    assert (code, rep["verdict"]) == (1, "NO")


def test_verify_free_gcd_branch(capsys):
    code, rep = _report(capsys, ["verify-free", "--k", "4", "--l", "6", "--N", "4"])
    assert (code, rep["verdict"]) == (0, "FREE")


def test_verify_free_positive_control(tmp_path, capsys):
    wpath = tmp_path / "copy.json"
    code, rep = _report(capsys, ["verify-free", "--k", "5", "--l", "7", "--N", "5", "--plain", "--witness-out", str(wpath)])
    assert (code, rep["verdict"]) == (1, "COPY-FOUND")
    from coturan.constructions import build_plain
    w = EmbeddingWitness.from_json(json.loads(wpath.read_text()))
    assert embedding.verify(tight_cycle_minus(5, 7), build_plain(55, 5, 5), w)


def test_verify_free_timeout_exit_3(capsys):
    code, rep = _report(capsys, ["verify-free", "--k", "5", "--l", "7", "--N", "5", "--budget-secs", "0.5"])
    assert (code, rep["verdict"]) == (3, "INCONCLUSIVE")


def test_construct_small_and_scheme(tmp_path, capsys):
    code, rep = _report(capsys, ["construct", "--k", "4", "--l", "6", "--N", "2", "--out", str(tmp_path / "g.hg")])
    assert code == 0 and rep["details"]["edges"] == read(tmp_path / "g.hg").num_edges()
    code, rep = _report(capsys, ["construct", "--k", "5", "--l", "7", "--N", "5", "--modified",
                                 "--scheme-out", str(tmp_path / "s.json")])
    assert code == 0
    data = json.loads((tmp_path / "s.json").read_text())
    assert (data["m"], data["t"], data["s"], len(data["table"])) == (55, 2, 3, 55)


def test_construct_too_large_to_write(tmp_path, capsys):
    code, rep = _report(capsys, ["construct", "--k", "5", "--l", "7", "--N", "5", "--out", str(tmp_path / "g.hg")])
    assert code == 1 and "too large" in rep["details"]["reason"]


def test_zycle_find_witness_file(tmp_path, capsys):
    G = random_hypergraph(3, 60, 0.8, 0)
    write(G, tmp_path / "r.hg")
    wpath = tmp_path / "z.json"
    code, rep = _report(capsys, ["zycle-find", "--host", str(tmp_path / "r.hg"), "--l", "4", "--eps", "0.3",
                                 "--witness-out", str(wpath)])
    assert code == 0
    w = zycle.ZycleWitness.from_json(json.loads(wpath.read_text()))
    assert zycle.verify_zycle_witness(G, 4, w)
    assert set(json.loads(wpath.read_text())) == {"chain", "f", "w", "missing"}


def test_zycle_find_staged_failure(tmp_path, capsys):
    from coturan.families import tight_cycle
    write(tight_cycle(3, 6), tmp_path / "c.hg")
    code, rep = _report(capsys, ["zycle-find", "--host", str(tmp_path / "c.hg"), "--l", "3", "--eps", "0.1"])
    assert code == 1 and rep["details"]["stage"] == "precondition"


def test_usage_errors_exit_2(capsys):
    assert run(["embed", "--bogus"])[0] == 2
    assert run(["nonsense"])[0] == 2
    assert run([])[0] == 2


def test_bad_input_file(tmp_path, capsys):
    (tmp_path / "bad.hg").write_text("3 4\n0 2 1\n")
    code, rep = _report(capsys, ["theorem2", "--pattern", str(tmp_path / "bad.hg")])
    assert code == 1 and "error" in rep["details"]


@pytest.mark.parametrize("argv", [
    ["verify-free", "--k", "4", "--l", "6", "--N", "4", "--seed", "3"],
    ["accept", "--only", "3,4", "--seed", "1"],
])
def test_reports_are_reproducible(argv):
    def strip(rep):
        d = json.loads(rep.to_json())
        d.pop("wall_time")
        for row in d["details"].get("criteria", []):
            row.pop("elapsed", None)
        return json.dumps(d, sort_keys=True)

    first, second = run(argv)[1], run(argv)[1]
    assert strip(first) == strip(second)


def test_accept_subset(capsys):
    code = main(["accept", "--only", "1,3"])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.err.count("[PASS]") == 2


def test_construct_modulus_override(tmp_path, capsys):
    code, rep = _report(capsys, ["construct", "--k", "5", "--l", "7", "--N", "5", "--m", "20",
                                 "--scheme-out", str(tmp_path / "s.json")])
    assert code == 0 and rep["details"]["m"] == 20
    code, rep = _report(capsys, ["construct", "--k", "5", "--l", "7", "--N", "5", "--m", "21"])
    assert code == 1 and "ConstructionFailure" in rep["details"]["error"]
