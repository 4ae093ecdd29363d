import io
import json
import subprocess
import sys

import pytest

from leafrel.cli import run
from leafrel.formats import (format_instance, format_map, format_quartets, format_triples,
                             parse_instance, parse_map, parse_quartets, parse_triples)
from leafrel.reconstruct import is_isomorphic
from leafrel.trees import enumerate_trees, format_newick, parse_newick, to_leaf_structure

FIXTURES = ["((a,b),c);", "(((a,b),c),d);", "((a,b),(c,d));", "((x,(y,z)),((u,v),w));",
            "(((((a,b),c),d),e),f);"]


def call(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stdin=io.StringIO(stdin), stderr=err)
    return code, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------- formats

def test_triple_format_round_trip():
    rows = [("a", "b", "c"), ("c", "d", "a")]
    assert parse_triples(format_triples(rows)) == rows
    assert parse_triples("# comment\n a  b|c  # tail\n\n") == [("a", "b", "c")]
    with pytest.raises(ValueError):
        parse_triples("a b c\n")
    with pytest.raises(ValueError):
        parse_triples("a | b c\n")


def test_quartet_format_round_trip():
    rows = [(("a", "b"), ("c", "d"))]
    assert parse_quartets(format_quartets(rows)) == rows
    with pytest.raises(ValueError):
        parse_quartets("a b | c\n")


def test_instance_format():
    text = format_instance("forbidden_triples", ["a", "b", "c"], [("a", "b", "c")])
    assert text.startswith("kind: forbidden\n")
    assert parse_instance(text) == ("forbidden_triples", ["a", "b", "c"], [("a", "b", "c")])
    assert parse_instance("kind: quartets\na b | c d\n") == (
        "quartets", None, [(("a", "b"), ("c", "d"))])
    with pytest.raises(ValueError):
        parse_instance("a b | c\n")
    with pytest.raises(ValueError):
        parse_instance("kind: pairs\n")


def test_map_format():
    mapping, consts = parse_map("@const c\na -> p\nb -> q\nc -> r\n")
    assert mapping == {"a": "p", "b": "q", "c": "r"} and consts == ("c",)
    assert parse_map(format_map(mapping, consts)) == (mapping, consts)
    with pytest.raises(ValueError):
        parse_map("a -> p\na -> q\n")
    with pytest.raises(ValueError):
        parse_map("a p\n")


# ---------------------------------------------------------------- commands

def test_orbits():
    assert call(["orbits", "3"]) == (0, "12\n", "")
    assert call(["orbits", "4", "--unordered"])[1] == "15\n"
    code, out, _ = call(["--json", "orbits", "2"])
    assert code == 0 and json.loads(out) == {"k": 2, "ordered": True, "types": 2}
    assert call(["orbits", "7"])[0] == 2


def test_triples_and_quartets():
    assert call(["triples"], "((a,b),c);") == (0, "a b | c\n", "")
    code, out, _ = call(["quartets"], "((a,b),(c,d));")
    assert out == "a b | c d\n"
    code, out, _ = call(["triples", "--json"], "((a,b),c);")
    assert json.loads(out) == {"triples": [["a", "b", "c"]]}


def test_build():
    assert call(["build"], "a b | c\n") == (0, "((a,b),c);\n", "")
    code, out, _ = call(["build"], "a b | c\nb c | a\n")
    assert code == 1 and out == "Inconsistent\n"
    code, out, _ = call(["build", "--labels", "d"], "a b | c\n")
    assert code == 0 and set(parse_newick(out).labels) == set("abcd")


def test_reroot_and_convex():
    assert call(["reroot", "--leaf", "d"], "(((a,b),c),d);") == (0, "((a,b),c);\n", "")
    code, out, _ = call(["convex", "--all"], "((a,b),c);")
    assert sorted(out.splitlines()) == ["a b c", "b a c", "c a b", "c b a"]
    code, out, _ = call(["convex", "--last", "a"], "(((a,b),c),d);")
    assert out.split()[-1] == "a"


def test_solve_commands():
    code, out, _ = call(["solve-quartets"], "a b | c d\na c | b d\n")
    assert code == 1 and out.startswith("unsatisfiable")
    code, out, _ = call(["solve-forbidden"], "kind: forbidden\na b | c\n")
    assert code == 0 and "satisfiable" in out
    code, _, err = call(["solve-forbidden"], "kind: quartets\na b | c d\n")
    assert code == 2 and "error" in err


def test_amalgam(tmp_path):
    p1, p2 = tmp_path / "one.nwk", tmp_path / "two.nwk"
    p1.write_text("((a,b),x);")
    p2.write_text("((a,b),y);")
    code, out, _ = call(["amalgam", str(p1), str(p2)])
    t = parse_newick(out)
    assert code == 0 and t.labels == {"a", "b", "x", "y"}
    p2.write_text("((a,x),b);")
    assert call(["amalgam", str(p1), str(p2)])[0] == 1


def test_behavior(tmp_path):
    src, dst, mp = tmp_path / "s.nwk", tmp_path / "t.nwk", tmp_path / "m.txt"
    src.write_text("((a,b),c);")
    dst.write_text("(p,(q,r));")
    mp.write_text("a -> p\nb -> q\nc -> r\n")
    code, out, _ = call(["behavior", "--source", str(src), "--target", str(dst), "--map", str(mp)])
    assert code == 0 and out.startswith("verdict: lin")
    src.write_text("(((a,b),c),d);")
    dst.write_text("(((p,q),r),s);")
    mp.write_text("@const d\na -> p\nb -> q\nc -> r\nd -> s\n")
    code, out, _ = call(["--json", "behavior", "--source", str(src), "--target", str(dst),
                         "--map", str(mp)])
    d = json.loads(out)
    assert d["verdict"] == "id_c" and d["anchor"] == "d"


def test_enumerate_and_generate():
    code, out, _ = call(["enumerate", "4"])
    assert code == 0 and len(out.splitlines()) == 15
    assert len(call(["enumerate", "5", "--shapes"])[1].splitlines()) == 3
    a = call(["generate", "triples", "5", "--seed", "3"])
    b = call(["generate", "triples", "5", "--seed", "3"])
    assert a == b and a[1].startswith("kind: triples")
    assert call(["generate", "triples", "5"])[0] == 2


def test_check_commands():
    code, out, _ = call(["check-c"], "(((a,b),c),d);")
    assert code == 0 and "ok: true" in out
    code, out, _ = call(["check-c"], "a b | c\nb c | a\n")
    assert code == 1
    code, out, _ = call(["--json", "check-d"], "((a,b),(c,d));")
    assert code == 0 and json.loads(out)["ok"] is True


def test_exit_codes_for_bad_input():
    assert call(["bogus"])[0] == 2
    assert call(["triples"], "((a,b),c")[0] == 2
    assert call(["triples", "/no/such/file"])[0] == 2
    assert call(["reroot", "--leaf", "z"], "((a,b),c);")[0] == 2


# ---------------------------------------------------------------- composition

@pytest.mark.parametrize("text", FIXTURES)
def test_pipe_round_trip(text):
    _, triples, _ = call(["triples"], text)
    code, out, _ = call(["build"], triples)
    assert code == 0
    assert is_isomorphic(to_leaf_structure(parse_newick(out)), to_leaf_structure(parse_newick(text)))


def test_pipe_round_trip_all_five_leaf_trees():
    for t in enumerate_trees("abcde"):
        _, triples, _ = call(["triples"], format_newick(t))
        assert parse_newick(call(["build"], triples)[1]) == t


def test_real_process_pipe():
    exe = [sys.executable, "-m", "leafrel"]
    first = subprocess.run(exe + ["triples"], input="((x,(y,z)),((u,v),w));",
                           capture_output=True, text=True, check=True)
    second = subprocess.run(exe + ["build"], input=first.stdout,
                            capture_output=True, text=True, check=True)
    assert parse_newick(second.stdout) == parse_newick("((x,(y,z)),((u,v),w));")


def _text_fields(text):
    out = {}
    for line in text.splitlines():
        if ": " in line:
            k, v = line.split(": ", 1)
            out.setdefault(k, v)
    return out


@pytest.mark.parametrize("argv, stdin", [
    (["check-c"], "((a,b),(c,d));"),
    (["check-c"], "a b | c\nb c | a\n"),
    (["solve-quartets"], "a b | c d\nc e | a b\n"),
    (["build"], "a b | c\nc d | a\n"),
])
def test_json_and_text_carry_the_same_information(argv, stdin):
    code_t, text, _ = call(argv, stdin)
    code_j, js, _ = call(["--json"] + argv, stdin)
    assert code_t == code_j
    d = json.loads(js)
    fields = _text_fields(text)
    if "verdict" in d and d.get("tree"):
        assert d["tree"] in text
    if "verdict" in fields:
        assert fields["verdict"] == d["verdict"]
    if "ok" in d:
        assert fields["ok"] == str(d["ok"]).lower()
        for v in d["universal_violations"]:
            assert v["axiom"] in text
