import json

import pytest

import fraisse_forge as ff

K2 = {"kind": "graph", "vertices": ["a", "b"], "edges": [["a", "b"]]}
PATH3 = {"kind": "graph", "vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}


def test_stage_one_over_an_edge():
    g = ff.stage(K2, 1)
    assert len(g["vertices"]) == 6
    assert len(g["edges"]) == 5


def test_green_counts_of_a_path():
    c = ff.green_counts(PATH3)
    assert c["monoid_size"] == 6
    assert (c["L"], c["R"], c["H"], c["D"]) == (3, 2, 3, 2)


def test_monoid_claims():
    report = ff.verify_monoid_claims(PATH3)
    assert report["ok"]
    assert all(c["counterexample"] is None for c in report["claims"])


def test_automorphisms_and_isomorphism():
    assert ff.count_automorphisms(PATH3) == 2
    assert ff.isomorphic(K2, {"kind": "graph", "vertices": ["x", "y"], "edges": [["y", "x"]]})
    assert not ff.isomorphic(K2, PATH3)


def test_cli_round_trip():
    code, out, _ = ff.run("construct", "L", "--S", "2,4,5", "--N", "6")
    assert code == 0
    assert len(json.loads(out)["vertices"]) == 10
    assert ff.run("frobnicate")[0] == 64


def test_errors_map_to_exceptions():
    with pytest.raises(ff.ParseError):
        ff.count_automorphisms("{oops")
    with pytest.raises(ff.CapExceeded):
        ff.stage(K2, 3)
    assert issubclass(ff.CapExceeded, ff.ForgeError)
