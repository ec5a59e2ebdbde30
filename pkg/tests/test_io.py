import json
from pathlib import Path

import pytest
from conftest import FIXTURES, crossed, leibniz_ctx
from hypothesis import given, settings
from hypothesis import strategies as st

from hstandard.exactla import Subspace
from hstandard.hcomplex import cochain_space
from hstandard.io import (
    AlgebraFile,
    ParseError,
    algebra_to_json,
    cochain_to_json,
    dumps,
    load_algebra,
    parse_algebra,
    parse_cochain,
)
from hstandard.leibniz import LeftRepresentation, LeibnizAlgebra

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"
rationals = st.fractions(min_value=-9, max_value=9, max_denominator=7)


def round_trip(af):
    text = dumps(algebra_to_json(af))
    back = parse_algebra(json.loads(text))
    assert dumps(algebra_to_json(back)) == text
    return back


@pytest.mark.parametrize("name", list(FIXTURES))
def test_fixture_files_match_the_library(name):
    t = FIXTURES[name]
    af = load_algebra(FIXTURE_DIR / f"{name}.json")
    assert af.algebra == t.algebra and af.h == t.h and af.rep == t.rep
    expected = dumps(algebra_to_json(AlgebraFile("leibniz", t.algebra, t.h, t.rep)))
    assert (FIXTURE_DIR / f"{name}.json").read_text(encoding="utf-8") == expected


def test_courant_dorfman_round_trip():
    cp = crossed("omni1", 2)
    af = AlgebraFile("courant_dorfman", cp.cd, cp.hdata.h, cp.hdata, [list(r) for r in cp.context().complement])
    back = round_trip(af)
    for f in ("module_action", "pairing", "partial", "bracket"):
        assert (getattr(back.algebra, f) - getattr(cp.cd, f)).is_zero()
    assert (back.algebra.r.mult - cp.cd.r.mult).is_zero()
    assert back.h == cp.hdata.h
    assert (back.rep.nabla - cp.hdata.nabla).is_zero()
    assert (back.rep.r_action - cp.hdata.r_action).is_zero()
    assert back.complement == af.complement


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(rationals, min_size=n ** 3, max_size=n ** 3),
    st.lists(rationals, min_size=n, max_size=n))))
def test_leibniz_round_trip_of_arbitrary_tensors(data):
    n, flat, hvec = data
    c = [[[flat[(i * n + j) * n + k] for k in range(n)] for j in range(n)] for i in range(n)]
    rep = LeftRepresentation(1, tuple([[x]] for x in hvec))
    af = AlgebraFile("leibniz", LeibnizAlgebra(n, c), Subspace.span([hvec], n), rep)
    back = round_trip(af)
    assert back.algebra == af.algebra and back.h == af.h and back.rep == af.rep


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(FIXTURES)), st.integers(0, 3), st.data())
def test_cochain_round_trip(name, n, data):
    ctx = leibniz_ctx(name)
    cb = cochain_space(ctx, n)
    coeffs = [data.draw(rationals) for _ in range(cb.dim)]
    w = cb.cochains().combine([coeffs]) if cb.dim else cb.cochains()
    doc = json.loads(dumps(cochain_to_json(w)))
    assert parse_cochain(doc, ctx) == w


def test_cochain_h_slots_are_symmetric():
    ctx = leibniz_ctx("omni2")
    doc = {"degree": 4, "components": [{"k": 2, "entries": [{"es": [], "hs": [1, 0], "value": ["1/2", 0]}]}]}
    w = parse_cochain(doc, ctx)
    assert w.value(2, (), (0, 1)) == w.value(2, (), (1, 0)) == [0.5, 0]
    out = cochain_to_json(w)
    assert out["components"][2]["entries"] == [{"es": [], "hs": [0, 1], "value": ["1/2", "0"]}]


BASE = {"kind": "leibniz", "dim": 2, "bracket": [{"i": 0, "j": 0, "coeffs": {"1": "1"}}], "H": {"basis": [["0", "1"]]}}


@pytest.mark.parametrize("mutate,path", [
    (lambda d: d["bracket"][0].update(i=2), "bracket[0].i"),
    (lambda d: d["bracket"][0]["coeffs"].update({"5": "1"}), "bracket[0].coeffs.5"),
    (lambda d: d["bracket"][0]["coeffs"].update({"1": "0.5"}), "bracket[0].coeffs.1"),
    (lambda d: d["bracket"][0]["coeffs"].update({"1": "1/0"}), "bracket[0].coeffs.1"),
    (lambda d: d["bracket"][0]["coeffs"].update({"1": 1.5}), "bracket[0].coeffs.1"),
    (lambda d: d.pop("dim"), "dim"),
    (lambda d: d.update(kind="lie"), "kind"),
    (lambda d: d["H"].update(basis=[["1"]]), "H.basis[0]"),
    (lambda d: d.update(scalars={}), "scalars"),
    (lambda d: d.update(representation={"dim": 1, "action": [[["0"]]]}), "representation.action"),
    (lambda d: d.update(labels=["a"]), "labels"),
])
def test_parse_errors_carry_a_path(mutate, path):
    doc = json.loads(json.dumps(BASE))
    mutate(doc)
    with pytest.raises(ParseError) as err:
        parse_algebra(doc)
    assert err.value.path == path


def test_cochain_parse_errors():
    ctx = leibniz_ctx("nilpotent2")
    bad = {"degree": 2, "components": [{"k": 0, "entries": [{"es": [0], "hs": [], "value": ["1"]}]}]}
    with pytest.raises(ParseError, match=r"components\[0\]\.entries\[0\]\.es"):
        parse_cochain(bad, ctx)
    bad = {"degree": 2, "components": [{"k": 1, "entries": [{"es": [], "hs": [1], "value": ["1"]}]}]}
    with pytest.raises(ParseError, match="out of range"):
        parse_cochain(bad, ctx)
    bad = {"degree": 2, "components": [{"k": 2, "entries": []}]}
    with pytest.raises(ParseError, match="k"):
        parse_cochain(bad, ctx)


def test_unreadable_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        load_algebra(tmp_path / "missing.json")
    p = tmp_path / "broken.json"
    p.write_text("{\n  \"kind\": ", encoding="utf-8")
    with pytest.raises(ParseError, match="line 2"):
        load_algebra(p)
