import copy

import pytest
from hypothesis import given

from xilab import fincat
from xilab.errors import (
    IllTypedComposite,
    MalformedData,
    MissingIdentity,
    NonAssociative,
    SizeGuardExceeded,
    UnknownCatalogName,
)

from strategies import categories


@pytest.mark.parametrize("name", fincat.CATALOG)
def test_catalog_round_trips_through_raw_format(name):
    C = fincat.catalog(name)
    again = fincat.validate_category(C.to_raw())
    assert again == C
    assert hash(again) == hash(C)


def test_catalog_sizes():
    sizes = {n: (len(fincat.catalog(n).objects), len(fincat.catalog(n).morphisms)) for n in fincat.CATALOG}
    assert sizes == {
        "terminal": (1, 1),
        "walking_arrow": (2, 3),
        "parallel_pair": (2, 4),
        "delta1": (2, 7),
        "walking_idempotent": (1, 2),
    }


def test_delta1_composites():
    D = fincat.catalog("delta1")
    assert D.compose("!", "d0") == "id[0]"
    assert D.compose("!", "d1") == "id[0]"
    assert D.compose("d0", "!") == "const0"
    assert D.compose("d1", "!") == "const1"
    assert D.compose("const0", "const1") == "const0"
    assert set(D.hom("[1]", "[1]")) == {"id[1]", "const0", "const1"}


def test_unknown_catalog_name():
    with pytest.raises(UnknownCatalogName):
        fincat.catalog("walking_square")


def _raw(name="delta1"):
    return copy.deepcopy(fincat.raw_catalog(name))


def test_missing_identity_is_reported():
    raw = _raw()
    del raw["identities"]["[1]"]
    with pytest.raises(MissingIdentity):
        fincat.validate_category(raw)


def test_wrong_identity_is_reported():
    raw = _raw()
    raw["identities"]["[1]"] = "const0"
    with pytest.raises(MissingIdentity) as info:
        fincat.validate_category(raw)
    assert "const0" in info.value.morphisms


def test_ill_typed_composite_names_its_morphisms():
    raw = _raw()
    for e in raw["composition"]:
        if e["g"] == "!" and e["f"] == "d0":
            e["result"] = "const0"
    with pytest.raises(IllTypedComposite) as info:
        fincat.validate_category(raw)
    assert set(info.value.morphisms) >= {"!", "d0"}


def test_missing_composite():
    raw = _raw()
    raw["composition"] = [e for e in raw["composition"] if not (e["g"] == "d0" and e["f"] == "!")]
    with pytest.raises(IllTypedComposite):
        fincat.validate_category(raw)


def test_non_associative_table():
    # a two-element "monoid" {1, a} with a∘a = 1 is fine; make a three-element table
    # whose product is a non-associative operation on {1, a, b}
    table = {("a", "a"): "b", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"}
    raw = {
        "objects": ["*"],
        "morphisms": [{"id": m, "src": "*", "dst": "*"} for m in ("1", "a", "b")],
        "identities": {"*": "1"},
        "composition": [{"g": g, "f": f, "result": r} for (g, f), r in table.items()],
    }
    with pytest.raises(NonAssociative) as info:
        fincat.validate_category(raw)
    assert len(info.value.morphisms) == 3


def test_malformed_input():
    with pytest.raises(MalformedData):
        fincat.validate_category({"objects": ["a"]})
    raw = _raw()
    raw["morphisms"].append(dict(raw["morphisms"][0]))
    with pytest.raises(MalformedData):
        fincat.validate_category(raw)


def test_morphism_guard():
    with pytest.raises(SizeGuardExceeded):
        fincat.validate_category(_raw(), morphism_limit=3)


def test_identity_composites_may_be_omitted():
    raw = _raw("walking_arrow")
    raw["composition"] = []
    C = fincat.validate_category(raw)
    assert C == fincat.catalog("walking_arrow")


def test_morphism_classes_in_delta1():
    D = fincat.catalog("delta1")
    k = {f: fincat.classify_morphism(D, f) for f in D.morphism_ids}
    assert k["d0"].mono and k["d0"].split_mono and not k["d0"].epi
    assert k["!"].epi and not k["!"].mono
    assert not k["const0"].mono and not k["const0"].epi
    assert all(k[i].iso for i in ("id[0]", "id[1]"))
    assert not fincat.all_monic(D)
    assert fincat.all_monic(fincat.catalog("parallel_pair"))


def test_terminal_objects():
    got = {n: fincat.terminal_object(fincat.catalog(n)) for n in fincat.CATALOG}
    assert got == {
        "terminal": "*",
        "walking_arrow": "b",
        "parallel_pair": None,
        "delta1": "[0]",
        "walking_idempotent": None,
    }


@given(categories())
def test_generated_categories_are_associative_and_unital(C):
    for g in C.morphisms:
        assert C.compose(C.identity[g.dst], g.id) == g.id
        assert C.compose(g.id, C.identity[g.src]) == g.id
        for f in C.morphisms:
            if g.src != f.dst:
                continue
            h = C.compose(g.id, f.id)
            assert C.src(h) == f.src and C.dst(h) == g.dst


@given(categories())
def test_identity_colimit_agrees_with_terminal_object(C):
    t = fincat.terminal_object(C)
    col = fincat.identity_colimit(C)
    if t is None:
        # a colimit of the identity always has a terminal vertex, so none can exist here
        assert col is None
    else:
        assert col is not None
        assert len(C.hom(col[0], t)) == 1 and len(C.hom(t, col[0])) == 1


@given(categories())
def test_raw_round_trip_of_generated_categories(C):
    assert fincat.validate_category(C.to_raw()) == C
