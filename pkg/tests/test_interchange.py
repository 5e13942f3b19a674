import json

import numpy as np
import pytest

from malcev import corpus
from malcev.bar import h0
from malcev.braid_kz import generator_path, kz_system
from malcev.interchange import (
    InterchangeError,
    dump_dga,
    dump_forms,
    dump_group,
    dump_irreps,
    dump_path,
    dump_presentation,
    load_dga,
    load_forms,
    load_group,
    load_irreps,
    load_path,
    load_presentation,
    parse_json_text,
)
from malcev.free_lie import nilpotent_quotient
from malcev.groups import symmetric_group
from malcev.relcomp import young_irreps
from malcev.transport import transport


def through_json(doc):
    return json.loads(json.dumps(doc))


@pytest.mark.parametrize("model", corpus.all_models(), ids=lambda m: m.name)
def test_dga_round_trip(model):
    doc = through_json(dump_dga(model))
    again, coal = load_dga(doc)
    assert coal is None
    assert dump_dga(again) == doc
    assert h0(again, None, 3).report.new_dims == h0(model, None, 3).report.new_dims


def test_dga_with_coefficients_round_trip():
    model, coal = corpus.wedge_swap()
    doc = through_json(dump_dga(model, coal))
    again, coal2 = load_dga(doc)
    assert coal2 is not None and len(coal2.group.elements) == 2
    assert not coal2.validate(again)
    assert h0(again, coal2, 3).report.new_dims == h0(model, coal, 3).report.new_dims


def test_presentation_round_trip():
    S = kz_system(3, 3)
    doc = through_json(dump_presentation(S.lie.presentation))
    q = nilpotent_quotient(load_presentation(doc))
    assert q.dims() == S.lie.dims()
    assert dump_presentation(q.presentation) == doc
    assert nilpotent_quotient(load_presentation(doc, truncation=2)).dims() == (3, 1)


def test_path_round_trip_arc_and_polynomial():
    for geometry in ("arc", "box"):
        path = generator_path(1, 3, geometry)
        again = load_path(through_json(dump_path(path)))
        assert np.allclose(again.sample(50), path.sample(50), atol=1e-14)


def test_forms_round_trip_preserve_transport():
    S = kz_system(3, 2)
    path = generator_path(2, 3)
    doc = through_json(dump_forms(S.omega))
    omega = load_forms(doc, S.lie)
    a = transport(path, S.omega, 1e-10).series
    b = transport(path, omega, 1e-10).series
    assert a.distance(b) < 1e-12


def test_group_and_irreps_round_trip():
    G = symmetric_group(3)
    H = load_group(through_json(dump_group(G)))
    assert len(H.elements) == 6 and not H.validate()
    irreps = young_irreps(3)
    again = load_irreps(through_json(dump_irreps(irreps)))
    assert [r.dim for r in again] == [r.dim for r in irreps]
    assert all(r.is_homomorphism() for r in again)


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ({"basis": [{"label": "1", "degree": 0}]}, "'unit'"),
        ({"basis": [{"label": "1", "degree": "zero"}], "unit": "1"}, "dga.basis[0].degree"),
        ({"basis": [{"label": "1", "degree": 0}], "unit": "1", "d": {"1": [{"coeff": 0.5, "label": "1"}]}}, "dga.d"),
    ],
)
def test_malformed_dga_reports_location(doc, fragment):
    with pytest.raises(InterchangeError) as info:
        load_dga(doc)
    assert fragment in str(info.value)


def test_malformed_path_and_forms():
    with pytest.raises(InterchangeError, match=r"path.segments\[0\].kind"):
        load_path({"dimension": 1, "segments": [{"kind": "spiral"}]})
    with pytest.raises(InterchangeError, match="coeffs"):
        load_path({"dimension": 2, "segments": [{"kind": "polynomial", "coeffs": [[0]]}]})
    S = kz_system(2, 2)
    with pytest.raises(InterchangeError, match=r"form\[0\]"):
        load_forms([{"kind": "dlog", "affine": {"constant": 0, "gradient": [1, -1]}, "lie": [{"coefficient": "1", "word": "Q"}]}], S.lie)


def test_irreps_must_be_homomorphisms():
    doc = dump_irreps(young_irreps(3))
    doc["irreps"][1]["matrices"] = {g: [["1"]] if g == doc["group"]["elements"][0] else [["-1"]] for g in doc["group"]["elements"]}
    with pytest.raises(InterchangeError, match="homomorphism"):
        load_irreps(doc)


def test_bad_json_text():
    with pytest.raises(InterchangeError, match="demo.json"):
        parse_json_text("{not json", "demo.json")
