from __future__ import annotations

import json

import pytest

from src.engine.errors import ParseError, ShapeError
from src.engine.exactlin import Field
from src.engine.prototwilled import check_proto_twilled, is_deformation_map
from src.repository.model import AlgebraDocument
from src.repository.repository import ModifyDocumentRepository, ReadDocumentRepository, dump_canonical


@pytest.fixture()
def modify_repo() -> ModifyDocumentRepository:
    return ModifyDocumentRepository()


@pytest.fixture()
def read_repo() -> ReadDocumentRepository:
    return ReadDocumentRepository()


def _document(**overrides) -> dict:
    data = {
        "schema": 1,
        "field": {"kind": "prime", "p": 5},
        "dim_g": 2,
        "dim_h": 1,
        "maps": {"bracket_g": [[["0", "0"], ["0", "0"]], [["1", "0"], ["0", "0"]]]},
        "linear_maps": {"r": [["0"], ["1"]]},
    }
    data.update(overrides)
    return data


# -----------------------
# READ
# -----------------------
def test_load_fixture(read_repo, fixtures_dir, gf5):
    doc = read_repo.load(fixtures_dir / "dim2-dim1-semidirect.json")

    assert doc.field == gf5
    assert (doc.dim_g, doc.dim_h) == (2, 1)
    assert doc.kind == "semidirect"
    assert sorted(doc.linear_maps) == ["bad", "r", "r0"]
    # absent components come back as zero maps of the right shape
    assert doc.maps["eta"].coeffs.shape == (2, 1, 1) and doc.maps["eta"].is_zero()
    assert check_proto_twilled(doc.to_omega()).ok


def test_field_override_reparses_scalars(read_repo, fixtures_dir, qq):
    doc = read_repo.load(fixtures_dir / "dim2-modified.json", field=qq)
    assert doc.field == qq
    assert doc.maps["bracket_g"].coeffs[1, 0, 0] == qq.one


def test_invalid_json_is_a_parse_error(read_repo, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json", encoding="utf-8")
    with pytest.raises(ParseError, match="invalid JSON"):
        read_repo.load(path)


def test_missing_file_raises_oserror(read_repo, tmp_path):
    with pytest.raises(OSError):
        read_repo.load(tmp_path / "missing.json")


@pytest.mark.parametrize("overrides, path", [
    ({"schema": 2}, "schema"),
    ({"field": "GF(5)"}, "field"),
    ({"field": {"kind": "prime", "p": 6}}, "field.p"),
    ({"dim_h": -1}, "dim_h"),
    ({"dim_g": 0, "dim_h": 0}, "dim_g"),
    ({"dim_g": True}, "dim_g"),
    ({"maps": {"bracket_k": []}}, "maps.bracket_k"),
    ({"name": 7}, "name"),
    ({"linear_maps": {"r": [["0"], ["x"]]}}, "linear_maps.r[1][0]"),
])
def test_header_and_scalar_errors_carry_their_path(overrides, path):
    with pytest.raises(ParseError) as info:
        AlgebraDocument.from_dict(_document(**overrides))
    assert info.value.path == path


def test_zero_dimensional_h_loads_with_the_empty_map(read_repo, tmp_path):
    path = tmp_path / "no-h.json"
    path.write_text(json.dumps(_document(dim_h=0, linear_maps={"r": [[], []]})), encoding="utf-8")

    doc = read_repo.load(path)
    r = doc.linear_map("r")

    assert (doc.dim_g, doc.dim_h) == (2, 0)
    assert r.coeffs.shape == (2, 0)
    assert is_deformation_map(r, doc.to_omega()).ok
    assert doc.to_dict()["linear_maps"] == {"r": [[], []]}


def test_wrong_row_length_points_at_the_row():
    rows = [[["0", "0"], ["0", "0"], ["0", "0"]], [["1", "0"], ["0", "0"]]]
    with pytest.raises(ShapeError) as info:
        AlgebraDocument.from_dict(_document(maps={"bracket_g": rows}))
    assert info.value.path == "maps.bracket_g[0]"
    assert "expected 2 entries, got 3" in str(info.value)


def test_non_object_document_is_rejected():
    with pytest.raises(ParseError, match="JSON object"):
        AlgebraDocument.from_dict([1, 2])


def test_unknown_linear_map_lists_the_known_ones():
    doc = AlgebraDocument.from_dict(_document())
    with pytest.raises(ParseError, match="known: r") as info:
        doc.linear_map("s")
    assert info.value.path == "linear_maps.s"


# -----------------------
# MODIFY
# -----------------------
def test_write_is_canonical_and_loads_back(modify_repo, read_repo, tmp_path):
    doc = AlgebraDocument.from_dict(_document(name="sample", kind="semidirect"))
    first = modify_repo.write(doc, tmp_path / "a" / "doc.json")
    second = modify_repo.write(doc, tmp_path / "b" / "doc.json")

    assert first.read_bytes() == second.read_bytes()
    assert first.read_text(encoding="utf-8").endswith("}\n")
    assert read_repo.load(first).to_dict() == doc.to_dict()


def test_zero_components_are_left_out(gf5):
    doc = AlgebraDocument.from_dict(_document())
    assert list(doc.to_dict()["maps"]) == ["bracket_g"]
    assert "name" not in doc.to_dict()


def test_write_report_creates_parents(modify_repo, tmp_path):
    path = modify_repo.write_report("verdict: PASS\n", tmp_path / "out" / "report.txt")
    assert path.read_text(encoding="utf-8") == "verdict: PASS\n"


def test_dump_canonical_sorts_keys():
    assert dump_canonical({"b": 1, "a": [1]}) == json.dumps({"a": [1], "b": 1}, indent=2) + "\n"


def test_rational_descriptor_round_trips_through_a_document(qq):
    data = _document(field={"kind": "rational"}, linear_maps={"r": [["0"], ["-3/4"]]})
    doc = AlgebraDocument.from_dict(data)
    assert doc.field == Field.rational()
    assert doc.to_dict()["linear_maps"]["r"] == [["0"], ["-3/4"]]
