import json
import os

import pytest

import superbv

DATA = os.path.join(os.path.dirname(__file__), "data", "v1")


def test_load_atlas():
    atlas = superbv.load_atlas(os.path.join(DATA, "conic.json"))
    assert atlas.name == "conic"
    assert atlas.dims == (1, 2)
    assert all(result.passed for result in superbv.verify_atlas(atlas))
    built = superbv.build_super_conic()
    for pair in built.pairs():
        assert atlas.transition(*pair).images == built.transition(*pair).images


def test_dump_and_load(tmp_path):
    atlas = superbv.build_projective(2, 1)
    filename = str(tmp_path / "atlases" / "cp.json")
    superbv.dump_atlas(atlas, filename)
    loaded = superbv.load_atlas(filename)
    assert loaded.pairs() == atlas.pairs()
    assert superbv.atlas_to_dict(loaded) == superbv.atlas_to_dict(atlas)


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        superbv.load_atlas(os.path.join(DATA, "missing.json"))


def test_wrong_extension(tmp_path):
    filename = tmp_path / "conic.txt"
    filename.write_text("{}")
    with pytest.raises(ValueError):
        superbv.load_atlas(str(filename))


def test_invalid_json(tmp_path):
    filename = tmp_path / "broken.json"
    filename.write_text("{charts: ")
    with pytest.raises(ValueError):
        superbv.load_atlas(str(filename))


def test_unknown_chart_in_transition():
    data = superbv.atlas_to_dict(superbv.build_projective(1, 0))
    data["transitions"][0]["from"] = "U7"
    with pytest.raises(superbv.AtlasError):
        superbv.atlas_from_dict(data)


def test_declared_dimension_must_match():
    data = superbv.atlas_to_dict(superbv.build_projective(1, 1))
    data["dims"] = [1, 2]
    with pytest.raises(ValueError):
        superbv.atlas_from_dict(data)


def test_dict_is_json_serializable():
    text = json.dumps(superbv.atlas_to_dict(superbv.build_super_conic()))
    assert json.loads(text)["dims"] == [1, 2]
