import pytest
from hypothesis import given, strategies as st

from footprint import labels as lab
from footprint.errors import DataError, LengthMismatch, UnknownFlair


def test_recode_strips_whitespace():
    assert lab.recode_flair("  :lib: - LibCenter \n") == "libcenter"


@pytest.mark.parametrize("bad", [":LIB: - LibCenter", "LibCenter", "", ":lib:-LibCenter"])
def test_recode_rejects_unknown(bad):
    with pytest.raises(UnknownFlair):
        lab.recode_flair(bad)


def test_axis_maps_reject_unknown():
    with pytest.raises(UnknownFlair):
        lab.to_economic("center")
    with pytest.raises(UnknownFlair):
        lab.to_social("Left")


def test_parse_ideology_accepts_both_forms():
    assert lab.parse_ideology(":authleft: - AuthLeft") == "authleft"
    assert lab.parse_ideology("authleft") == "authleft"


def test_nine_classes_are_sorted_and_complete():
    assert list(lab.NINE_CLASSES) == sorted(lab.NINE_CLASSES)
    assert set(lab.RAW_FLAIRS.values()) == set(lab.NINE_CLASSES)
    assert set(lab.ECONOMIC_MAP.values()) == set(lab.ECON_CLASSES)
    assert set(lab.SOCIAL_MAP.values()) == set(lab.SOCIAL_CLASSES)


def test_filter_centrists_keeps_order():
    three = ["left", "center", "right", "center", "left"]
    assert lab.filter_centrists(three) == [0, 2, 4]
    col = lab.LabelColumn(["a", "b", "c"], ["center", "lib", "auth"])
    assert lab.filter_centrists(col) == [1, 2]


def test_label_column_validation():
    with pytest.raises(LengthMismatch):
        lab.LabelColumn(["a"], ["left", "right"])
    with pytest.raises(DataError):
        lab.LabelColumn(["a", "a"], ["left", "right"])


def test_label_column_map_and_subset():
    col = lab.LabelColumn(["u1", "u2", "u3"], ["libleft", "centrist", "authright"])
    econ = col.map(lab.to_economic)
    assert econ.labels == ("left", "center", "right")
    assert econ.subset([2, 0]).user_ids == ("u3", "u1")


@pytest.mark.parametrize("target,n_kept", [("econ_binary", 6), ("social_binary", 6),
                                           ("econ_3", 9), ("social_3", 9), ("nine_class", 9)])
def test_target_labels(target, n_kept):
    keep, y = lab.target_labels(list(lab.NINE_CLASSES), target)
    assert len(keep) == len(y) == n_kept
    if target.endswith("binary"):
        assert "center" not in y


def test_target_labels_unknown():
    with pytest.raises(DataError):
        lab.target_labels(["left"], "econ")


def test_flair_file_roundtrip(tmp_path):
    p = tmp_path / "flairs.csv"
    p.write_text("username,ideology\nalice,:left: - Left\nbob,libright\n")
    col = lab.read_flairs(p)
    assert col.as_dict() == {"alice": "left", "bob": "libright"}
    out = tmp_path / "out.csv"
    lab.write_flairs(out, col)
    assert lab.read_flairs(out) == col


def test_flair_file_bad_header(tmp_path):
    p = tmp_path / "flairs.csv"
    p.write_text("user,flair\nalice,left\n")
    with pytest.raises(DataError):
        lab.read_flairs(p)


@given(st.lists(st.sampled_from(sorted(lab.RAW_FLAIRS)), min_size=1, max_size=30))
def test_recoding_is_total_and_consistent(raws):
    for raw in raws:
        nine = lab.recode_flair(raw)
        assert lab.to_economic(nine) in lab.ECON_CLASSES
        assert lab.to_social(nine) in lab.SOCIAL_CLASSES
