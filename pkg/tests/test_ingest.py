import numpy as np
import pytest

from regionkit import (
    CountTable,
    FeatureMatrix,
    InputError,
    ParseError,
    RegionRecord,
    filter_regions,
    load_counts,
    normalize,
    read_name_list,
)

HEADER = "region,total,ShanghaiMahjong,SichuanMahjong"


def write_counts(tmp_path, lines, name="counts.csv"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def table_from(tmp_path, lines):
    return load_counts(write_counts(tmp_path, lines))


def test_load_counts_wide_format(tmp_path):
    table = table_from(tmp_path, [HEADER, "Shanghai,272730,12127,1521", "Chongqing,208271,9,20791"])
    assert table.region_ids == ("Shanghai", "Chongqing")
    assert table.games == ("ShanghaiMahjong", "SichuanMahjong")
    assert table.totals[0] == 272730
    assert table.counts[0, 0] == 12127
    assert table.counts[1, 1] == 20791


def test_load_counts_all_zero_row_is_valid(tmp_path):
    table = table_from(tmp_path, [HEADER, "Ghost,0,0,0", "Shanghai,100,10,20"])
    assert table.totals[0] == 0
    assert table.counts[0].sum() == 0


def test_load_counts_count_exceeding_total_is_an_error(tmp_path):
    with pytest.raises(ParseError, match="count exceeds total") as err:
        table_from(tmp_path, [HEADER, "Oops,100,150,0"])
    assert "line 2" in str(err.value)


def test_load_counts_negative_count(tmp_path):
    with pytest.raises(ParseError, match="negative count"):
        table_from(tmp_path, [HEADER, "Oops,100,-3,0"])


def test_load_counts_non_integer_count(tmp_path):
    with pytest.raises(ParseError, match="non-integer count") as err:
        table_from(tmp_path, [HEADER, "A,100,1,2", "Oops,100,1.5,0"])
    assert "line 3" in str(err.value)


def test_load_counts_duplicate_region(tmp_path):
    with pytest.raises(ParseError, match="duplicate region_id") as err:
        table_from(tmp_path, [HEADER, "A,100,1,2", "A,50,3,4"])
    assert "line 3" in str(err.value)


def test_load_counts_malformed_row_names_line(tmp_path):
    with pytest.raises(ParseError, match="line 2.*malformed row"):
        table_from(tmp_path, [HEADER, "A,100,1"])


def test_load_counts_empty_cells_become_zero(tmp_path):
    table = table_from(tmp_path, [HEADER, "A,100,,7"])
    assert table.counts[0, 0] == 0
    assert table.counts[0, 1] == 7


def test_load_counts_reserved_metadata_columns(tmp_path):
    table = table_from(
        tmp_path,
        [
            "region,name,province,cx,cy,total,Go",
            "A,Alpha,North,1.5,2.5,40,12",
            "B,,,,,30,3",
        ],
    )
    assert table.games == ("Go",)
    assert table.regions[0].name == "Alpha"
    assert table.regions[0].province == "North"
    assert table.regions[0].centroid == (1.5, 2.5)
    assert table.regions[1].centroid is None


def test_load_counts_total_fallback_row_sums(tmp_path):
    table = table_from(tmp_path, ["region,Go,Chess", "A,12,8"])
    assert table.totals[0] == 20
    assert any("row sums" in note for note in table.provenance)


def test_load_counts_missing_file():
    with pytest.raises(InputError, match="not found"):
        load_counts("/nonexistent/counts.csv")


def test_normalize_table_quotients(tmp_path):
    table = table_from(
        tmp_path, [HEADER, "Shanghai,272730,12127,1521", "Chongqing,208271,9,20791"]
    )
    matrix = normalize(table, ["ShanghaiMahjong", "SichuanMahjong"])
    assert matrix.values[0, 0] == pytest.approx(0.044465, abs=1e-6)
    assert matrix.values[1, 1] == pytest.approx(0.099827, abs=1e-6)


def test_normalize_single_game_city(tmp_path):
    table = table_from(tmp_path, ["region,total,Go", "A,50,50"])
    matrix = normalize(table, ["Go"])
    assert matrix.values[0, 0] == 1.0


def test_normalize_drops_zero_total_with_warning(tmp_path):
    table = table_from(tmp_path, [HEADER, "Ghost,0,0,0", "A,100,10,20"])
    matrix = normalize(table, ["ShanghaiMahjong"])
    assert matrix.region_ids == ("A",)
    assert [(n.region_id, n.reason) for n in matrix.dropped] == [("Ghost", "zero total")]


def test_normalize_unknown_game(tmp_path):
    table = table_from(tmp_path, [HEADER, "A,100,10,20"])
    with pytest.raises(InputError, match="unknown selected game.*'Poker'"):
        normalize(table, ["Poker"])


def test_normalize_column_order_follows_selection(tmp_path):
    table = table_from(tmp_path, [HEADER, "A,100,10,20"])
    matrix = normalize(table, ["SichuanMahjong", "ShanghaiMahjong"])
    assert matrix.feature_names == ("SichuanMahjong", "ShanghaiMahjong")
    assert matrix.values[0, 0] == pytest.approx(0.2)
    assert matrix.values[0, 1] == pytest.approx(0.1)


def test_normalize_is_scale_free():
    rng = np.random.default_rng(11)
    for trial in range(20):
        counts = rng.integers(0, 500, size=(5, 4))
        totals = counts.sum(axis=1) + rng.integers(1, 100, size=5)
        scale = int(rng.integers(2, 50))
        base = CountTable(
            regions=tuple(RegionRecord(f"r{i}") for i in range(5)),
            games=("a", "b", "c", "d"),
            totals=totals.astype(np.int64),
            counts=counts.astype(np.int64),
        )
        scaled = CountTable(
            regions=base.regions,
            games=base.games,
            totals=(totals * scale).astype(np.int64),
            counts=(counts * scale).astype(np.int64),
        )
        a = normalize(base, ["a", "b", "c", "d"]).values
        b = normalize(scaled, ["a", "b", "c", "d"]).values
        np.testing.assert_allclose(a, b, rtol=1e-15)


def test_normalize_recovers_integer_counts():
    rng = np.random.default_rng(12)
    counts = rng.integers(0, 10_000, size=(8, 6))
    totals = counts.sum(axis=1) + rng.integers(0, 2_000_000, size=8)
    totals[totals == 0] = 1
    table = CountTable(
        regions=tuple(RegionRecord(f"r{i}") for i in range(8)),
        games=tuple("abcdef"),
        totals=totals.astype(np.int64),
        counts=counts.astype(np.int64),
    )
    matrix = normalize(table, list("abcdef"))
    recovered = matrix.values * totals[:, None]
    assert np.all(np.abs(recovered - counts) < 0.5)
    assert matrix.values.min() >= 0.0 and matrix.values.max() <= 1.0


def test_normalize_rejects_selected_counts_over_total(tmp_path):
    # per-game counts each fit under the total, but their sum does not
    table = table_from(tmp_path, [HEADER, "A,100,60,60"])
    with pytest.raises(InputError, match="exceed the region total"):
        normalize(table, ["ShanghaiMahjong", "SichuanMahjong"])


def _matrix(n, prefix="r"):
    values = np.linspace(0.0, 0.5, n)[:, None]
    return FeatureMatrix(
        region_ids=tuple(f"{prefix}{i:03d}" for i in range(n)),
        feature_names=("g",),
        values=values,
    )


def test_filter_regions_study_set_size():
    matrix = _matrix(376)
    exclude = [f"r{i:03d}" for i in range(40)]
    out = filter_regions(matrix, exclude)
    assert out.n_regions == 336
    assert all(n.reason == "excluded" for n in out.excluded)


def test_filter_regions_empty_list_is_identity():
    matrix = _matrix(5)
    out = filter_regions(matrix, [])
    assert out == matrix


def test_filter_regions_unknown_id_is_a_warning():
    matrix = _matrix(4)
    out = filter_regions(matrix, ["zzz"])
    assert out.n_regions == 4
    assert ("zzz", "not found") in [(n.region_id, n.reason) for n in out.excluded]


def test_filter_regions_preserves_order():
    matrix = _matrix(6)
    out = filter_regions(matrix, ["r002", "r004"])
    assert out.region_ids == ("r000", "r001", "r003", "r005")


def test_filter_regions_all_excluded_errors():
    matrix = _matrix(3)
    with pytest.raises(InputError, match="empty matrix"):
        filter_regions(matrix, ["r000", "r001", "r002"])


def test_filter_regions_idempotent():
    matrix = _matrix(8)
    exclude = ["r001", "r006"]
    once = filter_regions(matrix, exclude)
    twice = filter_regions(once, exclude)
    assert once == twice


def test_read_name_list(tmp_path):
    path = tmp_path / "games.txt"
    path.write_text("# regional picks\nGo\n\nChess  # classic\n", encoding="utf-8")
    assert read_name_list(path) == ["Go", "Chess"]


def test_feature_matrix_rejects_out_of_range_values():
    with pytest.raises(InputError, match=r"\[0, 1\]"):
        FeatureMatrix(
            region_ids=("a",), feature_names=("g",), values=np.array([[1.5]])
        )
