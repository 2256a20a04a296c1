import pytest
from pydantic import ValidationError

from services.errors import ScoreRangeError
from services.model import ImpactLevel, Intolerance, IntoleranceLevel, LikelihoodLevel, MatrixCell, ScoringSystem
from services.scoring import check_ranks, classify, generate_cells, risk_index, with_generated_cells

# rows are SI 1..4, columns FI 1..7
RISK_INDEX_GRID = [
    [2, 3, 4, 5, 6, 7, 8],
    [3, 4, 5, 6, 7, 8, 9],
    [4, 5, 6, 7, 8, 9, 10],
    [5, 6, 7, 8, 9, 10, 11],
]
DEFAULT_LETTERS = [
    "LLLMMMH",
    "LLMMMHH",
    "LMMMHHH",
    "MMMHHHH",
]


@pytest.mark.parametrize("fi,si,expected", [(5, 4, 9), (1, 1, 2), (4, 3, 7), (7, 4, 11)])
def test_risk_index(fi, si, expected):
    assert risk_index(fi, si) == expected


@pytest.mark.parametrize(
    "fi,si,expected",
    [(5, 4, IntoleranceLevel.HIGH), (4, 3, IntoleranceLevel.MEDIUM), (1, 1, IntoleranceLevel.LOW)],
)
def test_classify_examples(default_scoring, fi, si, expected):
    assert classify(default_scoring, fi, si) is expected


def test_default_grid_letters(default_scoring):
    for si, row in enumerate(DEFAULT_LETTERS, start=1):
        letters = "".join(classify(default_scoring, fi, si).letter for fi in range(1, 8))
        assert letters == row, f"SI {si}"


def test_risk_index_grid():
    for si, row in enumerate(RISK_INDEX_GRID, start=1):
        assert [risk_index(fi, si) for fi in range(1, 8)] == row, f"SI {si}"


def test_risk_index_strictly_monotone():
    cells = [(fi, si) for fi in range(1, 8) for si in range(1, 5)]
    for fi1, si1 in cells:
        for fi2, si2 in cells:
            if (fi1, si1) != (fi2, si2) and fi1 <= fi2 and si1 <= si2:
                assert risk_index(fi1, si1) < risk_index(fi2, si2), ((fi1, si1), (fi2, si2))


@pytest.mark.parametrize("low_max,high_min", [(4, 8), (2, 5), (6, 7), (1, 11)])
def test_classification_follows_risk_index(default_scoring, low_max, high_min):
    scoring = default_scoring.model_copy(update={"intolerance": Intolerance(low_max=low_max, high_min=high_min)})
    cells = generate_cells(scoring)
    for c1, level1 in cells.items():
        for c2, level2 in cells.items():
            if risk_index(*c1) <= risk_index(*c2):
                assert level1.order <= level2.order, (c1, c2)


def test_classification_monotone_in_both_scales(default_scoring):
    for fi in default_scoring.likelihood_ranks:
        for si in default_scoring.impact_ranks:
            level = classify(default_scoring, fi, si).order
            if fi < 7:
                assert classify(default_scoring, fi + 1, si).order >= level
            if si < 4:
                assert classify(default_scoring, fi, si + 1).order >= level


def test_generate_cells_covers_grid(default_scoring):
    cells = generate_cells(default_scoring)
    assert len(cells) == 28
    assert cells[(7, 1)] is IntoleranceLevel.HIGH
    assert cells[(1, 4)] is IntoleranceLevel.MEDIUM
    assert list(cells)[:2] == [(1, 1), (1, 2)]


def test_generated_cells_agree_with_thresholds(default_scoring):
    explicit = with_generated_cells(default_scoring)
    assert explicit.cells is not None and len(explicit.cells) == 28
    for fi in default_scoring.likelihood_ranks:
        for si in default_scoring.impact_ranks:
            assert classify(explicit, fi, si) is classify(default_scoring, fi, si)


def test_explicit_cells_override_thresholds(default_scoring):
    cells = tuple(
        MatrixCell(likelihood=fi, impact=si, level=IntoleranceLevel.HIGH)
        for fi in range(1, 8)
        for si in range(1, 5)
    )
    scoring = default_scoring.model_copy(update={"intolerance": Intolerance(cells=cells)})
    assert classify(scoring, 1, 1) is IntoleranceLevel.HIGH


def test_thresholds_shift_classification(default_scoring):
    strict = default_scoring.model_copy(update={"intolerance": Intolerance(low_max=2, high_min=5)})
    assert classify(strict, 1, 1) is IntoleranceLevel.LOW
    assert classify(strict, 2, 1) is IntoleranceLevel.MEDIUM
    assert classify(strict, 1, 4) is IntoleranceLevel.HIGH


@pytest.mark.parametrize("fi,si,scale,rank", [(8, 1, "likelihood", 8), (0, 1, "likelihood", 0), (1, 5, "impact", 5)])
def test_out_of_range_ranks(default_scoring, fi, si, scale, rank):
    with pytest.raises(ScoreRangeError) as excinfo:
        classify(default_scoring, fi, si)
    assert excinfo.value.scale == scale
    assert excinfo.value.rank == rank


def test_range_error_names_allocation(default_scoring):
    with pytest.raises(ScoreRangeError, match="allocation 's7': impact rank 9 outside 1..4"):
        check_ranks(default_scoring, 1, 9, "s7")


def test_single_level_scales():
    scoring = ScoringSystem(
        likelihood=(LikelihoodLevel(rank=1, name="Only"),),
        impact=(ImpactLevel(rank=1, name="Only"),),
    )
    assert classify(scoring, 1, 1) is IntoleranceLevel.LOW


def test_thresholds_must_be_ordered():
    with pytest.raises(ValidationError):
        Intolerance(low_max=8, high_min=8)


def test_scale_ranks_must_be_contiguous():
    with pytest.raises(ValidationError):
        ScoringSystem(
            likelihood=(LikelihoodLevel(rank=1, name="a"), LikelihoodLevel(rank=3, name="b")),
            impact=(ImpactLevel(rank=1, name="x"),),
        )


def test_partial_cell_map_rejected(default_scoring):
    cells = (MatrixCell(likelihood=1, impact=1, level=IntoleranceLevel.LOW),)
    with pytest.raises(ValidationError):
        ScoringSystem(
            likelihood=default_scoring.likelihood,
            impact=default_scoring.impact,
            intolerance=Intolerance(cells=cells),
        )
