import pytest

from services.errors import ScaleMismatchError, ScoreRangeError
from services.model import ImpactLevel, IntoleranceLevel, LikelihoodLevel, Model, ScoringSystem, ThreatAllocation
from services.riskview import build_matrix, diff, high_risk


def test_baseline_matrix(baseline):
    matrix = build_matrix(baseline)
    assert len(matrix.cells) == 28
    assert matrix.allocation_count == 4
    assert matrix.entry(5, 4).allocations == ("s1", "s2", "s10")
    assert matrix.entry(5, 4).intolerance is IntoleranceLevel.HIGH
    assert matrix.entry(4, 3).allocations == ("s7",)
    assert matrix.entry(4, 3).intolerance is IntoleranceLevel.MEDIUM


def test_enhanced_matrix(enhanced):
    matrix = build_matrix(enhanced)
    assert matrix.entry(2, 4).allocations == ("s1", "s2")
    assert matrix.entry(1, 4).allocations == ("s7", "s10")
    assert matrix.entry(2, 4).intolerance is IntoleranceLevel.MEDIUM
    assert matrix.entry(1, 4).intolerance is IntoleranceLevel.MEDIUM
    assert matrix.entry(1, 3).allocations == ("malware-asc",)
    assert matrix.entry(5, 4).allocations == ()


def test_empty_matrix(empty_model):
    matrix = build_matrix(empty_model)
    assert matrix.allocation_count == 0
    assert all(entry.allocations == () for entry in matrix.cells.values())


def test_every_allocation_lands_in_exactly_one_cell(enhanced):
    placed = [a for entry in build_matrix(enhanced).cells.values() for a in entry.allocations]
    assert sorted(placed) == sorted(a.id for a in enhanced.threat_allocations)


def test_matrix_rejects_out_of_range(baseline):
    bad = ThreatAllocation(id="s99", threat="physical-attack", component="generators", fi=8, si=1)
    with pytest.raises(ScoreRangeError, match="s99"):
        build_matrix(baseline.model_copy(update={"threat_allocations": baseline.threat_allocations + (bad,)}))


def test_high_risk(baseline, enhanced, empty_model):
    # s7 was reported as RI 8 but computes to 7
    assert high_risk(baseline) == ["s1", "s2", "s10"]
    assert high_risk(enhanced) == []
    assert high_risk(empty_model) == []


def test_high_risk_orders_by_ri_first(baseline):
    worst = ThreatAllocation(id="s20", threat="physical-attack", component="generators", fi=7, si=4)
    model = baseline.model_copy(update={"threat_allocations": baseline.threat_allocations + (worst,)})
    assert high_risk(model) == ["s20", "s1", "s2", "s10"]


def test_baseline_to_enhanced(baseline, enhanced):
    report = diff(baseline, enhanced)
    assert [d.allocation for d in report.matched] == ["s1", "s2", "s7", "s10"]
    s1 = report.matched[0]
    assert (s1.fi_before, s1.fi_after, s1.si_before, s1.si_after, s1.ri_before, s1.ri_after) == (5, 2, 4, 4, 9, 6)
    assert report.added == ("malware-asc",)
    assert report.removed == ()
    assert [(f.rule, f.elements) for f in report.findings] == [("D-SI-CHANGED", ("s7",))]
    assert "from 3 to 4" in report.findings[0].message


def test_diff_with_itself(baseline):
    report = diff(baseline, baseline)
    assert len(report.matched) == 4
    assert report.added == ()
    assert report.removed == ()
    assert report.findings == ()


def test_diff_reversed(baseline, enhanced):
    forward = diff(baseline, enhanced)
    backward = diff(enhanced, baseline)
    assert backward.added == forward.removed
    assert backward.removed == forward.added
    for there, back in zip(forward.matched, backward.matched):
        assert (back.fi_before, back.fi_after) == (there.fi_after, there.fi_before)
        assert (back.ri_before, back.ri_after) == (there.ri_after, there.ri_before)
    rules = [(f.rule, f.elements[0]) for f in backward.findings]
    assert rules == [
        ("D-FI-INCREASED", "s1"),
        ("D-FI-INCREASED", "s2"),
        ("D-FI-INCREASED", "s7"),
        ("D-FI-INCREASED", "s10"),
        ("D-SI-CHANGED", "s7"),
        ("D-STILL-HIGH", "s1"),
        ("D-STILL-HIGH", "s2"),
        ("D-STILL-HIGH", "s10"),
    ]


def test_new_high_scenario_is_flagged(baseline, enhanced):
    added = ThreatAllocation(id="s11", threat="physical-attack", component="generators", fi=6, si=4)
    model = enhanced.model_copy(update={"threat_allocations": enhanced.threat_allocations + (added,)})
    findings = diff(baseline, model).findings
    assert ("D-STILL-HIGH", ("s11",)) in [(f.rule, f.elements) for f in findings]


def test_diff_requires_same_scales(baseline, default_scoring):
    smaller = ScoringSystem(
        likelihood=tuple(LikelihoodLevel(rank=i, name=f"L{i}") for i in range(1, 6)),
        impact=default_scoring.impact,
    )
    with pytest.raises(ScaleMismatchError):
        diff(baseline, Model(scoring=smaller))


def test_diff_ignores_level_names(baseline, default_scoring):
    renamed = ScoringSystem(
        likelihood=default_scoring.likelihood,
        impact=tuple(ImpactLevel(rank=i, name=f"Impact {i}") for i in range(1, 5)),
    )
    report = diff(baseline, Model(scoring=renamed))
    assert report.removed == ("s1", "s2", "s7", "s10")
