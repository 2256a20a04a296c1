# Tabular views of an assessment, shaped like the scenario ratings tables of a risk report
import pandas as pd

from services.model import Component, Model, ScoringSystem, Threat
from services.scoring import classify, risk_index
from utils.ordering import natural_key

SCENARIO_COLUMNS = [
    "ID", "Scenario", "System", "FI", "SI", "RI", "Reported RI", "Intolerance", "Status", "Mitigated by",
]


def _name(model: Model, element_id: str, kind: type) -> str:
    return model.get(element_id, kind).name if model.has(element_id, kind) else element_id


def scenario_table(model: Model) -> pd.DataFrame:
    """One row per threat allocation, ordered by id; RI and intolerance are computed."""
    rows = []
    for allocation in sorted(model.threat_allocations, key=lambda a: natural_key(a.id)):
        rows.append({
            "ID": allocation.id,
            "Scenario": _name(model, allocation.threat, Threat),
            "System": _name(model, allocation.component, Component),
            "FI": allocation.fi,
            "SI": allocation.si,
            "RI": risk_index(allocation.fi, allocation.si),
            "Reported RI": pd.NA if allocation.reported_ri is None else allocation.reported_ri,
            "Intolerance": classify(model.scoring, allocation.fi, allocation.si).value,
            "Status": allocation.status.value,
            "Mitigated by": ", ".join(allocation.mitigated_by),
        })
    frame = pd.DataFrame(rows, columns=SCENARIO_COLUMNS)
    return frame.astype({"FI": "Int64", "SI": "Int64", "RI": "Int64", "Reported RI": "Int64"})


def render_scenarios(model: Model, format: str = "text") -> str:
    frame = scenario_table(model)
    if format == "csv":
        return frame.to_csv(index=False, lineterminator="\n")
    if format != "text":
        raise ValueError(f"unknown table format '{format}'")
    if frame.empty:
        return ""
    return frame.astype(str).replace("<NA>", "").to_string(index=False) + "\n"


def level_counts(model: Model) -> pd.Series:
    """Number of scenarios per intolerance level, Low to High."""
    counts = scenario_table(model)["Intolerance"].value_counts()
    return counts.reindex(["Low", "Medium", "High"], fill_value=0)


def scoring_summary(scoring: ScoringSystem) -> str:
    if scoring.cells is not None:
        thresholds = "explicit cell map"
    else:
        thresholds = f"Low up to RI {scoring.low_max}, High from RI {scoring.high_min}"
    return (
        f"{len(scoring.likelihood)} likelihood (FI) × {len(scoring.impact)} impact (SI) levels, "
        f"RI = FI + SI; {thresholds}"
    )
