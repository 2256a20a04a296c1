import pandas as pd
import plotly.express as px
import plotly.graph_objects as go
import streamlit as st

from services.model import INTOLERANCE_COLORS, IntoleranceLevel
from services.riskview import DiffReport, PopulatedMatrix

# z values are IntoleranceLevel.order, so the scale is pinned to 0..2
_LEVEL_SCALE = [
    (0.0, INTOLERANCE_COLORS[IntoleranceLevel.LOW]),
    (0.5, INTOLERANCE_COLORS[IntoleranceLevel.MEDIUM]),
    (1.0, INTOLERANCE_COLORS[IntoleranceLevel.HIGH]),
]


def risk_matrix_figure(matrix: PopulatedMatrix, title: str = "Risk matrix (SI × FI)") -> go.Figure:
    """Heatmap of the populated matrix: cell colour is the intolerance, cell text the allocation ids."""
    scoring = matrix.scoring
    z, text = [], []
    for si in scoring.impact_ranks:
        entries = [matrix.entry(fi, si) for fi in scoring.likelihood_ranks]
        z.append([entry.intolerance.order for entry in entries])
        text.append([", ".join(entry.allocations) for entry in entries])
    fig = go.Figure(go.Heatmap(
        z=z,
        x=[f"{level.rank}. {level.name}" for level in scoring.likelihood],
        y=[f"{level.rank}. {level.name}" for level in scoring.impact],
        text=text,
        texttemplate="%{text}",
        colorscale=_LEVEL_SCALE,
        zmin=0,
        zmax=2,
        showscale=False,
        xgap=2,
        ygap=2,
    ))
    fig.update_layout(title=title, xaxis_title="Likelihood (FI)", yaxis_title="Impact (SI)", height=450)
    return fig


def show_risk_matrix(matrix: PopulatedMatrix, title: str = "Risk matrix (SI × FI)"):
    st.plotly_chart(risk_matrix_figure(matrix, title), use_container_width=True)


def show_level_chart(counts: pd.Series, title: str = "Scenarios per intolerance level"):
    df = counts.rename_axis("Intolerance").reset_index(name="Scenarios")
    fig = px.bar(
        df, x="Intolerance", y="Scenarios", title=title,
        color="Intolerance",
        color_discrete_map={level.value: level.color for level in IntoleranceLevel},
    )
    st.plotly_chart(fig, use_container_width=True)


def show_ri_comparison(report: DiffReport, title: str = "RI before and after enhancement"):
    df = pd.DataFrame(
        [(d.allocation, "Baseline", d.ri_before) for d in report.matched]
        + [(d.allocation, "Enhanced", d.ri_after) for d in report.matched],
        columns=["Scenario", "Design", "RI"],
    )
    fig = px.bar(df, x="Scenario", y="RI", color="Design", barmode="group", title=title)
    st.plotly_chart(fig, use_container_width=True)
