# streamlit_app.py - Security risk assessment dashboard
from pathlib import Path

import pandas as pd
import streamlit as st

from components.alert_system import show_problems
from components.data_charts import show_level_chart, show_ri_comparison, show_risk_matrix
from components.diagram_viewer import show_diagram
from services.data_processor import level_counts, scenario_table, scoring_summary
from services.errors import AssessmentError, ModelLoadError
from services.model import Model
from services.model_io import parse_model
from services.render import RenderOptions, render_matrix
from services.riskview import build_matrix, diff, high_risk
from services.validation import Severity, validate

DATA_DIR = Path(__file__).parent / "data"
BUNDLED = {
    "🚢 Case study: baseline": DATA_DIR / "baseline.json",
    "🛡️ Case study: enhanced": DATA_DIR / "enhanced.json",
}
UPLOAD = "📤 Upload a model"

# Configure page
st.set_page_config(
    page_title="🛡️ Risk Modeler",
    page_icon="🛡️",
    layout="wide",
    initial_sidebar_state="expanded"
)

st.markdown("""
<style>
    .main-header {
        background: linear-gradient(90deg, #0b3d91, #2e86de);
        padding: 1rem;
        border-radius: 10px;
        text-align: center;
        color: #ffffff;
        font-weight: bold;
        margin-bottom: 2rem;
    }
    .metric-card {
        background: #f0f8ff;
        padding: 1rem;
        border-radius: 10px;
        border-left: 5px solid #2e86de;
        margin: 1rem 0;
    }
</style>
""", unsafe_allow_html=True)


# Helper functions
@st.cache_data
def load_document(path: str) -> str:
    """Read a bundled model document"""
    return Path(path).read_text(encoding="utf-8")


def parse_or_report(text, label):
    """Parse a model document, listing every parse error on failure"""
    try:
        return parse_model(text)
    except ModelLoadError as e:
        st.error(f"❌ {label} could not be loaded ({len(e.errors)} problem(s))")
        for error in e.errors:
            st.code(str(error), language=None)
        return None


def select_model(label, key, default_index=0):
    """Sidebar model picker: a bundled case study or an uploaded JSON document"""
    choices = list(BUNDLED) + [UPLOAD]
    source = st.sidebar.selectbox(label, choices, index=default_index, key=key)
    if source == UPLOAD:
        uploaded = st.sidebar.file_uploader("Model document (JSON)", type=["json"], key=f"{key}-upload")
        if uploaded is None:
            st.info("Upload a model document to continue")
            return None
        return parse_or_report(uploaded.getvalue(), uploaded.name)
    return parse_or_report(load_document(str(BUNDLED[source])), source)


def display_overview(model: Model):
    st.markdown(
        f'<div class="main-header"><h1>🛡️ {model.name or "Unnamed model"}</h1>'
        f'<p>Model-based security risk assessment</p></div>',
        unsafe_allow_html=True,
    )
    problems = validate(model)

    col1, col2, col3, col4, col5 = st.columns(5)
    with col1:
        st.metric("🧩 Components", sum(1 for _ in model.iter_components()))
    with col2:
        st.metric("🔗 Links", len(model.links))
    with col3:
        st.metric("🎯 Scenarios", len(model.threat_allocations))
    with col4:
        st.metric("🔴 High risk", len(high_risk(model)))
    with col5:
        st.metric("⚠️ Errors", sum(1 for p in problems if p.severity is Severity.ERROR))

    st.markdown(
        f'<div class="metric-card"><b>Scoring</b>: {scoring_summary(model.scoring)}</div>',
        unsafe_allow_html=True,
    )

    col1, col2 = st.columns([2, 1])
    with col1:
        show_risk_matrix(build_matrix(model))
    with col2:
        show_level_chart(level_counts(model))
        flagged = high_risk(model)
        if flagged:
            st.markdown("### 🔴 High-risk scenarios")
            for allocation_id in flagged:
                st.markdown(f"- `{allocation_id}`")


def display_diagram_page(model: Model):
    st.header("🗺️ Design diagram")
    component_ids = [c.id for c in model.iter_components()]

    col1, col2, col3 = st.columns(3)
    with col1:
        hide = st.multiselect("Hide components", component_ids)
    with col2:
        show_threats = st.checkbox("Show threats", value=True)
    with col3:
        show_controls = st.checkbox("Show controls", value=True)

    try:
        show_diagram(model, RenderOptions(hide=tuple(hide), show_threats=show_threats, show_controls=show_controls))
    except AssessmentError as e:
        st.error(f"Error rendering diagram: {e}")

    with st.expander("Components"):
        st.dataframe(pd.DataFrame(
            [
                {
                    "ID": c.id,
                    "Name": c.name,
                    "Parent": model.parent_of(c.id) or "",
                    "External": c.external,
                }
                for c in model.iter_components()
            ],
            columns=["ID", "Name", "Parent", "External"],
        ), use_container_width=True)


def display_matrix_page(model: Model):
    st.header("🎯 Risk matrix")
    try:
        matrix = build_matrix(model)
    except AssessmentError as e:
        st.error(f"Error building risk matrix: {e}")
        return
    show_risk_matrix(matrix)

    tab1, tab2 = st.tabs(["📝 Text", "📄 CSV"])
    with tab1:
        st.code(render_matrix(matrix, "text"), language=None)
    with tab2:
        csv = render_matrix(matrix, "csv")
        st.code(csv, language=None)
        st.download_button("⬇️ Download CSV", csv, file_name="risk-matrix.csv", mime="text/csv")


def display_scenarios_page(model: Model):
    st.header("📋 Risk scenarios")
    table = scenario_table(model)
    if table.empty:
        st.info("No threat allocations in this model")
        return

    col1, col2 = st.columns(2)
    with col1:
        levels = st.multiselect("Intolerance", ["High", "Medium", "Low"], default=["High", "Medium", "Low"])
    with col2:
        statuses = st.multiselect("Status", ["open", "accepted"], default=["open", "accepted"])
    filtered = table[table["Intolerance"].isin(levels) & table["Status"].isin(statuses)]
    st.dataframe(filtered, use_container_width=True, hide_index=True)


def display_problems_page(model: Model):
    st.header("🚨 Consistency findings")
    problems = validate(model)

    col1, col2, col3 = st.columns(3)
    with col1:
        st.metric("🔴 Errors", sum(1 for p in problems if p.severity is Severity.ERROR))
    with col2:
        st.metric("🟡 Warnings", sum(1 for p in problems if p.severity is Severity.WARNING))
    with col3:
        st.metric("🔵 Info", sum(1 for p in problems if p.severity is Severity.INFO))

    severities = st.multiselect("Severity", [s.value for s in Severity], default=[s.value for s in Severity])
    show_problems([p for p in problems if p.severity.value in severities])


def display_diff_page(model: Model):
    st.header("⚖️ Baseline vs. enhanced")
    baseline = select_model("Baseline model", key="baseline", default_index=0)
    if baseline is None:
        return
    try:
        report = diff(baseline, model)
    except AssessmentError as e:
        st.error(f"Cannot compare: {e}")
        return

    col1, col2, col3 = st.columns(3)
    with col1:
        st.metric("🔁 Matched", len(report.matched))
    with col2:
        st.metric("➕ Added", len(report.added))
    with col3:
        st.metric("➖ Removed", len(report.removed))

    if report.matched:
        show_ri_comparison(report)
        st.dataframe(pd.DataFrame([d.model_dump() for d in report.matched]), use_container_width=True, hide_index=True)
    if report.added:
        st.markdown("**Added:** " + ", ".join(f"`{a}`" for a in report.added))
    if report.removed:
        st.markdown("**Removed:** " + ", ".join(f"`{a}`" for a in report.removed))
    st.subheader("Findings")
    show_problems(list(report.findings))


def display_about_page():
    st.header("ℹ️ About Risk Modeler")
    st.markdown("""
    ## 🎯 Purpose
    Risk Modeler keeps the system design and its security risk assessment in one model:
    components and links, data flows, threats and their scored scenarios, and the controls
    that mitigate them. Every view on this dashboard is derived from that model.

    ## 📐 Scoring
    - **FI** (likelihood rank) and **SI** (impact rank) are ordinal scales starting at 1
    - **RI = FI + SI**
    - Low when RI is at most the low threshold, High when RI reaches the high threshold, Medium otherwise
    - An explicit cell map in the scoring system overrides the thresholds

    ## 🔧 Command line
    The same engine runs in CI through `cli.py`: `validate`, `matrix`, `diagram`, `diff`,
    `scenarios`, `paths` and `fixture`.
    """)


def main():
    st.sidebar.title("🛡️ Navigation")
    page = st.sidebar.selectbox(
        "Select Page",
        ["🏠 Overview", "🗺️ Design Diagram", "🎯 Risk Matrix", "📋 Scenarios", "🚨 Problems", "⚖️ Diff", "ℹ️ About"]
    )
    if page == "ℹ️ About":
        display_about_page()
        return

    model = select_model("Model", key="model", default_index=1 if page == "⚖️ Diff" else 0)
    if model is None:
        return

    if page == "🏠 Overview":
        display_overview(model)
    elif page == "🗺️ Design Diagram":
        display_diagram_page(model)
    elif page == "🎯 Risk Matrix":
        display_matrix_page(model)
    elif page == "📋 Scenarios":
        display_scenarios_page(model)
    elif page == "🚨 Problems":
        display_problems_page(model)
    elif page == "⚖️ Diff":
        display_diff_page(model)

    st.sidebar.markdown("---")
    st.sidebar.markdown("### 📍 Quick Stats")
    st.sidebar.info(
        f"🎯 Scenarios: {len(model.threat_allocations)}\n"
        f"🛡️ Controls: {len(model.controls)}\n"
        f"☠️ Threats: {len(model.threats)}"
    )


if __name__ == "__main__":
    main()
