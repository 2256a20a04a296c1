import streamlit as st

from services.validation import Problem, Severity

SEVERITY_CARD_COLORS = {Severity.ERROR: "#ffd6d6", Severity.WARNING: "#fff3c4", Severity.INFO: "#dcecff"}


def show_problem(problem: Problem):
    color = SEVERITY_CARD_COLORS.get(problem.severity, "#f0f0f0")
    elements = ", ".join(problem.elements)
    st.markdown(
        f"<div style='background:{color};padding:1rem;border-radius:10px;margin:0.5rem 0'>"
        f"<h4>{problem.severity.value} · {problem.rule}</h4><p><code>{elements}</code></p><p>{problem.message}</p></div>",
        unsafe_allow_html=True,
    )


def show_problems(problems: list[Problem]):
    if not problems:
        st.success("✅ No findings: the model is consistent")
        return
    for problem in problems:
        show_problem(problem)
