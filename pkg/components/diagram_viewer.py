import streamlit as st

from services.model import Model
from services.render import RenderOptions, emit_dot


def show_diagram(model: Model, options: RenderOptions, file_name: str = "model.dot"):
    dot = emit_dot(model, options)
    st.graphviz_chart(dot, use_container_width=True)
    st.download_button("⬇️ Download DOT", dot, file_name=file_name, mime="text/vnd.graphviz")
