"""
Streamlit explorer for teleportation-based squeezing gates.

Pick a variant, resource level and losses in the sidebar; the page shows the
fidelity-optimal parameters at one target squeeze, the added-noise matrix and
the state metrics. A sweep along the squeeze axis renders as a table and can
be downloaded as CSV.

Run: streamlit run streamlit_app.py
"""

import streamlit as st

import config
import sweep as sw
from noise_model import (
    InfeasibleParametersError,
    DegenerateCircuitError,
    SingularGainError,
    Variant,
    decibels,
    entanglement_breaking,
    noise_eigenvalues,
    noise_matrix,
    noise_product,
    scale_from_decibels,
    squeezing_parameter,
    total_noise,
)
from optimize import optimize_fidelity
from phase_space import PhotonState, QuadratureAccuracyError, TransformedState, fidelity, wigner_origin

STATE_LABELS = {"Single photon": PhotonState.SINGLE_PHOTON, "Vacuum": PhotonState.VACUUM}


def init_state() -> None:
    stt = st.session_state
    stt.setdefault("sweep_rows", None)
    stt.setdefault("sweep_columns", None)


def sidebar_inputs() -> dict:
    """Sidebar widgets; returns the current selection."""
    with st.sidebar:
        st.header("Gate")
        variant = Variant(st.selectbox("Variant", [v.value for v in Variant], index=1))
        state = STATE_LABELS[st.radio("Input state", list(STATE_LABELS))]
        s_db = st.slider("Target squeeze (dB)", float(config.S_DB_MIN), -0.25, -5.0, step=float(config.S_DB_STEP))

        st.header("Resources")
        resource_db = st.selectbox("Resource squeezing (dB)", config.RESOURCE_LEVELS_DB,
                                   index=config.RESOURCE_LEVELS_DB.index(config.DEFAULT_RESOURCE_DB))
        realistic = st.toggle("Realistic losses", value=False)
        eta_s = st.number_input("Source transmissivity", 0.01, 1.0,
                                config.REALISTIC_ETA_S if realistic else config.DEFAULT_ETA_S, 0.01,
                                disabled=not realistic)
        eta_h = st.number_input("Homodyne efficiency", 0.01, 1.0,
                                config.REALISTIC_ETA_H if realistic else config.DEFAULT_ETA_H, 0.01,
                                disabled=not realistic)
    return {
        "variant": variant,
        "state": state,
        "s_db": float(s_db),
        "resource_db": float(resource_db),
        "eta_s": float(eta_s),
        "eta_h": float(eta_h),
    }


def render_point(sel: dict) -> None:
    s = scale_from_decibels(sel["s_db"])
    fields = {k: sel[k] for k in ("resource_db", "eta_s", "eta_h")}
    try:
        result = optimize_fidelity(s, sel["variant"], sel["state"], **fields)
        model = noise_matrix(result.config)
        ts = TransformedState(sel["state"], s, model.sigma)
        f, w00 = fidelity(ts), wigner_origin(ts)
    except (InfeasibleParametersError, DegenerateCircuitError, SingularGainError, QuadratureAccuracyError) as e:
        st.error(f"{type(e).__name__}: {e}")
        return

    c1, c2, c3, c4 = st.columns(4)
    c1.metric("Fidelity", f"{f:.4f}")
    c2.metric("W(0,0)", f"{w00:.4f}")
    c3.metric("Total noise N_T", f"{total_noise(model):.4f}")
    c4.metric("Noise product N_P", f"{noise_product(model):.4f}",
              delta="breaking" if entanglement_breaking(model) else "preserving",
              delta_color="inverse" if entanglement_breaking(model) else "normal")

    left, right = st.columns(2)
    with left:
        st.subheader("Parameters")
        cfg = result.config
        st.table({
            "parameter": ["t1^2", "t2^2", "phi", "t0^2", "realized squeeze (dB)", "evaluations"],
            "value": [f"{cfg.t1 ** 2:.6f}", f"{cfg.t2 ** 2:.6f}", f"{cfg.phi:.6f}", f"{cfg.t0 ** 2:.6f}",
                      f"{decibels(squeezing_parameter(cfg)):.6f}", str(result.evaluations)],
        })
    with right:
        st.subheader("Added noise")
        st.table({"": ["x", "p"], "x": [f"{v:.6f}" for v in model.sigma[:, 0]],
                  "p": [f"{v:.6f}" for v in model.sigma[:, 1]]})
        lo, hi = noise_eigenvalues(model)
        st.caption(f"Eigenvalues {lo:.6f}, {hi:.6f}; covariance {model.covariance:.3e}")

    with st.expander("Optimizer metadata"):
        st.json(sw.to_json(result.to_dict()))


def render_sweep(sel: dict) -> None:
    st.subheader("Sweep")
    col_a, col_b = st.columns(2)
    with col_a:
        variants = st.multiselect("Variants", [v.value for v in Variant], default=["PS", "BS"])
    with col_b:
        step = st.number_input("Step (dB)", 0.05, 2.0, 0.5, 0.05)

    if st.button("Run sweep", type="primary", disabled=not variants):
        spec = sw.SweepSpec(
            variants=tuple(variants),
            input_state=sel["state"],
            resource_db=(sel["resource_db"],),
            eta_s=sel["eta_s"],
            eta_h=sel["eta_h"],
            s_db_step=float(step),
        )
        with st.spinner(f"Evaluating {len(spec.s_axis) * len(variants)} points..."):
            st.session_state["sweep_rows"] = sw.run_sweep(spec, threads=1)
            st.session_state["sweep_columns"] = spec.columns

    rows = st.session_state["sweep_rows"]
    if rows:
        columns = st.session_state["sweep_columns"]
        st.dataframe(
            [{c: sw.format_value(r.get(c)) for c in columns} for r in rows],
            use_container_width=True,
        )
        st.download_button("Download CSV", sw.rows_to_csv(rows, columns),
                           file_name="sweep.csv", mime="text/csv")


def main():
    st.set_page_config(page_title="Squeezing Gate Explorer", page_icon="🔬", layout="wide")
    init_state()
    st.title("Squeezing Gate Explorer")
    sel = sidebar_inputs()
    render_point(sel)
    st.divider()
    render_sweep(sel)


if __name__ == "__main__":
    main()
