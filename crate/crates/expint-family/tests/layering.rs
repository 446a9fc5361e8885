//! Source-level guard: the quadrature oracle must stay independent of the
//! closed forms it is used to verify. It may evaluate the integrand kernel
//! (`special::expint`, `special::gamma_upper`) and consult the domain gate,
//! but never the closed-form evaluators in `family` or `dynfric`.

const ORACLE_SRC: &str = include_str!("../src/oracle.rs");

#[test]
fn oracle_does_not_use_closed_forms() {
    for forbidden in [
        "closed_form",
        "reduced_form",
        "reduce_by_parts",
        "ladder_identity",
        "small_z_leading",
        "transform_scaling",
        "dynfric",
        "h_eval",
    ] {
        assert!(
            !ORACLE_SRC.contains(forbidden),
            "oracle.rs references `{forbidden}`; the oracle must stay independent"
        );
    }
}

#[test]
fn oracle_family_imports_are_gate_only() {
    // The only items the oracle may take from `family` are the domain gate
    // and the parameter struct.
    for line in ORACLE_SRC.lines().filter(|l| l.contains("family::")) {
        assert_eq!(
            line.trim(),
            "use crate::family::{check_domain, ParamTriple};",
            "unexpected coupling to family: {line}"
        );
    }
}
