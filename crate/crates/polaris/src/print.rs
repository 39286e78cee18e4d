//! Canonical text for maps, readable back by [`crate::parse`].

use polaris_core::{PolyMap, Polynomial};

/// `x1, ..., xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn format_polynomial(p: &Polynomial, vars: &[String]) -> String {
    p.display_with(vars).to_string()
}

pub fn format_components(map: &PolyMap, vars: &[String]) -> Vec<String> {
    map.components().iter().map(|p| format_polynomial(p, vars)).collect()
}

/// The map document: a `vars` line, then one component per line.
pub fn format_map(map: &PolyMap, vars: &[String]) -> String {
    let mut out = String::from("vars");
    for v in vars {
        out.push(' ');
        out.push_str(v);
    }
    out.push('\n');
    for c in format_components(map, vars) {
        out.push_str(&c);
        out.push('\n');
    }
    out
}
