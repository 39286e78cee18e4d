//! Built-in example maps.
//!
//! Each entry stores the automorphism `F` as usually printed. The analyzed
//! increment is always `H = X - F`, so `F = X - H`; entries printed as
//! `X + H'` record that orientation and have `H = -H'`.

use polaris_core::{PolyMap, Polynomial};
use serde::Serialize;

use crate::parse::parse_expression;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    #[serde(rename = "X - H")]
    IdentityMinus,
    #[serde(rename = "X + H")]
    IdentityPlus,
}

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub title: &'static str,
    pub vars: &'static [&'static str],
    /// Components of the automorphism `F`.
    pub printed: &'static [&'static str],
    pub orientation: Orientation,
    pub degree: u32,
}

pub const CATALOG: [CatalogEntry; 4] = [
    CatalogEntry {
        name: "suttles",
        title: "Suttles' solvable, non-nilpotent commutative power-associative algebra",
        vars: &["x", "y", "z", "s", "t"],
        printed: &["x - y*s", "y + z*s - x*t", "z - y*t", "s", "t"],
        orientation: Orientation::IdentityMinus,
        degree: 2,
    },
    CatalogEntry {
        name: "yagzhev4",
        title: "cubic quasi-translation in four variables",
        vars: &["x", "y", "s", "t"],
        printed: &["x + s*(x*t - y*s)", "y + t*(x*t - y*s)", "s", "t"],
        orientation: Orientation::IdentityPlus,
        degree: 3,
    },
    CatalogEntry {
        name: "gorni-zampieri",
        title: "cubic map whose one-generated free algebra is not nilpotent",
        vars: &["x", "y", "s", "t"],
        printed: &["x + s*(x*t - y*s)", "y + t*(x*t - y*s)", "s + t^3", "t"],
        orientation: Orientation::IdentityPlus,
        degree: 3,
    },
    CatalogEntry {
        name: "suttles-elem",
        title: "Suttles' map after one elementary transformation",
        vars: &["x", "y", "z", "s", "t"],
        printed: &["x - y*s", "y + z*s - x*t", "z - y*t", "s + t^2", "t"],
        orientation: Orientation::IdentityMinus,
        degree: 2,
    },
];

pub fn catalog(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|e| e.name)
}

impl CatalogEntry {
    pub fn var_names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.to_string()).collect()
    }

    /// The automorphism `F` itself.
    pub fn automorphism(&self) -> PolyMap {
        let vars = self.var_names();
        let comps: Vec<Polynomial> = self
            .printed
            .iter()
            .map(|c| parse_expression(c, &vars, 1).expect("catalog entries parse"))
            .collect();
        PolyMap::new(comps).expect("one component per variable")
    }

    /// `H = X - F`.
    pub fn increment(&self) -> PolyMap {
        PolyMap::identity(self.vars.len())
            .checked_sub(&self.automorphism())
            .expect("same dimension")
    }

    /// The increment with the printed sign: `H` for `X - H`, `H' = -H` for
    /// `X + H'`.
    pub fn printed_increment(&self) -> PolyMap {
        match self.orientation {
            Orientation::IdentityMinus => self.increment(),
            Orientation::IdentityPlus => self.increment().neg(),
        }
    }
}
