//! The `analyze` report.
//!
//! [`Report::body`] is deterministic for a given input and bounds; wall-clock
//! timings live in [`Report::timing`] so they can be left out of comparisons.

use std::collections::BTreeMap;
use std::time::Instant;

use polaris_core::algebra::{derived_series, is_engel, is_strongly_triangular, triangulate, upper_series};
use polaris_core::polarize::conjugate_map;
use polaris_core::series::{
    decide_automorphism, formal_inverse_terms, free_algebra_verdict, inverse_degree_bound, is_quasi_translation,
    iterate_map_nilpotent, power_associative_check, truncation_is_exact, word_evaluations, word_length,
    AutomorphismDecision, AutomorphismWitness, BoundedVerdict, Outcome, Witness, WordTable,
};
use polaris_core::{is_keller, polarize, PolyMap, Polynomial, QMatrix};
use serde::Serialize;

use crate::catalog::Orientation;
use crate::print::{format_components, format_polynomial};
use crate::tensor_json::TensorDoc;

pub const SCHEMA_VERSION: u32 = 1;

/// Default number of compositions tried by the map-iteration test.
pub const DEFAULT_MAX_ITER: usize = 4;

/// Largest `s` listed in the report's inverse-series section.
pub const REPORT_SERIES_TERMS: usize = 6;

/// Caller-supplied bounds; `None` selects the default for the input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Bounds {
    pub max_degree: Option<u32>,
    pub max_word_len: Option<usize>,
    pub max_iter: Option<usize>,
}

/// Word length of `T_6` for arity `m`.
pub fn default_word_len(arity: usize) -> usize {
    word_length(6, arity)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedBounds {
    pub max_degree: u32,
    pub max_word_len: usize,
    pub max_iter: usize,
}

impl Bounds {
    pub fn resolve(&self, arity: usize, dim: usize) -> ResolvedBounds {
        let classical = inverse_degree_bound(arity as u32, dim);
        ResolvedBounds {
            max_degree: self.max_degree.map_or(classical, |d| d.min(classical)),
            max_word_len: self.max_word_len.unwrap_or_else(|| default_word_len(arity)),
            max_iter: self.max_iter.unwrap_or(DEFAULT_MAX_ITER),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub source: String,
    pub vars: Vec<String>,
    /// Components of the analyzed increment `H`.
    pub components: Vec<String>,
    /// How the source map was written, when it came from the catalog.
    pub printed_as: Option<Orientation>,
    /// The analyzed map is always `X - H`.
    pub analyzed_as: Orientation,
    pub negated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Polarization {
    pub entries: usize,
    pub tensor: TensorDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct Derived {
    pub solvable: bool,
    pub dims: Vec<usize>,
    pub length: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Upper {
    pub nilpotent: bool,
    pub dims: Vec<usize>,
    pub length: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Triangulation {
    pub status: &'static str,
    pub alpha: Option<Vec<Vec<String>>>,
    pub conjugate: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind")]
pub enum AutWitnessDoc {
    JacobianDeterminant { determinant: String },
    InverseTerm { s: usize, degree: u32, components: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
pub struct Automorphism {
    pub verdict: &'static str,
    pub bound: u32,
    pub inverse: Option<Vec<String>>,
    pub inverse_degree: Option<u32>,
    pub witness: Option<AutWitnessDoc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesTerm {
    pub s: usize,
    pub degree: usize,
    pub zero: bool,
    pub components: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InverseSeriesDoc {
    pub s_max: usize,
    /// `(X - H) ∘ (T_1 + ... + T_{s_max}) = X` through degree `deg T_{s_max}`.
    pub exact_through_truncation: bool,
    pub terms: Vec<SeriesTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelDoc {
    pub length: usize,
    pub words: usize,
    pub nonzero_words: usize,
    pub span_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind")]
pub enum WitnessDoc {
    Word { length: usize, word: String, value: Vec<String> },
    WordPair { length: usize, left: String, right: String, left_value: Vec<String>, right_value: Vec<String> },
    Iterate { p: usize, value: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictDoc {
    pub outcome: &'static str,
    pub bound: usize,
    pub at: Option<usize>,
    pub witness: Option<WitnessDoc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeAlgebra {
    #[serde(flatten)]
    pub verdict: VerdictDoc,
    pub levels: Vec<LevelDoc>,
    pub evidence: Vec<WitnessDoc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportBody {
    pub schema: u32,
    pub input: InputEcho,
    pub dim: usize,
    pub degree: Option<u32>,
    pub arity: usize,
    pub bounds: ResolvedBounds,
    pub keller: bool,
    pub engel: bool,
    pub polarization: Polarization,
    pub derived_series: Derived,
    pub upper_series: Upper,
    pub triangulation: Triangulation,
    pub automorphism: Automorphism,
    pub quasi_translation: bool,
    pub inverse_series: InverseSeriesDoc,
    pub free_algebra: FreeAlgebra,
    pub power_associative: VerdictDoc,
    pub map_iteration: VerdictDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    pub sections_ms: BTreeMap<&'static str, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(flatten)]
    pub body: ReportBody,
    pub timing: Timing,
}

/// Where the analyzed map came from.
#[derive(Debug, Clone)]
pub struct Subject {
    pub source: String,
    pub vars: Vec<String>,
    pub map: PolyMap,
    pub printed_as: Option<Orientation>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report without timings; identical across runs.
    pub fn comparison_payload(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serializes")
    }

    /// One `name: verdict` line per test.
    pub fn verdict_lines(&self) -> String {
        let b = &self.body;
        let lines = [
            ("keller", b.keller.to_string()),
            ("engel", b.engel.to_string()),
            ("solvable", b.derived_series.solvable.to_string()),
            ("nilpotent", b.upper_series.nilpotent.to_string()),
            ("triangulation", b.triangulation.status.to_string()),
            ("automorphism", b.automorphism.verdict.to_string()),
            ("quasi_translation", b.quasi_translation.to_string()),
            ("free_algebra", b.free_algebra.verdict.outcome.to_string()),
            ("power_associative", b.power_associative.outcome.to_string()),
            ("map_iteration", b.map_iteration.outcome.to_string()),
        ];
        lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

fn strings(v: &[Polynomial], vars: &[String]) -> Vec<String> {
    v.iter().map(|p| format_polynomial(p, vars)).collect()
}

fn matrix_strings(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|c| c.to_string()).collect()).collect()
}

pub fn outcome_name(o: &Outcome) -> &'static str {
    match o {
        Outcome::Holds => "Holds",
        Outcome::Fails(_) => "Fails",
        Outcome::UnknownAtBound => "UnknownAtBound",
    }
}

pub fn witness_doc(w: &Witness, vars: &[String]) -> WitnessDoc {
    match w {
        Witness::Word { length, word, value } => {
            WitnessDoc::Word { length: *length, word: word.to_string(), value: strings(value, vars) }
        }
        Witness::WordPair { length, left, right, left_value, right_value } => WitnessDoc::WordPair {
            length: *length,
            left: left.to_string(),
            right: right.to_string(),
            left_value: strings(left_value, vars),
            right_value: strings(right_value, vars),
        },
        Witness::Iterate { p, value } => WitnessDoc::Iterate { p: *p, value: format_components(value, vars) },
    }
}

fn verdict_doc(v: &BoundedVerdict, vars: &[String]) -> VerdictDoc {
    let witness = match &v.outcome {
        Outcome::Fails(w) => Some(witness_doc(w, vars)),
        _ => v.evidence.first().map(|w| witness_doc(w, vars)),
    };
    VerdictDoc { outcome: outcome_name(&v.outcome), bound: v.bound, at: v.at, witness }
}

pub fn aut_witness_doc(w: &AutomorphismWitness, vars: &[String]) -> AutWitnessDoc {
    match w {
        AutomorphismWitness::JacobianDeterminant(d) => {
            AutWitnessDoc::JacobianDeterminant { determinant: format_polynomial(d, vars) }
        }
        AutomorphismWitness::InverseTerm { s, degree, value } => {
            AutWitnessDoc::InverseTerm { s: *s, degree: *degree, components: strings(value, vars) }
        }
    }
}

fn levels_doc(table: &WordTable) -> Vec<LevelDoc> {
    table
        .levels
        .iter()
        .map(|l| LevelDoc {
            length: l.length,
            words: l.words.len(),
            nonzero_words: l.words.iter().filter(|w| w.value.iter().any(|p| !p.is_zero())).count(),
            span_dim: l.span_dim,
        })
        .collect()
}

/// Why a map cannot be analyzed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PreconditionError {
    #[error("the map is not homogeneous")]
    NotHomogeneous,
    #[error("the map has degree {0}; degree at least 2 is required")]
    DegreeTooLow(u32),
    #[error("{0}")]
    Other(String),
}

impl From<polaris_core::Error> for PreconditionError {
    fn from(e: polaris_core::Error) -> Self {
        match e {
            polaris_core::Error::NotHomogeneous => PreconditionError::NotHomogeneous,
            polaris_core::Error::DegreeTooLow(d) => PreconditionError::DegreeTooLow(d),
            other => PreconditionError::Other(other.to_string()),
        }
    }
}

struct Clock {
    start: Instant,
    sections: BTreeMap<&'static str, f64>,
}

impl Clock {
    fn time<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.sections.insert(name, t.elapsed().as_secs_f64() * 1e3);
        out
    }
}

/// Largest `s` whose words have length at most `max_degree`.
fn series_terms_within(max_degree: u32, arity: usize) -> usize {
    (max_degree as usize).saturating_sub(1) / (arity - 1) + 1
}

/// Runs every test on `X - H`.
pub fn analyze(subject: &Subject, bounds: &Bounds) -> Result<Report, PreconditionError> {
    let h = &subject.map;
    let vars = &subject.vars;
    let n = h.dim();
    let degree = h.require_homogeneous()?;
    let mut clock = Clock { start: Instant::now(), sections: BTreeMap::new() };

    let a = clock.time("polarize", || polarize(h))?;
    let arity = a.arity();
    let resolved = bounds.resolve(arity, n);

    let keller = clock.time("keller", || is_keller(h))?;
    let engel = clock.time("engel", || is_engel(&a));
    let derived = clock.time("derived_series", || derived_series(&a));
    let upper = clock.time("upper_series", || upper_series(&a));
    let triangulation = clock.time("triangulation", || match triangulate(&a) {
        Ok(alpha) => {
            let conj = conjugate_map(&alpha, h).expect("alpha is invertible");
            debug_assert!(is_strongly_triangular(&conj));
            Triangulation {
                status: "Triangulated",
                alpha: Some(matrix_strings(&alpha)),
                conjugate: Some(format_components(&conj, vars)),
            }
        }
        Err(_) => Triangulation { status: "NotNilpotent", alpha: None, conjugate: None },
    });

    let decision = clock.time("automorphism", || decide_automorphism(h, Some(resolved.max_degree)))?;
    let automorphism = match &decision {
        AutomorphismDecision::Automorphism { inverse } => Automorphism {
            verdict: "Automorphism",
            bound: resolved.max_degree,
            inverse: Some(format_components(inverse, vars)),
            inverse_degree: inverse.degree(),
            witness: None,
        },
        AutomorphismDecision::NotAutomorphism(w) => Automorphism {
            verdict: "NotAutomorphism",
            bound: resolved.max_degree,
            inverse: None,
            inverse_degree: None,
            witness: Some(aut_witness_doc(w, vars)),
        },
        AutomorphismDecision::UnknownAtBound { bound, lowest } => Automorphism {
            verdict: "UnknownAtBound",
            bound: *bound,
            inverse: None,
            inverse_degree: None,
            witness: lowest.as_ref().map(|w| aut_witness_doc(w, vars)),
        },
    };
    let quasi_translation = clock.time("quasi_translation", || is_quasi_translation(h))?;

    let inverse_series = clock.time("inverse_series", || -> Result<_, PreconditionError> {
        let s_max = series_terms_within(resolved.max_degree, arity).clamp(2, REPORT_SERIES_TERMS);
        let series = formal_inverse_terms(h, s_max)?;
        let exact = truncation_is_exact(h, &series)?;
        let terms = (1..=s_max)
            .map(|s| SeriesTerm {
                s,
                degree: series.degree_of(s),
                zero: series.term(s).iter().all(Polynomial::is_zero),
                components: strings(series.term(s), vars),
            })
            .collect();
        Ok(InverseSeriesDoc { s_max, exact_through_truncation: exact, terms })
    })?;

    let free_algebra = clock.time("free_algebra", || -> Result<_, PreconditionError> {
        let table = word_evaluations(h, resolved.max_word_len)?;
        let verdict = free_algebra_verdict(&table);
        Ok(FreeAlgebra {
            verdict: VerdictDoc {
                outcome: outcome_name(&verdict.outcome),
                bound: verdict.bound,
                at: verdict.at,
                witness: verdict.evidence.last().map(|w| witness_doc(w, vars)),
            },
            levels: levels_doc(&table),
            evidence: verdict.evidence.iter().map(|w| witness_doc(w, vars)).collect(),
        })
    })?;
    let power = clock.time("power_associative", || power_associative_check(h, resolved.max_word_len))?;
    let iteration = clock.time("map_iteration", || iterate_map_nilpotent(h, resolved.max_iter))?;

    let body = ReportBody {
        schema: SCHEMA_VERSION,
        input: InputEcho {
            source: subject.source.clone(),
            vars: vars.clone(),
            components: format_components(h, vars),
            printed_as: subject.printed_as,
            analyzed_as: Orientation::IdentityMinus,
            negated: subject.printed_as == Some(Orientation::IdentityPlus),
        },
        dim: n,
        degree,
        arity,
        bounds: resolved,
        keller,
        engel,
        polarization: Polarization { entries: a.tensor().len(), tensor: TensorDoc::from_tensor(a.tensor()) },
        derived_series: Derived { solvable: derived.verdict, dims: derived.dims(), length: derived.length },
        upper_series: Upper { nilpotent: upper.verdict, dims: upper.dims(), length: upper.length },
        triangulation,
        automorphism,
        quasi_translation,
        inverse_series,
        free_algebra,
        power_associative: verdict_doc(&power, vars),
        map_iteration: verdict_doc(&iteration, vars),
    };
    let timing = Timing { total_ms: clock.start.elapsed().as_secs_f64() * 1e3, sections_ms: clock.sections };
    Ok(Report { body, timing })
}
