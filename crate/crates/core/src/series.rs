//! The one-generated free algebra `P_H<X>` and the formal inverse of `X - H`.
//!
//! The inverse of `X - H` is written as `T_1 + T_2 + ...` with `T_1 = X` and
//! `T_s = Σ <T_{i_1}, ..., T_{i_m}>` over ordered tuples with
//! `i_1 + ... + i_m = s + m - 2`; `T_s` is homogeneous of degree
//! `(s - 1)(m - 1) + 1`. Each `T_s` is also the sum of every nonassociative
//! word with `s - 1` products, counted once per ordering of its arguments.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{is_keller, jacobian_determinant_of_identity_minus, QMatrix};
use crate::poly::{identity_minus, identity_plus, Monomial, PolyMap, Polynomial, Rational};
use crate::polarize::{factorial, polarize, SymAlgebra};

/// Degree of `T_s`, i.e. the length of the words it sums.
pub fn word_length(s: usize, arity: usize) -> usize {
    (s - 1) * (arity - 1) + 1
}

/// Graded components `T_1, ..., T_{s_max}` of the formal inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSeries {
    arity: usize,
    terms: Vec<Vec<Polynomial>>,
}

impl InverseSeries {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn s_max(&self) -> usize {
        self.terms.len()
    }

    /// `T_s`, 1-based.
    pub fn term(&self, s: usize) -> &[Polynomial] {
        &self.terms[s - 1]
    }

    pub fn terms(&self) -> &[Vec<Polynomial>] {
        &self.terms
    }

    pub fn degree_of(&self, s: usize) -> usize {
        word_length(s, self.arity)
    }

    /// `T_1 + ... + T_{s_max}`.
    pub fn sum(&self) -> PolyMap {
        sum_terms(&self.terms)
    }
}

fn sum_terms(terms: &[Vec<Polynomial>]) -> PolyMap {
    let n = terms.first().map_or(0, Vec::len);
    let mut acc = vec![Polynomial::zero(n); n];
    for t in terms {
        for (a, p) in acc.iter_mut().zip(t) {
            *a = &*a + p;
        }
    }
    PolyMap::new(acc).expect("components share the dimension")
}

fn is_zero_vec(v: &[Polynomial]) -> bool {
    v.iter().all(Polynomial::is_zero)
}

/// Calls `f` with every non-decreasing `parts`-tuple of positive integers
/// summing to `total`.
fn for_each_sorted_partition(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn go(rest: usize, left: usize, min: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if left == 0 {
            if rest == 0 {
                f(cur);
            }
            return;
        }
        let mut v = min;
        while v * left <= rest {
            cur.push(v);
            go(rest - v, left - 1, v, cur, f);
            cur.pop();
            v += 1;
        }
    }
    go(total, parts, 1, &mut Vec::with_capacity(parts), f);
}

/// Distinct orderings of a sorted sequence.
fn orderings(sorted: &[usize]) -> Rational {
    let mut count = factorial(sorted.len());
    let mut run = 0usize;
    for k in 0..sorted.len() {
        run = if k > 0 && sorted[k - 1] == sorted[k] { run + 1 } else { 1 };
        count /= BigInt::from(run);
    }
    Rational::from_integer(count)
}

/// Next component `T_s` from `T_1, ..., T_{s-1}`.
fn next_term(a: &SymAlgebra, terms: &[Vec<Polynomial>]) -> Vec<Polynomial> {
    let n = a.dim();
    let m = a.arity();
    let s = terms.len() + 1;
    let mut out = vec![Polynomial::zero(n); n];
    for_each_sorted_partition(s + m - 2, m, &mut |idx| {
        if idx.iter().any(|&i| is_zero_vec(&terms[i - 1])) {
            return;
        }
        let args: Vec<&[Polynomial]> = idx.iter().map(|&i| terms[i - 1].as_slice()).collect();
        let prod = a.multiply_poly(&args).expect("terms match the algebra");
        let w = orderings(idx);
        for (o, p) in out.iter_mut().zip(&prod) {
            o.add_scaled(p, &w);
        }
    });
    out
}

/// `T_1, ..., T_{s_max}` for the algebra `A`, i.e. for `X - <X, ..., X>`.
pub fn inverse_terms_of_algebra(a: &SymAlgebra, s_max: usize) -> InverseSeries {
    let n = a.dim();
    let mut terms = Vec::with_capacity(s_max);
    if s_max >= 1 {
        terms.push(PolyMap::identity(n).into_components());
    }
    while terms.len() < s_max {
        let t = next_term(a, &terms);
        terms.push(t);
    }
    InverseSeries { arity: a.arity(), terms }
}

/// Graded components of the inverse of `X ↦ X - H`.
pub fn formal_inverse_terms(h: &PolyMap, s_max: usize) -> Result<InverseSeries> {
    Ok(inverse_terms_of_algebra(&polarize(h)?, s_max))
}

/// `(X - H) ∘ (T_1 + ... + T_{s_max}) - X`.
pub fn inverse_residual(h: &PolyMap, series: &InverseSeries) -> Result<PolyMap> {
    identity_minus(h)
        .compose(&series.sum())?
        .checked_sub(&PolyMap::identity(h.dim()))
}

/// The truncated series inverts `X - H` through the degree of its last
/// term: the residual has no term of degree `≤ deg T_{s_max}`.
pub fn truncation_is_exact(h: &PolyMap, series: &InverseSeries) -> Result<bool> {
    let residual = inverse_residual(h, series)?;
    let top = series.degree_of(series.s_max().max(1)) as u32;
    Ok(residual.low_degree().is_none_or(|d| d > top))
}

/// Why `X - H` is not an automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismWitness {
    /// `det(I - J(H))` is not the constant 1.
    JacobianDeterminant(Polynomial),
    /// A nonzero graded component of the formal inverse whose degree is
    /// beyond what a polynomial inverse could have.
    InverseTerm { s: usize, degree: u32, value: Vec<Polynomial> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismDecision {
    Automorphism { inverse: PolyMap },
    NotAutomorphism(AutomorphismWitness),
    /// A caller-supplied degree bound below `m^(n-1)` was exhausted; the
    /// lowest surviving component is reported.
    UnknownAtBound { bound: u32, lowest: Option<AutomorphismWitness> },
}

impl AutomorphismDecision {
    pub fn is_automorphism(&self) -> bool {
        matches!(self, AutomorphismDecision::Automorphism { .. })
    }
}

/// The inverse-degree bound `m^(n-1)` for automorphisms of degree `m`.
pub fn inverse_degree_bound(m: u32, n: usize) -> u32 {
    let mut b: u32 = 1;
    for _ in 1..n {
        b = b.saturating_mul(m);
    }
    b
}

/// Decides whether `X - H` is a polynomial automorphism. With the default
/// bound the answer is exact; a smaller `max_degree` may return
/// [`AutomorphismDecision::UnknownAtBound`].
pub fn decide_automorphism(h: &PolyMap, max_degree: Option<u32>) -> Result<AutomorphismDecision> {
    let n = h.dim();
    let Some(m) = h.require_homogeneous()? else {
        return Ok(AutomorphismDecision::Automorphism { inverse: PolyMap::identity(n) });
    };
    if !is_keller(h)? {
        return Ok(AutomorphismDecision::NotAutomorphism(
            AutomorphismWitness::JacobianDeterminant(jacobian_determinant_of_identity_minus(h)),
        ));
    }
    let classical = inverse_degree_bound(m, n);
    let bound = max_degree.map_or(classical, |d| d.min(classical));
    let exact = bound == classical;
    let a = polarize(h)?;
    let mm = a.arity();
    let mut terms = vec![PolyMap::identity(n).into_components()];
    let mut checked_len = 0;
    let try_inverse = |terms: &[Vec<Polynomial>]| -> Result<Option<PolyMap>> {
        let g = sum_terms(terms);
        let back = identity_minus(h).compose(&g)?;
        Ok((back == PolyMap::identity(n)).then_some(g))
    };
    loop {
        let s = terms.len() + 1;
        if word_length(s, mm) as u64 > bound as u64 {
            break;
        }
        let t = next_term(&a, &terms);
        let vanished = is_zero_vec(&t);
        terms.push(t);
        // a vanishing component is the cue to test the partial sum
        if vanished {
            let nonzero_len = terms.len() - 1;
            if nonzero_len != checked_len {
                checked_len = nonzero_len;
                if let Some(inverse) = try_inverse(&terms[..nonzero_len])? {
                    return Ok(AutomorphismDecision::Automorphism { inverse });
                }
            }
        }
    }
    if let Some(inverse) = try_inverse(&terms)? {
        return Ok(AutomorphismDecision::Automorphism { inverse });
    }
    // The lowest homogeneous part of (X - H)∘G - X is -T_{s*} for the first
    // nonzero T_{s*} beyond the truncation.
    let residual = identity_minus(h).compose(&sum_terms(&terms))?.checked_sub(&PolyMap::identity(n))?;
    let lowest = residual.low_degree().map(|d| {
        let s = (d as usize - 1) / (mm - 1) + 1;
        AutomorphismWitness::InverseTerm {
            s,
            degree: d,
            value: residual.homogeneous_part(d).neg().into_components(),
        }
    });
    Ok(if exact {
        AutomorphismDecision::NotAutomorphism(lowest.expect("a failed inverse leaves a residual"))
    } else {
        AutomorphismDecision::UnknownAtBound { bound, lowest }
    })
}

/// `X - H` is a quasi-translation when its inverse is `X + H`.
pub fn is_quasi_translation(h: &PolyMap) -> Result<bool> {
    h.require_homogeneous()?;
    let n = h.dim();
    let direct = identity_minus(h).compose(&identity_plus(h))? == PolyMap::identity(n);
    let invariant = h.compose(&identity_plus(h))? == *h;
    assert_eq!(direct, invariant, "(X-H)∘(X+H) = X must match H∘(X+H) = H");
    Ok(direct)
}

/// A nonassociative word in `X`. Arguments of a product are kept sorted,
/// which is canonical because the operation is symmetric.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Word {
    X,
    Product(Vec<Word>),
}

impl Word {
    pub fn length(&self) -> usize {
        match self {
            Word::X => 1,
            Word::Product(ws) => ws.iter().map(Word::length).sum(),
        }
    }

    /// Number of products in the word.
    pub fn level(&self) -> usize {
        match self {
            Word::X => 0,
            Word::Product(ws) => 1 + ws.iter().map(Word::level).sum::<usize>(),
        }
    }

    /// Number of ordered words this canonical shape stands for.
    pub fn orderings(&self) -> BigInt {
        match self {
            Word::X => BigInt::one(),
            Word::Product(ws) => {
                let mut count = factorial(ws.len());
                let mut run = 0usize;
                for k in 0..ws.len() {
                    run = if k > 0 && ws[k - 1] == ws[k] { run + 1 } else { 1 };
                    count /= BigInt::from(run);
                }
                ws.iter().fold(count, |acc, w| acc * w.orderings())
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::X => f.write_str("X"),
            Word::Product(ws) => {
                f.write_str("<")?;
                for (k, w) in ws.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{w}")?;
                }
                f.write_str(">")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluatedWord {
    pub word: Word,
    pub value: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordLevel {
    pub length: usize,
    pub words: Vec<EvaluatedWord>,
    /// Dimension of the span of the values over the ground field.
    pub span_dim: usize,
}

impl WordLevel {
    pub fn all_zero(&self) -> bool {
        self.words.iter().all(|w| is_zero_vec(&w.value))
    }

    pub fn first_nonzero(&self) -> Option<&EvaluatedWord> {
        self.words.iter().find(|w| !is_zero_vec(&w.value))
    }
}

/// Word shapes and their values, one entry per level (lengths
/// `1, m, 2m - 1, ...`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordTable {
    pub arity: usize,
    pub levels: Vec<WordLevel>,
}

impl WordTable {
    pub fn max_length(&self) -> usize {
        self.levels.last().map_or(0, |l| l.length)
    }

    pub fn span_dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.span_dim).collect()
    }
}

/// Largest word length `≤ max_len` of the form `(s - 1)(m - 1) + 1`.
pub fn round_word_length(max_len: usize, arity: usize) -> usize {
    if max_len <= 1 {
        return 1;
    }
    (max_len - 1) / (arity - 1) * (arity - 1) + 1
}

fn span_dim(values: &[&[Polynomial]]) -> usize {
    let mut keys: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for v in values {
        for (i, p) in v.iter().enumerate() {
            for (m, _) in p.terms() {
                let next = keys.len();
                keys.entry((i, m.clone())).or_insert(next);
            }
        }
    }
    if keys.is_empty() {
        return 0;
    }
    let rows = values
        .iter()
        .map(|v| {
            let mut row = vec![Rational::zero(); keys.len()];
            for (i, p) in v.iter().enumerate() {
                for (m, c) in p.terms() {
                    row[keys[&(i, m.clone())]] = c.clone();
                }
            }
            row
        })
        .collect();
    QMatrix::from_rows_with_cols(rows, keys.len()).expect("uniform rows").rank()
}

/// Every canonical word of length up to `max_len` in the free algebra of
/// `A`, with its value on the generic element. Lengths that are not of the
/// form `(s - 1)(m - 1) + 1` are rounded down.
pub fn words_of_algebra(a: &SymAlgebra, max_len: usize) -> WordTable {
    let n = a.dim();
    let m = a.arity();
    let max_level = (round_word_length(max_len, m) - 1) / (m - 1);
    // shapes[level] holds (word, value) pairs; ids order the multisets
    let mut shapes: Vec<Vec<(Word, Vec<Polynomial>)>> =
        vec![vec![(Word::X, PolyMap::identity(n).into_components())]];
    for level in 1..=max_level {
        let mut found = Vec::new();
        // children: non-decreasing (level, index) pairs with levels summing to level - 1
        let mut pick: Vec<(usize, usize)> = Vec::with_capacity(m);
        collect_shapes(&shapes, m, level - 1, &mut pick, &mut |children| {
            let word = Word::Product(
                children.iter().map(|&(l, k)| shapes[l][k].0.clone()).collect(),
            );
            let value = if children.iter().any(|&(l, k)| is_zero_vec(&shapes[l][k].1)) {
                vec![Polynomial::zero(n); n]
            } else {
                let args: Vec<&[Polynomial]> =
                    children.iter().map(|&(l, k)| shapes[l][k].1.as_slice()).collect();
                a.multiply_poly(&args).expect("values match the algebra")
            };
            found.push((word, value));
        });
        shapes.push(found);
    }
    let levels = shapes
        .into_iter()
        .enumerate()
        .map(|(level, ws)| {
            let values: Vec<&[Polynomial]> = ws.iter().map(|(_, v)| v.as_slice()).collect();
            let span = span_dim(&values);
            let mut words: Vec<EvaluatedWord> =
                ws.into_iter().map(|(word, value)| EvaluatedWord { word, value }).collect();
            words.sort_by(|x, y| x.word.cmp(&y.word));
            WordLevel { length: level * (m - 1) + 1, words, span_dim: span }
        })
        .collect();
    WordTable { arity: m, levels }
}

fn collect_shapes(
    shapes: &[Vec<(Word, Vec<Polynomial>)>],
    slots: usize,
    budget: usize,
    pick: &mut Vec<(usize, usize)>,
    emit: &mut impl FnMut(&[(usize, usize)]),
) {
    if pick.len() == slots {
        if budget == 0 {
            emit(pick);
        }
        return;
    }
    let start = pick.last().copied().unwrap_or((0, 0));
    for level in start.0..=budget.min(shapes.len() - 1) {
        let first = if level == start.0 { start.1 } else { 0 };
        for k in first..shapes[level].len() {
            pick.push((level, k));
            collect_shapes(shapes, slots, budget - level, pick, emit);
            pick.pop();
        }
    }
}

/// [`words_of_algebra`] for `P_H`.
pub fn word_evaluations(h: &PolyMap, max_len: usize) -> Result<WordTable> {
    Ok(words_of_algebra(&polarize(h)?, max_len))
}

/// Concrete evidence attached to a bounded verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A word with a nonzero value.
    Word { length: usize, word: Word, value: Vec<Polynomial> },
    /// Two words of the same length with different values.
    WordPair {
        length: usize,
        left: Word,
        right: Word,
        left_value: Vec<Polynomial>,
        right_value: Vec<Polynomial>,
    },
    /// An iterate of the map that is still nonzero.
    Iterate { p: usize, value: PolyMap },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails(Witness),
    UnknownAtBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedVerdict {
    pub outcome: Outcome,
    /// The bound that was used (word length or iteration count).
    pub bound: usize,
    /// Where the property was established, when it holds.
    pub at: Option<usize>,
    /// Supporting evidence, e.g. one nonzero word per level.
    pub evidence: Vec<Witness>,
}

/// Whether `H` is nilpotent under composition, trying `H, H∘H, ...` up to
/// `p_max` iterates.
pub fn iterate_map_nilpotent(h: &PolyMap, p_max: usize) -> Result<BoundedVerdict> {
    if h.components().iter().any(|p| !p.constant_term().is_zero()) {
        return Err(Error::NonzeroConstant);
    }
    let mut current = h.clone();
    for p in 1..=p_max {
        if current.is_zero() {
            return Ok(BoundedVerdict {
                outcome: Outcome::Holds,
                bound: p_max,
                at: Some(p),
                evidence: Vec::new(),
            });
        }
        if p < p_max {
            current = h.compose(&current)?;
        }
    }
    Ok(BoundedVerdict {
        outcome: Outcome::UnknownAtBound,
        bound: p_max,
        at: None,
        evidence: vec![Witness::Iterate { p: p_max, value: current }],
    })
}

/// Smallest level `L ≥ 1` such that every word with `L` up to
/// `m(L - 1) + 1` products vanishes. Every longer word contains a subword in
/// that window, so the free algebra is then nilpotent.
fn nilpotency_level(table: &WordTable) -> Option<usize> {
    let m = table.arity;
    let top = table.levels.len() - 1;
    (1..=top).find(|&l| {
        let hi = m * (l - 1) + 1;
        hi <= top && (l..=hi).all(|k| table.levels[k].all_zero())
    })
}

fn nonzero_evidence(table: &WordTable) -> Vec<Witness> {
    table
        .levels
        .iter()
        .filter_map(|l| {
            l.first_nonzero().map(|w| Witness::Word {
                length: l.length,
                word: w.word.clone(),
                value: w.value.clone(),
            })
        })
        .collect()
}

/// Bounded nilpotency test for the free algebra `P_H<X>`. Returns the word
/// table alongside the verdict.
pub fn free_algebra_nilpotent(h: &PolyMap, max_len: usize) -> Result<(BoundedVerdict, WordTable)> {
    let table = word_evaluations(h, max_len)?;
    Ok((free_algebra_verdict(&table), table))
}

pub fn free_algebra_verdict(table: &WordTable) -> BoundedVerdict {
    let bound = table.max_length();
    match nilpotency_level(table) {
        Some(l) => BoundedVerdict {
            outcome: Outcome::Holds,
            bound,
            at: Some(table.levels[l].length),
            evidence: Vec::new(),
        },
        None => BoundedVerdict {
            outcome: Outcome::UnknownAtBound,
            bound,
            at: None,
            evidence: nonzero_evidence(table),
        },
    }
}

/// Power-associativity. For binary algebras this is the identity
/// `X²X² = (X²X)X`, which is decisive in characteristic zero. For `m ≥ 3`
/// all words of equal length must agree; `Holds` additionally needs the free
/// algebra to be certified nilpotent within the bound.
pub fn power_associative_check(h: &PolyMap, max_len: usize) -> Result<BoundedVerdict> {
    let a = polarize(h)?;
    if a.arity() == 2 {
        return binary_power_associative(&a);
    }
    let table = words_of_algebra(&a, max_len);
    let bound = table.max_length();
    for level in &table.levels {
        let Some(first) = level.words.first() else { continue };
        if let Some(other) = level.words.iter().find(|w| w.value != first.value) {
            return Ok(BoundedVerdict {
                outcome: Outcome::Fails(Witness::WordPair {
                    length: level.length,
                    left: first.word.clone(),
                    right: other.word.clone(),
                    left_value: first.value.clone(),
                    right_value: other.value.clone(),
                }),
                bound,
                at: None,
                evidence: Vec::new(),
            });
        }
    }
    Ok(match nilpotency_level(&table) {
        Some(l) => BoundedVerdict {
            outcome: Outcome::Holds,
            bound,
            at: Some(table.levels[l].length),
            evidence: Vec::new(),
        },
        None => BoundedVerdict { outcome: Outcome::UnknownAtBound, bound, at: None, evidence: Vec::new() },
    })
}

/// `X²X²` and `(X²X)X` for a binary algebra.
pub fn binary_power_words(a: &SymAlgebra) -> Result<(Vec<Polynomial>, Vec<Polynomial>)> {
    if a.arity() != 2 {
        return Err(Error::ShapeMismatch);
    }
    let x = PolyMap::identity(a.dim()).into_components();
    let x2 = a.multiply_poly(&[&x, &x])?;
    let x2x = a.multiply_poly(&[&x2, &x])?;
    let lhs = a.multiply_poly(&[&x2, &x2])?;
    let rhs = a.multiply_poly(&[&x2x, &x])?;
    Ok((lhs, rhs))
}

fn binary_power_associative(a: &SymAlgebra) -> Result<BoundedVerdict> {
    let (lhs, rhs) = binary_power_words(a)?;
    let square = Word::Product(vec![Word::X, Word::X]);
    let outcome = if lhs == rhs {
        Outcome::Holds
    } else {
        Outcome::Fails(Witness::WordPair {
            length: 4,
            left: Word::Product(vec![square.clone(), square.clone()]),
            right: Word::Product(vec![Word::X, Word::Product(vec![Word::X, square])]),
            left_value: lhs,
            right_value: rhs,
        })
    };
    let at = matches!(outcome, Outcome::Holds).then_some(4);
    Ok(BoundedVerdict { outcome, bound: 4, at, evidence: Vec::new() })
}

/// Whether `A` satisfies the identity `T_s = 0`, i.e. whether the `s`-th
/// graded component of the inverse of `X - <X, ..., X>` vanishes.
pub fn identity_ts_holds(a: &SymAlgebra, s: usize) -> Result<bool> {
    if s < 2 {
        return Err(Error::LengthMismatch { expected: 2, found: s });
    }
    let series = inverse_terms_of_algebra(a, s);
    Ok(is_zero_vec(series.term(s)))
}
