//! Sparse multivariate polynomials over the rationals and polynomial maps.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic with `x1 > x2 > ... > xn`. Zero coefficients are
//! never stored, so two equal polynomials always have identical term lists.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field.
pub type Rational = BigRational;

/// Shorthand for the rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    /// The monomial `x_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial { exps })
    }

    /// Expands the monomial into the sorted multiset of its variable indices,
    /// e.g. `x1^2 x3` becomes `[0, 0, 2]`.
    pub fn to_multi_index(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for (var, &e) in self.exps.iter().enumerate() {
            out.extend(core::iter::repeat_n(var, e as usize));
        }
        out
    }

    pub fn from_multi_index(nvars: usize, index: &[usize]) -> Monomial {
        let mut exps = vec![0; nvars];
        for &j in index {
            exps[j] += 1;
        }
        Monomial { exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Homogeneity of a polynomial or a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial, homogeneous of every degree.
    Zero,
    Homogeneous(u32),
    Inhomogeneous,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    /// The coordinate function `x_var` (0-based).
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index {var} out of range for {nvars} variables");
        Self::term(Monomial::var(nvars, var), Rational::one())
    }

    pub fn term(mono: Monomial, c: Rational) -> Self {
        let nvars = mono.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Polynomial { nvars, terms }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::VariableMismatch { left: nvars, right: m.nvars() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => Homogeneity::Zero,
            Some(d) if degrees.all(|e| e == d) => Homogeneity::Homogeneous(d),
            Some(_) => Homogeneity::Inhomogeneous,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// Returns `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exps[var] > 0)
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term of degree above `d`.
    pub fn truncate(&self, d: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Smallest degree carrying a nonzero term.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(mono.nvars(), self.nvars);
        match self.terms.entry(mono) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &Polynomial, scale: &Rational) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        if scale.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * scale);
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative with respect to `x_var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[var] -= 1;
            out.add_term(Monomial { exps }, c * int(e as i64));
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::LengthMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes `subs[i]` for `x_i`. The result lives in the variable
    /// count shared by the substituted polynomials.
    pub fn substitute(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        PowerCache::new(subs, self.nvars)?.substitute(self)
    }

    /// Exact quotient `self / divisor` when the division leaves no
    /// remainder; `None` otherwise.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lead_m, lead_c) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lead_m)?;
            let qc = c / lead_c;
            let step = Polynomial::term(qm, qc);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Some(quot)
    }

    /// Renders the polynomial with the given variable names.
    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> PolyDisplay<'a, S> {
        PolyDisplay { poly: self, names }
    }

    /// Re-embeds the polynomial into `nvars` variables, keeping the first
    /// variables in place. Fails if a dropped variable is used.
    pub fn with_nvars(&self, nvars: usize) -> Result<Polynomial> {
        let mut out = Polynomial::zero(nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; nvars];
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if i >= nvars {
                    return Err(Error::VariableMismatch { left: self.nvars, right: nvars });
                }
                exps[i] = e;
            }
            out.add_term(Monomial { exps }, c.clone());
        }
        Ok(out)
    }
}

/// Cached powers of substitution polynomials, reused across every
/// monomial of every substituted polynomial.
pub(crate) struct PowerCache<'a> {
    subs: &'a [Polynomial],
    powers: Vec<Vec<Polynomial>>,
    target: usize,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(subs: &'a [Polynomial], nvars: usize) -> Result<Self> {
        if subs.len() != nvars {
            return Err(Error::LengthMismatch { expected: nvars, found: subs.len() });
        }
        let target = match subs.first() {
            Some(p) => p.nvars,
            None => 0,
        };
        if let Some(p) = subs.iter().find(|p| p.nvars != target) {
            return Err(Error::VariableMismatch { left: target, right: p.nvars });
        }
        let powers = subs.iter().map(|p| vec![Polynomial::one(p.nvars)]).collect();
        Ok(PowerCache { subs, powers, target })
    }

    fn power(&mut self, var: usize, e: u32) -> &Polynomial {
        let e = e as usize;
        while self.powers[var].len() <= e {
            let next = self.powers[var].last().unwrap() * &self.subs[var];
            self.powers[var].push(next);
        }
        &self.powers[var][e]
    }

    pub(crate) fn substitute(&mut self, p: &Polynomial) -> Result<Polynomial> {
        if p.nvars != self.subs.len() {
            return Err(Error::LengthMismatch { expected: p.nvars, found: self.subs.len() });
        }
        let mut out = Polynomial::zero(self.target);
        for (m, c) in &p.terms {
            let mut t = Polynomial::constant(self.target, c.clone());
            for (var, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = &t * self.power(var, e);
                }
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Add<&Polynomial> for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        &self + rhs
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

/// Writes an exact rational as `p` or `p/q`.
pub fn format_rational(c: &Rational) -> String {
    alloc::format!("{c}")
}

pub struct PolyDisplay<'a, S> {
    poly: &'a Polynomial,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for PolyDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let is_const = m.degree() == 0;
            if is_const {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            let mut first = true;
            for (var, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                match self.names.get(var) {
                    Some(name) => f.write_str(name.as_ref())?,
                    None => write!(f, "x{}", var + 1)?,
                }
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let none: [&str; 0] = [];
        fmt::Display::fmt(&self.display_with(&none), f)
    }
}

/// A polynomial endomorphism `H = (h_1, ..., h_n)` of `k^n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMap {
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.len();
        if let Some(p) = components.iter().find(|p| p.nvars != n) {
            return Err(Error::VariableMismatch { left: n, right: p.nvars });
        }
        Ok(PolyMap { components })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap { components: (0..n).map(|i| Polynomial::var(n, i)).collect() }
    }

    pub fn zero(n: usize) -> Self {
        PolyMap { components: vec![Polynomial::zero(n); n] }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Maximum component degree; `None` when every component is zero.
    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::degree).max()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut acc = Homogeneity::Zero;
        for p in &self.components {
            acc = match (acc, p.homogeneity()) {
                (Homogeneity::Inhomogeneous, _) | (_, Homogeneity::Inhomogeneous) => {
                    return Homogeneity::Inhomogeneous
                }
                (a, Homogeneity::Zero) => a,
                (Homogeneity::Zero, b) => b,
                (Homogeneity::Homogeneous(a), Homogeneity::Homogeneous(b)) if a == b => {
                    Homogeneity::Homogeneous(a)
                }
                _ => return Homogeneity::Inhomogeneous,
            };
        }
        acc
    }

    /// Degree `m` of a homogeneous map, `None` for the zero map.
    /// Rejects inhomogeneous maps and degree below two.
    pub fn require_homogeneous(&self) -> Result<Option<u32>> {
        match self.homogeneity() {
            Homogeneity::Zero => Ok(None),
            Homogeneity::Homogeneous(d) if d >= 2 => Ok(Some(d)),
            Homogeneity::Homogeneous(d) => Err(Error::DegreeTooLow(d)),
            Homogeneity::Inhomogeneous => Err(Error::NotHomogeneous),
        }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        if point.len() != self.dim() {
            return Err(Error::LengthMismatch { expected: self.dim(), found: point.len() });
        }
        self.components.iter().map(|p| p.evaluate(point)).collect()
    }

    /// `self ∘ inner`, i.e. component `i` is `f_i(g_1, ..., g_n)`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if self.dim() != inner.dim() {
            return Err(Error::VariableMismatch { left: self.dim(), right: inner.dim() });
        }
        let mut cache = PowerCache::new(&inner.components, self.dim())?;
        let components = self
            .components
            .iter()
            .map(|p| cache.substitute(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { components })
    }

    pub fn checked_add(&self, other: &PolyMap) -> Result<PolyMap> {
        self.zip_with(other, Polynomial::checked_add)
    }

    pub fn checked_sub(&self, other: &PolyMap) -> Result<PolyMap> {
        self.zip_with(other, Polynomial::checked_sub)
    }

    fn zip_with(
        &self,
        other: &PolyMap,
        op: impl Fn(&Polynomial, &Polynomial) -> Result<Polynomial>,
    ) -> Result<PolyMap> {
        if self.dim() != other.dim() {
            return Err(Error::VariableMismatch { left: self.dim(), right: other.dim() });
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| op(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { components })
    }

    pub fn neg(&self) -> PolyMap {
        PolyMap { components: self.components.iter().map(|p| -p).collect() }
    }

    pub fn scale(&self, c: &Rational) -> PolyMap {
        PolyMap { components: self.components.iter().map(|p| p.scale(c)).collect() }
    }

    /// Componentwise [`Polynomial::truncate`].
    pub fn truncate(&self, d: u32) -> PolyMap {
        PolyMap { components: self.components.iter().map(|p| p.truncate(d)).collect() }
    }

    pub fn homogeneous_part(&self, d: u32) -> PolyMap {
        PolyMap { components: self.components.iter().map(|p| p.homogeneous_part(d)).collect() }
    }

    /// Lowest degree of any nonzero term in any component.
    pub fn low_degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::low_degree).min()
    }
}

/// `X - H`.
pub fn identity_minus(h: &PolyMap) -> PolyMap {
    PolyMap::identity(h.dim()).checked_sub(h).expect("same dimension")
}

/// `X + H`.
pub fn identity_plus(h: &PolyMap) -> PolyMap {
    PolyMap::identity(h.dim()).checked_add(h).expect("same dimension")
}
