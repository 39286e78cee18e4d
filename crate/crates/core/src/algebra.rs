//! Structure of a symmetric algebra: derived and upper series, annihilator,
//! quotients, the Engel test and strong triangulation.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{jacobian, rref, PolyMatrix, QMatrix};
use crate::poly::{int, Monomial, PolyMap, Polynomial, Rational};
use crate::polarize::{next_multiset, StructTensor, SymAlgebra};

/// A subspace of `k^n`, stored as the nonzero rows of its reduced
/// row-echelon basis. Equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: QMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: QMatrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: QMatrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient));
        }
        let m = QMatrix::from_rows_with_cols(vectors, ambient)?;
        let r = rref(&m);
        let rows = (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect();
        Ok(Subspace {
            ambient,
            basis: QMatrix::from_rows_with_cols(rows, ambient)?,
            pivots: r.pivots,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots; they index a canonical complement.
    pub fn free_coordinates(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Subtracts the unique element of the subspace that clears every pivot
    /// coordinate of `v`.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            let f = out[p].clone();
            if f.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.basis.row(r)) {
                if !b.is_zero() {
                    *o -= &f * b;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis_vectors().iter().all(|v| other.contains(v))
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::LengthMismatch { expected: self.ambient, found: other.ambient });
        }
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Subspace::span(self.ambient, rows)
    }
}

/// Which series a [`SeriesReport`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// `A^(0) = A`, `A^(i+1) = <A^(i), ..., A^(i)>`.
    Derived,
    /// `Z_0 = 0`, `Z_(i+1)` the preimage of `Ann(A / Z_i)`.
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    /// Terms until the chain stabilizes; a repeated term is not stored.
    pub chain: Vec<Subspace>,
    /// Solvable for the derived series, nilpotent for the upper series.
    pub verdict: bool,
    /// Derived length or nilpotency class when the verdict holds, otherwise
    /// the number of proper steps taken before stabilizing.
    pub length: usize,
}

impl SeriesReport {
    pub fn dims(&self) -> Vec<usize> {
        self.chain.iter().map(Subspace::dim).collect()
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Span of every product `<u_1, ..., u_m>` with `u_j` running over a basis
/// of the `j`-th subspace.
pub fn product_span(a: &SymAlgebra, slots: &[&Subspace]) -> Result<Subspace> {
    let n = a.dim();
    if slots.len() != a.arity() {
        return Err(Error::LengthMismatch { expected: a.arity(), found: slots.len() });
    }
    if let Some(s) = slots.iter().find(|s| s.ambient != n) {
        return Err(Error::LengthMismatch { expected: n, found: s.ambient });
    }
    if slots.iter().any(|s| s.is_zero()) {
        return Ok(Subspace::zero(n));
    }
    let bases: Vec<Vec<Vec<Rational>>> = slots.iter().map(|s| s.basis_vectors()).collect();
    let same = slots.windows(2).all(|w| w[0] == w[1]);
    let mut products = Vec::new();
    let mut index = vec![0usize; slots.len()];
    loop {
        let args: Vec<&[Rational]> =
            index.iter().enumerate().map(|(slot, &k)| bases[slot][k].as_slice()).collect();
        let p = a.multiply(&args)?;
        if p.iter().any(|c| !c.is_zero()) {
            products.push(p);
        }
        // one representative per multiset suffices when the slots coincide
        let more = if same {
            next_multiset(&mut index, bases[0].len())
        } else {
            next_tuple(&mut index, &bases)
        };
        if !more {
            break;
        }
    }
    Subspace::span(n, products)
}

fn next_tuple(index: &mut [usize], bases: &[Vec<Vec<Rational>>]) -> bool {
    for k in (0..index.len()).rev() {
        if index[k] + 1 < bases[k].len() {
            index[k] += 1;
            for later in &mut index[k + 1..] {
                *later = 0;
            }
            return true;
        }
    }
    false
}

pub fn derived_series(a: &SymAlgebra) -> SeriesReport {
    let n = a.dim();
    let mut chain = vec![Subspace::full(n)];
    loop {
        let current = chain.last().unwrap();
        if current.is_zero() {
            break;
        }
        let slots = vec![current; a.arity()];
        let next = product_span(a, &slots).expect("slots match the algebra");
        if next == *current {
            break;
        }
        chain.push(next);
    }
    let verdict = chain.last().is_some_and(Subspace::is_zero);
    let length = chain.len() - 1;
    SeriesReport { kind: SeriesKind::Derived, chain, verdict, length }
}

/// Elements `a` with `<a, b_2, ..., b_m> = 0` for all `b`.
pub fn annihilator(a: &SymAlgebra) -> Subspace {
    let n = a.dim();
    if n == 0 {
        return Subspace::zero(0);
    }
    let t = a.tensor();
    let mut rows = Vec::new();
    let mut rest = vec![0usize; a.arity() - 1];
    loop {
        for out in 0..n {
            let row: Vec<Rational> = (0..n)
                .map(|c| {
                    let mut idx = rest.clone();
                    idx.push(c);
                    t.get(&idx, out)
                })
                .collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
        if !next_multiset(&mut rest, n) {
            break;
        }
    }
    null_space(n, rows)
}

/// Kernel of the matrix with the given rows.
fn null_space(n: usize, rows: Vec<Vec<Rational>>) -> Subspace {
    if rows.is_empty() {
        return Subspace::full(n);
    }
    let r = rref(&QMatrix::from_rows_with_cols(rows, n).expect("rows have length n"));
    let free: Vec<usize> = (0..n).filter(|c| !r.pivots.contains(c)).collect();
    let vectors = free
        .iter()
        .map(|&f| {
            let mut v = unit(n, f);
            for (row, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.matrix[(row, f)].clone();
            }
            v
        })
        .collect();
    Subspace::span(n, vectors).expect("vectors have length n")
}

/// `A / I` written on the free coordinates of `I`.
pub fn quotient(a: &SymAlgebra, ideal: &Subspace) -> Result<SymAlgebra> {
    let n = a.dim();
    if ideal.ambient != n {
        return Err(Error::LengthMismatch { expected: n, found: ideal.ambient });
    }
    let full = Subspace::full(n);
    let mut slots = vec![&full; a.arity() - 1];
    slots.push(ideal);
    if !product_span(a, &slots)?.is_subspace_of(ideal) {
        return Err(Error::NotAnIdeal);
    }
    let free = ideal.free_coordinates();
    let q = free.len();
    let mut entries = Vec::new();
    if q > 0 {
        let mut index = vec![0usize; a.arity()];
        loop {
            let args: Vec<Vec<Rational>> = index.iter().map(|&k| unit(n, free[k])).collect();
            let refs: Vec<&[Rational]> = args.iter().map(Vec::as_slice).collect();
            let p = ideal.reduce(&a.multiply(&refs)?);
            for (out, &c) in free.iter().enumerate() {
                if !p[c].is_zero() {
                    entries.push((index.clone(), out, p[c].clone()));
                }
            }
            if !next_multiset(&mut index, q) {
                break;
            }
        }
    }
    Ok(SymAlgebra::new(StructTensor::from_entries(q, a.arity(), entries)?))
}

pub fn upper_series(a: &SymAlgebra) -> SeriesReport {
    let n = a.dim();
    let mut chain = vec![Subspace::zero(n)];
    loop {
        let current = chain.last().unwrap();
        if current.is_full() {
            break;
        }
        let quot = quotient(a, current).expect("upper series terms are ideals");
        let free = current.free_coordinates();
        let lifted: Vec<Vec<Rational>> = annihilator(&quot)
            .basis_vectors()
            .into_iter()
            .map(|w| {
                let mut v = vec![Rational::zero(); n];
                for (k, c) in w.into_iter().enumerate() {
                    v[free[k]] = c;
                }
                v
            })
            .collect();
        let next = current
            .join(&Subspace::span(n, lifted).expect("lifted vectors have length n"))
            .expect("same ambient");
        if next == *current {
            break;
        }
        chain.push(next);
    }
    let verdict = chain.last().is_some_and(Subspace::is_full);
    let length = chain.len() - 1;
    SeriesReport { kind: SeriesKind::Upper, chain, verdict, length }
}

/// The generic multiplication operator `M(X, ..., X)`: entry `(i, c)` is the
/// `e_i` coefficient of `<X, ..., X, e_c>`.
pub fn multiplication_operator(a: &SymAlgebra) -> PolyMatrix {
    let n = a.dim();
    let x = PolyMap::identity(n).into_components();
    let mut m = PolyMatrix::zeros(n, n, n);
    for c in 0..n {
        let e: Vec<Polynomial> = (0..n)
            .map(|k| if k == c { Polynomial::one(n) } else { Polynomial::zero(n) })
            .collect();
        let mut args: Vec<&[Polynomial]> = vec![&x; a.arity() - 1];
        args.push(&e);
        let col = a.multiply_poly(&args).expect("arguments match the algebra");
        for (i, p) in col.into_iter().enumerate() {
            m[(i, c)] = p;
        }
    }
    m
}

/// Engel test, decided through nilpotency of `J(H)` for `H = <X, ..., X>`.
/// The identity `m · M(X, ..., X) = J(H)` is checked on the way.
pub fn is_engel(a: &SymAlgebra) -> bool {
    let j = jacobian(&a.restitute());
    let m = multiplication_operator(a).scale(&int(a.arity() as i64));
    assert_eq!(m, j, "m·M(X,...,X) must equal the Jacobian of the restitution");
    j.is_nilpotent().expect("Jacobian is square")
}

/// `h_i` depends only on `x_1, ..., x_{i-1}`.
pub fn is_strongly_triangular(h: &PolyMap) -> bool {
    h.components()
        .iter()
        .enumerate()
        .all(|(i, p)| (i..h.dim()).all(|v| !p.uses_var(v)))
}

/// Finds `α` with `α H α^{-1}` strongly triangular, `H` being the
/// restitution of a nilpotent algebra. The new basis lists complements of
/// the upper series from the top down, so deeper annihilator layers get the
/// larger variable indices; `α` maps that basis to the standard one.
pub fn triangulate(a: &SymAlgebra) -> Result<QMatrix> {
    let upper = upper_series(a);
    if !upper.verdict {
        return Err(Error::NotNilpotent);
    }
    let n = a.dim();
    let mut basis: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for w in upper.chain.windows(2).rev() {
        let (lower, higher) = (&w[0], &w[1]);
        let mut acc = lower.clone();
        for v in higher.basis_vectors() {
            if !acc.contains(&v) {
                acc = acc.join(&Subspace::span(n, vec![v.clone()])?)?;
                basis.push(v);
            }
        }
    }
    // columns of `frame` are the new basis vectors
    let frame = QMatrix::from_rows_with_cols(basis, n)?.transpose();
    let alpha = frame.inverse()?;
    debug_assert!(is_strongly_triangular(&crate::polarize::conjugate_map(
        &alpha,
        &a.restitute()
    )?));
    Ok(alpha)
}

/// Linear independence of `h_1, ..., h_n` over the ground field.
pub fn components_linearly_independent(h: &PolyMap) -> bool {
    let monos: BTreeSet<&Monomial> =
        h.components().iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
    let monos: Vec<&Monomial> = monos.into_iter().collect();
    if monos.len() < h.dim() {
        return false;
    }
    let rows = h
        .components()
        .iter()
        .map(|p| monos.iter().map(|m| p.coefficient(m)).collect())
        .collect();
    QMatrix::from_rows_with_cols(rows, monos.len()).expect("rows have equal length").rank() == h.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarize::polarize;

    fn var(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn suttles() -> SymAlgebra {
        let v = |i| var(5, i);
        let (x, y, z, s, t) = (v(0), v(1), v(2), v(3), v(4));
        polarize(
            &PolyMap::new(vec![
                &y * &s,
                &(&x * &t) - &(&z * &s),
                &y * &t,
                Polynomial::zero(5),
                Polynomial::zero(5),
            ])
            .unwrap(),
        )
        .unwrap()
    }

    fn y_squared() -> SymAlgebra {
        let y = var(2, 1);
        polarize(&PolyMap::new(vec![&y * &y, Polynomial::zero(2)]).unwrap()).unwrap()
    }

    fn span(n: usize, idx: &[usize]) -> Subspace {
        Subspace::span(n, idx.iter().map(|&i| unit(n, i)).collect()).unwrap()
    }

    #[test]
    fn product_spans() {
        let a = suttles();
        let full = Subspace::full(5);
        assert_eq!(product_span(&a, &[&full, &full]).unwrap(), span(5, &[0, 1, 2]));
        let z = Subspace::zero(5);
        assert!(product_span(&a, &[&full, &z]).unwrap().is_zero());
        let u = span(5, &[0, 1, 2]);
        assert!(product_span(&a, &[&u, &u]).unwrap().is_zero());
        assert!(product_span(&a, &[&full]).is_err());
    }

    #[test]
    fn derived_series_examples() {
        let d = derived_series(&suttles());
        assert_eq!(d.dims(), vec![5, 3, 0]);
        assert!(d.verdict);
        assert_eq!(d.length, 2);
        let d = derived_series(&SymAlgebra::zero(3, 2).unwrap());
        assert_eq!(d.dims(), vec![3, 0]);
        assert!(d.verdict);
    }

    #[test]
    fn annihilators() {
        assert!(annihilator(&suttles()).is_zero());
        assert!(annihilator(&SymAlgebra::zero(4, 3).unwrap()).is_full());
        assert_eq!(annihilator(&y_squared()), span(2, &[0]));
    }

    #[test]
    fn quotients() {
        let a = suttles();
        let q = quotient(&a, &Subspace::zero(5)).unwrap();
        assert_eq!(q.tensor(), a.tensor());
        let q = quotient(&a, &Subspace::full(5)).unwrap();
        assert_eq!(q.dim(), 0);
        let q = quotient(&y_squared(), &span(2, &[0])).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(q.tensor().is_empty());
        // span{e2} is not an ideal of the y^2 algebra: e2·e2 = e1
        assert_eq!(quotient(&y_squared(), &span(2, &[1])), Err(Error::NotAnIdeal));
    }

    #[test]
    fn upper_series_examples() {
        let u = upper_series(&suttles());
        assert_eq!(u.dims(), vec![0]);
        assert!(!u.verdict);
        let u = upper_series(&SymAlgebra::zero(3, 2).unwrap());
        assert_eq!(u.dims(), vec![0, 3]);
        assert!(u.verdict);
        assert_eq!(u.length, 1);
        let u = upper_series(&y_squared());
        assert_eq!(u.dims(), vec![0, 1, 2]);
        assert_eq!(u.chain[1], span(2, &[0]));
        assert!(u.verdict);
        assert_eq!(u.length, 2);
    }

    #[test]
    fn engel_examples() {
        assert!(is_engel(&suttles()));
        let x = var(2, 0);
        let a = polarize(&PolyMap::new(vec![&x * &x, Polynomial::zero(2)]).unwrap()).unwrap();
        assert!(!is_engel(&a));
    }

    #[test]
    fn strong_triangularity() {
        let (x, y) = (var(3, 0), var(3, 1));
        let h = PolyMap::new(vec![Polynomial::zero(3), &x * &x, &(&x * &y) + &(&x * &x)]).unwrap();
        assert!(is_strongly_triangular(&h));
        let y2 = var(2, 1);
        assert!(!is_strongly_triangular(
            &PolyMap::new(vec![&y2 * &y2, Polynomial::zero(2)]).unwrap()
        ));
        assert!(!is_strongly_triangular(&suttles().restitute()));
    }

    #[test]
    fn triangulation() {
        let swap =
            QMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(triangulate(&y_squared()).unwrap(), swap);
        assert_eq!(triangulate(&SymAlgebra::zero(3, 2).unwrap()).unwrap(), QMatrix::identity(3));
        assert_eq!(triangulate(&suttles()), Err(Error::NotNilpotent));
    }

    #[test]
    fn linear_independence() {
        assert!(!components_linearly_independent(&suttles().restitute()));
        let (x, y) = (var(2, 0), var(2, 1));
        let h = PolyMap::new(vec![&x * &x, &y * &y]).unwrap();
        assert!(components_linearly_independent(&h));
        let h = PolyMap::new(vec![&x * &y, (&x * &y).scale(&int(3))]).unwrap();
        assert!(!components_linearly_independent(&h));
    }
}
