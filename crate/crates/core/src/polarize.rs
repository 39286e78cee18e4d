//! The correspondence between homogeneous maps and symmetric algebras.
//!
//! [`polarize`] turns a homogeneous map of degree `m` into the structure
//! constants of its symmetric `m`-ary polarization algebra; [`SymAlgebra::restitute`]
//! goes back by multiplying the generic element `X` with itself.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::poly::{Monomial, PolyMap, Polynomial, Rational};

/// Symmetric structure constants. Each symmetric orbit of input indices is
/// stored once, as its sorted representative; indices are 0-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StructTensor {
    dim: usize,
    arity: usize,
    entries: BTreeMap<(Vec<usize>, usize), Rational>,
}

impl StructTensor {
    pub fn new(dim: usize, arity: usize) -> Result<Self> {
        if arity < 2 {
            return Err(Error::DegreeTooLow(arity as u32));
        }
        Ok(StructTensor { dim, arity, entries: BTreeMap::new() })
    }

    /// Builds a tensor from `(inputs, output, coefficient)` triples. Inputs
    /// may come in any order; two triples naming the same orbit are rejected.
    pub fn from_entries<I>(dim: usize, arity: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, usize, Rational)>,
    {
        let mut t = StructTensor::new(dim, arity)?;
        for (mut input, out, c) in entries {
            if input.len() != arity {
                return Err(Error::LengthMismatch { expected: arity, found: input.len() });
            }
            for &j in input.iter().chain(core::iter::once(&out)) {
                if j >= dim {
                    return Err(Error::IndexOutOfRange { index: j, dim });
                }
            }
            input.sort_unstable();
            let key = (input, out);
            if t.entries.contains_key(&key) {
                return Err(Error::DuplicateEntry);
            }
            if !c.is_zero() {
                t.entries.insert(key, c);
            }
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `(sorted inputs, output, coefficient)` in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], usize, &Rational)> + '_ {
        self.entries.iter().map(|((inp, out), c)| (inp.as_slice(), *out, c))
    }

    /// Coefficient of `e_out` in `<e_{j1}, ..., e_{jm}>`, for any order of
    /// the inputs.
    pub fn get(&self, inputs: &[usize], out: usize) -> Rational {
        let mut key = inputs.to_vec();
        key.sort_unstable();
        self.entries.get(&(key, out)).cloned().unwrap_or_else(Rational::zero)
    }

    fn add(&mut self, inputs: Vec<usize>, out: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (inputs, out);
        let v = self.entries.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.entries.remove(&key);
        }
    }
}

/// A symmetric `m`-ary algebra on `k^n`, given by its structure constants.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymAlgebra {
    tensor: StructTensor,
    label: Option<String>,
}

pub(crate) fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Number of distinct orderings of a sorted multi-index.
pub(crate) fn orbit_size(sorted: &[usize]) -> BigInt {
    let mut denom = BigInt::one();
    let mut run = 0;
    for (k, j) in sorted.iter().enumerate() {
        if k > 0 && sorted[k - 1] == *j {
            run += 1;
        } else {
            run = 1;
        }
        denom *= BigInt::from(run);
    }
    factorial(sorted.len()) / denom
}

/// Advances `v` to the next lexicographic permutation; `false` once the
/// last one has been reached. Repeated values are handled, so starting from
/// a sorted vector this walks every distinct ordering exactly once.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Scalars the tensor contraction can run over.
pub(crate) trait Scalar: Clone {
    fn vanishes(&self) -> bool;
    fn mul_ref(&self, other: &Self) -> Self;
    fn add_scaled(&mut self, other: &Self, c: &Rational);
}

impl Scalar for Rational {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        *self += other * c;
    }
}

impl Scalar for Polynomial {
    fn vanishes(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        Polynomial::add_scaled(self, other, c)
    }
}

fn contract<T: Scalar>(tensor: &StructTensor, args: &[&[T]], zero: &T) -> Vec<T> {
    let mut out = vec![zero.clone(); tensor.dim];
    for ((inputs, target), c) in &tensor.entries {
        let mut perm = inputs.clone();
        loop {
            let mut prod: Option<T> = None;
            let mut vanished = false;
            for (slot, &j) in perm.iter().enumerate() {
                let a = &args[slot][j];
                if a.vanishes() {
                    vanished = true;
                    break;
                }
                prod = Some(match prod {
                    None => a.clone(),
                    Some(p) => p.mul_ref(a),
                });
            }
            if !vanished {
                if let Some(p) = prod {
                    out[*target].add_scaled(&p, c);
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    out
}

impl SymAlgebra {
    pub fn new(tensor: StructTensor) -> Self {
        SymAlgebra { tensor, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The algebra with all products zero.
    pub fn zero(dim: usize, arity: usize) -> Result<Self> {
        Ok(SymAlgebra::new(StructTensor::new(dim, arity)?))
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn tensor(&self) -> &StructTensor {
        &self.tensor
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim
    }

    pub fn arity(&self) -> usize {
        self.tensor.arity
    }

    /// The `n`-tuple `<X, ..., X>` with respect to the standard basis.
    pub fn restitute(&self) -> PolyMap {
        let n = self.dim();
        let mut components = vec![Polynomial::zero(n); n];
        for ((inputs, out), c) in &self.tensor.entries {
            let weight = Rational::from_integer(orbit_size(inputs));
            components[*out].add_term(Monomial::from_multi_index(n, inputs), c * weight);
        }
        PolyMap::new(components).expect("components share the dimension")
    }

    fn check_args<T>(&self, args: &[&[T]]) -> Result<()> {
        if args.len() != self.arity() {
            return Err(Error::LengthMismatch { expected: self.arity(), found: args.len() });
        }
        if let Some(a) = args.iter().find(|a| a.len() != self.dim()) {
            return Err(Error::LengthMismatch { expected: self.dim(), found: a.len() });
        }
        Ok(())
    }

    /// The product `<v_1, ..., v_m>` of rational vectors.
    pub fn multiply(&self, args: &[&[Rational]]) -> Result<Vec<Rational>> {
        self.check_args(args)?;
        Ok(contract(&self.tensor, args, &Rational::zero()))
    }

    /// The product over `k[X] ⊗ A`: vectors of polynomials in any shared
    /// number of variables.
    pub fn multiply_poly(&self, args: &[&[Polynomial]]) -> Result<Vec<Polynomial>> {
        self.check_args(args)?;
        let nvars = args
            .iter()
            .flat_map(|a| a.iter())
            .map(Polynomial::nvars)
            .next()
            .unwrap_or(0);
        if let Some(p) = args.iter().flat_map(|a| a.iter()).find(|p| p.nvars() != nvars) {
            return Err(Error::VariableMismatch { left: nvars, right: p.nvars() });
        }
        Ok(contract(&self.tensor, args, &Polynomial::zero(nvars)))
    }

    /// Same algebra written in the basis `α^{-1} e_i`: the tensor of
    /// `α ∘ H ∘ α^{-1}`.
    pub fn change_basis(&self, alpha: &QMatrix) -> Result<SymAlgebra> {
        let g = conjugate_map(alpha, &self.restitute())?;
        polarize_with_arity(&g, self.arity())
    }
}

fn arity_of(h: &PolyMap) -> Result<usize> {
    Ok(h.require_homogeneous()?.unwrap_or(2) as usize)
}

/// Polarization of a homogeneous map of degree `m ≥ 2` by coefficient
/// extraction: the coefficient `c` of `x^α` in `h_i` becomes
/// `Γ^i_{J(α)} = c / multinomial(α)`. The zero map gets arity 2.
pub fn polarize(h: &PolyMap) -> Result<SymAlgebra> {
    polarize_with_arity(h, arity_of(h)?)
}

/// As [`polarize`], with the arity fixed by the caller (needed for the zero
/// map, which is homogeneous of every degree).
pub fn polarize_with_arity(h: &PolyMap, arity: usize) -> Result<SymAlgebra> {
    match h.require_homogeneous()? {
        Some(d) if d as usize != arity => return Err(Error::ShapeMismatch),
        _ => {}
    }
    let n = h.dim();
    let mut tensor = StructTensor::new(n, arity)?;
    for (i, hi) in h.components().iter().enumerate() {
        for (mono, c) in hi.terms() {
            let index = mono.to_multi_index();
            let weight = Rational::from_integer(orbit_size(&index));
            tensor.add(index, i, c / weight);
        }
    }
    Ok(SymAlgebra::new(tensor))
}

/// Polarization by the inclusion-exclusion formula
/// `<X_1..X_m> = 1/m! Σ_{μ ⊆ [m]} (-1)^{m-|μ|} H(Σ_{i∈μ} X_i)`,
/// computed symbolically in `m·n` variables. Exponential in `m`; kept as an
/// independent check on [`polarize`].
pub fn polarize_by_subsets(h: &PolyMap) -> Result<SymAlgebra> {
    let m = arity_of(h)?;
    let n = h.dim();
    let nv = m * n;
    let mut form = vec![Polynomial::zero(nv); n];
    for mask in 1u32..(1 << m) {
        let size = mask.count_ones() as usize;
        let subs: Vec<Polynomial> = (0..n)
            .map(|j| {
                let mut p = Polynomial::zero(nv);
                for slot in 0..m {
                    if mask & (1 << slot) != 0 {
                        p = &p + &Polynomial::var(nv, slot * n + j);
                    }
                }
                p
            })
            .collect();
        let sign = if (m - size).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        for (i, hi) in h.components().iter().enumerate() {
            let value = hi.substitute(&subs)?;
            form[i].add_scaled(&value, &sign);
        }
    }
    let norm = Rational::from_integer(factorial(m)).recip();
    let mut tensor = StructTensor::new(n, m)?;
    // Γ^i_J is the coefficient of x_{1,j1} x_{2,j2} ... x_{m,jm}.
    let mut index = vec![0usize; m];
    loop {
        let mut exps = vec![0u32; nv];
        for (slot, &j) in index.iter().enumerate() {
            exps[slot * n + j] = 1;
        }
        let mono = Monomial::new(exps);
        for (i, f) in form.iter().enumerate() {
            tensor.add(index.clone(), i, f.coefficient(&mono) * &norm);
        }
        if !next_multiset(&mut index, n) {
            break;
        }
    }
    Ok(SymAlgebra::new(tensor))
}

/// Steps through sorted multi-indices of fixed length over `0..n`.
pub(crate) fn next_multiset(index: &mut [usize], n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let mut k = index.len();
    while k > 0 {
        k -= 1;
        if index[k] + 1 < n {
            let v = index[k] + 1;
            for slot in &mut index[k..] {
                *slot = v;
            }
            return true;
        }
    }
    false
}

/// `α ∘ H ∘ α^{-1}`.
pub fn conjugate_map(alpha: &QMatrix, h: &PolyMap) -> Result<PolyMap> {
    if alpha.rows() != h.dim() || alpha.cols() != h.dim() {
        return Err(Error::LengthMismatch { expected: h.dim(), found: alpha.rows() });
    }
    let inv = alpha.inverse()?;
    let inner = h.compose(&inv.to_linear_map()?)?;
    alpha.to_linear_map()?.compose(&inner)
}

/// Checks `φ ∘ H_A = H_B ∘ φ` as a polynomial identity, which holds exactly
/// when `φ` is an algebra homomorphism `A → B`.
pub fn verify_homomorphism(a: &SymAlgebra, b: &SymAlgebra, phi: &QMatrix) -> Result<bool> {
    if a.arity() != b.arity() || a.dim() != b.dim() {
        return Err(Error::ShapeMismatch);
    }
    if phi.rows() != a.dim() || phi.cols() != a.dim() {
        return Err(Error::ShapeMismatch);
    }
    let lin = phi.to_linear_map()?;
    let lhs = lin.compose(&a.restitute())?;
    let rhs = b.restitute().compose(&lin)?;
    Ok(lhs == rhs)
}

/// Whether `α` lies in the stabilizer `{α : α H α^{-1} = H}`.
pub fn stabilizer_check(alpha: &QMatrix, h: &PolyMap) -> Result<bool> {
    let fixed = conjugate_map(alpha, h)? == *h;
    debug_assert!(!fixed || {
        let a = polarize(h)?;
        verify_homomorphism(&a, &a, alpha)?
    });
    Ok(fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn var(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn suttles() -> PolyMap {
        let v = |i| var(5, i);
        let (x, y, z, s, t) = (v(0), v(1), v(2), v(3), v(4));
        PolyMap::new(vec![
            &y * &s,
            &(&x * &t) - &(&z * &s),
            &y * &t,
            Polynomial::zero(5),
            Polynomial::zero(5),
        ])
        .unwrap()
    }

    fn ternary() -> PolyMap {
        // ((ys - xt)s, (ys - xt)t, 0, 0) over x y s t
        let v = |i| var(4, i);
        let (x, y, s, t) = (v(0), v(1), v(2), v(3));
        let d = &(&y * &s) - &(&x * &t);
        PolyMap::new(vec![&d * &s, &d * &t, Polynomial::zero(4), Polynomial::zero(4)]).unwrap()
    }

    fn entries(a: &SymAlgebra) -> Vec<(Vec<usize>, usize, Rational)> {
        a.tensor().entries().map(|(i, o, c)| (i.to_vec(), o, c.clone())).collect()
    }

    #[test]
    fn suttles_products() {
        let a = polarize(&suttles()).unwrap();
        let mut got = entries(&a);
        got.sort();
        let mut want = vec![
            (vec![1, 3], 0, rat(1, 2)),
            (vec![0, 4], 1, rat(1, 2)),
            (vec![2, 3], 1, rat(-1, 2)),
            (vec![1, 4], 2, rat(1, 2)),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(a, polarize_by_subsets(&suttles()).unwrap());
    }

    #[test]
    fn ternary_products() {
        let a = polarize(&ternary()).unwrap();
        let mut got = entries(&a);
        got.sort();
        let mut want = vec![
            (vec![1, 2, 2], 0, rat(1, 3)),
            (vec![0, 2, 3], 0, rat(-1, 6)),
            (vec![1, 2, 3], 1, rat(1, 6)),
            (vec![0, 3, 3], 1, rat(-1, 3)),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(a, polarize_by_subsets(&ternary()).unwrap());
    }

    #[test]
    fn zero_map_and_errors() {
        assert!(polarize(&PolyMap::zero(3)).unwrap().tensor().is_empty());
        assert_eq!(polarize(&PolyMap::identity(2)), Err(Error::DegreeTooLow(1)));
        let x = var(1, 0);
        let mixed = PolyMap::new(vec![&(&x * &x) + &x]).unwrap();
        assert_eq!(polarize(&mixed), Err(Error::NotHomogeneous));
    }

    #[test]
    fn restitution() {
        assert_eq!(polarize(&suttles()).unwrap().restitute(), suttles());
        assert_eq!(SymAlgebra::zero(3, 2).unwrap().restitute(), PolyMap::zero(3));
        let t = StructTensor::from_entries(2, 2, vec![(vec![1, 1], 0, int(1))]).unwrap();
        let y = var(2, 1);
        let expected = PolyMap::new(vec![&y * &y, Polynomial::zero(2)]).unwrap();
        assert_eq!(SymAlgebra::new(t).restitute(), expected);
    }

    #[test]
    fn tensor_validation() {
        assert_eq!(
            StructTensor::from_entries(2, 2, vec![(vec![0, 2], 0, int(1))]),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        );
        assert_eq!(
            StructTensor::from_entries(2, 2, vec![(vec![0, 1], 0, int(1)), (vec![1, 0], 0, int(2))]),
            Err(Error::DuplicateEntry)
        );
        let t = StructTensor::from_entries(2, 2, vec![(vec![1, 0], 1, int(3))]).unwrap();
        assert_eq!(t.get(&[0, 1], 1), int(3));
        assert_eq!(t.get(&[1, 0], 1), int(3));
    }

    fn e(n: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![int(0); n];
        v[i] = int(1);
        v
    }

    #[test]
    fn rational_products() {
        let a = polarize(&suttles()).unwrap();
        let mut half_e1 = vec![int(0); 5];
        half_e1[0] = rat(1, 2);
        assert_eq!(a.multiply(&[&e(5, 1), &e(5, 3)]).unwrap(), half_e1);
        assert_eq!(a.multiply(&[&e(5, 3), &e(5, 1)]).unwrap(), half_e1);
        let zero = vec![int(0); 5];
        assert_eq!(a.multiply(&[&e(5, 1), &zero]).unwrap(), zero);
        let ones = vec![int(1); 5];
        assert_eq!(
            a.multiply(&[&ones, &ones]).unwrap(),
            vec![int(1), int(0), int(1), int(0), int(0)]
        );
        assert!(a.multiply(&[&ones]).is_err());
        assert!(a.multiply(&[&ones, &ones[..4]]).is_err());
    }

    #[test]
    fn polynomial_products() {
        let h = suttles();
        let a = polarize(&h).unwrap();
        let x = PolyMap::identity(5).into_components();
        assert_eq!(a.multiply_poly(&[&x, &x]).unwrap(), h.components().to_vec());
        let zero = vec![Polynomial::zero(5); 5];
        assert_eq!(a.multiply_poly(&[&x, &zero]).unwrap(), zero);

        let t = ternary();
        let b = polarize(&t).unwrap();
        let x4 = PolyMap::identity(4).into_components();
        let hx = b.multiply_poly(&[t.components(), &x4, &x4]).unwrap();
        assert!(hx.iter().all(Polynomial::is_zero));
    }

    #[test]
    fn conjugation() {
        let y = var(2, 1);
        let x = var(2, 0);
        let h = PolyMap::new(vec![&y * &y, Polynomial::zero(2)]).unwrap();
        assert_eq!(conjugate_map(&QMatrix::identity(2), &h).unwrap(), h);
        let swap = QMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let g = conjugate_map(&swap, &h).unwrap();
        assert_eq!(g, PolyMap::new(vec![Polynomial::zero(2), &x * &x]).unwrap());
        let singular = QMatrix::from_rows(vec![vec![int(1), int(1)], vec![int(1), int(1)]]).unwrap();
        assert_eq!(conjugate_map(&singular, &h), Err(Error::Singular));
    }

    #[test]
    fn homomorphisms() {
        let a = polarize(&suttles()).unwrap();
        assert!(verify_homomorphism(&a, &a, &QMatrix::identity(5)).unwrap());
        let d = QMatrix::diagonal(&[int(1), int(1), int(1), int(1), int(2)]);
        assert!(!verify_homomorphism(&a, &a, &d).unwrap());

        let alpha = QMatrix::from_rows(vec![
            vec![int(1), int(2), int(0), int(0), int(0)],
            vec![int(0), int(1), int(0), int(0), int(1)],
            vec![int(0), int(0), int(1), int(0), int(0)],
            vec![int(3), int(0), int(0), int(1), int(0)],
            vec![int(0), int(0), int(0), int(0), int(1)],
        ])
        .unwrap();
        let b = polarize(&conjugate_map(&alpha, &suttles()).unwrap()).unwrap();
        assert!(verify_homomorphism(&a, &b, &alpha).unwrap());
        assert_eq!(a.change_basis(&alpha).unwrap(), b);
    }

    #[test]
    fn stabilizer() {
        let y = var(2, 1);
        let h = PolyMap::new(vec![&y * &y, Polynomial::zero(2)]).unwrap();
        assert!(stabilizer_check(&QMatrix::identity(2), &h).unwrap());
        for l in [rat(3, 1), rat(-2, 5), rat(7, 3)] {
            let alpha = QMatrix::diagonal(&[&l * &l, l.clone()]);
            assert!(stabilizer_check(&alpha, &h).unwrap());
        }
        assert!(!stabilizer_check(&QMatrix::diagonal(&[int(1), int(2)]), &h).unwrap());
    }

    #[test]
    fn permutations_and_multisets() {
        let mut v = vec![0, 0, 1];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(orbit_size(&[0, 0, 1]), BigInt::from(3));
        assert_eq!(orbit_size(&[0, 1, 2]), BigInt::from(6));

        let mut idx = vec![0, 0];
        let mut count = 1;
        while next_multiset(&mut idx, 3) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
