#![allow(dead_code)]

use polaris_core::{int, Monomial, PolyMap, Polynomial, QMatrix, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    let v = rng.gen_range(1..=3);
    int(if rng.gen_bool(0.5) { v } else { -v })
}

/// Random monomial of degree `m` in the variables `0..vars` of `k^n`.
fn random_monomial(rng: &mut ChaCha8Rng, n: usize, vars: usize, m: u32) -> Monomial {
    let mut exps = vec![0; n];
    for _ in 0..m {
        exps[rng.gen_range(0..vars)] += 1;
    }
    Monomial::new(exps)
}

/// Sparse homogeneous map of degree `m`: each component gets up to
/// `max_terms` terms, some components may be zero.
pub fn random_homogeneous(rng: &mut ChaCha8Rng, n: usize, m: u32, max_terms: usize) -> PolyMap {
    let comps = (0..n)
        .map(|_| {
            let mut p = Polynomial::zero(n);
            for _ in 0..rng.gen_range(0..=max_terms) {
                p.add_term(random_monomial(rng, n, n, m), small_nonzero(rng));
            }
            p
        })
        .collect();
    PolyMap::new(comps).unwrap()
}

/// Component `i` only uses variables with index below `i`, so the Jacobian
/// is strictly lower triangular.
pub fn random_strongly_triangular(rng: &mut ChaCha8Rng, n: usize, m: u32, max_terms: usize) -> PolyMap {
    let comps = (0..n)
        .map(|i| {
            let mut p = Polynomial::zero(n);
            if i == 0 {
                return p;
            }
            for _ in 0..rng.gen_range(0..=max_terms) {
                p.add_term(random_monomial(rng, n, i, m), small_nonzero(rng));
            }
            p
        })
        .collect();
    PolyMap::new(comps).unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect())
            .collect();
        let a = QMatrix::from_rows(rows).unwrap();
        if a.rank() == n {
            return a;
        }
    }
}

/// A Keller map with nilpotent Jacobian that is usually not triangular in
/// the standard basis.
pub fn random_engel(rng: &mut ChaCha8Rng, n: usize, m: u32, max_terms: usize) -> PolyMap {
    let h = random_strongly_triangular(rng, n, m, max_terms);
    let alpha = random_invertible(rng, n);
    polaris_core::polarize::conjugate_map(&alpha, &h).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(-4..=4))).collect()
}

pub fn var(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

pub fn suttles() -> PolyMap {
    let v = |i| var(5, i);
    let (x, y, z, s, t) = (v(0), v(1), v(2), v(3), v(4));
    PolyMap::new(vec![&y * &s, &(&x * &t) - &(&z * &s), &y * &t, Polynomial::zero(5), Polynomial::zero(5)]).unwrap()
}

/// `((ys - xt)s, (ys - xt)t, 0, 0)` in `x y s t`.
pub fn ternary() -> PolyMap {
    let v = |i| var(4, i);
    let (x, y, s, t) = (v(0), v(1), v(2), v(3));
    let d = &(&y * &s) - &(&x * &t);
    PolyMap::new(vec![&d * &s, &d * &t, Polynomial::zero(4), Polynomial::zero(4)]).unwrap()
}

pub fn ternary_with_cube() -> PolyMap {
    let t = var(4, 3);
    let mut comps = ternary().into_components();
    comps[2] = -&t.pow(3);
    PolyMap::new(comps).unwrap()
}
