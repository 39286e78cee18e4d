//! Dense matrices over the rationals and over the polynomial ring.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{int, PolyMap, Polynomial, Rational};

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(QMatrix { rows: nrows, cols, data })
    }

    /// Builds a matrix with an explicit column count, so that empty row
    /// lists keep their shape.
    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(QMatrix { rows: nrows, cols, data })
    }

    /// Square matrix with the given diagonal.
    pub fn diagonal(diag: &[Rational]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn rref(&self) -> Rref {
        rref(self)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let r = rref(&aug);
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r.matrix[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// The linear map `v ↦ self · v` as a polynomial map (square only).
    pub fn to_linear_map(&self) -> Result<PolyMap> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let components = (0..n)
            .map(|i| {
                let mut p = Polynomial::zero(n);
                for j in 0..n {
                    p.add_scaled(&Polynomial::var(n, j), &self[(i, j)]);
                }
                p
            })
            .collect();
        PolyMap::new(components)
    }
}

impl core::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: QMatrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form. Pivots are taken left to right; within a
/// column the first row with a nonzero entry is used.
pub fn rref(m: &QMatrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, row * a.cols + j);
            }
        }
        let inv = a[(row, col)].recip();
        for j in col..a.cols {
            let v = &a[(row, j)] * &inv;
            a[(row, j)] = v;
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for j in col..a.cols {
                if a[(row, j)].is_zero() {
                    continue;
                }
                let v = &a[(row, j)] * &factor;
                a[(r, j)] -= v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref { matrix: a, rank: pivots.len(), pivots }
}

/// Row-major matrix of polynomials sharing one variable count.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, data: vec![Polynomial::zero(nvars); rows * cols] }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            m[(i, i)] = Polynomial::one(nvars);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>, nvars: usize) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, found: row.len() });
            }
            for p in row {
                if p.nvars() != nvars {
                    return Err(Error::VariableMismatch { left: nvars, right: p.nvars() });
                }
                data.push(p);
            }
        }
        Ok(PolyMatrix { rows: nrows, cols, nvars, data })
    }

    pub fn from_rational(m: &QMatrix, nvars: usize) -> Self {
        PolyMatrix {
            rows: m.rows,
            cols: m.cols,
            nvars,
            data: m.data.iter().map(|c| Polynomial::constant(nvars, c.clone())).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }

    fn require_square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, found: other.rows });
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch { left: self.nvars, right: other.nvars });
        }
        let mut out = PolyMatrix::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] = &out[(i, j)] + &prod;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch);
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { data, ..*self })
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        PolyMatrix { data: self.data.iter().map(|p| p.scale(c)).collect(), ..*self }
    }

    pub fn trace(&self) -> Result<Polynomial> {
        let n = self.require_square()?;
        let mut t = Polynomial::zero(self.nvars);
        for i in 0..n {
            t = &t + &self[(i, i)];
        }
        Ok(t)
    }

    /// Substitutes the same polynomials into every entry.
    pub fn substitute(&self, subs: &[Polynomial]) -> Result<PolyMatrix> {
        let nvars = subs.first().map_or(0, Polynomial::nvars);
        let mut cache = crate::poly::PowerCache::new(subs, self.nvars)?;
        let data = self.data.iter().map(|p| cache.substitute(p)).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, nvars, data })
    }

    /// Coefficients of `det(λI - M)`, from `λ^n` down to `λ^0`, by the
    /// Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Result<Vec<Polynomial>> {
        let n = self.require_square()?;
        // coeffs[k] is the coefficient of λ^(n-k)
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(Polynomial::one(self.nvars));
        let mut aux = PolyMatrix::zeros(n, n, self.nvars);
        for k in 1..=n {
            // aux_k = M aux_{k-1} + c_{k-1} I
            let mut next = self.mul(&aux)?;
            for i in 0..n {
                next[(i, i)] = &next[(i, i)] + &coeffs[k - 1];
            }
            aux = next;
            let t = self.mul(&aux)?.trace()?;
            coeffs.push(t.scale(&-int(k as i64).recip()));
        }
        Ok(coeffs)
    }

    /// Nilpotency via vanishing of every non-leading characteristic
    /// polynomial coefficient.
    pub fn is_nilpotent(&self) -> Result<bool> {
        let coeffs = self.char_poly()?;
        let verdict = coeffs.iter().skip(1).all(Polynomial::is_zero);
        debug_assert_eq!(Ok(verdict), self.is_nilpotent_by_power());
        Ok(verdict)
    }

    /// Nilpotency via `M^n = 0`.
    pub fn is_nilpotent_by_power(&self) -> Result<bool> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(true);
        }
        let mut p = self.clone();
        for _ in 1..n {
            if p.is_zero() {
                return Ok(true);
            }
            p = p.mul(self)?;
        }
        Ok(p.is_zero())
    }

    /// Determinant by fraction-free (Bareiss) elimination with exact
    /// polynomial division.
    pub fn determinant(&self) -> Result<Polynomial> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(Polynomial::one(self.nvars));
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = Polynomial::one(self.nvars);
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        for j in 0..n {
                            a.data.swap(k * n + j, r * n + j);
                        }
                        sign = !sign;
                    }
                    None => return Ok(Polynomial::zero(self.nvars)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[(k, k)] * &a[(i, j)]) - &(&a[(i, k)] * &a[(k, j)]);
                    a[(i, j)] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[(i, k)] = Polynomial::zero(self.nvars);
            }
            prev = a[(k, k)].clone();
        }
        let det = a[(n - 1, n - 1)].clone();
        Ok(if sign { -&det } else { det })
    }
}

impl core::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = Polynomial;
    fn index(&self, (i, j): (usize, usize)) -> &Polynomial {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Polynomial {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// `J(H)`, entry `(i, j)` being `∂h_i/∂x_j`.
pub fn jacobian(h: &PolyMap) -> PolyMatrix {
    let n = h.dim();
    let mut m = PolyMatrix::zeros(n, n, n);
    for (i, hi) in h.components().iter().enumerate() {
        for j in 0..n {
            m[(i, j)] = hi.derivative(j);
        }
    }
    m
}

/// Keller test for a homogeneous map: `det(I - J(H)) = 1`.
pub fn is_keller(h: &PolyMap) -> Result<bool> {
    h.require_homogeneous()?;
    let n = h.dim();
    let det = PolyMatrix::identity(n, n).sub(&jacobian(h))?.determinant()?;
    Ok(det == Polynomial::one(n))
}

/// `det(I - J(H))` for any map.
pub fn jacobian_determinant_of_identity_minus(h: &PolyMap) -> Polynomial {
    let n = h.dim();
    PolyMatrix::identity(n, n)
        .sub(&jacobian(h))
        .and_then(|m| m.determinant())
        .expect("square matrix")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    fn suttles() -> PolyMap {
        let v = |i| Polynomial::var(5, i);
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

    #[test]
    fn rref_examples() {
        let id = QMatrix::identity(3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let r = q(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.matrix, q(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);

        // coefficient vectors of the four nonzero Suttles products
        let h = rat(1, 2);
        let z = int(0);
        let rows = vec![
            vec![h.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), h.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), -h.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), h.clone(), z.clone(), z.clone()],
        ];
        assert_eq!(QMatrix::from_rows(rows).unwrap().rank(), 3);
    }

    #[test]
    fn inverse_and_singular() {
        let m = q(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), QMatrix::identity(2));
        assert_eq!(q(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn suttles_jacobian() {
        let j = jacobian(&suttles());
        let v = |i| Polynomial::var(5, i);
        let z = Polynomial::zero(5);
        let (x, y, zz, s, t) = (v(0), v(1), v(2), v(3), v(4));
        assert_eq!(j.row(0), &[z.clone(), s.clone(), z.clone(), y.clone(), z.clone()]);
        assert_eq!(j.row(1), &[t.clone(), z.clone(), -&s, -&zz, x.clone()]);
        assert_eq!(j.row(2), &[z.clone(), t.clone(), z.clone(), z.clone(), y.clone()]);
        assert!(j.row(3).iter().chain(j.row(4)).all(Polynomial::is_zero));
        assert!(jacobian(&PolyMap::zero(3)).is_zero());
        assert_eq!(jacobian(&PolyMap::identity(3)), PolyMatrix::identity(3, 3));
    }

    #[test]
    fn char_poly_examples() {
        let zero = PolyMatrix::zeros(3, 3, 2);
        let c = zero.char_poly().unwrap();
        assert_eq!(c[0], Polynomial::one(2));
        assert!(c[1..].iter().all(Polynomial::is_zero));

        let y = Polynomial::var(2, 1);
        let m = PolyMatrix::from_rows(
            vec![vec![Polynomial::zero(2), y.scale(&int(2))], vec![Polynomial::zero(2); 2]],
            2,
        )
        .unwrap();
        let c = m.char_poly().unwrap();
        assert_eq!(c, vec![Polynomial::one(2), Polynomial::zero(2), Polynomial::zero(2)]);

        let c = PolyMatrix::identity(2, 1).char_poly().unwrap();
        let k = |v| Polynomial::constant(1, int(v));
        assert_eq!(c, vec![k(1), k(-2), k(1)]);

        assert_eq!(
            PolyMatrix::zeros(2, 3, 1).char_poly(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn nilpotency_examples() {
        let j = jacobian(&suttles());
        assert!(j.is_nilpotent().unwrap());
        assert!(j.is_nilpotent_by_power().unwrap());

        let x = Polynomial::var(2, 0);
        let h = PolyMap::new(vec![&x * &x, Polynomial::zero(2)]).unwrap();
        assert!(!jacobian(&h).is_nilpotent().unwrap());
        assert!(PolyMatrix::zeros(4, 4, 4).is_nilpotent().unwrap());
    }

    #[test]
    fn keller_examples() {
        assert!(is_keller(&suttles()).unwrap());
        let x = Polynomial::var(2, 0);
        let h = PolyMap::new(vec![&x * &x, Polynomial::zero(2)]).unwrap();
        assert!(!is_keller(&h).unwrap());
        // det(I - J) = 1 - 2x
        let expected = &Polynomial::one(2) - &x.scale(&int(2));
        assert_eq!(jacobian_determinant_of_identity_minus(&h), expected);
        assert!(is_keller(&PolyMap::zero(3)).unwrap());
        let lin = PolyMap::identity(2);
        assert_eq!(is_keller(&lin), Err(Error::DegreeTooLow(1)));
        let mixed = PolyMap::new(vec![&x * &x + &x, Polynomial::zero(2)]).unwrap();
        assert_eq!(is_keller(&mixed), Err(Error::NotHomogeneous));
    }

    #[test]
    fn bareiss_matches_expansion() {
        let v = |i| Polynomial::var(3, i);
        let m = PolyMatrix::from_rows(
            vec![
                vec![v(0), v(1), Polynomial::one(3)],
                vec![v(2), Polynomial::zero(3), v(0)],
                vec![Polynomial::one(3), v(1), v(2)],
            ],
            3,
        )
        .unwrap();
        // cofactor expansion along the first row
        let det = &(&(&v(0) * &(&(&Polynomial::zero(3) * &v(2)) - &(&v(0) * &v(1))))
            - &(&v(1) * &(&(&v(2) * &v(2)) - &v(0))))
            + &(&(&v(2) * &v(1)) - &Polynomial::zero(3));
        assert_eq!(m.determinant().unwrap(), det);
    }
}
