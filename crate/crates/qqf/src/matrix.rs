//! Dense exact-rational matrices: echelon reduction, linear solves, kernels,
//! determinants and characteristic polynomials. Everything is deterministic;
//! pivoting always picks the first nonzero entry in row-major order.

use num_traits::{One, Signed, Zero};

use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(scalar::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    /// In-place reduced row echelon form, returning the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            let Some(pivot_row) = (lead..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(lead, pivot_row);
            let inv = scalar::one() / self.get(lead, col).clone();
            for c in col..self.cols {
                let v = self.get(lead, c) * &inv;
                self.set(lead, c, v);
            }
            for r in 0..self.rows {
                if r != lead && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for c in col..self.cols {
                        let v = self.get(r, c) - &factor * self.get(lead, c);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == self.rows {
                break;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, one vector per free column, in column order;
    /// the free coordinate of each vector is normalized to 1.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![scalar::zero(); self.cols];
            v[free] = scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Unique solution of `self * x = rhs`; `None` if the system is
    /// inconsistent or underdetermined.
    pub fn solve_unique(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solve(rhs, true)
    }

    /// A particular solution of `self * x = rhs` with all free variables set
    /// to zero; `None` if inconsistent.
    pub fn solve_particular(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solve(rhs, false)
    }

    fn solve(&self, rhs: &[Scalar], require_unique: bool) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, rhs.len());
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for (r, v) in rhs.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, v.clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        if require_unique && pivots.len() < self.cols {
            return None;
        }
        let mut x = vec![scalar::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, scalar::one());
        }
        let pivots = aug.rref();
        if pivots.iter().filter(|&&pc| pc < n).count() < n {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return scalar::zero();
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det *= &pivot;
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) / &pivot;
                for c in col..n {
                    let v = m.get(r, c) - &factor * m.get(col, c);
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Coefficients `c[0] + c[1] x + ... + c[n] x^n` of the characteristic
    /// polynomial `det(xI - M)`, by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![scalar::zero(); n + 1];
        coeffs[n] = scalar::one();
        let mut aux = Mat::identity(n);
        for k in 1..=n {
            aux = self.mul(&aux);
            let trace = (0..n).fold(scalar::zero(), |acc, i| acc + aux.get(i, i));
            let c = -trace / scalar::int(k as i64);
            coeffs[n - k] = c.clone();
            for i in 0..n {
                let v = aux.get(i, i) + &c;
                aux.set(i, i, v);
            }
        }
        coeffs
    }
}

/// All rational roots of a polynomial with rational coefficients
/// (`coeffs[k]` multiplies `x^k`), sorted ascending, without multiplicity.
pub fn rational_roots(coeffs: &[Scalar]) -> Vec<Scalar> {
    let mut poly: Vec<Scalar> = coeffs.to_vec();
    while poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    if poly.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    // Strip zero roots.
    if poly[0].is_zero() {
        roots.push(scalar::zero());
        while poly[0].is_zero() && poly.len() > 1 {
            poly.remove(0);
        }
    }
    // Clear denominators to get an integer polynomial.
    let denom_lcm = poly
        .iter()
        .map(|c| c.denom().clone())
        .fold(num_bigint::BigInt::one(), |acc, d| {
            &acc / num_integer_gcd(&acc, &d) * d
        });
    let ints: Vec<num_bigint::BigInt> = poly
        .iter()
        .map(|c| {
            (c * Scalar::from_integer(denom_lcm.clone()))
                .numer()
                .clone()
        })
        .collect();
    let lead = ints.last().unwrap().abs();
    let constant = ints.first().unwrap().abs();
    for p in divisors(&constant) {
        for q in divisors(&lead) {
            for sign in [1i64, -1] {
                let cand = Scalar::new(&p * num_bigint::BigInt::from(sign), q.clone());
                if roots.contains(&cand) {
                    continue;
                }
                let val = poly
                    .iter()
                    .rev()
                    .fold(scalar::zero(), |acc, c| acc * &cand + c);
                if val.is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn num_integer_gcd(a: &num_bigint::BigInt, b: &num_bigint::BigInt) -> num_bigint::BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![num_bigint::BigInt::one()];
    }
    let mut divs = Vec::new();
    let mut d = num_bigint::BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            divs.push(d.clone());
            divs.push(&n / &d);
        }
        d += 1;
    }
    divs.sort();
    divs.dedup();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn rref_and_kernel() {
        let m = Mat::from_rows(vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
        ]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(num_traits::Zero::is_zero));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = Mat::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(1)]]);
        let x = m.solve_unique(&[int(3), int(2)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert_eq!(m.det(), int(1));

        let singular = Mat::from_rows(vec![vec![int(1), int(1)], vec![int(1), int(1)]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve_unique(&[int(1), int(0)]).is_none());
    }

    #[test]
    fn char_poly_and_roots() {
        // diag(1/2, -2): char poly (x - 1/2)(x + 2) = x^2 + 3/2 x - 1
        let m = Mat::from_rows(vec![vec![frac(1, 2), int(0)], vec![int(0), int(-2)]]);
        let p = m.char_poly();
        assert_eq!(p, vec![int(-1), frac(3, 2), int(1)]);
        assert_eq!(rational_roots(&p), vec![int(-2), frac(1, 2)]);
        // x^2 + 1 has no rational roots
        assert_eq!(
            rational_roots(&[int(1), int(0), int(1)]),
            Vec::<Scalar>::new()
        );
    }

    #[test]
    fn particular_solution_sets_free_vars_to_zero() {
        let m = Mat::from_rows(vec![vec![int(1), int(1)]]);
        let x = m.solve_particular(&[int(5)]).unwrap();
        assert_eq!(x, vec![int(5), int(0)]);
        assert!(m.solve_unique(&[int(5)]).is_none());
    }
}
