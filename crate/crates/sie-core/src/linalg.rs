//! Dense complex linear algebra at desk scale: LU with partial pivoting,
//! solves, explicit inverse, and a one-norm condition estimate.

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Cx::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Cx<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        let mut worst = T::zero();
        for c in 0..self.cols {
            let mut s = T::zero();
            for r in 0..self.rows {
                s = s + self[(r, c)].norm();
            }
            if s > worst {
                worst = s;
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul_vec(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Cx::new(T::zero(), T::zero()); self.rows];
        for r in 0..self.rows {
            let mut acc = Cx::new(T::zero(), T::zero());
            for c in 0..self.cols {
                acc = acc + self[(r, c)] * x[c];
            }
            y[r] = acc;
        }
        y
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Cx<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Cx<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[r * self.cols + c]
    }
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu<T: Real> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn factor(m: &CMatrix<T>) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::InvalidParameter(format!(
                "LU needs a square matrix, got {}x{}",
                m.rows, m.cols
            )));
        }
        let n = m.rows;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut best = col;
            let mut best_mag = lu[(col, col)].norm_sqr();
            for r in (col + 1)..n {
                let mag = lu[(r, col)].norm_sqr();
                if mag > best_mag {
                    best = r;
                    best_mag = mag;
                }
            }
            if !(best_mag > T::zero()) {
                return Err(Error::InterpolationSingular(format!(
                    "zero pivot at column {col}"
                )));
            }
            if best != col {
                for c in 0..n {
                    let tmp = lu[(col, c)];
                    lu[(col, c)] = lu[(best, c)];
                    lu[(best, c)] = tmp;
                }
                perm.swap(col, best);
            }
            let piv = lu[(col, col)];
            for r in (col + 1)..n {
                let factor = lu[(r, col)] / piv;
                lu[(r, col)] = factor;
                for c in (col + 1)..n {
                    let v = lu[(col, c)];
                    lu[(r, c)] = lu[(r, c)] - factor * v;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve(&self, rhs: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        let n = self.lu.rows;
        if rhs.len() != n {
            return Err(Error::InvalidParameter(format!(
                "rhs length {} does not match dimension {n}",
                rhs.len()
            )));
        }
        let mut y = vec![Cx::new(T::zero(), T::zero()); n];
        for r in 0..n {
            let mut acc = rhs[self.perm[r]];
            for c in 0..r {
                acc = acc - self.lu[(r, c)] * y[c];
            }
            y[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = y[r];
            for c in (r + 1)..n {
                acc = acc - self.lu[(r, c)] * y[c];
            }
            y[r] = acc / self.lu[(r, r)];
        }
        Ok(y)
    }

    pub fn inverse(&self) -> Result<CMatrix<T>> {
        let n = self.lu.rows;
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![Cx::new(T::zero(), T::zero()); n];
        for col in 0..n {
            e.iter_mut().for_each(|z| *z = Cx::new(T::zero(), T::zero()));
            e[col] = Cx::new(T::one(), T::zero());
            let x = self.solve(&e)?;
            for r in 0..n {
                inv[(r, col)] = x[r];
            }
        }
        Ok(inv)
    }
}

/// One-norm condition estimate ||A||_1 * ||A^{-1}||_1; infinity when the
/// factorization fails.
pub fn condition_one_norm<T: Real>(m: &CMatrix<T>) -> T {
    match Lu::factor(m).and_then(|lu| lu.inverse()) {
        Ok(inv) => m.norm_one() * inv.norm_one(),
        Err(_) => T::infinity(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Cx::new(re, im)
    }

    #[test]
    fn solve_known_2x2() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0, 1.0);
        m[(0, 1)] = c(2.0, 0.0);
        m[(1, 0)] = c(0.0, 0.0);
        m[(1, 1)] = c(1.0, -1.0);
        let x_true = [c(3.0, 0.5), c(-1.0, 2.0)];
        let rhs = m.mul_vec(&x_true);
        let lu = Lu::factor(&m).unwrap();
        let x = lu.solve(&rhs).unwrap();
        for (got, want) in x.iter().zip(x_true.iter()) {
            assert_relative_eq!(got.re, want.re, epsilon = 1e-13);
            assert_relative_eq!(got.im, want.im, epsilon = 1e-13);
        }
    }

    #[test]
    fn singular_matrix_reports_zero_pivot() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(2.0, 0.0);
        m[(1, 0)] = c(2.0, 0.0);
        m[(1, 1)] = c(4.0, 0.0);
        assert!(Lu::factor(&m).is_err());
    }

    #[test]
    fn condition_of_identity_is_one() {
        let n = 5;
        let m = CMatrix::from_fn(n, n, |r, cidx| {
            if r == cidx { c(1.0, 0.0) } else { c(0.0, 0.0) }
        });
        assert_relative_eq!(condition_one_norm(&m), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let n = 8;
        // deterministic, well-conditioned test matrix
        let m = CMatrix::from_fn(n, n, |r, cidx| {
            let base = if r == cidx { 4.0 } else { 0.0 };
            c(base + ((r * 3 + cidx * 7) % 5) as f64 * 0.1, ((r + 2 * cidx) % 3) as f64 * 0.1)
        });
        let inv = Lu::factor(&m).unwrap().inverse().unwrap();
        for r in 0..n {
            let mut row = vec![c(0.0, 0.0); n];
            for k in 0..n {
                for cidx in 0..n {
                    row[cidx] = row[cidx] + m[(r, k)] * inv[(k, cidx)];
                }
            }
            for cidx in 0..n {
                let want = if r == cidx { 1.0 } else { 0.0 };
                assert_relative_eq!(row[cidx].re, want, epsilon = 1e-11);
                assert_relative_eq!(row[cidx].im, 0.0, epsilon = 1e-11);
            }
        }
    }
}
