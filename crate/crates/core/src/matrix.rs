//! Dense row-major matrices over any [`Scalar`].
//!
//! The kernel is sized for desk-scale problems (dimensions well below ten);
//! algorithms are the straightforward O(n^3) ones with partial pivoting.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::num::{Scalar, C64};

#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: core::fmt::Debug> core::fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Mat<S> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(rows * cols, data.len(), "entry count must be rows*cols");
        Mat { rows, cols, data }
    }

    pub fn zeros_like(proto: &S, rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |_, _| proto.zero_like())
    }

    pub fn identity_like(proto: &S, n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                proto.one_like()
            } else {
                proto.zero_like()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn map<T: Scalar>(&self, f: impl FnMut(&S) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Mat<S> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn conj(&self) -> Mat<S> {
        self.map(|x| x.conj_s())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat<S> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj_s())
    }

    pub fn add(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).clone() + rhs.at(i, j).clone()
        })
    }

    pub fn sub(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).clone() - rhs.at(i, j).clone()
        })
    }

    pub fn neg(&self) -> Mat<S> {
        self.map(|x| -x.clone())
    }

    pub fn scale(&self, c: f64) -> Mat<S> {
        self.map(|x| x.scale(c))
    }

    pub fn scale_s(&self, c: &S) -> Mat<S> {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn mul(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = self.at(i, 0).clone() * rhs.at(0, j).clone();
            for k in 1..self.cols {
                acc = acc + self.at(i, k).clone() * rhs.at(k, j).clone();
            }
            acc
        })
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square());
        let mut acc = self.at(0, 0).clone();
        for i in 1..self.rows {
            acc = acc + self.at(i, i).clone();
        }
        acc
    }

    /// Largest entry magnitude (magnitude of the constant part for jets).
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|x| x.mag()).fold(0.0, f64::max)
    }

    /// Row-sum norm.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).mag()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Max asymmetry |a_ij - a_ji|.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut d = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let diff = self.at(i, j).clone() - self.at(j, i).clone();
                d = f64::max(d, diff.mag());
            }
        }
        d
    }

    /// (self + t(self)) / 2.
    pub fn symmetrized(&self) -> Mat<S> {
        assert!(self.is_square());
        Mat::from_fn(self.rows, self.cols, |i, j| {
            (self.at(i, j).clone() + self.at(j, i).clone()).scale(0.5)
        })
    }

    /// LU decomposition with partial pivoting; returns (combined LU, perm,
    /// sign) or the offending pivot.
    fn lu(&self, pivot_tol: f64) -> Result<(Mat<S>, Vec<usize>, bool)> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut flip = false;
        for k in 0..n {
            let (mut best, mut best_mag) = (k, a.at(k, k).mag());
            for i in (k + 1)..n {
                let m = a.at(i, k).mag();
                if m > best_mag {
                    best = i;
                    best_mag = m;
                }
            }
            if best_mag < pivot_tol {
                return Err(Error::SingularMatrix {
                    index: k,
                    magnitude: best_mag,
                });
            }
            if best != k {
                for j in 0..n {
                    a.data.swap(k * n + j, best * n + j);
                }
                perm.swap(k, best);
                flip = !flip;
            }
            let inv = a.at(k, k).try_inv().ok_or(Error::SingularMatrix {
                index: k,
                magnitude: best_mag,
            })?;
            for i in (k + 1)..n {
                let f = a.at(i, k).clone() * inv.clone();
                a.set(i, k, f.clone());
                for j in (k + 1)..n {
                    let v = a.at(i, j).clone() - f.clone() * a.at(k, j).clone();
                    a.set(i, j, v);
                }
            }
        }
        Ok((a, perm, flip))
    }

    pub fn det(&self, pivot_tol: f64) -> Result<S> {
        let (lu, _, flip) = self.lu(pivot_tol)?;
        let n = self.rows;
        let mut d = lu.at(0, 0).clone();
        for i in 1..n {
            d = d * lu.at(i, i).clone();
        }
        if flip {
            d = -d;
        }
        Ok(d)
    }

    /// Solve self * X = B for matrix B.
    pub fn solve(&self, b: &Mat<S>, pivot_tol: f64) -> Result<Mat<S>> {
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let (lu, perm, _) = self.lu(pivot_tol)?;
        let mut x = Mat::from_fn(n, b.cols, |i, j| b.at(perm[i], j).clone());
        // forward substitution (unit lower)
        for j in 0..b.cols {
            for i in 0..n {
                let mut acc = x.at(i, j).clone();
                for k in 0..i {
                    acc = acc - lu.at(i, k).clone() * x.at(k, j).clone();
                }
                x.set(i, j, acc);
            }
            // back substitution
            for i in (0..n).rev() {
                let mut acc = x.at(i, j).clone();
                for k in (i + 1)..n {
                    acc = acc - lu.at(i, k).clone() * x.at(k, j).clone();
                }
                let inv = lu.at(i, i).try_inv().ok_or(Error::SingularMatrix {
                    index: i,
                    magnitude: lu.at(i, i).mag(),
                })?;
                x.set(i, j, acc * inv);
            }
        }
        Ok(x)
    }

    pub fn inverse(&self, pivot_tol: f64) -> Result<Mat<S>> {
        assert!(self.is_square());
        let id = Mat::identity_like(self.at(0, 0), self.rows);
        self.solve(&id, pivot_tol)
    }
}

impl Mat<f64> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |_, _| 0.0)
    }
    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Mat::from_fn(r, c, |i, j| rows[i][j])
    }
    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
    /// Promote into a complex matrix with zero imaginary part.
    pub fn to_complex(&self) -> Mat<C64> {
        self.map(|x| C64::c(*x, 0.0))
    }
}

impl Mat<C64> {
    pub fn czeros(rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |_, _| C64::ZERO)
    }
    pub fn cidentity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { C64::ONE } else { C64::ZERO })
    }
    pub fn re(&self) -> Mat<f64> {
        self.map(|x| x.re)
    }
    pub fn im(&self) -> Mat<f64> {
        self.map(|x| x.im)
    }
    pub fn from_re_im(re: &Mat<f64>, im: &Mat<f64>) -> Self {
        assert_eq!((re.rows, re.cols), (im.rows, im.cols));
        Mat::from_fn(re.rows, re.cols, |i, j| C64::c(*re.at(i, j), *im.at(i, j)))
    }
    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Crude condition estimate ||M||_inf * ||M^-1||_inf.
    pub fn cond_estimate(&self, pivot_tol: f64) -> Result<f64> {
        let inv = self.inverse(pivot_tol)?;
        Ok(self.inf_norm() * inv.inf_norm())
    }
}

/// Cholesky factorization of a Hermitian positive definite matrix.
///
/// Returns lower-triangular `L` with `L L^H = S`. Fails with
/// [`Error::NotHermitian`] when the input is asymmetric beyond `sym_tol`
/// and with [`Error::NotPositiveDefinite`] naming the first pivot at or
/// below `posdef_tol`.
pub fn cholesky(s: &Mat<C64>, sym_tol: f64, posdef_tol: f64) -> Result<Mat<C64>> {
    assert!(s.is_square());
    let n = s.rows();
    let mut herm_defect = 0.0f64;
    for i in 0..n {
        herm_defect = herm_defect.max(s.at(i, i).im.abs());
        for j in (i + 1)..n {
            let d = s.at(i, j).clone() - s.at(j, i).conj();
            herm_defect = herm_defect.max(d.mag());
        }
    }
    if herm_defect > sym_tol {
        return Err(Error::NotHermitian {
            defect: herm_defect,
        });
    }
    let mut l = Mat::czeros(n, n);
    for j in 0..n {
        let mut d = s.at(j, j).re;
        for k in 0..j {
            d -= l.at(j, k).norm_sq();
        }
        if d <= posdef_tol {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let dj = libm::sqrt(d);
        l.set(j, j, C64::c(dj, 0.0));
        for i in (j + 1)..n {
            let mut acc = s.at(i, j).clone();
            for k in 0..j {
                acc = acc - l.at(i, k).clone() * l.at(j, k).conj();
            }
            l.set(i, j, acc.scale(1.0 / dj));
        }
    }
    Ok(l)
}

/// Real symmetric positive definite Cholesky (thin wrapper over the
/// complex routine; desk-scale sizes make the detour free).
pub fn cholesky_real(s: &Mat<f64>, sym_tol: f64, posdef_tol: f64) -> Result<Mat<f64>> {
    let l = cholesky(&s.to_complex(), sym_tol, posdef_tol)?;
    Ok(l.re())
}

/// Real symmetric matrices: eigenvalues by cyclic Jacobi rotations.
/// Used for numeric ranks and positivity diagnostics on small matrices.
pub fn sym_eigenvalues(a: &Mat<f64>, sweeps: usize) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    for _ in 0..sweeps {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.at(p, q) * m.at(p, q);
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = *m.at(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = *m.at(p, p);
                let aqq = *m.at(q, q);
                let theta = 0.5 * libm::atan2(2.0 * apq, aqq - app);
                let (c, s) = (libm::cos(theta), libm::sin(theta));
                for k in 0..n {
                    let akp = *m.at(k, p);
                    let akq = *m.at(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = *m.at(p, k);
                    let aqk = *m.at(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| *m.at(i, i)).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_c64_mat(n: usize, rng: &mut SplitMix64) -> Mat<C64> {
        Mat::from_fn(n, n, |_, _| {
            C64::c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
        })
    }

    #[test]
    fn inverse_identity() {
        let id = Mat::<C64>::cidentity(3);
        let inv = id.inverse(1e-14).unwrap();
        assert!(inv.sub(&id).max_norm() < 1e-15);
    }

    #[test]
    fn inverse_diagonal() {
        // diag(2, i) -> diag(0.5, -i)
        let mut m = Mat::<C64>::czeros(2, 2);
        m.set(0, 0, C64::c(2.0, 0.0));
        m.set(1, 1, C64::c(0.0, 1.0));
        let inv = m.inverse(1e-14).unwrap();
        assert!((inv.at(0, 0).re - 0.5).abs() < 1e-15);
        assert!((inv.at(1, 1).im + 1.0).abs() < 1e-15);
        assert!(inv.at(0, 1).mag() < 1e-15 && inv.at(1, 0).mag() < 1e-15);
    }

    #[test]
    fn inverse_roundtrip_random_4x4() {
        // well-conditioned via diagonal dominance
        let mut rng = SplitMix64::new(7);
        let mut m = random_c64_mat(4, &mut rng);
        for i in 0..4 {
            let d = m.at(i, i).clone() + C64::c(4.0, 0.0);
            m.set(i, i, d);
        }
        let inv = m.inverse(1e-14).unwrap();
        let resid = m.mul(&inv).sub(&Mat::cidentity(4)).max_norm();
        assert!(resid < 1e-12, "residual {resid}");
    }

    #[test]
    fn singular_matrix_reports_pivot() {
        let m = Mat::<f64>::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        match m.inverse(1e-12) {
            Err(Error::SingularMatrix { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected SingularMatrix, got {other:?}"),
        }
    }

    #[test]
    fn cholesky_identity() {
        let id = Mat::<C64>::cidentity(2);
        let l = cholesky(&id, 1e-12, 1e-12).unwrap();
        assert!(l.sub(&id).max_norm() < 1e-15);
    }

    #[test]
    fn cholesky_multiply_back() {
        let s = Mat::<f64>::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).to_complex();
        let l = cholesky(&s, 1e-12, 1e-12).unwrap();
        let back = l.mul(&l.adjoint());
        assert!(back.sub(&s).max_norm() < 1e-14);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        // eigenvalues 3 and -1
        let s = Mat::<f64>::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).to_complex();
        match cholesky(&s, 1e-12, 1e-12) {
            Err(Error::NotPositiveDefinite { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected NotPositiveDefinite, got {other:?}"),
        }
    }

    #[test]
    fn cholesky_rejects_non_hermitian() {
        let s = Mat::<f64>::from_rows(&[&[1.0, 0.5], &[0.3, 1.0]]).to_complex();
        assert!(matches!(
            cholesky(&s, 1e-12, 1e-12),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn solve_matches_inverse() {
        let mut rng = SplitMix64::new(11);
        let mut m = random_c64_mat(3, &mut rng);
        for i in 0..3 {
            let d = m.at(i, i).clone() + C64::c(3.0, 0.0);
            m.set(i, i, d);
        }
        let b = random_c64_mat(3, &mut rng);
        let x = m.solve(&b, 1e-14).unwrap();
        assert!(m.mul(&x).sub(&b).max_norm() < 1e-12);
    }

    #[test]
    fn jacobi_eigenvalues_of_known_matrix() {
        let s = Mat::<f64>::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]);
        let ev = sym_eigenvalues(&s, 20);
        assert!((ev[0] + 1.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
    }
}
