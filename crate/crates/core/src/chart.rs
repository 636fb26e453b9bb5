//! Real coordinate charts on the three spaces.
//!
//! The coordinate ordering is normative for metric tensors, jets and all
//! JSON output:
//!
//! * `H_n` / `H_{n,m}`: x_{mu,nu} (mu <= nu, row-major upper triangle),
//!   then y_{mu,nu} in the same pattern, then u_{kl} row-major, then v_{kl};
//! * `D_{n,m}`: Re w_{mu,nu}, Im w_{mu,nu}, Re eta_{kl}, Im eta_{kl} in the
//!   same pattern.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::domain::{DiskPoint, JacobiPoint, SiegelPoint};
use crate::error::Result;
use crate::jet::{Jet, JetSpace};
use crate::matrix::Mat;
use crate::num::{Cx, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// Siegel upper half space H_n (m = 0).
    Siegel,
    /// Siegel-Jacobi space H_{n,m}.
    Jacobi,
    /// Siegel-Jacobi disk D_{n,m}.
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chart {
    pub space: Space,
    pub n: usize,
    pub m: usize,
}

impl Chart {
    pub fn siegel(n: usize) -> Chart {
        Chart {
            space: Space::Siegel,
            n,
            m: 0,
        }
    }
    pub fn jacobi(n: usize, m: usize) -> Chart {
        Chart {
            space: Space::Jacobi,
            n,
            m,
        }
    }
    pub fn disk(n: usize, m: usize) -> Chart {
        Chart {
            space: Space::Disk,
            n,
            m,
        }
    }

    /// Number of independent entries of a symmetric n x n matrix.
    pub fn sym_len(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// Real dimension of the chart.
    pub fn dim(&self) -> usize {
        self.n * (self.n + 1) + 2 * self.m * self.n
    }

    /// Index of the symmetric coordinate (mu, nu), mu <= nu, within one
    /// symmetric block (row-major upper triangle).
    fn sym_index(&self, mu: usize, nu: usize) -> usize {
        debug_assert!(mu <= nu && nu < self.n);
        mu * self.n - mu * (mu + 1) / 2 + nu
    }

    /// Chart index of x_{mu,nu} (or Re w for disk charts).
    pub fn ix(&self, mu: usize, nu: usize) -> usize {
        let (a, b) = if mu <= nu { (mu, nu) } else { (nu, mu) };
        self.sym_index(a, b)
    }

    /// Chart index of y_{mu,nu} (or Im w).
    pub fn iy(&self, mu: usize, nu: usize) -> usize {
        self.sym_len() + self.ix(mu, nu)
    }

    /// Chart index of u_{kl} (or Re eta), k < m, l < n.
    pub fn iu(&self, k: usize, l: usize) -> usize {
        debug_assert!(k < self.m && l < self.n);
        2 * self.sym_len() + k * self.n + l
    }

    /// Chart index of v_{kl} (or Im eta).
    pub fn iv(&self, k: usize, l: usize) -> usize {
        2 * self.sym_len() + self.m * self.n + k * self.n + l
    }

    // ---- packing points into coordinate vectors ----

    fn push_sym(&self, m: &Mat<f64>, out: &mut Vec<f64>) {
        for mu in 0..self.n {
            for nu in mu..self.n {
                out.push(*m.at(mu, nu));
            }
        }
    }

    pub fn pack_siegel(&self, p: &SiegelPoint) -> Vec<f64> {
        debug_assert_eq!(p.n(), self.n);
        let mut out = Vec::with_capacity(self.dim());
        self.push_sym(p.x(), &mut out);
        self.push_sym(p.y(), &mut out);
        out
    }

    pub fn pack_jacobi(&self, p: &JacobiPoint) -> Vec<f64> {
        debug_assert_eq!((p.n(), p.m()), (self.n, self.m));
        let mut out = Vec::with_capacity(self.dim());
        self.push_sym(p.base().x(), &mut out);
        self.push_sym(p.base().y(), &mut out);
        for k in 0..self.m {
            for l in 0..self.n {
                out.push(*p.u().at(k, l));
            }
        }
        for k in 0..self.m {
            for l in 0..self.n {
                out.push(*p.v().at(k, l));
            }
        }
        out
    }

    pub fn pack_disk(&self, p: &DiskPoint) -> Vec<f64> {
        debug_assert_eq!((p.n(), p.m()), (self.n, self.m));
        let mut out = Vec::with_capacity(self.dim());
        for mu in 0..self.n {
            for nu in mu..self.n {
                out.push(p.w().at(mu, nu).re);
            }
        }
        for mu in 0..self.n {
            for nu in mu..self.n {
                out.push(p.w().at(mu, nu).im);
            }
        }
        for k in 0..self.m {
            for l in 0..self.n {
                out.push(p.eta().at(k, l).re);
            }
        }
        for k in 0..self.m {
            for l in 0..self.n {
                out.push(p.eta().at(k, l).im);
            }
        }
        out
    }

    // ---- unpacking coordinate vectors into points (validating) ----

    pub fn unpack_siegel(&self, coords: &[f64]) -> Result<SiegelPoint> {
        debug_assert_eq!(coords.len(), self.dim());
        SiegelPoint::new(
            Mat::from_fn(self.n, self.n, |i, j| coords[self.ix(i, j)]),
            Mat::from_fn(self.n, self.n, |i, j| coords[self.iy(i, j)]),
        )
    }

    pub fn unpack_jacobi(&self, coords: &[f64]) -> Result<JacobiPoint> {
        let base = SiegelPoint::new(
            Mat::from_fn(self.n, self.n, |i, j| coords[self.ix(i, j)]),
            Mat::from_fn(self.n, self.n, |i, j| coords[self.iy(i, j)]),
        )?;
        JacobiPoint::new(
            base,
            Mat::from_fn(self.m, self.n, |k, l| coords[self.iu(k, l)]),
            Mat::from_fn(self.m, self.n, |k, l| coords[self.iv(k, l)]),
        )
    }

    pub fn unpack_disk(&self, coords: &[f64]) -> Result<DiskPoint> {
        DiskPoint::new(
            Mat::from_fn(self.n, self.n, |i, j| {
                Cx::c(coords[self.ix(i, j)], coords[self.iy(i, j)])
            }),
            Mat::from_fn(self.m, self.n, |k, l| {
                Cx::c(coords[self.iu(k, l)], coords[self.iv(k, l)])
            }),
        )
    }

    /// Pack whichever point type matches this chart.
    pub fn pack_point(&self, p: &Point) -> Vec<f64> {
        match (self.space, p) {
            (Space::Siegel, Point::Siegel(p)) => self.pack_siegel(p),
            (Space::Jacobi, Point::Jacobi(p)) => self.pack_jacobi(p),
            (Space::Disk, Point::Disk(p)) => self.pack_disk(p),
            _ => panic!("point type does not match chart space"),
        }
    }

    // ---- generic scalar views of the chart ----

    /// Omega (resp. W) as a complex matrix over any scalar.
    pub fn omega_of<S: Scalar>(&self, coords: &[S]) -> Mat<Cx<S>> {
        Mat::from_fn(self.n, self.n, |i, j| Cx {
            re: coords[self.ix(i, j)].clone(),
            im: coords[self.iy(i, j)].clone(),
        })
    }

    /// Z (resp. eta) as a complex matrix over any scalar.
    pub fn z_of<S: Scalar>(&self, coords: &[S]) -> Mat<Cx<S>> {
        debug_assert!(self.m > 0, "Z block requested on an H_n chart");
        Mat::from_fn(self.m, self.n, |k, l| Cx {
            re: coords[self.iu(k, l)].clone(),
            im: coords[self.iv(k, l)].clone(),
        })
    }

    /// Write complex matrices back into chart coordinate order.
    pub fn coords_of<S: Scalar>(&self, omega: &Mat<Cx<S>>, z: Option<&Mat<Cx<S>>>) -> Vec<S> {
        let mut out = Vec::with_capacity(self.dim());
        for mu in 0..self.n {
            for nu in mu..self.n {
                out.push(omega.at(mu, nu).re.clone());
            }
        }
        for mu in 0..self.n {
            for nu in mu..self.n {
                out.push(omega.at(mu, nu).im.clone());
            }
        }
        if let Some(z) = z {
            for k in 0..self.m {
                for l in 0..self.n {
                    out.push(z.at(k, l).re.clone());
                }
            }
            for k in 0..self.m {
                for l in 0..self.n {
                    out.push(z.at(k, l).im.clone());
                }
            }
        }
        out
    }

    /// Seed coordinate jets of the requested order at a point.
    pub fn seed_jets(&self, coords: &[f64], order: usize) -> (Arc<JetSpace>, Vec<Jet>) {
        debug_assert_eq!(coords.len(), self.dim());
        let space = JetSpace::new(self.dim(), order);
        let jets = coords
            .iter()
            .enumerate()
            .map(|(k, &x)| Jet::variable(&space, k, x))
            .collect();
        (space, jets)
    }
}

/// A point of any of the three spaces, tagged.
#[derive(Debug, Clone)]
pub enum Point {
    Siegel(SiegelPoint),
    Jacobi(JacobiPoint),
    Disk(DiskPoint),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::sample;
    use crate::rng::SplitMix64;

    #[test]
    fn dims_match_formula() {
        assert_eq!(Chart::jacobi(1, 1).dim(), 4);
        assert_eq!(Chart::jacobi(2, 1).dim(), 10);
        assert_eq!(Chart::jacobi(1, 2).dim(), 6);
        assert_eq!(Chart::jacobi(2, 2).dim(), 14);
        assert_eq!(Chart::siegel(2).dim(), 6);
        assert_eq!(Chart::siegel(3).dim(), 12);
        assert_eq!(Chart::disk(2, 2).dim(), 14);
    }

    #[test]
    fn pack_unpack_roundtrip() {
        let mut rng = SplitMix64::new(17);
        for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let chart = Chart::jacobi(n, m);
            let p = sample::jacobi_point(n, m, &mut rng);
            let coords = chart.pack_jacobi(&p);
            assert_eq!(coords.len(), chart.dim());
            let q = chart.unpack_jacobi(&coords).unwrap();
            assert_eq!(p, q);

            let dchart = Chart::disk(n, m);
            let d = sample::disk_point(n, m, &mut rng);
            let coords = dchart.pack_disk(&d);
            let e = dchart.unpack_disk(&coords).unwrap();
            assert!(d.w().sub(e.w()).max_norm() < 1e-15);
            assert!(d.eta().sub(e.eta()).max_norm() < 1e-15);
        }
    }

    #[test]
    fn omega_view_matches_point_matrices() {
        let chart = Chart::jacobi(2, 1);
        let mut rng = SplitMix64::new(23);
        let p = sample::jacobi_point(2, 1, &mut rng);
        let coords = chart.pack_jacobi(&p);
        let omega = chart.omega_of(&coords);
        assert!(omega.sub(&p.omega()).max_norm() < 1e-15);
        let z = chart.z_of(&coords);
        assert!(z.sub(&p.z()).max_norm() < 1e-15);
        let back = chart.coords_of(&omega, Some(&z));
        for (a, b) in back.iter().zip(coords.iter()) {
            assert_eq!(a, b);
        }
    }
}
