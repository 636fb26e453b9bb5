//! The partial Cayley transform between the Siegel-Jacobi disk and space.
//!
//! Forward map: (W, eta) -> (i(I + W)(I - W)^-1, 2i eta (I - W)^-1).
//! The inverse is obtained algebraically: from Omega = i(I+W)(I-W)^-1 one
//! gets I - W = 2i(Omega + iI)^-1, hence W = (Omega - iI)(Omega + iI)^-1
//! and eta = Z (Omega + iI)^-1; both directions are round-trip tested.

use alloc::vec::Vec;

use crate::action::{disk_action, jacobi_action, star_conjugate_unchecked};
use crate::chart::Chart;
use crate::config::Tolerances;
use crate::domain::{DiskGroupElement, DiskPoint, JacobiGroupElement, JacobiPoint, SiegelPoint};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::num::{Cx, Scalar};

/// Generic-core of the forward transform on disk chart coordinates;
/// returns Jacobi chart coordinates. Used by jet transports.
pub fn to_space_coords<S: Scalar>(chart: &Chart, coords: &[S], pivot_tol: f64) -> Result<Vec<S>> {
    let proto = &coords[0];
    let w = chart.omega_of(coords);
    let eta = chart.z_of(coords);
    let n = chart.n;
    let one = Cx {
        re: proto.one_like(),
        im: proto.zero_like(),
    };
    let id = Mat::identity_like(&one, n);
    let i_minus_w = id.sub(&w);
    let inv = i_minus_w
        .inverse(pivot_tol)
        .map_err(|_| Error::SingularFactor)?;
    let omega = id.add(&w).mul(&inv).map(|e| e.mul_i());
    let z = eta.mul(&inv).map(|e| e.mul_i().scale(2.0));
    let space_chart = Chart::jacobi(chart.n, chart.m);
    Ok(space_chart.coords_of(&omega.symmetrized(), Some(&z)))
}

/// Generic core of the inverse transform on Jacobi chart coordinates;
/// returns disk chart coordinates.
pub fn to_disk_coords<S: Scalar>(chart: &Chart, coords: &[S], pivot_tol: f64) -> Result<Vec<S>> {
    let proto = &coords[0];
    let omega = chart.omega_of(coords);
    let z = chart.z_of(coords);
    let n = chart.n;
    let one = Cx {
        re: proto.one_like(),
        im: proto.zero_like(),
    };
    let i_unit = one.mul_i();
    let id = Mat::identity_like(&one, n);
    let i_id = id.scale_s(&i_unit);
    let den = omega.add(&i_id);
    let den_inv = den.inverse(pivot_tol).map_err(|_| Error::SingularFactor)?;
    let w = omega.sub(&i_id).mul(&den_inv);
    let eta = z.mul(&den_inv);
    let disk_chart = Chart::disk(chart.n, chart.m);
    Ok(disk_chart.coords_of(&w.symmetrized(), Some(&eta)))
}

/// Partial Cayley transform from the disk to the space.
pub fn partial_cayley(p: &DiskPoint) -> Result<JacobiPoint> {
    let tol = Tolerances::default();
    let id = Mat::cidentity(p.n());
    let i_minus_w = id.sub(p.w());
    let inv = i_minus_w
        .inverse(tol.pivot_tol)
        .map_err(|_| Error::SingularFactor)?;
    let omega = id.add(p.w()).mul(&inv).map(|e| e.mul_i()).symmetrized();
    let z = p.eta().mul(&inv).map(|e| e.mul_i().scale(2.0));
    let base = SiegelPoint::with_tol(
        omega.re(),
        omega.im(),
        &Tolerances {
            sym_tol: 1e-9,
            ..tol
        },
    )?;
    JacobiPoint::new(base, z.re(), z.im())
}

/// Inverse transform from the space to the disk.
pub fn partial_cayley_inverse(p: &JacobiPoint) -> Result<DiskPoint> {
    let tol = Tolerances::default();
    let n = p.n();
    let i_id = Mat::cidentity(n).map(|e| e.mul_i());
    let den = p.omega().add(&i_id);
    let den_inv = den
        .inverse(tol.pivot_tol)
        .map_err(|_| Error::SingularFactor)?;
    let w = p.omega().sub(&i_id).mul(&den_inv).symmetrized();
    let eta = p.z().mul(&den_inv);
    DiskPoint::with_tol(
        w,
        eta,
        &Tolerances {
            sym_tol: 1e-9,
            ..tol
        },
    )
}

/// Max-norm of `g . Phi*(p) - Phi*(g* . p)` with `g* = star_conjugate(g)`.
pub fn compatibility_residual(g: &JacobiGroupElement, p: &DiskPoint) -> Result<f64> {
    let gs = star_conjugate_unchecked(g)?;
    compatibility_residual_with(g, &gs, p)
}

/// Same residual with the conjugated element supplied by the caller
/// (lets `star_conjugate` verify itself without recursing).
pub fn compatibility_residual_with(
    g: &JacobiGroupElement,
    gs: &DiskGroupElement,
    p: &DiskPoint,
) -> Result<f64> {
    let lhs = jacobi_action(g, &partial_cayley(p)?)?.point;
    let rhs = partial_cayley(&disk_action(gs, p)?.point)?;
    let d_omega = lhs.omega().sub(&rhs.omega()).max_norm();
    let d_z = lhs.z().sub(&rhs.z()).max_norm();
    Ok(d_omega.max(d_z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::star_conjugate;
    use crate::domain::sample;
    use crate::domain::SymplecticMatrix;
    use crate::num::C64;
    use crate::rng::SplitMix64;

    #[test]
    fn center_goes_to_i_identity() {
        for (n, m) in [(1, 1), (2, 2)] {
            let p = DiskPoint::new(Mat::czeros(n, n), Mat::czeros(m, n)).unwrap();
            let q = partial_cayley(&p).unwrap();
            assert!(q.base().x().max_norm() < 1e-15);
            assert!(q.base().y().sub(&Mat::identity(n)).max_norm() < 1e-15);
            assert!(q.z().max_norm() < 1e-15);
            let back = partial_cayley_inverse(&q).unwrap();
            assert!(back.w().max_norm() < 1e-15);
            assert!(back.eta().max_norm() < 1e-15);
        }
    }

    #[test]
    fn scalar_case_direct_substitution() {
        // (W, eta) = (0, 1 + 2i) -> (i, 2i(1 + 2i)) = (i, -4 + 2i)
        let p = DiskPoint::from_scalars(C64::ZERO, C64::c(1.0, 2.0)).unwrap();
        let q = partial_cayley(&p).unwrap();
        assert!((q.base().x().at(0, 0)).abs() < 1e-15);
        assert!((q.base().y().at(0, 0) - 1.0).abs() < 1e-15);
        assert!((q.u().at(0, 0) + 4.0).abs() < 1e-15);
        assert!((q.v().at(0, 0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn random_images_are_valid_points() {
        let mut rng = SplitMix64::new(61);
        for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            for _ in 0..25 {
                let p = sample::disk_point(n, m, &mut rng);
                // validation inside the constructor is the oracle (Y > 0)
                partial_cayley(&p).unwrap();
            }
        }
    }

    #[test]
    fn roundtrips_both_ways() {
        let mut rng = SplitMix64::new(67);
        for (n, m) in [(1, 1), (2, 2)] {
            for _ in 0..100 {
                let p = sample::jacobi_point(n, m, &mut rng);
                let q = partial_cayley(&partial_cayley_inverse(&p).unwrap()).unwrap();
                let d = q
                    .omega()
                    .sub(&p.omega())
                    .max_norm()
                    .max(q.z().sub(&p.z()).max_norm());
                assert!(d < 1e-12, "space roundtrip defect {d}");

                let w = sample::disk_point(n, m, &mut rng);
                let w2 = partial_cayley_inverse(&partial_cayley(&w).unwrap()).unwrap();
                let d = w2
                    .w()
                    .sub(w.w())
                    .max_norm()
                    .max(w2.eta().sub(w.eta()).max_norm());
                assert!(d < 1e-12, "disk roundtrip defect {d}");
            }
        }
    }

    #[test]
    fn identity_residual_is_zero() {
        let mut rng = SplitMix64::new(71);
        let p = sample::disk_point(2, 1, &mut rng);
        let e = JacobiGroupElement::identity(2, 1);
        let r = compatibility_residual(&e, &p).unwrap();
        assert!(r < 1e-14);
    }

    #[test]
    fn heisenberg_only_compatibility() {
        let mut rng = SplitMix64::new(73);
        for (n, m) in [(1, 1), (2, 2)] {
            for _ in 0..20 {
                let h = sample::heisenberg(n, m, &mut rng);
                let g = JacobiGroupElement::new(SymplecticMatrix::identity(n), h).unwrap();
                let p = sample::disk_point(n, m, &mut rng);
                let r = compatibility_residual(&g, &p).unwrap();
                assert!(r < 1e-10, "heisenberg-only residual {r}");
            }
        }
    }

    #[test]
    fn full_compatibility_on_random_pairs() {
        let mut rng = SplitMix64::new(79);
        let mut max_imag = 0.0f64;
        for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            for _ in 0..25 {
                let g = sample::jacobi_element(n, m, &mut rng);
                let p = sample::disk_point(n, m, &mut rng);
                let r = compatibility_residual(&g, &p).unwrap();
                assert!(r < 1e-9, "compatibility residual {r} at ({n},{m})");
                let gs = star_conjugate(&g).unwrap();
                max_imag = max_imag.max(gs.translation_imag_magnitude());
            }
        }
        // conjugated translations are genuinely complex; log the magnitude
        println!("max imaginary magnitude of conjugated translations: {max_imag:.3}");
        assert!(max_imag > 0.0);
    }

    #[test]
    fn boundary_ray_grows_det_im() {
        // along W = t * 0.9 I, det Im(Phi*) grows monotonically in t
        let mut prev = -1.0;
        for k in 0..10 {
            let t = 0.1 * k as f64;
            let w = Mat::cidentity(2).scale(0.9 * t);
            let p = DiskPoint::new(w, Mat::czeros(1, 2)).unwrap();
            let q = partial_cayley(&p).unwrap();
            let det = q.base().y().det(1e-14).unwrap();
            assert!(det > prev, "det Im must grow along the ray");
            prev = det;
        }
    }
}
