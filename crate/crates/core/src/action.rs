//! The three transitive group actions and the Jacobi multiplication law.
//!
//! All actions are implemented once over a generic scalar, so the same
//! code path produces numeric images (`S = f64`) and jet transports
//! (`S = Jet`) for Jacobians and the operator-invariance harness.

use alloc::vec::Vec;

use crate::chart::Chart;
use crate::config::Tolerances;
use crate::domain::{
    sample, DiskGroupElement, DiskPoint, HeisenbergElement, JacobiGroupElement, JacobiPoint,
    SiegelPoint, SymplecticMatrix,
};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::num::{Cx, Scalar, C64};
use crate::rng::SplitMix64;

/// Image of a point under a group action together with the automorphy
/// factor (C Omega + D, resp. conj(Q) W + conj(P)) retained for Jacobian
/// and pullback use.
#[derive(Debug, Clone)]
pub struct ActionResult<P> {
    pub point: P,
    pub factor: Mat<C64>,
}

fn promote_real<S: Scalar>(m: &Mat<f64>, proto: &S) -> Mat<Cx<S>> {
    m.map(|&v| Cx {
        re: proto.from_f64(v),
        im: proto.zero_like(),
    })
}

fn promote_complex<S: Scalar>(m: &Mat<C64>, proto: &S) -> Mat<Cx<S>> {
    m.map(|v| Cx {
        re: proto.from_f64(v.re),
        im: proto.from_f64(v.im),
    })
}

fn invert_factor<S: Scalar>(factor: &Mat<Cx<S>>, pivot_tol: f64) -> Result<Mat<Cx<S>>> {
    factor.inverse(pivot_tol).map_err(|_| Error::SingularFactor)
}

/// Image matrix plus the automorphy factor, over any scalar.
type MoebiusParts<S> = (Mat<Cx<S>>, Mat<Cx<S>>);

/// (A Omega + B)(C Omega + D)^-1 over any scalar; returns (image, factor).
fn moebius<S: Scalar>(
    a: &Mat<Cx<S>>,
    b: &Mat<Cx<S>>,
    c: &Mat<Cx<S>>,
    d: &Mat<Cx<S>>,
    omega: &Mat<Cx<S>>,
    pivot_tol: f64,
) -> Result<MoebiusParts<S>> {
    let factor = c.mul(omega).add(d);
    let finv = invert_factor(&factor, pivot_tol)?;
    let image = a.mul(omega).add(b).mul(&finv);
    Ok((image, factor))
}

/// Generic Sp action on chart coordinates (Siegel charts, m = 0 allowed).
pub fn siegel_image_coords<S: Scalar>(
    g: &SymplecticMatrix,
    chart: &Chart,
    coords: &[S],
    pivot_tol: f64,
) -> Result<Vec<S>> {
    let proto = &coords[0];
    let omega = chart.omega_of(coords);
    let (image, _) = moebius(
        &promote_real(g.a(), proto),
        &promote_real(g.b(), proto),
        &promote_real(g.c(), proto),
        &promote_real(g.d(), proto),
        &omega,
        pivot_tol,
    )?;
    // symmetrize: the image of a symmetric matrix is symmetric up to
    // roundoff, and chart coordinates hold one entry per pair
    Ok(chart.coords_of(&image.symmetrized(), None))
}

/// Generic Jacobi action on H_{n,m} chart coordinates.
pub fn jacobi_image_coords<S: Scalar>(
    g: &JacobiGroupElement,
    chart: &Chart,
    coords: &[S],
    pivot_tol: f64,
) -> Result<Vec<S>> {
    let proto = &coords[0];
    let omega = chart.omega_of(coords);
    let z = chart.z_of(coords);
    let (image_omega, factor) = moebius(
        &promote_real(g.sp().a(), proto),
        &promote_real(g.sp().b(), proto),
        &promote_real(g.sp().c(), proto),
        &promote_real(g.sp().d(), proto),
        &omega,
        pivot_tol,
    )?;
    let finv = invert_factor(&factor, pivot_tol)?;
    let lambda = promote_real(g.heis().lambda(), proto);
    let mu = promote_real(g.heis().mu(), proto);
    let image_z = z.add(&lambda.mul(&omega)).add(&mu).mul(&finv);
    Ok(chart.coords_of(&image_omega.symmetrized(), Some(&image_z)))
}

/// Generic disk action on D_{n,m} chart coordinates.
pub fn disk_image_coords<S: Scalar>(
    g: &DiskGroupElement,
    chart: &Chart,
    coords: &[S],
    pivot_tol: f64,
) -> Result<Vec<S>> {
    let proto = &coords[0];
    let w = chart.omega_of(coords);
    let eta = chart.z_of(coords);
    let p = promote_complex(g.p(), proto);
    let q = promote_complex(g.q(), proto);
    let (image_w, factor) = moebius(&p, &q, &q.conj(), &p.conj(), &w, pivot_tol)?;
    let finv = invert_factor(&factor, pivot_tol)?;
    let lambda = promote_complex(g.lambda(), proto);
    let mu = promote_complex(g.mu(), proto);
    let image_eta = eta.add(&lambda.mul(&w)).add(&mu).mul(&finv);
    Ok(chart.coords_of(&image_w.symmetrized(), Some(&image_eta)))
}

/// Sp(n, R) acting on the Siegel upper half space:
/// M . Omega = (A Omega + B)(C Omega + D)^-1.
pub fn siegel_action(g: &SymplecticMatrix, p: &SiegelPoint) -> Result<ActionResult<SiegelPoint>> {
    let tol = Tolerances::default();
    let omega = p.omega();
    let (image, factor) = moebius(
        &g.a().to_complex(),
        &g.b().to_complex(),
        &g.c().to_complex(),
        &g.d().to_complex(),
        &omega,
        tol.pivot_tol,
    )?;
    let image = image.symmetrized();
    let point = SiegelPoint::with_tol(
        image.re(),
        image.im(),
        &Tolerances {
            sym_tol: 1e-9,
            ..tol
        },
    )?;
    Ok(ActionResult { point, factor })
}

/// The Jacobi group acting on H_{n,m}:
/// (M, (lambda, mu, kappa)) . (Omega, Z) =
///   (M . Omega, (Z + lambda Omega + mu)(C Omega + D)^-1).
pub fn jacobi_action(g: &JacobiGroupElement, p: &JacobiPoint) -> Result<ActionResult<JacobiPoint>> {
    if g.n() != p.n() || g.m_rows() != p.m() {
        return Err(Error::DimensionMismatch {
            expected: g.n() * 10 + g.m_rows(),
            got: p.n() * 10 + p.m(),
            context: "jacobi_action element vs point",
        });
    }
    let base = siegel_action(g.sp(), p.base())?;
    let finv = invert_factor(&base.factor, Tolerances::default().pivot_tol)?;
    let z = p.z();
    let lambda = g.heis().lambda().to_complex();
    let mu = g.heis().mu().to_complex();
    let image_z = z.add(&lambda.mul(&p.omega())).add(&mu).mul(&finv);
    let point = JacobiPoint::new(base.point, image_z.re(), image_z.im())?;
    Ok(ActionResult {
        point,
        factor: base.factor,
    })
}

/// The Cayley-conjugated group acting on the Siegel-Jacobi disk:
/// (W, eta) -> ((PW + Q)(conj(Q) W + conj(P))^-1,
///              (eta + lambda W + mu)(conj(Q) W + conj(P))^-1).
pub fn disk_action(g: &DiskGroupElement, p: &DiskPoint) -> Result<ActionResult<DiskPoint>> {
    if g.n() != p.n() || g.m_rows() != p.m() {
        return Err(Error::DimensionMismatch {
            expected: g.n() * 10 + g.m_rows(),
            got: p.n() * 10 + p.m(),
            context: "disk_action element vs point",
        });
    }
    let tol = Tolerances::default();
    let (image_w, factor) = moebius(
        g.p(),
        g.q(),
        &g.q().conj(),
        &g.p().conj(),
        p.w(),
        tol.pivot_tol,
    )?;
    let finv = invert_factor(&factor, tol.pivot_tol)?;
    let image_eta = p.eta().add(&g.lambda().mul(p.w())).add(g.mu()).mul(&finv);
    let point = DiskPoint::with_tol(
        image_w.symmetrized(),
        image_eta,
        &Tolerances {
            sym_tol: 1e-9,
            ..tol
        },
    )?;
    Ok(ActionResult { point, factor })
}

/// The Jacobi group multiplication law:
/// (M0, (l0, m0, k0)) (M, (l, m, k)) =
///   (M0 M, (l0~ + l, m0~ + m, k0 + k + l0~ t(m) - m0~ t(l)))
/// with (l0~, m0~) = (l0, m0) M.
pub fn jacobi_multiply(
    g0: &JacobiGroupElement,
    g1: &JacobiGroupElement,
) -> Result<JacobiGroupElement> {
    if g0.n() != g1.n() || g0.m_rows() != g1.m_rows() {
        return Err(Error::DimensionMismatch {
            expected: g0.n() * 10 + g0.m_rows(),
            got: g1.n() * 10 + g1.m_rows(),
            context: "jacobi_multiply",
        });
    }
    let m = g0.sp().matmul(g1.sp())?;
    let (l0, m0, k0) = (g0.heis().lambda(), g0.heis().mu(), g0.heis().kappa());
    let (l1, m1, k1) = (g1.heis().lambda(), g1.heis().mu(), g1.heis().kappa());
    // (l0~, m0~) = (l0, m0) applied to g1's 2n x 2n block matrix
    let l0t = l0.mul(g1.sp().a()).add(&m0.mul(g1.sp().c()));
    let m0t = l0.mul(g1.sp().b()).add(&m0.mul(g1.sp().d()));
    let lambda = l0t.add(l1);
    let mu = m0t.add(m1);
    let kappa = k0
        .add(k1)
        .add(&l0t.mul(&m1.transpose()))
        .sub(&m0t.mul(&l1.transpose()));
    JacobiGroupElement::new(m, HeisenbergElement::new(lambda, mu, kappa)?)
}

/// Inverse solved from the multiplication law.
pub fn jacobi_inverse(g: &JacobiGroupElement) -> Result<JacobiGroupElement> {
    let minv = g.sp().inverse();
    let (l, mu, k) = (g.heis().lambda(), g.heis().mu(), g.heis().kappa());
    let lt = l.mul(minv.a()).add(&mu.mul(minv.c()));
    let mt = l.mul(minv.b()).add(&mu.mul(minv.d()));
    let kappa = k
        .neg()
        .add(&lt.mul(&mt.transpose()))
        .sub(&mt.mul(&lt.transpose()));
    JacobiGroupElement::new(minv, HeisenbergElement::new(lt.neg(), mt.neg(), kappa)?)
}

/// Cayley conjugation of a Jacobi group element into the disk-acting group.
///
/// Symplectic part: P = ((A + D) + i(B - C))/2, Q = ((A - D) - i(B + C))/2.
/// Translation part: lambda* = (lambda + i mu)/2, mu* = (lambda - i mu)/2,
/// obtained by matching the eta component of the conjugated action. The
/// result is verified against its defining property
/// `g . Phi*(W, eta) = Phi*(g* . (W, eta))` at 20 seeded disk points and
/// rejected with [`Error::ConjugationMismatch`] if the residual exceeds
/// 1e-9 (which would signal a formula bug, never bad input).
pub fn star_conjugate(g: &JacobiGroupElement) -> Result<DiskGroupElement> {
    let gs = star_conjugate_unchecked(g)?;
    let mut rng = SplitMix64::new(0x5741_525f_434a);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = sample::disk_point(g.n(), g.m_rows(), &mut rng);
        let r = crate::cayley::compatibility_residual_with(g, &gs, &p)?;
        worst = worst.max(r);
    }
    if worst > 1e-9 {
        return Err(Error::ConjugationMismatch { residual: worst });
    }
    Ok(gs)
}

/// The closed-form conjugation without the semantic verification pass.
pub fn star_conjugate_unchecked(g: &JacobiGroupElement) -> Result<DiskGroupElement> {
    let (a, b, c, d) = (g.sp().a(), g.sp().b(), g.sp().c(), g.sp().d());
    let p = Mat::from_re_im(&a.add(d).scale(0.5), &b.sub(c).scale(0.5));
    let q = Mat::from_re_im(&a.sub(d).scale(0.5), &b.add(c).scale(0.5).neg());
    let (l, mu) = (g.heis().lambda(), g.heis().mu());
    let lam_star = Mat::from_re_im(&l.scale(0.5), &mu.scale(0.5));
    let mu_star = Mat::from_re_im(&l.scale(0.5), &mu.scale(0.5).neg());
    let kap_star = g.heis().kappa().to_complex();
    DiskGroupElement::new(p, q, lam_star, mu_star, kap_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::sample;

    #[test]
    fn identity_acts_trivially() {
        let mut rng = SplitMix64::new(31);
        for (n, m) in [(1, 1), (2, 2)] {
            let p = sample::jacobi_point(n, m, &mut rng);
            let e = JacobiGroupElement::identity(n, m);
            let r = jacobi_action(&e, &p).unwrap();
            assert!(r.point.omega().sub(&p.omega()).max_norm() < 1e-14);
            assert!(r.point.z().sub(&p.z()).max_norm() < 1e-14);

            let d = sample::disk_point(n, m, &mut rng);
            let ed = DiskGroupElement::identity(n, m);
            let rd = disk_action(&ed, &d).unwrap();
            assert!(rd.point.w().sub(d.w()).max_norm() < 1e-14);
            assert!(rd.point.eta().sub(d.eta()).max_norm() < 1e-14);
        }
    }

    #[test]
    fn inversion_fixes_i_identity() {
        // M = (0, I, -I, 0) fixes Omega = iI
        for n in 1..=2 {
            let g = SymplecticMatrix::inversion(n);
            let p = SiegelPoint::new(Mat::zeros(n, n), Mat::identity(n)).unwrap();
            let r = siegel_action(&g, &p).unwrap();
            assert!(r.point.x().max_norm() < 1e-14);
            assert!(r.point.y().sub(&Mat::identity(n)).max_norm() < 1e-14);
        }
    }

    #[test]
    fn translation_on_h1() {
        // (1, 1; 0, 1): tau = 0.3 + 0.8i -> 1.3 + 0.8i
        let g = SymplecticMatrix::translation(Mat::from_rows(&[&[1.0]])).unwrap();
        let p = SiegelPoint::from_tau(0.3, 0.8).unwrap();
        let r = siegel_action(&g, &p).unwrap();
        assert!((r.point.x().at(0, 0) - 1.3).abs() < 1e-15);
        assert!((r.point.y().at(0, 0) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn heisenberg_only_action_is_affine_in_z() {
        // g = (I, (l, mu, k)) maps (Omega, Z) to (Omega, Z + l Omega + mu), exactly
        let mut rng = SplitMix64::new(37);
        for (n, m) in [(1, 1), (2, 2)] {
            let p = sample::jacobi_point(n, m, &mut rng);
            let h = sample::heisenberg(n, m, &mut rng);
            let g = JacobiGroupElement::new(SymplecticMatrix::identity(n), h.clone()).unwrap();
            let r = jacobi_action(&g, &p).unwrap();
            assert!(r.point.omega().sub(&p.omega()).max_norm() < 1e-15);
            let expect = p
                .z()
                .add(&h.lambda().to_complex().mul(&p.omega()))
                .add(&h.mu().to_complex());
            assert!(r.point.z().sub(&expect).max_norm() < 1e-15);
        }
    }

    #[test]
    fn inversion_on_h11_at_i() {
        // n = m = 1, g = ((0,1,-1,0), 0), (tau, z) = (i, 0) -> (i, 0);
        // the factor is C tau + D = -i
        let g = JacobiGroupElement::from_symplectic(SymplecticMatrix::inversion(1), 1);
        let p = JacobiPoint::from_tau_z(0.0, 1.0, 0.0, 0.0).unwrap();
        let r = jacobi_action(&g, &p).unwrap();
        assert!((r.point.base().y().at(0, 0) - 1.0).abs() < 1e-15);
        assert!(r.point.base().x().at(0, 0).abs() < 1e-15);
        assert!(r.point.z().max_norm() < 1e-15);
        assert!((r.factor.at(0, 0).re - 0.0).abs() < 1e-15);
        assert!((r.factor.at(0, 0).im + 1.0).abs() < 1e-15);
    }

    #[test]
    fn multiplication_law_with_trivial_sp_parts() {
        let mut rng = SplitMix64::new(41);
        let (n, m) = (2, 1);
        let h0 = sample::heisenberg(n, m, &mut rng);
        let h1 = sample::heisenberg(n, m, &mut rng);
        let g0 = JacobiGroupElement::new(SymplecticMatrix::identity(n), h0.clone()).unwrap();
        let g1 = JacobiGroupElement::new(SymplecticMatrix::identity(n), h1.clone()).unwrap();
        let g = jacobi_multiply(&g0, &g1).unwrap();
        assert!(
            g.heis()
                .lambda()
                .sub(&h0.lambda().add(h1.lambda()))
                .max_norm()
                < 1e-15
        );
        assert!(g.heis().mu().sub(&h0.mu().add(h1.mu())).max_norm() < 1e-15);
        let expect_kappa = h0
            .kappa()
            .add(h1.kappa())
            .add(&h0.lambda().mul(&h1.mu().transpose()))
            .sub(&h0.mu().mul(&h1.lambda().transpose()));
        assert!(g.heis().kappa().sub(&expect_kappa).max_norm() < 1e-15);
    }

    #[test]
    fn inverse_from_law_is_two_sided() {
        let mut rng = SplitMix64::new(43);
        for (n, m) in [(1, 1), (2, 2)] {
            for _ in 0..20 {
                let g = sample::jacobi_element(n, m, &mut rng);
                let gi = jacobi_inverse(&g).unwrap();
                for prod in [
                    jacobi_multiply(&g, &gi).unwrap(),
                    jacobi_multiply(&gi, &g).unwrap(),
                ] {
                    let e = JacobiGroupElement::identity(n, m);
                    let d = prod
                        .sp()
                        .assemble()
                        .sub(&e.sp().assemble())
                        .max_norm()
                        .max(prod.heis().lambda().max_norm())
                        .max(prod.heis().mu().max_norm())
                        .max(prod.heis().kappa().max_norm());
                    assert!(d < 1e-12, "inverse defect {d}");
                }
            }
        }
    }

    #[test]
    fn associativity_on_random_triples() {
        let mut rng = SplitMix64::new(47);
        let (n, m) = (2, 1);
        for _ in 0..100 {
            let g0 = sample::jacobi_element(n, m, &mut rng);
            let g1 = sample::jacobi_element(n, m, &mut rng);
            let g2 = sample::jacobi_element(n, m, &mut rng);
            let left = jacobi_multiply(&jacobi_multiply(&g0, &g1).unwrap(), &g2).unwrap();
            let right = jacobi_multiply(&g0, &jacobi_multiply(&g1, &g2).unwrap()).unwrap();
            let d = left
                .sp()
                .assemble()
                .sub(&right.sp().assemble())
                .max_norm()
                .max(left.heis().lambda().sub(right.heis().lambda()).max_norm())
                .max(left.heis().mu().sub(right.heis().mu()).max_norm())
                .max(left.heis().kappa().sub(right.heis().kappa()).max_norm());
            assert!(d < 1e-12, "associativity defect {d}");
        }
    }

    #[test]
    fn action_property_composition() {
        let mut rng = SplitMix64::new(53);
        for (n, m) in [(1, 1), (2, 2)] {
            for _ in 0..25 {
                let g0 = sample::jacobi_element(n, m, &mut rng);
                let g1 = sample::jacobi_element(n, m, &mut rng);
                let p = sample::jacobi_point(n, m, &mut rng);
                let lhs = jacobi_action(&jacobi_multiply(&g0, &g1).unwrap(), &p).unwrap();
                let rhs = jacobi_action(&g0, &jacobi_action(&g1, &p).unwrap().point).unwrap();
                let d = lhs
                    .point
                    .omega()
                    .sub(&rhs.point.omega())
                    .max_norm()
                    .max(lhs.point.z().sub(&rhs.point.z()).max_norm());
                assert!(d < 1e-10, "action defect {d} at (n,m)=({n},{m})");
            }
        }
    }

    #[test]
    fn star_conjugate_identity_and_inversion() {
        let e = JacobiGroupElement::identity(2, 1);
        let es = star_conjugate_unchecked(&e).unwrap();
        assert!(es.p().sub(&Mat::cidentity(2)).max_norm() < 1e-15);
        assert!(es.q().max_norm() < 1e-15);
        assert!(es.lambda().max_norm() < 1e-15 && es.mu().max_norm() < 1e-15);

        // g = ((0, I, -I, 0), 0): P = iI, Q = 0
        let g = JacobiGroupElement::from_symplectic(SymplecticMatrix::inversion(2), 1);
        let gs = star_conjugate_unchecked(&g).unwrap();
        assert!(gs.p().re().max_norm() < 1e-15);
        assert!(gs.p().im().sub(&Mat::identity(2)).max_norm() < 1e-15);
        assert!(gs.q().max_norm() < 1e-15);
    }

    #[test]
    fn disk_action_images_validate() {
        let mut rng = SplitMix64::new(59);
        for (n, m) in [(1, 1), (2, 2)] {
            for _ in 0..20 {
                let g = sample::jacobi_element(n, m, &mut rng);
                let gs = star_conjugate_unchecked(&g).unwrap();
                let p = sample::disk_point(n, m, &mut rng);
                let r = disk_action(&gs, &p).unwrap();
                // constructor re-validation is the oracle
                DiskPoint::new(r.point.w().clone(), r.point.eta().clone()).unwrap();
            }
        }
    }
}
