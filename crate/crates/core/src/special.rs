//! Eigenfunction catalog on H_1 x C, the Fourier-coefficient ODE,
//! truncated Eisenstein sums, Riemann conditions and the torus spectral
//! basis.

use alloc::vec::Vec;

use crate::action::jacobi_action;
use crate::bessel::bessel_k_cjet;
use crate::chart::Chart;
use crate::config::Tolerances;
use crate::diffops::laplacian_jacobi_jet;
use crate::domain::{HeisenbergElement, JacobiGroupElement, JacobiPoint, SymplecticMatrix};
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::jet::{CJet, Jet, JetSpace};
use crate::matrix::{cholesky, Mat};
use crate::metric::MetricScales;
use crate::num::{Cx, Scalar, C64};

// ---------------------------------------------------------------------
// Eigenfunction catalog
// ---------------------------------------------------------------------

/// One entry of the eigenfunction catalog: the field on H_1 x C, its
/// eigenvalue as a function of s, and the item/variant labels.
pub struct EigenCatalogEntry {
    pub item: usize,
    pub variant: usize,
    pub field: ScalarField,
    pub lambda: C64,
}

/// Number of variants of each catalog item.
pub fn catalog_variants(item: usize) -> usize {
    match item {
        1 => 1,
        2 | 3 => 3,
        4 => 6,
        _ => 0,
    }
}

/// Build a catalog entry. Item 1 is y^(1/2) K_{s-1/2}(2 pi |a| y)
/// e^{2 pi i a x} with eigenvalue s(s-1); items 2/3 are the y^s families
/// with eigenvalues s(s-1) and s(s+1); item 4 lists the harmonic
/// monomials with eigenvalue 0.
pub fn catalog_entry(
    item: usize,
    variant: usize,
    s: C64,
    a_param: f64,
) -> Result<EigenCatalogEntry> {
    let chart = Chart::jacobi(1, 1);
    if variant >= catalog_variants(item) {
        return Err(Error::IndexOutOfRange);
    }
    let half = C64::c(0.5, 0.0);
    let (field, lambda) = match (item, variant) {
        (1, 0) => {
            if a_param == 0.0 {
                return Err(Error::IndexOutOfRange);
            }
            let nu = s.clone() - half;
            let two_pi_a = 2.0 * core::f64::consts::PI * a_param.abs();
            let phase = 2.0 * core::f64::consts::PI * a_param;
            let f = ScalarField::new(chart, move |coords| {
                let y = &coords[1];
                let sqrt_y = CJet::from_real_jet(y.sqrt());
                let bess = bessel_k_cjet(nu.clone(), &y.scale(two_pi_a))
                    .expect("catalog Bessel quadrature converges on the sample box");
                let osc = Cx {
                    re: coords[0].zero_like(),
                    im: coords[0].scale(phase),
                }
                .exp_c();
                sqrt_y * bess * osc
            });
            (f, s.clone() * (s.clone() - C64::ONE))
        }
        (2, v) => {
            let exps = match v {
                0 => Vec::new(),
                1 => alloc::vec![(0usize, 1u8)],
                _ => alloc::vec![(2usize, 1u8)],
            };
            (
                ScalarField::y_pow_s_times(chart, s.clone(), exps),
                s.clone() * (s.clone() - C64::ONE),
            )
        }
        (3, v) => {
            let exps = match v {
                0 => alloc::vec![(3usize, 1u8)],
                1 => alloc::vec![(2usize, 1u8), (3usize, 1u8)],
                _ => alloc::vec![(0usize, 1u8), (3usize, 1u8)],
            };
            (
                ScalarField::y_pow_s_times(chart, s.clone(), exps),
                s.clone() * (s.clone() + C64::ONE),
            )
        }
        (4, v) => {
            let exps = match v {
                0 => alloc::vec![(0usize, 1u8)],
                1 => alloc::vec![(1usize, 1u8)],
                2 => alloc::vec![(2usize, 1u8)],
                3 => alloc::vec![(3usize, 1u8)],
                4 => alloc::vec![(0usize, 1u8), (3usize, 1u8)],
                _ => alloc::vec![(2usize, 1u8), (3usize, 1u8)],
            };
            (ScalarField::monomial(chart, exps), C64::ZERO)
        }
        _ => return Err(Error::IndexOutOfRange),
    };
    Ok(EigenCatalogEntry {
        item,
        variant,
        field,
        lambda,
    })
}

/// |Delta_{1,1;1,1} f - lambda f| at a point of H_1 x C.
pub fn eigen_residual(entry: &EigenCatalogEntry, point: &JacobiPoint) -> Result<f64> {
    let chart = Chart::jacobi(1, 1);
    let coords = chart.pack_jacobi(point);
    let (_, jets) = chart.seed_jets(&coords, 2);
    let fj = entry.field.jet_on(&jets);
    let lap = laplacian_jacobi_jet(&chart, &jets, &fj, &MetricScales::unit())?;
    let expect = entry.lambda.clone() * fj.value_c();
    Ok((lap - expect).abs())
}

// ---------------------------------------------------------------------
// Fourier-coefficient ODE
// ---------------------------------------------------------------------

/// Candidate solutions of the coefficient ODE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeCandidate {
    /// The zero function (trivially a solution).
    Zero,
    /// F = y^s (the degenerate n = r = 0 case).
    PowerS,
    /// F = y^(1/2) K_{s-1/2}(2 pi |n| y), the stated solution for r = 0.
    BesselHalf,
}

/// Residual of [y^2 d_yy + (y + v^2) d_vv + 2yv d_yv] F
/// = {(a y + b v)^2 + b^2 y + lambda} F with a = 2 pi n, b = 2 pi r and
/// lambda = s(s-1), for a v-independent candidate F.
pub fn fourier_ode_residual(
    cand: OdeCandidate,
    s: C64,
    n_idx: i64,
    r_idx: i64,
    y: f64,
    v: f64,
) -> Result<f64> {
    assert!(y > 0.0);
    if cand == OdeCandidate::Zero {
        return Ok(0.0);
    }
    let space = JetSpace::new(1, 2);
    let yj = Jet::variable(&space, 0, y);
    let f: CJet = match cand {
        OdeCandidate::PowerS => CJet::from_real_jet(yj.ln()).mul_c64(s.clone()).exp_c(),
        OdeCandidate::BesselHalf => {
            if n_idx == 0 {
                return Err(Error::IndexOutOfRange);
            }
            let nu = s.clone() - C64::c(0.5, 0.0);
            let arg = yj.scale(2.0 * core::f64::consts::PI * n_idx.abs() as f64);
            CJet::from_real_jet(yj.sqrt()) * bessel_k_cjet(nu, &arg)?
        }
        OdeCandidate::Zero => unreachable!(),
    };
    let fyy = f.d_c(0).d_c(0).value_c();
    let f0 = f.value_c();
    let a = 2.0 * core::f64::consts::PI * n_idx as f64;
    let b = 2.0 * core::f64::consts::PI * r_idx as f64;
    // v-independent candidate: d_vv F = d_yv F = 0
    let lhs = fyy.scale(y * y);
    let lambda = s.clone() * (s.clone() - C64::ONE);
    let factor = C64::c((a * y + b * v) * (a * y + b * v) + b * b * y, 0.0) + lambda;
    let rhs = factor * f0;
    Ok((lhs - rhs).abs())
}

// ---------------------------------------------------------------------
// Eisenstein series (truncated; term-level identities only)
// ---------------------------------------------------------------------

/// One coset datum: a completed coprime pair (c, d) plus the lambda shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EisensteinCoset {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub lambda: i64,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl EisensteinCoset {
    /// Fixed completion of a coprime (c, d): for c = 0 the pair (1, 0);
    /// otherwise the extended-gcd solution with a reduced to minimal
    /// absolute value modulo c.
    pub fn complete(c: i64, d: i64, lambda: i64) -> Result<Self> {
        let g = {
            let (mut a, mut b) = (c.abs(), d.abs());
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a
        };
        if g != 1 {
            return Err(Error::NotCoprime(c, d));
        }
        if c == 0 {
            // d = +-1; canonical representative uses d = 1
            return Ok(EisensteinCoset {
                a: d.signum(),
                b: 0,
                c: 0,
                d: d.abs() * d.signum() * d.signum(),
                lambda,
            }
            .normalized(lambda, c, d));
        }
        // a d - b c = 1
        let (_, x, y) = ext_gcd(d, c);
        let mut a = x;
        let mut b = -y;
        debug_assert_eq!(a * d - b * c, 1);
        // reduce a modulo c to the representative of minimal |a|
        let q = libm::round(a as f64 / c as f64) as i64;
        a -= q * c;
        b -= q * d;
        debug_assert_eq!(a * d - b * c, 1);
        Ok(EisensteinCoset { a, b, c, d, lambda })
    }

    fn normalized(self, lambda: i64, c: i64, d: i64) -> Self {
        EisensteinCoset {
            a: self.a,
            b: self.b,
            c,
            d,
            lambda,
        }
    }

    pub fn group_element(&self) -> Result<JacobiGroupElement> {
        let m = SymplecticMatrix::new(
            Mat::from_rows(&[&[self.a as f64]]),
            Mat::from_rows(&[&[self.b as f64]]),
            Mat::from_rows(&[&[self.c as f64]]),
            Mat::from_rows(&[&[self.d as f64]]),
        )?;
        let h = HeisenbergElement::new(
            Mat::from_rows(&[&[self.lambda as f64]]),
            Mat::zeros(1, 1),
            Mat::zeros(1, 1),
        )?;
        JacobiGroupElement::new(m, h)
    }
}

/// Coset representatives with |c|, |d|, |lambda| <= bound: coprime (c, d)
/// canonicalized under the sign ambiguity (c > 0, or c = 0 and d > 0).
pub fn eisenstein_cosets(bound: i64) -> Vec<EisensteinCoset> {
    let mut out = Vec::new();
    for c in 0..=bound {
        for d in -bound..=bound {
            if c == 0 && d != 1 {
                continue;
            }
            if c > 0 || d > 0 {
                if let Ok(base) = EisensteinCoset::complete(c, d, 0) {
                    for lambda in -bound..=bound {
                        out.push(EisensteinCoset { lambda, ..base });
                    }
                }
            }
        }
    }
    out
}

/// Term value (Im tau_g)^s Im z_g for any Jacobi group element.
pub fn eisenstein_term_elem(g: &JacobiGroupElement, s: C64, point: &JacobiPoint) -> Result<C64> {
    let moved = jacobi_action(g, point)?.point;
    let y = *moved.base().y().at(0, 0);
    let im_z = *moved.v().at(0, 0);
    Ok(s.pow_base(y).scale(im_z))
}

pub fn eisenstein_term(coset: &EisensteinCoset, s: C64, point: &JacobiPoint) -> Result<C64> {
    eisenstein_term_elem(&coset.group_element()?, s, point)
}

/// Truncated Eisenstein sum over the enumerated coset set. No convergence
/// claim is made; term-level identities are the verified contract.
pub fn eisenstein_truncated(s: C64, point: &JacobiPoint, bound: i64) -> Result<C64> {
    let mut acc = C64::ZERO;
    for coset in eisenstein_cosets(bound) {
        acc = acc + eisenstein_term(&coset, s.clone(), point)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------
// Riemann conditions and the torus spectral basis
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RiemannCheck {
    pub rc1_defect: f64,
    pub rc2_posdef: bool,
    pub rc2_min_pivot: f64,
}

/// Check the period-matrix conditions for Omega* = (I, Omega):
/// Omega* J t(Omega*) = 0 and -(1/i) Omega* J t(conj Omega*) > 0.
pub fn riemann_conditions_check(omega: &Mat<C64>) -> RiemannCheck {
    let n = omega.rows();
    // Omega* J t(Omega*) = -Omega + t(Omega); second form = (1/i)(Omega -
    // conj Omega) = 2 Im Omega, computed through the block product
    let mut star = Mat::czeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                star.set(i, j, C64::ONE);
            }
            star.set(i, n + j, omega.at(i, j).clone());
        }
    }
    let mut jmat = Mat::czeros(2 * n, 2 * n);
    for i in 0..n {
        jmat.set(i, n + i, C64::ONE);
        jmat.set(n + i, i, C64::c(-1.0, 0.0));
    }
    let rc1 = star.mul(&jmat).mul(&star.transpose()).max_norm();
    let m2 = star
        .mul(&jmat)
        .mul(&star.conj().transpose())
        .map(|e| e.clone() * C64::c(0.0, 1.0)); // -(1/i) = i
    let herm = Mat::from_fn(n, n, |i, j| {
        (m2.at(i, j).clone() + m2.at(j, i).conj()).scale(0.5)
    });
    match cholesky(&herm, 1e-9, Tolerances::default().posdef_tol) {
        Ok(l) => {
            let mut min_piv = f64::INFINITY;
            for i in 0..n {
                min_piv = min_piv.min(l.at(i, i).re);
            }
            RiemannCheck {
                rc1_defect: rc1,
                rc2_posdef: true,
                rc2_min_pivot: min_piv * min_piv,
            }
        }
        Err(_) => RiemannCheck {
            rc1_defect: rc1,
            rc2_posdef: false,
            rc2_min_pivot: f64::NEG_INFINITY,
        },
    }
}

/// The torus character E_{Omega;A,B}(Z)
/// = exp(2 pi i (tr(tA U) + tr((B - A X) Y^-1 tV))).
pub fn torus_character(omega: &JacobiPoint, a_idx: &Mat<f64>, b_idx: &Mat<f64>) -> Result<C64> {
    let tol = Tolerances::default();
    let yinv = omega.base().y().inverse(tol.pivot_tol)?;
    let t1 = a_idx.transpose().mul(omega.u()).trace();
    let t2 = b_idx
        .sub(&a_idx.mul(omega.base().x()))
        .mul(&yinv)
        .mul(&omega.v().transpose())
        .trace();
    Ok(C64::c(0.0, 2.0 * core::f64::consts::PI * (t1 + t2)).exp())
}

/// Gram matrix of torus characters over the fundamental parallelotope of
/// the lattice Z + Z Omega (n = m = 1) with a G x G uniform grid and the
/// normalized invariant measure.
pub fn torus_gram(
    base: &crate::domain::SiegelPoint,
    indices: &[(i64, i64)],
    grid: usize,
) -> Result<Mat<C64>> {
    if base.n() != 1 {
        return Err(Error::UnsupportedDimension { n: base.n(), m: 1 });
    }
    let x = *base.x().at(0, 0);
    let y = *base.y().at(0, 0);
    let k = indices.len();
    // character values per grid node
    let mut vals = alloc::vec![alloc::vec![C64::ZERO; grid * grid]; k];
    for ia in 0..grid {
        for ib in 0..grid {
            let alpha = ia as f64 / grid as f64;
            let beta = ib as f64 / grid as f64;
            // Z = alpha + beta tau
            let u = alpha + beta * x;
            let v = beta * y;
            let p = JacobiPoint::from_tau_z(x, y, u, v)?;
            for (j, (ai, bi)) in indices.iter().enumerate() {
                let e = torus_character(
                    &p,
                    &Mat::from_rows(&[&[*ai as f64]]),
                    &Mat::from_rows(&[&[*bi as f64]]),
                )?;
                vals[j][ia * grid + ib] = e;
            }
        }
    }
    let norm = 1.0 / (grid * grid) as f64;
    let gram = Mat::from_fn(k, k, |i, j| {
        let mut acc = C64::ZERO;
        for t in 0..grid * grid {
            acc = acc + vals[i][t].clone() * vals[j][t].conj();
        }
        acc.scale(norm)
    });
    let mut offdiag = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                offdiag = offdiag.max(gram.at(i, j).abs());
            }
        }
    }
    if offdiag > 1e-4 {
        return Err(Error::GridTooCoarse { offdiag });
    }
    Ok(gram)
}
