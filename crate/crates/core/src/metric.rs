//! Invariant metric tensors, the invariant volume element, pullbacks and
//! a generic Laplace-Beltrami operator.
//!
//! Metric tensors come from polarizing the invariant quadratic forms over
//! the chart's tangent basis; the chart ordering in [`crate::chart`] is
//! normative. The Laplace-Beltrami operator here deliberately uses central
//! differences for the metric derivatives (step `h_lb`) so it stays
//! independent of the jet engine's higher orders and can serve as an
//! oracle for the closed-form operators.

use alloc::vec::Vec;

use crate::action::{disk_image_coords, jacobi_image_coords, siegel_image_coords};
use crate::cayley::to_space_coords;
use crate::chart::Chart;
use crate::config::Tolerances;
use crate::domain::{
    DiskGroupElement, DiskPoint, JacobiGroupElement, JacobiPoint, SiegelPoint, SymplecticMatrix,
};
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::jet::Jet;
use crate::matrix::{cholesky_real, Mat};
use crate::num::{Scalar, C64};

/// The two positive scale constants of the invariant metric family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricScales {
    pub a_scale: f64,
    pub b_scale: f64,
}

impl MetricScales {
    pub fn new(a_scale: f64, b_scale: f64) -> Self {
        assert!(
            a_scale > 0.0 && b_scale > 0.0,
            "metric scales must be positive"
        );
        MetricScales { a_scale, b_scale }
    }
    pub fn unit() -> Self {
        MetricScales {
            a_scale: 1.0,
            b_scale: 1.0,
        }
    }
}

/// Real symmetric positive definite bilinear form at a point, in the
/// chart's fixed coordinate ordering.
#[derive(Debug, Clone)]
pub struct MetricTensor {
    chart: Chart,
    g: Mat<f64>,
}

impl MetricTensor {
    pub fn new(chart: Chart, g: Mat<f64>, tol: &Tolerances) -> Result<Self> {
        debug_assert_eq!(g.rows(), chart.dim());
        cholesky_real(&g, 1e-8, tol.posdef_tol)?;
        Ok(MetricTensor { chart, g })
    }
    pub fn chart(&self) -> &Chart {
        &self.chart
    }
    pub fn g(&self) -> &Mat<f64> {
        &self.g
    }
}

/// Polarize a quadratic form q into its symmetric matrix:
/// G_ii = q(e_i), G_ij = (q(e_i + e_j) - q(e_i) - q(e_j)) / 2.
/// The form must be real-valued on real tangents; a larger imaginary part
/// signals a transcription bug in the assembled trace expression.
fn polarize(dim: usize, q: &mut dyn FnMut(&[f64]) -> C64) -> Result<Mat<f64>> {
    let mut basis_vals = Vec::with_capacity(dim);
    let mut t = alloc::vec![0.0; dim];
    let real_part = |v: C64| -> Result<f64> {
        if v.im.abs() > 1e-13 * (1.0 + v.re.abs()) {
            return Err(Error::FormNotReal { imag: v.im });
        }
        Ok(v.re)
    };
    for i in 0..dim {
        t[i] = 1.0;
        basis_vals.push(real_part(q(&t))?);
        t[i] = 0.0;
    }
    let mut g = Mat::zeros(dim, dim);
    for i in 0..dim {
        g.set(i, i, basis_vals[i]);
        for j in (i + 1)..dim {
            t[i] = 1.0;
            t[j] = 1.0;
            let mixed = real_part(q(&t))?;
            t[i] = 0.0;
            t[j] = 0.0;
            let v = 0.5 * (mixed - basis_vals[i] - basis_vals[j]);
            g.set(i, j, v);
            g.set(j, i, v);
        }
    }
    Ok(g)
}

fn d_omega_of(chart: &Chart, t: &[f64]) -> Mat<C64> {
    Mat::from_fn(chart.n, chart.n, |i, j| {
        C64::c(t[chart.ix(i, j)], t[chart.iy(i, j)])
    })
}

fn d_z_of(chart: &Chart, t: &[f64]) -> Mat<C64> {
    Mat::from_fn(chart.m, chart.n, |k, l| {
        C64::c(t[chart.iu(k, l)], t[chart.iv(k, l)])
    })
}

/// ds^2 = A tr(Y^-1 dOmega Y^-1 conj(dOmega)) on H_n.
pub fn siegel_metric_tensor(p: &SiegelPoint, a_scale: f64) -> Result<MetricTensor> {
    let tol = Tolerances::default();
    let chart = Chart::siegel(p.n());
    let yinv = p.y().to_complex().inverse(tol.pivot_tol)?;
    let mut q = |t: &[f64]| -> C64 {
        let dom = d_omega_of(&chart, t);
        yinv.mul(&dom)
            .mul(&yinv)
            .mul(&dom.conj())
            .trace()
            .scale(a_scale)
    };
    MetricTensor::new(chart, polarize(chart.dim(), &mut q)?, &tol)
}

/// The invariant metric on H_{n,m}; `scales` are the A and B constants.
pub fn jacobi_metric_tensor(p: &JacobiPoint, scales: &MetricScales) -> Result<MetricTensor> {
    let g = jacobi_metric_matrix(p, scales.a_scale, scales.b_scale)?;
    MetricTensor::new(Chart::jacobi(p.n(), p.m()), g, &Tolerances::default())
}

/// The A-block and B-block assembled independently: G(A, B) = A Ga + B Gb.
pub fn jacobi_metric_blocks(p: &JacobiPoint) -> Result<(Mat<f64>, Mat<f64>)> {
    Ok((
        jacobi_metric_matrix(p, 1.0, 0.0)?,
        jacobi_metric_matrix(p, 0.0, 1.0)?,
    ))
}

fn jacobi_metric_matrix(p: &JacobiPoint, a_scale: f64, b_scale: f64) -> Result<Mat<f64>> {
    let tol = Tolerances::default();
    let chart = Chart::jacobi(p.n(), p.m());
    let yinv = p.base().y().to_complex().inverse(tol.pivot_tol)?;
    let v = p.v().to_complex();
    let vt = v.transpose();
    let mut q = |t: &[f64]| -> C64 {
        let dom = d_omega_of(&chart, t);
        let dom_bar = dom.conj();
        let dz = d_z_of(&chart, t);
        let dz_bar = dz.conj();
        let mut acc = C64::ZERO;
        if a_scale != 0.0 {
            acc = acc
                + yinv
                    .mul(&dom)
                    .mul(&yinv)
                    .mul(&dom_bar)
                    .trace()
                    .scale(a_scale);
        }
        if b_scale != 0.0 {
            let t1 = yinv
                .mul(&vt)
                .mul(&v)
                .mul(&yinv)
                .mul(&dom)
                .mul(&yinv)
                .mul(&dom_bar)
                .trace();
            let t2 = yinv.mul(&dz.transpose()).mul(&dz_bar).trace();
            let t3 = v
                .mul(&yinv)
                .mul(&dom)
                .mul(&yinv)
                .mul(&dz_bar.transpose())
                .trace();
            let t4 = v
                .mul(&yinv)
                .mul(&dom_bar)
                .mul(&yinv)
                .mul(&dz.transpose())
                .trace();
            acc = acc + (t1 + t2 - t3 - t4).scale(b_scale);
        }
        acc
    };
    polarize(chart.dim(), &mut q)
}

/// The invariant metric on the Siegel-Jacobi disk. The stored tensor is
/// ds~^2, i.e. four times the quarter-form, so that the Cayley pullback
/// of the H_{n,m} metric matches it exactly.
pub fn disk_metric_tensor(p: &DiskPoint, scales: &MetricScales) -> Result<MetricTensor> {
    let tol = Tolerances::default();
    let chart = Chart::disk(p.n(), p.m());
    let n = p.n();
    let id = Mat::cidentity(n);
    let w = p.w();
    let wb = w.conj();
    let eta = p.eta();
    let etab = eta.conj();
    // rho1 = (I - W conj W)^-1, rho2 = (I - conj W W)^-1
    let rho1 = id.sub(&w.mul(&wb)).inverse(tol.pivot_tol)?;
    let rho2 = id.sub(&wb.mul(w)).inverse(tol.pivot_tol)?;
    let one_minus_w_inv = id.sub(w).inverse(tol.pivot_tol)?;
    let one_minus_wb_inv = id.sub(&wb).inverse(tol.pivot_tol)?;
    let (a, b) = (scales.a_scale, scales.b_scale);
    let mut q = |t: &[f64]| -> C64 {
        let dw = d_omega_of(&chart, t);
        let dwb = dw.conj();
        let de = d_z_of(&chart, t);
        let deb = de.conj();
        let mut acc = rho1.mul(&dw).mul(&rho2).mul(&dwb).trace().scale(a);
        // eta-block terms
        let b1 = rho1.mul(&de.transpose()).mul(&deb).trace();
        let b2 = eta
            .mul(&wb)
            .sub(&etab)
            .mul(&rho1)
            .mul(&dw)
            .mul(&rho2)
            .mul(&deb.transpose())
            .trace();
        let b3 = etab
            .mul(w)
            .sub(eta)
            .mul(&rho2)
            .mul(&dwb)
            .mul(&rho1)
            .mul(&de.transpose())
            .trace();
        let b4 = rho1
            .mul(&eta.transpose())
            .mul(eta)
            .mul(&rho2)
            .mul(&wb)
            .mul(&dw)
            .mul(&rho2)
            .mul(&dwb)
            .trace();
        let b5 = w
            .mul(&rho2)
            .mul(&etab.transpose())
            .mul(&etab)
            .mul(&rho1)
            .mul(&dw)
            .mul(&rho2)
            .mul(&dwb)
            .trace();
        let b6 = rho1
            .mul(&eta.transpose())
            .mul(&etab)
            .mul(&rho1)
            .mul(&dw)
            .mul(&rho2)
            .mul(&dwb)
            .trace();
        let b7 = one_minus_wb_inv
            .mul(&etab.transpose())
            .mul(eta)
            .mul(&wb)
            .mul(&rho1)
            .mul(&dw)
            .mul(&rho2)
            .mul(&dwb)
            .trace();
        let b8 = one_minus_wb_inv
            .mul(&id.sub(w))
            .mul(&rho2)
            .mul(&etab.transpose())
            .mul(eta)
            .mul(&rho2)
            .mul(&id.sub(&wb))
            .mul(&one_minus_w_inv)
            .mul(&dw)
            .mul(&rho2)
            .mul(&dwb)
            .trace();
        let b9 = rho1
            .mul(&id.sub(w))
            .mul(&one_minus_wb_inv)
            .mul(&etab.transpose())
            .mul(eta)
            .mul(&one_minus_w_inv)
            .mul(&dw)
            .mul(&rho2)
            .mul(&dwb)
            .trace();
        acc = acc + (b1 + b2 + b3 - b4 - b5 + b6 + b7 + b8 - b9).scale(b);
        acc.scale(4.0)
    };
    MetricTensor::new(chart, polarize(chart.dim(), &mut q)?, &tol)
}

/// The invariant volume density (det Y)^-(n + m + 1) on H_{n,m}.
pub fn volume_density(p: &JacobiPoint) -> f64 {
    let det = p
        .base()
        .y()
        .det(Tolerances::default().pivot_tol)
        .expect("valid point has invertible Y");
    libm::pow(det, -((p.n() + p.m() + 1) as f64))
}

/// Pullback of a quadratic form by a linear map: tJ G J.
pub fn pullback(jacobian: &Mat<f64>, g_image: &Mat<f64>) -> Mat<f64> {
    jacobian.transpose().mul(g_image).mul(jacobian)
}

/// Jacobian of a coordinate map via order-1 jets; `map` receives seeded
/// coordinate jets and returns image coordinate jets.
pub fn jacobian_of(
    chart: &Chart,
    coords: &[f64],
    map: &dyn Fn(&[Jet]) -> Result<Vec<Jet>>,
) -> Result<Mat<f64>> {
    let (_, jets) = chart.seed_jets(coords, 1);
    let image = map(&jets)?;
    let dim_in = chart.dim();
    let mut e = alloc::vec![0u8; dim_in];
    Ok(Mat::from_fn(image.len(), dim_in, |i, j| {
        e.iter_mut().for_each(|x| *x = 0);
        e[j] = 1;
        image[i].deriv(&e)
    }))
}

pub fn siegel_action_jacobian(g: &SymplecticMatrix, p: &SiegelPoint) -> Result<Mat<f64>> {
    let chart = Chart::siegel(p.n());
    let coords = chart.pack_siegel(p);
    let tol = Tolerances::default();
    jacobian_of(&chart, &coords, &|jets| {
        siegel_image_coords(g, &chart, jets, tol.pivot_tol)
    })
}

pub fn jacobi_action_jacobian(g: &JacobiGroupElement, p: &JacobiPoint) -> Result<Mat<f64>> {
    let chart = Chart::jacobi(p.n(), p.m());
    let coords = chart.pack_jacobi(p);
    let tol = Tolerances::default();
    jacobian_of(&chart, &coords, &|jets| {
        jacobi_image_coords(g, &chart, jets, tol.pivot_tol)
    })
}

pub fn disk_action_jacobian(g: &DiskGroupElement, p: &DiskPoint) -> Result<Mat<f64>> {
    let chart = Chart::disk(p.n(), p.m());
    let coords = chart.pack_disk(p);
    let tol = Tolerances::default();
    jacobian_of(&chart, &coords, &|jets| {
        disk_image_coords(g, &chart, jets, tol.pivot_tol)
    })
}

/// Jacobian of the partial Cayley transform at a disk point.
pub fn cayley_jacobian(p: &DiskPoint) -> Result<Mat<f64>> {
    let chart = Chart::disk(p.n(), p.m());
    let coords = chart.pack_disk(p);
    let tol = Tolerances::default();
    jacobian_of(&chart, &coords, &|jets| {
        to_space_coords(&chart, jets, tol.pivot_tol)
    })
}

/// Generic Laplace-Beltrami operator of a metric field:
/// (1/sqrt(det G)) sum_i d_i(sqrt(det G) G^{ij} d_j f).
///
/// Metric derivatives use central differences of step
/// `h_lb * (1 + |x_i|)`; derivatives of f come from order-2 jets.
pub fn laplace_beltrami(
    metric_field: &dyn Fn(&[f64]) -> Result<Mat<f64>>,
    f: &ScalarField,
    coords: &[f64],
    tol: &Tolerances,
) -> Result<C64> {
    let d = coords.len();
    let g = metric_field(coords)?;
    let ginv = g.inverse(tol.pivot_tol)?;
    let cond = g.inf_norm() * ginv.inf_norm();
    if cond > tol.cond_max {
        return Err(Error::IllConditioned { cond });
    }
    let det = g.det(tol.pivot_tol)?;
    if det <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            index: 0,
            pivot: det,
        });
    }
    let sqrt_det = libm::sqrt(det);

    // b_j(x) = sqrt(det G) G^{ij} for the i currently varied
    let b_vec = |x: &[f64]| -> Result<Mat<f64>> {
        let g = metric_field(x)?;
        let ginv = g.inverse(tol.pivot_tol)?;
        let det = g.det(tol.pivot_tol)?;
        Ok(ginv.scale(libm::sqrt(det)))
    };

    let fj = f.jet_at(coords, 2);
    let mut e = alloc::vec![0u8; d];
    let grad = |k: usize, e: &mut [u8]| -> C64 {
        e.iter_mut().for_each(|x| *x = 0);
        e[k] = 1;
        fj.deriv_c(e)
    };

    let mut acc = C64::ZERO;
    let mut x = coords.to_vec();
    for i in 0..d {
        let h = tol.h_lb * (1.0 + coords[i].abs());
        x[i] = coords[i] + h;
        let bp = b_vec(&x)?;
        x[i] = coords[i] - h;
        let bm = b_vec(&x)?;
        x[i] = coords[i];
        for j in 0..d {
            let db = (bp.at(i, j) - bm.at(i, j)) / (2.0 * h);
            acc = acc + grad(j, &mut e).scale(db / sqrt_det);
        }
    }
    for i in 0..d {
        for j in 0..d {
            e.iter_mut().for_each(|x| *x = 0);
            e[i] += 1;
            e[j] += 1;
            acc = acc + fj.deriv_c(&e).scale(*ginv.at(i, j));
        }
    }
    Ok(acc)
}
