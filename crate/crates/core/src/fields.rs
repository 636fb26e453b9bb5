//! Scalar fields on a chart, evaluated through jets.
//!
//! A field is a chart plus an evaluator that maps coordinate jets to a
//! complex jet. Because the evaluator works on arbitrary jets, feeding it
//! the jets of a group action's image coordinates yields the composed
//! field f(g . p) with exact derivatives -- no symbolic chain rule needed.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::chart::Chart;
use crate::jet::{CJet, Jet, JetSpace};
use crate::num::{Scalar, C64};
use crate::rng::SplitMix64;

type Eval = dyn Fn(&[Jet]) -> CJet + Send + Sync;

pub struct ScalarField {
    chart: Chart,
    eval: Box<Eval>,
}

impl core::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "ScalarField({:?})", self.chart)
    }
}

impl ScalarField {
    pub fn new(chart: Chart, eval: impl Fn(&[Jet]) -> CJet + Send + Sync + 'static) -> Self {
        ScalarField {
            chart,
            eval: Box::new(eval),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Evaluate on caller-supplied coordinate jets (composition path).
    pub fn jet_on(&self, coords: &[Jet]) -> CJet {
        (self.eval)(coords)
    }

    /// Jet of the field at a point, seeding fresh coordinate variables.
    pub fn jet_at(&self, coords: &[f64], order: usize) -> CJet {
        let (_, jets) = self.chart.seed_jets(coords, order);
        (self.eval)(&jets)
    }

    pub fn value_at(&self, coords: &[f64]) -> C64 {
        self.jet_at(coords, 0).value_c()
    }

    // ---- constructors ----

    pub fn constant(chart: Chart, c: C64) -> Self {
        ScalarField::new(chart, move |coords| {
            CJet::constant_c(coords[0].space(), c.clone())
        })
    }

    pub fn coordinate(chart: Chart, k: usize) -> Self {
        ScalarField::new(chart, move |coords| CJet::from_real_jet(coords[k].clone()))
    }

    /// Real monomial in the chart coordinates.
    pub fn monomial(chart: Chart, exps: Vec<(usize, u8)>) -> Self {
        ScalarField::new(chart, move |coords| {
            let mut acc = coords[0].one_like();
            for &(k, e) in &exps {
                for _ in 0..e {
                    acc = acc.mul_jet(&coords[k]);
                }
            }
            CJet::from_real_jet(acc)
        })
    }

    /// Sum of complex-coefficient monomials times exp of a complex linear
    /// form: (sum_t c_t x^(e_t)) * exp(sum_k a_k x_k).
    pub fn poly_exp(chart: Chart, terms: Vec<(C64, Vec<(usize, u8)>)>, lin: Vec<C64>) -> Self {
        debug_assert_eq!(lin.len(), chart.dim());
        ScalarField::new(chart, move |coords| {
            let space = coords[0].space();
            let mut poly = CJet::constant_c(space, C64::ZERO);
            for (c, exps) in &terms {
                let mut mono = coords[0].one_like();
                for &(k, e) in exps {
                    for _ in 0..e {
                        mono = mono.mul_jet(&coords[k]);
                    }
                }
                poly = poly + CJet::from_real_jet(mono).mul_c64(c.clone());
            }
            let mut arg = CJet::constant_c(space, C64::ZERO);
            for (k, a) in lin.iter().enumerate() {
                if a.re != 0.0 || a.im != 0.0 {
                    arg = arg + CJet::from_real_jet(coords[k].clone()).mul_c64(a.clone());
                }
            }
            poly * arg.exp_c()
        })
    }

    /// y_{11}^s for complex s (any chart whose y-block is positive at the
    /// evaluation points; the workhorse eigenfunction on H_1 and H_1 x C).
    pub fn y_pow_s(chart: Chart, s: C64) -> Self {
        let iy = chart.iy(0, 0);
        ScalarField::new(chart, move |coords| {
            let ln_y = coords[iy].ln();
            CJet::from_real_jet(ln_y).mul_c64(s.clone()).exp_c()
        })
    }

    /// y^s times a real monomial (catalog items like y^s x, y^s uv).
    pub fn y_pow_s_times(chart: Chart, s: C64, exps: Vec<(usize, u8)>) -> Self {
        let iy = chart.iy(0, 0);
        ScalarField::new(chart, move |coords| {
            let ln_y = coords[iy].ln();
            let head = CJet::from_real_jet(ln_y).mul_c64(s.clone()).exp_c();
            let mut mono = coords[0].one_like();
            for &(k, e) in &exps {
                for _ in 0..e {
                    mono = mono.mul_jet(&coords[k]);
                }
            }
            head * CJet::from_real_jet(mono)
        })
    }

    /// Pointwise product of two fields on the same chart.
    pub fn product(a: ScalarField, b: ScalarField) -> Self {
        debug_assert_eq!(a.chart, b.chart);
        let chart = a.chart;
        ScalarField::new(chart, move |coords| a.jet_on(coords) * b.jet_on(coords))
    }
}

/// Seeded corpus of polynomial-times-exponential test fields, rich enough
/// to separate differential operators of order <= 4.
pub fn random_field(chart: Chart, rng: &mut SplitMix64, complex_coeffs: bool) -> ScalarField {
    let d = chart.dim();
    let n_terms = 2 + (rng.next_u64() % 3) as usize;
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        let c = if complex_coeffs {
            C64::c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
        } else {
            C64::c(rng.uniform(-1.0, 1.0), 0.0)
        };
        let deg = (rng.next_u64() % 3) as usize; // 0, 1 or 2
        let mut exps = Vec::new();
        for _ in 0..deg {
            exps.push(((rng.next_u64() as usize) % d, 1u8));
        }
        terms.push((c, exps));
    }
    let lin: Vec<C64> = (0..d)
        .map(|_| {
            if rng.next_f64() < 0.5 {
                C64::ZERO
            } else if complex_coeffs {
                C64::c(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
            } else {
                C64::c(rng.uniform(-0.3, 0.3), 0.0)
            }
        })
        .collect();
    ScalarField::poly_exp(chart, terms, lin)
}

/// Shared helper: seed plain (non-field) coordinate jets for operators
/// that need coefficient jets at a point.
pub fn seed_coords(chart: &Chart, coords: &[f64], order: usize) -> (Arc<JetSpace>, Vec<Jet>) {
    chart.seed_jets(coords, order)
}

/// Wirtinger first-derivative matrices of a field at a point.
///
/// For symmetric blocks the entries carry the (1 + delta)/2 weight;
/// d/dOmega and d/dZ are returned in the layouts n x n and n x m used by
/// the closed-form operators.
#[derive(Debug, Clone)]
pub struct WirtingerMatrices {
    pub d_omega: crate::matrix::Mat<C64>,
    pub d_omega_bar: crate::matrix::Mat<C64>,
    pub d_z: Option<crate::matrix::Mat<C64>>,
    pub d_z_bar: Option<crate::matrix::Mat<C64>>,
}

pub fn wirtinger_matrices(f: &ScalarField, coords: &[f64]) -> WirtingerMatrices {
    let chart = *f.chart();
    let j = f.jet_at(coords, 1);
    let grad = |k: usize| -> C64 {
        let mut e = alloc::vec![0u8; chart.dim()];
        e[k] = 1;
        j.deriv_c(&e)
    };
    let half = C64::c(0.5, 0.0);
    let mhalf_i = C64::c(0.0, -0.5);
    let phalf_i = C64::c(0.0, 0.5);
    let d_omega = crate::matrix::Mat::from_fn(chart.n, chart.n, |mu, nu| {
        let w = if mu == nu { 1.0 } else { 0.5 };
        (grad(chart.ix(mu, nu)) * half.clone() + grad(chart.iy(mu, nu)) * mhalf_i.clone()).scale(w)
    });
    let d_omega_bar = crate::matrix::Mat::from_fn(chart.n, chart.n, |mu, nu| {
        let w = if mu == nu { 1.0 } else { 0.5 };
        (grad(chart.ix(mu, nu)) * half.clone() + grad(chart.iy(mu, nu)) * phalf_i.clone()).scale(w)
    });
    let (d_z, d_z_bar) = if chart.m > 0 {
        let dz = crate::matrix::Mat::from_fn(chart.n, chart.m, |l, k| {
            grad(chart.iu(k, l)) * half.clone() + grad(chart.iv(k, l)) * mhalf_i.clone()
        });
        let dzb = crate::matrix::Mat::from_fn(chart.n, chart.m, |l, k| {
            grad(chart.iu(k, l)) * half.clone() + grad(chart.iv(k, l)) * phalf_i.clone()
        });
        (Some(dz), Some(dzb))
    } else {
        (None, None)
    };
    WirtingerMatrices {
        d_omega,
        d_omega_bar,
        d_z,
        d_z_bar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Cx;

    #[test]
    fn coordinate_field_has_unit_gradient() {
        let chart = Chart::jacobi(1, 1);
        let f = ScalarField::coordinate(chart, 2);
        let j = f.jet_at(&[0.1, 1.0, 0.4, -0.2], 1);
        assert!((j.value_c().re - 0.4).abs() < 1e-15);
        assert!((j.deriv_c(&[0, 0, 1, 0]).re - 1.0).abs() < 1e-15);
        assert!(j.deriv_c(&[1, 0, 0, 0]).abs() < 1e-15);
    }

    #[test]
    fn y_pow_s_value_and_derivative() {
        let chart = Chart::jacobi(1, 1);
        let s = C64::c(1.5, 0.5);
        let f = ScalarField::y_pow_s(chart, s.clone());
        let y: f64 = 2.0;
        let j = f.jet_at(&[0.3, y, 0.0, 0.0], 2);
        let expect = s.clone().pow_base(y);
        assert!((j.value_c() - expect.clone()).abs() < 1e-13);
        // d/dy y^s = s y^(s-1)
        let expect_dy = s.clone() * (s.clone() - C64::ONE).pow_base(y);
        assert!((j.deriv_c(&[0, 1, 0, 0]) - expect_dy).abs() < 1e-12);
    }

    #[test]
    fn random_fields_are_deterministic_under_seed() {
        let chart = Chart::jacobi(2, 1);
        let coords = [0.1, -0.2, 0.05, 1.1, 0.2, 0.9, 0.3, -0.4, 0.2, 0.6];
        let mut r1 = SplitMix64::new(99);
        let mut r2 = SplitMix64::new(99);
        let f1 = random_field(chart, &mut r1, true);
        let f2 = random_field(chart, &mut r2, true);
        let a = f1.value_at(&coords);
        let b = f2.value_at(&coords);
        assert_eq!(a.re, b.re);
        assert_eq!(a.im, b.im);
    }

    #[test]
    fn wirtinger_conjugation_for_real_fields() {
        // for a real-valued field, d/dOmega-bar = conj(d/dOmega)
        let chart = Chart::jacobi(2, 1);
        let mut rng = SplitMix64::new(12);
        let f = random_field(chart, &mut rng, false);
        let coords = [0.1, -0.2, 0.05, 1.1, 0.2, 0.9, 0.3, -0.4, 0.2, 0.6];
        let w = wirtinger_matrices(&f, &coords);
        let defect = w.d_omega_bar.sub(&w.d_omega.conj()).max_norm();
        assert!(defect < 1e-13);
    }

    #[test]
    fn wirtinger_on_holomorphic_coordinate() {
        // f = omega_{11} = x_{11} + i y_{11}: d/dOmega = E_11, d/dOmega-bar = 0
        let chart = Chart::siegel(2);
        let f = ScalarField::new(chart, move |coords| {
            let x = coords[chart.ix(0, 0)].clone();
            let y = coords[chart.iy(0, 0)].clone();
            Cx { re: x, im: y }
        });
        let coords = [0.2, 0.1, -0.3, 1.0, 0.1, 1.2];
        let w = wirtinger_matrices(&f, &coords);
        assert!((w.d_omega.at(0, 0).re - 1.0).abs() < 1e-14);
        assert!(w.d_omega.at(0, 0).im.abs() < 1e-14);
        assert!(w.d_omega.at(0, 1).abs() < 1e-14);
        assert!(w.d_omega_bar.max_norm() < 1e-14);
    }
}
