//! Truncated multivariate Taylor arithmetic (jets) up to order 4.
//!
//! A [`Jet`] carries every partial derivative of a function at a point up
//! to the space order, exactly: products are truncated convolutions, and
//! function composition falls out of evaluating one jet-built expression
//! on the coordinates of another. This is what makes the
//! operator-invariance harness exact instead of finite-difference based.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::num::{Cx, Scalar, C64};

pub const MAX_ORDER: usize = 4;

/// Monomial bookkeeping for jets in `dim` variables of degree <= `order`.
///
/// Monomials are graded by total degree; within a degree the first
/// exponent descends, recursively. Spaces keep a handle on the
/// one-order-lower space so derivatives can drop order without a registry.
#[derive(Debug)]
pub struct JetSpace {
    dim: usize,
    order: usize,
    /// flat `len x dim` exponent table in rank order
    monomials: Vec<u8>,
    /// degree of each monomial
    degs: Vec<u8>,
    /// first index of each total degree (length order + 2)
    degree_start: Vec<usize>,
    /// Pascal triangle up to dim + order
    binom: Vec<Vec<u64>>,
    lower: Option<Arc<JetSpace>>,
}

fn pascal(n: usize) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; n + 1]; n + 1];
    for (i, row) in b.iter_mut().enumerate() {
        row[0] = 1;
        for j in 1..=i {
            row[j] = if j == i { 1 } else { 0 };
        }
    }
    for i in 2..=n {
        for j in 1..i {
            b[i][j] = b[i - 1][j - 1] + b[i - 1][j];
        }
    }
    b
}

impl JetSpace {
    pub fn new(dim: usize, order: usize) -> Arc<JetSpace> {
        assert!(dim >= 1);
        assert!(order <= MAX_ORDER, "jet order capped at {MAX_ORDER}");
        let binom = pascal(dim + order + 2);
        // count of monomials of degree <= r in d vars: C(d + r, r)
        let count = |r: isize| -> usize {
            if r < 0 {
                0
            } else {
                binom[dim + r as usize][r as usize] as usize
            }
        };
        let mut monomials = Vec::new();
        let mut degs = Vec::new();
        let mut degree_start = Vec::with_capacity(order + 2);
        // enumerate degree by degree, first exponent descending
        fn gen(dim: usize, deg: usize, prefix: &mut Vec<u8>, out: &mut Vec<u8>) {
            if dim == 1 {
                prefix.push(deg as u8);
                out.extend_from_slice(prefix);
                prefix.pop();
                return;
            }
            for e1 in (0..=deg).rev() {
                prefix.push(e1 as u8);
                gen(dim - 1, deg - e1, prefix, out);
                prefix.pop();
            }
        }
        for g in 0..=order {
            degree_start.push(count(g as isize - 1));
            let mut prefix = Vec::with_capacity(dim);
            gen(dim, g, &mut prefix, &mut monomials);
            let n_g = count(g as isize) - count(g as isize - 1);
            for _ in 0..n_g {
                degs.push(g as u8);
            }
        }
        degree_start.push(count(order as isize));
        let lower = if order == 0 {
            None
        } else {
            Some(JetSpace::new(dim, order - 1))
        };
        Arc::new(JetSpace {
            dim,
            order,
            monomials,
            degs,
            degree_start,
            binom,
            lower,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn len(&self) -> usize {
        self.degs.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn lower(&self) -> Option<&Arc<JetSpace>> {
        self.lower.as_ref()
    }
    pub fn monomial(&self, i: usize) -> &[u8] {
        &self.monomials[i * self.dim..(i + 1) * self.dim]
    }
    pub fn degree_of(&self, i: usize) -> usize {
        self.degs[i] as usize
    }
    pub fn degree_block(&self, g: usize) -> core::ops::Range<usize> {
        self.degree_start[g]..self.degree_start[g + 1]
    }

    fn t_count(&self, d: usize, r: isize) -> usize {
        if r < 0 {
            0
        } else {
            self.binom[d + r as usize][r as usize] as usize
        }
    }

    /// Rank of an exponent vector (degree must be <= order).
    pub fn rank(&self, e: &[u8]) -> usize {
        debug_assert_eq!(e.len(), self.dim);
        let g: usize = e.iter().map(|&x| x as usize).sum();
        debug_assert!(g <= self.order);
        let mut idx = self.t_count(self.dim, g as isize - 1);
        let mut rem = g;
        for (pos, &ek) in e.iter().enumerate() {
            let d_left = self.dim - pos;
            if d_left == 1 {
                break;
            }
            // monomials whose exponent here is larger come first
            idx += self.t_count(d_left - 1, rem as isize - ek as isize - 1);
            rem -= ek as usize;
        }
        idx
    }

    fn same_shape(&self, other: &JetSpace) -> bool {
        self.dim == other.dim && self.order == other.order
    }
}

/// Real truncated Taylor expansion in a [`JetSpace`].
#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    c: Vec<f64>,
}

impl core::fmt::Debug for Jet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "Jet(d={}, r={}, value={}, |coeffs|={})",
            self.space.dim,
            self.space.order,
            self.c[0],
            self.c.len()
        )
    }
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, v: f64) -> Jet {
        let mut c = vec![0.0; space.len()];
        c[0] = v;
        Jet {
            space: space.clone(),
            c,
        }
    }

    /// Coordinate jet: value `x0` plus the k-th first-order monomial.
    pub fn variable(space: &Arc<JetSpace>, k: usize, x0: f64) -> Jet {
        assert!(k < space.dim());
        let mut j = Jet::constant(space, x0);
        if space.order() >= 1 {
            // degree-1 block is ordered x_0, x_1, ..., x_{dim-1}
            j.c[1 + k] = 1.0;
        }
        j
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }
    pub fn order(&self) -> usize {
        self.space.order()
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn value(&self) -> f64 {
        self.c[0]
    }
    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }
    pub fn coeff_of(&self, e: &[u8]) -> f64 {
        self.c[self.space.rank(e)]
    }

    /// Partial derivative value at the base point: coeff times the
    /// factorial of the multi-index.
    pub fn deriv(&self, e: &[u8]) -> f64 {
        let mut fact = 1.0;
        for &ek in e {
            for i in 2..=ek as u64 {
                fact *= i as f64;
            }
        }
        self.coeff_of(e) * fact
    }

    /// Truncation to a lower (or re-expression in an equal/higher) order:
    /// degree blocks share ranks across orders, so this is a prefix copy.
    pub fn into_space(&self, target: &Arc<JetSpace>) -> Jet {
        assert_eq!(self.space.dim(), target.dim());
        let n = self.c.len().min(target.len());
        let mut c = vec![0.0; target.len()];
        c[..n].copy_from_slice(&self.c[..n]);
        Jet {
            space: target.clone(),
            c,
        }
    }

    /// Exact derivative with respect to coordinate `k`; drops one order.
    pub fn d(&self, k: usize) -> Jet {
        let lower = self
            .space
            .lower()
            .expect("cannot differentiate an order-0 jet")
            .clone();
        let dim = self.space.dim();
        let mut c = vec![0.0; lower.len()];
        let mut e = vec![0u8; dim];
        for (j, cj) in c.iter_mut().enumerate() {
            e.copy_from_slice(lower.monomial(j));
            e[k] += 1;
            let src = self.space.rank(&e);
            *cj = self.c[src] * e[k] as f64;
        }
        Jet { space: lower, c }
    }

    fn binary_zip(&self, rhs: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        debug_assert!(self.space.same_shape(&rhs.space));
        Jet {
            space: self.space.clone(),
            c: self
                .c
                .iter()
                .zip(rhs.c.iter())
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn mul_jet(&self, rhs: &Jet) -> Jet {
        debug_assert!(self.space.same_shape(&rhs.space));
        let space = &self.space;
        let order = space.order();
        let dim = space.dim();
        let mut out = vec![0.0; space.len()];
        let mut e = vec![0u8; dim];
        for ga in 0..=order {
            for ia in space.degree_block(ga) {
                let ca = self.c[ia];
                if ca == 0.0 {
                    continue;
                }
                let ea = space.monomial(ia);
                for gb in 0..=(order - ga) {
                    for ib in space.degree_block(gb) {
                        let cb = rhs.c[ib];
                        if cb == 0.0 {
                            continue;
                        }
                        let eb = space.monomial(ib);
                        for k in 0..dim {
                            e[k] = ea[k] + eb[k];
                        }
                        out[space.rank(&e)] += ca * cb;
                    }
                }
            }
        }
        Jet {
            space: space.clone(),
            c: out,
        }
    }

    /// The nilpotent part (constant coefficient dropped).
    fn nilpotent(&self) -> Jet {
        let mut j = self.clone();
        j.c[0] = 0.0;
        j
    }

    /// Multiplicative inverse; the constant part must be nonzero.
    pub fn inv(&self) -> Option<Jet> {
        let a0 = self.c[0];
        if a0 == 0.0 {
            return None;
        }
        let u = self.nilpotent().scale_f(1.0 / a0);
        // 1/(1+u) = 1 - u + u^2 - ... (u nilpotent)
        let one = Jet::constant(&self.space, 1.0);
        let mut acc = one.clone();
        for _ in 0..self.space.order() {
            acc = one.clone() - u.mul_jet(&acc);
        }
        Some(acc.scale_f(1.0 / a0))
    }

    fn scale_f(&self, c: f64) -> Jet {
        Jet {
            space: self.space.clone(),
            c: self.c.iter().map(|x| x * c).collect(),
        }
    }

    /// Composition with an analytic function given its derivative values at
    /// the jet's base point (`derivs[k]` = k-th derivative, k = 0..=order).
    pub fn compose_scalar(&self, derivs: &[f64]) -> Jet {
        let u = self.nilpotent();
        let order = self.space.order();
        // Horner over (f^(k)/k!) u^k
        let top = order.min(derivs.len().saturating_sub(1));
        let mut fact = 1.0;
        for k in 1..=top {
            fact *= k as f64;
        }
        let mut acc = Jet::constant(&self.space, derivs[top] / fact);
        for k in (0..top).rev() {
            let mut f = 1.0;
            for i in 2..=k as u64 {
                f *= i as f64;
            }
            acc = Jet::constant(&self.space, derivs[k] / f) + u.mul_jet(&acc);
        }
        acc
    }

    pub fn exp(&self) -> Jet {
        let a0 = self.c[0];
        let e0 = libm::exp(a0);
        let derivs: Vec<f64> = (0..=self.space.order()).map(|_| e0).collect();
        self.compose_scalar(&derivs)
    }

    pub fn ln(&self) -> Jet {
        let a0 = self.c[0];
        assert!(a0 > 0.0, "jet ln needs positive constant part");
        let mut derivs = vec![libm::log(a0)];
        // d^k/dx^k ln x = (-1)^(k-1) (k-1)! x^-k
        let mut p = 1.0 / a0;
        let mut sign = 1.0;
        let mut fact = 1.0;
        for k in 1..=self.space.order() {
            if k >= 2 {
                fact *= (k - 1) as f64;
            }
            derivs.push(sign * fact * p);
            p /= a0;
            sign = -sign;
        }
        self.compose_scalar(&derivs)
    }

    pub fn powf(&self, p: f64) -> Jet {
        self.ln().scale_f(p).exp()
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    /// Substitute argument jets into this jet's Taylor polynomial.
    ///
    /// `base` is the expansion point of `self`; `args[i]` are jets (in any
    /// space) whose constant parts sit at (numerically) the same point.
    /// Returns the composed jet in the argument space, exact up to its
    /// order. This is how jets of f are rebased through coordinate maps.
    pub fn substitute(&self, base: &[f64], args: &[Jet]) -> Jet {
        debug_assert_eq!(base.len(), self.space.dim());
        debug_assert_eq!(args.len(), self.space.dim());
        let out_space = args[0].space().clone();
        let disp: Vec<Jet> = args
            .iter()
            .zip(base.iter())
            .map(|(a, &b)| {
                let mut d = a.clone();
                d.c[0] -= b;
                d
            })
            .collect();
        let mut out = Jet::constant(&out_space, self.c[0]);
        for idx in 1..self.space.len() {
            let coeff = self.c[idx];
            if coeff == 0.0 {
                continue;
            }
            let e = self.space.monomial(idx);
            let mut term = Jet::constant(&out_space, coeff);
            for (k, &ek) in e.iter().enumerate() {
                for _ in 0..ek {
                    term = term.mul_jet(&disp[k]);
                }
            }
            out = out + term;
        }
        out
    }

    pub fn sin(&self) -> Jet {
        let a0 = self.c[0];
        let (s, c) = (libm::sin(a0), libm::cos(a0));
        let cycle = [s, c, -s, -c];
        let derivs: Vec<f64> = (0..=self.space.order()).map(|k| cycle[k % 4]).collect();
        self.compose_scalar(&derivs)
    }

    pub fn cos(&self) -> Jet {
        let a0 = self.c[0];
        let (s, c) = (libm::sin(a0), libm::cos(a0));
        let cycle = [c, -s, -c, s];
        let derivs: Vec<f64> = (0..=self.space.order()).map(|k| cycle[k % 4]).collect();
        self.compose_scalar(&derivs)
    }
}

impl core::ops::Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self.binary_zip(&rhs, |a, b| a + b)
    }
}
impl core::ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self.binary_zip(&rhs, |a, b| a - b)
    }
}
impl core::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.mul_jet(&rhs)
    }
}
impl core::ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale_f(-1.0)
    }
}

impl Scalar for Jet {
    fn zero_like(&self) -> Self {
        Jet::constant(&self.space, 0.0)
    }
    fn one_like(&self) -> Self {
        Jet::constant(&self.space, 1.0)
    }
    fn from_f64(&self, v: f64) -> Self {
        Jet::constant(&self.space, v)
    }
    fn scale(&self, c: f64) -> Self {
        self.scale_f(c)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn mag(&self) -> f64 {
        self.c[0].abs()
    }
    fn conj_s(&self) -> Self {
        self.clone()
    }
}

/// Complex jet: a pair of real jets.
pub type CJet = Cx<Jet>;

impl CJet {
    pub fn constant_c(space: &Arc<JetSpace>, v: C64) -> CJet {
        Cx {
            re: Jet::constant(space, v.re),
            im: Jet::constant(space, v.im),
        }
    }

    pub fn from_real_jet(j: Jet) -> CJet {
        let im = j.zero_like();
        Cx { re: j, im }
    }

    pub fn value_c(&self) -> C64 {
        C64::c(self.re.value(), self.im.value())
    }

    /// Multiply by a complex constant.
    pub fn mul_c64(&self, c: C64) -> CJet {
        Cx {
            re: self.re.scale(c.re) - self.im.scale(c.im),
            im: self.re.scale(c.im) + self.im.scale(c.re),
        }
    }

    /// exp(re + i im) = exp(re) (cos im + i sin im).
    pub fn exp_c(&self) -> CJet {
        let r = self.re.exp();
        Cx {
            re: r.mul_jet(&self.im.cos()),
            im: r.mul_jet(&self.im.sin()),
        }
    }

    pub fn d_c(&self, k: usize) -> CJet {
        Cx {
            re: self.re.d(k),
            im: self.im.d(k),
        }
    }

    pub fn into_space_c(&self, target: &Arc<JetSpace>) -> CJet {
        Cx {
            re: self.re.into_space(target),
            im: self.im.into_space(target),
        }
    }

    pub fn substitute_c(&self, base: &[f64], args: &[Jet]) -> CJet {
        Cx {
            re: self.re.substitute(base, args),
            im: self.im.substitute(base, args),
        }
    }

    pub fn deriv_c(&self, e: &[u8]) -> C64 {
        C64::c(self.re.deriv(e), self.im.deriv(e))
    }

    /// Composition with complex derivative values at the base point of a
    /// real argument jet.
    pub fn compose_from_real(z: &Jet, derivs: &[C64]) -> CJet {
        let re: Vec<f64> = derivs.iter().map(|d| d.re).collect();
        let im: Vec<f64> = derivs.iter().map(|d| d.im).collect();
        Cx {
            re: z.compose_scalar(&re),
            im: z.compose_scalar(&im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(d: usize, r: usize) -> Arc<JetSpace> {
        JetSpace::new(d, r)
    }

    #[test]
    fn space_sizes_match_binomials() {
        // C(d + r, r)
        assert_eq!(space(4, 4).len(), 70);
        assert_eq!(space(14, 4).len(), 3060);
        assert_eq!(space(1, 4).len(), 5);
        assert_eq!(space(6, 2).len(), 28);
    }

    #[test]
    fn rank_is_inverse_of_enumeration() {
        for (d, r) in [(1, 4), (3, 3), (4, 4), (6, 2), (10, 4)] {
            let s = space(d, r);
            for i in 0..s.len() {
                assert_eq!(s.rank(s.monomial(i)), i, "d={d} r={r} i={i}");
            }
        }
    }

    #[test]
    fn product_of_variables_has_unit_cross_coeff() {
        let s = space(3, 2);
        let x = Jet::variable(&s, 0, 2.0);
        let y = Jet::variable(&s, 1, -1.0);
        let p = x.mul_jet(&y);
        assert!((p.value() + 2.0).abs() < 1e-15);
        assert!((p.coeff_of(&[1, 1, 0]) - 1.0).abs() < 1e-15);
        // d/dx = y0, d/dy = x0
        assert!((p.deriv(&[1, 0, 0]) + 1.0).abs() < 1e-15);
        assert!((p.deriv(&[0, 1, 0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exp_jet_univariate_series() {
        let s = space(1, 4);
        let x = Jet::variable(&s, 0, 0.0);
        let e = x.exp();
        let expect = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (k, &c) in expect.iter().enumerate() {
            assert!((e.coeff_of(&[k as u8]) - c).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn ln_and_inverse_agree_with_calculus() {
        let s = space(1, 4);
        let x = Jet::variable(&s, 0, 2.0);
        let l = x.ln();
        assert!((l.deriv(&[1]) - 0.5).abs() < 1e-14);
        assert!((l.deriv(&[2]) + 0.25).abs() < 1e-14);
        let i = x.inv().unwrap();
        assert!((i.value() - 0.5).abs() < 1e-15);
        assert!((i.deriv(&[1]) + 0.25).abs() < 1e-14);
        assert!((i.deriv(&[2]) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn powf_matches_monomial() {
        let s = space(1, 3);
        let y = Jet::variable(&s, 0, 1.7);
        let p = y.powf(2.5);
        let y0: f64 = 1.7;
        assert!((p.value() - libm::pow(y0, 2.5)).abs() < 1e-12);
        assert!((p.deriv(&[1]) - 2.5 * libm::pow(y0, 1.5)).abs() < 1e-12);
        assert!((p.deriv(&[2]) - 2.5 * 1.5 * libm::pow(y0, 0.5)).abs() < 1e-12);
    }

    #[test]
    fn truncation_is_prefix_copy() {
        let s4 = space(3, 4);
        let s2 = space(3, 2);
        let f = Jet::variable(&s4, 0, 0.3)
            .exp()
            .mul_jet(&Jet::variable(&s4, 2, -0.2).sin());
        let t = f.into_space(&s2);
        for i in 0..s2.len() {
            assert_eq!(t.coeffs()[i], f.coeffs()[i]);
        }
    }

    #[test]
    fn derivative_drops_order_exactly() {
        let s = space(2, 3);
        let x = Jet::variable(&s, 0, 0.5);
        let y = Jet::variable(&s, 1, 0.25);
        // f = x^2 y  ->  df/dx = 2 x y
        let f = x.mul_jet(&x).mul_jet(&y);
        let fx = f.d(0);
        assert!((fx.value() - 2.0 * 0.5 * 0.25).abs() < 1e-15);
        assert!((fx.deriv(&[1, 0]) - 2.0 * 0.25).abs() < 1e-15);
        assert!((fx.deriv(&[0, 1]) - 2.0 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn finite_difference_cross_check() {
        // f(x, y) = exp(0.3 x) * (1 + x y^2); compare jet partials against
        // central differences
        let s = space(2, 2);
        let eval = |x: f64, y: f64| libm::exp(0.3 * x) * (1.0 + x * y * y);
        let (x0, y0) = (0.7, -0.4);
        let x = Jet::variable(&s, 0, x0);
        let y = Jet::variable(&s, 1, y0);
        let one = Jet::constant(&s, 1.0);
        let f = x
            .scale(0.3)
            .exp()
            .mul_jet(&(one + x.mul_jet(&y).mul_jet(&y)));
        let h = 1e-5;
        let fd_x = (eval(x0 + h, y0) - eval(x0 - h, y0)) / (2.0 * h);
        let fd_y = (eval(x0, y0 + h) - eval(x0, y0 - h)) / (2.0 * h);
        // the mixed stencil cancels harder; use a larger step
        let h2 = 1e-4;
        let fd_xy = (eval(x0 + h2, y0 + h2) - eval(x0 + h2, y0 - h2) - eval(x0 - h2, y0 + h2)
            + eval(x0 - h2, y0 - h2))
            / (4.0 * h2 * h2);
        assert!((f.deriv(&[1, 0]) - fd_x).abs() < 1e-8);
        assert!((f.deriv(&[0, 1]) - fd_y).abs() < 1e-8);
        assert!((f.deriv(&[1, 1]) - fd_xy).abs() < 1e-6);
    }

    #[test]
    fn cjet_exp_is_complex_exponential() {
        let s = space(2, 2);
        let x = Jet::variable(&s, 0, 0.2);
        let y = Jet::variable(&s, 1, 0.9);
        let z = Cx { re: x, im: y };
        let e = z.exp_c();
        let expect = C64::c(0.2, 0.9).exp();
        let got = e.value_c();
        assert!((got.re - expect.re).abs() < 1e-14);
        assert!((got.im - expect.im).abs() < 1e-14);
        // d/dx exp(x + iy) = exp(x + iy)
        let d = e.d_c(0).value_c();
        assert!((d.re - expect.re).abs() < 1e-14 && (d.im - expect.im).abs() < 1e-14);
    }
}
