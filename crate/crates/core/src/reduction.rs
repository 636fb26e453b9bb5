//! Minkowski reduction of positive forms, Siegel reduction on H_n, the
//! fundamental domain of the Siegel-Jacobi space, and the volume of the
//! Siegel modular variety.
//!
//! The global minimality condition (S.1) cannot be decided over the whole
//! modular group; for n = 1 it is the exact classical condition |tau| >= 1,
//! for n = 2 it is checked over a deduplicated ball of generator words of
//! length <= 4 (the standard practical proxy). Boundary ties within
//! `memb_tol` count as members; reduction maps use half-open conventions
//! (x in [-1/2, 1/2), lambda/mu coefficients in [0, 1)) so they are
//! deterministic.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::action::{jacobi_action, siegel_action};
use crate::config::Tolerances;
use crate::domain::{
    HeisenbergElement, JacobiGroupElement, JacobiPoint, SiegelPoint, SymplecticMatrix,
};
use crate::error::{Error, Result};
use crate::matrix::{cholesky_real, Mat};
use crate::rng::{derive_seed, SplitMix64};

/// One generator step of a reduction word.
#[derive(Debug, Clone)]
pub enum GenStep {
    /// Omega -> Omega + B, B integral symmetric.
    Translate(Mat<f64>),
    /// Omega -> -Omega^-1 (the symplectic inversion).
    Invert,
    /// Omega -> h Omega t(h), h in GL(n, Z).
    GlConj(Mat<f64>),
    /// Z -> Z + lambda Omega + mu with integral lambda, mu.
    HeisenbergShift { lambda: Mat<f64>, mu: Mat<f64> },
}

impl GenStep {
    pub fn describe(&self) -> String {
        match self {
            GenStep::Translate(_) => String::from("T"),
            GenStep::Invert => String::from("S"),
            GenStep::GlConj(_) => String::from("U"),
            GenStep::HeisenbergShift { .. } => String::from("H"),
        }
    }
}

/// One membership condition with its margin; `margin >= -memb_tol` iff
/// the flag holds. `None` margins mark vacuous conditions.
#[derive(Debug, Clone, Copy)]
pub struct ConditionCheck {
    pub holds: bool,
    pub margin: Option<f64>,
}

impl ConditionCheck {
    fn from_margin(margin: f64, memb_tol: f64) -> Self {
        ConditionCheck {
            holds: margin >= -memb_tol,
            margin: Some(margin),
        }
    }
    fn vacuous() -> Self {
        ConditionCheck {
            holds: true,
            margin: None,
        }
    }
}

/// Flags and margins for the reduction conditions.
#[derive(Debug, Clone)]
pub struct DomainMembership {
    pub m1: ConditionCheck,
    pub m2: ConditionCheck,
    pub s1: Option<ConditionCheck>,
    pub s2: Option<ConditionCheck>,
    pub s3: Option<ConditionCheck>,
    pub z_in_p: Option<ConditionCheck>,
}

impl DomainMembership {
    pub fn minkowski_reduced(&self) -> bool {
        self.m1.holds && self.m2.holds
    }
    pub fn siegel_reduced(&self) -> bool {
        self.minkowski_reduced()
            && self.s1.map(|c| c.holds).unwrap_or(false)
            && self.s2.map(|c| c.holds).unwrap_or(false)
            && self.s3.map(|c| c.holds).unwrap_or(false)
    }
    pub fn jacobi_member(&self) -> bool {
        self.siegel_reduced() && self.z_in_p.map(|c| c.holds).unwrap_or(false)
    }
}

/// Reduced point plus the transforming group element and its word.
#[derive(Debug, Clone)]
pub struct ReductionResult<P, G> {
    pub reduced: P,
    pub transform: G,
    pub word: Vec<GenStep>,
    pub membership: DomainMembership,
}

pub type MinkowskiReduction = ReductionResult<Mat<f64>, Mat<f64>>;
pub type SiegelReduction = ReductionResult<SiegelPoint, SymplecticMatrix>;
pub type JacobiReduction = ReductionResult<JacobiPoint, JacobiGroupElement>;

fn mink_bound(n: usize) -> Result<i64> {
    match n {
        1 => Ok(1),
        2 => Ok(2),
        3 => Ok(3),
        _ => Err(Error::UnsupportedDimension { n, m: 0 }),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Integer vectors with sup-norm <= bound, skipping zero.
fn integer_vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let width = (2 * bound + 1) as usize;
    let total = width.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push((c % width) as i64 - bound);
            c /= width;
        }
        if v.iter().any(|&x| x != 0) {
            out.push(v);
        }
    }
    out
}

fn quad_form(y: &Mat<f64>, a: &[i64]) -> f64 {
    let n = y.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += a[i] as f64 * y.at(i, j) * a[j] as f64;
        }
    }
    acc
}

/// Minkowski conditions (M.1)-(M.2) with margins, over the documented
/// enumeration bound.
pub fn is_minkowski_reduced(y: &Mat<f64>, tol: &Tolerances) -> Result<DomainMembership> {
    let n = y.rows();
    let bound = mink_bound(n)?;
    cholesky_real(y, 1e-9, tol.posdef_tol)?;
    let vectors = integer_vectors(n, bound);
    let mut m1_margin = f64::INFINITY;
    for a in &vectors {
        for k in 0..n {
            // tail gcd over a_k..a_n must be 1
            let mut g = 0;
            for &x in &a[k..] {
                g = gcd(g, x);
            }
            if g != 1 {
                continue;
            }
            m1_margin = m1_margin.min(quad_form(y, a) - y.at(k, k));
        }
    }
    let m2 = if n == 1 {
        ConditionCheck::vacuous()
    } else {
        let mut m = f64::INFINITY;
        for k in 0..(n - 1) {
            m = m.min(*y.at(k, k + 1));
        }
        ConditionCheck::from_margin(m, tol.memb_tol)
    };
    Ok(DomainMembership {
        m1: ConditionCheck::from_margin(m1_margin, tol.memb_tol),
        m2,
        s1: None,
        s2: None,
        s3: None,
        z_in_p: None,
    })
}

/// Complete a primitive integer row vector to a unimodular matrix whose
/// first row is the vector (via integer column reduction of the vector to
/// a unit vector, then inverting the recorded operations).
fn complete_primitive_row(v: &[i64]) -> Vec<Vec<i64>> {
    let d = v.len();
    // M v = +-e1 by elementary row operations on the column v
    let mut col: Vec<i64> = v.to_vec();
    let mut m = alloc::vec![alloc::vec![0i64; d]; d];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    loop {
        // pivot: smallest nonzero |entry|
        let mut piv = usize::MAX;
        for (i, &x) in col.iter().enumerate() {
            if x != 0 && (piv == usize::MAX || x.abs() < col[piv].abs()) {
                piv = i;
            }
        }
        debug_assert!(piv != usize::MAX, "zero vector cannot be primitive");
        let mut done = true;
        for i in 0..d {
            if i == piv || col[i] == 0 {
                continue;
            }
            let q = col[i].div_euclid(col[piv]);
            if q != 0 {
                col[i] -= q * col[piv];
                for j in 0..d {
                    m[i][j] -= q * m[piv][j];
                }
            }
            if col[i] != 0 {
                done = false;
            }
        }
        if done {
            // move the pivot to position 0
            if piv != 0 {
                col.swap(0, piv);
                m.swap(0, piv);
            }
            break;
        }
    }
    debug_assert_eq!(col[0].abs(), 1);
    // invert M exactly (det = +-1) via adjugate for d <= 3
    let det = det_i64(&m);
    debug_assert_eq!(det.abs(), 1);
    let inv = adjugate_i64(&m, det);
    // first column of M^-1 is +-v; transpose and fix the sign of row 0
    let mut u = alloc::vec![alloc::vec![0i64; d]; d];
    for i in 0..d {
        for j in 0..d {
            u[i][j] = inv[j][i];
        }
    }
    if u[0] != v {
        for x in u[0].iter_mut() {
            *x = -*x;
        }
    }
    debug_assert_eq!(u[0], v);
    u
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!("desk scale is n <= 3"),
    }
}

fn adjugate_i64(m: &[Vec<i64>], det: i64) -> Vec<Vec<i64>> {
    let d = m.len();
    let mut out = alloc::vec![alloc::vec![0i64; d]; d];
    match d {
        1 => out[0][0] = det.signum(),
        2 => {
            out[0][0] = m[1][1] * det.signum();
            out[0][1] = -m[0][1] * det.signum();
            out[1][0] = -m[1][0] * det.signum();
            out[1][1] = m[0][0] * det.signum();
        }
        3 => {
            for i in 0..3 {
                for j in 0..3 {
                    let (r1, r2) = match i {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let (c1, c2) = match j {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let minor = m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    out[j][i] = sign * minor * det.signum();
                }
            }
        }
        _ => unreachable!(),
    }
    out
}

fn int_mat_to_f64(m: &[Vec<i64>]) -> Mat<f64> {
    Mat::from_fn(m.len(), m.len(), |i, j| m[i][j] as f64)
}

/// Minkowski reduction: greedy descent on violated (M.1) conditions with
/// unimodular completions, followed by the (M.2) sign normalization.
pub fn minkowski_reduce(y: &Mat<f64>, tol: &Tolerances) -> Result<MinkowskiReduction> {
    let n = y.rows();
    let bound = mink_bound(n)?;
    cholesky_real(y, 1e-9, tol.posdef_tol)?;
    let vectors = integer_vectors(n, bound);
    let mut current = y.clone();
    let mut transform = Mat::identity(n);
    let mut word: Vec<GenStep> = Vec::new();
    let slack = 1e-12;
    for _iter in 0..100 {
        // find the deepest (M.1) violation at the smallest k
        let mut best: Option<(usize, &Vec<i64>, f64)> = None;
        for k in 0..n {
            for a in &vectors {
                let mut g = 0;
                for &x in &a[k..] {
                    g = gcd(g, x);
                }
                if g != 1 {
                    continue;
                }
                let q = quad_form(&current, a);
                let def = current.at(k, k) - q;
                if def > slack * (1.0 + current.at(k, k).abs()) {
                    let better = match best {
                        None => true,
                        Some((bk, _, bq)) => k < bk || (k == bk && q < bq),
                    };
                    if better {
                        best = Some((k, a, q));
                    }
                }
            }
            if best.as_ref().map(|(bk, _, _)| *bk == k).unwrap_or(false) {
                break;
            }
        }
        match best {
            None => {
                // sign normalization (M.2): one greedy pass of sign flips
                let mut signs = alloc::vec![1.0f64; n];
                for k in 0..n.saturating_sub(1) {
                    let v = current.at(k, k + 1) * signs[k] * signs[k + 1];
                    if v < 0.0 {
                        signs[k + 1] = -signs[k + 1];
                    }
                }
                if signs.iter().any(|&s| s < 0.0) {
                    let d = Mat::from_fn(n, n, |i, j| if i == j { signs[i] } else { 0.0 });
                    current = d.mul(&current).mul(&d);
                    transform = d.mul(&transform);
                    word.push(GenStep::GlConj(d));
                }
                let membership = is_minkowski_reduced(&current, tol)?;
                return Ok(MinkowskiReduction {
                    reduced: current,
                    transform,
                    word,
                    membership,
                });
            }
            Some((k, a, _)) => {
                // unimodular matrix with rows e_1..e_{k-1}, a, completion
                let tail = complete_primitive_row(&a[k..]);
                let mut u = alloc::vec![alloc::vec![0i64; n]; n];
                for (i, row) in u.iter_mut().enumerate().take(k) {
                    row[i] = 1;
                }
                u[k][..].copy_from_slice(a);
                for j in 1..tail.len() {
                    for (c, &val) in tail[j].iter().enumerate() {
                        u[k + j][k + c] = val;
                    }
                }
                let uf = int_mat_to_f64(&u);
                current = uf.mul(&current).mul(&uf.transpose()).symmetrized();
                transform = uf.mul(&transform);
                word.push(GenStep::GlConj(uf));
            }
        }
    }
    Err(Error::IterationLimit(100))
}

// ---------------------------------------------------------------------
// Siegel reduction
// ---------------------------------------------------------------------

/// Precomputed machinery for Siegel reduction and membership at degree n:
/// the deduplicated ball of short generator words used for the (S.1)
/// proxy and for the det-raising search.
pub struct ReductionContext {
    pub n: usize,
    pub tol: Tolerances,
    ball: Vec<(SymplecticMatrix, Vec<GenStep>)>,
}

impl ReductionContext {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_tol(n, Tolerances::default())
    }

    pub fn with_tol(n: usize, tol: Tolerances) -> Result<Self> {
        if n == 0 || n > 2 {
            return Err(Error::UnsupportedDimension { n, m: 0 });
        }
        let ball = build_ball(n, 4)?;
        Ok(ReductionContext { n, tol, ball })
    }

    pub fn ball_len(&self) -> usize {
        self.ball.len()
    }
}

fn generators(n: usize) -> Result<Vec<(SymplecticMatrix, GenStep)>> {
    let mut gens = Vec::new();
    gens.push((SymplecticMatrix::inversion(n), GenStep::Invert));
    // unit translations
    for i in 0..n {
        for j in i..n {
            for sign in [1.0, -1.0] {
                let mut b = Mat::zeros(n, n);
                *b.at_mut(i, j) += sign;
                if i != j {
                    *b.at_mut(j, i) += sign;
                }
                gens.push((
                    SymplecticMatrix::translation(b.clone())?,
                    GenStep::Translate(b),
                ));
            }
        }
    }
    // GL conjugations: shears, swaps, a sign flip
    let mut gl: Vec<Mat<f64>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for sign in [1.0, -1.0] {
                    let mut h = Mat::identity(n);
                    *h.at_mut(i, j) = sign;
                    gl.push(h);
                }
            }
        }
    }
    if n == 2 {
        gl.push(Mat::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        gl.push(Mat::from_rows(&[&[-1.0, 0.0], &[0.0, 1.0]]));
    } else {
        gl.push(Mat::from_rows(&[&[-1.0]]));
    }
    for h in gl {
        gens.push((
            SymplecticMatrix::gl_embedding(&h, 1e-12)?,
            GenStep::GlConj(h),
        ));
    }
    Ok(gens)
}

fn matrix_key(m: &SymplecticMatrix) -> Vec<i64> {
    let a = m.assemble();
    a.data()
        .iter()
        .map(|&x| libm::round(x * 4.0) as i64)
        .collect()
}

fn build_ball(n: usize, depth: usize) -> Result<Vec<(SymplecticMatrix, Vec<GenStep>)>> {
    let gens = generators(n)?;
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let identity = SymplecticMatrix::identity(n);
    seen.insert(matrix_key(&identity));
    let mut ball = alloc::vec![(identity, Vec::new())];
    let mut frontier: Vec<usize> = alloc::vec![0];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            let (base, base_word) = ball[idx].clone();
            for (g, step) in &gens {
                let prod = base.matmul(g)?;
                let key = matrix_key(&prod);
                if seen.insert(key) {
                    let mut word = base_word.clone();
                    word.push(step.clone());
                    ball.push((prod, word));
                    next.push(ball.len() - 1);
                }
            }
        }
        frontier = next;
    }
    Ok(ball)
}

fn det_im_after(g: &SymplecticMatrix, p: &SiegelPoint, pivot_tol: f64) -> Result<f64> {
    // det Im(g . Omega) = det Y / |det(C Omega + D)|^2
    let factor = g.c().to_complex().mul(&p.omega()).add(&g.d().to_complex());
    let det_factor = factor.det(pivot_tol)?;
    let det_y = p.y().det(pivot_tol)?;
    Ok(det_y / (det_factor.norm_sq()))
}

/// Siegel membership: (S.1) margin via |tau| for n = 1 and the generator
/// ball for n = 2; (S.2) via Minkowski; (S.3) via max |x_ij|.
pub fn is_siegel_reduced(p: &SiegelPoint, ctx: &ReductionContext) -> Result<DomainMembership> {
    let n = p.n();
    debug_assert_eq!(n, ctx.n);
    let tol = &ctx.tol;
    let mink = is_minkowski_reduced(p.y(), tol)?;
    let s2_margin = mink
        .m1
        .margin
        .unwrap_or(f64::INFINITY)
        .min(mink.m2.margin.unwrap_or(f64::INFINITY));
    let mut s3 = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            s3 = s3.min(0.5 - p.x().at(i, j).abs());
        }
    }
    let s1_margin = if n == 1 {
        let x = p.x().at(0, 0);
        let y = p.y().at(0, 0);
        libm::sqrt(x * x + y * y) - 1.0
    } else {
        let det_y = p.y().det(tol.pivot_tol)?;
        let mut max_other = f64::NEG_INFINITY;
        for (g, _) in &ctx.ball {
            max_other = max_other.max(det_im_after(g, p, tol.pivot_tol)?);
        }
        det_y - max_other
    };
    Ok(DomainMembership {
        m1: mink.m1,
        m2: mink.m2,
        s1: Some(ConditionCheck::from_margin(s1_margin, tol.memb_tol)),
        s2: Some(ConditionCheck::from_margin(s2_margin, tol.memb_tol)),
        s3: Some(ConditionCheck::from_margin(s3, tol.memb_tol)),
        z_in_p: None,
    })
}

/// Siegel reduction. Degree 1 is the exact classical loop; degree 2
/// iterates Minkowski reduction, translation and det-raising generator
/// moves from the ball ("highest point" style), capped at 200 rounds.
pub fn siegel_reduce(p: &SiegelPoint, ctx: &ReductionContext) -> Result<SiegelReduction> {
    let n = p.n();
    debug_assert_eq!(n, ctx.n);
    let tol = &ctx.tol;
    let mut current = p.clone();
    let mut transform = SymplecticMatrix::identity(n);
    let mut word: Vec<GenStep> = Vec::new();
    let apply = |g: &SymplecticMatrix,
                 steps: &[GenStep],
                 cur: &SiegelPoint,
                 tr: &SymplecticMatrix,
                 w: &mut Vec<GenStep>|
     -> Result<(SiegelPoint, SymplecticMatrix)> {
        let moved = siegel_action(g, cur)?.point;
        let t = g.matmul(tr)?;
        w.extend(steps.iter().cloned());
        Ok((moved, t))
    };

    let reduce_iters = 200usize;
    if n == 1 {
        for _ in 0..reduce_iters {
            let x = current.x().at(0, 0);
            let k = libm::floor(x + 0.5);
            if k != 0.0 {
                let b = Mat::from_rows(&[&[-k]]);
                let g = SymplecticMatrix::translation(b.clone())?;
                let (c, t) = apply(
                    &g,
                    &[GenStep::Translate(b)],
                    &current,
                    &transform,
                    &mut word,
                )?;
                current = c;
                transform = t;
            }
            let x = current.x().at(0, 0);
            let y = current.y().at(0, 0);
            if x * x + y * y < 1.0 - 1e-14 {
                let g = SymplecticMatrix::inversion(1);
                let (c, t) = apply(&g, &[GenStep::Invert], &current, &transform, &mut word)?;
                current = c;
                transform = t;
            } else {
                let membership = is_siegel_reduced(&current, ctx)?;
                return Ok(SiegelReduction {
                    reduced: current,
                    transform,
                    word,
                    membership,
                });
            }
        }
        return Err(Error::IterationLimit(reduce_iters));
    }

    // n == 2
    for _ in 0..reduce_iters {
        // Minkowski-reduce the imaginary part
        let mink = minkowski_reduce(current.y(), tol)?;
        if !matches!(mink.word.as_slice(), []) {
            let h = mink.transform.clone();
            let g = SymplecticMatrix::gl_embedding(&h, tol.pivot_tol)?;
            let (c, t) = apply(&g, &mink.word, &current, &transform, &mut word)?;
            current = c;
            transform = t;
        }
        // translate the real part into the half-open unit box
        let mut b = Mat::zeros(n, n);
        let mut any = false;
        for i in 0..n {
            for j in 0..n {
                let k = libm::floor(current.x().at(i, j) + 0.5);
                if k != 0.0 {
                    any = true;
                }
                *b.at_mut(i, j) = -k;
            }
        }
        let b = b.symmetrized();
        if any {
            let g = SymplecticMatrix::translation(b.clone())?;
            let (c, t) = apply(
                &g,
                &[GenStep::Translate(b)],
                &current,
                &transform,
                &mut word,
            )?;
            current = c;
            transform = t;
        }
        // det-raising move from the ball
        let det_y = current.y().det(tol.pivot_tol)?;
        let mut best: Option<(usize, f64)> = None;
        for (idx, (g, _)) in ctx.ball.iter().enumerate() {
            let d = det_im_after(g, &current, tol.pivot_tol)?;
            if d > det_y * (1.0 + 1e-12) {
                let better = best.map(|(_, bd)| d > bd).unwrap_or(true);
                if better {
                    best = Some((idx, d));
                }
            }
        }
        match best {
            Some((idx, _)) => {
                let (g, steps) = ctx.ball[idx].clone();
                let (c, t) = apply(&g, &steps, &current, &transform, &mut word)?;
                current = c;
                transform = t;
            }
            None => {
                let membership = is_siegel_reduced(&current, ctx)?;
                return Ok(SiegelReduction {
                    reduced: current,
                    transform,
                    word,
                    membership,
                });
            }
        }
    }
    Err(Error::IterationLimit(reduce_iters))
}

// ---------------------------------------------------------------------
// Fundamental domain of the Siegel-Jacobi space
// ---------------------------------------------------------------------

/// Solve Z = lambda + mu Omega for real lambda, mu: mu = V Y^-1,
/// lambda = U - V Y^-1 X.
pub fn z_coefficients(p: &JacobiPoint) -> Result<(Mat<f64>, Mat<f64>)> {
    let tol = Tolerances::default();
    let yinv = p.base().y().inverse(tol.pivot_tol)?;
    let mu = p.v().mul(&yinv);
    let lambda = p.u().sub(&mu.mul(p.base().x()));
    Ok((lambda, mu))
}

/// Membership of (Omega, Z) in the fundamental domain: Omega Siegel
/// reduced and the (lambda, mu) coefficients of Z inside the unit box.
pub fn jacobi_domain_membership(
    p: &JacobiPoint,
    ctx: &ReductionContext,
) -> Result<DomainMembership> {
    let mut membership = is_siegel_reduced(p.base(), ctx)?;
    let (lambda, mu) = z_coefficients(p)?;
    let mut margin = f64::INFINITY;
    for m in [&lambda, &mu] {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = *m.at(i, j);
                margin = margin.min(v).min(1.0 - v);
            }
        }
    }
    membership.z_in_p = Some(ConditionCheck::from_margin(margin, ctx.tol.memb_tol));
    Ok(membership)
}

/// Reduce a Siegel-Jacobi point: Siegel-reduce the base, transport Z,
/// then shift by integral Heisenberg elements into the half-open box.
pub fn jacobi_reduce(p: &JacobiPoint, ctx: &ReductionContext) -> Result<JacobiReduction> {
    let m = p.m();
    let base = siegel_reduce(p.base(), ctx)?;
    let g0 = JacobiGroupElement::new(base.transform.clone(), HeisenbergElement::zero(p.n(), m))?;
    let mut word = base.word.clone();
    let moved = jacobi_action(&g0, p)?.point;
    // integral shifts: the lambda translation moves the mu coefficient
    // and vice versa
    let (lam_c, mu_c) = z_coefficients(&moved)?;
    let lambda0 = mu_c.map(|&v| -libm::floor(v));
    let mu0 = lam_c.map(|&v| -libm::floor(v));
    let shift = JacobiGroupElement::new(
        SymplecticMatrix::identity(p.n()),
        HeisenbergElement::new(lambda0.clone(), mu0.clone(), Mat::zeros(m, m))?,
    )?;
    let reduced = jacobi_action(&shift, &moved)?.point;
    if lambda0.max_norm() > 0.0 || mu0.max_norm() > 0.0 {
        word.push(GenStep::HeisenbergShift {
            lambda: lambda0,
            mu: mu0,
        });
    }
    let transform = crate::action::jacobi_multiply(&shift, &g0)?;
    let membership = jacobi_domain_membership(&reduced, ctx)?;
    Ok(JacobiReduction {
        reduced,
        transform,
        word,
        membership,
    })
}

// ---------------------------------------------------------------------
// Volumes
// ---------------------------------------------------------------------

/// Riemann zeta at integer arguments s >= 2 by Dirichlet series plus
/// Euler-Maclaurin tail. Summed smallest-first so the result is accurate
/// to the last couple of ulps.
pub fn zeta_int(s: u32) -> f64 {
    let s = s as f64;
    let n = 64.0f64;
    // tail first (it is the smallest block), then the series backwards
    let mut sum = libm::pow(n, 1.0 - s) / (s - 1.0)
        + 0.5 * libm::pow(n, -s)
        + s / 12.0 * libm::pow(n, -s - 1.0)
        - s * (s + 1.0) * (s + 2.0) / 720.0 * libm::pow(n, -s - 3.0)
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * libm::pow(n, -s - 5.0);
    let mut j = n - 1.0;
    while j >= 1.0 {
        sum += libm::pow(j, -s);
        j -= 1.0;
    }
    sum
}

/// vol(F_n) = 2 prod_{k=1..n} pi^-k Gamma(k) zeta(2k), n <= 4.
pub fn siegel_volume(n: usize) -> Result<f64> {
    if n == 0 || n > 4 {
        return Err(Error::UnsupportedDimension { n, m: 0 });
    }
    let mut vol = 2.0;
    let mut gamma = 1.0; // Gamma(k) = (k-1)!
    for k in 1..=n {
        if k > 1 {
            gamma *= (k - 1) as f64;
        }
        vol *= libm::pow(core::f64::consts::PI, -(k as f64)) * gamma * zeta_int(2 * k as u32);
    }
    Ok(vol)
}

pub const F1_STRATA: usize = 512;

/// Per-stratum contributions of the stratified F_1 volume estimator over
/// a stratum range. Strata carry derived seeds, so workers may compute
/// disjoint ranges; summing the concatenated contributions in stratum
/// order reproduces the sequential result bit for bit.
pub fn volume_estimate_f1_strata(
    samples: usize,
    seed: u64,
    strata: core::ops::Range<usize>,
) -> Vec<f64> {
    let per = samples / F1_STRATA;
    debug_assert!(per > 0, "need at least one sample per stratum");
    let width = 1.0 / F1_STRATA as f64;
    let mut out = Vec::with_capacity(strata.len());
    for j in strata {
        let mut rng = SplitMix64::new(derive_seed(seed, "f1-stratum").wrapping_add(j as u64));
        let lo = -0.5 + j as f64 * width;
        let mut local = 0.0;
        for _ in 0..per {
            let x = lo + width * rng.next_f64();
            // exact inner integral of y^-2 over the fiber: (1 - x^2)^{-1/2}
            local += 1.0 / libm::sqrt(1.0 - x * x);
        }
        out.push(width * local / per as f64);
    }
    out
}

/// Stratified Monte Carlo estimate of vol(F_1) (exact value pi/3).
pub fn volume_estimate_f1(samples: usize, seed: u64) -> f64 {
    volume_estimate_f1_strata(samples, seed, 0..F1_STRATA)
        .iter()
        .sum()
}

/// Deduplicated ball of SL(2, Z) words over {T, T^-1, S} up to the given
/// length; the exhaustive-search oracle for degree-1 reduction.
pub fn sl2z_ball(depth: usize) -> Vec<SymplecticMatrix> {
    let t = SymplecticMatrix::translation(Mat::from_rows(&[&[1.0]])).unwrap();
    let tinv = SymplecticMatrix::translation(Mat::from_rows(&[&[-1.0]])).unwrap();
    let s = SymplecticMatrix::inversion(1);
    let gens = [t, tinv, s];
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let id = SymplecticMatrix::identity(1);
    seen.insert(matrix_key(&id));
    let mut ball = alloc::vec![id];
    let mut frontier = alloc::vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            for g in &gens {
                let prod = ball[idx].matmul(g).unwrap();
                if seen.insert(matrix_key(&prod)) {
                    ball.push(prod);
                    next.push(ball.len() - 1);
                }
            }
        }
        frontier = next;
    }
    ball
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::sample;
    use core::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_is_minkowski_reduced() {
        for n in 1..=3 {
            let mem = is_minkowski_reduced(&Mat::identity(n), &tol()).unwrap();
            assert!(mem.minkowski_reduced());
        }
    }

    #[test]
    fn mild_off_diagonal_is_reduced() {
        let y = Mat::from_rows(&[&[1.0, 0.3], &[0.3, 1.0]]);
        assert!(is_minkowski_reduced(&y, &tol())
            .unwrap()
            .minkowski_reduced());
    }

    #[test]
    fn strong_off_diagonal_is_not_reduced() {
        // a = (1, -1): a Y t(a) = 0.8 < 1 = y_11
        let y = Mat::from_rows(&[&[1.0, 0.6], &[0.6, 1.0]]);
        let mem = is_minkowski_reduced(&y, &tol()).unwrap();
        assert!(!mem.m1.holds);
        assert!((mem.m1.margin.unwrap() + 0.2).abs() < 1e-12);
    }

    #[test]
    fn minkowski_reduce_examples() {
        // already reduced -> identity transform
        let y = Mat::from_rows(&[&[1.0, 0.3], &[0.3, 1.0]]);
        let r = minkowski_reduce(&y, &tol()).unwrap();
        assert!(r.word.is_empty());
        assert!(r.reduced.sub(&y).max_norm() < 1e-15);

        // n = 1: everything is already reduced
        let y1 = Mat::from_rows(&[&[0.37]]);
        let r1 = minkowski_reduce(&y1, &tol()).unwrap();
        assert!(r1.word.is_empty());

        // needs reduction; det preserved
        let y = Mat::from_rows(&[&[1.0, 0.6], &[0.6, 1.0]]);
        let r = minkowski_reduce(&y, &tol()).unwrap();
        assert!(r.membership.minkowski_reduced());
        let det = r.reduced.det(1e-14).unwrap();
        assert!((det - 0.64).abs() < 1e-12, "det {det}");
        // transform reproduces the reduced matrix
        let back = r.transform.mul(&y).mul(&r.transform.transpose());
        assert!(back.sub(&r.reduced).max_norm() < 1e-10);
    }

    #[test]
    fn minkowski_random_det_invariance() {
        let mut rng = SplitMix64::new(401);
        for n in 2..=3 {
            for _ in 0..25 {
                let p = sample::siegel_point(n, &mut rng);
                let y = p.y().clone();
                let r = minkowski_reduce(&y, &tol()).unwrap();
                assert!(r.membership.minkowski_reduced(), "output must be reduced");
                let d0 = y.det(1e-14).unwrap();
                let d1 = r.reduced.det(1e-14).unwrap();
                assert!((d0 - d1).abs() < 1e-12 * d0.abs().max(1.0));
            }
        }
    }

    #[test]
    fn siegel_reduce_translation_word() {
        // tau = 5 + i reduces to i by T^-5
        let ctx = ReductionContext::new(1).unwrap();
        let p = SiegelPoint::from_tau(5.0, 1.0).unwrap();
        let r = siegel_reduce(&p, &ctx).unwrap();
        assert!(r.reduced.x().at(0, 0).abs() < 1e-14);
        assert!((r.reduced.y().at(0, 0) - 1.0).abs() < 1e-14);
        assert!(r.membership.siegel_reduced());
    }

    #[test]
    fn siegel_reduce_interior_point_is_fixed() {
        let ctx = ReductionContext::new(1).unwrap();
        let p = SiegelPoint::from_tau(0.21, 1.4).unwrap();
        let r = siegel_reduce(&p, &ctx).unwrap();
        assert!(r.word.is_empty());
        assert!(r.reduced.x().at(0, 0) == p.x().at(0, 0));
    }

    #[test]
    fn siegel_reduce_degree_one_with_oracle() {
        let ctx = ReductionContext::new(1).unwrap();
        let ball = sl2z_ball(10);
        let mut rng = SplitMix64::new(409);
        for _ in 0..100 {
            let x = rng.uniform(-1.5, 1.5);
            let y = rng.uniform(0.4, 2.5);
            let p = SiegelPoint::from_tau(x, y).unwrap();
            let r = siegel_reduce(&p, &ctx).unwrap();
            assert!(r.membership.siegel_reduced(), "output in F_1");
            // transform reproduces the reduced point
            let back = siegel_action(&r.transform, &p).unwrap().point;
            let defect =
                back.x().sub(r.reduced.x()).max_norm() + back.y().sub(r.reduced.y()).max_norm();
            assert!(defect < 1e-10);
            // idempotence
            let r2 = siegel_reduce(&r.reduced, &ctx).unwrap();
            assert!(
                r2.word.is_empty() || {
                    let d = r2.reduced.x().sub(r.reduced.x()).max_norm()
                        + r2.reduced.y().sub(r.reduced.y()).max_norm();
                    d < 1e-10
                }
            );
            // oracle: some word of length <= 10 maps input to output
            let mut found = false;
            for g in &ball {
                let img = siegel_action(g, &p).unwrap().point;
                let d =
                    img.x().sub(r.reduced.x()).max_norm() + img.y().sub(r.reduced.y()).max_norm();
                if d < 1e-9 {
                    found = true;
                    break;
                }
            }
            assert!(found, "reduction not witnessed by the word-search oracle");
        }
    }

    #[test]
    fn siegel_reduce_degree_two() {
        let ctx = ReductionContext::new(2).unwrap();
        let mut rng = SplitMix64::new(419);
        for _ in 0..10 {
            let p = sample::siegel_point(2, &mut rng);
            let r = siegel_reduce(&p, &ctx).unwrap();
            let mem = &r.membership;
            assert!(mem.s2.unwrap().holds, "(S.2) must hold exactly");
            assert!(mem.s3.unwrap().holds, "(S.3) must hold exactly");
            assert!(mem.s1.unwrap().holds, "(S.1) over the generator ball");
            let back = siegel_action(&r.transform, &p).unwrap().point;
            let defect =
                back.x().sub(r.reduced.x()).max_norm() + back.y().sub(r.reduced.y()).max_norm();
            assert!(
                defect < 1e-9,
                "transform reproduces reduced point: {defect}"
            );
        }
    }

    #[test]
    fn jacobi_membership_examples() {
        let ctx = ReductionContext::new(1).unwrap();
        // (iI, 0) is a member with lambda = mu = 0
        let p = JacobiPoint::from_tau_z(0.0, 1.0, 0.0, 0.0).unwrap();
        let mem = jacobi_domain_membership(&p, &ctx).unwrap();
        assert!(mem.jacobi_member());

        // tau = i, z = 0.5 + 0.5i: lambda = mu = 0.5
        let p = JacobiPoint::from_tau_z(0.0, 1.0, 0.5, 0.5).unwrap();
        let (l, m) = z_coefficients(&p).unwrap();
        assert!((l.at(0, 0) - 0.5).abs() < 1e-15);
        assert!((m.at(0, 0) - 0.5).abs() < 1e-15);
        assert!(jacobi_domain_membership(&p, &ctx).unwrap().jacobi_member());

        // z = 1.5: lambda = 1.5 outside [0, 1]
        let p = JacobiPoint::from_tau_z(0.0, 1.0, 1.5, 0.0).unwrap();
        let mem = jacobi_domain_membership(&p, &ctx).unwrap();
        assert!(!mem.z_in_p.unwrap().holds);
    }

    #[test]
    fn jacobi_reduce_examples() {
        let ctx = ReductionContext::new(1).unwrap();
        // already a member: identity transform
        let p = JacobiPoint::from_tau_z(0.1, 1.3, 0.4, 0.6).unwrap();
        let r = jacobi_reduce(&p, &ctx).unwrap();
        assert!(r.membership.jacobi_member());

        // (i, 2.3 + 0.7i) reduces into the box
        let p = JacobiPoint::from_tau_z(0.0, 1.0, 2.3, 0.7).unwrap();
        let r = jacobi_reduce(&p, &ctx).unwrap();
        assert!(r.membership.jacobi_member());
        let (l, m) = z_coefficients(&r.reduced).unwrap();
        assert!((0.0..1.0).contains(l.at(0, 0)));
        assert!((0.0..1.0).contains(m.at(0, 0)));
        // transform reproduces the reduced point
        let back = jacobi_action(&r.transform, &p).unwrap().point;
        let d = back.z().sub(&r.reduced.z()).max_norm();
        assert!(d < 1e-10, "transform defect {d}");
    }

    #[test]
    fn jacobi_reduce_random_membership() {
        let mut rng = SplitMix64::new(421);
        for n in 1..=2 {
            let ctx = ReductionContext::new(n).unwrap();
            for _ in 0..25 {
                let p = sample::jacobi_point(n, 1, &mut rng);
                let r = jacobi_reduce(&p, &ctx).unwrap();
                assert!(
                    r.membership.jacobi_member(),
                    "n={n} membership margins {:?}",
                    r.membership
                );
            }
        }
    }

    #[test]
    fn reduction_is_deterministic_on_boundaries() {
        // x = 1/2 sits on the seam of the half-open box and must map to -1/2
        let ctx = ReductionContext::new(1).unwrap();
        let p = SiegelPoint::from_tau(0.5, 1.7).unwrap();
        let r1 = siegel_reduce(&p, &ctx).unwrap();
        let r2 = siegel_reduce(&p, &ctx).unwrap();
        assert_eq!(r1.reduced.x().at(0, 0), r2.reduced.x().at(0, 0));
        assert_eq!(*r1.reduced.x().at(0, 0), -0.5);

        // a lambda coefficient of exactly 1 shifts to 0
        let p = JacobiPoint::from_tau_z(0.0, 1.0, 1.0, 0.0).unwrap();
        let r = jacobi_reduce(&p, &ctx).unwrap();
        let (l, m) = z_coefficients(&r.reduced).unwrap();
        assert_eq!(*l.at(0, 0), 0.0);
        assert_eq!(*m.at(0, 0), 0.0);
    }

    #[test]
    fn volume_formula_matches_table() {
        let expected = [
            PI / 3.0,
            PI * PI * PI / 270.0,
            libm::pow(PI, 6.0) / 127575.0,
            libm::pow(PI, 10.0) / 200930625.0,
        ];
        for (n, e) in expected.iter().enumerate() {
            let v = siegel_volume(n + 1).unwrap();
            assert!(
                (v - e).abs() < 1e-12 * e,
                "vol(F_{}) = {v}, expected {e}",
                n + 1
            );
        }
    }

    #[test]
    fn zeta_against_closed_forms() {
        assert!((zeta_int(2) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta_int(4) - libm::pow(PI, 4.0) / 90.0).abs() < 1e-14);
        assert!((zeta_int(6) - libm::pow(PI, 6.0) / 945.0).abs() < 1e-13);
        assert!((zeta_int(8) - libm::pow(PI, 8.0) / 9450.0).abs() < 1e-12);
    }

    #[test]
    fn estimator_converges_to_pi_over_three() {
        let v = volume_estimate_f1(200_000, 42);
        let rel = (v - PI / 3.0).abs() / (PI / 3.0);
        assert!(rel < 0.01, "relative error {rel}");
        // sharded evaluation is bit-identical when summed in stratum order
        let mut shards = volume_estimate_f1_strata(200_000, 42, 0..100);
        shards.extend(volume_estimate_f1_strata(200_000, 42, 100..F1_STRATA));
        let total: f64 = shards.iter().sum();
        assert_eq!(v, total);
    }
}
