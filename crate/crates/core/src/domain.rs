//! Validated points and group elements.
//!
//! Constructors symmetrize inputs whose asymmetry is below `sym_tol` and
//! reject anything worse; positivity invariants are certified by Cholesky
//! at construction, so a value that exists is a valid point of its space.
//! Supported desk-scale range is 1 <= n <= 3, 1 <= m <= 2 (documented, not
//! enforced).

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::{cholesky, cholesky_real, Mat};
use crate::num::{Scalar, C64};

fn check_symmetric(m: &Mat<f64>, sym_tol: f64, _what: &'static str) -> Result<Mat<f64>> {
    if !m.all_finite() {
        return Err(Error::NonFinite);
    }
    let defect = m.asymmetry();
    if defect > sym_tol {
        return Err(Error::NotSymmetric { defect });
    }
    Ok(m.symmetrized())
}

/// Point of the Siegel upper half space: Omega = X + iY, Y > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    x: Mat<f64>,
    y: Mat<f64>,
}

impl SiegelPoint {
    pub fn new(x: Mat<f64>, y: Mat<f64>) -> Result<Self> {
        Self::with_tol(x, y, &Tolerances::default())
    }

    pub fn with_tol(x: Mat<f64>, y: Mat<f64>, tol: &Tolerances) -> Result<Self> {
        assert!(x.is_square() && y.is_square());
        if x.rows() != y.rows() {
            return Err(Error::DimensionMismatch {
                expected: x.rows(),
                got: y.rows(),
                context: "SiegelPoint X vs Y",
            });
        }
        let x = check_symmetric(&x, tol.sym_tol, "X")?;
        let y = check_symmetric(&y, tol.sym_tol, "Y")?;
        cholesky_real(&y, tol.sym_tol, tol.posdef_tol)?;
        Ok(SiegelPoint { x, y })
    }

    /// n = m = 1 convenience: tau = x + iy.
    pub fn from_tau(x: f64, y: f64) -> Result<Self> {
        SiegelPoint::new(Mat::from_rows(&[&[x]]), Mat::from_rows(&[&[y]]))
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }
    pub fn x(&self) -> &Mat<f64> {
        &self.x
    }
    pub fn y(&self) -> &Mat<f64> {
        &self.y
    }
    pub fn omega(&self) -> Mat<C64> {
        Mat::from_re_im(&self.x, &self.y)
    }

    /// Re-validate the invariants (used by constructor-totality tests).
    pub fn revalidate(&self, tol: &Tolerances) -> Result<()> {
        SiegelPoint::with_tol(self.x.clone(), self.y.clone(), tol).map(|_| ())
    }
}

/// Point of the Siegel-Jacobi space: (Omega, Z) with Z = U + iV in C^(m,n).
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiPoint {
    base: SiegelPoint,
    u: Mat<f64>,
    v: Mat<f64>,
}

impl JacobiPoint {
    pub fn new(base: SiegelPoint, u: Mat<f64>, v: Mat<f64>) -> Result<Self> {
        if u.rows() != v.rows() || u.cols() != v.cols() {
            return Err(Error::DimensionMismatch {
                expected: u.rows() * u.cols(),
                got: v.rows() * v.cols(),
                context: "JacobiPoint U vs V",
            });
        }
        if u.cols() != base.n() {
            return Err(Error::DimensionMismatch {
                expected: base.n(),
                got: u.cols(),
                context: "JacobiPoint Z vs Omega",
            });
        }
        if !u.all_finite() || !v.all_finite() {
            return Err(Error::NonFinite);
        }
        Ok(JacobiPoint { base, u, v })
    }

    /// n = m = 1 convenience: (tau, z) = (x+iy, u+iv).
    pub fn from_tau_z(x: f64, y: f64, u: f64, v: f64) -> Result<Self> {
        JacobiPoint::new(
            SiegelPoint::from_tau(x, y)?,
            Mat::from_rows(&[&[u]]),
            Mat::from_rows(&[&[v]]),
        )
    }

    pub fn base(&self) -> &SiegelPoint {
        &self.base
    }
    pub fn n(&self) -> usize {
        self.base.n()
    }
    pub fn m(&self) -> usize {
        self.u.rows()
    }
    pub fn u(&self) -> &Mat<f64> {
        &self.u
    }
    pub fn v(&self) -> &Mat<f64> {
        &self.v
    }
    pub fn z(&self) -> Mat<C64> {
        Mat::from_re_im(&self.u, &self.v)
    }
    pub fn omega(&self) -> Mat<C64> {
        self.base.omega()
    }
}

/// Point of the Siegel-Jacobi disk: (W, eta), W symmetric, I - W conj(W) > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskPoint {
    w: Mat<C64>,
    eta: Mat<C64>,
}

impl DiskPoint {
    pub fn new(w: Mat<C64>, eta: Mat<C64>) -> Result<Self> {
        Self::with_tol(w, eta, &Tolerances::default())
    }

    pub fn with_tol(w: Mat<C64>, eta: Mat<C64>, tol: &Tolerances) -> Result<Self> {
        assert!(w.is_square());
        if eta.cols() != w.rows() {
            return Err(Error::DimensionMismatch {
                expected: w.rows(),
                got: eta.cols(),
                context: "DiskPoint eta vs W",
            });
        }
        if !w.all_finite() || !eta.all_finite() {
            return Err(Error::NonFinite);
        }
        let defect = w.asymmetry();
        if defect > tol.sym_tol {
            return Err(Error::NotSymmetric { defect });
        }
        let w = w.symmetrized();
        // I - W conj(W) must be Hermitian positive definite.
        let n = w.rows();
        let g = Mat::cidentity(n).sub(&w.mul(&w.conj()));
        // symmetrize away roundoff before certifying
        let g = Mat::from_fn(n, n, |i, j| {
            (g.at(i, j).clone() + g.at(j, i).conj()).scale(0.5)
        });
        cholesky(&g, tol.sym_tol.max(1e-10), tol.posdef_tol)?;
        Ok(DiskPoint { w, eta })
    }

    /// n = m = 1 convenience.
    pub fn from_scalars(w: C64, eta: C64) -> Result<Self> {
        DiskPoint::new(
            Mat::from_vec(1, 1, alloc::vec![w]),
            Mat::from_vec(1, 1, alloc::vec![eta]),
        )
    }

    pub fn n(&self) -> usize {
        self.w.rows()
    }
    pub fn m(&self) -> usize {
        self.eta.rows()
    }
    pub fn w(&self) -> &Mat<C64> {
        &self.w
    }
    pub fn eta(&self) -> &Mat<C64> {
        &self.eta
    }
}

/// Element of Sp(n, R) stored as four n x n blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    a: Mat<f64>,
    b: Mat<f64>,
    c: Mat<f64>,
    d: Mat<f64>,
}

impl SymplecticMatrix {
    /// Validates `tM J M = J` within `symplectic_tol`.
    pub fn new(a: Mat<f64>, b: Mat<f64>, c: Mat<f64>, d: Mat<f64>) -> Result<Self> {
        Self::with_tol(a, b, c, d, &Tolerances::default())
    }

    pub fn with_tol(
        a: Mat<f64>,
        b: Mat<f64>,
        c: Mat<f64>,
        d: Mat<f64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = a.rows();
        for (blk, name) in [(&a, "A"), (&b, "B"), (&c, "C"), (&d, "D")] {
            if !blk.is_square() || blk.rows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: blk.rows(),
                    context: match name {
                        "A" => "Symplectic block A",
                        "B" => "Symplectic block B",
                        "C" => "Symplectic block C",
                        _ => "Symplectic block D",
                    },
                });
            }
            if !blk.all_finite() {
                return Err(Error::NonFinite);
            }
        }
        // tM J M - J in blocks:
        //   [ tA C - tC A,            tA D - tC B - I ]
        //   [ tB C - tD A + I,        tB D - tD B     ]
        let ta = a.transpose();
        let tb = b.transpose();
        let tc = c.transpose();
        let td = d.transpose();
        let id = Mat::identity(n);
        let blk11 = ta.mul(&c).sub(&tc.mul(&a));
        let blk12 = ta.mul(&d).sub(&tc.mul(&b)).sub(&id);
        let blk21 = tb.mul(&c).sub(&td.mul(&a)).add(&id);
        let blk22 = tb.mul(&d).sub(&td.mul(&b));
        let defect = blk11
            .max_norm()
            .max(blk12.max_norm())
            .max(blk21.max_norm())
            .max(blk22.max_norm());
        if defect > tol.symplectic_tol {
            return Err(Error::NotSymplectic { defect });
        }
        Ok(SymplecticMatrix { a, b, c, d })
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix {
            a: Mat::identity(n),
            b: Mat::zeros(n, n),
            c: Mat::zeros(n, n),
            d: Mat::identity(n),
        }
    }

    /// The inversion element (0, I; -I, 0).
    pub fn inversion(n: usize) -> Self {
        SymplecticMatrix {
            a: Mat::zeros(n, n),
            b: Mat::identity(n),
            c: Mat::identity(n).neg(),
            d: Mat::zeros(n, n),
        }
    }

    /// Translation (I, B; 0, I) for symmetric B.
    pub fn translation(b: Mat<f64>) -> Result<Self> {
        let n = b.rows();
        let b = check_symmetric(&b, Tolerances::default().sym_tol, "B")?;
        Ok(SymplecticMatrix {
            a: Mat::identity(n),
            b,
            c: Mat::zeros(n, n),
            d: Mat::identity(n),
        })
    }

    /// GL(n) embedding (h, 0; 0, t(h^-1)): acts as Omega -> h Omega t(h).
    pub fn gl_embedding(h: &Mat<f64>, pivot_tol: f64) -> Result<Self> {
        let hinv = h.inverse(pivot_tol)?;
        SymplecticMatrix::new(
            h.clone(),
            Mat::zeros(h.rows(), h.rows()),
            Mat::zeros(h.rows(), h.rows()),
            hinv.transpose(),
        )
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }
    pub fn a(&self) -> &Mat<f64> {
        &self.a
    }
    pub fn b(&self) -> &Mat<f64> {
        &self.b
    }
    pub fn c(&self) -> &Mat<f64> {
        &self.c
    }
    pub fn d(&self) -> &Mat<f64> {
        &self.d
    }

    /// The 2n x 2n assembled matrix.
    pub fn assemble(&self) -> Mat<f64> {
        let n = self.n();
        Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => *self.a.at(i, j),
            (true, false) => *self.b.at(i, j - n),
            (false, true) => *self.c.at(i - n, j),
            (false, false) => *self.d.at(i - n, j - n),
        })
    }

    pub fn matmul(&self, rhs: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        SymplecticMatrix::new(
            self.a.mul(&rhs.a).add(&self.b.mul(&rhs.c)),
            self.a.mul(&rhs.b).add(&self.b.mul(&rhs.d)),
            self.c.mul(&rhs.a).add(&self.d.mul(&rhs.c)),
            self.c.mul(&rhs.b).add(&self.d.mul(&rhs.d)),
        )
    }

    /// Inverse via the symplectic identity: M^-1 = (tD, -tB; -tC, tA).
    pub fn inverse(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            a: self.d.transpose(),
            b: self.b.transpose().neg(),
            c: self.c.transpose().neg(),
            d: self.a.transpose(),
        }
    }
}

/// Element of the Heisenberg group: (lambda, mu, kappa), lambda, mu real
/// m x n, kappa real m x m. No constraint is imposed on kappa.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergElement {
    lambda: Mat<f64>,
    mu: Mat<f64>,
    kappa: Mat<f64>,
}

impl HeisenbergElement {
    pub fn new(lambda: Mat<f64>, mu: Mat<f64>, kappa: Mat<f64>) -> Result<Self> {
        let (m, n) = (lambda.rows(), lambda.cols());
        if mu.rows() != m || mu.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                got: mu.rows() * mu.cols(),
                context: "Heisenberg mu vs lambda",
            });
        }
        if kappa.rows() != m || kappa.cols() != m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                got: kappa.rows() * kappa.cols(),
                context: "Heisenberg kappa",
            });
        }
        if !lambda.all_finite() || !mu.all_finite() || !kappa.all_finite() {
            return Err(Error::NonFinite);
        }
        Ok(HeisenbergElement { lambda, mu, kappa })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        HeisenbergElement {
            lambda: Mat::zeros(m, n),
            mu: Mat::zeros(m, n),
            kappa: Mat::zeros(m, m),
        }
    }

    pub fn m(&self) -> usize {
        self.lambda.rows()
    }
    pub fn n(&self) -> usize {
        self.lambda.cols()
    }
    pub fn lambda(&self) -> &Mat<f64> {
        &self.lambda
    }
    pub fn mu(&self) -> &Mat<f64> {
        &self.mu
    }
    pub fn kappa(&self) -> &Mat<f64> {
        &self.kappa
    }
}

/// Element of the Jacobi group Sp(n,R) x| H^(n,m).
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiGroupElement {
    m: SymplecticMatrix,
    h: HeisenbergElement,
}

impl JacobiGroupElement {
    pub fn new(m: SymplecticMatrix, h: HeisenbergElement) -> Result<Self> {
        if m.n() != h.n() {
            return Err(Error::DimensionMismatch {
                expected: m.n(),
                got: h.n(),
                context: "Jacobi element: Sp degree vs Heisenberg",
            });
        }
        Ok(JacobiGroupElement { m, h })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        JacobiGroupElement {
            m: SymplecticMatrix::identity(n),
            h: HeisenbergElement::zero(n, m),
        }
    }

    pub fn from_symplectic(m: SymplecticMatrix, heis_rows: usize) -> Self {
        let n = m.n();
        JacobiGroupElement {
            m,
            h: HeisenbergElement::zero(n, heis_rows),
        }
    }

    pub fn sp(&self) -> &SymplecticMatrix {
        &self.m
    }
    pub fn heis(&self) -> &HeisenbergElement {
        &self.h
    }
    pub fn n(&self) -> usize {
        self.m.n()
    }
    pub fn m_rows(&self) -> usize {
        self.h.m()
    }
}

/// Element of the Cayley-conjugated group acting on the Siegel-Jacobi disk.
///
/// The translation blocks are complex: conjugating a real Heisenberg pair
/// (lambda, mu) gives lambda* = (lambda + i mu)/2, mu* = (lambda - i mu)/2.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGroupElement {
    p: Mat<C64>,
    q: Mat<C64>,
    lambda: Mat<C64>,
    mu: Mat<C64>,
    kappa: Mat<C64>,
}

impl DiskGroupElement {
    /// Validates the defining relations of the conjugated symplectic group,
    /// P tQ = Q tP and P tconj(P) - Q tconj(Q) = I, within
    /// `symplectic_tol`. (These are the block relations of tM J M = J for
    /// the assembled matrix (P, Q; conj Q, conj P).)
    pub fn new(
        p: Mat<C64>,
        q: Mat<C64>,
        lambda: Mat<C64>,
        mu: Mat<C64>,
        kappa: Mat<C64>,
    ) -> Result<Self> {
        Self::with_tol(p, q, lambda, mu, kappa, &Tolerances::default())
    }

    pub fn with_tol(
        p: Mat<C64>,
        q: Mat<C64>,
        lambda: Mat<C64>,
        mu: Mat<C64>,
        kappa: Mat<C64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = p.rows();
        if !p.is_square() || !q.is_square() || q.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: q.rows(),
                context: "DiskGroupElement P vs Q",
            });
        }
        let sym = p.mul(&q.transpose()).sub(&q.mul(&p.transpose()));
        let unit = p
            .mul(&p.adjoint())
            .sub(&q.mul(&q.adjoint()))
            .sub(&Mat::cidentity(n));
        let defect = sym.max_norm().max(unit.max_norm());
        if defect > tol.symplectic_tol {
            return Err(Error::NotSymplectic { defect });
        }
        if lambda.rows() != mu.rows() || lambda.cols() != n || mu.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: lambda.cols(),
                context: "DiskGroupElement translation blocks",
            });
        }
        Ok(DiskGroupElement {
            p,
            q,
            lambda,
            mu,
            kappa,
        })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        DiskGroupElement {
            p: Mat::cidentity(n),
            q: Mat::czeros(n, n),
            lambda: Mat::czeros(m, n),
            mu: Mat::czeros(m, n),
            kappa: Mat::czeros(m, m),
        }
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }
    pub fn m_rows(&self) -> usize {
        self.lambda.rows()
    }
    pub fn p(&self) -> &Mat<C64> {
        &self.p
    }
    pub fn q(&self) -> &Mat<C64> {
        &self.q
    }
    pub fn lambda(&self) -> &Mat<C64> {
        &self.lambda
    }
    pub fn mu(&self) -> &Mat<C64> {
        &self.mu
    }
    pub fn kappa(&self) -> &Mat<C64> {
        &self.kappa
    }

    /// Largest imaginary magnitude of the translation blocks; logged by the
    /// conjugation tests.
    pub fn translation_imag_magnitude(&self) -> f64 {
        self.lambda.im().max_norm().max(self.mu.im().max_norm())
    }
}

/// Seeded random generators for valid points (shared by every test suite).
pub mod sample {
    use super::*;
    use crate::rng::SplitMix64;

    pub fn siegel_point(n: usize, rng: &mut SplitMix64) -> SiegelPoint {
        let x = Mat::from_fn(n, n, |_, _| rng.uniform(-1.2, 1.2)).symmetrized();
        // Y = L tL + eps I keeps the spectrum comfortably positive
        let l = Mat::from_fn(
            n,
            n,
            |i, j| {
                if j <= i {
                    rng.uniform(-0.8, 0.8)
                } else {
                    0.0
                }
            },
        );
        let mut y = l.mul(&l.transpose());
        for i in 0..n {
            *y.at_mut(i, i) += 0.4 + rng.uniform(0.0, 0.8);
        }
        SiegelPoint::new(x, y.symmetrized()).expect("sampled Siegel point must validate")
    }

    pub fn jacobi_point(n: usize, m: usize, rng: &mut SplitMix64) -> JacobiPoint {
        let base = siegel_point(n, rng);
        let u = Mat::from_fn(m, n, |_, _| rng.uniform(-1.0, 1.0));
        let v = Mat::from_fn(m, n, |_, _| rng.uniform(-1.0, 1.0));
        JacobiPoint::new(base, u, v).expect("sampled Jacobi point must validate")
    }

    pub fn disk_point(n: usize, m: usize, rng: &mut SplitMix64) -> DiskPoint {
        // scale a random symmetric W to spectral radius about 0.6
        let raw = Mat::from_fn(n, n, |_, _| {
            C64::c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
        })
        .symmetrized();
        let norm = raw.inf_norm().max(1e-9);
        let w = raw.scale(rng.uniform(0.1, 0.6) / norm);
        let eta = Mat::from_fn(m, n, |_, _| {
            C64::c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
        });
        DiskPoint::new(w, eta).expect("sampled disk point must validate")
    }

    /// Random symplectic element as a short word in generators.
    pub fn symplectic(n: usize, rng: &mut SplitMix64) -> SymplecticMatrix {
        let mut g = SymplecticMatrix::identity(n);
        let steps = 2 + (rng.next_u64() % 3) as usize;
        for _ in 0..steps {
            let pick = rng.next_u64() % 3;
            let f = match pick {
                0 => {
                    let b = Mat::from_fn(n, n, |_, _| rng.uniform(-0.8, 0.8)).symmetrized();
                    SymplecticMatrix::translation(b).unwrap()
                }
                1 => SymplecticMatrix::inversion(n),
                _ => {
                    // well-conditioned GL factor close to identity
                    let mut h = Mat::identity(n);
                    for i in 0..n {
                        for j in 0..n {
                            if i != j {
                                *h.at_mut(i, j) += rng.uniform(-0.4, 0.4);
                            }
                        }
                    }
                    SymplecticMatrix::gl_embedding(&h, 1e-12).unwrap()
                }
            };
            g = g.matmul(&f).unwrap();
        }
        g
    }

    pub fn heisenberg(n: usize, m: usize, rng: &mut SplitMix64) -> HeisenbergElement {
        HeisenbergElement::new(
            Mat::from_fn(m, n, |_, _| rng.uniform(-1.0, 1.0)),
            Mat::from_fn(m, n, |_, _| rng.uniform(-1.0, 1.0)),
            Mat::from_fn(m, m, |_, _| rng.uniform(-1.0, 1.0)),
        )
        .unwrap()
    }

    pub fn jacobi_element(n: usize, m: usize, rng: &mut SplitMix64) -> JacobiGroupElement {
        JacobiGroupElement::new(symplectic(n, rng), heisenberg(n, m, rng)).unwrap()
    }
}
