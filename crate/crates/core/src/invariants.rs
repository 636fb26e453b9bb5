//! The unitary group acting on the tangent space T_{n,m} = T_n x C^(m,n)
//! and the basic invariant polynomial families, with invariance checks.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace};
use crate::matrix::{sym_eigenvalues, Mat};
use crate::num::{Cx, Scalar, C64};
use crate::rng::SplitMix64;

/// A tangent vector (omega, z): omega complex symmetric n x n, z complex
/// m x n.
#[derive(Debug, Clone)]
pub struct TangentPair {
    omega: Mat<C64>,
    z: Mat<C64>,
}

impl TangentPair {
    pub fn new(omega: Mat<C64>, z: Mat<C64>) -> Result<Self> {
        assert!(omega.is_square());
        let defect = omega.asymmetry();
        if defect > 1e-12 {
            return Err(Error::NotSymmetric { defect });
        }
        if z.cols() != omega.rows() {
            return Err(Error::DimensionMismatch {
                expected: omega.rows(),
                got: z.cols(),
                context: "TangentPair z vs omega",
            });
        }
        Ok(TangentPair {
            omega: omega.symmetrized(),
            z,
        })
    }

    pub fn n(&self) -> usize {
        self.omega.rows()
    }
    pub fn m(&self) -> usize {
        self.z.rows()
    }
    pub fn omega(&self) -> &Mat<C64> {
        &self.omega
    }
    pub fn z(&self) -> &Mat<C64> {
        &self.z
    }
}

/// Identifier of one member of the displayed invariant families
/// (1-based indices, matching the displays).
#[derive(Debug, Clone)]
pub enum InvariantFamilyId {
    /// p_j = tr((omega conj-omega)^j), 1 <= j <= n
    P {
        j: usize,
    },
    /// psi^1_k = (z t(conj z))_kk, 1 <= k <= m
    Psi1 {
        k: usize,
    },
    /// psi^2_kp = Re (z t(conj z))_kp, 1 <= k < p <= m
    Psi2 {
        k: usize,
        p: usize,
    },
    /// psi^3_kp = Im (z t(conj z))_kp
    Psi3 {
        k: usize,
        p: usize,
    },
    /// f^1_kp = Re (z conj-omega t(z))_kp, 1 <= k <= p <= m
    F1 {
        k: usize,
        p: usize,
    },
    /// f^2_kp = Im (z conj-omega t(z))_kp
    F2 {
        k: usize,
        p: usize,
    },
    /// m^1_j;S = Re tr((omega conj-omega + t(z) S conj(z))^j)
    M1 {
        j: usize,
        s: Mat<C64>,
    },
    M2 {
        j: usize,
        s: Mat<C64>,
    },
    /// q^1_k;S = Re tr((t(z) S conj(z))^k)
    Q1 {
        k: usize,
        s: Mat<C64>,
    },
    Q2 {
        k: usize,
        s: Mat<C64>,
    },
    /// theta^1_{i,k,j;S} = Re tr((om conj-om)^i (t(z)S conj-z)^k (sum)^j)
    Theta1 {
        i: usize,
        k: usize,
        j: usize,
        s: Mat<C64>,
    },
    Theta2 {
        i: usize,
        k: usize,
        j: usize,
        s: Mat<C64>,
    },
    /// r^1_jk = Re tr((om conj-om)^j (t(z) conj-z)^k)
    R1 {
        j: usize,
        k: usize,
    },
    R2 {
        j: usize,
        k: usize,
    },
}

fn mat_pow(m: &Mat<C64>, k: usize) -> Mat<C64> {
    let mut acc = Mat::cidentity(m.rows());
    for _ in 0..k {
        acc = acc.mul(m);
    }
    acc
}

impl InvariantFamilyId {
    fn validate(&self, n: usize, m: usize) -> Result<()> {
        let ok = match self {
            InvariantFamilyId::P { j } => (1..=n).contains(j),
            InvariantFamilyId::Psi1 { k } => (1..=m).contains(k),
            InvariantFamilyId::Psi2 { k, p } | InvariantFamilyId::Psi3 { k, p } => {
                *k >= 1 && k < p && *p <= m
            }
            InvariantFamilyId::F1 { k, p } | InvariantFamilyId::F2 { k, p } => {
                *k >= 1 && k <= p && *p <= m
            }
            InvariantFamilyId::M1 { j, s } | InvariantFamilyId::M2 { j, s } => {
                (1..=n).contains(j) && s.rows() == m && s.cols() == m
            }
            InvariantFamilyId::Q1 { k, s } | InvariantFamilyId::Q2 { k, s } => {
                (1..=m).contains(k) && s.rows() == m && s.cols() == m
            }
            InvariantFamilyId::Theta1 { i, k, j, s } | InvariantFamilyId::Theta2 { i, k, j, s } => {
                (1..=n).contains(i)
                    && (1..=n).contains(j)
                    && (1..=m).contains(k)
                    && s.rows() == m
                    && s.cols() == m
            }
            InvariantFamilyId::R1 { j, k } | InvariantFamilyId::R2 { j, k } => {
                (1..=n).contains(j) && (1..=m).contains(k)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange)
        }
    }
}

/// The U(n) action h . (omega, z) = (h omega t(h), z t(h)).
pub fn k_action(h: &Mat<C64>, t: &TangentPair) -> Result<TangentPair> {
    let n = t.n();
    if h.rows() != n || h.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.rows(),
            context: "k_action h vs tangent",
        });
    }
    let defect = h.mul(&h.adjoint()).sub(&Mat::cidentity(n)).max_norm();
    if defect > 1e-12 {
        return Err(Error::NotUnitary { defect });
    }
    let ht = h.transpose();
    TangentPair::new(h.mul(t.omega()).mul(&ht), t.z().mul(&ht))
}

/// Evaluate one displayed invariant polynomial.
pub fn eval_invariant(id: &InvariantFamilyId, t: &TangentPair) -> Result<f64> {
    id.validate(t.n(), t.m())?;
    let om = t.omega();
    let om_bar = om.conj();
    let z = t.z();
    let z_bar = z.conj();
    let zt = z.transpose();
    let oo = om.mul(&om_bar);
    let value = match id {
        InvariantFamilyId::P { j } => mat_pow(&oo, *j).trace().re,
        InvariantFamilyId::Psi1 { k } => z.mul(&z_bar.transpose()).at(k - 1, k - 1).re,
        InvariantFamilyId::Psi2 { k, p } => z.mul(&z_bar.transpose()).at(k - 1, p - 1).re,
        InvariantFamilyId::Psi3 { k, p } => z.mul(&z_bar.transpose()).at(k - 1, p - 1).im,
        InvariantFamilyId::F1 { k, p } => z.mul(&om_bar).mul(&zt).at(k - 1, p - 1).re,
        InvariantFamilyId::F2 { k, p } => z.mul(&om_bar).mul(&zt).at(k - 1, p - 1).im,
        InvariantFamilyId::M1 { j, s } => mat_pow(&oo.add(&zt.mul(s).mul(&z_bar)), *j).trace().re,
        InvariantFamilyId::M2 { j, s } => mat_pow(&oo.add(&zt.mul(s).mul(&z_bar)), *j).trace().im,
        InvariantFamilyId::Q1 { k, s } => mat_pow(&zt.mul(s).mul(&z_bar), *k).trace().re,
        InvariantFamilyId::Q2 { k, s } => mat_pow(&zt.mul(s).mul(&z_bar), *k).trace().im,
        InvariantFamilyId::Theta1 { i, k, j, s } => {
            let zsz = zt.mul(s).mul(&z_bar);
            mat_pow(&oo, *i)
                .mul(&mat_pow(&zsz, *k))
                .mul(&mat_pow(&oo.add(&zsz), *j))
                .trace()
                .re
        }
        InvariantFamilyId::Theta2 { i, k, j, s } => {
            let zsz = zt.mul(s).mul(&z_bar);
            mat_pow(&oo, *i)
                .mul(&mat_pow(&zsz, *k))
                .mul(&mat_pow(&oo.add(&zsz), *j))
                .trace()
                .im
        }
        InvariantFamilyId::R1 { j, k } => {
            mat_pow(&oo, *j)
                .mul(&mat_pow(&zt.mul(&z_bar), *k))
                .trace()
                .re
        }
        InvariantFamilyId::R2 { j, k } => {
            mat_pow(&oo, *j)
                .mul(&mat_pow(&zt.mul(&z_bar), *k))
                .trace()
                .im
        }
    };
    Ok(value)
}

/// Haar-adequate random unitary: Gram-Schmidt QR of a seeded complex
/// Gaussian with phase-fixed leading entries.
pub fn random_unitary(n: usize, rng: &mut SplitMix64) -> Mat<C64> {
    let mut q = Mat::from_fn(n, n, |_, _| C64::c(rng.normal(), rng.normal()));
    for j in 0..n {
        for k in 0..j {
            let mut dot = C64::ZERO;
            for i in 0..n {
                dot = dot + q.at(i, k).conj() * q.at(i, j).clone();
            }
            for i in 0..n {
                let v = q.at(i, j).clone() - q.at(i, k).clone() * dot.clone();
                q.set(i, j, v);
            }
        }
        let mut norm = 0.0;
        for i in 0..n {
            norm += q.at(i, j).norm_sq();
        }
        let norm = libm::sqrt(norm);
        let lead = q.at(j, j).clone();
        let phase = if lead.abs() > 1e-300 {
            lead.scale(1.0 / lead.abs()).conj()
        } else {
            C64::ONE
        };
        for i in 0..n {
            let v = q.at(i, j).clone() * phase.clone();
            q.set(i, j, v.scale(1.0 / norm));
        }
    }
    q
}

/// Max over `trials` random unitaries of |P(h . t) - P(t)|.
pub fn invariance_defect(
    id: &InvariantFamilyId,
    t: &TangentPair,
    trials: usize,
    rng: &mut SplitMix64,
) -> Result<f64> {
    let base = eval_invariant(id, t)?;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let h = random_unitary(t.n(), rng);
        let moved = k_action(&h, t)?;
        let v = eval_invariant(id, &moved)?;
        worst = worst.max((v - base).abs());
    }
    Ok(worst)
}

/// Numeric rank of the Jacobian of (q_1, ..., q_n), q_i = tr((omega
/// conj-omega)^i), with respect to the real coordinates of omega at a
/// seeded random point; n when the generators are independent there.
pub fn independence_rank(n: usize, rng: &mut SplitMix64) -> usize {
    let sym = n * (n + 1) / 2;
    let dim = 2 * sym;
    let space = JetSpace::new(dim, 1);
    let coords: Vec<Jet> = (0..dim)
        .map(|k| Jet::variable(&space, k, rng.uniform(-1.0, 1.0)))
        .collect();
    let mut index_of = alloc::vec![alloc::vec![0usize; n]; n];
    let mut idx = 0usize;
    for mu in 0..n {
        for nu in mu..n {
            index_of[mu][nu] = idx;
            index_of[nu][mu] = idx;
            idx += 1;
        }
    }
    let omega = Mat::from_fn(n, n, |i, j| Cx {
        re: coords[index_of[i][j]].clone(),
        im: coords[sym + index_of[i][j]].clone(),
    });
    let oo = omega.mul(&omega.conj());
    let mut jac = Mat::zeros(n, dim);
    let mut power = Mat::identity_like(oo.at(0, 0), n);
    let mut e = alloc::vec![0u8; dim];
    for i in 0..n {
        power = power.mul(&oo);
        let tr = power.trace();
        for k in 0..dim {
            e.iter_mut().for_each(|x| *x = 0);
            e[k] = 1;
            jac.set(i, k, tr.re.deriv(&e));
        }
    }
    let gram = jac.mul(&jac.transpose());
    let ev = sym_eigenvalues(&gram, 30);
    let max = ev.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if max == 0.0 {
        return 0;
    }
    ev.iter().filter(|&&l| l.abs() > 1e-10 * max).count()
}

/// Every family member valid for (n, m), with a seeded S parameter where
/// one is required. Used by the invariance suites.
pub fn all_families(n: usize, m: usize, rng: &mut SplitMix64) -> Vec<InvariantFamilyId> {
    let s = Mat::from_fn(m, m, |_, _| {
        C64::c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
    });
    let mut out = Vec::new();
    for j in 1..=n {
        out.push(InvariantFamilyId::P { j });
    }
    for k in 1..=m {
        out.push(InvariantFamilyId::Psi1 { k });
    }
    for k in 1..=m {
        for p in (k + 1)..=m {
            out.push(InvariantFamilyId::Psi2 { k, p });
            out.push(InvariantFamilyId::Psi3 { k, p });
        }
    }
    for k in 1..=m {
        for p in k..=m {
            out.push(InvariantFamilyId::F1 { k, p });
            out.push(InvariantFamilyId::F2 { k, p });
        }
    }
    for j in 1..=n {
        out.push(InvariantFamilyId::M1 { j, s: s.clone() });
        out.push(InvariantFamilyId::M2 { j, s: s.clone() });
    }
    for k in 1..=m {
        out.push(InvariantFamilyId::Q1 { k, s: s.clone() });
        out.push(InvariantFamilyId::Q2 { k, s: s.clone() });
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=m {
                out.push(InvariantFamilyId::Theta1 {
                    i,
                    k,
                    j,
                    s: s.clone(),
                });
                out.push(InvariantFamilyId::Theta2 {
                    i,
                    k,
                    j,
                    s: s.clone(),
                });
            }
        }
    }
    for j in 1..=n {
        for k in 1..=m {
            out.push(InvariantFamilyId::R1 { j, k });
            out.push(InvariantFamilyId::R2 { j, k });
        }
    }
    out
}

/// Seeded random tangent pair.
pub fn random_tangent(n: usize, m: usize, rng: &mut SplitMix64) -> TangentPair {
    let omega = Mat::from_fn(n, n, |_, _| {
        C64::c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
    })
    .symmetrized();
    let z = Mat::from_fn(m, n, |_, _| {
        C64::c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
    });
    TangentPair::new(omega, z).expect("random tangent validates")
}
