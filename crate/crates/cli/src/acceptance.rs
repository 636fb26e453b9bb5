//! The verification suite behind `sjspace verify-all` and the acceptance
//! test target: one callable criterion per numbered check, each returning
//! its worst observed defect against a pinned threshold.

use sjspace_core::action::{
    disk_action, jacobi_action, jacobi_multiply, siegel_action, star_conjugate_unchecked,
};
use sjspace_core::cayley::{compatibility_residual, partial_cayley, partial_cayley_inverse};
use sjspace_core::chart::Chart;
use sjspace_core::diffops::{
    self, commutator_residual_thm4, invariance_residual, GroupElem, InvariantOp, MaassH, OpD, OpD1,
    OpD2, OpKDet, OpPsi, OpTMatrix, SymmetrizedPolynomial,
};
use sjspace_core::domain::{sample, JacobiPoint, SiegelPoint};
use sjspace_core::fields::random_field;
use sjspace_core::invariants::{
    all_families, independence_rank, invariance_defect, random_tangent,
};
use sjspace_core::matrix::Mat;
use sjspace_core::metric::{
    disk_action_jacobian, disk_metric_tensor, jacobi_action_jacobian, jacobi_metric_tensor,
    laplace_beltrami, pullback, MetricScales,
};
use sjspace_core::num::C64;
use sjspace_core::reduction::{
    jacobi_reduce, siegel_reduce, siegel_volume, sl2z_ball, volume_estimate_f1, ReductionContext,
};
use sjspace_core::rng::{derive_seed, SplitMix64};
use sjspace_core::special::{
    catalog_entry, catalog_variants, eigen_residual, eisenstein_term_elem, fourier_ode_residual,
    torus_character, torus_gram, EisensteinCoset, OdeCandidate,
};
use sjspace_core::Tolerances;

pub const CRITERIA: usize = 14;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub max_defect: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{:>2}] {}  {} (worst defect {:.3e}, tolerance {:.0e}{})",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.max_defect,
            self.threshold,
            if self.detail.is_empty() {
                String::new()
            } else {
                format!("; {}", self.detail)
            }
        )
    }
}

/// Checks that are out of reach by construction and therefore not part of
/// the suite.
pub const SKIPPED_BY_DESIGN: &[&str] = &[
    "cusp-form spectral theory beyond the torus basis (no algorithm at desk scale)",
    "decomposition of the regular representation into irreducibles",
    "convergence of the full Eisenstein sum (only term-level identities are asserted)",
    "open problems: distance formula, generators of the full invariant-operator algebra, trace formula, Whittaker models",
];

const DIMS: [(usize, usize); 4] = [(1, 1), (2, 1), (1, 2), (2, 2)];

fn report(
    id: usize,
    name: &'static str,
    max_defect: f64,
    threshold: f64,
    detail: String,
) -> CriterionReport {
    CriterionReport {
        id,
        name,
        pass: max_defect < threshold,
        max_defect,
        threshold,
        detail,
    }
}

/// Criterion 1: Volume of the modular variety: closed table to 12 digits and the
///    stratified estimator within 1% (seed pinned at 42).
pub fn c01_volume(_seed: u64) -> CriterionReport {
    let pi = std::f64::consts::PI;
    let table = [
        pi / 3.0,
        pi.powi(3) / 270.0,
        pi.powi(6) / 127575.0,
        pi.powi(10) / 200930625.0,
    ];
    let mut worst: f64 = 0.0;
    for (n, expect) in table.iter().enumerate() {
        let v = siegel_volume(n + 1).unwrap();
        worst = worst.max((v - expect).abs() / expect / 1e-12);
    }
    let est = volume_estimate_f1(1_000_000, 42);
    let est_rel = (est - pi / 3.0).abs() / (pi / 3.0);
    worst = worst.max(est_rel / 0.01);
    report(
        1,
        "volume: closed formula table to 12 digits; estimator within 1%",
        worst,
        1.0,
        format!("estimator rel err {est_rel:.2e}"),
    )
}

/// Criterion 2: Invariance of the space metric under 50 seeded (g, p) pairs per
///    dimension pair.
pub fn c02_metric_invariance(seed: u64) -> CriterionReport {
    let scales = MetricScales::unit();
    let mut worst: f64 = 0.0;
    for (n, m) in DIMS {
        let mut rng = SplitMix64::new(derive_seed(seed, "metric-invariance"));
        for _ in 0..50 {
            let g = sample::jacobi_element(n, m, &mut rng);
            let p = sample::jacobi_point(n, m, &mut rng);
            let image = jacobi_action(&g, &p).unwrap().point;
            let jac = jacobi_action_jacobian(&g, &p).unwrap();
            let pulled = pullback(&jac, jacobi_metric_tensor(&image, &scales).unwrap().g());
            let here = jacobi_metric_tensor(&p, &scales).unwrap();
            worst = worst.max(pulled.sub(here.g()).max_norm());
        }
    }
    report(
        2,
        "space metric invariance (pullback defect)",
        worst,
        1e-8,
        String::new(),
    )
}

/// Criterion 3: Invariance of the disk metric under the conjugated action.
pub fn c03_disk_metric_invariance(seed: u64) -> CriterionReport {
    let scales = MetricScales::unit();
    let mut worst: f64 = 0.0;
    for (n, m) in DIMS {
        let mut rng = SplitMix64::new(derive_seed(seed, "disk-metric-invariance"));
        for _ in 0..50 {
            let g = star_conjugate_unchecked(&sample::jacobi_element(n, m, &mut rng)).unwrap();
            let p = sample::disk_point(n, m, &mut rng);
            let image = disk_action(&g, &p).unwrap().point;
            let jac = disk_action_jacobian(&g, &p).unwrap();
            let pulled = pullback(&jac, disk_metric_tensor(&image, &scales).unwrap().g());
            let here = disk_metric_tensor(&p, &scales).unwrap();
            worst = worst.max(pulled.sub(here.g()).max_norm());
        }
    }
    report(
        3,
        "disk metric invariance (pullback defect)",
        worst,
        1e-8,
        String::new(),
    )
}

/// Criterion 4: Closed-form Laplacians against the generic Laplace-Beltrami oracle
///    of the polarized metrics, both pictures.
pub fn c04_laplacian_cross_oracle(seed: u64) -> CriterionReport {
    let scales = MetricScales::new(1.3, 0.8);
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for (n, m) in DIMS {
        let chart = Chart::jacobi(n, m);
        let dchart = Chart::disk(n, m);
        let mut rng = SplitMix64::new(derive_seed(seed, "laplacian-oracle"));
        for _ in 0..30 {
            let p = sample::jacobi_point(n, m, &mut rng);
            let coords = chart.pack_jacobi(&p);
            let f = random_field(chart, &mut rng, false);
            let (_, jets) = chart.seed_jets(&coords, 2);
            let fj = f.jet_on(&jets);
            let closed = diffops::laplacian_jacobi_jet(&chart, &jets, &fj, &scales).unwrap();
            let sc = scales;
            let metric = move |c: &[f64]| -> sjspace_core::Result<Mat<f64>> {
                Ok(jacobi_metric_tensor(&chart.unpack_jacobi(c)?, &sc)?
                    .g()
                    .clone())
            };
            let lb = laplace_beltrami(&metric, &f, &coords, &tol).unwrap();
            worst = worst.max((closed.clone() - lb).abs() / (1.0 + closed.abs()));

            let pd = sample::disk_point(n, m, &mut rng);
            let coords = dchart.pack_disk(&pd);
            let f = random_field(dchart, &mut rng, false);
            let (_, jets) = dchart.seed_jets(&coords, 2);
            let fj = f.jet_on(&jets);
            let closed = diffops::laplacian_disk_jet(&dchart, &jets, &fj, &scales).unwrap();
            let metric = move |c: &[f64]| -> sjspace_core::Result<Mat<f64>> {
                Ok(disk_metric_tensor(&dchart.unpack_disk(c)?, &sc)?
                    .g()
                    .clone())
            };
            let lb = laplace_beltrami(&metric, &f, &coords, &tol).unwrap();
            worst = worst.max((closed.clone() - lb).abs() / (1.0 + closed.abs()));
        }
    }
    report(
        4,
        "closed-form Laplacians match the Laplace-Beltrami oracle (both pictures)",
        worst,
        1e-6,
        String::new(),
    )
}

/// Criterion 5: Eigenfunction catalog residuals at 20 seeded points per entry.
pub fn c05_eigen_catalog(seed: u64) -> CriterionReport {
    let mut rng = SplitMix64::new(derive_seed(seed, "eigen-catalog"));
    let s = C64::c(1.35, 0.45);
    let mut worst: f64 = 0.0;
    let mut bessel_worst: f64 = 0.0;
    for item in 1..=4usize {
        for variant in 0..catalog_variants(item) {
            let s_here = if item == 1 {
                C64::c(1.35, 0.0)
            } else {
                s.clone()
            };
            let entry = catalog_entry(item, variant, s_here, 1.0).unwrap();
            for _ in 0..20 {
                let p = sample::jacobi_point(1, 1, &mut rng);
                let r = eigen_residual(&entry, &p).unwrap();
                if item == 1 {
                    bessel_worst = bessel_worst.max(r);
                } else {
                    worst = worst.max(r);
                }
            }
        }
    }
    let combined = (worst / 1e-7).max(bessel_worst / 1e-5);
    report(
        5,
        "eigenfunction catalog residuals (closed-form 1e-7, Bessel 1e-5)",
        combined,
        1.0,
        format!("closed {worst:.2e}, Bessel {bessel_worst:.2e}"),
    )
}

/// Criterion 6: Commutator identity and invariance of the four generators.
pub fn c06_generators(seed: u64) -> CriterionReport {
    let chart = Chart::jacobi(1, 1);
    let mut rng = SplitMix64::new(derive_seed(seed, "generators"));
    let mut worst_comm: f64 = 0.0;
    for _ in 0..50 {
        let f = random_field(chart, &mut rng, true);
        let p = sample::jacobi_point(1, 1, &mut rng);
        let coords = chart.pack_jacobi(&p);
        worst_comm = worst_comm.max(commutator_residual_thm4(&f, &coords).unwrap());
    }
    let mut worst_inv: f64 = 0.0;
    for op in [&OpD as &dyn InvariantOp, &OpPsi, &OpD1, &OpD2] {
        for _ in 0..50 {
            let f = random_field(chart, &mut rng, false);
            let p = sample::jacobi_point(1, 1, &mut rng);
            let coords = chart.pack_jacobi(&p);
            let g = GroupElem::Jacobi(sample::jacobi_element(1, 1, &mut rng));
            worst_inv = worst_inv.max(invariance_residual(op, &g, &f, &coords).unwrap());
        }
    }
    let combined = worst_comm.max(worst_inv);
    report(
        6,
        "generator algebra: commutator identity and invariance of D, Psi, D1, D2",
        combined,
        1e-8,
        format!("commutator {worst_comm:.2e}, invariance {worst_inv:.2e}"),
    )
}

/// Criterion 7: Cayley compatibility of the two actions and both round trips.
pub fn c07_cayley_compatibility(seed: u64) -> CriterionReport {
    let mut worst_compat: f64 = 0.0;
    let mut worst_round: f64 = 0.0;
    for (n, m) in DIMS {
        let mut rng = SplitMix64::new(derive_seed(seed, "cayley-compat"));
        for _ in 0..100 {
            let g = sample::jacobi_element(n, m, &mut rng);
            let p = sample::disk_point(n, m, &mut rng);
            worst_compat = worst_compat.max(compatibility_residual(&g, &p).unwrap());

            let q = sample::jacobi_point(n, m, &mut rng);
            let back = partial_cayley(&partial_cayley_inverse(&q).unwrap()).unwrap();
            worst_round = worst_round.max(
                back.omega()
                    .sub(&q.omega())
                    .max_norm()
                    .max(back.z().sub(&q.z()).max_norm()),
            );
            let back = partial_cayley_inverse(&partial_cayley(&p).unwrap()).unwrap();
            worst_round = worst_round.max(
                back.w()
                    .sub(p.w())
                    .max_norm()
                    .max(back.eta().sub(p.eta()).max_norm()),
            );
        }
    }
    let combined = (worst_compat / 1e-9).max(worst_round / 1e-12);
    report(
        7,
        "partial Cayley transform: action compatibility 1e-9, round trips 1e-12",
        combined,
        1.0,
        format!("compat {worst_compat:.2e}, roundtrip {worst_round:.2e}"),
    )
}

/// Criterion 8: Invariance of the determinant operator, the matrix operator and
///    the trace generators.
pub fn c08_higher_operators(seed: u64) -> CriterionReport {
    let mut rng = SplitMix64::new(derive_seed(seed, "higher-operators"));
    let mut worst: f64 = 0.0;
    // determinant operator at degrees 1 and 2 (m = 1)
    for n in [1usize, 2] {
        let chart = Chart::jacobi(n, 1);
        for _ in 0..50 {
            let f = random_field(chart, &mut rng, false);
            let p = sample::jacobi_point(n, 1, &mut rng);
            let coords = chart.pack_jacobi(&p);
            let g = GroupElem::Jacobi(sample::jacobi_element(n, 1, &mut rng));
            worst = worst.max(invariance_residual(&OpKDet, &g, &f, &coords).unwrap());
        }
    }
    // matrix-valued operator at (2, 2)
    {
        let chart = Chart::jacobi(2, 2);
        for _ in 0..50 {
            let f = random_field(chart, &mut rng, false);
            let p = sample::jacobi_point(2, 2, &mut rng);
            let coords = chart.pack_jacobi(&p);
            let g = GroupElem::Jacobi(sample::jacobi_element(2, 2, &mut rng));
            worst = worst.max(invariance_residual(&OpTMatrix, &g, &f, &coords).unwrap());
        }
    }
    // trace generators on the pure upper half space at degree 2
    {
        let chart = Chart::siegel(2);
        for j in [1usize, 2] {
            let op = MaassH { j };
            for _ in 0..50 {
                let f = random_field(chart, &mut rng, false);
                let p = sample::siegel_point(2, &mut rng);
                let coords = chart.pack_siegel(&p);
                let g = GroupElem::Sp(sample::symplectic(2, &mut rng));
                worst = worst.max(invariance_residual(&op, &g, &f, &coords).unwrap());
            }
        }
    }
    report(
        8,
        "invariance of the determinant, matrix and trace operators",
        worst,
        1e-6,
        String::new(),
    )
}

/// Criterion 9: Symmetrized q_1 equals the Maass Laplacian after one-point
///    calibration.
pub fn c09_symmetrization(seed: u64) -> CriterionReport {
    let mut worst: f64 = 0.0;
    for n in [1usize, 2] {
        let op = SymmetrizedPolynomial::q1(n).unwrap();
        let chart = Chart::siegel(n);
        let mut rng = SplitMix64::new(derive_seed(seed, "symmetrization"));
        for _ in 0..30 {
            let p = sample::siegel_point(n, &mut rng);
            let f = random_field(chart, &mut rng, false);
            let got = op.apply(&f, &p).unwrap();
            let coords = chart.pack_siegel(&p);
            let (_, jets) = chart.seed_jets(&coords, 2);
            let fj = f.jet_on(&jets);
            let expect = diffops::laplacian_siegel_jet(&chart, &jets, &fj, 1.0).unwrap();
            worst = worst.max((got - expect.clone()).abs() / (1.0 + expect.abs()));
        }
    }
    report(
        9,
        "symmetrized q_1 equals the Maass Laplacian (one-point calibration)",
        worst,
        1e-5,
        String::new(),
    )
}

/// Criterion 10: Invariant polynomial families under 100 random unitaries plus the
///    independence rank witness.
pub fn c10_invariant_polynomials(seed: u64) -> CriterionReport {
    let mut rng = SplitMix64::new(derive_seed(seed, "invariant-polys"));
    let (n, m) = (2usize, 2usize);
    let t = random_tangent(n, m, &mut rng);
    let mut worst: f64 = 0.0;
    for id in all_families(n, m, &mut rng) {
        worst = worst.max(invariance_defect(&id, &t, 100, &mut rng).unwrap());
    }
    let mut ranks_ok = true;
    for nn in 1..=3 {
        if independence_rank(nn, &mut rng) != nn {
            ranks_ok = false;
        }
    }
    let mut rep = report(
        10,
        "invariant polynomial families (defect 1e-10) and independence ranks",
        worst,
        1e-10,
        format!("ranks n=1..3 {}", if ranks_ok { "ok" } else { "WRONG" }),
    );
    rep.pass = rep.pass && ranks_ok;
    rep
}

/// Criterion 11: Reduction theory: degree-1 totality/idempotence/word-search oracle
///    on 1000 points, degree-2 margins, and membership of 500 reduced
///    Siegel-Jacobi points.
pub fn c11_reduction(seed: u64) -> CriterionReport {
    let mut rng = SplitMix64::new(derive_seed(seed, "reduction"));
    let ctx1 = ReductionContext::new(1).unwrap();
    let ball = sl2z_ball(10);
    let mut detail = String::new();
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = SiegelPoint::from_tau(rng.uniform(-1.5, 1.5), rng.uniform(0.4, 2.5)).unwrap();
        let r = match siegel_reduce(&p, &ctx1) {
            Ok(r) => r,
            Err(e) => {
                pass = false;
                detail = format!("degree-1 reduction failed: {e}");
                break;
            }
        };
        if !r.membership.siegel_reduced() {
            pass = false;
            detail = "degree-1 output not reduced".into();
            break;
        }
        // transform reproduces the output
        let back = siegel_action(&r.transform, &p).unwrap().point;
        worst = worst.max(
            back.x()
                .sub(r.reduced.x())
                .max_norm()
                .max(back.y().sub(r.reduced.y()).max_norm()),
        );
        // idempotence
        let again = siegel_reduce(&r.reduced, &ctx1).unwrap();
        worst = worst.max(
            again
                .reduced
                .x()
                .sub(r.reduced.x())
                .max_norm()
                .max(again.reduced.y().sub(r.reduced.y()).max_norm()),
        );
        // the word-search oracle witnesses modular equivalence
        let mut found = false;
        for g in &ball {
            let img = siegel_action(g, &p).unwrap().point;
            if img.x().sub(r.reduced.x()).max_norm() + img.y().sub(r.reduced.y()).max_norm() < 1e-9
            {
                found = true;
                break;
            }
        }
        if !found {
            pass = false;
            detail = "degree-1 oracle found no witnessing word".into();
            break;
        }
    }
    // degree 2 margins
    let ctx2 = ReductionContext::new(2).unwrap();
    if pass {
        for _ in 0..50 {
            let p = sample::siegel_point(2, &mut rng);
            let r = siegel_reduce(&p, &ctx2).unwrap();
            let mem = &r.membership;
            if !(mem.s1.unwrap().holds && mem.s2.unwrap().holds && mem.s3.unwrap().holds) {
                pass = false;
                detail = "degree-2 output violates a reduction condition".into();
                break;
            }
        }
    }
    // membership of reduced Siegel-Jacobi points
    if pass {
        let mut checked = 0;
        'outer: for (n, count) in [(1usize, 300usize), (2, 200)] {
            let ctx = if n == 1 { &ctx1 } else { &ctx2 };
            for _ in 0..count {
                let p = sample::jacobi_point(n, 1, &mut rng);
                let r = jacobi_reduce(&p, ctx).unwrap();
                if !r.membership.jacobi_member() {
                    pass = false;
                    detail = format!("reduced point {checked} escaped the domain");
                    break 'outer;
                }
                checked += 1;
            }
        }
    }
    let mut rep = report(
        11,
        "reduction: degree-1 suite with word oracle, degree-2 margins, domain membership",
        worst,
        1e-10,
        detail,
    );
    rep.pass = rep.pass && pass;
    rep
}

/// Criterion 12: Torus spectral basis: Gram identity for the nine-index set and
///    lattice periodicity of the characters.
pub fn c12_torus_basis(seed: u64) -> CriterionReport {
    let mut indices = Vec::new();
    for a in -1..=1i64 {
        for b in -1..=1i64 {
            indices.push((a, b));
        }
    }
    let mut worst_gram: f64 = 0.0;
    for (x, y) in [(0.0, 1.0), (0.3, 1.2)] {
        let base = SiegelPoint::from_tau(x, y).unwrap();
        let gram = torus_gram(&base, &indices, 64).unwrap();
        worst_gram = worst_gram.max(gram.sub(&Mat::cidentity(indices.len())).max_norm());
    }
    // periodicity under 20 seeded integral shifts
    let mut rng = SplitMix64::new(derive_seed(seed, "torus-periodicity"));
    let mut worst_per: f64 = 0.0;
    for _ in 0..20 {
        let p = sample::jacobi_point(1, 1, &mut rng);
        let a = Mat::from_rows(&[&[rng.int_in(-2, 2) as f64]]);
        let b = Mat::from_rows(&[&[rng.int_in(-2, 2) as f64]]);
        let e = torus_character(&p, &a, &b).unwrap();
        let shift = rng.int_in(-3, 3) as f64;
        let q = JacobiPoint::new(
            p.base().clone(),
            p.u().add(&Mat::from_rows(&[&[shift]])),
            p.v().clone(),
        )
        .unwrap();
        worst_per = worst_per.max((torus_character(&q, &a, &b).unwrap() - e.clone()).abs());
        let q = JacobiPoint::new(
            p.base().clone(),
            p.u().add(&p.base().x().scale(shift)),
            p.v().add(&p.base().y().scale(shift)),
        )
        .unwrap();
        worst_per = worst_per.max((torus_character(&q, &a, &b).unwrap() - e).abs());
    }
    let combined = (worst_gram / 1e-6).max(worst_per / 1e-12);
    report(
        12,
        "torus basis: Gram identity 1e-6, lattice periodicity 1e-12",
        combined,
        1.0,
        format!("gram {worst_gram:.2e}, periodicity {worst_per:.2e}"),
    )
}

/// Criterion 13: The coefficient ODE is solved by the stated Bessel profile.
pub fn c13_fourier_ode(seed: u64) -> CriterionReport {
    let mut rng = SplitMix64::new(derive_seed(seed, "fourier-ode"));
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let s = C64::c(rng.uniform(0.6, 2.4), 0.0);
        let y = rng.uniform(0.4, 2.0);
        let v = rng.uniform(-1.0, 1.0);
        let n_idx = if rng.next_f64() < 0.5 { 1 } else { 2 };
        let r = fourier_ode_residual(OdeCandidate::BesselHalf, s, n_idx, 0, y, v).unwrap();
        worst = worst.max(r);
    }
    report(
        13,
        "Fourier coefficient ODE solved by the Bessel profile",
        worst,
        1e-5,
        String::new(),
    )
}

/// Criterion 14: Term-level cocycle property of the Eisenstein summands.
pub fn c14_eisenstein_cocycle(seed: u64) -> CriterionReport {
    let mut rng = SplitMix64::new(derive_seed(seed, "eisenstein"));
    let s = C64::c(1.2, -0.3);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 50 {
        let c = rng.int_in(-4, 4);
        let d = rng.int_in(-4, 4);
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
            continue;
        }
        let coset = EisensteinCoset::complete(c, d, rng.int_in(-2, 2)).unwrap();
        let gamma = coset.group_element().unwrap();
        let g0 = sample::jacobi_element(1, 1, &mut rng);
        let p = sample::jacobi_point(1, 1, &mut rng);
        let lhs = eisenstein_term_elem(&gamma, s.clone(), &jacobi_action(&g0, &p).unwrap().point)
            .unwrap();
        let rhs =
            eisenstein_term_elem(&jacobi_multiply(&gamma, &g0).unwrap(), s.clone(), &p).unwrap();
        worst = worst.max((lhs - rhs).abs());
        done += 1;
    }
    report(
        14,
        "Eisenstein summand cocycle property",
        worst,
        1e-10,
        String::new(),
    )
}

pub fn run_criterion(id: usize, seed: u64) -> CriterionReport {
    match id {
        1 => c01_volume(seed),
        2 => c02_metric_invariance(seed),
        3 => c03_disk_metric_invariance(seed),
        4 => c04_laplacian_cross_oracle(seed),
        5 => c05_eigen_catalog(seed),
        6 => c06_generators(seed),
        7 => c07_cayley_compatibility(seed),
        8 => c08_higher_operators(seed),
        9 => c09_symmetrization(seed),
        10 => c10_invariant_polynomials(seed),
        11 => c11_reduction(seed),
        12 => c12_torus_basis(seed),
        13 => c13_fourier_ode(seed),
        14 => c14_eisenstein_cocycle(seed),
        _ => panic!("criterion id out of range"),
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    (1..=CRITERIA).map(|id| run_criterion(id, seed)).collect()
}
