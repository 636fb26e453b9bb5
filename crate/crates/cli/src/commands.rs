//! Subcommand implementations: JSON in, JSON out, deterministic under a
//! fixed seed and tolerance record.

use std::fs;
use std::io::Read;

use serde_json::{json, Value};

use sjspace_core::action::{
    disk_action, jacobi_action, jacobi_multiply, siegel_action, star_conjugate,
};
use sjspace_core::cayley::{partial_cayley, partial_cayley_inverse};
use sjspace_core::chart::Chart;
use sjspace_core::diffops::{
    self, invariance_residual, GroupElem, InvariantOp, LaplacianDisk, LaplacianJacobi,
    LaplacianSiegel, MaassH, OpD, OpD1, OpD2, OpKDet, OpPsi, OpTMatrix, OpValue,
};
use sjspace_core::domain::sample;
use sjspace_core::fields::{random_field, ScalarField};
use sjspace_core::invariants::{eval_invariant, invariance_defect, InvariantFamilyId, TangentPair};
use sjspace_core::matrix::Mat;
use sjspace_core::metric::{
    disk_metric_tensor, jacobi_action_jacobian, jacobi_metric_tensor, pullback,
    siegel_metric_tensor, volume_density, MetricScales,
};
use sjspace_core::num::C64;
use sjspace_core::reduction::{
    self, jacobi_domain_membership, jacobi_reduce, siegel_reduce, siegel_volume, GenStep,
    ReductionContext, F1_STRATA,
};
use sjspace_core::rng::SplitMix64;
use sjspace_core::special::{
    catalog_entry, catalog_variants, eigen_residual, eisenstein_cosets, eisenstein_term,
    fourier_ode_residual, torus_gram, OdeCandidate,
};
use sjspace_core::{Error as CoreError, Tolerances};

use crate::json::*;

/// Exit codes promised by the interface.
pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_UNKNOWN_SUBCOMMAND: i32 = 64;
pub const EXIT_MALFORMED_JSON: i32 = 65;

#[derive(Debug)]
pub enum CliError {
    /// Domain validation failed: exit 2 with a machine-readable body.
    Validation(CoreError),
    MalformedJson(String),
    Io(String),
    Usage(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Validation(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::MalformedJson(_) => EXIT_MALFORMED_JSON,
            CliError::Io(_) => EXIT_VALIDATION,
            CliError::Usage(_) => EXIT_UNKNOWN_SUBCOMMAND,
        }
    }

    pub fn body(&self) -> Value {
        match self {
            CliError::Validation(e) => {
                let defect = match e {
                    CoreError::NotSymmetric { defect }
                    | CoreError::NotHermitian { defect }
                    | CoreError::NotSymplectic { defect }
                    | CoreError::NotUnitary { defect } => Some(*defect),
                    CoreError::NotPositiveDefinite { pivot, .. } => Some(*pivot),
                    CoreError::SingularMatrix { magnitude, .. } => Some(*magnitude),
                    CoreError::ConjugationMismatch { residual } => Some(*residual),
                    CoreError::FormNotReal { imag } => Some(*imag),
                    CoreError::GridTooCoarse { offdiag } => Some(*offdiag),
                    CoreError::IllConditioned { cond } => Some(*cond),
                    _ => None,
                };
                json!({"error": {"code": error_code(e), "message": e.to_string(), "defect": defect}})
            }
            CliError::MalformedJson(m) => {
                json!({"error": {"code": "malformed_json", "message": m, "defect": null}})
            }
            CliError::Io(m) => json!({"error": {"code": "io", "message": m, "defect": null}}),
            CliError::Usage(m) => json!({"error": {"code": "usage", "message": m, "defect": null}}),
        }
    }
}

fn error_code(e: &CoreError) -> &'static str {
    match e {
        CoreError::SingularMatrix { .. } => "singular_matrix",
        CoreError::NotPositiveDefinite { .. } => "not_positive_definite",
        CoreError::NotHermitian { .. } => "not_hermitian",
        CoreError::NotSymmetric { .. } => "not_symmetric",
        CoreError::NotSymplectic { .. } => "not_symplectic",
        CoreError::NotUnitary { .. } => "not_unitary",
        CoreError::NonFinite => "non_finite",
        CoreError::DimensionMismatch { .. } => "dimension_mismatch",
        CoreError::IllConditioned { .. } => "ill_conditioned",
        CoreError::SingularFactor => "singular_factor",
        CoreError::ConjugationMismatch { .. } => "conjugation_mismatch",
        CoreError::FormNotReal { .. } => "form_not_real",
        CoreError::JetOrderTooLow { .. } => "jet_order_too_low",
        CoreError::UnsupportedDimension { .. } => "unsupported_dimension",
        CoreError::UnsupportedOrder(_) => "unsupported_order",
        CoreError::UnsupportedDegree(_) => "unsupported_degree",
        CoreError::IndexOutOfRange => "index_out_of_range",
        CoreError::IterationLimit(_) => "iteration_limit",
        CoreError::QuadratureNotConverged { .. } => "quadrature_not_converged",
        CoreError::NotCoprime(..) => "not_coprime",
        CoreError::GridTooCoarse { .. } => "grid_too_coarse",
    }
}

/// Shared run configuration threaded through every subcommand.
pub struct RunConfig {
    pub seed: u64,
    pub tol: Tolerances,
    pub workers: usize,
    pub json_indent: usize,
}

impl RunConfig {
    pub fn render(&self, v: &Value) -> String {
        if self.json_indent == 0 {
            serde_json::to_string(v).expect("serializable")
        } else {
            let indent = vec![b' '; self.json_indent];
            let mut out = Vec::new();
            let fmt = serde_json::ser::PrettyFormatter::with_indent(&indent);
            let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
            serde::Serialize::serialize(v, &mut ser).expect("serializable");
            String::from_utf8(out).expect("utf8 json")
        }
    }
}

pub fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(e.to_string()))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(e.to_string()))
    }
}

pub fn parse_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::MalformedJson(e.to_string()))
}

fn membership_json(m: &reduction::DomainMembership) -> Value {
    let cond = |c: &reduction::ConditionCheck| json!({"holds": c.holds, "margin": c.margin});
    json!({
        "m1": cond(&m.m1),
        "m2": cond(&m.m2),
        "s1": m.s1.as_ref().map(cond),
        "s2": m.s2.as_ref().map(cond),
        "s3": m.s3.as_ref().map(cond),
        "z_in_p": m.z_in_p.as_ref().map(cond),
    })
}

fn word_json(word: &[GenStep]) -> Value {
    Value::Array(
        word.iter()
            .map(|w| match w {
                GenStep::Translate(b) => json!({"gen": "translate", "B": mat_to_rows(b)}),
                GenStep::Invert => json!({"gen": "invert"}),
                GenStep::GlConj(h) => json!({"gen": "gl", "h": mat_to_rows(h)}),
                GenStep::HeisenbergShift { lambda, mu } => {
                    json!({"gen": "heisenberg", "lambda": mat_to_rows(lambda), "mu": mat_to_rows(mu)})
                }
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------
// act / multiply / cayley
// ---------------------------------------------------------------------

pub fn cmd_act(space: &str, input: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    let v: Value = parse_json(input)?;
    match space {
        "hn" => {
            let elem: SymplecticJson = parse_json(&v["element"].to_string())?;
            let point: SiegelPointJson = parse_json(&v["point"].to_string())?;
            let r = siegel_action(&elem.to_elem(&cfg.tol)?, &point.to_point(&cfg.tol)?)?;
            Ok(json!({"point": SiegelPointJson::from_point(&r.point),
                      "factor": CMatrixJson::from_mat(&r.factor)}))
        }
        "hnm" => {
            let elem: JacobiElementJson = parse_json(&v["element"].to_string())?;
            let point: JacobiPointJson = parse_json(&v["point"].to_string())?;
            let r = jacobi_action(&elem.to_elem(&cfg.tol)?, &point.to_point(&cfg.tol)?)?;
            Ok(json!({"point": JacobiPointJson::from_point(&r.point),
                      "factor": CMatrixJson::from_mat(&r.factor)}))
        }
        "disk" => {
            let point: DiskPointJson = parse_json(&v["point"].to_string())?;
            let p = point.to_point(&cfg.tol)?;
            // accept either a disk element or a Jacobi element (conjugated)
            let g = if v["element"].get("P").is_some() {
                let elem: DiskElementJson = parse_json(&v["element"].to_string())?;
                elem.to_elem(&cfg.tol)?
            } else {
                let elem: JacobiElementJson = parse_json(&v["element"].to_string())?;
                star_conjugate(&elem.to_elem(&cfg.tol)?)?
            };
            let r = disk_action(&g, &p)?;
            Ok(json!({"point": DiskPointJson::from_point(&r.point),
                      "factor": CMatrixJson::from_mat(&r.factor)}))
        }
        other => Err(CliError::Usage(format!("unknown space '{other}'"))),
    }
}

pub fn cmd_multiply(input: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    let v: Value = parse_json(input)?;
    let g0: JacobiElementJson = parse_json(&v["g0"].to_string())?;
    let g1: JacobiElementJson = parse_json(&v["g1"].to_string())?;
    let prod = jacobi_multiply(&g0.to_elem(&cfg.tol)?, &g1.to_elem(&cfg.tol)?)?;
    Ok(json!({"product": JacobiElementJson::from_elem(&prod)}))
}

pub fn cmd_cayley(to_space: bool, input: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    if to_space {
        let p: DiskPointJson = parse_json(input)?;
        let q = partial_cayley(&p.to_point(&cfg.tol)?)?;
        Ok(json!({"point": JacobiPointJson::from_point(&q)}))
    } else {
        let p: JacobiPointJson = parse_json(input)?;
        let q = partial_cayley_inverse(&p.to_point(&cfg.tol)?)?;
        Ok(json!({"point": DiskPointJson::from_point(&q)}))
    }
}

// ---------------------------------------------------------------------
// metric / volume-density
// ---------------------------------------------------------------------

pub fn cmd_metric(
    space: &str,
    a_scale: f64,
    b_scale: f64,
    input: &str,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    let tensor = match space {
        "hn" => {
            let p: SiegelPointJson = parse_json(input)?;
            siegel_metric_tensor(&p.to_point(&cfg.tol)?, a_scale)?
        }
        "hnm" => {
            let p: JacobiPointJson = parse_json(input)?;
            jacobi_metric_tensor(&p.to_point(&cfg.tol)?, &MetricScales::new(a_scale, b_scale))?
        }
        "disk" => {
            let p: DiskPointJson = parse_json(input)?;
            disk_metric_tensor(&p.to_point(&cfg.tol)?, &MetricScales::new(a_scale, b_scale))?
        }
        other => return Err(CliError::Usage(format!("unknown space '{other}'"))),
    };
    Ok(json!({
        "chart": {"space": space, "n": tensor.chart().n, "m": tensor.chart().m,
                   "dim": tensor.chart().dim()},
        "G": mat_to_rows(tensor.g()),
    }))
}

pub fn cmd_volume_density(input: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    let p: JacobiPointJson = parse_json(input)?;
    Ok(json!({"value": volume_density(&p.to_point(&cfg.tol)?)}))
}

// ---------------------------------------------------------------------
// laplacian / operator / invariance-test
// ---------------------------------------------------------------------

fn field_for(chart: Chart, name: &str, s: C64, seed: u64) -> Result<ScalarField, CliError> {
    if let Some(k) = name.strip_prefix("random:") {
        let k: u64 = k
            .parse()
            .map_err(|_| CliError::Usage("random:<index> wants an integer".into()))?;
        let mut rng = SplitMix64::new(seed.wrapping_add(k));
        return Ok(random_field(chart, &mut rng, false));
    }
    // named fields use the y coordinate (a logarithm) and the u/v block;
    // both exist only on the upper-half-space charts
    if matches!(chart.space, sjspace_core::chart::Space::Disk) {
        return Err(CliError::Usage(
            "disk charts support only random:<k> fields".into(),
        ));
    }
    if (name.contains('u') || name.contains('v')) && chart.m == 0 {
        return Err(CliError::Usage(format!(
            "field '{name}' needs the u/v block; use it with --space hnm"
        )));
    }
    let named: &[(&str, Vec<(usize, u8)>)] = &[
        ("x", vec![(0, 1)]),
        ("y", vec![(1, 1)]),
        ("u", vec![(2, 1)]),
        ("v", vec![(3, 1)]),
        ("xv", vec![(0, 1), (3, 1)]),
        ("uv", vec![(2, 1), (3, 1)]),
    ];
    match name {
        "ys" => Ok(ScalarField::y_pow_s(chart, s)),
        "ysx" => Ok(ScalarField::y_pow_s_times(chart, s, vec![(0, 1)])),
        "ysu" => Ok(ScalarField::y_pow_s_times(chart, s, vec![(2, 1)])),
        "ysv" => Ok(ScalarField::y_pow_s_times(chart, s, vec![(3, 1)])),
        "ysuv" => Ok(ScalarField::y_pow_s_times(chart, s, vec![(2, 1), (3, 1)])),
        "ysxv" => Ok(ScalarField::y_pow_s_times(chart, s, vec![(0, 1), (3, 1)])),
        other => named
            .iter()
            .find(|(name, _)| *name == other)
            .map(|(_, exps)| ScalarField::monomial(chart, exps.clone()))
            .ok_or_else(|| CliError::Usage(format!("unknown field '{other}'"))),
    }
}

pub fn cmd_laplacian(
    space: &str,
    field_spec: &str,
    s: C64,
    a_scale: f64,
    b_scale: f64,
    input: &str,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    let scales = MetricScales::new(a_scale, b_scale);
    let (chart, coords) = match space {
        "hn" => {
            let p: SiegelPointJson = parse_json(input)?;
            let p = p.to_point(&cfg.tol)?;
            let chart = Chart::siegel(p.n());
            let coords = chart.pack_siegel(&p);
            (chart, coords)
        }
        "hnm" => {
            let p: JacobiPointJson = parse_json(input)?;
            let p = p.to_point(&cfg.tol)?;
            let chart = Chart::jacobi(p.n(), p.m());
            (chart, chart.pack_jacobi(&p))
        }
        "disk" => {
            let p: DiskPointJson = parse_json(input)?;
            let p = p.to_point(&cfg.tol)?;
            let chart = Chart::disk(p.n(), p.m());
            (chart, chart.pack_disk(&p))
        }
        other => return Err(CliError::Usage(format!("unknown space '{other}'"))),
    };
    let f = field_for(chart, field_spec, s, cfg.seed)?;
    let (_, jets) = chart.seed_jets(&coords, 2);
    let fj = f.jet_on(&jets);
    let value = match space {
        "hn" => diffops::laplacian_siegel_jet(&chart, &jets, &fj, a_scale)?,
        "hnm" => diffops::laplacian_jacobi_jet(&chart, &jets, &fj, &scales)?,
        _ => diffops::laplacian_disk_jet(&chart, &jets, &fj, &scales)?,
    };
    Ok(json!({"value": complex_json(&value), "field_value": complex_json(&fj.value_c())}))
}

fn operator_by_name(name: &str) -> Result<(Box<dyn InvariantOp>, bool), CliError> {
    // bool: operates on the pure upper half space
    match name {
        "D" => Ok((Box::new(OpD), false)),
        "Psi" => Ok((Box::new(OpPsi), false)),
        "D1" => Ok((Box::new(OpD1), false)),
        "D2" => Ok((Box::new(OpD2), false)),
        "K" => Ok((Box::new(OpKDet), false)),
        "T" => Ok((Box::new(OpTMatrix), false)),
        "H1" => Ok((Box::new(MaassH { j: 1 }), true)),
        "H2" => Ok((Box::new(MaassH { j: 2 }), true)),
        other => Err(CliError::Usage(format!("unknown operator '{other}'"))),
    }
}

pub fn cmd_operator(
    name: &str,
    field_spec: &str,
    s: C64,
    input: &str,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    let (op, on_siegel) = operator_by_name(name)?;
    let (chart, coords) = if on_siegel {
        let p: SiegelPointJson = parse_json(input)?;
        let p = p.to_point(&cfg.tol)?;
        let chart = Chart::siegel(p.n());
        let coords = chart.pack_siegel(&p);
        (chart, coords)
    } else {
        let p: JacobiPointJson = parse_json(input)?;
        let p = p.to_point(&cfg.tol)?;
        let chart = Chart::jacobi(p.n(), p.m());
        let coords = chart.pack_jacobi(&p);
        (chart, coords)
    };
    let f = field_for(chart, field_spec, s, cfg.seed)?;
    let (_, jets) = chart.seed_jets(&coords, op.required_order());
    let fj = f.jet_on(&jets);
    match op.apply(&chart, &jets, &fj)? {
        OpValue::Scalar(v) => Ok(json!({"value": complex_json(&v)})),
        OpValue::Matrix(m) => Ok(json!({"matrix": CMatrixJson::from_mat(&m)})),
    }
}

pub fn cmd_invariance_test(
    what: &str,
    name: Option<&str>,
    n: usize,
    m: usize,
    trials: usize,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    let mut rng = SplitMix64::new(cfg.seed);
    let mut worst: f64 = 0.0;
    match what {
        "metric" => {
            let scales = MetricScales::unit();
            for _ in 0..trials {
                let g = sample::jacobi_element(n, m, &mut rng);
                let p = sample::jacobi_point(n, m, &mut rng);
                let image = jacobi_action(&g, &p)?.point;
                let jac = jacobi_action_jacobian(&g, &p)?;
                let pulled = pullback(&jac, jacobi_metric_tensor(&image, &scales)?.g());
                worst = worst.max(
                    pulled
                        .sub(jacobi_metric_tensor(&p, &scales)?.g())
                        .max_norm(),
                );
            }
        }
        "volume" => {
            for _ in 0..trials {
                let g = sample::jacobi_element(n, m, &mut rng);
                let p = sample::jacobi_point(n, m, &mut rng);
                let image = jacobi_action(&g, &p)?.point;
                let jac = jacobi_action_jacobian(&g, &p)?;
                let det = jac.det(cfg.tol.pivot_tol)?.abs();
                let lhs = volume_density(&image) * det;
                let rhs = volume_density(&p);
                worst = worst.max((lhs - rhs).abs() / rhs.abs());
            }
        }
        "operator" => {
            let opname = name.ok_or_else(|| {
                CliError::Usage("--name is required for operator invariance".into())
            })?;
            let (op, on_siegel) = match opname {
                "laplacian" => (
                    Box::new(LaplacianJacobi {
                        scales: MetricScales::unit(),
                    }) as Box<dyn InvariantOp>,
                    false,
                ),
                "laplacian-hn" => (Box::new(LaplacianSiegel { a_scale: 1.0 }) as _, true),
                "laplacian-disk" => (
                    Box::new(LaplacianDisk {
                        scales: MetricScales::unit(),
                    }) as _,
                    false,
                ),
                other => operator_by_name(other)?,
            };
            for _ in 0..trials {
                if on_siegel {
                    let chart = Chart::siegel(n);
                    let f = random_field(chart, &mut rng, false);
                    let p = sample::siegel_point(n, &mut rng);
                    let coords = chart.pack_siegel(&p);
                    let g = GroupElem::Sp(sample::symplectic(n, &mut rng));
                    worst = worst.max(invariance_residual(op.as_ref(), &g, &f, &coords)?);
                } else if opname == "laplacian-disk" {
                    let chart = Chart::disk(n, m);
                    let f = random_field(chart, &mut rng, false);
                    let p = sample::disk_point(n, m, &mut rng);
                    let coords = chart.pack_disk(&p);
                    let g =
                        GroupElem::Disk(star_conjugate(&sample::jacobi_element(n, m, &mut rng))?);
                    worst = worst.max(invariance_residual(op.as_ref(), &g, &f, &coords)?);
                } else {
                    let chart = Chart::jacobi(n, m);
                    let f = random_field(chart, &mut rng, false);
                    let p = sample::jacobi_point(n, m, &mut rng);
                    let coords = chart.pack_jacobi(&p);
                    let g = GroupElem::Jacobi(sample::jacobi_element(n, m, &mut rng));
                    worst = worst.max(invariance_residual(op.as_ref(), &g, &f, &coords)?);
                }
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown invariance target '{other}'"
            )))
        }
    }
    Ok(json!({"what": what, "n": n, "m": m, "trials": trials, "max_defect": worst}))
}

// ---------------------------------------------------------------------
// invariant-poly
// ---------------------------------------------------------------------

fn parse_indices(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad index '{t}'")))
        })
        .collect()
}

pub fn cmd_invariant_poly(
    family: &str,
    indices: &str,
    input: &str,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    let v: Value = parse_json(input)?;
    let omega: CMatrixJson = parse_json(&v["omega"].to_string())?;
    let z: CMatrixJson = parse_json(&v["z"].to_string())?;
    let t = TangentPair::new(omega.to_mat()?, z.to_mat()?)?;
    let s = if v.get("S").is_some() {
        let s: CMatrixJson = parse_json(&v["S"].to_string())?;
        s.to_mat()?
    } else {
        Mat::cidentity(t.m())
    };
    let ix = parse_indices(indices)?;
    let need = |k: usize| -> Result<usize, CliError> {
        ix.get(k)
            .copied()
            .ok_or_else(|| CliError::Usage("not enough indices".into()))
    };
    let id = match family {
        "p" => InvariantFamilyId::P { j: need(0)? },
        "psi1" => InvariantFamilyId::Psi1 { k: need(0)? },
        "psi2" => InvariantFamilyId::Psi2 {
            k: need(0)?,
            p: need(1)?,
        },
        "psi3" => InvariantFamilyId::Psi3 {
            k: need(0)?,
            p: need(1)?,
        },
        "f1" => InvariantFamilyId::F1 {
            k: need(0)?,
            p: need(1)?,
        },
        "f2" => InvariantFamilyId::F2 {
            k: need(0)?,
            p: need(1)?,
        },
        "m1" => InvariantFamilyId::M1 { j: need(0)?, s },
        "m2" => InvariantFamilyId::M2 { j: need(0)?, s },
        "q1" => InvariantFamilyId::Q1 { k: need(0)?, s },
        "q2" => InvariantFamilyId::Q2 { k: need(0)?, s },
        "theta1" => InvariantFamilyId::Theta1 {
            i: need(0)?,
            k: need(1)?,
            j: need(2)?,
            s,
        },
        "theta2" => InvariantFamilyId::Theta2 {
            i: need(0)?,
            k: need(1)?,
            j: need(2)?,
            s,
        },
        "r1" => InvariantFamilyId::R1 {
            j: need(0)?,
            k: need(1)?,
        },
        "r2" => InvariantFamilyId::R2 {
            j: need(0)?,
            k: need(1)?,
        },
        other => return Err(CliError::Usage(format!("unknown family '{other}'"))),
    };
    let value = eval_invariant(&id, &t)?;
    let mut rng = SplitMix64::new(cfg.seed);
    let defect = invariance_defect(&id, &t, 50, &mut rng)?;
    Ok(json!({"value": value, "invariance_defect": defect}))
}

// ---------------------------------------------------------------------
// reduce / membership / volume
// ---------------------------------------------------------------------

pub fn cmd_reduce(space: &str, input: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    match space {
        "hn" => {
            let p: SiegelPointJson = parse_json(input)?;
            let p = p.to_point(&cfg.tol)?;
            let ctx = ReductionContext::with_tol(p.n(), cfg.tol)?;
            let r = siegel_reduce(&p, &ctx)?;
            Ok(json!({
                "reduced": SiegelPointJson::from_point(&r.reduced),
                "transform": SymplecticJson::from_elem(&r.transform),
                "word": word_json(&r.word),
                "membership": membership_json(&r.membership),
            }))
        }
        "hnm" => {
            let p: JacobiPointJson = parse_json(input)?;
            let p = p.to_point(&cfg.tol)?;
            let ctx = ReductionContext::with_tol(p.n(), cfg.tol)?;
            let r = jacobi_reduce(&p, &ctx)?;
            Ok(json!({
                "reduced": JacobiPointJson::from_point(&r.reduced),
                "transform": JacobiElementJson::from_elem(&r.transform),
                "word": word_json(&r.word),
                "membership": membership_json(&r.membership),
            }))
        }
        other => Err(CliError::Usage(format!("unknown space '{other}'"))),
    }
}

pub fn cmd_membership(space: &str, input: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    match space {
        "hn" => {
            let p: SiegelPointJson = parse_json(input)?;
            let p = p.to_point(&cfg.tol)?;
            let ctx = ReductionContext::with_tol(p.n(), cfg.tol)?;
            let mem = reduction::is_siegel_reduced(&p, &ctx)?;
            Ok(membership_json(&mem))
        }
        "hnm" => {
            let p: JacobiPointJson = parse_json(input)?;
            let p = p.to_point(&cfg.tol)?;
            let ctx = ReductionContext::with_tol(p.n(), cfg.tol)?;
            let mem = jacobi_domain_membership(&p, &ctx)?;
            Ok(membership_json(&mem))
        }
        other => Err(CliError::Usage(format!("unknown space '{other}'"))),
    }
}

pub fn cmd_volume(
    n: usize,
    estimate: bool,
    samples: usize,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    if !estimate {
        return Ok(json!({"value": siegel_volume(n)?}));
    }
    if n != 1 {
        return Err(CliError::Usage(
            "the estimator supports degree 1 only".into(),
        ));
    }
    // shard strata across workers; the sum is taken in stratum order so
    // the result is independent of the worker count
    let workers = cfg.workers.max(1);
    let chunk = F1_STRATA.div_ceil(workers);
    let mut handles = Vec::new();
    for w in 0..workers {
        let lo = w * chunk;
        let hi = ((w + 1) * chunk).min(F1_STRATA);
        if lo >= hi {
            break;
        }
        let seed = cfg.seed;
        handles.push(std::thread::spawn(move || {
            reduction::volume_estimate_f1_strata(samples, seed, lo..hi)
        }));
    }
    let mut strata = Vec::with_capacity(F1_STRATA);
    for h in handles {
        strata.extend(h.join().expect("estimator worker panicked"));
    }
    let value: f64 = strata.iter().sum();
    Ok(json!({"value": value, "samples": samples, "seed": cfg.seed}))
}

// ---------------------------------------------------------------------
// bessel / eigen-check / eisenstein / torus-gram
// ---------------------------------------------------------------------

pub fn cmd_bessel(s: C64, z: f64) -> Result<Value, CliError> {
    let v = sjspace_core::bessel::bessel_k(s, z)?;
    Ok(json!({"value": complex_json(&v)}))
}

pub fn cmd_eigen_check(
    entry: usize,
    variant: Option<usize>,
    s: C64,
    a_param: f64,
    points: usize,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    let mut rng = SplitMix64::new(cfg.seed);
    let variants: Vec<usize> = match variant {
        Some(v) => vec![v],
        None => (0..catalog_variants(entry)).collect(),
    };
    let mut worst: f64 = 0.0;
    for v in &variants {
        let e = catalog_entry(entry, *v, s.clone(), a_param)?;
        for _ in 0..points {
            let p = sample::jacobi_point(1, 1, &mut rng);
            worst = worst.max(eigen_residual(&e, &p)?);
        }
    }
    let threshold = if entry == 1 { 1e-5 } else { 1e-7 };
    Ok(json!({
        "entry": entry,
        "variants": variants,
        "points": points,
        "max_residual": worst,
        "threshold": threshold,
        "pass": worst < threshold,
    }))
}

pub fn cmd_ode_check(s: C64, n_idx: i64, r_idx: i64, y: f64, v: f64) -> Result<Value, CliError> {
    let cand = if n_idx == 0 {
        OdeCandidate::PowerS
    } else {
        OdeCandidate::BesselHalf
    };
    let r = fourier_ode_residual(cand, s, n_idx, r_idx, y, v)?;
    Ok(json!({"residual": r}))
}

pub fn cmd_eisenstein(bound: i64, s: C64, input: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    let p: JacobiPointJson = parse_json(input)?;
    let p = p.to_point(&cfg.tol)?;
    let cosets = eisenstein_cosets(bound);
    let mut acc = C64::ZERO;
    for c in &cosets {
        acc = acc + eisenstein_term(c, s.clone(), &p)?;
    }
    Ok(json!({"value": complex_json(&acc), "terms": cosets.len()}))
}

pub fn cmd_torus_gram(grid: usize, input: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    let p: SiegelPointJson = parse_json(input)?;
    let p = p.to_point(&cfg.tol)?;
    let mut indices = Vec::new();
    for a in -1..=1i64 {
        for b in -1..=1i64 {
            indices.push((a, b));
        }
    }
    let gram = torus_gram(&p, &indices, grid)?;
    let defect = gram.sub(&Mat::cidentity(indices.len())).max_norm();
    Ok(json!({"indices": indices.len(), "grid": grid, "gram_defect": defect}))
}
