//! JSON encodings of the domain types.
//!
//! A complex matrix is `{"re": [[...]], "im": [[...]]}`; a point of the
//! upper half space is `{"X": [[...]], "Y": [[...]]}`; a Siegel-Jacobi
//! point adds `"U"`/`"V"`; group elements carry their blocks by name.
//! All numbers are IEEE doubles; serialization uses the shortest decimal
//! that round-trips exactly.

use serde::{Deserialize, Serialize};
use sjspace_core::domain::{
    DiskGroupElement, DiskPoint, HeisenbergElement, JacobiGroupElement, JacobiPoint, SiegelPoint,
    SymplecticMatrix,
};
use sjspace_core::matrix::Mat;
use sjspace_core::num::{Cx, C64};
use sjspace_core::{Error, Tolerances};

pub type Rows = Vec<Vec<f64>>;

pub fn mat_to_rows(m: &Mat<f64>) -> Rows {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| *m.at(i, j)).collect())
        .collect()
}

pub fn rows_to_mat(rows: &Rows) -> Result<Mat<f64>, Error> {
    let r = rows.len();
    if r == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: 0,
            context: "empty matrix",
        });
    }
    let c = rows[0].len();
    for row in rows {
        if row.len() != c {
            return Err(Error::DimensionMismatch {
                expected: c,
                got: row.len(),
                context: "ragged matrix rows",
            });
        }
    }
    Ok(Mat::from_fn(r, c, |i, j| rows[i][j]))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CMatrixJson {
    pub re: Rows,
    pub im: Rows,
}

impl CMatrixJson {
    pub fn from_mat(m: &Mat<C64>) -> Self {
        CMatrixJson {
            re: mat_to_rows(&m.re()),
            im: mat_to_rows(&m.im()),
        }
    }
    pub fn to_mat(&self) -> Result<Mat<C64>, Error> {
        let re = rows_to_mat(&self.re)?;
        let im = rows_to_mat(&self.im)?;
        if re.rows() != im.rows() || re.cols() != im.cols() {
            return Err(Error::DimensionMismatch {
                expected: re.rows() * re.cols(),
                got: im.rows() * im.cols(),
                context: "re vs im shape",
            });
        }
        Ok(Mat::from_re_im(&re, &im))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SiegelPointJson {
    #[serde(rename = "X")]
    pub x: Rows,
    #[serde(rename = "Y")]
    pub y: Rows,
}

impl SiegelPointJson {
    pub fn from_point(p: &SiegelPoint) -> Self {
        SiegelPointJson {
            x: mat_to_rows(p.x()),
            y: mat_to_rows(p.y()),
        }
    }
    pub fn to_point(&self, tol: &Tolerances) -> Result<SiegelPoint, Error> {
        SiegelPoint::with_tol(rows_to_mat(&self.x)?, rows_to_mat(&self.y)?, tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JacobiPointJson {
    #[serde(rename = "X")]
    pub x: Rows,
    #[serde(rename = "Y")]
    pub y: Rows,
    #[serde(rename = "U")]
    pub u: Rows,
    #[serde(rename = "V")]
    pub v: Rows,
}

impl JacobiPointJson {
    pub fn from_point(p: &JacobiPoint) -> Self {
        JacobiPointJson {
            x: mat_to_rows(p.base().x()),
            y: mat_to_rows(p.base().y()),
            u: mat_to_rows(p.u()),
            v: mat_to_rows(p.v()),
        }
    }
    pub fn to_point(&self, tol: &Tolerances) -> Result<JacobiPoint, Error> {
        let base = SiegelPoint::with_tol(rows_to_mat(&self.x)?, rows_to_mat(&self.y)?, tol)?;
        JacobiPoint::new(base, rows_to_mat(&self.u)?, rows_to_mat(&self.v)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskPointJson {
    #[serde(rename = "W")]
    pub w: CMatrixJson,
    pub eta: CMatrixJson,
}

impl DiskPointJson {
    pub fn from_point(p: &DiskPoint) -> Self {
        DiskPointJson {
            w: CMatrixJson::from_mat(p.w()),
            eta: CMatrixJson::from_mat(p.eta()),
        }
    }
    pub fn to_point(&self, tol: &Tolerances) -> Result<DiskPoint, Error> {
        DiskPoint::with_tol(self.w.to_mat()?, self.eta.to_mat()?, tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymplecticJson {
    #[serde(rename = "A")]
    pub a: Rows,
    #[serde(rename = "B")]
    pub b: Rows,
    #[serde(rename = "C")]
    pub c: Rows,
    #[serde(rename = "D")]
    pub d: Rows,
}

impl SymplecticJson {
    pub fn from_elem(m: &SymplecticMatrix) -> Self {
        SymplecticJson {
            a: mat_to_rows(m.a()),
            b: mat_to_rows(m.b()),
            c: mat_to_rows(m.c()),
            d: mat_to_rows(m.d()),
        }
    }
    pub fn to_elem(&self, tol: &Tolerances) -> Result<SymplecticMatrix, Error> {
        SymplecticMatrix::with_tol(
            rows_to_mat(&self.a)?,
            rows_to_mat(&self.b)?,
            rows_to_mat(&self.c)?,
            rows_to_mat(&self.d)?,
            tol,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JacobiElementJson {
    #[serde(flatten)]
    pub sp: SymplecticJson,
    pub lambda: Rows,
    pub mu: Rows,
    pub kappa: Rows,
}

impl JacobiElementJson {
    pub fn from_elem(g: &JacobiGroupElement) -> Self {
        JacobiElementJson {
            sp: SymplecticJson::from_elem(g.sp()),
            lambda: mat_to_rows(g.heis().lambda()),
            mu: mat_to_rows(g.heis().mu()),
            kappa: mat_to_rows(g.heis().kappa()),
        }
    }
    pub fn to_elem(&self, tol: &Tolerances) -> Result<JacobiGroupElement, Error> {
        let sp = self.sp.to_elem(tol)?;
        let h = HeisenbergElement::new(
            rows_to_mat(&self.lambda)?,
            rows_to_mat(&self.mu)?,
            rows_to_mat(&self.kappa)?,
        )?;
        JacobiGroupElement::new(sp, h)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskElementJson {
    #[serde(rename = "P")]
    pub p: CMatrixJson,
    #[serde(rename = "Q")]
    pub q: CMatrixJson,
    pub lambda: CMatrixJson,
    pub mu: CMatrixJson,
    pub kappa: CMatrixJson,
}

impl DiskElementJson {
    pub fn from_elem(g: &DiskGroupElement) -> Self {
        DiskElementJson {
            p: CMatrixJson::from_mat(g.p()),
            q: CMatrixJson::from_mat(g.q()),
            lambda: CMatrixJson::from_mat(g.lambda()),
            mu: CMatrixJson::from_mat(g.mu()),
            kappa: CMatrixJson::from_mat(g.kappa()),
        }
    }
    pub fn to_elem(&self, tol: &Tolerances) -> Result<DiskGroupElement, Error> {
        DiskGroupElement::with_tol(
            self.p.to_mat()?,
            self.q.to_mat()?,
            self.lambda.to_mat()?,
            self.mu.to_mat()?,
            self.kappa.to_mat()?,
            tol,
        )
    }
}

pub fn complex_json(v: &C64) -> serde_json::Value {
    serde_json::json!({"re": v.re, "im": v.im})
}

pub fn cx(v: &Cx<f64>) -> serde_json::Value {
    complex_json(v)
}

/// Partial tolerance override file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TolFile {
    pub sym_tol: Option<f64>,
    pub posdef_tol: Option<f64>,
    pub symplectic_tol: Option<f64>,
    pub lin_tol: Option<f64>,
    pub pivot_tol: Option<f64>,
    pub cond_max: Option<f64>,
    pub memb_tol: Option<f64>,
    pub h_lb: Option<f64>,
}

impl TolFile {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            sym_tol: self.sym_tol.unwrap_or(base.sym_tol),
            posdef_tol: self.posdef_tol.unwrap_or(base.posdef_tol),
            symplectic_tol: self.symplectic_tol.unwrap_or(base.symplectic_tol),
            lin_tol: self.lin_tol.unwrap_or(base.lin_tol),
            pivot_tol: self.pivot_tol.unwrap_or(base.pivot_tol),
            cond_max: self.cond_max.unwrap_or(base.cond_max),
            memb_tol: self.memb_tol.unwrap_or(base.memb_tol),
            h_lb: self.h_lb.unwrap_or(base.h_lb),
        }
    }
}
