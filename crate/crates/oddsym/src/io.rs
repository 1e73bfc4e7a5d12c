//! File formats: the matrix JSON object `{rows, cols, re, im}` (row-major),
//! a whitespace-separated text form for golden files, symmetry forms,
//! symbol loops, model configurations and CSV emitters.
//!
//! All floating-point output is printed with a fixed `{:.12e}` format so
//! identical inputs produce byte-identical files.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

use crate::error::{OddsymError, Result};
use crate::insulator::{BoundaryCondition, KaneMeleParams};
use crate::mat::*;
use crate::symmetry::{FormKind, SymmetryForm};
use crate::toeplitz::SymbolLoop;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            re: m.iter().map(|z| z.re).collect(),
            im: m.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.re.len() != self.rows * self.cols || self.im.len() != self.rows * self.cols {
            return Err(OddsymError::Format(format!(
                "matrix json: {}×{} needs {} entries, got re: {}, im: {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.re.len(),
                self.im.len()
            )));
        }
        let mut m = zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let k = i * self.cols + j;
                m[(i, j)] = c(self.re[k], self.im[k]);
            }
        }
        if !all_finite(&m) {
            return Err(OddsymError::Format("matrix json: non-finite entries".into()));
        }
        Ok(m)
    }
}

pub fn write_matrix_json(path: &Path, m: &CMatrix) -> Result<()> {
    let json = serde_json::to_string_pretty(&MatrixJson::from_matrix(m))
        .map_err(|e| OddsymError::Format(e.to_string()))?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn read_matrix_json(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    let mj: MatrixJson =
        serde_json::from_str(&text).map_err(|e| OddsymError::Format(e.to_string()))?;
    mj.to_matrix()
}

/// Text golden-file form: a `rows cols` header line, then one `re im` pair
/// per entry, row-major, one entry per line.
pub fn write_matrix_text(path: &Path, m: &CMatrix) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", m.nrows(), m.ncols()));
    for z in m.iter() {
        out.push_str(&format!("{:.12e} {:.12e}\n", z.re, z.im));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_matrix_text(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    let mut nums = text.split_whitespace();
    let rows: usize = nums
        .next()
        .ok_or_else(|| OddsymError::Format("matrix text: empty file".into()))?
        .parse()
        .map_err(|_| OddsymError::Format("matrix text: bad rows".into()))?;
    let cols: usize = nums
        .next()
        .ok_or_else(|| OddsymError::Format("matrix text: missing cols".into()))?
        .parse()
        .map_err(|_| OddsymError::Format("matrix text: bad cols".into()))?;
    let mut m = zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = nums
                .next()
                .ok_or_else(|| OddsymError::Format("matrix text: truncated".into()))?
                .parse()
                .map_err(|_| OddsymError::Format("matrix text: bad number".into()))?;
            let im: f64 = nums
                .next()
                .ok_or_else(|| OddsymError::Format("matrix text: truncated".into()))?
                .parse()
                .map_err(|_| OddsymError::Format("matrix text: bad number".into()))?;
            m[(i, j)] = c(re, im);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryFormJson {
    pub kind: String,
    pub dim: usize,
    pub matrix: MatrixJson,
}

pub fn write_form_json(path: &Path, form: &SymmetryForm) -> Result<()> {
    let fj = SymmetryFormJson {
        kind: match form.kind() {
            FormKind::Odd => "odd".into(),
            FormKind::Even => "even".into(),
        },
        dim: form.dim(),
        matrix: MatrixJson::from_matrix(form.matrix()),
    };
    let json =
        serde_json::to_string_pretty(&fj).map_err(|e| OddsymError::Format(e.to_string()))?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn read_form_json(path: &Path) -> Result<SymmetryForm> {
    let text = std::fs::read_to_string(path)?;
    let fj: SymmetryFormJson =
        serde_json::from_str(&text).map_err(|e| OddsymError::Format(e.to_string()))?;
    let kind = match fj.kind.as_str() {
        "odd" => FormKind::Odd,
        "even" => FormKind::Even,
        other => {
            return Err(OddsymError::Format(format!(
                "symmetry form: unknown kind {other:?} (expected \"odd\" or \"even\")"
            )))
        }
    };
    SymmetryForm::new(kind, fj.matrix.to_matrix()?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolLoopJson {
    pub fiber_dim: usize,
    pub ts: Vec<f64>,
    pub matrices: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<SymmetryFormJson>,
}

pub fn write_loop_json(path: &Path, loop_: &SymbolLoop) -> Result<()> {
    let lj = SymbolLoopJson {
        fiber_dim: loop_.fiber_dim,
        ts: loop_.ts.clone(),
        matrices: loop_.samples.iter().map(MatrixJson::from_matrix).collect(),
        form: loop_.fiber_form.as_ref().map(|f| SymmetryFormJson {
            kind: match f.kind() {
                FormKind::Odd => "odd".into(),
                FormKind::Even => "even".into(),
            },
            dim: f.dim(),
            matrix: MatrixJson::from_matrix(f.matrix()),
        }),
    };
    let json =
        serde_json::to_string(&lj).map_err(|e| OddsymError::Format(e.to_string()))?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn read_loop_json(path: &Path) -> Result<SymbolLoop> {
    let text = std::fs::read_to_string(path)?;
    let lj: SymbolLoopJson =
        serde_json::from_str(&text).map_err(|e| OddsymError::Format(e.to_string()))?;
    let samples: Result<Vec<CMatrix>> = lj.matrices.iter().map(|m| m.to_matrix()).collect();
    let form = match lj.form {
        None => {
            // a loop of 2-dim fibers defaults to the standard odd form when
            // the samples actually satisfy the symmetry; otherwise none
            None
        }
        Some(fj) => {
            let kind = match fj.kind.as_str() {
                "odd" => FormKind::Odd,
                "even" => FormKind::Even,
                other => {
                    return Err(OddsymError::Format(format!(
                        "symbol loop: unknown form kind {other:?}"
                    )))
                }
            };
            Some(SymmetryForm::new(kind, fj.matrix.to_matrix()?)?)
        }
    };
    SymbolLoop::new(lj.ts, samples?, form)
}

/// Declarative insulator experiment configuration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModelConfig {
    #[serde(rename = "Lx")]
    pub lx: usize,
    #[serde(rename = "Ly")]
    pub ly: usize,
    pub t: f64,
    pub lambda_so: f64,
    pub lambda_r: f64,
    pub lambda_v: f64,
    pub w: f64,
    pub seed: u64,
    /// "torus" or "open".
    pub boundary: Boundary,
    #[serde(rename = "E_F")]
    pub e_f: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Torus,
    Open,
}

impl ModelConfig {
    pub fn params(&self) -> KaneMeleParams {
        KaneMeleParams {
            lx: self.lx,
            ly: self.ly,
            t_hop: self.t,
            lambda_so: self.lambda_so,
            lambda_r: self.lambda_r,
            lambda_v: self.lambda_v,
            disorder_w: self.w,
            seed: self.seed,
            boundary: match self.boundary {
                Boundary::Torus => BoundaryCondition::Torus,
                Boundary::Open => BoundaryCondition::Open,
            },
        }
    }
}

pub fn read_model_config(path: &Path) -> Result<ModelConfig> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| OddsymError::Format(e.to_string()))
}

pub fn write_model_config(path: &Path, cfg: &ModelConfig) -> Result<()> {
    let json =
        serde_json::to_string_pretty(cfg).map_err(|e| OddsymError::Format(e.to_string()))?;
    std::fs::write(path, json)?;
    Ok(())
}

/// One row of an insulator sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub lx: usize,
    pub ly: usize,
    pub t: f64,
    pub lambda_so: f64,
    pub lambda_r: f64,
    pub lambda_v: f64,
    pub w: f64,
    pub seed: u64,
    pub e_f: f64,
    pub gap: f64,
    pub psp_gap: f64,
    /// "0", "1" or "unresolved".
    pub ind2: String,
    pub c_plus: i64,
    pub c_minus: i64,
    pub flags: String,
}

pub const SWEEP_CSV_HEADER: &str =
    "lx,ly,t,lambda_so,lambda_r,lambda_v,w,seed,e_f,gap,psp_gap,ind2,c_plus,c_minus,flags";

pub fn write_sweep_csv(mut out: impl Write, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{},{:.12e},{:.12e},{:.12e},{},{},{},{}",
            r.lx,
            r.ly,
            r.t,
            r.lambda_so,
            r.lambda_r,
            r.lambda_v,
            r.w,
            r.seed,
            r.e_f,
            r.gap,
            r.psp_gap,
            r.ind2,
            r.c_plus,
            r.c_minus,
            r.flags
        )?;
    }
    Ok(())
}

/// Crossing-diagram CSV: one row per (grid point, eigenphase track).
pub fn write_crossings_csv(mut out: impl Write, ts: &[f64], tracks: &[Vec<f64>]) -> Result<()> {
    writeln!(out, "t,track,phase")?;
    for (k, &t) in ts.iter().enumerate() {
        for (track_idx, track) in tracks.iter().enumerate() {
            writeln!(out, "{:.12e},{},{:.12e}", t, track_idx, track[k])?;
        }
    }
    Ok(())
}
