//! Verification outcomes and the pass/fail rule for residuals.

use std::collections::BTreeMap;

use dashu_int::IBig;
use serde::Serialize;
use serde_json::Value;

use crate::matrix::{FMatrix, QMatrix};
use crate::scalars::{decimal_string, render_scalar, Float, QPoint, QScalar};

/// Exact arithmetic, or multiprecision floats at a fixed `q`.
#[derive(Debug, Clone)]
pub enum Mode {
    Exact,
    Numeric(QPoint),
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Numeric(_) => "numeric",
        }
    }
}

/// Residual tolerance: `dim * 1e-30` at 128 bits, scaled by `2^(128 - bits)`.
pub fn numeric_tolerance(at: &QPoint, dim: usize) -> Float {
    let base = at.int(1) / Float::from(IBig::from(10).pow(30)).with_precision(at.working_precision()).value();
    let shift = 128 - at.precision() as isize;
    let scale = at.pow2(-shift);
    base * scale * at.int(dim.max(1) as i64)
}

/// A residual matrix in either mode.
#[derive(Debug, Clone)]
pub enum Residual {
    Exact(QMatrix),
    Numeric { matrix: FMatrix, at: QPoint },
}

impl Residual {
    pub fn dim(&self) -> usize {
        match self {
            Residual::Exact(m) => m.rows(),
            Residual::Numeric { matrix, .. } => matrix.rows(),
        }
    }

    pub fn passes(&self) -> bool {
        match self {
            Residual::Exact(m) => m.is_zero(),
            Residual::Numeric { matrix, at } => matrix.max_abs() < numeric_tolerance(at, matrix.rows()),
        }
    }

    pub fn norm_string(&self) -> Option<String> {
        match self {
            Residual::Exact(_) => None,
            Residual::Numeric { matrix, at } => Some(decimal_string(&matrix.max_abs(), 64.min(at.precision()))),
        }
    }

    /// First nonzero entry of a failing exact residual.
    pub fn witness(&self) -> Option<String> {
        match self {
            Residual::Exact(m) => first_nonzero(m).map(|(i, j, x)| format!("({i},{j}): {}", render_scalar(x))),
            Residual::Numeric { .. } => None,
        }
    }
}

fn first_nonzero(m: &QMatrix) -> Option<(usize, usize, &QScalar)> {
    (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, m.get(i, j)))
        .find(|(_, _, x)| !x.is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One line of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_norm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn new(check: impl Into<String>, pass: bool) -> Self {
        Self {
            check: check.into(),
            params: BTreeMap::new(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual_norm: None,
            witness: None,
        }
    }

    pub fn from_residual(check: impl Into<String>, r: &Residual) -> Self {
        let pass = r.passes();
        let mut out = Self::new(check, pass);
        out.residual_norm = r.norm_string();
        if !pass {
            out.witness = r.witness();
        }
        out
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
