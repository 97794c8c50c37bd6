//! Module files: named `B_r`-modules and (A,V)-modules in JSON.
//!
//! ```json
//! {
//!   "br_modules": [
//!     { "name": "half", "expr": "Mgamma(1/2)" },
//!     { "name": "jordan", "rank": 1, "matrices": [[["0","0"],["0","1"]], [["0","0"],["1","0"]]] }
//!   ],
//!   "modules": [
//!     { "name": "om", "omega": { "lambda": "2", "beta": "1" } },
//!     { "name": "a01", "a": { "alpha": "0", "beta": "1" } },
//!     { "name": "fj", "f": { "br": "jordan", "inner": "om" } },
//!     { "name": "fs", "expr": "F(shift,A(0,1))" }
//!   ]
//! }
//! ```
//!
//! Entries are read in order, so later entries may use earlier names.
//! Matrix modules act on `ℚ^n` with `matrices[i]` the matrix of `d̄_i`;
//! a module that fails validation is still loaded so that `verify gm` can
//! report the failing relation.

use std::path::Path;

use serde::Deserialize;
use virmod_core::algebra::{BrModule, BrOperator, Carrier, DEFAULT_CERT_WINDOW};
use virmod_core::dynamic::DynModule;
use virmod_core::exact::parse_rational;
use virmod_core::text::Registry;
use virmod_core::{Error, RatMatrix, Rational, Result};

/// A rational given as a `"p/q"` string or a JSON integer.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum RatLit {
    Text(String),
    Int(i64),
}

impl RatLit {
    fn value(&self) -> Result<Rational> {
        match self {
            RatLit::Text(s) => parse_rational(s),
            RatLit::Int(n) => Ok(Rational::from_integer((*n).into())),
        }
    }
}

#[derive(Deserialize, Debug, Default)]
pub struct ModuleFile {
    #[serde(default)]
    pub br_modules: Vec<BrEntry>,
    #[serde(default)]
    pub modules: Vec<ModuleEntry>,
}

#[derive(Deserialize, Debug)]
pub struct BrEntry {
    pub name: String,
    #[serde(flatten)]
    pub body: BrBody,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
pub enum BrBody {
    Expr { expr: String },
    Matrices { rank: Option<usize>, matrices: Vec<Vec<Vec<RatLit>>> },
}

#[derive(Deserialize, Debug)]
pub struct ModuleEntry {
    pub name: String,
    #[serde(flatten)]
    pub body: ModuleBody,
}

#[derive(Deserialize, Debug)]
pub struct OmegaDesc {
    pub lambda: RatLit,
    pub beta: RatLit,
}

#[derive(Deserialize, Debug)]
pub struct ADesc {
    pub alpha: RatLit,
    pub beta: RatLit,
}

#[derive(Deserialize, Debug)]
pub struct FDesc {
    pub br: String,
    pub inner: String,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
pub enum ModuleBody {
    Expr { expr: String },
    Omega { omega: OmegaDesc },
    A { a: ADesc },
    F { f: FDesc },
}

fn matrix_module(name: &str, rank: Option<usize>, matrices: &[Vec<Vec<RatLit>>]) -> Result<BrModule> {
    let r = matrices
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::Parse(format!("{name}: no matrices given")))?;
    if let Some(declared) = rank {
        if declared != r {
            return Err(Error::Parse(format!("{name}: rank {declared} but {} matrices", matrices.len())));
        }
    }
    let n = matrices[0].len();
    let ops = matrices
        .iter()
        .map(|rows| {
            if rows.len() != n {
                return Err(Error::Parse(format!("{name}: matrices must all be {n}x{n}")));
            }
            let rows = rows
                .iter()
                .map(|row| row.iter().map(RatLit::value).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(BrOperator::Matrix(RatMatrix::from_rows(rows, n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = BrModule::new(name, r, Carrier::FiniteDim(n), ops)?;
    Ok(m.clone().certified(DEFAULT_CERT_WINDOW).unwrap_or(m))
}

impl ModuleFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("module file: {e}")))
    }

    pub fn registry(&self) -> Result<Registry> {
        let mut reg = Registry::new();
        for e in &self.br_modules {
            let m = match &e.body {
                BrBody::Expr { expr } => reg.parse_br(expr)?,
                BrBody::Matrices { rank, matrices } => matrix_module(&e.name, *rank, matrices)?,
            };
            reg.add_br(e.name.clone(), m);
        }
        for e in &self.modules {
            let m = match &e.body {
                ModuleBody::Expr { expr } => reg.parse_module(expr)?,
                ModuleBody::Omega { omega } => DynModule::omega(omega.lambda.value()?, omega.beta.value()?)?,
                ModuleBody::A { a } => DynModule::a(a.alpha.value()?, a.beta.value()?),
                ModuleBody::F { f } => DynModule::f(reg.parse_br(&f.br)?, reg.parse_module(&f.inner)?)?,
            };
            reg.add_module(e.name.clone(), m);
        }
        Ok(reg)
    }
}
