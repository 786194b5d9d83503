use super::problem::{ExtensionProblem, GapInterval, ProblemSpec};
use super::KvbError;
use crate::linalg::{C64, CMatrix};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Wire format of an extension problem. Vectors are column-major lists;
/// complex entries are `[re, im]` pairs; the gap's lower endpoint is a
/// number or the string `"-inf"`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProblemJson {
    pub dim: usize,
    pub domain_basis: Vec<Vec<(f64, f64)>>,
    pub action: Vec<Vec<(f64, f64)>>,
    pub s_d: Vec<Vec<(f64, f64)>>,
    pub gap: GapJson,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GapJson {
    pub a: GapEnd,
    pub b: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GapEnd {
    Num(f64),
    Tag(String),
}

fn to_c64(v: &[(f64, f64)]) -> Vec<C64> {
    v.iter().map(|&(re, im)| C64::new(re, im)).collect()
}

fn from_c64(v: &[C64]) -> Vec<(f64, f64)> {
    v.iter().map(|c| (c.re, c.im)).collect()
}

impl ProblemJson {
    pub fn into_spec(self) -> Result<ProblemSpec, KvbError> {
        let a = match self.gap.a {
            GapEnd::Num(x) => {
                if x.is_finite() {
                    Some(x)
                } else {
                    None
                }
            }
            GapEnd::Tag(s) => match s.as_str() {
                "-inf" | "-Inf" | "-infinity" => None,
                other => return Err(KvbError::Parse(format!("bad gap endpoint: {other:?}"))),
            },
        };
        let gap = GapInterval::new(a, self.gap.b)?;
        let n = self.dim;
        if self.s_d.len() != n || self.s_d.iter().any(|row| row.len() != n) {
            return Err(KvbError::Parse(format!("s_d must be {n}x{n}")));
        }
        let mut s_d = CMatrix::zeros(n, n);
        for (i, row) in self.s_d.iter().enumerate() {
            for (j, &(re, im)) in row.iter().enumerate() {
                s_d.set(i, j, C64::new(re, im));
            }
        }
        Ok(ProblemSpec {
            dim: n,
            domain_basis: self.domain_basis.iter().map(|v| to_c64(v)).collect(),
            action: self.action.iter().map(|v| to_c64(v)).collect(),
            s_d,
            gap,
        })
    }
}

pub fn problem_to_json(problem: &ExtensionProblem) -> ProblemJson {
    let spec = problem.spec();
    let n = spec.dim;
    let s_d = (0..n)
        .map(|i| (0..n).map(|j| (spec.s_d.at(i, j).re, spec.s_d.at(i, j).im)).collect())
        .collect();
    ProblemJson {
        dim: n,
        domain_basis: spec.domain_basis.iter().map(|v| from_c64(v)).collect(),
        action: spec.action.iter().map(|v| from_c64(v)).collect(),
        s_d,
        gap: GapJson {
            a: match spec.gap.lower() {
                Some(a) => GapEnd::Num(a),
                None => GapEnd::Tag("-inf".into()),
            },
            b: spec.gap.upper(),
        },
    }
}

pub fn problem_from_json(text: &str) -> Result<ExtensionProblem, KvbError> {
    let parsed: ProblemJson =
        serde_json::from_str(text).map_err(|e| KvbError::Parse(e.to_string()))?;
    parsed.into_spec()?.build()
}

pub fn read_problem(path: &Path) -> Result<ExtensionProblem, KvbError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| KvbError::Parse(format!("{}: {e}", path.display())))?;
    problem_from_json(&text)
}

pub fn write_problem(problem: &ExtensionProblem) -> String {
    serde_json::to_string_pretty(&problem_to_json(problem)).expect("serializable")
}
