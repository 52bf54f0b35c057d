use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::real::CertifiedReal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QTreeError {
    #[error("duplicate path {0}")]
    Duplicate(String),
    #[error("cannot parse binary path {0:?}")]
    Parse(String),
}

/// A finite branch of the full binary tree, as a string of 0/1 choices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BinaryPath(pub Vec<bool>);

impl BinaryPath {
    /// Breadth-first labels of the nodes along the branch, root included.
    pub fn labels(&self) -> Vec<u64> {
        let mut m = 0u64;
        let mut out = vec![m];
        for &b in &self.0 {
            m = 2 * m + 1 + u64::from(b);
            out.push(m);
        }
        out
    }

    /// `sum over labels i of 2^{-(i+1)^2}`.
    pub fn real(&self) -> CertifiedReal {
        let positions = self
            .labels()
            .into_iter()
            .map(|i| (i + 1) * (i + 1))
            .collect();
        CertifiedReal::digit_sum(self.to_string(), positions).expect("squares increase")
    }
}

impl fmt::Display for BinaryPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryPath {
    type Err = QTreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(QTreeError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BinaryPath)
    }
}

impl From<BinaryPath> for String {
    fn from(p: BinaryPath) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for BinaryPath {
    type Error = QTreeError;
    fn try_from(s: String) -> Result<Self, QTreeError> {
        s.parse()
    }
}

/// The reals `r_alpha` of distinct branches.
pub fn qtree_reals(paths: &[BinaryPath]) -> Result<Vec<CertifiedReal>, QTreeError> {
    let mut seen = HashSet::new();
    for p in paths {
        if !seen.insert(p) {
            return Err(QTreeError::Duplicate(p.to_string()));
        }
    }
    Ok(paths.iter().map(BinaryPath::real).collect())
}
