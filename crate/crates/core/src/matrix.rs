use std::fmt;

use serde::{Deserialize, Serialize};

/// Nonnegative integer matrix; for a diagram level, `rows = |V_n|`, `cols = |V_{n-1}|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IncidenceMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.entries[i * k + i] = 1;
        }
        m
    }

    /// Fails on ragged or empty input.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self, String> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || cols == 0 {
            return Err("matrix must be nonempty".into());
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err("ragged matrix rows".into());
        }
        Ok(IncidenceMatrix {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn add(&mut self, i: usize, j: usize, by: u64) {
        self.entries[i * self.cols + j] += by;
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.cols)
            .map(<[u64]>::to_vec)
            .collect()
    }

    pub fn entry_sum(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|&x| x > 0)
    }

    /// Every row and every column carries a positive entry.
    pub fn is_surjective(&self) -> bool {
        let rows_ok = (0..self.rows).all(|i| (0..self.cols).any(|j| self.get(i, j) > 0));
        let cols_ok = (0..self.cols).all(|j| (0..self.rows).any(|i| self.get(i, j) > 0));
        rows_ok && cols_ok
    }

    /// `self * rhs`, `None` on shape mismatch or overflow.
    pub fn checked_mul(&self, rhs: &IncidenceMatrix) -> Option<IncidenceMatrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cell = &mut out.entries[i * rhs.cols + j];
                    *cell = cell.checked_add(a.checked_mul(rhs.get(k, j))?)?;
                }
            }
        }
        Some(out)
    }
}

impl TryFrom<Vec<Vec<u64>>> for IncidenceMatrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<u64>>) -> Result<Self, String> {
        Self::from_rows(&rows)
    }
}

impl From<IncidenceMatrix> for Vec<Vec<u64>> {
    fn from(m: IncidenceMatrix) -> Self {
        m.to_rows()
    }
}

impl fmt::Display for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.to_rows().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            write!(f, "[{}]", cells.join(","))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_display() {
        let a = IncidenceMatrix::from_rows(&[vec![2, 1, 0, 0], vec![1, 0, 1, 1]]).unwrap();
        let b =
            IncidenceMatrix::from_rows(&[vec![0, 1], vec![2, 1], vec![1, 0], vec![0, 2]]).unwrap();
        let p = a.checked_mul(&b).unwrap();
        assert_eq!(p.to_string(), "[[2,3],[1,3]]");
        assert!(b.checked_mul(&b).is_none());
        assert!(IncidenceMatrix::from_rows(&[vec![1], vec![1, 2]]).is_err());
    }

    #[test]
    fn json_as_nested_rows() {
        let m = IncidenceMatrix::from_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1,2],[3,4]]");
        assert_eq!(serde_json::from_str::<IncidenceMatrix>(&s).unwrap(), m);
    }

    #[test]
    fn overflow_is_detected() {
        let big = IncidenceMatrix::from_rows(&[vec![u64::MAX / 2 + 1]]).unwrap();
        assert!(big
            .checked_mul(&IncidenceMatrix::from_rows(&[vec![2]]).unwrap())
            .is_none());
    }
}
