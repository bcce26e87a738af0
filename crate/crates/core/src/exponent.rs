use serde::Serialize;

use crate::error::{Error, Result};

/// Boundary exponents of a b-map: `f*ρ_{H'} = a ∏_H ρ_H^{e[H][H']}`.
///
/// Rows are domain hypersurfaces, columns codomain hypersurfaces, both given
/// by their labels (member indices, or face ids for chart models).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExponentMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Vec<u32>>,
}

impl ExponentMatrix {
    pub fn zeros(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        let entries = vec![vec![0; cols.len()]; rows.len()];
        ExponentMatrix { rows, cols, entries }
    }

    pub fn identity(labels: Vec<usize>) -> Self {
        let mut m = Self::zeros(labels.clone(), labels);
        for i in 0..m.rows.len() {
            m.entries[i][i] = 1;
        }
        m
    }

    fn row_pos(&self, r: usize) -> Option<usize> {
        self.rows.iter().position(|&x| x == r)
    }

    fn col_pos(&self, c: usize) -> Option<usize> {
        self.cols.iter().position(|&x| x == c)
    }

    /// Entry by labels.
    pub fn get(&self, r: usize, c: usize) -> Option<u32> {
        Some(self.entries[self.row_pos(r)?][self.col_pos(c)?])
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) -> Result<()> {
        let (i, j) = self
            .row_pos(r)
            .zip(self.col_pos(c))
            .ok_or_else(|| Error::input(format!("no exponent slot ({r}, {c})")))?;
        self.entries[i][j] = v;
        Ok(())
    }

    pub fn row(&self, r: usize) -> Option<&[u32]> {
        self.row_pos(r).map(|i| self.entries[i].as_slice())
    }

    /// `self · other`, the exponents of the composite when `self` belongs to
    /// the first map.
    pub fn then(&self, other: &ExponentMatrix) -> Result<ExponentMatrix> {
        if self.cols != other.rows {
            return Err(Error::input(format!(
                "exponent labels do not match: {:?} vs {:?}",
                self.cols, other.rows
            )));
        }
        let mut out = ExponentMatrix::zeros(self.rows.clone(), other.cols.clone());
        for (i, row) in self.entries.iter().enumerate() {
            for (k, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.entries[k].iter().enumerate() {
                    out.entries[i][j] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// At most one nonzero entry in every row.
    pub fn rows_are_simple(&self) -> bool {
        self.entries
            .iter()
            .all(|r| r.iter().filter(|&&e| e != 0).count() <= 1)
    }
}
