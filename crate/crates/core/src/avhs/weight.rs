//! The monodromy weight filtration of a nilpotent endomorphism.

use super::{AvhsError, Result};
use crate::matrix::{intersect_row_spaces, QMatrix};

/// An increasing filtration `W_•` given by RREF row bases.
///
/// `levels[i]` is `W_{lowest + i}`; below `lowest` the filtration is zero and
/// above the last level it is the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    pub center: i64,
    pub dim: usize,
    pub lowest: i64,
    pub levels: Vec<QMatrix>,
}

impl WeightFiltration {
    pub fn highest(&self) -> i64 {
        self.lowest + self.levels.len() as i64 - 1
    }

    pub fn level(&self, k: i64) -> QMatrix {
        if k < self.lowest {
            QMatrix::zeros(0, self.dim)
        } else if k > self.highest() {
            QMatrix::identity(self.dim)
        } else {
            self.levels[(k - self.lowest) as usize].clone()
        }
    }

    /// `dim W_k − dim W_{k−1}`.
    pub fn graded_dim(&self, k: i64) -> usize {
        self.level(k).rows() - self.level(k - 1).rows()
    }

    /// Checks `N·W_k ⊆ W_{k−2}` and that `N^k` induces isomorphisms
    /// `gr_{c+k} → gr_{c−k}`. Returns the first failure.
    pub fn verify(&self, n: &QMatrix) -> std::result::Result<(), String> {
        let (lo, hi) = (self.lowest - 2, self.highest() + 2);
        for k in lo..=hi {
            let img = image_rows(n, &self.level(k));
            if !img.row_space_within(&self.level(k - 2)) {
                return Err(format!("N·W_{k} ⊄ W_{}", k - 2));
            }
        }
        let c = self.center;
        let reach = (hi - c).max(c - lo).max(0);
        for k in 0..=reach {
            let src = self.level(c + k);
            let below = self.level(c - k - 1);
            let img = image_rows(&n.pow(k as usize), &src);
            let rank = img.vstack(&below).rank() - below.rank();
            let (up, down) = (self.graded_dim(c + k), self.graded_dim(c - k));
            if rank != up || up != down {
                return Err(format!(
                    "N^{k}: gr_{} → gr_{} has rank {rank}, graded dimensions {up} and {down}",
                    c + k,
                    c - k
                ));
            }
        }
        Ok(())
    }
}

/// Rows `N·v` for each row `v` of `basis`.
fn image_rows(n: &QMatrix, basis: &QMatrix) -> QMatrix {
    if basis.rows() == 0 {
        return QMatrix::zeros(0, n.rows());
    }
    (n * &basis.transpose()).transpose()
}

/// The weight filtration of nilpotent `n` centred at `center`:
/// `W_{c+k} = Σ_{j ≥ 0} ker N^{k+1+j} ∩ im N^j`.
pub fn weight_filtration(n: &QMatrix, center: i64) -> Result<WeightFiltration> {
    if !n.is_square() {
        return Err(AvhsError::Shape("weight filtration needs a square matrix".into()));
    }
    let dim = n.rows();
    let m = n.nilpotency_index().ok_or(AvhsError::NotNilpotent)?;
    if dim == 0 {
        return Ok(WeightFiltration {
            center,
            dim,
            lowest: center,
            levels: vec![QMatrix::zeros(0, 0)],
        });
    }
    let powers: Vec<QMatrix> = (0..=m).map(|k| n.pow(k)).collect();
    let pow = |k: usize| &powers[k.min(m)];
    let kernels: Vec<QMatrix> = (0..=m).map(|k| pow(k).kernel().row_space()).collect();
    let images: Vec<QMatrix> = (0..=m).map(|k| pow(k).transpose().row_space()).collect();
    let top = m as i64 - 1;
    let mut levels = Vec::new();
    for k in -top..=top {
        let mut acc = QMatrix::zeros(0, dim);
        for j in 0..m {
            let a = k + 1 + j as i64;
            if a <= 0 {
                continue;
            }
            let ker = &kernels[(a as usize).min(m)];
            let piece = intersect_row_spaces(ker, &images[j]);
            if piece.rows() > 0 {
                acc = acc.vstack(&piece);
            }
        }
        levels.push(if acc.rows() == 0 { acc } else { acc.row_space() });
    }
    Ok(WeightFiltration {
        center,
        dim,
        lowest: center - top,
        levels,
    })
}
