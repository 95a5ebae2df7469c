//! Hermite and Smith normal forms over the integers.

use num::{Integer, One, Signed, Zero};

use crate::matrix::IntMatrix;
use crate::Int;

/// Row-style Hermite normal form `h = u · m`.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, and zero
/// rows sit at the bottom. `u` is unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, column)` of each pivot, top to bottom.
    pub pivots: Vec<(usize, usize)>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`.
    pub fn nonzero_rows(&self) -> IntMatrix {
        self.h.row_range(0, self.rank())
    }
}

/// Smith normal form `d = u · m · v` with `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, tracked alongside it.
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn hermite_normal_form(m: &IntMatrix) -> Hnf {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut p = 0;
    for col in 0..m.cols() {
        if p == rows {
            break;
        }
        loop {
            let best = (p..rows)
                .filter(|&r| !h[(r, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let mut clean = true;
            for r in p + 1..rows {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = -h[(r, col)].div_floor(&h[(p, col)]);
                h.add_row_multiple(r, p, &q);
                u.add_row_multiple(r, p, &q);
                if !h[(r, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(p, col)].is_zero() {
            continue;
        }
        if h[(p, col)].is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        for r in 0..p {
            let q = -h[(r, col)].div_floor(&h[(p, col)]);
            h.add_row_multiple(r, p, &q);
            u.add_row_multiple(r, p, &q);
        }
        pivots.push((p, col));
        p += 1;
    }
    Hnf { h, u, pivots }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // column operations must be mirrored on v (right) and v_inv (left, inverse op)
    fn col_add(d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst: usize, src: usize, k: &Int) {
        d.add_col_multiple(dst, src, k);
        v.add_col_multiple(dst, src, k);
        vi.add_row_multiple(src, dst, &-k);
    }
    fn col_swap(d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, a: usize, b: usize) {
        d.swap_cols(a, b);
        v.swap_cols(a, b);
        vi.swap_rows(a, b);
    }

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    if d[(r, c)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(br, bc)| d[(r, c)].abs() < d[(br, bc)].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return finish(u, d, v, v_inv);
            };
            d.swap_rows(t, br);
            u.swap_rows(t, br);
            col_swap(&mut d, &mut v, &mut v_inv, t, bc);

            let mut clean = true;
            for r in t + 1..rows {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = -d[(r, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                clean &= d[(r, t)].is_zero();
            }
            for c in t + 1..cols {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = -d[(t, c)].div_floor(&d[(t, t)]);
                col_add(&mut d, &mut v, &mut v_inv, c, t, &q);
                clean &= d[(t, c)].is_zero();
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block
            let pivot = d[(t, t)].clone();
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !d[(r, c)].is_multiple_of(&pivot)));
            match bad {
                Some(r) => {
                    let one = Int::one();
                    d.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v, v_inv)
}

fn finish(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix, v_inv: IntMatrix) -> Snf {
    for t in 0..d.rows().min(d.cols()) {
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, d, v, v_inv }
}

/// Saturated basis (rows) of the integer right kernel `{x ∈ ℤⁿ : m·x = 0}`,
/// returned in Hermite normal form.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let basis = IntMatrix::from_fn(n - r, n, |i, j| snf.v[(j, r + i)].clone());
    hermite_normal_form(&basis).nonzero_rows()
}
