//! Banded Cholesky factorization used for shift-and-invert.
//!
//! In photon-major order the widest coupling is `(n, k) → (n + 2, k)`, which
//! spans one full photon level pair, so the bandwidth is about `N + 1` inside
//! a parity block. Reordering spin-major makes it about `n_max + 2` instead;
//! whichever is narrower is used. There is no fill outside the band.

use crate::model::SparseHamiltonian;

pub(crate) struct BandCholesky {
    n: usize,
    bw: usize,
    /// Row `i` holds `L[i][i - bw ..= i]`, left-padded with zeros.
    l: Vec<f64>,
    /// `pos[i]` is the band row of basis index `i`, if reordered.
    pos: Option<Vec<usize>>,
}

impl BandCholesky {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.l[i * (self.bw + 1) + (j + self.bw - i)]
    }

    /// Factors `H − σ I`. Returns `None` when the shifted matrix is not
    /// positive definite, i.e. when `σ` is not below the lowest eigenvalue.
    pub fn factor(h: &SparseHamiltonian, sigma: f64) -> Option<Self> {
        let n = h.dim;
        let natural = h.entries.iter().map(|&(i, j, _)| j - i).max().unwrap_or(0);
        let pos = spin_major(h);
        let reordered = h
            .entries
            .iter()
            .map(|&(i, j, _)| pos[i].abs_diff(pos[j]))
            .max()
            .unwrap_or(0);
        let (bw, pos) = if reordered < natural {
            (reordered, Some(pos))
        } else {
            (natural, None)
        };
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for &(i, j, a) in &h.entries {
            let (i, j) = match &pos {
                Some(p) => (p[i].min(p[j]), p[i].max(p[j])),
                None => (i, j),
            };
            // lower-triangle position (j, i)
            l[j * w + (i + bw - j)] += a;
        }
        for j in 0..n {
            l[j * w + bw] -= sigma;
        }
        for j in 0..n {
            let lo = j.saturating_sub(bw);
            let row_j = j * w;
            let s: f64 = (lo..j).map(|k| l[row_j + k + bw - j].powi(2)).sum();
            let d = l[row_j + bw] - s;
            if !(d > 0.0) {
                return None;
            }
            let djj = d.sqrt();
            l[row_j + bw] = djj;
            for i in j + 1..n.min(j + bw + 1) {
                let row_i = i * w;
                let lo_i = i.saturating_sub(bw).max(lo);
                let mut acc = l[row_i + j + bw - i];
                for k in lo_i..j {
                    acc -= l[row_i + k + bw - i] * l[row_j + k + bw - j];
                }
                l[row_i + j + bw - i] = acc / djj;
            }
        }
        Some(Self { n, bw, l, pos })
    }

    /// Solves `(H − σ) x = b` in place.
    pub fn solve(&self, x: &mut [f64]) {
        match &self.pos {
            None => self.solve_band(x),
            Some(pos) => {
                let mut y = vec![0.0; self.n];
                for (i, &p) in pos.iter().enumerate() {
                    y[p] = x[i];
                }
                self.solve_band(&mut y);
                for (i, &p) in pos.iter().enumerate() {
                    x[i] = y[p];
                }
            }
        }
    }

    fn solve_band(&self, x: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut acc = x[i];
            for k in lo..i {
                acc -= self.at(i, k) * x[k];
            }
            x[i] = acc / self.at(i, i);
        }
        for i in (0..n).rev() {
            x[i] /= self.at(i, i);
            let xi = x[i];
            let lo = i.saturating_sub(bw);
            for k in lo..i {
                x[k] -= self.at(i, k) * xi;
            }
        }
    }
}

/// Band row of every basis state when states are sorted by `(k, n)`.
fn spin_major(h: &SparseHamiltonian) -> Vec<usize> {
    let states = h.basis.states();
    let mut order: Vec<usize> = (0..states.len()).collect();
    order.sort_by_key(|&i| (states[i].1, states[i].0));
    let mut pos = vec![0; order.len()];
    for (row, &i) in order.iter().enumerate() {
        pos[i] = row;
    }
    pos
}
