//! Least-squares readout training by orthogonal decomposition.
//!
//! The train matrix (readout columns plus a bias column) is factored once as
//! a thin Householder QR; the small triangular factor gets a Jacobi SVD with
//! a relative singular-value cutoff, so rank-deficient readouts (duplicated
//! or constant columns) fall back to the minimum-norm solution. Thousands of
//! targets are then trained against the same factorization.

use crate::{Error, Result};

/// Relative singular-value cutoff for the pseudo-inverse.
pub const SV_CUTOFF: f64 = 1e-10;

pub struct LstsqSolver {
    rows: usize,
    cols: usize,
    /// Thin Q, column-major (each column contiguous for fast dot products).
    q: Vec<f64>,
    /// SVD of R: R = U Σ Vᵀ, all k x k row-major.
    u: Vec<f64>,
    vt: Vec<f64>,
    singular_values: Vec<f64>,
}

impl LstsqSolver {
    /// Factor a row-major `rows x cols` design matrix (`rows >= cols`).
    pub fn new(design: &[f64], rows: usize, cols: usize) -> Result<Self> {
        if rows < cols {
            return Err(Error::InsufficientData(format!(
                "least squares needs rows >= cols, got {rows} x {cols}"
            )));
        }
        assert_eq!(design.len(), rows * cols);

        // Column-major working copy.
        let mut a = vec![0.0; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                a[c * rows + r] = design[r * cols + c];
            }
        }

        // Householder QR; reflectors stored in-place below the diagonal,
        // R on and above it.
        let mut taus = Vec::with_capacity(cols);
        for j in 0..cols {
            let (head, tail) = a.split_at_mut((j + 1) * rows);
            let col = &mut head[j * rows + j..(j + 1) * rows];
            let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                taus.push(0.0);
                continue;
            }
            let alpha = if col[0] >= 0.0 { -norm } else { norm };
            let v0 = col[0] - alpha;
            col[0] = alpha;
            // v = [1, col[1..]/v0]; tau = -v0/alpha
            let tau = -v0 / alpha;
            for v in col[1..].iter_mut() {
                *v /= v0;
            }
            taus.push(tau);
            // apply (I - tau v vᵀ) to the remaining columns
            let m = rows - j;
            for rest in tail.chunks_exact_mut(rows) {
                let seg = &mut rest[j..j + m];
                let mut dot = seg[0];
                for i in 1..m {
                    dot += head[j * rows + j + i] * seg[i];
                }
                let f = tau * dot;
                seg[0] -= f;
                for i in 1..m {
                    seg[i] -= f * head[j * rows + j + i];
                }
            }
        }

        // Extract R (k x k row-major).
        let mut r_mat = vec![0.0; cols * cols];
        for c in 0..cols {
            for r in 0..=c {
                r_mat[r * cols + c] = a[c * rows + r];
            }
        }

        // Form thin Q explicitly by applying the reflectors to I.
        let mut q = vec![0.0; rows * cols];
        for c in 0..cols {
            let col = &mut q[c * rows..(c + 1) * rows];
            col[c] = 1.0;
            for j in (0..cols).rev() {
                let tau = taus[j];
                if tau == 0.0 {
                    continue;
                }
                let m = rows - j;
                let refl = &a[j * rows + j..(j + 1) * rows];
                let seg = &mut col[j..j + m];
                let mut dot = seg[0];
                for i in 1..m {
                    dot += refl[i] * seg[i];
                }
                let f = tau * dot;
                seg[0] -= f;
                for i in 1..m {
                    seg[i] -= f * refl[i];
                }
            }
        }

        let (u, singular_values, vt) = svd_small(&r_mat, cols);
        Ok(Self { rows, cols, q, u, vt, singular_values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Minimum-norm least-squares weights for a target vector.
    pub fn solve(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows);
        let k = self.cols;
        // c = Qᵀ y
        let mut c = vec![0.0; k];
        for (j, cj) in c.iter_mut().enumerate() {
            let col = &self.q[j * self.rows..(j + 1) * self.rows];
            *cj = dot(col, y);
        }
        // d = Σ⁺ Uᵀ c
        let smax = self.singular_values.iter().cloned().fold(0.0, f64::max);
        let cut = SV_CUTOFF * smax;
        let mut d = vec![0.0; k];
        for i in 0..k {
            let s = self.singular_values[i];
            if s > cut {
                let ui = &self.u[..]; // row-major k x k, column i
                let mut acc = 0.0;
                for r in 0..k {
                    acc += ui[r * k + i] * c[r];
                }
                d[i] = acc / s;
            }
        }
        // w = V d
        let mut w = vec![0.0; k];
        for (i, wi) in w.iter_mut().enumerate() {
            let mut acc = 0.0;
            for r in 0..k {
                acc += self.vt[r * k + i] * d[r];
            }
            *wi = acc;
        }
        w
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One-sided Jacobi SVD of a small row-major `k x k` matrix:
/// returns (U, σ descending, Vᵀ) with `m = U diag(σ) Vᵀ`.
fn svd_small(m: &[f64], k: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    // Column-major copy of G = m; rotate column pairs until orthogonal.
    let mut g = vec![0.0; k * k];
    for r in 0..k {
        for c in 0..k {
            g[c * k + r] = m[r * k + c];
        }
    }
    let mut v = vec![0.0; k * k]; // column-major V
    for i in 0..k {
        v[i * k + i] = 1.0;
    }
    let scale: f64 = g.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..k - 1 {
            for q in p + 1..k {
                let (gp, gq) = (&g[p * k..(p + 1) * k], &g[q * k..(q + 1) * k]);
                let alpha = dot(gp, gp);
                let beta = dot(gq, gq);
                let gamma = dot(gp, gq);
                if gamma.abs() <= 1e-30 * scale || gamma.abs() <= 1e-16 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..k {
                    let (a, b) = (g[p * k + i], g[q * k + i]);
                    g[p * k + i] = c * a - s * b;
                    g[q * k + i] = s * a + c * b;
                    let (a, b) = (v[p * k + i], v[q * k + i]);
                    v[p * k + i] = c * a - s * b;
                    v[q * k + i] = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // σ_j = ‖g_j‖, u_j = g_j / σ_j; sort descending.
    let mut order: Vec<usize> = (0..k).collect();
    let sigmas: Vec<f64> = (0..k)
        .map(|j| dot(&g[j * k..(j + 1) * k], &g[j * k..(j + 1) * k]).sqrt())
        .collect();
    order.sort_by(|&a, &b| sigmas[b].total_cmp(&sigmas[a]));
    let mut u = vec![0.0; k * k]; // row-major
    let mut vt = vec![0.0; k * k];
    let mut s_sorted = Vec::with_capacity(k);
    for (slot, &j) in order.iter().enumerate() {
        let sigma = sigmas[j];
        s_sorted.push(sigma);
        for i in 0..k {
            let uval = if sigma > 0.0 { g[j * k + i] / sigma } else { 0.0 };
            u[i * k + slot] = uval;
            vt[slot * k + i] = v[j * k + i];
        }
    }
    (u, s_sorted, vt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn predict(design: &[f64], rows: usize, cols: usize, w: &[f64]) -> Vec<f64> {
        (0..rows)
            .map(|r| dot(&design[r * cols..(r + 1) * cols], w))
            .collect()
    }

    #[test]
    fn exact_fit_of_realizable_target() {
        // y is literally column 1 → residual 0
        let rows = 200;
        let cols = 3;
        let mut design = vec![0.0; rows * cols];
        let mut y = vec![0.0; rows];
        for r in 0..rows {
            let t = r as f64 * 0.1;
            design[r * cols] = t.sin();
            design[r * cols + 1] = t.cos();
            design[r * cols + 2] = 1.0;
            y[r] = t.cos();
        }
        let solver = LstsqSolver::new(&design, rows, cols).unwrap();
        let w = solver.solve(&y);
        let pred = predict(&design, rows, cols, &w);
        let mse: f64 = pred.iter().zip(&y).map(|(p, t)| (p - t) * (p - t)).sum::<f64>()
            / rows as f64;
        assert!(mse < 1e-20, "mse {mse}");
    }

    #[test]
    fn duplicated_column_does_not_change_predictions() {
        let rows = 150;
        let base: Vec<f64> = (0..rows)
            .flat_map(|r| {
                let t = r as f64 * 0.05;
                [t.sin(), (2.0 * t).cos(), 1.0]
            })
            .collect();
        let dup: Vec<f64> = (0..rows)
            .flat_map(|r| {
                let t = r as f64 * 0.05;
                [t.sin(), (2.0 * t).cos(), (2.0 * t).cos(), 1.0]
            })
            .collect();
        let y: Vec<f64> = (0..rows).map(|r| (r as f64 * 0.05).sin() * 0.3 + 0.1).collect();
        let s1 = LstsqSolver::new(&base, rows, 3).unwrap();
        let s2 = LstsqSolver::new(&dup, rows, 4).unwrap();
        let p1 = predict(&base, rows, 3, &s1.solve(&y));
        let p2 = predict(&dup, rows, 4, &s2.solve(&y));
        for (a, b) in p1.iter().zip(&p2) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn svd_small_reconstructs() {
        let k = 5;
        let mut m = vec![0.0; k * k];
        for r in 0..k {
            for c in 0..=r {
                m[c * k + r] = 0.0; // keep upper-triangular-ish input
                m[r * k + c] = ((r * 7 + c * 3) % 11) as f64 - 5.0;
            }
        }
        let (u, s, vt) = svd_small(&m, k);
        // reconstruct
        let mut rec = vec![0.0; k * k];
        for r in 0..k {
            for c in 0..k {
                let mut acc = 0.0;
                for i in 0..k {
                    acc += u[r * k + i] * s[i] * vt[i * k + c];
                }
                rec[r * k + c] = acc;
            }
        }
        for (a, b) in rec.iter().zip(&m) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        for w in s.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }
}
