//! Dense numerical rank by Householder QR with column pivoting.

use alloc::vec::Vec;

use crate::geom::sqrt;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: alloc::vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// Number of pivots of the column-pivoted QR factorization whose magnitude exceeds
    /// `tol`. The pivots track the singular values closely for the well-separated spectra
    /// met in contact networks.
    pub fn rank(&self, tol: f64) -> usize {
        let (m, n) = (self.rows, self.cols);
        // column-major working copy: Householder updates sweep down columns
        let mut a: Vec<Vec<f64>> = (0..n).map(|c| (0..m).map(|r| self.get(r, c)).collect()).collect();
        let mut norms: Vec<f64> = a.iter().map(|col| col.iter().map(|v| v * v).sum()).collect();
        let steps = m.min(n);
        for k in 0..steps {
            let (pivot, &best) = norms[k..]
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.total_cmp(y.1))
                .map(|(i, v)| (i + k, v))
                .unwrap();
            if sqrt(best.max(0.0)) <= tol {
                return k;
            }
            a.swap(k, pivot);
            norms.swap(k, pivot);

            let alpha = sqrt(a[k][k..].iter().map(|v| v * v).sum::<f64>());
            if alpha <= tol {
                return k;
            }
            let beta = if a[k][k] > 0.0 { -alpha } else { alpha };
            let mut v: Vec<f64> = a[k][k..].to_vec();
            v[0] -= beta;
            let vnorm2: f64 = v.iter().map(|x| x * x).sum();
            a[k][k] = beta;
            a[k][k + 1..].iter_mut().for_each(|x| *x = 0.0);
            if vnorm2 == 0.0 {
                continue;
            }
            let scale = 2.0 / vnorm2;
            for col in a.iter_mut().skip(k + 1) {
                let s: f64 = col[k..].iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() * scale;
                if s != 0.0 {
                    col[k..].iter_mut().zip(&v).for_each(|(x, y)| *x -= s * y);
                }
            }
            for (j, col) in a.iter().enumerate().skip(k + 1) {
                // recompute rather than downdate; downdating loses accuracy near rank deficiency
                norms[j] = col[k + 1..].iter().map(|x| x * x).sum();
            }
        }
        steps
    }
}
