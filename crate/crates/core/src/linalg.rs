//! Thin QR factorization for small dense least-squares problems.

/// `A = Q R` for a tall matrix given by columns. `Q` has orthonormal columns,
/// `R` is upper triangular (stored row-major, `r[i][j]` for `j >= i`).
#[derive(Debug, Clone)]
pub(crate) struct ThinQr {
    q: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

impl ThinQr {
    /// Modified Gram-Schmidt with one reorthogonalization pass. Returns `None`
    /// when a column is numerically dependent on the previous ones.
    pub(crate) fn new(columns: &[Vec<f64>]) -> Option<Self> {
        let k = columns.len();
        let m = columns.first().map_or(0, Vec::len);
        if k == 0 || m < k {
            return None;
        }
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut r = vec![vec![0.0; k]; k];
        for (j, col) in columns.iter().enumerate() {
            let mut v = col.clone();
            let original = norm(&v);
            if original == 0.0 {
                return None;
            }
            for _pass in 0..2 {
                for (i, qi) in q.iter().enumerate() {
                    let proj = dot(qi, &v);
                    r[i][j] += proj;
                    v.iter_mut().zip(qi).for_each(|(x, y)| *x -= proj * y);
                }
            }
            let len = norm(&v);
            if len <= 1e-12 * original {
                return None;
            }
            r[j][j] = len;
            v.iter_mut().for_each(|x| *x /= len);
            q.push(v);
        }
        Some(Self { q, r })
    }

    /// Least-squares solution of `A x = y`.
    pub(crate) fn solve(&self, y: &[f64]) -> Vec<f64> {
        let qty: Vec<f64> = self.q.iter().map(|qi| dot(qi, y)).collect();
        let k = qty.len();
        let mut x = vec![0.0; k];
        for i in (0..k).rev() {
            let tail: f64 = (i + 1..k).map(|j| self.r[i][j] * x[j]).sum();
            x[i] = (qty[i] - tail) / self.r[i][i];
        }
        x
    }

    /// Row `e` of the pseudo-inverse: weights `w` with `solve(y)[e] = w · y`.
    pub(crate) fn pinv_row(&self, e: usize) -> Vec<f64> {
        // pinv(A) = R⁻¹ Qᵀ, so row e is (R⁻ᵀ e_e)ᵀ Qᵀ.
        let k = self.r.len();
        let mut z = vec![0.0; k];
        for i in 0..k {
            let rhs = if i == e { 1.0 } else { 0.0 };
            let acc: f64 = (0..i).map(|j| self.r[j][i] * z[j]).sum();
            z[i] = (rhs - acc) / self.r[i][i];
        }
        let m = self.q[0].len();
        (0..m)
            .map(|row| self.q.iter().zip(&z).map(|(qi, zi)| qi[row] * zi).sum())
            .collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
