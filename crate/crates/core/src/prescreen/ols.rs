//! Rank-revealing ordinary least squares.
//!
//! Householder QR with column pivoting on an equilibrated design matrix.
//! Pivot columns whose diagonal magnitude drops below `rel_tol` times the
//! leading pivot are treated as dependent and receive a zero coefficient.

/// Column-major dense matrix used as the regression design.
#[derive(Debug, Clone)]
pub struct Design {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Design {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a design from row vectors, all of length `cols`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], cols: usize) -> Self {
        let mut design = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            design.set_row(i, row.as_ref());
        }
        design
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set_row(&mut self, i: usize, row: &[f64]) {
        assert_eq!(row.len(), self.cols, "row length must equal column count");
        for (j, &v) in row.iter().enumerate() {
            self.data[j * self.rows + i] = v;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let rows = self.rows;
        let (left, right) = self.data.split_at_mut(hi * rows);
        left[lo * rows..(lo + 1) * rows].swap_with_slice(&mut right[..rows]);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquaresFit {
    pub coefficients: Vec<f64>,
    /// Numerical rank detected by the pivoted factorization.
    pub rank: usize,
    /// Smallest accepted pivot relative to the leading one.
    pub pivot_ratio: f64,
}

// Independent accumulator lanes; enough to hide add latency on wide vectors.
const LANES: usize = 16;

#[inline(always)]
fn lane_sum(acc: &[f64; LANES]) -> f64 {
    let mut half = [0.0; LANES / 2];
    for l in 0..LANES / 2 {
        half[l] = acc[l] + acc[l + LANES / 2];
    }
    ((half[0] + half[4]) + (half[1] + half[5])) + ((half[2] + half[6]) + (half[3] + half[7]))
}

#[inline(always)]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let body = n / LANES * LANES;
    let mut acc = [0.0f64; LANES];
    for (x, y) in a[..body].chunks_exact(LANES).zip(b[..body].chunks_exact(LANES)) {
        for l in 0..LANES {
            acc[l] += x[l] * y[l];
        }
    }
    let mut tail = 0.0;
    for i in body..n {
        tail += a[i] * b[i];
    }
    lane_sum(&acc) + tail
}

#[inline(always)]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi -= alpha * xi;
    }
}

/// Solves `min ||design * beta - target||`.
///
/// Consumes the design since the factorization happens in place. Results
/// are identical whichever instruction set the kernel runs on: no fused
/// multiply-adds are emitted and the summation order is fixed.
pub fn least_squares(design: Design, target: &[f64], rel_tol: f64) -> LeastSquaresFit {
    #[cfg(target_arch = "x86_64")]
    {
        if std::is_x86_feature_detected!("avx2") {
            // SAFETY: the required CPU feature was detected at runtime.
            return unsafe { least_squares_avx2(design, target, rel_tol) };
        }
    }
    least_squares_generic(design, target, rel_tol)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn least_squares_avx2(design: Design, target: &[f64], rel_tol: f64) -> LeastSquaresFit {
    least_squares_generic(design, target, rel_tol)
}

#[inline(always)]
fn least_squares_generic(mut design: Design, target: &[f64], rel_tol: f64) -> LeastSquaresFit {
    let m = design.rows;
    let n = design.cols;
    assert_eq!(target.len(), m, "target length must equal row count");

    let mut scale = vec![1.0; n];
    for (j, s) in scale.iter_mut().enumerate() {
        let norm = dot(design.column(j), design.column(j)).sqrt();
        if norm > 0.0 && norm.is_finite() {
            *s = norm;
            for v in design.column_mut(j) {
                *v /= norm;
            }
        }
    }

    let mut y = target.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut norms: Vec<f64> = (0..n)
        .map(|j| dot(design.column(j), design.column(j)).sqrt())
        .collect();
    let mut reference = norms.clone();
    let downdate_tol = f64::EPSILON.sqrt();

    let steps = m.min(n);
    let mut diag = Vec::with_capacity(steps);
    let mut v = vec![0.0; m];
    let mut lead = 0.0f64;

    for k in 0..steps {
        let (p, best) = norms[k..]
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(off, &val)| (k + off, val))
            .unwrap();
        if k == 0 {
            lead = best;
        }
        if !(best > rel_tol * lead) || best == 0.0 {
            break;
        }
        if p != k {
            design.swap_columns(p, k);
            perm.swap(p, k);
            norms.swap(p, k);
            reference.swap(p, k);
        }

        // Householder reflector for column k, rows k..m.
        let len = m - k;
        let col = &design.column(k)[k..];
        let x_norm = dot(col, col).sqrt();
        let alpha = if col[0] >= 0.0 { -x_norm } else { x_norm };
        v[..len].copy_from_slice(col);
        v[0] -= alpha;
        let vtv = dot(&v[..len], &v[..len]);
        diag.push(alpha);
        {
            let ck = design.column_mut(k);
            ck[k] = alpha;
            ck[k + 1..].fill(0.0);
        }
        if vtv > 0.0 {
            let beta = 2.0 / vtv;
            let v = &v[..len];
            for j in k + 1..n {
                let cj = &mut design.column_mut(j)[k..];
                let s = beta * dot(v, cj);
                axpy(s, v, cj);
            }
            let s = beta * dot(v, &y[k..]);
            axpy(s, v, &mut y[k..]);
        }

        // Downdate partial column norms, recomputing when cancellation bites.
        for j in k + 1..n {
            if norms[j] == 0.0 {
                continue;
            }
            let r = design.get(k, j) / norms[j];
            let t = (1.0 - r * r).max(0.0);
            let ratio = norms[j] / reference[j];
            if t * ratio * ratio <= downdate_tol {
                let tail = &design.column(j)[k + 1..];
                norms[j] = dot(tail, tail).sqrt();
                reference[j] = norms[j];
            } else {
                norms[j] *= t.sqrt();
            }
        }
    }

    let rank = diag.len();
    let mut z = vec![0.0; rank];
    for i in (0..rank).rev() {
        let mut s = y[i];
        for (j, zj) in z.iter().enumerate().skip(i + 1) {
            s -= design.get(i, j) * zj;
        }
        z[i] = s / diag[i];
    }

    let mut coefficients = vec![0.0; n];
    for (k, &zk) in z.iter().enumerate() {
        let col = perm[k];
        coefficients[col] = zk / scale[col];
    }
    let pivot_ratio = match (diag.first(), diag.last()) {
        (Some(first), Some(last)) => (last / first).abs(),
        _ => 0.0,
    };
    LeastSquaresFit {
        coefficients,
        rank,
        pivot_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_square_system() {
        // [2 1; 1 3] beta = [5; 10] -> beta = (1, 3)
        let design = Design::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]], 2);
        let fit = least_squares(design, &[5.0, 10.0], 1e-10);
        assert_eq!(fit.rank, 2);
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((fit.coefficients[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn overdetermined_line_fit() {
        // y = 1 + 2x sampled without noise.
        let xs = [-2.0, -1.0, 0.5, 3.0, 4.0];
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![1.0, x]).collect();
        let y: Vec<f64> = xs.iter().map(|&x| 1.0 + 2.0 * x).collect();
        let fit = least_squares(Design::from_rows(&rows, 2), &y, 1e-10);
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn least_squares_residual_is_orthogonal() {
        let rows = vec![
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 2.0],
            vec![1.0, 3.0],
        ];
        let y = [0.0, 2.0, 1.0, 4.0];
        let fit = least_squares(Design::from_rows(&rows, 2), &y, 1e-10);
        // Normal equations: X^T (y - X b) = 0.
        for j in 0..2 {
            let g: f64 = rows
                .iter()
                .zip(&y)
                .map(|(r, yi)| r[j] * (yi - r[0] * fit.coefficients[0] - r[1] * fit.coefficients[1]))
                .sum();
            assert!(g.abs() < 1e-12, "gradient component {g}");
        }
    }

    #[test]
    fn duplicated_column_gets_zero_coefficient() {
        let rows = vec![
            vec![1.0, 2.0, 2.0],
            vec![1.0, -1.0, -1.0],
            vec![1.0, 4.0, 4.0],
            vec![1.0, 0.5, 0.5],
        ];
        let y: Vec<f64> = rows.iter().map(|r| 3.0 + r[1]).collect();
        let fit = least_squares(Design::from_rows(&rows, 3), &y, 1e-10);
        assert_eq!(fit.rank, 2);
        let zeros = fit.coefficients.iter().filter(|c| **c == 0.0).count();
        assert_eq!(zeros, 1);
        assert!((fit.coefficients[1] + fit.coefficients[2] - 1.0).abs() < 1e-10);
        assert!((fit.coefficients[0] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn zero_column_is_ignored() {
        let rows = vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![3.0, 0.0]];
        let fit = least_squares(Design::from_rows(&rows, 2), &[2.0, 4.0, 6.0], 1e-10);
        assert_eq!(fit.rank, 1);
        assert_eq!(fit.coefficients[1], 0.0);
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
    }
}
