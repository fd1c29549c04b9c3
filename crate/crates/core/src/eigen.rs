use crate::error::{Error, Result};
use crate::rational::RationalMatrix;

/// Dense square matrix of f64 values, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl FloatMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
    }

    /// Weighted sum of equally sized matrices.
    pub fn linear_combination(terms: &[(f64, &FloatMatrix)]) -> Result<Self> {
        let dim = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty combination".to_string()))?
            .1
            .dim;
        let mut out = Self::zeros(dim);
        for (weight, mat) in terms {
            if mat.dim != dim {
                return Err(Error::InvalidArgument(format!(
                    "dimension mismatch in combination: {} vs {dim}",
                    mat.dim
                )));
            }
            for (o, v) in out.data.iter_mut().zip(mat.data.iter()) {
                *o += weight * v;
            }
        }
        Ok(out)
    }

    pub fn quad_form(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.dim, "quadratic form dimension mismatch");
        let mut sum = 0.0;
        for i in 0..self.dim {
            let mut row = 0.0;
            for j in 0..self.dim {
                row += self.get(i, j) * v[j];
            }
            sum += v[i] * row;
        }
        sum
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_frobenius(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    sum += self.get(i, j) * self.get(i, j);
                }
            }
        }
        sum.sqrt()
    }
}

/// Nearest-f64 image of an exact matrix.
pub fn to_float(m: &RationalMatrix) -> Result<FloatMatrix> {
    let mut out = FloatMatrix::zeros(m.dim());
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            let v = m.get(i, j).to_f64();
            if !v.is_finite() {
                return Err(Error::Numerical(format!(
                    "entry ({i}, {j}) does not fit in an f64"
                )));
            }
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Approximate eigenpair of a symmetric definite pencil, normalized so
/// the leading coefficient is exactly 1.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_RELATIVE_TOLERANCE: f64 = 1e-14;

/// Smallest eigenpair of `A v = lambda M v` for symmetric `A` and
/// positive definite `M`.
///
/// `M = L L^T` by Cholesky, then cyclic Jacobi sweeps diagonalize
/// `L^{-1} A L^{-T}`; sweeps stop once the off-diagonal Frobenius norm
/// falls below 1e-14 of the initial Frobenius norm. Every step is
/// deterministic, so equal inputs give bit-identical output.
pub fn smallest_eigpair(a: &FloatMatrix, m: &FloatMatrix) -> Result<EigenPair> {
    let (value, mut v) = smallest_mode(a, m)?;
    let peak = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if v[0].abs() <= 1e-12 * peak {
        return Err(Error::Numerical(
            "eigenvector has a vanishing leading coefficient".to_string(),
        ));
    }
    let lead = v[0];
    for x in v.iter_mut() {
        *x /= lead;
    }
    v[0] = 1.0;
    Ok(EigenPair { value, vector: v })
}

/// Smallest eigenvalue of the pencil, without the leading-coefficient
/// normalization that certificate extraction needs.
pub fn smallest_eigenvalue(a: &FloatMatrix, m: &FloatMatrix) -> Result<f64> {
    Ok(smallest_mode(a, m)?.0)
}

fn smallest_mode(a: &FloatMatrix, m: &FloatMatrix) -> Result<(f64, Vec<f64>)> {
    let n = a.dim();
    if n == 0 || m.dim() != n {
        return Err(Error::InvalidArgument(format!(
            "pencil dimensions {} and {} are unusable",
            n,
            m.dim()
        )));
    }

    let l = cholesky(m)?;

    // B = L^{-1} A L^{-T}, assembled column by column and symmetrized
    // to shed the roundoff skew of the two triangular solves.
    let mut b = FloatMatrix::zeros(n);
    let mut col = vec![0.0; n];
    for j in 0..n {
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = a.get(i, j);
        }
        forward_solve(&l, &mut col);
        for i in 0..n {
            b.set(i, j, col[i]);
        }
    }
    for i in 0..n {
        for (j, slot) in col.iter_mut().enumerate() {
            *slot = b.get(i, j);
        }
        forward_solve(&l, &mut col);
        for j in 0..n {
            b.set(i, j, col[j]);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (b.get(i, j) + b.get(j, i));
            b.set(i, j, avg);
            b.set(j, i, avg);
        }
    }

    let scale = b.frobenius();
    let mut rotations = FloatMatrix::identity(n);
    if scale > 0.0 {
        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if b.off_diagonal_frobenius() <= JACOBI_RELATIVE_TOLERANCE * scale {
                converged = true;
                break;
            }
            jacobi_sweep(&mut b, &mut rotations);
        }
        if !converged && b.off_diagonal_frobenius() > JACOBI_RELATIVE_TOLERANCE * scale {
            return Err(Error::Numerical(
                "Jacobi iteration did not converge".to_string(),
            ));
        }
    }

    let mut best = 0;
    for i in 1..n {
        if b.get(i, i) < b.get(best, best) {
            best = i;
        }
    }
    let value = b.get(best, best);

    let mut v: Vec<f64> = (0..n).map(|i| rotations.get(i, best)).collect();
    backward_solve(&l, &mut v);

    Ok((value, v))
}

/// Lower Cholesky factor of a positive definite matrix.
fn cholesky(m: &FloatMatrix) -> Result<FloatMatrix> {
    let n = m.dim();
    let mut l = FloatMatrix::zeros(n);
    for j in 0..n {
        let mut d = m.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if !(d > 0.0) {
            return Err(Error::Numerical(
                "mass matrix is not positive definite".to_string(),
            ));
        }
        let root = d.sqrt();
        l.set(j, j, root);
        for i in (j + 1)..n {
            let mut v = m.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, v / root);
        }
    }
    Ok(l)
}

/// Solves `L x = rhs` in place for lower triangular `L`.
fn forward_solve(l: &FloatMatrix, rhs: &mut [f64]) {
    for i in 0..l.dim() {
        let mut v = rhs[i];
        for k in 0..i {
            v -= l.get(i, k) * rhs[k];
        }
        rhs[i] = v / l.get(i, i);
    }
}

/// Solves `L^T x = rhs` in place for lower triangular `L`.
fn backward_solve(l: &FloatMatrix, rhs: &mut [f64]) {
    for i in (0..l.dim()).rev() {
        let mut v = rhs[i];
        for k in (i + 1)..l.dim() {
            v -= l.get(k, i) * rhs[k];
        }
        rhs[i] = v / l.get(i, i);
    }
}

/// One cyclic sweep of Jacobi rotations over all upper index pairs.
fn jacobi_sweep(b: &mut FloatMatrix, rotations: &mut FloatMatrix) {
    let n = b.dim();
    for p in 0..n {
        for q in (p + 1)..n {
            let bpq = b.get(p, q);
            if bpq == 0.0 {
                continue;
            }
            let tau = (b.get(q, q) - b.get(p, p)) / (2.0 * bpq);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;

            let bpp = b.get(p, p);
            let bqq = b.get(q, q);
            b.set(p, p, bpp - t * bpq);
            b.set(q, q, bqq + t * bpq);
            b.set(p, q, 0.0);
            b.set(q, p, 0.0);
            for i in 0..n {
                if i == p || i == q {
                    continue;
                }
                let bip = b.get(i, p);
                let biq = b.get(i, q);
                b.set(i, p, c * bip - s * biq);
                b.set(p, i, c * bip - s * biq);
                b.set(i, q, s * bip + c * biq);
                b.set(q, i, s * bip + c * biq);
            }
            for i in 0..n {
                let vip = rotations.get(i, p);
                let viq = rotations.get(i, q);
                rotations.set(i, p, c * vip - s * viq);
                rotations.set(i, q, s * vip + c * viq);
            }
        }
    }
}
