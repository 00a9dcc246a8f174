//! Dense complex linear algebra backbone.
//!
//! Everything downstream runs on [`ComplexMatrix`]: Hermitian
//! eigendecomposition (cyclic Jacobi rotations), matrix functions of
//! Hermitian operators by spectral calculus, and tensor products.
//!
//! The eigensolver trades speed for robustness and determinism: it is a
//! plain cyclic Jacobi iteration with a fixed sweep order, so two calls on
//! the same matrix produce bitwise-identical output. Accuracy targets
//! desk-scale exact diagonalization (dimensions up to a few thousand).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on matrix dimensions produced by [`kron`].
pub const DEFAULT_DIM_CAP: usize = 16384;

/// Relative tolerance used to accept a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius mass below this fraction of the total Frobenius
/// norm counts as converged.
const JACOBI_OFF_TOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues closer than `1e-9 * (1 + |lambda|)` are treated as one
/// degenerate cluster when fixing the eigenvector basis.
const CLUSTER_REL_TOL: f64 = 1e-9;

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diag_real(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Max-norm `max_ij |A_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sub");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= factor;
        }
        out
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let arow = &self.data[i * n..(i + 1) * n];
            let orow = &mut out.data[i * n..(i + 1) * n];
            for (k, &aik) in arow.iter().enumerate() {
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, &bkj) in orow.iter_mut().zip(brow) {
                    *o += aik * bkj;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in mul_vec");
        let n = self.dim;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a * x)
                    .sum()
            })
            .collect()
    }

    /// Max-norm distance `max_ij |A_ij - B_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from Hermiticity, `max_ij |A_ij - conj(A_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        dev
    }

    /// Exactly Hermitian part `(A + A^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| {
            (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5
        })
    }

    fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim + j]).collect()
    }
}

/// Result of a Hermitian eigendecomposition: `H = V diag(w) V^dag`.
///
/// Eigenvalues ascend; column `k` of `eigenvectors` pairs with
/// `eigenvalues[k]`. Within degenerate clusters the basis is fixed by
/// Gram-Schmidt of the standard basis projections in input column order,
/// and every column's phase is fixed so that its largest-magnitude entry
/// is real positive.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    /// Reconstruct `V f(w) V^dag` for a real-valued spectral function.
    pub fn apply_real(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.apply(|w| Complex64::new(f(w), 0.0))
    }

    /// Reconstruct `V f(w) V^dag` for a complex-valued spectral function.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let v = &self.eigenvectors;
        // W = V * diag(f), then W * V^dag.
        let mut w = v.clone();
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            for i in 0..n {
                let x = w.get(i, k) * fk;
                w.set(i, k, x);
            }
        }
        w.matmul(&v.adjoint())
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Fails if the input contains non-finite entries or deviates from
/// Hermiticity by more than `1e-10 * (1 + max|H|)`.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::invalid("matrix", "dimension must be positive"));
    }
    if !h.is_finite() {
        return Err(Error::invalid("matrix", "non-finite entries"));
    }
    let tol = HERMITICITY_TOL * (1.0 + h.max_abs());
    let dev = h.hermiticity_deviation();
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: tol,
        });
    }

    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let fro = a.frobenius_norm();
    if fro > 0.0 && n > 1 {
        let target = JACOBI_OFF_TOL * fro;
        let skip = target / (2.0 * n as f64);
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= target {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, &mut v, p, q, skip);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > target {
            return Err(Error::EigenStalled {
                sweeps: MAX_SWEEPS,
                off: off_diagonal_norm(&a),
            });
        }
    }

    // Pair up, sort ascending (stable on exact ties).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a.get(k, k).re).collect();
    let mut vectors: Vec<Vec<Complex64>> = order.iter().map(|&k| v.column(k)).collect();

    canonicalize_clusters(&eigenvalues, &mut vectors);
    for col in vectors.iter_mut() {
        fix_phase(col);
    }

    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (k, col) in vectors.iter().enumerate() {
        for i in 0..n {
            eigenvectors.set(i, k, col[i]);
        }
    }

    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn eigvalsh(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigh(h)?.eigenvalues)
}

/// `sqrt(2 * sum_{p<q} |a_pq|^2)`, the full off-diagonal Frobenius mass.
fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            sum += a.get(p, q).norm_sqr();
        }
    }
    (2.0 * sum).sqrt()
}

/// One Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, skip: f64) {
    let n = a.dim();
    let apq = a.get(p, q);
    let r = apq.norm();
    if r <= skip {
        return;
    }
    // Write a_pq = r e^{i phi}; the unitary
    //   J = [[c, -s e^{i phi}], [s e^{-i phi}, c]]
    // on the (p, q) plane zeroes the off-diagonal entry when
    // tan(2 theta) = 2 r / (a_pp - a_qq).
    let phase = apq / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (app - aqq) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sp = phase * s; // s e^{i phi}
    let spc = phase.conj() * s; // s e^{-i phi}

    // Rows p and q: A <- J^dag A.
    {
        let (rp, rq) = two_rows_mut(&mut a.data, n, p, q);
        for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
            let xp = *x;
            let xq = *y;
            *x = c * xp + sp * xq;
            *y = -spc * xp + c * xq;
        }
    }
    // Columns p and q: A <- A J.
    for row in a.data.chunks_exact_mut(n) {
        let xp = row[p];
        let xq = row[q];
        row[p] = c * xp + spc * xq;
        row[q] = -sp * xp + c * xq;
    }
    // Clean the rotated pair: the (p, q) entry is zero by construction and
    // the diagonal stays real.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    let dpp = a.get(p, p).re;
    let dqq = a.get(q, q).re;
    a.set(p, p, Complex64::new(dpp, 0.0));
    a.set(q, q, Complex64::new(dqq, 0.0));

    // V <- V J.
    for row in v.data.chunks_exact_mut(n) {
        let xp = row[p];
        let xq = row[q];
        row[p] = c * xp + spc * xq;
        row[q] = -sp * xp + c * xq;
    }
}

fn two_rows_mut(
    data: &mut [Complex64],
    n: usize,
    p: usize,
    q: usize,
) -> (&mut [Complex64], &mut [Complex64]) {
    debug_assert!(p < q);
    let (head, tail) = data.split_at_mut(q * n);
    (&mut head[p * n..p * n + n], &mut tail[..n])
}

/// Fix the basis inside each degenerate cluster by Gram-Schmidt of the
/// standard basis projections, taken in input column order.
fn canonicalize_clusters(eigenvalues: &[f64], vectors: &mut [Vec<Complex64>]) {
    let n = eigenvalues.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n {
            let gap = eigenvalues[end] - eigenvalues[end - 1];
            let scale = 1.0 + eigenvalues[end].abs().max(eigenvalues[end - 1].abs());
            if gap <= CLUSTER_REL_TOL * scale {
                end += 1;
            } else {
                break;
            }
        }
        let m = end - start;
        if m >= 2 {
            if let Some(basis) = cluster_basis(&vectors[start..end]) {
                for (k, b) in basis.into_iter().enumerate() {
                    vectors[start + k] = b;
                }
            }
        }
        start = end;
    }
}

/// Deterministic orthonormal basis of the span of `cols`: project the
/// standard basis vectors onto the span in index order and Gram-Schmidt the
/// projections. Returns `None` if the procedure fails to produce a full
/// basis (then the raw Jacobi columns are kept).
fn cluster_basis(cols: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let n = cols[0].len();
    let m = cols.len();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for j in 0..n {
        if basis.len() == m {
            break;
        }
        // Projection of e_j onto span(cols): sum_k <v_k, e_j> v_k.
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for col in cols {
            let coef = col[j].conj();
            for (wi, &ci) in w.iter_mut().zip(col) {
                *wi += coef * ci;
            }
        }
        for b in &basis {
            let coef: Complex64 = b.iter().zip(&w).map(|(&bi, &wi)| bi.conj() * wi).sum();
            for (wi, &bi) in w.iter_mut().zip(b) {
                *wi -= coef * bi;
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for wi in w.iter_mut() {
                *wi /= norm;
            }
            basis.push(w);
        }
    }
    (basis.len() == m).then_some(basis)
}

/// Make the largest-magnitude entry real positive (first index on ties).
fn fix_phase(col: &mut [Complex64]) {
    let mut imax = 0;
    let mut best = 0.0;
    for (i, z) in col.iter().enumerate() {
        let a = z.norm();
        if a > best {
            best = a;
            imax = i;
        }
    }
    if best > 0.0 {
        let rot = col[imax].conj() / best;
        for z in col.iter_mut() {
            *z *= rot;
        }
    }
}

/// `(cos H, sin H)` of a Hermitian matrix by spectral calculus.
///
/// Both results are exactly Hermitian and satisfy `cos^2 + sin^2 = I` up
/// to the eigensolver's accuracy.
pub fn matrix_cos_sin(h: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let es = eigh(h)?;
    let c = es.apply_real(f64::cos).hermitian_part();
    let s = es.apply_real(f64::sin).hermitian_part();
    Ok((c, s))
}

/// `exp(i H)` of a Hermitian matrix by spectral calculus.
pub fn matrix_unitary_exp(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let es = eigh(h)?;
    Ok(es.apply(|w| Complex64::new(w.cos(), w.sin())))
}

/// Tensor product `A (x) B` with the default dimension cap.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_cap(a, b, DEFAULT_DIM_CAP)
}

/// Tensor product `A (x) B`, `(A (x) B)[i P + k, j P + l] = A_ij B_kl`
/// with `P = dim(B)`. Errors if the product dimension exceeds `cap`.
pub fn kron_with_cap(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let na = a.dim();
    let nb = b.dim();
    let dim = na
        .checked_mul(nb)
        .ok_or(Error::DimensionOverflow { dim: usize::MAX, cap })?;
    if dim > cap {
        return Err(Error::DimensionOverflow { dim, cap });
    }
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..na {
        for j in 0..na {
            let aij = a.get(i, j);
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out.set(i * nb + k, j * nb + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = ComplexMatrix::zeros(n);
        for i in 0..n {
            h.set(i, i, c(rng.gen_range(-1.0..1.0), 0.0));
            for j in i + 1..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                h.set(i, j, z);
                h.set(j, i, z.conj());
            }
        }
        h
    }

    #[test]
    fn sigma_z_eigenvalues() {
        let h = ComplexMatrix::diag_real(&[1.0, -1.0]);
        let es = eigh(&h).unwrap();
        assert_eq!(es.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn sigma_x_eigen_pairs() {
        let mut h = ComplexMatrix::zeros(2);
        h.set(0, 1, c(1.0, 0.0));
        h.set(1, 0, c(1.0, 0.0));
        let es = eigh(&h).unwrap();
        assert!((es.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((es.eigenvalues[1] - 1.0).abs() < 1e-14);
        let s = 1.0 / 2.0f64.sqrt();
        // Phase convention: largest-magnitude entry real positive.
        assert!((es.eigenvectors.get(0, 0) - c(s, 0.0)).norm() < 1e-12);
        assert!((es.eigenvectors.get(1, 0) - c(-s, 0.0)).norm() < 1e-12);
        assert!((es.eigenvectors.get(0, 1) - c(s, 0.0)).norm() < 1e-12);
        assert!((es.eigenvectors.get(1, 1) - c(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let h = random_hermitian(8, 7);
        let es = eigh(&h).unwrap();
        let rebuilt = es.apply_real(|w| w);
        assert!(rebuilt.max_abs_diff(&h) <= 1e-10 * (1.0 + h.max_abs()));
        let v = &es.eigenvectors;
        let gram = v.adjoint().matmul(v);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(8)) <= 1e-10);
        for w in es.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn eigh_is_bitwise_deterministic() {
        let h = random_hermitian(6, 3);
        let a = eigh(&h).unwrap();
        let b = eigh(&h).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        for i in 0..6 {
            for j in 0..6 {
                let (x, y) = (a.eigenvectors.get(i, j), b.eigenvectors.get(i, j));
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }

    #[test]
    fn degenerate_cluster_basis_is_canonical() {
        // Identity block: the canonical basis inside the degenerate cluster
        // is the standard basis itself.
        let h = ComplexMatrix::diag_real(&[1.0, 1.0, 2.0]);
        let es = eigh(&h).unwrap();
        assert!(es
            .eigenvectors
            .max_abs_diff(&ComplexMatrix::identity(3))
            < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = ComplexMatrix::zeros(2);
        h.set(0, 1, c(1.0, 0.0));
        h.set(1, 0, c(0.5, 0.0));
        assert!(matches!(eigh(&h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn similarity_preserves_spectrum() {
        let h = random_hermitian(6, 11);
        let k = random_hermitian(6, 12);
        let u = matrix_unitary_exp(&k).unwrap();
        let conj = u.adjoint().matmul(&h).matmul(&u);
        let a = eigvalsh(&h).unwrap();
        let b = eigvalsh(&conj).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn cos_sin_of_zero() {
        let h = ComplexMatrix::zeros(3);
        let (cm, sm) = matrix_cos_sin(&h).unwrap();
        assert!(cm.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
        assert!(sm.max_abs() < 1e-14);
    }

    #[test]
    fn cos_sin_of_half_pi_sigma_x() {
        let mut sx = ComplexMatrix::zeros(2);
        sx.set(0, 1, c(1.0, 0.0));
        sx.set(1, 0, c(1.0, 0.0));
        let h = sx.scale_re(std::f64::consts::FRAC_PI_2);
        let (cm, sm) = matrix_cos_sin(&h).unwrap();
        assert!(cm.max_abs() < 1e-12);
        assert!(sm.max_abs_diff(&sx) < 1e-12);
    }

    #[test]
    fn cos_sin_pythagorean() {
        let h = random_hermitian(7, 21);
        let (cm, sm) = matrix_cos_sin(&h).unwrap();
        let sum = cm.matmul(&cm).add(&sm.matmul(&sm));
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(7)) < 1e-10);
        assert!(cm.hermiticity_deviation() == 0.0);
        assert!(sm.hermiticity_deviation() == 0.0);
    }

    #[test]
    fn unitary_exp_inverse_and_unit_circle() {
        let h = random_hermitian(5, 5).scale_re(0.3);
        let u = matrix_unitary_exp(&h).unwrap();
        let uinv = matrix_unitary_exp(&h.scale_re(-1.0)).unwrap();
        assert!(u.matmul(&uinv).max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
        assert!(u.matmul(&u.adjoint()).max_abs_diff(&ComplexMatrix::identity(5)) < 1e-10);
        assert!(
            matrix_unitary_exp(&ComplexMatrix::zeros(4))
                .unwrap()
                .max_abs_diff(&ComplexMatrix::identity(4))
                < 1e-14
        );
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        let i3 = ComplexMatrix::identity(3);
        assert!(kron(&i2, &i3).unwrap().max_abs_diff(&ComplexMatrix::identity(6)) == 0.0);

        let sz = ComplexMatrix::diag_real(&[1.0, -1.0]);
        let d = ComplexMatrix::diag_real(&[0.0, 1.0, 2.0]);
        let k = kron(&sz, &d).unwrap();
        let expect = ComplexMatrix::diag_real(&[0.0, 1.0, 2.0, 0.0, -1.0, -2.0]);
        assert!(k.max_abs_diff(&expect) == 0.0);
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut rand_mat = |n: usize| {
            ComplexMatrix::from_fn(n, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
        };
        let a = rand_mat(2);
        let c2 = rand_mat(2);
        let b = rand_mat(3);
        let d = rand_mat(3);
        let lhs = kron(&a, &b).unwrap().matmul(&kron(&c2, &d).unwrap());
        let rhs = kron(&a.matmul(&c2), &b.matmul(&d)).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn kron_overflow_rejected() {
        let a = ComplexMatrix::identity(200);
        let b = ComplexMatrix::identity(100);
        assert!(matches!(
            kron(&a, &b),
            Err(Error::DimensionOverflow { dim: 20000, cap: DEFAULT_DIM_CAP })
        ));
    }
}
