//! Dense complex matrices and the handful of matrix functions the dynamics and
//! entropy code needs.
//!
//! Everything here targets small matrices (2×2 in practice, up to ~8×8 for
//! bipartite examples), so storage is a flat row-major `Vec` and the
//! algorithms favour accuracy over asymptotic speed.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance, relative to the largest entry magnitude (floored at 1).
pub const EPS_HERM: f64 = 1e-10;
/// Spectral floor: eigenvalues at or below this (relative to the spectral
/// radius, floored at 1) are treated as zero.
pub const EPS_EIG: f64 = 1e-12;
/// Exceptional-point band on the discriminant δ.
pub const EPS_EP: f64 = 1e-9;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting non-square or
    /// non-finite input.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        if data.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let m = ComplexMatrix { dim, data };
        m.ensure_finite()?;
        Ok(m)
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Result<Self> {
        Self::new(N, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        Self::new(N, rows.iter().flatten().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub(crate) fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[C64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { ZERO })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::invalid("matrix has non-finite entries"))
        }
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        Self::from_fn(cols.len(), |i, j| cols[j][i])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry of `|A - A†|`, divided by `max(1, max|A_ij|)`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst / self.max_abs().max(1.0)
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let residual = self.hermiticity_residual();
        if residual <= EPS_HERM {
            Ok(())
        } else {
            Err(Error::NotHermitian { residual })
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (m, n) = (self.dim, other.dim);
        Self::from_fn(m * n, |i, j| self[(i / n, j / n)] * other[(i % n, j % n)])
    }

    /// Traces out the first factor of a `dim_a·dim_b` bipartite operator.
    pub fn partial_trace_first(&self, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != self.dim {
            return Err(Error::invalid(format!(
                "subsystem dims {dim_a}x{dim_b} incompatible with dimension {}",
                self.dim
            )));
        }
        Ok(Self::from_fn(dim_b, |i, j| {
            (0..dim_a).map(|a| self[(a * dim_b + i, a * dim_b + j)]).sum()
        }))
    }

    fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { dim: n, data: out }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

/// Euclidean inner product `⟨u|v⟩`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Matrix exponential by truncated Taylor series with scaling and squaring.
///
/// The scalar part `tr(A)/n` is split off first and applied as a plain
/// complex exponential; the traceless remainder is scaled so that
/// `‖A/2^s‖₁ ≤ 0.5`, summed until a term's norm drops below 1e-18, then
/// squared `s` times.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.ensure_finite()?;
    let n = a.dim();
    let shift = a.trace() / n as f64;
    let traceless = ComplexMatrix::from_fn(n, |i, j| if i == j { a[(i, j)] - shift } else { a[(i, j)] });

    let norm = traceless.norm_one();
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scaled = traceless.scale_real(0.5f64.powi(squarings as i32));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=200u32 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.norm_one() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    let out = sum.scale(shift.exp());
    out.ensure_finite()
        .map_err(|_| Error::NumericDegradation("matrix exponential overflowed".into()))?;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let d = ComplexMatrix::diag_real(&self.eigenvalues);
        &(v * &d) * &v.adjoint()
    }

    /// `V diag(f(w)) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let fw: Vec<f64> = self.eigenvalues.iter().map(|&w| f(w)).collect();
        let n = v.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fw[k] * v[(j, k)].conj()).sum()
        })
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    h.ensure_finite()?;
    h.ensure_hermitian()?;
    let n = h.dim();
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5).data;
    let mut v = ComplexMatrix::identity(n).data;
    let scale = h.norm_fro().max(f64::MIN_POSITIVE);

    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let tau = (a[q * n + q].re - a[p * n + p].re) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, e^{-iβ}) · [[c, s], [-s, c]] acting on (p, q).
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                // A ← A J
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * jpp + akq * jqp;
                    a[k * n + q] = akp * jpq + akq * jqq;
                }
                // A ← J† A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                // V ← V J
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * jpp + vkq * jqp;
                    v[k * n + q] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].re.total_cmp(&a[y * n + y].re));
    let eigenvalues = order.iter().map(|&k| a[k * n + k].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[i * n + order[j]]);
    Ok(HermitianEigenSystem { eigenvalues, eigenvectors })
}

#[derive(Debug, Clone)]
pub struct GeneralEigenSystem {
    pub eigenvalues: Vec<C64>,
    /// Right eigenvectors as unit-norm columns.
    pub eigenvectors: ComplexMatrix,
    /// Set when eigenvalues coalesce and the eigenvector basis is incomplete.
    pub defective: bool,
}

/// Closed-form eigenpairs of a 2×2 complex matrix.
///
/// When the discriminant lies inside the exceptional-point band and the
/// matrix is not scalar, the single eigenvector is returned twice and
/// `defective` is set.
pub fn general_eig_2x2(m: &ComplexMatrix) -> Result<GeneralEigenSystem> {
    if m.dim() != 2 {
        return Err(Error::invalid(format!("expected a 2x2 matrix, got {0}x{0}", m.dim())));
    }
    m.ensure_finite()?;
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = half_diff * half_diff + b * c;

    let scalar_like = half_diff.norm() <= EPS_EP && b.norm() <= EPS_EP && c.norm() <= EPS_EP;
    if scalar_like {
        return Ok(GeneralEigenSystem {
            eigenvalues: vec![a, d],
            eigenvectors: ComplexMatrix::identity(2),
            defective: false,
        });
    }

    if disc.norm() <= EPS_EP {
        let lambda = half_tr;
        let v = kernel_vector_2x2(a - lambda, b, c, d - lambda);
        return Ok(GeneralEigenSystem {
            eigenvalues: vec![lambda, lambda],
            eigenvectors: ComplexMatrix::from_columns(&[v.clone(), v]),
            defective: true,
        });
    }

    let root = disc.sqrt();
    let values = [half_tr + root, half_tr - root];
    let cols: Vec<Vec<C64>> =
        values.iter().map(|&l| kernel_vector_2x2(a - l, b, c, d - l)).collect();
    Ok(GeneralEigenSystem {
        eigenvalues: values.to_vec(),
        eigenvectors: ComplexMatrix::from_columns(&cols),
        defective: false,
    })
}

/// Unit vector spanning the kernel of `[[a, b], [c, d]]`, taken from the
/// larger-magnitude row (first row on ties).
fn kernel_vector_2x2(a: C64, b: C64, c: C64, d: C64) -> Vec<C64> {
    let row0 = a.norm_sqr() + b.norm_sqr();
    let row1 = c.norm_sqr() + d.norm_sqr();
    let v = if row0 >= row1 {
        if row0 == 0.0 {
            vec![ONE, ZERO]
        } else {
            vec![-b, a]
        }
    } else {
        vec![d, -c]
    };
    let n = vec_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Eigenpairs of a general square matrix. Uses the closed form for 2×2 and a
/// complex Schur decomposition with triangular back-substitution otherwise.
pub fn general_eig(m: &ComplexMatrix) -> Result<GeneralEigenSystem> {
    if m.dim() == 2 {
        return general_eig_2x2(m);
    }
    m.ensure_finite()?;
    let n = m.dim();
    if n == 1 {
        return Ok(GeneralEigenSystem {
            eigenvalues: vec![m[(0, 0)]],
            eigenvectors: ComplexMatrix::identity(1),
            defective: false,
        });
    }
    let schur = Schur::try_new(m.to_nalgebra(), 1e-15, 10_000)
        .ok_or_else(|| Error::NumericDegradation("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let scale = m.max_abs().max(1.0);
    let mut defective = false;
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut x = vec![ZERO; n];
        x[k] = ONE;
        for j in (0..k).rev() {
            let s: C64 = ((j + 1)..=k).map(|l| t[(j, l)] * x[l]).sum();
            let denom = t[(j, j)] - lambda;
            if denom.norm() <= EPS_EP * scale {
                defective = true;
                x[j] = ZERO;
            } else {
                x[j] = -s / denom;
            }
        }
        let v: Vec<C64> = (0..n).map(|i| (0..n).map(|l| q[(i, l)] * x[l]).sum()).collect();
        let norm = vec_norm(&v);
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    Ok(GeneralEigenSystem {
        eigenvalues: (0..n).map(|k| t[(k, k)]).collect(),
        eigenvectors: ComplexMatrix::from_columns(&cols),
        defective,
    })
}

/// Solves `A x = b` by LU with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if b.len() != a.dim() {
        return Err(Error::invalid("right-hand side length does not match matrix"));
    }
    let lu = a.to_nalgebra().lu();
    let rhs = nalgebra::DVector::from_column_slice(b);
    lu.solve(&rhs)
        .map(|x| x.iter().copied().collect())
        .ok_or_else(|| Error::NumericDegradation("singular linear system".into()))
}

/// Largest eigenvalue magnitude, floored at 1, times [`EPS_EIG`].
pub(crate) fn spectral_floor(eigenvalues: &[f64]) -> f64 {
    EPS_EIG * eigenvalues.iter().fold(1.0f64, |m, w| m.max(w.abs()))
}

/// Eigen-decomposition of a Hermitian PSD matrix, with eigenvalues inside the
/// spectral floor snapped to zero.
pub fn psd_eig(omega: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    let mut sys = herm_eig(omega)?;
    let floor = spectral_floor(&sys.eigenvalues);
    for w in sys.eigenvalues.iter_mut() {
        if *w < -floor {
            return Err(Error::NotPsd { min_eigenvalue: *w });
        }
        if w.abs() <= floor {
            *w = 0.0;
        }
    }
    Ok(sys)
}

/// `f(Ω)` for Hermitian PSD `Ω`, restricted to the support of `Ω`:
/// eigenvalues inside the spectral floor map to 0 regardless of `f`, so
/// `Tr(ρ·ln Ω)` on a singular `Ω` follows the `0·ln 0 = 0` convention.
pub fn mat_fn_psd(omega: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let sys = psd_eig(omega)?;
    Ok(sys.apply(|w| if w == 0.0 { 0.0 } else { f(w) }))
}

/// `|H| = √(H†H)` for Hermitian `H`.
pub fn mat_abs(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(herm_eig(h)?.apply(f64::abs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).norm_fro() <= tol
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let e = expm(&ComplexMatrix::zeros(2)).unwrap();
        assert!(close(&e, &ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn expm_of_diagonal() {
        let e = expm(&ComplexMatrix::diag_real(&[1.0, -1.0])).unwrap();
        let want = ComplexMatrix::diag_real(&[std::f64::consts::E, (-1.0f64).exp()]);
        assert!(close(&e, &want, 1e-14), "{e:?}");
    }

    #[test]
    fn expm_nilpotent_is_exact() {
        let n = ComplexMatrix::from_rows([[ZERO, c(2.0, 1.0)], [ZERO, ZERO]]).unwrap();
        let e = expm(&n).unwrap();
        let want = ComplexMatrix::from_rows([[ONE, c(2.0, 1.0)], [ZERO, ONE]]).unwrap();
        assert!(close(&e, &want, 1e-14));
    }

    #[test]
    fn expm_rejects_nan() {
        let bad = ComplexMatrix { dim: 1, data: vec![c(f64::NAN, 0.0)] };
        assert!(matches!(expm(&bad), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn construction_validates() {
        assert!(ComplexMatrix::new(0, vec![]).is_err());
        assert!(ComplexMatrix::new(2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::new(1, vec![c(f64::INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn herm_eig_identity_and_sigma_x() {
        let e = herm_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let sx = ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let e = herm_eig(&sx).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert!(close(&e.reconstruct(), &sx, 1e-15));
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn herm_eig_complex_offdiagonal() {
        let m = ComplexMatrix::from_rows([[c(1.0, 0.0), c(0.0, -2.0)], [c(0.0, 2.0), c(-3.0, 0.0)]])
            .unwrap();
        let e = herm_eig(&m).unwrap();
        // eigenvalues of [[1, -2i], [2i, -3]]: -1 ± 2√2
        let r = 2.0 * 2f64.sqrt();
        assert!((e.eigenvalues[0] - (-1.0 - r)).abs() < 1e-14);
        assert!((e.eigenvalues[1] - (-1.0 + r)).abs() < 1e-14);
        assert!(close(&e.reconstruct(), &m, 1e-14));
    }

    #[test]
    fn eig_2x2_scalar_matrix() {
        let e = general_eig_2x2(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![ONE, ONE]);
        assert!(!e.defective);
    }

    #[test]
    fn eig_2x2_defective_jordan_block() {
        let j = ComplexMatrix::from_rows([[c(2.0, 0.0), ONE], [ZERO, c(2.0, 0.0)]]).unwrap();
        let e = general_eig_2x2(&j).unwrap();
        assert!(e.defective);
        assert_eq!(e.eigenvalues[0], c(2.0, 0.0));
        let v = e.eigenvectors.column(0);
        assert!((v[0].norm() - 1.0).abs() < 1e-15 && v[1].norm() < 1e-15);
        assert_eq!(e.eigenvectors.column(0), e.eigenvectors.column(1));
    }

    #[test]
    fn eig_2x2_rejects_wrong_dim() {
        assert!(general_eig_2x2(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn eig_general_3x3_residual() {
        let m = ComplexMatrix::from_rows([
            [c(1.0, 0.5), c(2.0, 0.0), c(0.0, 1.0)],
            [c(0.0, -1.0), c(-1.0, 0.2), c(0.3, 0.0)],
            [c(0.5, 0.5), ZERO, c(2.0, -0.7)],
        ])
        .unwrap();
        let e = general_eig(&m).unwrap();
        assert!(!e.defective);
        for k in 0..3 {
            let v = e.eigenvectors.column(k);
            let av = m.mul_vec(&v);
            let res: f64 = av.iter().zip(&v).map(|(a, b)| (a - e.eigenvalues[k] * b).norm_sqr()).sum();
            assert!(res.sqrt() < 1e-12, "pair {k} residual {}", res.sqrt());
            assert!((vec_norm(&v) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn mat_fn_psd_examples() {
        let e = std::f64::consts::E;
        let l = mat_fn_psd(&ComplexMatrix::diag_real(&[e, e]), f64::ln).unwrap();
        assert!(close(&l, &ComplexMatrix::identity(2), 1e-14));
        let sq = mat_fn_psd(&ComplexMatrix::diag_real(&[2.0, 3.0]), |x| x.powf(2.0)).unwrap();
        assert!(close(&sq, &ComplexMatrix::diag_real(&[4.0, 9.0]), 1e-13));
    }

    #[test]
    fn mat_fn_psd_log_of_projector_is_finite() {
        let proj = ComplexMatrix::outer(&[c(0.6, 0.0), c(0.0, 0.8)]);
        let l = mat_fn_psd(&proj, f64::ln).unwrap();
        l.ensure_finite().unwrap();
        // Tr(P ln P) = 1·ln 1 + 0·ln 0 = 0
        assert!((&proj * &l).trace().norm() < 1e-14);
    }

    #[test]
    fn mat_fn_psd_rejects_negative() {
        let m = ComplexMatrix::diag_real(&[1.0, -0.1]);
        assert!(matches!(mat_fn_psd(&m, f64::ln), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn mat_abs_examples() {
        let a = mat_abs(&ComplexMatrix::diag_real(&[1.0, -1.0])).unwrap();
        assert!(close(&a, &ComplexMatrix::identity(2), 1e-15));
        let z = mat_abs(&ComplexMatrix::zeros(2)).unwrap();
        assert!(z.norm_fro() == 0.0);
        let diff = &ComplexMatrix::outer(&[ONE, ZERO]) - &ComplexMatrix::outer(&[ZERO, ONE]);
        assert!((mat_abs(&diff).unwrap().trace().re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_and_kron() {
        let a = ComplexMatrix::diag_real(&[0.25, 0.75]);
        let b = ComplexMatrix::from_rows([[c(0.5, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.5, 0.0)]])
            .unwrap();
        let ab = a.kron(&b);
        assert!(close(&ab.partial_trace_first(2, 2).unwrap(), &b, 1e-15));
        assert!(ab.partial_trace_first(3, 2).is_err());
    }

    #[test]
    fn solve_small_system() {
        let a = ComplexMatrix::from_rows([[c(2.0, 0.0), c(0.0, 1.0)], [ONE, c(3.0, 0.0)]]).unwrap();
        let x = solve(&a, &[ONE, c(0.0, 2.0)]).unwrap();
        let back = a.mul_vec(&x);
        assert!((back[0] - ONE).norm() < 1e-14 && (back[1] - c(0.0, 2.0)).norm() < 1e-14);
    }
}
