//! Matrix functions on small Hermitian (complex) and symmetric (real) matrices.
//!
//! Everything here goes through a full eigendecomposition: the matrices are
//! `n_c × n_c` with `n_c` at most a few dozen, so exactness wins over
//! iterative schemes. The functions are generic over [`Field`], which is
//! implemented for `f64` (symmetric case) and `Complex64` (Hermitian case).

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Scalar field of the matrices handled by this module.
pub trait Field: ComplexField<RealField = f64> + Copy {}

impl Field for f64 {}
impl Field for Complex64 {}

/// Absolute asymmetry tolerance, scaled by `max(1, max |entry|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues in `(-NEG_EIG_TOL * λ_max, 0]` are treated as round-off and clipped.
pub const NEG_EIG_TOL: f64 = 1e-8;

/// Eigendecomposition `h = V diag(λ) Vᴴ` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Eigen<T: Field> {
    pub values: DVector<f64>,
    pub vectors: DMatrix<T>,
}

impl<T: Field> Eigen<T> {
    /// `V diag(g(λ)) Vᴴ`.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> DMatrix<T> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let s = T::from_real(g(lam));
            for i in 0..n {
                scaled[(i, k)] *= s;
            }
        }
        hermitian_part(&(scaled * self.vectors.adjoint()))
    }

    pub fn reconstruct(&self) -> DMatrix<T> {
        self.map(|l| l)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `(m + mᴴ) / 2`. The result is exactly Hermitian bit for bit.
pub fn hermitian_part<T: Field>(m: &DMatrix<T>) -> DMatrix<T> {
    let n = m.nrows();
    let half = T::from_real(0.5);
    DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conjugate()) * half)
}

/// Largest `|m_ij - conj(m_ji)|`.
pub fn max_asymmetry<T: Field>(m: &DMatrix<T>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conjugate()).modulus());
        }
    }
    worst
}

pub fn check_hermitian<T: Field>(m: &DMatrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let scale = m.iter().map(|v| v.modulus()).fold(1.0f64, f64::max);
    let asym = max_asymmetry(m);
    if !(asym <= HERMITIAN_TOL * scale) {
        return Err(Error::NonHermitian {
            max_asymmetry: asym,
        });
    }
    Ok(())
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// Each eigenvector is rotated so that its largest-magnitude component (the
/// first one on ties) is real and positive, which makes the output a
/// deterministic function of the input.
pub fn herm_eig<T: Field>(h: &DMatrix<T>) -> Result<Eigen<T>> {
    check_hermitian(h)?;
    Ok(eig_unchecked(&hermitian_part(h)))
}

fn eig_unchecked<T: Field>(h: &DMatrix<T>) -> Eigen<T> {
    let n = h.nrows();
    let se = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));

    let values = DVector::from_iterator(n, order.iter().map(|&k| se.eigenvalues[k]));
    let mut vectors = DMatrix::<T>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = se.eigenvectors.column(src);
        let best = col.iter().map(|v| v.modulus()).fold(0.0f64, f64::max);
        // first component within round-off of the largest modulus
        let pivot = (0..n).find(|&i| col[i].modulus() >= best * (1.0 - 1e-12)).unwrap_or(0);
        let phase = if best > 0.0 {
            col[pivot].signum().conjugate()
        } else {
            T::one()
        };
        for i in 0..n {
            vectors[(i, dst)] = col[i] * phase;
        }
        vectors[(pivot, dst)] = T::from_real(col[pivot].modulus());
    }
    Eigen { values, vectors }
}

fn clipped_eig<T: Field>(h: &DMatrix<T>) -> Result<Eigen<T>> {
    let mut e = herm_eig(h)?;
    let lmax = e.max().max(0.0);
    let lmin = e.min();
    if lmin < -NEG_EIG_TOL * lmax || (lmax == 0.0 && lmin < 0.0) {
        return Err(Error::NegativeEigenvalue(lmin));
    }
    e.values.iter_mut().for_each(|l| *l = l.max(0.0));
    Ok(e)
}

/// Principal square root of a Hermitian positive semi-definite matrix.
pub fn herm_sqrt<T: Field>(h: &DMatrix<T>) -> Result<DMatrix<T>> {
    Ok(clipped_eig(h)?.map(f64::sqrt))
}

/// Shrinkage toward the scaled identity: `(1 - eps) h + eps (tr(h) / n) I`.
pub fn shrink<T: Field>(h: &DMatrix<T>, eps: f64) -> DMatrix<T> {
    if eps == 0.0 {
        return h.clone();
    }
    let n = h.nrows();
    let mean_eig = (0..n).map(|i| h[(i, i)].real()).sum::<f64>() / n as f64;
    let mut out = h.map(|v| v * T::from_real(1.0 - eps));
    for i in 0..n {
        out[(i, i)] += T::from_real(eps * mean_eig);
    }
    out
}

fn is_singular<T: Field>(e: &Eigen<T>) -> bool {
    let lmax = e.max();
    let n = e.values.len() as f64;
    !(lmax > 0.0) || e.min() <= n * f64::EPSILON * lmax
}

/// Inverse square root after shrinkage by `eps` (see [`shrink`]).
pub fn herm_invsqrt<T: Field>(h: &DMatrix<T>, eps: f64) -> Result<DMatrix<T>> {
    let e = herm_eig(&shrink(h, eps))?;
    if is_singular(&e) {
        return Err(Error::SingularMatrix);
    }
    Ok(e.map(|l| 1.0 / l.sqrt()))
}

/// Square root and inverse square root from a single decomposition.
pub(crate) fn sqrt_and_invsqrt<T: Field>(h: &DMatrix<T>) -> Result<(DMatrix<T>, DMatrix<T>)> {
    let e = herm_eig(h)?;
    if is_singular(&e) {
        return Err(Error::SingularMatrix);
    }
    Ok((e.map(f64::sqrt), e.map(|l| 1.0 / l.sqrt())))
}

/// Removes negative eigenvalues (leaves the matrix untouched when there are none).
pub fn clip_psd<T: Field>(h: &DMatrix<T>) -> Result<DMatrix<T>> {
    let e = herm_eig(h)?;
    if e.min() >= 0.0 {
        return Ok(hermitian_part(h));
    }
    Ok(e.map(|l| l.max(0.0)))
}

fn trace_re<T: Field>(m: &DMatrix<T>) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].real()).sum()
}

/// Bures-Wasserstein distance between the centered Gaussians `N(0, a)` and `N(0, b)`:
/// `W₂² = tr(a + b - 2 (a^½ b a^½)^½)`.
///
/// When one argument is well conditioned the distance is evaluated as
/// `‖(I - T) s^½‖_F` with `T` the Monge map out of that argument, which keeps
/// full relative precision when `a ≈ b`. The plain trace formula is used otherwise.
pub fn bures_wasserstein_dist<T: Field>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    if a == b {
        check_hermitian(a)?;
        return Ok(0.0);
    }
    let ea = clipped_eig(a)?;
    let eb = clipped_eig(b)?;
    let cond = |e: &Eigen<T>| {
        if e.min() > 0.0 {
            e.max() / e.min()
        } else {
            f64::INFINITY
        }
    };
    let (ca, cb) = (cond(&ea), cond(&eb));
    let (dst, esrc) = if cb < ca { (a, &eb) } else { (b, &ea) };

    if ca.min(cb) <= 1e8 {
        let s_half = esrc.map(f64::sqrt);
        let s_inv_half = esrc.map(|l| 1.0 / l.sqrt());
        let inner = herm_sqrt(&hermitian_part(&(&s_half * dst * &s_half)))?;
        // (I - T) s^½ = s^½ - s^-½ (s^½ d s^½)^½
        let diff = &s_half - &s_inv_half * inner;
        return Ok(diff.iter().map(|v| v.modulus_squared()).sum::<f64>().sqrt());
    }

    let a_half = ea.map(f64::sqrt);
    let inner = herm_sqrt(&hermitian_part(&(&a_half * b * &a_half)))?;
    let w2 = trace_re(a) + trace_re(b) - 2.0 * trace_re(&inner);
    Ok(w2.max(0.0).sqrt())
}

/// Frobenius norm for either scalar field.
pub fn frobenius<T: Field>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|v| v.modulus_squared()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eig() {
        let e = herm_eig(&RMatrix::identity(3, 3)).unwrap();
        assert_eq!(e.values.as_slice(), &[1.0, 1.0, 1.0]);
        assert_eq!(e.vectors, RMatrix::identity(3, 3));
    }

    #[test]
    fn diagonal_eig() {
        let e = herm_eig(&dmatrix![4.0, 0.0; 0.0, 9.0]).unwrap();
        assert_eq!(e.values.as_slice(), &[4.0, 9.0]);
        assert_eq!(e.vectors, RMatrix::identity(2, 2));
    }

    #[test]
    fn two_by_two_eig() {
        let e = herm_eig(&dmatrix![2.0, 1.0; 1.0, 2.0]).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn complex_eig_phase_convention() {
        let h = dmatrix![c(2.0, 0.0), c(0.0, 1.0); c(0.0, -1.0), c(2.0, 0.0)];
        let e = herm_eig(&h).unwrap();
        for k in 0..2 {
            let col = e.vectors.column(k);
            let best = col.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let pivot = (0..2).find(|&i| col[i].norm() >= best * (1.0 - 1e-12)).unwrap();
            assert!(col[pivot].im == 0.0 && col[pivot].re > 0.0);
        }
        assert!(frobenius(&(e.reconstruct() - &h)) < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = dmatrix![1.0, 2.0; 0.0, 1.0];
        assert!(matches!(herm_eig(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn sqrt_of_diagonal_and_identity() {
        assert_eq!(
            herm_sqrt(&dmatrix![4.0, 0.0; 0.0, 9.0]).unwrap(),
            dmatrix![2.0, 0.0; 0.0, 3.0]
        );
        assert_eq!(herm_sqrt(&RMatrix::identity(4, 4)).unwrap(), RMatrix::identity(4, 4));
    }

    #[test]
    fn sqrt_rejects_negative() {
        let m = dmatrix![1.0, 0.0; 0.0, -1.0];
        assert!(matches!(herm_sqrt(&m), Err(Error::NegativeEigenvalue(_))));
    }

    #[test]
    fn sqrt_clips_roundoff_negatives() {
        let m = dmatrix![1.0, 0.0; 0.0, -1e-15];
        let s = herm_sqrt(&m).unwrap();
        assert_eq!(s[(1, 1)], 0.0);
    }

    #[test]
    fn invsqrt_examples() {
        let r = herm_invsqrt(&dmatrix![4.0, 0.0; 0.0, 9.0], 0.0).unwrap();
        assert!((r[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((r[(1, 1)] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(herm_invsqrt(&RMatrix::identity(3, 3), 0.0).unwrap(), RMatrix::identity(3, 3));
        assert!(matches!(
            herm_invsqrt(&dmatrix![0.0, 0.0; 0.0, 1.0], 0.0),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn shrinkage_rescues_singular() {
        let r = herm_invsqrt(&dmatrix![0.0, 0.0; 0.0, 1.0], 0.1).unwrap();
        // regularized: diag(0.05, 0.95)
        assert!((r[(0, 0)] - 1.0 / 0.05f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bures_wasserstein_examples() {
        let i = RMatrix::identity(3, 3);
        assert_eq!(bures_wasserstein_dist(&i, &i).unwrap(), 0.0);
        let d = bures_wasserstein_dist(&dmatrix![1.0], &dmatrix![4.0]).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        assert!(matches!(
            bures_wasserstein_dist(&i, &RMatrix::identity(2, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bures_wasserstein_singular_falls_back_to_trace_formula() {
        let a = dmatrix![1.0, 0.0; 0.0, 0.0];
        let b = dmatrix![0.0, 0.0; 0.0, 4.0];
        // (1 - 0)² + (0 - 2)²
        let d = bures_wasserstein_dist(&a, &b).unwrap();
        assert!((d - 5f64.sqrt()).abs() < 1e-12);
    }
}
