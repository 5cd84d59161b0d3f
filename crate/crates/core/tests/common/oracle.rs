//! Dense brute-force references for the FFT filter path.
//!
//! Everything here builds full `(n_c·n) × (n_c·n)` matrices with the row index
//! `c·n + t` (channel-major, as in `vec` of the row-concatenated signal) and
//! uses plain nalgebra eigendecompositions, not the crate's matrix functions.

use monge_align::herm::{CMatrix, RMatrix};
use monge_align::spectral::fourier_matrix;
use monge_align::{CrossSpectrum, Signal};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;

/// `Σ = (I ⊗ F) blockdiag(Q) (I ⊗ Fᴴ)`, checked to be real.
pub fn dense_cov(spec: &CrossSpectrum) -> RMatrix {
    let n = spec.f();
    let n_c = spec.n_channels();
    let f = fourier_matrix(n);
    let mut out = RMatrix::zeros(n_c * n, n_c * n);
    let mut worst_imag = 0.0f64;
    let mut scale = 0.0f64;
    for a in 0..n_c {
        for b in 0..n_c {
            // block (a, b) = F diag(q_ab) Fᴴ
            let q: Vec<Complex64> = spec.entry_series(a, b);
            for l in 0..n {
                for m in 0..n {
                    let v: Complex64 = (0..n).map(|j| f[(l, j)] * q[j] * f[(m, j)].conj()).sum();
                    worst_imag = worst_imag.max(v.im.abs());
                    scale = scale.max(v.re.abs());
                    out[(a * n + l, b * n + m)] = v.re;
                }
            }
        }
    }
    assert!(worst_imag <= 1e-8 * scale.max(1.0), "NonRealResult: imaginary residue {worst_imag:e}");
    out
}

fn sym_fn(m: &RMatrix, g: impl Fn(f64) -> f64) -> RMatrix {
    let sym = (m + m.transpose()) * 0.5;
    let e = SymmetricEigen::new(sym);
    let d = RMatrix::from_diagonal(&e.eigenvalues.map(|l| g(l.max(0.0))));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

/// Lags kept by the band-limited projection: `-⌊f/2⌋ ..= ⌈f/2⌉ - 1`.
pub fn support(f: usize) -> std::ops::Range<isize> {
    -((f / 2) as isize)..(f - f / 2) as isize
}

/// Orthogonal projection of one `n × n` block onto circulants with lags in
/// [`support`]: average each wrapped diagonal, drop lags outside the band.
fn project_block(block: &RMatrix, f: usize) -> RMatrix {
    let n = block.nrows();
    let mut lag = vec![0.0; n];
    for d in support(f) {
        let k = d.rem_euclid(n as isize) as usize;
        lag[k] = (0..n).map(|l| block[(l, (l + k) % n)]).sum::<f64>() / n as f64;
    }
    RMatrix::from_fn(n, n, |l, m| lag[(m + n - l) % n])
}

/// Full Monge map between two dense covariances, then blockwise projection.
pub fn dense_f_monge(sigma_s: &RMatrix, sigma_t: &RMatrix, n_c: usize, f: usize) -> RMatrix {
    let s_half = sym_fn(sigma_s, f64::sqrt);
    let s_inv_half = sym_fn(sigma_s, |l| 1.0 / l.sqrt());
    let inner = sym_fn(&(&s_half * sigma_t * &s_half), f64::sqrt);
    let a = &s_inv_half * inner * &s_inv_half;
    let n = a.nrows() / n_c;
    let mut out = RMatrix::zeros(a.nrows(), a.ncols());
    for i in 0..n_c {
        for j in 0..n_c {
            let block = a.view((i * n, j * n), (n, n)).clone_owned();
            out.view_mut((i * n, j * n), (n, n)).copy_from(&project_block(&block, f));
        }
    }
    out
}

/// `vec⁻¹(Ã vec(X))`.
pub fn dense_apply(a_tilde: &RMatrix, sig: &Signal) -> Signal {
    let n_c = sig.n_channels();
    let n = sig.n_samples();
    assert_eq!(a_tilde.nrows(), n_c * n, "DimensionMismatch");
    let x = nalgebra::DVector::from_iterator(n_c * n, sig.data().iter().copied());
    let y = a_tilde * x;
    Signal::new(ndarray::Array2::from_shape_fn((n_c, n), |(c, t)| y[c * n + t])).unwrap()
}

/// `(A x, h ⊛ x)` for `A = F diag(q) Fᴴ` and `h = f^-½ F_fᴴ g_f(q)`, with the
/// convolution written out as `y_t = Σ_{d ∈ support} h[d mod f] x[t + d]`.
pub fn circulant_vs_filter(q: &[Complex64], x: &[f64], f: usize) -> (Vec<f64>, Vec<f64>) {
    let n = q.len();
    assert_eq!(x.len(), n);
    assert_eq!(n % f, 0, "NotDivisible");
    let fm = fourier_matrix(n);
    let a: CMatrix = &fm * CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(q)) * fm.adjoint();
    let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let band: Vec<usize> = support(f).map(|d| d.rem_euclid(n as isize) as usize).collect();
    for m in 0..n {
        if !band.contains(&m) {
            assert!(a[(0, m)].norm() <= 1e-9 * scale, "NotBandLimited: first-row entry {m} = {}", a[(0, m)]);
        }
    }
    let ax: Vec<f64> = (0..n)
        .map(|l| (0..n).map(|m| a[(l, m)].re * x[m]).sum())
        .collect();

    let ff = fourier_matrix(f);
    let p: Vec<Complex64> = (0..f).map(|j| q[j * n / f]).collect();
    let h: Vec<Complex64> = (0..f)
        .map(|k| (0..f).map(|j| ff[(k, j)].conj() * p[j]).sum::<Complex64>() / (f as f64).sqrt())
        .collect();
    let hx: Vec<f64> = (0..n)
        .map(|t| {
            support(f)
                .map(|d| {
                    let k = d.rem_euclid(f as isize) as usize;
                    h[k].re * x[(t as isize + d).rem_euclid(n as isize) as usize]
                })
                .sum()
        })
        .collect();
    (ax, hx)
}
