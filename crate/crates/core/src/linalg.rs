//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// `(A_1 ⊗ ... ⊗ A_m) v` without forming the Kronecker product.
pub fn kron_apply(factors: &[&CMat], v: &CVec) -> CVec {
    let dims: Vec<usize> = factors.iter().map(|f| f.nrows()).collect();
    let total: usize = dims.iter().product();
    assert_eq!(total, v.len(), "kron_apply dimension mismatch");
    let mut cur = v.as_slice().to_vec();
    let mut next = vec![ZERO; total];
    // apply factor i along axis i (row-major, first factor most significant)
    let mut inner = total;
    for (i, f) in factors.iter().enumerate() {
        let d = dims[i];
        inner /= d;
        let outer = total / (inner * d);
        for o in 0..outer {
            for r in 0..d {
                for s in 0..inner {
                    let mut acc = ZERO;
                    for col in 0..d {
                        acc += f[(r, col)] * cur[(o * d + col) * inner + s];
                    }
                    next[(o * d + r) * inner + s] = acc;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    CVec::from_vec(cur)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(x * y);
        }
    }
    CVec::from_vec(out)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / std::f64::consts::SQRT_2
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let z = CMat::from_fn(d, d, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { ONE };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(d, |_, _| complex_gaussian(rng));
    let n = v.norm();
    v / c(n)
}

/// Eigenvalues of a Hermitian matrix (the lower triangle is trusted), ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = symmetrize(m);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn symmetrize(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &CMat) -> f64 {
    pairwise_sum(&hermitian_eigenvalues(m).iter().map(|x| x.abs()).collect::<Vec<_>>())
}

/// Reproducible tree summation; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => ZERO,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => pairwise_sum_complex(&xs[..n / 2]) + pairwise_sum_complex(&xs[n / 2..]),
    }
}

/// Entrywise tree sum of equally shaped matrices.
pub fn pairwise_sum_mats(ms: &[CMat]) -> CMat {
    match ms.len() {
        0 => panic!("pairwise_sum_mats needs at least one matrix"),
        1 => ms[0].clone(),
        n => pairwise_sum_mats(&ms[..n / 2]) + pairwise_sum_mats(&ms[n / 2..]),
    }
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u * u.adjoint()), &CMat::identity(n, n))
}

/// Numerical rank of a Hermitian PSD matrix.
pub fn psd_rank(m: &CMat, tol: f64) -> usize {
    hermitian_eigenvalues(m).iter().filter(|&&x| x > tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kron_apply_matches_kronecker() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = haar_unitary(2, &mut rng);
        let b = haar_unitary(3, &mut rng);
        let cm = haar_unitary(2, &mut rng);
        let v = random_unit_vector(12, &mut rng);
        let dense = kron(&kron(&a, &b), &cm) * &v;
        let fast = kron_apply(&[&a, &b, &cm], &v);
        assert!((dense - fast).norm() < 1e-12);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 1..8 {
            assert!(unitarity_defect(&haar_unitary(d, &mut rng)) < 1e-12);
        }
    }

    #[test]
    fn trace_norm_of_diagonal() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(-2.0), c(0.5)]));
        assert!((trace_norm_hermitian(&m) - 3.5).abs() < 1e-12);
    }

    #[test]
    fn pairwise_is_order_stable() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let direct: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - direct).abs() < 1e-12);
    }
}
