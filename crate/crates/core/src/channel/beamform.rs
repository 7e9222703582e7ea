use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::Constellation;

/// Transmit vector, effective scalar gain σ_max and unit-norm receive
/// combiner for single-stream SVD beamforming.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    pub tx: DVector<Complex64>,
    pub gain: f64,
    pub combiner: DVector<Complex64>,
}

/// Largest eigenvalue of the 2×2 Hermitian Gram matrix `[[p, q], [q*, r]]`.
#[inline]
fn gram2_max_eig(p: f64, r: f64, q: Complex64) -> f64 {
    let half_diff = 0.5 * (p - r);
    0.5 * (p + r) + (half_diff * half_diff + q.norm_sqr()).sqrt()
}

/// Entries of H*H for a two-column H.
#[inline]
fn gram2(h: &DMatrix<Complex64>) -> (f64, f64, Complex64) {
    let (mut p, mut r, mut q) = (0.0, 0.0, Complex64::new(0.0, 0.0));
    for i in 0..h.nrows() {
        let a = h[(i, 0)];
        let b = h[(i, 1)];
        p += a.norm_sqr();
        r += b.norm_sqr();
        q += a.conj() * b;
    }
    (p, r, q)
}

/// Largest singular value of `h`.
pub fn principal_gain(h: &DMatrix<Complex64>) -> f64 {
    match (h.nrows(), h.ncols()) {
        (1, _) | (_, 1) => h.norm(),
        (_, 2) => {
            let (p, r, q) = gram2(h);
            gram2_max_eig(p, r, q).sqrt()
        }
        _ => h.clone().singular_values().max(),
    }
}

/// Principal right singular vector and its singular value.
fn principal_right(h: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    let m = h.ncols();
    let unit = |i: usize| DVector::from_fn(m, |j, _| Complex64::new(if j == i { 1.0 } else { 0.0 }, 0.0));
    if m == 1 {
        return (h.norm(), unit(0));
    }
    if h.nrows() == 1 {
        let sigma = h.norm();
        if sigma == 0.0 {
            return (0.0, unit(0));
        }
        return (sigma, DVector::from_fn(m, |j, _| h[(0, j)].conj() / sigma));
    }
    if m == 2 {
        let (p, r, q) = gram2(h);
        let lambda = gram2_max_eig(p, r, q);
        let v = if q.norm_sqr() > 0.0 {
            let raw = DVector::from_vec(vec![q, Complex64::new(lambda - p, 0.0)]);
            let norm = raw.norm();
            raw / Complex64::new(norm, 0.0)
        } else if p >= r {
            unit(0)
        } else {
            unit(1)
        };
        return (lambda.sqrt(), v);
    }
    let svd = h.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (idx, sigma) = svd.singular_values.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |best, (i, s)| {
        if s > best.1 {
            (i, s)
        } else {
            best
        }
    });
    let v = v_t.row(idx).transpose().map(|z| z.conj());
    (sigma, v)
}

/// Beamform `sym` along the principal right singular vector of `h` at power
/// `power`: `tx = √P · v_max · sym`, combiner `u = H v_max / σ_max`.
///
/// A zero channel gives gain 0 and a zero combiner.
pub fn svd_beamform_transmit(h: &DMatrix<Complex64>, sym: Complex64, power: f64) -> Beamformer {
    let (gain, v) = principal_right(h);
    let tx = &v * (sym * power.sqrt());
    let combiner = if gain > 0.0 { (h * &v) / Complex64::new(gain, 0.0) } else { DVector::zeros(h.nrows()) };
    Beamformer { tx, gain, combiner }
}

/// Minimum-distance detection of `y_eff` against `√P · gain · s_i`; ties go
/// to the lowest index.
pub fn ml_detect(y_eff: Complex64, gain: f64, power: f64, constellation: &Constellation) -> usize {
    nearest(y_eff, power.sqrt() * gain, &constellation.points)
}

#[inline]
pub(crate) fn nearest(y: Complex64, amplitude: f64, points: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, s) in points.iter().enumerate() {
        let d = (y - s * amplitude).norm_sqr();
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}
