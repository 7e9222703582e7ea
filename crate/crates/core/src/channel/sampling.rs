use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// One CN(0,1) draw: real and imaginary parts each N(0, 1/2).
#[inline]
pub fn awgn<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// K independent N×M Rayleigh blocks and their total energy tr(HH*).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub blocks: Vec<DMatrix<Complex64>>,
    pub trace: f64,
}

impl ChannelRealization {
    pub fn zeros(tx: usize, rx: usize, blocks: usize) -> Self {
        Self { blocks: vec![DMatrix::zeros(rx, tx); blocks], trace: 0.0 }
    }

    /// Redraw every entry in place.
    pub fn resample<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let mut trace = 0.0;
        for block in &mut self.blocks {
            for h in block.iter_mut() {
                *h = awgn(rng);
                trace += h.norm_sqr();
            }
        }
        self.trace = trace;
    }
}

pub fn sample_channel<R: Rng + ?Sized>(tx: usize, rx: usize, blocks: usize, rng: &mut R) -> ChannelRealization {
    let mut real = ChannelRealization::zeros(tx, rx, blocks);
    real.resample(rng);
    real
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RngStream;

    #[test]
    fn trace_is_sum_of_squared_magnitudes() {
        let mut rng = RngStream::new(1, 0).rng();
        let r = sample_channel(2, 3, 2, &mut rng);
        assert_eq!(r.blocks.len(), 2);
        assert_eq!(r.blocks[0].shape(), (3, 2));
        let direct: f64 = r.blocks.iter().flat_map(|b| b.iter()).map(|h| h.norm_sqr()).sum();
        assert!((r.trace - direct).abs() < 1e-12);
    }

    #[test]
    fn fixed_stream_reproduces_realization() {
        let a = sample_channel(2, 2, 1, &mut RngStream::new(9, 4).rng());
        let b = sample_channel(2, 2, 1, &mut RngStream::new(9, 4).rng());
        assert_eq!(a, b);
    }

    #[test]
    fn noise_moments() {
        let n = 1_000_000;
        let mut rng = RngStream::new(3, 0).rng();
        let (mut sum, mut sq, mut re2, mut im2) = (Complex64::new(0.0, 0.0), 0.0, 0.0, 0.0);
        for _ in 0..n {
            let z = awgn(&mut rng);
            sum += z;
            sq += z.norm_sqr();
            re2 += z.re * z.re;
            im2 += z.im * z.im;
        }
        let nf = n as f64;
        let mean = sum / nf;
        // σ of the complex mean is 1/√n per component pair; |z|² has variance 1
        let sigma = (1.0 / nf).sqrt();
        assert!(mean.norm() < 3.0 * sigma);
        assert!((sq / nf - 1.0).abs() < 3.0 * sigma);
        // each component: variance 1/2, std of the sample variance ≈ 1/√(2n)
        let comp_sigma = (0.5 / nf).sqrt();
        assert!((re2 / nf - 0.5).abs() < 3.0 * comp_sigma);
        assert!((im2 / nf - 0.5).abs() < 3.0 * comp_sigma);
    }
}
