//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use serde::{Deserialize, Serialize};

use super::NumericsError;
use crate::scalar::Real;

/// Most subintervals the adaptive refinement may create.
pub const MAX_SEGMENTS: usize = 4000;

/// Error target for an adaptive computation: stop once the estimated error is
/// at most `max(abs, rel · |estimate|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(rel: T, abs: T) -> Result<Self, NumericsError> {
        if !(rel > T::zero()) || !rel.is_finite() {
            return Err(NumericsError::domain("Tolerance", format!("rel = {rel} must be positive")));
        }
        if !(abs >= T::zero()) || !abs.is_finite() {
            return Err(NumericsError::domain("Tolerance", format!("abs = {abs} must be non-negative")));
        }
        Ok(Self { rel, abs })
    }

    fn target(&self, estimate: T) -> T {
        self.abs.max(self.rel * estimate.abs())
    }
}

impl<T: Real> Default for Tolerance<T> {
    /// rel = 1e-9 (or 16 ulp for narrower types), abs = 1e-300 (0 if it underflows).
    fn default() -> Self {
        let rel = T::lit(1e-9).max(T::epsilon() * T::lit(16.0));
        let abs = T::from_f64(1e-300).unwrap_or_else(T::zero);
        Self { rel, abs }
    }
}

/// Closed finite interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self, NumericsError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(NumericsError::domain("Interval", format!("[{lo}, {hi}] must be finite")));
        }
        if lo > hi {
            return Err(NumericsError::domain("Interval", format!("lo = {lo} exceeds hi = {hi}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }
}

// Kronrod abscissae (descending, last is the centre) and weights; every
// odd-indexed node is also a 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    lo: T,
    hi: T,
    estimate: T,
    error: T,
}

fn eval<T: Real, F: Fn(T) -> T>(f: &F, x: T) -> Result<T, NumericsError> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(NumericsError::NonFinite { at: x.as_f64() })
    }
}

fn kronrod15<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Result<Segment<T>, NumericsError> {
    let half = T::lit(0.5);
    let centre = half * (lo + hi);
    let radius = half * (hi - lo);
    let fc = eval(f, centre)?;
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let pair = eval(f, centre - dx)? + eval(f, centre + dx)?;
        kronrod = kronrod + T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    Ok(Segment { lo, hi, estimate: kronrod * radius, error: ((kronrod - gauss) * radius).abs() })
}

/// Integrate `f` over `iv`, bisecting the worst segment until the summed
/// Kronrod–Gauss error estimate meets `tol`.
///
/// On budget exhaustion the error carries the best estimate and its error
/// bound.
pub fn integrate<T, F>(f: F, iv: Interval<T>, tol: Tolerance<T>) -> Result<T, NumericsError>
where
    T: Real,
    F: Fn(T) -> T,
{
    if iv.lo == iv.hi {
        return Ok(T::zero());
    }
    let mut segments = vec![kronrod15(&f, iv.lo, iv.hi)?];
    loop {
        let (estimate, error) = segments.iter().fold((T::zero(), T::zero()), |(e, r), s| (e + s.estimate, r + s.error));
        if error <= tol.target(estimate) {
            return Ok(estimate);
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments[worst];
        let mid = T::lit(0.5) * (seg.lo + seg.hi);
        let resolvable = mid > seg.lo && mid < seg.hi;
        if segments.len() >= MAX_SEGMENTS || !resolvable {
            return Err(NumericsError::QuadratureBudget {
                estimate: estimate.as_f64(),
                error_bound: error.as_f64(),
                segments: segments.len(),
            });
        }
        segments[worst] = kronrod15(&f, seg.lo, mid)?;
        segments.push(kronrod15(&f, mid, seg.hi)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> Tolerance<f64> {
        Tolerance::default()
    }

    #[test]
    fn constants_and_lines() {
        assert_relative_eq!(integrate(|_| 1.0, Interval::new(0.0, 1.0).unwrap(), unit()).unwrap(), 1.0);
        assert_relative_eq!(integrate(|x| x, Interval::new(0.0, 2.0).unwrap(), unit()).unwrap(), 2.0);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert_relative_eq!(k, 2.0, max_relative = 1e-15);
        assert_relative_eq!(g, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn polynomial_exactness_up_to_base_rule_degree() {
        // K15 integrates degree ≤ 22 exactly on a single segment (odd degrees
        // vanish by symmetry for any degree)
        for deg in 0..=23i32 {
            let seg = kronrod15(&|x: f64| x.powi(deg), -1.0, 1.0).unwrap();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((seg.estimate - exact).abs() < 1e-14, "degree {deg}: {} vs {exact}", seg.estimate);
        }
    }

    #[test]
    fn peaked_integrand_needs_refinement() {
        // ∫_0^1 1/(1e-3 + x)^2 dx = 1/1e-3 − 1/1.001
        let v = integrate(|x: f64| (1e-3 + x).powi(-2), Interval::new(0.0, 1.0).unwrap(), unit()).unwrap();
        assert_relative_eq!(v, 1e3 - 1.0 / 1.001, max_relative = 1e-9);
    }

    #[test]
    fn degenerate_interval_is_zero() {
        assert_eq!(integrate(|x: f64| x.exp(), Interval::new(3.0, 3.0).unwrap(), unit()).unwrap(), 0.0);
    }

    #[test]
    fn budget_exhaustion_reports_partial_estimate() {
        let f = |x: f64| (1.0 / x).sin();
        let iv = Interval::new(1e-4, 1.0).unwrap();
        let loose = integrate(f, iv, Tolerance::new(1e-6, 0.0).unwrap()).unwrap();
        let err = integrate(f, iv, Tolerance::new(1e-300, 0.0).unwrap()).unwrap_err();
        match err {
            NumericsError::QuadratureBudget { estimate, error_bound, .. } => {
                assert!((estimate - loose).abs() < 1e-5);
                assert!(error_bound >= 0.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate(|x: f64| 1.0 / x, Interval::new(-1.0, 1.0).unwrap(), unit()).unwrap_err();
        assert!(matches!(err, NumericsError::NonFinite { .. }));
    }

    #[test]
    fn interval_and_tolerance_validation() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(1e-6, -1.0).is_err());
        let d = Tolerance::<f64>::default();
        assert_eq!((d.rel, d.abs), (1e-9, 1e-300));
    }

    #[test]
    fn single_precision_default_is_attainable() {
        let v = integrate(|x: f32| x * x, Interval::new(0.0f32, 3.0).unwrap(), Tolerance::default()).unwrap();
        assert!((v - 9.0).abs() < 1e-4);
    }
}
