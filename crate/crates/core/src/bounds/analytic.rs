use super::{BoundKind, BoundResult, BoundsError, SphereGeometry, SystemConfig};
use crate::numerics::{gamma_interval_mass, integrate, log_gamma_unchecked, Interval, Tolerance};
use crate::scalar::Real;

/// `2^{R/(2N)} − 1`, the per-dimension rate margin.
fn rate_margin<T: Real>(cfg: &SystemConfig<T>) -> T {
    (cfg.rate * T::LN_2() / (T::lit(2.0) * T::from_count(cfg.rx))).exp_m1()
}

/// Integration limits and noise-sphere parameter for `cfg`.
///
/// With c = 2^{R/(2N)} − 1:
/// `a = LK·2^{−R/N}(√2/c + 1)²`, `b = 2LK/c²`, and `δ/h = 2P/(N c²)`. The
/// choice of δ makes the packing radius `r_o² = a·P·h` sit strictly inside
/// the noise sphere `N·L·K·δ = b·P·h`, i.e. a < b for every R > 0.
pub fn geometry_for<T: Real>(cfg: &SystemConfig<T>) -> Result<SphereGeometry<T>, BoundsError> {
    cfg.validate()?;
    let c = rate_margin(cfg);
    let lk = T::from_count(cfg.block_len * cfg.blocks);
    let two = T::lit(2.0);
    // 2^{-R/N} = (1 + c)^{-2}
    let shrink = (T::one() + c).powi(-2);
    let a = lk * shrink * (T::SQRT_2() / c + T::one()).powi(2);
    let b = two * lk / (c * c);
    let delta = two * cfg.power / (T::from_count(cfg.rx) * c * c);
    Ok(SphereGeometry { a, b, delta, r_o_sq: None })
}

fn clamp_probability<T: Real>(v: T) -> (T, bool) {
    if v < T::zero() {
        (T::zero(), true)
    } else {
        (v.min(T::one()), false)
    }
}

/// Lower bound on P_{E|H} given the channel trace `h = tr(HH*)`:
/// `Q(NLK, r_o²) − Q(NLK, NLK·δ)`, the Gamma(NLK, 1) mass between the
/// packing radius and the noise sphere.
pub fn conditional_lowerbound<T: Real>(cfg: &SystemConfig<T>, h: T) -> Result<BoundResult<T>, BoundsError> {
    if !h.is_finite() || h < T::zero() {
        return Err(BoundsError::InvalidInput(format!("channel trace h = {h} must be finite and ≥ 0")));
    }
    let mut geometry = geometry_for(cfg)?;
    let lo = geometry.a * cfg.power * h;
    let hi = geometry.b * cfg.power * h;
    geometry.r_o_sq = Some(lo);
    let raw = if h == T::zero() { T::zero() } else { gamma_interval_mass(T::from_count(cfg.rx_dims()), lo, hi)? };
    let (value, clamped) = clamp_probability(raw);
    Ok(BoundResult { kind: BoundKind::Conditional, value, geometry, mc_ci: None, clamped })
}

/// ln[Γ(NLK+MNK) / (Γ(NLK) Γ(MNK))]
fn ln_beta_normaliser<T: Real>(n_rx: T, n_ch: T) -> T {
    log_gamma_unchecked(n_rx + n_ch) - log_gamma_unchecked(n_rx) - log_gamma_unchecked(n_ch)
}

/// Averaged bound
/// `P^{NLK} Γ(NLK+MNK)/(Γ(NLK)Γ(MNK)) ∫_a^b x^{NLK−1} (1+Px)^{−(MNK+NLK)} dx`,
/// evaluated by adaptive quadrature with the prefactor folded into the
/// integrand in log domain.
pub fn integral_lowerbound<T: Real>(cfg: &SystemConfig<T>) -> Result<BoundResult<T>, BoundsError> {
    integral_lowerbound_with(cfg, Tolerance::default())
}

pub fn integral_lowerbound_with<T: Real>(
    cfg: &SystemConfig<T>,
    tol: Tolerance<T>,
) -> Result<BoundResult<T>, BoundsError> {
    let geometry = geometry_for(cfg)?;
    let n_rx = T::from_count(cfg.rx_dims());
    let n_ch = T::from_count(cfg.channel_dims());
    let p = cfg.power;
    let ln_pref = ln_beta_normaliser(n_rx, n_ch) + n_rx * p.ln();
    let integrand = |x: T| {
        let ln_x = if n_rx == T::one() { T::zero() } else { (n_rx - T::one()) * x.ln() };
        (ln_pref + ln_x - (n_rx + n_ch) * (p * x).ln_1p()).exp()
    };
    let raw = integrate(integrand, Interval::new(geometry.a, geometry.b)?, tol)?;
    let (value, clamped) = clamp_probability(raw);
    Ok(BoundResult { kind: BoundKind::Integral, value, geometry, mc_ci: None, clamped })
}

/// Closed-form relaxation of the averaged bound with the integrand's
/// denominator frozen at x = b:
/// `Γ(NLK+MNK)/(Γ(NLK+1)Γ(MNK)) · P^{NLK} (1+Pb)^{−(MNK+NLK)} (b^{NLK} − a^{NLK})`.
///
/// The last factor is `∫_a^b x^{NLK−1} dx · NLK`, so both powers carry the
/// exponent NLK.
pub fn bound1<T: Real>(cfg: &SystemConfig<T>) -> Result<BoundResult<T>, BoundsError> {
    let geometry = geometry_for(cfg)?;
    let (a, b, p) = (geometry.a, geometry.b, cfg.power);
    let n_rx = T::from_count(cfg.rx_dims());
    let n_ch = T::from_count(cfg.channel_dims());
    let ln_norm = log_gamma_unchecked(n_rx + n_ch) - log_gamma_unchecked(n_rx + T::one()) - log_gamma_unchecked(n_ch);
    // b^n − a^n = b^n (1 − (a/b)^n)
    let ln_span = n_rx * b.ln() + (-(n_rx * (a / b).ln()).exp_m1()).ln();
    let ln_value = ln_norm + n_rx * p.ln() - (n_rx + n_ch) * (p * b).ln_1p() + ln_span;
    let (value, clamped) = clamp_probability(ln_value.exp());
    Ok(BoundResult { kind: BoundKind::Bound1, value, geometry, mc_ci: None, clamped })
}

/// Closed-form relaxation with the integrand's numerator frozen at x = a:
/// `Γ(NLK+MNK−1)/(Γ(NLK)Γ(MNK)) · a^{NLK−1} P^{NLK−1}
///  [(1+Pa)^{−(NLK+MNK−1)} − (1+Pb)^{−(NLK+MNK−1)}]`.
///
/// The power of P is NLK−1 because `∫(1+Px)^{−k}dx` contributes a 1/P; both
/// bracketed terms share the exponent NLK+MNK−1 from the same antiderivative.
/// For NLK = 1 this coincides with the averaged bound.
pub fn bound2<T: Real>(cfg: &SystemConfig<T>) -> Result<BoundResult<T>, BoundsError> {
    let geometry = geometry_for(cfg)?;
    let (a, b, p) = (geometry.a, geometry.b, cfg.power);
    let n_rx = T::from_count(cfg.rx_dims());
    let n_ch = T::from_count(cfg.channel_dims());
    let order = n_rx + n_ch - T::one();
    let ln_norm = log_gamma_unchecked(order) - log_gamma_unchecked(n_rx) - log_gamma_unchecked(n_ch);
    let ln_a_side = (p * a).ln_1p();
    let ln_b_side = (p * b).ln_1p();
    // (1+Pa)^{-k} − (1+Pb)^{-k} = (1+Pa)^{-k} (1 − ((1+Pa)/(1+Pb))^k)
    let ln_diff = -order * ln_a_side + (-(order * (ln_a_side - ln_b_side)).exp_m1()).ln();
    let ln_power = if n_rx == T::one() { T::zero() } else { (n_rx - T::one()) * (a.ln() + p.ln()) };
    let ln_value = ln_norm + ln_power + ln_diff;
    let (value, clamped) = clamp_probability(ln_value.exp());
    Ok(BoundResult { kind: BoundKind::Bound2, value, geometry, mc_ci: None, clamped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(m: u32, n: u32, k: u32, l: u32, r: f64, p: f64) -> SystemConfig<f64> {
        SystemConfig::new(m, n, k, l, r, p).unwrap()
    }

    #[test]
    fn geometry_reference_points() {
        // c = 1: a = (√2 + 1)² / 4, b = 2
        let g = geometry_for(&cfg(2, 1, 1, 1, 2.0, 1.0)).unwrap();
        assert_relative_eq!(g.a, 1.457_106_781_186_547_5, max_relative = 1e-14);
        assert_relative_eq!(g.b, 2.0, max_relative = 1e-14);
        let g = geometry_for(&cfg(2, 1, 1, 1, 1.0, 1.0)).unwrap();
        assert_relative_eq!(g.a, 9.742_640_687_119_285, max_relative = 1e-14);
        assert_relative_eq!(g.b, 11.656_854_249_492_38, max_relative = 1e-14);
    }

    #[test]
    fn geometry_vanishes_at_high_rate() {
        let mut prev = geometry_for(&cfg(1, 1, 1, 1, 1.0, 1.0)).unwrap();
        for r in [2.0, 4.0, 8.0, 16.0, 32.0, 64.0] {
            let g = geometry_for(&cfg(1, 1, 1, 1, r, 1.0)).unwrap();
            assert!(g.a < prev.a && g.b < prev.b);
            prev = g;
        }
        assert!(prev.a < 1e-9 && prev.b < 1e-9);
    }

    #[test]
    fn conditional_is_zero_without_channel_energy() {
        let r = conditional_lowerbound(&cfg(2, 1, 1, 1, 1.0, 10.0), 0.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(!r.clamped);
    }

    #[test]
    fn conditional_reference_value() {
        // Gamma(1) mass on [a·10, b·10] for R = 1: e^{-97.43} − e^{-116.57}
        let r = conditional_lowerbound(&cfg(2, 1, 1, 1, 1.0, 10.0), 1.0).unwrap();
        assert_relative_eq!(r.value, 4.878_082_062_781_511e-43, max_relative = 1e-11);
        let g = r.geometry;
        // N·L·K = 1 and h = 1, so feasibility reads r_o² < δ
        assert!(g.r_o_sq.unwrap() < g.delta);
    }

    #[test]
    fn conditional_rejects_negative_trace() {
        assert!(conditional_lowerbound(&cfg(1, 1, 1, 1, 1.0, 1.0), -1.0).is_err());
    }

    #[test]
    fn bound_reference_values() {
        let c = cfg(2, 1, 1, 1, 1.0, 100.0);
        assert_relative_eq!(integral_lowerbound(&c).unwrap().value, 3.166_996_783_839_643_5e-7, max_relative = 1e-8);
        assert_relative_eq!(bound1(&c).unwrap().value, 2.410_788_257_381_052_3e-7, max_relative = 1e-12);
        assert_relative_eq!(bound2(&c).unwrap().value, 3.166_996_783_839_643_5e-7, max_relative = 1e-12);
    }

    #[test]
    fn larger_systems_reference_values() {
        let v = integral_lowerbound(&cfg(2, 2, 1, 1, 2.0, 100.0)).unwrap().value;
        assert_relative_eq!(v, 2.825_508_607_866_678_2e-12, max_relative = 1e-8);
        let v = integral_lowerbound(&cfg(1, 1, 1, 1, 1.0, 10.0)).unwrap().value;
        assert_relative_eq!(v, 1.654_198_503_176_071_7e-3, max_relative = 1e-8);
    }

    #[test]
    fn decade_of_power_costs_mnk_decades() {
        let lo = integral_lowerbound(&cfg(2, 1, 1, 1, 1.0, 1e3)).unwrap().value;
        let hi = integral_lowerbound(&cfg(2, 1, 1, 1, 1.0, 1e4)).unwrap().value;
        assert!(((hi / lo).log10() + 2.0).abs() < 0.1);
        for f in [bound1::<f64>, bound2::<f64>] {
            let lo = f(&cfg(2, 1, 1, 1, 1.0, 1e3)).unwrap().value;
            let hi = f(&cfg(2, 1, 1, 1, 1.0, 1e4)).unwrap().value;
            assert!(((hi / lo).log10() + 2.0).abs() < 0.1);
        }
    }

    #[test]
    fn single_precision_bounds_track_double() {
        let c64 = cfg(2, 2, 1, 1, 2.0, 100.0);
        let c32 = SystemConfig::<f32>::new(2, 2, 1, 1, 2.0, 100.0).unwrap();
        let v64 = integral_lowerbound(&c64).unwrap().value;
        let v32 = integral_lowerbound(&c32).unwrap().value;
        assert!(((v32 as f64) - v64).abs() / v64 < 1e-4);
        let b32 = bound1(&c32).unwrap().value as f64;
        assert!((b32 - bound1(&c64).unwrap().value).abs() / b32 < 1e-4);
    }
}
