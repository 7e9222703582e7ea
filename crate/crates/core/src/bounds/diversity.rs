use super::BoundsError;
use crate::curve::Curve;
use crate::numerics::Interval;

/// Least-squares slope of −log10(value) against log10(P) over the points
/// whose SNR (dB) lies in `window`; the empirical diversity order.
pub fn diversity_slope(curve: &Curve, window: Interval<f64>) -> Result<f64, BoundsError> {
    let pts: Vec<(f64, f64)> =
        curve.points.iter().filter(|p| window.contains(p.snr_db)).map(|p| (p.snr_db, p.value)).collect();
    if pts.len() < 3 {
        return Err(BoundsError::InsufficientPoints { found: pts.len(), needed: 3 });
    }
    if let Some(&(snr, v)) = pts.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(BoundsError::InvalidInput(format!("non-positive value {v} at {snr} dB")));
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|(db, _)| db / 10.0).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, v)| -v.log10()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
