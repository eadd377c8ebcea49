//! Pattern classification and time-series measurements: asymptotic slopes,
//! oscillation frequencies, envelope relaxation rates, correlations and
//! φ-sweeps.
//!
//! Series are sampled on a uniform grid `tᵢ = i·dt` starting at zero.
//!
//! Oscillation measurements share one decomposition. The tail of the series
//! fixes a trend: an exponential `A e^{μt}` fitted to `ln s` over the last
//! quarter when the tail is positive (for a flat tail this is just the tail
//! mean), otherwise the additive tail mean. The residual relative to that
//! trend is the damped oscillation. Its envelope peaks are kept while they
//! stand well above the residual left in the tail, and leading peaks are
//! dropped once the envelope has fallen an order of magnitude, so the fit
//! sees the clean exponential regime rather than the initial transient.

use std::fmt;

use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::dynamics::{trajectory, Trajectory};
use crate::error::{Error, Result};
use crate::hamiltonian::{spectral_info, PtPhase, SpectralInfo};

/// Dead-band on `qλ` below which a pattern counts as asymptotically stable.
pub const PATTERN_DEAD_BAND: f64 = 1e-9;
/// Dead-band on a fitted `ln Tr Ω` slope (per unit time) for the fallback
/// classification.
pub const SLOPE_DEAD_BAND: f64 = 1e-4;
/// Tail fraction used for asymptotic slopes in reports and sweeps.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

const TREND_TAIL_FRACTION: f64 = 0.25;
/// Peaks must exceed the tail residual by this factor.
const NOISE_MARGIN: f64 = 100.0;
/// Absolute floor on the relative residual (rounding level of the trace).
const RELATIVE_FLOOR: f64 = 1e-12;
/// Envelope level, relative to its maximum, past which the transient is over.
const TRANSIENT_CUT: f64 = 0.1;

/// Long-time behaviour of `S₁(Ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    OverallDecrease,
    OverallIncrease,
    AsymptoticallyStable,
}

impl Pattern {
    pub fn as_str(&self) -> &'static str {
        match self {
            Pattern::OverallDecrease => "OverallDecrease",
            Pattern::OverallIncrease => "OverallIncrease",
            Pattern::AsymptoticallyStable => "AsymptoticallyStable",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Predicted pattern from the sign of `qλ`. `Tr Ω ∼ e^{2qλt}`, so `qλ > 0`
/// means `−ln Tr Ω`, and with it `S₁(Ω)`, falls overall.
pub fn classify_pattern(info: &SpectralInfo) -> Result<Pattern> {
    match (info.phase, info.lambda) {
        (PtPhase::Unbroken, Some(lambda)) => {
            let rate = info.q * lambda;
            Ok(if rate > PATTERN_DEAD_BAND {
                Pattern::OverallDecrease
            } else if rate < -PATTERN_DEAD_BAND {
                Pattern::OverallIncrease
            } else {
                Pattern::AsymptoticallyStable
            })
        }
        _ => Err(Error::ClassificationNeedsFit),
    }
}

/// Pattern implied by a fitted slope of `ln Tr Ω`.
pub fn pattern_from_log_trace_slope(slope: f64) -> Pattern {
    if slope > SLOPE_DEAD_BAND {
        Pattern::OverallDecrease
    } else if slope < -SLOPE_DEAD_BAND {
        Pattern::OverallIncrease
    } else {
        Pattern::AsymptoticallyStable
    }
}

/// `(slope, intercept)` of the least-squares line through `(x, y)`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("dt must be positive"))
    }
}

/// Least-squares slope of `ln(series)` over the trailing `tail_fraction` of
/// the grid.
pub fn fit_asymptotic_slope(series: &[f64], dt: f64, tail_fraction: f64) -> Result<f64> {
    check_dt(dt)?;
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::invalid("tail fraction must lie in (0, 1)"));
    }
    let count = (series.len() as f64 * tail_fraction).floor() as usize;
    if count < 10 {
        return Err(Error::InsufficientData(format!("tail has {count} points, need at least 10")));
    }
    let start = series.len() - count;
    let tail = &series[start..];
    if tail.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::invalid("series must be positive over the fitted tail"));
    }
    let ts: Vec<f64> = (start..series.len()).map(|i| i as f64 * dt).collect();
    let logs: Vec<f64> = tail.iter().map(|v| v.ln()).collect();
    Ok(linear_fit(&ts, &logs).0)
}

/// Residual of a series relative to its tail trend.
struct Residual {
    y: Vec<f64>,
    /// Growth rate μ of a multiplicative trend; zero for an additive one.
    trend_rate: f64,
    /// Magnitude that `y` is measured against.
    scale: f64,
    tail_start: usize,
}

fn detrend(series: &[f64]) -> Result<Residual> {
    let n = series.len();
    if n < 16 {
        return Err(Error::InsufficientData(format!("series of {n} points is too short")));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("series contains non-finite values"));
    }
    let tail_start = n - ((n as f64 * TREND_TAIL_FRACTION).floor() as usize).max(4);
    let tail = &series[tail_start..];
    if tail.iter().all(|&v| v > 0.0) {
        let ts: Vec<f64> = (tail_start..n).map(|i| i as f64).collect();
        let logs: Vec<f64> = tail.iter().map(|v| v.ln()).collect();
        let (slope, intercept) = linear_fit(&ts, &logs);
        let y = series
            .iter()
            .enumerate()
            .map(|(i, &v)| v / (intercept + slope * i as f64).exp() - 1.0)
            .collect();
        // `slope` is per sample here; callers rescale by dt.
        Ok(Residual { y, trend_rate: slope, scale: 1.0, tail_start })
    } else {
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        let scale = series.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Residual { y: series.iter().map(|v| v - mean).collect(), trend_rate: 0.0, scale, tail_start })
    }
}

#[derive(Debug, Clone, Copy)]
struct Peak {
    /// Fractional sample index.
    at: f64,
    amplitude: f64,
    positive: bool,
}

/// Local maxima of `|y|`, refined by a parabola through the log-magnitudes.
fn envelope_peaks(y: &[f64]) -> Vec<Peak> {
    let mut peaks = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        let (a, b, c) = (y[i - 1].abs(), y[i].abs(), y[i + 1].abs());
        if !(b > a && b >= c) {
            continue;
        }
        if a > 0.0 && c > 0.0 {
            let (la, lb, lc) = (a.ln(), b.ln(), c.ln());
            let curvature = la - 2.0 * lb + lc;
            if curvature < 0.0 {
                let offset = 0.5 * (la - lc) / curvature;
                if offset.abs() <= 1.0 {
                    let peak = lb - 0.25 * (la - lc) * offset;
                    peaks.push(Peak { at: i as f64 + offset, amplitude: peak.exp(), positive: y[i] > 0.0 });
                    continue;
                }
            }
        }
        peaks.push(Peak { at: i as f64, amplitude: b, positive: y[i] > 0.0 });
    }
    peaks
}

/// Envelope peaks usable for fitting: above the noise floor and past the
/// initial transient.
///
/// The noise level is read from second differences over the tail, which
/// vanish for a smooth, well-resolved oscillation but not for rounding noise.
fn usable_peaks(res: &Residual) -> Vec<Peak> {
    let all = envelope_peaks(&res.y);
    let Some(max_peak) = all.iter().map(|p| p.amplitude).reduce(f64::max) else {
        return Vec::new();
    };
    let tail = &res.y[res.tail_start..];
    let noise = tail
        .windows(3)
        .map(|w| (w[0] - 2.0 * w[1] + w[2]).abs() / 4.0)
        .fold(0.0f64, f64::max);
    let floor = (RELATIVE_FLOOR * res.scale).max((NOISE_MARGIN * noise).min(0.5 * max_peak));
    let kept: Vec<Peak> = all.into_iter().filter(|p| p.amplitude >= floor).collect();
    let Some(argmax) = (0..kept.len()).max_by(|&a, &b| kept[a].amplitude.total_cmp(&kept[b].amplitude))
    else {
        return kept;
    };
    let top = kept[argmax].amplitude;
    match kept[argmax..].iter().position(|p| p.amplitude <= TRANSIENT_CUT * top).map(|k| k + argmax) {
        Some(k) if kept.len() - k >= 3 => kept[k..].to_vec(),
        _ => kept,
    }
}

/// Dominant angular frequency of the damped oscillation in `series`.
///
/// Zero crossings of the detrended residual are located by linear
/// interpolation inside the window spanned by the usable envelope peaks; the
/// half period is the regression slope of crossing time against index.
pub fn extract_frequency(series: &[f64], dt: f64) -> Result<f64> {
    check_dt(dt)?;
    let res = detrend(series)?;
    let peaks = usable_peaks(&res);
    let (Some(first), Some(last)) = (peaks.first(), peaks.last()) else {
        return Err(Error::InsufficientData("no oscillation above the noise floor".into()));
    };
    let (lo, hi) = (first.at.floor() as usize, (last.at.ceil() as usize).min(res.y.len() - 1));
    let mut crossings = Vec::new();
    for i in lo..hi {
        let (a, b) = (res.y[i], res.y[i + 1]);
        if (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0) {
            crossings.push(i as f64 + a / (a - b));
        }
    }
    if crossings.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "{} zero crossings found, need at least two full periods",
            crossings.len()
        )));
    }
    let idx: Vec<f64> = (0..crossings.len()).map(|k| k as f64).collect();
    let (half_period, _) = linear_fit(&idx, &crossings);
    Ok(std::f64::consts::PI / (half_period * dt))
}

/// Exponential decay rate of the oscillation envelope in `series`, after
/// removing the asymptote (see the module docs). A positive value means the
/// oscillation dies out.
///
/// Positive and negative lobes are fitted separately and their slopes
/// averaged, which cancels a faster-decaying offset that lifts one lobe and
/// depresses the other.
pub fn fit_relaxation_rate(series: &[f64], dt: f64) -> Result<f64> {
    check_dt(dt)?;
    let res = detrend(series)?;
    let peaks = usable_peaks(&res);
    if peaks.len() < 2 {
        return Err(Error::InvalidFit("no decaying oscillation above the noise floor".into()));
    }
    let log_slope = |sel: &[&Peak]| {
        let ts: Vec<f64> = sel.iter().map(|p| p.at).collect();
        let logs: Vec<f64> = sel.iter().map(|p| p.amplitude.ln()).collect();
        linear_fit(&ts, &logs).0
    };
    let (pos, neg): (Vec<&Peak>, Vec<&Peak>) = peaks.iter().partition(|p| p.positive);
    let slope = if pos.len() >= 2 && neg.len() >= 2 {
        0.5 * (log_slope(&pos) + log_slope(&neg))
    } else {
        log_slope(&peaks.iter().collect::<Vec<_>>())
    };
    if slope >= 0.0 {
        return Err(Error::InvalidFit("oscillation envelope does not decay".into()));
    }
    Ok((-slope - res.trend_rate) / dt)
}

/// Pearson correlation coefficient.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid("series lengths differ"));
    }
    if a.len() < 3 {
        return Err(Error::InsufficientData("need at least three samples".into()));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Predicted versus measured behaviour of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternReport {
    pub pattern: Pattern,
    /// Predicted long-time slope of `S₁ ≈ −ln Tr Ω`, `−2Γ₁` (`−2qλ` when unbroken).
    pub predicted_slope: f64,
    pub measured_slope: Option<f64>,
    pub osc_frequency_predicted: f64,
    pub osc_frequency_measured: Option<f64>,
    /// `|2q r cosθ|`
    pub relaxation_rate_predicted: f64,
    pub relaxation_rate_measured: Option<f64>,
    pub pearson_corr_s1_vs_neglntr: Option<f64>,
}

/// Measures `traj` and compares against the spectral predictions in `info`.
/// Outside the unbroken phase the pattern comes from the measured slope.
pub fn analyze(traj: &Trajectory, info: &SpectralInfo) -> Result<PatternReport> {
    let tr = &traj.observables.tr_omega;
    let log_slope = fit_asymptotic_slope(tr, traj.dt, DEFAULT_TAIL_FRACTION).ok();
    let pattern = match classify_pattern(info) {
        Ok(p) => p,
        Err(Error::ClassificationNeedsFit) => match log_slope {
            Some(s) => pattern_from_log_trace_slope(s),
            None => return Err(Error::InvalidFit("no slope available to classify the pattern".into())),
        },
        Err(e) => return Err(e),
    };
    let obs = &traj.observables;
    let pearson_corr = if obs.s1_omega.len() == obs.neg_ln_tr.len() && !obs.s1_omega.is_empty() {
        pearson(&obs.s1_omega, &obs.neg_ln_tr).ok()
    } else {
        None
    };
    Ok(PatternReport {
        pattern,
        predicted_slope: -info.log_trace_slope(),
        measured_slope: log_slope.map(|s| -s),
        osc_frequency_predicted: info.oscillation_frequency(),
        osc_frequency_measured: extract_frequency(tr, traj.dt).ok(),
        relaxation_rate_predicted: info.relaxation_rate(),
        relaxation_rate_measured: fit_relaxation_rate(tr, traj.dt).ok(),
        pearson_corr_s1_vs_neglntr: pearson_corr,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub phi: f64,
    pub delta: f64,
    pub p: f64,
    pub q: f64,
    pub phase: PtPhase,
    pub pattern: Pattern,
    /// Fitted long-time slope of `−ln` of the extracted series.
    pub slope: Option<f64>,
    pub frequency: Option<f64>,
    pub rate: Option<f64>,
}

/// Largest absolute jump between adjacent rows, per column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Continuity {
    pub delta: f64,
    pub slope: f64,
    pub frequency: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub continuity: Continuity,
}

impl SweepTable {
    /// True when every measured column is defined on every row.
    pub fn fully_measured(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.slope.is_some() && r.frequency.is_some() && r.rate.is_some())
    }
}

fn max_jump(values: impl Iterator<Item = Option<f64>>) -> f64 {
    let v: Vec<Option<f64>> = values.collect();
    v.windows(2)
        .filter_map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => Some((b - a).abs()),
            _ => None,
        })
        .fold(0.0, f64::max)
}

/// Default sweep observable: `Tr Ω(t)`.
pub fn trace_series(traj: &Trajectory) -> Result<Vec<f64>> {
    Ok(traj.observables.tr_omega.clone())
}

/// One row of a φ-sweep.
pub fn sweep_row<F>(config: &ExperimentConfig, extractor: &F) -> Result<SweepRow>
where
    F: Fn(&Trajectory) -> Result<Vec<f64>>,
{
    let info = spectral_info(&config.params);
    let traj = trajectory(config)?;
    let series = extractor(&traj)?;
    let log_slope = fit_asymptotic_slope(&series, config.dt, DEFAULT_TAIL_FRACTION).ok();
    let pattern = match classify_pattern(&info) {
        Ok(p) => p,
        Err(_) => log_slope
            .map(pattern_from_log_trace_slope)
            .unwrap_or(Pattern::AsymptoticallyStable),
    };
    Ok(SweepRow {
        phi: config.params.phi,
        delta: info.delta,
        p: info.p,
        q: info.q,
        phase: info.phase,
        pattern,
        slope: log_slope.map(|s| -s),
        frequency: extract_frequency(&series, config.dt).ok(),
        rate: fit_relaxation_rate(&series, config.dt).ok(),
    })
}

/// Runs `base` at each φ of `phi_grid` (sorted, inside (−π, 0)) and measures
/// the series returned by `extractor`. Rows are computed in parallel and
/// returned in grid order.
pub fn sweep_phi<F>(base: &ExperimentConfig, phi_grid: &[f64], extractor: F) -> Result<SweepTable>
where
    F: Fn(&Trajectory) -> Result<Vec<f64>> + Sync,
{
    if phi_grid.is_empty() {
        return Err(Error::invalid("φ grid is empty"));
    }
    if phi_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("φ grid must be strictly increasing"));
    }
    if phi_grid.iter().any(|&phi| !(phi > -std::f64::consts::PI && phi < 0.0)) {
        return Err(Error::invalid("φ grid must lie inside (−π, 0)"));
    }
    let rows: Vec<SweepRow> = phi_grid
        .par_iter()
        .map(|&phi| sweep_row(&base.with_phi(phi), &extractor))
        .collect::<Result<_>>()?;
    let continuity = Continuity {
        delta: max_jump(rows.iter().map(|r| Some(r.delta))),
        slope: max_jump(rows.iter().map(|r| r.slope)),
        frequency: max_jump(rows.iter().map(|r| r.frequency)),
        rate: max_jump(rows.iter().map(|r| r.rate)),
    };
    Ok(SweepTable { rows, continuity })
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count).map(|i| start + step * i as f64).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::AnyonParams;
    use std::f64::consts::PI;

    fn sample(dt: f64, t_max: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = (t_max / dt).round() as usize;
        (0..=n).map(|i| f(i as f64 * dt)).collect()
    }

    #[test]
    fn slope_of_exponential_and_constant() {
        let s = sample(0.01, 20.0, |t| (0.3 * t).exp());
        assert!((fit_asymptotic_slope(&s, 0.01, 0.5).unwrap() - 0.3).abs() < 1e-10);
        let c = sample(0.01, 20.0, |_| 2.5);
        assert!(fit_asymptotic_slope(&c, 0.01, 0.5).unwrap().abs() < 1e-14);
    }

    #[test]
    fn slope_input_checks() {
        let s = sample(0.1, 10.0, |t| 5.0 - t);
        assert!(matches!(fit_asymptotic_slope(&s, 0.1, 0.5), Err(Error::InvalidInput(_))));
        assert!(fit_asymptotic_slope(&s, 0.1, 1.5).is_err());
        assert!(fit_asymptotic_slope(&s[..12], 0.1, 0.5).is_err());
    }

    #[test]
    fn frequency_of_pure_cosine() {
        let s = sample(0.01, 20.0, |t| (3.0 * t).cos());
        let w = extract_frequency(&s, 0.01).unwrap();
        assert!((w - 3.0).abs() / 3.0 < 0.005, "{w}");
    }

    #[test]
    fn frequency_needs_two_periods() {
        let s = sample(0.01, 3.0, |t| (1.0 * t).cos());
        assert!(matches!(extract_frequency(&s, 0.01), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn relaxation_of_synthetic_damped_cosine() {
        let s = sample(0.01, 40.0, |t| (-0.5 * t).exp() * (4.0 * t).cos() + 1.0);
        let k = fit_relaxation_rate(&s, 0.01).unwrap();
        assert!((k - 0.5).abs() / 0.5 < 0.02, "{k}");
        let w = extract_frequency(&s, 0.01).unwrap();
        assert!((w - 4.0).abs() / 4.0 < 0.005, "{w}");
    }

    #[test]
    fn relaxation_on_growing_trend() {
        // Oscillation decaying at 0.4 on top of a trend growing at 0.1.
        let s = sample(0.01, 80.0, |t| (0.1 * t).exp() * 2.0 + (-0.4 * t).exp() * (2.0 * t).cos());
        let k = fit_relaxation_rate(&s, 0.01).unwrap();
        assert!((k - 0.4).abs() / 0.4 < 0.02, "{k}");
    }

    #[test]
    fn flat_series_has_no_relaxation() {
        let s = sample(0.01, 20.0, |_| 1.0);
        assert!(matches!(fit_relaxation_rate(&s, 0.01), Err(Error::InvalidFit(_))));
    }

    #[test]
    fn pearson_basics() {
        let a: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        assert!((pearson(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&a, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(pearson(&a, &[1.0; 50]), Err(Error::UndefinedCorrelation)));
        assert!(pearson(&a[..2], &a[..2]).is_err());
    }

    #[test]
    fn classification_cases() {
        let theta = 3.0 * PI / 4.0;
        let phi = -PI / 36.0;
        let decrease = spectral_info(&AnyonParams::new(phi, 0.8, theta, 1.0, 0.0).unwrap());
        assert_eq!(classify_pattern(&decrease).unwrap(), Pattern::OverallDecrease);
        let increase = spectral_info(&AnyonParams::new(phi, 1.2, theta, 1.0, 0.0).unwrap());
        assert_eq!(classify_pattern(&increase).unwrap(), Pattern::OverallIncrease);
        let stable = spectral_info(&AnyonParams::new(phi, 1.0, theta, -1.0, 0.0).unwrap());
        assert_eq!(classify_pattern(&stable).unwrap(), Pattern::AsymptoticallyStable);
        let broken = spectral_info(&AnyonParams::new(phi, 2.0, 1.2, 0.5, 0.0).unwrap());
        assert!(matches!(classify_pattern(&broken), Err(Error::ClassificationNeedsFit)));
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let base = crate::config::presets::get("fig_phe_b").unwrap();
        assert!(sweep_phi(&base, &[], trace_series).is_err());
        assert!(sweep_phi(&base, &[-0.5, -1.0], trace_series).is_err());
        assert!(sweep_phi(&base, &[-4.0], trace_series).is_err());
        assert!(sweep_phi(&base, &[0.5], trace_series).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-1.0, 1.0, 5);
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }
}
