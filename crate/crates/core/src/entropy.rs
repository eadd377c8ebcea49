//! Information functionals over normalized (`ρ`) and non-normalized (`Ω`)
//! density matrices. All logarithms are natural (nats).
//!
//! Every functional here is spectral: for a Hermitian PSD `Ω` with
//! eigenvalues `ωᵢ` and `W = Σωᵢ`, the non-Hermitian Rényi entropy is
//! `ln(Σωᵢ^α / W)/(1−α)`, with closed limit forms at α ∈ {0, 1, ∞}. Values
//! are returned unclamped and may be negative once `Tr Ω > 1`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{evolve, normalize, StateSpec, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{mat_abs, mat_fn_psd, psd_eig, ComplexMatrix};

const UNIT_TRACE_TOL: f64 = 1e-10;

/// Rényi order: a finite value in (0,1)∪(1,∞) or one of the limit tags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Zero,
    One,
    Inf,
    Value(f64),
}

impl Alpha {
    /// Maps 0, 1 and +∞ onto their limit tags.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::invalid(format!("Rényi order must be non-negative, got {value}")));
        }
        Ok(if value == 0.0 {
            Alpha::Zero
        } else if value == 1.0 {
            Alpha::One
        } else if value.is_infinite() {
            Alpha::Inf
        } else {
            Alpha::Value(value)
        })
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Alpha::Zero => 0.0,
            Alpha::One => 1.0,
            Alpha::Inf => f64::INFINITY,
            Alpha::Value(v) => *v,
        }
    }

    /// Label used in column names, e.g. `0.5`, `1`, `inf`.
    pub fn label(&self) -> String {
        match self {
            Alpha::Zero => "0".into(),
            Alpha::One => "1".into(),
            Alpha::Inf => "inf".into(),
            Alpha::Value(v) => format!("{v}"),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Alpha {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Alpha::Inf),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("cannot parse Rényi order '{s}'")))
                .and_then(Alpha::new),
        }
    }
}

/// Positive part of the spectrum (the support), after the spectral floor.
fn support(omega: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(psd_eig(omega)?.eigenvalues.into_iter().filter(|&w| w > 0.0).collect())
}

fn spectral_renyi(support: &[f64], total: f64, alpha: Alpha) -> f64 {
    match alpha {
        Alpha::One => -support.iter().map(|&w| w / total * w.ln()).sum::<f64>(),
        Alpha::Zero => (support.len() as f64 / total).ln(),
        Alpha::Inf => -support.iter().fold(0.0f64, |m, &w| m.max(w)).ln(),
        Alpha::Value(a) => {
            let s: f64 = support.iter().map(|&w| w.powf(a)).sum();
            (s / total).ln() / (1.0 - a)
        }
    }
}

fn require_unit_trace(rho: &ComplexMatrix) -> Result<()> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > UNIT_TRACE_TOL || tr.im.abs() > UNIT_TRACE_TOL {
        return Err(Error::invalid(format!("expected unit trace, got {}", tr.re)));
    }
    Ok(())
}

/// Hermitian Rényi entropy `S^H_α(ρ) = ln Tr ρ^α / (1−α)` of a unit-trace state.
pub fn renyi_hermitian(rho: &ComplexMatrix, alpha: Alpha) -> Result<f64> {
    require_unit_trace(rho)?;
    let w = support(rho)?;
    Ok(spectral_renyi(&w, 1.0, alpha))
}

pub fn von_neumann(rho: &ComplexMatrix) -> Result<f64> {
    renyi_hermitian(rho, Alpha::One)
}

/// Non-Hermitian Rényi entropy `S_α(Ω) = ln Tr(Ω^{α−1} ρ) / (1−α)`, with
/// `S₁(Ω) = −Tr(ρ ln Ω)`.
pub fn renyi_nh(omega: &ComplexMatrix, alpha: Alpha) -> Result<f64> {
    let w = support(omega)?;
    let total: f64 = w.iter().sum();
    if total <= crate::linalg::EPS_EIG {
        return Err(Error::VanishingTrace { trace: total });
    }
    Ok(spectral_renyi(&w, total, alpha))
}

/// `−ln Tr Ω`.
pub fn neg_log_trace(omega: &ComplexMatrix) -> Result<f64> {
    let trace = omega.trace().re;
    if trace <= crate::linalg::EPS_EIG {
        return Err(Error::VanishingTrace { trace });
    }
    Ok(-trace.ln())
}

/// `D = ½ Tr|ρ₁ − ρ₂|` for unit-trace states.
pub fn trace_distance(rho1: &ComplexMatrix, rho2: &ComplexMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::invalid("states have different dimensions"));
    }
    require_unit_trace(rho1)?;
    require_unit_trace(rho2)?;
    psd_eig(rho1)?;
    psd_eig(rho2)?;
    Ok(0.5 * mat_abs(&(rho1 - rho2))?.trace().re)
}

/// Conditional entropy `S(A|B) = −Tr(ρ_AB (ln ρ_AB − ln(I_A ⊗ ρ_B)))`.
///
/// Both logarithms are support-restricted; `ρ_AB` is supported inside
/// `I_A ⊗ supp(ρ_B)`, so the trace is exact.
pub fn conditional_entropy(rho_ab: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    require_unit_trace(rho_ab)?;
    let rho_b = rho_ab.partial_trace_first(dim_a, dim_b)?;
    let ln_ab = mat_fn_psd(rho_ab, f64::ln)?;
    let ln_b = ComplexMatrix::identity(dim_a).kron(&mat_fn_psd(&rho_b, f64::ln)?);
    let conditional_log = &ln_ab - &ln_b;
    Ok(-(rho_ab * &conditional_log).trace().re)
}

struct PointObservables {
    tr: f64,
    neg_ln_tr: f64,
    s1: f64,
    s_alpha: Vec<f64>,
    s_h_alpha: Vec<f64>,
    von_neumann: f64,
}

fn point_observables(omega: &ComplexMatrix, alphas: &[Alpha]) -> Result<PointObservables> {
    let rho = normalize(omega)?;
    Ok(PointObservables {
        tr: omega.trace().re,
        neg_ln_tr: neg_log_trace(omega)?,
        s1: renyi_nh(omega, Alpha::One)?,
        s_alpha: alphas.iter().map(|&a| renyi_nh(omega, a)).collect::<Result<_>>()?,
        s_h_alpha: alphas.iter().map(|&a| renyi_hermitian(&rho, a)).collect::<Result<_>>()?,
        von_neumann: von_neumann(&rho)?,
    })
}

/// Fills every observable series of `traj`. When `dist_pair` is given, both
/// states are co-evolved under the trajectory's Hamiltonian and the trace
/// distance of their normalizations is recorded.
pub fn annotate_trajectory(
    mut traj: Trajectory,
    alphas: &[Alpha],
    dist_pair: Option<&(StateSpec, StateSpec)>,
) -> Result<Trajectory> {
    let points: Vec<PointObservables> = traj
        .omegas
        .par_iter()
        .map(|o| point_observables(o, alphas))
        .collect::<Result<_>>()?;

    let dist = match dist_pair {
        None => None,
        Some((first, second)) => {
            let n = traj.hamiltonian.dim();
            let (a, b) = (first.density(n)?, second.density(n)?);
            let h = &traj.hamiltonian;
            let series = traj
                .times
                .par_iter()
                .map(|&t| {
                    let ra = normalize(&evolve(&a, h, t)?)?;
                    let rb = normalize(&evolve(&b, h, t)?)?;
                    trace_distance(&ra, &rb)
                })
                .collect::<Result<Vec<f64>>>()?;
            Some(series)
        }
    };

    let obs = &mut traj.observables;
    obs.tr_omega = points.iter().map(|p| p.tr).collect();
    obs.neg_ln_tr = points.iter().map(|p| p.neg_ln_tr).collect();
    obs.s1_omega = points.iter().map(|p| p.s1).collect();
    obs.von_neumann = points.iter().map(|p| p.von_neumann).collect();
    obs.s_alpha = alphas
        .iter()
        .enumerate()
        .map(|(k, &a)| (a, points.iter().map(|p| p.s_alpha[k]).collect()))
        .collect();
    obs.s_h_alpha = alphas
        .iter()
        .enumerate()
        .map(|(k, &a)| (a, points.iter().map(|p| p.s_h_alpha[k]).collect()))
        .collect();
    obs.dist = dist;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, ONE, ZERO};
    use std::f64::consts::{E, LN_2};

    #[test]
    fn alpha_parsing_and_tags() {
        assert_eq!("inf".parse::<Alpha>().unwrap(), Alpha::Inf);
        assert_eq!("1".parse::<Alpha>().unwrap(), Alpha::One);
        assert_eq!("0".parse::<Alpha>().unwrap(), Alpha::Zero);
        assert_eq!("0.5".parse::<Alpha>().unwrap(), Alpha::Value(0.5));
        assert!("-1".parse::<Alpha>().is_err());
        assert!("abc".parse::<Alpha>().is_err());
        assert_eq!(Alpha::Value(0.5).label(), "0.5");
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let psi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let rho = ComplexMatrix::outer(&psi);
        for a in [Alpha::Zero, Alpha::Value(0.5), Alpha::One, Alpha::Value(2.0), Alpha::Inf] {
            assert!(renyi_hermitian(&rho, a).unwrap().abs() < 1e-14, "{a}");
        }
    }

    #[test]
    fn maximally_mixed_von_neumann() {
        let rho = ComplexMatrix::identity(2).scale_real(0.5);
        assert!((von_neumann(&rho).unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn collision_entropy_example() {
        let rho = ComplexMatrix::diag_real(&[0.75, 0.25]);
        let s2 = renyi_hermitian(&rho, Alpha::Value(2.0)).unwrap();
        assert!((s2 - (-(0.625f64).ln())).abs() < 1e-15);
        assert!((s2 - 0.4700).abs() < 1e-4);
    }

    #[test]
    fn renyi_hermitian_rejects_non_unit_trace() {
        assert!(renyi_hermitian(&ComplexMatrix::identity(2), Alpha::One).is_err());
    }

    #[test]
    fn scaled_identity_gives_negative_entropy() {
        let omega = ComplexMatrix::identity(2).scale_real(E);
        assert!((renyi_nh(&omega, Alpha::One).unwrap() + 1.0).abs() < 1e-15);
        assert!((neg_log_trace(&omega).unwrap() + (2.0 * E).ln()).abs() < 1e-15);
        assert!((neg_log_trace(&omega).unwrap() + 1.6931).abs() < 1e-4);
    }

    #[test]
    fn vanishing_trace_is_an_error() {
        let z = ComplexMatrix::zeros(2);
        assert!(matches!(renyi_nh(&z, Alpha::One), Err(Error::VanishingTrace { .. })));
        assert!(matches!(neg_log_trace(&z), Err(Error::VanishingTrace { .. })));
    }

    #[test]
    fn trace_distance_examples() {
        let a = ComplexMatrix::diag_real(&[0.75, 0.25]);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(trace_distance(&a, &a).unwrap().abs() < 1e-15);
        assert!((trace_distance(&a, &half).unwrap() - 0.25).abs() < 1e-15);
        let up = ComplexMatrix::outer(&[ONE, ZERO]);
        let down = ComplexMatrix::outer(&[ZERO, ONE]);
        assert!((trace_distance(&up, &down).unwrap() - 1.0).abs() < 1e-15);
        assert!(trace_distance(&up, &ComplexMatrix::identity(2)).is_err());
    }

    fn bell() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)])
    }

    #[test]
    fn conditional_entropy_examples() {
        assert!((conditional_entropy(&bell(), 2, 2).unwrap() + LN_2).abs() < 1e-12);
        let product = ComplexMatrix::outer(&[ONE, ZERO, ZERO, ZERO]);
        assert!(conditional_entropy(&product, 2, 2).unwrap().abs() < 1e-12);
        let classical = ComplexMatrix::diag_real(&[0.5, 0.0, 0.0, 0.5]);
        assert!(conditional_entropy(&classical, 2, 2).unwrap().abs() < 1e-12);
        assert!(conditional_entropy(&bell(), 3, 2).is_err());
        assert!(conditional_entropy(&ComplexMatrix::identity(4), 2, 2).is_err());
    }
}
