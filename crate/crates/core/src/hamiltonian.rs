//! Two-level anyonic-PT symmetric Hamiltonians
//! `H_φ = e^{-iφ/2} [[r e^{iθ}, r₁ e^{iθ₁}], [r₁ e^{-iθ₁}, r e^{-iθ}]]`
//! and the scalars that govern their spectra.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, EPS_EP, I};

/// The five real parameters of `H_φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnyonParams {
    pub phi: f64,
    pub r: f64,
    pub theta: f64,
    pub r1: f64,
    pub theta1: f64,
}

impl AnyonParams {
    pub fn new(phi: f64, r: f64, theta: f64, r1: f64, theta1: f64) -> Result<Self> {
        let p = AnyonParams { phi, r, theta, r1, theta1 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.phi, self.r, self.theta, self.r1, self.theta1];
        if all.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::invalid("Hamiltonian parameters must be finite"))
        }
    }

    pub fn with_phi(self, phi: f64) -> Self {
        AnyonParams { phi, ..self }
    }

    /// `δ = r₁² − r² sin²θ`.
    pub fn delta(&self) -> f64 {
        self.r1 * self.r1 - (self.r * self.theta.sin()).powi(2)
    }

    /// `e^{-iφ/2} = p + i q`.
    pub(crate) fn phase_factor(&self) -> C64 {
        C64::from_polar(1.0, -self.phi / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtPhase {
    Unbroken,
    Broken,
    ExceptionalPoint,
}

impl PtPhase {
    pub fn from_delta(delta: f64) -> Self {
        if delta > EPS_EP {
            PtPhase::Unbroken
        } else if delta < -EPS_EP {
            PtPhase::Broken
        } else {
            PtPhase::ExceptionalPoint
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PtPhase::Unbroken => "unbroken",
            PtPhase::Broken => "broken",
            PtPhase::ExceptionalPoint => "exceptional-point",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralInfo {
    pub delta: f64,
    /// `cos(φ/2)`
    pub p: f64,
    /// `-sin(φ/2)`
    pub q: f64,
    pub e_plus: C64,
    pub e_minus: C64,
    /// `r cosθ + √δ`; only defined outside the broken phase.
    pub lambda: Option<f64>,
    /// `(r₁² + r² sin²θ)/|δ|` (`a` when unbroken, `b` when broken); undefined at the EP.
    pub amp_ratio: Option<f64>,
    pub phase: PtPhase,
    /// `r cosθ`, kept because relaxation and asymptotics depend on it directly.
    pub r_cos_theta: f64,
}

impl SpectralInfo {
    /// Angular frequency of the oscillating term of `Tr Ω(t)`:
    /// `2p√δ` when unbroken, `2q√(−δ)` when broken, zero at the EP.
    pub fn oscillation_frequency(&self) -> f64 {
        match self.phase {
            PtPhase::Unbroken => 2.0 * self.p * self.delta.sqrt(),
            PtPhase::Broken => 2.0 * self.q * (-self.delta).sqrt(),
            PtPhase::ExceptionalPoint => 0.0,
        }
    }

    /// Envelope decay rate of the oscillating term, `|2q r cosθ|`.
    pub fn relaxation_rate(&self) -> f64 {
        (2.0 * self.q * self.r_cos_theta).abs()
    }

    /// Largest imaginary part Γ₁ of the two eigenvalues.
    pub fn max_gain(&self) -> f64 {
        self.e_plus.im.max(self.e_minus.im)
    }

    /// Long-time growth rate of `ln Tr Ω`, i.e. `2Γ₁`. Equals `2qλ` in the
    /// unbroken phase.
    pub fn log_trace_slope(&self) -> f64 {
        2.0 * self.max_gain()
    }
}

/// The bracketed PT-symmetric matrix `H_PT` (φ stripped).
pub fn pt_symmetric_part(params: &AnyonParams) -> ComplexMatrix {
    let AnyonParams { r, theta, r1, theta1, .. } = *params;
    let rows = [
        [C64::from_polar(r, theta), C64::from_polar(r1, theta1)],
        [C64::from_polar(r1, -theta1), C64::from_polar(r, -theta)],
    ];
    ComplexMatrix::from_rows(rows).expect("finite parameters give finite entries")
}

pub fn build_hamiltonian(params: &AnyonParams) -> ComplexMatrix {
    pt_symmetric_part(params).scale(params.phase_factor())
}

pub fn spectral_info(params: &AnyonParams) -> SpectralInfo {
    let delta = params.delta();
    let half = params.phi / 2.0;
    let p = half.cos();
    let q = -half.sin();
    let rc = params.r * params.theta.cos();
    let root = if delta >= 0.0 {
        C64::new(delta.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-delta).sqrt())
    };
    let phase_factor = params.phase_factor();
    let phase = PtPhase::from_delta(delta);
    let lambda = match phase {
        PtPhase::Broken => None,
        _ => Some(rc + delta.max(0.0).sqrt()),
    };
    let amp_ratio = match phase {
        PtPhase::ExceptionalPoint => None,
        _ => Some((params.r1.powi(2) + (params.r * params.theta.sin()).powi(2)) / delta.abs()),
    };
    SpectralInfo {
        delta,
        p,
        q,
        e_plus: phase_factor * (rc + root),
        e_minus: phase_factor * (rc - root),
        lambda,
        amp_ratio,
        phase,
        r_cos_theta: rc,
    }
}

/// `‖P·conj(H)·P − e^{iφ}H‖_F / ‖H‖_F` with `P = σ_x`.
pub fn verify_anyonic_pt(h: &ComplexMatrix, phi: f64) -> Result<f64> {
    if h.dim() != 2 {
        return Err(Error::invalid("anyonic-PT check is defined for 2x2 matrices"));
    }
    let px = ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]])?;
    let transformed = &(&px * &h.conj()) * &px;
    let target = h.scale(C64::from_polar(1.0, phi));
    let norm = h.norm_fro();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok((&transformed - &target).norm_fro() / norm)
}

#[derive(Debug, Clone)]
pub struct PtDecomposition {
    pub h_pt: ComplexMatrix,
    /// `i·H_PT`
    pub h_apt: ComplexMatrix,
    pub p: f64,
    pub q: f64,
}

impl PtDecomposition {
    /// `p·H_PT + q·H_APT`.
    pub fn recombine(&self) -> ComplexMatrix {
        &self.h_pt.scale_real(self.p) + &self.h_apt.scale_real(self.q)
    }
}

pub fn decompose_pt_apt(params: &AnyonParams) -> PtDecomposition {
    let h_pt = pt_symmetric_part(params);
    let h_apt = h_pt.scale(I);
    let half = params.phi / 2.0;
    PtDecomposition { h_pt, h_apt, p: half.cos(), q: -half.sin() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn params(phi: f64, r: f64, theta: f64, r1: f64, theta1: f64) -> AnyonParams {
        AnyonParams::new(phi, r, theta, r1, theta1).unwrap()
    }

    #[test]
    fn identity_and_sigma_x_cases() {
        let h = build_hamiltonian(&params(0.0, 1.0, 0.0, 0.0, 0.0));
        assert!((&h - &ComplexMatrix::identity(2)).norm_fro() < 1e-15);
        let h = build_hamiltonian(&params(0.0, 0.0, 0.0, 1.0, 0.0));
        let sx = ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!((&h - &sx).norm_fro() < 1e-15);
    }

    #[test]
    fn phi_minus_pi_is_anti_pt() {
        let p = params(-PI, 0.7, 0.4, 1.3, 0.2);
        let h = build_hamiltonian(&p);
        let want = pt_symmetric_part(&p).scale(I);
        assert!((&h - &want).norm_fro() < 1e-14);
    }

    #[test]
    fn spectral_info_worked_example() {
        let info = spectral_info(&params(-FRAC_PI_2, 1.0, 3.0 * PI / 4.0, 1.0, 0.0));
        assert!((info.delta - 0.5).abs() < 1e-15);
        assert!((info.p - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((info.q - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((info.amp_ratio.unwrap() - 3.0).abs() < 1e-14);
        assert!(info.lambda.unwrap().abs() < 1e-15);
        assert_eq!(info.phase, PtPhase::Unbroken);
    }

    #[test]
    fn continuous_preset_params_are_broken() {
        let info = spectral_info(&params(-1.0, 40.0, 33.0 * PI / 64.0, 32.0, 0.0));
        assert!(info.delta < 0.0);
        assert_eq!(info.phase, PtPhase::Broken);
        assert!(info.lambda.is_none());
        assert!(info.amp_ratio.unwrap() >= 1.0);
    }

    #[test]
    fn exceptional_point_classification() {
        let theta = 0.9f64;
        let r = 2.0;
        let info = spectral_info(&params(-0.3, r, theta, r * theta.sin(), 0.0));
        assert_eq!(info.phase, PtPhase::ExceptionalPoint);
        assert!(info.amp_ratio.is_none());
    }

    #[test]
    fn anyonic_pt_residuals() {
        let p = params(-0.8, 1.1, 0.3, -0.7, 1.9);
        assert!(verify_anyonic_pt(&build_hamiltonian(&p), p.phi).unwrap() <= 1e-12);
        let d = ComplexMatrix::diag_real(&[1.0, 2.0]);
        assert!(verify_anyonic_pt(&d, 0.0).unwrap() > 0.1);
        assert!(verify_anyonic_pt(&build_hamiltonian(&p), p.phi + 0.5).unwrap() > 0.1);
        assert!(verify_anyonic_pt(&ComplexMatrix::identity(3), 0.0).is_err());
    }

    #[test]
    fn decomposition_endpoints() {
        let base = params(0.0, 0.9, 1.2, 0.4, 0.3);
        let d = decompose_pt_apt(&base);
        assert!((d.p - 1.0).abs() < 1e-15 && d.q.abs() < 1e-15);
        assert!((&build_hamiltonian(&base) - &d.h_pt).norm_fro() < 1e-14);

        let apt = base.with_phi(-PI);
        let d = decompose_pt_apt(&apt);
        assert!(d.p.abs() < 1e-15 && (d.q - 1.0).abs() < 1e-15);
        assert!((&build_hamiltonian(&apt) - &d.h_apt).norm_fro() < 1e-14);
        assert!(d.h_pt.commutator(&d.h_apt).norm_fro() < 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(AnyonParams::new(f64::NAN, 1.0, 0.0, 1.0, 0.0).is_err());
    }
}
