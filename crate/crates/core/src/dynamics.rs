//! Non-unitary evolution `Ω(t) = e^{-iHt} Ω(0) e^{iH†t}` of (non-normalized)
//! density matrices, by numeric exponentials and by the closed forms that
//! exist for two-level anyonic-PT Hamiltonians.

use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::entropy::Alpha;
use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, spectral_info, AnyonParams, PtPhase};
use crate::linalg::{
    self, expm, general_eig, inner, solve, vec_norm, ComplexMatrix, C64, EPS_EIG, EPS_EP, I, ONE,
    ZERO,
};

/// Tolerance for the Hermitian/PSD checks on evolved states.
const STATE_TOL: f64 = 1e-10;
/// Largest admissible number of grid points.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// Initial state description.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// `I/n`
    MaximallyMixed,
    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    Pure(Vec<C64>),
    Matrix(ComplexMatrix),
}

impl StateSpec {
    /// Computational basis vector `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        StateSpec::Pure(v)
    }

    /// Materializes `Ω(0)`, checking it is Hermitian PSD with `0 < Tr ≤ 1`.
    pub fn density(&self, dim: usize) -> Result<ComplexMatrix> {
        let omega = match self {
            StateSpec::MaximallyMixed => ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            StateSpec::Pure(v) => {
                if v.len() != dim {
                    return Err(Error::invalid(format!(
                        "state vector has {} components, system dimension is {dim}",
                        v.len()
                    )));
                }
                let norm = vec_norm(v);
                if (norm - 1.0).abs() > STATE_TOL {
                    return Err(Error::invalid(format!("state vector norm {norm} is not 1")));
                }
                ComplexMatrix::outer(v)
            }
            StateSpec::Matrix(m) => {
                if m.dim() != dim {
                    return Err(Error::invalid("initial matrix dimension mismatch"));
                }
                m.clone()
            }
        };
        omega.ensure_finite()?;
        omega.ensure_hermitian()?;
        linalg::psd_eig(&omega)?;
        let tr = omega.trace().re;
        if !(tr > 0.0 && tr <= 1.0 + 1e-12) {
            return Err(Error::invalid(format!("initial trace {tr} outside (0, 1]")));
        }
        Ok(omega)
    }
}

/// Observable series attached to a trajectory. Empty until filled by
/// [`crate::entropy::annotate_trajectory`], except `tr_omega`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Observables {
    pub tr_omega: Vec<f64>,
    pub neg_ln_tr: Vec<f64>,
    pub s1_omega: Vec<f64>,
    pub s_alpha: Vec<(Alpha, Vec<f64>)>,
    pub s_h_alpha: Vec<(Alpha, Vec<f64>)>,
    pub von_neumann: Vec<f64>,
    pub dist: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub dt: f64,
    pub hamiltonian: ComplexMatrix,
    pub omegas: Vec<ComplexMatrix>,
    pub observables: Observables,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `e^{-iHt}` via the general matrix exponential.
pub fn propagator_numeric(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(Error::invalid("time must be finite"));
    }
    expm(&h.scale(C64::new(0.0, -t)))
}

/// The traceless part `M` of `H_PT`, with `M² = δI`.
pub fn coupling_matrix(params: &AnyonParams) -> ComplexMatrix {
    let s = params.r * params.theta.sin();
    let rows = [
        [C64::new(0.0, s), C64::from_polar(params.r1, params.theta1)],
        [C64::from_polar(params.r1, -params.theta1), C64::new(0.0, -s)],
    ];
    ComplexMatrix::from_rows(rows).expect("finite parameters give finite entries")
}

fn checked_coupling(params: &AnyonParams) -> Result<(ComplexMatrix, f64)> {
    params.validate()?;
    let m = coupling_matrix(params);
    let delta = params.delta();
    let residual = (&(&m * &m) - &ComplexMatrix::identity(2).scale_real(delta)).norm_fro();
    if residual > 1e-10 * m.norm_fro().powi(2).max(1.0) {
        return Err(Error::InternalConsistency(format!("M² − δI residual {residual:.3e}")));
    }
    Ok((m, delta))
}

/// Principal square root of a real δ: `√δ` or `i√(−δ)`.
fn principal_root(delta: f64) -> C64 {
    if delta >= 0.0 {
        C64::new(delta.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-delta).sqrt())
    }
}

/// The bracketed factor `M₁` of the closed-form propagator, so that
/// `U(t) = e^{-it e^{-iφ/2} r cosθ} · M₁(t)`.
///
/// Inside the exceptional-point band this is the linear form `I − it e^{-iφ/2} M`.
pub fn propagator_core(params: &AnyonParams, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(Error::invalid("time must be finite"));
    }
    let (m, delta) = checked_coupling(params)?;
    let phase = params.phase_factor();
    let id = ComplexMatrix::identity(2);
    if delta.abs() <= EPS_EP {
        return Ok(&id - &m.scale(I * t * phase));
    }
    let root = principal_root(delta);
    let z = phase * root * t;
    Ok(&id.scale(z.cos()) - &m.scale(I * z.sin() / root))
}

/// Closed-form `U(t) = e^{-itH_φ}`.
pub fn propagator_closed(params: &AnyonParams, t: f64) -> Result<ComplexMatrix> {
    let core = propagator_core(params, t)?;
    let rc = params.r * params.theta.cos();
    let prefactor = (-I * t * params.phase_factor() * rc).exp();
    Ok(core.scale(prefactor))
}

fn min_eigenvalue_hermitian(m: &ComplexMatrix) -> Result<f64> {
    if m.dim() == 2 {
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = m[(0, 1)];
        let half_diff = (a - d) / 2.0;
        return Ok((a + d) / 2.0 - (half_diff * half_diff + b.norm_sqr()).sqrt());
    }
    Ok(linalg::herm_eig(m)?.eigenvalues[0])
}

fn check_evolved(omega: &ComplexMatrix) -> Result<()> {
    let scale = omega.norm_fro();
    let herm = (omega - &omega.adjoint()).norm_fro();
    if herm > STATE_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NumericDegradation(format!(
            "evolved state lost Hermiticity (residual {herm:.3e})"
        )));
    }
    let min = min_eigenvalue_hermitian(omega)?;
    if min < -STATE_TOL * scale {
        return Err(Error::NumericDegradation(format!(
            "evolved state lost positivity (eigenvalue {min:.3e})"
        )));
    }
    Ok(())
}

fn evolve_unchecked(omega0: &ComplexMatrix, h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let u = propagator_numeric(h, t)?;
    let omega = &(&u * omega0) * &u.adjoint();
    check_evolved(&omega)?;
    Ok(omega)
}

fn validate_initial(omega0: &ComplexMatrix, h: &ComplexMatrix) -> Result<()> {
    if omega0.dim() != h.dim() {
        return Err(Error::invalid("state and Hamiltonian dimensions differ"));
    }
    h.ensure_finite()?;
    omega0.ensure_finite()?;
    omega0.ensure_hermitian()?;
    linalg::psd_eig(omega0)?;
    if omega0.trace().re <= 0.0 {
        return Err(Error::invalid("initial state must have positive trace"));
    }
    Ok(())
}

/// `Ω(t) = U Ω(0) U†` with `U = e^{-iHt}`.
pub fn evolve(omega0: &ComplexMatrix, h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    validate_initial(omega0, h)?;
    evolve_unchecked(omega0, h, t)
}

/// `ρ = Ω / Tr Ω`.
pub fn normalize(omega: &ComplexMatrix) -> Result<ComplexMatrix> {
    omega.ensure_finite()?;
    omega.ensure_hermitian()?;
    let trace = omega.trace().re;
    if trace <= EPS_EIG {
        return Err(Error::VanishingTrace { trace });
    }
    Ok(omega.scale_real(1.0 / trace))
}

/// Closed-form `Tr Ω(t)` for `Ω(0) = I/2`, outside the exceptional-point band.
///
/// With `x = 2q t r cosθ` and `κ` the amplitude ratio (`a` or `b`), the trace is
/// `e^x [(1−κ)/2 cos A + (1+κ)/2 cosh B]` where `(A, B) = (2p√δ t, 2q√δ t)`
/// for δ > 0 and `(2q√−δ t, 2p√−δ t)` for δ < 0. It is evaluated as
/// `e^x [(cos A + cosh B)/2 + κ (sinh²(B/2) + sin²(A/2))]`, which avoids the
/// cancellation between the two κ-weighted terms near the EP.
pub fn trace_closed(params: &AnyonParams, t: f64) -> Result<f64> {
    params.validate()?;
    let info = spectral_info(params);
    let kappa = match (info.phase, info.amp_ratio) {
        (PtPhase::ExceptionalPoint, _) | (_, None) => {
            return Err(Error::UnsupportedBranch(
                "no closed trace formula inside the exceptional-point band".into(),
            ))
        }
        (_, Some(k)) => k,
    };
    let root = info.delta.abs().sqrt();
    let (osc_arg, hyp_arg) = match info.phase {
        PtPhase::Unbroken => (2.0 * info.p * root * t, 2.0 * info.q * root * t),
        _ => (2.0 * info.q * root * t, 2.0 * info.p * root * t),
    };
    let x = 2.0 * info.q * t * info.r_cos_theta;
    let half_sum = (osc_arg.cos() + hyp_arg.cosh()) / 2.0;
    let spread = (hyp_arg / 2.0).sinh().powi(2) + (osc_arg / 2.0).sin().powi(2);
    let value = x.exp() * (half_sum + kappa * spread);
    if !value.is_finite() {
        return Err(Error::NumericDegradation(format!("closed trace overflowed at t = {t}")));
    }
    Ok(value)
}

/// Long-time estimate `Tr Ω(t) ≈ (1+a)/4 · e^{2qλt}`, unbroken phase only.
///
/// Only accurate once the subdominant terms have died out, i.e. for
/// `t ≫ 1/(2q√δ)`.
pub fn trace_asymptotic(params: &AnyonParams, t: f64) -> Result<f64> {
    params.validate()?;
    let info = spectral_info(params);
    match (info.phase, info.amp_ratio, info.lambda) {
        (PtPhase::Unbroken, Some(a), Some(lambda)) => {
            Ok((1.0 + a) / 4.0 * (2.0 * info.q * lambda * t).exp())
        }
        _ => Err(Error::UnsupportedBranch("asymptotic trace law needs δ > 0".into())),
    }
}

/// Two-dominant-mode approximation of `−ln Tr Ω(t)` for a pure initial state.
///
/// The initial vector is expanded in the unit-norm right eigenvectors of `H`;
/// the two modes with the largest imaginary parts Γ₁ ≥ Γ₂ are kept.
#[derive(Debug, Clone)]
pub struct TwoModeAsymptote {
    /// `(E_n + iΓ_n, c_n)` for the two retained modes, Γ descending.
    pub modes: [(C64, C64); 2],
    /// `⟨φ₂|φ₁⟩`
    pub overlap: C64,
    /// Imaginary parts of all eigenvalues, descending.
    pub gains: Vec<f64>,
}

impl TwoModeAsymptote {
    pub fn new(h: &ComplexMatrix, psi0: &[C64]) -> Result<Self> {
        if h.dim() < 2 {
            return Err(Error::invalid("two-mode asymptote needs at least two levels"));
        }
        if psi0.len() != h.dim() {
            return Err(Error::invalid("initial vector dimension mismatch"));
        }
        if (vec_norm(psi0) - 1.0).abs() > STATE_TOL {
            return Err(Error::invalid("initial vector must have unit norm"));
        }
        let eig = general_eig(h)?;
        if eig.defective {
            return Err(Error::UnsupportedBranch(
                "Hamiltonian is defective (exceptional point)".into(),
            ));
        }
        let coeffs = solve(&eig.eigenvectors, psi0)?;
        let mut order: Vec<usize> = (0..h.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].im.total_cmp(&eig.eigenvalues[a].im));
        let (k1, k2) = (order[0], order[1]);
        let overlap = inner(&eig.eigenvectors.column(k2), &eig.eigenvectors.column(k1));
        Ok(TwoModeAsymptote {
            modes: [(eig.eigenvalues[k1], coeffs[k1]), (eig.eigenvalues[k2], coeffs[k2])],
            overlap,
            gains: order.iter().map(|&k| eig.eigenvalues[k].im).collect(),
        })
    }

    /// Two-mode estimate of `Tr Ω(t)`.
    pub fn trace(&self, t: f64) -> f64 {
        let [(l1, c1), (l2, c2)] = self.modes;
        let (g1, g2) = (l1.im, l2.im);
        let cross = c1 * c2.conj() * (-I * (l1.re - l2.re) * t).exp() * self.overlap;
        c1.norm_sqr() * (2.0 * g1 * t).exp()
            + c2.norm_sqr() * (2.0 * g2 * t).exp()
            + 2.0 * cross.re * ((g1 + g2) * t).exp()
    }

    pub fn neg_log_trace(&self, t: f64) -> Result<f64> {
        let tr = self.trace(t);
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::NumericDegradation(format!("two-mode trace {tr:.3e} at t = {t}")));
        }
        Ok(-tr.ln())
    }

    /// Gap between the retained and the first discarded mode (`Γ₂ − Γ₃`),
    /// or `None` for two-level systems.
    pub fn discarded_gap(&self) -> Option<f64> {
        self.gains.get(2).map(|g3| self.gains[1] - g3)
    }
}

pub fn logtrace_asymptotic(h: &ComplexMatrix, psi0: &[C64], t: f64) -> Result<f64> {
    TwoModeAsymptote::new(h, psi0)?.neg_log_trace(t)
}

/// Uniform grid `0, dt, 2dt, …` up to `t_max` inclusive (within rounding).
pub fn time_grid(dt: f64, t_max: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt must be positive and finite"));
    }
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::invalid("t_max must be non-negative and finite"));
    }
    let steps = (t_max / dt + 1e-9).floor();
    if steps + 1.0 > MAX_GRID_POINTS as f64 {
        return Err(Error::invalid(format!("grid of {steps} steps exceeds the size guard")));
    }
    Ok((0..=steps as usize).map(|i| i as f64 * dt).collect())
}

/// Evolves `omega0` under `h` over a uniform grid. Each `Ω(tᵢ)` is computed
/// directly from `t = 0`; nothing is chained between grid points.
pub fn trajectory_for(
    h: &ComplexMatrix,
    omega0: &ComplexMatrix,
    dt: f64,
    t_max: f64,
) -> Result<Trajectory> {
    validate_initial(omega0, h)?;
    let times = time_grid(dt, t_max)?;
    let omegas: Vec<ComplexMatrix> = times
        .par_iter()
        .map(|&t| evolve_unchecked(omega0, h, t))
        .collect::<Result<_>>()?;
    let tr_omega: Vec<f64> = omegas.iter().map(|o| o.trace().re).collect();
    if let Some(i) = tr_omega.iter().position(|&w| !(w > 0.0)) {
        return Err(Error::NumericDegradation(format!(
            "Tr Ω = {:.3e} at t = {}",
            tr_omega[i], times[i]
        )));
    }
    Ok(Trajectory {
        times,
        dt,
        hamiltonian: h.clone(),
        omegas,
        observables: Observables { tr_omega, ..Default::default() },
    })
}

/// Trajectory of `config.initial` under `H_φ(config.params)`.
pub fn trajectory(config: &ExperimentConfig) -> Result<Trajectory> {
    let h = build_hamiltonian(&config.params);
    let omega0 = config.initial.density(2)?;
    trajectory_for(&h, &omega0, config.dt, config.t_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn worked() -> AnyonParams {
        AnyonParams::new(-FRAC_PI_2, 1.0, 3.0 * PI / 4.0, 1.0, 0.0).unwrap()
    }

    fn half_identity() -> ComplexMatrix {
        ComplexMatrix::identity(2).scale_real(0.5)
    }

    #[test]
    fn propagators_at_zero_time() {
        let p = worked();
        let id = ComplexMatrix::identity(2);
        let h = build_hamiltonian(&p);
        assert!((&propagator_numeric(&h, 0.0).unwrap() - &id).norm_fro() < 1e-15);
        assert!((&propagator_closed(&p, 0.0).unwrap() - &id).norm_fro() < 1e-15);
    }

    #[test]
    fn hermitian_generator_gives_unitary() {
        let h = ComplexMatrix::from_rows([
            [C64::new(0.3, 0.0), C64::new(1.0, -0.4)],
            [C64::new(1.0, 0.4), C64::new(-0.8, 0.0)],
        ])
        .unwrap();
        let u = propagator_numeric(&h, 3.7).unwrap();
        let err = (&(&u.adjoint() * &u) - &ComplexMatrix::identity(2)).norm_fro();
        assert!(err <= 1e-10, "{err}");
    }

    #[test]
    fn exceptional_point_propagator_is_linear_form() {
        let theta = 1.1f64;
        let p = AnyonParams::new(-0.7, 1.5, theta, 1.5 * theta.sin(), 0.4).unwrap();
        let t = 2.3;
        let m = coupling_matrix(&p);
        let core = &ComplexMatrix::identity(2) - &m.scale(I * t * p.phase_factor());
        let rc = p.r * theta.cos();
        let want = core.scale((-I * t * p.phase_factor() * rc).exp());
        assert!((&propagator_closed(&p, t).unwrap() - &want).norm_fro() < 1e-15);
    }

    #[test]
    fn worked_trace_value() {
        let oracle = (-1.0f64).exp() * (2.0 * 1.0f64.cosh() - 1.0f64.cos());
        let p = worked();
        let closed = trace_closed(&p, 1.0).unwrap();
        let numeric = evolve(&half_identity(), &build_hamiltonian(&p), 1.0).unwrap().trace().re;
        assert!((closed - oracle).abs() < 1e-14);
        assert!((numeric - oracle).abs() < 1e-12);
        assert!((oracle - 0.93662).abs() < 1e-4);
    }

    #[test]
    fn trace_closed_is_one_at_origin_and_refuses_ep() {
        let p = worked();
        assert!((trace_closed(&p, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let broken = AnyonParams::new(-0.4, 2.0, 1.2, 0.5, 0.0).unwrap();
        assert!((trace_closed(&broken, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let theta = 0.6f64;
        let ep = AnyonParams::new(-0.4, 1.0, theta, theta.sin(), 0.0).unwrap();
        assert!(matches!(trace_closed(&ep, 1.0), Err(Error::UnsupportedBranch(_))));
    }

    #[test]
    fn asymptotic_trace_for_stable_case() {
        let p = worked();
        for t in [0.0, 1.0, 8.0, 20.0] {
            assert!((trace_asymptotic(&p, t).unwrap() - 1.0).abs() < 1e-14);
        }
        let closed = trace_closed(&p, 8.0).unwrap();
        let oracle = (-8.0f64).exp() * (2.0 * 8.0f64.cosh() - 8.0f64.cos());
        assert!((closed - oracle).abs() < 1e-12);
        assert!((closed - 1.0).abs() < 1e-4);
        let broken = AnyonParams::new(-0.4, 2.0, 1.2, 0.5, 0.0).unwrap();
        assert!(trace_asymptotic(&broken, 1.0).is_err());
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&half_identity()).unwrap();
        assert!((&n - &half_identity()).norm_fro() < 1e-15);
        let n = normalize(&ComplexMatrix::diag_real(&[2.0, 0.0])).unwrap();
        assert!((&n - &ComplexMatrix::diag_real(&[1.0, 0.0])).norm_fro() < 1e-15);
        assert!(matches!(
            normalize(&ComplexMatrix::zeros(2)),
            Err(Error::VanishingTrace { .. })
        ));
    }

    #[test]
    fn evolve_at_zero_time_returns_initial() {
        let omega0 = ComplexMatrix::diag_real(&[0.7, 0.3]);
        let out = evolve(&omega0, &build_hamiltonian(&worked()), 0.0).unwrap();
        assert!((&out - &omega0).norm_fro() < 1e-15);
    }

    #[test]
    fn evolve_rejects_bad_initial_state() {
        let h = build_hamiltonian(&worked());
        assert!(evolve(&ComplexMatrix::diag_real(&[1.2, -0.2]), &h, 1.0).is_err());
    }

    #[test]
    fn state_spec_validation() {
        assert!(StateSpec::Pure(vec![ONE, ONE]).density(2).is_err());
        assert!(StateSpec::Pure(vec![ONE]).density(2).is_err());
        assert!(StateSpec::Matrix(ComplexMatrix::identity(2)).density(2).is_err());
        let m = StateSpec::MaximallyMixed.density(2).unwrap();
        assert!((m.trace().re - 1.0).abs() < 1e-15);
        assert!(StateSpec::basis(2, 1).density(2).is_ok());
    }

    #[test]
    fn two_mode_hermitian_eigenstate_is_flat() {
        let h = ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]]).unwrap();
        let asym = TwoModeAsymptote::new(&h, &[ONE, ZERO]).unwrap();
        for t in [0.0, 1.0, 10.0] {
            assert!(asym.neg_log_trace(t).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn two_mode_rejects_defective_and_unnormalized() {
        let j = ComplexMatrix::from_rows([[ONE, ONE], [ZERO, ONE]]).unwrap();
        assert!(matches!(
            logtrace_asymptotic(&j, &[ONE, ZERO], 1.0),
            Err(Error::UnsupportedBranch(_))
        ));
        let h = build_hamiltonian(&worked());
        assert!(matches!(
            logtrace_asymptotic(&h, &[ONE, ONE], 1.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(time_grid(0.1, 0.0).unwrap(), vec![0.0]);
        assert_eq!(time_grid(0.25, 1.0).unwrap().len(), 5);
        assert_eq!(time_grid(0.1, 1.0).unwrap().len(), 11);
        assert!(time_grid(0.0, 1.0).is_err());
        assert!(time_grid(1e-8, 1.0).is_err());
    }

    #[test]
    fn single_point_trajectory() {
        let h = build_hamiltonian(&worked());
        let traj = trajectory_for(&h, &half_identity(), 0.1, 0.0).unwrap();
        assert_eq!(traj.len(), 1);
        assert!((&traj.omegas[0] - &half_identity()).norm_fro() < 1e-15);
    }
}
