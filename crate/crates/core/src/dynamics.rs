//! Excited-state amplitude `C₁(t)` of the probe qubit.
//!
//! All qubits couple identically to the reservoir, so every amplitude obeys
//!
//! ```text
//! dC_l/dt = −∫₀ᵗ f(t − t′) Σ_m C_m(t′) dt′,
//! ```
//!
//! whose right side does not depend on `l`. The sum `u = Σ_m C_m` therefore
//! satisfies the scalar equation `u̇ = −N ∫₀ᵗ f(t − t′) u(t′) dt′` with
//! `u(0) = 1`, and `C₁ = (N − 1)/N + u/N` when only the probe starts excited.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{sample_kernel, DensityKind, SpectralDensity};

/// Default integration step, in units of 1/ω₀.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Default driving time / horizon, in units of 1/ω₀.
pub const DEFAULT_HORIZON: f64 = 10.0;
/// Default amplitude tolerance.
pub const DEFAULT_SOLVER_TOL: f64 = 1e-8;
/// Largest supported number of steps (the history sum is quadratic in it).
pub const MAX_STEPS: f64 = 1e7;
/// Largest N accepted by the unreduced vector integrator.
pub const MAX_VECTOR_QUBITS: usize = 16;

const AMPLITUDE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub n_qubits: usize,
    pub sd: SpectralDensity,
    pub horizon: f64,
    pub step: f64,
    pub solver_tol: f64,
}

impl SimulationConfig {
    pub fn new(n_qubits: usize, sd: SpectralDensity, horizon: f64, step: f64) -> Result<Self> {
        Self {
            n_qubits,
            sd,
            horizon,
            step,
            solver_tol: DEFAULT_SOLVER_TOL,
        }
        .validated()
    }

    pub fn with_solver_tol(mut self, solver_tol: f64) -> Result<Self> {
        self.solver_tol = solver_tol;
        self.validated()
    }

    /// Checks every invariant, naming the one that fails.
    pub fn validated(self) -> Result<Self> {
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n_qubits == 0 {
            return fail("invariant N >= 1 violated".into());
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return fail(format!("invariant 0 < tau violated (tau = {})", self.horizon));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return fail(format!("invariant 0 < step violated (step = {})", self.step));
        }
        if self.step > self.horizon / 10.0 {
            return fail(format!(
                "invariant step <= tau/10 violated (step = {}, tau = {})",
                self.step, self.horizon
            ));
        }
        if self.horizon / self.step > MAX_STEPS {
            return fail(format!(
                "invariant tau/step <= 1e7 violated (tau/step = {})",
                self.horizon / self.step
            ));
        }
        if !(self.solver_tol > 0.0) || !self.solver_tol.is_finite() {
            return fail(format!(
                "invariant 0 < solver_tol violated (solver_tol = {})",
                self.solver_tol
            ));
        }
        Ok(self)
    }

    /// Number of intervals on `[0, τ]`.
    pub fn intervals(&self) -> usize {
        ((self.horizon / self.step).round() as usize).max(10)
    }

    /// Step actually used: `τ` divided into [`SimulationConfig::intervals`]
    /// equal parts, so the grid ends exactly at `τ`.
    pub fn grid_step(&self) -> f64 {
        self.horizon / self.intervals() as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let h = self.grid_step();
        let n = self.intervals();
        (0..=n)
            .map(|k| if k == n { self.horizon } else { k as f64 * h })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Volterra,
    /// Externally supplied samples.
    Sampled,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Volterra => "volterra",
            Method::Sampled => "sampled",
        }
    }
}

/// `C₁(t)` on a uniform grid over `[0, τ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    times: Vec<f64>,
    c1: Vec<Complex64>,
    population: Vec<f64>,
    method: Method,
}

impl AmplitudeTrajectory {
    fn new(times: Vec<f64>, c1: Vec<Complex64>, method: Method) -> Self {
        let population = c1.iter().map(|c| c.norm_sqr()).collect();
        Self {
            times,
            c1,
            population,
            method,
        }
    }

    /// Wraps externally computed samples. The grid must start at 0 and be
    /// uniform to within 10⁻⁹ of its step.
    pub fn from_samples(times: Vec<f64>, c1: Vec<Complex64>) -> Result<Self> {
        if times.len() != c1.len() || times.len() < 2 {
            return Err(Error::InvalidParameter(
                "need at least two samples and matching lengths".into(),
            ));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidParameter("time grid must start at 0".into()));
        }
        let h = times[1] - times[0];
        if !(h > 0.0)
            || times
                .windows(2)
                .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h)
        {
            return Err(Error::InvalidParameter(
                "time grid must be uniform and increasing".into(),
            ));
        }
        Ok(Self::new(times, c1, Method::Sampled))
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn c1(&self) -> &[Complex64] {
        &self.c1
    }

    pub fn population(&self) -> &[f64] {
        &self.population
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    pub fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// CSV with header `t,re_c1,im_c1,population`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re_c1,im_c1,population\n");
        for ((t, c), p) in self.times.iter().zip(&self.c1).zip(&self.population) {
            let _ = writeln!(out, "{t},{},{},{p}", c.re, c.im);
        }
        out
    }
}

// sinh(z)/z, accurate near z = 0.
fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-2 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) + z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sinh() / z
    }
}

/// Closed-form `C₁(t)` for a Lorentzian reservoir with the probe initially
/// excited:
///
/// `G(t) = (N−1)/N + e^{−λt/2}/N · [cosh(Dt/2) + (λ/D) sinh(Dt/2)]`,
/// `D = √(λ² − 2γ₀λN)`.
///
/// `D` is taken complex, so the oscillatory regime (`D² < 0`) and the
/// degenerate point `D = 0` (bracket `1 + λt/2`) need no special cases.
pub fn lorentzian_propagator(n_qubits: usize, gamma0: f64, lambda: f64, t: f64) -> Complex64 {
    debug_assert!(n_qubits >= 1 && gamma0 >= 0.0 && lambda > 0.0 && t >= 0.0);
    let n = n_qubits as f64;
    let d = Complex64::new(lambda * lambda - 2.0 * gamma0 * lambda * n, 0.0).sqrt();
    let z = d * (0.5 * t);
    let damping = -0.5 * lambda * t;
    // Combine the exponentials so large t cannot overflow cosh/sinh.
    let grow = (z + damping).exp();
    let shrink = (-z + damping).exp();
    let cosh_part = (grow + shrink) * 0.5;
    let sinh_part = if z.norm() < 1e-2 {
        sinhc(z) * (0.5 * lambda * t * damping.exp())
    } else {
        (grow - shrink) * (0.5 * lambda) / d
    };
    Complex64::new((n - 1.0) / n, 0.0) + (cosh_part + sinh_part) / n
}

/// Samples the closed-form Lorentzian amplitude on the configuration grid.
pub fn analytic_trajectory(config: &SimulationConfig) -> Result<AmplitudeTrajectory> {
    let config = config.validated()?;
    let DensityKind::Lorentzian { gamma0, lambda } = *config.sd.kind() else {
        return Err(Error::InvalidParameter(
            "closed-form amplitude exists only for the Lorentzian density".into(),
        ));
    };
    let times = config.times();
    let c1 = times
        .iter()
        .map(|&t| lorentzian_propagator(config.n_qubits, gamma0, lambda, t))
        .collect();
    Ok(AmplitudeTrajectory::new(times, c1, Method::Analytic))
}

/// Trapezoidal product-integration history: `h·[½ f_m x_0 + Σ_{j=1}^{m−1} f_{m−j} x_j]`,
/// i.e. the memory integral at step `m` without its (unknown) `j = m` term.
fn known_history(kernel: &[Complex64], history: &[Complex64], m: usize, h: f64) -> Complex64 {
    let mut acc = kernel[m] * history[0] * 0.5;
    for (f, x) in kernel[1..m].iter().rev().zip(&history[1..m]) {
        acc += f * x;
    }
    acc * h
}

fn check_physical(time: f64, c1: Complex64, tol: f64) -> Result<()> {
    let magnitude = c1.norm();
    if magnitude > 1.0 + 1e3 * tol || !magnitude.is_finite() {
        Err(Error::Unstable { time, magnitude })
    } else {
        Ok(())
    }
}

/// Integrates the symmetry-reduced scalar equation for `u = Σ C_m` with a
/// trapezoidal predictor–corrector (Euler predictor, one trapezoid
/// correction) and trapezoidal product integration of the memory term.
pub fn solve_amplitude(config: &SimulationConfig) -> Result<AmplitudeTrajectory> {
    let config = config.validated()?;
    let n = config.intervals();
    let h = config.grid_step();
    let n_q = config.n_qubits as f64;
    let kernel: Vec<Complex64> = sample_kernel(&config.sd, h, n + 1)
        .into_iter()
        .map(|k| k.value)
        .collect();
    let times = config.times();
    let f0 = kernel[0];

    let mut u = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut c1 = Vec::with_capacity(n + 1);
    u[0] = Complex64::new(1.0, 0.0);
    c1.push(Complex64::new(1.0, 0.0));
    // du/dt = −N·(memory integral)
    let mut rate = Complex64::new(0.0, 0.0);
    let offset = Complex64::new((n_q - 1.0) / n_q, 0.0);

    for m in 1..=n {
        let known = known_history(&kernel, &u, m, h);
        let predicted = u[m - 1] + rate * h;
        let rate_predicted = -(known + f0 * predicted * (0.5 * h)) * n_q;
        u[m] = u[m - 1] + (rate + rate_predicted) * (0.5 * h);
        rate = -(known + f0 * u[m] * (0.5 * h)) * n_q;

        let c = offset + u[m] / n_q;
        check_physical(times[m], c, config.solver_tol)?;
        c1.push(c);
    }
    Ok(AmplitudeTrajectory::new(times, c1, Method::Volterra))
}

/// All `N` amplitudes from the unreduced system, on the configuration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTrajectories {
    pub times: Vec<f64>,
    /// `components[l][k]` is `C_{l+1}(t_k)`.
    pub components: Vec<Vec<Complex64>>,
}

/// Integrates the full `N`-component system without the symmetry reduction,
/// using the same discretization as [`solve_amplitude`]. Validation oracle;
/// limited to `N ≤ 16`.
pub fn solve_amplitude_vector(config: &SimulationConfig) -> Result<ComponentTrajectories> {
    let config = config.validated()?;
    let nq = config.n_qubits;
    if nq > MAX_VECTOR_QUBITS {
        return Err(Error::InvalidParameter(format!(
            "vector integrator supports N <= {MAX_VECTOR_QUBITS}, got {nq}"
        )));
    }
    let n = config.intervals();
    let h = config.grid_step();
    let kernel: Vec<Complex64> = sample_kernel(&config.sd, h, n + 1)
        .into_iter()
        .map(|k| k.value)
        .collect();
    let times = config.times();
    let f0 = kernel[0];
    let zero = Complex64::new(0.0, 0.0);

    let mut components = vec![vec![zero; n + 1]; nq];
    components[0][0] = Complex64::new(1.0, 0.0);
    let mut total = vec![zero; n + 1];
    total[0] = components.iter().map(|c| c[0]).sum();
    // Every component shares this derivative.
    let mut rate = zero;
    let mut predicted = vec![zero; nq];

    for m in 1..=n {
        let known = known_history(&kernel, &total, m, h);
        for (p, c) in predicted.iter_mut().zip(&components) {
            *p = c[m - 1] + rate * h;
        }
        let predicted_total: Complex64 = predicted.iter().sum();
        let rate_predicted = -(known + f0 * predicted_total * (0.5 * h));
        for c in components.iter_mut() {
            c[m] = c[m - 1] + (rate + rate_predicted) * (0.5 * h);
        }
        total[m] = components.iter().map(|c| c[m]).sum();
        rate = -(known + f0 * total[m] * (0.5 * h));
        check_physical(times[m], components[0][m], config.solver_tol)?;
    }
    Ok(ComponentTrajectories { times, components })
}

/// Time-local decay rate `Γ(t) = −Re(Ċ₁/C₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRate {
    pub times: Vec<f64>,
    pub gamma: Vec<f64>,
    /// Set when the series stops early because `|C₁|` fell below 10⁻¹².
    pub truncated: bool,
}

impl DecayRate {
    /// CSV with header `t,gamma`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,gamma\n");
        for (t, g) in self.times.iter().zip(&self.gamma) {
            let _ = writeln!(out, "{t},{g}");
        }
        out
    }
}

/// `Ċ₁` by centered differences, second-order one-sided at the ends.
pub(crate) fn derivative(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    if n < 3 {
        let d = (values[n - 1] - values[0]) / h;
        return vec![d; n];
    }
    let mut out = Vec::with_capacity(n);
    out.push((values[0] * -3.0 + values[1] * 4.0 - values[2]) / (2.0 * h));
    for w in values.windows(3) {
        out.push((w[2] - w[0]) / (2.0 * h));
    }
    out.push((values[n - 1] * 3.0 - values[n - 2] * 4.0 + values[n - 3]) / (2.0 * h));
    out
}

pub fn decay_rate(trajectory: &AmplitudeTrajectory) -> DecayRate {
    let c1 = trajectory.c1();
    let cut = c1
        .iter()
        .position(|c| c.norm() <= AMPLITUDE_FLOOR)
        .unwrap_or(c1.len());
    let dc = derivative(c1, trajectory.step());
    let gamma = c1[..cut]
        .iter()
        .zip(&dc)
        .map(|(c, d)| -(d / c).re)
        .collect();
    DecayRate {
        times: trajectory.times()[..cut].to_vec(),
        gamma,
        truncated: cut < c1.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lorentz(n: usize, gamma0: f64, lambda: f64, tau: f64, h: f64) -> SimulationConfig {
        SimulationConfig::new(n, SpectralDensity::lorentzian(gamma0, lambda).unwrap(), tau, h).unwrap()
    }

    fn max_error_vs_closed_form(config: &SimulationConfig) -> f64 {
        let DensityKind::Lorentzian { gamma0, lambda } = *config.sd.kind() else { unreachable!() };
        let traj = solve_amplitude(config).unwrap();
        traj.times()
            .iter()
            .zip(traj.c1())
            .map(|(&t, c)| (c - lorentzian_propagator(config.n_qubits, gamma0, lambda, t)).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn propagator_initial_value_and_decoupled_limit() {
        for n in [1, 2, 7] {
            for &(g, l) in &[(0.5, 1.0), (3.0, 0.2), (0.0, 2.0)] {
                let v = lorentzian_propagator(n, g, l, 0.0);
                assert!((v - 1.0).norm() < 1e-15);
            }
            for &t in &[0.0, 1.0, 10.0, 100.0] {
                let v = lorentzian_propagator(n, 0.0, 1.3, t);
                assert!((v - 1.0).norm() < 1e-12, "t={t}: {v}");
            }
        }
    }

    #[test]
    fn propagator_oscillatory_example() {
        // D = i: bracket reduces to cos(1/2) + sin(1/2)
        let expected = (-0.5f64).exp() * (0.5f64.cos() + 0.5f64.sin());
        let v = lorentzian_propagator(1, 1.0, 1.0, 1.0);
        assert_abs_diff_eq!(v.re, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.re, 0.8231, epsilon = 1e-4);

        let traj = solve_amplitude(&lorentz(1, 1.0, 1.0, 1.0, 1e-3)).unwrap();
        assert_abs_diff_eq!(traj.c1().last().unwrap().re, expected, epsilon = 1e-6);
    }

    #[test]
    fn propagator_continuous_through_degenerate_point() {
        // λ = 1, N = 1: D = 0 at γ₀ = 1/2, where the bracket is 1 + λt/2
        for k in 0..=100 {
            let t = 0.1 * k as f64;
            let below = lorentzian_propagator(1, 0.5 - 1e-6, 1.0, t);
            let at = lorentzian_propagator(1, 0.5, 1.0, t);
            let above = lorentzian_propagator(1, 0.5 + 1e-6, 1.0, t);
            let exact = (-0.5 * t).exp() * (1.0 + 0.5 * t);
            assert_abs_diff_eq!(at.re, exact, epsilon = 1e-14);
            assert!((below - above).norm() < 1e-4);
            assert!((below - at).norm() < 1e-4);
        }
    }

    #[test]
    fn propagator_survives_long_times() {
        let v = lorentzian_propagator(4, 0.1, 1.0, 5000.0);
        assert!(v.re.is_finite());
        assert_abs_diff_eq!(v.re, 0.75, epsilon = 1e-12);
    }

    #[test]
    fn volterra_matches_closed_form() {
        for &(n, g) in &[(1, 0.5), (2, 1.0), (4, 3.0)] {
            let err = max_error_vs_closed_form(&lorentz(n, g, 1.0, 10.0, 1e-3));
            assert!(err <= 1e-6, "N={n} γ₀={g}: {err:e}");
        }
    }

    #[test]
    fn volterra_is_second_order() {
        let coarse = max_error_vs_closed_form(&lorentz(2, 1.0, 1.0, 5.0, 2e-3));
        let fine = max_error_vs_closed_form(&lorentz(2, 1.0, 1.0, 5.0, 1e-3));
        let ratio = coarse / fine;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn initial_condition_and_norm_bound() {
        let sd = SpectralDensity::ohmic(3.0, 1.0).unwrap();
        let config = SimulationConfig::new(4, sd, 10.0, 1e-2).unwrap();
        let traj = solve_amplitude(&config).unwrap();
        assert_eq!(traj.c1()[0], Complex64::new(1.0, 0.0));
        assert_eq!(traj.population()[0], 1.0);
        assert_eq!(traj.method(), Method::Volterra);
        assert_eq!(traj.len(), 1001);
        assert_eq!(traj.horizon(), 10.0);
        assert!(traj.c1().iter().all(|c| c.norm() <= 1.0 + config.solver_tol));
    }

    // Weak Ohmic coupling, h = 10⁻³; halving h moves it by 3e-9.
    const OHMIC_WEAK_POPULATION_AT_10: f64 = 0.711_304_506;

    #[test]
    fn weak_ohmic_decay_is_monotone() {
        let sd = SpectralDensity::ohmic(0.1, 1.0).unwrap();
        let traj = solve_amplitude(&SimulationConfig::new(1, sd, 10.0, 1e-3).unwrap()).unwrap();
        let p = traj.population();
        assert!(p.windows(2).all(|w| w[1] <= w[0]));
        assert_abs_diff_eq!(*p.last().unwrap(), OHMIC_WEAK_POPULATION_AT_10, epsilon = 1e-8);
    }

    #[test]
    fn coarse_step_is_reported_unstable() {
        let config = lorentz(10, 500.0, 1.0, 10.0, 1.0);
        match solve_amplitude(&config) {
            Err(Error::Unstable { magnitude, .. }) => assert!(magnitude > 1.0),
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn config_invariants() {
        let sd = SpectralDensity::lorentzian(1.0, 1.0).unwrap();
        let err = SimulationConfig::new(1, sd, 10.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("0 < step"));
        assert!(SimulationConfig::new(1, sd, 10.0, 2.0).is_err());
        assert!(SimulationConfig::new(1, sd, 0.0, 0.1).is_err());
        assert!(SimulationConfig::new(0, sd, 10.0, 0.1).is_err());
        assert!(SimulationConfig::new(1, sd, 10.0, 1e-7).is_err());
        let ok = SimulationConfig::new(1, sd, 10.0, 0.3).unwrap();
        assert_eq!(ok.intervals(), 33);
        assert_eq!(*ok.times().last().unwrap(), 10.0);
    }

    #[test]
    fn analytic_trajectory_requires_lorentzian() {
        let sd = SpectralDensity::ohmic(1.0, 1.0).unwrap();
        let config = SimulationConfig::new(1, sd, 10.0, 0.1).unwrap();
        assert!(analytic_trajectory(&config).is_err());
        let traj = analytic_trajectory(&lorentz(3, 1.0, 1.0, 10.0, 0.1)).unwrap();
        assert_eq!(traj.method(), Method::Analytic);
        assert_eq!(traj.c1()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn vector_oracle_agrees_with_reduction() {
        for sd in [
            SpectralDensity::lorentzian(1.0, 1.0).unwrap(),
            SpectralDensity::ohmic(2.0, 1.0).unwrap(),
        ] {
            let config = SimulationConfig::new(3, sd, 5.0, 1e-3).unwrap();
            let scalar = solve_amplitude(&config).unwrap();
            let vector = solve_amplitude_vector(&config).unwrap();
            assert_eq!(vector.components.len(), 3);
            for (k, c) in scalar.c1().iter().enumerate() {
                assert!((c - vector.components[0][k]).norm() <= 1e-8);
                assert!((vector.components[1][k] - vector.components[2][k]).norm() <= 1e-10);
            }
            // spectators are driven through the shared reservoir
            assert!(vector.components[1].last().unwrap().norm() > 1e-3);
            assert_eq!(vector.components[1][0], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn vector_oracle_single_qubit_is_scalar_path() {
        let config = lorentz(1, 2.0, 1.0, 5.0, 1e-2);
        let scalar = solve_amplitude(&config).unwrap();
        let vector = solve_amplitude_vector(&config).unwrap();
        for (a, b) in scalar.c1().iter().zip(&vector.components[0]) {
            assert!((a - b).norm() < 1e-13);
        }
        assert!(solve_amplitude_vector(&lorentz(17, 1.0, 1.0, 5.0, 1e-1)).is_err());
    }

    #[test]
    fn decay_rate_vanishes_without_coupling() {
        let traj = analytic_trajectory(&lorentz(3, 0.0, 1.0, 10.0, 1e-2)).unwrap();
        let rate = decay_rate(&traj);
        assert!(!rate.truncated);
        assert_eq!(rate.gamma.len(), traj.len());
        assert!(rate.gamma.iter().all(|g| g.abs() < 1e-15));
    }

    #[test]
    fn decay_rate_markov_limit() {
        // slow pole −λ/2 + D/2 → −γ₀/2 for λ ≫ γ₀
        let traj = analytic_trajectory(&lorentz(1, 0.1, 20.0, 10.0, 1e-3)).unwrap();
        let rate = decay_rate(&traj);
        let late = *rate.gamma.last().unwrap();
        assert!((late - 0.05).abs() <= 0.05 * 0.05, "Γ(10) = {late}");
    }

    #[test]
    fn decay_rate_non_negative_for_monotone_decay() {
        let traj = analytic_trajectory(&lorentz(1, 0.2, 1.0, 10.0, 1e-2)).unwrap();
        assert!(traj.c1().windows(2).all(|w| w[1].norm() < w[0].norm()));
        let rate = decay_rate(&traj);
        assert!(rate.gamma.iter().all(|g| *g >= -1e-12));
    }

    #[test]
    fn decay_rate_truncates_at_vanishing_amplitude() {
        let times: Vec<f64> = (0..6).map(|k| k as f64 * 0.5).collect();
        let c1: Vec<Complex64> = [1.0, 0.8, 0.5, 0.0, 0.2, 0.3]
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        let traj = AmplitudeTrajectory::from_samples(times, c1).unwrap();
        let rate = decay_rate(&traj);
        assert!(rate.truncated);
        assert_eq!(rate.gamma.len(), 3);
    }

    #[test]
    fn csv_headers() {
        let traj = analytic_trajectory(&lorentz(2, 1.0, 1.0, 1.0, 0.1)).unwrap();
        let csv = traj.to_csv();
        assert!(csv.starts_with("t,re_c1,im_c1,population\n0,1,0,1\n"));
        assert_eq!(csv.lines().count(), 12);
        assert!(decay_rate(&traj).to_csv().starts_with("t,gamma\n"));
    }

    #[test]
    fn from_samples_validation() {
        let c = vec![Complex64::new(1.0, 0.0); 3];
        assert!(AmplitudeTrajectory::from_samples(vec![0.0, 1.0, 3.0], c.clone()).is_err());
        assert!(AmplitudeTrajectory::from_samples(vec![1.0, 2.0, 3.0], c.clone()).is_err());
        assert!(AmplitudeTrajectory::from_samples(vec![0.0, 1.0], c).is_err());
    }
}
