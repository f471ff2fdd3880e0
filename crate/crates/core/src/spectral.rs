//! Reservoir spectral densities and their memory kernels.
//!
//! Frequencies are measured in units of the qubit transition frequency ω₀
//! unless a density is built with an explicit `omega0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::Quadrature;

/// Shape parameters of a spectral density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityKind {
    /// `J(ω) = γ₀λ² / (2π((ω − ω₀)² + λ²))`, resonant with the qubits.
    Lorentzian { gamma0: f64, lambda: f64 },
    /// `J(ω) = (γ/2π) ω e^{−ω/ω_c}`.
    Ohmic { gamma: f64, omega_c: f64 },
}

/// A validated reservoir spectral density.
///
/// Couplings may be zero (a decoupled reservoir); widths, cutoffs and the
/// transition frequency must be strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    omega0: f64,
    kind: DensityKind,
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}

fn check_coupling(name: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be finite and >= 0, got {value}"
        )))
    }
}

impl SpectralDensity {
    pub fn new(omega0: f64, kind: DensityKind) -> Result<Self> {
        check_positive("omega0", omega0)?;
        match kind {
            DensityKind::Lorentzian { gamma0, lambda } => {
                check_coupling("gamma0", gamma0)?;
                check_positive("lambda", lambda)?;
            }
            DensityKind::Ohmic { gamma, omega_c } => {
                check_coupling("gamma", gamma)?;
                check_positive("omega_c", omega_c)?;
            }
        }
        Ok(Self { omega0, kind })
    }

    /// Lorentzian density with ω₀ = 1.
    pub fn lorentzian(gamma0: f64, lambda: f64) -> Result<Self> {
        Self::new(1.0, DensityKind::Lorentzian { gamma0, lambda })
    }

    /// Ohmic density with ω₀ = 1.
    pub fn ohmic(gamma: f64, omega_c: f64) -> Result<Self> {
        Self::new(1.0, DensityKind::Ohmic { gamma, omega_c })
    }

    pub fn with_omega0(self, omega0: f64) -> Result<Self> {
        Self::new(omega0, self.kind)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DensityKind::Lorentzian { .. } => "lorentzian",
            DensityKind::Ohmic { .. } => "ohmic",
        }
    }

    /// The coupling constant (γ₀ or γ).
    pub fn coupling(&self) -> f64 {
        match self.kind {
            DensityKind::Lorentzian { gamma0, .. } => gamma0,
            DensityKind::Ohmic { gamma, .. } => gamma,
        }
    }

    /// Same shape with a different coupling constant.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        let kind = match self.kind {
            DensityKind::Lorentzian { lambda, .. } => DensityKind::Lorentzian {
                gamma0: coupling,
                lambda,
            },
            DensityKind::Ohmic { omega_c, .. } => DensityKind::Ohmic {
                gamma: coupling,
                omega_c,
            },
        };
        Self::new(self.omega0, kind)
    }

    /// Natural frequency scale of the density, used to map semi-infinite ranges.
    pub fn frequency_scale(&self) -> f64 {
        match self.kind {
            DensityKind::Lorentzian { lambda, .. } => lambda.max(self.omega0),
            DensityKind::Ohmic { omega_c, .. } => omega_c,
        }
    }

    /// Whether `J(0) = 0`. When it is not, `∫ J(ω)/ω dω` diverges at the
    /// continuum edge.
    pub fn vanishes_at_zero(&self) -> bool {
        match self.kind {
            DensityKind::Lorentzian { gamma0, .. } => gamma0 == 0.0,
            DensityKind::Ohmic { .. } => true,
        }
    }

    /// `J(ω)` for `ω ≥ 0`.
    pub fn density(&self, omega: f64) -> Result<f64> {
        if !(omega >= 0.0) {
            return Err(Error::Domain(format!(
                "spectral density needs omega >= 0, got {omega}"
            )));
        }
        Ok(self.density_unchecked(omega))
    }

    pub(crate) fn density_unchecked(&self, omega: f64) -> f64 {
        match self.kind {
            DensityKind::Lorentzian { gamma0, lambda } => {
                let detuning = omega - self.omega0;
                gamma0 * lambda * lambda / (2.0 * PI * (detuning * detuning + lambda * lambda))
            }
            DensityKind::Ohmic { gamma, omega_c } => {
                gamma / (2.0 * PI) * omega * (-omega / omega_c).exp()
            }
        }
    }

    /// Closed-form memory kernel `f(τ) = ∫ J(ω) e^{i(ω₀−ω)τ} dω`.
    ///
    /// The Lorentzian integral runs over the whole real line, giving
    /// `(γ₀λ/2) e^{−λτ}`; the Ohmic one runs over `[0, ∞)`, giving
    /// `(γ/2π) e^{iω₀τ} / (1/ω_c + iτ)²`.
    pub fn kernel(&self, tau: f64) -> Result<Complex64> {
        if !(tau >= 0.0) {
            return Err(Error::Domain(format!(
                "memory kernel needs tau >= 0, got {tau}"
            )));
        }
        Ok(self.kernel_unchecked(tau))
    }

    pub(crate) fn kernel_unchecked(&self, tau: f64) -> Complex64 {
        match self.kind {
            DensityKind::Lorentzian { gamma0, lambda } => {
                Complex64::new(0.5 * gamma0 * lambda * (-lambda * tau).exp(), 0.0)
            }
            DensityKind::Ohmic { gamma, omega_c } => {
                let denom = Complex64::new(1.0 / omega_c, tau);
                Complex64::from_polar(gamma / (2.0 * PI), self.omega0 * tau) / (denom * denom)
            }
        }
    }

    /// The memory kernel by direct adaptive quadrature of its defining
    /// frequency integral. Independent of [`SpectralDensity::kernel`].
    pub fn kernel_quadrature(&self, tau: f64, tol: f64) -> Result<Complex64> {
        if !(tau >= 0.0) {
            return Err(Error::Domain(format!(
                "memory kernel needs tau >= 0, got {tau}"
            )));
        }
        let quad = Quadrature::new(tol);
        match self.kind {
            DensityKind::Lorentzian { gamma0, lambda } => {
                lorentzian_kernel_quadrature(&quad, gamma0, lambda, tau)
            }
            DensityKind::Ohmic { omega_c, .. } => {
                let omega0 = self.omega0;
                let est = quad.integrate_semi_infinite(
                    |omega: f64| {
                        Complex64::from_polar(self.density_unchecked(omega), (omega0 - omega) * tau)
                    },
                    0.0,
                    omega_c,
                )?;
                Ok(est.value)
            }
        }
    }
}

// Full-line Lorentzian integral in the detuning u = ω − ω₀. The central
// segment [−A, A] is integrated on the real axis; each tail is rotated onto a
// ray into the lower half plane (u = ±A − is), where e^{−iuτ} is damped and
// the density has no poles (they sit at u = ±iλ on the imaginary axis).
fn lorentzian_kernel_quadrature(
    quad: &Quadrature,
    gamma0: f64,
    lambda: f64,
    tau: f64,
) -> Result<Complex64> {
    let prefactor = gamma0 * lambda * lambda / (2.0 * PI);
    let shape = |u: Complex64| prefactor / (u * u + lambda * lambda);
    let cutoff = 4.0 * lambda;
    // Split the budget between the three pieces.
    let piece = Quadrature::new(quad.abs_tol / 3.0).with_max_intervals(quad.max_intervals);

    let centre = piece.integrate(
        |u: f64| Complex64::from_polar(1.0, -u * tau) * shape(Complex64::new(u, 0.0)),
        -cutoff,
        cutoff,
    )?;

    let i = Complex64::i();
    let right = piece.integrate_semi_infinite(
        |s: f64| (-s * tau).exp() * shape(Complex64::new(cutoff, -s)),
        0.0,
        lambda,
    )?;
    let left = piece.integrate_semi_infinite(
        |s: f64| (-s * tau).exp() * shape(Complex64::new(-cutoff, -s)),
        0.0,
        lambda,
    )?;
    let phase = Complex64::from_polar(1.0, cutoff * tau);
    Ok(centre.value - i * phase.conj() * right.value + i * phase * left.value)
}

/// One sample of the memory kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub tau: f64,
    pub value: Complex64,
}

/// Kernel values on the uniform grid `τ_k = k·step`, `k = 0..count`.
pub fn sample_kernel(sd: &SpectralDensity, step: f64, count: usize) -> Vec<KernelValue> {
    (0..count)
        .map(|k| {
            let tau = k as f64 * step;
            KernelValue {
                tau,
                value: sd.kernel_unchecked(tau),
            }
        })
        .collect()
}
