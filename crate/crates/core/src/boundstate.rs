//! Negative-energy bound states of the qubits + reservoir system.
//!
//! A bound state is a real root `E < 0` of `E = y(E)` with
//! `y(E) = ω₀ − N ∫₀^∞ J(ω)/(ω − E) dω`. Since `y` decreases strictly on
//! `E < 0` and tends to `ω₀` as `E → −∞`, `g(E) = E − y(E)` is strictly
//! increasing there and the root, when it exists, is unique.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::quadrature::{Quadrature, DEFAULT_TOL};
use crate::spectral::SpectralDensity;
use crate::sweep::{opt_field, run_cells, validate_scan, SweepRow, SweepTable};

/// Default resolution of bound-state energies, in units of ω₀.
pub const DEFAULT_ENERGY_TOL: f64 = 1e-8;

/// Bracket doublings allowed before the root is deemed unreachable.
pub const MAX_BRACKET_DOUBLINGS: u32 = 60;

const MARGINAL_DEPTH: f64 = 1e-6;
const MAX_BISECTIONS: u32 = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateResult {
    pub exists: bool,
    /// `y` at the continuum edge [`BoundStateResult::edge_energy`].
    pub y_at_zero: f64,
    /// Where the continuum edge was probed: `0` when `∫ J(ω)/ω` converges,
    /// otherwise `−tol` (the integral diverges logarithmically at the edge).
    pub edge_energy: f64,
    pub energy: Option<f64>,
    pub bracket_expansions: u32,
    pub bisections: u32,
    /// `|E − y(E)|` at the returned energy.
    pub residual: Option<f64>,
    /// Final bisection bracket `[lo, hi]` with `g(lo) < 0 < g(hi)`.
    pub bracket: Option<(f64, f64)>,
    /// The root sits within 10⁻⁶·ω₀ of the continuum edge.
    pub marginal: bool,
}

fn quadrature_for(tol: f64) -> Quadrature {
    Quadrature::new(DEFAULT_TOL.min(1e-2 * tol))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tolerance must be > 0, got {tol}"
        )))
    }
}

/// `y(E) = ω₀ − N ∫₀^∞ J(ω)/(ω − E) dω` for `E ≤ 0`.
pub fn y_of(sd: &SpectralDensity, n_qubits: usize, energy: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if n_qubits == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    if !(energy <= 0.0) {
        return Err(Error::Domain(format!(
            "y(E) is only defined below the continuum, got E = {energy}"
        )));
    }
    if sd.coupling() == 0.0 {
        return Ok(sd.omega0());
    }
    let est = Quadrature::new(tol).integrate_semi_infinite(
        |omega: f64| sd.density_unchecked(omega) / (omega - energy),
        0.0,
        sd.frequency_scale(),
    )?;
    Ok(sd.omega0() - n_qubits as f64 * est.value)
}

/// Where the continuum edge is probed for a given resolution.
pub fn edge_energy(sd: &SpectralDensity, tol: f64) -> f64 {
    if sd.vanishes_at_zero() {
        0.0
    } else {
        -tol
    }
}

/// Returns `(exists, y_at_edge)` at the default energy resolution.
pub fn bound_state_exists(sd: &SpectralDensity, n_qubits: usize) -> Result<(bool, f64)> {
    let edge = edge_energy(sd, DEFAULT_ENERGY_TOL);
    let y_edge = y_of(sd, n_qubits, edge, quadrature_for(DEFAULT_ENERGY_TOL).abs_tol)?;
    Ok((y_edge < edge, y_edge))
}

/// Ohmic critical coupling `γ_c = 2πω₀ / (N ω_c)`.
pub fn ohmic_critical_coupling(omega0: f64, omega_c: f64, n_qubits: usize) -> f64 {
    2.0 * PI * omega0 / (n_qubits as f64 * omega_c)
}

/// Locates the bound state by bracket expansion and bisection on
/// `g(E) = E − y(E)`.
pub fn find_bound_state(sd: &SpectralDensity, n_qubits: usize, tol: f64) -> Result<BoundStateResult> {
    check_tol(tol)?;
    let quad_tol = quadrature_for(tol).abs_tol;
    let g = |e: f64| -> Result<f64> { Ok(e - y_of(sd, n_qubits, e, quad_tol)?) };

    let edge = edge_energy(sd, tol);
    let y_edge = y_of(sd, n_qubits, edge, quad_tol)?;
    let mut result = BoundStateResult {
        exists: y_edge < edge,
        y_at_zero: y_edge,
        edge_energy: edge,
        energy: None,
        bracket_expansions: 0,
        bisections: 0,
        residual: None,
        bracket: None,
        marginal: false,
    };
    if !result.exists {
        return Ok(result);
    }
    result.marginal = y_edge > edge - MARGINAL_DEPTH * sd.omega0();

    let mut hi = edge;
    let mut lo = -sd.omega0();
    while g(lo)? >= 0.0 {
        if result.bracket_expansions >= MAX_BRACKET_DOUBLINGS {
            return Err(Error::BracketExpansion(MAX_BRACKET_DOUBLINGS));
        }
        hi = lo;
        lo *= 2.0;
        result.bracket_expansions += 1;
    }

    loop {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        result.bisections += 1;
        let stalled = mid <= lo || mid >= hi;
        if (hi - lo <= tol && g_mid.abs() <= tol) || stalled || result.bisections >= MAX_BISECTIONS {
            result.energy = Some(mid);
            result.residual = Some(g_mid.abs());
            result.bracket = Some((lo, hi));
            return Ok(result);
        }
        if g_mid > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// One cell of a bound-energy scan.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub coupling: f64,
    pub n_qubits: usize,
    pub outcome: std::result::Result<BoundStateResult, Error>,
}

impl BoundRow {
    pub fn energy(&self) -> Option<f64> {
        self.outcome.as_ref().ok().and_then(|r| r.energy)
    }
}

impl SweepRow for BoundRow {
    const HEADER: &'static str = "coupling,N,energy,exists,residual";

    fn coupling(&self) -> f64 {
        self.coupling
    }

    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn write_csv(&self, out: &mut String) {
        let _ = write!(out, "{},{},", self.coupling, self.n_qubits);
        match &self.outcome {
            Ok(r) => {
                opt_field(out, r.energy);
                let _ = write!(out, ",{},", r.exists);
                opt_field(out, r.residual);
            }
            Err(_) => out.push_str(",error,"),
        }
    }
}

/// Bound energies over a coupling grid for each N. Failed cells are kept in
/// the table with their error.
pub fn bound_energy_scan(
    template: &SpectralDensity,
    couplings: &[f64],
    n_list: &[usize],
    tol: f64,
) -> Result<SweepTable<BoundRow>> {
    validate_scan(couplings, n_list)?;
    check_tol(tol)?;
    Ok(run_cells(couplings, n_list, |coupling, n_qubits| BoundRow {
        coupling,
        n_qubits,
        outcome: template
            .with_coupling(coupling)
            .and_then(|sd| find_bound_state(&sd, n_qubits, tol)),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ohmic(gamma: f64, omega_c: f64) -> SpectralDensity {
        SpectralDensity::ohmic(gamma, omega_c).unwrap()
    }

    #[test]
    fn ohmic_y_at_zero_closed_form() {
        // ∫₀^∞ e^{−ω/ω_c} dω = ω_c
        for &(gamma, omega_c, n) in &[(1.0, 1.0, 1), (3.0, 0.5, 4), (0.2, 2.0, 10)] {
            let y = y_of(&ohmic(gamma, omega_c), n, 0.0, 1e-12).unwrap();
            let expected = 1.0 - n as f64 * gamma * omega_c / (2.0 * PI);
            assert_abs_diff_eq!(y, expected, epsilon = 1e-10);
        }
        let y = y_of(&ohmic(2.0 * PI, 1.0), 1, 0.0, 1e-12).unwrap();
        assert_abs_diff_eq!(y, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn y_tends_to_omega0_far_below() {
        let sd = ohmic(7.0, 1.0);
        let y = y_of(&sd, 3, -1e9, 1e-12).unwrap();
        assert_abs_diff_eq!(y, 1.0, epsilon = 1e-7);
        let sd = SpectralDensity::lorentzian(2.0, 1.0).unwrap();
        let y = y_of(&sd, 3, -1e9, 1e-12).unwrap();
        assert_abs_diff_eq!(y, 1.0, epsilon = 1e-7);
    }

    #[test]
    fn y_rejects_continuum() {
        assert!(matches!(y_of(&ohmic(1.0, 1.0), 1, 0.1, 1e-10), Err(Error::Domain(_))));
        assert!(y_of(&ohmic(1.0, 1.0), 1, -0.1, 0.0).is_err());
    }

    #[test]
    fn ohmic_existence_examples() {
        assert!(bound_state_exists(&ohmic(7.0, 1.0), 1).unwrap().0);
        assert!(!bound_state_exists(&ohmic(5.0, 1.0), 1).unwrap().0);
        assert!(bound_state_exists(&ohmic(5.0, 1.0), 2).unwrap().0);
    }

    #[test]
    fn critical_coupling_values() {
        assert_abs_diff_eq!(ohmic_critical_coupling(1.0, 1.0, 1), std::f64::consts::TAU, epsilon = 1e-12);
        assert_abs_diff_eq!(ohmic_critical_coupling(1.0, 1.0, 10), 0.628319, epsilon = 1e-6);
        assert!(ohmic_critical_coupling(1.0, 1.0, 1_000_000) < 1e-5);
    }

    #[test]
    fn no_bound_state_below_threshold() {
        let r = find_bound_state(&ohmic(5.0, 1.0), 1, 1e-8).unwrap();
        assert!(!r.exists);
        assert!(r.energy.is_none());
        assert!(r.y_at_zero > 0.0);
    }

    #[test]
    fn ohmic_bound_state_above_threshold() {
        let tol = 1e-8;
        let sd = ohmic(7.0, 1.0);
        let r = find_bound_state(&sd, 1, tol).unwrap();
        assert!(r.exists && !r.marginal);
        let e = r.energy.unwrap();
        assert!(e < 0.0);
        assert!(r.residual.unwrap() <= tol);
        let y = y_of(&sd, 1, e, 1e-12).unwrap();
        assert!((y - e).abs() <= 10.0 * tol);
        // regression anchor
        assert_abs_diff_eq!(e, OHMIC_7_ENERGY, epsilon = 1e-8);
    }

    // Independent check: Brent root of the same equation with QUADPACK.
    const OHMIC_7_ENERGY: f64 = -0.024_863_720_1;

    #[test]
    fn final_bracket_has_single_sign_change() {
        let sd = ohmic(4.0, 1.0);
        let r = find_bound_state(&sd, 3, 1e-9).unwrap();
        let (lo, hi) = r.bracket.unwrap();
        let g = |e: f64| e - y_of(&sd, 3, e, 1e-12).unwrap();
        assert!(g(lo) < 0.0 && g(hi) > 0.0);
    }

    #[test]
    fn lorentzian_weak_coupling_has_no_resolvable_state() {
        for n in [1, 2, 4, 10] {
            let sd = SpectralDensity::lorentzian(1e-3, 1.0).unwrap();
            let r = find_bound_state(&sd, n, 1e-8).unwrap();
            assert!(!r.exists, "N={n}");
            assert_eq!(r.edge_energy, -1e-8);
        }
        let strong = SpectralDensity::lorentzian(3.0, 1.0).unwrap();
        let r = find_bound_state(&strong, 1, 1e-8).unwrap();
        assert!(r.exists && r.energy.unwrap() < -1e-8);
    }

    #[test]
    fn zero_coupling_never_binds() {
        let sd = SpectralDensity::lorentzian(0.0, 1.0).unwrap();
        let r = find_bound_state(&sd, 10, 1e-8).unwrap();
        assert!(!r.exists);
        assert_eq!(r.y_at_zero, 1.0);
    }

    #[test]
    fn marginal_flag_near_threshold() {
        let gc = ohmic_critical_coupling(1.0, 1.0, 1);
        let r = find_bound_state(&ohmic(gc * (1.0 + 1e-7), 1.0), 1, 1e-10).unwrap();
        assert!(r.exists);
        assert!(r.marginal);
        assert!(r.energy.unwrap() < 0.0);
    }

    #[test]
    fn scan_monotone_in_coupling_and_n() {
        let couplings = [1.0, 2.0, 3.0, 4.0];
        let table = bound_energy_scan(&ohmic(1.0, 1.0), &couplings, &[2, 4], 1e-8).unwrap();
        assert_eq!(table.len(), 8);
        let e2: Vec<f64> = table.series(2).filter_map(|r| r.energy()).collect();
        let e4: Vec<f64> = table.series(4).filter_map(|r| r.energy()).collect();
        assert!(e2.windows(2).all(|w| w[1] < w[0]));
        assert!(e4.windows(2).all(|w| w[1] < w[0]));
        // N = 2 binds only above π, N = 4 above π/2
        assert_eq!(e2.len(), 1);
        assert_eq!(e4.len(), 3);
        for (a, b) in e2.iter().zip(&e4[2..]) {
            assert!(b < a);
        }
    }

    #[test]
    fn scan_csv_shape() {
        let table = bound_energy_scan(&ohmic(1.0, 1.0), &[1.0, 7.0], &[1], 1e-8).unwrap();
        let csv = table.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "coupling,N,energy,exists,residual");
        assert_eq!(lines[1], "1,1,,false,");
        assert!(lines[2].starts_with("7,1,-0.02486372"));
        assert!(lines[2].contains(",true,"));
    }

    #[test]
    fn scan_rejects_bad_grid() {
        assert!(bound_energy_scan(&ohmic(1.0, 1.0), &[2.0, 1.0], &[1], 1e-8).is_err());
    }
}
