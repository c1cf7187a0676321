//! Closed-form Rayleigh–Schrödinger results for the stationary cavity:
//! bare energies, Lamb shifts, second-order level energies and first-order
//! dressed states.
//!
//! The closed forms treat the whole qubit–photon coupling (counter-rotating
//! and rotating-wave parts) as the perturbation. Inside a degenerate
//! excitation class the coupling has no matrix elements, so the
//! non-degenerate formulas are applied per product state.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{configs_with, BasisState, StateVector, QUBITS};
use crate::params::SystemParams;

/// Relative width of the band around `omega = e0` where closed forms refuse
/// to evaluate.
pub const SINGULARITY_GUARD: f64 = 1e-12;

/// `omega - e0`, or an error inside the singularity band.
pub(crate) fn detuning(omega: f64, e0: f64) -> Result<f64> {
    let d = omega - e0;
    if d.abs() < SINGULARITY_GUARD * e0 {
        return Err(Error::Singular(format!(
            "omega = {omega} GHz is resonant with e0 = {e0} GHz"
        )));
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambShift {
    pub m: usize,
    pub omega: f64,
    pub value: f64,
}

pub fn energy_unperturbed(s: BasisState, omega: f64, e0: f64) -> f64 {
    s.photons as f64 * omega + s.excitations() as f64 * e0
}

/// Photon-number-independent second-order shift of the class with `m`
/// excited qubits.
pub fn lamb_shift(m: usize, omega: f64, p: &SystemParams) -> Result<LambShift> {
    let (e0, l2) = (p.e0(), p.lambda() * p.lambda());
    let value = match m {
        0 => -3.0 * l2 / (omega + e0),
        1 => {
            let d = detuning(omega, e0)?;
            l2 * (e0 - 3.0 * omega) / (d * (omega + e0))
        }
        2 => {
            let d = detuning(omega, e0)?;
            -l2 * (e0 + 3.0 * omega) / (d * (omega + e0))
        }
        3 => -3.0 * l2 / detuning(omega, e0)?,
        _ => return Err(Error::Argument(format!("excitation count {m} exceeds {QUBITS}"))),
    };
    Ok(LambShift { m, omega, value })
}

/// Level energy through second order in the coupling.
///
/// Splits into the bare energy, a part linear in the photon number with
/// weight (ground qubits − excited qubits)·2λ²e0/(ω²−e0²), and the Lamb
/// shift of the class.
pub fn energy_second_order(s: BasisState, omega: f64, p: &SystemParams) -> Result<f64> {
    let (n, m) = (s.photons, s.excitations());
    let e0 = p.e0();
    let dynamic = if n == 0 {
        0.0
    } else {
        let d = detuning(omega, e0)?;
        let weight = QUBITS as f64 - 2.0 * m as f64;
        weight * 2.0 * p.lambda().powi(2) * e0 * n as f64 / (d * (omega + e0))
    };
    Ok(energy_unperturbed(s, omega, e0) + dynamic + lamb_shift(m, omega, p)?.value)
}

/// First-order state continuing from `s`, unnormalized (unit weight on `s`).
///
/// For every qubit slot `j` the coupling admixes:
/// * ground `j`: `|n+1; +j>` with `-λ√(n+1)/(ω+e0)` and `|n-1; +j>` with
///   `+λ√n/(ω-e0)`;
/// * excited `j`: `|n-1; -j>` with `+λ√n/(ω+e0)` and `|n+1; -j>` with
///   `-λ√(n+1)/(ω-e0)`.
pub fn perturbed_state(s: BasisState, omega: f64, p: &SystemParams) -> Result<StateVector> {
    if s.photons + 1 > p.nmax() {
        return Err(Error::Headroom(format!(
            "state |{s}> needs n+1 = {} photons but nmax = {}",
            s.photons + 1,
            p.nmax()
        )));
    }
    let e0 = p.e0();
    let minus = detuning(omega, e0)?;
    let plus = omega + e0;
    let l = p.lambda();
    let n = s.photons;
    let up = ((n + 1) as f64).sqrt();
    let down = (n as f64).sqrt();

    let mut out = StateVector::basis_state(s);
    for j in 0..QUBITS {
        let flipped = s.qubits ^ BasisState::mask(j);
        if s.is_excited(j) {
            if n > 0 {
                out.add_real(BasisState::new(n - 1, flipped), l * down / plus);
            }
            out.add_real(BasisState::new(n + 1, flipped), -l * up / minus);
        } else {
            out.add_real(BasisState::new(n + 1, flipped), -l * up / plus);
            if n > 0 {
                out.add_real(BasisState::new(n - 1, flipped), l * down / minus);
            }
        }
    }
    Ok(out)
}

/// Normalized permutation-symmetric class vector `|n; S_m>`.
pub fn class_state(n: usize, m: usize) -> StateVector {
    let configs: Vec<u8> = configs_with(m).collect();
    let w = 1.0 / (configs.len() as f64).sqrt();
    let mut v = StateVector::new();
    for q in configs {
        v.add_real(BasisState::new(n, q), w);
    }
    v
}

/// First-order state continuing from the symmetric class vector `|n; S_m>`.
pub fn perturbed_class_state(n: usize, m: usize, omega: f64, p: &SystemParams) -> Result<StateVector> {
    let mut out = StateVector::new();
    for (s, c) in class_state(n, m).iter() {
        out = out.plus(&perturbed_state(s, omega, p)?.scaled(c));
    }
    Ok(out)
}
