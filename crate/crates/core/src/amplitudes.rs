//! Transition amplitudes and excitation probabilities for a sudden switch of
//! the cavity frequency `omega1 -> omega2`, starting from the dressed ground
//! state.
//!
//! Only the four channels `(n; m)` = (2;0), (1;1), (0;2), (2;2) are nonzero at
//! this order; every other amplitude, including all three-qubit ones, is zero.

use serde::Serialize;

use crate::error::Result;
use crate::hilbert::{configs_with, BasisState};
use crate::params::SystemParams;
use crate::perturb::{detuning, perturbed_state};

/// Channels with a nonzero closed-form amplitude.
pub const DLE_CHANNELS: [(usize, usize); 4] = [(2, 0), (1, 1), (0, 2), (2, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeSet {
    pub a_2_0: f64,
    pub a_1_1: f64,
    pub a_0_2: f64,
    pub a_2_2: f64,
}

impl AmplitudeSet {
    /// Amplitude for `n` created photons and `m` excited qubits.
    pub fn get(&self, n: usize, m: usize) -> f64 {
        match (n, m) {
            (2, 0) => self.a_2_0,
            (1, 1) => self.a_1_1,
            (0, 2) => self.a_0_2,
            (2, 2) => self.a_2_2,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilitySet {
    pub w_0: f64,
    pub w_1: f64,
    pub w_2: f64,
    pub w_3: f64,
}

impl ProbabilitySet {
    pub fn get(&self, m: usize) -> f64 {
        match m {
            0 => self.w_0,
            1 => self.w_1,
            2 => self.w_2,
            _ => self.w_3,
        }
    }
}

pub fn amplitude_set(p: &SystemParams) -> Result<AmplitudeSet> {
    let (w1, w2, e0, l) = (p.omega1(), p.omega2(), p.e0(), p.lambda());
    let l2 = l * l;
    let d2 = detuning(w2, e0)?;
    let sqrt2 = std::f64::consts::SQRT_2;
    Ok(AmplitudeSet {
        a_2_0: -3.0 * sqrt2 * l2 / ((w1 + e0) * d2),
        a_1_1: l * (1.0 / (w2 + e0) - 1.0 / (w1 + e0)),
        a_0_2: 2.0 * l2 / (d2 * (w1 + e0)),
        a_2_2: -2.0 * sqrt2 * l2 / ((w2 + e0) * (w1 + e0)),
    })
}

pub fn amplitude_closed_form(n: usize, m: usize, p: &SystemParams) -> Result<f64> {
    if !DLE_CHANNELS.contains(&(n, m)) {
        return Ok(0.0);
    }
    Ok(amplitude_set(p)?.get(n, m))
}

/// `<target at omega2 | vacuum at omega1>` with both states taken to first
/// order, including the zeroth-order survival term.
pub fn full_overlap(target: BasisState, p: &SystemParams) -> Result<f64> {
    let bra = perturbed_state(target, p.omega2(), p)?;
    let ket = perturbed_state(BasisState::vacuum(), p.omega1(), p)?;
    Ok(bra.inner(&ket).re)
}

/// Overlap amplitude for a specific target product state. For the vacuum
/// target the zeroth-order survival term (exactly 1) is removed, leaving only
/// the part induced by the switch.
pub fn overlap_amplitude(target: BasisState, p: &SystemParams) -> Result<f64> {
    let full = full_overlap(target, p)?;
    Ok(if target == BasisState::vacuum() {
        full - 1.0
    } else {
        full
    })
}

/// Overlap amplitude for the channel `(n; m)`, using the first member of the
/// excitation class as target.
pub fn amplitude_via_overlap(n: usize, m: usize, p: &SystemParams) -> Result<f64> {
    let q = configs_with(m)
        .next()
        .ok_or_else(|| crate::error::Error::Argument(format!("no class with {m} excitations")))?;
    overlap_amplitude(BasisState::new(n, q), p)
}

pub fn probabilities(p: &SystemParams) -> Result<ProbabilitySet> {
    let a = amplitude_set(p)?;
    Ok(ProbabilitySet {
        w_0: a.a_2_0.powi(2),
        w_1: a.a_1_1.powi(2),
        w_2: a.a_0_2.powi(2) + a.a_2_2.powi(2),
        w_3: 0.0,
    })
}

/// `w_2 - w_1^2`: how far two-qubit excitation is from a product of
/// independent single-qubit events.
pub fn entanglement_witness_product_gap(p: &SystemParams) -> Result<f64> {
    let w = probabilities(p)?;
    Ok(w.w_2 - w.w_1 * w.w_1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeRow {
    pub n: usize,
    pub m: usize,
    pub amplitude: f64,
    pub probability: f64,
}

/// One row per nonzero channel, in [`DLE_CHANNELS`] order.
pub fn amplitude_rows(p: &SystemParams) -> Result<Vec<AmplitudeRow>> {
    let a = amplitude_set(p)?;
    Ok(DLE_CHANNELS
        .iter()
        .map(|&(n, m)| {
            let amplitude = a.get(n, m);
            AmplitudeRow {
                n,
                m,
                amplitude,
                probability: amplitude * amplitude,
            }
        })
        .collect())
}
