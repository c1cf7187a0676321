//! Conditional entanglement of the three qubits for a fixed number of created
//! photons, plus the general pure-state measures those closed forms
//! specialize.
//!
//! Conditional states use the raw transition amplitudes as coefficients and
//! are not normalized; the normalized variant is reported separately.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use crate::amplitudes::amplitude_closed_form;
use crate::error::{Error, Result};
use crate::hilbert::CONFIGS;
use crate::params::SystemParams;
use crate::perturb::detuning;

pub type Coefficients = [Complex64; CONFIGS];

/// Index of `a_ijk` in a coefficient array.
pub const fn idx(i: usize, j: usize, k: usize) -> usize {
    4 * i + 2 * j + k
}

/// Highest photon number with a nonzero conditional sector.
pub const MAX_ENTANGLED_PHOTONS: usize = 2;

/// Qubit amplitudes conditioned on `n` created photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalState {
    pub n: usize,
    pub a: Coefficients,
}

impl ConditionalState {
    /// `a_ijk = A(n; i+j+k)`; the vacuum coefficient only carries the part
    /// induced by the switch.
    pub fn from_amplitudes(n: usize, p: &SystemParams) -> Result<Self> {
        let amp: Vec<f64> = (0..=3).map(|m| amplitude_closed_form(n, m, p)).collect::<Result<_>>()?;
        let a = std::array::from_fn(|q: usize| Complex64::new(amp[q.count_ones() as usize], 0.0));
        Ok(Self { n, a })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `None` for an empty sector.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm_sqr().sqrt();
        (norm > 0.0).then(|| Self {
            n: self.n,
            a: self.a.map(|c| c / norm),
        })
    }

    /// `(a, b, c, d)` of the pair AB with qubit C fixed.
    pub fn pair_coefficients(&self, third_excited: bool) -> [Complex64; 4] {
        let k = third_excited as usize;
        [
            self.a[idx(0, 0, k)],
            self.a[idx(1, 0, k)],
            self.a[idx(0, 1, k)],
            self.a[idx(1, 1, k)],
        ]
    }
}

/// Three-qubit residual tangle `4|d1 - 2 d2 + 4 d3|` (the modulus of the
/// Cayley hyperdeterminant). Homogeneous of degree four; accepts
/// unnormalized input.
pub fn residual_tangle_general(a: &Coefficients) -> f64 {
    let c = |i, j, k| a[idx(i, j, k)];
    let sq = |z: Complex64| z * z;
    let d1 = sq(c(0, 0, 0)) * sq(c(1, 1, 1))
        + sq(c(0, 0, 1)) * sq(c(1, 1, 0))
        + sq(c(0, 1, 0)) * sq(c(1, 0, 1))
        + sq(c(1, 0, 0)) * sq(c(0, 1, 1));
    let d2 = c(0, 0, 0) * c(1, 1, 1) * c(0, 1, 1) * c(1, 0, 0)
        + c(0, 0, 0) * c(1, 1, 1) * c(1, 0, 1) * c(0, 1, 0)
        + c(0, 0, 0) * c(1, 1, 1) * c(1, 1, 0) * c(0, 0, 1)
        + c(0, 1, 1) * c(1, 0, 0) * c(1, 0, 1) * c(0, 1, 0)
        + c(0, 1, 1) * c(1, 0, 0) * c(1, 1, 0) * c(0, 0, 1)
        + c(1, 0, 1) * c(0, 1, 0) * c(1, 1, 0) * c(0, 0, 1);
    let d3 = c(0, 0, 0) * c(1, 1, 0) * c(1, 0, 1) * c(0, 1, 1) + c(1, 1, 1) * c(0, 0, 1) * c(0, 1, 0) * c(1, 0, 0);
    4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm()
}

/// Pure two-qubit concurrence `2|ad - bc|` of `a|00> + b|10> + c|01> + d|11>`.
pub fn concurrence_pair_general(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    2.0 * (a * d - b * c).norm()
}

/// Closed-form conditional residual tangle. Nonzero only for two created
/// photons.
pub fn conditional_tangle(n: usize, p: &SystemParams) -> Result<f64> {
    if n != 2 {
        return Ok(0.0);
    }
    let (w1, w2, e0, l2) = (p.omega1(), p.omega2(), p.e0(), p.lambda().powi(2));
    let sqrt2 = std::f64::consts::SQRT_2;
    let pair_channel = 3.0 * sqrt2 * l2 / ((w1 + e0) * detuning(w2, e0)?.abs());
    let two_two = 2.0 * sqrt2 * l2 / ((w2 + e0) * (w1 + e0));
    Ok(16.0 * pair_channel * two_two.powi(3))
}

/// Closed-form conditional concurrence of the pair AB with the third qubit
/// in its ground (`third_excited = false`) or excited state.
///
/// For two photons with the third qubit excited this returns the canonical
/// `8λ⁴/((ω2+e0)²(ω1+e0)²)`; the pure-state formula applied to the same
/// coefficients gives twice that (see [`concurrence_formula_path`]).
pub fn conditional_concurrence(n: usize, third_excited: bool, p: &SystemParams) -> Result<f64> {
    let (w1, w2, e0, l) = (p.omega1(), p.omega2(), p.e0(), p.lambda());
    let l2 = l * l;
    let s1 = w1 + e0;
    let s2 = w2 + e0;
    Ok(match (n, third_excited) {
        (0, false) => 0.0,
        (0, true) => 2.0 * (2.0 * l2 / (detuning(w2, e0)? * s1)).powi(2),
        (1, false) => 2.0 * l2 * (1.0 / s2 - 1.0 / s1).powi(2),
        (1, true) => 0.0,
        (2, false) => 24.0 * l2 * l2 / ((detuning(w2, e0)? * s2).abs() * s1 * s1),
        (2, true) => 8.0 * l2 * l2 / (s2 * s2 * s1 * s1),
        _ => 0.0,
    })
}

/// `2|ad - bc|` evaluated on the conditional-state coefficients.
pub fn concurrence_formula_path(n: usize, third_excited: bool, p: &SystemParams) -> Result<f64> {
    let [a, b, c, d] = ConditionalState::from_amplitudes(n, p)?.pair_coefficients(third_excited);
    Ok(concurrence_pair_general(a, b, c, d))
}

fn spin_flip() -> Matrix4<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    Matrix4::new(
        z, z, z, -one, //
        z, z, one, z, //
        z, one, z, z, //
        -one, z, z, z,
    )
}

/// Wootters concurrence of a two-qubit density operator (trace need not be
/// one; the result scales linearly with it).
///
/// Writes `rho = Σ |v_i><v_i|` from its eigen-decomposition and takes the
/// singular values `s_i` of `τ_ij = <v_i| σy⊗σy |v_j*>`, which equal the
/// square roots of the eigenvalues of `ρ ρ̃`. Working with `τ` avoids square
/// roots of round-off-level eigenvalues for rank-deficient states.
pub fn concurrence(rho: &Matrix4<Complex64>) -> f64 {
    let herm = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut v = eig.eigenvectors;
    for (i, &p) in eig.eigenvalues.iter().enumerate() {
        let w = p.max(0.0).sqrt();
        v.column_mut(i).scale_mut(w);
    }
    let tau = v.adjoint() * spin_flip() * v.map(|c| c.conj());
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

/// Two-qubit reduced state keeping the slots other than `traced` (in
/// increasing slot order).
pub fn reduced_pair(a: &Coefficients, traced: usize) -> Matrix4<Complex64> {
    let kept: Vec<usize> = (0..3).filter(|&s| s != traced).collect();
    let mut rho = Matrix4::zeros();
    let bit = |q: usize, slot: usize| (q >> (2 - slot)) & 1;
    for q in 0..CONFIGS {
        for r in 0..CONFIGS {
            if bit(q, traced) != bit(r, traced) {
                continue;
            }
            let row = 2 * bit(q, kept[0]) + bit(q, kept[1]);
            let col = 2 * bit(r, kept[0]) + bit(r, kept[1]);
            rho[(row, col)] += a[q] * a[r].conj();
        }
    }
    rho
}

/// Single-qubit reduced state of `slot`.
pub fn reduced_single(a: &Coefficients, slot: usize) -> Matrix2<Complex64> {
    let mut rho = Matrix2::zeros();
    let bit = |q: usize| (q >> (2 - slot)) & 1;
    let rest = |q: usize| q & !(1 << (2 - slot));
    for q in 0..CONFIGS {
        for r in 0..CONFIGS {
            if rest(q) == rest(r) {
                rho[(bit(q), bit(r))] += a[q] * a[r].conj();
            }
        }
    }
    rho
}

/// The four terms of the monogamy balance for qubit A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonogamyTerms {
    /// `4 det ρ_A`
    pub tau_a_bc: f64,
    pub c2_ab: f64,
    pub c2_ac: f64,
    pub tau_abc: f64,
}

impl MonogamyTerms {
    pub fn residual(&self) -> f64 {
        self.tau_a_bc - self.c2_ab - self.c2_ac - self.tau_abc
    }
}

pub fn monogamy_terms(a: &Coefficients) -> MonogamyTerms {
    let rho_a = reduced_single(a, 0);
    let tau_a_bc = 4.0 * rho_a.determinant().re;
    MonogamyTerms {
        tau_a_bc,
        c2_ab: concurrence(&reduced_pair(a, 2)).powi(2),
        c2_ac: concurrence(&reduced_pair(a, 1)).powi(2),
        tau_abc: residual_tangle_general(a),
    }
}

/// `τ_A(BC) - C²_AB - C²_AC - τ_ABC`. Zero for every pure state.
pub fn monogamy_residual(a: &Coefficients, normalized: bool) -> Result<f64> {
    if normalized {
        let n2: f64 = a.iter().map(|c| c.norm_sqr()).sum();
        if (n2 - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(n2));
        }
    }
    Ok(monogamy_terms(a).residual())
}

/// Measures recomputed on the sector state scaled to unit norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedMeasures {
    pub tau_abc: f64,
    pub c_ab0: f64,
    pub c_ab1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorEntanglement {
    pub n: usize,
    pub tau_abc: f64,
    pub c_ab0: f64,
    pub c_ab1: f64,
    /// `2|a'd' - b'c'|` on the same coefficients as `c_ab1`.
    pub c_ab1_formula_path: f64,
    /// Set when the formula path disagrees with the closed form.
    pub c_ab1_flagged: bool,
    pub normalized_variant: Option<NormalizedMeasures>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub sectors: Vec<SectorEntanglement>,
}

impl EntanglementReport {
    pub fn sector(&self, n: usize) -> Option<&SectorEntanglement> {
        self.sectors.iter().find(|s| s.n == n)
    }
}

fn normalized_measures(state: &ConditionalState) -> Option<NormalizedMeasures> {
    let s = state.normalized()?;
    let pair = |third| {
        let [a, b, c, d] = s.pair_coefficients(third);
        concurrence_pair_general(a, b, c, d)
    };
    Some(NormalizedMeasures {
        tau_abc: residual_tangle_general(&s.a),
        c_ab0: pair(false),
        c_ab1: pair(true),
    })
}

pub fn sector_entanglement(n: usize, p: &SystemParams) -> Result<SectorEntanglement> {
    let c_ab1 = conditional_concurrence(n, true, p)?;
    let c_ab1_formula_path = concurrence_formula_path(n, true, p)?;
    let c_ab1_flagged = (c_ab1_formula_path - c_ab1).abs() > 1e-9 * c_ab1.abs().max(c_ab1_formula_path.abs());
    Ok(SectorEntanglement {
        n,
        tau_abc: conditional_tangle(n, p)?,
        c_ab0: conditional_concurrence(n, false, p)?,
        c_ab1,
        c_ab1_formula_path,
        c_ab1_flagged,
        normalized_variant: normalized_measures(&ConditionalState::from_amplitudes(n, p)?),
    })
}

/// Sectors `n = 0, 1, 2`; every measure vanishes above two photons.
pub fn entanglement_report(p: &SystemParams) -> Result<EntanglementReport> {
    let sectors = (0..=MAX_ENTANGLED_PHOTONS)
        .map(|n| sector_entanglement(n, p))
        .collect::<Result<_>>()?;
    Ok(EntanglementReport { sectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn zero() -> Coefficients {
        [c(0.0); CONFIGS]
    }

    fn ghz() -> Coefficients {
        let mut a = zero();
        a[0] = c(0.5f64.sqrt());
        a[7] = c(0.5f64.sqrt());
        a
    }

    fn w_state() -> Coefficients {
        let mut a = zero();
        for q in [1, 2, 4] {
            a[q] = c(1.0 / 3f64.sqrt());
        }
        a
    }

    /// Cayley hyperdeterminant by explicit ε-tensor contraction.
    fn hyperdet(a: &Coefficients) -> Complex64 {
        let eps = |x: usize, y: usize| -> f64 {
            match (x, y) {
                (0, 1) => 1.0,
                (1, 0) => -1.0,
                _ => 0.0,
            }
        };
        let t = |i, j, k| a[idx(i, j, k)];
        let mut sum = c(0.0);
        for [i, j, k, l, m, n, o, pp, q, r, s, u] in (0..4096usize).map(|x| std::array::from_fn(|b| (x >> b) & 1)) {
            let w = eps(i, o) * eps(j, m) * eps(k, n) * eps(l, r) * eps(pp, s) * eps(q, u);
            if w != 0.0 {
                sum += t(i, j, k) * t(l, m, n) * t(o, pp, q) * t(r, s, u) * w;
            }
        }
        sum * -0.5
    }

    fn arb_state() -> impl Strategy<Value = Coefficients> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), CONFIGS)
            .prop_filter("nonzero", |v| v.iter().map(|(x, y)| x * x + y * y).sum::<f64>() > 1e-3)
            .prop_map(|v| std::array::from_fn(|i| Complex64::new(v[i].0, v[i].1)))
    }

    fn permute(a: &Coefficients, perm: [usize; 3]) -> Coefficients {
        let mut out = zero();
        for (q, &coef) in a.iter().enumerate() {
            let mut t = 0;
            for (slot, &target) in perm.iter().enumerate() {
                if q >> (2 - slot) & 1 == 1 {
                    t |= 1 << (2 - target);
                }
            }
            out[t] = coef;
        }
        out
    }

    #[test]
    fn tangle_of_standard_states() {
        assert_relative_eq!(residual_tangle_general(&ghz()), 1.0, epsilon = 1e-12);
        assert!(residual_tangle_general(&w_state()).abs() < 1e-12);
        let mut product = zero();
        product[0] = c(1.0);
        assert_eq!(residual_tangle_general(&product), 0.0);
    }

    #[test]
    fn concurrence_of_standard_states() {
        let h = 0.5f64.sqrt();
        assert_relative_eq!(
            concurrence_pair_general(c(h), c(0.0), c(0.0), c(h)),
            1.0,
            epsilon = 1e-15
        );
        assert_eq!(concurrence_pair_general(c(1.0), c(0.0), c(0.0), c(0.0)), 0.0);
        assert_relative_eq!(
            concurrence_pair_general(c(0.0), c(0.3), c(0.3), c(0.0)),
            2.0 * 0.09,
            max_relative = 1e-15
        );
    }

    #[test]
    fn wootters_reduces_to_pure_formula() {
        let mut rng_state = 7u64;
        let mut next = || {
            rng_state = rng_state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (rng_state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..200 {
            let v: [Complex64; 4] = std::array::from_fn(|_| Complex64::new(next(), next()));
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let v = v.map(|z| z / n);
            // basis order |q_A q_B>: 00, 01, 10, 11
            let rho = Matrix4::from_fn(|i, j| v[i] * v[j].conj());
            let pure = concurrence_pair_general(v[0], v[2], v[1], v[3]);
            assert!((concurrence(&rho) - pure).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_states() {
        let h = 0.5f64.sqrt();
        let singlet = [c(0.0), c(h), c(-h), c(0.0)];
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let rho = Matrix4::from_fn(|i, j| {
                singlet[i] * singlet[j].conj() * p + if i == j { c((1.0 - p) / 4.0) } else { c(0.0) }
            });
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((concurrence(&rho) - expected).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn wootters_matches_hermitian_route() {
        // sqrt of eigenvalues of sqrt(ρ) ρ̃ sqrt(ρ), checked on full-rank states
        let mut seed = 3u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..50 {
            let g = Matrix4::from_fn(|_, _| Complex64::new(next(), next()));
            let rho = g * g.adjoint();
            let rho = rho / rho.trace();
            let e = rho.symmetric_eigen();
            let sqrt_rho = e.eigenvectors
                * Matrix4::from_diagonal(&e.eigenvalues.map(|x| c(x.max(0.0).sqrt())))
                * e.eigenvectors.adjoint();
            let tilde = spin_flip() * rho.map(|z| z.conj()) * spin_flip();
            let m = sqrt_rho * tilde * sqrt_rho;
            let mut l: Vec<f64> = m
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .map(|x| x.max(0.0).sqrt())
                .collect();
            l.sort_by(|a, b| b.total_cmp(a));
            let expected = (l[0] - l[1] - l[2] - l[3]).max(0.0);
            assert!((concurrence(&rho) - expected).abs() < 1e-7);
        }
    }

    #[test]
    fn tangle_matches_hyperdeterminant_on_fixed_states() {
        for a in [ghz(), w_state()] {
            assert!((residual_tangle_general(&a) - 4.0 * hyperdet(&a).norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn w_state_monogamy_terms() {
        let t = monogamy_terms(&w_state());
        assert_relative_eq!(t.tau_a_bc, 8.0 / 9.0, epsilon = 1e-12);
        assert_relative_eq!(t.c2_ab, 4.0 / 9.0, epsilon = 1e-12);
        assert_relative_eq!(t.c2_ac, 4.0 / 9.0, epsilon = 1e-12);
        assert!(t.residual().abs() < 1e-12);
        let g = monogamy_terms(&ghz());
        assert_relative_eq!(g.tau_a_bc, 1.0, epsilon = 1e-12);
        assert!(g.c2_ab < 1e-24 && g.c2_ac < 1e-24);
        assert!(g.residual().abs() < 1e-12);
    }

    #[test]
    fn monogamy_requires_normalization_when_asked() {
        let a = ghz().map(|z| z * 2.0);
        assert!(matches!(monogamy_residual(&a, true), Err(Error::NotNormalized(_))));
        assert!(monogamy_residual(&a, false).unwrap().abs() < 1e-12);
    }

    #[test]
    fn reduced_states_have_unit_trace() {
        let a = w_state();
        for t in 0..3 {
            assert_relative_eq!(reduced_pair(&a, t).trace().re, 1.0, epsilon = 1e-15);
            assert_relative_eq!(reduced_single(&a, t).trace().re, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn reference_sector_values() {
        let p = SystemParams::reference();
        assert_eq!(conditional_tangle(0, &p).unwrap(), 0.0);
        assert_eq!(conditional_tangle(1, &p).unwrap(), 0.0);
        assert_eq!(conditional_tangle(7, &p).unwrap(), 0.0);
        assert!((conditional_tangle(2, &p).unwrap() / 5.62e-8 - 1.0).abs() < 0.01);
        assert!((conditional_concurrence(0, true, &p).unwrap() / 0.2 - 1.0).abs() < 0.01);
        assert!((conditional_concurrence(1, false, &p).unwrap() / 2.95e-5 - 1.0).abs() < 0.01);
        assert!((conditional_concurrence(2, false, &p).unwrap() / 2.33e-3 - 1.0).abs() < 0.01);
        assert!((conditional_concurrence(2, true, &p).unwrap() / 3.02e-6 - 1.0).abs() < 0.01);
        for third in [false, true] {
            assert_eq!(conditional_concurrence(3, third, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn closed_forms_agree_with_general_measures() {
        for p in [
            SystemParams::reference(),
            SystemParams::new(5.0, 4.5, 3.721, 0.05, 20).unwrap(),
            SystemParams::new(6.0, 2.5, 3.721, 0.3, 20).unwrap(),
        ] {
            for n in 0..6 {
                let state = ConditionalState::from_amplitudes(n, &p).unwrap();
                let general = residual_tangle_general(&state.a);
                let closed = conditional_tangle(n, &p).unwrap();
                assert!(
                    (general - closed).abs() <= 1e-12 * closed.max(f64::MIN_POSITIVE),
                    "n={n}"
                );
                assert_relative_eq!(
                    concurrence_formula_path(n, false, &p).unwrap(),
                    conditional_concurrence(n, false, &p).unwrap(),
                    max_relative = 1e-12
                );
                let (canonical, formula) = (
                    conditional_concurrence(n, true, &p).unwrap(),
                    concurrence_formula_path(n, true, &p).unwrap(),
                );
                if n == 2 {
                    assert_relative_eq!(formula, 2.0 * canonical, max_relative = 1e-12);
                } else {
                    assert_relative_eq!(formula, canonical, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn report_flags_only_the_two_photon_excited_pair() {
        let r = entanglement_report(&SystemParams::reference()).unwrap();
        assert_eq!(r.sectors.len(), 3);
        for s in &r.sectors {
            assert_eq!(s.c_ab1_flagged, s.n == 2);
            let nv = s.normalized_variant.unwrap();
            assert!(nv.tau_abc >= 0.0 && nv.c_ab0 <= 1.0 + 1e-12 && nv.c_ab1 <= 1.0 + 1e-12);
        }
        let s2 = r.sector(2).unwrap();
        assert!(s2.tau_abc < s2.c_ab0);
    }

    #[test]
    fn tangle_grows_toward_resonance() {
        let base = SystemParams::reference();
        let above: Vec<f64> = (0..40)
            .map(|i| 3.73 + 0.02 * i as f64)
            .map(|w| conditional_tangle(2, &base.with_omega2(w).unwrap()).unwrap())
            .collect();
        assert!(above.windows(2).all(|w| w[0] > w[1]));
        let below: Vec<f64> = (0..40)
            .map(|i| 3.71 - 0.02 * i as f64)
            .map(|w| conditional_tangle(2, &base.with_omega2(w).unwrap()).unwrap())
            .collect();
        assert!(below.windows(2).all(|w| w[0] > w[1]));
    }

    proptest! {
        #[test]
        fn tangle_is_hyperdeterminant(a in arb_state()) {
            let h = 4.0 * hyperdet(&a).norm();
            prop_assert!((residual_tangle_general(&a) - h).abs() <= 1e-12 * h.max(1.0));
        }

        #[test]
        fn homogeneity(a in arb_state(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let k = Complex64::new(re, im);
            let scaled = a.map(|z| z * k);
            let t = residual_tangle_general(&a);
            prop_assert!((residual_tangle_general(&scaled) - k.norm_sqr().powi(2) * t).abs() <= 1e-12 * (1.0 + t) * k.norm_sqr().powi(2).max(1.0));
            let pair = |x: &Coefficients| concurrence_pair_general(x[0], x[4], x[2], x[6]);
            prop_assert!((pair(&scaled) - k.norm_sqr() * pair(&a)).abs() <= 1e-12 * k.norm_sqr().max(1.0) * (1.0 + pair(&a)));
        }

        #[test]
        fn tangle_is_permutation_invariant(a in arb_state()) {
            let t = residual_tangle_general(&a);
            for perm in crate::hilbert::slot_permutations() {
                prop_assert!((residual_tangle_general(&permute(&a, perm)) - t).abs() <= 1e-13 * (1.0 + t));
            }
        }

        #[test]
        fn monogamy_holds_for_pure_states(a in arb_state()) {
            prop_assert!(monogamy_residual(&a, false).unwrap().abs() < 1e-10);
        }
    }
}
