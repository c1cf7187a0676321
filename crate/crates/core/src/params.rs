//! Physical parameters and perturbation-validity diagnostics.
//!
//! All frequencies are linear frequencies in GHz. Every quantity this crate
//! reports is a ratio of frequencies, so a common factor of 2π on the inputs
//! changes nothing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_NMAX: usize = 20;
pub const DEFAULT_VALIDITY_THRESHOLD: f64 = 0.5;

/// Cavity and qubit parameters for one boundary switch `omega1 -> omega2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    omega1: f64,
    omega2: f64,
    e0: f64,
    lambda: f64,
    nmax: usize,
}

fn positive(field: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::Param {
            field,
            reason: format!("must be finite (got {value})"),
        });
    }
    if value <= 0.0 {
        return Err(Error::Param {
            field,
            reason: format!("must be positive (got {value})"),
        });
    }
    Ok(value)
}

impl SystemParams {
    pub fn new(omega1: f64, omega2: f64, e0: f64, lambda: f64, nmax: usize) -> Result<Self> {
        let omega1 = positive("omega1_ghz", omega1)?;
        let omega2 = positive("omega2_ghz", omega2)?;
        let e0 = positive("e0_ghz", e0)?;
        let lambda = positive("lambda_ghz", lambda)?;
        if nmax < 2 {
            return Err(Error::Param {
                field: "nmax",
                reason: format!("must be at least 2 (got {nmax})"),
            });
        }
        if omega1 == e0 {
            return Err(Error::Param {
                field: "omega1_ghz",
                reason: "must differ from e0_ghz (resonant closed forms are singular)".into(),
            });
        }
        if omega2 == e0 {
            return Err(Error::Param {
                field: "omega2_ghz",
                reason: "must differ from e0_ghz (resonant closed forms are singular)".into(),
            });
        }
        Ok(Self {
            omega1,
            omega2,
            e0,
            lambda,
            nmax,
        })
    }

    /// The parameter set used throughout the reference calculation:
    /// 5 GHz cavity switched to 3.75 GHz, 3.721 GHz qubits, 0.2 GHz coupling.
    pub fn reference() -> Self {
        Self::new(5.0, 3.75, 3.721, 0.2, DEFAULT_NMAX).expect("reference parameters are valid")
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn with_omega2(&self, omega2: f64) -> Result<Self> {
        Self::new(self.omega1, omega2, self.e0, self.lambda, self.nmax)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.omega1, self.omega2, self.e0, lambda, self.nmax)
    }

    pub fn with_nmax(&self, nmax: usize) -> Result<Self> {
        Self::new(self.omega1, self.omega2, self.e0, self.lambda, nmax)
    }

    /// Multiplies all four frequencies by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(
            self.omega1 * k,
            self.omega2 * k,
            self.e0 * k,
            self.lambda * k,
            self.nmax,
        )
    }

    pub fn to_file(&self) -> ParamsFile {
        ParamsFile {
            omega1_ghz: Some(self.omega1),
            omega2_ghz: Some(self.omega2),
            e0_ghz: Some(self.e0),
            lambda_ghz: Some(self.lambda),
            nmax: Some(self.nmax),
        }
    }
}

/// Flat JSON parameter document. Every key is optional so that files can be
/// merged with command-line overrides before validation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e0_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
}

impl ParamsFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Argument(format!("parameter file: {e}")))
    }

    /// Fields set in `other` win.
    pub fn overlay(&self, other: &ParamsFile) -> ParamsFile {
        ParamsFile {
            omega1_ghz: other.omega1_ghz.or(self.omega1_ghz),
            omega2_ghz: other.omega2_ghz.or(self.omega2_ghz),
            e0_ghz: other.e0_ghz.or(self.e0_ghz),
            lambda_ghz: other.lambda_ghz.or(self.lambda_ghz),
            nmax: other.nmax.or(self.nmax),
        }
    }

    /// Builds validated parameters; a missing key is reported as a parameter
    /// error naming that key.
    pub fn resolve(&self) -> Result<SystemParams> {
        fn need(field: &'static str, v: Option<f64>) -> Result<f64> {
            v.ok_or(Error::Param {
                field,
                reason: "is required".into(),
            })
        }
        SystemParams::new(
            need("omega1_ghz", self.omega1_ghz)?,
            need("omega2_ghz", self.omega2_ghz)?,
            need("e0_ghz", self.e0_ghz)?,
            need("lambda_ghz", self.lambda_ghz)?,
            self.nmax.unwrap_or(DEFAULT_NMAX),
        )
    }
}

/// Ratios of the coupling to every energy denominator that appears in the
/// perturbative closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    pub eta_sum1: f64,
    pub eta_sum2: f64,
    pub eta_diff1: f64,
    pub eta_diff2: f64,
    pub threshold: f64,
    pub perturbative_ok: bool,
}

impl ValidityReport {
    pub fn ratios(&self) -> [f64; 4] {
        [self.eta_sum1, self.eta_sum2, self.eta_diff1, self.eta_diff2]
    }

    pub fn largest(&self) -> f64 {
        self.ratios().into_iter().fold(0.0, f64::max)
    }
}

pub fn validate_params(p: &SystemParams, threshold: f64) -> Result<ValidityReport> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Argument(format!(
            "validity threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let eta_sum1 = p.lambda / (p.omega1 + p.e0);
    let eta_sum2 = p.lambda / (p.omega2 + p.e0);
    let eta_diff1 = p.lambda / (p.omega1 - p.e0).abs();
    let eta_diff2 = p.lambda / (p.omega2 - p.e0).abs();
    let perturbative_ok = [eta_sum1, eta_sum2, eta_diff1, eta_diff2]
        .iter()
        .all(|&r| r < threshold);
    Ok(ValidityReport {
        eta_sum1,
        eta_sum2,
        eta_diff1,
        eta_diff2,
        threshold,
        perturbative_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_params_flag_the_near_resonance() {
        let r = validate_params(&SystemParams::reference(), 0.5).unwrap();
        assert_relative_eq!(r.eta_diff2, 0.2 / 0.029, max_relative = 1e-9);
        assert!(r.eta_diff2 > 6.89 && r.eta_diff2 < 6.91);
        assert!(!r.perturbative_ok);
    }

    #[test]
    fn weak_coupling_is_perturbative() {
        let p = SystemParams::new(5.0, 5.0, 3.721, 0.005, 20).unwrap();
        let r = validate_params(&p, 0.5).unwrap();
        assert!(r.ratios().iter().all(|&x| x < 0.004));
        assert!(r.perturbative_ok);
    }

    #[test]
    fn ratios_vanish_with_coupling() {
        let p = SystemParams::new(5.0, 4.0, 3.721, 1e-12, 20).unwrap();
        let r = validate_params(&p, 0.5).unwrap();
        assert!(r.largest() < 1e-11);
    }

    #[test]
    fn constructor_rejects_bad_inputs() {
        let cases = [
            (SystemParams::new(-1.0, 4.0, 3.7, 0.1, 20), "omega1_ghz"),
            (SystemParams::new(5.0, f64::NAN, 3.7, 0.1, 20), "omega2_ghz"),
            (SystemParams::new(5.0, 4.0, 0.0, 0.1, 20), "e0_ghz"),
            (SystemParams::new(5.0, 4.0, 3.7, f64::INFINITY, 20), "lambda_ghz"),
            (SystemParams::new(5.0, 4.0, 3.7, 0.1, 1), "nmax"),
            (SystemParams::new(5.0, 3.7, 3.7, 0.1, 20), "omega2_ghz"),
            (SystemParams::new(3.7, 4.0, 3.7, 0.1, 20), "omega1_ghz"),
        ];
        for (res, field) in cases {
            match res {
                Err(Error::Param { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected error on {field}, got {other:?}"),
            }
        }
    }

    #[test]
    fn threshold_domain() {
        let p = SystemParams::reference();
        assert!(validate_params(&p, 0.0).is_err());
        assert!(validate_params(&p, 1.0).is_err());
        assert!(validate_params(&p, f64::NAN).is_err());
    }

    #[test]
    fn file_overlay_and_missing_key() {
        let file =
            ParamsFile::from_json(r#"{"omega1_ghz":5,"omega2_ghz":3.75,"e0_ghz":3.721,"lambda_ghz":0.2}"#).unwrap();
        let flags = ParamsFile {
            lambda_ghz: Some(0.1),
            ..Default::default()
        };
        let p = file.overlay(&flags).resolve().unwrap();
        assert_eq!(p.lambda(), 0.1);
        assert_eq!(p.nmax(), DEFAULT_NMAX);

        let partial = ParamsFile {
            omega1_ghz: Some(5.0),
            ..Default::default()
        };
        match partial.resolve() {
            Err(Error::Param { field, .. }) => assert_eq!(field, "omega2_ghz"),
            other => panic!("{other:?}"),
        }
        assert!(ParamsFile::from_json(r#"{"omega_1":5}"#).is_err());
    }

    proptest::proptest! {
        #[test]
        fn ratios_are_scale_invariant(k in 1e-3f64..1e3, w1 in 1.0f64..10.0, w2 in 1.0f64..10.0, l in 1e-3f64..0.5) {
            let e0 = 3.721;
            proptest::prop_assume!((w1 - e0).abs() > 1e-3 && (w2 - e0).abs() > 1e-3);
            let p = SystemParams::new(w1, w2, e0, l, 20).unwrap();
            let a = validate_params(&p, 0.5).unwrap();
            let b = validate_params(&p.scaled(k).unwrap(), 0.5).unwrap();
            for (x, y) in a.ratios().iter().zip(b.ratios()) {
                proptest::prop_assert!(((x - y) / x).abs() < 1e-12);
                proptest::prop_assert!(x.is_finite() && *x > 0.0);
            }
        }
    }
}
