//! Fixed-format serialization of reports, sweeps and validation tables.
//!
//! Every computed float is written in scientific notation with ten
//! significant digits so that repeated runs are byte-identical. Input
//! parameters are echoed as given.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::amplitudes::{
    amplitude_rows, amplitude_set, entanglement_witness_product_gap, probabilities, AmplitudeRow, AmplitudeSet,
    ProbabilitySet,
};
use crate::entangle::{entanglement_report, EntanglementReport, NormalizedMeasures, SectorEntanglement};
use crate::error::Result;
use crate::oracle::{Validation, ValidationRow};
use crate::params::{validate_params, ParamsFile, SystemParams, ValidityReport, DEFAULT_VALIDITY_THRESHOLD};

/// `x` with ten significant digits, e.g. `1.472336291e-5`.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

/// Float that serializes to JSON through [`sci`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(sci(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("report types always serialize");
    out.push('\n');
    out
}

/// Headline numbers of a single-point report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Headline {
    pub w_1: f64,
    pub w_2: f64,
    pub tau_2: f64,
    pub c_0_ab1: f64,
    pub c_1_ab0: f64,
    pub c_2_ab0: f64,
    pub c_2_ab1: f64,
}

/// Everything the closed forms say about one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub inputs: ParamsFile,
    pub validity: ValidityReport,
    pub amplitudes: AmplitudeSet,
    pub rows: Vec<AmplitudeRow>,
    pub probabilities: ProbabilitySet,
    pub product_gap: f64,
    pub entanglement: EntanglementReport,
}

impl Report {
    /// `inputs` is echoed back unchanged; pass `p.to_file()` when the
    /// parameters did not come from a file or flags.
    pub fn build(p: &SystemParams, inputs: ParamsFile) -> Result<Self> {
        Ok(Self {
            inputs,
            validity: validate_params(p, DEFAULT_VALIDITY_THRESHOLD)?,
            amplitudes: amplitude_set(p)?,
            rows: amplitude_rows(p)?,
            probabilities: probabilities(p)?,
            product_gap: entanglement_witness_product_gap(p)?,
            entanglement: entanglement_report(p)?,
        })
    }

    pub fn headline(&self) -> Headline {
        let s = |n| self.entanglement.sector(n).expect("sectors 0..=2 present");
        Headline {
            w_1: self.probabilities.w_1,
            w_2: self.probabilities.w_2,
            tau_2: s(2).tau_abc,
            c_0_ab1: s(0).c_ab1,
            c_1_ab0: s(1).c_ab0,
            c_2_ab0: s(2).c_ab0,
            c_2_ab1: s(2).c_ab1,
        }
    }

    pub fn to_json(&self) -> String {
        let v = &self.validity;
        let h = self.headline();
        let doc = ReportJson {
            inputs: &self.inputs,
            validity: ValidityJson {
                eta_sum1: Sci(v.eta_sum1),
                eta_sum2: Sci(v.eta_sum2),
                eta_diff1: Sci(v.eta_diff1),
                eta_diff2: Sci(v.eta_diff2),
                threshold: Sci(v.threshold),
                perturbative_ok: v.perturbative_ok,
            },
            amplitudes: self.rows.iter().map(AmplitudeRowJson::from).collect(),
            probabilities: ProbabilityJson {
                w_0: Sci(self.probabilities.w_0),
                w_1: Sci(self.probabilities.w_1),
                w_2: Sci(self.probabilities.w_2),
                w_3: Sci(self.probabilities.w_3),
            },
            product_gap: Sci(self.product_gap),
            entanglement: self.entanglement.sectors.iter().map(SectorJson::from).collect(),
            headline: HeadlineJson {
                w_1: Sci(h.w_1),
                w_2: Sci(h.w_2),
                tau_2: Sci(h.tau_2),
                c_0_ab1: Sci(h.c_0_ab1),
                c_1_ab0: Sci(h.c_1_ab0),
                c_2_ab0: Sci(h.c_2_ab0),
                c_2_ab1: Sci(h.c_2_ab1),
            },
        };
        to_json(&doc)
    }

    /// Long format: one row per `(section, n, m, measure)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("section,n,m,measure,value\n");
        let mut row = |section: &str, n: Option<usize>, m: Option<usize>, measure: &str, value: String| {
            let f = |x: Option<usize>| x.map(|x| x.to_string()).unwrap_or_default();
            writeln!(out, "{section},{},{},{measure},{value}", f(n), f(m)).unwrap();
        };
        let v = &self.validity;
        for (name, x) in [
            ("eta_sum1", v.eta_sum1),
            ("eta_sum2", v.eta_sum2),
            ("eta_diff1", v.eta_diff1),
            ("eta_diff2", v.eta_diff2),
            ("threshold", v.threshold),
        ] {
            row("validity", None, None, name, sci(x));
        }
        row("validity", None, None, "perturbative_ok", v.perturbative_ok.to_string());
        for r in &self.rows {
            row("amplitude", Some(r.n), Some(r.m), "amplitude", sci(r.amplitude));
            row("amplitude", Some(r.n), Some(r.m), "probability", sci(r.probability));
        }
        for m in 0..=3 {
            row("probability", None, Some(m), "w", sci(self.probabilities.get(m)));
        }
        row("witness", None, None, "product_gap", sci(self.product_gap));
        for s in &self.entanglement.sectors {
            let n = Some(s.n);
            row("entanglement", n, None, "tau_abc", sci(s.tau_abc));
            row("entanglement", n, None, "c_ab0", sci(s.c_ab0));
            row("entanglement", n, None, "c_ab1", sci(s.c_ab1));
            row("entanglement", n, None, "c_ab1_formula_path", sci(s.c_ab1_formula_path));
            row("entanglement", n, None, "c_ab1_flagged", s.c_ab1_flagged.to_string());
            if let Some(nv) = &s.normalized_variant {
                row("entanglement", n, None, "normalized_tau_abc", sci(nv.tau_abc));
                row("entanglement", n, None, "normalized_c_ab0", sci(nv.c_ab0));
                row("entanglement", n, None, "normalized_c_ab1", sci(nv.c_ab1));
            }
        }
        out
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    inputs: &'a ParamsFile,
    validity: ValidityJson,
    amplitudes: Vec<AmplitudeRowJson>,
    probabilities: ProbabilityJson,
    product_gap: Sci,
    entanglement: Vec<SectorJson>,
    headline: HeadlineJson,
}

#[derive(Serialize)]
struct ValidityJson {
    eta_sum1: Sci,
    eta_sum2: Sci,
    eta_diff1: Sci,
    eta_diff2: Sci,
    threshold: Sci,
    perturbative_ok: bool,
}

#[derive(Serialize)]
struct AmplitudeRowJson {
    n: usize,
    m: usize,
    amplitude: Sci,
    probability: Sci,
}

impl From<&AmplitudeRow> for AmplitudeRowJson {
    fn from(r: &AmplitudeRow) -> Self {
        Self {
            n: r.n,
            m: r.m,
            amplitude: Sci(r.amplitude),
            probability: Sci(r.probability),
        }
    }
}

#[derive(Serialize)]
struct ProbabilityJson {
    w_0: Sci,
    w_1: Sci,
    w_2: Sci,
    w_3: Sci,
}

#[derive(Serialize)]
struct NormalizedJson {
    tau_abc: Sci,
    c_ab0: Sci,
    c_ab1: Sci,
}

impl From<&NormalizedMeasures> for NormalizedJson {
    fn from(v: &NormalizedMeasures) -> Self {
        Self {
            tau_abc: Sci(v.tau_abc),
            c_ab0: Sci(v.c_ab0),
            c_ab1: Sci(v.c_ab1),
        }
    }
}

#[derive(Serialize)]
struct SectorJson {
    n: usize,
    tau_abc: Sci,
    c_ab0: Sci,
    c_ab1: Sci,
    c_ab1_formula_path: Sci,
    c_ab1_flagged: bool,
    normalized_variant: Option<NormalizedJson>,
}

impl From<&SectorEntanglement> for SectorJson {
    fn from(s: &SectorEntanglement) -> Self {
        Self {
            n: s.n,
            tau_abc: Sci(s.tau_abc),
            c_ab0: Sci(s.c_ab0),
            c_ab1: Sci(s.c_ab1),
            c_ab1_formula_path: Sci(s.c_ab1_formula_path),
            c_ab1_flagged: s.c_ab1_flagged,
            normalized_variant: s.normalized_variant.as_ref().map(NormalizedJson::from),
        }
    }
}

#[derive(Serialize)]
struct HeadlineJson {
    w_1: Sci,
    w_2: Sci,
    tau_2: Sci,
    c_0_ab1: Sci,
    c_1_ab0: Sci,
    c_2_ab0: Sci,
    c_2_ab1: Sci,
}

/// Amplitude rows as CSV with columns `n,m,amplitude,probability`.
pub fn amplitude_rows_csv(rows: &[AmplitudeRow]) -> String {
    let mut out = String::from("n,m,amplitude,probability\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.n, r.m, sci(r.amplitude), sci(r.probability)).unwrap();
    }
    out
}

pub fn amplitude_rows_json(rows: &[AmplitudeRow]) -> String {
    to_json(&rows.iter().map(AmplitudeRowJson::from).collect::<Vec<_>>())
}

/// Entanglement sectors as CSV. The normalized variant is flattened into
/// `normalized_*` columns, empty for a vanishing sector.
pub fn entanglement_csv(report: &EntanglementReport) -> String {
    let mut out = String::from(
        "n,tau_abc,c_ab0,c_ab1,c_ab1_formula_path,c_ab1_flagged,normalized_tau_abc,normalized_c_ab0,normalized_c_ab1\n",
    );
    for s in &report.sectors {
        let nv = s
            .normalized_variant
            .map(|v| format!("{},{},{}", sci(v.tau_abc), sci(v.c_ab0), sci(v.c_ab1)))
            .unwrap_or_else(|| ",,".into());
        writeln!(
            out,
            "{},{},{},{},{},{},{nv}",
            s.n,
            sci(s.tau_abc),
            sci(s.c_ab0),
            sci(s.c_ab1),
            sci(s.c_ab1_formula_path),
            s.c_ab1_flagged
        )
        .unwrap();
    }
    out
}

pub fn entanglement_json(report: &EntanglementReport) -> String {
    to_json(&report.sectors.iter().map(SectorJson::from).collect::<Vec<_>>())
}

#[derive(Serialize)]
struct ValidationRowJson {
    channel_n: usize,
    channel_m: usize,
    closed_form: Sci,
    oracle: Sci,
    rel_dev: Sci,
    nmax: usize,
    lambda_scale: Sci,
}

impl From<&ValidationRow> for ValidationRowJson {
    fn from(r: &ValidationRow) -> Self {
        Self {
            channel_n: r.channel_n,
            channel_m: r.channel_m,
            closed_form: Sci(r.closed_form),
            oracle: Sci(r.oracle),
            rel_dev: Sci(r.rel_dev),
            nmax: r.nmax,
            lambda_scale: Sci(r.lambda_scale),
        }
    }
}

#[derive(Serialize)]
struct CheckJson {
    channel_n: usize,
    channel_m: usize,
    shrink_factors: Vec<Sci>,
    passed: bool,
    gated: bool,
}

#[derive(Serialize)]
struct ValidationJson {
    rows: Vec<ValidationRowJson>,
    checks: Vec<CheckJson>,
}

pub fn validation_csv(v: &Validation) -> String {
    let mut out = String::from("channel_n,channel_m,closed_form,oracle,rel_dev,nmax,lambda_scale\n");
    for r in &v.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.channel_n,
            r.channel_m,
            sci(r.closed_form),
            sci(r.oracle),
            sci(r.rel_dev),
            r.nmax,
            sci(r.lambda_scale)
        )
        .unwrap();
    }
    out
}

/// Rows plus per-channel scaling checks; `gated` marks the channels that
/// decide the overall verdict.
pub fn validation_json(v: &Validation, gated: &[(usize, usize)]) -> String {
    to_json(&ValidationJson {
        rows: v.rows.iter().map(ValidationRowJson::from).collect(),
        checks: v
            .checks
            .iter()
            .map(|c| CheckJson {
                channel_n: c.n,
                channel_m: c.m,
                shrink_factors: c.shrink_factors.iter().copied().map(Sci).collect(),
                passed: c.passed,
                gated: gated.contains(&(c.n, c.m)),
            })
            .collect(),
    })
}
