//! Closed-form measures along a grid of post-switch cavity frequencies.

use std::fmt::Write as _;

use serde::Serialize;

use crate::amplitudes::probabilities;
use crate::entangle::{conditional_concurrence, conditional_tangle};
use crate::error::{Error, Result};
use crate::params::{validate_params, SystemParams, DEFAULT_VALIDITY_THRESHOLD};
use crate::report::{sci, Sci};

/// Points with `|omega2 - e0| < SKIP_BAND * e0` are skipped.
pub const SKIP_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub omega2: f64,
    pub w_0: f64,
    pub w_1: f64,
    pub w_2: f64,
    pub tau_2: f64,
    pub c_0_ab1: f64,
    pub c_1_ab0: f64,
    pub c_2_ab0: f64,
    pub c_2_ab1: f64,
    pub perturbative_ok: bool,
}

/// Uniform grid including both endpoints.
pub fn sweep_grid(omega2_min: f64, omega2_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(omega2_min > 0.0 && omega2_min.is_finite()) {
        return Err(Error::Param {
            field: "omega2_min",
            reason: format!("must be positive, got {omega2_min}"),
        });
    }
    if !(omega2_max > omega2_min && omega2_max.is_finite()) {
        return Err(Error::Param {
            field: "omega2_max",
            reason: format!("must exceed omega2_min, got {omega2_max}"),
        });
    }
    if steps < 2 {
        return Err(Error::Param {
            field: "steps",
            reason: format!("must be at least 2, got {steps}"),
        });
    }
    let h = (omega2_max - omega2_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                omega2_max
            } else {
                omega2_min + h * i as f64
            }
        })
        .collect())
}

/// `None` inside the skip band around the qubit frequency.
pub fn sweep_point(p: &SystemParams, omega2: f64) -> Result<Option<SweepRow>> {
    if (omega2 - p.e0()).abs() < SKIP_BAND * p.e0() {
        return Ok(None);
    }
    let q = p.with_omega2(omega2)?;
    let w = probabilities(&q)?;
    Ok(Some(SweepRow {
        omega2,
        w_0: w.w_0,
        w_1: w.w_1,
        w_2: w.w_2,
        tau_2: conditional_tangle(2, &q)?,
        c_0_ab1: conditional_concurrence(0, true, &q)?,
        c_1_ab0: conditional_concurrence(1, false, &q)?,
        c_2_ab0: conditional_concurrence(2, false, &q)?,
        c_2_ab1: conditional_concurrence(2, true, &q)?,
        perturbative_ok: validate_params(&q, DEFAULT_VALIDITY_THRESHOLD)?.perturbative_ok,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub skipped: usize,
    /// On each side of the qubit frequency, `tau_2` strictly decreases as
    /// `|omega2 - e0|` grows.
    pub tau_2_monotone: bool,
}

impl Sweep {
    /// Assembles evaluated points in grid order.
    pub fn from_points(e0: f64, points: Vec<Option<SweepRow>>) -> Self {
        let skipped = points.iter().filter(|r| r.is_none()).count();
        let rows: Vec<SweepRow> = points.into_iter().flatten().collect();
        let side = |above: bool| {
            let mut r: Vec<&SweepRow> = rows.iter().filter(|r| (r.omega2 > e0) == above).collect();
            r.sort_by(|a, b| (a.omega2 - e0).abs().total_cmp(&(b.omega2 - e0).abs()));
            r.windows(2).all(|w| w[1].tau_2 < w[0].tau_2)
        };
        let tau_2_monotone = side(true) && side(false);
        Self {
            rows,
            skipped,
            tau_2_monotone,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega2,w_0,w_1,w_2,tau_2,c_0_ab1,c_1_ab0,c_2_ab0,c_2_ab1,perturbative_ok\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                sci(r.omega2),
                sci(r.w_0),
                sci(r.w_1),
                sci(r.w_2),
                sci(r.tau_2),
                sci(r.c_0_ab1),
                sci(r.c_1_ab0),
                sci(r.c_2_ab0),
                sci(r.c_2_ab1),
                r.perturbative_ok
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Row {
            omega2: Sci,
            w_0: Sci,
            w_1: Sci,
            w_2: Sci,
            tau_2: Sci,
            c_0_ab1: Sci,
            c_1_ab0: Sci,
            c_2_ab0: Sci,
            c_2_ab1: Sci,
            perturbative_ok: bool,
        }
        #[derive(Serialize)]
        struct Doc {
            rows: Vec<Row>,
            skipped: usize,
            tau_2_monotone: bool,
        }
        let rows = self
            .rows
            .iter()
            .map(|r| Row {
                omega2: Sci(r.omega2),
                w_0: Sci(r.w_0),
                w_1: Sci(r.w_1),
                w_2: Sci(r.w_2),
                tau_2: Sci(r.tau_2),
                c_0_ab1: Sci(r.c_0_ab1),
                c_1_ab0: Sci(r.c_1_ab0),
                c_2_ab0: Sci(r.c_2_ab0),
                c_2_ab1: Sci(r.c_2_ab1),
                perturbative_ok: r.perturbative_ok,
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&Doc {
            rows,
            skipped: self.skipped,
            tau_2_monotone: self.tau_2_monotone,
        })
        .expect("sweep serializes");
        out.push('\n');
        out
    }
}

/// Sequential sweep. Callers wanting parallelism evaluate [`sweep_point`]
/// themselves and hand the results to [`Sweep::from_points`].
pub fn sweep(p: &SystemParams, omega2_min: f64, omega2_max: f64, steps: usize) -> Result<Sweep> {
    let points = sweep_grid(omega2_min, omega2_max, steps)?
        .into_iter()
        .map(|w| sweep_point(p, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep::from_points(p.e0(), points))
}
