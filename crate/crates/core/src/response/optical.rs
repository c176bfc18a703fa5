use std::f64::consts::PI;

use log::warn;

use crate::numerics::{gauss_legendre8, MonotoneCubic};
use crate::{Error, Result};

/// Default power-law exponent of ε″(ω) above the last tabulated frequency.
pub const DEFAULT_LOSS_TAIL: f64 = 3.0;

/// Widest panel (in ln ω) integrated by a single fixed rule.
const MAX_PANEL_WIDTH: f64 = 0.125;

/// Tabulated absorption ε″(ω) on the real frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDataTable {
    rows: Vec<(f64, f64)>,
    provenance: String,
    tail_exponent: f64,
    merged_duplicates: usize,
    interp: LossInterp,
}

#[derive(Debug, Clone, PartialEq)]
enum LossInterp {
    Single(f64),
    /// monotone cubic of ln ε″ against ln ω (strictly positive data)
    LogLog(MonotoneCubic),
    /// monotone cubic of ε″ against ln ω (data containing zeros)
    SemiLog(MonotoneCubic),
}

impl OpticalDataTable {
    /// Sorts the rows by frequency and merges duplicate abscissae by averaging.
    pub fn new(rows: Vec<(f64, f64)>, provenance: impl Into<String>) -> Result<Self> {
        Self::with_tail_exponent(rows, DEFAULT_LOSS_TAIL, provenance)
    }

    pub fn with_tail_exponent(
        mut rows: Vec<(f64, f64)>,
        tail_exponent: f64,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::data(None, "optical data table is empty"));
        }
        if !(tail_exponent > 0.0 && tail_exponent.is_finite()) {
            return Err(Error::data(
                None,
                format!("loss tail exponent must be positive, got {tail_exponent}"),
            ));
        }
        for &(w, e) in &rows {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::data(None, format!("frequency must be positive, got {w}")));
            }
            if !e.is_finite() {
                return Err(Error::data(None, format!("non-finite ε″ at ω = {w}")));
            }
            if e < 0.0 {
                return Err(Error::data(None, format!("negative ε″ = {e} at ω = {w}")));
            }
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(rows.len());
        let mut counts: Vec<usize> = Vec::with_capacity(rows.len());
        for (w, e) in rows {
            match merged.last_mut() {
                Some(last) if last.0 == w => {
                    last.1 += e;
                    *counts.last_mut().unwrap() += 1;
                }
                _ => {
                    merged.push((w, e));
                    counts.push(1);
                }
            }
        }
        let mut merged_duplicates = 0;
        for (row, &n) in merged.iter_mut().zip(&counts) {
            if n > 1 {
                row.1 /= n as f64;
                merged_duplicates += n - 1;
            }
        }
        if merged_duplicates > 0 {
            warn!("merged {merged_duplicates} duplicate frequency rows by averaging");
        }
        let interp = if merged.len() == 1 {
            LossInterp::Single(merged[0].1)
        } else if merged.iter().all(|r| r.1 > 0.0) {
            LossInterp::LogLog(MonotoneCubic::new(
                merged.iter().map(|r| r.0.ln()).collect(),
                merged.iter().map(|r| r.1.ln()).collect(),
            )?)
        } else {
            LossInterp::SemiLog(MonotoneCubic::new(
                merged.iter().map(|r| r.0.ln()).collect(),
                merged.iter().map(|r| r.1).collect(),
            )?)
        };
        Ok(Self {
            rows: merged,
            provenance: provenance.into(),
            tail_exponent,
            merged_duplicates,
            interp,
        })
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    /// Number of rows folded into others during canonicalization.
    pub fn merged_duplicates(&self) -> usize {
        self.merged_duplicates
    }

    /// Interpolated ε″ inside the tabulated range.
    pub fn loss(&self, omega: f64) -> f64 {
        let ln_w = omega.ln();
        match &self.interp {
            LossInterp::Single(v) => *v,
            LossInterp::LogLog(p) => p.eval(ln_w).exp(),
            LossInterp::SemiLog(p) => p.eval(ln_w).max(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowFrequencyExtrapolation {
    /// ε″ held at its first tabulated value down to ω = 0.
    ConstantLoss,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HighFrequencyExtrapolation {
    /// ε″ ∝ ω^(−exponent) above the last tabulated value.
    PowerLaw { exponent: f64 },
}

/// ε(iξ) together with the extrapolation policies used to obtain it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KkValue {
    pub epsilon: f64,
    pub low: LowFrequencyExtrapolation,
    pub high: HighFrequencyExtrapolation,
}

/// ε(iξ) = 1 + (2/π) ∫₀^∞ ω ε″(ω)/(ω² + ξ²) dω.
///
/// Every piece is summed with positive weights of a kernel that decreases
/// in ξ, so the output is non-increasing in ξ for any table.
pub fn kramers_kronig(table: &OpticalDataTable, xi: f64) -> Result<KkValue> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!(
            "Kramers-Kronig evaluation needs ξ > 0, got {xi}"
        )));
    }
    let rows = &table.rows;
    let xi2 = xi * xi;
    let (w_first, loss_first) = rows[0];
    let (w_last, loss_last) = rows[rows.len() - 1];

    // ∫₀^ω₁ ω ε″₁/(ω² + ξ²) dω
    let below = 0.5 * loss_first * ((w_first / xi).powi(2)).ln_1p();

    // ∫ over the table in u = ln ω: ω² ε″(ω)/(ω² + ξ²) du
    let mut inside = 0.0;
    for w in rows.windows(2) {
        let (a, b) = (w[0].0.ln(), w[1].0.ln());
        let panels = ((b - a) / MAX_PANEL_WIDTH).ceil().max(1.0) as usize;
        let step = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * step;
            let hi = if p + 1 == panels { b } else { lo + step };
            inside += gauss_legendre8(
                |u| {
                    let omega = u.exp();
                    let o2 = omega * omega;
                    o2 * table.loss(omega) / (o2 + xi2)
                },
                lo,
                hi,
            );
        }
    }

    // Above the table, with t = ω_N/ω: ε″_N t^(p−1) / (1 + ξ²t²/ω_N²) dt on (0, 1].
    let p = table.tail_exponent;
    let r2 = (xi / w_last).powi(2);
    let tail_integrand = |t: f64| loss_last * t.powf(p - 1.0) / (1.0 + r2 * t * t);
    let mut above = 0.0;
    let decades = 16;
    let per_decade = 4;
    let mut lo = 0.0;
    for j in 0..=decades * per_decade {
        let hi = 10f64.powf(-(decades as f64) + j as f64 / per_decade as f64);
        above += gauss_legendre8(tail_integrand, lo, hi);
        lo = hi;
    }

    Ok(KkValue {
        epsilon: 1.0 + 2.0 / PI * (below + inside + above),
        low: LowFrequencyExtrapolation::ConstantLoss,
        high: HighFrequencyExtrapolation::PowerLaw { exponent: p },
    })
}
