//! Pressure of `t psi` and the Legendre-transform spectra.
//!
//! The production approximant samples `psi_n` on the midpoints
//! `x_j = (2j - 1) 2^{-n}`, `j = 1 ..= 2^{n-2}`, of the left half of the circle:
//!
//! ```text
//! p^[n](t) = 1/(n-2) log sum_j ( exp(psi_n(x_j)) / 2 )^t
//! ```
//!
//! which satisfies `p^[n](0) = p^[n](1) = log 2` for every `n`. The table of
//! `psi_n(x_j) - log 2` is built once and shared by every `t`.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{check_increasing, Grid};
use crate::limits;
use crate::potential::{cylinder_sup, psi_n, LOG_3_2};
use crate::symbolic::{alternating_representative, enumerate_words, BinaryWord, Sft};

/// Default temperature grid for spectra: `0:40:0.1`.
pub fn default_t_grid() -> Vec<f64> {
    Grid {
        start: 0.0,
        stop: 40.0,
        step: 0.1,
    }
    .points()
}

/// Largest level for the cylinder-sup pressure oracle.
pub const MAX_CYLINDER_SUP_LEVEL: u32 = 16;

fn check_t(t: f64) -> Result<()> {
    if t < 0.0 || t.is_nan() {
        Err(Error::NegativeTemperature(t))
    } else {
        Ok(())
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    check_increasing(t_grid)?;
    check_t(t_grid[0])
}

/// `log(exp(psi_n(x_j)) / 2)` on the midpoint grid.
#[derive(Debug, Clone)]
pub struct MidpointTable {
    n: u32,
    values: Vec<f64>,
    exec: Exec,
}

impl MidpointTable {
    pub fn new(n: u32) -> Result<Self> {
        Self::build_with(n, Exec::default())
    }

    pub fn build_with(n: u32, exec: Exec) -> Result<Self> {
        if n < 3 {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as i64,
                min: 3,
                max: limits::cap(limits::DEFAULT_SCAN_LEVEL) as i64,
            });
        }
        limits::check_level(n, limits::DEFAULT_SCAN_LEVEL)?;
        let scale = (-(n as f64)).exp2();
        let values = exec.map(1usize << (n - 2), |j| {
            psi_n((2 * j + 1) as f64 * scale, n) - LN_2
        });
        Ok(Self { n, values, exec })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn pressure(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        let v = &self.values;
        Ok(self.exec.log_sum_exp_by(v.len(), |j| t * v[j]) / (self.n - 2) as f64)
    }

    /// Right derivative at `t = 0`: the mean of the table over `n - 2`.
    pub fn slope_at_zero(&self) -> f64 {
        let v = &self.values;
        self.exec.sum(v.len(), |j| v[j]) / v.len() as f64 / (self.n - 2) as f64
    }

    pub fn curve(&self, t_grid: &[f64]) -> Result<PressureCurve> {
        check_grid(t_grid)?;
        let samples = t_grid
            .iter()
            .map(|&t| Ok((t, self.pressure(t)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PressureCurve {
            kind: PressureKind::Full,
            n: self.n,
            samples,
        })
    }
}

/// `p^[n](t)`.
pub fn pressure_approx(n: u32, t: f64) -> Result<f64> {
    check_t(t)?;
    MidpointTable::new(n)?.pressure(t)
}

/// `p^[n]` on a grid, sharing one midpoint table.
pub fn pressure_curve(n: u32, t_grid: &[f64]) -> Result<PressureCurve> {
    check_grid(t_grid)?;
    MidpointTable::new(n)?.curve(t_grid)
}

/// Closed form of `d/dt p^[n](0+)`: the midpoint sums of `psi_n` are exact,
/// giving `log 2 (3 - n - 4 * 2^{-n}) / (n - 2)`.
pub fn pressure_slope_at_zero(n: u32) -> Result<f64> {
    Ok(MidpointTable::new(n)?.slope_at_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PressureKind {
    Full,
    Restricted { m: u32 },
    CylinderSup,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureCurve {
    pub kind: PressureKind,
    pub n: u32,
    /// `(t, p(t))`, `t` strictly increasing.
    pub samples: Vec<(f64, f64)>,
}

impl PressureCurve {
    /// Smallest second difference scaled to a unit step (assumes a uniform grid).
    pub fn min_second_difference(&self) -> f64 {
        self.samples
            .windows(3)
            .map(|w| w[0].1 - 2.0 * w[1].1 + w[2].1)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_convex(&self, tol: f64) -> bool {
        self.samples.len() < 3 || self.min_second_difference() >= -tol
    }

    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.samples
            .iter()
            .find(|(s, _)| (s - t).abs() <= 1e-9 * t.abs().max(1.0))
            .map(|&(_, p)| p)
    }
}

/// `psi_n` at the alternating-tail representative of every word of `Σ_m^n`.
#[derive(Debug, Clone)]
pub struct RestrictedTable {
    m: u32,
    n: u32,
    values: Vec<f64>,
    exec: Exec,
}

impl RestrictedTable {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        Self::build_with(m, n, Exec::default())
    }

    pub fn build_with(m: u32, n: u32, exec: Exec) -> Result<Self> {
        let sft = Sft::new(m)?;
        if m >= n {
            return Err(Error::OutOfRange {
                what: "m",
                value: m as i64,
                min: 1,
                max: n as i64 - 1,
            });
        }
        limits::check_level(n, limits::DEFAULT_ENUM_LEVEL)?;
        let words: Vec<BinaryWord> = enumerate_words(n, Some(sft))?.collect();
        let values = exec.map_slice(&words, |w| psi_n(alternating_representative(w), n));
        Ok(Self { m, n, values, exec })
    }

    pub fn word_count(&self) -> usize {
        self.values.len()
    }

    /// `(1/n) log sum_{ω in Σ_m^n} exp(t psi_n(rep(ω)))`; any real `t`.
    pub fn pressure(&self, t: f64) -> f64 {
        let v = &self.values;
        self.exec.log_sum_exp_by(v.len(), |j| t * v[j]) / self.n as f64
    }

    pub fn curve(&self, t_grid: &[f64]) -> Result<PressureCurve> {
        check_increasing(t_grid)?;
        Ok(PressureCurve {
            kind: PressureKind::Restricted { m: self.m },
            n: self.n,
            samples: t_grid.iter().map(|&t| (t, self.pressure(t))).collect(),
        })
    }
}

/// `p_m^{[n]}(t)`, the pressure restricted to `X_m`.
pub fn restricted_pressure(m: u32, n: u32, t: f64) -> Result<f64> {
    Ok(RestrictedTable::new(m, n)?.pressure(t))
}

/// `sup psi_n` on every length-`n` cylinder, for the pressure definition by
/// cylinder suprema. Exponential in `n`; intended as an oracle.
#[derive(Debug, Clone)]
pub struct CylinderSupTable {
    n: u32,
    values: Vec<f64>,
    exec: Exec,
}

impl CylinderSupTable {
    pub fn new(n: u32) -> Result<Self> {
        Self::build_with(n, Exec::default())
    }

    pub fn build_with(n: u32, exec: Exec) -> Result<Self> {
        if n == 0 || n > MAX_CYLINDER_SUP_LEVEL {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as i64,
                min: 1,
                max: MAX_CYLINDER_SUP_LEVEL as i64,
            });
        }
        let values = exec.map(1usize << n, |v| {
            cylinder_sup(&BinaryWord::new(v as u64, n).expect("valid word"))
        });
        Ok(Self { n, values, exec })
    }

    pub fn pressure(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        let v = &self.values;
        Ok(self.exec.log_sum_exp_by(v.len(), |j| t * v[j]) / self.n as f64)
    }

    pub fn curve(&self, t_grid: &[f64]) -> Result<PressureCurve> {
        check_grid(t_grid)?;
        let samples = t_grid
            .iter()
            .map(|&t| Ok((t, self.pressure(t)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PressureCurve {
            kind: PressureKind::CylinderSup,
            n: self.n,
            samples,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LegendreValue {
    /// `p*(α)` and the grid temperature attaining it.
    Finite { value: f64, t_star: f64 },
    /// The maximum sits on the last grid point and is still increasing there.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendrePoint {
    pub alpha: f64,
    pub value: LegendreValue,
}

/// `p*(α) = sup_{t >= 0} (t α - p(t))` over the curve samples.
pub fn legendre(curve: &PressureCurve, alpha_grid: &[f64]) -> Vec<LegendrePoint> {
    let s = &curve.samples;
    alpha_grid
        .iter()
        .map(|&alpha| {
            let objective = |i: usize| s[i].0 * alpha - s[i].1;
            let (best, value) = (0..s.len())
                .map(|i| (i, objective(i)))
                .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
            let last = s.len() - 1;
            let rising = last > 0 && objective(last) > objective(last - 1);
            let value = if best == last && rising {
                LegendreValue::Unbounded
            } else {
                LegendreValue::Finite {
                    value,
                    t_star: s[best].0,
                }
            };
            LegendrePoint { alpha, value }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Birkhoff,
    Dimension,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve {
    pub kind: SpectrumKind,
    pub n: u32,
    /// `(α, value)` with `value` in `[0, 1]`.
    pub samples: Vec<(f64, f64)>,
}

impl SpectrumCurve {
    pub fn value_at(&self, alpha: f64) -> Option<f64> {
        self.samples
            .iter()
            .find(|(a, _)| (a - alpha).abs() <= 1e-12 * alpha.abs().max(1.0))
            .map(|&(_, v)| v)
    }

    /// Largest second difference over consecutive samples with positive value.
    /// Non-positive means discretely concave on the support.
    pub fn max_support_second_difference(&self) -> f64 {
        self.samples
            .windows(3)
            .filter(|w| w.iter().all(|&(_, v)| v > 0.0))
            .map(|w| w[0].1 - 2.0 * w[1].1 + w[2].1)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn birkhoff_value(point: &LegendrePoint) -> f64 {
    match point.value {
        LegendreValue::Unbounded => 0.0,
        LegendreValue::Finite { value, .. } => (-value / LN_2).clamp(0.0, 1.0),
    }
}

/// `b(α) = max{-p*(α) / log 2, 0}` from a pressure curve.
pub fn birkhoff_from_curve(curve: &PressureCurve, alpha_grid: &[f64]) -> SpectrumCurve {
    let samples = legendre(curve, alpha_grid)
        .iter()
        .map(|p| (p.alpha, birkhoff_value(p)))
        .collect();
    SpectrumCurve {
        kind: SpectrumKind::Birkhoff,
        n: curve.n,
        samples,
    }
}

/// `f(α) = b(log 2 (1 - α))` from a pressure curve.
pub fn dimension_from_curve(curve: &PressureCurve, alpha_grid: &[f64]) -> SpectrumCurve {
    let shifted: Vec<f64> = alpha_grid.iter().map(|a| dimension_to_birkhoff(*a)).collect();
    let b = birkhoff_from_curve(curve, &shifted);
    SpectrumCurve {
        kind: SpectrumKind::Dimension,
        n: curve.n,
        samples: alpha_grid
            .iter()
            .zip(b.samples)
            .map(|(&a, (_, v))| (a, v))
            .collect(),
    }
}

/// The Birkhoff exponent matching local dimension `α`.
pub fn dimension_to_birkhoff(alpha: f64) -> f64 {
    LN_2 * (1.0 - alpha)
}

pub fn birkhoff_spectrum(n: u32, alpha_grid: &[f64]) -> Result<SpectrumCurve> {
    Ok(birkhoff_from_curve(
        &pressure_curve(n, &default_t_grid())?,
        alpha_grid,
    ))
}

pub fn dimension_spectrum(n: u32, alpha_grid: &[f64]) -> Result<SpectrumCurve> {
    Ok(dimension_from_curve(
        &pressure_curve(n, &default_t_grid())?,
        alpha_grid,
    ))
}

/// Lower envelope `t log(3/2) - (log 2 + K) / (n - 2)` of `p^[n]`.
pub fn lower_envelope(n: u32, t: f64) -> f64 {
    t * LOG_3_2 - (LN_2 + crate::potential::GAP_BOUND) / (n as f64 - 2.0)
}

/// Upper envelope `(1 + t) log 2`.
pub fn upper_envelope(t: f64) -> f64 {
    (1.0 + t) * LN_2
}
