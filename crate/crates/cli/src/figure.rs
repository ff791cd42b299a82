//! Data sets for re-plotting the standard figures. No plotting happens here.

use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::ValueEnum;
use tm_core::potential::{psi, psi_n, LOG_3_2};
use tm_core::pressure::{birkhoff_from_curve, default_t_grid, MidpointTable};

use crate::output::{cell, csv_bytes, emit};

const X_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Figure {
    /// Birkhoff spectrum b(α) on [-log 2, log(3/2)].
    BSpectrum,
    /// psi(x), psi(2x), psi(4x) on [0, 1].
    PsiHumps,
    /// Birkhoff sums psi_3 and psi_5 on [0, 1].
    BirkhoffHumps,
    /// Pressure with the lines t log(3/2) and (1 - t) log 2.
    PressureAsymptotes,
}

impl Figure {
    pub fn file_name(self) -> &'static str {
        match self {
            Figure::BSpectrum => "b_spectrum.csv",
            Figure::PsiHumps => "psi_humps.csv",
            Figure::BirkhoffHumps => "birkhoff_humps.csv",
            Figure::PressureAsymptotes => "pressure_asymptotes.csv",
        }
    }
}

fn x_grid() -> impl Iterator<Item = f64> {
    (0..=X_SAMPLES).map(|i| i as f64 / X_SAMPLES as f64)
}

fn linspace(a: f64, b: f64, intervals: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=intervals)
        .map(|i| a + (b - a) * i as f64 / intervals as f64)
        .collect();
    v[intervals] = b;
    v
}

fn table(figure: Figure, n: u32) -> Result<(Vec<&'static str>, Vec<Vec<String>>)> {
    Ok(match figure {
        Figure::BSpectrum => {
            let curve = MidpointTable::new(n)?.curve(&default_t_grid())?;
            let alphas = linspace(-LN_2, LOG_3_2, 400);
            let b = birkhoff_from_curve(&curve, &alphas);
            let rows = b.samples.iter().map(|&(a, v)| vec![cell(a), cell(v)]).collect();
            (vec!["alpha", "b"], rows)
        }
        Figure::PsiHumps => {
            let rows = x_grid()
                .map(|x| {
                    let y = x.rem_euclid(1.0);
                    vec![
                        cell(x),
                        cell(psi(y)),
                        cell(psi((2.0 * y).fract())),
                        cell(psi((4.0 * y).fract())),
                    ]
                })
                .collect();
            (vec!["x", "psi_x", "psi_2x", "psi_4x"], rows)
        }
        Figure::BirkhoffHumps => {
            let rows = x_grid()
                .map(|x| vec![cell(x), cell(psi_n(x, 3)), cell(psi_n(x, 5))])
                .collect();
            (vec!["x", "psi_3", "psi_5"], rows)
        }
        Figure::PressureAsymptotes => {
            let table = MidpointTable::new(n)?;
            let rows = linspace(0.0, 6.0, 600)
                .into_iter()
                .map(|t| {
                    Ok(vec![
                        cell(t),
                        cell(table.pressure(t)?),
                        cell(t * LOG_3_2),
                        cell((1.0 - t) * LN_2),
                    ])
                })
                .collect::<Result<_>>()?;
            (vec!["t", "p", "asymptote_log_3_2", "asymptote_log_2"], rows)
        }
    })
}

/// Writes `<dir>/<figure>.csv` and returns its path.
pub fn write(figure: Figure, n: u32, dir: &Path) -> Result<PathBuf> {
    let (header, rows) = table(figure, n)?;
    let path = dir.join(figure.file_name());
    emit(Some(&path), &csv_bytes(&header, &rows)?)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_4x_has_four_humps() {
        let (_, rows) = table(Figure::PsiHumps, 12).unwrap();
        let poles = rows.iter().filter(|r| r[3] == "-inf").count();
        // poles at 0, 1/4, 1/2, 3/4, 1 bound four humps
        assert_eq!(poles, 5);
    }

    #[test]
    fn pressure_passes_log_2_at_0_and_1() {
        let (_, rows) = table(Figure::PressureAsymptotes, 12).unwrap();
        for t in ["0", "1"] {
            let row = rows.iter().find(|r| r[0] == t).unwrap();
            let p: f64 = row[1].parse().unwrap();
            assert!((p - LN_2).abs() < 1e-10, "{t}: {p}");
        }
    }
}
