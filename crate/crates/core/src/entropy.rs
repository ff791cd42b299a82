//! Metric entropy of the Thue-Morse measure from the autocorrelations
//! `eta(j)` of the `±1` Thue-Morse sequence:
//!
//! ```text
//! h = 2 log 2 + 2 S,   S = sum_{j >= 1} eta(j) / j
//! ```
//!
//! `eta` obeys `eta(0) = 1`, `eta(2j) = eta(j)` and
//! `eta(2j + 1) = -(eta(j) + eta(j + 1)) / 2`, so every value is a rational
//! with denominator `3 * 2^k`. `S` converges only conditionally and is
//! evaluated twice, by independent routes, in 256-bit fixed point:
//!
//! * **extrapolated**: exact partial sums at `j = 2^k`, whose error halves at
//!   each step, followed by repeated Richardson elimination in `k`;
//! * **resummed**: the even/odd split `W(f) = -f(1)/2 + W(Lf)` with
//!   `(Lf)(j) = f(2j) - (f(2j-1) + f(2j+1)) / 2`, applied several times to
//!   `f(j) = 1/j` so the remaining series decays like `j^{-(2 levels + 1)}`.

use std::f64::consts::LN_2;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hiprec::Fixed;
use crate::measure::TrigPolynomial;
use crate::potential::psi_rational;
use crate::symbolic::{enumerate_words, midpoint};

/// Published-precision cap on requested digits.
pub const MAX_ENTROPY_DIGITS: u32 = 20;
/// Agreement is reported up to this many digits.
pub const MAX_VALIDATED_DIGITS: u32 = 30;

pub type Eta = Ratio<i64>;

/// `(eta(j), eta(j + 1))` in `O(log j)` steps.
fn eta_pair(j: u64) -> (Eta, Eta) {
    if j == 0 {
        return (Eta::from_integer(1), Eta::new(-1, 3));
    }
    let (a, b) = eta_pair(j / 2);
    let odd = -(a + b) / 2;
    if j.is_multiple_of(2) {
        (a, odd)
    } else {
        (odd, b)
    }
}

/// Autocorrelation coefficient `eta(j)`, exact.
pub fn eta(j: u64) -> Eta {
    eta_pair(j).0
}

/// `eta(0 ..= max_lag)` built bottom-up from the renormalization relations.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationTable {
    values: Vec<Eta>,
}

impl AutocorrelationTable {
    pub fn new(max_lag: usize) -> Self {
        let mut values = Vec::with_capacity(max_lag + 2);
        values.push(Eta::from_integer(1));
        values.push(Eta::new(-1, 3));
        for j in 2..=max_lag.max(1) {
            let v = if j % 2 == 0 {
                values[j / 2]
            } else {
                -(values[j / 2] + values[j / 2 + 1]) / 2
            };
            values.push(v);
        }
        values.truncate(max_lag + 1);
        Self { values }
    }

    pub fn get(&self, j: usize) -> Option<Eta> {
        self.values.get(j).copied()
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Eta] {
        &self.values
    }
}

/// `±1` Thue-Morse term `v_{i+1} = (-1)^{popcount(i)}`.
fn tm_sign(i: u64) -> i64 {
    1 - 2 * (i.count_ones() as i64 & 1)
}

/// `(1 / (2^L - j)) sum_{k=1}^{2^L - j} v_k v_{k+j}` over the first `2^L` terms.
pub fn eta_empirical(j: u64, log_len: u32) -> Result<f64> {
    eta_empirical_with(j, log_len, Exec::default())
}

pub fn eta_empirical_with(j: u64, log_len: u32, exec: Exec) -> Result<f64> {
    if log_len > 40 {
        return Err(Error::LevelCap {
            level: log_len,
            cap: 40,
        });
    }
    let len = 1u64 << log_len;
    if j >= len {
        return Err(Error::OutOfRange {
            what: "lag",
            value: j as i64,
            min: 0,
            max: len as i64 - 1,
        });
    }
    let count = len - j;
    let total = exec.fold_chunks(
        count as usize,
        |range| {
            range
                .map(|i| tm_sign(i as u64) * tm_sign(i as u64 + j))
                .sum::<i64>()
        },
        |a, b| a + b,
        0,
    );
    Ok(total as f64 / count as f64)
}

fn eta_fixed(e: &Eta, extra_den: u128) -> Fixed {
    Fixed::from_ratio(*e.numer() as i128, *e.denom() as u128 * extra_den)
}

/// Partial sums at `2^k` with Richardson elimination of `2^{-p k}` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extrapolation {
    pub depth: u32,
}

impl Default for Extrapolation {
    fn default() -> Self {
        Self { depth: 18 }
    }
}

impl Extrapolation {
    pub fn series_sum(&self, exec: Exec) -> Fixed {
        let table = AutocorrelationTable::new(1usize << self.depth);
        let eta = table.values();
        // A_k = sum_{j <= 2^k} eta(j) / j
        let mut partial = Vec::with_capacity(self.depth as usize + 1);
        let mut acc = eta_fixed(&eta[1], 1);
        partial.push(acc.clone());
        for k in 1..=self.depth {
            let lo = (1usize << (k - 1)) + 1;
            let hi = 1usize << k;
            let block = exec.fold_chunks(
                hi - lo + 1,
                |range| {
                    range
                        .map(|i| eta_fixed(&eta[lo + i], (lo + i) as u128))
                        .sum::<Fixed>()
                },
                |a, b| a + b,
                Fixed::zero(),
            );
            acc += &block;
            partial.push(acc.clone());
        }
        // Richardson: R[k][p] = R[k][p-1] + (R[k][p-1] - R[k-1][p-1]) / (2^p - 1)
        let mut prev_row: Vec<Fixed> = vec![partial[0].clone()];
        for (k, a_k) in partial.iter().enumerate().skip(1) {
            let mut row = vec![a_k.clone()];
            for p in 1..=k {
                let diff = &row[p - 1] - &prev_row[p - 1];
                let next = row[p - 1].clone() + diff.div_int((1i128 << p) - 1);
                row.push(next);
            }
            prev_row = row;
        }
        prev_row.pop().expect("non-empty row")
    }
}

/// Iterated even/odd resummation truncated after `terms` lags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resummation {
    pub levels: u32,
    pub terms: usize,
}

impl Default for Resummation {
    fn default() -> Self {
        Self {
            levels: 4,
            terms: 4096,
        }
    }
}

/// Integer weights `W` with `(L^k f)(j) = 2^{-k} sum_r W[r] f(2^k j + r)`,
/// indexed by `r + 2^k - 1`.
fn operator_weights(levels: u32) -> Vec<Vec<i64>> {
    let mut all = vec![vec![1i64]];
    for k in 1..=levels {
        let prev = &all[k as usize - 1];
        let prev_off = (1i64 << (k - 1)) - 1;
        let off = (1i64 << k) - 1;
        let mut next = vec![0i64; (2 * off + 1) as usize];
        for (idx, &w) in prev.iter().enumerate() {
            let r = idx as i64 - prev_off;
            for (s, a) in [(-1i64, -1i64), (0, 2), (1, -1)] {
                let target = (1i64 << (k - 1)) * s + r + off;
                next[target as usize] += a * w;
            }
        }
        all.push(next);
    }
    all
}

/// `2^k (L^k f)(j)` for `f(j) = 1/j`.
fn scaled_operator_at(weights: &[i64], k: u32, j: u64) -> Fixed {
    let off = (1i64 << k) - 1;
    let base = (j as i64) << k;
    weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0)
        .map(|(idx, &w)| Fixed::from_ratio(w as i128, (base + idx as i64 - off) as u128))
        .sum()
}

impl Resummation {
    pub fn series_sum(&self, exec: Exec) -> Fixed {
        let weights = operator_weights(self.levels);
        // -1/2 sum_{i < levels} (L^i f)(1)
        let head: Fixed = (0..self.levels)
            .map(|i| scaled_operator_at(&weights[i as usize], i, 1).div_int(-(2i128 << i)))
            .sum();
        let table = AutocorrelationTable::new(self.terms);
        let eta = table.values();
        let k = self.levels;
        let w = &weights[k as usize];
        let body = exec.fold_chunks(
            self.terms,
            |range| {
                range
                    .map(|i| {
                        let j = i + 1;
                        let e = &eta[j];
                        scaled_operator_at(w, k, j as u64)
                            .mul_int(*e.numer() as i128)
                            .div_int((*e.denom() as i128) << k)
                    })
                    .sum::<Fixed>()
            },
            |a, b| a + b,
            Fixed::zero(),
        );
        head + body
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    /// `h` rounded to `digits_validated` decimal places.
    pub h: String,
    pub h_f64: f64,
    /// `S = sum eta(j) / j`, same precision as `h`.
    pub series_sum: String,
    pub series_sum_f64: f64,
    /// Decimal places on which both summation routes agree.
    pub digits_validated: u32,
    pub h_resummed: String,
    pub h_extrapolated: String,
}

impl EntropyResult {
    pub fn information_dimension(&self) -> f64 {
        information_dimension(self.h_f64)
    }
}

fn round_decimal(x: &Fixed, places: usize) -> String {
    let half = Fixed::from_ratio(5, 10u128.pow(places as u32 + 1));
    let shifted = if *x < Fixed::zero() { x - &half } else { x.clone() + &half };
    shifted.to_decimal(places)
}

fn entropy_from_sum(s: &Fixed) -> Fixed {
    (Fixed::ln2() + s).mul_int(2)
}

/// Computes `h` to `digits` decimal places, validated by two routes.
pub fn entropy_series(digits: u32) -> Result<EntropyResult> {
    entropy_series_with(digits, Extrapolation::default(), Resummation::default(), Exec::default())
}

pub fn entropy_series_with(
    digits: u32,
    extrapolation: Extrapolation,
    resummation: Resummation,
    exec: Exec,
) -> Result<EntropyResult> {
    if digits == 0 || digits > MAX_ENTROPY_DIGITS {
        return Err(Error::OutOfRange {
            what: "digits",
            value: digits as i64,
            min: 1,
            max: MAX_ENTROPY_DIGITS as i64,
        });
    }
    let s_res = resummation.series_sum(exec);
    let s_ext = extrapolation.series_sum(exec);
    let h_res = entropy_from_sum(&s_res);
    let h_ext = entropy_from_sum(&s_ext);
    let gap = (&h_res - &h_ext).abs().to_f64();
    let agreed = if gap == 0.0 {
        MAX_VALIDATED_DIGITS
    } else {
        ((-gap.log10()).floor().max(0.0) as u32).min(MAX_VALIDATED_DIGITS)
    };
    if agreed < digits {
        return Err(Error::Convergence {
            resummed: round_decimal(&h_res, 25),
            extrapolated: round_decimal(&h_ext, 25),
            digits: agreed,
            target: digits,
        });
    }
    let places = agreed as usize;
    Ok(EntropyResult {
        h: round_decimal(&h_res, places),
        h_f64: h_res.to_f64(),
        series_sum: round_decimal(&s_res, places),
        series_sum_f64: s_res.to_f64(),
        digits_validated: agreed,
        h_resummed: round_decimal(&h_res, 25),
        h_extrapolated: round_decimal(&h_ext, 25),
    })
}

/// `D_1 = h / log 2`.
pub fn information_dimension(h: f64) -> f64 {
    h / LN_2
}

/// `κ = (1 + sqrt 17) / 4`.
pub fn kappa() -> f64 {
    (1.0 + 17f64.sqrt()) / 4.0
}

/// `e(ν) = 1 - log2 κ`.
pub fn energy_exponent() -> f64 {
    1.0 - kappa().log2()
}

/// `sum_{|ω| = n} nu_N(<ω>) psi(mid ω)`, a Riemann-sum estimate of `∫ psi dν_N`.
pub fn integral_psi_estimate(n: u32, poly: &TrigPolynomial) -> Result<f64> {
    Ok(enumerate_words(n, None)?
        .map(|w| poly.cylinder_mass(&w) * psi_rational(&midpoint(&w)))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::fourier_coeffs;
    use num_traits::Signed;

    #[test]
    fn eta_examples() {
        assert_eq!(eta(0), Eta::from_integer(1));
        assert_eq!(eta(1), Eta::new(-1, 3));
        assert_eq!(eta(2), Eta::new(-1, 3));
        assert_eq!(eta(3), Eta::new(1, 3));
        assert_eq!(eta(5), Eta::from_integer(0));
        assert_eq!(eta(9), Eta::new(1, 6));
    }

    #[test]
    fn table_matches_pointwise_recursion() {
        let table = AutocorrelationTable::new(10_000);
        for j in 0..=10_000usize {
            let v = table.get(j).unwrap();
            assert_eq!(v, eta(j as u64));
            assert!(v.abs() <= Eta::from_integer(1));
            if 2 * j <= 10_000 {
                assert_eq!(table.get(2 * j).unwrap(), v);
            }
            // denominator 3 * 2^k
            let d = *v.denom();
            let core = if d % 3 == 0 { d / 3 } else { d };
            assert!((core as u64).is_power_of_two(), "j={j}: {v}");
        }
        assert_eq!(AutocorrelationTable::new(0).max_lag(), 0);
    }

    #[test]
    fn empirical_examples() {
        assert_eq!(eta_empirical(0, 20).unwrap(), 1.0);
        assert!((eta_empirical(1, 22).unwrap() + 1.0 / 3.0).abs() < 1e-5);
        let e5 = *eta(5).numer() as f64 / *eta(5).denom() as f64;
        assert!((eta_empirical(5, 22).unwrap() - e5).abs() < 1e-5);
        assert!(eta_empirical(1 << 4, 4).is_err());
    }

    #[test]
    fn weights_are_second_differences() {
        let w = operator_weights(2);
        assert_eq!(w[1], vec![-1, 2, -1]);
        // L^2 at scale 4: sum of weights vanishes, as does the first moment
        assert_eq!(w[2].iter().sum::<i64>(), 0);
        let moment: i64 = w[2].iter().enumerate().map(|(i, &x)| (i as i64 - 3) * x).sum();
        assert_eq!(moment, 0);
    }

    #[test]
    fn resummation_is_stable_in_its_parameters() {
        let exec = Exec::default();
        let a = Resummation { levels: 4, terms: 4096 }.series_sum(exec);
        let b = Resummation { levels: 5, terms: 2048 }.series_sum(exec);
        assert!((&a - &b).abs().to_f64() < 1e-22);
        let c = Resummation { levels: 1, terms: 1 << 16 }.series_sum(exec);
        assert!((&a - &c).abs().to_f64() < 1e-9);
    }

    #[test]
    fn schemes_agree_and_match_reference() {
        let r = entropy_series(10).unwrap();
        assert!(r.digits_validated >= 20, "{r:?}");
        assert!(r.h.starts_with("0.50638399544731967"), "{}", r.h);
        assert!((r.series_sum_f64 + 0.439_955_182_836_285_5).abs() < 1e-15);
        assert!((r.information_dimension() - 0.7305).abs() < 5e-4);
        assert!(entropy_series(0).is_err());
        assert!(entropy_series(21).is_err());
    }

    #[test]
    fn entropy_constants() {
        assert!((kappa() - 1.2808).abs() < 1e-4);
        assert!((energy_exponent() - 0.6427).abs() < 5e-4);
        let h = entropy_series(3).unwrap();
        assert!(h.h.starts_with("0.506"));
        assert!(information_dimension(h.h_f64) > energy_exponent());
        assert!((information_dimension(h.h_f64) * LN_2 - h.h_f64).abs() < 1e-16);
    }

    #[test]
    fn variational_identity() {
        let r = entropy_series(10).unwrap();
        // h + ∫psi dν = log 2 with ∫psi dν = -log 2 - 2 S
        let integral = -LN_2 - 2.0 * r.series_sum_f64;
        assert!((r.h_f64 + integral - LN_2).abs() < 1e-15);
        let estimate = integral_psi_estimate(8, &fourier_coeffs(14).unwrap()).unwrap();
        assert!((estimate - integral).abs() < 5e-3, "{estimate} vs {integral}");
    }

    #[test]
    fn recursion_matches_empirical_autocorrelation() {
        for j in 0..=64u64 {
            let e = eta(j);
            let exact = *e.numer() as f64 / *e.denom() as f64;
            assert!((eta_empirical(j, 22).unwrap() - exact).abs() <= 2e-5, "j={j}");
        }
    }
}
