//! The Riesz-product approximants `nu_N` with densities
//! `P_N(x) = prod_{l < N} (1 - cos 2 pi 2^l x)`, evaluated on dyadic cylinders.
//!
//! Coefficients are kept as exact integers `a_k = c_k 2^N`, so the table is
//! exact at every level and the floating view `c_k` is exact as well.

use std::f64::consts::{LN_2, PI};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::limits;
use crate::potential::{cylinder_sup, psi_n, OrbitPoint};
use crate::symbolic::{is_admissible, sft_extremes, BinaryWord, Rational, Sft};

/// Cosine coefficients of `P_N`. Only `k >= 0` is stored; `c_{-k} = c_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigPolynomial {
    level: u32,
    scaled: Vec<i64>,
}

impl TrigPolynomial {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Largest frequency with a non-zero coefficient is `2^N - 1`.
    pub fn max_frequency(&self) -> usize {
        self.scaled.len() - 1
    }

    fn scale(&self) -> f64 {
        (self.level as f64).exp2()
    }

    pub fn coeff(&self, k: i64) -> f64 {
        match self.scaled.get(k.unsigned_abs() as usize) {
            Some(&a) => a as f64 / self.scale(),
            None => 0.0,
        }
    }

    pub fn coeff_exact(&self, k: i64) -> Ratio<i64> {
        let a = self.scaled.get(k.unsigned_abs() as usize).copied().unwrap_or(0);
        Ratio::new(a, 1i64 << self.level)
    }

    /// `sum_k |c_k|` over all `k`, computed exactly.
    pub fn abs_sum_exact(&self) -> Ratio<i64> {
        let total: i64 =
            self.scaled[0].abs() + 2 * self.scaled[1..].iter().map(|a| a.abs()).sum::<i64>();
        Ratio::new(total, 1i64 << self.level)
    }

    /// `P_N(x)` from the cosine series.
    pub fn evaluate(&self, x: f64) -> f64 {
        let s = self.scale();
        let tail: f64 = self.scaled[1..]
            .iter()
            .enumerate()
            .map(|(i, &a)| a as f64 * (2.0 * PI * (i + 1) as f64 * x).cos())
            .sum();
        (self.scaled[0] as f64 + 2.0 * tail) / s
    }

    /// `nu_N(<word>) = int_{<word>} P_N dx`, summed over ascending `k`.
    pub fn cylinder_mass(&self, word: &BinaryWord) -> f64 {
        self.cylinder_mass_with(word, Exec::default())
    }

    pub fn cylinder_mass_with(&self, word: &BinaryWord, exec: Exec) -> f64 {
        let n = word.len();
        let modulus = 1u128 << n;
        let inv = 1.0 / modulus as f64;
        let (v, w) = (word.value() as u128, word.value() as u128 + 1);
        // sin(2 pi k a) with k a reduced mod 1 exactly before the conversion
        let sin_at = |k: u128, p: u128| (2.0 * PI * ((k * p) % modulus) as f64 * inv).sin();
        let scaled = &self.scaled;
        let oscillating = exec.sum(scaled.len() - 1, |i| {
            let k = (i + 1) as u128;
            let a = scaled[i + 1];
            if a == 0 {
                0.0
            } else {
                a as f64 * (sin_at(k, w) - sin_at(k, v)) / (PI * k as f64)
            }
        });
        (scaled[0] as f64 * inv + oscillating) / self.scale()
    }
}

/// Builds the coefficient table of `P_N` level by level:
/// `c^{N+1}_k = c^N_k - (c^N_{k - 2^N} + c^N_{k + 2^N}) / 2`.
pub fn fourier_coeffs(level: u32) -> Result<TrigPolynomial> {
    fourier_coeffs_with(level, Exec::default())
}

pub fn fourier_coeffs_with(level: u32, exec: Exec) -> Result<TrigPolynomial> {
    limits::check_level(level, limits::DEFAULT_FOURIER_LEVEL)?;
    let mut scaled = vec![1i64];
    for l in 0..level {
        let half = 1usize << l;
        let prev = &scaled;
        // scaled by 2^{l+1}: a'_k = 2 a_k - a_{|k - 2^l|}
        let next = exec.map(2 * half, |k| {
            let own = if k < half { 2 * prev[k] } else { 0 };
            let shifted = k.abs_diff(half);
            let other = if shifted < half { prev[shifted] } else { 0 };
            own - other
        });
        scaled = next;
    }
    Ok(TrigPolynomial { level, scaled })
}

/// `P_N(x)` as the direct product of its factors.
pub fn density_product(x: f64, level: u32) -> f64 {
    let mut y = x.rem_euclid(1.0);
    let mut p = 1.0;
    for _ in 0..level {
        p *= 1.0 - (2.0 * PI * y).cos();
        y = y.double();
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderMass {
    pub word: BinaryWord,
    pub level: u32,
    pub mass: f64,
}

pub fn cylinder_mass(word: &BinaryWord, level: u32) -> Result<CylinderMass> {
    let poly = fourier_coeffs(level)?;
    Ok(CylinderMass {
        word: *word,
        level,
        mass: poly.cylinder_mass(word),
    })
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre(points: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(points);
    let n = points as f64;
    for i in 0..points {
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=points {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out
}

const GL_POINTS: usize = 32;

/// `2 sin^2(pi s)` for `s = (num + u) / 2^k`, folded to keep relative accuracy.
fn factor(num: u64, u: f64, k: u32) -> f64 {
    let den = (k as f64).exp2();
    let s = (num as f64 + u).min(den - num as f64 - u) / den;
    let sn = (PI * s).sin();
    2.0 * sn * sn
}

/// `nu_N(<word>)` from the product form `P_N(x) = P_n(x) P_{N-n}(2^n x)`,
/// integrated by composite Gauss-Legendre with one panel per oscillation of
/// `P_{N-n}`. The integrand is evaluated factor by factor, so the result keeps
/// relative accuracy even for cylinders of mass far below `f64::EPSILON`.
pub fn cylinder_mass_product(word: &BinaryWord, level: u32) -> Result<f64> {
    let n = word.len();
    if level < n {
        return Err(Error::OutOfRange {
            what: "level",
            value: level as i64,
            min: n as i64,
            max: limits::cap(limits::DEFAULT_FOURIER_LEVEL) as i64 + n as i64,
        });
    }
    let inner = level - n;
    limits::check_level(inner, limits::DEFAULT_FOURIER_LEVEL)?;
    let nodes = gauss_legendre(GL_POINTS);
    let panels = 1u64 << inner;
    let width = 1.0 / panels as f64;
    let v = word.value();
    let total = Exec::default().sum(panels as usize, |p| {
        nodes
            .iter()
            .map(|&(t, w)| {
                let u = (p as f64 + t) * width;
                // P_n((v + u) / 2^n): factor l sees (v mod 2^{n-l} + u) / 2^{n-l}
                let outer: f64 = (0..n)
                    .map(|l| factor(v & ((1u64 << (n - l)) - 1), u, n - l))
                    .product();
                // P_{N-n}(u) on panel p: factor l sees frac(2^l u)
                let inner_density: f64 = (0..inner)
                    .map(|l| factor(p as u64 & ((1u64 << (inner - l)) - 1), t, inner - l))
                    .product();
                w * outer * inner_density
            })
            .sum::<f64>()
            * width
    });
    Ok(total / (1u64 << n) as f64)
}

/// Outcome of the universal upper bound `nu(C_n) <= 2^{-n} sup_{C_n} exp(psi_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsCheck {
    pub word: BinaryWord,
    pub level: u32,
    pub mass: f64,
    pub bound: f64,
    pub pass: bool,
}

pub const GIBBS_REL_TOL: f64 = 1e-9;

pub fn gibbs_upper_check(word: &BinaryWord, level: u32) -> Result<GibbsCheck> {
    let mass = cylinder_mass_product(word, level)?;
    let n = word.len();
    let bound = (cylinder_sup(word) - n as f64 * LN_2).exp();
    Ok(GibbsCheck {
        word: *word,
        level,
        mass,
        bound,
        pass: mass <= bound * (1.0 + GIBBS_REL_TOL),
    })
}

/// `mass / (2^{-n} inf exp(psi_n))` with the infimum over `<word> ∩ X_m`.
///
/// `psi_n` is concave on the cylinder, so the infimum over any subset is taken
/// at its leftmost or rightmost point, both of which are eventually periodic.
/// Reported as a diagnostic only.
pub fn gibbs_lower_ratio(word: &BinaryWord, level: u32, sft: Sft) -> Result<f64> {
    if !is_admissible(word, sft) {
        return Err(Error::Inadmissible {
            word: word.to_string(),
            m: sft.m(),
        });
    }
    let mass = cylinder_mass_product(word, level)?;
    let n = word.len();
    let (left, right) = sft_extremes(word, sft);
    let inf = psi_n(left, n).min(psi_n(right, n));
    Ok(mass / (inf - n as f64 * LN_2).exp())
}

/// `psi_n(x) / (n log 2)`.
pub fn beta_estimate<P: OrbitPoint>(x: P, n: u32) -> f64 {
    psi_n(x, n) / (n as f64 * LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDimension {
    pub value: f64,
    /// The orbit hit a singularity of `psi`; `value` is `+inf`.
    pub singular: bool,
}

/// `1 - psi_n(x) / (n log 2)`.
pub fn local_dimension_estimate(x: &Rational, n: u32) -> LocalDimension {
    let s = psi_n(*x, n);
    if s == f64::NEG_INFINITY {
        LocalDimension {
            value: f64::INFINITY,
            singular: true,
        }
    } else {
        LocalDimension {
            value: 1.0 - s / (n as f64 * LN_2),
            singular: false,
        }
    }
}

/// `g(x) = (1 - cos 2 pi x) / 2`.
pub fn g_function(x: f64) -> f64 {
    0.5 * (1.0 - (2.0 * PI * x).cos())
}

/// `|g(y/2) + g((y+1)/2) - 1|`.
pub fn g_identity_error(y: f64) -> f64 {
    (g_function(0.5 * y) + g_function(0.5 * (y + 1.0)) - 1.0).abs()
}

/// Maximum of [`g_identity_error`] over `samples` uniform draws.
pub fn g_identity_check(samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| g_identity_error(rng.random::<f64>()))
        .fold(0.0, f64::max)
}
