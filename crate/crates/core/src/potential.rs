//! The potential `psi(x) = log(1 - cos 2 pi x)` along the doubling map.
//!
//! `psi` is evaluated as `log 2 + 2 log |sin pi x|` with `x` folded to the
//! nearer end of the unit interval, which keeps full relative accuracy next to
//! the singularities at the integers.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::limits;
use crate::symbolic::{BinaryWord, Rational};

/// `log(3/2)`, the maximal Birkhoff average (attained on the orbit of 1/3).
pub const LOG_3_2: f64 = 0.405_465_108_108_164_4;

/// Upper bound for `sup psi_n - psi_n(1/3)`, valid for all `n`.
pub const GAP_BOUND: f64 = PI + 0.287_682_072_451_780_9; // pi + log(4/3)

/// A point that can be pushed along the doubling map `x -> 2x mod 1`.
///
/// `f64` orbits are exact for dyadic inputs but run out of mantissa after
/// about 52 doublings; use [`Rational`] for long orbits.
pub trait OrbitPoint: Copy {
    fn double(self) -> Self;
    fn psi(self) -> f64;
}

impl OrbitPoint for f64 {
    fn double(self) -> Self {
        let y = 2.0 * self;
        if y >= 1.0 {
            y - 1.0
        } else {
            y
        }
    }

    fn psi(self) -> f64 {
        psi(self)
    }
}

impl OrbitPoint for Rational {
    fn double(self) -> Self {
        let (p, q) = reduce_mod_one(&self);
        let p2 = (2 * p as u128) % q as u128;
        Rational::new(p2 as u64, q)
    }

    fn psi(self) -> f64 {
        psi_rational(&self)
    }
}

fn reduce_mod_one(x: &Rational) -> (u64, u64) {
    let q = *x.denom();
    (*x.numer() % q, q)
}

fn psi_of_fold(fold: f64) -> f64 {
    if fold == 0.0 {
        f64::NEG_INFINITY
    } else {
        LN_2 + 2.0 * (PI * fold).sin().ln()
    }
}

/// `psi(x)`, reduced mod 1; `-inf` at the integers.
pub fn psi(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    psi_of_fold(y.min(1.0 - y))
}

/// `psi` at an exact rational, folding before the conversion to `f64`.
pub fn psi_rational(x: &Rational) -> f64 {
    let (p, q) = reduce_mod_one(x);
    let r = p.min(q - p);
    if r == 0 {
        return f64::NEG_INFINITY;
    }
    psi_of_fold(r as f64 / q as f64)
}

/// `psi'(x) = 2 pi sin(2 pi x) / (1 - cos 2 pi x) = 2 pi cot(pi x)`.
pub fn psi_prime(x: f64) -> Result<f64> {
    let y = x.rem_euclid(1.0);
    if y == 0.0 {
        return Err(Error::Pole(x));
    }
    Ok(2.0 * PI / (PI * y).tan())
}

/// Birkhoff sum `psi_n(x) = sum_{l < n} psi(2^l x mod 1)`.
pub fn psi_n<P: OrbitPoint>(x: P, n: u32) -> f64 {
    let mut y = x;
    let mut acc = 0.0;
    for _ in 0..n {
        let v = y.psi();
        if v == f64::NEG_INFINITY {
            return v;
        }
        acc += v;
        y = y.double();
    }
    acc
}

/// `psi` restricted to `D(m) = [2^{-m-1}, 1 - 2^{-m-1}]` and zero outside.
pub fn psi_truncated(x: f64, m: u32) -> f64 {
    let edge = (-(m as f64) - 1.0).exp2();
    let y = x.rem_euclid(1.0);
    if y >= edge && y <= 1.0 - edge {
        psi(y)
    } else {
        0.0
    }
}

/// Maximum of a unimodal function on `[a, b]` by golden-section search.
///
/// Returns `(x, f(x))` of the best interior probe; the caller handles the endpoints.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let tol = ((b - a) * 1e-10).max(4.0 * f64::EPSILON * b.abs()).min(1e-12);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `sup psi_n` over the closed cylinder of `word`, `n = word.len()`.
///
/// `psi_n` is concave inside a length-`n` cylinder. Each half is searched by
/// golden section and the endpoints are evaluated exactly; the endpoint with an
/// odd numerator is always finite.
pub fn cylinder_sup(word: &BinaryWord) -> f64 {
    let n = word.len();
    let den = 1u64 << n;
    let a = word.value() as f64 / den as f64;
    let b = (word.value() + 1) as f64 / den as f64;
    let mid = 0.5 * (a + b);
    let f = |x: f64| psi_n(x, n);
    let left = golden_max(f, a, mid).1;
    let right = golden_max(f, mid, b).1;
    let ends = [
        psi_n(Rational::new(word.value(), den), n),
        psi_n(Rational::new(word.value() + 1, den), n),
    ];
    ends.into_iter().fold(left.max(right), f64::max)
}

/// Result of the midpoint-grid scan of `psi_n` on `[0, 1/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MidpointMax {
    pub n: u32,
    pub x: Rational,
    pub value: f64,
    pub word: BinaryWord,
}

fn check_scan_level(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            min: min as i64,
            max: limits::cap(limits::DEFAULT_SCAN_LEVEL) as i64,
        });
    }
    limits::check_level(n, limits::DEFAULT_SCAN_LEVEL)
}

/// Scans `psi_n` on the midpoints `(2j-1) 2^{-(n+1)}` lying in `[0, 1/2]`.
pub fn argmax_on_midpoints(n: u32) -> Result<MidpointMax> {
    argmax_on_midpoints_with(n, Exec::default())
}

pub fn argmax_on_midpoints_with(n: u32, exec: Exec) -> Result<MidpointMax> {
    check_scan_level(n, 1)?;
    let den = 1u64 << (n + 1);
    let scale = 1.0 / den as f64;
    // j = 1 ..= 2^{n-1}
    let (idx, value) = exec
        .argmax(1usize << (n - 1), |i| psi_n((2 * i + 1) as f64 * scale, n))
        .expect("non-empty grid");
    let numer = 2 * idx as u64 + 1;
    Ok(MidpointMax {
        n,
        x: Rational::new(numer, den),
        value,
        word: BinaryWord::from_parts(numer >> 1, n),
    })
}

/// `sup psi_n - psi_n(1/3)` near the grid maximum: the midpoint scan picks the
/// cylinder, golden section refines inside it (clipped to `[0, 1/2]`).
pub fn max_gap_constant(n: u32) -> Result<f64> {
    max_gap_constant_with(n, Exec::default())
}

pub fn max_gap_constant_with(n: u32, exec: Exec) -> Result<f64> {
    let grid = argmax_on_midpoints_with(n, exec)?;
    let refined = cylinder_sup(&grid.word);
    let baseline = psi_n(Rational::new(1, 3), n);
    Ok(grid.value.max(refined) - baseline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(p: u64, q: u64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn psi_examples() {
        assert!((psi(0.5) - LN_2).abs() < 1e-15);
        assert!((psi_rational(&r(1, 3)) - 1.5f64.ln()).abs() < 1e-15);
        assert!((LOG_3_2 - 1.5f64.ln()).abs() < 1e-16);
        assert_eq!(psi(0.0), f64::NEG_INFINITY);
        assert_eq!(psi(1.0), f64::NEG_INFINITY);
        assert!(psi(0.25).abs() < 1e-15);
        // 1-periodic
        assert!((psi(1.25) - psi(0.25)).abs() < 1e-15);
        assert!((psi(-0.75) - psi(0.25)).abs() < 1e-15);
    }

    #[test]
    fn psi_near_singularity_keeps_relative_accuracy() {
        let x = 1e-9;
        let direct = (2.0 * PI * PI * x * x).ln(); // 1 - cos(2 pi x) ~ 2 pi^2 x^2
        assert!((psi(x) - direct).abs() < 1e-12);
        assert!((psi(1.0 - x) - psi(x)).abs() < 1e-6);
    }

    #[test]
    fn psi_prime_examples() {
        assert!(psi_prime(0.5).unwrap().abs() < 1e-12);
        assert!((psi_prime(0.25).unwrap() - 2.0 * PI).abs() < 1e-12);
        let x = 0.125;
        let h = 1e-6;
        let fd = (psi(x + h) - psi(x - h)) / (2.0 * h);
        let closed = 2.0 * PI * (PI / 4.0).sin() / (1.0 - (PI / 4.0).cos());
        assert!((psi_prime(x).unwrap() - closed).abs() < 1e-12);
        assert!((fd - closed).abs() / closed < 1e-6);
        assert!(matches!(psi_prime(0.0), Err(Error::Pole(_))));
        assert!(matches!(psi_prime(1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn psi_n_examples() {
        let third = psi_n(r(1, 3), 5);
        assert!((third - 5.0 * 1.5f64.ln()).abs() < 1e-13);
        assert_eq!(psi_n(r(1, 2), 2), f64::NEG_INFINITY);
        assert_eq!(psi_n(0.5, 2), f64::NEG_INFINITY);
        // orbit of 1/5 is {1/5, 2/5, 4/5, 3/5}; compare with log of the product
        let product: f64 = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|k: &f64| 1.0 - (2.0 * PI * k / 5.0).cos())
            .product();
        assert!((psi_n(r(1, 5), 4) - product.ln()).abs() < 1e-13);
    }

    #[test]
    fn truncated_examples() {
        assert!((psi_truncated(0.5, 3) - LN_2).abs() < 1e-15);
        assert_eq!(psi_truncated((-6f64).exp2(), 3), 0.0);
        assert_eq!(psi_truncated(1.0 / 16.0, 3), psi(1.0 / 16.0));
        assert_eq!(psi_truncated(15.0 / 16.0, 3), psi(15.0 / 16.0));
        assert!(psi_truncated(0.01, 3) >= psi(0.01));
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(argmax_on_midpoints(2).unwrap().word.to_string(), "01");
        assert_eq!(argmax_on_midpoints(3).unwrap().word.to_string(), "010");
        assert_eq!(argmax_on_midpoints(10).unwrap().word.to_string(), "0101010101");
        assert!(argmax_on_midpoints(0).is_err());
    }

    #[test]
    fn gap_examples() {
        let g1 = max_gap_constant(1).unwrap();
        assert!((g1 - (4.0f64 / 3.0).ln()).abs() < 1e-12);
        let g2 = max_gap_constant(2).unwrap();
        assert!((0.0..=GAP_BOUND).contains(&g2), "{g2}");
        assert!(max_gap_constant(20).unwrap() <= GAP_BOUND);
        assert!((GAP_BOUND - (PI + (4.0f64 / 3.0).ln())).abs() < 1e-15);
    }

    #[test]
    fn cylinder_sup_dominates_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(1..14u32);
            let word = BinaryWord::new(rng.random_range(0..1u64 << n), n).unwrap();
            let sup = cylinder_sup(&word);
            let (a, w) = (word.value() as f64 / (1u64 << n) as f64, (-(n as f64)).exp2());
            for k in 1..64 {
                let v = psi_n(a + w * k as f64 / 64.0, n);
                assert!(v <= sup + 1e-9 * sup.abs().max(1.0), "{word}: {v} > {sup}");
            }
        }
    }

    #[test]
    fn invariants_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let x: f64 = rng.random_range(1e-9..1.0 - 1e-9);
            let n = rng.random_range(1..=20u32);
            // symmetry psi_n(1 - x) = psi_n(x) on a 40-bit grid where 1 - x is exact
            let q = (x * (1u64 << 40) as f64).round() / (1u64 << 40) as f64;
            let (a, b) = (psi_n(q, n), psi_n(1.0 - q, n));
            if a.is_finite() {
                assert!((a - b).abs() <= 1e-12, "{q} {n}");
            }
            // derivative bound |psi'| <= 2 max(1/x, 1/(1-x))
            let d = psi_prime(x).unwrap().abs();
            assert!(d <= 2.0 * (1.0 / x).max(1.0 / (1.0 - x)) * (1.0 + 1e-12));
            // concavity at a random pair
            let y: f64 = rng.random_range(1e-6..1.0 - 1e-6);
            assert!(psi(0.5 * (x + y)) >= 0.5 * (psi(x) + psi(y)) - 1e-12);
        }
    }

    #[test]
    fn cocycle_recursions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2_000 {
            let q = rng.random_range(3..1u64 << 30) | 1;
            let x = r(rng.random_range(1..q), q);
            let n = rng.random_range(1..=30u32);
            let next = psi_n(x, n + 1);
            let first = psi_n(x.double(), n) + x.psi();
            let mut y = x;
            for _ in 0..n {
                y = y.double();
            }
            let last = psi_n(x, n) + y.psi();
            let tol = 1e-10 * next.abs().max(1.0);
            assert!((next - first).abs() <= tol);
            assert!((next - last).abs() <= tol);
        }
    }

    #[test]
    fn psi_prime_matches_finite_differences() {
        let h = 1e-6;
        for i in 1..=100 {
            let x = 0.02 + 0.96 * i as f64 / 101.0;
            let fd = (psi(x + h) - psi(x - h)) / (2.0 * h);
            let d = psi_prime(x).unwrap();
            assert!((fd - d).abs() <= 1e-5 * d.abs().max(1.0), "{x}: {fd} vs {d}");
        }
    }

    #[test]
    fn sequential_and_parallel_scans_agree() {
        let a = argmax_on_midpoints_with(14, Exec::Sequential).unwrap();
        let b = argmax_on_midpoints_with(14, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
