//! Execution policy for the data-parallel kernels.
//!
//! Every reduction uses fixed chunk boundaries and combines chunk results in
//! index order, so `Sequential` and `Parallel` return bit-identical values
//! independent of the size of the thread pool.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Elements per reduction chunk.
pub const CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Rayon-backed; identical to `Sequential` when the `parallel` feature is off.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `(0..len).map(f).collect()`, order preserved.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Map over a slice, order preserved.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Deterministic `sum_{i < len} f(i)`.
    pub fn sum<F>(self, len: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let chunks = len.div_ceil(CHUNK);
        let partial = self.map(chunks, |c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            (lo..hi).map(&f).sum::<f64>()
        });
        partial.into_iter().sum()
    }

    /// Deterministic generic fold: chunk results are combined in index order.
    pub fn fold_chunks<T, F, G>(self, len: usize, chunk: F, combine: G, init: T) -> T
    where
        T: Send,
        F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
        G: Fn(T, T) -> T,
    {
        let chunks = len.div_ceil(CHUNK);
        let partial = self.map(chunks, |c| {
            let lo = c * CHUNK;
            chunk(lo..(lo + CHUNK).min(len))
        });
        partial.into_iter().fold(init, combine)
    }

    /// Index and value of the maximum of `f` over `0..len`; ties go to the lowest
    /// index and NaN never wins. Returns `None` for an empty range.
    pub fn argmax<F>(self, len: usize, f: F) -> Option<(usize, f64)>
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        self.fold_chunks(
            len,
            |range| {
                let mut best: Option<(usize, f64)> = None;
                for i in range {
                    best = pick(best, Some((i, f(i))));
                }
                best
            },
            pick,
            None,
        )
    }

    /// Deterministic `log sum_i exp(values[i])`, max-first for stability.
    pub fn log_sum_exp(self, values: &[f64]) -> f64 {
        self.log_sum_exp_by(values.len(), |i| values[i])
    }

    /// `log sum_{i < len} exp(f(i))` with the same max-first reduction.
    pub fn log_sum_exp_by<F>(self, len: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let max = self
            .argmax(len, &f)
            .map(|(_, v)| v)
            .unwrap_or(f64::NEG_INFINITY);
        if max == f64::NEG_INFINITY || max.is_nan() {
            return max;
        }
        if max == f64::INFINITY {
            return f64::INFINITY;
        }
        max + self.sum(len, |i| (f(i) - max).exp()).ln()
    }
}

fn pick(a: Option<(usize, f64)>, b: Option<(usize, f64)>) -> Option<(usize, f64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.1.is_nan() {
                return Some(a);
            }
            if a.1.is_nan() || b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        let n = 3 * CHUNK + 17;
        assert_eq!(
            Exec::Sequential.sum(n, f).to_bits(),
            Exec::Parallel.sum(n, f).to_bits()
        );
        assert_eq!(Exec::Sequential.argmax(n, f), Exec::Parallel.argmax(n, f));
    }

    #[test]
    fn argmax_prefers_lowest_index() {
        let v = [1.0, 3.0, 2.0, 3.0];
        assert_eq!(Exec::default().argmax(v.len(), |i| v[i]), Some((1, 3.0)));
        assert_eq!(Exec::default().argmax(0, |_| 0.0), None);
    }

    #[test]
    fn log_sum_exp_handles_extremes() {
        let e = Exec::default();
        assert!((e.log_sum_exp(&[0.0; 8]) - 8f64.ln()).abs() < 1e-15);
        assert_eq!(e.log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((e.log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(e.log_sum_exp(&[f64::NEG_INFINITY, 0.0]), 0.0);
    }
}
