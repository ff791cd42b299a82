//! Binary fixed-point reals backed by `BigInt`, used for the entropy series.
//!
//! A value is `raw / 2^FRAC_BITS`. Addition is exact; division by an integer
//! truncates toward zero, so every operation adds at most one unit in the last
//! place (about 1e-77).

use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub const FRAC_BITS: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Fixed(BigInt::from(v) << FRAC_BITS)
    }

    /// `num / den`, rounded toward zero.
    pub fn from_ratio(num: i128, den: u128) -> Self {
        assert!(den != 0, "division by zero");
        Fixed((BigInt::from(num) << FRAC_BITS) / BigInt::from(den))
    }

    pub fn div_int(&self, den: i128) -> Self {
        assert!(den != 0, "division by zero");
        Fixed(&self.0 / BigInt::from(den))
    }

    pub fn mul_int(&self, k: i128) -> Self {
        Fixed(&self.0 * BigInt::from(k))
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 significant bits before converting
        let bits = self.0.bits();
        if bits <= 1000 {
            let shift = bits.saturating_sub(64);
            let top = (&self.0 >> shift).to_f64().unwrap_or(f64::NAN);
            top * ((shift as f64) - FRAC_BITS as f64).exp2()
        } else {
            f64::NAN
        }
    }

    /// Decimal expansion truncated to `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let negative = self.0.is_negative();
        let scaled = (self.0.abs() * BigInt::from(10u8).pow(digits as u32)) >> FRAC_BITS;
        let (int, frac) = scaled.div_rem(&BigInt::from(10u8).pow(digits as u32));
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0>digits$}")
        }
    }

    /// `log 2 = 2 atanh(1/3) = sum_k 2 / ((2k+1) 3^{2k+1})`.
    pub fn ln2() -> Self {
        let mut acc = BigInt::zero();
        let mut power = BigInt::from(3u8);
        let one = BigInt::from(2u8) << FRAC_BITS;
        for k in 0u32.. {
            let term = &one / (&power * BigInt::from(2 * k + 1));
            if term.is_zero() {
                break;
            }
            acc += term;
            power *= 9u8;
        }
        Fixed(acc)
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Fixed> for Fixed {
    type Output = Fixed;
    fn add(self, rhs: &'a Fixed) -> Fixed {
        Fixed(self.0 + &rhs.0)
    }
}

impl AddAssign<&Fixed> for Fixed {
    fn add_assign(&mut self, rhs: &Fixed) {
        self.0 += &rhs.0;
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &'a Fixed) -> Fixed {
        Fixed(&self.0 - &rhs.0)
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-self.0)
    }
}

impl std::iter::Sum for Fixed {
    fn sum<I: Iterator<Item = Fixed>>(iter: I) -> Fixed {
        iter.fold(Fixed::zero(), |a, b| a + b)
    }
}
