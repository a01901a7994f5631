use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// An exact nonnegative dyadic rational `mantissa · 2^exponent`.
///
/// Kept normalized: the mantissa is odd, or the value is zero with exponent 0.
/// Equality and ordering are therefore structural on the normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicWeight {
    mantissa: BigUint,
    exponent: i64,
}

impl DyadicWeight {
    pub fn zero() -> Self {
        DyadicWeight {
            mantissa: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::pow2(0)
    }

    /// `2^e`; `e` may be negative.
    pub fn pow2(e: i64) -> Self {
        DyadicWeight {
            mantissa: BigUint::one(),
            exponent: e,
        }
    }

    pub fn from_count(n: u64) -> Self {
        Self::new(BigUint::from(n), 0)
    }

    pub fn new(mantissa: BigUint, exponent: i64) -> Self {
        let mut w = DyadicWeight { mantissa, exponent };
        w.normalize();
        w
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exponent += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Odd mantissa of the normal form.
    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// The value as `numerator / 2^denominator_exponent` with a nonnegative
    /// denominator exponent (integers report exponent 0).
    pub fn as_fraction(&self) -> (BigUint, u64) {
        if self.exponent >= 0 {
            (&self.mantissa << self.exponent as u64, 0)
        } else {
            (self.mantissa.clone(), self.exponent.unsigned_abs())
        }
    }

    pub fn le_one(&self) -> bool {
        *self <= Self::one()
    }

    /// Lossy, for display only.
    pub fn to_f64(&self) -> f64 {
        let m: f64 = self.mantissa.to_string().parse().unwrap_or(f64::INFINITY);
        m * 2f64.powi(self.exponent.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

impl Default for DyadicWeight {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &DyadicWeight {
    type Output = DyadicWeight;

    fn add(self, rhs: &DyadicWeight) -> DyadicWeight {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &rhs.mantissa << (rhs.exponent - e) as u64;
        DyadicWeight::new(a + b, e)
    }
}

impl Add for DyadicWeight {
    type Output = DyadicWeight;

    fn add(self, rhs: DyadicWeight) -> DyadicWeight {
        &self + &rhs
    }
}

impl AddAssign<&DyadicWeight> for DyadicWeight {
    fn add_assign(&mut self, rhs: &DyadicWeight) {
        *self = &*self + rhs;
    }
}

impl Mul for &DyadicWeight {
    type Output = DyadicWeight;

    fn mul(self, rhs: &DyadicWeight) -> DyadicWeight {
        DyadicWeight::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Sum for DyadicWeight {
    fn sum<I: Iterator<Item = DyadicWeight>>(iter: I) -> Self {
        iter.fold(DyadicWeight::zero(), |acc, w| &acc + &w)
    }
}

impl Ord for DyadicWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.as_fraction();
        if den == 0 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/2^{den}")
        }
    }
}

impl serde::Serialize for DyadicWeight {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Debug for DyadicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
