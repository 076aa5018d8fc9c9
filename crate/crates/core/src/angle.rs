//! Exact rotation angles stored as rational multiples of π.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `value · π`, kept exact so `(π/4)ℤ` membership never depends on floats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Angle(Rational64);

impl Angle {
    pub const ZERO: Angle = Angle(Rational64::new_raw(0, 1));

    /// `num/den · π`; panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        Angle(Rational64::new(num, den))
    }

    pub fn from_ratio(r: Rational64) -> Self {
        Angle(r)
    }

    /// `k · π/4`.
    pub fn quarter_turns(k: i64) -> Self {
        Angle::new(k, 4)
    }

    pub fn ratio(&self) -> Rational64 {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn radians(&self) -> f64 {
        self.0.to_f64().expect("finite rational") * std::f64::consts::PI
    }

    /// `Some(k)` iff the angle equals `k · π/4`.
    pub fn as_quarter_turns(&self) -> Option<i64> {
        let q = self.0 * 4;
        q.is_integer().then(|| q.to_integer())
    }

    pub fn is_clifford(&self) -> bool {
        self.as_quarter_turns().is_some()
    }

    /// Splits `θ = k·π/4 + r` with `0 ≤ r < π/4`.
    pub fn split_quarter_turns(&self) -> (i64, Angle) {
        let q = self.0 * 4;
        let k = q.floor().to_integer();
        (k, Angle(self.0 - Rational64::new(k, 4)))
    }

    /// Representative in `[0, 2)·π`.
    pub fn reduced(&self) -> Angle {
        let two = Rational64::from_integer(2);
        let r = self.0 - (self.0 / two).floor() * two;
        Angle(r)
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle(self.0 - rhs.0)
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle(-self.0)
    }
}

impl std::ops::AddAssign for Angle {
    fn add_assign(&mut self, rhs: Angle) {
        self.0 += rhs.0;
    }
}

/// Always `num/den`, even for integers, so the text form is unambiguous.
impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed rational angle {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let num: i64 = num.parse().map_err(|_| bad())?;
        let den: i64 = den.parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Ok(Angle::new(num, den))
    }
}
