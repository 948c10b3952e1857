//! Exact arithmetic on the Eisenstein integers `Z[ζ]`, `ζ = (-1 + √-3)/2`.
//!
//! A point `a + bζ` is stored as the integer pair `(a, b)`. Products reduce
//! with `ζ² = -1 - ζ`. Every operation is exact; the `checked_*` family
//! reports overflow as an error, and the operator impls panic on overflow
//! instead of wrapping.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The lattice point `a + bζ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Eisenstein {
    pub a: i64,
    pub b: i64,
}

impl Eisenstein {
    pub const ZERO: Eisenstein = Eisenstein { a: 0, b: 0 };
    pub const ONE: Eisenstein = Eisenstein { a: 1, b: 0 };
    pub const ZETA: Eisenstein = Eisenstein { a: 0, b: 1 };
    pub const ZETA2: Eisenstein = Eisenstein { a: -1, b: -1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Eisenstein { a, b }
    }

    pub const fn from_int(n: i64) -> Self {
        Eisenstein { a: n, b: 0 }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        Ok(Eisenstein {
            a: self.a.checked_add(rhs.a).ok_or(Error::Overflow)?,
            b: self.b.checked_add(rhs.b).ok_or(Error::Overflow)?,
        })
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        Ok(Eisenstein {
            a: self.a.checked_sub(rhs.a).ok_or(Error::Overflow)?,
            b: self.b.checked_sub(rhs.b).ok_or(Error::Overflow)?,
        })
    }

    pub fn checked_neg(self) -> Result<Self> {
        Ok(Eisenstein {
            a: self.a.checked_neg().ok_or(Error::Overflow)?,
            b: self.b.checked_neg().ok_or(Error::Overflow)?,
        })
    }

    /// `(a1 + b1ζ)(a2 + b2ζ) = (a1a2 - b1b2) + (a1b2 + a2b1 - b1b2)ζ`.
    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        let (a1, b1, a2, b2) = (self.a as i128, self.b as i128, rhs.a as i128, rhs.b as i128);
        let bb = b1 * b2;
        let a = a1 * a2 - bb;
        let b = a1 * b2 + a2 * b1 - bb;
        Ok(Eisenstein {
            a: i64::try_from(a).map_err(|_| Error::Overflow)?,
            b: i64::try_from(b).map_err(|_| Error::Overflow)?,
        })
    }

    pub fn checked_scale(self, k: i64) -> Result<Self> {
        Ok(Eisenstein {
            a: self.a.checked_mul(k).ok_or(Error::Overflow)?,
            b: self.b.checked_mul(k).ok_or(Error::Overflow)?,
        })
    }

    /// Complex conjugate. `conj(ζ) = ζ²`, so `conj(a + bζ) = (a - b) - bζ`.
    pub fn checked_conj(self) -> Result<Self> {
        Ok(Eisenstein {
            a: self.a.checked_sub(self.b).ok_or(Error::Overflow)?,
            b: self.b.checked_neg().ok_or(Error::Overflow)?,
        })
    }

    pub fn conj(self) -> Self {
        self.checked_conj().expect("Eisenstein conjugate overflowed i64")
    }

    pub fn scale(self, k: i64) -> Self {
        self.checked_scale(k).expect("Eisenstein scaling overflowed i64")
    }

    /// `|z|² = a² - ab + b²`, always a nonnegative integer.
    pub fn norm_sq(self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        a * a - a * b + b * b
    }

    /// Real part in the standard complex embedding, `a - b/2`, as `(numerator, 2)`.
    pub fn re_twice(self) -> i128 {
        2 * self.a as i128 - self.b as i128
    }

    /// Divides by the integer `d` if both coefficients are divisible by it.
    pub fn exact_div(self, d: i64) -> Option<Self> {
        if d != 0 && self.a % d == 0 && self.b % d == 0 {
            Some(Eisenstein { a: self.a / d, b: self.b / d })
        } else {
            None
        }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Cartesian coordinates `(a - b/2, b√3/2)`. The only floating point in the crate's
    /// arithmetic layer; used for plotting and the isotropy probe.
    pub fn to_cartesian(self) -> (f64, f64) {
        let a = self.a as f64;
        let b = self.b as f64;
        (a - b / 2.0, b * 3f64.sqrt() / 2.0)
    }

    /// The six unit neighbors `±1, ±ζ, ±ζ²`.
    pub fn neighbors(self) -> [Eisenstein; 6] {
        UNITS.map(|u| self + u)
    }
}

/// The six units of `Z[ζ]`.
pub const UNITS: [Eisenstein; 6] = [
    Eisenstein::new(1, 0),
    Eisenstein::new(0, 1),
    Eisenstein::new(-1, -1),
    Eisenstein::new(-1, 0),
    Eisenstein::new(0, -1),
    Eisenstein::new(1, 1),
];

impl Add for Eisenstein {
    type Output = Eisenstein;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("Eisenstein addition overflowed i64")
    }
}

impl Sub for Eisenstein {
    type Output = Eisenstein;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("Eisenstein subtraction overflowed i64")
    }
}

impl Mul for Eisenstein {
    type Output = Eisenstein;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("Eisenstein multiplication overflowed i64")
    }
}

impl Neg for Eisenstein {
    type Output = Eisenstein;
    fn neg(self) -> Self {
        self.checked_neg().expect("Eisenstein negation overflowed i64")
    }
}

impl From<Step> for Eisenstein {
    fn from(s: Step) -> Self {
        s.value()
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// One walk increment: `1`, `ζ` or `ζ²`. Ordered `One < Zeta < Zeta2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    One,
    Zeta,
    Zeta2,
}

impl Step {
    pub const ALL: [Step; 3] = [Step::One, Step::Zeta, Step::Zeta2];

    pub const fn value(self) -> Eisenstein {
        match self {
            Step::One => Eisenstein::ONE,
            Step::Zeta => Eisenstein::ZETA,
            Step::Zeta2 => Eisenstein::ZETA2,
        }
    }

    /// Exponent `k` with `self = ζ^k`.
    pub const fn index(self) -> usize {
        match self {
            Step::One => 0,
            Step::Zeta => 1,
            Step::Zeta2 => 2,
        }
    }

    pub fn from_index(k: usize) -> Step {
        Step::ALL[k % 3]
    }

    /// `conj(ζ^k) = ζ^{-k}`, which is again a step.
    pub const fn conj(self) -> Step {
        match self {
            Step::One => Step::One,
            Step::Zeta => Step::Zeta2,
            Step::Zeta2 => Step::Zeta,
        }
    }

    pub fn from_value(z: Eisenstein) -> Option<Step> {
        Step::ALL.into_iter().find(|s| s.value() == z)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::One => "1",
            Step::Zeta => "ζ",
            Step::Zeta2 => "ζ²",
        })
    }
}
