//! Exact number types built on top of [`Eisenstein`].
//!
//! [`Triadic`] is an element of `Z[1/3][ζ]`: an Eisenstein numerator over a
//! power of three. Every quantity in the Itô and Tanaka formulas lives here.
//! [`Surd`] is `u + v√3` with rational `u, v`, which is exactly what the
//! cartesian real and imaginary parts of a triadic value are.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;

use crate::eisenstein::Eisenstein;
use crate::error::{Error, Result};

/// `num / 3^exp`, kept in lowest terms (`exp == 0` or `3 ∤ num`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Triadic {
    num: Eisenstein,
    exp: u32,
}

fn pow3(k: u32) -> Result<i64> {
    3i64.checked_pow(k).ok_or(Error::Overflow)
}

impl Triadic {
    pub const ZERO: Triadic = Triadic { num: Eisenstein::ZERO, exp: 0 };
    pub const ONE: Triadic = Triadic { num: Eisenstein::ONE, exp: 0 };

    pub fn new(num: Eisenstein, exp: u32) -> Self {
        let mut t = Triadic { num, exp };
        t.reduce();
        t
    }

    pub fn from_int(n: i64) -> Self {
        Triadic { num: Eisenstein::from_int(n), exp: 0 }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        while self.exp > 0 {
            match self.num.exact_div(3) {
                Some(q) => {
                    self.num = q;
                    self.exp -= 1;
                }
                None => break,
            }
        }
    }

    pub fn numerator(self) -> Eisenstein {
        self.num
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    /// The value as an Eisenstein integer, if it is one.
    pub fn to_integer(self) -> Option<Eisenstein> {
        (self.exp == 0).then_some(self.num)
    }

    pub fn is_zero(self) -> bool {
        self.num.is_zero()
    }

    pub fn is_real(self) -> bool {
        self.num.b == 0
    }

    fn aligned(self, rhs: Self) -> Result<(Eisenstein, Eisenstein, u32)> {
        let exp = self.exp.max(rhs.exp);
        let l = self.num.checked_scale(pow3(exp - self.exp)?)?;
        let r = rhs.num.checked_scale(pow3(exp - rhs.exp)?)?;
        Ok((l, r, exp))
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        let (l, r, exp) = self.aligned(rhs)?;
        Ok(Triadic::new(l.checked_add(r)?, exp))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        let (l, r, exp) = self.aligned(rhs)?;
        Ok(Triadic::new(l.checked_sub(r)?, exp))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        let exp = self.exp.checked_add(rhs.exp).ok_or(Error::Overflow)?;
        Ok(Triadic::new(self.num.checked_mul(rhs.num)?, exp))
    }

    /// Division by `3^k`.
    pub fn div_pow3(self, k: u32) -> Self {
        Triadic::new(self.num, self.exp.checked_add(k).expect("triadic exponent overflowed"))
    }

    pub fn conj(self) -> Self {
        Triadic { num: self.num.conj(), exp: self.exp }
    }

    /// `|x|²`, real and nonnegative.
    pub fn abs_sq(self) -> Self {
        self * self.conj()
    }

    /// Cartesian real part `(a - b/2) / 3^exp`.
    pub fn re(self) -> Surd {
        let den = 2 * 3i128.pow(self.exp);
        Surd::rational(Ratio::new(self.num.re_twice(), den))
    }

    /// Cartesian imaginary part `(b/2)√3 / 3^exp`.
    pub fn im(self) -> Surd {
        let den = 2 * 3i128.pow(self.exp);
        Surd::new(Ratio::from_integer(0), Ratio::new(self.num.b as i128, den))
    }
}

impl From<Eisenstein> for Triadic {
    fn from(z: Eisenstein) -> Self {
        Triadic { num: z, exp: 0 }
    }
}

impl Add for Triadic {
    type Output = Triadic;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("triadic addition overflowed")
    }
}

impl Sub for Triadic {
    type Output = Triadic;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("triadic subtraction overflowed")
    }
}

impl Mul for Triadic {
    type Output = Triadic;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("triadic multiplication overflowed")
    }
}

impl Neg for Triadic {
    type Output = Triadic;
    fn neg(self) -> Self {
        Triadic { num: -self.num, exp: self.exp }
    }
}

impl std::iter::Sum for Triadic {
    fn sum<I: Iterator<Item = Triadic>>(iter: I) -> Self {
        iter.fold(Triadic::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for Triadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.num.a, self.num.b);
        let body = match (a, b) {
            (_, 0) => format!("{a}"),
            (0, _) => format!("{b}ζ"),
            _ if b < 0 => format!("{a}-{}ζ", -b),
            _ => format!("{a}+{b}ζ"),
        };
        if self.exp == 0 {
            f.write_str(&body)
        } else if b == 0 || a == 0 {
            write!(f, "{body}/{}", 3i128.pow(self.exp))
        } else {
            write!(f, "({body})/{}", 3i128.pow(self.exp))
        }
    }
}

/// `u + v√3` with rational coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Surd {
    pub rational: Ratio<i128>,
    pub sqrt3: Ratio<i128>,
}

impl Surd {
    pub fn new(rational: Ratio<i128>, sqrt3: Ratio<i128>) -> Self {
        Surd { rational, sqrt3 }
    }

    pub fn rational(u: Ratio<i128>) -> Self {
        Surd { rational: u, sqrt3: Ratio::from_integer(0) }
    }

    pub fn zero() -> Self {
        Surd::rational(Ratio::from_integer(0))
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Self) -> Surd {
        Surd::new(self.rational + rhs.rational, self.sqrt3 + rhs.sqrt3)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Self) -> Surd {
        let three = Ratio::from_integer(3);
        Surd::new(
            self.rational * rhs.rational + three * self.sqrt3 * rhs.sqrt3,
            self.rational * rhs.sqrt3 + self.sqrt3 * rhs.rational,
        )
    }
}

impl Mul<Ratio<i128>> for Surd {
    type Output = Surd;
    fn mul(self, k: Ratio<i128>) -> Surd {
        Surd::new(self.rational * k, self.sqrt3 * k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(a: i64, b: i64, exp: u32) -> Triadic {
        Triadic::new(Eisenstein::new(a, b), exp)
    }

    #[test]
    fn lowest_terms() {
        assert_eq!(t(3, 6, 1), t(1, 2, 0));
        assert_eq!(t(9, 0, 3), t(1, 0, 1));
        assert_eq!(t(0, 0, 5), Triadic::ZERO);
        assert_eq!(t(9, 0, 3).exponent(), 1);
    }

    #[test]
    fn thirds_add_up() {
        let third = t(1, 0, 1);
        assert_eq!(third + third + third, Triadic::ONE);
        assert_eq!((third * third).exponent(), 2);
        assert_eq!(t(2, 0, 1).to_string(), "2/3");
        assert_eq!(t(1, -1, 1).to_string(), "(1-1ζ)/3");
    }

    #[test]
    fn cartesian_parts() {
        // ζ = -1/2 + (1/2)√3 i
        let z = Triadic::from(Eisenstein::ZETA);
        assert_eq!(z.re(), Surd::rational(Ratio::new(-1, 2)));
        assert_eq!(z.im(), Surd::new(Ratio::from_integer(0), Ratio::new(1, 2)));
        // |ζ|² = Re² + Im² = 1
        let n = z.re() * z.re() + z.im() * z.im();
        assert_eq!(n, Surd::rational(Ratio::from_integer(1)));
    }

    fn triadic() -> impl Strategy<Value = Triadic> {
        (-500i64..500, -500i64..500, 0u32..4).prop_map(|(a, b, e)| t(a, b, e))
    }

    proptest! {
        #[test]
        fn field_like_axioms(x in triadic(), y in triadic(), z in triadic()) {
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!((x - y) + y, x);
            prop_assert_eq!((x * y).conj(), x.conj() * y.conj());
            prop_assert!(x.abs_sq().is_real());
        }

        #[test]
        fn re_im_are_additive(x in triadic(), y in triadic()) {
            prop_assert_eq!((x + y).re(), x.re() + y.re());
            prop_assert_eq!((x + y).im(), x.im() + y.im());
        }
    }
}
