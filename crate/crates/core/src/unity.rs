//! Exact character values: zero or a root of unity `exp(2πi num/den)`.
//!
//! Characters are evaluated exactly and only turned into floating-point
//! complex numbers when they enter a state vector.

use std::f64::consts::TAU;
use std::ops::Mul;

use num_complex::Complex64;

use crate::numtheory::gcd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    /// `exp(2πi num/den)` with `0 <= num < den` and `gcd(num, den) == 1`.
    Root { num: u64, den: u64 },
}

impl CharValue {
    pub const ONE: CharValue = CharValue::Root { num: 0, den: 1 };

    /// `exp(2πi num/den)` in canonical form.
    pub fn root(num: u64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero order");
        let num = num % den;
        let g = gcd(num, den);
        CharValue::Root {
            num: num / g,
            den: den / g,
        }
    }

    pub fn from_sign(sign: i8) -> Self {
        match sign {
            0 => CharValue::Zero,
            1 => CharValue::ONE,
            -1 => CharValue::root(1, 2),
            _ => panic!("not a sign: {sign}"),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }

    pub fn conj(self) -> Self {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root { num, den } => CharValue::root(den - num, den),
        }
    }

    /// `+1`, `-1` or `0` when the value is real, otherwise `None`.
    pub fn as_sign(&self) -> Option<i8> {
        match *self {
            CharValue::Zero => Some(0),
            CharValue::Root { num: 0, .. } => Some(1),
            CharValue::Root { num: 1, den: 2 } => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root { num, den } => {
                // exact on the real axis so signs stay exact after conversion
                match (num, den) {
                    (0, _) => Complex64::new(1.0, 0.0),
                    (1, 2) => Complex64::new(-1.0, 0.0),
                    (1, 4) => Complex64::new(0.0, 1.0),
                    (3, 4) => Complex64::new(0.0, -1.0),
                    _ => Complex64::from_polar(1.0, TAU * num as f64 / den as f64),
                }
            }
        }
    }
}

impl Mul for CharValue {
    type Output = CharValue;

    fn mul(self, rhs: CharValue) -> CharValue {
        match (self, rhs) {
            (CharValue::Root { num: a, den: b }, CharValue::Root { num: c, den: d }) => {
                let den = b / gcd(b, d) * d;
                let num = (a as u128 * (den / b) as u128 + c as u128 * (den / d) as u128)
                    % den as u128;
                CharValue::root(num as u64, den)
            }
            _ => CharValue::Zero,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_and_products() {
        assert_eq!(CharValue::root(2, 4), CharValue::root(1, 2));
        assert_eq!(CharValue::root(7, 7), CharValue::ONE);
        assert_eq!(CharValue::root(1, 3) * CharValue::root(1, 6), CharValue::root(1, 2));
        assert_eq!(CharValue::root(1, 4) * CharValue::Zero, CharValue::Zero);
        assert_eq!(CharValue::root(1, 5).conj(), CharValue::root(4, 5));
        assert_eq!(CharValue::root(1, 5) * CharValue::root(1, 5).conj(), CharValue::ONE);
    }

    #[test]
    fn complex_conversion() {
        let z = CharValue::root(1, 3).to_complex();
        assert!((z.norm() - 1.0).abs() < 1e-15);
        assert!((z.arg() - TAU / 3.0).abs() < 1e-12);
        assert_eq!(CharValue::from_sign(-1).to_complex(), Complex64::new(-1.0, 0.0));
        assert_eq!(CharValue::from_sign(-1).as_sign(), Some(-1));
    }
}
