use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// A point of ℝ/ℤ stored as a 128-bit fraction of a turn; arithmetic wraps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(pub u128);

impl Phase {
    pub const ZERO: Phase = Phase(0);

    pub fn from_turns(x: f64) -> Self {
        let f = x - x.floor();
        Phase((f * TWO_POW_128) as u128)
    }

    /// Representative in `[0, 1)`.
    pub fn turns(self) -> f64 {
        self.0 as f64 / TWO_POW_128
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn signed_turns(self) -> f64 {
        self.0 as i128 as f64 / TWO_POW_128
    }

    /// `min(|θ|, 1 - |θ|)` for the difference of two phases.
    pub fn dist(self, other: Phase) -> f64 {
        (self - other).signed_turns().abs()
    }

    pub fn mul_int(self, k: i128) -> Self {
        Phase(self.0.wrapping_mul(k as u128))
    }

    /// Multiplication by an integer already reduced mod 2^128.
    pub fn mul_wrapped(self, k: u128) -> Self {
        Phase(self.0.wrapping_mul(k))
    }

    /// `exp(2πiθ)`.
    pub fn e(self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.signed_turns())
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        Phase(self.0.wrapping_add(o.0))
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, o: Phase) {
        self.0 = self.0.wrapping_add(o.0);
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, o: Phase) -> Phase {
        Phase(self.0.wrapping_sub(o.0))
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase(self.0.wrapping_neg())
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.turns())
    }
}

/// `C(u, k) mod 2^128` for any integer `u`.
pub fn binom_wrapped(u: i128, k: usize) -> u128 {
    let mut num: i128 = 1;
    let mut exact = true;
    for j in 0..k as i128 {
        match num.checked_mul(u - j) {
            Some(v) => num = v,
            None => {
                exact = false;
                break;
            }
        }
    }
    if exact {
        let mut f: i128 = 1;
        for j in 2..=k as i128 {
            f *= j;
        }
        return (num / f) as u128;
    }
    let ub = BigInt::from(u);
    let mut n = BigInt::one();
    for j in 0..k {
        n *= &ub - BigInt::from(j);
    }
    let v = n / crate::polycore::factorial(k);
    let m = BigInt::one() << 128;
    v.mod_floor(&m).to_u128().expect("reduced below 2^128")
}
