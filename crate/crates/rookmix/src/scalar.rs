//! Run-level numeric mode and the tagged scalar type used everywhere.
//!
//! Exact mode is the oracle: every identity in this crate holds with zero
//! error there. Float mode is the scalable path for large dimensions. A
//! computation never mixes the two; doing so is a bug and panics.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Numeric mode selected once per run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Arbitrary-precision rational arithmetic.
    Exact,
    /// Hardware `f64` arithmetic.
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode {other:?}; expected \"exact\" or \"float\"")),
        }
    }
}

/// A number tagged with its numeric mode.
///
/// Arithmetic between scalars of different modes panics rather than coercing:
/// exact results must never be contaminated by floats silently.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::one()),
            Mode::Float => Scalar::Float(1.0),
        }
    }

    pub fn from_int(v: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(v))),
            Mode::Float => Scalar::Float(v as f64),
        }
    }

    /// `num / den` in the requested mode. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64, mode: Mode) -> Self {
        assert!(den != 0, "zero denominator");
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den))),
            Mode::Float => Scalar::Float(num as f64 / den as f64),
        }
    }

    pub fn from_biguint(v: &BigUint, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(v.clone()))),
            Mode::Float => Scalar::Float(biguint_to_f64(v)),
        }
    }

    pub fn from_bigint(v: &BigInt, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(v.clone())),
            Mode::Float => Scalar::Float(bigint_to_f64(v)),
        }
    }

    /// `num / den` with arbitrary-precision operands.
    pub fn from_big_ratio(num: BigInt, den: BigInt, mode: Mode) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::new(num, den)),
            Mode::Float => Scalar::Float(ratio_to_f64(&BigRational::new(num, den))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(v) => *v < 0.0,
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(v) => Scalar::Float(v.abs()),
        }
    }

    /// Closest `f64`, exact in float mode, a careful approximation in exact
    /// mode (robust to numerators/denominators far beyond `f64` range).
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_to_f64(r),
            Scalar::Float(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    fn same_mode(&self, other: &Scalar, op: &str) -> Mode {
        let (a, b) = (self.mode(), other.mode());
        assert!(a == b, "numeric mode mismatch in {op}: {a} vs {b}");
        a
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.same_mode(other, "==");
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            _ => unreachable!(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.same_mode(other, "cmp");
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.partial_cmp(b),
            _ => unreachable!(),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.same_mode(rhs, stringify!($op));
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a $op b),
                    _ => unreachable!(),
                }
            }
        }
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::ops::AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl std::ops::SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl std::ops::MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Ratio renders "p/q", or just "p" for integers.
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&r.to_string()),
            Scalar::Float(v) => serializer.serialize_f64(*v),
        }
    }
}

fn biguint_to_f64(v: &BigUint) -> f64 {
    bigint_to_f64(&BigInt::from(v.clone()))
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    // Scale down by powers of two when the magnitude is outside f64 range.
    let bits = v.magnitude().bits();
    if bits <= 63 {
        return v.to_i64().expect("fits in i64") as f64;
    }
    let shift = bits - 63;
    let top = (v >> shift).to_i64().expect("shifted value fits") as f64;
    top * pow2(shift as i64)
}

/// `BigRational -> f64` that stays accurate when both sides overflow `f64`.
fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (num_top, num_exp) = top_bits(r.numer());
    let (den_top, den_exp) = top_bits(r.denom());
    (num_top / den_top) * pow2(num_exp - den_exp)
}

fn top_bits(v: &BigInt) -> (f64, i64) {
    let bits = v.magnitude().bits();
    if bits <= 63 {
        (v.to_i64().expect("fits in i64") as f64, 0)
    } else {
        let shift = bits - 63;
        ((v >> shift).to_i64().expect("shifted value fits") as f64, shift as i64)
    }
}

fn pow2(exp: i64) -> f64 {
    // Split so that intermediate powers stay representable for |exp| < 2044.
    let half = exp / 2;
    let rest = exp - half;
    2f64.powi(half as i32) * 2f64.powi(rest as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::pow::Pow;

    fn exact(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d, Mode::Exact)
    }

    #[test]
    fn exact_arithmetic_is_exact() {
        let third = exact(1, 3);
        let sum = &third + &third + &third;
        assert_eq!(sum, Scalar::one(Mode::Exact));
    }

    #[test]
    fn display_renders_fractions_and_floats() {
        assert_eq!(exact(7, 36).to_string(), "7/36");
        assert_eq!(exact(4, 2).to_string(), "2");
        assert_eq!(Scalar::Float(0.5).to_string(), "0.5");
    }

    #[test]
    #[should_panic(expected = "mode mismatch")]
    fn mixing_modes_panics() {
        let _ = exact(1, 2) + Scalar::Float(0.5);
    }

    #[test]
    fn huge_ratio_to_f64() {
        // 3^700 / 3^701 = 1/3, far outside f64 range on both sides.
        let p = BigInt::from(3u32).pow(700u32);
        let q = BigInt::from(3u32).pow(701u32);
        let r = BigRational::new(p, q);
        assert!((ratio_to_f64(&r) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tiny_and_large_magnitudes() {
        let p = BigInt::from(1u32);
        let q = BigInt::from(3u32).pow(700u32);
        let tiny = ratio_to_f64(&BigRational::new(p.clone(), q.clone()));
        assert!(tiny == 0.0 || tiny < 1e-300);
        let huge = ratio_to_f64(&BigRational::new(q, p));
        assert!(huge.is_infinite() || huge > 1e300);
    }

    #[test]
    fn biguint_conversion_matches_small_values() {
        let v = BigUint::from(123456789u64);
        assert_eq!(biguint_to_f64(&v), 123456789.0);
    }
}
