//! Exact scalars: arbitrary-precision rationals and prime-field residues.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible characteristic; keeps products inside `u128` comfortably.
pub const MAX_PRIME: u64 = u32::MAX as u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactField {
    Rational,
    Prime(u64),
}

impl ExactField {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > MAX_PRIME {
            return Err(Error::InvalidField(format!("{p} exceeds the supported range")));
        }
        Ok(ExactField::Prime(p))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExactField::Prime(_))
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            ExactField::Rational => None,
            ExactField::Prime(p) => Some(*p),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ExactField::Rational => 0,
            ExactField::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            ExactField::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            ExactField::Prime(p) => Scalar::Modular {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or_else(|| Error::Scalar {
            text: format!("{num}/{den}"),
            reason: "denominator vanishes in this field".into(),
        })?;
        Ok(&self.from_i64(num) * &inv)
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            ExactField::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            ExactField::Prime(p) => {
                let m = BigInt::from(p);
                let r = ((n % &m) + &m) % &m;
                Scalar::Modular {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// Parses `"a"` or `"a/b"`; prime-field inputs are reduced to `0..p`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        let bad = |reason: &str| Error::Scalar {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        match *self {
            ExactField::Rational => BigRational::from_str(t)
                .map(Scalar::Rational)
                .map_err(|_| bad("not a rational number")),
            ExactField::Prime(_) => {
                let (num, den) = match t.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (t, "1"),
                };
                let num = BigInt::from_str(num.trim()).map_err(|_| bad("not an integer"))?;
                let den = BigInt::from_str(den.trim()).map_err(|_| bad("not an integer"))?;
                let d = self.from_bigint(&den);
                let inv = d.inv().ok_or_else(|| bad("denominator vanishes in this field"))?;
                Ok(&self.from_bigint(&num) * &inv)
            }
        }
    }

    /// All elements in canonical order `0, 1, …, p−1`; `None` over ℚ.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            ExactField::Rational => None,
            ExactField::Prime(p) => Some((0..p).map(|value| Scalar::Modular { value, modulus: p }).collect()),
        }
    }
}

impl fmt::Display for ExactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactField::Rational => write!(f, "rational"),
            ExactField::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for ExactField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rational" || s == "Q" || s == "q" {
            return Ok(ExactField::Rational);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::InvalidField(format!("bad characteristic in {s:?}")))?;
            return ExactField::prime(p);
        }
        Err(Error::InvalidField(format!(
            "expected \"rational\" or \"fp:<p>\", got {s:?}"
        )))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of an [`ExactField`]. Mixing elements of different fields in
/// arithmetic is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> ExactField {
        match self {
            Scalar::Rational(_) => ExactField::Rational,
            Scalar::Modular { modulus, .. } => ExactField::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power allowing negative exponents; `None` for `0^(negative)`.
    pub fn powi(&self, e: i64) -> Option<Scalar> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|i| i.pow(e.unsigned_abs()))
        }
    }

    /// Reduces a rational modulo `p`; `None` when the denominator is divisible by `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                let f = ExactField::Prime(p);
                let den = f.from_bigint(r.denom());
                let inv = den.inv()?;
                Some(&f.from_bigint(r.numer()) * &inv)
            }
            Scalar::Modular { modulus, .. } if *modulus == p => Some(self.clone()),
            Scalar::Modular { .. } => None,
        }
    }

    /// Lifts a residue to ℚ using the representative in `(-p/2, p/2]`.
    pub fn lift_symmetric(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => self.clone(),
            Scalar::Modular { value, modulus } => {
                let v = *value as i64;
                let p = *modulus as i64;
                let s = if v > p / 2 { v - p } else { v };
                ExactField::Rational.from_i64(s)
            }
        }
    }

    /// Key for the deterministic "simplest first" order used by witness searches:
    /// over F_p the residue order `0 < 1 < … < p−1`; over ℚ zero first, then by
    /// height `|num| + den`, positives before negatives.
    pub fn order_key(&self) -> ScalarKey {
        match self {
            Scalar::Modular { value, .. } => ScalarKey::Modular(*value),
            Scalar::Rational(r) => {
                let height = r.numer().abs() + r.denom();
                ScalarKey::Rational {
                    nonzero: !r.is_zero(),
                    height,
                    negative: r.is_negative(),
                    value: r.clone(),
                }
            }
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(r) if r.is_integer() => r.to_integer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Modular { value, .. } => Some(*value as i64),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Modular { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ScalarKey {
    Modular(u64),
    Rational {
        nonzero: bool,
        height: BigInt,
        negative: bool,
        value: BigRational,
    },
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

#[inline]
fn same_modulus(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "arithmetic across different prime fields");
    a
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q }) => {
                let p = same_modulus(*p, *q);
                Scalar::Modular {
                    value: ((*a as u128 + *b as u128) % p as u128) as u64,
                    modulus: p,
                }
            }
            _ => panic!("arithmetic across rational and prime fields"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q }) => {
                let p = same_modulus(*p, *q);
                Scalar::Modular {
                    value: ((*a as u128 * *b as u128) % p as u128) as u64,
                    modulus: p,
                }
            }
            _ => panic!("arithmetic across rational and prime fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;

    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;

    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}
