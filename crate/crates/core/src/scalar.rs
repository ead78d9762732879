//! Exact field elements: arbitrary-precision rationals and prime-field residues.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::EngineError;

/// The field a computation lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// The rational numbers.
    Q,
    /// The prime field with `p` elements.
    Fp(u64),
}

impl Field {
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) => *p,
        }
    }

    pub fn check_prime(&self) -> Result<(), EngineError> {
        match self {
            Field::Q => Ok(()),
            Field::Fp(p) => {
                if is_prime(*p) {
                    Ok(())
                } else {
                    Err(EngineError::NotPrime(*p))
                }
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "Q" {
            return Ok(Field::Q);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| EngineError::Parse(format!("bad field spec: {s}")))?;
            let field = Field::Fp(p);
            field.check_prime()?;
            return Ok(field);
        }
        Err(EngineError::Parse(format!("bad field spec: {s}")))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Arithmetic across different fields panics:
/// mixing characteristics is a programming error, never a data condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { val: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn zero(field: Field) -> Self {
        match field {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { val: 0, p },
        }
    }

    pub fn one(field: Field) -> Self {
        match field {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { val: 1 % p, p },
        }
    }

    pub fn from_int(field: Field, n: i64) -> Self {
        match field {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { val: r, p }
            }
        }
    }

    /// `num/den` in the given field; errors when `den` vanishes there.
    pub fn from_ratio(field: Field, num: i64, den: i64) -> Result<Self, EngineError> {
        let d = Scalar::from_int(field, den);
        let inv = d.inv().ok_or(EngineError::DivisionByZero)?;
        Ok(Scalar::from_int(field, num).mul(&inv))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { val, p } => *val == 1 % *p,
        }
    }

    fn same_field(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across different fields"
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.same_field(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, .. }) => Scalar::Fp {
                val: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { val, p } => Scalar::Fp {
                val: if *val == 0 { 0 } else { p - val },
                p: *p,
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.same_field(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, .. }) => Scalar::Fp {
                val: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Q(a) => Some(Scalar::Q(a.recip())),
            Scalar::Fp { val, p } => Some(Scalar::Fp {
                val: mod_inverse(*val, *p),
                p: *p,
            }),
        }
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, mut e: i64) -> Scalar {
        let mut base = if e < 0 {
            e = -e;
            self.inv().expect("pow of zero with negative exponent")
        } else {
            self.clone()
        };
        let mut acc = Scalar::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime and a != 0 mod p
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "inverse of non-unit mod {p}");
    old_s.rem_euclid(p as i128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { val, p } => write!(f, "{val} mod {p}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EngineError::Parse(format!("bad scalar: {s}"));
        let s = s.trim();
        if let Some((k, p)) = s.split_once(" mod ") {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            Field::Fp(p).check_prime()?;
            let k: i64 = k.trim().parse().map_err(|_| bad())?;
            return Ok(Scalar::from_int(Field::Fp(p), k));
        }
        if let Some((n, d)) = s.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(EngineError::DivisionByZero);
            }
            return Ok(Scalar::Q(BigRational::new(n, d)));
        }
        let n = BigInt::from_str(s).map_err(|_| bad())?;
        Ok(Scalar::Q(BigRational::from_integer(n)))
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Root-of-unity order of `r` up to `bound`, or `None` if r^l != 1 for all l <= bound.
pub fn unity_order(r: &Scalar, bound: usize) -> Option<usize> {
    let one = Scalar::one(r.field());
    let mut acc = r.clone();
    for l in 1..=bound {
        if acc == one {
            return Some(l);
        }
        acc = acc.mul(r);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form() {
        let a: Scalar = "2/4".parse().unwrap();
        let b: Scalar = "1/2".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2");
        let c: Scalar = "-3/-6".parse().unwrap();
        assert_eq!(c, b);
    }

    #[test]
    fn rational_inverse_law() {
        for (n, d) in [(1, 2), (-7, 3), (22, 7)] {
            let a = Scalar::from_ratio(Field::Q, n, d).unwrap();
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn serialization_round_trip() {
        for s in ["5", "-3/7", "0"] {
            let a: Scalar = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
            let b: Scalar = a.to_string().parse().unwrap();
            assert_eq!(a, b);
        }
        let a = Scalar::from_int(Field::Fp(7), 10);
        assert_eq!(a.to_string(), "3 mod 7");
        let b: Scalar = a.to_string().parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Fp(13);
        let a = Scalar::from_int(f, 5);
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
        assert_eq!(Scalar::from_int(f, -1), Scalar::from_int(f, 12));
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert!("Fp:12".parse::<Field>().is_err());
        assert!("Fp:13".parse::<Field>().is_ok());
    }

    #[test]
    #[should_panic(expected = "different fields")]
    fn mixed_characteristic_panics() {
        let a = Scalar::from_int(Field::Q, 1);
        let b = Scalar::from_int(Field::Fp(5), 1);
        let _ = a.add(&b);
    }

    #[test]
    fn unity_order_detection() {
        let r = Scalar::from_int(Field::Q, 2);
        assert_eq!(unity_order(&r, 20), None);
        let w = Scalar::from_int(Field::Fp(7), 2); // 2^3 = 8 = 1 mod 7
        assert_eq!(unity_order(&w, 20), Some(3));
    }
}
