//! Exact scalars in the biquadratic field Q(√2, √3).
//!
//! An element is stored as four rationals `(a, b, c, d)` standing for
//! `a + b√2 + c√3 + d√6`. The normalisations of the sp(2) basis
//! (`1/√12`, `1/√24`) live in this field, so every computation in the crate
//! stays exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldScalar {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

impl FieldScalar {
    pub fn from_parts(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        FieldScalar { a, b, c, d }
    }

    pub fn rational(a: BigRational) -> Self {
        FieldScalar {
            a,
            ..Default::default()
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics when `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn sqrt2() -> Self {
        FieldScalar {
            b: BigRational::one(),
            ..Default::default()
        }
    }

    pub fn sqrt3() -> Self {
        FieldScalar {
            c: BigRational::one(),
            ..Default::default()
        }
    }

    pub fn sqrt6() -> Self {
        FieldScalar {
            d: BigRational::one(),
            ..Default::default()
        }
    }

    /// Coordinates with respect to `(1, √2, √3, √6)`.
    pub fn parts(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    /// Galois conjugate `√2 ↦ -√2`.
    fn conj2(&self) -> Self {
        FieldScalar {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: -&self.d,
        }
    }

    /// Galois conjugate `√3 ↦ -√3`.
    fn conj3(&self) -> Self {
        FieldScalar {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::rational(r.recip()));
        }
        // x * σ2(x) lies in Q(√3); multiply once more by its √3-conjugate.
        let x2 = self.conj2();
        let y = self * &x2;
        let y3 = y.conj3();
        let n = &y * &y3;
        let n = n.as_rational().expect("norm lies in Q").clone();
        Some(&(&x2 * &y3) * &Self::rational(n.recip()))
    }

    /// Exact sign of the real number this element denotes.
    pub fn signum(&self) -> Ordering {
        // self = p + q√2 with p = a + c√3, q = b + d√3
        let p = (&self.a, &self.c);
        let q = (&self.b, &self.d);
        let sp = sign_sqrt3(p.0, p.1);
        let sq = sign_sqrt3(q.0, q.1);
        if sq == Ordering::Equal || sp == sq {
            return if sp == Ordering::Equal { sq } else { sp };
        }
        if sp == Ordering::Equal {
            return sq;
        }
        // opposite signs: compare p^2 with 2 q^2 inside Q(√3)
        let p2a = p.0 * p.0 + BigRational::from_integer(3.into()) * p.1 * p.1;
        let p2c = BigRational::from_integer(2.into()) * p.0 * p.1;
        let q2a = q.0 * q.0 + BigRational::from_integer(3.into()) * q.1 * q.1;
        let q2c = BigRational::from_integer(2.into()) * q.0 * q.1;
        let two = BigRational::from_integer(2.into());
        let diff = sign_sqrt3(&(p2a - &two * q2a), &(p2c - two * q2c));
        match (sp, diff) {
            (_, Ordering::Equal) => Ordering::Equal,
            (Ordering::Greater, d) => d,
            (_, d) => d.reverse(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Nonnegative integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Floating-point approximation, for display only.
    pub fn approx(&self) -> f64 {
        let f = |r: &BigRational| {
            let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
            n / d
        };
        f(&self.a) + f(&self.b) * 2f64.sqrt() + f(&self.c) * 3f64.sqrt() + f(&self.d) * 6f64.sqrt()
    }
}

fn sign_rat(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Sign of `p + q√3`.
fn sign_sqrt3(p: &BigRational, q: &BigRational) -> Ordering {
    let sp = sign_rat(p);
    let sq = sign_rat(q);
    if sq == Ordering::Equal || sp == sq {
        return if sp == Ordering::Equal { sq } else { sp };
    }
    if sp == Ordering::Equal {
        return sq;
    }
    let three = BigRational::from_integer(3.into());
    let diff = sign_rat(&(p * p - three * q * q));
    if sp == Ordering::Greater {
        diff
    } else {
        diff.reverse()
    }
}

/// Formats a rational as `"p/q"` with `q >= 1` in lowest terms.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl Zero for FieldScalar {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
}

impl One for FieldScalar {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

impl From<i64> for FieldScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for FieldScalar {
    fn from(r: BigRational) -> Self {
        Self::rational(r)
    }
}

impl<'a> Add<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn add(self, o: &FieldScalar) -> FieldScalar {
        FieldScalar {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }
}

impl<'a> Sub<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn sub(self, o: &FieldScalar) -> FieldScalar {
        FieldScalar {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            c: &self.c - &o.c,
            d: &self.d - &o.d,
        }
    }
}

impl<'a> Mul<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn mul(self, o: &FieldScalar) -> FieldScalar {
        if o.is_rational() {
            if o.a.is_zero() {
                return FieldScalar::zero();
            }
            if self.is_rational() {
                return FieldScalar::rational(&self.a * &o.a);
            }
            return FieldScalar {
                a: &self.a * &o.a,
                b: &self.b * &o.a,
                c: &self.c * &o.a,
                d: &self.d * &o.a,
            };
        }
        if self.is_rational() {
            return o * self;
        }
        let two = BigRational::from_integer(2.into());
        let three = BigRational::from_integer(3.into());
        let six = BigRational::from_integer(6.into());
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        FieldScalar {
            a: a1 * a2 + &two * b1 * b2 + &three * c1 * c2 + six * d1 * d2,
            b: a1 * b2 + b1 * a2 + three * (c1 * d2 + d1 * c2),
            c: a1 * c2 + c1 * a2 + two * (b1 * d2 + d1 * b2),
            d: a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        }
    }
}

impl<'a> Div<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn div(self, o: &FieldScalar) -> FieldScalar {
        if let (Some(x), Some(y)) = (self.as_rational(), o.as_rational()) {
            assert!(!y.is_zero(), "division by zero");
            return FieldScalar::rational(x / y);
        }
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: FieldScalar) -> FieldScalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: &FieldScalar) -> FieldScalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<FieldScalar> for &'a FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: FieldScalar) -> FieldScalar {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

impl AddAssign<&FieldScalar> for FieldScalar {
    fn add_assign(&mut self, o: &FieldScalar) {
        self.a += &o.a;
        self.b += &o.b;
        self.c += &o.c;
        self.d += &o.d;
    }
}

impl AddAssign for FieldScalar {
    fn add_assign(&mut self, o: FieldScalar) {
        *self += &o;
    }
}

impl SubAssign<&FieldScalar> for FieldScalar {
    fn sub_assign(&mut self, o: &FieldScalar) {
        self.a -= &o.a;
        self.b -= &o.b;
        self.c -= &o.c;
        self.d -= &o.d;
    }
}

impl SubAssign for FieldScalar {
    fn sub_assign(&mut self, o: FieldScalar) {
        *self -= &o;
    }
}

impl MulAssign<&FieldScalar> for FieldScalar {
    fn mul_assign(&mut self, o: &FieldScalar) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for FieldScalar {
    fn sum<I: Iterator<Item = FieldScalar>>(iter: I) -> Self {
        iter.fold(FieldScalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, unit) in [
            (&self.a, ""),
            (&self.b, "√2"),
            (&self.c, "√3"),
            (&self.d, "√6"),
        ] {
            if r.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if r.is_negative() { '-' } else { '+' })?;
            } else if r.is_negative() {
                write!(f, "-")?;
            }
            let m = r.abs();
            if unit.is_empty() || !m.is_one() {
                write!(f, "{m}")?;
            }
            write!(f, "{unit}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldScalar({self})")
    }
}

/// Rational values only, as `"p/q"` or `"p"`.
impl FromStr for FieldScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Self::rational)
    }
}
