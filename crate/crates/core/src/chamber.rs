//! Coefficient ring on the chamber: `ℚ(√2,√3)[s, w, w⁻¹] / (w⁵ − 1 − s²)`.
//!
//! Here `s` is the radial coordinate and `w = (1 + s²)^{1/5}`. Elements are
//! stored as `w^{-k} · Σ p_j(s) w^j` with `0 ≤ j ≤ 4` and `k` minimal, which
//! makes the representation canonical.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::FieldScalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChamberScalar {
    k: u32,
    /// `(s exponent, w exponent in 0..5) → coefficient`.
    terms: BTreeMap<(u32, u8), FieldScalar>,
}

impl ChamberScalar {
    pub fn zero() -> Self {
        ChamberScalar {
            k: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(FieldScalar::one())
    }

    pub fn constant(c: FieldScalar) -> Self {
        Self::from_terms([(0, 0, c)])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(FieldScalar::from_int(n))
    }

    /// `c · s^a · w^b`.
    pub fn monomial(c: FieldScalar, s_exp: u32, w_exp: i32) -> Self {
        Self::from_terms([(s_exp, w_exp, c)])
    }

    pub fn s() -> Self {
        Self::monomial(FieldScalar::one(), 1, 0)
    }

    pub fn w() -> Self {
        Self::monomial(FieldScalar::one(), 0, 1)
    }

    /// A polynomial in `t = s²`, coefficients ascending.
    pub fn from_t_poly(coeffs: &[FieldScalar]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (2 * i as u32, 0, c.clone())),
        )
    }

    /// Builds the canonical form of `Σ c · s^a · w^b`.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, i32, FieldScalar)>,
    {
        let terms: Vec<(u32, i32, FieldScalar)> =
            terms.into_iter().filter(|t| !t.2.is_zero()).collect();
        let k = terms.iter().map(|t| (-t.1).max(0)).max().unwrap_or(0) as u32;
        let mut acc: BTreeMap<(u32, u8), FieldScalar> = BTreeMap::new();
        for (a, b, c) in terms {
            let e = (b + k as i32) as u32;
            let (q, r) = (e / 5, (e % 5) as u8);
            // w^e = w^r (1 + s²)^q
            let mut binom = FieldScalar::one();
            for i in 0..=q {
                let key = (a + 2 * i, r);
                let x = &c * &binom;
                add_into(&mut acc, key, x);
                binom = &(&binom * &FieldScalar::from_int((q - i) as i64))
                    / &FieldScalar::from_int(i as i64 + 1);
            }
        }
        let mut out = ChamberScalar { k, terms: acc };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.terms.is_empty() {
            self.k = 0;
            return;
        }
        let one_plus_s2 = Poly::new(vec![
            FieldScalar::one(),
            FieldScalar::zero(),
            FieldScalar::one(),
        ]);
        while self.k > 0 {
            let p0 = self.w_coefficient(0);
            let (q, r) = p0.div_rem(&one_plus_s2);
            if !r.is_zero() {
                break;
            }
            // w^{-k} (p0 + p1 w + … + p4 w⁴) = w^{-(k-1)} (p1 + … + p4 w³ + q w⁴)
            let mut next = BTreeMap::new();
            for (&(a, j), c) in &self.terms {
                if j > 0 {
                    next.insert((a, j - 1), c.clone());
                }
            }
            for (a, c) in q.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    next.insert((a as u32, 4), c.clone());
                }
            }
            self.terms = next;
            self.k -= 1;
        }
    }

    fn w_coefficient(&self, j: u8) -> Poly {
        let deg = self.terms.keys().filter(|t| t.1 == j).map(|t| t.0).max();
        let mut coeffs = vec![FieldScalar::zero(); deg.map_or(0, |d| d as usize + 1)];
        for (&(a, jj), c) in &self.terms {
            if jj == j {
                coeffs[a as usize] = c.clone();
            }
        }
        Poly::new(coeffs)
    }

    /// Terms as `(s_exp, w_exp, coeff)` with `w_exp` in `-k..=4-k`, sorted.
    pub fn terms(&self) -> Vec<(u32, i32, FieldScalar)> {
        self.terms
            .iter()
            .map(|(&(a, j), c)| (a, j as i32 - self.k as i32, c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<&FieldScalar> {
        match (self.k, self.terms.len()) {
            (0, 0) => None,
            (0, 1) => self.terms.get(&(0, 0)),
            _ => None,
        }
    }

    pub fn add(&self, o: &ChamberScalar) -> ChamberScalar {
        Self::from_terms(self.terms().into_iter().chain(o.terms()))
    }

    pub fn sub(&self, o: &ChamberScalar) -> ChamberScalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ChamberScalar {
        self.scale(&-FieldScalar::one())
    }

    pub fn scale(&self, c: &FieldScalar) -> ChamberScalar {
        if c.is_zero() {
            return Self::zero();
        }
        ChamberScalar {
            k: self.k,
            terms: self.terms.iter().map(|(key, x)| (*key, x * c)).collect(),
        }
    }

    pub fn mul(&self, o: &ChamberScalar) -> ChamberScalar {
        let (a, b) = (self.terms(), o.terms());
        let mut prod = Vec::with_capacity(a.len() * b.len());
        for (sa, wa, ca) in &a {
            for (sb, wb, cb) in &b {
                prod.push((sa + sb, wa + wb, ca * cb));
            }
        }
        Self::from_terms(prod)
    }

    pub fn pow(&self, n: u32) -> ChamberScalar {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `∂/∂s`, using `∂w/∂s = (2/5) s w⁻⁴`.
    pub fn ds(&self) -> ChamberScalar {
        let two_fifths = FieldScalar::from_ratio(2, 5);
        let mut out = Vec::new();
        for (a, b, c) in self.terms() {
            if a > 0 {
                out.push((a - 1, b, &c * &FieldScalar::from_int(a as i64)));
            }
            if b != 0 {
                out.push((
                    a + 1,
                    b - 5,
                    &(&c * &two_fifths) * &FieldScalar::from_int(b as i64),
                ));
            }
        }
        Self::from_terms(out)
    }

    /// Invariant under `s ↦ -s` (`w` depends on `s²` only).
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|&(a, _)| a % 2 == 0)
    }

    /// Value at a point `(s₀, w₀)` of the curve `w⁵ = 1 + s²`.
    pub fn eval(&self, s0: &FieldScalar, w0: &FieldScalar) -> Result<FieldScalar> {
        let lhs = w0.pow(5);
        let rhs = &FieldScalar::one() + &(s0 * s0);
        if lhs != rhs {
            return Err(Error::Dimension(format!(
                "({s0}, {w0}) does not satisfy w⁵ = 1 + s²"
            )));
        }
        let w_inv = w0.inv().expect("w⁵ = 1 + s² > 0");
        let mut acc = FieldScalar::zero();
        for (a, b, c) in self.terms() {
            let wp = if b >= 0 {
                w0.pow(b as u32)
            } else {
                w_inv.pow((-b) as u32)
            };
            acc += &(&(&c * &s0.pow(a)) * &wp);
        }
        Ok(acc)
    }
}

fn add_into(acc: &mut BTreeMap<(u32, u8), FieldScalar>, key: (u32, u8), x: FieldScalar) {
    if x.is_zero() {
        return;
    }
    let e = acc.entry(key).or_insert_with(FieldScalar::zero);
    *e += &x;
    if e.is_zero() {
        acc.remove(&key);
    }
}

impl From<i64> for ChamberScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<FieldScalar> for ChamberScalar {
    fn from(c: FieldScalar) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for ChamberScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .iter()
            .map(|(a, b, c)| {
                let mut s = format!("({c})");
                if *a > 0 {
                    s.push_str(&format!("·s^{a}"));
                }
                if *b != 0 {
                    s.push_str(&format!("·w^{b}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ChamberScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> FieldScalar {
        FieldScalar::from_int(n)
    }

    #[test]
    fn relation_reduces() {
        let w5 = ChamberScalar::w().pow(5);
        let expected = ChamberScalar::from_terms([(0, 0, c(1)), (2, 0, c(1))]);
        assert_eq!(w5, expected);
    }

    #[test]
    fn inverse_powers_are_canonical() {
        // (1 + s²) w⁻⁵ = 1
        let x = ChamberScalar::from_terms([(0, -5, c(1)), (2, -5, c(1))]);
        assert_eq!(x, ChamberScalar::one());
        let w = ChamberScalar::w();
        let winv = ChamberScalar::monomial(c(1), 0, -1);
        assert_eq!(w.mul(&winv), ChamberScalar::one());
        assert_eq!(winv.terms(), vec![(0, -1, c(1))]);
    }

    #[test]
    fn derivative_of_w() {
        let dw = ChamberScalar::w().ds();
        assert_eq!(
            dw,
            ChamberScalar::monomial(FieldScalar::from_ratio(2, 5), 1, -4)
        );
        // d/ds (w⁵) = 2s
        assert_eq!(
            ChamberScalar::w().pow(5).ds(),
            ChamberScalar::monomial(c(2), 1, 0)
        );
    }

    #[test]
    fn leibniz() {
        let f = ChamberScalar::from_terms([(1, -2, c(3)), (0, 3, c(-1)), (4, 1, c(2))]);
        let g = ChamberScalar::from_terms([(2, -7, c(5)), (1, 2, c(1))]);
        assert_eq!(f.mul(&g).ds(), f.ds().mul(&g).add(&f.mul(&g.ds())));
    }

    #[test]
    fn evaluation_and_parity() {
        let s0 = &FieldScalar::sqrt2() * &c(11);
        let f = ChamberScalar::from_terms([(3, -4, c(-16))]);
        let v = f.eval(&s0, &c(3)).unwrap();
        assert_eq!(v, &(&s0.pow(3) * &c(-16)) / &c(81));
        assert!(f.eval(&s0, &c(2)).is_err());
        assert!(!f.is_even());
        assert!(ChamberScalar::from_t_poly(&[c(1), c(0), c(3)]).is_even());
    }
}
