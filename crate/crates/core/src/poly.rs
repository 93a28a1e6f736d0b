//! Dense univariate polynomials over [`FieldScalar`], ascending coefficients.

use num_traits::{One, Zero};

use crate::scalar::FieldScalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    coeffs: Vec<FieldScalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldScalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::new(vec![FieldScalar::one()])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Poly::new(xs.iter().map(|&x| FieldScalar::from_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldScalar> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = FieldScalar::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-FieldScalar::one()))
    }

    pub fn scale(&self, s: &FieldScalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &FieldScalar::from_int(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FieldScalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() * &lead_inv;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &(&q * c);
                }
                quot[k] = q;
            }
            rem.pop();
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors: `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &FieldScalar) -> FieldScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldScalar::zero(), |acc, c| &(&acc * x) + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let p = Poly::from_ints(&[1, 0, -3, 2, 5]);
        let d = Poly::from_ints(&[2, 1, 1]);
        let (q, r) = p.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), p);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn squarefree_part_drops_repeats() {
        // (x-1)^3 (x+2)^2 -> (x-1)(x+2)
        let a = Poly::from_ints(&[-1, 1]);
        let b = Poly::from_ints(&[2, 1]);
        let p = a.mul(&a).mul(&a).mul(&b).mul(&b);
        assert_eq!(p.squarefree_part(), a.mul(&b));
    }

    #[test]
    fn derivative_and_eval() {
        let p = Poly::from_ints(&[1, 2, 3]);
        assert_eq!(p.derivative(), Poly::from_ints(&[2, 6]));
        assert_eq!(p.eval(&FieldScalar::from_int(2)), FieldScalar::from_int(17));
    }
}
