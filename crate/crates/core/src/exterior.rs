//! Sparse exterior forms on R^8 with exact coefficients.
//!
//! Indices are 1-based, matching the usual `e^1, …, e^8` notation.
//! Contraction always acts on the first slot.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::FieldScalar;

pub const DIM: usize = 8;

/// Strictly increasing subset of `{1, …, 8}`, stored as a bitmask.
///
/// Ordering is lexicographic on the increasing index sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex(u8);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn from_mask(mask: u8) -> Self {
        MultiIndex(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    /// Sorts `indices` and returns the canonical multi-index together with
    /// the permutation sign, or `None` when an index repeats (the blade is zero).
    pub fn from_unsorted(indices: &[usize]) -> Result<Option<(MultiIndex, i8)>> {
        let mut mask = 0u8;
        let mut sign = 1i8;
        for &i in indices {
            if !(1..=DIM).contains(&i) {
                return Err(Error::InvalidIndices(format!("index {i} outside 1..=8")));
            }
            let bit = 1u8 << (i - 1);
            if mask & bit != 0 {
                return Ok(None);
            }
            // moving i left past every larger index already present
            if ((mask as u16) >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Ok(Some((MultiIndex(mask), sign)))
    }

    /// Builds from an already increasing list; rejects anything else.
    pub fn from_sorted(indices: &[usize]) -> Result<MultiIndex> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndices(format!(
                "{indices:?} not strictly increasing"
            )));
        }
        Ok(Self::from_unsorted(indices)?
            .expect("strictly increasing has no repeats")
            .0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=DIM).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (1..=DIM).filter(move |&i| self.0 & (1 << (i - 1)) != 0)
    }

    pub fn complement(self) -> MultiIndex {
        MultiIndex(!self.0)
    }

    /// Sign of concatenating `self` then `other` and sorting; `None` if they overlap.
    pub fn merge_sign(self, other: MultiIndex) -> Option<i8> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            swaps += ((self.0 as u16) >> (j + 1)).count_ones();
            b &= b - 1;
        }
        Some(if swaps % 2 == 0 { 1 } else { -1 })
    }

    /// All multi-indices of cardinality `k`, in lexicographic order.
    pub fn all_of_len(k: usize) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (0u16..256)
            .map(|m| MultiIndex(m as u8))
            .filter(|m| m.len() == k)
            .collect();
        out.sort();
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.0, other.0);
        if a == b {
            return Ordering::Equal;
        }
        // The lowest differing index decides, unless the other set stops
        // before it (then that set is a proper prefix).
        let diff = a ^ b;
        let d = diff & diff.wrapping_neg();
        let above = !(d | (d - 1));
        let (has, other_mask) = if a & d != 0 {
            (Ordering::Less, b)
        } else {
            (Ordering::Greater, a)
        };
        if other_mask & above == 0 {
            has.reverse()
        } else {
            has
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^")?;
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Binomial coefficient `C(8, k)`, i.e. `dim Λ^k`.
pub fn exterior_dim(k: usize) -> usize {
    if k > DIM {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (DIM - i) / (i + 1))
}

/// Homogeneous exterior form of a single degree.
///
/// Zero coefficients are never stored. Only zero forms can have degree > 8.
#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    degree: usize,
    terms: BTreeMap<MultiIndex, FieldScalar>,
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        KForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(x: FieldScalar) -> Self {
        let mut f = Self::zero(0);
        f.add_term(MultiIndex::EMPTY, x);
        f
    }

    /// The basis blade `e^{i1…ik}` (indices may be unsorted; sign follows).
    pub fn blade(indices: &[usize]) -> Self {
        let mut f = Self::zero(indices.len());
        if let Some((m, s)) = MultiIndex::from_unsorted(indices).expect("valid indices") {
            f.add_term(m, FieldScalar::from_int(s as i64));
        }
        f
    }

    /// Builds a form from `(indices, coefficient)` pairs with arbitrary index order.
    pub fn from_terms<I>(degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, FieldScalar)>,
    {
        let mut f = Self::zero(degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::InvalidIndices(format!(
                    "{idx:?} has length {}, expected {degree}",
                    idx.len()
                )));
            }
            if let Some((m, s)) = MultiIndex::from_unsorted(&idx)? {
                f.add_term(m, if s < 0 { -c } else { c });
            }
        }
        Ok(f)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &FieldScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: MultiIndex) -> FieldScalar {
        self.terms
            .get(&m)
            .cloned()
            .unwrap_or_else(FieldScalar::zero)
    }

    /// Coefficient of an increasing index list.
    pub fn coeff_of(&self, indices: &[usize]) -> FieldScalar {
        match MultiIndex::from_sorted(indices) {
            Ok(m) => self.coeff(m),
            Err(_) => FieldScalar::zero(),
        }
    }

    pub(crate) fn add_term(&mut self, m: MultiIndex, c: FieldScalar) {
        debug_assert_eq!(m.len(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_degree(&self, other: &KForm) {
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "degree mismatch: {} vs {}",
            self.degree,
            other.degree
        );
    }

    pub fn add(&self, other: &KForm) -> KForm {
        self.check_same_degree(other);
        let mut out = if self.is_zero() {
            KForm::zero(other.degree)
        } else {
            self.clone()
        };
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        self.scale(&-FieldScalar::one())
    }

    pub fn scale(&self, s: &FieldScalar) -> KForm {
        if s.is_zero() {
            return KForm::zero(self.degree);
        }
        KForm {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    /// Exterior product. Overflowing degree gives the zero form.
    pub fn wedge(&self, other: &KForm) -> KForm {
        let mut out = KForm::zero(self.degree + other.degree);
        if out.degree > DIM {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(s) = ma.merge_sign(*mb) {
                    let c = ca * cb;
                    out.add_term(MultiIndex(ma.0 | mb.0), if s < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// Interior product `v ⌟ self`, contracting the first slot.
    pub fn contract(&self, v: &Vector) -> Result<KForm> {
        if self.degree == 0 {
            return Err(Error::ContractScalar);
        }
        let mut out = KForm::zero(self.degree - 1);
        for (m, c) in &self.terms {
            for (pos, i) in m.indices().enumerate() {
                let vi = &v.0[i - 1];
                if vi.is_zero() {
                    continue;
                }
                let x = c * vi;
                let rest = MultiIndex(m.0 & !(1 << (i - 1)));
                out.add_term(rest, if pos % 2 == 1 { -x } else { x });
            }
        }
        Ok(out)
    }

    /// Hodge star for the standard metric and orientation `e^{12345678}`.
    pub fn hodge_star(&self) -> KForm {
        let mut out = KForm::zero(DIM.saturating_sub(self.degree));
        for (m, c) in &self.terms {
            let comp = m.complement();
            let s = m.merge_sign(comp).expect("disjoint");
            out.add_term(comp, if s < 0 { -c } else { c.clone() });
        }
        out
    }

    /// Standard inner product, for which the blades are orthonormal.
    pub fn inner(&self, other: &KForm) -> FieldScalar {
        self.terms
            .iter()
            .filter_map(|(m, c)| other.terms.get(m).map(|d| c * d))
            .sum()
    }

    /// Coordinates in the lexicographic blade basis of `Λ^degree`.
    pub fn to_coords(&self) -> Vec<FieldScalar> {
        MultiIndex::all_of_len(self.degree)
            .into_iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn from_coords(degree: usize, coords: &[FieldScalar]) -> KForm {
        let blades = MultiIndex::all_of_len(degree);
        assert_eq!(blades.len(), coords.len(), "coordinate length");
        let mut f = KForm::zero(degree);
        for (m, c) in blades.into_iter().zip(coords) {
            f.add_term(m, c.clone());
        }
        f
    }

    /// `self ∧ self ∧ … ∧ self` (`n` factors).
    pub fn power(&self, n: usize) -> KForm {
        let mut acc = KForm::scalar(FieldScalar::one());
        for _ in 0..n {
            acc = acc.wedge(self);
        }
        acc
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c}){m:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm[{}]({self})", self.degree)
    }
}

/// Vector in R^8, components along `e_1, …, e_8`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vector(pub [FieldScalar; DIM]);

/// Covector in (R^8)*, components along `e^1, …, e^8`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Covector(pub [FieldScalar; DIM]);

impl Vector {
    pub fn zero() -> Self {
        Vector(std::array::from_fn(|_| FieldScalar::zero()))
    }

    /// `e_i`, 1-based.
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i - 1] = FieldScalar::one();
        v
    }

    pub fn from_ints(xs: [i64; DIM]) -> Self {
        Vector(xs.map(FieldScalar::from_int))
    }

    pub fn from_slice(xs: &[FieldScalar]) -> Result<Self> {
        let arr: [FieldScalar; DIM] = xs
            .to_vec()
            .try_into()
            .map_err(|_| Error::Dimension(format!("vector needs {DIM} components")))?;
        Ok(Vector(arr))
    }

    /// Index lowering by the standard metric.
    pub fn flat(&self) -> Covector {
        Covector(self.0.clone())
    }

    pub fn dot(&self, o: &Vector) -> FieldScalar {
        self.0.iter().zip(&o.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: &FieldScalar) -> Vector {
        Vector(std::array::from_fn(|i| &self.0[i] * s))
    }

    pub fn add(&self, o: &Vector) -> Vector {
        Vector(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Covector {
    pub fn zero() -> Self {
        Covector(std::array::from_fn(|_| FieldScalar::zero()))
    }

    /// `e^i`, 1-based.
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i - 1] = FieldScalar::one();
        v
    }

    pub fn from_ints(xs: [i64; DIM]) -> Self {
        Covector(xs.map(FieldScalar::from_int))
    }

    /// Index raising by the standard metric.
    pub fn sharp(&self) -> Vector {
        Vector(self.0.clone())
    }

    pub fn eval(&self, v: &Vector) -> FieldScalar {
        self.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    pub fn to_form(&self) -> KForm {
        let mut f = KForm::zero(1);
        for (i, c) in self.0.iter().enumerate() {
            f.add_term(MultiIndex(1 << i), c.clone());
        }
        f
    }

    pub fn from_form(f: &KForm) -> Result<Self> {
        if f.degree() != 1 {
            return Err(Error::Dimension(format!(
                "degree {} is not a 1-form",
                f.degree()
            )));
        }
        let mut c = Self::zero();
        for (m, x) in f.terms() {
            c.0[m.0.trailing_zeros() as usize] = x.clone();
        }
        Ok(c)
    }
}

/// `e^{12345678}`.
pub fn volume_form() -> KForm {
    KForm::blade(&[1, 2, 3, 4, 5, 6, 7, 8])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_of_basis_covectors() {
        assert_eq!(
            KForm::blade(&[1]).wedge(&KForm::blade(&[2])),
            KForm::blade(&[1, 2])
        );
        assert!(KForm::blade(&[1, 2])
            .wedge(&KForm::blade(&[1, 2]))
            .is_zero());
        assert_eq!(
            KForm::blade(&[2]).wedge(&KForm::blade(&[1])),
            KForm::blade(&[1, 2]).neg()
        );
    }

    #[test]
    fn half_square_of_kahler_form() {
        let alpha = [[1, 2], [3, 4], [5, 6], [7, 8]]
            .iter()
            .fold(KForm::zero(2), |acc, ij| acc.add(&KForm::blade(ij)));
        let half = alpha.wedge(&alpha).scale(&FieldScalar::from_ratio(1, 2));
        let expected = [
            [1, 2, 3, 4],
            [1, 2, 5, 6],
            [1, 2, 7, 8],
            [3, 4, 5, 6],
            [3, 4, 7, 8],
            [5, 6, 7, 8],
        ]
        .iter()
        .fold(KForm::zero(4), |acc, i| acc.add(&KForm::blade(i)));
        assert_eq!(half, expected);
    }

    #[test]
    fn contraction_signs() {
        let f = KForm::blade(&[1, 2]);
        assert_eq!(f.contract(&Vector::basis(1)).unwrap(), KForm::blade(&[2]));
        assert_eq!(
            f.contract(&Vector::basis(2)).unwrap(),
            KForm::blade(&[1]).neg()
        );
        assert!(matches!(
            KForm::scalar(FieldScalar::one()).contract(&Vector::basis(1)),
            Err(Error::ContractScalar)
        ));
    }

    #[test]
    fn overflow_degree_is_zero() {
        let f = KForm::blade(&[1, 2, 3, 4, 5]);
        let g = KForm::blade(&[6, 7, 8, 1]);
        assert!(f.wedge(&g).is_zero());
    }

    #[test]
    fn star_of_basis_blades() {
        assert_eq!(
            KForm::blade(&[1, 2, 3, 4]).hodge_star(),
            KForm::blade(&[5, 6, 7, 8])
        );
        assert_eq!(
            KForm::blade(&[5, 6, 7, 8]).hodge_star(),
            KForm::blade(&[1, 2, 3, 4])
        );
        assert_eq!(
            KForm::scalar(FieldScalar::one()).hodge_star(),
            volume_form()
        );
    }

    #[test]
    fn unsorted_construction_tracks_parity() {
        let (m, s) = MultiIndex::from_unsorted(&[3, 1, 2]).unwrap().unwrap();
        assert_eq!(m, MultiIndex::from_sorted(&[1, 2, 3]).unwrap());
        assert_eq!(s, 1);
        let (_, s) = MultiIndex::from_unsorted(&[2, 1, 3]).unwrap().unwrap();
        assert_eq!(s, -1);
        assert!(MultiIndex::from_unsorted(&[1, 1]).unwrap().is_none());
        assert!(MultiIndex::from_unsorted(&[9]).is_err());
        assert!(MultiIndex::from_sorted(&[2, 1]).is_err());
    }

    #[test]
    fn ordering_is_lexicographic_on_sequences() {
        let all: Vec<MultiIndex> = (0u16..256).map(|m| MultiIndex(m as u8)).collect();
        for a in &all {
            for b in &all {
                assert_eq!(a.cmp(b), a.indices().cmp(b.indices()), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn blade_counts() {
        for k in 0..=8 {
            assert_eq!(MultiIndex::all_of_len(k).len(), exterior_dim(k));
        }
        assert_eq!(exterior_dim(4), 70);
        let l = MultiIndex::all_of_len(2);
        assert_eq!(l[0], MultiIndex::from_sorted(&[1, 2]).unwrap());
        assert_eq!(l[1], MultiIndex::from_sorted(&[1, 3]).unwrap());
        assert_eq!(l[27], MultiIndex::from_sorted(&[7, 8]).unwrap());
    }

    #[test]
    fn musical_isomorphisms_are_inverse() {
        let v = Vector::from_ints([1, -2, 0, 3, 4, 0, 0, 9]);
        assert_eq!(v.flat().sharp(), v);
        assert_eq!(v.flat().eval(&v), v.dot(&v));
    }
}
