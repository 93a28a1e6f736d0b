//! Endomorphisms of (R^8)* and their induced actions on forms.
//!
//! An [`Endo`] acts on covectors: `A e^i = Σ_j M[j][i] e^j`, i.e. column `i`
//! of the matrix is the image of `e^i`. The induced action on vectors, where
//! one is needed, is the contragredient `-Mᵀ` and is only ever obtained
//! through [`Endo::contragredient`].

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{Covector, KForm, MultiIndex, Vector, DIM};
use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::scalar::FieldScalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Endo(Matrix);

impl Endo {
    pub fn zero() -> Self {
        Endo(Matrix::zeros(DIM, DIM))
    }

    pub fn identity() -> Self {
        Endo(Matrix::identity(DIM))
    }

    pub fn from_matrix(m: Matrix) -> Result<Self> {
        if m.rows() != DIM || m.cols() != DIM {
            return Err(Error::Dimension(format!(
                "{}x{} is not 8x8",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Endo(m))
    }

    pub fn from_ints(rows: [[i64; DIM]; DIM]) -> Self {
        Endo(Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| FieldScalar::from_int(x)).collect())
                .collect(),
        ))
    }

    /// Elementary matrix with a single one at `(row, col)` (0-based),
    /// i.e. `e^{col+1} ↦ e^{row+1}`.
    pub fn elementary(row: usize, col: usize) -> Self {
        let mut m = Matrix::zeros(DIM, DIM);
        m.set(row, col, FieldScalar::one());
        Endo(m)
    }

    /// `v ⊗ α`, the map `ε ↦ ε(v) α`.
    pub fn tensor(v: &Vector, alpha: &Covector) -> Self {
        let mut m = Matrix::zeros(DIM, DIM);
        for j in 0..DIM {
            for i in 0..DIM {
                let x = &alpha.0[j] * &v.0[i];
                if !x.is_zero() {
                    m.set(j, i, x);
                }
            }
        }
        Endo(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> &FieldScalar {
        self.0.get(row, col)
    }

    pub fn apply(&self, eps: &Covector) -> Covector {
        Covector(self.0.apply(&eps.0).try_into().expect("8 components"))
    }

    /// Image of the basis covector `e^i` (1-based).
    pub fn image_of_basis(&self, i: usize) -> Covector {
        Covector(self.0.column(i - 1).try_into().expect("8 components"))
    }

    /// The induced infinitesimal action on vectors, `-Mᵀ`.
    pub fn contragredient(&self) -> Endo {
        Endo(self.0.transpose().scale(&-FieldScalar::one()))
    }

    /// Applies the matrix to the components of a vector as they stand.
    pub fn apply_to_vector(&self, v: &Vector) -> Vector {
        Vector(self.0.apply(&v.0).try_into().expect("8 components"))
    }

    pub fn add(&self, o: &Endo) -> Endo {
        Endo(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Endo) -> Endo {
        Endo(self.0.sub(&o.0))
    }

    pub fn scale(&self, s: &FieldScalar) -> Endo {
        Endo(self.0.scale(s))
    }

    /// Composition `self ∘ o`.
    pub fn compose(&self, o: &Endo) -> Endo {
        Endo(self.0.mul(&o.0))
    }

    pub fn commutator(&self, o: &Endo) -> Endo {
        self.compose(o).sub(&o.compose(self))
    }

    pub fn pow(&self, n: u32) -> Endo {
        (0..n).fold(Endo::identity(), |acc, _| acc.compose(self))
    }

    pub fn transpose(&self) -> Endo {
        Endo(self.0.transpose())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_skew(&self) -> bool {
        self.0.add(&self.0.transpose()).is_zero()
    }

    pub fn trace(&self) -> FieldScalar {
        (0..DIM).map(|i| self.0.get(i, i).clone()).sum()
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(DIM as u32).is_zero()
    }

    pub fn inverse(&self) -> Option<Endo> {
        self.0.inverse().map(Endo)
    }

    /// Entries flattened row-major, for span computations in gl(8).
    pub fn flatten(&self) -> Vec<FieldScalar> {
        (0..DIM).flat_map(|i| self.0.row(i).to_vec()).collect()
    }

    /// Derivation extension `ρ(A)` to forms of any degree.
    pub fn rho(&self, a: &KForm) -> KForm {
        let mut out = KForm::zero(a.degree());
        for (m, c) in a.terms() {
            let idx: Vec<usize> = m.indices().collect();
            for (pos, &i) in idx.iter().enumerate() {
                for j in 1..=DIM {
                    let mji = self.0.get(j - 1, i - 1);
                    if mji.is_zero() {
                        continue;
                    }
                    let mut replaced = idx.clone();
                    replaced[pos] = j;
                    if let Some((mm, s)) = MultiIndex::from_unsorted(&replaced).expect("in range") {
                        let x = c * mji;
                        out.add_term(mm, if s < 0 { -x } else { x });
                    }
                }
            }
        }
        out
    }

    /// `ρ(A)` applied `n` times.
    pub fn rho_pow(&self, a: &KForm, n: usize) -> KForm {
        (0..n).fold(a.clone(), |acc, _| self.rho(&acc))
    }

    /// The induced map `Λ^k L` on forms: `ε₁∧…∧ε_k ↦ Lε₁∧…∧Lε_k`.
    pub fn pullback(&self, a: &KForm) -> KForm {
        let images: Vec<KForm> = (1..=DIM)
            .map(|i| self.image_of_basis(i).to_form())
            .collect();
        let mut out = KForm::zero(a.degree());
        for (m, c) in a.terms() {
            let prod = m
                .indices()
                .fold(KForm::scalar(c.clone()), |acc, i| acc.wedge(&images[i - 1]));
            out = out.add(&prod);
        }
        out
    }

    /// `exp(A) = Σ A^k / k!` for nilpotent `A`.
    pub fn exp_nilpotent(&self) -> Result<Endo> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let mut term = Endo::identity();
        let mut sum = Endo::identity();
        for k in 1..DIM as i64 {
            term = term.compose(self).scale(&FieldScalar::from_ratio(1, k));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        Ok(sum)
    }

    /// Characteristic polynomial `det(x·I - A)` by Faddeev–LeVerrier.
    pub fn char_poly(&self) -> Poly {
        let n = DIM;
        let mut coeffs = vec![FieldScalar::zero(); n + 1];
        coeffs[n] = FieldScalar::one();
        let mut m = Endo::zero();
        for k in 1..=n {
            m = self
                .compose(&m)
                .add(&Endo::identity().scale(&coeffs[n - k + 1]));
            let t = self.compose(&m).trace();
            coeffs[n - k] = -(&t / &FieldScalar::from_int(k as i64));
        }
        Poly::new(coeffs)
    }

    /// Evaluates a polynomial at this endomorphism (Horner).
    pub fn eval_poly(&self, p: &Poly) -> Endo {
        p.coeffs().iter().rev().fold(Endo::zero(), |acc, c| {
            acc.compose(self).add(&Endo::identity().scale(c))
        })
    }

    /// Jordan–Chevalley decomposition `A = S + N` over Q.
    ///
    /// Newton iteration `S ← S - p(S) p'(S)^{-1}` on the squarefree part `p`
    /// of the characteristic polynomial, starting from `S = A`.
    pub fn jordan_chevalley_split(&self) -> Result<(Endo, Endo)> {
        if !self.flatten().iter().all(FieldScalar::is_rational) {
            return Err(Error::IrrationalSplit);
        }
        let p = self.char_poly().squarefree_part();
        let dp = p.derivative();
        let mut s = self.clone();
        // quadratic convergence: nilpotency index <= 8 needs at most 4 steps
        for _ in 0..8 {
            let ps = s.eval_poly(&p);
            if ps.is_zero() {
                let n = self.sub(&s);
                return Ok((s, n));
            }
            let inv = s
                .eval_poly(&dp)
                .inverse()
                .expect("p'(S) is invertible for squarefree p");
            s = s.sub(&ps.compose(&inv));
        }
        unreachable!("Newton iteration for the semisimple part did not terminate")
    }
}

/// Matrix of a linear map `Λ^in_degree → Λ^out_degree` in the lexicographic
/// blade bases, given its action on basis blades.
pub fn operator_matrix<F>(in_degree: usize, out_degree: usize, op: F) -> Matrix
where
    F: Fn(&KForm) -> KForm,
{
    let cols: Vec<Vec<FieldScalar>> = MultiIndex::all_of_len(in_degree)
        .into_iter()
        .map(|m| {
            let mut b = KForm::zero(in_degree);
            b.add_term(m, FieldScalar::one());
            let img = op(&b);
            if img.is_zero() {
                KForm::zero(out_degree).to_coords()
            } else {
                img.to_coords()
            }
        })
        .collect();
    let len = crate::exterior::exterior_dim(out_degree);
    Matrix::from_columns(len, &cols)
}

/// Exact kernel basis of a linear operator on `Λ^degree`, in reduced echelon
/// form over the blade order.
pub fn nullspace<F>(degree: usize, out_degree: usize, op: F) -> Vec<KForm>
where
    F: Fn(&KForm) -> KForm,
{
    operator_matrix(degree, out_degree, op)
        .nullspace()
        .into_iter()
        .map(|v| KForm::from_coords(degree, &v))
        .collect()
}

/// Rank of a list of endomorphisms viewed as vectors in gl(8).
pub fn span_rank(endos: &[Endo]) -> usize {
    let v: Vec<Vec<FieldScalar>> = endos.iter().map(Endo::flatten).collect();
    linalg::span_rank(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_one() -> Endo {
        // e_8 ⊗ e^7: e^8 ↦ e^7, nilpotent since e^7(e_8) = 0
        Endo::tensor(&Vector::basis(8), &Covector::basis(7))
    }

    #[test]
    fn tensor_matches_claimed_action() {
        let a = rank_one();
        assert_eq!(a.apply(&Covector::basis(8)), Covector::basis(7));
        assert!(a.apply(&Covector::basis(7)).0.iter().all(Zero::is_zero));
        assert_eq!(a.rank(), 1);
        assert!(a.is_nilpotent());
    }

    #[test]
    fn rho_of_identity_scales_by_degree() {
        let f = KForm::blade(&[1, 3, 5, 7])
            .add(&KForm::blade(&[2, 4, 6, 8]).scale(&FieldScalar::from_int(-3)));
        assert_eq!(Endo::identity().rho(&f), f.scale(&FieldScalar::from_int(4)));
    }

    #[test]
    fn exp_of_square_zero() {
        let a = rank_one();
        assert_eq!(a.exp_nilpotent().unwrap(), Endo::identity().add(&a));
        assert_eq!(Endo::zero().exp_nilpotent().unwrap(), Endo::identity());
        assert!(matches!(
            Endo::identity().exp_nilpotent(),
            Err(Error::NotNilpotent)
        ));
    }

    #[test]
    fn pullback_homogeneity() {
        let f = KForm::blade(&[1, 2, 3, 4]);
        let two = Endo::identity().scale(&FieldScalar::from_int(2));
        assert_eq!(two.pullback(&f), f.scale(&FieldScalar::from_int(16)));
        assert_eq!(Endo::identity().pullback(&f), f);
    }

    #[test]
    fn char_poly_of_diagonal() {
        let mut rows = [[0i64; 8]; 8];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = i as i64 + 1;
        }
        let p = Endo::from_ints(rows).char_poly();
        for r in 1..=8 {
            assert!(p.eval(&FieldScalar::from_int(r)).is_zero());
        }
        assert_eq!(p.degree(), Some(8));
    }

    #[test]
    fn split_of_diagonal_and_strictly_upper() {
        let mut diag = [[0i64; 8]; 8];
        let mut upper = [[0i64; 8]; 8];
        for i in 0..8 {
            diag[i][i] = i as i64 + 1;
            for j in i + 1..8 {
                upper[i][j] = (i + 2 * j) as i64 - 4;
            }
        }
        let d = Endo::from_ints(diag);
        let (s, n) = d.jordan_chevalley_split().unwrap();
        assert_eq!(s, d);
        assert!(n.is_zero());
        let u = Endo::from_ints(upper);
        let (s, n) = u.jordan_chevalley_split().unwrap();
        assert!(s.is_zero());
        assert_eq!(n, u);
    }

    #[test]
    fn split_rejects_irrational_entries() {
        let a = Endo::identity().scale(&FieldScalar::sqrt2());
        assert!(matches!(
            a.jordan_chevalley_split(),
            Err(Error::IrrationalSplit)
        ));
    }

    #[test]
    fn split_of_jordan_block_with_eigenvalue() {
        // 2·I + shift on a 3-block, 5 on the rest; plus a 2x2 rotation block
        let mut m = [[0i64; 8]; 8];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 5;
        }
        m[0][0] = 2;
        m[1][1] = 2;
        m[2][2] = 2;
        m[1][0] = 1;
        m[2][1] = 1;
        m[6][6] = 0;
        m[7][7] = 0;
        m[6][7] = -1;
        m[7][6] = 1;
        m[3][4] = 7;
        m[4][4] = 5;
        let a = Endo::from_ints(m);
        let (s, n) = a.jordan_chevalley_split().unwrap();
        assert_eq!(s.add(&n), a);
        assert!(s.commutator(&n).is_zero());
        assert!(n.is_nilpotent());
        assert_eq!(n.rank(), 3);
        // S semisimple: its minimal polynomial divides the squarefree char poly part
        let p = a.char_poly().squarefree_part();
        assert!(s.eval_poly(&p).is_zero());
    }

    #[test]
    fn zero_and_identity_nullspaces_on_four_forms() {
        assert_eq!(nullspace(4, 4, |_| KForm::zero(4)).len(), 70);
        assert!(nullspace(4, 4, |f| f.clone()).is_empty());
    }
}
