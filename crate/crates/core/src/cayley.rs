//! The Cayley 4-form, its stabilizer algebra and the Spin(7) splitting of Λ⁴.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::endo::{self, Endo};
use crate::error::{Error, Result};
use crate::exterior::{KForm, MultiIndex, Vector, DIM};
use crate::linalg::{self, Matrix};
use crate::scalar::FieldScalar;

#[derive(Clone, Debug)]
pub struct CayleyStructure {
    pub omega: KForm,
    /// `α²/2` for `α = e^{12} + e^{34} + e^{56} + e^{78}`.
    pub alpha2: KForm,
    /// Real part of `(e^1+ie^2)∧(e^3+ie^4)∧(e^5+ie^6)∧(e^7+ie^8)`.
    pub re_beta: KForm,
}

/// A form with complex coefficients, kept as real and imaginary parts.
struct ComplexForm {
    re: KForm,
    im: KForm,
}

impl ComplexForm {
    fn wedge(&self, o: &ComplexForm) -> ComplexForm {
        ComplexForm {
            re: self.re.wedge(&o.re).sub(&self.im.wedge(&o.im)),
            im: self.re.wedge(&o.im).add(&self.im.wedge(&o.re)),
        }
    }
}

pub fn build_omega() -> CayleyStructure {
    let alpha = [[1, 2], [3, 4], [5, 6], [7, 8]]
        .iter()
        .fold(KForm::zero(2), |acc, ij| acc.add(&KForm::blade(ij)));
    let alpha2 = alpha.wedge(&alpha).scale(&FieldScalar::from_ratio(1, 2));
    let beta = [[1, 2], [3, 4], [5, 6], [7, 8]]
        .iter()
        .map(|&[r, i]| ComplexForm {
            re: KForm::blade(&[r]),
            im: KForm::blade(&[i]),
        })
        .reduce(|acc, f| acc.wedge(&f))
        .expect("four factors");
    let re_beta = beta.re;
    CayleyStructure {
        omega: alpha2.add(&re_beta),
        alpha2,
        re_beta,
    }
}

/// The Cayley form `Ω`, built once.
pub fn omega() -> &'static KForm {
    static OMEGA: OnceLock<KForm> = OnceLock::new();
    OMEGA.get_or_init(|| build_omega().omega)
}

/// Linear map `A ↦ ρ(A)a` on gl(8), columns indexed by the elementary
/// matrices in row-major order.
fn rho_action_matrix(a: &KForm) -> Matrix {
    let cols: Vec<Vec<FieldScalar>> = (0..DIM * DIM)
        .map(|k| {
            let img = Endo::elementary(k / DIM, k % DIM).rho(a);
            if img.is_zero() {
                KForm::zero(a.degree()).to_coords()
            } else {
                img.to_coords()
            }
        })
        .collect();
    Matrix::from_columns(crate::exterior::exterior_dim(a.degree()), &cols)
}

fn endo_from_flat(v: &[FieldScalar]) -> Endo {
    let rows: Vec<Vec<FieldScalar>> = v.chunks(DIM).map(<[FieldScalar]>::to_vec).collect();
    Endo::from_matrix(Matrix::from_rows(rows)).expect("8x8")
}

/// Basis of `{A ∈ gl(8) : ρ(A)Ω = 0}` (the algebra spin(7)).
pub fn stabilizer_algebra() -> Vec<Endo> {
    stabilizer_of(omega())
}

/// Basis of `{A ∈ gl(8) : ρ(A)a = 0}`.
pub fn stabilizer_of(a: &KForm) -> Vec<Endo> {
    rho_action_matrix(a)
        .nullspace()
        .iter()
        .map(|v| endo_from_flat(v))
        .collect()
}

/// Standard basis of sl(8): off-diagonal elementary matrices and `E_ii - E_{i+1,i+1}`.
pub fn sl8_basis() -> Vec<Endo> {
    let mut out = Vec::with_capacity(63);
    for r in 0..DIM {
        for c in 0..DIM {
            if r != c {
                out.push(Endo::elementary(r, c));
            }
        }
    }
    for i in 0..DIM - 1 {
        out.push(Endo::elementary(i, i).sub(&Endo::elementary(i + 1, i + 1)));
    }
    out
}

/// Basis `E_rc - E_cr` (r < c) of so(8).
pub fn so8_basis() -> Vec<Endo> {
    let mut out = Vec::with_capacity(28);
    for r in 0..DIM {
        for c in r + 1..DIM {
            out.push(Endo::elementary(r, c).sub(&Endo::elementary(c, r)));
        }
    }
    out
}

/// `dim span{ρ(A)Ω : A ∈ basis}`.
pub fn orbit_image_dim(basis: &[Endo]) -> usize {
    let vs: Vec<Vec<FieldScalar>> = basis.iter().map(|a| a.rho(omega()).to_coords()).collect();
    linalg::span_rank(&vs)
}

/// Projectors onto the four Spin(7)-irreducible summands of Λ⁴,
/// as 70x70 matrices in the lexicographic blade basis.
#[derive(Clone, Debug)]
pub struct DecompositionProjectors {
    pub p1: Matrix,
    pub p7: Matrix,
    pub p27: Matrix,
    pub p35: Matrix,
}

/// Which of the four components of a 4-form are nonzero, in the order
/// `(Λ⁴₁, Λ⁴₇, Λ⁴₂₇, Λ⁴₃₅)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectorSignature(pub [bool; 4]);

impl ProjectorSignature {
    /// `(0, *, 0, *)`: no singlet and no 27-dimensional part.
    pub fn in_7_plus_35(&self) -> bool {
        !self.0[0] && !self.0[2]
    }
}

impl DecompositionProjectors {
    pub fn build() -> Self {
        let om = omega().to_coords();
        let n = om.len();
        let fourteen = FieldScalar::from_int(14);
        let mut p1 = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if !om[i].is_zero() && !om[j].is_zero() {
                    p1.set(i, j, &(&om[i] * &om[j]) / &fourteen);
                }
            }
        }

        let star = endo::operator_matrix(4, 4, KForm::hodge_star);
        let half = FieldScalar::from_ratio(1, 2);
        let p35 = Matrix::identity(n).sub(&star).scale(&half);

        // Orthogonal projection onto ρ(so(8))Ω via normal equations on a
        // rational basis, so no square roots are needed.
        let span: Vec<Vec<FieldScalar>> = so8_basis()
            .iter()
            .map(|a| a.rho(omega()).to_coords())
            .collect();
        let basis = linalg::reduced_basis(&span);
        let v = Matrix::from_rows(basis);
        let gram = v.mul(&v.transpose());
        let gram_inv = gram
            .inverse()
            .expect("Gram matrix of a basis is invertible");
        let p7 = v.transpose().mul(&gram_inv).mul(&v);

        let p27 = Matrix::identity(n).sub(&p1).sub(&p7).sub(&p35);
        DecompositionProjectors { p1, p7, p27, p35 }
    }

    /// Shared instance.
    pub fn get() -> &'static Self {
        static P: OnceLock<DecompositionProjectors> = OnceLock::new();
        P.get_or_init(Self::build)
    }

    pub fn all(&self) -> [(&'static str, &Matrix); 4] {
        [
            ("p1", &self.p1),
            ("p7", &self.p7),
            ("p27", &self.p27),
            ("p35", &self.p35),
        ]
    }

    pub fn project(p: &Matrix, a: &KForm) -> KForm {
        assert_eq!(a.degree(), 4, "projectors act on 4-forms");
        KForm::from_coords(4, &p.apply(&a.to_coords()))
    }

    pub fn signature(&self, a: &KForm) -> ProjectorSignature {
        let coords = a.to_coords();
        ProjectorSignature(
            self.all()
                .map(|(_, p)| !p.apply(&coords).iter().all(Zero::is_zero)),
        )
    }
}

/// `(u ⌟ v ⌟ a)³ ∈ Λ⁶`; zero exactly when the pair contraction is degenerate.
pub fn pair_contraction_cube(u: &Vector, v: &Vector, a: &KForm) -> Result<KForm> {
    let eta = a.contract(v)?.contract(u)?;
    Ok(eta.wedge(&eta).wedge(&eta))
}

/// The rank-one nilpotent `w ⊗ v♭`, i.e. `ε ↦ ε(w) v♭`.
pub fn rank_one_endo(v: &Vector, w: &Vector) -> Result<Endo> {
    if !v.dot(w).is_zero() {
        return Err(Error::NotOrthogonal);
    }
    Ok(Endo::tensor(w, &v.flat()))
}

/// `v♭ ∧ (w ⌟ Ω)`.
pub fn rank_one_delta(v: &Vector, w: &Vector) -> KForm {
    v.flat()
        .to_form()
        .wedge(&omega().contract(w).expect("degree 4"))
}

/// `Ω + t · v♭ ∧ (w ⌟ Ω)` for orthogonal `v`, `w`.
pub fn perturb_rank_one(v: &Vector, w: &Vector, t: &FieldScalar) -> Result<KForm> {
    if !v.dot(w).is_zero() {
        return Err(Error::NotOrthogonal);
    }
    Ok(omega().add(&rank_one_delta(v, w).scale(t)))
}

/// `v♭ ∧ (w ⌟ Ω) - w♭ ∧ (v ⌟ Ω)`, the perturbation of a skew endomorphism.
pub fn skew_delta(v: &Vector, w: &Vector) -> KForm {
    rank_one_delta(v, w).sub(&rank_one_delta(w, v))
}

/// Coefficient of a sorted blade in `Ω`.
pub fn omega_coeff(indices: &[usize]) -> FieldScalar {
    MultiIndex::from_sorted(indices)
        .map(|m| omega().coeff(m))
        .unwrap_or_else(|_| FieldScalar::zero())
}

/// Whether every bracket of `basis` stays in its span.
pub fn is_lie_subalgebra(basis: &[Endo]) -> bool {
    let flat: Vec<Vec<FieldScalar>> = basis.iter().map(Endo::flatten).collect();
    let reduced = linalg::reduced_basis(&flat);
    basis.iter().enumerate().all(|(i, a)| {
        basis[i + 1..]
            .iter()
            .all(|b| linalg::in_span(&reduced, &a.commutator(b).flatten()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn omega_has_fourteen_unit_terms() {
        let c = build_omega();
        assert_eq!(c.omega.len(), 14);
        assert_eq!(c.alpha2.len(), 6);
        assert_eq!(c.re_beta.len(), 8);
        assert!(c
            .omega
            .terms()
            .all(|(_, x)| *x == FieldScalar::one() || *x == -FieldScalar::one()));
        assert_eq!(omega_coeff(&[1, 2, 3, 4]), FieldScalar::one());
        assert_eq!(omega_coeff(&[1, 3, 5, 7]), FieldScalar::one());
    }

    #[test]
    fn real_part_of_beta_matches_expansion() {
        let expected = KForm::from_terms(
            4,
            [
                (vec![1, 3, 5, 7], 1),
                (vec![1, 3, 6, 8], -1),
                (vec![1, 4, 5, 8], -1),
                (vec![1, 4, 6, 7], -1),
                (vec![2, 3, 5, 8], -1),
                (vec![2, 3, 6, 7], -1),
                (vec![2, 4, 5, 7], -1),
                (vec![2, 4, 6, 8], 1),
            ]
            .map(|(i, c)| (i, FieldScalar::from_int(c))),
        )
        .unwrap();
        assert_eq!(build_omega().re_beta, expected);
    }

    #[test]
    fn omega_is_self_dual_with_norm_fourteen() {
        assert_eq!(omega().hodge_star(), *omega());
        assert_eq!(omega().inner(omega()), FieldScalar::from_int(14));
    }

    #[test]
    fn contraction_by_e7_e8() {
        let eta = omega()
            .contract(&Vector::basis(8))
            .unwrap()
            .contract(&Vector::basis(7))
            .unwrap();
        let expected = KForm::blade(&[1, 2])
            .add(&KForm::blade(&[3, 4]))
            .add(&KForm::blade(&[5, 6]))
            .neg();
        assert_eq!(eta, expected);
        let cube = pair_contraction_cube(&Vector::basis(7), &Vector::basis(8), omega()).unwrap();
        assert_eq!(
            cube,
            KForm::blade(&[1, 2, 3, 4, 5, 6]).scale(&FieldScalar::from_int(-6))
        );
    }

    #[test]
    fn equal_vectors_give_zero_cube() {
        let u = Vector::from_ints([1, 2, 0, -1, 3, 0, 0, 1]);
        assert!(pair_contraction_cube(&u, &u, omega()).unwrap().is_zero());
    }

    #[test]
    fn perturbation_requires_orthogonality() {
        let v = Vector::basis(1);
        let w = Vector::from_ints([1, 1, 0, 0, 0, 0, 0, 0]);
        assert!(matches!(
            perturb_rank_one(&v, &w, &FieldScalar::one()),
            Err(Error::NotOrthogonal)
        ));
        assert_eq!(
            perturb_rank_one(&Vector::basis(7), &Vector::basis(8), &FieldScalar::zero()).unwrap(),
            *omega()
        );
    }

    #[test]
    fn stabilizer_is_21_dimensional_and_skew() {
        let stab = stabilizer_algebra();
        assert_eq!(stab.len(), 21);
        for a in &stab {
            assert!(a.is_skew());
            assert!(a.rho(omega()).is_zero());
        }
    }

    #[test]
    fn stabilizer_closes_under_brackets() {
        assert!(is_lie_subalgebra(&stabilizer_algebra()));
        assert!(!is_lie_subalgebra(&[
            Endo::elementary(0, 1),
            Endo::elementary(1, 0)
        ]));
    }

    #[test]
    fn orbit_tangent_dimensions() {
        assert_eq!(orbit_image_dim(&sl8_basis()), 42);
        assert_eq!(orbit_image_dim(&so8_basis()), 7);
    }

    #[test]
    fn projectors_split_four_forms() {
        let p = DecompositionProjectors::get();
        let n = crate::exterior::exterior_dim(4);
        let mut sum = Matrix::zeros(n, n);
        for ((_, a), rank) in p.all().iter().zip([1, 7, 27, 35]) {
            assert_eq!(a.rank(), rank);
            assert_eq!(&a.mul(a), *a);
            sum = sum.add(a);
        }
        assert_eq!(sum, Matrix::identity(n));
        assert!(p.p7.mul(&p.p27).is_zero());
        assert_eq!(DecompositionProjectors::project(&p.p1, omega()), *omega());
    }

    #[test]
    fn rank_one_perturbation_is_pullback() {
        let (v, w) = (Vector::basis(1), Vector::basis(3));
        let a = rank_one_endo(&v, &w).unwrap();
        let t = FieldScalar::from_ratio(-3, 2);
        let pulled = a.scale(&t).exp_nilpotent().unwrap().pullback(omega());
        assert_eq!(pulled, perturb_rank_one(&v, &w, &t).unwrap());
        let sig = DecompositionProjectors::get().signature(&rank_one_delta(&v, &w));
        assert!(sig.in_7_plus_35());
        let skew = DecompositionProjectors::get().signature(&skew_delta(&v, &w));
        assert_eq!(skew.0, [false, true, false, false]);
    }
}
