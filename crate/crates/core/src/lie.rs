//! `sp(2)` presented by quaternionic 2×2 matrices, with the ten-element
//! basis `A₁..A₆, X₁..X₄` and its structure constants.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::FieldScalar;

pub const LIE_DIM: usize = 10;

pub const GENERATOR_NAMES: [&str; LIE_DIM] =
    ["A1", "A2", "A3", "A4", "A5", "A6", "X1", "X2", "X3", "X4"];

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Quaternion {
    pub r: FieldScalar,
    pub i: FieldScalar,
    pub j: FieldScalar,
    pub k: FieldScalar,
}

impl Quaternion {
    pub fn new(r: FieldScalar, i: FieldScalar, j: FieldScalar, k: FieldScalar) -> Self {
        Quaternion { r, i, j, k }
    }

    pub fn from_ints(r: i64, i: i64, j: i64, k: i64) -> Self {
        Quaternion::new(r.into(), i.into(), j.into(), k.into())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.r.clone(), -&self.i, -&self.j, -&self.k)
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        Quaternion::new(&self.r * c, &self.i * c, &self.j * c, &self.k * c)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.i.is_zero() && self.j.is_zero() && self.k.is_zero()
    }

    pub fn components(&self) -> [&FieldScalar; 4] {
        [&self.r, &self.i, &self.j, &self.k]
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(
            &self.r + &o.r,
            &self.i + &o.i,
            &self.j + &o.j,
            &self.k + &o.k,
        )
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &Quaternion) -> Quaternion {
        self + &(-o)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-&self.r, -&self.i, -&self.j, -&self.k)
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        let (a, b) = (self, o);
        Quaternion::new(
            &(&(&a.r * &b.r) - &(&a.i * &b.i)) - &(&(&a.j * &b.j) + &(&a.k * &b.k)),
            &(&(&a.r * &b.i) + &(&a.i * &b.r)) + &(&(&a.j * &b.k) - &(&a.k * &b.j)),
            &(&(&a.r * &b.j) - &(&a.i * &b.k)) + &(&(&a.j * &b.r) + &(&a.k * &b.i)),
            &(&(&a.r * &b.k) + &(&a.i * &b.j)) - &(&(&a.j * &b.i) - &(&a.k * &b.r)),
        )
    }
}

/// 2×2 quaternionic matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QuatMatrix(pub [[Quaternion; 2]; 2]);

impl QuatMatrix {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_entries(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        QuatMatrix([[a, b], [c, d]])
    }

    pub fn mul(&self, o: &QuatMatrix) -> QuatMatrix {
        let m = |i: usize, j: usize| &(&self.0[i][0] * &o.0[0][j]) + &(&self.0[i][1] * &o.0[1][j]);
        QuatMatrix::from_entries(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    pub fn add(&self, o: &QuatMatrix) -> QuatMatrix {
        let m = |i: usize, j: usize| &self.0[i][j] + &o.0[i][j];
        QuatMatrix::from_entries(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    pub fn sub(&self, o: &QuatMatrix) -> QuatMatrix {
        self.add(&o.scale(&-FieldScalar::one()))
    }

    pub fn scale(&self, c: &FieldScalar) -> QuatMatrix {
        let m = |i: usize, j: usize| self.0[i][j].scale(c);
        QuatMatrix::from_entries(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    pub fn bracket(&self, o: &QuatMatrix) -> QuatMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QuatMatrix {
        let m = |i: usize, j: usize| self.0[j][i].conj();
        QuatMatrix::from_entries(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    /// Membership in `sp(2)`: `M* = -M`.
    pub fn in_sp2(&self) -> bool {
        self.adjoint().add(self) == QuatMatrix::zero()
    }

    /// `Re tr(M)`.
    pub fn real_trace(&self) -> FieldScalar {
        &self.0[0][0].r + &self.0[1][1].r
    }
}

fn quat_unit(n: usize) -> Quaternion {
    let mut q = Quaternion::zero();
    match n {
        0 => q.r = FieldScalar::one(),
        1 => q.i = FieldScalar::one(),
        2 => q.j = FieldScalar::one(),
        _ => q.k = FieldScalar::one(),
    }
    q
}

/// Scale of the basis matrices.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Normalization {
    /// `A_n = (1/√12)·unit`, `X_n = (1/√24)·(off-diagonal)`: orthonormal for
    /// the negative Killing form.
    Killing,
    /// `A_n = unit`, `X_n = ½·(off-diagonal)`: `iA⁴ + jA⁵ + kA⁶` is the
    /// lower-right entry of the Maurer–Cartan form and the Bryant–Salamon
    /// form with `f = 4w⁻²`, `g = 5w³` is closed.
    Connection,
}

impl Normalization {
    /// Scale factors of the `A` and `X` matrices.
    pub fn scales(self) -> (FieldScalar, FieldScalar) {
        match self {
            Normalization::Killing => (
                &FieldScalar::sqrt3() / &FieldScalar::from_int(6),
                &FieldScalar::sqrt6() / &FieldScalar::from_int(12),
            ),
            Normalization::Connection => (FieldScalar::one(), FieldScalar::from_ratio(1, 2)),
        }
    }
}

/// The ten basis matrices.
pub fn basis_matrices(norm: Normalization) -> Vec<QuatMatrix> {
    let (a, x) = norm.scales();
    let z = Quaternion::zero;
    let mut out = Vec::with_capacity(LIE_DIM);
    for n in 1..=3 {
        out.push(QuatMatrix::from_entries(
            quat_unit(n).scale(&a),
            z(),
            z(),
            z(),
        ));
    }
    for n in 1..=3 {
        out.push(QuatMatrix::from_entries(
            z(),
            z(),
            z(),
            quat_unit(n).scale(&a),
        ));
    }
    for n in 1..=3 {
        let q = quat_unit(n).scale(&x);
        out.push(QuatMatrix::from_entries(z(), q.clone(), q, z()));
    }
    let one = quat_unit(0).scale(&x);
    out.push(QuatMatrix::from_entries(z(), one.clone(), -&one, z()));
    out
}

/// Coordinates of an `sp(2)` matrix in the basis `A₁..A₆, X₁..X₄`.
pub fn coordinates(m: &QuatMatrix, norm: Normalization) -> Result<[FieldScalar; LIE_DIM]> {
    if !m.in_sp2() {
        return Err(Error::Dimension("matrix is not in sp(2)".into()));
    }
    let (a, x) = norm.scales();
    let (ai, xi) = (a.inv().unwrap(), x.inv().unwrap());
    let [p, q] = &m.0;
    let coords = [
        &p[0].i * &ai,
        &p[0].j * &ai,
        &p[0].k * &ai,
        &q[1].i * &ai,
        &q[1].j * &ai,
        &q[1].k * &ai,
        &p[1].i * &xi,
        &p[1].j * &xi,
        &p[1].k * &xi,
        &p[1].r * &xi,
    ];
    Ok(coords)
}

/// Basis with structure constants `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieFrame {
    normalization: Normalization,
    c: Vec<Vec<Vec<FieldScalar>>>,
}

impl LieFrame {
    /// Structure constants from the quaternionic matrix brackets.
    pub fn build(norm: Normalization) -> Self {
        let b = basis_matrices(norm);
        let mut c = vec![vec![vec![FieldScalar::zero(); LIE_DIM]; LIE_DIM]; LIE_DIM];
        for i in 0..LIE_DIM {
            for j in 0..LIE_DIM {
                let coords = coordinates(&b[i].bracket(&b[j]), norm).expect("sp(2) is closed");
                c[i][j] = coords.to_vec();
            }
        }
        LieFrame {
            normalization: norm,
            c,
        }
    }

    /// Killing-orthonormal frame.
    pub fn killing() -> Self {
        Self::build(Normalization::Killing)
    }

    /// Frame used for the chamber calculus.
    pub fn connection() -> Self {
        Self::build(Normalization::Connection)
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// The same frame with one structure constant shifted, for fault injection.
    pub fn with_fault(&self, i: usize, j: usize, k: usize, delta: &FieldScalar) -> Self {
        let mut out = self.clone();
        out.c[i][j][k] += delta;
        out
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &FieldScalar {
        &self.c[i][j][k]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[FieldScalar] {
        &self.c[i][j]
    }

    pub fn bracket(&self, x: &[FieldScalar], y: &[FieldScalar]) -> Vec<FieldScalar> {
        let mut out = vec![FieldScalar::zero(); LIE_DIM];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let xy = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.c[i][j][k].is_zero() {
                        *o += &(&xy * &self.c[i][j][k]);
                    }
                }
            }
        }
        out
    }

    /// First antisymmetry violation `(i, j, k)`, if any.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize, usize)> {
        for i in 0..LIE_DIM {
            for j in 0..LIE_DIM {
                for k in 0..LIE_DIM {
                    if self.c[i][j][k] != -&self.c[j][i][k] {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// First triple `(i, j, k)` with nonzero Jacobiator, and its value.
    pub fn jacobi_violation(&self) -> Option<((usize, usize, usize), Vec<FieldScalar>)> {
        let e = |i: usize| {
            let mut v = vec![FieldScalar::zero(); LIE_DIM];
            v[i] = FieldScalar::one();
            v
        };
        for i in 0..LIE_DIM {
            for j in i + 1..LIE_DIM {
                for k in j + 1..LIE_DIM {
                    let t1 = self.bracket(&self.bracket(&e(i), &e(j)), &e(k));
                    let t2 = self.bracket(&self.bracket(&e(j), &e(k)), &e(i));
                    let t3 = self.bracket(&self.bracket(&e(k), &e(i)), &e(j));
                    let sum: Vec<FieldScalar> =
                        (0..LIE_DIM).map(|n| &(&t1[n] + &t2[n]) + &t3[n]).collect();
                    if sum.iter().any(|x| !x.is_zero()) {
                        return Some(((i, j, k), sum));
                    }
                }
            }
        }
        None
    }

    /// `ad(e_i)` as a matrix: column `j` holds `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> Matrix {
        let cols: Vec<Vec<FieldScalar>> = (0..LIE_DIM).map(|j| self.c[i][j].clone()).collect();
        Matrix::from_columns(LIE_DIM, &cols)
    }

    /// `B(e_i, e_j) = tr(ad e_i ∘ ad e_j)`.
    pub fn killing_form(&self) -> Matrix {
        let ads: Vec<Matrix> = (0..LIE_DIM).map(|i| self.ad(i)).collect();
        let mut b = Matrix::zeros(LIE_DIM, LIE_DIM);
        for i in 0..LIE_DIM {
            for j in 0..LIE_DIM {
                let p = ads[i].mul(&ads[j]);
                let tr: FieldScalar = (0..LIE_DIM).map(|n| p.get(n, n).clone()).sum();
                b.set(i, j, tr);
            }
        }
        b
    }

    /// Basis of `{X : [h, X] ⊆ h}` for a subalgebra `h` (coordinate vectors).
    pub fn normalizer(&self, h: &[Vec<FieldScalar>]) -> Result<Vec<Vec<FieldScalar>>> {
        let h = linalg::reduced_basis(h);
        for (i, a) in h.iter().enumerate() {
            for b in &h[i + 1..] {
                if !linalg::in_span(&h, &self.bracket(a, b)) {
                    return Err(Error::NotSubalgebra(
                        "bracket of two elements leaves the span".into(),
                    ));
                }
            }
        }
        if h.is_empty() {
            return Ok(Matrix::identity(LIE_DIM).row_vectors());
        }
        // Annihilator of h: functionals vanishing on every element.
        let annihilator = Matrix::from_rows(h.clone()).nullspace();
        let mut rows = Vec::new();
        for a in &h {
            for phi in &annihilator {
                // X ↦ φ([a, X])
                let row: Vec<FieldScalar> = (0..LIE_DIM)
                    .map(|j| {
                        let mut e = vec![FieldScalar::zero(); LIE_DIM];
                        e[j] = FieldScalar::one();
                        self.bracket(a, &e)
                            .iter()
                            .zip(phi)
                            .map(|(x, y)| x * y)
                            .sum()
                    })
                    .collect();
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return Ok(Matrix::identity(LIE_DIM).row_vectors());
        }
        Ok(Matrix::from_rows(rows).nullspace())
    }
}

/// Coordinate vectors of the listed generators.
pub fn span_of(indices: &[usize]) -> Vec<Vec<FieldScalar>> {
    indices
        .iter()
        .map(|&i| {
            let mut v = vec![FieldScalar::zero(); LIE_DIM];
            v[i] = FieldScalar::one();
            v
        })
        .collect()
}
