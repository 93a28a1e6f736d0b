//! Invariant forms on the chamber `Sp(2) × ℝ₊` with the left-invariant
//! coframe `ds, A¹..A⁶, X¹..X⁴`, coefficients in [`ChamberScalar`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::chamber::ChamberScalar;
use crate::endo::Endo;
use crate::error::{Error, Result};
use crate::exterior::{KForm, MultiIndex, Vector};
use crate::lie::{LieFrame, LIE_DIM};
use crate::scalar::FieldScalar;

pub const COFRAME_DIM: usize = 11;
pub const DS: usize = 0;

pub const COFRAME_NAMES: [&str; COFRAME_DIM] = [
    "ds", "A1", "A2", "A3", "A4", "A5", "A6", "X1", "X2", "X3", "X4",
];

/// Coframe index of `A^n` (`n` in 1..=6).
pub const fn a(n: usize) -> usize {
    n
}

/// Coframe index of `X^n` (`n` in 1..=4).
pub const fn x(n: usize) -> usize {
    6 + n
}

/// Coframe index of a Lie algebra generator.
pub const fn of_generator(g: usize) -> usize {
    g + 1
}

/// Set of coframe generators, ordered lexicographically as increasing sequences.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u16);

impl Monomial {
    pub fn from_indices(indices: &[usize]) -> Result<Option<(Monomial, i8)>> {
        let mut mask = 0u16;
        let mut sign = 1i8;
        for &i in indices {
            if i >= COFRAME_DIM {
                return Err(Error::InvalidIndices(format!(
                    "coframe index {i} out of range"
                )));
            }
            if mask & (1 << i) != 0 {
                return Ok(None);
            }
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= 1 << i;
        }
        Ok(Some((Monomial(mask), sign)))
    }

    pub fn from_names(names: &[&str]) -> Result<Option<(Monomial, i8)>> {
        let idx: Result<Vec<usize>> = names
            .iter()
            .map(|n| {
                COFRAME_NAMES
                    .iter()
                    .position(|m| m == n)
                    .ok_or_else(|| Error::Parse(format!("unknown coframe generator {n}")))
            })
            .collect();
        Self::from_indices(&idx?)
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..COFRAME_DIM).filter(move |&i| self.0 & (1 << i) != 0)
    }

    pub fn names(self) -> Vec<&'static str> {
        self.indices().map(|i| COFRAME_NAMES[i]).collect()
    }

    /// Sign of `e^self ∧ e^other`, or `None` if they overlap.
    fn merge_sign(self, other: Monomial) -> Option<i8> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0;
        for j in other.indices() {
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        Some(if swaps % 2 == 0 { 1 } else { -1 })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", self.names().join("∧"))
    }
}

/// Element of the exterior algebra over the coframe, possibly of mixed degree.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ChamberForm {
    terms: BTreeMap<Monomial, ChamberScalar>,
}

impl ChamberForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: ChamberScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(Monomial(0), c);
        out
    }

    pub fn generator(i: usize) -> Self {
        let mut out = Self::zero();
        out.add_term(Monomial(1 << i), ChamberScalar::one());
        out
    }

    /// Wedge of the listed generators with coefficient `c`.
    pub fn monomial(c: ChamberScalar, indices: &[usize]) -> Self {
        let mut out = Self::zero();
        if let Some((m, sign)) = Monomial::from_indices(indices).expect("valid coframe indices") {
            out.add_term(m, if sign < 0 { c.neg() } else { c });
        }
        out
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, ChamberScalar)>,
    {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: ChamberScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ChamberScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, indices: &[usize]) -> ChamberScalar {
        match Monomial::from_indices(indices) {
            Ok(Some((m, sign))) => {
                let c = self
                    .terms
                    .get(&m)
                    .cloned()
                    .unwrap_or_else(ChamberScalar::zero);
                if sign < 0 {
                    c.neg()
                } else {
                    c
                }
            }
            _ => ChamberScalar::zero(),
        }
    }

    /// Degree if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.len());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, o: &ChamberForm) -> ChamberForm {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &ChamberForm) -> ChamberForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ChamberForm {
        self.scale_field(&-FieldScalar::one())
    }

    pub fn scale(&self, c: &ChamberScalar) -> ChamberForm {
        Self::from_terms(self.terms.iter().map(|(m, x)| (*m, x.mul(c))))
    }

    pub fn scale_field(&self, c: &FieldScalar) -> ChamberForm {
        Self::from_terms(self.terms.iter().map(|(m, x)| (*m, x.scale(c))))
    }

    pub fn wedge(&self, o: &ChamberForm) -> ChamberForm {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if let Some(sign) = ma.merge_sign(*mb) {
                    let c = ca.mul(cb);
                    out.add_term(Monomial(ma.0 | mb.0), if sign < 0 { c.neg() } else { c });
                }
            }
        }
        out
    }

    /// Contraction with the frame vector dual to generator `i`, first slot.
    pub fn interior(&self, i: usize) -> ChamberForm {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.contains(i) {
                let pos = (m.0 & ((1 << i) - 1)).count_ones();
                let c = if pos % 2 == 1 { c.neg() } else { c.clone() };
                out.add_term(Monomial(m.0 & !(1 << i)), c);
            }
        }
        out
    }

    /// Exterior derivative: coefficients depend on `s` only and
    /// `de^k = -½ c^k_{ij} e^i ∧ e^j` on the left-invariant coframe.
    pub fn d(&self, frame: &LieFrame) -> ChamberForm {
        let de = generator_differentials(frame);
        let ds = ChamberForm::generator(DS);
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let blade = ChamberForm::from_terms([(*m, ChamberScalar::one())]);
            let dc = c.ds();
            if !dc.is_zero() {
                out = out.add(&ds.wedge(&blade).scale(&dc));
            }
            let idx: Vec<usize> = m.indices().collect();
            for (p, &i) in idx.iter().enumerate() {
                if de[i].is_zero() {
                    continue;
                }
                let left = ChamberForm::monomial(ChamberScalar::one(), &idx[..p]);
                let right = ChamberForm::monomial(ChamberScalar::one(), &idx[p + 1..]);
                let mut piece = left.wedge(&de[i]).wedge(&right).scale(c);
                if p % 2 == 1 {
                    piece = piece.neg();
                }
                out = out.add(&piece);
            }
        }
        out
    }

    /// `L_{e_g} = ι d + d ι` for the left-invariant field of generator `g`.
    pub fn lie_derivative(&self, g: usize, frame: &LieFrame) -> ChamberForm {
        let i = of_generator(g);
        self.d(frame).interior(i).add(&self.interior(i).d(frame))
    }

    /// `ι_Y` for `Y = a A₄ + b A₅ + c A₆`.
    pub fn interior_field(&self, y: &InvariantField) -> ChamberForm {
        [(a(4), &y.a), (a(5), &y.b), (a(6), &y.c)]
            .iter()
            .fold(ChamberForm::zero(), |acc, (i, f)| {
                acc.add(&self.interior(*i).scale(f))
            })
    }

    /// `L_Y = ι_Y d + d ι_Y`.
    pub fn lie_derivative_field(&self, y: &InvariantField, frame: &LieFrame) -> ChamberForm {
        self.d(frame)
            .interior_field(y)
            .add(&self.interior_field(y).d(frame))
    }

    /// Value at `(s₀, w₀)` as a form on ℝ⁸ via `(ds, A⁴, A⁵, A⁶, X¹..X⁴) ↦ (e¹..e⁸)`.
    pub fn at_point(&self, s0: &FieldScalar, w0: &FieldScalar) -> Result<KForm> {
        let degree = self.degree().unwrap_or(0);
        let mut out = KForm::zero(degree);
        for (m, c) in &self.terms {
            let idx: Option<Vec<usize>> = m.indices().map(point_index).collect();
            let idx = idx.ok_or_else(|| {
                Error::Dimension(format!("{m:?} involves a generator outside the framing"))
            })?;
            let value = c.eval(s0, w0)?;
            let (mi, sign) = MultiIndex::from_unsorted(&idx)?.expect("distinct generators");
            let term = KForm::from_terms(degree, [(mi.indices().collect::<Vec<_>>(), value)])?;
            out = out.add(&if sign < 0 { term.neg() } else { term });
        }
        Ok(out)
    }
}

/// Position in ℝ⁸ of a coframe generator under the pointwise framing.
pub fn point_index(i: usize) -> Option<usize> {
    match i {
        DS => Some(1),
        4..=6 => Some(i - 2),
        7..=10 => Some(i - 2),
        _ => None,
    }
}

/// `de^k` for every coframe generator (`d(ds) = 0`).
pub fn generator_differentials(frame: &LieFrame) -> Vec<ChamberForm> {
    let mut out = vec![ChamberForm::zero()];
    for k in 0..LIE_DIM {
        let mut f = ChamberForm::zero();
        for i in 0..LIE_DIM {
            for j in i + 1..LIE_DIM {
                let c = frame.constant(i, j, k);
                if !c.is_zero() {
                    f = f.add(&ChamberForm::monomial(
                        ChamberScalar::constant(-c),
                        &[of_generator(i), of_generator(j)],
                    ));
                }
            }
        }
        out.push(f);
    }
    out
}

impl fmt::Display for ChamberForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("[{c}] {m:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ChamberForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `Y = a A₄ + b A₅ + c A₆` with coefficients depending on `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantField {
    pub a: ChamberScalar,
    pub b: ChamberScalar,
    pub c: ChamberScalar,
}

impl InvariantField {
    pub fn new(a: ChamberScalar, b: ChamberScalar, c: ChamberScalar) -> Self {
        InvariantField { a, b, c }
    }

    /// Coefficients given as polynomials in `t = s²`.
    pub fn from_t_polys(a: &[FieldScalar], b: &[FieldScalar], c: &[FieldScalar]) -> Self {
        InvariantField::new(
            ChamberScalar::from_t_poly(a),
            ChamberScalar::from_t_poly(b),
            ChamberScalar::from_t_poly(c),
        )
    }

    pub fn zero() -> Self {
        InvariantField::new(
            ChamberScalar::zero(),
            ChamberScalar::zero(),
            ChamberScalar::zero(),
        )
    }

    pub fn is_even(&self) -> bool {
        self.a.is_even() && self.b.is_even() && self.c.is_even()
    }

    /// The frame vector at `(s₀, w₀)` in the pointwise framing.
    pub fn at_point(&self, s0: &FieldScalar, w0: &FieldScalar) -> Result<Vector> {
        let mut v = Vector::zero();
        v.0[1] = self.a.eval(s0, w0)?;
        v.0[2] = self.b.eval(s0, w0)?;
        v.0[3] = self.c.eval(s0, w0)?;
        Ok(v)
    }
}

/// Quaternion-valued chamber form `f₀ + i f₁ + j f₂ + k f₃`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionForm(pub [ChamberForm; 4]);

impl QuaternionForm {
    pub fn conj(&self) -> Self {
        let [r, i, j, k] = &self.0;
        QuaternionForm([r.clone(), i.neg(), j.neg(), k.neg()])
    }

    pub fn wedge(&self, o: &QuaternionForm) -> QuaternionForm {
        // e_p e_q = sign · e_{table}
        const TABLE: [[(usize, i8); 4]; 4] = [
            [(0, 1), (1, 1), (2, 1), (3, 1)],
            [(1, 1), (0, -1), (3, 1), (2, -1)],
            [(2, 1), (3, -1), (0, -1), (1, 1)],
            [(3, 1), (2, 1), (1, -1), (0, -1)],
        ];
        let mut out: [ChamberForm; 4] = Default::default();
        for p in 0..4 {
            for q in 0..4 {
                let (r, sign) = TABLE[p][q];
                let prod = self.0[p].wedge(&o.0[q]);
                out[r] = if sign < 0 {
                    out[r].sub(&prod)
                } else {
                    out[r].add(&prod)
                };
            }
        }
        QuaternionForm(out)
    }

    pub fn scale_field(&self, c: &FieldScalar) -> QuaternionForm {
        QuaternionForm(self.0.clone().map(|f| f.scale_field(c)))
    }
}

fn gen(i: usize) -> ChamberForm {
    ChamberForm::generator(i)
}

fn mono(c: i64, idx: &[usize]) -> ChamberForm {
    ChamberForm::monomial(ChamberScalar::from_int(c), idx)
}

/// The pieces of the Bryant–Salamon construction on the chamber.
#[derive(Clone, Debug)]
pub struct BryantSalamon {
    /// `α = ds − s(iA⁴ + jA⁵ + kA⁶)`.
    pub alpha: QuaternionForm,
    /// `ω = X⁴ + iX¹ + jX² + kX³`.
    pub omega: QuaternionForm,
    /// `B = ½ ᾱ ∧ α`.
    pub b: QuaternionForm,
    /// `½ ω̄ ∧ ω`.
    pub fiber_two_form: QuaternionForm,
    pub psi1: ChamberForm,
    pub psi2: ChamberForm,
    pub psi3: ChamberForm,
    /// `f = 4w⁻²`.
    pub f: ChamberScalar,
    /// `g = 5w³`.
    pub g: ChamberScalar,
    pub phi: ChamberForm,
}

pub fn build_bryant_salamon() -> BryantSalamon {
    let s = ChamberScalar::s();
    let minus_s = s.neg();
    let alpha = QuaternionForm([
        gen(DS),
        gen(a(4)).scale(&minus_s),
        gen(a(5)).scale(&minus_s),
        gen(a(6)).scale(&minus_s),
    ]);
    let omega = QuaternionForm([gen(x(4)), gen(x(1)), gen(x(2)), gen(x(3))]);
    let half = FieldScalar::from_ratio(1, 2);
    let b = alpha.conj().wedge(&alpha).scale_field(&half);
    let fiber_two_form = omega.conj().wedge(&omega).scale_field(&half);

    let [a0, a1, a2, a3] = &alpha.0;
    let psi1 = a0.wedge(a1).wedge(a2).wedge(a3);
    let psi2 = (1..4).fold(ChamberForm::zero(), |acc, n| {
        acc.add(&b.0[n].wedge(&fiber_two_form.0[n]))
    });
    let [w0, w1, w2, w3] = &omega.0;
    let psi3 = w0.wedge(w1).wedge(w2).wedge(w3);

    let f = ChamberScalar::monomial(FieldScalar::from_int(4), 0, -2);
    let g = ChamberScalar::monomial(FieldScalar::from_int(5), 0, 3);
    let phi = psi1
        .scale(&f.mul(&f))
        .add(&psi2.scale(&f.mul(&g)))
        .add(&psi3.scale(&g.mul(&g)));
    BryantSalamon {
        alpha,
        omega,
        b,
        fiber_two_form,
        psi1,
        psi2,
        psi3,
        f,
        g,
        phi,
    }
}

/// The three 2-forms `−X¹⁴−X²³`, `−X²⁴+X¹³`, `−X³⁴−X¹²` paired with `A⁴, A⁵, A⁶`.
pub fn fiber_pairs() -> [ChamberForm; 3] {
    [
        mono(-1, &[x(1), x(4)]).add(&mono(-1, &[x(2), x(3)])),
        mono(-1, &[x(2), x(4)]).add(&mono(1, &[x(1), x(3)])),
        mono(-1, &[x(3), x(4)]).add(&mono(-1, &[x(1), x(2)])),
    ]
}

/// `A⁵⁶ ∧ (−X¹⁴−X²³) + A⁶⁴ ∧ (−X²⁴+X¹³) + A⁴⁵ ∧ (−X³⁴−X¹²)`.
pub fn invariant_mixed_form() -> ChamberForm {
    let [p1, p2, p3] = fiber_pairs();
    mono(1, &[a(5), a(6)])
        .wedge(&p1)
        .add(&mono(1, &[a(6), a(4)]).wedge(&p2))
        .add(&mono(1, &[a(4), a(5)]).wedge(&p3))
}

/// The pulled-back Bryant–Salamon form as displayed in closed form, with
/// `t = s²` and `dt = 2s ds`.
pub fn displayed_bryant_salamon() -> ChamberForm {
    let s = ChamberScalar::s();
    let t = s.mul(&s);
    let f = ChamberScalar::monomial(FieldScalar::from_int(4), 0, -2);
    let g = ChamberScalar::monomial(FieldScalar::from_int(5), 0, 3);
    let fg = f.mul(&g);
    let [p1, p2, p3] = fiber_pairs();
    let inner = mono(1, &[a(4), a(5), a(6)]).scale(&t.mul(&f).mul(&f)).add(
        &gen(a(4))
            .wedge(&p1)
            .add(&gen(a(5)).wedge(&p2))
            .add(&gen(a(6)).wedge(&p3))
            .scale(&fg),
    );
    // −(dt/2) = −s ds
    gen(DS)
        .wedge(&inner)
        .scale(&s.neg())
        .sub(&invariant_mixed_form().scale(&t.mul(&fg)))
        .sub(&mono(1, &[x(1), x(2), x(3), x(4)]).scale(&g.mul(&g)))
}

/// First coframe monomial where the built and displayed forms differ.
pub fn pullback_proposition_mismatch() -> Option<(Monomial, ChamberScalar, ChamberScalar)> {
    let built = build_bryant_salamon().phi;
    let shown = displayed_bryant_salamon();
    let diff = built.sub(&shown);
    let m = *diff.terms().next()?.0;
    let idx: Vec<usize> = m.indices().collect();
    Some((m, built.coeff(&idx), shown.coeff(&idx)))
}

pub fn verify_pullback_proposition() -> bool {
    pullback_proposition_mismatch().is_none()
}

/// `Φ + 2s ds ∧ (Y ⌟ Φ)`, i.e. `Φ + dt ∧ (Y ⌟ Φ)`.
pub fn perturbed_form(y: &InvariantField) -> Result<ChamberForm> {
    if !y.is_even() {
        return Err(Error::OddCoefficient);
    }
    Ok(perturbed_form_unchecked(&build_bryant_salamon().phi, y))
}

/// As [`perturbed_form`] without the parity precondition.
pub fn perturbed_form_unchecked(phi: &ChamberForm, y: &InvariantField) -> ChamberForm {
    phi.add(&perturbation_term(phi, y))
}

/// `dt ∧ (Y ⌟ Φ)` with `dt = 2s ds`.
pub fn perturbation_term(phi: &ChamberForm, y: &InvariantField) -> ChamberForm {
    let two_s = ChamberScalar::monomial(FieldScalar::from_int(2), 1, 0);
    gen(DS).scale(&two_s).wedge(&phi.interior_field(y))
}

/// Both sides of `d(dt ∧ Y⌟Φ) = −dt ∧ L_YΦ`.
pub fn closedness_mechanism(
    phi: &ChamberForm,
    y: &InvariantField,
    frame: &LieFrame,
) -> (ChamberForm, ChamberForm) {
    let lhs = perturbation_term(phi, y).d(frame);
    let two_s = ChamberScalar::monomial(FieldScalar::from_int(2), 1, 0);
    let rhs = gen(DS)
        .scale(&two_s)
        .wedge(&phi.lie_derivative_field(y, frame))
        .neg();
    (lhs, rhs)
}

/// Pointwise check of a rank-one perturbation at `(s₀, w₀)`.
#[derive(Clone, Debug)]
pub struct PointwiseOrbitCheck {
    pub phi: KForm,
    pub endo: Endo,
    /// `ρ(A)² Φ_p`.
    pub rho_squared: KForm,
    /// `exp(A)* Φ_p − (Φ_p + ρ(A)Φ_p)`.
    pub orbit_defect: KForm,
    /// `Φ_p + ρ(A)Φ_p` against the evaluated perturbed form.
    pub perturbed_defect: KForm,
    pub stabilizer_dim: usize,
}

impl PointwiseOrbitCheck {
    pub fn passed(&self) -> bool {
        self.rho_squared.is_zero()
            && self.orbit_defect.is_zero()
            && self.perturbed_defect.is_zero()
            && self.stabilizer_dim == 21
    }
}

/// Frames the chamber at `(s₀, w₀)` as ℝ⁸ and checks that the perturbation is
/// `ρ(A)Φ_p` for the rank-one nilpotent `A = Y ⊗ 2s₀ds`, which then lies in the
/// orbit of `Φ_p`. Also recomputes the stabilizer of `Φ_p` (21 for a Spin(7) form).
pub fn pointwise_orbit_check(
    y: &InvariantField,
    s0: &FieldScalar,
    w0: &FieldScalar,
) -> Result<PointwiseOrbitCheck> {
    let phi_form = build_bryant_salamon().phi;
    let phi = phi_form.at_point(s0, w0)?;
    let perturbed = perturbed_form_unchecked(&phi_form, y).at_point(s0, w0)?;
    let yv = y.at_point(s0, w0)?;
    let mut dt = crate::exterior::Covector::zero();
    dt.0[0] = s0 * &FieldScalar::from_int(2);
    let endo = Endo::tensor(&yv, &dt);
    let rho = endo.rho(&phi);
    let orbit_defect = endo.exp_nilpotent()?.pullback(&phi).sub(&phi.add(&rho));
    let stabilizer_dim = crate::cayley::stabilizer_of(&phi).len();
    Ok(PointwiseOrbitCheck {
        rho_squared: endo.rho(&rho),
        orbit_defect,
        perturbed_defect: perturbed.sub(&phi.add(&rho)),
        phi,
        endo,
        stabilizer_dim,
    })
}

/// Symmetric 2-tensor on the coframe.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InvariantMetric {
    /// `(i, j)` with `i ≤ j` → coefficient of the symmetric product `e^i e^j`
    /// (so a diagonal entry `h` means `h (e^i)²`).
    entries: BTreeMap<(usize, usize), ChamberScalar>,
}

impl InvariantMetric {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `h(e_i, e_j)`.
    pub fn get(&self, i: usize, j: usize) -> ChamberScalar {
        let key = (i.min(j), i.max(j));
        self.entries
            .get(&key)
            .cloned()
            .unwrap_or_else(ChamberScalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, c: ChamberScalar) {
        let key = (i.min(j), i.max(j));
        if c.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, c);
        }
    }

    /// `Σ (e^i)²` over the listed generators, scaled.
    pub fn diagonal(indices: &[usize], c: &ChamberScalar) -> Self {
        let mut m = Self::zero();
        for &i in indices {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn add(&self, o: &InvariantMetric) -> InvariantMetric {
        let mut out = self.clone();
        for (&(i, j), c) in &o.entries {
            out.set(i, j, out.get(i, j).add(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &ChamberScalar)> {
        self.entries.iter()
    }

    /// `(L_{e_g} h)(e_a, e_b) = −h([e_g, e_a], e_b) − h(e_a, [e_g, e_b])`.
    pub fn lie_derivative(&self, g: usize, frame: &LieFrame) -> InvariantMetric {
        let bracket = |i: usize| -> Vec<(usize, FieldScalar)> {
            if i == DS {
                return Vec::new();
            }
            frame
                .bracket_basis(g, i - 1)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (of_generator(k), c.clone()))
                .collect()
        };
        let mut out = InvariantMetric::zero();
        for p in 0..COFRAME_DIM {
            for q in p..COFRAME_DIM {
                let mut acc = ChamberScalar::zero();
                for (k, c) in bracket(p) {
                    acc = acc.sub(&self.get(k, q).scale(&c));
                }
                for (k, c) in bracket(q) {
                    acc = acc.sub(&self.get(p, k).scale(&c));
                }
                out.set(p, q, acc);
            }
        }
        out
    }
}

/// `f (ds² + s²((A⁴)² + (A⁵)² + (A⁶)²)) + g ((X¹)² + … + (X⁴)²)`.
pub fn bryant_salamon_metric() -> InvariantMetric {
    let bs = build_bryant_salamon();
    let s2 = ChamberScalar::s().pow(2);
    InvariantMetric::diagonal(&[DS], &bs.f)
        .add(&InvariantMetric::diagonal(
            &[a(4), a(5), a(6)],
            &bs.f.mul(&s2),
        ))
        .add(&InvariantMetric::diagonal(&[x(1), x(2), x(3), x(4)], &bs.g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_squared_vanishes_on_generators() {
        let frame = LieFrame::connection();
        for i in 0..COFRAME_DIM {
            assert!(gen(i).d(&frame).d(&frame).is_zero(), "{}", COFRAME_NAMES[i]);
        }
    }

    #[test]
    fn psi_pieces() {
        let bs = build_bryant_salamon();
        let s3 = ChamberScalar::monomial(FieldScalar::from_int(-1), 3, 0);
        assert_eq!(bs.psi1, mono(1, &[DS, a(4), a(5), a(6)]).scale(&s3));
        assert_eq!(bs.psi3, mono(-1, &[x(1), x(2), x(3), x(4)]));
        assert!(bs.b.0[0].is_zero());
        assert!(bs.fiber_two_form.0[0].is_zero());
        assert_eq!(
            bs.phi.coeff(&[DS, a(4), a(5), a(6)]),
            ChamberScalar::monomial(FieldScalar::from_int(-16), 3, -4)
        );
    }

    #[test]
    fn pullback_matches_display() {
        assert!(verify_pullback_proposition());
    }

    #[test]
    fn phi_is_closed() {
        let frame = LieFrame::connection();
        assert!(build_bryant_salamon().phi.d(&frame).is_zero());
    }

    #[test]
    fn fiber_rotations_preserve_mixed_form() {
        let frame = LieFrame::connection();
        let x1234 = mono(1, &[x(1), x(2), x(3), x(4)]);
        for g in 3..6 {
            assert!(invariant_mixed_form().lie_derivative(g, &frame).is_zero());
            assert!(x1234.lie_derivative(g, &frame).is_zero());
        }
    }

    #[test]
    fn rotation_of_a5_is_multiple_of_a6() {
        let frame = LieFrame::connection();
        let l = gen(a(5)).lie_derivative(3, &frame);
        let terms: Vec<_> = l.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0.indices().collect::<Vec<_>>(), vec![a(6)]);
    }

    #[test]
    fn metric_is_killing_for_fiber_rotations() {
        let frame = LieFrame::connection();
        let h = bryant_salamon_metric();
        for g in [0, 3, 4, 5] {
            assert!(h.lie_derivative(g, &frame).is_zero(), "{}", g);
        }
    }

    #[test]
    fn perturbation_stays_closed() {
        let frame = LieFrame::connection();
        let c = FieldScalar::from_int;
        let y = InvariantField::from_t_polys(&[c(0), c(1)], &[c(1), c(0), c(1)], &[c(0), c(3)]);
        assert!(perturbed_form(&y).unwrap().d(&frame).is_zero());
        let phi = build_bryant_salamon().phi;
        let (lhs, rhs) = closedness_mechanism(&phi, &y, &frame);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_coefficients_are_rejected() {
        let y = InvariantField::new(
            ChamberScalar::s(),
            ChamberScalar::zero(),
            ChamberScalar::zero(),
        );
        assert!(matches!(perturbed_form(&y), Err(Error::OddCoefficient)));
        assert_eq!(
            perturbed_form(&InvariantField::zero()).unwrap(),
            build_bryant_salamon().phi
        );
    }

    #[test]
    fn pointwise_check_passes() {
        let c = FieldScalar::from_int;
        let y = InvariantField::from_t_polys(&[c(1)], &[], &[]);
        let s0 = &FieldScalar::sqrt2() * &c(11);
        let check = pointwise_orbit_check(&y, &s0, &c(3)).unwrap();
        assert!(check.passed());
        assert!(!check.endo.is_zero());
    }
}
