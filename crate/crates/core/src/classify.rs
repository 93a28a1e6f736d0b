//! Nilpotent Jordan types on ℝ⁸ and the kernel spaces `K_Γ = ker ρ(A_Γ)²` on Λ⁴.
//!
//! A diagram is excluded when some pair of vectors `(u, v)` makes the cubic
//! map `ω ↦ (u⌟v⌟ω)³` vanish identically on `K_Γ`: the Cayley form and all
//! its `GL(8)`-transforms have nondegenerate pair contractions, so none of
//! them can lie in `K_Γ`.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::cayley::{self, DecompositionProjectors, ProjectorSignature};
use crate::endo::{self, Endo};
use crate::error::{Error, Result};
use crate::exterior::{KForm, Vector, DIM};
use crate::linalg;
use crate::random::Sampler;
use crate::scalar::FieldScalar;

/// A partition of 8, parts weakly decreasing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct YoungDiagram {
    parts: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().sum::<usize>() != DIM {
            return Err(Error::InvalidIndices(format!(
                "{parts:?} is not a partition of 8"
            )));
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidIndices(format!(
                "{parts:?}: parts must be positive and weakly decreasing"
            )));
        }
        Ok(YoungDiagram { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// All partitions of 8 in reverse lexicographic order, `(8)` first and
    /// `(1⁸)` last.
    pub fn enumerate() -> Vec<YoungDiagram> {
        fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
            if rest == 0 {
                out.push(YoungDiagram {
                    parts: prefix.clone(),
                });
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                prefix.push(p);
                go(rest - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(DIM, DIM, &mut Vec::new(), &mut out);
        out
    }

    pub fn conjugate(&self) -> Vec<usize> {
        let largest = self.parts[0];
        (1..=largest)
            .map(|k| self.parts.iter().filter(|&&p| p >= k).count())
            .collect()
    }

    /// `rank(A^k)` for a nilpotent with this Jordan type.
    pub fn power_rank(&self, k: usize) -> usize {
        self.parts.iter().map(|&p| p.saturating_sub(k)).sum()
    }

    /// Rank of the nilpotent itself: `8 - #blocks`.
    pub fn rank(&self) -> usize {
        self.power_rank(1)
    }

    /// Names of the six configurations singled out in the classification.
    pub fn gamma_label(&self) -> Option<&'static str> {
        match self.parts.as_slice() {
            [3, 2, 2, 1] => Some("Γ1"),
            [2, 2, 2, 2] => Some("Γ2"),
            [2, 2, 2, 1, 1] => Some("Γ3"),
            [2, 2, 1, 1, 1, 1] => Some("Γ4"),
            [2, 1, 1, 1, 1, 1, 1] => Some("Γ5"),
            [1, 1, 1, 1, 1, 1, 1, 1] => Some("Γ6"),
            _ => None,
        }
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Basis covector labels, numbered by position: a block generator is `w`,
/// every other basis element is `v`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisLabel {
    W(usize),
    V(usize),
}

impl BasisLabel {
    pub fn position(self) -> usize {
        match self {
            BasisLabel::W(i) | BasisLabel::V(i) => i,
        }
    }

    pub fn is_generator(self) -> bool {
        matches!(self, BasisLabel::W(_))
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::W(i) => write!(f, "w{i}"),
            BasisLabel::V(i) => write!(f, "v{i}"),
        }
    }
}

/// Nilpotent in Jordan form: each block of size `r` occupies consecutive
/// basis covectors `e^p ↦ e^{p+1} ↦ … ↦ e^{p+r-1} ↦ 0`, blocks in the
/// diagram's order.
#[derive(Clone, Debug)]
pub struct JordanRepresentative {
    pub diagram: YoungDiagram,
    pub matrix: Endo,
    pub labels: Vec<BasisLabel>,
}

impl JordanRepresentative {
    pub fn new(diagram: &YoungDiagram) -> Self {
        let mut matrix = Endo::zero();
        let mut labels = Vec::with_capacity(DIM);
        let mut start = 0;
        for &r in diagram.parts() {
            for k in 0..r {
                let pos = start + k + 1;
                labels.push(if k == 0 && r >= 2 {
                    BasisLabel::W(pos)
                } else {
                    BasisLabel::V(pos)
                });
                if k + 1 < r {
                    matrix = matrix.add(&Endo::elementary(start + k + 1, start + k));
                }
            }
            start += r;
        }
        JordanRepresentative {
            diagram: diagram.clone(),
            matrix,
            labels,
        }
    }

    /// Dual basis vectors, labeled.
    pub fn dual_vectors(&self) -> Vec<(BasisLabel, Vector)> {
        self.labels
            .iter()
            .map(|&l| (l, Vector::basis(l.position())))
            .collect()
    }

    /// Checks the Jordan type through the ranks of all powers.
    pub fn has_expected_type(&self) -> bool {
        let mut p = Endo::identity();
        (1..=DIM).all(|k| {
            p = p.compose(&self.matrix);
            p.rank() == self.diagram.power_rank(k)
        })
    }

    pub fn square_operator(&self) -> impl Fn(&KForm) -> KForm + '_ {
        move |f| self.matrix.rho_pow(f, 2)
    }
}

/// Basis of `{ω ∈ Λ⁴ : ρ(A_Γ)²ω = 0}` in reduced echelon form.
#[derive(Clone, Debug)]
pub struct KernelSpace {
    pub diagram: YoungDiagram,
    pub basis: Vec<KForm>,
}

impl KernelSpace {
    pub fn compute(rep: &JordanRepresentative) -> Self {
        KernelSpace {
            diagram: rep.diagram.clone(),
            basis: endo::nullspace(4, 4, rep.square_operator()),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, f: &KForm) -> bool {
        let b: Vec<Vec<FieldScalar>> = self.basis.iter().map(KForm::to_coords).collect();
        linalg::in_span(&b, &f.to_coords())
    }

    /// `Σ cᵢ ωᵢ`.
    pub fn combination(&self, coeffs: &[FieldScalar]) -> KForm {
        self.basis
            .iter()
            .zip(coeffs)
            .fold(KForm::zero(4), |acc, (b, c)| acc.add(&b.scale(c)))
    }
}

/// Whether `ω ↦ (u⌟v⌟ω)³` vanishes identically on the span of `forms`.
///
/// The map factors through `η = u⌟v⌟ω`, so it suffices that every triple
/// product of a basis of `span{u⌟v⌟ωᵢ}` vanishes (polarization in
/// characteristic zero).
pub fn cubic_vanishes_on_subspace(u: &Vector, v: &Vector, forms: &[KForm]) -> Result<bool> {
    let mut etas = Vec::with_capacity(forms.len());
    for f in forms {
        etas.push(f.contract(v)?.contract(u)?.to_coords());
    }
    let basis: Vec<KForm> = linalg::reduced_basis(&etas)
        .iter()
        .map(|c| KForm::from_coords(2, c))
        .collect();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let ij = basis[i].wedge(&basis[j]);
            if ij.is_zero() {
                continue;
            }
            for k in j..basis.len() {
                if !ij.wedge(&basis[k]).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Excluded,
    Admissible,
    /// No certificate found although `Ω ∉ K_Γ`; needs human review.
    Unresolved,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Excluded => "excluded",
            Verdict::Admissible => "admissible",
            Verdict::Unresolved => "UNRESOLVED",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchStage {
    GeneratorDuals,
    AllDuals,
    Combinations,
}

#[derive(Clone, Debug)]
pub struct CertificatePair {
    pub u: Vector,
    pub v: Vector,
    /// Basis labels when both vectors are dual basis vectors.
    pub labels: Option<(BasisLabel, BasisLabel)>,
    pub stage: SearchStage,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub diagram: YoungDiagram,
    pub verdict: Verdict,
    pub pair: Option<CertificatePair>,
    pub omega_in_kernel: bool,
}

fn first_vanishing<I>(candidates: I, kernel: &KernelSpace) -> Option<(Vector, Vector)>
where
    I: IntoIterator<Item = (Vector, Vector)>,
{
    candidates
        .into_iter()
        .find(|(u, v)| cubic_vanishes_on_subspace(u, v, &kernel.basis).expect("degree 4 forms"))
}

/// Vectors with at most two nonzero entries in `{-2..2}`, first nonzero positive.
fn small_combinations() -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..DIM {
        for j in i + 1..DIM {
            for b in [-2i64, -1, 1, 2] {
                for a in [1i64, 2] {
                    let mut x = [0i64; DIM];
                    x[i] = a;
                    x[j] = b;
                    out.push(Vector::from_ints(x));
                }
            }
        }
    }
    out
}

fn independent(u: &Vector, v: &Vector) -> bool {
    linalg::span_rank(&[u.0.to_vec(), v.0.to_vec()]) == 2
}

/// Searches a vanishing pair: generator duals, then all dual pairs, then
/// small combinations. Diagrams whose kernel contains `Ω` are admissible
/// without search beyond the dual pairs.
pub fn find_certificate_in(rep: &JordanRepresentative, kernel: &KernelSpace) -> Certificate {
    let duals = rep.dual_vectors();
    let omega_in_kernel = rep.matrix.rho_pow(cayley::omega(), 2).is_zero();
    let found = |pair: (Vector, Vector), labels, stage| Certificate {
        diagram: rep.diagram.clone(),
        verdict: Verdict::Excluded,
        pair: Some(CertificatePair {
            u: pair.0,
            v: pair.1,
            labels,
            stage,
        }),
        omega_in_kernel,
    };

    let mut dual_pairs = Vec::new();
    for (i, (li, ui)) in duals.iter().enumerate() {
        for (lj, vj) in &duals[i + 1..] {
            dual_pairs.push(((*li, *lj), (ui.clone(), vj.clone())));
        }
    }
    let (gen_pairs, other_pairs): (Vec<_>, Vec<_>) = dual_pairs
        .into_iter()
        .partition(|((a, b), _)| a.is_generator() && b.is_generator());

    for (stage, pairs) in [
        (SearchStage::GeneratorDuals, gen_pairs),
        (SearchStage::AllDuals, other_pairs),
    ] {
        for (labels, pair) in pairs {
            if first_vanishing([pair.clone()], kernel).is_some() {
                return found(pair, Some(labels), stage);
            }
        }
    }

    if omega_in_kernel {
        return Certificate {
            diagram: rep.diagram.clone(),
            verdict: Verdict::Admissible,
            pair: None,
            omega_in_kernel,
        };
    }

    let combos = small_combinations();
    let candidates = combos.iter().enumerate().flat_map(|(i, u)| {
        combos[i + 1..]
            .iter()
            .filter(move |v| independent(u, v))
            .map(move |v| (u.clone(), v.clone()))
    });
    if let Some(pair) = first_vanishing(candidates, kernel) {
        return found(pair, None, SearchStage::Combinations);
    }
    Certificate {
        diagram: rep.diagram.clone(),
        verdict: Verdict::Unresolved,
        pair: None,
        omega_in_kernel,
    }
}

pub fn find_certificate(d: &YoungDiagram) -> Certificate {
    let rep = JordanRepresentative::new(d);
    let kernel = KernelSpace::compute(&rep);
    find_certificate_in(&rep, &kernel)
}

#[derive(Clone, Debug)]
pub struct DiagramRecord {
    pub diagram: YoungDiagram,
    pub dim_kernel: usize,
    pub certificate: Certificate,
    pub jordan_type_ok: bool,
    pub millis: u128,
}

#[derive(Clone, Debug)]
pub struct RankOneSummary {
    pub samples: usize,
    /// Samples whose `ρ(A)Ω` has no `Λ⁴₁` and no `Λ⁴₂₇` component.
    pub in_7_plus_35: usize,
    pub first_failure: Option<(Endo, ProjectorSignature)>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub records: Vec<DiagramRecord>,
    pub rank_one: RankOneSummary,
}

impl ClassificationReport {
    pub fn admissible(&self) -> Vec<&YoungDiagram> {
        self.records
            .iter()
            .filter(|r| r.certificate.verdict == Verdict::Admissible)
            .map(|r| &r.diagram)
            .collect()
    }

    pub fn unresolved(&self) -> Vec<&YoungDiagram> {
        self.records
            .iter()
            .filter(|r| r.certificate.verdict == Verdict::Unresolved)
            .map(|r| &r.diagram)
            .collect()
    }
}

pub fn classify_diagram(d: &YoungDiagram) -> DiagramRecord {
    let start = Instant::now();
    let rep = JordanRepresentative::new(d);
    let kernel = KernelSpace::compute(&rep);
    let certificate = find_certificate_in(&rep, &kernel);
    DiagramRecord {
        diagram: d.clone(),
        dim_kernel: kernel.dim(),
        certificate,
        jordan_type_ok: rep.has_expected_type(),
        millis: start.elapsed().as_millis(),
    }
}

pub fn rank_one_summary(seed: u64, samples: usize) -> RankOneSummary {
    let proj = DecompositionProjectors::get();
    let mut sampler = Sampler::new(seed);
    let mut ok = 0;
    let mut first_failure = None;
    for _ in 0..samples {
        let a = sampler.rank_one_nilpotent();
        let sig = proj.signature(&a.rho(cayley::omega()));
        if sig.in_7_plus_35() {
            ok += 1;
        } else if first_failure.is_none() {
            first_failure = Some((a, sig));
        }
    }
    RankOneSummary {
        samples,
        in_7_plus_35: ok,
        first_failure,
    }
}

/// Classifies all 22 diagrams (in parallel, merged in canonical order).
pub fn classification_report(seed: u64, rank_one_samples: usize) -> ClassificationReport {
    let records = YoungDiagram::enumerate()
        .par_iter()
        .map(classify_diagram)
        .collect();
    ClassificationReport {
        records,
        rank_one: rank_one_summary(seed, rank_one_samples),
    }
}

/// Replays an exclusion on random kernel elements; returns the first
/// element with nonzero cube, if any.
pub fn replay_exclusion(
    kernel: &KernelSpace,
    pair: &CertificatePair,
    sampler: &mut Sampler,
    samples: usize,
) -> Option<KForm> {
    (0..samples).find_map(|_| {
        let coeffs: Vec<FieldScalar> = (0..kernel.dim()).map(|_| sampler.scalar()).collect();
        let w = kernel.combination(&coeffs);
        let cube = cayley::pair_contraction_cube(&pair.u, &pair.v, &w).expect("degree 4");
        (!cube.is_zero()).then_some(w)
    })
}

/// The `(2,2,2,2)` residual: `ρ(A)²ω + 2 Σ_{i<j} v^{ij} ∧ (w_i⌟w_j⌟ω)` for
/// the representative `A = Σ w_i ⊗ v^i`. Zero for every `ω`.
pub fn gamma2_residual(omega: &KForm) -> KForm {
    let rep = JordanRepresentative::new(&YoungDiagram::new(vec![2, 2, 2, 2]).unwrap());
    let lhs = rep.matrix.rho_pow(omega, 2);
    let mut sum = KForm::zero(4);
    for i in 0..4 {
        for j in i + 1..4 {
            let (wi, wj) = (Vector::basis(2 * i + 1), Vector::basis(2 * j + 1));
            let vij = KForm::blade(&[2 * i + 2]).wedge(&KForm::blade(&[2 * j + 2]));
            let inner = omega
                .contract(&wj)
                .and_then(|f| f.contract(&wi))
                .expect("degree 4");
            sum = sum.add(&vij.wedge(&inner));
        }
    }
    lhs.add(&sum.scale(&FieldScalar::from_int(2)))
}

/// Pullbacks of `Ω` by random invertible maps that land in `K_Γ`.
pub fn orbit_hits_kernel(
    kernel: &KernelSpace,
    sampler: &mut Sampler,
    samples: usize,
) -> Option<Endo> {
    (0..samples).find_map(|_| {
        let (p, _) = sampler.invertible_endo();
        kernel.contains(&p.pullback(cayley::omega())).then_some(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_two_partitions() {
        let all = YoungDiagram::enumerate();
        assert_eq!(all.len(), 22);
        assert_eq!(all[0].parts(), &[8]);
        assert_eq!(all[21].parts(), &[1; 8]);
        assert!(all.iter().any(|d| d.parts() == [3, 2, 1, 1, 1]));
        assert!(YoungDiagram::new(vec![9]).is_err());
        assert!(YoungDiagram::new(vec![1, 2, 5]).is_err());
    }

    #[test]
    fn representatives_have_their_type() {
        for d in YoungDiagram::enumerate() {
            let rep = JordanRepresentative::new(&d);
            assert!(rep.has_expected_type(), "{d}");
            let conj = d.conjugate();
            assert_eq!(conj.iter().sum::<usize>(), 8);
            assert_eq!(
                rep.labels.iter().filter(|l| l.is_generator()).count(),
                conj.get(1).copied().unwrap_or(0)
            );
        }
    }

    #[test]
    fn labels_follow_blocks() {
        let rep = JordanRepresentative::new(&YoungDiagram::new(vec![3, 2, 1, 1, 1]).unwrap());
        let names: Vec<String> = rep.labels.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["w1", "v2", "v3", "w4", "v5", "v6", "v7", "v8"]);
    }

    #[test]
    fn gamma_two_residual_vanishes() {
        let mut s = Sampler::new(3);
        for _ in 0..5 {
            assert!(gamma2_residual(&s.form(4)).is_zero());
        }
    }
}
