use proptest::prelude::*;

use spin7_core::chamber::ChamberScalar;
use spin7_core::endo;
use spin7_core::invariant::{ChamberForm, COFRAME_DIM};
use spin7_core::lie::LieFrame;
use spin7_core::{cayley, Covector, Endo, FieldScalar, KForm, MultiIndex, Vector};

fn scalar() -> impl Strategy<Value = FieldScalar> {
    (-6i64..=6, -2i64..=2, 1i64..=3).prop_map(|(a, b, q)| {
        &FieldScalar::from_ratio(a, q) + &(&FieldScalar::sqrt2() * &FieldScalar::from_int(b))
    })
}

fn rational() -> impl Strategy<Value = FieldScalar> {
    (-9i64..=9).prop_map(FieldScalar::from_int)
}

fn form(degree: usize) -> impl Strategy<Value = KForm> {
    let blades = MultiIndex::all_of_len(degree);
    let n = blades.len();
    prop::collection::vec((0..n, scalar()), 0..6).prop_map(move |terms| {
        terms.into_iter().fold(KForm::zero(degree), |acc, (i, c)| {
            let idx: Vec<usize> = blades[i].indices().collect();
            acc.add(&KForm::blade(&idx).scale(&c))
        })
    })
}

fn any_form() -> impl Strategy<Value = KForm> {
    (0usize..=8).prop_flat_map(form)
}

fn vector() -> impl Strategy<Value = Vector> {
    prop::array::uniform8(rational()).prop_map(Vector)
}

fn covector() -> impl Strategy<Value = Covector> {
    prop::array::uniform8(rational()).prop_map(Covector)
}

fn endo() -> impl Strategy<Value = Endo> {
    prop::collection::vec((0usize..8, 0usize..8, -3i64..=3), 0..12).prop_map(|entries| {
        entries.into_iter().fold(Endo::zero(), |acc, (i, j, c)| {
            acc.add(&Endo::elementary(i, j).scale(&FieldScalar::from_int(c)))
        })
    })
}

/// Strictly lower-triangular block of rank at most 3, conjugated by a unipotent matrix.
fn low_rank_nilpotent() -> impl Strategy<Value = Endo> {
    (
        prop::collection::vec((1usize..8, -2i64..=2), 0..=3),
        prop::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..4),
    )
        .prop_map(|(cols, shear)| {
            let mut n = Endo::zero();
            for (k, (row, c)) in cols.into_iter().enumerate() {
                if c != 0 && row > k {
                    n = n.add(&Endo::elementary(row, k).scale(&FieldScalar::from_int(c)));
                }
            }
            let mut p = Endo::identity();
            for (i, j, c) in shear {
                if i < j {
                    p = p.compose(
                        &Endo::identity()
                            .add(&Endo::elementary(i, j).scale(&FieldScalar::from_int(c))),
                    );
                }
            }
            let p_inv = p.inverse().expect("unipotent");
            p.compose(&n).compose(&p_inv)
        })
        .prop_filter("rank at most 3", |a| a.rank() <= 3)
}

fn sign(p: usize) -> FieldScalar {
    FieldScalar::from_int(if p % 2 == 1 { -1 } else { 1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn contraction_is_an_antiderivation(a in any_form(), b in any_form(), v in vector()) {
        prop_assume!(a.degree() >= 1 && a.degree() + b.degree() <= 8);
        let lhs = a.wedge(&b).contract(&v).unwrap();
        let rhs = if b.degree() == 0 {
            a.contract(&v).unwrap().wedge(&b)
        } else {
            a.contract(&v)
                .unwrap()
                .wedge(&b)
                .add(&a.wedge(&b.contract(&v).unwrap()).scale(&sign(a.degree())))
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(a in any_form(), b in any_form()) {
        let ab = a.wedge(&b);
        let ba = b.wedge(&a).scale(&sign(a.degree() * b.degree()));
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn hodge_star_is_an_isometry(k in 0usize..=8, seed in any::<u64>()) {
        let mut r = spin7_core::random::Sampler::new(seed);
        let (a, b) = (r.sparse_form(k, 5), r.sparse_form(k, 5));
        prop_assert_eq!(a.hodge_star().inner(&b.hodge_star()), a.inner(&b));
        let twice = a.hodge_star().hodge_star().scale(&sign(k * (8 - k)));
        prop_assert_eq!(twice, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rho_is_a_lie_algebra_action(a in endo(), b in endo(), f in form(3)) {
        let lhs = a.commutator(&b).rho(&f);
        let rhs = a.rho(&b.rho(&f)).sub(&b.rho(&a.rho(&f)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_one_tensor_acts_by_contraction(v in vector(), alpha in covector(), f in form(4)) {
        let lhs = Endo::tensor(&v, &alpha).rho(&f);
        let rhs = alpha.to_form().wedge(&f.contract(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_of_exponential_is_exponential_of_rho(a in low_rank_nilpotent(), f in form(4)) {
        let lhs = a.exp_nilpotent().unwrap().pullback(&f);
        // Σ ρ(A)^k f / k!, truncated once the power vanishes.
        let mut rhs = f.clone();
        let mut term = f.clone();
        for k in 1..=8i64 {
            term = a.rho(&term).scale(&FieldScalar::from_ratio(1, k));
            if term.is_zero() {
                break;
            }
            rhs = rhs.add(&term);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernel_vectors_are_annihilated(a in low_rank_nilpotent()) {
        let basis = endo::nullspace(4, 4, |f| a.rho_pow(f, 2));
        for b in &basis {
            prop_assert!(a.rho_pow(b, 2).is_zero());
        }
        let rank = endo::operator_matrix(4, 4, |f| a.rho_pow(f, 2)).rank();
        prop_assert_eq!(rank + basis.len(), 70);
    }

    #[test]
    fn jordan_chevalley_parts_are_polynomials(a in endo()) {
        let (s, n) = a.jordan_chevalley_split().unwrap();
        prop_assert_eq!(&s.add(&n), &a);
        prop_assert!(s.commutator(&n).is_zero());
        prop_assert!(n.is_nilpotent());
        prop_assert!(s.eval_poly(&a.char_poly().squarefree_part()).is_zero());
        let mut powers = vec![Endo::identity().flatten()];
        let mut p = Endo::identity();
        for _ in 1..8 {
            p = p.compose(&a);
            powers.push(p.flatten());
        }
        let span = spin7_core::linalg::reduced_basis(&powers);
        prop_assert!(spin7_core::linalg::in_span(&span, &s.flatten()));
    }

    #[test]
    fn pair_cube_scales_cubically(u in vector(), v in vector(), l in scalar(), m in scalar()) {
        let om = cayley::omega();
        let lhs = cayley::pair_contraction_cube(&u.scale(&l), &v.scale(&m), om).unwrap();
        let rhs = cayley::pair_contraction_cube(&u, &v, om).unwrap().scale(&(&l * &m).pow(3));
        prop_assert_eq!(lhs, rhs);
    }
}

fn chamber_form() -> impl Strategy<Value = ChamberForm> {
    let term = (
        prop::collection::vec(0usize..COFRAME_DIM, 0..4),
        0u32..3,
        -3i32..=3,
        -4i64..=4,
    );
    prop::collection::vec(term, 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(ChamberForm::zero(), |acc, (idx, s, w, c)| {
                let mut idx = idx;
                idx.sort_unstable();
                idx.dedup();
                let coeff = ChamberScalar::monomial(FieldScalar::from_int(c), s, w);
                acc.add(&ChamberForm::monomial(coeff, &idx))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(f in chamber_form()) {
        let frame = LieFrame::connection();
        prop_assert!(f.d(&frame).d(&frame).is_zero());
    }
}
