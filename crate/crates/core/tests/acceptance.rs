//! Exit gate: eleven criteria, each with its own time bound.
//!
//! Run with `cargo test -p spin7-core --test acceptance -- --nocapture` to see
//! the PASS/FAIL lines.

use std::time::{Duration, Instant};

use spin7_core::cayley::{self, DecompositionProjectors};
use spin7_core::chamber::ChamberScalar;
use spin7_core::classify::{self, JordanRepresentative, KernelSpace, Verdict};
use spin7_core::endo;
use spin7_core::invariant::{
    self, a, bryant_salamon_metric, build_bryant_salamon, x, ChamberForm, InvariantField,
    COFRAME_DIM, DS,
};
use spin7_core::lie::{span_of, LieFrame};
use spin7_core::linalg::{self, Matrix};
use spin7_core::random::Sampler;
use spin7_core::{Endo, FieldScalar, KForm, Vector};

const SEED: u64 = 1;

struct Outcome {
    id: usize,
    name: &'static str,
    ok: bool,
    elapsed: Duration,
    bound: Option<Duration>,
    note: String,
}

fn criterion(
    id: usize,
    name: &'static str,
    bound: Option<Duration>,
    f: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let start = Instant::now();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
        .unwrap_or_else(|_| Err("panicked".into()));
    let elapsed = start.elapsed();
    let (mut ok, mut note) = match result {
        Ok(n) => (true, n),
        Err(n) => (false, n),
    };
    if let Some(b) = bound {
        if elapsed > b {
            ok = false;
            note = format!("{note}; exceeded {b:?}");
        }
    }
    let o = Outcome {
        id,
        name,
        ok,
        elapsed,
        bound,
        note,
    };
    println!(
        "{} criterion {:>2} {:<28} {:>9.2?} (bound {}) {}",
        if o.ok { "PASS" } else { "FAIL" },
        o.id,
        o.name,
        o.elapsed,
        o.bound.map_or("none".to_string(), |b| format!("{b:?}")),
        o.note
    );
    o
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn secs(n: u64) -> Option<Duration> {
    Some(Duration::from_secs(n))
}

fn int(n: i64) -> FieldScalar {
    FieldScalar::from_int(n)
}

fn stabilizer() -> Result<String, String> {
    let om = cayley::omega();
    // Solve ρ(A)Ω = 0 over all 64 matrix units directly.
    let units: Vec<Endo> = (0..8)
        .flat_map(|i| (0..8).map(move |j| Endo::elementary(i, j)))
        .collect();
    let cols: Vec<Vec<FieldScalar>> = units.iter().map(|e| e.rho(om).to_coords()).collect();
    let m = Matrix::from_columns(70, &cols);
    let stab_dim = 64 - m.rank();
    ensure(stab_dim == 21, format!("stabilizer dim {stab_dim}"))?;
    ensure(
        cayley::stabilizer_algebra().len() == 21,
        "library stabilizer basis",
    )?;
    let traceless: Vec<Vec<FieldScalar>> = cayley::sl8_basis()
        .iter()
        .map(|e| e.rho(om).to_coords())
        .collect();
    let image = linalg::span_rank(&traceless);
    ensure(image == 42, format!("image dim {image}"))?;
    Ok(format!("dim stab = {stab_dim}, dim ρ(sl8)Ω = {image}"))
}

fn decomposition() -> Result<String, String> {
    let p = DecompositionProjectors::get();
    let star = endo::operator_matrix(4, 4, KForm::hodge_star);
    let mut ranks = Vec::new();
    let mut sum = Matrix::zeros(70, 70);
    for (name, m) in p.all() {
        ensure(m.mul(m) == *m, format!("{name} not idempotent"))?;
        let sign = if name == "p35" { -1 } else { 1 };
        ensure(
            star.mul(m) == m.scale(&int(sign)),
            format!("{name} star eigenvalue"),
        )?;
        ranks.push(m.rank());
        sum = sum.add(m);
    }
    ensure(ranks == [1, 7, 27, 35], format!("ranks {ranks:?}"))?;
    ensure(
        sum == Matrix::identity(70),
        "projectors do not sum to the identity",
    )?;
    Ok(format!("ranks {ranks:?}"))
}

fn nondegeneracy() -> Result<String, String> {
    let om = cayley::omega();
    let mut r = Sampler::new(SEED);
    for n in 0..200 {
        let (u, v) = r.independent_pair();
        let cube = cayley::pair_contraction_cube(&u, &v, om).map_err(|e| e.to_string())?;
        ensure(!cube.is_zero(), format!("vanishing cube at sample {n}"))?;
        if n < 20 {
            let (l, m) = (
                r.nonzero_scalar(),
                &r.nonzero_scalar() + &FieldScalar::sqrt3(),
            );
            let scaled = cayley::pair_contraction_cube(&u.scale(&l), &v.scale(&m), om)
                .map_err(|e| e.to_string())?;
            ensure(scaled == cube.scale(&(&l * &m).pow(3)), "λ³μ³ scaling")?;
        }
    }
    Ok("200 pairs".into())
}

fn rank_one() -> Result<String, String> {
    let om = cayley::omega();
    let mut r = Sampler::new(SEED);
    let ts = [int(1), int(-3), FieldScalar::from_ratio(5, 7)];
    for _ in 0..100 {
        let a = r.rank_one_nilpotent();
        let w = r.form(4);
        ensure(a.rho(&a.rho(&w)).is_zero(), "ρ(A)²ω ≠ 0")?;
        let delta = a.rho(om);
        for t in &ts {
            let exp = a.scale(t).exp_nilpotent().map_err(|e| e.to_string())?;
            ensure(
                exp.pullback(om) == om.add(&delta.scale(t)),
                "pullback mismatch",
            )?;
        }
    }
    Ok("100 samples × 3 values of t".into())
}

fn classification() -> Result<String, String> {
    let report = classify::classification_report(SEED, 20);
    ensure(report.records.len() == 22, "diagram count")?;
    let admissible: Vec<Vec<usize>> = report
        .admissible()
        .iter()
        .map(|d| d.parts().to_vec())
        .collect();
    ensure(
        admissible == [vec![2, 1, 1, 1, 1, 1, 1], vec![1; 8]],
        format!("admissible {admissible:?}"),
    )?;
    for rec in &report.records {
        if rec.certificate.verdict != Verdict::Excluded {
            continue;
        }
        let pair = rec.certificate.pair.as_ref().ok_or("missing certificate")?;
        let rep = JordanRepresentative::new(&rec.diagram);
        let kernel = KernelSpace::compute(&rep);
        let vanishes = classify::cubic_vanishes_on_subspace(&pair.u, &pair.v, &kernel.basis)
            .map_err(|e| e.to_string())?;
        ensure(
            vanishes,
            format!("certificate fails for {:?}", rec.diagram.parts()),
        )?;
        if matches!(rec.diagram.gamma_label(), Some("Γ1" | "Γ2" | "Γ3" | "Γ4")) {
            let w_duals = pair
                .labels
                .is_some_and(|(p, q)| p.is_generator() && q.is_generator());
            ensure(
                w_duals,
                format!("{:?} not certified by w-duals", rec.diagram.parts()),
            )?;
        }
    }
    ensure(
        report.rank_one.in_7_plus_35 == report.rank_one.samples,
        "rank-one signature",
    )?;
    Ok("20 excluded, 2 admissible".into())
}

fn module_membership() -> Result<String, String> {
    let p = DecompositionProjectors::get();
    let om = cayley::omega();
    let mut r = Sampler::new(SEED);
    for _ in 0..50 {
        let delta = r.rank_one_nilpotent().rho(om);
        ensure(
            DecompositionProjectors::project(&p.p1, &delta).is_zero(),
            "p1 ≠ 0",
        )?;
        ensure(
            DecompositionProjectors::project(&p.p27, &delta).is_zero(),
            "p27 ≠ 0",
        )?;
    }
    for _ in 0..10 {
        let (v, w) = (r.nonzero_vector(), r.nonzero_vector());
        let delta = cayley::skew_delta(&v, &w);
        ensure(
            DecompositionProjectors::project(&p.p7, &delta) == delta,
            "skew ansatz not in Λ⁴₇",
        )?;
    }
    Ok("50 rank-one, 10 skew".into())
}

fn lie_frame() -> Result<String, String> {
    for frame in [LieFrame::connection(), LieFrame::killing()] {
        ensure(frame.jacobi_violation().is_none(), "Jacobi identity")?;
        ensure(frame.antisymmetry_violation().is_none(), "antisymmetry")?;
        for i in 0..COFRAME_DIM {
            let dd = ChamberForm::generator(i).d(&frame).d(&frame);
            ensure(dd.is_zero(), format!("d² ≠ 0 on generator {i}"))?;
        }
    }
    let n = LieFrame::connection()
        .normalizer(&span_of(&[0, 1, 2]))
        .map_err(|e| e.to_string())?;
    let mut joined = n.clone();
    joined.extend(span_of(&[0, 1, 2, 3, 4, 5]));
    ensure(
        n.len() == 6 && linalg::span_rank(&joined) == 6,
        "normalizer",
    )?;
    Ok("normalizer dim 6".into())
}

fn bryant_salamon() -> Result<String, String> {
    let frame = LieFrame::connection();
    let bs = build_bryant_salamon();
    ensure(
        bs.phi == invariant::displayed_bryant_salamon(),
        "built form differs from the display",
    )?;
    let expected = ChamberForm::monomial(
        ChamberScalar::monomial(int(-16), 3, -4),
        &[DS, a(4), a(5), a(6)],
    );
    ensure(
        bs.phi.coeff(&[DS, a(4), a(5), a(6)]) == expected.coeff(&[DS, a(4), a(5), a(6)]),
        "ds∧A⁴⁵⁶ coefficient",
    )?;
    ensure(bs.phi.d(&frame).is_zero(), "dΦ ≠ 0")?;
    let x1234 = ChamberForm::monomial(ChamberScalar::one(), &[x(1), x(2), x(3), x(4)]);
    let mixed = invariant::invariant_mixed_form();
    for g in 3..6 {
        ensure(
            mixed.lie_derivative(g, &frame).is_zero(),
            "mixed form not invariant",
        )?;
        ensure(
            x1234.lie_derivative(g, &frame).is_zero(),
            "X¹²³⁴ not invariant",
        )?;
    }
    Ok(format!("{} terms", bs.phi.len()))
}

fn perturbed_closedness() -> Result<String, String> {
    let frame = LieFrame::connection();
    let p = |c: &[i64]| -> Vec<FieldScalar> { c.iter().map(|&n| int(n)).collect() };
    let mut fields = vec![
        InvariantField::from_t_polys(&p(&[1]), &[], &[]),
        InvariantField::from_t_polys(&p(&[0, 0, 1]), &p(&[1, 0, 0, 0, 1]), &p(&[0, 3])),
    ];
    let mut r = Sampler::new(SEED);
    for _ in 0..5 {
        let mut poly = || -> Vec<FieldScalar> {
            let deg = r.int_in(1, 4) as usize;
            (0..=deg).map(|_| int(r.int_in(-5, 5))).collect()
        };
        let (u, v, w) = (poly(), poly(), poly());
        fields.push(InvariantField::from_t_polys(&u, &v, &w));
    }
    for y in &fields {
        let form = invariant::perturbed_form(y).map_err(|e| e.to_string())?;
        ensure(form.d(&frame).is_zero(), "perturbed form not closed")?;
    }
    Ok(format!("{} fields", fields.len()))
}

fn killing() -> Result<String, String> {
    let frame = LieFrame::connection();
    let g = bryant_salamon_metric();
    for i in 3..6 {
        ensure(
            g.lie_derivative(i, &frame).is_zero(),
            format!("L_A{} g ≠ 0", i + 1),
        )?;
    }
    Ok("A4, A5, A6".into())
}

fn discrepancy() -> Result<String, String> {
    let cube = cayley::pair_contraction_cube(&Vector::basis(7), &Vector::basis(8), cayley::omega())
        .map_err(|e| e.to_string())?;
    ensure(!cube.is_zero(), "cube vanishes")?;
    let computed = spin7_core::harness::blade_text(&cube);
    Ok(format!(
        "computed {computed}, displayed {}",
        spin7_core::harness::DISPLAYED_CUBE
    ))
}

#[test]
fn acceptance() {
    let outcomes = vec![
        criterion(1, "stabilizer dimension", secs(10), stabilizer),
        criterion(2, "decomposition", secs(10), decomposition),
        criterion(3, "nondegeneracy", secs(30), nondegeneracy),
        criterion(4, "rank-one identities", secs(30), rank_one),
        criterion(5, "classification", secs(15 * 60), classification),
        criterion(6, "module membership", secs(60), module_membership),
        criterion(7, "lie frame", secs(10), lie_frame),
        criterion(8, "bryant-salamon form", secs(60), bryant_salamon),
        criterion(9, "perturbed closedness", secs(120), perturbed_closedness),
        criterion(10, "killing field", secs(10), killing),
        criterion(11, "discrepancy report", None, discrepancy),
    ];
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.ok).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn harness_report_agrees() {
    let report = spin7_core::harness::run(&spin7_core::harness::RunConfig {
        suites: vec![spin7_core::harness::Suite::Classify],
        seed: SEED,
        ..Default::default()
    });
    assert_eq!(report.exit_code(), 0);
    let admissible = &report.facts["admissible_diagrams"];
    assert_eq!(
        admissible,
        &serde_json::json!([[2, 1, 1, 1, 1, 1, 1], [1, 1, 1, 1, 1, 1, 1, 1]])
    );
}
