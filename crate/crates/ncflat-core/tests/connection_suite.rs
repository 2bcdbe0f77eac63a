//! Connection-side battery across the presets: seeded flat connections
//! through the induced-action checks, the canonical instances, braidings of
//! flat pairs, the full theorem suite, and tensor connections. A moderate
//! seed budget here; the acceptance target in the front-end crate runs the
//! same flows at the full budget.

use std::sync::Arc;

use ncflat_core::algebra::Algebra;
use ncflat_core::calculus::UniversalCalculus;
use ncflat_core::connection::{
    braiding, flatness, perturb_to_nonflat, random_flat_connection, tensor_connection,
    verify_lemma_21, verify_theorem_24, Connection,
};
use ncflat_core::dga::{example_connection, inner_connection};
use ncflat_core::field::FieldSpec;
use ncflat_core::report::CheckStatus;

const SEEDS: u64 = 8;

fn presets() -> impl Iterator<Item = Arc<Algebra>> {
    Algebra::preset_names()
        .iter()
        .map(|name| Algebra::preset(name, FieldSpec::Rationals).unwrap())
}

#[test]
fn seeded_flat_connections_induce_right_actions() {
    for alg in presets() {
        for seed in 0..SEEDS {
            let v_dim = 1 + (seed as usize) % 2;
            let conn = random_flat_connection(Arc::clone(&alg), v_dim, seed).unwrap();
            assert!(flatness(&conn).unwrap().is_flat);
            let report = verify_lemma_21(&conn);
            assert!(
                report.all_passed(),
                "lemma battery over {:?} seed {seed}: {:?}",
                alg.preset_name(),
                report.failures().next()
            );
        }
    }
}

#[test]
fn canonical_instances_pass_the_lemma_battery() {
    for alg in presets() {
        for (name, conn) in [
            ("d on A", Connection::d_connection(Arc::clone(&alg))),
            ("outer example", example_connection(&alg)),
            ("inner example", inner_connection(&alg)),
        ] {
            assert!(flatness(&conn).unwrap().is_flat, "{name} must be flat");
            let report = verify_lemma_21(&conn);
            assert!(
                report.all_passed(),
                "{name} over {:?}: {:?}",
                alg.preset_name(),
                report.failures().next()
            );
        }
    }
}

#[test]
fn a_nonflat_perturbation_breaks_associativity_over_mat2() {
    // Only the matrix preset can exhibit this: over the commutative presets
    // the induced action stays associative for every perturbation (the
    // correction term lands in the commutator), and the free-module families
    // elsewhere are too small. Unitality and compatibility survive because
    // they do not depend on flatness.
    let alg = Algebra::preset("mat2", FieldSpec::Rationals).unwrap();
    let base = Connection::d_connection(Arc::clone(&alg));
    let mut found = false;
    for seed in 0..32 {
        let Some(bad) = perturb_to_nonflat(&base, seed, 16).unwrap() else { continue };
        assert!(!flatness(&bad).unwrap().is_flat);
        let report = verify_lemma_21(&bad);
        let assoc_failures = report
            .checks
            .iter()
            .filter(|c| c.id.starts_with("right-action-assoc") && c.status == CheckStatus::Fail)
            .count();
        for c in &report.checks {
            if c.id.starts_with("right-action-unital") || c.id.starts_with("left-right-compat") {
                assert_eq!(c.status, CheckStatus::Pass, "{} must hold without flatness", c.id);
            }
        }
        if assoc_failures > 0 {
            let witness = report.failures().next().unwrap();
            assert!(witness.witness.is_some(), "failures must carry coordinates");
            found = true;
            break;
        }
    }
    assert!(found, "no associativity-breaking perturbation found in the budget");
}

#[test]
fn braidings_of_flat_pairs_are_involutive_isomorphisms() {
    for alg in presets() {
        let cm = random_flat_connection(Arc::clone(&alg), 1, 5).unwrap();
        let cn = random_flat_connection(Arc::clone(&alg), 2, 11).unwrap();
        let fwd = braiding(&cm, &cn).unwrap();
        assert!(
            fwd.report.all_passed(),
            "braiding over {:?}: {:?}",
            alg.preset_name(),
            fwd.report.failures().next()
        );
        let dim = fwd.source.dim();
        let id = ncflat_core::Mat::identity(alg.field(), dim);
        assert_eq!(fwd.inverse.matmul(&fwd.matrix), id, "c∘c = id on M⊗N");
    }
}

#[test]
fn the_theorem_suite_passes_for_seeded_flat_connections() {
    for alg in presets() {
        let calc = UniversalCalculus::new(Arc::clone(&alg), 3).unwrap();
        for seed in [0, 9] {
            let conn = random_flat_connection(Arc::clone(&alg), 1, seed).unwrap();
            let report = verify_theorem_24(&conn, &calc).unwrap();
            assert!(
                report.all_passed(),
                "theorem suite over {:?} seed {seed}: {:?}",
                alg.preset_name(),
                report.failures().next()
            );
        }
    }
}

#[test]
fn tensor_connections_compose_flatness() {
    for alg in presets() {
        let cm = random_flat_connection(Arc::clone(&alg), 1, 21).unwrap();
        let cn = random_flat_connection(Arc::clone(&alg), 1, 22).unwrap();
        let (_, tens) = tensor_connection(&cm, &cn).unwrap();
        assert!(flatness(&tens).unwrap().is_flat, "flat ⊗ flat over {:?}", alg.preset_name());
    }
    // flat ⊗ non-flat lands non-flat; constructed over mat2 where non-flat
    // perturbations exist
    let alg = Algebra::preset("mat2", FieldSpec::Rationals).unwrap();
    let cm = random_flat_connection(Arc::clone(&alg), 1, 3).unwrap();
    let base = Connection::d_connection(Arc::clone(&alg));
    let bad = perturb_to_nonflat(&base, 1, 16).unwrap().expect("a non-flat member exists");
    let (_, tens) = tensor_connection(&cm, &bad).unwrap();
    assert!(!flatness(&tens).unwrap().is_flat, "flat ⊗ non-flat must stay non-flat");
}
