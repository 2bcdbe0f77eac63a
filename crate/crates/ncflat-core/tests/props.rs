//! Property tests for the exact linear algebra kernel: randomized matrices
//! over ℚ and F_p, with a naive elimination oracle cross-checking the rank
//! and every structural identity stated as exact equality.

use ncflat_core::field::{FieldSpec, Scalar};
use ncflat_core::mat::{AffineSolution, Mat, QuotientData, Subspace};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct MatSpec {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl MatSpec {
    fn build(&self) -> Mat {
        Mat::from_i64(self.field, self.rows, self.cols, &self.entries)
    }
}

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::PrimeField(5)),
        Just(FieldSpec::PrimeField(97)),
    ]
}

fn mat_strategy(max_dim: usize) -> impl Strategy<Value = MatSpec> {
    (field_strategy(), 1..=max_dim, 1..=max_dim).prop_flat_map(|(field, rows, cols)| {
        proptest::collection::vec(-4i64..=4, rows * cols)
            .prop_map(move |entries| MatSpec { field, rows, cols, entries })
    })
}

fn pair_strategy(max_dim: usize) -> impl Strategy<Value = (MatSpec, MatSpec)> {
    (field_strategy(), 1..=max_dim, 1..=max_dim, 1..=max_dim).prop_flat_map(
        |(field, rows, mid, cols)| {
            let a = proptest::collection::vec(-4i64..=4, rows * mid);
            let b = proptest::collection::vec(-4i64..=4, mid * cols);
            (a, b).prop_map(move |(ea, eb)| {
                (
                    MatSpec { field, rows, cols: mid, entries: ea },
                    MatSpec { field, rows: mid, cols, entries: eb },
                )
            })
        },
    )
}

/// Row elimination from scratch, written differently from the library's rref
/// (no pivot bookkeeping, forward-only sweep), returning just the rank.
fn naive_rank(m: &Mat) -> usize {
    let mut rows: Vec<Vec<Scalar>> = m.row_iter().map(<[Scalar]>::to_vec).collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] * &inv;
                for c in 0..m.cols() {
                    let delta = &factor * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rref_is_idempotent(spec in mat_strategy(6)) {
        let m = spec.build();
        let once = m.rref();
        let twice = once.mat.rref();
        prop_assert_eq!(&once.mat, &twice.mat);
        prop_assert_eq!(&once.pivots, &twice.pivots);
    }

    #[test]
    fn rank_matches_the_naive_oracle(spec in mat_strategy(6)) {
        let m = spec.build();
        prop_assert_eq!(m.rank(), naive_rank(&m));
    }

    #[test]
    fn rank_plus_nullity_is_the_column_count(spec in mat_strategy(6)) {
        let m = spec.build();
        prop_assert_eq!(m.rank() + m.kernel().rows(), m.cols());
    }

    #[test]
    fn kernel_rows_are_annihilated(spec in mat_strategy(6)) {
        let m = spec.build();
        let kernel = m.kernel();
        for r in 0..kernel.rows() {
            prop_assert!(m.apply(kernel.row(r)).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn kron_respects_composition((a, b) in pair_strategy(3), (c, d) in pair_strategy(3)) {
        // (A⊗C)(B⊗D) = AB ⊗ CD whenever the shapes compose
        let (a, b) = (a.build(), b.build());
        let (c, d) = (c.build(), d.build());
        prop_assume!(a.field() == c.field());
        let lhs = a.kron(&c).matmul(&b.kron(&d));
        let rhs = a.matmul(&b).kron(&c.matmul(&d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn affine_solutions_substitute_back((a, b) in pair_strategy(6)) {
        // recycle the second matrix's entries as the target vector
        let m = a.build();
        let rhs: Vec<Scalar> = (0..m.rows())
            .map(|i| m.field().integer(b.entries[i % b.entries.len()]))
            .collect();
        match m.solve_affine(&rhs) {
            AffineSolution::Inconsistent => {
                // certified by rank: appending the target as a column must
                // raise the rank
                let augmented = m.hstack(&Mat::from_images(m.field(), m.rows(), &[rhs]));
                prop_assert_eq!(augmented.rank(), m.rank() + 1);
            }
            AffineSolution::Solution { particular, kernel } => {
                prop_assert_eq!(m.apply(&particular), rhs.clone());
                for r in 0..kernel.rows() {
                    prop_assert!(m.apply(kernel.row(r)).iter().all(Scalar::is_zero));
                }
            }
        }
    }

    #[test]
    fn quotients_kill_exactly_the_relations(spec in mat_strategy(5)) {
        let relations = spec.build();
        let quotient = QuotientData::new(spec.field, spec.cols, &relations);
        prop_assert_eq!(quotient.dim() + relations.rank(), spec.cols);
        for r in 0..relations.rows() {
            prop_assert!(quotient.project(relations.row(r)).iter().all(Scalar::is_zero));
        }
        // the section splits the projection: project ∘ lift = id
        let composite = quotient.projection().matmul(quotient.section());
        prop_assert_eq!(composite, Mat::identity(spec.field, quotient.dim()));
    }

    #[test]
    fn subspace_membership_round_trips(spec in mat_strategy(5)) {
        let spanning = spec.build();
        let space = Subspace::from_spanning(&spanning);
        for r in 0..spanning.rows() {
            let v = spanning.row(r);
            let coords = space.coords(v);
            prop_assert!(coords.is_some(), "spanning rows are members");
            prop_assert_eq!(space.embed(&coords.unwrap()), v.to_vec());
        }
    }
}
