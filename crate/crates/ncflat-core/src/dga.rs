//! The canonical flat connection on A⊗A with its induced right action, the
//! coproduct Δ, the nested-commutator sum ψ, and the differential graded
//! algebra an idempotent attaches to that data — plus the inner variant d⊗id
//! and a sampling probe for the outer right action.
//!
//! Throughout, M = A⊗A carries the outer left action a·(b⊗c) = ab⊗c, under
//! which it is free on the generators 1⊗aᵥ.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{tensor_over_a, Algebra, AlgebraError, ModuleRep, TensorOverA};
use crate::connection::{
    flatness, induce_right_action, witness_first_column, Connection, ConnectionError,
};
use crate::field::Scalar;
use crate::mat::{outer_vec, vec_add, vec_sub, AffineSolution, Mat};
use crate::report::Report;
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DgaError {
    /// The designated element does not satisfy e² = e.
    NotIdempotent(String),
    Algebra(AlgebraError),
}

impl fmt::Display for DgaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DgaError::NotIdempotent(e) => write!(f, "element is not idempotent: {e}"),
            DgaError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DgaError {}

impl From<AlgebraError> for DgaError {
    fn from(e: AlgebraError) -> Self {
        DgaError::Algebra(e)
    }
}

/// A⊗A with the outer left action a·(b⊗c) = ab⊗c and no right action.
pub fn outer_module(algebra: &Arc<Algebra>) -> ModuleRep {
    let n = algebra.dim();
    let id = Mat::identity(algebra.field(), n);
    let left = (0..n).map(|k| algebra.left_mat(k).kron(&id)).collect();
    ModuleRep::new(algebra.clone(), n * n, Some(left), None)
        .expect("the outer action inherits associativity and unitality from A")
}

/// The right action (a⊗b)·c = ac⊗b + a[b,c]⊗1, transcribed directly from the
/// closed formula — the independent route against which the machinery-induced
/// action is compared.
pub fn act_univ_mats(algebra: &Arc<Algebra>) -> Vec<Mat> {
    let field = algebra.field();
    let n = algebra.dim();
    let id = Mat::identity(field, n);
    // x ↦ x⊗1 as an n²×n matrix.
    let adjoin_unit = id.kron(&algebra.unit_col());
    (0..n)
        .map(|c| {
            let first = algebra.right_mat(c).kron(&id);
            // b ↦ [b, a_c]
            let ad = algebra.right_mat(c).sub(algebra.left_mat(c));
            let comm = adjoin_unit
                .matmul(algebra.mult_matrix())
                .matmul(&id.kron(&ad));
            first.add(&comm)
        })
        .collect()
}

/// The inner right action (a⊗b)·c = ac⊗b.
pub fn inner_action_mats(algebra: &Arc<Algebra>) -> Vec<Mat> {
    let n = algebra.dim();
    let id = Mat::identity(algebra.field(), n);
    (0..n).map(|c| algebra.right_mat(c).kron(&id)).collect()
}

/// A⊗A as a validated bimodule: outer left action, closed-formula right
/// action. Validation proves the formula really is a bimodule structure.
pub fn example_bimodule(algebra: &Arc<Algebra>) -> ModuleRep {
    let n = algebra.dim();
    let id = Mat::identity(algebra.field(), n);
    let left = (0..n).map(|k| algebra.left_mat(k).kron(&id)).collect();
    ModuleRep::new(algebra.clone(), n * n, Some(left), Some(act_univ_mats(algebra)))
        .expect("ac⊗b + a[b,c]⊗1 is a right action commuting with the outer left one")
}

/// The canonical connection on the outer module:
/// ∇(a⊗b) = 1⊗a⊗b − a⊗1⊗b + a⊗b⊗1 − ab⊗1⊗1.
pub fn example_connection(algebra: &Arc<Algebra>) -> Connection {
    let n = algebra.dim();
    let unit = algebra.unit().to_vec();
    let module = Arc::new(outer_module(algebra));
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (algebra.basis_elem(i), algebra.basis_elem(j));
            let prod = algebra.mul(&ei, &ej);
            let mut v = outer_vec(&unit, &outer_vec(&ei, &ej));
            v = vec_sub(&v, &outer_vec(&ei, &outer_vec(&unit, &ej)));
            v = vec_add(&v, &outer_vec(&ei, &outer_vec(&ej, &unit)));
            v = vec_sub(&v, &outer_vec(&prod, &outer_vec(&unit, &unit)));
            images.push(v);
        }
    }
    let matrix = Mat::from_images(algebra.field(), n * n * n, &images);
    Connection::new(module, matrix).expect("the image matrix is n³×n² by construction")
}

/// ∇ = d⊗id on the outer module: a⊗b ↦ 1⊗a⊗b − a⊗1⊗b.
pub fn inner_connection(algebra: &Arc<Algebra>) -> Connection {
    let n = algebra.dim();
    let id = Mat::identity(algebra.field(), n);
    let id2 = Mat::identity(algebra.field(), n * n);
    let module = Arc::new(outer_module(algebra));
    let matrix = algebra
        .unit_col()
        .kron(&id2)
        .sub(&id.kron(&algebra.unit_col()).kron(&id));
    Connection::new(module, matrix).expect("the image matrix is n³×n² by construction")
}

/// Δ: A⊗A → (A⊗A)⊗_A(A⊗A), a⊗b ↦ (a⊗1)⊗(1⊗b), with build-time certificates:
/// bimodule linearity, coassociativity, the collapse of the square to A⊗A⊗A,
/// and Δ(e⊗1) = (e⊗1)⊗(e⊗1) for each catalogued idempotent.
#[derive(Debug, Clone)]
pub struct DeltaMap {
    bimodule: ModuleRep,
    square: TensorOverA,
    matrix: Mat,
    report: Report,
}

impl DeltaMap {
    pub fn bimodule(&self) -> &ModuleRep {
        &self.bimodule
    }

    /// (A⊗A)⊗_A(A⊗A) as a quotient of the fourfold tensor power.
    pub fn square(&self) -> &TensorOverA {
        &self.square
    }

    /// Δ in quotient coordinates: an (dim square)×n² matrix.
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn report(&self) -> &Report {
        &self.report
    }
}

pub fn delta(algebra: &Arc<Algebra>) -> Result<DeltaMap, AlgebraError> {
    let field = algebra.field();
    let n = algebra.dim();
    let m2 = n * n;
    let unit = algebra.unit().to_vec();
    let bimodule = example_bimodule(algebra);
    let square = tensor_over_a(&bimodule, &bimodule)?;

    // The ambient lift a⊗b ↦ (a⊗1)⊗(1⊗b) into (A⊗A)⊗(A⊗A).
    let mut lift_cols = Vec::with_capacity(m2);
    for i in 0..n {
        for j in 0..n {
            let first = outer_vec(&algebra.basis_elem(i), &unit);
            let second = outer_vec(&unit, &algebra.basis_elem(j));
            lift_cols.push(outer_vec(&first, &second));
        }
    }
    let lift = Mat::from_images(field, m2 * m2, &lift_cols);
    let matrix = square.quotient().projection().matmul(&lift);

    let mut report = Report::new();

    report.check(
        "square-collapses-to-triple",
        "(A⊗A)⊗_A(A⊗A) has dimension n³",
        square.dim() == n * n * n,
        || format!("quotient dimension {} ≠ {}", square.dim(), n * n * n),
    );

    let tmod = square.module();
    let (tl, tr) = (tmod.left_mats()?, tmod.right_mats()?);
    let (ml, mr) = (bimodule.left_mats()?, bimodule.right_mats()?);
    for k in 0..n {
        let name = &algebra.names()[k];
        let dl = matrix.matmul(&ml[k]).sub(&tl[k].matmul(&matrix));
        report.check(
            &format!("delta-left-linear[{name}]"),
            "Δ(a·m) = a·Δ(m)",
            dl.is_zero(),
            || witness_first_column(&dl),
        );
        let dr = matrix.matmul(&mr[k]).sub(&tr[k].matmul(&matrix));
        report.check(
            &format!("delta-right-linear[{name}]"),
            "Δ(m·a) = Δ(m)·a",
            dr.is_zero(),
            || witness_first_column(&dr),
        );
    }

    // Coassociativity: the two composites into M⊗M⊗M agree before any
    // quotient is taken, so the descended maps through any ⊗_A quotient are
    // induced by one and the same ambient map.
    let expand = |on_first: bool, v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![field.zero(); m2 * m2 * m2];
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = (idx / m2, idx % m2);
            let lifted = if on_first { lift.col(a) } else { lift.col(b) };
            for (ldx, lc) in lifted.iter().enumerate() {
                if lc.is_zero() {
                    continue;
                }
                let pos = if on_first { ldx * m2 + b } else { a * (m2 * m2) + ldx };
                out[pos] = &out[pos] + &(c * lc);
            }
        }
        out
    };
    let mut coassoc_witness = String::new();
    let coassoc = (0..m2).all(|k| {
        let base = lift.col(k);
        let ok = expand(true, &base) == expand(false, &base);
        if !ok {
            coassoc_witness = format!("the lifts differ on basis element {k}");
        }
        ok
    });
    report.check(
        "delta-coassociative",
        "(Δ⊗id)∘Δ = (id⊗Δ)∘Δ",
        coassoc,
        || coassoc_witness.clone(),
    );

    for (name, e) in algebra.idempotents() {
        let e1 = outer_vec(&e, &unit);
        let lhs = matrix.apply(&e1);
        let rhs = square.class_of(&e1, &e1);
        report.check(
            &format!("delta-idempotent[{name}]"),
            "Δ(e⊗1) = (e⊗1)⊗(e⊗1)",
            lhs == rhs,
            || format!("Δ(e⊗1) and (e⊗1)⊗(e⊗1) disagree for e = {name}"),
        );
    }

    Ok(DeltaMap { bimodule, square, matrix, report })
}

/// ψ(a₀,…,aₙ; b) ∈ A^{⊗(n+1)}: the 2ⁿ-term sum over subsets
/// {k₁<…<kᵢ} ⊆ {1..n}, where the head becomes the nested commutator
/// a₀[a_{k₁},[a_{k₂},…[a_{kᵢ},b]…]] and each selected slot is replaced by 1.
/// The empty subset contributes a₀b⊗a₁⊗…⊗aₙ.
pub fn psi(algebra: &Algebra, heads: &[Vec<Scalar>], b: &[Scalar]) -> Vec<Scalar> {
    assert!(!heads.is_empty(), "ψ needs at least the head element");
    let n = heads.len() - 1;
    let unit = algebra.unit().to_vec();
    let dim_out = algebra.dim().pow(heads.len() as u32);
    let mut out = vec![algebra.field().zero(); dim_out];
    for mask in 0usize..(1 << n) {
        // Innermost commutator first: the largest selected index wraps b.
        let mut core = b.to_vec();
        for l in (1..=n).rev() {
            if mask & (1 << (l - 1)) != 0 {
                core = algebra.commutator(&heads[l], &core);
            }
        }
        let mut term = algebra.mul(&heads[0], &core);
        for l in 1..=n {
            let slot = if mask & (1 << (l - 1)) != 0 { &unit } else { &heads[l] };
            term = outer_vec(&term, slot);
        }
        out = vec_add(&out, &term);
    }
    out
}

/// The differential graded algebra of an idempotent e: graded pieces
/// A^{⊗(k+1)} for k ≤ cap, the ψ-product, and the differential
/// d(a₀⊗…⊗aₖ) = ea₀⊗1⊗a₁⊗…⊗aₖ + (−1)^{k+1}ψ(a₀,…,aₖ;e)⊗1
///             + Σᵢ(−1)ⁱ a₀⊗…⊗aᵢ₋₁⊗1⊗aᵢ⊗…⊗aₖ.
/// The axioms (d² = 0, graded Leibniz, associativity) are verified at build
/// time and recorded in the report.
#[derive(Debug, Clone)]
pub struct DgaInstance {
    algebra: Arc<Algebra>,
    e: Vec<Scalar>,
    cap: usize,
    dims: Vec<usize>,
    products: BTreeMap<(usize, usize), Mat>,
    differentials: Vec<Mat>,
    report: Report,
}

impl DgaInstance {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn idempotent(&self) -> &[Scalar] {
        &self.e
    }

    pub fn degree_cap(&self) -> usize {
        self.cap
    }

    /// Dimension of the degree-k piece A^{⊗(k+1)}.
    pub fn dim_of(&self, k: usize) -> usize {
        self.dims[k]
    }

    /// The product matrix degree p × degree q → degree p+q, if p+q ≤ cap.
    pub fn product(&self, p: usize, q: usize) -> Option<&Mat> {
        self.products.get(&(p, q))
    }

    /// The differential out of degree k, defined for k < cap.
    pub fn differential(&self, k: usize) -> Option<&Mat> {
        self.differentials.get(k)
    }

    pub fn report(&self) -> &Report {
        &self.report
    }
}

/// Splits a degree-k basis index into its k+1 slot indices, leftmost first.
fn slot_indices(mut idx: usize, slots: usize, dim: usize) -> Vec<usize> {
    let mut out = vec![0usize; slots];
    for s in (0..slots).rev() {
        out[s] = idx % dim;
        idx /= dim;
    }
    out
}

fn basis_vec(field: crate::field::FieldSpec, dim: usize, idx: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); dim];
    v[idx] = field.one();
    v
}

/// Bilinear application of a stored product matrix to coordinate vectors.
fn apply_product(
    products: &BTreeMap<(usize, usize), Mat>,
    dims: &[usize],
    p: usize,
    q: usize,
    x: &[Scalar],
    y: &[Scalar],
) -> Vec<Scalar> {
    let mat = &products[&(p, q)];
    let field = mat.field();
    let mut out = vec![field.zero(); dims[p + q]];
    for (i, xv) in x.iter().enumerate() {
        if xv.is_zero() {
            continue;
        }
        for (j, yv) in y.iter().enumerate() {
            if yv.is_zero() {
                continue;
            }
            let c = xv * yv;
            let col = i * dims[q] + j;
            for (r, slot) in out.iter_mut().enumerate() {
                let v = mat.at(r, col);
                if !v.is_zero() {
                    *slot = &*slot + &(&c * v);
                }
            }
        }
    }
    out
}

pub fn dga_build(
    algebra: &Arc<Algebra>,
    e: &[Scalar],
    cap: usize,
) -> Result<DgaInstance, DgaError> {
    let field = algebra.field();
    let dim = algebra.dim();
    if e.len() != dim {
        return Err(DgaError::Algebra(AlgebraError::ShapeMismatch(format!(
            "idempotent has {} coordinates, expected {dim}",
            e.len()
        ))));
    }
    if !algebra.is_idempotent(e) {
        return Err(DgaError::NotIdempotent(algebra.render(e)));
    }
    let unit = algebra.unit().to_vec();
    let dims: Vec<usize> = (0..=cap).map(|k| dim.pow((k + 1) as u32)).collect();
    let basis_of = |indices: &[usize]| -> Vec<Vec<Scalar>> {
        indices.iter().map(|&i| algebra.basis_elem(i)).collect()
    };

    let mut products = BTreeMap::new();
    for p in 0..=cap {
        for q in 0..=cap - p {
            let cols = dims[p] * dims[q];
            let mut images = Vec::with_capacity(cols);
            for col in 0..cols {
                let (alpha, beta) = (col / dims[q], col % dims[q]);
                let heads = basis_of(&slot_indices(alpha, p + 1, dim));
                let tail = slot_indices(beta, q + 1, dim);
                let mut img = psi(algebra, &heads, &algebra.basis_elem(tail[0]));
                for &t in &tail[1..] {
                    img = outer_vec(&img, &algebra.basis_elem(t));
                }
                images.push(img);
            }
            products.insert((p, q), Mat::from_images(field, dims[p + q], &images));
        }
    }

    let mut differentials = Vec::with_capacity(cap);
    for k in 0..cap {
        let mut images = Vec::with_capacity(dims[k]);
        for col in 0..dims[k] {
            let slots = basis_of(&slot_indices(col, k + 1, dim));
            // ea₀ ⊗ 1 ⊗ a₁ ⊗ … ⊗ aₖ
            let mut v = outer_vec(&algebra.mul(e, &slots[0]), &unit);
            for s in &slots[1..] {
                v = outer_vec(&v, s);
            }
            // (−1)^{k+1} ψ(a₀,…,aₖ; e) ⊗ 1
            let psi_term = outer_vec(&psi(algebra, &slots, e), &unit);
            v = if (k + 1) % 2 == 0 { vec_add(&v, &psi_term) } else { vec_sub(&v, &psi_term) };
            // Σ_{l=1}^{k} (−1)ˡ a₀⊗…⊗a_{l−1}⊗1⊗a_l⊗…⊗aₖ
            for l in 1..=k {
                let mut w = slots[0].clone();
                for s in &slots[1..l] {
                    w = outer_vec(&w, s);
                }
                w = outer_vec(&w, &unit);
                for s in &slots[l..] {
                    w = outer_vec(&w, s);
                }
                v = if l % 2 == 0 { vec_add(&v, &w) } else { vec_sub(&v, &w) };
            }
            images.push(v);
        }
        differentials.push(Mat::from_images(field, dims[k + 1], &images));
    }

    let mut report = Report::new();

    report.check(
        "product-degree0-is-multiplication",
        "ψ(a; b) = ab in degree 0",
        products[&(0, 0)] == *algebra.mult_matrix(),
        || String::from("the degree-0 product differs from the algebra multiplication"),
    );

    if cap >= 1 {
        // Specializing the displayed differential to degree 0 leaves
        // d(a) = ea⊗1 − ae⊗1; the generic loop must reproduce it.
        let mut hand = Vec::with_capacity(dim);
        for i in 0..dim {
            let a = algebra.basis_elem(i);
            hand.push(vec_sub(
                &outer_vec(&algebra.mul(e, &a), &unit),
                &outer_vec(&algebra.mul(&a, e), &unit),
            ));
        }
        report.check(
            "dga-degree0-commutator",
            "d(a) = ea⊗1 − ae⊗1",
            differentials[0] == Mat::from_images(field, dims[1], &hand),
            || String::from("degree-0 differential is not the commutator with e"),
        );
    }

    for k in 0..cap.saturating_sub(1) {
        let composed = differentials[k + 1].matmul(&differentials[k]);
        report.check(
            &format!("dga-d-squared[{k}]"),
            "d∘d = 0",
            composed.is_zero(),
            || witness_first_column(&composed),
        );
    }

    for p in 0..cap {
        for q in 0..cap - p {
            let mut ok = true;
            let mut witness = String::new();
            'leibniz: for alpha in 0..dims[p] {
                let ea = basis_vec(field, dims[p], alpha);
                let da = differentials[p].col(alpha);
                for beta in 0..dims[q] {
                    let eb = basis_vec(field, dims[q], beta);
                    let db = differentials[q].col(beta);
                    let prod_col = products[&(p, q)].col(alpha * dims[q] + beta);
                    let lhs = differentials[p + q].apply(&prod_col);
                    let t1 = apply_product(&products, &dims, p + 1, q, &da, &eb);
                    let t2 = apply_product(&products, &dims, p, q + 1, &ea, &db);
                    let rhs = if p % 2 == 0 { vec_add(&t1, &t2) } else { vec_sub(&t1, &t2) };
                    if lhs != rhs {
                        ok = false;
                        witness = format!("fails on basis pair ({alpha}, {beta})");
                        break 'leibniz;
                    }
                }
            }
            report.check(
                &format!("dga-leibniz[{p},{q}]"),
                "d(ξη) = d(ξ)η + (−1)^deg ξ·d(η)",
                ok,
                || witness.clone(),
            );
        }
    }

    for p in 0..=cap {
        for q in 0..=cap - p {
            for r in 0..=cap - p - q {
                let mut ok = true;
                let mut witness = String::new();
                'assoc: for alpha in 0..dims[p] {
                    let ea = basis_vec(field, dims[p], alpha);
                    for beta in 0..dims[q] {
                        let ab = products[&(p, q)].col(alpha * dims[q] + beta);
                        for gamma in 0..dims[r] {
                            let ec = basis_vec(field, dims[r], gamma);
                            let bc = products[&(q, r)].col(beta * dims[r] + gamma);
                            let lhs = apply_product(&products, &dims, p + q, r, &ab, &ec);
                            let rhs = apply_product(&products, &dims, p, q + r, &ea, &bc);
                            if lhs != rhs {
                                ok = false;
                                witness =
                                    format!("fails on basis triple ({alpha}, {beta}, {gamma})");
                                break 'assoc;
                            }
                        }
                    }
                }
                report.check(
                    &format!("dga-associative[{p},{q},{r}]"),
                    "(ξη)ζ = ξ(ηζ)",
                    ok,
                    || witness.clone(),
                );
            }
        }
    }

    Ok(DgaInstance {
        algebra: algebra.clone(),
        e: e.to_vec(),
        cap,
        dims,
        products,
        differentials,
        report,
    })
}

/// Outcome of the sampling probe for the outer right action
/// (a⊗b)·c = a⊗(bc): whether any map satisfying the connection conditions
/// induces it, and how flatness fared on random members of the matching
/// family. A probe is evidence, never a proof in either direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterProbe {
    /// `None`: no connection-condition map induces the outer action over this
    /// field. `Some(k)`: the matching maps form a k-dimensional affine family.
    pub matching_family_dim: Option<usize>,
    pub samples_tried: usize,
    pub flat_hits: usize,
}

/// Searches the affine family of connection-condition maps on the outer
/// module whose induced right action is exactly (a⊗b)·c = a⊗(bc), then tests
/// random members for flatness. The outer module is free on the generators
/// 1⊗aᵥ, so the family is parametrized by its values on those generators.
pub fn outer_action_probe(
    algebra: &Arc<Algebra>,
    seed: u64,
    samples: usize,
) -> Result<OuterProbe, ConnectionError> {
    let field = algebra.field();
    let n = algebra.dim();
    let m = n * n;
    let module = Arc::new(outer_module(algebra));
    let ctr = module.contraction_left()?;
    let id_m = Mat::identity(field, m);

    let base = inner_connection(algebra);
    debug_assert!(induce_right_action(&base) == inner_action_mats(algebra));

    // Homogeneous perturbations: left-linear maps into the kernel of the
    // contraction, freely determined on the generators 1⊗aᵥ.
    let kernel = ctr.kernel();
    let left_on_first: Vec<Mat> = (0..n)
        .map(|p| algebra.left_mat(p).kron(&id_m))
        .collect();
    let mut perturbations: Vec<Mat> = Vec::with_capacity(n * kernel.rows());
    for v in 0..n {
        for r in 0..kernel.rows() {
            let kappa = kernel.row(r);
            let mut h = Mat::zero(field, n * m, m);
            for p in 0..n {
                let img = left_on_first[p].apply(kappa);
                for (row, val) in img.into_iter().enumerate() {
                    if !val.is_zero() {
                        h.set(row, p * n + v, val);
                    }
                }
            }
            perturbations.push(h);
        }
    }

    // Matching the outer action is affine in the coefficients t:
    //   G_j·(∇₀ + Σ tᵢhᵢ) = L_j − outer_j,  G_j = contraction∘(R_j⊗id).
    let outer_mats = {
        let id = Mat::identity(field, n);
        (0..n).map(|c| id.kron(algebra.right_mat(c))).collect::<Vec<_>>()
    };
    let left_mats = module.left_mats()?;
    let g: Vec<Mat> = (0..n)
        .map(|j| ctr.matmul(&algebra.right_mat(j).kron(&id_m)))
        .collect();

    let nvars = perturbations.len();
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n * m * m);
    let mut rhs: Vec<Scalar> = Vec::with_capacity(n * m * m);
    for j in 0..n {
        let coeffs: Vec<Mat> = perturbations.iter().map(|h| g[j].matmul(h)).collect();
        let target = left_mats[j].sub(&outer_mats[j]).sub(&g[j].matmul(base.matrix()));
        for r in 0..m {
            for c in 0..m {
                let mut row = Vec::with_capacity(nvars);
                for coeff in &coeffs {
                    row.push(coeff.at(r, c).clone());
                }
                rows.push(row);
                rhs.push(target.at(r, c).clone());
            }
        }
    }
    let system = Mat::from_rows(field, nvars, rows);

    let (particular, kernel_t) = match system.solve_affine(&rhs) {
        AffineSolution::Inconsistent => {
            return Ok(OuterProbe {
                matching_family_dim: None,
                samples_tried: 0,
                flat_hits: 0,
            })
        }
        AffineSolution::Solution { particular, kernel } => (particular, kernel),
    };

    let mut rng = Rng::new(seed);
    let mut flat_hits = 0usize;
    for _ in 0..samples {
        let mut t = particular.clone();
        for r in 0..kernel_t.rows() {
            let c = rng.scalar(field);
            if !c.is_zero() {
                for (slot, v) in t.iter_mut().zip(kernel_t.row(r)) {
                    *slot = &*slot + &(&c * v);
                }
            }
        }
        let mut matrix = base.matrix().clone();
        for (h, c) in perturbations.iter().zip(&t) {
            if !c.is_zero() {
                matrix = matrix.add(&h.scale(c));
            }
        }
        let candidate = Connection::new(module.clone(), matrix)?;
        if flatness(&candidate)?.is_flat {
            flat_hits += 1;
        }
    }

    Ok(OuterProbe {
        matching_family_dim: Some(kernel_t.rows()),
        samples_tried: samples,
        flat_hits,
    })
}
