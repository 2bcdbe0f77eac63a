//! The universal differential calculus of an algebra: graded pieces Ωᵏ as
//! canonical subspaces of tensor powers A^{⊗(k+1)}, the concatenation
//! product, the differential, and the bimodule structure on each degree.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Algebra, AlgebraError, ModuleRep};
use crate::field::Scalar;
use crate::mat::{outer_vec, Mat, Subspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CalculusError {
    DegreeCapExceeded { requested: usize, cap: usize },
    /// A result that must lie in a constructed subspace did not — an internal
    /// consistency failure, never expected to fire.
    ResultOutsideSubspace(String),
    Algebra(AlgebraError),
}

impl fmt::Display for CalculusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalculusError::DegreeCapExceeded { requested, cap } => {
                write!(f, "degree {requested} exceeds the configured cap {cap}")
            }
            CalculusError::ResultOutsideSubspace(what) => {
                write!(f, "result fell outside its subspace: {what}")
            }
            CalculusError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CalculusError {}

impl From<AlgebraError> for CalculusError {
    fn from(e: AlgebraError) -> Self {
        CalculusError::Algebra(e)
    }
}

/// A differential form: subspace coordinates at a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    pub degree: usize,
    pub coords: Vec<Scalar>,
}

/// One graded piece ΩᵏA ⊆ A^{⊗(k+1)}, with the multiplication actions of A
/// into the first and last tensor legs restricted to subspace coordinates.
#[derive(Debug, Clone)]
pub struct OmegaSpace {
    degree: usize,
    subspace: Subspace,
    left: Vec<Mat>,
    right: Vec<Mat>,
}

impl OmegaSpace {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspace.ambient_dim()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    /// Action of aᵢ by multiplication into the first leg.
    pub fn left(&self) -> &[Mat] {
        &self.left
    }

    /// Action of aᵢ by multiplication into the last leg.
    pub fn right(&self) -> &[Mat] {
        &self.right
    }

    /// The graded piece as a validated bimodule.
    pub fn module(&self, algebra: Arc<Algebra>) -> Result<ModuleRep, AlgebraError> {
        ModuleRep::new(algebra, self.dim(), Some(self.left.clone()), Some(self.right.clone()))
    }
}

/// ΩA up to a degree cap, built once per algebra and shared.
#[derive(Debug, Clone)]
pub struct UniversalCalculus {
    algebra: Arc<Algebra>,
    cap: usize,
    spaces: Vec<OmegaSpace>,
    /// d restricted to subspace coordinates, `d_restricted[k]: Ωᵏ → Ω^{k+1}`.
    d_restricted: Vec<Mat>,
}

impl UniversalCalculus {
    pub fn new(algebra: Arc<Algebra>, cap: usize) -> Result<UniversalCalculus, CalculusError> {
        let field = algebra.field();
        let n = algebra.dim();

        let mut spaces: Vec<OmegaSpace> = Vec::with_capacity(cap + 1);
        spaces.push(make_space(&algebra, 0, Subspace::full(field, n)));

        for k in 0..cap {
            // Ω^{k+1} = { T ∈ A⊗Ωᵏ : multiplying the first two legs gives 0 }.
            let prev = &spaces[k];
            let embed = prev.subspace.embedding_matrix();
            let into_big = Mat::identity(field, n).kron(&embed);
            let first_leg_mult = algebra
                .mult_matrix()
                .kron(&Mat::identity(field, pow(n, k)));
            let constraint = first_leg_mult.matmul(&into_big);
            let kernel_coords = constraint.kernel();
            let ambient_rows = kernel_coords.matmul(&into_big.transpose());
            spaces.push(make_space(&algebra, k + 1, Subspace::from_spanning(&ambient_rows)));
        }

        let mut d_restricted = Vec::with_capacity(cap);
        for k in 0..cap {
            let ambient = d_ambient(&algebra, k);
            let restricted = spaces[k]
                .subspace
                .restrict_map(&ambient, &spaces[k + 1].subspace)
                .ok_or_else(|| {
                    CalculusError::ResultOutsideSubspace(format!(
                        "d of a degree-{k} form is not a degree-{} form",
                        k + 1
                    ))
                })?;
            d_restricted.push(restricted);
        }

        Ok(UniversalCalculus { algebra, cap, spaces, d_restricted })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn omega(&self, k: usize) -> Result<&OmegaSpace, CalculusError> {
        self.spaces
            .get(k)
            .ok_or(CalculusError::DegreeCapExceeded { requested: k, cap: self.cap })
    }

    /// d: Ωᵏ → Ω^{k+1} in subspace coordinates; defined for k < cap.
    pub fn d(&self, k: usize) -> Result<&Mat, CalculusError> {
        self.d_restricted
            .get(k)
            .ok_or(CalculusError::DegreeCapExceeded { requested: k + 1, cap: self.cap })
    }

    /// The ambient alternating-insertion operator A^{⊗(k+1)} → A^{⊗(k+2)}
    /// whose restriction to Ωᵏ is d. Exposed because its square vanishes
    /// identically on the whole tensor power, which checks d∘d = 0 at the top
    /// degree without constructing Ω^{cap+1}.
    pub fn d_ambient_matrix(&self, k: usize) -> Mat {
        d_ambient(&self.algebra, k)
    }

    pub fn form(&self, k: usize, coords: Vec<Scalar>) -> Result<Form, CalculusError> {
        let space = self.omega(k)?;
        if coords.len() != space.dim() {
            return Err(CalculusError::ResultOutsideSubspace(format!(
                "degree-{k} coordinate vector of length {}, expected {}",
                coords.len(),
                space.dim()
            )));
        }
        Ok(Form { degree: k, coords })
    }

    /// A form from its ambient representative, which must lie in Ωᵏ.
    pub fn form_from_ambient(&self, k: usize, ambient: &[Scalar]) -> Result<Form, CalculusError> {
        let space = self.omega(k)?;
        let coords = space.subspace.coords(ambient).ok_or_else(|| {
            CalculusError::ResultOutsideSubspace(format!("vector is not a degree-{k} form"))
        })?;
        Ok(Form { degree: k, coords })
    }

    pub fn ambient(&self, form: &Form) -> Result<Vec<Scalar>, CalculusError> {
        Ok(self.omega(form.degree)?.subspace.embed(&form.coords))
    }

    pub fn apply_d(&self, form: &Form) -> Result<Form, CalculusError> {
        let d = self.d(form.degree)?;
        Ok(Form { degree: form.degree + 1, coords: d.apply(&form.coords) })
    }

    /// Concatenation product Ωᵏ × Ωˡ → Ω^{k+l}: the middle legs multiply.
    pub fn product(&self, a: &Form, b: &Form) -> Result<Form, CalculusError> {
        let k = a.degree;
        let l = b.degree;
        self.omega(k + l)?;
        let x = self.ambient(a)?;
        let y = self.ambient(b)?;
        let glued = self.concatenation_matrix(k, l).apply(&outer_vec(&x, &y));
        self.form_from_ambient(k + l, &glued)
    }

    /// The ambient concatenation A^{⊗(k+1)} ⊗ A^{⊗(l+1)} → A^{⊗(k+l+1)}.
    pub fn concatenation_matrix(&self, k: usize, l: usize) -> Mat {
        let field = self.algebra.field();
        let n = self.algebra.dim();
        let id_left = Mat::identity(field, pow(n, k));
        let id_right = Mat::identity(field, pow(n, l));
        id_left.kron(self.algebra.mult_matrix()).kron(&id_right)
    }
}

fn pow(base: usize, exp: usize) -> usize {
    base.pow(exp as u32)
}

/// Unit insertion at position j: A^{⊗(k+1)} → A^{⊗(k+2)}.
fn insertion(algebra: &Algebra, k: usize, j: usize) -> Mat {
    let field = algebra.field();
    let n = algebra.dim();
    let before = Mat::identity(field, pow(n, j));
    let after = Mat::identity(field, pow(n, k + 1 - j));
    before.kron(&algebra.unit_col()).kron(&after)
}

/// The ambient differential Σⱼ (−1)ʲ · (insert 1 at position j), j = 0..k+1.
fn d_ambient(algebra: &Algebra, k: usize) -> Mat {
    let mut out = insertion(algebra, k, 0);
    for j in 1..=k + 1 {
        let ins = insertion(algebra, k, j);
        out = if j % 2 == 0 { out.add(&ins) } else { out.sub(&ins) };
    }
    out
}

/// The "multiply adjacent legs j, j+1" maps A^{⊗(k+1)} → A^{⊗k}, j = 0..k−1,
/// whose common kernel characterizes Ωᵏ. Used as an independent cross-check
/// of the iterative construction.
pub fn adjacency_contractions(algebra: &Algebra, k: usize) -> Vec<Mat> {
    let field = algebra.field();
    let n = algebra.dim();
    (0..k)
        .map(|j| {
            let before = Mat::identity(field, pow(n, j));
            let after = Mat::identity(field, pow(n, k - 1 - j));
            before.kron(algebra.mult_matrix()).kron(&after)
        })
        .collect()
}

fn make_space(algebra: &Algebra, degree: usize, subspace: Subspace) -> OmegaSpace {
    let field = algebra.field();
    let n = algebra.dim();
    let rest = pow(n, degree);
    let id_rest = Mat::identity(field, rest);
    let restrict_or_panic = |ambient_op: Mat, what: &str| -> Mat {
        subspace
            .restrict_map(&ambient_op, &subspace)
            .unwrap_or_else(|| panic!("multiplication into the {what} leg must preserve Ω^{degree}"))
    };
    let left = (0..n)
        .map(|i| restrict_or_panic(algebra.left_mat(i).kron(&id_rest), "first"))
        .collect();
    let right = (0..n)
        .map(|i| restrict_or_panic(id_rest.kron(algebra.right_mat(i)), "last"))
        .collect();
    OmegaSpace { degree, subspace, left, right }
}

/// Renders a form's ambient representative as a sum of basis tensors, e.g.
/// `1⊗x − x⊗1`; used in witnesses.
pub fn render_tensor(algebra: &Algebra, legs: usize, ambient: &[Scalar]) -> String {
    let n = algebra.dim();
    assert_eq!(ambient.len(), pow(n, legs));
    let mut terms: Vec<String> = Vec::new();
    for (idx, c) in ambient.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut names = Vec::with_capacity(legs);
        let mut rem = idx;
        for leg in (0..legs).rev() {
            let div = pow(n, leg);
            names.push(algebra.names()[rem / div].clone());
            rem %= div;
        }
        let tensor = names.join("⊗");
        if c.is_one() {
            terms.push(tensor);
        } else {
            terms.push(format!("{}·{}", c.to_repr(), tensor));
        }
    }
    if terms.is_empty() {
        String::from("0")
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::rng::Rng;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn calc(name: &str, cap: usize) -> UniversalCalculus {
        let alg = Algebra::preset(name, q()).unwrap();
        UniversalCalculus::new(alg, cap).unwrap()
    }

    #[test]
    fn omega_dimensions_small_presets() {
        for (name, n) in [("field", 1usize), ("dual_numbers", 2), ("prod_KK", 2), ("upper_tri_2", 3)] {
            let c = calc(name, 3);
            for k in 0..=3 {
                let expected = n * (n - 1).pow(k as u32);
                assert_eq!(c.omega(k).unwrap().dim(), expected, "{name} degree {k}");
            }
        }
    }

    #[test]
    fn omega1_dual_numbers_canonical_basis() {
        let c = calc("dual_numbers", 1);
        let basis = c.omega(1).unwrap().subspace().basis();
        let expected = Mat::from_i64(q(), 2, 4, &[0, 1, -1, 0, 0, 0, 0, 1]);
        assert_eq!(basis, &expected);
    }

    #[test]
    fn differential_of_x() {
        let c = calc("dual_numbers", 2);
        // d(x) = 1⊗x − x⊗1
        let x = c.form(0, vec![q().zero(), q().one()]).unwrap();
        let dx = c.apply_d(&x).unwrap();
        let ambient = c.ambient(&dx).unwrap();
        assert_eq!(
            ambient,
            vec![q().zero(), q().one(), q().integer(-1), q().zero()]
        );
        // d(1) = 0 and d(d(x)) = 0
        let one = c.form(0, vec![q().one(), q().zero()]).unwrap();
        assert!(crate::mat::vec_is_zero(&c.apply_d(&one).unwrap().coords));
        assert!(crate::mat::vec_is_zero(&c.apply_d(&dx).unwrap().coords));
    }

    #[test]
    fn ambient_differential_squares_to_zero() {
        for name in ["dual_numbers", "prod_KK", "group_C2", "upper_tri_2"] {
            let alg = Algebra::preset(name, q()).unwrap();
            for k in 0..=2 {
                let d1 = d_ambient(&alg, k);
                let d2 = d_ambient(&alg, k + 1);
                assert!(d2.matmul(&d1).is_zero(), "{name} degree {k}");
            }
        }
    }

    #[test]
    fn product_of_dx_with_itself() {
        let c = calc("dual_numbers", 2);
        let x = c.form(0, vec![q().zero(), q().one()]).unwrap();
        let dx = c.apply_d(&x).unwrap();
        let prod = c.product(&dx, &dx).unwrap();
        // (1⊗x − x⊗1)(1⊗x − x⊗1) = 1⊗x⊗x − x⊗1⊗x + x⊗x⊗1, since x·x = 0
        let ambient = c.ambient(&prod).unwrap();
        let mut expected = alloc::vec![q().zero(); 8];
        expected[0b011] = q().one(); // 1⊗x⊗x
        expected[0b101] = q().integer(-1); // x⊗1⊗x
        expected[0b110] = q().one(); // x⊗x⊗1
        assert_eq!(ambient, expected);
        assert_eq!(render_tensor(c.algebra(), 3, &ambient), "1⊗x⊗x + -1·x⊗1⊗x + x⊗x⊗1");
    }

    #[test]
    fn product_with_degree_zero_unit_is_identity() {
        let c = calc("upper_tri_2", 2);
        let unit = c.form(0, c.algebra().unit().to_vec()).unwrap();
        let space = c.omega(1).unwrap();
        for k in 0..space.dim() {
            let mut coords = alloc::vec![q().zero(); space.dim()];
            coords[k] = q().one();
            let w = c.form(1, coords.clone()).unwrap();
            assert_eq!(c.product(&unit, &w).unwrap().coords, coords);
            assert_eq!(c.product(&w, &unit).unwrap().coords, coords);
        }
    }

    #[test]
    fn graded_leibniz_on_random_forms() {
        let c = calc("prod_KK", 3);
        let mut rng = Rng::new(7);
        for (k, l) in [(0usize, 1usize), (1, 1), (0, 2), (1, 2), (2, 0)] {
            if k + l + 1 > c.cap() {
                continue;
            }
            let wk = random_form(&c, k, &mut rng);
            let wl = random_form(&c, l, &mut rng);
            let lhs = c.apply_d(&c.product(&wk, &wl).unwrap()).unwrap();
            let term1 = c.product(&c.apply_d(&wk).unwrap(), &wl).unwrap();
            let mut term2 = c.product(&wk, &c.apply_d(&wl).unwrap()).unwrap();
            if k % 2 == 1 {
                term2.coords = crate::mat::vec_neg(&term2.coords);
            }
            let rhs = crate::mat::vec_add(&term1.coords, &term2.coords);
            assert_eq!(lhs.coords, rhs, "degrees ({k},{l})");
        }
    }

    #[test]
    fn omega_product_associativity_degree_111() {
        let c = calc("dual_numbers", 3);
        let mut rng = Rng::new(3);
        for _ in 0..5 {
            let a = random_form(&c, 1, &mut rng);
            let b = random_form(&c, 1, &mut rng);
            let w = random_form(&c, 1, &mut rng);
            let left = c.product(&c.product(&a, &b).unwrap(), &w).unwrap();
            let right = c.product(&a, &c.product(&b, &w).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn module_structure_on_omega() {
        let c = calc("group_C2", 2);
        let alg = c.algebra().clone();
        for k in 1..=2 {
            let space = c.omega(k).unwrap();
            // validated as a bimodule: unit acts as identity, actions commute
            space.module(alg.clone()).unwrap();
        }
        // Leibniz in degree 0→1: a·db + da·b = d(ab)
        let d0 = c.d(0).unwrap();
        let omega1 = c.omega(1).unwrap();
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let db = d0.col(j);
                let da = d0.col(i);
                let lhs = crate::mat::vec_add(
                    &omega1.left()[i].apply(&db),
                    &omega1.right()[j].apply(&da),
                );
                let ab = alg.mul(&alg.basis_elem(i), &alg.basis_elem(j));
                let rhs = d0.apply(&ab);
                assert_eq!(lhs, rhs, "({i},{j})");
            }
        }
    }

    #[test]
    fn iterative_construction_matches_adjacency_kernels() {
        for name in ["dual_numbers", "prod_KK", "upper_tri_2"] {
            let c = calc(name, 3);
            let alg = c.algebra();
            for k in 1..=3usize {
                let stacked = adjacency_contractions(alg, k)
                    .into_iter()
                    .reduce(|a, b| a.vstack(&b))
                    .unwrap();
                let direct = Subspace::from_spanning(&stacked.kernel());
                assert_eq!(&direct, c.omega(k).unwrap().subspace(), "{name} degree {k}");
            }
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let c = calc("dual_numbers", 2);
        assert!(matches!(
            c.omega(3),
            Err(CalculusError::DegreeCapExceeded { requested: 3, cap: 2 })
        ));
        assert!(c.d(2).is_err());
    }

    #[test]
    fn field_preset_collapses() {
        let c = calc("field", 3);
        for k in 1..=3 {
            assert_eq!(c.omega(k).unwrap().dim(), 0);
        }
        assert_eq!(c.d(0).unwrap().rows(), 0);
    }

    fn random_form(c: &UniversalCalculus, k: usize, rng: &mut Rng) -> Form {
        let dim = c.omega(k).unwrap().dim();
        let coords = (0..dim).map(|_| rng.scalar(c.algebra().field())).collect();
        c.form(k, coords).unwrap()
    }
}
