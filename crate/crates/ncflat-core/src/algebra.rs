//! Finite-dimensional unital associative algebras given by structure
//! constants, their one- and two-sided modules as action matrices, and tensor
//! products over the algebra realized as explicit quotients.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{render_vector, FieldSpec, Scalar};
use crate::mat::{outer_vec, vec_sub, Mat, QuotientData};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// (aᵢaⱼ)aₗ ≠ aᵢ(aⱼaₗ); the witness renders both sides.
    NotAssociative { i: usize, j: usize, l: usize, witness: String },
    /// unit·aᵢ ≠ aᵢ or aᵢ·unit ≠ aᵢ.
    NotUnital { i: usize, witness: String },
    UnknownPreset(String),
    ShapeMismatch(String),
    /// An operation needed a left/right action the module does not carry.
    ActionAbsent(&'static str),
    /// An action matrix family fails unitality, associativity, or the
    /// left/right commutation required of a bimodule.
    InvalidModule(String),
    /// e² ≠ e.
    NotIdempotent(String),
    /// A "must never fire" internal consistency guard fired.
    Internal(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::NotAssociative { i, j, l, witness } => {
                write!(f, "associativity fails at basis triple ({i},{j},{l}): {witness}")
            }
            AlgebraError::NotUnital { i, witness } => {
                write!(f, "unit axiom fails at basis index {i}: {witness}")
            }
            AlgebraError::UnknownPreset(name) => write!(f, "unknown preset algebra {name:?}"),
            AlgebraError::ShapeMismatch(what) => write!(f, "shape mismatch: {what}"),
            AlgebraError::ActionAbsent(side) => write!(f, "module carries no {side} action"),
            AlgebraError::InvalidModule(detail) => write!(f, "invalid module: {detail}"),
            AlgebraError::NotIdempotent(witness) => write!(f, "not idempotent: e² − e = {witness}"),
            AlgebraError::Internal(detail) => write!(f, "internal invariant violated: {detail}"),
        }
    }
}

impl core::error::Error for AlgebraError {}

/// A unital associative algebra in a fixed basis, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    names: Vec<String>,
    /// `sc[i][j]` = coordinates of aᵢaⱼ.
    sc: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
    left_mats: Vec<Mat>,
    right_mats: Vec<Mat>,
    /// μ: A⊗A → A, an n × n² matrix under the kron convention.
    mult: Mat,
    /// Basis indices that, together with the unit, generate A as an algebra.
    /// Used to cut generating sets of ⊗_A relation spaces; always sound, since
    /// consumers re-verify that the omitted relations project to zero.
    generators: Vec<usize>,
    preset: Option<&'static str>,
}

impl Algebra {
    pub fn new(
        field: FieldSpec,
        names: Vec<String>,
        sc: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
    ) -> Result<Arc<Algebra>, AlgebraError> {
        let dim = names.len();
        let generators = (0..dim).collect();
        Algebra::build(field, names, sc, unit, generators, None)
    }

    fn build(
        field: FieldSpec,
        names: Vec<String>,
        sc: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
        generators: Vec<usize>,
        preset: Option<&'static str>,
    ) -> Result<Arc<Algebra>, AlgebraError> {
        let dim = names.len();
        if sc.len() != dim
            || sc.iter().any(|row| row.len() != dim || row.iter().any(|c| c.len() != dim))
        {
            return Err(AlgebraError::ShapeMismatch(format!(
                "structure constants must form a {dim}×{dim}×{dim} array"
            )));
        }
        if unit.len() != dim {
            return Err(AlgebraError::ShapeMismatch(format!(
                "unit has {} coordinates, expected {dim}",
                unit.len()
            )));
        }

        // L(aᵢ) has column j = coords(aᵢaⱼ); R(aᵢ) has column j = coords(aⱼaᵢ).
        let left_mats: Vec<Mat> = (0..dim)
            .map(|i| Mat::from_images(field, dim, &sc[i]))
            .collect();
        let right_mats: Vec<Mat> = (0..dim)
            .map(|i| {
                let images: Vec<Vec<Scalar>> = (0..dim).map(|j| sc[j][i].clone()).collect();
                Mat::from_images(field, dim, &images)
            })
            .collect();
        let mult_images: Vec<Vec<Scalar>> = (0..dim * dim)
            .map(|idx| sc[idx / dim][idx % dim].clone())
            .collect();
        let mult = Mat::from_images(field, dim, &mult_images);

        let alg = Algebra {
            field,
            dim,
            names,
            sc,
            unit,
            left_mats,
            right_mats,
            mult,
            generators,
            preset,
        };

        // Associativity: (aᵢaⱼ)aₗ = aᵢ(aⱼaₗ), expanding products by linearity.
        for i in 0..dim {
            for j in 0..dim {
                for l in 0..dim {
                    let lhs = alg.mul(&alg.sc[i][j], &alg.basis_elem(l));
                    let rhs = alg.mul(&alg.basis_elem(i), &alg.sc[j][l]);
                    if lhs != rhs {
                        return Err(AlgebraError::NotAssociative {
                            i,
                            j,
                            l,
                            witness: format!(
                                "({})·a = {}, a·({}) = {}",
                                alg.names[i],
                                render_vector(&lhs),
                                alg.names[l],
                                render_vector(&rhs)
                            ),
                        });
                    }
                }
            }
        }
        for i in 0..dim {
            let e = alg.basis_elem(i);
            let left = alg.mul(&alg.unit, &e);
            let right = alg.mul(&e, &alg.unit);
            if left != e || right != e {
                return Err(AlgebraError::NotUnital {
                    i,
                    witness: format!(
                        "1·{} = {}, {}·1 = {}",
                        alg.names[i],
                        render_vector(&left),
                        alg.names[i],
                        render_vector(&right)
                    ),
                });
            }
        }
        Ok(Arc::new(alg))
    }

    /// The catalog of test algebras. Basis orders are fixed here and all
    /// documented coordinates refer to them.
    pub fn preset(name: &str, field: FieldSpec) -> Result<Arc<Algebra>, AlgebraError> {
        // (basis names, monomial products (i,j) ↦ k meaning aᵢaⱼ = aₖ,
        //  unit coordinates, generating indices)
        let (names, table, unit, gens): (&[&str], &[(usize, usize, usize)], &[i64], &[usize]) =
            match name {
                "field" => (&["1"], &[(0, 0, 0)], &[1], &[]),
                "dual_numbers" => (&["1", "x"], &[(0, 0, 0), (0, 1, 1), (1, 0, 1)], &[1, 0], &[1]),
                "trunc_poly_3" => (
                    &["1", "x", "x^2"],
                    &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 2), (1, 1, 2)],
                    &[1, 0, 0],
                    &[1],
                ),
                "mat2" => (
                    &["E11", "E12", "E21", "E22"],
                    &[
                        (0, 0, 0),
                        (0, 1, 1),
                        (1, 2, 0),
                        (1, 3, 1),
                        (2, 0, 2),
                        (2, 1, 3),
                        (3, 2, 2),
                        (3, 3, 3),
                    ],
                    &[1, 0, 0, 1],
                    &[1, 2],
                ),
                "group_C2" => (
                    &["1", "g"],
                    &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
                    &[1, 0],
                    &[1],
                ),
                "prod_KK" => (&["e1", "e2"], &[(0, 0, 0), (1, 1, 1)], &[1, 1], &[0]),
                "upper_tri_2" => (
                    &["E11", "E12", "E22"],
                    &[(0, 0, 0), (0, 1, 1), (1, 2, 1), (2, 2, 2)],
                    &[1, 0, 1],
                    &[0, 1],
                ),
                _ => return Err(AlgebraError::UnknownPreset(String::from(name))),
            };
        let dim = names.len();
        let mut sc = vec![vec![vec![field.zero(); dim]; dim]; dim];
        for &(i, j, k) in table {
            sc[i][j][k] = field.one();
        }
        let unit = unit.iter().map(|v| field.integer(*v)).collect();
        let preset_name = PRESET_NAMES
            .iter()
            .find(|p| **p == name)
            .copied()
            .expect("name matched above");
        Algebra::build(
            field,
            names.iter().map(|s| String::from(*s)).collect(),
            sc,
            unit,
            gens.to_vec(),
            Some(preset_name),
        )
    }

    /// Idempotents catalogued for each preset (each satisfies e² = e; used to
    /// exercise e ≠ 1 paths where available).
    pub fn idempotents(&self) -> Vec<(String, Vec<Scalar>)> {
        let mut out = vec![(String::from("1"), self.unit.clone())];
        match (self.preset, self.field) {
            (Some("mat2"), _) => out.push((String::from("E11"), self.basis_elem(0))),
            (Some("prod_KK"), _) => out.push((String::from("e1"), self.basis_elem(0))),
            (Some("group_C2"), FieldSpec::Rationals) => {
                let half = self.field.fraction(1, 2).expect("2 is invertible in Q");
                out.push((String::from("(1+g)/2"), vec![half.clone(), half]));
            }
            _ => {}
        }
        out
    }

    pub fn preset_names() -> &'static [&'static str] {
        PRESET_NAMES
    }

    pub fn preset_name(&self) -> Option<&'static str> {
        self.preset
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// The unit as an n×1 column, handy for kron-built operators.
    pub fn unit_col(&self) -> Mat {
        Mat::from_images(self.field, self.dim, &[self.unit.clone()])
    }

    pub fn basis_elem(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    pub fn struct_consts(&self) -> &[Vec<Vec<Scalar>>] {
        &self.sc
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![self.field.zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for k in 0..self.dim {
                    let s = &self.sc[i][j][k];
                    if !s.is_zero() {
                        out[k] = &out[k] + &(&c * s);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        vec_sub(&self.mul(x, y), &self.mul(y, x))
    }

    /// Left multiplication by the basis element aᵢ.
    pub fn left_mat(&self, i: usize) -> &Mat {
        &self.left_mats[i]
    }

    /// Right multiplication by the basis element aᵢ (x ↦ x·aᵢ).
    pub fn right_mat(&self, i: usize) -> &Mat {
        &self.right_mats[i]
    }

    /// Left multiplication by an arbitrary element.
    pub fn left_mat_of(&self, x: &[Scalar]) -> Mat {
        self.combine(&self.left_mats, x)
    }

    pub fn right_mat_of(&self, x: &[Scalar]) -> Mat {
        self.combine(&self.right_mats, x)
    }

    fn combine(&self, mats: &[Mat], x: &[Scalar]) -> Mat {
        let mut out = Mat::zero(self.field, self.dim, self.dim);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&mats[i].scale(c));
            }
        }
        out
    }

    /// μ: A⊗A → A as an n × n² matrix.
    pub fn mult_matrix(&self) -> &Mat {
        &self.mult
    }

    pub fn generating_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_idempotent(&self, e: &[Scalar]) -> bool {
        self.mul(e, e) == e
    }

    /// Renders an element as a combination of named basis elements.
    pub fn render(&self, coords: &[Scalar]) -> String {
        let mut terms = Vec::new();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                terms.push(self.names[i].clone());
            } else {
                terms.push(format!("{}·{}", c.to_repr(), self.names[i]));
            }
        }
        if terms.is_empty() {
            String::from("0")
        } else {
            terms.join(" + ")
        }
    }
}

const PRESET_NAMES: &[&str] = &[
    "field",
    "dual_numbers",
    "trunc_poly_3",
    "mat2",
    "group_C2",
    "prod_KK",
    "upper_tri_2",
];

/// Which actions a constructed module should carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Bi,
}

/// A module presented by action matrices; validation is eager.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRep {
    algebra: Arc<Algebra>,
    dim: usize,
    left: Option<Vec<Mat>>,
    right: Option<Vec<Mat>>,
}

impl ModuleRep {
    pub fn new(
        algebra: Arc<Algebra>,
        dim: usize,
        left: Option<Vec<Mat>>,
        right: Option<Vec<Mat>>,
    ) -> Result<ModuleRep, AlgebraError> {
        let m = ModuleRep { algebra, dim, left, right };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let alg = &self.algebra;
        let n = alg.dim();
        let check_shapes = |mats: &Vec<Mat>, side: &str| -> Result<(), AlgebraError> {
            if mats.len() != n {
                return Err(AlgebraError::ShapeMismatch(format!(
                    "{side} action has {} matrices, expected {n}",
                    mats.len()
                )));
            }
            for (i, m) in mats.iter().enumerate() {
                if m.rows() != self.dim || m.cols() != self.dim {
                    return Err(AlgebraError::ShapeMismatch(format!(
                        "{side} action of {} is {}×{}, expected {}×{}",
                        alg.names()[i],
                        m.rows(),
                        m.cols(),
                        self.dim,
                        self.dim
                    )));
                }
            }
            Ok(())
        };

        if let Some(left) = &self.left {
            check_shapes(left, "left")?;
            let unit_action = combine_mats(alg, left, alg.unit());
            if unit_action != Mat::identity(alg.field(), self.dim) {
                return Err(AlgebraError::InvalidModule(String::from(
                    "left action of the unit is not the identity",
                )));
            }
            for i in 0..n {
                for j in 0..n {
                    // aᵢ·(aⱼ·m) = (aᵢaⱼ)·m
                    let composed = left[i].matmul(&left[j]);
                    let expanded = combine_mats(alg, left, &alg.struct_consts()[i][j]);
                    if composed != expanded {
                        return Err(AlgebraError::InvalidModule(format!(
                            "left action breaks associativity at ({}, {})",
                            alg.names()[i],
                            alg.names()[j]
                        )));
                    }
                }
            }
        }
        if let Some(right) = &self.right {
            check_shapes(right, "right")?;
            let unit_action = combine_mats(alg, right, alg.unit());
            if unit_action != Mat::identity(alg.field(), self.dim) {
                return Err(AlgebraError::InvalidModule(String::from(
                    "right action of the unit is not the identity",
                )));
            }
            for i in 0..n {
                for j in 0..n {
                    // (m·aᵢ)·aⱼ = m·(aᵢaⱼ)
                    let composed = right[j].matmul(&right[i]);
                    let expanded = combine_mats(alg, right, &alg.struct_consts()[i][j]);
                    if composed != expanded {
                        return Err(AlgebraError::InvalidModule(format!(
                            "right action breaks associativity at ({}, {})",
                            alg.names()[i],
                            alg.names()[j]
                        )));
                    }
                }
            }
        }
        if let (Some(left), Some(right)) = (&self.left, &self.right) {
            for i in 0..n {
                for j in 0..n {
                    // aᵢ·(m·aⱼ) = (aᵢ·m)·aⱼ
                    if left[i].matmul(&right[j]) != right[j].matmul(&left[i]) {
                        return Err(AlgebraError::InvalidModule(format!(
                            "left and right actions do not commute at ({}, {})",
                            alg.names()[i],
                            alg.names()[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// A = A as a module over itself, on the requested side(s).
    pub fn regular(algebra: Arc<Algebra>, side: Side) -> ModuleRep {
        let n = algebra.dim();
        let left = matches!(side, Side::Left | Side::Bi)
            .then(|| (0..n).map(|i| algebra.left_mat(i).clone()).collect());
        let right = matches!(side, Side::Right | Side::Bi)
            .then(|| (0..n).map(|i| algebra.right_mat(i).clone()).collect());
        ModuleRep { algebra, dim: n, left, right }
    }

    /// A⊗V with the outer left action a·(b⊗v) = ab⊗v.
    pub fn free(algebra: Arc<Algebra>, v_dim: usize) -> ModuleRep {
        let n = algebra.dim();
        let id_v = Mat::identity(algebra.field(), v_dim);
        let left = (0..n).map(|i| algebra.left_mat(i).kron(&id_v)).collect();
        ModuleRep { algebra, dim: n * v_dim, left: Some(left), right: None }
    }

    /// Installs a right action (validating the result as a bimodule).
    pub fn with_right(&self, right: Vec<Mat>) -> Result<ModuleRep, AlgebraError> {
        ModuleRep::new(self.algebra.clone(), self.dim, self.left.clone(), Some(right))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_mats(&self) -> Result<&[Mat], AlgebraError> {
        self.left.as_deref().ok_or(AlgebraError::ActionAbsent("left"))
    }

    pub fn right_mats(&self) -> Result<&[Mat], AlgebraError> {
        self.right.as_deref().ok_or(AlgebraError::ActionAbsent("right"))
    }

    pub fn has_left(&self) -> bool {
        self.left.is_some()
    }

    pub fn has_right(&self) -> bool {
        self.right.is_some()
    }

    /// Action of an arbitrary element on the given side.
    pub fn left_of(&self, a: &[Scalar]) -> Result<Mat, AlgebraError> {
        Ok(combine_mats(&self.algebra, self.left_mats()?, a))
    }

    pub fn right_of(&self, a: &[Scalar]) -> Result<Mat, AlgebraError> {
        Ok(combine_mats(&self.algebra, self.right_mats()?, a))
    }

    pub fn act_left(&self, a: &[Scalar], m: &[Scalar]) -> Result<Vec<Scalar>, AlgebraError> {
        Ok(self.left_of(a)?.apply(m))
    }

    pub fn act_right(&self, m: &[Scalar], a: &[Scalar]) -> Result<Vec<Scalar>, AlgebraError> {
        Ok(self.right_of(a)?.apply(m))
    }

    /// The left contraction A⊗M → M, a⊗m ↦ a·m, as an m × nm matrix
    /// `[L(a₀) | L(a₁) | … ]`.
    pub fn contraction_left(&self) -> Result<Mat, AlgebraError> {
        let left = self.left_mats()?;
        let mut out = Mat::zero(self.field(), self.dim, self.algebra.dim() * self.dim);
        for (a, l) in left.iter().enumerate() {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let v = l.at(i, j);
                    if !v.is_zero() {
                        out.set(i, a * self.dim + j, v.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// The right contraction M⊗A → M, m⊗a ↦ m·a.
    pub fn contraction_right(&self) -> Result<Mat, AlgebraError> {
        let right = self.right_mats()?;
        let n = self.algebra.dim();
        let mut out = Mat::zero(self.field(), self.dim, self.dim * n);
        for (a, r) in right.iter().enumerate() {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let v = r.at(i, j);
                    if !v.is_zero() {
                        out.set(i, j * n + a, v.clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

fn combine_mats(alg: &Algebra, mats: &[Mat], x: &[Scalar]) -> Mat {
    let dim = mats.first().map_or(0, Mat::rows);
    let mut out = Mat::zero(alg.field(), dim, dim);
    for (i, c) in x.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&mats[i].scale(c));
        }
    }
    out
}

/// M⊗_A N as a quotient of M⊗N, with inherited outer actions when available.
#[derive(Debug, Clone)]
pub struct TensorOverA {
    left_factor: ModuleRep,
    right_factor: ModuleRep,
    quotient: QuotientData,
    module: ModuleRep,
}

/// Quotients M⊗N by the span of (m·a)⊗n − m⊗(a·n). The relation rows are
/// generated from the algebra's generating indices; sufficiency is then
/// re-verified against every basis triple, so the constructed projection
/// provably annihilates the full relation set.
pub fn tensor_over_a(m: &ModuleRep, n: &ModuleRep) -> Result<TensorOverA, AlgebraError> {
    let alg = m.algebra().clone();
    if !Arc::ptr_eq(&alg, n.algebra()) && alg.as_ref() != n.algebra().as_ref() {
        return Err(AlgebraError::ShapeMismatch(String::from(
            "tensor factors live over different algebras",
        )));
    }
    let field = alg.field();
    let (md, nd) = (m.dim(), n.dim());
    let ambient = md * nd;
    let m_right = m.right_mats()?;
    let n_left = n.left_mats()?;

    let id_m = Mat::identity(field, md);
    let id_n = Mat::identity(field, nd);
    let relation_block = |j: usize| -> Mat {
        // columns (i,k) of this matrix are the relations (mᵢ·aⱼ)⊗nₖ − mᵢ⊗(aⱼ·nₖ)
        m_right[j].kron(&id_n).sub(&id_m.kron(&n_left[j]))
    };

    let mut rows = Mat::zero(field, 0, ambient);
    for &j in alg.generating_indices() {
        rows = rows.vstack(&relation_block(j).transpose());
    }
    let quotient = QuotientData::new(field, ambient, &rows);

    // The generating indices must reproduce the whole relation span.
    for j in 0..alg.dim() {
        let proj = quotient.projection().matmul(&relation_block(j));
        if !proj.is_zero() {
            return Err(AlgebraError::Internal(format!(
                "generating indices miss the ⊗_A relations of basis element {}",
                alg.names()[j]
            )));
        }
    }

    // Inherited outer actions: a·(m⊗n) = (a·m)⊗n and (m⊗n)·a = m⊗(n·a).
    let descend = |ambient_mats: Vec<Mat>| -> Result<Vec<Mat>, AlgebraError> {
        ambient_mats
            .into_iter()
            .map(|f| {
                quotient.induced_map(&f, &quotient).ok_or_else(|| {
                    AlgebraError::Internal(String::from(
                        "outer action does not descend to the ⊗_A quotient",
                    ))
                })
            })
            .collect()
    };
    let left = match m.has_left() {
        true => {
            let mats = m.left_mats()?;
            Some(descend((0..alg.dim()).map(|i| mats[i].kron(&id_n)).collect())?)
        }
        false => None,
    };
    let right = match n.has_right() {
        true => {
            let mats = n.right_mats()?;
            Some(descend((0..alg.dim()).map(|i| id_m.kron(&mats[i])).collect())?)
        }
        false => None,
    };
    let module = ModuleRep::new(alg, quotient.dim(), left, right)?;

    Ok(TensorOverA {
        left_factor: m.clone(),
        right_factor: n.clone(),
        quotient,
        module,
    })
}

impl TensorOverA {
    pub fn left_factor(&self) -> &ModuleRep {
        &self.left_factor
    }

    pub fn right_factor(&self) -> &ModuleRep {
        &self.right_factor
    }

    pub fn quotient(&self) -> &QuotientData {
        &self.quotient
    }

    /// The quotient as a module with whatever actions the factors provided.
    pub fn module(&self) -> &ModuleRep {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Class of the simple tensor m⊗n.
    pub fn class_of(&self, m: &[Scalar], n: &[Scalar]) -> Vec<Scalar> {
        self.quotient.project(&outer_vec(m, n))
    }
}
