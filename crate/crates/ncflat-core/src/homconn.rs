//! Hom-connections on a right module: divergence-like operators on the
//! spaces Hᵏ := Hom_A(Ωᵏ, M) of right `A`-linear maps into M.
//!
//! A hom-connection is a linear map ∇: H¹ → M obeying
//!
//! > ∇(f·a) = ∇(f)·a + f(da),   where (f·a)(ω) := f(a·ω).
//!
//! It extends to ∇₁: H² → H¹ through the concatenation action
//! (g·ω)(ω′) := g(ω·ω′); the curvature is F := ∇ ∘ ∇₁: H² → M. When F = 0
//! the right module M acquires a left action
//!
//! > a·m := m·a + ∇(φ_{m,a}),   φ_{m,a}: Σᵢ xᵢ⊗yᵢ ↦ Σᵢ m·xᵢ·a·yᵢ,
//!
//! making it a bimodule, and ∇ then has a left symbol: the map
//! σ_L: Ω¹ ⊗_A H¹ → M with ∇(a·f) = a·∇(f) + σ_L(da ⊗ f), which on the
//! spanning vectors b·dc ⊗ φ_{m,a} takes the closed form b·[a,c]·m.
//!
//! Everything here is finite-dimensional linear algebra over exact scalars.
//! Hom spaces are cut out by the right-linearity constraints, hom-connections
//! are solved for as an affine family (never guessed), and every identity is
//! a literal equality of matrices, checked entry by entry. Over a commutative
//! algebra the φ maps vanish identically (φ_{m,a}(ω) = m·a·μ(ω) and Ω¹ is
//! the kernel of μ), so the induced left action degenerates to the given
//! right one; the interesting cases are noncommutative.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Algebra, AlgebraError, ModuleRep};
use crate::calculus::{CalculusError, UniversalCalculus};
use crate::connection::witness_first_column;
use crate::field::{render_vector, FieldSpec, Scalar};
use crate::mat::{outer_vec, vec_add, vec_is_zero, vec_sub, AffineSolution, Mat, QuotientData, Subspace};
use crate::report::{CheckStatus, Report};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomError {
    ShapeMismatch(String),
    /// The map fails the defining rule; carries the first violated pair.
    NotAHomConnection(String),
    /// The requested construction needs zero curvature.
    NotFlat(String),
    /// A map that should lie in a Hom space does not (a genuine bug:
    /// the tabulated maps are right-linear by construction).
    CoordinateFailure(String),
    /// σ̃ failed to kill a ⊗_A relation (impossible for flat ∇).
    DescentFailure(String),
    Internal(String),
    Algebra(AlgebraError),
    Calculus(CalculusError),
}

impl core::fmt::Display for HomError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            HomError::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
            HomError::NotAHomConnection(s) => write!(f, "not a hom-connection: {s}"),
            HomError::NotFlat(s) => write!(f, "curvature is nonzero: {s}"),
            HomError::CoordinateFailure(s) => write!(f, "coordinate extraction failed: {s}"),
            HomError::DescentFailure(s) => write!(f, "the symbol does not descend through ⊗_A: {s}"),
            HomError::Internal(s) => write!(f, "internal invariant violated: {s}"),
            HomError::Algebra(e) => write!(f, "{e}"),
            HomError::Calculus(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for HomError {}

impl From<AlgebraError> for HomError {
    fn from(e: AlgebraError) -> Self {
        HomError::Algebra(e)
    }
}

impl From<CalculusError> for HomError {
    fn from(e: CalculusError) -> Self {
        HomError::Calculus(e)
    }
}

fn flatten(m: &Mat) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        out.extend_from_slice(m.row(r));
    }
    out
}

fn unflatten(field: FieldSpec, rows: usize, cols: usize, data: &[Scalar]) -> Mat {
    assert_eq!(data.len(), rows * cols);
    let mut out = Mat::zero(field, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            out.set(r, c, data[r * cols + c].clone());
        }
    }
    out
}

fn std_basis(field: FieldSpec, dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); dim];
    v[i] = field.one();
    v
}

fn vec_witness(lhs: &[Scalar], rhs: &[Scalar]) -> String {
    format!("lhs {} ≠ rhs {}", render_vector(lhs), render_vector(rhs))
}

/// Hom_A(Ωᵏ, M): all right `A`-linear maps Ωᵏ → M, held as a basis of
/// `dim M × dim Ωᵏ` coordinate matrices. The basis spans exactly the solution
/// space of the right-linearity constraints F(ω·a) = F(ω)·a.
#[derive(Debug, Clone)]
pub struct HomSpace {
    degree: usize,
    module_dim: usize,
    omega_dim: usize,
    basis: Vec<Mat>,
    /// The same basis as row-major flattened vectors, for coordinate reads.
    flat: Subspace,
    /// Right action (f·a)(ω) := f(a·ω) of each algebra basis element, in the
    /// coordinates of `basis`.
    right: Vec<Mat>,
}

impl HomSpace {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn right(&self) -> &[Mat] {
        &self.right
    }

    /// Reassemble a map from its coordinates in `basis`.
    pub fn map_of(&self, coords: &[Scalar]) -> Mat {
        assert_eq!(coords.len(), self.basis.len());
        let mut acc = Mat::zero(self.flat.field(), self.module_dim, self.omega_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    /// Coordinates of a map in `basis`; `None` when the map is not right
    /// `A`-linear (equivalently, not in the span).
    pub fn coords_of_map(&self, map: &Mat) -> Option<Vec<Scalar>> {
        if map.rows() != self.module_dim || map.cols() != self.omega_dim {
            return None;
        }
        self.flat.coords(&flatten(map))
    }
}

/// Cut Hom_A(Ωᵏ, M) out of the full matrix space by the linear constraints
/// F(ωⱼ·aᵢ) = F(ωⱼ)·aᵢ, one for every basis pair.
pub fn hom_space(calc: &UniversalCalculus, module: &ModuleRep, k: usize) -> Result<HomSpace, HomError> {
    let omega = calc.omega(k)?;
    let rm = module.right_mats()?;
    let alg = calc.algebra();
    let n = alg.dim();
    let m = module.dim();
    let w = omega.dim();
    let field = module.field();
    // Unknown: the m×w matrix F, flattened row-major, entry (r, c) ↦ variable r·w + c.
    let vars = m * w;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for a in 0..n {
        let rw = &omega.right()[a];
        for j in 0..w {
            for r in 0..m {
                let mut row = vec![field.zero(); vars];
                for c in 0..w {
                    let coeff = rw.at(c, j);
                    if !coeff.is_zero() {
                        row[r * w + c] += coeff;
                    }
                }
                for rp in 0..m {
                    let coeff = rm[a].at(r, rp);
                    if !coeff.is_zero() {
                        row[rp * w + j] -= coeff;
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = Mat::from_rows(field, vars, rows);
    let flat = Subspace::from_spanning(&system.kernel());
    let h = flat.dim();
    let basis: Vec<Mat> = (0..h).map(|j| unflatten(field, m, w, flat.basis_vector(j))).collect();
    let mut right = Vec::with_capacity(n);
    for a in 0..n {
        let lw = &omega.left()[a];
        let mut cols = Vec::with_capacity(h);
        for f in &basis {
            let image = f.matmul(lw);
            let coords = flat.coords(&flatten(&image)).ok_or_else(|| {
                HomError::CoordinateFailure(format!(
                    "the right action of {} does not preserve Hom_A(Ω^{k}, M)",
                    alg.names()[a]
                ))
            })?;
            cols.push(coords);
        }
        right.push(Mat::from_images(field, h, &cols));
    }
    Ok(HomSpace { degree: k, module_dim: m, omega_dim: w, basis, flat, right })
}

/// Everything fixed by the pair (algebra, right module): the calculus to
/// degree two, H¹ and H², and the evaluation, concatenation, and φ tables
/// shared by every check below. Build once per module and share via `Arc` —
/// the φ² tabulation over all basis triples is the only genuinely heavy step.
#[derive(Debug)]
pub struct HomSetting {
    algebra: Arc<Algebra>,
    module: Arc<ModuleRep>,
    /// Right action of each algebra basis element on M.
    rm: Vec<Mat>,
    h1: HomSpace,
    h2: HomSpace,
    /// d: A → Ω¹ in coordinates (dim Ω¹ × n).
    d0: Mat,
    /// d: Ω¹ → Ω² in coordinates.
    d1: Mat,
    /// First-leg / last-leg multiplication on Ω¹ coordinates.
    w1_left: Vec<Mat>,
    w1_right: Vec<Mat>,
    /// Inclusion Ω¹ ↪ A⊗A (n² × dim Ω¹).
    omega1_embed: Mat,
    /// eval_d0[a]: f ↦ f(d aₐ), an m × dim H¹ matrix.
    eval_d0: Vec<Mat>,
    /// act_w[i]: g ↦ g·ωᵢ where (g·ωᵢ)(ω′) := g(ωᵢ·ω′), dim H¹ × dim H².
    act_w: Vec<Mat>,
    /// eval_d1[i]: g ↦ g(dωᵢ), m × dim H².
    eval_d1: Vec<Mat>,
    /// φ_{mₖ,aₜ} on basis pairs: H¹ coordinates and the m × dim Ω¹ map.
    phi_coords: Vec<Vec<Vec<Scalar>>>,
    phi_maps: Vec<Vec<Mat>>,
    /// φ_{mₖ,aₛ,aₜ}: Σᵢ xᵢ⊗yᵢ⊗zᵢ ↦ Σᵢ m·xᵢ·aₛ·yᵢ·aₜ·zᵢ on Ω², likewise.
    phi2_coords: Vec<Vec<Vec<Vec<Scalar>>>>,
    phi2_maps: Vec<Vec<Vec<Mat>>>,
}

impl HomSetting {
    /// Requires a right action on `module`.
    pub fn new(module: Arc<ModuleRep>) -> Result<HomSetting, HomError> {
        let algebra = module.algebra().clone();
        let rm = module.right_mats()?.to_vec();
        let calc = UniversalCalculus::new(algebra.clone(), 2)?;
        let h1 = hom_space(&calc, &module, 1)?;
        let h2 = hom_space(&calc, &module, 2)?;
        let omega1 = calc.omega(1)?;
        let omega2 = calc.omega(2)?;
        let n = algebra.dim();
        let m = module.dim();
        let w1 = omega1.dim();
        let field = module.field();
        let d0 = calc.d(0)?.clone();
        let d1 = calc.d(1)?.clone();
        let w1_left = omega1.left().to_vec();
        let w1_right = omega1.right().to_vec();
        let omega1_embed = omega1.subspace().embedding_matrix();
        let omega2_embed = omega2.subspace().embedding_matrix();

        let eval_d0: Vec<Mat> = (0..n)
            .map(|a| {
                let da = d0.col(a);
                let cols: Vec<Vec<Scalar>> = h1.basis().iter().map(|f| f.apply(&da)).collect();
                Mat::from_images(field, m, &cols)
            })
            .collect();

        // Left concatenation ωᵢ·(—): Ω¹ → Ω² in coordinates. For
        // ωᵢ = Σ c_pq e_p⊗e_q and ω = Σ d_rs e_r⊗e_s the product is
        // Σ c_pq·d_rs e_p⊗(e_q e_r)⊗e_s.
        let sc = algebra.struct_consts();
        let mut prod: Vec<Mat> = Vec::with_capacity(w1);
        for i in 0..w1 {
            let p_amb = omega1.subspace().basis_vector(i);
            let mut cols = Vec::with_capacity(w1);
            for wv in 0..w1 {
                let q_amb = omega1.subspace().basis_vector(wv);
                let mut amb = vec![field.zero(); n * n * n];
                for p in 0..n {
                    for q in 0..n {
                        let cpq = &p_amb[p * n + q];
                        if cpq.is_zero() {
                            continue;
                        }
                        for r in 0..n {
                            for (s, drs) in q_amb[r * n..(r + 1) * n].iter().enumerate() {
                                if drs.is_zero() {
                                    continue;
                                }
                                let coef = cpq * drs;
                                for (t, st) in sc[q][r].iter().enumerate() {
                                    if !st.is_zero() {
                                        amb[(p * n + t) * n + s] += &(&coef * st);
                                    }
                                }
                            }
                        }
                    }
                }
                let coords = omega2.subspace().coords(&amb).ok_or_else(|| {
                    HomError::Internal(format!("ω{i}·ω{wv} fell outside Ω²"))
                })?;
                cols.push(coords);
            }
            prod.push(Mat::from_images(field, omega2.dim(), &cols));
        }

        let mut act_w = Vec::with_capacity(w1);
        let mut eval_d1 = Vec::with_capacity(w1);
        for i in 0..w1 {
            let dwi = d1.col(i);
            let mut acols = Vec::with_capacity(h2.dim());
            let mut dcols = Vec::with_capacity(h2.dim());
            for g in h2.basis() {
                let image = g.matmul(&prod[i]);
                let coords = h1.coords_of_map(&image).ok_or_else(|| {
                    HomError::CoordinateFailure(format!("g·ω{i} is not right A-linear"))
                })?;
                acols.push(coords);
                dcols.push(g.apply(&dwi));
            }
            act_w.push(Mat::from_images(field, h1.dim(), &acols));
            eval_d1.push(Mat::from_images(field, m, &dcols));
        }

        let mut phi_maps: Vec<Vec<Mat>> = Vec::with_capacity(m);
        let mut phi_coords: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(m);
        for kk in 0..m {
            let ek = std_basis(field, m, kk);
            let mut maps_row = Vec::with_capacity(n);
            let mut coords_row = Vec::with_capacity(n);
            for t in 0..n {
                let et = algebra.basis_elem(t);
                let mut cols = Vec::with_capacity(n * n);
                for x in 0..n {
                    let xa = algebra.mul(&algebra.basis_elem(x), &et);
                    for y in 0..n {
                        let u = algebra.mul(&xa, &algebra.basis_elem(y));
                        cols.push(module.act_right(&ek, &u)?);
                    }
                }
                let ambient = Mat::from_images(field, m, &cols);
                let map = ambient.matmul(&omega1_embed);
                let coords = h1.coords_of_map(&map).ok_or_else(|| {
                    HomError::CoordinateFailure(format!(
                        "φ at (m{kk}, {}) is not right A-linear",
                        algebra.names()[t]
                    ))
                })?;
                maps_row.push(map);
                coords_row.push(coords);
            }
            phi_maps.push(maps_row);
            phi_coords.push(coords_row);
        }

        let mut phi2_maps: Vec<Vec<Vec<Mat>>> = Vec::with_capacity(m);
        let mut phi2_coords: Vec<Vec<Vec<Vec<Scalar>>>> = Vec::with_capacity(m);
        for kk in 0..m {
            let ek = std_basis(field, m, kk);
            let mut maps_s = Vec::with_capacity(n);
            let mut coords_s = Vec::with_capacity(n);
            for s in 0..n {
                let es = algebra.basis_elem(s);
                let mut maps_t = Vec::with_capacity(n);
                let mut coords_t = Vec::with_capacity(n);
                for t in 0..n {
                    let et = algebra.basis_elem(t);
                    let mut cols = Vec::with_capacity(n * n * n);
                    for x in 0..n {
                        let p1 = algebra.mul(&algebra.basis_elem(x), &es);
                        for y in 0..n {
                            let p2 = algebra.mul(&algebra.mul(&p1, &algebra.basis_elem(y)), &et);
                            for z in 0..n {
                                let u = algebra.mul(&p2, &algebra.basis_elem(z));
                                cols.push(module.act_right(&ek, &u)?);
                            }
                        }
                    }
                    let ambient = Mat::from_images(field, m, &cols);
                    let map = ambient.matmul(&omega2_embed);
                    let coords = h2.coords_of_map(&map).ok_or_else(|| {
                        HomError::CoordinateFailure(format!(
                            "φ at (m{kk}, {}, {}) is not right A-linear",
                            algebra.names()[s],
                            algebra.names()[t]
                        ))
                    })?;
                    maps_t.push(map);
                    coords_t.push(coords);
                }
                maps_s.push(maps_t);
                coords_s.push(coords_t);
            }
            phi2_maps.push(maps_s);
            phi2_coords.push(coords_s);
        }

        Ok(HomSetting {
            algebra,
            module,
            rm,
            h1,
            h2,
            d0,
            d1,
            w1_left,
            w1_right,
            omega1_embed,
            eval_d0,
            act_w,
            eval_d1,
            phi_coords,
            phi_maps,
            phi2_coords,
            phi2_maps,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn module(&self) -> &Arc<ModuleRep> {
        &self.module
    }

    pub fn field(&self) -> FieldSpec {
        self.module.field()
    }

    pub fn h1(&self) -> &HomSpace {
        &self.h1
    }

    pub fn h2(&self) -> &HomSpace {
        &self.h2
    }

    /// H¹ coordinates of φ_{m,aₜ} for a general module vector, by linearity
    /// in the first argument.
    fn phi_vec(&self, mvec: &[Scalar], t: usize) -> Vec<Scalar> {
        let mut acc = vec![self.field().zero(); self.h1.dim()];
        for (kk, c) in mvec.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (s, v) in self.phi_coords[kk][t].iter().enumerate() {
                if !v.is_zero() {
                    acc[s] += &(c * v);
                }
            }
        }
        acc
    }

    /// The evaluation matrix of φ_{m,aₜ} (m × dim Ω¹), same linearity.
    fn phi_map_vec(&self, mvec: &[Scalar], t: usize) -> Mat {
        let mut acc = Mat::zero(self.field(), self.module.dim(), self.phi_maps[0][t].cols());
        for (kk, c) in mvec.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.phi_maps[kk][t].scale(c));
            }
        }
        acc
    }
}

/// H¹ coordinates of φ_{m,a}: Σᵢ xᵢ⊗yᵢ ↦ Σᵢ m·xᵢ·a·yᵢ, bilinear in (m, a).
pub fn phi(setting: &HomSetting, m: &[Scalar], a: &[Scalar]) -> Result<Vec<Scalar>, HomError> {
    if m.len() != setting.module.dim() || a.len() != setting.algebra.dim() {
        return Err(HomError::ShapeMismatch(format!(
            "φ expects coordinate lengths ({}, {}), got ({}, {})",
            setting.module.dim(),
            setting.algebra.dim(),
            m.len(),
            a.len()
        )));
    }
    let mut acc = vec![setting.field().zero(); setting.h1.dim()];
    for (t, at) in a.iter().enumerate() {
        if at.is_zero() {
            continue;
        }
        let part = setting.phi_vec(m, t);
        for (s, v) in part.iter().enumerate() {
            if !v.is_zero() {
                acc[s] += &(at * v);
            }
        }
    }
    Ok(acc)
}

/// H² coordinates of φ_{m,a,b}: Σᵢ xᵢ⊗yᵢ⊗zᵢ ↦ Σᵢ m·xᵢ·a·yᵢ·b·zᵢ.
pub fn phi2(setting: &HomSetting, m: &[Scalar], a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>, HomError> {
    if m.len() != setting.module.dim() || a.len() != setting.algebra.dim() || b.len() != setting.algebra.dim() {
        return Err(HomError::ShapeMismatch(format!(
            "φ² expects coordinate lengths ({}, {}, {}), got ({}, {}, {})",
            setting.module.dim(),
            setting.algebra.dim(),
            setting.algebra.dim(),
            m.len(),
            a.len(),
            b.len()
        )));
    }
    let mut acc = vec![setting.field().zero(); setting.h2.dim()];
    for (kk, mk) in m.iter().enumerate() {
        if mk.is_zero() {
            continue;
        }
        for (s, at) in a.iter().enumerate() {
            if at.is_zero() {
                continue;
            }
            let c = mk * at;
            for (t, bt) in b.iter().enumerate() {
                if bt.is_zero() {
                    continue;
                }
                let cc = &c * bt;
                for (u, v) in setting.phi2_coords[kk][s][t].iter().enumerate() {
                    if !v.is_zero() {
                        acc[u] += &(&cc * v);
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// A candidate ∇: H¹ → M, as an m × dim H¹ matrix in the coordinates of its
/// setting. `new` checks shapes only; `check_hom_connection` checks the rule.
#[derive(Debug, Clone)]
pub struct HomConnection {
    setting: Arc<HomSetting>,
    matrix: Mat,
}

impl HomConnection {
    pub fn new(setting: Arc<HomSetting>, matrix: Mat) -> Result<HomConnection, HomError> {
        if matrix.rows() != setting.module.dim() || matrix.cols() != setting.h1.dim() {
            return Err(HomError::ShapeMismatch(format!(
                "∇ must be {}×{}, got {}×{}",
                setting.module.dim(),
                setting.h1.dim(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.field() != setting.field() {
            return Err(HomError::ShapeMismatch(String::from("∇ is over the wrong field")));
        }
        Ok(HomConnection { setting, matrix })
    }

    pub fn setting(&self) -> &Arc<HomSetting> {
        &self.setting
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }
}

/// ∇(f·a) = ∇(f)·a + f(da) on every basis pair (a, f).
pub fn check_hom_connection(conn: &HomConnection) -> Report {
    let s = &conn.setting;
    let names = s.algebra.names();
    let mut report = Report::new();
    for a in 0..s.algebra.dim() {
        for j in 0..s.h1.dim() {
            let lhs = conn.matrix.apply(&s.h1.right()[a].col(j));
            let rhs = vec_add(&s.rm[a].apply(&conn.matrix.col(j)), &s.eval_d0[a].col(j));
            let ok = lhs == rhs;
            report.check(
                &format!("hom-leibniz[{},f{}]", names[a], j),
                "∇(f·a) = ∇(f)·a + f(da)",
                ok,
                || vec_witness(&lhs, &rhs),
            );
        }
    }
    report
}

/// All hom-connections on the module: an affine family `particular +
/// span(homogeneous)`, or `particular: None` when the rule is unsatisfiable
/// (which happens — not every right module admits a hom-connection).
#[derive(Debug, Clone)]
pub struct HomFamily {
    pub particular: Option<Mat>,
    pub homogeneous: Vec<Mat>,
}

impl HomFamily {
    pub fn family_dim(&self) -> usize {
        self.homogeneous.len()
    }
}

/// Solve the defining rule as a linear system in the entries of ∇.
pub fn solve_hom_connections(setting: &Arc<HomSetting>) -> Result<HomFamily, HomError> {
    let s = setting;
    let m = s.module.dim();
    let h = s.h1.dim();
    let field = s.field();
    let vars = m * h;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for a in 0..s.algebra.dim() {
        for j in 0..h {
            let fa = s.h1.right()[a].col(j);
            for r in 0..m {
                let mut row = vec![field.zero(); vars];
                for (jp, c) in fa.iter().enumerate() {
                    if !c.is_zero() {
                        row[r * h + jp] += c;
                    }
                }
                for rp in 0..m {
                    let c = s.rm[a].at(r, rp);
                    if !c.is_zero() {
                        row[rp * h + j] -= c;
                    }
                }
                rows.push(row);
                rhs.push(s.eval_d0[a].at(r, j).clone());
            }
        }
    }
    let system = Mat::from_rows(field, vars, rows);
    match system.solve_affine(&rhs) {
        AffineSolution::Inconsistent => Ok(HomFamily { particular: None, homogeneous: Vec::new() }),
        AffineSolution::Solution { particular, kernel } => Ok(HomFamily {
            particular: Some(unflatten(field, m, h, &particular)),
            homogeneous: (0..kernel.rows()).map(|i| unflatten(field, m, h, kernel.row(i))).collect(),
        }),
    }
}

/// Hom-connections whose induced left action coincides with the module's
/// native one: adjoin ∇(φ_{m,a}) = a·m − m·a to the defining rule and solve.
/// Needs a module that already carries a left action. Members are honest
/// hom-connections, but flatness is *not* automatic — it has to be checked —
/// except when the φ² maps span all of H², where the associativity of the
/// native action forces F to vanish (the associativity defect of the induced
/// action is F evaluated on φ²). Over a commutative algebra φ ≡ 0 and the
/// extra rows are vacuous, so this degenerates to `solve_hom_connections`.
pub fn bimodule_ansatz(setting: &Arc<HomSetting>) -> Result<HomFamily, HomError> {
    let s = setting;
    let lm = s.module.left_mats()?;
    let m = s.module.dim();
    let h = s.h1.dim();
    let field = s.field();
    let vars = m * h;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for a in 0..s.algebra.dim() {
        for j in 0..h {
            let fa = s.h1.right()[a].col(j);
            for r in 0..m {
                let mut row = vec![field.zero(); vars];
                for (jp, c) in fa.iter().enumerate() {
                    if !c.is_zero() {
                        row[r * h + jp] += c;
                    }
                }
                for rp in 0..m {
                    let c = s.rm[a].at(r, rp);
                    if !c.is_zero() {
                        row[rp * h + j] -= c;
                    }
                }
                rows.push(row);
                rhs.push(s.eval_d0[a].at(r, j).clone());
            }
        }
    }
    for k in 0..m {
        for t in 0..s.algebra.dim() {
            let target = vec_sub(&lm[t].col(k), &s.rm[t].col(k));
            for r in 0..m {
                let mut row = vec![field.zero(); vars];
                for (jp, c) in s.phi_coords[k][t].iter().enumerate() {
                    if !c.is_zero() {
                        row[r * h + jp] += c;
                    }
                }
                rows.push(row);
                rhs.push(target[r].clone());
            }
        }
    }
    let system = Mat::from_rows(field, vars, rows);
    match system.solve_affine(&rhs) {
        AffineSolution::Inconsistent => Ok(HomFamily { particular: None, homogeneous: Vec::new() }),
        AffineSolution::Solution { particular, kernel } => Ok(HomFamily {
            particular: Some(unflatten(field, m, h, &particular)),
            homogeneous: (0..kernel.rows()).map(|i| unflatten(field, m, h, kernel.row(i))).collect(),
        }),
    }
}

/// ∇₁: H² → H¹, g ↦ (ω ↦ ∇(g·ω) + g(dω)). Only degree 1 exists here (the
/// calculus is built to degree two); that ∇₁ lands in H¹ at all is a
/// consequence of the defining rule, so a failing ∇ is rejected first.
pub fn nabla_n(conn: &HomConnection, n: usize) -> Result<Mat, HomError> {
    if n != 1 {
        return Err(HomError::Calculus(CalculusError::DegreeCapExceeded { requested: n + 1, cap: 2 }));
    }
    let base = check_hom_connection(conn);
    if let Some(first) = base.failures().next() {
        return Err(HomError::NotAHomConnection(first.id.clone()));
    }
    let s = &conn.setting;
    let field = s.field();
    let m = s.module.dim();
    let w1 = s.act_w.len();
    let mut cols = Vec::with_capacity(s.h2.dim());
    for j in 0..s.h2.dim() {
        let img_cols: Vec<Vec<Scalar>> = (0..w1)
            .map(|i| vec_add(&conn.matrix.apply(&s.act_w[i].col(j)), &s.eval_d1[i].col(j)))
            .collect();
        let map = Mat::from_images(field, m, &img_cols);
        let coords = s
            .h1
            .coords_of_map(&map)
            .ok_or_else(|| HomError::Internal(format!("∇₁(g{j}) fell outside Hom_A(Ω¹, M)")))?;
        cols.push(coords);
    }
    Ok(Mat::from_images(field, s.h1.dim(), &cols))
}

/// F := ∇ ∘ ∇₁ : H² → M.
pub fn curvature(conn: &HomConnection) -> Result<Mat, HomError> {
    Ok(conn.matrix.matmul(&nabla_n(conn, 1)?))
}

pub fn is_flat(conn: &HomConnection) -> Result<bool, HomError> {
    Ok(curvature(conn)?.is_zero())
}

/// The left action candidate a·m := m·a + ∇(φ_{m,a}), one matrix per algebra
/// basis element. Non-flat ∇ are processed too; `verify_prop_31` reports
/// which bimodule axioms the result actually satisfies.
pub fn induce_left_action(conn: &HomConnection) -> Vec<Mat> {
    let s = &conn.setting;
    let field = s.field();
    let m = s.module.dim();
    (0..s.algebra.dim())
        .map(|t| {
            let cols: Vec<Vec<Scalar>> = (0..m)
                .map(|k| vec_add(&s.rm[t].col(k), &conn.matrix.apply(&s.phi_coords[k][t])))
                .collect();
            Mat::from_images(field, m, &cols)
        })
        .collect()
}

/// Bimodule axioms for the induced left action: unitality, associativity,
/// and compatibility with the given right action. Compatibility and
/// unitality hold for every hom-connection; full associativity is exactly
/// what flatness buys (the associativity defect of the induced action equals
/// the curvature evaluated on φ², so over a non-flat ∇ expect failures).
pub fn verify_prop_31(conn: &HomConnection) -> Report {
    let s = &conn.setting;
    let lm = induce_left_action(conn);
    let names = s.algebra.names();
    let field = s.field();
    let m = s.module.dim();
    let n = s.algebra.dim();
    let mut report = Report::new();

    let mut unit_action = Mat::zero(field, m, m);
    for (t, c) in s.algebra.unit().iter().enumerate() {
        if !c.is_zero() {
            unit_action = unit_action.add(&lm[t].scale(c));
        }
    }
    let unit_diff = unit_action.sub(&Mat::identity(field, m));
    report.check("left-action-unital", "1·m = m", unit_diff.is_zero(), || {
        witness_first_column(&unit_diff)
    });

    for i in 0..n {
        for j in 0..n {
            let composed = lm[i].matmul(&lm[j]);
            let mut structural = Mat::zero(field, m, m);
            for (k, c) in s.algebra.struct_consts()[i][j].iter().enumerate() {
                if !c.is_zero() {
                    structural = structural.add(&lm[k].scale(c));
                }
            }
            let diff = composed.sub(&structural);
            report.check(
                &format!("left-action-assoc[{},{}]", names[i], names[j]),
                "a·(b·m) = (ab)·m",
                diff.is_zero(),
                || witness_first_column(&diff),
            );
        }
    }

    for i in 0..n {
        for j in 0..n {
            let diff = s.rm[j].matmul(&lm[i]).sub(&lm[i].matmul(&s.rm[j]));
            report.check(
                &format!("left-right-compat[{},{}]", names[i], names[j]),
                "(a·m)·b = a·(m·b)",
                diff.is_zero(),
                || witness_first_column(&diff),
            );
        }
    }

    report
}

/// The φ-calculus of a hom-connection, checked on all basis tuples. Every
/// family below is asserted unconditionally except the last (flatness-on-phi),
/// which only holds under zero curvature and is recorded as skipped otherwise.
pub fn verify_hom_identities(conn: &HomConnection) -> Result<Report, HomError> {
    let base = check_hom_connection(conn);
    if let Some(first) = base.failures().next() {
        return Err(HomError::NotAHomConnection(format!("{} ({})", first.id, first.identity)));
    }
    let s = &conn.setting;
    let n = s.algebra.dim();
    let m = s.module.dim();
    let w1 = s.act_w.len();
    let field = s.field();
    let names = s.algebra.names();
    let n1 = nabla_n(conn, 1)?;
    let mut report = Report::new();

    for k in 0..m {
        let c = phi(s, &std_basis(field, m, k), s.algebra.unit())?;
        report.check(&format!("phi-unit[m{k}]"), "φ_{m,1} = 0", vec_is_zero(&c), || render_vector(&c));
    }

    for k in 0..m {
        let ek = std_basis(field, m, k);
        for i in 0..n {
            let ei = s.algebra.basis_elem(i);
            let ma = s.module.act_right(&ek, &ei)?;
            for j in 0..n {
                let ej = s.algebra.basis_elem(j);
                let ab = s.algebra.mul(&ei, &ej);
                let ba = s.algebra.mul(&ej, &ei);
                let mab = s.module.act_right(&ek, &ab)?;
                let mba = s.module.act_right(&ek, &ba)?;
                let mb = s.module.act_right(&ek, &ej)?;

                let lhs = s.phi_maps[k][i].apply(&s.d0.col(j));
                let rhs = vec_sub(&mab, &mba);
                let ok = lhs == rhs;
                report.check(
                    &format!("phi-derivative[m{k},{},{}]", names[i], names[j]),
                    "φ_{m,a}(db) = m·(ab) − m·(ba)",
                    ok,
                    || vec_witness(&lhs, &rhs),
                );

                let lhs = s.h1.right()[j].apply(&s.phi_coords[k][i]);
                let rhs = s.phi_vec(&mb, i);
                let ok = lhs == rhs;
                report.check(
                    &format!("phi-shift[m{k},{},{}]", names[i], names[j]),
                    "φ_{m,a}·b = φ_{m·b,a}",
                    ok,
                    || vec_witness(&lhs, &rhs),
                );

                let nphi_mb = conn.matrix.apply(&s.phi_coords[k][j]);
                let lhs = conn.matrix.apply(&s.phi_vec(&ma, j));
                let rhs = vec_add(&s.module.act_right(&nphi_mb, &ei)?, &vec_sub(&mba, &mab));
                let ok = lhs == rhs;
                report.check(
                    &format!("phi-leibniz[m{k},{},{}]", names[i], names[j]),
                    "∇(φ_{m·a,b}) = ∇(φ_{m,b})·a + m·(ba) − m·(ab)",
                    ok,
                    || vec_witness(&lhs, &rhs),
                );

                // the same rule evaluated pointwise on each Ω¹ basis form
                let map_nphi_mb_a = s.phi_map_vec(&nphi_mb, i);
                let map_mb_a = s.phi_map_vec(&mb, i);
                for wv in 0..w1 {
                    let mval = s.phi_maps[k][i].col(wv);
                    let lhs = conn.matrix.apply(&s.phi_vec(&mval, j));
                    let rhs = vec_sub(
                        &vec_add(&map_nphi_mb_a.col(wv), &map_mb_a.col(wv)),
                        &s.module.act_right(&mval, &ej)?,
                    );
                    let ok = lhs == rhs;
                    report.check(
                        &format!("phi-leibniz-pointwise[m{k},{},{},w{wv}]", names[i], names[j]),
                        "∇(φ_{φ_{m,a}(ω),b}) = φ_{∇(φ_{m,b}),a}(ω) + φ_{m·b,a}(ω) − φ_{m,a}(ω)·b",
                        ok,
                        || vec_witness(&lhs, &rhs),
                    );
                }

                for wv in 0..w1 {
                    let lhs = s.act_w[wv].apply(&s.phi2_coords[k][i][j]);
                    let rhs = s.phi_vec(&s.phi_maps[k][i].col(wv), j);
                    let ok = lhs == rhs;
                    report.check(
                        &format!("phi2-action[m{k},{},{},w{wv}]", names[i], names[j]),
                        "φ_{m,a,b}·ω = φ_{φ_{m,a}(ω),b}",
                        ok,
                        || vec_witness(&lhs, &rhs),
                    );
                }

                let map_ma_b = s.phi_map_vec(&ma, j);
                let mut map_m_ab = Mat::zero(field, m, w1);
                for (t, c) in ab.iter().enumerate() {
                    if !c.is_zero() {
                        map_m_ab = map_m_ab.add(&s.phi_maps[k][t].scale(c));
                    }
                }
                for wv in 0..w1 {
                    let lhs = s.phi2_maps[k][i][j].apply(&s.d1.col(wv));
                    let rhs = vec_add(
                        &vec_sub(&map_ma_b.col(wv), &map_m_ab.col(wv)),
                        &s.module.act_right(&s.phi_maps[k][i].col(wv), &ej)?,
                    );
                    let ok = lhs == rhs;
                    report.check(
                        &format!("phi2-differential[m{k},{},{},w{wv}]", names[i], names[j]),
                        "φ_{m,a,b}(dω) = φ_{m·a,b}(ω) − φ_{m,ab}(ω) + φ_{m,a}(ω)·b",
                        ok,
                        || vec_witness(&lhs, &rhs),
                    );
                }

                let lhs = n1.apply(&s.phi2_coords[k][i][j]);
                let rhs = vec_sub(
                    &vec_add(&vec_add(&s.phi_vec(&nphi_mb, i), &s.phi_vec(&mb, i)), &s.phi_vec(&ma, j)),
                    &phi(s, &ek, &ab)?,
                );
                let ok = lhs == rhs;
                report.check(
                    &format!("nabla-one-on-phi2[m{k},{},{}]", names[i], names[j]),
                    "∇₁(φ_{m,a,b}) = φ_{∇(φ_{m,b}),a} + φ_{m·b,a} + φ_{m·a,b} − φ_{m,ab}",
                    ok,
                    || vec_witness(&lhs, &rhs),
                );
            }
        }
    }

    let f_mat = conn.matrix.matmul(&n1);
    for a in 0..n {
        let diff = f_mat.matmul(&s.h2.right()[a]).sub(&s.rm[a].matmul(&f_mat));
        report.check(
            &format!("curvature-right-linear[{}]", names[a]),
            "F(g·a) = F(g)·a",
            diff.is_zero(),
            || witness_first_column(&diff),
        );
    }

    let flat_identity = "∇(φ_{∇(φ_{m,b}),a}) = ∇(φ_{m,ab}) − ∇(φ_{m·b,a}) − ∇(φ_{m·a,b})";
    if f_mat.is_zero() {
        for k in 0..m {
            let ek = std_basis(field, m, k);
            for i in 0..n {
                let ei = s.algebra.basis_elem(i);
                let ma = s.module.act_right(&ek, &ei)?;
                for j in 0..n {
                    let ej = s.algebra.basis_elem(j);
                    let ab = s.algebra.mul(&ei, &ej);
                    let mb = s.module.act_right(&ek, &ej)?;
                    let inner = conn.matrix.apply(&s.phi_coords[k][j]);
                    let lhs = conn.matrix.apply(&s.phi_vec(&inner, i));
                    let rhs = vec_sub(
                        &conn.matrix.apply(&phi(s, &ek, &ab)?),
                        &vec_add(
                            &conn.matrix.apply(&s.phi_vec(&mb, i)),
                            &conn.matrix.apply(&s.phi_vec(&ma, j)),
                        ),
                    );
                    let ok = lhs == rhs;
                    report.check(
                        &format!("flatness-on-phi[m{k},{},{}]", names[i], names[j]),
                        flat_identity,
                        ok,
                        || vec_witness(&lhs, &rhs),
                    );
                }
            }
        }
    } else {
        report.skip(
            "flatness-on-phi",
            flat_identity,
            String::from("the curvature is nonzero; this identity is asserted only for flat ∇"),
        );
    }

    Ok(report)
}

/// σ_L of a flat hom-connection: Ω¹ ⊗_A H¹ → M in the coordinates of the
/// ⊗_A quotient, together with the certificates gathered on the way (the
/// first-order property of f ↦ ∇(f·a) − ∇(f)·a, and descent of the ambient
/// lift σ̃(x⊗y⊗f) := x·(∇(y·f) − y·∇(f)) through the ⊗_A relations).
#[derive(Debug, Clone)]
pub struct LeftSymbol {
    matrix: Mat,
    quotient: QuotientData,
    report: Report,
}

impl LeftSymbol {
    /// m × dim(Ω¹ ⊗_A H¹), in the quotient coordinates of `quotient`.
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn quotient(&self) -> &QuotientData {
        &self.quotient
    }

    pub fn report(&self) -> &Report {
        &self.report
    }
}

pub fn left_symbol(conn: &HomConnection) -> Result<LeftSymbol, HomError> {
    let s = &conn.setting;
    let f_mat = curvature(conn)?;
    if !f_mat.is_zero() {
        return Err(HomError::NotFlat(String::from(
            "σ_L is built from the induced left action, which needs zero curvature",
        )));
    }
    let lm = induce_left_action(conn);
    let field = s.field();
    let n = s.algebra.dim();
    let m = s.module.dim();
    let h = s.h1.dim();
    let w1 = s.w1_left.first().map_or(0, Mat::rows);
    let names = s.algebra.names();

    // the left action transported to H¹ coordinates: (a·f)(ω) := a·(f(ω))
    let mut lh1 = Vec::with_capacity(n);
    for a in 0..n {
        let mut cols = Vec::with_capacity(h);
        for fb in s.h1.basis() {
            let image = lm[a].matmul(fb);
            let coords = s.h1.coords_of_map(&image).ok_or_else(|| {
                HomError::Internal(format!("{}·f is not right A-linear", names[a]))
            })?;
            cols.push(coords);
        }
        lh1.push(Mat::from_images(field, h, &cols));
    }

    let mut report = Report::new();
    let t_mats: Vec<Mat> = (0..n)
        .map(|a| conn.matrix.matmul(&s.h1.right()[a]).sub(&s.rm[a].matmul(&conn.matrix)))
        .collect();
    for a in 0..n {
        for b in 0..n {
            let diff = t_mats[a].matmul(&lh1[b]).sub(&lm[b].matmul(&t_mats[a]));
            report.check(
                &format!("symbol-first-order[{},{}]", names[a], names[b]),
                "f ↦ ∇(f·a) − ∇(f)·a intertwines the left action",
                diff.is_zero(),
                || witness_first_column(&diff),
            );
        }
    }

    // σ̃ on the ambient A ⊗ A ⊗ H¹, column (i·n + j)·h + k ↦ σ̃(aᵢ⊗aⱼ⊗fₖ)
    let mut cols = Vec::with_capacity(n * n * h);
    for i in 0..n {
        for j in 0..n {
            for k in 0..h {
                let v = vec_sub(&conn.matrix.apply(&lh1[j].col(k)), &lm[j].apply(&conn.matrix.col(k)));
                cols.push(lm[i].apply(&v));
            }
        }
    }
    let sigma_ambient = Mat::from_images(field, m, &cols);
    let restricted = sigma_ambient.matmul(&s.omega1_embed.kron(&Mat::identity(field, h)));

    // ⊗_A relations: (ω·a) ⊗ f − ω ⊗ (a·f), spanning what the quotient kills
    let mut rel_rows = Vec::with_capacity(n * w1 * h);
    for a in 0..n {
        for i in 0..w1 {
            for k in 0..h {
                rel_rows.push(vec_sub(
                    &outer_vec(&s.w1_right[a].col(i), &std_basis(field, h, k)),
                    &outer_vec(&std_basis(field, w1, i), &lh1[a].col(k)),
                ));
            }
        }
    }
    for a in 0..n {
        let mut first_bad: Option<String> = None;
        for i in 0..w1 {
            for k in 0..h {
                let v = restricted.apply(&rel_rows[(a * w1 + i) * h + k]);
                if !vec_is_zero(&v) {
                    first_bad = Some(format!(
                        "σ̃((ω{i}·{}) ⊗ f{k}) − σ̃(ω{i} ⊗ ({}·f{k})) = {}",
                        names[a],
                        names[a],
                        render_vector(&v)
                    ));
                    break;
                }
            }
            if first_bad.is_some() {
                break;
            }
        }
        let id = format!("symbol-descends[{}]", names[a]);
        match first_bad {
            None => report.pass(&id, "σ̃((ω·a) ⊗ f) = σ̃(ω ⊗ (a·f))"),
            Some(witness) => {
                report.fail(&id, "σ̃((ω·a) ⊗ f) = σ̃(ω ⊗ (a·f))", witness.clone());
                return Err(HomError::DescentFailure(witness));
            }
        }
    }

    let relations = Mat::from_rows(field, w1 * h, rel_rows);
    let quotient = QuotientData::new(field, w1 * h, &relations);
    let matrix = restricted.matmul(quotient.section());
    Ok(LeftSymbol { matrix, quotient, report })
}

/// The closed form on the spanning vectors of Ω¹ ⊗_A H¹:
/// σ_L(b·dc ⊗ φ_{m,a}) = b·[a,c]·m, the right side taken in the induced
/// left action ([a,c] is the commutator, so this is identically zero over a
/// commutative algebra).
pub fn verify_symbol_formula(conn: &HomConnection, symbol: &LeftSymbol) -> Report {
    let s = &conn.setting;
    let lm = induce_left_action(conn);
    let field = s.field();
    let n = s.algebra.dim();
    let m = s.module.dim();
    let names = s.algebra.names();
    let mut report = Report::new();
    for b in 0..n {
        for c in 0..n {
            let w = s.w1_left[b].apply(&s.d0.col(c));
            for a in 0..n {
                let comm = s.algebra.commutator(&s.algebra.basis_elem(a), &s.algebra.basis_elem(c));
                let u = s.algebra.mul(&s.algebra.basis_elem(b), &comm);
                for k in 0..m {
                    let tensor = outer_vec(&w, &s.phi_coords[k][a]);
                    let lhs = symbol.matrix.apply(&symbol.quotient.project(&tensor));
                    let mut rhs = vec![field.zero(); m];
                    for (t, ct) in u.iter().enumerate() {
                        if !ct.is_zero() {
                            for (r, v) in lm[t].col(k).iter().enumerate() {
                                rhs[r] += &(ct * v);
                            }
                        }
                    }
                    let ok = lhs == rhs;
                    report.check(
                        &format!("symbol-closed-form[{},{},{},m{}]", names[b], names[c], names[a], k),
                        "σ_L(b·dc ⊗ φ_{m,a}) = b·[a,c]·m",
                        ok,
                        || vec_witness(&lhs, &rhs),
                    );
                }
            }
        }
    }
    report
}

/// Sampling controls for `hom_sweep`: a deterministic integer grid over the
/// leading homogeneous directions plus seeded samples across all of them.
#[derive(Debug, Clone)]
pub struct HomSweepOptions {
    /// Inclusive coefficient bound ± for both grid and random samples.
    pub grid_radius: i64,
    /// How many leading directions the exhaustive grid enumerates.
    pub grid_dirs: usize,
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for HomSweepOptions {
    fn default() -> HomSweepOptions {
        HomSweepOptions { grid_radius: 2, grid_dirs: 2, random_samples: 16, seed: 0 }
    }
}

/// Outcome of sweeping a module's hom-connection family. Flat members are
/// what the flat-only checks ran on; their absence is a recorded skip, not a
/// failure — some modules provably have none to find.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSweep {
    /// `None` when the module admits no hom-connection at all.
    pub family_dim: Option<usize>,
    pub candidates_tested: usize,
    pub flat_members: Vec<Mat>,
    pub report: Report,
}

/// One aggregate record per candidate suite; the witness names the first
/// failing sub-check, or counts skips so nothing is silently dropped.
fn summarize(report: &mut Report, id: &str, identity: &str, sub: &Report) {
    match sub.failures().next() {
        Some(first) => report.record(
            id,
            identity,
            CheckStatus::Fail,
            Some(format!("{}: {}", first.id, first.witness.clone().unwrap_or_default())),
        ),
        None => {
            let note = if sub.skipped() > 0 {
                Some(format!("{} checks passed, {} skipped", sub.passed(), sub.skipped()))
            } else {
                None
            };
            report.record(id, identity, CheckStatus::Pass, note);
        }
    }
}

/// Cross-check the Hom dimensions, solve for the family, and run the full
/// identity battery on a deterministic sample of members: the particular
/// solution, an integer grid over the leading homogeneous directions, and
/// seeded random combinations. Exact flats only — no tolerance, no rounding.
pub fn hom_sweep(setting: &Arc<HomSetting>, options: &HomSweepOptions) -> Result<HomSweep, HomError> {
    let s = setting;
    let n = s.algebra.dim();
    let m = s.module.dim();
    let field = s.field();
    let mut report = Report::new();

    let expected1 = (n - 1) * m;
    let expected2 = (n - 1) * (n - 1) * m;
    let got1 = s.h1.dim();
    let got2 = s.h2.dim();
    report.check(
        "hom-space-dimension[1]",
        "dim Hom_A(Ω¹, M) = (n−1)·dim M",
        got1 == expected1,
        || format!("got {got1}, expected {expected1}"),
    );
    report.check(
        "hom-space-dimension[2]",
        "dim Hom_A(Ω², M) = (n−1)²·dim M",
        got2 == expected2,
        || format!("got {got2}, expected {expected2}"),
    );

    let family = solve_hom_connections(setting)?;
    let family_identity = "the rule ∇(f·a) = ∇(f)·a + f(da) admits a solution";
    let Some(base) = family.particular.clone() else {
        report.skip(
            "hom-connection-family",
            family_identity,
            String::from("the affine system is inconsistent: this module carries no hom-connection"),
        );
        return Ok(HomSweep { family_dim: None, candidates_tested: 0, flat_members: Vec::new(), report });
    };
    report.record(
        "hom-connection-family",
        family_identity,
        CheckStatus::Pass,
        Some(format!("affine family of dimension {}", family.family_dim())),
    );

    let hdim = family.family_dim();
    let mut candidates: Vec<Mat> = vec![base.clone()];
    let dirs = core::cmp::min(options.grid_dirs, hdim);
    if dirs > 0 && options.grid_radius > 0 {
        let width = (2 * options.grid_radius + 1) as usize;
        let total = width.pow(dirs as u32);
        for idx in 0..total {
            let mut rem = idx;
            let mut mat = base.clone();
            for dir in family.homogeneous.iter().take(dirs) {
                let t = (rem % width) as i64 - options.grid_radius;
                rem /= width;
                if t != 0 {
                    mat = mat.add(&dir.scale(&field.integer(t)));
                }
            }
            candidates.push(mat);
        }
    }
    let mut rng = Rng::new(options.seed);
    for _ in 0..options.random_samples {
        let mut mat = base.clone();
        for dir in &family.homogeneous {
            let t = rng.int_in(-options.grid_radius, options.grid_radius);
            if t != 0 {
                mat = mat.add(&dir.scale(&field.integer(t)));
            }
        }
        candidates.push(mat);
    }
    let mut unique: Vec<Mat> = Vec::new();
    for c in candidates {
        if !unique.contains(&c) {
            unique.push(c);
        }
    }

    let mut flat_members: Vec<Mat> = Vec::new();
    for (idx, mat) in unique.iter().enumerate() {
        let conn = HomConnection::new(setting.clone(), mat.clone())?;
        let leibniz = check_hom_connection(&conn);
        summarize(&mut report, &format!("candidate[{idx}].hom-leibniz"), "∇(f·a) = ∇(f)·a + f(da)", &leibniz);
        let identities = verify_hom_identities(&conn)?;
        summarize(&mut report, &format!("candidate[{idx}].identities"), "the φ and curvature identities", &identities);
        if is_flat(&conn)? {
            flat_members.push(mat.clone());
            let prop = verify_prop_31(&conn);
            summarize(
                &mut report,
                &format!("candidate[{idx}].left-action"),
                "the induced left action is a bimodule structure",
                &prop,
            );
            match left_symbol(&conn) {
                Ok(symbol) => {
                    summarize(
                        &mut report,
                        &format!("candidate[{idx}].symbol"),
                        "σ_L is first-order and descends through ⊗_A",
                        symbol.report(),
                    );
                    let closed = verify_symbol_formula(&conn, &symbol);
                    summarize(
                        &mut report,
                        &format!("candidate[{idx}].symbol-closed-form"),
                        "σ_L(b·dc ⊗ φ_{m,a}) = b·[a,c]·m",
                        &closed,
                    );
                }
                Err(e) => report.record(
                    &format!("candidate[{idx}].symbol"),
                    "σ_L is first-order and descends through ⊗_A",
                    CheckStatus::Fail,
                    Some(format!("{e}")),
                ),
            }
        }
    }

    let witness_identity = "a flat hom-connection inside the sampled family";
    if flat_members.is_empty() {
        report.skip(
            "flat-witness",
            witness_identity,
            format!("none among {} candidates; the flat-only checks were not exercised", unique.len()),
        );
    } else {
        report.record(
            "flat-witness",
            witness_identity,
            CheckStatus::Pass,
            Some(format!("{} distinct flat member(s)", flat_members.len())),
        );
    }

    Ok(HomSweep { family_dim: Some(hdim), candidates_tested: unique.len(), flat_members, report })
}

/// Column vectors over the 2×2 matrix preset as a right module, v·a := aᵀv:
/// the smallest right module over mat2 that is not free.
pub fn column_module(algebra: &Arc<Algebra>) -> Result<ModuleRep, AlgebraError> {
    if algebra.preset_name() != Some("mat2") {
        return Err(AlgebraError::ShapeMismatch(String::from(
            "the column module is defined over the mat2 preset",
        )));
    }
    let f = algebra.field();
    // transposes of E11, E12, E21, E22 acting on K²
    let right = vec![
        Mat::from_i64(f, 2, 2, &[1, 0, 0, 0]),
        Mat::from_i64(f, 2, 2, &[0, 0, 1, 0]),
        Mat::from_i64(f, 2, 2, &[0, 1, 0, 0]),
        Mat::from_i64(f, 2, 2, &[0, 0, 0, 1]),
    ];
    ModuleRep::new(algebra.clone(), 2, None, Some(right))
}
