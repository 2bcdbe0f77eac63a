//! Connections ∇: M → A⊗M on left modules, flatness, the right action a flat
//! connection induces, braidings of flat pairs, the right universal symbols
//! σ¹/σ², the tensor-product connection, and solvers/generators.
//!
//! Everything lives in the reduced picture: a connection is an (n·m)×m matrix
//! sending module coordinates to A⊗M coordinates, with the image-in-Ω¹⊗_AM
//! condition expressed as a contraction constraint.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{tensor_over_a, Algebra, AlgebraError, ModuleRep, Side, TensorOverA};
use crate::calculus::{CalculusError, UniversalCalculus};
use crate::field::{render_vector, Scalar};
use crate::mat::{swap_matrix, vec_add, vec_is_zero, AffineSolution, Mat, Subspace};
use crate::report::Report;
use crate::rng::Rng;

/// How many times generators resample before giving up.
const RETRY_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionError {
    ShapeMismatch(String),
    /// The map fails (con1)/(con2); carries the id of the first failing check.
    NotAConnection(String),
    NotFlat(String),
    WellDefinednessFailure(String),
    RetryExhausted { attempts: usize },
    /// An internal consistency guarantee was violated — always a bug.
    Internal(String),
    Algebra(AlgebraError),
    Calculus(CalculusError),
}

impl fmt::Display for ConnectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectionError::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
            ConnectionError::NotAConnection(id) => {
                write!(f, "the map is not a connection (first failing check: {id})")
            }
            ConnectionError::NotFlat(what) => write!(f, "connection is not flat: {what}"),
            ConnectionError::WellDefinednessFailure(s) => {
                write!(f, "map does not descend to the quotient: {s}")
            }
            ConnectionError::RetryExhausted { attempts } => {
                write!(f, "random sampling exhausted after {attempts} attempts")
            }
            ConnectionError::Internal(s) => write!(f, "internal invariant violated: {s}"),
            ConnectionError::Algebra(e) => write!(f, "{e}"),
            ConnectionError::Calculus(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ConnectionError {}

impl From<AlgebraError> for ConnectionError {
    fn from(e: AlgebraError) -> Self {
        ConnectionError::Algebra(e)
    }
}

impl From<CalculusError> for ConnectionError {
    fn from(e: CalculusError) -> Self {
        ConnectionError::Calculus(e)
    }
}

/// ∇: M → A⊗M as an (n·m)×m matrix over the module's field.
#[derive(Debug, Clone)]
pub struct Connection {
    module: Arc<ModuleRep>,
    matrix: Mat,
}

impl Connection {
    pub fn new(module: Arc<ModuleRep>, matrix: Mat) -> Result<Connection, ConnectionError> {
        if !module.has_left() {
            return Err(ConnectionError::Algebra(AlgebraError::ActionAbsent("left")));
        }
        let n = module.algebra().dim();
        let m = module.dim();
        if matrix.rows() != n * m || matrix.cols() != m {
            return Err(ConnectionError::ShapeMismatch(format!(
                "∇ must be {}×{}, got {}×{}",
                n * m,
                m,
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.field() != module.field() {
            return Err(ConnectionError::ShapeMismatch(String::from(
                "∇ and module are over different fields",
            )));
        }
        Ok(Connection { module, matrix })
    }

    /// The differential as a connection on the left regular module:
    /// a ↦ 1⊗a − a⊗1.
    pub fn d_connection(algebra: Arc<Algebra>) -> Connection {
        let field = algebra.field();
        let n = algebra.dim();
        let id = Mat::identity(field, n);
        let matrix = algebra.unit_col().kron(&id).sub(&id.kron(&algebra.unit_col()));
        let module = Arc::new(ModuleRep::regular(algebra, Side::Left));
        Connection { module, matrix }
    }

    pub fn zero(module: Arc<ModuleRep>) -> Connection {
        let field = module.field();
        let rows = module.algebra().dim() * module.dim();
        let matrix = Mat::zero(field, rows, module.dim());
        Connection { module, matrix }
    }

    pub fn module(&self) -> &Arc<ModuleRep> {
        &self.module
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.module.algebra()
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }
}

/// Checks the two defining conditions: the image of ∇ contracts to zero
/// under a⊗m ↦ am, and the Leibniz rule holds on every basis pair.
pub fn check_connection(conn: &Connection) -> Report {
    let module = conn.module.as_ref();
    let alg = module.algebra();
    let field = module.field();
    let n = alg.dim();
    let m = module.dim();
    let left = module.left_mats().expect("connections require a left action");
    let ctr = module
        .contraction_left()
        .expect("connections require a left action");
    let id_m = Mat::identity(field, m);
    let mut report = Report::new();

    let contracted = ctr.matmul(&conn.matrix);
    for j in 0..m {
        let col = contracted.col(j);
        report.check(
            &format!("image-contracts[{j}]"),
            "(a⊗m ↦ am) ∘ ∇ = 0",
            vec_is_zero(&col),
            || format!("∇(m_{j}) contracts to {}", render_vector(&col)),
        );
    }

    for i in 0..n {
        let lhs = conn.matrix.matmul(&left[i]);
        let rhs = alg
            .left_mat(i)
            .kron(&id_m)
            .matmul(&conn.matrix)
            .add(&alg.unit_col().kron(&id_m).matmul(&left[i]))
            .sub(&basis_col(alg, i).kron(&id_m));
        let diff = lhs.sub(&rhs);
        for j in 0..m {
            let col = diff.col(j);
            report.check(
                &format!("leibniz[{i},{j}]"),
                "∇(a·m) = a·∇(m) + 1⊗(a·m) − a⊗m",
                vec_is_zero(&col),
                || {
                    format!(
                        "at a = {}, m = m_{j}: difference {}",
                        alg.names()[i],
                        render_vector(&col)
                    )
                },
            );
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatnessReport {
    pub is_flat: bool,
    /// residual(m_j) = 1⊗∇(m_j) − (id⊗∇)(∇(m_j)) in A⊗A⊗M coordinates.
    pub residuals: Vec<Vec<Scalar>>,
}

/// The flatness residual; errors if the input fails (con-check) first.
pub fn flatness(conn: &Connection) -> Result<FlatnessReport, ConnectionError> {
    let checked = check_connection(conn);
    if let Some(failure) = checked.failures().next() {
        return Err(ConnectionError::NotAConnection(failure.id.clone()));
    }
    Ok(flatness_unchecked(conn))
}

fn flatness_unchecked(conn: &Connection) -> FlatnessReport {
    let module = conn.module.as_ref();
    let alg = module.algebra();
    let field = module.field();
    let n = alg.dim();
    let m = module.dim();
    let residual = alg
        .unit_col()
        .kron(&Mat::identity(field, n * m))
        .matmul(&conn.matrix)
        .sub(&Mat::identity(field, n).kron(&conn.matrix).matmul(&conn.matrix));
    let residuals: Vec<Vec<Scalar>> = (0..m).map(|j| residual.col(j)).collect();
    FlatnessReport { is_flat: residual.is_zero(), residuals }
}

/// The right action read off from ∇: m·a := am − Σ m⁽ᴬ⁾a m⁽ᴹ⁾.
/// Defined for any map of connection shape; it is an action exactly when
/// ∇ is flat, which `verify_lemma_21` checks.
pub fn induce_right_action(conn: &Connection) -> Vec<Mat> {
    let module = conn.module.as_ref();
    let alg = module.algebra();
    let field = module.field();
    let m = module.dim();
    let left = module.left_mats().expect("connections require a left action");
    let ctr = module.contraction_left().expect("left action present");
    let id_m = Mat::identity(field, m);
    (0..alg.dim())
        .map(|j| {
            let correction = ctr
                .matmul(&alg.right_mat(j).kron(&id_m))
                .matmul(&conn.matrix);
            left[j].sub(&correction)
        })
        .collect()
}

/// Checks that the induced right action is unital, associative, and commutes
/// with the left action — on non-flat input this reports which laws break.
pub fn verify_lemma_21(conn: &Connection) -> Report {
    let module = conn.module.as_ref();
    let alg = module.algebra();
    let field = module.field();
    let n = alg.dim();
    let m = module.dim();
    let left = module.left_mats().expect("left action present");
    let rm = induce_right_action(conn);
    let mut report = Report::new();

    let mut unit_action = Mat::zero(field, m, m);
    for (j, c) in alg.unit().iter().enumerate() {
        if !c.is_zero() {
            unit_action = unit_action.add(&rm[j].scale(c));
        }
    }
    report.check(
        "right-action-unital",
        "m·1 = m",
        unit_action == Mat::identity(field, m),
        || String::from("action of the unit is not the identity matrix"),
    );

    for i in 0..n {
        for j in 0..n {
            let composed = rm[j].matmul(&rm[i]);
            let mut structural = Mat::zero(field, m, m);
            for (k, c) in alg.struct_consts()[i][j].iter().enumerate() {
                if !c.is_zero() {
                    structural = structural.add(&rm[k].scale(c));
                }
            }
            let diff = composed.sub(&structural);
            report.check(
                &format!("right-action-assoc[{},{}]", alg.names()[i], alg.names()[j]),
                "(m·a)·b = m·(ab)",
                diff.is_zero(),
                || witness_first_column(&diff),
            );
        }
    }

    for i in 0..n {
        for j in 0..n {
            let diff = rm[j].matmul(&left[i]).sub(&left[i].matmul(&rm[j]));
            report.check(
                &format!("left-right-compat[{},{}]", alg.names()[i], alg.names()[j]),
                "(a·m)·b = a·(m·b)",
                diff.is_zero(),
                || witness_first_column(&diff),
            );
        }
    }
    report
}

/// M as a validated bimodule, with the right action induced by the flat ∇.
pub fn bimodule(conn: &Connection) -> Result<ModuleRep, ConnectionError> {
    let flat = flatness(conn)?;
    if !flat.is_flat {
        return Err(ConnectionError::NotFlat(String::from(
            "the induced right action is only an action for flat ∇",
        )));
    }
    Ok(conn.module.with_right(induce_right_action(conn))?)
}

/// d as a connection on Ωᵏ: the target Ω^{k+1} ⊆ A⊗Ωᵏ is re-expressed through
/// the splitting of the first tensor leg.
pub fn connection_on_omega(
    calc: &UniversalCalculus,
    k: usize,
) -> Result<Connection, ConnectionError> {
    if k == 0 {
        return Ok(Connection::d_connection(calc.algebra().clone()));
    }
    let space = calc.omega(k)?;
    let next = calc.omega(k + 1)?;
    let field = calc.algebra().field();
    let n = calc.algebra().dim();
    let extract = space.subspace().extraction_matrix();
    let matrix = Mat::identity(field, n)
        .kron(&extract)
        .matmul(&next.subspace().embedding_matrix())
        .matmul(calc.d(k)?);
    // The extraction above is only a chart on Ωᵏ; certify that each first-leg
    // slice of a degree-(k+1) form really lies in Ωᵏ, so the chart was valid.
    let reassembled = Mat::identity(field, n)
        .kron(&space.subspace().embedding_matrix())
        .matmul(&matrix);
    if reassembled != next.subspace().embedding_matrix().matmul(calc.d(k)?) {
        return Err(ConnectionError::Internal(String::from(
            "first-leg splitting of a top form left the lower graded piece",
        )));
    }
    let module = Arc::new(space.module(calc.algebra().clone())?);
    Connection::new(module, matrix)
}

/// The braiding of two flat connections, with its inverse and the linearity
/// and symmetry checks that certify it.
#[derive(Debug, Clone)]
pub struct Braiding {
    pub source: Arc<TensorOverA>,
    pub target: Arc<TensorOverA>,
    /// Quotient-coordinate matrix of c: M⊗_A N → N⊗_A M.
    pub matrix: Mat,
    /// Quotient-coordinate matrix of c: N⊗_A M → M⊗_A N.
    pub inverse: Mat,
    pub report: Report,
}

pub fn braiding(cm: &Connection, cn: &Connection) -> Result<Braiding, ConnectionError> {
    let m_bi = Arc::new(bimodule(cm)?);
    let n_bi = Arc::new(bimodule(cn)?);
    let mn = Arc::new(tensor_over_a(&m_bi, &n_bi)?);
    let nm = Arc::new(tensor_over_a(&n_bi, &m_bi)?);
    braiding_prebuilt(cm, cn, &mn, &nm)
}

/// Braiding over caller-provided tensor quotients: `mn` must be M⊗_A N and
/// `nm` must be N⊗_A M for the modules underlying the two connections.
pub fn braiding_prebuilt(
    cm: &Connection,
    cn: &Connection,
    mn: &Arc<TensorOverA>,
    nm: &Arc<TensorOverA>,
) -> Result<Braiding, ConnectionError> {
    for (conn, name) in [(cm, "first"), (cn, "second")] {
        if !flatness(conn)?.is_flat {
            return Err(ConnectionError::NotFlat(format!("{name} braiding factor")));
        }
    }
    let matrix = braid_descend(cm, mn, nm).ok_or_else(|| {
        ConnectionError::WellDefinednessFailure(String::from(
            "braiding lift does not map the relation space into relations",
        ))
    })?;
    let inverse = braid_descend(cn, nm, mn).ok_or_else(|| {
        ConnectionError::WellDefinednessFailure(String::from(
            "reverse braiding lift does not map the relation space into relations",
        ))
    })?;

    let mut report = Report::new();
    braid_linearity(&mut report, "", &matrix, mn, nm)?;
    let field = cm.module.field();
    report.check(
        "braid-symmetry-left",
        "c_{N,M} ∘ c_{M,N} = id",
        inverse.matmul(&matrix) == Mat::identity(field, mn.dim()),
        || String::from("composite differs from the identity"),
    );
    report.check(
        "braid-symmetry-right",
        "c_{M,N} ∘ c_{N,M} = id",
        matrix.matmul(&inverse) == Mat::identity(field, nm.dim()),
        || String::from("composite differs from the identity"),
    );
    Ok(Braiding { source: mn.clone(), target: nm.clone(), matrix, inverse, report })
}

/// Descends the braid lift of ∇ on the left factor of `src` onto the given
/// quotients. `None` means the lift moved some relation out of the target's
/// relation space; the lift annihilates the source relations outright for a
/// flat connection, so this cannot depend on how the target is quotiented.
fn braid_descend(
    cm: &Connection,
    src: &Arc<TensorOverA>,
    tgt: &Arc<TensorOverA>,
) -> Option<Mat> {
    let lift = braid_lift(cm, src.right_factor());
    src.quotient().induced_map(&lift, tgt.quotient())
}

/// Left and right A-linearity of a descended braiding, against the module
/// structures the two tensor quotients carry.
fn braid_linearity(
    report: &mut Report,
    prefix: &str,
    matrix: &Mat,
    src: &TensorOverA,
    tgt: &TensorOverA,
) -> Result<(), ConnectionError> {
    let alg = src.left_factor().algebra();
    let src_mod = src.module();
    let tgt_mod = tgt.module();
    let dot = if prefix.is_empty() { "" } else { "." };
    for i in 0..alg.dim() {
        let ldiff = matrix
            .matmul(&src_mod.left_mats()?[i])
            .sub(&tgt_mod.left_mats()?[i].matmul(matrix));
        report.check(
            &format!("{prefix}{dot}braid-left-linear[{}]", alg.names()[i]),
            "c(a·t) = a·c(t)",
            ldiff.is_zero(),
            || witness_first_column(&ldiff),
        );
        let rdiff = matrix
            .matmul(&src_mod.right_mats()?[i])
            .sub(&tgt_mod.right_mats()?[i].matmul(matrix));
        report.check(
            &format!("{prefix}{dot}braid-right-linear[{}]", alg.names()[i]),
            "c(t·a) = c(t)·a",
            rdiff.is_zero(),
            || witness_first_column(&rdiff),
        );
    }
    Ok(())
}

/// The lift c̃: M⊗N → N⊗M, m⊗n ↦ n⊗m − Σ m⁽ᴬ⁾n ⊗ m⁽ᴹ⁾.
fn braid_lift(cm: &Connection, n_mod: &ModuleRep) -> Mat {
    let field = cm.module.field();
    let n_alg = cm.algebra().dim();
    let m_dim = cm.module.dim();
    let n_dim = n_mod.dim();
    let swap = swap_matrix(field, m_dim, n_dim);
    let correction = n_mod
        .contraction_left()
        .expect("left action present")
        .kron(&Mat::identity(field, m_dim))
        .matmul(&Mat::identity(field, n_alg).kron(&swap))
        .matmul(&cm.matrix.kron(&Mat::identity(field, n_dim)));
    swap.sub(&correction)
}

/// The kernel model of M⊗_A Ωᵏ inside M⊗A^{⊗k}: vanishing of the right
/// action on the first pair and of every adjacent multiplication.
pub fn right_kernel_model(module: &ModuleRep, k: usize) -> Result<Subspace, ConnectionError> {
    Ok(right_kernel_model_from(module, &module.contraction_right()?, k))
}

fn right_kernel_model_from(module: &ModuleRep, ctr_r: &Mat, k: usize) -> Subspace {
    let alg = module.algebra();
    let field = module.field();
    let n = alg.dim();
    let m = module.dim();
    assert!(k >= 1);
    let mut rows = ctr_r.kron(&Mat::identity(field, n.pow((k - 1) as u32)));
    for j in 0..k.saturating_sub(1) {
        let op = Mat::identity(field, m * n.pow(j as u32))
            .kron(alg.mult_matrix())
            .kron(&Mat::identity(field, n.pow((k - 2 - j) as u32)));
        rows = rows.vstack(&op);
    }
    Subspace::from_spanning(&rows.kernel())
}

/// The contraction M⊗A → M of the right action a connection induces; the
/// bimodule need not be assembled (or even lawful) for this matrix to exist.
fn induced_contraction_right(conn: &Connection) -> Mat {
    let field = conn.module.field();
    let n = conn.algebra().dim();
    let m = conn.module.dim();
    let rm = induce_right_action(conn);
    let mut ctr = Mat::zero(field, m, m * n);
    for (a, r) in rm.iter().enumerate() {
        for j in 0..m {
            for (row, val) in r.col(j).into_iter().enumerate() {
                if !val.is_zero() {
                    ctr.set(row, j * n + a, val);
                }
            }
        }
    }
    ctr
}

/// The kernel model of Ωᵏ⊗_A M inside A^{⊗k}⊗M.
pub fn left_kernel_model(module: &ModuleRep, k: usize) -> Result<Subspace, ConnectionError> {
    let alg = module.algebra();
    let field = module.field();
    let n = alg.dim();
    let m = module.dim();
    assert!(k >= 1);
    let mut rows = Mat::identity(field, n.pow((k - 1) as u32)).kron(&module.contraction_left()?);
    for j in 0..k.saturating_sub(1) {
        let op = Mat::identity(field, n.pow(j as u32))
            .kron(alg.mult_matrix())
            .kron(&Mat::identity(field, n.pow((k - 2 - j) as u32) * m));
        rows = rows.vstack(&op);
    }
    Ok(Subspace::from_spanning(&rows.kernel()))
}

/// A universal symbol realized on kernel models: `matrix` maps `source`
/// coordinates to `target` coordinates.
#[derive(Debug, Clone)]
pub struct Sigma {
    pub source: Subspace,
    pub target: Subspace,
    pub matrix: Mat,
}

/// The ambient lift M⊗A → A⊗M of the right universal symbol,
/// m⊗a ↦ −∇(m)·a.
pub fn sigma_lift(conn: &Connection) -> Mat {
    let field = conn.module.field();
    let n = conn.algebra().dim();
    let m = conn.module.dim();
    let rm = induce_right_action(conn);
    let mut tilde = Mat::zero(field, n * m, m * n);
    for (a, r) in rm.iter().enumerate() {
        let block = Mat::identity(field, n).kron(r).matmul(&conn.matrix).neg();
        for j in 0..m {
            let col = block.col(j);
            for (row, val) in col.into_iter().enumerate() {
                if !val.is_zero() {
                    tilde.set(row, j * n + a, val);
                }
            }
        }
    }
    tilde
}

/// σ¹ on the kernel model of M⊗_A Ω¹, landing in the kernel model of
/// Ω¹⊗_A M. Well-defined for any connection.
pub fn sigma1(conn: &Connection) -> Result<Sigma, ConnectionError> {
    let checked = check_connection(conn);
    if let Some(failure) = checked.failures().next() {
        return Err(ConnectionError::NotAConnection(failure.id.clone()));
    }
    let source = right_kernel_model_from(conn.module.as_ref(), &induced_contraction_right(conn), 1);
    let target = left_kernel_model(conn.module.as_ref(), 1)?;
    let tilde = sigma_lift(conn);
    let matrix = source.restrict_map(&tilde, &target).ok_or_else(|| {
        ConnectionError::WellDefinednessFailure(String::from(
            "σ¹ lift leaves the kernel model of Ω¹⊗_A M",
        ))
    })?;
    Ok(Sigma { source, target, matrix })
}

/// σ² := (id⊗σ¹)∘(σ¹⊗id) restricted to the kernel model of M⊗_A Ω², with the
/// intermediate membership in the mixed model asserted. Requires flatness.
pub fn sigma2(conn: &Connection) -> Result<Sigma, ConnectionError> {
    if !flatness(conn)?.is_flat {
        return Err(ConnectionError::NotFlat(String::from("σ² requires a flat connection")));
    }
    let module = conn.module.as_ref();
    let field = module.field();
    let n = conn.algebra().dim();
    let ctr_r = induced_contraction_right(conn);
    let source = right_kernel_model_from(module, &ctr_r, 2);
    let target = left_kernel_model(module, 2)?;
    let mid = mid_kernel_model(module, &ctr_r)?;
    let tilde = sigma_lift(conn);
    let first = source
        .restrict_map(&tilde.kron(&Mat::identity(field, n)), &mid)
        .ok_or_else(|| {
            ConnectionError::WellDefinednessFailure(String::from(
                "σ¹⊗id leaves the mixed kernel model",
            ))
        })?;
    let second = mid
        .restrict_map(&Mat::identity(field, n).kron(&tilde), &target)
        .ok_or_else(|| {
            ConnectionError::WellDefinednessFailure(String::from(
                "id⊗σ¹ leaves the kernel model of Ω²⊗_A M",
            ))
        })?;
    let matrix = second.matmul(&first);
    Ok(Sigma { source, target, matrix })
}

/// The kernel model of Ω¹⊗_A M⊗_A Ω¹ inside A⊗M⊗A.
fn mid_kernel_model(module: &ModuleRep, ctr_r: &Mat) -> Result<Subspace, ConnectionError> {
    let field = module.field();
    let n = module.algebra().dim();
    let rows = module
        .contraction_left()?
        .kron(&Mat::identity(field, n))
        .vstack(&Mat::identity(field, n).kron(ctr_r));
    Ok(Subspace::from_spanning(&rows.kernel()))
}

/// The isomorphism from the quotient model of a tensor product onto its
/// kernel model, certified by rank.
#[derive(Debug, Clone)]
pub struct ReductionIso {
    pub tensor: Arc<TensorOverA>,
    pub kernel: Subspace,
    /// Quotient coordinates → kernel-model coordinates.
    pub matrix: Mat,
}

/// M⊗_A Ωᵏ → kernel model, m⊗ω ↦ (m·ω₀)⊗(ω₁⊗…⊗ω_k).
pub fn reduction_right(
    m_bi: &Arc<ModuleRep>,
    calc: &UniversalCalculus,
    k: usize,
) -> Result<ReductionIso, ConnectionError> {
    let omega_mod = Arc::new(calc.omega(k)?.module(calc.algebra().clone())?);
    let tensor = Arc::new(tensor_over_a(m_bi, &omega_mod)?);
    reduction_right_prebuilt(m_bi, calc, k, &tensor)
}

pub fn reduction_right_prebuilt(
    m_bi: &Arc<ModuleRep>,
    calc: &UniversalCalculus,
    k: usize,
    tensor: &Arc<TensorOverA>,
) -> Result<ReductionIso, ConnectionError> {
    let field = m_bi.field();
    let n = calc.algebra().dim();
    let m = m_bi.dim();
    let kernel = right_kernel_model(m_bi.as_ref(), k)?;
    let ambient_red = m_bi
        .contraction_right()?
        .kron(&Mat::identity(field, n.pow(k as u32)));
    let full = ambient_red.matmul(
        &Mat::identity(field, m).kron(&calc.omega(k)?.subspace().embedding_matrix()),
    );
    finish_reduction(tensor, kernel, full)
}

/// Ωᵏ⊗_A M → kernel model, ω⊗m ↦ (ω₀⊗…⊗ω_{k−1})⊗(ω_k·m).
pub fn reduction_left(
    calc: &UniversalCalculus,
    m_bi: &Arc<ModuleRep>,
    k: usize,
) -> Result<ReductionIso, ConnectionError> {
    let omega_mod = Arc::new(calc.omega(k)?.module(calc.algebra().clone())?);
    let tensor = Arc::new(tensor_over_a(&omega_mod, m_bi)?);
    reduction_left_prebuilt(calc, m_bi, k, &tensor)
}

pub fn reduction_left_prebuilt(
    calc: &UniversalCalculus,
    m_bi: &Arc<ModuleRep>,
    k: usize,
    tensor: &Arc<TensorOverA>,
) -> Result<ReductionIso, ConnectionError> {
    let field = m_bi.field();
    let n = calc.algebra().dim();
    let m = m_bi.dim();
    let kernel = left_kernel_model(m_bi.as_ref(), k)?;
    let ambient_red = Mat::identity(field, n.pow(k as u32)).kron(&m_bi.contraction_left()?);
    let full = ambient_red.matmul(
        &calc
            .omega(k)?
            .subspace()
            .embedding_matrix()
            .kron(&Mat::identity(field, m)),
    );
    finish_reduction(tensor, kernel, full)
}

fn finish_reduction(
    tensor: &Arc<TensorOverA>,
    kernel: Subspace,
    full: Mat,
) -> Result<ReductionIso, ConnectionError> {
    let coords = kernel.extraction_matrix().matmul(&full);
    if kernel.embedding_matrix().matmul(&coords) != full {
        return Err(ConnectionError::Internal(String::from(
            "reduction image left the kernel model",
        )));
    }
    if !coords
        .matmul(&tensor.quotient().relations().basis().transpose())
        .is_zero()
    {
        return Err(ConnectionError::WellDefinednessFailure(String::from(
            "reduction does not annihilate the tensor relations",
        )));
    }
    let matrix = coords.matmul(tensor.quotient().section());
    if tensor.dim() != kernel.dim() || matrix.rank() != kernel.dim() {
        return Err(ConnectionError::Internal(format!(
            "reduction is not an isomorphism: quotient dim {}, kernel dim {}, rank {}",
            tensor.dim(),
            kernel.dim(),
            matrix.rank()
        )));
    }
    Ok(ReductionIso { tensor: tensor.clone(), kernel, matrix })
}

/// The full assertion suite for a flat connection: the induced structure is a
/// bimodule connection whose symbols are the braidings with Ω¹ and Ω².
pub fn verify_theorem_24(
    conn: &Connection,
    calc: &UniversalCalculus,
) -> Result<Report, ConnectionError> {
    if !flatness(conn)?.is_flat {
        return Err(ConnectionError::NotFlat(String::from("the suite requires flat input")));
    }
    let alg = conn.algebra().clone();
    let field = conn.module.field();
    let n = alg.dim();
    let m = conn.module.dim();
    let mut report = Report::new();

    let m_bi = Arc::new(bimodule(conn)?);
    let rm = induce_right_action(conn);
    let tilde = sigma_lift(conn);
    let s1 = sigma1(conn)?;
    let s2 = sigma2(conn)?;

    // d is itself a flat connection on each Ωᵏ that enters the comparison.
    // (Its induced right action is NOT the multiplication into the last leg —
    // on a closed form the correction term dies and the induced action
    // degenerates to the left one — so the tensor quotients below are taken
    // over the calculus' own right multiplication, the structure the
    // reduction isomorphisms are built from.)
    for k in 1..=2usize {
        let oc = connection_on_omega(calc, k)?;
        report.check(
            &format!("omega-connection-flat[{k}]"),
            "d is a flat connection on Ωᵏ",
            flatness(&oc)?.is_flat,
            || format!("degree {k}: the differential fails the flatness residual"),
        );
    }

    // Bimodule-connection law: ∇(m·a) = ∇(m)·a + σ¹(m⊗da), evaluated with
    // the explicit kernel-model element m⊗a − (m·a)⊗1 representing m⊗_A da.
    for j in 0..m {
        for i in 0..n {
            let lhs = conn.matrix.apply(&rm[i].col(j));
            let term1 = Mat::identity(field, n)
                .kron(&rm[i])
                .apply(&conn.matrix.col(j));
            let mut kernel_elem = vec![field.zero(); m * n];
            kernel_elem[j * n + i] = field.one();
            let ma = rm[i].col(j);
            for (mu, c) in ma.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (b, u) in alg.unit().iter().enumerate() {
                    if !u.is_zero() {
                        let prod = c * u;
                        kernel_elem[mu * n + b] = &kernel_elem[mu * n + b] - &prod;
                    }
                }
            }
            let term2 = tilde.apply(&kernel_elem);
            let rhs = vec_add(&term1, &term2);
            report.check(
                &format!("bimodule-connection[{j},{}]", alg.names()[i]),
                "∇(m·a) = ∇(m)·a + σ¹(m⊗da)",
                lhs == rhs,
                || format!("at m_{j}, a = {}", alg.names()[i]),
            );
        }
    }

    // σ¹ = c_{M,Ω¹} and σ² = c_{M,Ω²}, compared through the reduction
    // isomorphisms between the quotient and kernel models. Only the forward
    // braid exists over these quotients (the reverse lift would need the
    // induced structure on forms); invertibility is certified by rank.
    for (k, sigma) in [(1usize, &s1), (2usize, &s2)] {
        let omega_mod = Arc::new(calc.omega(k)?.module(alg.clone())?);
        let mo = Arc::new(tensor_over_a(&m_bi, &omega_mod)?);
        let om = Arc::new(tensor_over_a(&omega_mod, &m_bi)?);
        let braid = braid_descend(conn, &mo, &om).ok_or_else(|| {
            ConnectionError::WellDefinednessFailure(String::from(
                "braiding lift does not map the relation space into relations",
            ))
        })?;
        report.check(
            &format!("omega{k}.braid-iso"),
            "c_{M,Ω} is invertible on the quotients",
            mo.dim() == om.dim() && braid.rank() == mo.dim(),
            || {
                format!(
                    "degree {k}: rank {} between spaces of dimension {} and {}",
                    braid.rank(),
                    mo.dim(),
                    om.dim()
                )
            },
        );
        braid_linearity(&mut report, &format!("omega{k}"), &braid, &mo, &om)?;
        let red_r = reduction_right_prebuilt(&m_bi, calc, k, &mo)?;
        let red_l = reduction_left_prebuilt(calc, &m_bi, k, &om)?;
        let via_sigma = sigma.matrix.matmul(&red_r.matrix);
        let via_braid = red_l.matrix.matmul(&braid);
        report.check(
            &format!("sigma{k}-is-braiding"),
            "σ = c_{M,Ω} under the reduction isomorphisms",
            via_sigma == via_braid,
            || format!("degree {k}: symbol and braiding matrices differ"),
        );
    }
    Ok(report)
}

/// The five-term connection on M⊗_A N built from a flat ∇_M and any ∇_N.
pub fn tensor_connection(
    cm: &Connection,
    cn: &Connection,
) -> Result<(Arc<TensorOverA>, Connection), ConnectionError> {
    if !flatness(cm)?.is_flat {
        return Err(ConnectionError::NotFlat(String::from(
            "the left tensor factor must carry a flat connection",
        )));
    }
    let m_bi = Arc::new(bimodule(cm)?);
    let tensor = Arc::new(tensor_over_a(&m_bi, cn.module())?);

    let field = cm.module.field();
    let na = cm.algebra().dim();
    let m = cm.module.dim();
    let n = cn.module().dim();
    let id_m = Mat::identity(field, m);
    let id_n = Mat::identity(field, n);
    let id_a = Mat::identity(field, na);
    let ctr_m = m_bi.contraction_left()?;
    let swap_ma = swap_matrix(field, m, na);

    // Σ m⁽ᴬ⁾⊗m⁽ᴹ⁾⊗n
    let t1 = cm.matrix.kron(&id_n);
    // Σ n⁽ᴬ⁾⊗m⊗n⁽ᴺ⁾
    let t2 = swap_ma.kron(&id_n).matmul(&id_m.kron(&cn.matrix));
    // Σ 1⊗(n⁽ᴬ⁾·m)⊗n⁽ᴺ⁾ (to be subtracted)
    let reinsert_unit = cm.algebra().unit_col().kron(&id_m).matmul(&ctr_m);
    let t3 = reinsert_unit.kron(&id_n).matmul(&t2);
    // both connections at once: Σ m⁽ᴬ⁾⊗m⁽ᴹ⁾⊗n⁽ᴬ⁾⊗n⁽ᴺ⁾
    let dd = cm.matrix.kron(&cn.matrix);
    // Σ m⁽ᴬ⁾⊗(n⁽ᴬ⁾·m⁽ᴹ⁾)⊗n⁽ᴺ⁾
    let act_mid = ctr_m.matmul(&swap_ma);
    let t4 = id_a.kron(&act_mid).kron(&id_n).matmul(&dd);
    // Σ (m⁽ᴬ⁾n⁽ᴬ⁾)⊗m⁽ᴹ⁾⊗n⁽ᴺ⁾ (to be subtracted)
    let t5 = cm
        .algebra()
        .mult_matrix()
        .kron(&id_m)
        .kron(&id_n)
        .matmul(&id_a.kron(&swap_ma).kron(&id_n))
        .matmul(&dd);
    let lift = t1.add(&t2).sub(&t3).add(&t4).sub(&t5);

    let project = id_a.kron(tensor.quotient().projection());
    let projected = project.matmul(&lift);
    if !projected
        .matmul(&tensor.quotient().relations().basis().transpose())
        .is_zero()
    {
        return Err(ConnectionError::WellDefinednessFailure(String::from(
            "five-term lift does not annihilate the tensor relations",
        )));
    }
    let matrix = projected.matmul(tensor.quotient().section());
    let module = Arc::new(tensor.module().clone());
    let connection = Connection::new(module, matrix)?;
    Ok((tensor, connection))
}

/// The affine solution set of the connection conditions on a left module.
#[derive(Debug, Clone)]
pub struct ConnectionFamily {
    /// One solution, if the system is consistent.
    pub particular: Option<Mat>,
    /// Basis of the homogeneous part: left-linear maps M → A⊗M with image
    /// annihilated by the contraction.
    pub homogeneous: Vec<Mat>,
}

impl ConnectionFamily {
    pub fn family_dim(&self) -> usize {
        self.homogeneous.len()
    }
}

/// Solves the linear conditions for ∇ exactly; reports consistency and the
/// dimension of the solution family.
pub fn solve_connections(module: &ModuleRep) -> Result<ConnectionFamily, ConnectionError> {
    let alg = module.algebra();
    let field = module.field();
    let n = alg.dim();
    let m = module.dim();
    let left = module.left_mats()?;
    let ctr = module.contraction_left()?;
    let id_m = Mat::identity(field, m);
    let vars = n * m * m;
    let var = |r: usize, c: usize| r * m + c;

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();

    // contraction ∘ ∇ = 0
    for p in 0..m {
        for j in 0..m {
            let mut row = vec![field.zero(); vars];
            for r in 0..n * m {
                let c = ctr.at(p, r);
                if !c.is_zero() {
                    row[var(r, j)] = c.clone();
                }
            }
            rows.push(row);
            rhs.push(field.zero());
        }
    }

    // Leibniz: ∇·L_i − (a_i⊗id)·∇ = 1⊗(a_i·m) − a_i⊗m
    for i in 0..n {
        let outer = alg.left_mat(i).kron(&id_m);
        let constant = alg
            .unit_col()
            .kron(&id_m)
            .matmul(&left[i])
            .sub(&basis_col(alg, i).kron(&id_m));
        for r in 0..n * m {
            for j in 0..m {
                let mut row = vec![field.zero(); vars];
                for c in 0..m {
                    let l = left[i].at(c, j);
                    if !l.is_zero() {
                        row[var(r, c)] = &row[var(r, c)] + l;
                    }
                }
                for s in 0..n * m {
                    let k = outer.at(r, s);
                    if !k.is_zero() {
                        row[var(s, j)] = &row[var(s, j)] - k;
                    }
                }
                rows.push(row);
                rhs.push(constant.at(r, j).clone());
            }
        }
    }

    let system = Mat::from_rows(field, vars, rows);
    match system.solve_affine(&rhs) {
        AffineSolution::Inconsistent => Ok(ConnectionFamily { particular: None, homogeneous: Vec::new() }),
        AffineSolution::Solution { particular, kernel } => {
            let reshape = |flat: &[Scalar]| -> Mat {
                let mut mat = Mat::zero(field, n * m, m);
                for r in 0..n * m {
                    for c in 0..m {
                        let v = flat[var(r, c)].clone();
                        if !v.is_zero() {
                            mat.set(r, c, v);
                        }
                    }
                }
                mat
            };
            let homogeneous = (0..kernel.rows()).map(|i| reshape(&kernel.row(i))).collect();
            Ok(ConnectionFamily { particular: Some(reshape(&particular)), homogeneous })
        }
    }
}

/// A seeded flat connection on the free module A⊗V: gauge-transport of
/// d⊗id_V by a random invertible left-linear automorphism.
pub fn random_flat_connection(
    algebra: Arc<Algebra>,
    v_dim: usize,
    seed: u64,
) -> Result<Connection, ConnectionError> {
    if v_dim == 0 {
        return Err(ConnectionError::ShapeMismatch(String::from(
            "the free rank must be at least 1",
        )));
    }
    let field = algebra.field();
    let n = algebra.dim();
    let id_n = Mat::identity(field, n);
    let id_v = Mat::identity(field, v_dim);
    let d0 = algebra
        .unit_col()
        .kron(&id_n)
        .sub(&id_n.kron(&algebra.unit_col()));
    let nabla0 = d0.kron(&id_v);
    let module = Arc::new(ModuleRep::free(algebra.clone(), v_dim));

    let mut rng = Rng::new(seed);
    for _ in 0..RETRY_CAP {
        let mut g = Mat::zero(field, n * v_dim, v_dim);
        for r in 0..n * v_dim {
            for c in 0..v_dim {
                let s = rng.scalar(field);
                if !s.is_zero() {
                    g.set(r, c, s);
                }
            }
        }
        let mut phi = Mat::zero(field, n * v_dim, n * v_dim);
        for p in 0..n {
            let block = algebra.left_mat(p).kron(&id_v).matmul(&g);
            for q in 0..v_dim {
                let col = block.col(q);
                for (row, val) in col.into_iter().enumerate() {
                    if !val.is_zero() {
                        phi.set(row, p * v_dim + q, val);
                    }
                }
            }
        }
        if let Some(phi_inv) = phi.inverse() {
            let matrix = id_n.kron(&phi).matmul(&nabla0).matmul(&phi_inv);
            return Connection::new(module, matrix);
        }
    }
    Err(ConnectionError::RetryExhausted { attempts: RETRY_CAP })
}

/// Adds a random homogeneous solution to ∇ until flatness breaks. `None`
/// means no non-flat perturbation was found — in particular when the
/// homogeneous family is zero (e.g. over the base field, where Ω¹ = 0).
pub fn perturb_to_nonflat(
    conn: &Connection,
    seed: u64,
    attempts: usize,
) -> Result<Option<Connection>, ConnectionError> {
    let family = solve_connections(conn.module.as_ref())?;
    if family.homogeneous.is_empty() {
        return Ok(None);
    }
    let field = conn.module.field();
    let mut rng = Rng::new(seed);
    for _ in 0..attempts {
        let mut delta = Mat::zero(field, conn.matrix.rows(), conn.matrix.cols());
        for h in &family.homogeneous {
            let c = rng.scalar(field);
            if !c.is_zero() {
                delta = delta.add(&h.scale(&c));
            }
        }
        if delta.is_zero() {
            continue;
        }
        let candidate = Connection::new(conn.module.clone(), conn.matrix.add(&delta))?;
        if !flatness(&candidate)?.is_flat {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

fn basis_col(alg: &Algebra, i: usize) -> Mat {
    Mat::from_images(alg.field(), alg.dim(), &[alg.basis_elem(i)])
}

pub(crate) fn witness_first_column(diff: &Mat) -> String {
    for j in 0..diff.cols() {
        let col = diff.col(j);
        if !vec_is_zero(&col) {
            return format!("first difference at basis column {j}: {}", render_vector(&col));
        }
    }
    String::from("no difference")
}
