//! Suite runners: map a validated instance onto the core verification
//! batteries and collect everything into one flat [`Report`].
//!
//! Check ids are namespaced `suite[object].core-check`, e.g.
//! `lemma21[d].right-action-assoc[x,x]`, so a merged `all` run stays
//! unambiguous and a single-suite run produces the same ids it would have
//! inside `all`. Connections that fail their axioms or are not flat never
//! abort a run: suites that need more than the instance offers record a
//! skip and move on. Hard errors — missing objects, a degree cap too low
//! for the suite — are input problems and surface as [`SuiteError`].

use std::sync::Arc;

use ncflat_core::calculus::UniversalCalculus;
use ncflat_core::connection::{
    braiding, check_connection, flatness, induce_right_action, tensor_connection,
    verify_lemma_21, verify_theorem_24, Connection, ConnectionError,
};
use ncflat_core::dga::{act_univ_mats, delta, dga_build, example_connection, inner_connection};
use ncflat_core::homconn::{
    bimodule_ansatz, check_hom_connection, hom_sweep, is_flat, left_symbol,
    solve_hom_connections, verify_hom_identities, verify_prop_31, verify_symbol_formula,
    HomConnection, HomSetting, HomSweepOptions,
};
use ncflat_core::mat::Mat;
use ncflat_core::report::Report;

use crate::instance::{mat_dto, Instance, InstanceDto, MapDto, DEGREE_CAP_ENV};

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("no module named {0:?} in the instance")]
    MissingObject(String),
    #[error(
        "the {suite} suite needs forms up to degree {required} but the cap is {cap} \
         (raise options.degree_cap or {DEGREE_CAP_ENV})"
    )]
    DegreeCapExceeded { suite: &'static str, required: usize, cap: usize },
    #[error("{0}")]
    Failed(String),
}

fn failed(e: impl std::fmt::Display) -> SuiteError {
    SuiteError::Failed(e.to_string())
}

/// Which battery to run. `All` is the others in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Connection,
    Lemma21,
    Braid,
    Thm24,
    Tensor,
    Dga,
    Hom,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Connection => "connection",
            Suite::Lemma21 => "lemma21",
            Suite::Braid => "braid",
            Suite::Thm24 => "thm24",
            Suite::Tensor => "tensor",
            Suite::Dga => "dga",
            Suite::Hom => "hom",
            Suite::All => "all",
        }
    }
}

/// Re-record every check of `src` under `prefix.`.
fn merge_under(dst: &mut Report, prefix: &str, src: &Report) {
    for c in &src.checks {
        dst.record(&format!("{prefix}.{}", c.id), &c.identity, c.status, c.witness.clone());
    }
}

/// Flatness as a three-way outcome: flat, not flat, or not even a connection.
enum FlatState {
    Flat,
    Curved(usize),
    NotAConnection(String),
}

fn flat_state(conn: &Connection) -> Result<FlatState, SuiteError> {
    match flatness(conn) {
        Ok(f) if f.is_flat => Ok(FlatState::Flat),
        Ok(f) => Ok(FlatState::Curved(f.residuals.len())),
        Err(ConnectionError::NotAConnection(id)) => Ok(FlatState::NotAConnection(id)),
        Err(e) => Err(failed(e)),
    }
}

fn flat_connections(inst: &Instance) -> Result<Vec<(&String, &Connection)>, SuiteError> {
    let mut out = Vec::new();
    for (name, conn) in &inst.connections {
        if matches!(flat_state(conn)?, FlatState::Flat) {
            out.push((name, conn));
        }
    }
    Ok(out)
}

pub fn run_suite(inst: &Instance, suite: Suite) -> Result<Report, SuiteError> {
    match suite {
        Suite::Connection => connection_suite(inst),
        Suite::Lemma21 => lemma21_suite(inst),
        Suite::Braid => braid_suite(inst),
        Suite::Thm24 => thm24_suite(inst),
        Suite::Tensor => tensor_suite(inst),
        Suite::Dga => dga_suite(inst),
        Suite::Hom => hom_suite(inst),
        Suite::All => {
            let mut report = Report::new();
            for s in [
                Suite::Connection,
                Suite::Lemma21,
                Suite::Braid,
                Suite::Thm24,
                Suite::Tensor,
                Suite::Dga,
                Suite::Hom,
            ] {
                report.merge(run_suite(inst, s)?);
            }
            Ok(report)
        }
    }
}

/// Connection axioms for every listed connection, plus a flatness
/// classification: flat passes, curved is a recorded skip (being curved is a
/// property, not a defect — the lemma21 suite is where curvature has
/// consequences).
fn connection_suite(inst: &Instance) -> Result<Report, SuiteError> {
    let mut report = Report::new();
    if inst.connections.is_empty() {
        report.skip(
            "connection.instances",
            "connection axioms",
            String::from("the instance lists no connections"),
        );
        return Ok(report);
    }
    for (name, conn) in &inst.connections {
        let prefix = format!("connection[{name}]");
        merge_under(&mut report, &prefix, &check_connection(conn));
        let id = format!("{prefix}.flat");
        match flat_state(conn)? {
            FlatState::Flat => report.pass(&id, "zero curvature"),
            FlatState::Curved(k) => report.skip(
                &id,
                "zero curvature",
                format!("curvature non-zero on {k} basis vector(s); flat-only suites skip {name:?}"),
            ),
            FlatState::NotAConnection(first) => report.skip(
                &id,
                "zero curvature",
                format!("not a connection (first failing check: {first}); curvature undefined"),
            ),
        }
    }
    Ok(report)
}

/// The induced right action of every listed connection: unitality,
/// associativity, and compatibility with the left action. For a curved
/// connection the associativity rows fail with a concrete witness.
fn lemma21_suite(inst: &Instance) -> Result<Report, SuiteError> {
    let mut report = Report::new();
    if inst.connections.is_empty() {
        report.skip(
            "lemma21.instances",
            "induced right action",
            String::from("the instance lists no connections"),
        );
        return Ok(report);
    }
    for (name, conn) in &inst.connections {
        merge_under(&mut report, &format!("lemma21[{name}]"), &verify_lemma_21(conn));
    }
    Ok(report)
}

/// Braidings for every unordered pair of flat connections (self-pairs
/// included): construction, the core well-definedness battery, and the
/// composition with the inverse.
fn braid_suite(inst: &Instance) -> Result<Report, SuiteError> {
    let mut report = Report::new();
    let flats = flat_connections(inst)?;
    if flats.is_empty() {
        report.skip(
            "braid.pairs",
            "braiding of flat pairs",
            String::from("no flat connections in the instance"),
        );
        return Ok(report);
    }
    let field = inst.algebra.field();
    for i in 0..flats.len() {
        for j in i..flats.len() {
            let (ni, ci) = flats[i];
            let (nj, cj) = flats[j];
            let prefix = format!("braid[{ni},{nj}]");
            match braiding(ci, cj) {
                Ok(b) => {
                    merge_under(&mut report, &prefix, &b.report);
                    let src_ok =
                        b.inverse.matmul(&b.matrix) == Mat::identity(field, b.source.dim());
                    let tgt_ok =
                        b.matrix.matmul(&b.inverse) == Mat::identity(field, b.target.dim());
                    report.check(
                        &format!("{prefix}.involutive"),
                        "the braiding and its inverse compose to the identity",
                        src_ok && tgt_ok,
                        || String::from("composition with the inverse is not the identity"),
                    );
                }
                Err(e) => report.fail(&prefix, "braiding of flat pairs", e.to_string()),
            }
        }
    }
    Ok(report)
}

/// The isomorphism battery for every flat connection; curved ones are
/// recorded skips. Needs forms up to degree 3.
fn thm24_suite(inst: &Instance) -> Result<Report, SuiteError> {
    let mut report = Report::new();
    if inst.connections.is_empty() {
        report.skip(
            "thm24.instances",
            "reduction isomorphisms",
            String::from("the instance lists no connections"),
        );
        return Ok(report);
    }
    let cap = inst.options.degree_cap;
    if cap < 3 {
        return Err(SuiteError::DegreeCapExceeded { suite: "thm24", required: 3, cap });
    }
    let calc = UniversalCalculus::new(inst.algebra.clone(), cap).map_err(failed)?;
    for (name, conn) in &inst.connections {
        let prefix = format!("thm24[{name}]");
        match flat_state(conn)? {
            FlatState::Flat => match verify_theorem_24(conn, &calc) {
                Ok(r) => merge_under(&mut report, &prefix, &r),
                Err(e) => report.fail(&prefix, "reduction isomorphisms", e.to_string()),
            },
            FlatState::Curved(_) => report.skip(
                &prefix,
                "reduction isomorphisms",
                format!("{name:?} is not flat; the suite needs a flat connection"),
            ),
            FlatState::NotAConnection(first) => report.skip(
                &prefix,
                "reduction isomorphisms",
                format!("{name:?} is not a connection (first failing check: {first})"),
            ),
        }
    }
    Ok(report)
}

/// Tensor connections for every (flat, any) ordered pair: the five-term map
/// is a connection on M⊗N, and it is flat exactly when both factors are.
fn tensor_suite(inst: &Instance) -> Result<Report, SuiteError> {
    let mut report = Report::new();
    if inst.connections.is_empty() {
        report.skip(
            "tensor.instances",
            "tensor connection",
            String::from("the instance lists no connections"),
        );
        return Ok(report);
    }
    let flats = flat_connections(inst)?;
    if flats.is_empty() {
        report.skip(
            "tensor.pairs",
            "tensor connection",
            String::from("no flat left factor in the instance"),
        );
        return Ok(report);
    }
    for (ni, ci) in &flats {
        for (nj, cj) in &inst.connections {
            let prefix = format!("tensor[{ni},{nj}]");
            let right_state = flat_state(cj)?;
            if let FlatState::NotAConnection(first) = right_state {
                report.skip(
                    &prefix,
                    "tensor connection",
                    format!("{nj:?} is not a connection (first failing check: {first})"),
                );
                continue;
            }
            match tensor_connection(ci, cj) {
                Ok((_, tc)) => {
                    merge_under(&mut report, &prefix, &check_connection(&tc));
                    let both_flat = matches!(right_state, FlatState::Flat);
                    let observed = matches!(flat_state(&tc)?, FlatState::Flat);
                    report.check(
                        &format!("{prefix}.flatness-consistency"),
                        "the tensor connection is flat exactly when both factors are",
                        observed == both_flat,
                        || {
                            format!(
                                "factors flat: ({}, {}), tensor flat: {}",
                                true, both_flat, observed
                            )
                        },
                    );
                }
                Err(e) => report.fail(&prefix, "tensor connection", e.to_string()),
            }
        }
    }
    Ok(report)
}

/// Algebra-level canonical material: the coproduct-style map on the outer
/// bimodule, the catalogued connections there (with the induced action
/// matched against the catalogued one), and one graded complex per
/// catalogued idempotent.
fn dga_suite(inst: &Instance) -> Result<Report, SuiteError> {
    let mut report = Report::new();
    let alg = &inst.algebra;
    let cap = inst.options.degree_cap;

    match delta(alg) {
        Ok(dm) => merge_under(&mut report, "dga.delta", dm.report()),
        Err(e) => report.fail("dga.delta", "coproduct on the outer bimodule", e.to_string()),
    }

    let outer = example_connection(alg);
    merge_under(&mut report, "dga.outer-connection", &check_connection(&outer));
    report.check(
        "dga.outer-connection.flat",
        "zero curvature",
        matches!(flat_state(&outer)?, FlatState::Flat),
        || String::from("the catalogued outer connection has non-zero curvature"),
    );
    merge_under(&mut report, "dga.outer-connection", &verify_lemma_21(&outer));
    report.check(
        "dga.outer-connection.induced-action",
        "the induced right action is the catalogued outer action",
        induce_right_action(&outer) == act_univ_mats(alg),
        || String::from("induced right action differs from the catalogued one"),
    );

    let inner = inner_connection(alg);
    merge_under(&mut report, "dga.inner-connection", &check_connection(&inner));
    report.check(
        "dga.inner-connection.flat",
        "zero curvature",
        matches!(flat_state(&inner)?, FlatState::Flat),
        || String::from("the catalogued inner connection has non-zero curvature"),
    );
    merge_under(&mut report, "dga.inner-connection", &verify_lemma_21(&inner));

    for (ename, e) in alg.idempotents() {
        let prefix = format!("dga.complex[{ename}]");
        match dga_build(alg, &e, cap) {
            Ok(d) => merge_under(&mut report, &prefix, d.report()),
            Err(err) => report.fail(&prefix, "graded complex construction", err.to_string()),
        }
    }
    Ok(report)
}

/// Hom-connection material. Per module with a right action: the sweep
/// (dimension cross-checks, the solved family, the identity battery on
/// sampled members, flat batteries where flats exist) and — when the module
/// also has a left action — the matching hom-connection for the native
/// bimodule structure, if one exists. Listed hom-connections get the same
/// individual treatment as sweep candidates.
fn hom_suite(inst: &Instance) -> Result<Report, SuiteError> {
    let mut report = Report::new();
    let opts = HomSweepOptions {
        seed: inst.options.seed,
        random_samples: inst.options.samples,
        ..HomSweepOptions::default()
    };
    let mut any = false;

    for (name, module) in &inst.modules {
        if !module.has_right() {
            continue;
        }
        any = true;
        let prefix = format!("hom[{name}]");
        let setting = Arc::new(HomSetting::new(module.clone()).map_err(failed)?);

        if module.has_left() {
            let ansatz_id = format!("{prefix}.ansatz");
            let fam = bimodule_ansatz(&setting).map_err(failed)?;
            match &fam.particular {
                Some(p) => {
                    report.record(
                        &ansatz_id,
                        "a hom-connection matching the native bimodule structure",
                        ncflat_core::report::CheckStatus::Pass,
                        Some(format!("found; family dimension {}", fam.family_dim())),
                    );
                    let conn =
                        HomConnection::new(setting.clone(), p.clone()).map_err(failed)?;
                    run_hom_battery(&mut report, &ansatz_id, &conn)?;
                }
                None => report.skip(
                    &ansatz_id,
                    "a hom-connection matching the native bimodule structure",
                    String::from("no hom-connection induces the native left action"),
                ),
            }
        }

        let sweep = hom_sweep(&setting, &opts).map_err(failed)?;
        merge_under(&mut report, &prefix, &sweep.report);
    }

    for (name, conn) in &inst.hom_connections {
        any = true;
        let prefix = format!("hom.given[{name}]");
        run_hom_battery(&mut report, &prefix, conn)?;
    }

    if !any {
        report.skip(
            "hom.instances",
            "hom-connection suite",
            String::from("no module carries a right action and no hom-connections are listed"),
        );
    }
    Ok(report)
}

/// Defining rule, identity battery, and — for flat maps — the bimodule
/// axioms, the left symbol, and its closed form.
fn run_hom_battery(
    report: &mut Report,
    prefix: &str,
    conn: &HomConnection,
) -> Result<(), SuiteError> {
    let chk = check_hom_connection(conn);
    let is_hom = chk.all_passed();
    merge_under(report, prefix, &chk);
    if !is_hom {
        report.skip(
            &format!("{prefix}.identities"),
            "hom-connection identity battery",
            String::from("the map fails the defining rule; identities skipped"),
        );
        return Ok(());
    }
    merge_under(report, prefix, &verify_hom_identities(conn).map_err(failed)?);
    if is_flat(conn).map_err(failed)? {
        merge_under(report, prefix, &verify_prop_31(conn));
        match left_symbol(conn) {
            Ok(sym) => {
                merge_under(report, prefix, sym.report());
                merge_under(report, prefix, &verify_symbol_formula(conn, &sym));
            }
            Err(e) => report.fail(
                &format!("{prefix}.symbol"),
                "left symbol construction",
                e.to_string(),
            ),
        }
    }
    Ok(())
}

/// The validate command: rebuild every object in the file, recording one
/// line per object — axiom violations become failures with the core
/// witness, e.g. the basis triple where associativity breaks.
pub fn validate_report(dto: &InstanceDto) -> Report {
    let mut report = Report::new();

    let field = match dto.field.build() {
        Ok(f) => {
            report.pass("validate.field", "field well-formed");
            f
        }
        Err(e) => {
            report.fail("validate.field", "field well-formed", e.to_string());
            return report;
        }
    };

    let algebra = match dto.algebra.build(field) {
        Ok(a) => {
            report.pass("validate.algebra", "unital associative algebra");
            a
        }
        Err(e) => {
            report.fail("validate.algebra", "unital associative algebra", e.to_string());
            return report;
        }
    };

    let mut modules: Vec<(String, Arc<ncflat_core::algebra::ModuleRep>)> = Vec::new();
    for (i, mdto) in dto.modules.iter().enumerate() {
        let id = format!("validate.module[{}]", mdto.name);
        if modules.iter().any(|(n, _)| *n == mdto.name) {
            report.fail(&id, "module axioms", format!("duplicate module name {:?}", mdto.name));
            continue;
        }
        match mdto.build(&algebra, &format!("modules[{i}]")) {
            Ok(m) => {
                report.pass(&id, "module axioms");
                modules.push((mdto.name.clone(), Arc::new(m)));
            }
            Err(e) => report.fail(&id, "module axioms", e.to_string()),
        }
    }

    let mut settings: Vec<(String, Arc<HomSetting>)> = Vec::new();
    for (kind, list) in [("connection", &dto.connections), ("hom-connection", &dto.hom_connections)]
    {
        for mdto in list.iter() {
            let id = format!("validate.{kind}[{}]", mdto.name);
            let module = match modules.iter().find(|(n, _)| *n == mdto.module) {
                Some((_, m)) => m.clone(),
                None => {
                    report.fail(&id, "object references", format!("no module named {:?}", mdto.module));
                    continue;
                }
            };
            let matrix = match crate::instance::mat_build(
                field,
                &mdto.matrix,
                &format!("{kind}[{}].matrix", mdto.name),
            ) {
                Ok(m) => m,
                Err(e) => {
                    report.fail(&id, "matrix shape", e.to_string());
                    continue;
                }
            };
            if kind == "connection" {
                match Connection::new(module, matrix) {
                    Ok(conn) => merge_under(&mut report, &id, &check_connection(&conn)),
                    Err(e) => report.fail(&id, "connection shape", e.to_string()),
                }
            } else {
                let setting = match settings.iter().find(|(n, _)| *n == mdto.module) {
                    Some((_, s)) => Ok(s.clone()),
                    None => HomSetting::new(module).map(Arc::new).inspect(|s| {
                        settings.push((mdto.module.clone(), s.clone()));
                    }),
                };
                match setting.and_then(|s| HomConnection::new(s, matrix)) {
                    Ok(conn) => merge_under(&mut report, &id, &check_hom_connection(&conn)),
                    Err(e) => report.fail(&id, "hom-connection shape", e.to_string()),
                }
            }
        }
    }
    report
}

/// What to solve for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolveTarget {
    Connection,
    #[value(name = "homconnection")]
    HomConnection,
}

pub struct SolveOutcome {
    pub report: Report,
    /// The input document with the particular solution appended, when the
    /// system is consistent.
    pub emitted: Option<InstanceDto>,
}

fn fresh_name(taken: impl Fn(&str) -> bool, base: &str) -> String {
    if !taken(base) {
        return String::from(base);
    }
    let mut k = 2;
    loop {
        let candidate = format!("{base}-{k}");
        if !taken(&candidate) {
            return candidate;
        }
        k += 1;
    }
}

/// Solve the affine system for a (hom-)connection on the named module.
/// Consistency is the verdict: a solvable system passes with the family
/// dimension as witness, an unsolvable one fails with "inconsistent".
pub fn run_solve(
    dto: &InstanceDto,
    inst: &Instance,
    target: SolveTarget,
    module_name: &str,
) -> Result<SolveOutcome, SuiteError> {
    let module = inst
        .module(module_name)
        .ok_or_else(|| SuiteError::MissingObject(String::from(module_name)))?;
    let mut report = Report::new();
    let mut emitted = None;

    match target {
        SolveTarget::Connection => {
            let fam = ncflat_core::connection::solve_connections(module).map_err(failed)?;
            match &fam.particular {
                Some(p) => {
                    report.record(
                        "solve.family",
                        "affine solution space of the connection equations",
                        ncflat_core::report::CheckStatus::Pass,
                        Some(format!("solvable; family dimension {}", fam.family_dim())),
                    );
                    let conn = Connection::new(module.clone(), p.clone()).map_err(failed)?;
                    merge_under(&mut report, "solve.particular", &check_connection(&conn));
                    let mut out = dto.clone();
                    let name = fresh_name(
                        |n| out.connections.iter().any(|c| c.name == n),
                        "solved",
                    );
                    out.connections.push(MapDto {
                        name,
                        module: String::from(module_name),
                        matrix: mat_dto(p),
                    });
                    emitted = Some(out);
                }
                None => report.fail(
                    "solve.family",
                    "affine solution space of the connection equations",
                    String::from(
                        "inconsistent: no map satisfies the connection equations on this module",
                    ),
                ),
            }
        }
        SolveTarget::HomConnection => {
            let setting = Arc::new(HomSetting::new(module.clone()).map_err(failed)?);
            let fam = solve_hom_connections(&setting).map_err(failed)?;
            match &fam.particular {
                Some(p) => {
                    report.record(
                        "solve.family",
                        "affine solution space of the hom-connection equations",
                        ncflat_core::report::CheckStatus::Pass,
                        Some(format!("solvable; family dimension {}", fam.family_dim())),
                    );
                    let conn =
                        HomConnection::new(setting.clone(), p.clone()).map_err(failed)?;
                    merge_under(&mut report, "solve.particular", &check_hom_connection(&conn));
                    let mut out = dto.clone();
                    let name = fresh_name(
                        |n| out.hom_connections.iter().any(|c| c.name == n),
                        "solved",
                    );
                    out.hom_connections.push(MapDto {
                        name,
                        module: String::from(module_name),
                        matrix: mat_dto(p),
                    });
                    emitted = Some(out);
                }
                None => report.fail(
                    "solve.family",
                    "affine solution space of the hom-connection equations",
                    String::from(
                        "inconsistent: no map satisfies the hom-connection equations on this module",
                    ),
                ),
            }
        }
    }
    Ok(SolveOutcome { report, emitted })
}
