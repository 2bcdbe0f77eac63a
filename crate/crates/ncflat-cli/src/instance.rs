//! The on-disk instance format: one self-describing JSON document naming a
//! field, an algebra, and the modules, connections, and hom-connections the
//! suites should look at.
//!
//! Scalars travel as JSON integers or `"p/q"` strings — never floats — so a
//! value that was exact on the way out is exact on the way back in. Parsing
//! happens in two stages: serde reads the raw shape (syntax errors carry
//! line/column), then [`InstanceDto::build`] converts to validated core
//! objects, reporting the first offending field by path, e.g.
//! `modules[0].left[2][1][0]: cannot parse scalar from "1/0"`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use ncflat_core::algebra::{Algebra, ModuleRep, Side};
use ncflat_core::connection::{bimodule, Connection};
use ncflat_core::field::{FieldSpec, Scalar};
use ncflat_core::homconn::{column_module, HomConnection, HomSetting};
use ncflat_core::mat::Mat;

/// Degree cap used when neither the environment nor the file names one.
pub const DEFAULT_DEGREE_CAP: usize = 3;

/// Random-sample budget used when the file names none.
pub const DEFAULT_SAMPLES: usize = 16;

/// Environment variable that overrides every other degree-cap source.
pub const DEGREE_CAP_ENV: &str = "NCFLAT_DEGREE_CAP";

/// A diagnostic anchored to the path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct InstanceError {
    pub path: String,
    pub message: String,
}

impl InstanceError {
    pub fn at(path: impl Into<String>, message: impl fmt::Display) -> InstanceError {
        InstanceError { path: path.into(), message: message.to_string() }
    }
}

/// One exact field element: a plain integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarDto {
    Int(i64),
    Text(String),
}

impl ScalarDto {
    pub(crate) fn build(&self, field: FieldSpec, path: &str) -> Result<Scalar, InstanceError> {
        match self {
            ScalarDto::Int(v) => Ok(field.integer(*v)),
            ScalarDto::Text(s) => {
                field.parse(s).map_err(|e| InstanceError::at(path.to_string(), e))
            }
        }
    }

    pub fn of(s: &Scalar) -> ScalarDto {
        match s.as_small_integer() {
            Some(v) => ScalarDto::Int(v),
            None => ScalarDto::Text(s.to_repr()),
        }
    }
}

/// Row-major matrix: a list of rows, each a list of scalars.
pub type MatrixDto = Vec<Vec<ScalarDto>>;

pub(crate) fn mat_build(field: FieldSpec, dto: &MatrixDto, path: &str) -> Result<Mat, InstanceError> {
    if dto.is_empty() {
        return Err(InstanceError::at(path.to_string(), "a matrix needs at least one row"));
    }
    let cols = dto[0].len();
    let mut out = Mat::zero(field, dto.len(), cols);
    for (r, row) in dto.iter().enumerate() {
        if row.len() != cols {
            return Err(InstanceError::at(
                format!("{path}[{r}]"),
                format!("row has {} entries but row 0 has {cols}", row.len()),
            ));
        }
        for (c, entry) in row.iter().enumerate() {
            let v = entry.build(field, &format!("{path}[{r}][{c}]"))?;
            out.set(r, c, v);
        }
    }
    Ok(out)
}

pub fn mat_dto(m: &Mat) -> MatrixDto {
    (0..m.rows()).map(|r| m.row(r).iter().map(ScalarDto::of).collect()).collect()
}

/// `"rationals"` or `{"prime": p}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDto {
    Name(String),
    Prime { prime: u64 },
}

impl FieldDto {
    pub(crate) fn build(&self) -> Result<FieldSpec, InstanceError> {
        match self {
            FieldDto::Name(s) if s == "rationals" => Ok(FieldSpec::Rationals),
            FieldDto::Name(s) => Err(InstanceError::at(
                "field",
                format!("unknown field {s:?}; use \"rationals\" or {{\"prime\": p}}"),
            )),
            FieldDto::Prime { prime } => {
                let f = FieldSpec::PrimeField(*prime);
                f.validate().map_err(|e| InstanceError::at("field", e))?;
                Ok(f)
            }
        }
    }

    pub fn of(field: FieldSpec) -> FieldDto {
        match field {
            FieldSpec::Rationals => FieldDto::Name(String::from("rationals")),
            FieldSpec::PrimeField(p) => FieldDto::Prime { prime: p },
        }
    }
}

/// Either `{"preset": name}` or explicit structure data. `struct_consts[i][j]`
/// is the coefficient vector of the product (basis i)·(basis j).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<ScalarDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub struct_consts: Option<Vec<Vec<Vec<ScalarDto>>>>,
}

impl AlgebraDto {
    pub(crate) fn build(&self, field: FieldSpec) -> Result<Arc<Algebra>, InstanceError> {
        let explicit = self.names.is_some() || self.unit.is_some() || self.struct_consts.is_some();
        match (&self.preset, explicit) {
            (Some(_), true) => Err(InstanceError::at(
                "algebra",
                "give either a preset name or explicit structure data, not both",
            )),
            (None, false) => Err(InstanceError::at(
                "algebra",
                "give a preset name or names/unit/struct_consts",
            )),
            (Some(name), false) => {
                Algebra::preset(name, field).map_err(|e| InstanceError::at("algebra.preset", e))
            }
            (None, true) => {
                let names = self
                    .names
                    .clone()
                    .ok_or_else(|| InstanceError::at("algebra.names", "missing"))?;
                let n = names.len();
                let unit_dto = self
                    .unit
                    .as_ref()
                    .ok_or_else(|| InstanceError::at("algebra.unit", "missing"))?;
                if unit_dto.len() != n {
                    return Err(InstanceError::at(
                        "algebra.unit",
                        format!("has {} coefficients, expected {n}", unit_dto.len()),
                    ));
                }
                let mut unit = Vec::with_capacity(n);
                for (i, s) in unit_dto.iter().enumerate() {
                    unit.push(s.build(field, &format!("algebra.unit[{i}]"))?);
                }
                let sc_dto = self
                    .struct_consts
                    .as_ref()
                    .ok_or_else(|| InstanceError::at("algebra.struct_consts", "missing"))?;
                if sc_dto.len() != n {
                    return Err(InstanceError::at(
                        "algebra.struct_consts",
                        format!("has {} rows, expected {n}", sc_dto.len()),
                    ));
                }
                let mut sc = Vec::with_capacity(n);
                for (i, row) in sc_dto.iter().enumerate() {
                    if row.len() != n {
                        return Err(InstanceError::at(
                            format!("algebra.struct_consts[{i}]"),
                            format!("has {} products, expected {n}", row.len()),
                        ));
                    }
                    let mut sc_row = Vec::with_capacity(n);
                    for (j, coeffs) in row.iter().enumerate() {
                        if coeffs.len() != n {
                            return Err(InstanceError::at(
                                format!("algebra.struct_consts[{i}][{j}]"),
                                format!("has {} coefficients, expected {n}", coeffs.len()),
                            ));
                        }
                        let mut v = Vec::with_capacity(n);
                        for (l, s) in coeffs.iter().enumerate() {
                            v.push(s.build(
                                field,
                                &format!("algebra.struct_consts[{i}][{j}][{l}]"),
                            )?);
                        }
                        sc_row.push(v);
                    }
                    sc.push(sc_row);
                }
                Algebra::new(field, names, sc, unit).map_err(|e| InstanceError::at("algebra", e))
            }
        }
    }

    pub fn of(algebra: &Algebra) -> AlgebraDto {
        match algebra.preset_name() {
            Some(name) => AlgebraDto {
                preset: Some(String::from(name)),
                names: None,
                unit: None,
                struct_consts: None,
            },
            None => AlgebraDto {
                preset: None,
                names: Some(algebra.names().to_vec()),
                unit: Some(algebra.unit().iter().map(ScalarDto::of).collect()),
                struct_consts: Some(
                    algebra
                        .struct_consts()
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|v| v.iter().map(ScalarDto::of).collect())
                                .collect()
                        })
                        .collect(),
                ),
            },
        }
    }
}

/// One module: its dimension and, per algebra basis element, the action
/// matrices that exist. `left[i]` sends a column vector m to (basis i)·m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDto {
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<MatrixDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<MatrixDto>>,
}

impl ModuleDto {
    pub(crate) fn build(&self, algebra: &Arc<Algebra>, path: &str) -> Result<ModuleRep, InstanceError> {
        if self.dim == 0 {
            return Err(InstanceError::at(format!("{path}.dim"), "must be at least 1"));
        }
        let n = algebra.dim();
        let field = algebra.field();
        let side = |mats: &Option<Vec<MatrixDto>>, label: &str| -> Result<Option<Vec<Mat>>, InstanceError> {
            match mats {
                None => Ok(None),
                Some(list) => {
                    if list.len() != n {
                        return Err(InstanceError::at(
                            format!("{path}.{label}"),
                            format!("has {} matrices, expected one per basis element ({n})", list.len()),
                        ));
                    }
                    let mut out = Vec::with_capacity(n);
                    for (i, m) in list.iter().enumerate() {
                        out.push(mat_build(field, m, &format!("{path}.{label}[{i}]"))?);
                    }
                    Ok(Some(out))
                }
            }
        };
        let left = side(&self.left, "left")?;
        let right = side(&self.right, "right")?;
        ModuleRep::new(algebra.clone(), self.dim, left, right)
            .map_err(|e| InstanceError::at(path.to_string(), e))
    }

    pub fn of(name: &str, module: &ModuleRep) -> ModuleDto {
        ModuleDto {
            name: String::from(name),
            dim: module.dim(),
            left: module.left_mats().ok().map(|mats| mats.iter().map(mat_dto).collect()),
            right: module.right_mats().ok().map(|mats| mats.iter().map(mat_dto).collect()),
        }
    }
}

/// A named linear map attached to a module: a connection or hom-connection,
/// depending on which list it sits in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDto {
    pub name: String,
    pub module: String,
    pub matrix: MatrixDto,
}

/// Tuning knobs; every field is optional and has a default.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl OptionsDto {
    fn is_default(&self) -> bool {
        *self == OptionsDto::default()
    }
}

/// The whole document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDto {
    pub field: FieldDto,
    pub algebra: AlgebraDto,
    #[serde(default, skip_serializing_if = "OptionsDto::is_default")]
    pub options: OptionsDto,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub connections: Vec<MapDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hom_connections: Vec<MapDto>,
}

/// Resolved tuning knobs. The degree cap prefers, in order: the
/// `NCFLAT_DEGREE_CAP` environment variable, the file, the default of 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub degree_cap: usize,
    pub seed: u64,
    pub samples: usize,
}

pub fn resolve_options(dto: &OptionsDto) -> Result<Options, InstanceError> {
    let degree_cap = match std::env::var(DEGREE_CAP_ENV) {
        Ok(raw) => raw.trim().parse::<usize>().map_err(|_| {
            InstanceError::at(DEGREE_CAP_ENV, format!("cannot parse {raw:?} as a degree cap"))
        })?,
        Err(_) => dto.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP),
    };
    if degree_cap == 0 {
        return Err(InstanceError::at("options.degree_cap", "must be at least 1"));
    }
    Ok(Options {
        degree_cap,
        seed: dto.seed.unwrap_or(0),
        samples: dto.samples.unwrap_or(DEFAULT_SAMPLES),
    })
}

/// Validated domain objects, ready for the suites.
pub struct Instance {
    pub algebra: Arc<Algebra>,
    pub modules: Vec<(String, Arc<ModuleRep>)>,
    pub connections: Vec<(String, Connection)>,
    pub hom_connections: Vec<(String, HomConnection)>,
    pub options: Options,
}

impl Instance {
    pub fn module(&self, name: &str) -> Option<&Arc<ModuleRep>> {
        self.modules.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

/// Parse the raw document. Syntax errors come back with serde_json's
/// line/column position.
pub fn parse_instance(text: &str) -> Result<InstanceDto, InstanceError> {
    serde_json::from_str(text).map_err(|e| {
        InstanceError::at(format!("line {} column {}", e.line(), e.column()), e)
    })
}

impl InstanceDto {
    /// Convert to validated core objects, or fail on the first offender.
    pub fn build(&self) -> Result<Instance, InstanceError> {
        let field = self.field.build()?;
        let algebra = self.algebra.build(field)?;
        let options = resolve_options(&self.options)?;

        let mut modules: Vec<(String, Arc<ModuleRep>)> = Vec::new();
        for (i, dto) in self.modules.iter().enumerate() {
            let path = format!("modules[{i}]");
            if modules.iter().any(|(n, _)| *n == dto.name) {
                return Err(InstanceError::at(
                    format!("{path}.name"),
                    format!("duplicate module name {:?}", dto.name),
                ));
            }
            let module = dto.build(&algebra, &path)?;
            modules.push((dto.name.clone(), Arc::new(module)));
        }

        let lookup = |list: &[(String, Arc<ModuleRep>)], name: &str, path: &str| {
            list.iter()
                .find(|(n, _)| n == name)
                .map(|(_, m)| m.clone())
                .ok_or_else(|| {
                    InstanceError::at(format!("{path}.module"), format!("no module named {name:?}"))
                })
        };

        let mut connections = Vec::new();
        for (i, dto) in self.connections.iter().enumerate() {
            let path = format!("connections[{i}]");
            let module = lookup(&modules, &dto.module, &path)?;
            let matrix = mat_build(field, &dto.matrix, &format!("{path}.matrix"))?;
            let conn = Connection::new(module, matrix)
                .map_err(|e| InstanceError::at(path.clone(), e))?;
            connections.push((dto.name.clone(), conn));
        }

        let mut hom_connections = Vec::new();
        let mut settings: Vec<(String, Arc<HomSetting>)> = Vec::new();
        for (i, dto) in self.hom_connections.iter().enumerate() {
            let path = format!("hom_connections[{i}]");
            let module = lookup(&modules, &dto.module, &path)?;
            let setting = match settings.iter().find(|(n, _)| *n == dto.module) {
                Some((_, s)) => s.clone(),
                None => {
                    let s = Arc::new(
                        HomSetting::new(module)
                            .map_err(|e| InstanceError::at(path.clone(), e))?,
                    );
                    settings.push((dto.module.clone(), s.clone()));
                    s
                }
            };
            let matrix = mat_build(field, &dto.matrix, &format!("{path}.matrix"))?;
            let conn = HomConnection::new(setting, matrix)
                .map_err(|e| InstanceError::at(path.clone(), e))?;
            hom_connections.push((dto.name.clone(), conn));
        }

        Ok(Instance { algebra, modules, connections, hom_connections, options })
    }
}

/// Canonical serialization: pretty JSON with a trailing newline. Emitting,
/// re-parsing, and emitting again reproduces the bytes exactly.
pub fn instance_json(dto: &InstanceDto) -> String {
    let mut text = serde_json::to_string_pretty(dto).expect("instance DTOs always serialize");
    text.push('\n');
    text
}

/// The canonical document for a preset: the regular bimodule plus the
/// universal differential as a connection on it.
pub fn preset_instance(preset: &str, field: FieldSpec) -> Result<InstanceDto, InstanceError> {
    let algebra = Algebra::preset(preset, field)
        .map_err(|e| InstanceError::at("algebra.preset", e))?;
    let regular = ModuleRep::regular(algebra.clone(), Side::Bi);
    let d = Connection::d_connection(algebra.clone());
    Ok(InstanceDto {
        field: FieldDto::of(field),
        algebra: AlgebraDto::of(&algebra),
        options: OptionsDto::default(),
        modules: vec![ModuleDto::of("regular", &regular)],
        connections: vec![MapDto {
            name: String::from("d"),
            module: String::from("regular"),
            matrix: mat_dto(d.matrix()),
        }],
        hom_connections: Vec::new(),
    })
}

/// The canonical document for the hom subcommand: one module carrying a
/// right action. `module` is `"regular"` for any preset, or `"column"` for
/// the column module over mat2.
pub fn hom_instance(
    preset: &str,
    module: &str,
    field: FieldSpec,
    seed: Option<u64>,
    samples: Option<usize>,
) -> Result<InstanceDto, InstanceError> {
    let algebra = Algebra::preset(preset, field)
        .map_err(|e| InstanceError::at("algebra.preset", e))?;
    let rep = match module {
        "regular" => ModuleRep::regular(algebra.clone(), Side::Bi),
        "column" => column_module(&algebra).map_err(|e| InstanceError::at("module", e))?,
        other => {
            return Err(InstanceError::at(
                "module",
                format!("unknown module {other:?}; use \"regular\" or \"column\""),
            ))
        }
    };
    Ok(InstanceDto {
        field: FieldDto::of(field),
        algebra: AlgebraDto::of(&algebra),
        options: OptionsDto { degree_cap: None, seed, samples },
        modules: vec![ModuleDto::of(module, &rep)],
        connections: Vec::new(),
        hom_connections: Vec::new(),
    })
}

/// A seeded flat connection on a free module, emitted as a self-contained
/// document: the module carries the free left action together with the right
/// action the connection induces, so every suite has something to chew on.
pub fn random_instance(
    preset: &str,
    field: FieldSpec,
    v_dim: usize,
    seed: u64,
) -> Result<InstanceDto, InstanceError> {
    let algebra = Algebra::preset(preset, field)
        .map_err(|e| InstanceError::at("algebra.preset", e))?;
    let conn = ncflat_core::connection::random_flat_connection(algebra.clone(), v_dim, seed)
        .map_err(|e| InstanceError::at("vdim", e))?;
    let bi = bimodule(&conn).map_err(|e| InstanceError::at("connection", e))?;
    let name = format!("free{v_dim}");
    Ok(InstanceDto {
        field: FieldDto::of(field),
        algebra: AlgebraDto::of(&algebra),
        options: OptionsDto { degree_cap: None, seed: Some(seed), samples: None },
        modules: vec![ModuleDto::of(&name, &bi)],
        connections: vec![MapDto {
            name: String::from("random"),
            module: name,
            matrix: mat_dto(conn.matrix()),
        }],
        hom_connections: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_round_trip_through_both_shapes() {
        let q = FieldSpec::Rationals;
        let half = q.fraction(1, 2).unwrap();
        assert_eq!(ScalarDto::of(&half), ScalarDto::Text(String::from("1/2")));
        assert_eq!(ScalarDto::of(&q.integer(-3)), ScalarDto::Int(-3));
        let back = ScalarDto::Text(String::from("1/2")).build(q, "x").unwrap();
        assert_eq!(back, half);
    }

    #[test]
    fn floats_are_rejected_with_a_position() {
        let err = parse_instance(r#"{"field": "rationals", "algebra": {"preset": "mat2"}, "modules": [{"name": "m", "dim": 1, "left": [[[0.5]]]}]}"#)
            .unwrap_err();
        assert!(err.path.starts_with("line 1 column"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_instance(r#"{"field": "rationals", "algebra": {"preset": "mat2"}, "extra": 1}"#)
            .unwrap_err();
        assert!(err.message.contains("extra"), "{err}");
    }

    #[test]
    fn preset_documents_build_and_round_trip() {
        for name in Algebra::preset_names() {
            let dto = preset_instance(name, FieldSpec::Rationals).unwrap();
            let text = instance_json(&dto);
            let reparsed = parse_instance(&text).unwrap();
            assert_eq!(dto, reparsed, "{name}");
            assert_eq!(text, instance_json(&reparsed), "{name}");
            let inst = reparsed.build().unwrap();
            assert_eq!(inst.algebra.preset_name(), Some(*name));
            assert_eq!(inst.connections.len(), 1);
        }
    }

    #[test]
    fn bad_references_and_shapes_carry_paths() {
        let mut dto = preset_instance("dual_numbers", FieldSpec::Rationals).unwrap();
        dto.connections[0].module = String::from("nowhere");
        let err = dto.build().err().unwrap();
        assert_eq!(err.path, "connections[0].module");

        let mut dto = preset_instance("dual_numbers", FieldSpec::Rationals).unwrap();
        dto.connections[0].matrix.pop();
        let err = dto.build().err().unwrap();
        assert_eq!(err.path, "connections[0]");
    }

    #[test]
    fn random_documents_rebuild_to_the_same_connection() {
        let dto = random_instance("group_C2", FieldSpec::Rationals, 2, 9).unwrap();
        let inst = dto.build().unwrap();
        let (_, conn) = &inst.connections[0];
        let direct = ncflat_core::connection::random_flat_connection(
            inst.algebra.clone(),
            2,
            9,
        )
        .unwrap();
        assert_eq!(conn.matrix(), direct.matrix());
        assert!(inst.modules[0].1.has_right());
    }
}
