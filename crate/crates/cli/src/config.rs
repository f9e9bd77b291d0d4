//! JSON configuration: couplings, internal group, grid and sampled fields.
//!
//! Every field is given either as a single tensor, used at every grid
//! point, or as a flat row-major list with one tensor per point (`x^3`
//! varying fastest). Complex numbers are `[re, im]` pairs.
//!
//! | key          | tensor shape | meaning                                    |
//! |--------------|--------------|--------------------------------------------|
//! | `tetrad`     | 4 x 4 real   | inverse tetrad, `[i][alpha] = O'_alpha^i`  |
//! | `G`          | 4 x 6 real   | `[alpha][a] = G_alpha^a`                   |
//! | `A`          | 4 x n complex| `[alpha][a] = A_alpha^a`                   |
//! | `psi`        | 4 x m complex| state tensor                               |
//! | `N`          | scalar       | particle density                           |
//! | `V`          | 4 real       | velocity `V^alpha`                         |

use std::collections::BTreeMap;

use gaugeframe::lie::{su2_group, u1_group, InternalGroup};
use gaugeframe::linalg::{c64, CMatrix};
use gaugeframe::moments::ModelConstants;
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;
use crate::grid::{Grid, Sampled};

/// The only supported configuration schema version.
pub const SCHEMA_VERSION: u64 = 1;

/// Coupling constants of the Lagrangian.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Couplings {
    /// `aM`.
    #[serde(rename = "aM")]
    pub a_m: f64,
    /// `aI`.
    #[serde(rename = "aI")]
    pub a_i: f64,
    /// `aD`.
    #[serde(rename = "aD")]
    pub a_d: f64,
    /// `aG`.
    #[serde(rename = "aG")]
    pub a_g: f64,
    /// `aF`.
    #[serde(rename = "aF")]
    pub a_f: f64,
}

impl Couplings {
    /// Model constants at a point with density `n` and velocity `v`.
    pub fn at(&self, n: f64, v: [f64; 4]) -> ModelConstants {
        ModelConstants {
            a_m: self.a_m,
            a_i: self.a_i,
            a_d: self.a_d,
            a_g: self.a_g,
            a_f: self.a_f,
            n,
            v,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    shape: [usize; 4],
    spacing: [f64; 4],
    origin: [f64; 4],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema: Option<Value>,
    constants: Option<Couplings>,
    internal_group: Option<Value>,
    grid: Option<RawGrid>,
    #[serde(default)]
    fields: BTreeMap<String, Value>,
    fd_order: Option<u32>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Config {
    /// Couplings, when given.
    pub constants: Option<Couplings>,
    /// Internal group, when given.
    pub group: Option<InternalGroup>,
    /// Grid, when given.
    pub grid: Option<Grid>,
    /// Inverse tetrad, 16 reals per point.
    pub tetrad: Option<Sampled>,
    /// Gravitational potential, 24 reals per point.
    pub g: Option<Sampled>,
    /// Internal potential, `8 n` reals per point.
    pub a: Option<Sampled>,
    /// State tensor, `8 m` reals per point.
    pub psi: Option<Sampled>,
    /// Particle density, one real per point.
    pub n: Option<Sampled>,
    /// Velocity, four reals per point.
    pub v: Option<Sampled>,
    /// Tolerance overrides keyed by suite name.
    pub tolerances: BTreeMap<String, f64>,
}

fn missing(key: &str) -> CliError {
    CliError::MissingField(key.to_string())
}

fn invalid(field: &str, reason: impl Into<String>) -> CliError {
    CliError::InvalidField {
        field: field.to_string(),
        reason: reason.into(),
    }
}

impl Config {
    /// Parses and validates a configuration document.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        match &raw.schema {
            None => return Err(missing("schema")),
            Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => {}
            Some(v) => return Err(CliError::Schema(v.to_string())),
        }
        if let Some(order) = raw.fd_order {
            if order != 2 {
                return Err(invalid("fd_order", format!("only order 2 is supported, got {order}")));
            }
        }
        for (name, tol) in &raw.tolerances {
            if !(*tol > 0.0 && tol.is_finite()) {
                return Err(invalid(&format!("tolerances.{name}"), "must be a positive number"));
            }
        }
        let group = raw.internal_group.as_ref().map(parse_group).transpose()?;
        let grid = raw.grid.map(|g| Grid::new(g.shape, g.spacing, g.origin)).transpose()?;

        let mut cfg = Config {
            constants: raw.constants,
            group,
            grid,
            tetrad: None,
            g: None,
            a: None,
            psi: None,
            n: None,
            v: None,
            tolerances: raw.tolerances,
        };
        for (key, value) in &raw.fields {
            let points = cfg.grid.as_ref().ok_or_else(|| missing("grid"))?.len();
            let field = format!("fields.{key}");
            let group_dims = || {
                cfg.group
                    .as_ref()
                    .map(|g| (g.generator_count(), g.dim()))
                    .ok_or_else(|| missing("internal_group"))
            };
            match key.as_str() {
                "tetrad" => cfg.tetrad = Some(parse_field(value, &[4, 4], false, points, &field)?),
                "G" => cfg.g = Some(parse_field(value, &[4, 6], false, points, &field)?),
                "A" => {
                    let (n, _) = group_dims()?;
                    cfg.a = Some(parse_field(value, &[4, n], true, points, &field)?);
                }
                "psi" => {
                    let (_, m) = group_dims()?;
                    cfg.psi = Some(parse_field(value, &[4, m], true, points, &field)?);
                }
                "N" => cfg.n = Some(parse_field(value, &[], false, points, &field)?),
                "V" => cfg.v = Some(parse_field(value, &[4], false, points, &field)?),
                _ => return Err(invalid(&field, "unknown field")),
            }
        }
        Ok(cfg)
    }

    /// The grid or a [`CliError::MissingField`] naming it.
    pub fn require_grid(&self) -> Result<&Grid, CliError> {
        self.grid.as_ref().ok_or_else(|| missing("grid"))
    }

    /// The couplings or a [`CliError::MissingField`] naming them.
    pub fn require_constants(&self) -> Result<&Couplings, CliError> {
        self.constants.as_ref().ok_or_else(|| missing("constants"))
    }

    /// The internal group or a [`CliError::MissingField`] naming it.
    pub fn require_group(&self) -> Result<&InternalGroup, CliError> {
        self.group.as_ref().ok_or_else(|| missing("internal_group"))
    }

    /// A sampled field by its key, or a [`CliError::MissingField`].
    pub fn require_field(&self, key: &str) -> Result<&Sampled, CliError> {
        let f = match key {
            "tetrad" => &self.tetrad,
            "G" => &self.g,
            "A" => &self.a,
            "psi" => &self.psi,
            "N" => &self.n,
            "V" => &self.v,
            _ => &None,
        };
        f.as_ref().ok_or_else(|| missing(&format!("fields.{key}")))
    }
}

fn parse_group(v: &Value) -> Result<InternalGroup, CliError> {
    match v {
        Value::String(s) if s == "u1" => Ok(u1_group()),
        Value::String(s) if s == "su2" => Ok(su2_group()),
        Value::String(s) => Err(invalid("internal_group", format!("unknown group name {s:?}"))),
        Value::Object(map) => {
            for key in map.keys() {
                if !matches!(key.as_str(), "m" | "generators" | "structure_constants") {
                    return Err(invalid(&format!("internal_group.{key}"), "unknown key"));
                }
            }
            let m = map
                .get("m")
                .ok_or_else(|| missing("internal_group.m"))?
                .as_u64()
                .filter(|&m| m > 0)
                .ok_or_else(|| invalid("internal_group.m", "must be a positive integer"))? as usize;
            let gens = map
                .get("generators")
                .ok_or_else(|| missing("internal_group.generators"))?
                .as_array()
                .ok_or_else(|| invalid("internal_group.generators", "must be a list of matrices"))?;
            let theta = gens
                .iter()
                .enumerate()
                .map(|(k, g)| {
                    let flat = parse_tensor(g, &[m, m], true, &format!("internal_group.generators[{k}]"))?;
                    let entries: Vec<_> = flat.chunks(2).map(|z| c64(z[0], z[1])).collect();
                    Ok(CMatrix::from_row_slice(m, m, &entries))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            match map.get("structure_constants") {
                None => Ok(InternalGroup::new(theta)?),
                Some(c) => {
                    let n = theta.len();
                    let flat = parse_tensor(c, &[n, n, n], false, "internal_group.structure_constants")?;
                    Ok(InternalGroup::with_constants(theta, flat)?)
                }
            }
        }
        _ => Err(invalid("internal_group", "expected a group name or an object")),
    }
}

fn nesting_depth(v: &Value) -> usize {
    match v {
        Value::Array(items) => 1 + items.first().map_or(0, nesting_depth),
        _ => 0,
    }
}

/// Flattens a nested array of the given shape; complex leaves are pairs.
fn parse_tensor(v: &Value, shape: &[usize], complex: bool, field: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    flatten(v, shape, complex, field, &mut out)?;
    Ok(out)
}

fn flatten(v: &Value, shape: &[usize], complex: bool, field: &str, out: &mut Vec<f64>) -> Result<(), CliError> {
    let number = |x: &Value| {
        x.as_f64()
            .filter(|f| f.is_finite())
            .ok_or_else(|| invalid(field, format!("expected a finite number, found {x}")))
    };
    match shape.split_first() {
        None if complex => match v.as_array() {
            Some(pair) if pair.len() == 2 => {
                out.push(number(&pair[0])?);
                out.push(number(&pair[1])?);
                Ok(())
            }
            _ => Err(invalid(field, format!("expected a complex number [re, im], found {v}"))),
        },
        None => {
            out.push(number(v)?);
            Ok(())
        }
        Some((&len, rest)) => {
            let items = v
                .as_array()
                .ok_or_else(|| invalid(field, format!("expected an array of length {len}")))?;
            if items.len() != len {
                return Err(invalid(field, format!("expected length {len}, found {}", items.len())));
            }
            items.iter().try_for_each(|x| flatten(x, rest, complex, field, out))
        }
    }
}

fn parse_field(v: &Value, shape: &[usize], complex: bool, points: usize, field: &str) -> Result<Sampled, CliError> {
    let depth = shape.len() + usize::from(complex);
    let ncomp = shape.iter().product::<usize>() * if complex { 2 } else { 1 };
    let found = nesting_depth(v);
    if found == depth {
        let one = parse_tensor(v, shape, complex, field)?;
        Ok(Sampled {
            ncomp,
            data: one.repeat(points),
        })
    } else if found == depth + 1 {
        let items = v.as_array().expect("depth above zero");
        if items.len() != points {
            return Err(invalid(
                field,
                format!("expected {points} per-point values, found {}", items.len()),
            ));
        }
        let mut data = Vec::with_capacity(points * ncomp);
        for item in items {
            flatten(item, shape, complex, field, &mut data)?;
        }
        Ok(Sampled { ncomp, data })
    } else {
        Err(invalid(
            field,
            format!("nesting depth {found} matches neither a single value ({depth}) nor a per-point list"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> serde_json::Value {
        serde_json::json!({
            "schema": 1,
            "constants": {"aM": 1.0, "aI": 0.5, "aD": 0.3, "aG": 2.0, "aF": 0.7},
            "internal_group": "u1",
            "grid": {"shape": [1, 3, 1, 1], "spacing": [1.0, 0.1, 1.0, 1.0], "origin": [0.0, 0.0, 0.0, 0.0]},
        })
    }

    #[test]
    fn uniform_and_per_point_fields() {
        let mut doc = base();
        doc["fields"] = serde_json::json!({
            "N": [1.0, 2.0, 3.0],
            "V": [1.0, 0.0, 0.0, 0.0],
            "psi": [[[1.0, 0.0]], [[0.0, 0.0]], [[0.0, 0.5]], [[0.0, 0.0]]],
        });
        let cfg = Config::from_json(&doc.to_string()).unwrap();
        assert_eq!(cfg.n.as_ref().unwrap().data, vec![1.0, 2.0, 3.0]);
        assert_eq!(cfg.v.as_ref().unwrap().at(2), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(cfg.psi.as_ref().unwrap().ncomp, 8);
        assert_eq!(cfg.psi.as_ref().unwrap().at(1)[5], 0.5);
    }

    #[test]
    fn schema_is_required() {
        let mut doc = base();
        doc.as_object_mut().unwrap().remove("schema");
        assert!(matches!(Config::from_json(&doc.to_string()), Err(CliError::MissingField(k)) if k == "schema"));
        doc["schema"] = serde_json::json!(2);
        assert!(matches!(Config::from_json(&doc.to_string()), Err(CliError::Schema(_))));
    }

    #[test]
    fn wrong_lengths_are_reported() {
        let mut doc = base();
        doc["fields"] = serde_json::json!({"N": [1.0, 2.0]});
        let err = Config::from_json(&doc.to_string()).unwrap_err();
        assert!(
            matches!(err, CliError::InvalidField { ref field, .. } if field == "fields.N"),
            "{err}"
        );
    }

    #[test]
    fn non_antihermitian_generators_are_rejected() {
        let mut doc = base();
        doc["internal_group"] = serde_json::json!({"m": 1, "generators": [[[[1.0, 0.0]]]]});
        let err = Config::from_json(&doc.to_string()).unwrap_err();
        assert!(matches!(
            err,
            CliError::Core(gaugeframe::Error::NonAntihermitianGenerator { .. })
        ));
    }

    #[test]
    fn missing_grid_for_fields() {
        let mut doc = base();
        doc.as_object_mut().unwrap().remove("grid");
        doc["fields"] = serde_json::json!({"N": 1.0});
        assert!(matches!(Config::from_json(&doc.to_string()), Err(CliError::MissingField(k)) if k == "grid"));
    }
}
