//! JSON encodings for tables, states, measurements, channels and results.
//!
//! The table schema is shared by the library and the command-line tool:
//!
//! ```json
//! {
//!   "scenario": {"rows": [{"label": "X", "outcomes": 2}, ...],
//!                "cols": [{"label": "X", "outcomes": 2}, ...]},
//!   "blocks": [{"row": 0, "col": 0, "marks": [[0, 1], [1, 0]]}, ...]
//! }
//! ```
//!
//! Probabilistic tables use `"probs"` instead of `"marks"`, with every entry
//! an exact fraction string (`"1/2"`, `"0"`); floats never appear. Decoding
//! errors name the offending JSON path.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldSpec;
use crate::lp::{format_ratio, parse_ratio};
use crate::resolve::ProbabilityTable;
use crate::states::{Measurement, StateSpace, Subspace, Variance, Vector};
use crate::tables::{MeasurementLabel, PossibilityTable, Scenario};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("JSON syntax error: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
}

fn semantic(path: impl Into<String>, message: impl Into<String>) -> JsonError {
    JsonError::Semantic { path: path.into(), message: message.into() }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MeasurementLabelJson {
    pub label: String,
    pub outcomes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScenarioJson {
    pub rows: Vec<MeasurementLabelJson>,
    pub cols: Vec<MeasurementLabelJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BlockJson {
    pub row: usize,
    pub col: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marks: Option<Vec<Vec<u8>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableJson {
    pub scenario: ScenarioJson,
    pub blocks: Vec<BlockJson>,
}

fn scenario_to_json(s: &Scenario) -> ScenarioJson {
    let conv = |m: &MeasurementLabel| MeasurementLabelJson {
        label: m.label.clone(),
        outcomes: m.outcomes,
    };
    ScenarioJson { rows: s.rows.iter().map(conv).collect(), cols: s.cols.iter().map(conv).collect() }
}

fn scenario_from_json(s: &ScenarioJson) -> Result<Scenario, JsonError> {
    for (side, list) in [("rows", &s.rows), ("cols", &s.cols)] {
        if list.is_empty() {
            return Err(semantic(format!("scenario.{side}"), "must not be empty"));
        }
        for (i, m) in list.iter().enumerate() {
            if m.outcomes == 0 {
                return Err(semantic(
                    format!("scenario.{side}[{i}].outcomes"),
                    "must be at least 1",
                ));
            }
        }
    }
    let conv = |m: &MeasurementLabelJson| MeasurementLabel::new(&m.label, m.outcomes);
    Ok(Scenario::new(s.rows.iter().map(conv).collect(), s.cols.iter().map(conv).collect()))
}

/// Serialize a possibility table into the shared schema.
pub fn possibility_to_json(t: &PossibilityTable) -> TableJson {
    let sc = t.scenario();
    let mut blocks = Vec::new();
    for i in 0..sc.rows.len() {
        for j in 0..sc.cols.len() {
            blocks.push(BlockJson {
                row: i,
                col: j,
                marks: Some(
                    t.block(i, j)
                        .iter()
                        .map(|r| r.iter().map(|&m| m as u8).collect())
                        .collect(),
                ),
                probs: None,
            });
        }
    }
    TableJson { scenario: scenario_to_json(sc), blocks }
}

/// Deserialize a possibility table, validating shapes and mark values.
pub fn possibility_from_json(t: &TableJson) -> Result<PossibilityTable, JsonError> {
    let scenario = scenario_from_json(&t.scenario)?;
    let nr = scenario.rows.len();
    let nc = scenario.cols.len();
    let mut blocks: Vec<Option<Vec<Vec<bool>>>> = vec![None; nr * nc];
    for (bi, b) in t.blocks.iter().enumerate() {
        let path = format!("blocks[{bi}]");
        if b.row >= nr || b.col >= nc {
            return Err(semantic(path, "row/col out of range for the scenario"));
        }
        let marks = b
            .marks
            .as_ref()
            .ok_or_else(|| semantic(format!("{path}.marks"), "missing mark matrix"))?;
        let expect_rows = scenario.rows[b.row].outcomes;
        let expect_cols = scenario.cols[b.col].outcomes;
        if marks.len() != expect_rows || marks.iter().any(|r| r.len() != expect_cols) {
            return Err(semantic(
                format!("{path}.marks"),
                format!("expected a {expect_rows}x{expect_cols} matrix"),
            ));
        }
        for (a, row) in marks.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(semantic(
                        format!("{path}.marks[{a}][{c}]"),
                        "marks must be 0 or 1",
                    ));
                }
            }
        }
        blocks[b.row * nc + b.col] =
            Some(marks.iter().map(|r| r.iter().map(|&v| v == 1).collect()).collect());
    }
    let mut resolved = Vec::with_capacity(nr * nc);
    for (idx, b) in blocks.into_iter().enumerate() {
        match b {
            Some(b) => resolved.push(b),
            None => {
                return Err(semantic(
                    "blocks",
                    format!("missing block for row {}, col {}", idx / nc, idx % nc),
                ))
            }
        }
    }
    PossibilityTable::new(scenario, resolved)
        .map_err(|e| semantic("blocks", e.to_string()))
}

/// Serialize a probability table; entries are exact fraction strings.
pub fn probability_to_json(t: &ProbabilityTable) -> TableJson {
    let sc = t.scenario();
    let mut blocks = Vec::new();
    for i in 0..sc.rows.len() {
        for j in 0..sc.cols.len() {
            blocks.push(BlockJson {
                row: i,
                col: j,
                marks: None,
                probs: Some(
                    t.block(i, j)
                        .iter()
                        .map(|r| r.iter().map(format_ratio).collect())
                        .collect(),
                ),
            });
        }
    }
    TableJson { scenario: scenario_to_json(sc), blocks }
}

/// Deserialize a probability table from fraction strings.
pub fn probability_from_json(t: &TableJson) -> Result<ProbabilityTable, JsonError> {
    let scenario = scenario_from_json(&t.scenario)?;
    let nr = scenario.rows.len();
    let nc = scenario.cols.len();
    let mut blocks: Vec<Option<Vec<Vec<BigRational>>>> = vec![None; nr * nc];
    for (bi, b) in t.blocks.iter().enumerate() {
        let path = format!("blocks[{bi}]");
        if b.row >= nr || b.col >= nc {
            return Err(semantic(path, "row/col out of range for the scenario"));
        }
        let probs = b
            .probs
            .as_ref()
            .ok_or_else(|| semantic(format!("{path}.probs"), "missing probability matrix"))?;
        let expect_rows = scenario.rows[b.row].outcomes;
        let expect_cols = scenario.cols[b.col].outcomes;
        if probs.len() != expect_rows || probs.iter().any(|r| r.len() != expect_cols) {
            return Err(semantic(
                format!("{path}.probs"),
                format!("expected a {expect_rows}x{expect_cols} matrix"),
            ));
        }
        let mut parsed = Vec::with_capacity(expect_rows);
        for (a, row) in probs.iter().enumerate() {
            let mut out = Vec::with_capacity(expect_cols);
            for (c, s) in row.iter().enumerate() {
                let v = parse_ratio(s).ok_or_else(|| {
                    semantic(
                        format!("{path}.probs[{a}][{c}]"),
                        format!("cannot parse {s:?} as a fraction"),
                    )
                })?;
                out.push(v);
            }
            parsed.push(out);
        }
        blocks[b.row * nc + b.col] = Some(parsed);
    }
    let mut resolved = Vec::with_capacity(nr * nc);
    for (idx, b) in blocks.into_iter().enumerate() {
        match b {
            Some(b) => resolved.push(b),
            None => {
                return Err(semantic(
                    "blocks",
                    format!("missing block for row {}, col {}", idx / nc, idx % nc),
                ))
            }
        }
    }
    ProbabilityTable::new(scenario, resolved).map_err(|e| semantic("blocks", e.to_string()))
}

/// JSON form of a ket (or bra): field, optional factor dimensions, and
/// coordinates.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct KetJson {
    pub field: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<usize>>,
    pub coords: Vec<u64>,
}

pub fn ket_to_json(v: &Vector) -> KetJson {
    KetJson {
        field: v.space().field().modulus(),
        factors: v.space().factor_dims().map(|f| f.to_vec()),
        coords: v.coords().to_vec(),
    }
}

pub fn ket_from_json(k: &KetJson, variance: Variance) -> Result<Vector, JsonError> {
    let field = FieldSpec::new(k.field)
        .map_err(|e| semantic("field", e.to_string()))?;
    let space = match &k.factors {
        Some(f) => {
            if f.iter().product::<usize>() != k.coords.len() {
                return Err(semantic(
                    "factors",
                    "product of factor dimensions must equal the coordinate count",
                ));
            }
            StateSpace::composite(f, field)
        }
        None => StateSpace::new(k.coords.len(), field),
    };
    Vector::new(&k.coords, &space, variance).map_err(|e| semantic("coords", e.to_string()))
}

/// JSON form of a labeled measurement: each effect is a list of bra
/// coordinate rows spanning the effect subspace.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MeasurementJson {
    pub label: String,
    pub effects: Vec<Vec<Vec<u64>>>,
}

pub fn measurement_from_json(
    m: &MeasurementJson,
    dim: usize,
    field: FieldSpec,
) -> Result<(String, Measurement), JsonError> {
    let space = StateSpace::new(dim, field);
    let mut effects = Vec::new();
    for (ei, rows) in m.effects.iter().enumerate() {
        let path = format!("effects[{ei}]");
        let mut bras = Vec::new();
        for (ri, row) in rows.iter().enumerate() {
            let bra = Vector::bra(row, &space).map_err(|e| {
                semantic(format!("{path}[{ri}]"), e.to_string())
            })?;
            bras.push(bra);
        }
        let sub = Subspace::span_with_variance(&bras, &space, Variance::Dual)
            .map_err(|e| semantic(path, e.to_string()))?;
        effects.push(sub);
    }
    let meas = Measurement::new(effects, &space)
        .map_err(|e| semantic("effects", e.to_string()))?;
    Ok((m.label.clone(), meas))
}

pub fn measurement_to_json(label: &str, m: &Measurement) -> MeasurementJson {
    MeasurementJson {
        label: label.to_string(),
        effects: m
            .effects()
            .iter()
            .map(|e| e.basis_vectors().iter().map(|v| v.coords().to_vec()).collect())
            .collect(),
    }
}

/// JSON form of a Kraus family.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct KrausJson {
    pub field: u64,
    pub matrices: Vec<Vec<Vec<u64>>>,
}

pub fn kraus_from_json(k: &KrausJson) -> Result<Vec<crate::linalg::Matrix>, JsonError> {
    let field = FieldSpec::new(k.field).map_err(|e| semantic("field", e.to_string()))?;
    if k.matrices.is_empty() {
        return Err(semantic("matrices", "need at least one matrix"));
    }
    let mut out = Vec::new();
    for (mi, rows) in k.matrices.iter().enumerate() {
        let cols = rows.first().map_or(0, |r| r.len());
        let m = crate::linalg::Matrix::from_rows(rows, cols, field)
            .map_err(|e| semantic(format!("matrices[{mi}]"), e.to_string()))?;
        out.push(m);
    }
    Ok(out)
}

/// JSON form of a game strategy: exactly one of the two variants.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum StrategyJson {
    Classical { f1: Vec<usize>, f2: Vec<usize> },
    SharedState {
        state: KetJson,
        meas1: Vec<MeasurementJson>,
        meas2: Vec<MeasurementJson>,
    },
}
