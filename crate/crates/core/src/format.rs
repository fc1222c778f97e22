//! Text serialization of boxes.
//!
//! A box file is a JSON document:
//!
//! ```json
//! {
//!   "scenario": { "parties": 3, "inputs": 2, "outputs": 2 },
//!   "ordering": "dictionary",
//!   "probabilities": [[0.42677669529663687, ...], ...]
//! }
//! ```
//!
//! Every probability is written with 17 significant digits so that reading
//! a file back reproduces the stored doubles exactly.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::tensor::{Box2, Box3, ProbTable, NEG_TOL};

pub const ORDERING: &str = "dictionary";

/// A box of either supported arity, as read from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyBox {
    Two(Box2),
    Three(Box3),
}

impl AnyBox {
    pub fn parties(&self) -> usize {
        match self {
            AnyBox::Two(_) => 2,
            AnyBox::Three(_) => 3,
        }
    }

    pub fn into_box3(self) -> Result<Box3> {
        match self {
            AnyBox::Three(b) => Ok(b),
            AnyBox::Two(_) => Err(Error::Shape("expected a three-party box, found two".into())),
        }
    }

    pub fn into_box2(self) -> Result<Box2> {
        match self {
            AnyBox::Two(b) => Ok(b),
            AnyBox::Three(_) => Err(Error::Shape("expected a two-party box, found three".into())),
        }
    }
}

impl From<Box2> for AnyBox {
    fn from(b: Box2) -> Self {
        AnyBox::Two(b)
    }
}

impl From<Box3> for AnyBox {
    fn from(b: Box3) -> Self {
        AnyBox::Three(b)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Scenario {
    parties: usize,
    inputs: usize,
    outputs: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxFile {
    scenario: Scenario,
    ordering: String,
    probabilities: Vec<Vec<f64>>,
}

/// Formats a probability with 17 significant digits, positional where the
/// magnitude allows it.
pub fn format_prob(v: f64) -> String {
    if v == 0.0 {
        return "0.0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..=0).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, v)
    } else {
        format!("{v:.16e}")
    }
}

fn render(parties: usize, size: usize, flat: &[f64]) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!(
        "  \"scenario\": {{ \"parties\": {parties}, \"inputs\": 2, \"outputs\": 2 }},\n"
    ));
    out.push_str(&format!("  \"ordering\": \"{ORDERING}\",\n"));
    out.push_str("  \"probabilities\": [\n");
    for (r, row) in flat.chunks(size).enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format_prob(*v)).collect();
        let sep = if r + 1 == size { "" } else { "," };
        out.push_str(&format!("    [{}]{}\n", cells.join(", "), sep));
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn serialize_box3(b: &Box3) -> String {
    render(3, 8, b.flat())
}

pub fn serialize_box2(b: &Box2) -> String {
    render(2, 4, b.flat())
}

pub fn serialize(b: &AnyBox) -> String {
    match b {
        AnyBox::Two(b) => serialize_box2(b),
        AnyBox::Three(b) => serialize_box3(b),
    }
}

pub fn deserialize(text: &str) -> Result<AnyBox> {
    let file: BoxFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let sc = &file.scenario;
    if sc.inputs != 2 || sc.outputs != 2 {
        return Err(Error::Parse(format!(
            "unsupported scenario: {} inputs, {} outputs per party",
            sc.inputs, sc.outputs
        )));
    }
    if file.ordering != ORDERING {
        return Err(Error::Parse(format!("unsupported ordering {:?}", file.ordering)));
    }
    let size = match sc.parties {
        2 => 4,
        3 => 8,
        p => return Err(Error::Parse(format!("unsupported party count {p}"))),
    };
    if file.probabilities.len() != size {
        return Err(Error::Parse(format!(
            "expected {size} rows, found {}",
            file.probabilities.len()
        )));
    }
    if let Some((r, row)) = file.probabilities.iter().enumerate().find(|(_, row)| row.len() != size)
    {
        return Err(Error::Parse(format!("row {r} has {} entries, expected {size}", row.len())));
    }
    let flat: Vec<f64> = file.probabilities.concat();
    Ok(match sc.parties {
        2 => AnyBox::Two(Box2::from_flat(&flat, NEG_TOL)?),
        _ => AnyBox::Three(Box3::from_flat(&flat, NEG_TOL)?),
    })
}
