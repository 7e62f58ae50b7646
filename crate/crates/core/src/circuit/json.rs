use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::plan::{CircuitPlan, MultiRegisterUnitary, Register, SparseUnitary, Step};
use crate::error::{Error, Result};
use crate::radical::RadicalRational;
use crate::scalar::Scalar;

pub const PLAN_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct PlanJson {
    version: u32,
    #[serde(default)]
    name: String,
    registers: Vec<Register>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    steps: Vec<StepJson>,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    kind: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    label: String,
    targets: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    row: usize,
    col: usize,
    re: Value,
    im: Value,
}

fn entry_json(row: usize, col: usize, v: &Scalar) -> EntryJson {
    match v {
        Scalar::Exact(r) => {
            EntryJson { row, col, re: serde_json::to_value(r).expect("radical serializes"), im: Value::from(0) }
        }
        Scalar::Float(z) => EntryJson { row, col, re: Value::from(z.re), im: Value::from(z.im) },
    }
}

fn entry_scalar(e: &EntryJson) -> Result<Scalar> {
    let num = |v: &Value| v.as_f64().ok_or_else(|| Error::MalformedPlan(format!("bad number {v}")));
    match &e.re {
        Value::Object(_) => {
            if num(&e.im)? != 0.0 {
                return Err(Error::MalformedPlan("exact entries are real".into()));
            }
            let r: RadicalRational =
                serde_json::from_value(e.re.clone()).map_err(|err| Error::MalformedPlan(err.to_string()))?;
            Ok(Scalar::Exact(r))
        }
        _ => Ok(Scalar::Float(Complex64::new(num(&e.re)?, num(&e.im)?))),
    }
}

impl CircuitPlan {
    pub fn to_json_value(&self) -> Value {
        let names = |ids: &[usize]| ids.iter().map(|&r| self.registers[r].name.clone()).collect::<Vec<_>>();
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                Step::Alloc(r) => StepJson {
                    kind: "alloc".into(),
                    label: String::new(),
                    targets: names(&[*r]),
                    outputs: vec![],
                    entries: vec![],
                },
                Step::Release(r) => StepJson {
                    kind: "release".into(),
                    label: String::new(),
                    targets: names(&[*r]),
                    outputs: vec![],
                    entries: vec![],
                },
                Step::Unitary(u) => StepJson {
                    kind: "unitary".into(),
                    label: u.label.clone(),
                    targets: names(&u.inputs),
                    outputs: names(&u.outputs),
                    entries: u
                        .matrix
                        .columns()
                        .iter()
                        .enumerate()
                        .flat_map(|(c, col)| col.iter().map(move |(r, v)| entry_json(*r, c, v)))
                        .collect(),
                },
            })
            .collect();
        let doc = PlanJson {
            version: PLAN_FORMAT_VERSION,
            name: self.name.clone(),
            registers: self.registers.clone(),
            inputs: names(&self.inputs),
            outputs: names(&self.outputs),
            steps,
        };
        serde_json::to_value(doc).expect("plan serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("plan serializes")
    }

    /// Parses and validates a plan document.
    pub fn from_json(text: &str) -> Result<CircuitPlan> {
        let doc: PlanJson = serde_json::from_str(text).map_err(|e| Error::MalformedPlan(e.to_string()))?;
        if doc.version != PLAN_FORMAT_VERSION {
            return Err(Error::MalformedPlan(format!("unsupported plan version {}", doc.version)));
        }
        for (k, r) in doc.registers.iter().enumerate() {
            if r.values.is_empty() || r.width >= 32 || r.values.len() > 1usize << r.width {
                return Err(Error::MalformedPlan(format!("register {} cannot hold its values", r.name)));
            }
            if doc.registers[..k].iter().any(|o| o.name == r.name) {
                return Err(Error::MalformedPlan(format!("duplicate register {}", r.name)));
            }
        }
        let id = |name: &String| {
            doc.registers
                .iter()
                .position(|r| &r.name == name)
                .ok_or_else(|| Error::MalformedPlan(format!("unknown register {name}")))
        };
        let ids = |names: &[String]| names.iter().map(id).collect::<Result<Vec<_>>>();
        let mut steps = Vec::with_capacity(doc.steps.len());
        for s in &doc.steps {
            let single = || -> Result<usize> {
                match s.targets.as_slice() {
                    [t] => id(t),
                    _ => Err(Error::MalformedPlan(format!("{} step needs one target", s.kind))),
                }
            };
            steps.push(match s.kind.as_str() {
                "alloc" => Step::Alloc(single()?),
                "release" => Step::Release(single()?),
                "unitary" => {
                    let inputs = ids(&s.targets)?;
                    let outputs = ids(&s.outputs)?;
                    let width: u32 = inputs.iter().map(|&r| doc.registers[r].width).sum();
                    if width >= 32 {
                        return Err(Error::MalformedPlan("step too wide".into()));
                    }
                    let dim = 1usize << width;
                    let mut columns = vec![Vec::new(); dim];
                    for e in &s.entries {
                        if e.col >= dim {
                            return Err(Error::MalformedPlan(format!("column {} out of range", e.col)));
                        }
                        columns[e.col].push((e.row, entry_scalar(e)?));
                    }
                    Step::Unitary(MultiRegisterUnitary {
                        label: s.label.clone(),
                        inputs,
                        outputs,
                        matrix: SparseUnitary::new(dim, columns)?,
                    })
                }
                other => return Err(Error::MalformedPlan(format!("unknown step kind {other}"))),
            });
        }
        let plan = CircuitPlan {
            name: doc.name.clone(),
            registers: doc.registers.clone(),
            inputs: ids(&doc.inputs)?,
            outputs: ids(&doc.outputs)?,
            steps,
        };
        plan.peak_qubits()?;
        Ok(plan)
    }
}
