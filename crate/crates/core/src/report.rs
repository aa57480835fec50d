//! Machine-readable outcome records shared by the CLI and the test
//! harnesses. Field order is fixed by the struct, so serialization is
//! byte-stable for identical inputs.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub status: Status,
    /// Number of atomic assertions exercised.
    pub cases: u64,
    /// Human-readable descriptions of the first few failures, empty on pass.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report {
            schema: 1,
            check: check.to_string(),
            n: None,
            parameters: BTreeMap::new(),
            status: Status::Pass,
            cases: 0,
            witness: Vec::new(),
            seed: None,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn record(&mut self, cases: u64) {
        self.cases += cases;
    }

    /// Keeps at most 16 witnesses; the count still reflects every failure.
    pub fn fail(&mut self, msg: String) {
        self.status = Status::Fail;
        if self.witness.len() < 16 {
            self.witness.push(msg);
        }
    }

    pub fn ok(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn merge(&mut self, other: &Report) {
        self.cases += other.cases;
        if !other.ok() {
            self.status = Status::Fail;
            for w in &other.witness {
                if self.witness.len() >= 16 {
                    break;
                }
                self.witness.push(w.clone());
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
