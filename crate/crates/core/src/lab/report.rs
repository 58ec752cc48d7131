use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing to test, e.g. the zero function.
    Vacuous,
    /// The hypotheses do not hold for this input.
    NotApplicable,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "VACUOUS",
            Verdict::NotApplicable => "NOT-APPLICABLE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

/// `metrics[metric] relation bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub metric: String,
    pub relation: Relation,
    pub bound: f64,
}

impl Check {
    pub fn holds(&self, metrics: &BTreeMap<String, f64>) -> bool {
        match metrics.get(&self.metric) {
            Some(v) if v.is_finite() => match self.relation {
                Relation::Le => *v <= self.bound,
                Relation::Ge => *v >= self.bound,
            },
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Override {
    Vacuous,
    NotApplicable,
}

/// One tested configuration: metrics, the checks on them and the verdict
/// they imply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    #[serde(with = "float_map")]
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    /// Metric expected to be stable under grid refinement.
    pub headline: Option<String>,
    #[serde(default, rename = "override", skip_serializing_if = "Option::is_none")]
    override_: Option<Override>,
    pub notes: Vec<String>,
}

impl Case {
    pub fn new(name: impl Into<String>) -> Case {
        Case {
            name: name.into(),
            metrics: BTreeMap::new(),
            checks: Vec::new(),
            verdict: Verdict::Pass,
            headline: None,
            override_: None,
            notes: Vec::new(),
        }
    }

    pub fn metric(&mut self, key: impl Into<String>, value: f64) -> &mut Case {
        self.metrics.insert(key.into(), value);
        self
    }

    pub fn le(&mut self, metric: &str, bound: f64) -> &mut Case {
        self.push_check(metric, Relation::Le, bound)
    }

    pub fn ge(&mut self, metric: &str, bound: f64) -> &mut Case {
        self.push_check(metric, Relation::Ge, bound)
    }

    fn push_check(&mut self, metric: &str, relation: Relation, bound: f64) -> &mut Case {
        self.checks.push(Check {
            metric: metric.into(),
            relation,
            bound,
        });
        self
    }

    pub fn headline(&mut self, metric: &str) -> &mut Case {
        self.headline = Some(metric.into());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Case {
        self.notes.push(text.into());
        self
    }

    pub fn vacuous(&mut self, why: &str) -> &mut Case {
        self.override_ = Some(Override::Vacuous);
        self.note(why)
    }

    pub fn not_applicable(&mut self, why: &str) -> &mut Case {
        self.override_ = Some(Override::NotApplicable);
        self.note(why)
    }

    /// The verdict implied by the stored metrics and checks.
    pub fn recompute_verdict(&self) -> Verdict {
        match self.override_ {
            Some(Override::Vacuous) => Verdict::Vacuous,
            Some(Override::NotApplicable) => Verdict::NotApplicable,
            None if self.checks.iter().all(|c| c.holds(&self.metrics)) => Verdict::Pass,
            None => Verdict::Fail,
        }
    }

    pub fn finish(mut self) -> Case {
        self.verdict = self.recompute_verdict();
        self
    }

    pub fn headline_value(&self) -> Option<f64> {
        self.headline.as_ref().and_then(|h| self.metrics.get(h).copied())
    }
}

/// A CSV artifact built by an experiment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        write_csv(std::iter::once(&self.header).chain(&self.rows))
    }
}

fn write_csv<R: AsRef<[String]>>(rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for r in rows {
        w.write_record(r.as_ref()).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("fields are UTF-8")
}

/// Fixed-width float formatting so CSV output is byte-reproducible.
pub fn num(v: f64) -> String {
    format!("{v:.17e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub config_fingerprint: String,
    pub refined: bool,
    pub cases: Vec<Case>,
    pub wall_clock_seconds: f64,
    pub artifacts: Vec<String>,
}

impl ExperimentReport {
    /// `Fail` if any case fails, `Pass` if at least one passes, otherwise
    /// the common verdict of the remaining cases.
    pub fn verdict(&self) -> Verdict {
        let vs: Vec<Verdict> = self.cases.iter().map(|c| c.verdict).collect();
        if vs.contains(&Verdict::Fail) {
            Verdict::Fail
        } else if vs.contains(&Verdict::Pass) {
            Verdict::Pass
        } else if vs.contains(&Verdict::NotApplicable) {
            Verdict::NotApplicable
        } else {
            Verdict::Vacuous
        }
    }

    pub fn case(&self, name: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.name == name)
    }

    /// Stored verdicts must follow from stored metrics.
    pub fn verify_verdicts(&self) -> Result<()> {
        for c in &self.cases {
            if c.recompute_verdict() != c.verdict {
                return Err(Error::Config(format!(
                    "case {}: stored verdict {:?} does not follow from its metrics",
                    c.name, c.verdict
                )));
            }
        }
        Ok(())
    }

    /// `case,metric,value,verdict` for every metric.
    pub fn cases_csv(&self) -> String {
        let header = ["case", "metric", "value", "verdict"].map(String::from).to_vec();
        let rows = self.cases.iter().flat_map(|c| {
            c.metrics
                .iter()
                .map(|(k, v)| vec![c.name.clone(), k.clone(), num(*v), c.verdict.label().to_string()])
        });
        write_csv(std::iter::once(header).chain(rows))
    }

    pub fn load(path: &Path) -> Result<ExperimentReport> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Metric maps with non-finite values written as strings.
mod float_map {
    use std::collections::BTreeMap;

    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        let out: BTreeMap<&String, Value> = m
            .iter()
            .map(|(k, v)| {
                let val = if v.is_finite() {
                    Value::from(*v)
                } else if v.is_nan() {
                    Value::from("nan")
                } else if *v > 0.0 {
                    Value::from("inf")
                } else {
                    Value::from("-inf")
                };
                (k, val)
            })
            .collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        let raw = BTreeMap::<String, Value>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let f = match &v {
                    Value::Number(n) => n.as_f64(),
                    Value::String(s) if s == "nan" => Some(f64::NAN),
                    Value::String(s) if s == "inf" => Some(f64::INFINITY),
                    Value::String(s) if s == "-inf" => Some(f64::NEG_INFINITY),
                    _ => None,
                };
                f.map(|f| (k.clone(), f))
                    .ok_or_else(|| de::Error::custom(format!("metric {k}: bad value {v}")))
            })
            .collect()
    }
}
