//! JSON diagram documents.
//!
//! ```json
//! {"nodes":[
//!   {"id":"Y","outcomes":["y1","y2","y3"],"parents":[],"lower_bounds":{"":[0.2,0.1,0.4]}},
//!   {"id":"X","outcomes":["x1","x2","x3"],"parents":["Y"],
//!    "lower_bounds":{"y1":[0.2,0.0,0.1],"y2":[0.2,0.3,0.4],"y3":[0.1,0.1,0.8]}}
//! ]}
//! ```
//!
//! Context keys are parent outcome labels joined by `,` in the node's parent
//! order; a root node uses the empty key.

use std::collections::HashSet;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    BoundVector, ConfigIter, InfluenceDiagram, LowerBoundTable, OutcomeSpace, ValidationReport, Violation,
    EPS_VALIDATE,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub nodes: Vec<NodeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: String,
    pub outcomes: Vec<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    pub lower_bounds: IndexMap<String, Vec<f64>>,
}

pub fn context_key(labels: &[&str]) -> String {
    labels.join(",")
}

impl DiagramDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram documents always serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Every violation in the document. Empty iff
    /// [`DiagramDoc::into_diagram`] succeeds.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut spaces: IndexMap<&str, &NodeDoc> = IndexMap::new();
        for n in &self.nodes {
            if spaces.insert(n.id.as_str(), n).is_some() {
                report.push(Violation::DuplicateNode(n.id.clone()));
            }
        }
        for n in &self.nodes {
            if n.outcomes.len() < 2 {
                report.push(Violation::TooFewOutcomes { node: n.id.clone(), count: n.outcomes.len() });
            }
            let mut seen = HashSet::new();
            for o in &n.outcomes {
                if !seen.insert(o.as_str()) {
                    report.push(Violation::DuplicateOutcome { node: n.id.clone(), outcome: o.clone() });
                }
                if o.is_empty() || o.contains(',') {
                    report.push(Violation::BadOutcomeLabel { node: n.id.clone(), outcome: o.clone() });
                }
            }
        }

        let mut structure_ok = true;
        for n in &self.nodes {
            let mut seen = HashSet::new();
            for p in &n.parents {
                if !seen.insert(p.as_str()) {
                    report.push(Violation::DuplicateParent { node: n.id.clone(), parent: p.clone() });
                    structure_ok = false;
                }
                if !spaces.contains_key(p.as_str()) {
                    report.push(Violation::UnknownParent { node: n.id.clone(), parent: p.clone() });
                    structure_ok = false;
                }
            }
        }
        if structure_ok {
            if let Some(cycle) = doc_cycle(&self.nodes) {
                report.push(Violation::Cycle(cycle));
            }
        }

        for n in &self.nodes {
            let parent_labels: Option<Vec<&[String]>> = n
                .parents
                .iter()
                .map(|p| spaces.get(p.as_str()).map(|pn| pn.outcomes.as_slice()))
                .collect();
            let mut expected: HashSet<String> = HashSet::new();
            if let Some(labels) = &parent_labels {
                let cards: Vec<usize> = labels.iter().map(|l| l.len()).collect();
                for config in ConfigIter::new(&cards) {
                    let key = config_key(labels, &config);
                    if !n.lower_bounds.contains_key(&key) {
                        report.push(Violation::MissingContext { node: n.id.clone(), context: key.clone() });
                    }
                    expected.insert(key);
                }
            }
            for (key, lower) in &n.lower_bounds {
                if parent_labels.is_some() && !expected.contains(key) {
                    report.push(Violation::ExtraContext { node: n.id.clone(), context: key.clone() });
                }
                check_vector(&mut report, &n.id, key, lower, n.outcomes.len());
            }
        }
        report
    }

    pub fn into_diagram(self) -> Result<InfluenceDiagram> {
        let report = self.validate();
        if !report.is_empty() {
            return Err(Error::InvalidDiagram(report));
        }
        let spaces: IndexMap<&str, &NodeDoc> = self.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let labels: Vec<&[String]> = n.parents.iter().map(|p| spaces[p.as_str()].outcomes.as_slice()).collect();
            let cards: Vec<usize> = labels.iter().map(|l| l.len()).collect();
            let entries = ConfigIter::new(&cards)
                .map(|config| BoundVector::new(n.lower_bounds[&config_key(&labels, &config)].clone()))
                .collect::<Result<Vec<_>>>()?;
            nodes.push((
                OutcomeSpace::new(n.id.clone(), n.outcomes.iter().cloned())?,
                LowerBoundTable::new(n.id.clone(), n.parents.clone(), cards, entries)?,
            ));
        }
        InfluenceDiagram::new(nodes)
    }

    pub fn from_diagram(d: &InfluenceDiagram) -> Self {
        let nodes = d
            .nodes()
            .map(|n| {
                let labels: Vec<&[String]> = n
                    .table
                    .parents()
                    .iter()
                    .map(|p| d.space(p).expect("parent exists").outcomes())
                    .collect();
                let lower_bounds = n
                    .table
                    .configs()
                    .zip(n.table.entries())
                    .map(|(config, bv)| (config_key(&labels, &config), bv.lower().to_vec()))
                    .collect();
                NodeDoc {
                    id: n.space.id().to_string(),
                    outcomes: n.space.outcomes().to_vec(),
                    parents: n.table.parents().to_vec(),
                    lower_bounds,
                }
            })
            .collect();
        Self { nodes }
    }
}

/// Checks a parsed document against every diagram invariant.
pub fn validate_diagram(doc: &DiagramDoc) -> ValidationReport {
    doc.validate()
}

/// Parses and validates a diagram file.
pub fn load_diagram(path: impl AsRef<Path>) -> Result<InfluenceDiagram> {
    DiagramDoc::load(path)?.into_diagram()
}

impl InfluenceDiagram {
    pub fn from_json(text: &str) -> Result<Self> {
        DiagramDoc::from_json(text)?.into_diagram()
    }

    pub fn to_json(&self) -> String {
        DiagramDoc::from_diagram(self).to_json()
    }

    /// Re-runs document validation on this diagram's serialized form.
    pub fn validate(&self) -> ValidationReport {
        DiagramDoc::from_diagram(self).validate()
    }
}

fn config_key(labels: &[&[String]], config: &[usize]) -> String {
    let parts: Vec<&str> = labels.iter().zip(config).map(|(l, &i)| l[i].as_str()).collect();
    context_key(&parts)
}

fn check_vector(report: &mut ValidationReport, node: &str, context: &str, lower: &[f64], expected: usize) {
    if lower.len() != expected {
        report.push(Violation::WrongLength {
            node: node.to_string(),
            context: context.to_string(),
            expected,
            found: lower.len(),
        });
    }
    for (index, &v) in lower.iter().enumerate() {
        if !v.is_finite() {
            report.push(Violation::NonFinite { node: node.to_string(), context: context.to_string(), index });
        } else if v < 0.0 {
            report.push(Violation::Negative { node: node.to_string(), context: context.to_string(), index, value: v });
        }
    }
    let sum: f64 = lower.iter().sum();
    if sum > 1.0 + EPS_VALIDATE {
        report.push(Violation::SumExceedsOne { node: node.to_string(), context: context.to_string(), sum });
    }
}

fn doc_cycle(nodes: &[NodeDoc]) -> Option<Vec<String>> {
    let index: IndexMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
    // colors: 0 unvisited, 1 on stack, 2 done
    let mut color = vec![0u8; nodes.len()];
    let mut stack: Vec<usize> = Vec::new();
    fn visit(
        i: usize,
        nodes: &[NodeDoc],
        index: &IndexMap<&str, usize>,
        color: &mut [u8],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<String>> {
        color[i] = 1;
        stack.push(i);
        for p in &nodes[i].parents {
            let j = *index.get(p.as_str())?;
            if color[j] == 1 {
                let pos = stack.iter().position(|&s| s == j).unwrap();
                // stack runs child -> parent; report it in arc direction
                let mut cycle: Vec<String> = stack[pos..].iter().rev().map(|&k| nodes[k].id.clone()).collect();
                cycle.push(cycle[0].clone());
                return Some(cycle);
            }
            if color[j] == 0 {
                if let Some(c) = visit(j, nodes, index, color, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        color[i] = 2;
        None
    }
    for i in 0..nodes.len() {
        if color[i] == 0 {
            if let Some(c) = visit(i, nodes, &index, &mut color, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}
