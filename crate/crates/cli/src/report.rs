//! JSON report types. Field order is fixed by declaration order, and nothing
//! time- or machine-dependent is serialized.

use std::collections::BTreeMap;
use std::fmt::Display;

use cjet_core::flatten::{FlattenedDocument, OrderPrescription};
use cjet_core::jets::Jet;
use cjet_core::poly::{format_polynomial, VariableRegistry};
use cjet_core::solve::{Certificate, NuOutcome, Outcome, SearchStats, SolveReport};
use cjet_core::Field;
use serde::Serialize;

/// Exit status shared by every command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Sat,
    Unsat,
    Inconclusive,
    Done,
    /// An approximation order was found.
    Found,
    /// No approximation order up to the search limit.
    NotFound,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Sat | Verdict::Done | Verdict::Found => 0,
            Verdict::Unsat | Verdict::NotFound => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn of<E>(o: &Outcome<E>) -> Verdict {
        match o {
            Outcome::Sat { .. } => Verdict::Sat,
            Outcome::UnsatAtPrefix { .. } => Verdict::Unsat,
            Outcome::Inconclusive { .. } => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub version: &'static str,
    pub command: CommandEcho,
    pub field: String,
    pub verdict: Verdict,
    pub result: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub input: String,
    pub options: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueDoc {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OutcomeDoc {
    Sat { solutions: Vec<Vec<ValueDoc>>, free: Vec<String> },
    Unsat { prefix: usize, certificate: Certificate },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveDoc {
    pub unknowns: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equations: Option<usize>,
    pub outcome: OutcomeDoc,
    pub stats: SearchStats,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn solve_doc<E: Clone + Display>(r: &SolveReport<E>, equations: Option<usize>) -> SolveDoc {
    let outcome = match &r.outcome {
        Outcome::Sat { solutions, free } => OutcomeDoc::Sat {
            solutions: solutions
                .iter()
                .map(|s| r.names.iter().zip(s).map(|(n, v)| ValueDoc { name: n.clone(), value: v.to_string() }).collect())
                .collect(),
            free: free.iter().map(|&i| r.names[i].clone()).collect(),
        },
        Outcome::UnsatAtPrefix { prefix, certificate } => {
            OutcomeDoc::Unsat { prefix: *prefix, certificate: certificate.clone() }
        }
        Outcome::Inconclusive { reason } => OutcomeDoc::Inconclusive { reason: reason.clone() },
    };
    SolveDoc { unknowns: r.vars.len(), equations, outcome, stats: r.stats.clone(), notes: r.notes.clone() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JetDoc {
    pub name: String,
    pub value: String,
    pub order: u32,
    pub ord: String,
}

pub fn jet_doc<F: Field>(name: &str, y: &Jet<F>, series: &[cjet_core::poly::Var], registry: &VariableRegistry) -> JetDoc {
    JetDoc {
        name: name.to_string(),
        value: format_polynomial(&y.to_polynomial(series), registry),
        order: y.order(),
        ord: y.ord().to_string(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessDoc {
    pub unknown: String,
    pub order: u32,
    pub witness: Vec<u32>,
}

pub fn witness_docs(p: &OrderPrescription, names: &[String]) -> Vec<WitnessDoc> {
    p.targets
        .iter()
        .zip(names)
        .filter_map(|(t, name)| {
            t.as_ref().map(|t| WitnessDoc { unknown: name.clone(), order: t.order, witness: t.witness.0.clone() })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FlattenResult {
    pub order: u32,
    pub unknowns: usize,
    pub equations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<FlattenedDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchDoc {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessDoc>,
    pub report: SolveDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jets: Option<Vec<JetDoc>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    pub method: String,
    pub branches: Vec<BranchDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<FlattenedDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecideResult {
    pub generator: String,
    pub max_prefix: usize,
    pub report: SolveDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproximationResult {
    /// Prescribed orders by name.
    pub orders: Vec<ValueDoc>,
    pub outcome: NuOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct PdeResult {
    pub order: u32,
    pub method: String,
    pub report: SolveDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<JetDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivatives: Option<Vec<JetDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<FlattenedDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureResult {
    pub fixture: String,
    /// Equations of a stream fixture, coordinates named `x1, x2, ...`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<String>,
    /// Description text of a system fixture, accepted by the other commands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}
