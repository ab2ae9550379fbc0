//! The four-dimensional catalog: every algebra with its canonical cocycle
//! families and printed index claims, plus two charted groups.
//!
//! The data ships as `data/catalog.json`. Values are exact expressions in
//! the entry's parameters; claims keep the printed wording next to the
//! machine-checkable condition, and a `corrected` condition where the
//! printed one is refuted.

pub mod charts;
pub mod expr;
pub mod verify;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cohomology::TwoCochain;
use crate::error::{Error, Result};
use crate::lie::{validate_algebra, LieAlgebra, StructureTable};

use expr::{Bindings, Expr};

pub use charts::{g7_casimirs, G7Chart, TorusChart};
pub use verify::{verify_all, verify_entry, CatalogReport, ClaimStatus, EntryReport, SamplingPlan};

const CATALOG_JSON: &str = include_str!("../../data/catalog.json");

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// Any real value; sampled from a fixed grid plus random rationals.
    Real,
    /// `±1`.
    Sign,
    /// `0, ±1`.
    Kappa,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: String,
    pub domain: Domain,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermExpr {
    pub c: usize,
    pub v: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BracketExpr {
    pub a: usize,
    pub b: usize,
    pub terms: Vec<TermExpr>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EntryExpr {
    pub a: usize,
    pub b: usize,
    pub v: String,
}

/// `lhs = rhs`, both expressions in the entry parameters.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Condition {
    pub lhs: String,
    pub rhs: String,
}

impl Condition {
    pub fn holds(&self, env: &Bindings) -> Result<bool> {
        Ok(Expr::parse(&self.lhs)?.eval(env)? == Expr::parse(&self.rhs)?.eval(env)?)
    }

    pub fn describe(&self) -> String {
        format!("{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Correction {
    pub condition: Condition,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClaimData {
    pub printed: String,
    pub ind: usize,
    /// Absent for unconditional claims.
    #[serde(default)]
    pub condition: Option<Condition>,
    /// Symbols used by the condition that the family itself does not bind.
    #[serde(default)]
    pub extra_params: Vec<ParamSpec>,
    #[serde(default)]
    pub corrected: Option<Correction>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyData {
    pub name: String,
    pub printed: String,
    pub params: Vec<ParamSpec>,
    /// Parameters that must be nonzero for the family to be defined.
    #[serde(default)]
    pub nonzero: Vec<String>,
    pub entries: Vec<EntryExpr>,
    pub claims: Vec<ClaimData>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EntryData {
    pub id: String,
    pub item: usize,
    pub printed: String,
    pub params: Vec<ParamSpec>,
    pub brackets: Vec<BracketExpr>,
    pub families: Vec<FamilyData>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Catalog {
    pub preamble: String,
    pub entries: Vec<EntryData>,
}

pub const DIM: usize = 4;

impl Catalog {
    pub fn embedded() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| serde_json::from_str(CATALOG_JSON).expect("embedded catalog parses"))
    }

    pub fn raw_json() -> &'static str {
        CATALOG_JSON
    }

    pub fn entry(&self, id: &str) -> Result<&EntryData> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::EntryNotFound(id.to_string()))
    }
}

impl EntryData {
    /// Validated algebra at the given parameter values.
    pub fn algebra(&self, env: &Bindings) -> Result<LieAlgebra> {
        let mut table = StructureTable::new(self.id.clone(), DIM);
        for br in &self.brackets {
            let terms = br
                .terms
                .iter()
                .map(|t| Ok((t.c - 1, Expr::parse(&t.v)?.eval(env)?)))
                .collect::<Result<Vec<_>>>()?;
            table.push(br.a - 1, br.b - 1, terms);
        }
        validate_algebra(&table)
    }

    pub fn family(&self, name: &str) -> Result<&FamilyData> {
        self.families
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::EntryNotFound(format!("{}/{}", self.id, name)))
    }

    /// Every parameter appearing in the entry, its families or its claims.
    pub fn all_params(&self) -> BTreeSet<String> {
        let mut s: BTreeSet<String> = self.params.iter().map(|p| p.name.clone()).collect();
        for f in &self.families {
            s.extend(f.params.iter().map(|p| p.name.clone()));
            for c in &f.claims {
                s.extend(c.extra_params.iter().map(|p| p.name.clone()));
            }
        }
        s
    }
}

impl FamilyData {
    pub fn cochain(&self, env: &Bindings) -> Result<TwoCochain> {
        let entries = self
            .entries
            .iter()
            .map(|e| Ok((e.a, e.b, Expr::parse(&e.v)?.eval(env)?)))
            .collect::<Result<Vec<_>>>()?;
        TwoCochain::from_labeled(DIM, &entries)
    }
}

/// One row of `catalog list`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EntrySummary {
    pub id: String,
    pub kind: &'static str,
    pub printed: String,
    pub families: Vec<String>,
    pub notes: Vec<String>,
}

pub fn list_entries() -> Vec<EntrySummary> {
    let mut out: Vec<EntrySummary> = Catalog::embedded()
        .entries
        .iter()
        .map(|e| EntrySummary {
            id: e.id.clone(),
            kind: "algebra",
            printed: e.printed.clone(),
            families: e.families.iter().map(|f| f.printed.clone()).collect(),
            notes: e.notes.clone(),
        })
        .collect();
    out.push(EntrySummary {
        id: "g7-chart".into(),
        kind: "chart",
        printed: "g_7 group in coordinates g = exp(g1 e1) exp(g2 e2) exp(g3 e3) exp(g4 e4), cocycle α e^1∧e^2 + β e^1∧e^3 + γ e^2∧e^3".into(),
        families: vec![
            "A = α g1 dg2 + (β g1 + γ g2) dg3".into(),
            "ξ1 = p1 − g4 p4 + e(α g2 + β g3), ξ2 = p2 − g4 p4 − e(α g1 − γ g3), ξ3 = p3 − e(β g1 + γ g2), ξ4 = p4".into(),
            "K0 = f0, K1 = β(f1 − f2) + α f3, K2 = f4^β e^(−f3)".into(),
        ],
        notes: vec!["K2 as printed is a Casimir on the leaf f0 = 1; the general form is f4^β exp(−f3/f0)".into()],
    });
    out.push(EntrySummary {
        id: "torus".into(),
        kind: "chart",
        printed: "flat torus T^2 with angles (φ, ψ), cocycle c e^1∧e^2".into(),
        families: vec![
            "A = c φ dψ (chart-local)".into(),
            "ξ1 = p_φ + e c ψ, ξ2 = p_ψ − e c φ".into(),
        ],
        notes: vec![
            "printed integrals p_φ − eψ, p_ψ + eφ are not conserved by the printed closed form; the chart derives the opposite signs".into(),
        ],
    });
    out
}
