//! Self-contained JSON report of an analysis.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::curve::milnor_number;
use crate::error::Error;
use crate::io::format::{parse_tree, serialize_tree};
use crate::moduli::{generic_moduli_dimension, ModuliReport};
use crate::saito::{gluing_data, saito_valuation_profile, GluingData, VertexModel};
use crate::tree::{Numbering, ResolutionTree, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEcho {
    /// The tree as a `saito-tree v1` document.
    pub document: String,
    pub parents: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

/// Gluing models with weights written as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelBlock {
    NonDicritical {
        self_intersection: i64,
        free_weights: Vec<String>,
        edge_weights: BTreeMap<String, String>,
    },
    Dicritical {
        tangency_count: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingBlock {
    pub models: Vec<ModelBlock>,
    pub attempt: usize,
}

fn parse_ratio(text: &str) -> Result<BigRational, String> {
    let bad = || format!("`{text}` is not a rational p/q");
    let (p, q) = text.split_once('/').unwrap_or((text, "1"));
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

impl GluingBlock {
    pub fn from_data(data: &GluingData) -> Self {
        let value = serde_json::to_value(data).expect("gluing data serializes");
        serde_json::from_value(value).expect("gluing data matches its block layout")
    }

    pub fn to_data(&self) -> Result<GluingData, String> {
        let models = self
            .models
            .iter()
            .map(|m| match m {
                ModelBlock::Dicritical { tangency_count } => Ok(VertexModel::Dicritical {
                    tangency_count: *tangency_count,
                }),
                ModelBlock::NonDicritical {
                    self_intersection,
                    free_weights,
                    edge_weights,
                } => Ok(VertexModel::NonDicritical {
                    self_intersection: *self_intersection,
                    free_weights: free_weights.iter().map(|w| parse_ratio(w)).collect::<Result<_, _>>()?,
                    edge_weights: edge_weights
                        .iter()
                        .map(|(k, w)| {
                            let id: usize = k.parse().map_err(|_| format!("bad vertex key `{k}`"))?;
                            Ok((VertexId(id), parse_ratio(w)?))
                        })
                        .collect::<Result<_, String>>()?,
                }),
            })
            .collect::<Result<_, String>>()?;
        Ok(GluingData {
            models,
            attempt: self.attempt,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tree: TreeEcho,
    pub numbering: Vec<u32>,
    pub dicriticity: Vec<u8>,
    pub configuration: Vec<i64>,
    pub valuations: Vec<i64>,
    pub multiplicities: Vec<i64>,
    pub milnor_number: i64,
    pub saito_number: i64,
    pub saito_valuations: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moduli: Option<ModuliReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing: Option<GluingBlock>,
}

impl AnalysisReport {
    pub fn compute(tree: &ResolutionTree, n: &Numbering) -> Result<Self, Error> {
        let profile = saito_valuation_profile(tree, n)?;
        let mu = milnor_number(tree, n)?.mu;
        Ok(AnalysisReport {
            tree: TreeEcho {
                document: serialize_tree(tree, n),
                parents: tree
                    .vertices()
                    .map(|v| tree.parents(v).iter().map(|p| p.index()).collect())
                    .collect(),
                edges: tree.edges().iter().map(|(a, b)| (a.index(), b.index())).collect(),
            },
            numbering: n.as_slice().to_vec(),
            dicriticity: profile.dicriticity.as_slice().to_vec(),
            configuration: profile.configuration.as_slice().to_vec(),
            valuations: profile.valuations,
            multiplicities: profile.multiplicities,
            milnor_number: mu,
            saito_number: profile.saito_number,
            saito_valuations: profile.per_vertex,
            moduli: None,
            gluing: None,
        })
    }

    /// Adds the moduli block, with the Tjurina number when a modularity is given.
    pub fn with_moduli(mut self, tree: &ResolutionTree, n: &Numbering, modularity: Option<i64>) -> Result<Self, Error> {
        let mut report = generic_moduli_dimension(tree, n)?;
        if let Some(delta) = modularity {
            report = report.with_tjurina(self.milnor_number, delta)?;
        }
        self.moduli = Some(report);
        Ok(self)
    }

    pub fn with_gluing(mut self, tree: &ResolutionTree, n: &Numbering, seed: u64) -> Result<Self, Error> {
        self.gluing = Some(GluingBlock::from_data(&gluing_data(tree, n, seed)?));
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Rebuilds the tree from the embedded document, recomputes every field
    /// and checks the gluing relations. Returns the first mismatch.
    pub fn revalidate(&self) -> Result<(), String> {
        let (tree, n) = parse_tree(&self.tree.document).map_err(|e| e.to_string())?;
        let mut fresh = AnalysisReport::compute(&tree, &n).map_err(|e| e.to_string())?;
        if let Some(m) = &self.moduli {
            let modularity = m.tjurina.as_ref().map(|t| t.modularity);
            fresh = fresh.with_moduli(&tree, &n, modularity).map_err(|e| e.to_string())?;
        }
        fresh.gluing = self.gluing.clone();
        if &fresh != self {
            return Err("report does not match a fresh computation".into());
        }
        if let Some(g) = &self.gluing {
            g.to_data()?.validate(&tree)?;
        }
        Ok(())
    }

    /// Human-readable summary, one vertex per row.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:>6} {:>8} {:>4} {:>4} {:>4} {:>4} {:>6}",
            "vertex", "parents", "n", "rho", "nu", "D", "eps"
        )
        .expect("string write");
        for (i, parents) in self.tree.parents.iter().enumerate() {
            let p = if parents.is_empty() {
                "-".to_string()
            } else {
                parents.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            };
            writeln!(
                out,
                "{:>6} {:>8} {:>4} {:>4} {:>4} {:>4} {:>6}",
                i,
                p,
                self.numbering[i],
                self.multiplicities[i],
                self.valuations[i],
                self.dicriticity[i],
                self.configuration[i]
            )
            .expect("string write");
        }
        writeln!(out, "saito number: {}", self.saito_number).expect("string write");
        writeln!(out, "milnor number: {}", self.milnor_number).expect("string write");
        if let Some(m) = &self.moduli {
            let levels: Vec<String> = m.per_level().iter().map(i64::to_string).collect();
            writeln!(out, "moduli levels: {}", levels.join(" + ")).expect("string write");
            writeln!(out, "moduli total: {}", m.total).expect("string write");
            if let Some(t) = &m.tjurina {
                writeln!(out, "tjurina: {} = {} - {} + {}", t.tau, t.mu, t.modularity, m.total).expect("string write");
            }
        }
        out
    }
}
