//! Generic dimension of the moduli space by blowing up the root repeatedly,
//! and the generic Tjurina number.

use serde::{Deserialize, Serialize};

use crate::dicriticity::{InductiveSolver, SaitoSolution};
use crate::error::{CurveError, ModuliError};
use crate::halfint::{parity_select, HalfInt};
use crate::tree::{Numbering, ResolutionTree};

/// Components left after removing the root, each numbered by the
/// restriction of `n` plus one at the vertex that met the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupStep {
    pub components: Vec<(ResolutionTree, Numbering)>,
}

pub fn blowup_root(tree: &ResolutionTree, n: &Numbering) -> BlowupStep {
    BlowupStep {
        components: tree
            .split_at_root()
            .into_iter()
            .map(|c| {
                let bumped = c.numbering(n, 1);
                (c.tree, bumped)
            })
            .collect(),
    }
}

/// Contribution of a single numbered tree to the dimension, read off at
/// its root. Implementations may decline an instance by returning a reason.
pub trait LevelRule {
    fn name(&self) -> &str;
    fn contribution(&self, tree: &ResolutionTree, n: &Numbering, saito: &SaitoSolution) -> Result<i64, String>;
}

/// `(k-1)(k-2)/2` for `k ≥ 3`, zero below.
pub fn genus_count(k: i64) -> i64 {
    if k >= 3 {
        (k - 1) * (k - 2) / 2
    } else {
        0
    }
}

/// Shipped rule. With `ν` the root valuation, `s` the Saito number and `k`
/// the number of neighbours of the root, a non-dicritical root contributes
/// `g(s) + g(ν - s)` and a dicritical one `g(s) + g(ν - s - 1) + ν - 3 - k`,
/// where `g` is [`genus_count`].
///
/// The value is non-negative on minimal resolution trees (see
/// [`crate::curve::is_minimal_resolution`]); elsewhere it may decline.
#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultLevelRule;

impl LevelRule for DefaultLevelRule {
    fn name(&self) -> &str {
        "default"
    }

    fn contribution(&self, tree: &ResolutionTree, n: &Numbering, saito: &SaitoSolution) -> Result<i64, String> {
        let nu = tree.valuations(n)[0];
        let white = saito.dicriticity.value(tree.root());
        let s = (HalfInt::half_of(nu) - parity_select(HalfInt::from_int(1 - white), HalfInt::HALF, nu))
            .to_integer()
            .expect("integral Saito number");
        let value = if white == 1 {
            genus_count(s) + genus_count(nu - s)
        } else {
            let k = tree.neighbors(tree.root()).len() as i64;
            genus_count(s) + genus_count(nu - s - 1) + nu - 3 - k
        };
        if value < 0 {
            return Err(format!(
                "negative value {value} at root valuation {nu}, Saito number {s}; is the tree a minimal resolution?"
            ));
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSnapshot {
    pub numbering: Vec<u32>,
    pub dicriticity: Vec<u8>,
    pub configuration: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelContribution {
    /// 1 for the input tree, increasing by one per blow-up.
    pub level: usize,
    pub vertices: usize,
    pub value: i64,
    pub inputs: LevelSnapshot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TjurinaReport {
    pub mu: i64,
    pub modularity: i64,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliReport {
    pub rule: String,
    pub contributions: Vec<LevelContribution>,
    pub total: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tjurina: Option<TjurinaReport>,
}

impl ModuliReport {
    /// Attaches the generic Tjurina number for the given Milnor number and modularity.
    pub fn with_tjurina(mut self, mu: i64, modularity: i64) -> Result<Self, ModuliError> {
        let tau = generic_tjurina(mu, modularity, self.total)?;
        self.tjurina = Some(TjurinaReport { mu, modularity, tau });
        Ok(self)
    }

    /// Sum of contributions per level, starting at level 1.
    pub fn per_level(&self) -> Vec<i64> {
        let depth = self.contributions.iter().map(|c| c.level).max().unwrap_or(0);
        let mut out = vec![0; depth];
        for c in &self.contributions {
            out[c.level - 1] += c.value;
        }
        out
    }
}

pub fn generic_moduli_dimension(tree: &ResolutionTree, n: &Numbering) -> Result<ModuliReport, ModuliError> {
    generic_moduli_dimension_with(tree, n, &DefaultLevelRule)
}

pub fn generic_moduli_dimension_with(
    tree: &ResolutionTree,
    n: &Numbering,
    rule: &dyn LevelRule,
) -> Result<ModuliReport, ModuliError> {
    tree.check_numbering(n).map_err(crate::error::DicriticityError::from)?;
    let mut solver = InductiveSolver::new();
    let mut contributions = Vec::new();
    let mut frontier = vec![(tree.clone(), n.clone())];
    let mut level = 1;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (t, num) in frontier {
            let sol = solver.solve(&t, &num)?;
            let inputs = LevelSnapshot {
                numbering: num.as_slice().to_vec(),
                dicriticity: sol.dicriticity.as_slice().to_vec(),
                configuration: sol.configuration.as_slice().to_vec(),
            };
            let value = rule
                .contribution(&t, &num, &sol)
                .map_err(|reason| ModuliError::UnsupportedInstance {
                    level,
                    rule: rule.name().to_string(),
                    reason,
                    snapshot: serde_json::to_string(&inputs).unwrap_or_default(),
                })?;
            contributions.push(LevelContribution {
                level,
                vertices: t.len(),
                value,
                inputs,
            });
            next.extend(blowup_root(&t, &num).components);
        }
        frontier = next;
        level += 1;
    }
    let total = contributions.iter().map(|c| c.value).sum();
    Ok(ModuliReport {
        rule: rule.name().to_string(),
        contributions,
        total,
        tjurina: None,
    })
}

/// `τ = μ - δ + dim`.
pub fn generic_tjurina(mu: i64, modularity: i64, dimension: i64) -> Result<i64, ModuliError> {
    let tau = mu - modularity + dimension;
    if tau < 0 || mu < 0 || modularity < 0 || dimension < 0 {
        return Err(ModuliError::NegativeResult {
            mu,
            modularity,
            dimension,
        });
    }
    Ok(tau)
}

/// Closed form `((r-1)(3r-5) + 1)/2` of the dimension for `r` cusps with a
/// common tangent, valid for even `r`.
pub fn r_cusps_dimension(r: u32) -> Result<i64, CurveError> {
    if r % 2 == 1 {
        return Err(CurveError::OddR(r));
    }
    let r = i64::from(r);
    Ok(((r - 1) * (3 * r - 5) + 1) / 2)
}
