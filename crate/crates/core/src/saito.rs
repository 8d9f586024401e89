//! Saito numbers, valuation profiles and foliation gluing data.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::dicriticity::{delta_counts, saito, white_components, white_neighbor_counts, Configuration, Dicriticity};
use crate::error::{DicriticityError, GluingError};
use crate::halfint::{parity_select, HalfInt};
use crate::tree::{Numbering, ResolutionTree, VertexId};

/// Number of attempts the gluing solver makes before giving up.
pub const GLUING_ATTEMPTS: usize = 16;

/// `(ν + δ)/2 - ⌊1 - Δ | ½⌋_{ν + δ}`, always an integer.
fn profile_value(nu: i64, delta_count: i64, white: i64) -> i64 {
    let k = nu + delta_count;
    let v = HalfInt::half_of(k) - parity_select(HalfInt::from_int(1 - white), HalfInt::HALF, k);
    v.to_integer().expect("profile values are integral")
}

fn weighted_configuration(tree: &ResolutionTree, eps: &Configuration) -> i64 {
    tree.multiplicities()
        .iter()
        .zip(eps.as_slice())
        .map(|(r, e)| r * e)
        .sum()
}

/// Minimal valuation of a vector field tangent to the curve.
pub fn saito_number(tree: &ResolutionTree, n: &Numbering) -> Result<i64, DicriticityError> {
    let sol = saito(tree, n)?;
    let root = tree.root();
    let s = profile_value(tree.valuations(n)[0], 0, sol.dicriticity.value(root));
    debug_assert_eq!(weighted_configuration(tree, &sol.configuration), s + 1);
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaitoProfile {
    pub saito_number: i64,
    /// Valuation of the strict transform of a Saito vector field at each vertex.
    pub per_vertex: Vec<i64>,
    pub dicriticity: Dicriticity,
    pub configuration: Configuration,
    pub valuations: Vec<i64>,
    pub multiplicities: Vec<i64>,
}

impl SaitoProfile {
    /// `Σ ρ_s ε_s`, which equals the Saito number plus one.
    pub fn weighted_configuration(&self) -> i64 {
        self.multiplicities
            .iter()
            .zip(self.configuration.as_slice())
            .map(|(r, e)| r * e)
            .sum()
    }
}

pub fn saito_valuation_profile(tree: &ResolutionTree, n: &Numbering) -> Result<SaitoProfile, DicriticityError> {
    let sol = saito(tree, n)?;
    let nu = tree.valuations(n);
    let dc = delta_counts(tree, &sol.dicriticity);
    let per_vertex: Vec<i64> = tree
        .vertices()
        .map(|v| profile_value(nu[v.index()], dc[v.index()], sol.dicriticity.value(v)))
        .collect();
    Ok(SaitoProfile {
        saito_number: per_vertex[0],
        per_vertex,
        dicriticity: sol.dicriticity,
        configuration: sol.configuration,
        valuations: nu,
        multiplicities: tree.multiplicities(),
    })
}

/// `s ≤ ⌊ν_root / 2⌋`.
pub fn check_upper_bound(tree: &ResolutionTree, n: &Numbering, s: i64) -> bool {
    s <= tree.valuations(n)[0].div_euclid(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexSum {
    /// Sum of Camacho-Sad indices at the singular points of a white vertex.
    Ind { total: i64 },
    /// Sum of tangency orders along a black vertex.
    Tan { total: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSums {
    pub per_vertex: Vec<IndexSum>,
    /// `Σ ρ_s (-w_s + Ind_s)` over white and `Σ ρ_s (2 - w_s + Tan_s)` over black vertices.
    pub weighted_total: i64,
    pub saito_number: i64,
}

impl IndexSums {
    pub fn identity_holds(&self) -> bool {
        self.weighted_total == self.saito_number + 1
    }
}

pub fn index_sums(tree: &ResolutionTree, n: &Numbering) -> Result<IndexSums, DicriticityError> {
    let profile = saito_valuation_profile(tree, n)?;
    let w = white_neighbor_counts(tree, &profile.dicriticity);
    let mut per_vertex = Vec::with_capacity(tree.len());
    let mut weighted_total = 0;
    for v in tree.vertices() {
        let (i, eps) = (v.index(), profile.configuration.get(v));
        let rho = profile.multiplicities[i];
        if profile.dicriticity.is_white(v) {
            let total = eps + w[i];
            per_vertex.push(IndexSum::Ind { total });
            weighted_total += rho * (total - w[i]);
        } else {
            let total = eps - 2 + w[i];
            per_vertex.push(IndexSum::Tan { total });
            weighted_total += rho * (2 - w[i] + total);
        }
    }
    Ok(IndexSums {
        per_vertex,
        weighted_total,
        saito_number: profile.saito_number,
    })
}

/// Exact rational serialized as `"p/q"` (or `"p"` when integral).
pub fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ser_ratio_vec<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ratio_string))
}

fn ser_ratio_map<S: Serializer>(m: &BTreeMap<VertexId, BigRational>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), ratio_string(v))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum VertexModel {
    /// Invariant component: `ε_s` free singular points plus one corner per
    /// white neighbour, with Camacho-Sad indices summing to `p_s`.
    NonDicritical {
        self_intersection: i64,
        #[serde(serialize_with = "ser_ratio_vec")]
        free_weights: Vec<BigRational>,
        #[serde(serialize_with = "ser_ratio_map")]
        edge_weights: BTreeMap<VertexId, BigRational>,
    },
    /// Dicritical component with the given number of tangency points.
    Dicritical { tangency_count: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingData {
    pub models: Vec<VertexModel>,
    /// Attempt that produced the weights (0 is the unperturbed default).
    pub attempt: usize,
}

impl GluingData {
    /// Checks every relation exactly and reports the first failure.
    pub fn validate(&self, tree: &ResolutionTree) -> Result<(), String> {
        if self.models.len() != tree.len() {
            return Err(format!("{} models for {} vertices", self.models.len(), tree.len()));
        }
        for v in tree.vertices() {
            match &self.models[v.index()] {
                VertexModel::Dicritical { tangency_count } => {
                    if *tangency_count < 0 {
                        return Err(format!("vertex {v}: negative tangency count {tangency_count}"));
                    }
                }
                VertexModel::NonDicritical {
                    self_intersection,
                    free_weights,
                    edge_weights,
                } => {
                    let sum: BigRational = free_weights.iter().chain(edge_weights.values()).sum();
                    if sum != BigRational::from_integer(BigInt::from(*self_intersection)) {
                        return Err(format!(
                            "vertex {v}: indices sum to {} instead of {self_intersection}",
                            ratio_string(&sum)
                        ));
                    }
                    if free_weights.iter().chain(edge_weights.values()).any(Zero::is_zero) {
                        return Err(format!("vertex {v}: zero weight"));
                    }
                    for (w, lambda) in edge_weights {
                        if !tree.has_edge(v, *w) {
                            return Err(format!("vertex {v}: weight on missing edge to {w}"));
                        }
                        let back = match &self.models[w.index()] {
                            VertexModel::NonDicritical { edge_weights, .. } => edge_weights.get(&v),
                            VertexModel::Dicritical { .. } => None,
                        };
                        match back {
                            Some(mu) if (lambda * mu).is_one() => {}
                            _ => return Err(format!("edge {v}-{w}: weights are not reciprocal")),
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Source of the values the solver is free to choose.
struct Choices {
    rng: Option<ChaCha8Rng>,
    counter: i64,
}

impl Choices {
    fn new(seed: u64, attempt: usize) -> Self {
        let rng = (attempt > 0).then(|| ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64)));
        Choices { rng, counter: 0 }
    }

    fn next(&mut self) -> BigRational {
        self.counter += 1;
        match self.rng.as_mut() {
            None => ratio(1, self.counter + 1),
            Some(rng) => ratio(rng.gen_range(1..=97), rng.gen_range(1..=89)),
        }
    }
}

struct Failure(VertexId);

fn try_glue(
    tree: &ResolutionTree,
    delta: &Dicriticity,
    eps: &Configuration,
    p: &[i64],
    choices: &mut Choices,
) -> Result<Vec<VertexModel>, Failure> {
    let mut edge: Vec<BTreeMap<VertexId, BigRational>> = vec![BTreeMap::new(); tree.len()];
    let mut free: Vec<Vec<BigRational>> = vec![Vec::new(); tree.len()];

    for component in white_components(tree, delta) {
        let root = *component
            .iter()
            .find(|v| eps.get(**v) > 0)
            .expect("checked before gluing");
        // breadth-first order inside the component
        let mut order = vec![root];
        let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            for &w in tree.neighbors(s) {
                if delta.is_white(w) && w != root && !parent.contains_key(&w) {
                    parent.insert(w, s);
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        for &s in order.iter().rev() {
            let p_s = BigRational::from_integer(BigInt::from(p[s.index()]));
            let settled: BigRational = edge[s.index()].values().sum();
            let k = eps.get(s);
            let mut residual = p_s - settled;
            if let Some(&up) = parent.get(&s) {
                let lambda = if k > 0 { choices.next() } else { residual.clone() };
                if lambda.is_zero() {
                    return Err(Failure(s));
                }
                residual -= &lambda;
                edge[up.index()].insert(s, lambda.recip());
                edge[s.index()].insert(up, lambda);
            }
            if k > 0 {
                let mut weights: Vec<BigRational> = (1..k).map(|_| choices.next()).collect();
                let last = residual - weights.iter().sum::<BigRational>();
                weights.push(last);
                if weights.iter().any(Zero::is_zero) {
                    return Err(Failure(s));
                }
                free[s.index()] = weights;
            } else if !residual.is_zero() {
                return Err(Failure(s));
            }
        }
    }

    let w = white_neighbor_counts(tree, delta);
    Ok(tree
        .vertices()
        .map(|v| {
            let i = v.index();
            if delta.is_white(v) {
                VertexModel::NonDicritical {
                    self_intersection: p[i],
                    free_weights: std::mem::take(&mut free[i]),
                    edge_weights: std::mem::take(&mut edge[i]),
                }
            } else {
                VertexModel::Dicritical {
                    tangency_count: eps.get(v) - 2 + w[i],
                }
            }
        })
        .collect())
}

/// Exact Camacho-Sad weights for the semi-local models of the Saito
/// dicriticity. The first attempt is deterministic; later ones draw
/// perturbed free weights from `seed`.
pub fn gluing_data(tree: &ResolutionTree, n: &Numbering, seed: u64) -> Result<GluingData, GluingError> {
    let sol = saito(tree, n)?;
    let (delta, eps) = (&sol.dicriticity, &sol.configuration);
    for component in white_components(tree, delta) {
        if component.iter().all(|v| eps.get(*v) <= 0) {
            return Err(GluingError::NoFreeWeight { vertex: component[0] });
        }
    }
    let p = tree.self_intersection_magnitudes();
    let mut last_failure = tree.root();
    for attempt in 0..GLUING_ATTEMPTS {
        let mut choices = Choices::new(seed, attempt);
        match try_glue(tree, delta, eps, &p, &mut choices) {
            Ok(models) => return Ok(GluingData { models, attempt }),
            Err(Failure(v)) => last_failure = v,
        }
    }
    Err(GluingError::DegenerateAssignment {
        vertex: last_failure,
        attempts: GLUING_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::builtin_family;
    use crate::tree::cusp_tree;

    fn n(values: &[u32]) -> Numbering {
        Numbering::new(values.to_vec())
    }

    #[test]
    fn saito_numbers() {
        let (t, num) = builtin_family("double_cusp", &[]).unwrap();
        assert_eq!(saito_number(&t, &num).unwrap(), 2);
        assert_eq!(saito_number(&cusp_tree(), &n(&[0, 0, 1])).unwrap(), 1);
        for r in 1..=8 {
            assert_eq!(saito_number(&cusp_tree(), &n(&[0, 0, r])).unwrap(), i64::from(r));
        }
    }

    #[test]
    fn double_cusp_profile() {
        let (t, num) = builtin_family("double_cusp", &[]).unwrap();
        let p = saito_valuation_profile(&t, &num).unwrap();
        assert_eq!(p.configuration.as_slice(), &[1, 1, 1, 0, 0]);
        assert_eq!(p.per_vertex[0], 2);
        assert_eq!(p.weighted_configuration(), 3);
        assert!(check_upper_bound(&t, &num, p.saito_number));
    }

    #[test]
    fn cusp_index_sums() {
        let sums = index_sums(&cusp_tree(), &n(&[0, 0, 1])).unwrap();
        assert_eq!(
            sums.per_vertex,
            vec![
                IndexSum::Ind { total: 1 },
                IndexSum::Ind { total: 1 },
                IndexSum::Tan { total: 0 }
            ]
        );
        assert!(sums.identity_holds());
    }

    #[test]
    fn cusp_gluing_is_forced() {
        let t = cusp_tree();
        let g = gluing_data(&t, &n(&[0, 0, 1]), 0).unwrap();
        g.validate(&t).unwrap();
        match &g.models[0] {
            VertexModel::NonDicritical { free_weights, .. } => assert_eq!(free_weights, &vec![ratio(3, 1)]),
            other => panic!("unexpected {other:?}"),
        }
        match &g.models[1] {
            VertexModel::NonDicritical { free_weights, .. } => assert_eq!(free_weights, &vec![ratio(2, 1)]),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(g.models[2], VertexModel::Dicritical { tangency_count: 0 });
    }

    #[test]
    fn single_vertex_gluing() {
        let t = ResolutionTree::single();
        let g = gluing_data(&t, &n(&[0]), 0).unwrap();
        assert_eq!(
            g.models,
            vec![VertexModel::NonDicritical {
                self_intersection: 1,
                free_weights: vec![ratio(1, 1)],
                edge_weights: BTreeMap::new(),
            }]
        );
    }

    #[test]
    fn example1_gluing_validates() {
        let (t, num) = builtin_family("example1", &[]).unwrap();
        let g = gluing_data(&t, &num, 7).unwrap();
        g.validate(&t).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert!(!json.contains('.'), "{json}");
    }

    #[test]
    fn ratio_strings() {
        assert_eq!(ratio_string(&ratio(6, 4)), "3/2");
        assert_eq!(ratio_string(&ratio(-4, 2)), "-2");
    }
}
