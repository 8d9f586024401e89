//! Dicriticities, square indices, configurations and the Saito dicriticity.
//!
//! A dicriticity colours every vertex white (1, the divisor is invariant) or
//! black (0, dicritical). Together with a numbering it determines half-integer
//! square indices `□` and an integer configuration `ε = n/2 - P □`. Among the
//! `2^N` dicriticities of a numbered tree exactly one satisfies the
//! admissibility bounds; it is computed here twice, by exhaustive search and
//! by the recursive gluing over the components of the tree minus its root.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::DicriticityError;
use crate::halfint::{parity_select, HalfInt};
use crate::tree::{Numbering, ResolutionTree, VertexId};

/// Largest tree the exhaustive search accepts by default.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dicriticity(Vec<u8>);

impl Dicriticity {
    /// Panics on entries other than 0 and 1.
    pub fn new(values: Vec<u8>) -> Self {
        assert!(values.iter().all(|&x| x <= 1), "dicriticity entries are 0 or 1");
        Dicriticity(values)
    }

    pub fn from_bools(values: impl IntoIterator<Item = bool>) -> Self {
        Dicriticity(values.into_iter().map(u8::from).collect())
    }

    /// Bit `i` of `mask` is the colour of vertex `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        Dicriticity((0..len).map(|i| ((mask >> i) & 1) as u8).collect())
    }

    pub fn all_black(len: usize) -> Self {
        Dicriticity(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn is_white(&self, v: VertexId) -> bool {
        self.0[v.index()] == 1
    }

    #[inline]
    pub fn value(&self, v: VertexId) -> i64 {
        i64::from(self.0[v.index()])
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    fn set(&mut self, v: VertexId, white: bool) {
        self.0[v.index()] = u8::from(white);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(Vec<i64>);

impl Configuration {
    pub fn new(values: Vec<i64>) -> Self {
        Configuration(values)
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> i64 {
        self.0[v.index()]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_lengths(tree: &ResolutionTree, n: &Numbering, delta: &Dicriticity) -> Result<(), DicriticityError> {
    tree.check_numbering(n)?;
    if delta.len() != tree.len() {
        return Err(DicriticityError::DicriticityLength {
            expected: tree.len(),
            got: delta.len(),
        });
    }
    Ok(())
}

/// `δ_c`: number of white parents of `c`.
pub fn delta_counts(tree: &ResolutionTree, delta: &Dicriticity) -> Vec<i64> {
    tree.vertices()
        .map(|v| tree.parents(v).iter().map(|&p| delta.value(p)).sum())
        .collect()
}

/// Number of white neighbours of every vertex.
pub fn white_neighbor_counts(tree: &ResolutionTree, delta: &Dicriticity) -> Vec<i64> {
    tree.vertices()
        .map(|v| tree.neighbors(v).iter().map(|&w| delta.value(w)).sum())
        .collect()
}

fn square_from_parts(nu: i64, delta_count: i64, white: i64) -> HalfInt {
    HalfInt::half_of(delta_count) - parity_select(HalfInt::from_int(white), HalfInt::HALF, nu - delta_count)
}

/// Square indices `□_c = δ_c/2 - ⌊Δ_c | ½⌋_{ν_c - δ_c}` of every vertex.
pub fn square_indices(tree: &ResolutionTree, n: &Numbering, delta: &Dicriticity) -> Vec<HalfInt> {
    let nu = tree.valuations(n);
    let dc = delta_counts(tree, delta);
    tree.vertices()
        .map(|v| square_from_parts(nu[v.index()], dc[v.index()], delta.value(v)))
        .collect()
}

pub fn square_index(tree: &ResolutionTree, n: &Numbering, delta: &Dicriticity, c: VertexId) -> HalfInt {
    square_indices(tree, n, delta)[c.index()]
}

/// `n/2 - P □`, before the integrality check.
pub fn configuration_halves(tree: &ResolutionTree, n: &Numbering, delta: &Dicriticity) -> Vec<HalfInt> {
    let squares = square_indices(tree, n, delta);
    let p = tree.proximity_matrix();
    tree.vertices()
        .map(|c| {
            let i = c.index();
            let p_square: HalfInt = (0..tree.len()).map(|j| squares[j] * p.get(i, j)).sum();
            HalfInt::half_of(n.get(c)) - p_square
        })
        .collect()
}

/// The same quantity expanded over neighbours:
/// `ε_c = n_c/2 - □_c + Σ_{v ∈ 𝔳_c, v ≥ c} Σ_{s ∈ A(c→v) \ {c}} □_s`.
pub fn configuration_halves_by_neighbors(tree: &ResolutionTree, n: &Numbering, delta: &Dicriticity) -> Vec<HalfInt> {
    let squares = square_indices(tree, n, delta);
    tree.vertices()
        .map(|c| {
            let mut eps = HalfInt::half_of(n.get(c)) - squares[c.index()];
            for &v in tree.neighbors(c) {
                if let Ok(access) = tree.access_tree(c, v) {
                    eps += access.iter().filter(|s| **s != c).map(|s| squares[s.index()]).sum();
                }
            }
            eps
        })
        .collect()
}

fn integral(values: &[HalfInt]) -> Result<Configuration, DicriticityError> {
    values
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.to_integer().ok_or_else(|| DicriticityError::IntegralityViolation {
                vertex: VertexId(i),
                value: x.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Configuration)
}

/// Configuration of a dicriticity, from the matrix form.
pub fn configuration(
    tree: &ResolutionTree,
    n: &Numbering,
    delta: &Dicriticity,
) -> Result<Configuration, DicriticityError> {
    check_lengths(tree, n, delta)?;
    integral(&configuration_halves(tree, n, delta))
}

/// Configuration of a dicriticity, from the neighbour expansion.
pub fn configuration_by_neighbors(
    tree: &ResolutionTree,
    n: &Numbering,
    delta: &Dicriticity,
) -> Result<Configuration, DicriticityError> {
    check_lengths(tree, n, delta)?;
    integral(&configuration_halves_by_neighbors(tree, n, delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: VertexId,
    pub white: bool,
    pub epsilon: i64,
    /// The bound `ε` failed to reach: `n_c` for white vertices,
    /// `2 - #white neighbours` for black ones.
    pub required: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub configuration: Configuration,
    pub violations: Vec<Violation>,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

fn bound(tree: &ResolutionTree, n: &Numbering, delta: &Dicriticity, c: VertexId) -> i64 {
    if delta.is_white(c) {
        n.get(c)
    } else {
        2 - tree.neighbors(c).iter().map(|&w| delta.value(w)).sum::<i64>()
    }
}

fn violation_at(
    tree: &ResolutionTree,
    n: &Numbering,
    delta: &Dicriticity,
    eps: &Configuration,
    c: VertexId,
) -> Option<Violation> {
    let required = bound(tree, n, delta, c);
    (eps.get(c) < required).then_some(Violation {
        vertex: c,
        white: delta.is_white(c),
        epsilon: eps.get(c),
        required,
    })
}

pub fn check_admissibility(
    tree: &ResolutionTree,
    n: &Numbering,
    delta: &Dicriticity,
) -> Result<Admissibility, DicriticityError> {
    let configuration = configuration(tree, n, delta)?;
    let violations = tree
        .vertices()
        .filter_map(|c| violation_at(tree, n, delta, &configuration, c))
        .collect();
    Ok(Admissibility {
        configuration,
        violations,
    })
}

pub fn is_admissible(tree: &ResolutionTree, n: &Numbering, delta: &Dicriticity) -> Result<bool, DicriticityError> {
    Ok(check_admissibility(tree, n, delta)?.is_admissible())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaitoSolution {
    pub dicriticity: Dicriticity,
    pub configuration: Configuration,
}

/// Exhaustive search over all dicriticities, capped at
/// [`DEFAULT_BRUTE_FORCE_CAP`] vertices.
pub fn saito_bruteforce(tree: &ResolutionTree, n: &Numbering) -> Result<SaitoSolution, DicriticityError> {
    saito_bruteforce_capped(tree, n, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn saito_bruteforce_capped(
    tree: &ResolutionTree,
    n: &Numbering,
    cap: usize,
) -> Result<SaitoSolution, DicriticityError> {
    tree.check_numbering(n)?;
    let size = tree.len();
    if size > cap || size >= 64 {
        return Err(DicriticityError::TreeTooLarge { size, cap });
    }
    let mut found: Option<SaitoSolution> = None;
    let mut count = 0usize;
    for mask in 0..(1u64 << size) {
        let delta = Dicriticity::from_mask(size, mask);
        let adm = check_admissibility(tree, n, &delta)?;
        if adm.is_admissible() {
            count += 1;
            found.get_or_insert(SaitoSolution {
                dicriticity: delta,
                configuration: adm.configuration,
            });
        }
    }
    match (count, found) {
        (1, Some(solution)) => Ok(solution),
        (found, _) => Err(DicriticityError::UniquenessViolation { found }),
    }
}

/// Recursive solver. Removing the root leaves one component per root
/// neighbour; each is solved with its inherited numbering (root black) and
/// with one more branch at the vertex that touched the root (root white).
/// Exactly one of the two glued candidates satisfies the bound at the root.
///
/// Solutions are cached by `(tree, numbering)`, so a solver can be reused
/// across related queries.
#[derive(Debug, Default)]
pub struct InductiveSolver {
    memo: HashMap<(ResolutionTree, Numbering), Dicriticity>,
}

impl InductiveSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }

    pub fn solve(&mut self, tree: &ResolutionTree, n: &Numbering) -> Result<SaitoSolution, DicriticityError> {
        tree.check_numbering(n)?;
        let dicriticity = self.dicriticity(tree, n)?;
        let configuration = configuration(tree, n, &dicriticity)?;
        Ok(SaitoSolution {
            dicriticity,
            configuration,
        })
    }

    fn dicriticity(&mut self, tree: &ResolutionTree, n: &Numbering) -> Result<Dicriticity, DicriticityError> {
        let key = (tree.clone(), n.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let root = tree.root();
        let components = tree.split_at_root();
        let mut accepted = Vec::with_capacity(1);
        for root_white in [false, true] {
            let mut delta = Dicriticity::all_black(tree.len());
            delta.set(root, root_white);
            for comp in &components {
                let sub_n = comp.numbering(n, u32::from(root_white));
                let sub = self.dicriticity(&comp.tree, &sub_n)?;
                for (local, global) in comp.vertices.iter().enumerate() {
                    delta.set(*global, sub.is_white(VertexId(local)));
                }
            }
            let eps = configuration(tree, n, &delta)?;
            if violation_at(tree, n, &delta, &eps, root).is_none() {
                accepted.push(delta);
            }
        }
        if accepted.len() != 1 {
            return Err(DicriticityError::InternalInconsistency {
                admissible: accepted.len(),
                vertices: tree.len(),
            });
        }
        let delta = accepted.pop().expect("one candidate");
        self.memo.insert(key, delta.clone());
        Ok(delta)
    }
}

pub fn saito_inductive(tree: &ResolutionTree, n: &Numbering) -> Result<SaitoSolution, DicriticityError> {
    InductiveSolver::new().solve(tree, n)
}

/// The Saito dicriticity and its configuration.
pub fn saito(tree: &ResolutionTree, n: &Numbering) -> Result<SaitoSolution, DicriticityError> {
    saito_inductive(tree, n)
}

/// Square indices under the Saito dicriticity of `n`.
fn saito_squares(
    solver: &mut InductiveSolver,
    tree: &ResolutionTree,
    n: &Numbering,
) -> Result<(Dicriticity, Vec<HalfInt>), DicriticityError> {
    let sol = solver.solve(tree, n)?;
    let squares = square_indices(tree, n, &sol.dicriticity);
    Ok((sol.dicriticity, squares))
}

fn paired_sum(
    tree: &ResolutionTree,
    target: VertexId,
    first: &Numbering,
    second: &Numbering,
) -> Result<HalfInt, DicriticityError> {
    tree.check_numbering(first)?;
    let mut solver = InductiveSolver::new();
    let (_, a) = saito_squares(&mut solver, tree, first)?;
    let (_, b) = saito_squares(&mut solver, tree, second)?;
    Ok(tree
        .access_from_root(target)
        .iter()
        .map(|s| a[s.index()] + b[s.index()])
        .sum())
}

/// `Θ⁰¹_c = Σ_{s ∈ A_c} □_s^n + □_s^{c·n}`.
pub fn theta01(tree: &ResolutionTree, n: &Numbering, c: VertexId) -> Result<HalfInt, DicriticityError> {
    tree.check_numbering(n)?;
    paired_sum(tree, c, n, &n.bump(c))
}

/// `Θ⁰²_{c0,c1} = Σ_{s ∈ A_{c1}} □_s^n + □_s^{c1·c0·n}`.
pub fn theta02(tree: &ResolutionTree, n: &Numbering, c0: VertexId, c1: VertexId) -> Result<HalfInt, DicriticityError> {
    tree.check_numbering(n)?;
    paired_sum(tree, c1, n, &n.bump(c0).bump(c1))
}

/// `Θ¹¹_{c0,c1} = Σ_{s ∈ A_{c1}} □_s^{c0·n} + □_s^{c1·n}`.
pub fn theta11(tree: &ResolutionTree, n: &Numbering, c0: VertexId, c1: VertexId) -> Result<HalfInt, DicriticityError> {
    tree.check_numbering(n)?;
    paired_sum(tree, c1, &n.bump(c0), &n.bump(c1))
}

/// `-Δ_c^n - |A_c|/2`, the value the Θ invariants are pinned to when
/// the multiplicity of `c` is 1.
pub fn theta_reference(tree: &ResolutionTree, n: &Numbering, c: VertexId) -> Result<HalfInt, DicriticityError> {
    let sol = saito(tree, n)?;
    let access = tree.access_from_root(c).len() as i64;
    Ok(-HalfInt::from_int(sol.dicriticity.value(c)) - HalfInt::half_of(access))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityFacts {
    pub nu_root_n_even: bool,
    pub nu_root_cn_even: bool,
    pub nu_m_plus_n_even: Option<bool>,
    pub nu_m_plus_cn_even: Option<bool>,
}

/// Where the Saito dicriticities of `n` and `c·n` disagree on a whole
/// initial segment of the chain from the root to `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedBranchReport {
    pub c: VertexId,
    /// Chain from the root to `c`.
    pub branch: Vec<VertexId>,
    /// Last vertex of the maximal mixed initial segment.
    pub m_c: VertexId,
    pub is_pure: bool,
    /// Successor of `m_c` on the chain, when `m_c != c`.
    pub m_c_plus: Option<VertexId>,
    /// Colours along the chain under `n` and `c·n`.
    pub colors_n: Vec<u8>,
    pub colors_cn: Vec<u8>,
    /// Valuations along the chain under `n` and `c·n`.
    pub valuations_n: Vec<i64>,
    pub valuations_cn: Vec<i64>,
    pub parity_facts: ParityFacts,
}

impl MixedBranchReport {
    /// Number of mixed vertices at the start of the chain.
    pub fn mixed_len(&self) -> usize {
        self.branch
            .iter()
            .position(|v| *v == self.m_c)
            .expect("m_c on the branch")
            + 1
    }
}

pub fn find_mixed_branch(
    tree: &ResolutionTree,
    n: &Numbering,
    c: VertexId,
) -> Result<Option<MixedBranchReport>, DicriticityError> {
    tree.check_numbering(n)?;
    let rho = tree.multiplicities();
    if rho[c.index()] != 1 {
        return Err(DicriticityError::MultiplicityNotOne {
            vertex: c,
            multiplicity: rho[c.index()],
        });
    }
    let cn = n.bump(c);
    let mut solver = InductiveSolver::new();
    let delta_n = solver.solve(tree, n)?.dicriticity;
    let delta_cn = solver.solve(tree, &cn)?.dicriticity;
    let branch = tree.access_from_root(c);
    let mixed = branch
        .iter()
        .take_while(|s| delta_n.value(**s) + delta_cn.value(**s) == 1)
        .count();
    if mixed == 0 {
        return Ok(None);
    }
    let nu_n = tree.valuations(n);
    let nu_cn = tree.valuations(&cn);
    let m_c = branch[mixed - 1];
    let m_c_plus = branch.get(mixed).copied();
    let even = |x: i64| x.rem_euclid(2) == 0;
    let parity_facts = ParityFacts {
        nu_root_n_even: even(nu_n[0]),
        nu_root_cn_even: even(nu_cn[0]),
        nu_m_plus_n_even: m_c_plus.map(|v| even(nu_n[v.index()])),
        nu_m_plus_cn_even: m_c_plus.map(|v| even(nu_cn[v.index()])),
    };
    Ok(Some(MixedBranchReport {
        c,
        colors_n: branch.iter().map(|s| delta_n.as_slice()[s.index()]).collect(),
        colors_cn: branch.iter().map(|s| delta_cn.as_slice()[s.index()]).collect(),
        valuations_n: branch.iter().map(|s| nu_n[s.index()]).collect(),
        valuations_cn: branch.iter().map(|s| nu_cn[s.index()]).collect(),
        m_c,
        is_pure: m_c_plus.is_none(),
        m_c_plus,
        branch,
        parity_facts,
    }))
}

fn select(a: i64, b: i64, k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        a
    } else {
        b
    }
}

/// Terminal inequality along a mixed branch, with positions counted from 1
/// at the root and `N` the first vertex where mixing stops:
/// `⌊Δ₁ⁿ | Δ₁^{c·n}⌋_{ν₁} - ⌊Δ_Nⁿ | 1-Δ_Nⁿ⌋_{ν_N - Δ_{N-1}ⁿ} ≥ 1`.
///
/// A pure branch longer than one vertex must end white and satisfy
/// `⌊Δ₁ⁿ | Δ₁^{c·n}⌋_{ν₁} ≥ 1`; a pure branch reduced to the root only the latter.
pub fn check_mixed_inequality(report: &MixedBranchReport) -> bool {
    let head = select(
        i64::from(report.colors_n[0]),
        i64::from(report.colors_cn[0]),
        report.valuations_n[0],
    );
    if report.is_pure {
        let last_white = *report.colors_n.last().expect("non-empty branch") == 1;
        return head >= 1 && (report.branch.len() == 1 || last_white);
    }
    let big_n = report.mixed_len();
    let d_n = i64::from(report.colors_n[big_n]);
    let d_prev = i64::from(report.colors_n[big_n - 1]);
    let tail = select(d_n, 1 - d_n, report.valuations_n[big_n] - d_prev);
    head - tail >= 1
}

/// Connected components of the white vertices.
pub fn white_components(tree: &ResolutionTree, delta: &Dicriticity) -> Vec<Vec<VertexId>> {
    tree.induced_components(|v| delta.is_white(v))
}
