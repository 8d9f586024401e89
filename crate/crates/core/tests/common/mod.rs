//! Random instances and independent reference computations shared by the
//! integration tests. Everything here works from the construction steps
//! directly and never calls into the library beyond building the tree.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saito_core::{Numbering, ResolutionTree, Step};

#[derive(Debug, Clone)]
pub struct Instance {
    pub steps: Vec<Step>,
    pub tree: ResolutionTree,
    pub n: Numbering,
    /// Parent lists replayed from the steps.
    pub parents: Vec<Vec<usize>>,
    /// Undirected edges replayed from the steps, each as `(low, high)`.
    pub edges: Vec<(usize, usize)>,
}

impl Instance {
    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Vertices that have `v` among their parents.
    pub fn proximate_to(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.parents[j].contains(&v)).collect()
    }
}

/// Replays steps by hand, keeping the parent lists and edge set.
pub fn replay(steps: &[Step]) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let mut parents = vec![Vec::new()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for step in steps {
        let s = parents.len();
        match *step {
            Step::Free { parent } => {
                edges.push((parent.0, s));
                parents.push(vec![parent.0]);
            }
            Step::Satellite { a, b } => {
                let (lo, hi) = (a.0.min(b.0), a.0.max(b.0));
                edges.retain(|e| *e != (lo, hi));
                edges.push((lo, s));
                edges.push((hi, s));
                parents.push(vec![lo, hi]);
            }
        }
    }
    edges.sort();
    (parents, edges)
}

/// Random construction of `1..=max_vertices` vertices with entries of `n` in `0..=max_n`.
pub fn random_instance(rng: &mut impl Rng, max_vertices: usize, max_n: u32) -> Instance {
    let size = rng.gen_range(1..=max_vertices);
    let mut steps = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for s in 1..size {
        if edges.is_empty() || rng.gen_bool(0.55) {
            let p = rng.gen_range(0..s);
            steps.push(Step::free(p));
            edges.push((p, s));
        } else {
            let k = rng.gen_range(0..edges.len());
            let (a, b) = edges.swap_remove(k);
            steps.push(Step::satellite(a, b));
            edges.push((a, s));
            edges.push((b, s));
        }
    }
    let n = Numbering::new((0..size).map(|_| rng.gen_range(0..=max_n)).collect());
    instance_from_steps(steps, n)
}

pub fn instance_from_steps(steps: Vec<Step>, n: Numbering) -> Instance {
    let tree = ResolutionTree::build(&steps).expect("generated steps are valid");
    let (parents, edges) = replay(&steps);
    Instance {
        steps,
        tree,
        n,
        parents,
        edges,
    }
}

/// The fixed randomized suite: `count` instances from a fixed seed.
pub fn suite(count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x005a_1700);
    (0..count).map(|_| random_instance(&mut rng, 12, 4)).collect()
}

/// `ρ_j = Σ_{i ∈ parents(j)} ρ_i`, `ρ_root = 1`.
pub fn ref_multiplicities(inst: &Instance) -> Vec<i64> {
    let mut rho = vec![0i64; inst.len()];
    for j in 0..inst.len() {
        rho[j] = if j == 0 {
            1
        } else {
            inst.parents[j].iter().map(|&i| rho[i]).sum()
        };
    }
    rho
}

/// `ν_i = n_i + Σ_{j proximate to i} ν_j`, filled from the leaves up.
pub fn ref_valuations(inst: &Instance, n: &[u32]) -> Vec<i64> {
    let mut nu = vec![0i64; inst.len()];
    for i in (0..inst.len()).rev() {
        nu[i] = i64::from(n[i]) + inst.proximate_to(i).iter().map(|&j| nu[j]).sum::<i64>();
    }
    nu
}

/// Twice the configuration of a dicriticity, from the definitions.
pub fn ref_configuration_twice(inst: &Instance, n: &[u32], delta: &[u8]) -> Vec<i64> {
    let nu = ref_valuations(inst, n);
    let square_twice: Vec<i64> = (0..inst.len())
        .map(|c| {
            let dc: i64 = inst.parents[c].iter().map(|&p| i64::from(delta[p])).sum();
            let sel = if (nu[c] - dc).rem_euclid(2) == 0 {
                2 * i64::from(delta[c])
            } else {
                1
            };
            dc - sel
        })
        .collect();
    (0..inst.len())
        .map(|c| i64::from(n[c]) - square_twice[c] + inst.proximate_to(c).iter().map(|&j| square_twice[j]).sum::<i64>())
        .collect()
}

/// Admissibility straight from the two bounds; `None` when ε is not integral.
pub fn ref_admissible(inst: &Instance, n: &[u32], delta: &[u8]) -> Option<bool> {
    let twice = ref_configuration_twice(inst, n, delta);
    if twice.iter().any(|x| x.rem_euclid(2) != 0) {
        return None;
    }
    Some((0..inst.len()).all(|c| {
        let eps = twice[c] / 2;
        if delta[c] == 1 {
            eps >= i64::from(n[c])
        } else {
            let whites: i64 = inst.neighbors(c).iter().map(|&w| i64::from(delta[w])).sum();
            eps >= 2 - whites
        }
    }))
}

/// Every admissible dicriticity, found by enumeration.
pub fn ref_admissible_set(inst: &Instance, n: &[u32]) -> Vec<Vec<u8>> {
    let len = inst.len();
    (0u64..1 << len)
        .map(|mask| (0..len).map(|i| ((mask >> i) & 1) as u8).collect::<Vec<u8>>())
        .filter(|d| ref_admissible(inst, n, d) == Some(true))
        .collect()
}

/// `1 + #{j : v ∈ parents(j)}`.
pub fn ref_self_intersection(inst: &Instance, v: usize) -> i64 {
    1 + inst.proximate_to(v).len() as i64
}

/// Chain from the root to `c` through the tree order.
pub fn ref_access(inst: &Instance, c: usize) -> Vec<usize> {
    let mut below = vec![false; inst.len()];
    let mut stack = vec![c];
    while let Some(v) = stack.pop() {
        if !below[v] {
            below[v] = true;
            stack.extend(inst.parents[v].iter().copied());
        }
    }
    (0..inst.len()).filter(|&v| below[v]).collect()
}
