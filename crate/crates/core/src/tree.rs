//! Ordered resolution trees.
//!
//! A tree starts as a single root and grows one vertex at a time. A new vertex
//! either hangs off an existing vertex by a fresh edge ([`Step::Free`]), or is
//! inserted on an existing edge `a`-`b`, which is replaced by the two edges
//! `s`-`a` and `s`-`b` ([`Step::Satellite`]). The vertices the new one is
//! attached to are its parents, and the transitive closure of the parent
//! relation is the tree order. Vertex ids are handed out in insertion order, so
//! a parent always has a smaller id than its children and every matrix below is
//! indexed by that single ordering.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TreeError;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i)
    }
}

/// One insertion in the construction of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// New vertex joined to `parent` by a new edge.
    Free { parent: VertexId },
    /// New vertex placed on the existing edge `a`-`b`, which disappears.
    Satellite { a: VertexId, b: VertexId },
}

impl Step {
    pub fn free(parent: usize) -> Self {
        Step::Free {
            parent: VertexId(parent),
        }
    }

    pub fn satellite(a: usize, b: usize) -> Self {
        Step::Satellite {
            a: VertexId(a),
            b: VertexId(b),
        }
    }
}

/// Non-negative integer attached to every vertex: the number of branches of
/// the strict transform meeting the corresponding divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Numbering(Vec<u32>);

impl Numbering {
    pub fn new(values: Vec<u32>) -> Self {
        Numbering(values)
    }

    pub fn zeros(len: usize) -> Self {
        Numbering(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> i64 {
        i64::from(self.0[v.index()])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&x| i64::from(x)).collect()
    }

    /// The numbering `c·n`: one more branch at `c`, everything else unchanged.
    pub fn bump(&self, c: VertexId) -> Numbering {
        self.bump_by(c, 1)
    }

    pub fn bump_by(&self, c: VertexId, amount: u32) -> Numbering {
        let mut values = self.0.clone();
        values[c.index()] += amount;
        Numbering(values)
    }

    /// Total number of branches.
    pub fn total(&self) -> i64 {
        self.0.iter().map(|&x| i64::from(x)).sum()
    }
}

impl From<Vec<u32>> for Numbering {
    fn from(values: Vec<u32>) -> Self {
        Numbering(values)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResolutionTree {
    parents: Vec<Vec<VertexId>>,
    adjacency: Vec<Vec<VertexId>>,
}

/// A connected piece of a tree with its root removed, rebuilt as a tree of its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub tree: ResolutionTree,
    /// Id in the original tree of each local vertex.
    pub vertices: Vec<VertexId>,
    /// Local id of the vertex that was adjacent to the removed root.
    pub attach: VertexId,
}

impl Component {
    /// Restriction of `n` to this component, with `bump` extra branches at the
    /// vertex that touched the removed root.
    pub fn numbering(&self, n: &Numbering, bump: u32) -> Numbering {
        let restricted: Vec<u32> = self.vertices.iter().map(|v| n.as_slice()[v.index()]).collect();
        Numbering(restricted).bump_by(self.attach, bump)
    }
}

impl ResolutionTree {
    /// The tree reduced to its root.
    pub fn single() -> Self {
        Self {
            parents: vec![Vec::new()],
            adjacency: vec![Vec::new()],
        }
    }

    /// Replays construction steps from a single root. Vertex `k + 1` is created by `steps[k]`.
    pub fn build(steps: &[Step]) -> Result<Self, TreeError> {
        let mut parents: Vec<Vec<VertexId>> = vec![Vec::new()];
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (k, step) in steps.iter().enumerate() {
            let s = parents.len();
            let known = |v: VertexId| {
                if v.index() < s {
                    Ok(())
                } else {
                    Err(TreeError::UnknownVertex { step: k, vertex: v })
                }
            };
            match *step {
                Step::Free { parent } => {
                    known(parent)?;
                    edges.insert((parent.index(), s));
                    parents.push(vec![parent]);
                }
                Step::Satellite { a, b } => {
                    known(a)?;
                    known(b)?;
                    if a == b {
                        return Err(TreeError::RepeatedParent { step: k, a });
                    }
                    let key = (a.index().min(b.index()), a.index().max(b.index()));
                    if !edges.remove(&key) {
                        return Err(TreeError::Rule2EdgeMissing { step: k, a, b });
                    }
                    edges.insert((key.0, s));
                    edges.insert((key.1, s));
                    let mut ps = vec![a, b];
                    ps.sort();
                    parents.push(ps);
                }
            }
        }
        let mut adjacency = vec![Vec::new(); parents.len()];
        for &(a, b) in &edges {
            adjacency[a].push(VertexId(b));
            adjacency[b].push(VertexId(a));
        }
        for adj in &mut adjacency {
            adj.sort();
        }
        Ok(Self { parents, adjacency })
    }

    /// Builds a tree from parent sets listed in insertion order.
    ///
    /// The first set must be empty (the root), the others hold one or two
    /// earlier vertices. Two-parent entries are replayed as satellite steps and
    /// must split an edge that exists at that point.
    pub fn from_parent_sets(parent_sets: &[Vec<VertexId>]) -> Result<Self, TreeError> {
        let Some(first) = parent_sets.first() else {
            return Err(TreeError::InvalidParentSet {
                vertex: VertexId(0),
                reason: "a tree needs at least one vertex".into(),
            });
        };
        if !first.is_empty() {
            return Err(TreeError::InvalidParentSet {
                vertex: VertexId(0),
                reason: "the root cannot have parents".into(),
            });
        }
        let mut steps = Vec::with_capacity(parent_sets.len() - 1);
        for (i, ps) in parent_sets.iter().enumerate().skip(1) {
            let vertex = VertexId(i);
            if let Some(p) = ps.iter().find(|p| p.index() >= i) {
                return Err(TreeError::InvalidParentSet {
                    vertex,
                    reason: format!("parent {p} is not an earlier vertex"),
                });
            }
            let step = match ps.as_slice() {
                [p] => Step::Free { parent: *p },
                [a, b] if a != b => Step::Satellite { a: *a, b: *b },
                _ => {
                    return Err(TreeError::InvalidParentSet {
                        vertex,
                        reason: format!("expected one or two distinct parents, got {}", ps.len()),
                    })
                }
            };
            steps.push(step);
        }
        Self::build(&steps)
    }

    /// Construction steps that rebuild this tree.
    pub fn steps(&self) -> Vec<Step> {
        self.parents
            .iter()
            .skip(1)
            .map(|ps| match ps.as_slice() {
                [p] => Step::Free { parent: *p },
                [a, b] => Step::Satellite { a: *a, b: *b },
                _ => unreachable!("non-root vertices have one or two parents"),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    /// Always false: a tree has at least its root.
    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn root(&self) -> VertexId {
        VertexId(0)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len()).map(VertexId)
    }

    pub fn parents(&self, v: VertexId) -> &[VertexId] {
        &self.parents[v.index()]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.index()]
    }

    /// Vertices having `v` among their parents (the points proximate to `v`).
    pub fn children(&self, v: VertexId) -> Vec<VertexId> {
        self.vertices().filter(|w| self.parents(*w).contains(&v)).collect()
    }

    /// Edges as `(smaller, larger)` pairs, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.len().saturating_sub(1));
        for (a, adj) in self.adjacency.iter().enumerate() {
            for &b in adj {
                if a < b.index() {
                    out.push((VertexId(a), b));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency[a.index()].binary_search(&b).is_ok()
    }

    pub fn check_numbering(&self, n: &Numbering) -> Result<(), TreeError> {
        if n.len() == self.len() {
            Ok(())
        } else {
            Err(TreeError::NumberingLength {
                expected: self.len(),
                got: n.len(),
            })
        }
    }

    /// Marks every vertex `u` with `u <= v` in the tree order.
    pub fn lower_set(&self, v: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![v];
        seen[v.index()] = true;
        while let Some(u) = stack.pop() {
            for &p in self.parents(u) {
                if !seen[p.index()] {
                    seen[p.index()] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// `a <= b` in the tree order.
    pub fn is_le(&self, a: VertexId, b: VertexId) -> bool {
        self.lower_set(b)[a.index()]
    }

    /// Proximity matrix: unit diagonal, `-1` at `(i, j)` when `i` is a parent of `j`.
    pub fn proximity_matrix(&self) -> IntMatrix {
        let mut p = IntMatrix::identity(self.len());
        for j in self.vertices() {
            for &i in self.parents(j) {
                p.set(i.index(), j.index(), -1);
            }
        }
        p
    }

    pub fn inverse_proximity(&self) -> IntMatrix {
        self.proximity_matrix()
            .unit_upper_inverse()
            .expect("proximity matrices are unit upper triangular")
    }

    /// Multiplicities: 1 at the root, the sum over the parents elsewhere.
    pub fn multiplicities(&self) -> Vec<i64> {
        let mut rho = vec![0i64; self.len()];
        rho[0] = 1;
        for v in self.vertices().skip(1) {
            rho[v.index()] = self.parents(v).iter().map(|p| rho[p.index()]).sum();
        }
        rho
    }

    /// Valuations `P⁻¹ n`.
    pub fn valuations(&self, n: &Numbering) -> Vec<i64> {
        assert_eq!(n.len(), self.len(), "numbering length must match the tree");
        self.inverse_proximity().mul_vec(&n.to_i64())
    }

    /// Intersection matrix of the exceptional divisor, `-(P Pᵀ)`.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let p = self.proximity_matrix();
        p.mul(&p.transpose()).neg()
    }

    /// Self-intersection magnitudes `p_s = -I_{s,s}`, i.e. one plus the number
    /// of vertices proximate to `s`.
    pub fn self_intersection_magnitudes(&self) -> Vec<i64> {
        let mut p = vec![1i64; self.len()];
        for v in self.vertices() {
            for &q in self.parents(v) {
                p[q.index()] += 1;
            }
        }
        p
    }

    /// Access tree from `c` to `target`: `target`, closed under taking parents
    /// that are still above `c`, together with `c`. Sorted by id.
    pub fn access_tree(&self, c: VertexId, target: VertexId) -> Result<Vec<VertexId>, TreeError> {
        let below_target = self.lower_set(target);
        if !below_target[c.index()] {
            return Err(TreeError::NotComparable { c, target });
        }
        let mut inside = vec![false; self.len()];
        inside[c.index()] = true;
        inside[target.index()] = true;
        let mut stack = vec![target];
        while let Some(u) = stack.pop() {
            for &p in self.parents(u) {
                if !inside[p.index()] && self.is_le(c, p) {
                    inside[p.index()] = true;
                    stack.push(p);
                }
            }
        }
        Ok(self.vertices().filter(|v| inside[v.index()]).collect())
    }

    /// Access tree from the root.
    pub fn access_from_root(&self, target: VertexId) -> Vec<VertexId> {
        self.access_tree(self.root(), target)
            .expect("the root is below every vertex")
    }

    /// Connected components of the tree with its root removed, one per
    /// neighbour of the root, each rebuilt with parent sets restricted to the
    /// component. Ordered by the id of the root neighbour.
    pub fn split_at_root(&self) -> Vec<Component> {
        let root = self.root();
        let mut out = Vec::new();
        for &start in self.neighbors(root) {
            let mut seen = vec![false; self.len()];
            seen[root.index()] = true;
            seen[start.index()] = true;
            let mut queue = VecDeque::from([start]);
            let mut members = Vec::new();
            while let Some(u) = queue.pop_front() {
                members.push(u);
                for &w in self.neighbors(u) {
                    if !seen[w.index()] {
                        seen[w.index()] = true;
                        queue.push_back(w);
                    }
                }
            }
            members.sort();
            let mut local = vec![usize::MAX; self.len()];
            for (i, v) in members.iter().enumerate() {
                local[v.index()] = i;
            }
            let parent_sets: Vec<Vec<VertexId>> = members
                .iter()
                .map(|v| {
                    self.parents(*v)
                        .iter()
                        .filter(|p| **p != root)
                        .map(|p| VertexId(local[p.index()]))
                        .collect()
                })
                .collect();
            let tree = Self::from_parent_sets(&parent_sets).expect("components of a valid tree are valid trees");
            out.push(Component {
                tree,
                attach: VertexId(local[start.index()]),
                vertices: members,
            });
        }
        out
    }

    /// Connected components, in the edge structure, of the subgraph induced on
    /// the vertices selected by `keep`. Each component is sorted; components
    /// are ordered by their smallest vertex.
    pub fn induced_components(&self, keep: impl Fn(VertexId) -> bool) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen[v.index()] || !keep(v) {
                continue;
            }
            seen[v.index()] = true;
            let mut stack = vec![v];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in self.neighbors(u) {
                    if !seen[w.index()] && keep(w) {
                        seen[w.index()] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.induced_components(|_| true).len() == 1
    }
}

/// The cusp tree: `p₂ = {1}`, `p₃ = {1, 2}` (0-based ids here).
pub fn cusp_tree() -> ResolutionTree {
    ResolutionTree::build(&[Step::free(0), Step::satellite(0, 1)]).expect("valid steps")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    /// Four vertices, `p₂ = {1}`, `p₃ = {1}`, `p₄ = {1, 3}` in 1-based terms.
    fn four_vertex_tree() -> ResolutionTree {
        ResolutionTree::build(&[Step::free(0), Step::free(0), Step::satellite(0, 2)]).unwrap()
    }

    #[test]
    fn empty_step_list_is_a_single_root() {
        let t = ResolutionTree::build(&[]).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.edges().is_empty());
        assert_eq!(t.proximity_matrix().rows(), vec![vec![1]]);
        assert_eq!(t.inverse_proximity().rows(), vec![vec![1]]);
        assert_eq!(t.multiplicities(), vec![1]);
        assert_eq!(t.intersection_matrix().rows(), vec![vec![-1]]);
        assert_eq!(t.access_tree(v(0), v(0)).unwrap(), vec![v(0)]);
    }

    #[test]
    fn cusp_tree_structure() {
        let t = cusp_tree();
        assert_eq!(t.parents(v(1)), &[v(0)]);
        assert_eq!(t.parents(v(2)), &[v(0), v(1)]);
        assert_eq!(t.edges(), vec![(v(0), v(2)), (v(1), v(2))]);
        assert_eq!(
            t.proximity_matrix().rows(),
            vec![vec![1, -1, -1], vec![0, 1, -1], vec![0, 0, 1]]
        );
        assert_eq!(
            t.inverse_proximity().rows(),
            vec![vec![1, 1, 2], vec![0, 1, 1], vec![0, 0, 1]]
        );
        assert_eq!(t.multiplicities(), vec![1, 1, 2]);
        assert_eq!(t.valuations(&Numbering::new(vec![0, 0, 1])), vec![2, 1, 1]);
        assert_eq!(t.intersection_matrix().diagonal(), vec![-3, -2, -1]);
    }

    #[test]
    fn four_vertex_tree_structure() {
        let t = four_vertex_tree();
        assert_eq!(t.neighbors(v(0)), &[v(1), v(3)]);
        assert_eq!(t.neighbors(v(1)), &[v(0)]);
        assert_eq!(t.neighbors(v(3)), &[v(0), v(2)]);
        assert_eq!(t.neighbors(v(2)), &[v(3)]);
        assert_eq!(
            t.proximity_matrix().rows(),
            vec![
                vec![1, -1, -1, -1],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, -1],
                vec![0, 0, 0, 1]
            ]
        );
        assert_eq!(
            t.inverse_proximity().rows(),
            vec![vec![1, 1, 1, 2], vec![0, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]]
        );
        assert_eq!(t.multiplicities(), vec![1, 1, 1, 2]);
        assert_eq!(t.valuations(&Numbering::new(vec![0, 2, 1, 2])), vec![7, 2, 3, 2]);
        assert_eq!(t.intersection_matrix().diagonal(), vec![-4, -1, -2, -1]);
        assert_eq!(t.access_tree(v(0), v(1)).unwrap(), vec![v(0), v(1)]);
        assert_eq!(t.access_tree(v(0), v(3)).unwrap(), vec![v(0), v(2), v(3)]);
        assert!(t.is_le(v(0), v(3)));
        assert!(t.is_le(v(2), v(3)));
        assert!(!t.is_le(v(1), v(3)));
    }

    #[test]
    fn missing_edge_is_rejected() {
        // After the satellite at 2 the edge 0-1 is gone.
        let err = ResolutionTree::build(&[Step::free(0), Step::satellite(0, 1), Step::satellite(0, 1)]).unwrap_err();
        assert_eq!(
            err,
            TreeError::Rule2EdgeMissing {
                step: 2,
                a: v(0),
                b: v(1)
            }
        );
    }

    #[test]
    fn unknown_vertex_is_rejected() {
        let err = ResolutionTree::build(&[Step::free(3)]).unwrap_err();
        assert_eq!(err, TreeError::UnknownVertex { step: 0, vertex: v(3) });
    }

    #[test]
    fn access_tree_requires_order() {
        let t = four_vertex_tree();
        assert_eq!(
            t.access_tree(v(1), v(3)).unwrap_err(),
            TreeError::NotComparable { c: v(1), target: v(3) }
        );
    }

    #[test]
    fn intersection_matrix_is_symmetric_with_unit_edges() {
        let t = four_vertex_tree();
        let i = t.intersection_matrix();
        assert!(i.is_symmetric());
        for a in t.vertices() {
            for b in t.vertices() {
                if a != b {
                    let expected = i64::from(t.has_edge(a, b));
                    assert_eq!(i.get(a.index(), b.index()), expected, "{a} {b}");
                }
            }
        }
        let magnitudes: Vec<i64> = i.diagonal().iter().map(|x| -x).collect();
        assert_eq!(magnitudes, t.self_intersection_magnitudes());
    }

    #[test]
    fn split_cusp_at_root() {
        let t = cusp_tree();
        let comps = t.split_at_root();
        assert_eq!(comps.len(), 1);
        let c = &comps[0];
        assert_eq!(c.vertices, vec![v(1), v(2)]);
        assert_eq!(c.attach, v(1));
        assert_eq!(c.tree.parents(v(1)), &[v(0)]);
        let n = Numbering::new(vec![0, 0, 4]);
        assert_eq!(c.numbering(&n, 1).as_slice(), &[0, 5]);
    }

    #[test]
    fn split_four_vertex_tree() {
        let t = four_vertex_tree();
        let comps = t.split_at_root();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vertices, vec![v(1)]);
        assert_eq!(comps[1].vertices, vec![v(2), v(3)]);
        // vertex 3 touched the root, it is the second vertex of its component
        assert_eq!(comps[1].attach, v(1));
    }

    #[test]
    fn steps_round_trip() {
        let t = four_vertex_tree();
        assert_eq!(ResolutionTree::build(&t.steps()).unwrap(), t);
    }

    #[test]
    fn bump_numbering() {
        let n = Numbering::new(vec![0, 0, 1]);
        assert_eq!(n.bump(v(2)).as_slice(), &[0, 0, 2]);
        let m = Numbering::new(vec![0, 2, 1, 2]);
        assert_eq!(m.bump(v(0)).as_slice(), &[1, 2, 1, 2]);
        assert_eq!(n.bump(v(2)).bump(v(2)), n.bump_by(v(2), 2));
    }
}
