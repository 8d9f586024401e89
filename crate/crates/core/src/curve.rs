//! Numbered resolution trees from curve descriptions.

use num_integer::Integer;
use serde::Serialize;

use crate::error::CurveError;
use crate::tree::{cusp_tree, Numbering, ResolutionTree, Step, VertexId};

/// Names accepted by [`builtin_family`].
pub const FAMILY_NAMES: [&str; 4] = ["cusp", "double_cusp", "r_cusps", "example1"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveDescriptor {
    ExplicitTree {
        tree: ResolutionTree,
        numbering: Numbering,
    },
    /// Characteristic exponents `β₀; β₁, …, β_g` of an irreducible germ.
    Irreducible {
        beta0: u64,
        betas: Vec<u64>,
    },
    Family {
        name: String,
        params: Vec<u32>,
    },
}

impl CurveDescriptor {
    pub fn resolve(&self) -> Result<(ResolutionTree, Numbering), CurveError> {
        match self {
            CurveDescriptor::ExplicitTree { tree, numbering } => {
                tree.check_numbering(numbering)?;
                Ok((tree.clone(), numbering.clone()))
            }
            CurveDescriptor::Irreducible { beta0, betas } => tree_from_char_exponents(*beta0, betas),
            CurveDescriptor::Family { name, params } => builtin_family(name, params),
        }
    }
}

fn validate_characteristic(beta0: u64, betas: &[u64]) -> Result<(), CurveError> {
    if beta0 == 1 {
        return Err(CurveError::SmoothCurve);
    }
    if beta0 == 0 {
        return Err(CurveError::InvalidCharacteristic("β₀ must be positive".into()));
    }
    if betas.is_empty() {
        return Err(CurveError::InvalidCharacteristic(
            "a singular branch needs at least one exponent after β₀".into(),
        ));
    }
    let mut prev = beta0;
    let mut e = beta0;
    for &b in betas {
        if b <= prev {
            return Err(CurveError::InvalidCharacteristic(format!(
                "exponents must increase strictly, got {b} after {prev}"
            )));
        }
        let next = e.gcd(&b);
        if next == e {
            return Err(CurveError::InvalidCharacteristic(format!(
                "{b} does not lower the gcd {e}"
            )));
        }
        prev = b;
        e = next;
    }
    if e != 1 {
        return Err(CurveError::InvalidCharacteristic(format!(
            "gcd chain stops at {e}, not 1"
        )));
    }
    Ok(())
}

/// One Euclidean division run: blocks of `(value, repetitions)`.
fn euclid_blocks(mut a: u64, mut b: u64) -> Vec<(u64, u64)> {
    let mut blocks = Vec::new();
    while b != 0 {
        let (q, r) = a.div_rem(&b);
        blocks.push((b, q));
        a = b;
        b = r;
    }
    blocks
}

/// Multiplicities of the infinitely near points of an irreducible germ,
/// ending with the points of multiplicity 1 needed to separate the branch
/// from the divisor.
pub fn multiplicity_sequence(beta0: u64, betas: &[u64]) -> Result<Vec<u64>, CurveError> {
    Ok(pair_blocks(beta0, betas)?
        .into_iter()
        .flatten()
        .flat_map(|(value, reps)| std::iter::repeat_n(value, reps as usize))
        .collect())
}

fn pair_blocks(beta0: u64, betas: &[u64]) -> Result<Vec<Vec<(u64, u64)>>, CurveError> {
    validate_characteristic(beta0, betas)?;
    let mut pairs = Vec::with_capacity(betas.len());
    let mut e = beta0;
    let mut prev = 0;
    for (i, &b) in betas.iter().enumerate() {
        let a = if i == 0 { b } else { b - prev };
        let d = if i == 0 { beta0 } else { e };
        pairs.push(euclid_blocks(a, d));
        e = e.gcd(&b);
        prev = b;
    }
    Ok(pairs)
}

/// Resolution tree of an irreducible germ with numbering 1 at the last point.
pub fn tree_from_char_exponents(beta0: u64, betas: &[u64]) -> Result<(ResolutionTree, Numbering), CurveError> {
    let pairs = pair_blocks(beta0, betas)?;
    let mut parents: Vec<Vec<VertexId>> = Vec::new();
    for blocks in &pairs {
        let mut block_ranges: Vec<(usize, usize)> = Vec::with_capacity(blocks.len());
        for (k, &(_, reps)) in blocks.iter().enumerate() {
            let start = parents.len();
            for j in 0..reps as usize {
                let id = start + j;
                let mut p: Vec<VertexId> = Vec::with_capacity(2);
                if id > 0 {
                    p.push(VertexId(id - 1));
                }
                if k >= 1 {
                    // block k is proximate to the last point of block k-1
                    let satellite = block_ranges[k - 1].1 - 1;
                    if satellite != id - 1 {
                        p.push(VertexId(satellite));
                    }
                }
                if j == 0 && k >= 2 {
                    let satellite = block_ranges[k - 2].1 - 1;
                    p.push(VertexId(satellite));
                }
                p.sort();
                p.dedup();
                parents.push(p);
            }
            block_ranges.push((start, parents.len()));
        }
    }
    let tree = ResolutionTree::from_parent_sets(&parents)?;
    let mut n = vec![0; tree.len()];
    *n.last_mut().expect("singular branches have points") = 1;
    Ok((tree, Numbering::new(n)))
}

pub fn double_cusp_tree() -> ResolutionTree {
    ResolutionTree::build(&[
        Step::free(0),
        Step::free(0),
        Step::satellite(0, 2),
        Step::satellite(0, 1),
    ])
    .expect("double cusp steps are valid")
}

pub fn example1_tree() -> ResolutionTree {
    ResolutionTree::build(&[Step::free(0), Step::free(0), Step::satellite(0, 2)]).expect("valid steps")
}

fn expect_params(name: &str, params: &[u32], count: usize, expected: &str) -> Result<(), CurveError> {
    if params.len() == count {
        Ok(())
    } else {
        Err(CurveError::BadParameters {
            family: name.to_string(),
            expected: expected.to_string(),
        })
    }
}

pub fn builtin_family(name: &str, params: &[u32]) -> Result<(ResolutionTree, Numbering), CurveError> {
    match name {
        "cusp" => {
            expect_params(name, params, 0, "no parameters")?;
            Ok((cusp_tree(), Numbering::new(vec![0, 0, 1])))
        }
        "r_cusps" => {
            expect_params(name, params, 1, "one parameter r >= 1")?;
            if params[0] == 0 {
                return Err(CurveError::BadParameters {
                    family: name.to_string(),
                    expected: "one parameter r >= 1".into(),
                });
            }
            Ok((cusp_tree(), Numbering::new(vec![0, 0, params[0]])))
        }
        "double_cusp" => {
            expect_params(name, params, 0, "no parameters")?;
            Ok((double_cusp_tree(), Numbering::new(vec![0, 0, 0, 1, 1])))
        }
        "example1" => {
            expect_params(name, params, 0, "no parameters")?;
            Ok((example1_tree(), Numbering::new(vec![0, 2, 1, 2])))
        }
        other => Err(CurveError::UnknownFamily(other.to_string())),
    }
}

/// True when every vertex is a point where the curve together with the
/// divisors through it fails to be a normal crossing: at least three
/// components, or two tangent ones (which forces a further point).
pub fn is_minimal_resolution(tree: &ResolutionTree, n: &Numbering) -> bool {
    if tree.check_numbering(n).is_err() {
        return false;
    }
    let nu = tree.valuations(n);
    tree.vertices().all(|c| {
        let m = nu[c.index()] + tree.parents(c).len() as i64;
        m >= 3 || (m == 2 && !tree.children(c).is_empty())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MilnorResult {
    pub mu: i64,
    pub branch_count: i64,
}

/// `μ = Σ ν_s(ν_s - 1) - r + 1` with `r` the number of branches.
pub fn milnor_number(tree: &ResolutionTree, n: &Numbering) -> Result<MilnorResult, CurveError> {
    tree.check_numbering(n)?;
    let nu = tree.valuations(n);
    let r = n.total();
    let mu = nu.iter().map(|v| v * (v - 1)).sum::<i64>() - r + 1;
    Ok(MilnorResult { mu, branch_count: r })
}
