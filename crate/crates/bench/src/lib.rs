//! Inputs for the solver benchmarks.

use saito_core::{Numbering, ResolutionTree, Step};

/// Chain of `len` free vertices with one branch on the last.
pub fn chain(len: usize) -> (ResolutionTree, Numbering) {
    let steps: Vec<Step> = (1..len).map(|s| Step::free(s - 1)).collect();
    let mut n = vec![0; len];
    n[len - 1] = 1;
    (
        ResolutionTree::build(&steps).expect("chain steps are valid"),
        Numbering::new(n),
    )
}

/// Comb: a spine of `spine` vertices, each carrying a satellite and a free tooth.
pub fn comb(spine: usize) -> (ResolutionTree, Numbering) {
    let mut steps = Vec::new();
    let mut last = 0;
    for _ in 1..spine {
        steps.push(Step::free(last));
        let next = steps.len();
        steps.push(Step::satellite(last, next));
        steps.push(Step::free(steps.len()));
        last = next;
    }
    let tree = ResolutionTree::build(&steps).expect("comb steps are valid");
    let n: Vec<u32> = (0..tree.len()).map(|i| (i % 3) as u32).collect();
    (tree, Numbering::new(n))
}
