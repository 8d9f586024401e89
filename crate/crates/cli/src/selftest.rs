//! Fixed anchors checked by `saito selftest`.

use saito_core::dicriticity::{delta_counts, square_indices};
use saito_core::moduli::generic_tjurina;
use saito_core::tree::cusp_tree;
use saito_core::{
    builtin_family, generic_moduli_dimension, milnor_number, saito_bruteforce, saito_inductive, saito_number,
    saito_valuation_profile, tree_from_char_exponents, Error, HalfInt, Numbering, ResolutionTree,
};

type Check = fn() -> Result<bool, Error>;

fn example1() -> Result<bool, Error> {
    let (tree, n) = builtin_family("example1", &[])?;
    let sol = saito_inductive(&tree, &n)?;
    let squares: Vec<i64> = square_indices(&tree, &n, &sol.dicriticity)
        .iter()
        .map(|h| h.twice())
        .collect();
    Ok(tree.multiplicities() == [1, 1, 1, 2]
        && tree.valuations(&n) == [7, 2, 3, 2]
        && delta_counts(&tree, &sol.dicriticity) == [0, 1, 1, 2]
        && squares == [-1, 0, -1, 2]
        && sol.configuration.as_slice() == [1, 1, 2, 0])
}

fn cusp() -> Result<bool, Error> {
    let sol = saito_bruteforce(&cusp_tree(), &Numbering::new(vec![0, 0, 1]))?;
    Ok(sol.dicriticity.as_slice() == [1, 1, 0] && sol.configuration.as_slice() == [1, 1, 0])
}

fn single_vertex() -> Result<bool, Error> {
    let tree = ResolutionTree::single();
    for nr in 0..=50u32 {
        let sol = saito_inductive(&tree, &Numbering::new(vec![nr]))?;
        let white = nr <= 2;
        let eps = HalfInt::half_of(i64::from(nr))
            + saito_core::halfint::parity_select(HalfInt::from_int(i64::from(white)), HalfInt::HALF, i64::from(nr));
        if sol.dicriticity.as_slice() != [u8::from(white)] || eps.to_integer() != Some(sol.configuration.as_slice()[0])
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn r_cusps() -> Result<bool, Error> {
    for r in [2i64, 4, 6, 8, 10] {
        let (tree, n) = builtin_family("r_cusps", &[r as u32])?;
        if generic_moduli_dimension(&tree, &n)?.total != ((r - 1) * (3 * r - 5) + 1) / 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn peraire() -> Result<bool, Error> {
    let (tree, n) = tree_from_char_exponents(9, &[12, 17])?;
    let mu = milnor_number(&tree, &n)?.mu;
    let dim = generic_moduli_dimension(&tree, &n)?.total;
    Ok(mu == 98 && dim == 11 && generic_tjurina(mu, 29, dim)? == 80)
}

fn double_cusp() -> Result<bool, Error> {
    let (tree, n) = builtin_family("double_cusp", &[])?;
    let profile = saito_valuation_profile(&tree, &n)?;
    Ok(profile.configuration.as_slice() == [1, 1, 1, 0, 0]
        && saito_number(&tree, &n)? == 2
        && profile.per_vertex == [2, 1, 1, 1, 1])
}

const CHECKS: [(&str, Check); 6] = [
    ("example-1 pipeline", example1),
    ("cusp Saito dicriticity", cusp),
    ("single-vertex law", single_vertex),
    ("r-cusps dimensions", r_cusps),
    ("peraire curve", peraire),
    ("double cusp", double_cusp),
];

/// Report text and whether every check passed.
pub fn run() -> (String, bool) {
    let mut out = String::new();
    let mut all = true;
    for (name, check) in CHECKS {
        let line = match check() {
            Ok(true) => format!("PASS {name}\n"),
            Ok(false) => {
                all = false;
                format!("FAIL {name}\n")
            }
            Err(err) => {
                all = false;
                format!("FAIL {name}: {err}\n")
            }
        };
        out.push_str(&line);
    }
    (out, all)
}
