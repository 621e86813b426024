//! Exhaustive generation of nesting forests.
//!
//! A forest is generated directly as its canonical root sequence: roots are
//! picked in non-decreasing `(size descending, text ascending)` order, so each
//! isomorphism class appears exactly once and no deduplication pass is needed.

use super::{Ambient, Forest, OvalNode, RealScheme, SchemeError};
use crate::exec::{self, Execution};

/// Trees by size; `trees[s]` lists every rooted tree with `s` nodes sorted
/// by canonical text.
fn trees_up_to(n: usize) -> Vec<Vec<OvalNode>> {
    let mut trees: Vec<Vec<OvalNode>> = vec![Vec::new(), vec![OvalNode::empty()]];
    for s in 2..=n {
        let mut level: Vec<OvalNode> = forests_from(&trees, s - 1, None)
            .into_iter()
            .map(OvalNode::nest)
            .collect();
        level.sort_by_cached_key(OvalNode::canonical_text);
        trees.push(level);
    }
    trees
}

/// Every canonical root sequence of total size `remaining` whose first root
/// is not smaller than `(size, index)` in canonical order.
fn forests_from(
    trees: &[Vec<OvalNode>],
    remaining: usize,
    bound: Option<(usize, usize)>,
) -> Vec<Vec<OvalNode>> {
    if remaining == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let max_size = bound.map_or(remaining, |(s, _)| s.min(remaining));
    for size in (1..=max_size).rev() {
        let first_idx = match bound {
            Some((s, i)) if s == size => i,
            _ => 0,
        };
        for idx in first_idx..trees[size].len() {
            for mut rest in forests_from(trees, remaining - size, Some((size, idx))) {
                rest.insert(0, trees[size][idx].clone());
                out.push(rest);
            }
        }
    }
    out
}

/// All nesting forests with exactly `n` ovals, in a fixed order.
pub fn enumerate_forests(n: usize, exec: Execution) -> Vec<Forest> {
    if n == 0 {
        return vec![Forest::default()];
    }
    let trees = trees_up_to(n);
    let firsts: Vec<(usize, usize)> = (1..=n)
        .rev()
        .flat_map(|s| (0..trees[s].len()).map(move |i| (s, i)))
        .collect();
    exec::map_slice(exec, &firsts, |&(size, idx)| {
        forests_from(&trees, n - size, Some((size, idx)))
            .into_iter()
            .map(|mut rest| {
                rest.insert(0, trees[size][idx].clone());
                Forest::new(rest)
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// All schemes with `n` ovals for a planar ambient (the pseudo-line is added
/// automatically for odd degree).
pub fn enumerate_schemes(
    n: usize,
    ambient: Ambient,
    exec: Execution,
) -> Result<Vec<RealScheme>, SchemeError> {
    let wrap: fn(Forest) -> RealScheme = match ambient {
        Ambient::ProjectivePlaneOdd => RealScheme::projective_odd,
        Ambient::ProjectivePlaneEven => RealScheme::projective_even,
        Ambient::Ellipsoid => RealScheme::ellipsoid,
        Ambient::Hyperboloid => return Err(SchemeError::UnsupportedAmbient(ambient)),
    };
    Ok(enumerate_forests(n, exec).into_iter().map(wrap).collect())
}
