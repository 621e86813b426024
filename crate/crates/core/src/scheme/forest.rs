//! Nesting forests of ovals in canonical form.

use std::cmp::Reverse;
use std::fmt;

/// One oval together with the ovals it directly contains.
///
/// Children are always kept in canonical order (larger subtrees first, ties
/// broken by canonical text), so structural equality is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OvalNode {
    children: Vec<OvalNode>,
}

impl OvalNode {
    /// An empty oval.
    pub fn empty() -> Self {
        OvalNode { children: Vec::new() }
    }

    /// An oval containing `children` (reordered canonically).
    pub fn nest(mut children: Vec<OvalNode>) -> Self {
        canonical_sort(&mut children);
        OvalNode { children }
    }

    pub fn children(&self) -> &[OvalNode] {
        &self.children
    }

    /// An oval is empty when it contains no other oval.
    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of ovals in this subtree, including this one.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(OvalNode::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(OvalNode::depth).max().unwrap_or(0)
    }

    /// Text of this single oval: `1` or `1<...>`.
    pub fn canonical_text(&self) -> String {
        if self.children.is_empty() {
            "1".to_string()
        } else {
            format!("1<{}>", format_items(&self.children))
        }
    }
}

fn canonical_sort(nodes: &mut [OvalNode]) {
    nodes.sort_by_cached_key(|n| (Reverse(n.size()), n.canonical_text()));
}

/// Joins canonically ordered siblings, grouping identical neighbours as
/// `k` or `k<...>`.
pub(crate) fn format_items(nodes: &[OvalNode]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let mut j = i + 1;
        while j < nodes.len() && nodes[j] == nodes[i] {
            j += 1;
        }
        let count = j - i;
        if nodes[i].is_empty() {
            parts.push(count.to_string());
        } else {
            parts.push(format!("{count}<{}>", format_items(&nodes[i].children)));
        }
        i = j;
    }
    parts.join(" + ")
}

/// A canonically ordered list of outermost ovals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest(Vec<OvalNode>);

impl Forest {
    pub fn new(mut roots: Vec<OvalNode>) -> Self {
        canonical_sort(&mut roots);
        Forest(roots)
    }

    /// `k` disjoint empty ovals.
    pub fn empties(k: usize) -> Self {
        Forest(vec![OvalNode::empty(); k])
    }

    pub fn roots(&self) -> &[OvalNode] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of ovals.
    pub fn oval_count(&self) -> usize {
        self.0.iter().map(OvalNode::size).sum()
    }

    pub fn depth(&self) -> usize {
        self.0.iter().map(OvalNode::depth).max().unwrap_or(0)
    }

    /// Preorder walk over all ovals.
    pub fn preorder(&self) -> Vec<&OvalNode> {
        fn walk<'a>(node: &'a OvalNode, out: &mut Vec<&'a OvalNode>) {
            out.push(node);
            for c in &node.children {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        for r in &self.0 {
            walk(r, &mut out);
        }
        out
    }

    /// Canonical item list, without the enclosing brackets.
    pub fn items_text(&self) -> String {
        format_items(&self.0)
    }

    pub fn into_roots(self) -> Vec<OvalNode> {
        self.0
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.items_text())
    }
}
