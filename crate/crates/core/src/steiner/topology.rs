//! Noncrossing trivalent trees and forests on cyclically ordered leaves.
//!
//! Node indices `0..k` are the leaves in boundary order; interior vertices
//! follow. A connected tree on the leaves `l_0 < … < l_{m−1}` is a planar full
//! binary tree over `l_0, …, l_{m−2}` whose root is joined to `l_{m−1}`, so the
//! trees on `m` leaves are counted by the Catalan number `C_{m−2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Connected,
    Matchings,
    Forests,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "connected" => Ok(Mode::Connected),
            "matchings" => Ok(Mode::Matchings),
            "forests" => Ok(Mode::Forests),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Connected => "connected",
            Mode::Matchings => "matchings",
            Mode::Forests => "forests",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub leaf_count: usize,
    pub interior_count: usize,
    /// Edges `(u, v)`. An edge with one leaf end lists the interior vertex first.
    pub edges: Vec<(usize, usize)>,
    /// Leaf blocks of the connected components, each sorted.
    pub components: Vec<Vec<usize>>,
}

impl Topology {
    pub fn node_count(&self) -> usize {
        self.leaf_count + self.interior_count
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        node < self.leaf_count
    }

    /// Edges incident to `node`, as indices into `edges`.
    pub fn incident(&self, node: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].0 == node || self.edges[e].1 == node)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Leaf splits induced by the edges of each component, normalized to the
    /// side not containing the component's smallest leaf.
    pub fn splits(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (e, &(_, v)) in self.edges.iter().enumerate() {
            let side = self.leaves_beyond(v, e);
            let comp = self
                .components
                .iter()
                .find(|c| c.contains(&side[0]))
                .expect("every leaf lies in a component");
            let split = if side.contains(&comp[0]) {
                comp.iter().copied().filter(|l| !side.contains(l)).collect()
            } else {
                side
            };
            out.push(split);
        }
        out.sort();
        out
    }

    /// Leaves reachable from `start` without crossing edge `skip`.
    fn leaves_beyond(&self, start: usize, skip: usize) -> Vec<usize> {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![start];
        let mut leaves = Vec::new();
        seen[start] = true;
        while let Some(n) = stack.pop() {
            if self.is_leaf(n) {
                leaves.push(n);
            }
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                if e == skip {
                    continue;
                }
                let other = if a == n {
                    b
                } else if b == n {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        leaves.sort_unstable();
        leaves
    }

    /// Check valences, the vertex and edge counts of each component, and that
    /// every split is a cyclic interval of its component's leaf order.
    pub fn validate(&self) -> Result<()> {
        let k = self.leaf_count;
        let mut degree = vec![0usize; self.node_count()];
        for &(u, v) in &self.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        for (n, &d) in degree.iter().enumerate() {
            let want = if self.is_leaf(n) { 1 } else { 3 };
            if d != want {
                return Err(Error::InvalidInput(format!("node {n} has valence {d}, expected {want}")));
            }
        }
        let mut covered: Vec<usize> = self.components.iter().flatten().copied().collect();
        covered.sort_unstable();
        if covered != (0..k).collect::<Vec<_>>() {
            return Err(Error::InvalidInput("components do not partition the leaves".into()));
        }
        let interior: usize = self.components.iter().map(|c| c.len() - 2).sum();
        let edges: usize = self.components.iter().map(|c| 2 * c.len() - 3).sum();
        if interior != self.interior_count || edges != self.edges.len() {
            return Err(Error::InvalidInput("vertex or edge count violates the Euler relations".into()));
        }
        for split in self.splits() {
            let comp = self.components.iter().find(|c| c.contains(&split[0])).unwrap();
            let local: Vec<usize> = split.iter().map(|l| comp.binary_search(l).unwrap()).collect();
            if !is_cyclic_interval(&local, comp.len()) {
                return Err(Error::InvalidInput(format!("split {split:?} crosses")));
            }
        }
        if !blocks_noncrossing(&self.components) {
            return Err(Error::InvalidInput("components cross".into()));
        }
        Ok(())
    }
}

/// Whether `set` (sorted) is a contiguous run of `0..k` read cyclically.
pub fn is_cyclic_interval(set: &[usize], k: usize) -> bool {
    if set.is_empty() || set.len() >= k {
        return true;
    }
    let inside = |i: usize| set.binary_search(&(i % k)).is_ok();
    let starts = (0..k).filter(|&i| inside(i) && !inside(i + k - 1)).count();
    starts == 1
}

/// Whether no two blocks interleave as `a < b < c < d` with `a, c` in one block and `b, d` in another.
pub fn blocks_noncrossing(blocks: &[Vec<usize>]) -> bool {
    for (i, x) in blocks.iter().enumerate() {
        for y in &blocks[i + 1..] {
            for &a in x {
                for &c in x {
                    if c <= a {
                        continue;
                    }
                    let inner = y.iter().any(|&b| a < b && b < c);
                    let outer = y.iter().any(|&d| d < a || d > c);
                    if inner && outer {
                        return false;
                    }
                }
            }
        }
    }
    true
}

enum Binary {
    Leaf(usize),
    Node(Box<Binary>, Box<Binary>),
}

/// Planar full binary trees with the given leaves in order.
fn binary_trees(leaves: &[usize]) -> Vec<Binary> {
    if leaves.len() == 1 {
        return vec![Binary::Leaf(leaves[0])];
    }
    let mut out = Vec::new();
    for split in 1..leaves.len() {
        let right = binary_trees(&leaves[split..]);
        for l in binary_trees(&leaves[..split]) {
            for r in &right {
                out.push(Binary::Node(Box::new(clone_tree(&l)), Box::new(clone_tree(r))));
            }
        }
    }
    out
}

fn clone_tree(t: &Binary) -> Binary {
    match t {
        Binary::Leaf(l) => Binary::Leaf(*l),
        Binary::Node(a, b) => Binary::Node(Box::new(clone_tree(a)), Box::new(clone_tree(b))),
    }
}

/// Append the edges of `tree`, labelling interior nodes in post-order from `next`.
fn emit(tree: &Binary, next: &mut usize, edges: &mut Vec<(usize, usize)>) -> usize {
    match tree {
        Binary::Leaf(l) => *l,
        Binary::Node(a, b) => {
            let left = emit(a, next, edges);
            let right = emit(b, next, edges);
            let id = *next;
            *next += 1;
            edges.push((id, left));
            edges.push((id, right));
            id
        }
    }
}

/// All noncrossing trivalent trees on the given leaves (sorted), with interior
/// labels starting at `next`.
fn trees_on_block(leaves: &[usize], next: usize) -> Vec<Vec<(usize, usize)>> {
    let m = leaves.len();
    if m == 2 {
        return vec![vec![(leaves[0], leaves[1])]];
    }
    binary_trees(&leaves[..m - 1])
        .iter()
        .map(|t| {
            let mut edges = Vec::with_capacity(2 * m - 3);
            let mut label = next;
            let root = emit(t, &mut label, &mut edges);
            edges.push((root, leaves[m - 1]));
            edges
        })
        .collect()
}

/// Noncrossing partitions of `items` into blocks with sizes in `[2, max_block]`.
fn noncrossing_partitions(items: &[usize], max_block: usize) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    extend_block(vec![items[0]], &items[1..], max_block, &mut out);
    out
}

fn extend_block(block: Vec<usize>, rest: &[usize], max_block: usize, out: &mut Vec<Vec<Vec<usize>>>) {
    if block.len() >= 2 {
        for tail in noncrossing_partitions(rest, max_block) {
            let mut p = vec![block.clone()];
            p.extend(tail);
            out.push(p);
        }
    }
    if block.len() == max_block {
        return;
    }
    for j in 0..rest.len() {
        let gaps = noncrossing_partitions(&rest[..j], max_block);
        if gaps.is_empty() {
            continue;
        }
        let mut next = block.clone();
        next.push(rest[j]);
        let mut sub = Vec::new();
        extend_block(next, &rest[j + 1..], max_block, &mut sub);
        for gap in &gaps {
            for s in &sub {
                let mut p = vec![s[0].clone()];
                p.extend(gap.iter().cloned());
                p.extend(s[1..].iter().cloned());
                out.push(p);
            }
        }
    }
}

fn forest(k: usize, blocks: &[Vec<usize>]) -> Vec<Topology> {
    let mut partial: Vec<(Vec<(usize, usize)>, usize)> = vec![(Vec::new(), k)];
    for block in blocks {
        let mut next = Vec::new();
        for (edges, label) in &partial {
            for tree in trees_on_block(block, *label) {
                next.push(([edges.clone(), tree].concat(), label + block.len() - 2));
            }
        }
        partial = next;
    }
    let mut components = blocks.to_vec();
    components.sort();
    partial
        .into_iter()
        .map(|(edges, label)| Topology {
            leaf_count: k,
            interior_count: label - k,
            edges,
            components: components.clone(),
        })
        .collect()
}

/// All noncrossing topologies of the requested mode in canonical order:
/// sorted by leaf blocks, then by the sorted list of splits.
pub fn enumerate_topologies(k: usize, mode: Mode) -> Result<Vec<Topology>> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 boundary points, got {k}")));
    }
    let all: Vec<usize> = (0..k).collect();
    let partitions = match mode {
        Mode::Connected => vec![vec![all]],
        Mode::Matchings => {
            if k % 2 == 1 {
                return Err(Error::InvalidInput(format!("no perfect matching on {k} points")));
            }
            noncrossing_partitions(&all, 2)
        }
        Mode::Forests => noncrossing_partitions(&all, k),
    };
    let mut out: Vec<(Vec<Vec<usize>>, Vec<Vec<usize>>, Topology)> = partitions
        .iter()
        .flat_map(|p| forest(k, p))
        .map(|t| (t.components.clone(), t.splits(), t))
        .collect();
    out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    out.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    Ok(out.into_iter().map(|(_, _, t)| t).collect())
}

/// The Catalan number `C_n`.
pub fn catalan(n: usize) -> usize {
    (0..n).fold(1usize, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}
