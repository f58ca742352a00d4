use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::{newick, DistanceMatrix, PhyloError};
use crate::rational::{format_rational, Rational};

/// An unrooted tree with positive edge lengths whose leaves are the taxa.
///
/// Nodes `0..taxa.len()` are the leaves, in taxon order; the remaining nodes
/// are internal and have degree at least three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhyloTree {
    taxa: Vec<String>,
    node_count: usize,
    edges: Vec<(usize, usize, Rational)>,
}

impl PhyloTree {
    pub fn new(taxa: Vec<String>, node_count: usize, edges: Vec<(usize, usize, Rational)>) -> Result<Self, PhyloError> {
        let invalid = |m: String| Err(PhyloError::InvalidTree(m));
        let n = taxa.len();
        if n < 2 {
            return invalid("need at least two taxa".into());
        }
        for (i, t) in taxa.iter().enumerate() {
            if taxa[..i].contains(t) {
                return Err(PhyloError::DuplicateTaxon(t.clone()));
            }
        }
        if node_count < n || edges.len() + 1 != node_count {
            return invalid(format!("{} edges cannot connect {node_count} nodes as a tree", edges.len()));
        }
        let mut degree = vec![0usize; node_count];
        for (a, b, len) in &edges {
            if *a >= node_count || *b >= node_count || a == b {
                return invalid(format!("bad edge ({a}, {b})"));
            }
            if !len.is_positive() {
                return invalid(format!("edge ({a}, {b}) has non-positive length {}", format_rational(len)));
            }
            degree[*a] += 1;
            degree[*b] += 1;
        }
        for (v, &deg) in degree.iter().enumerate() {
            if v < n && deg != 1 {
                return invalid(format!("taxon `{}` has degree {deg}", taxa[v]));
            }
            if v >= n && deg < 3 {
                return invalid(format!("internal node {v} has degree {deg}"));
            }
        }
        let tree = PhyloTree { taxa, node_count, edges };
        let mut seen = vec![false; node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let adjacency = tree.adjacency();
        while let Some(v) = stack.pop() {
            for &(w, _) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.contains(&false) {
            return invalid("graph is not connected".into());
        }
        Ok(tree)
    }

    pub fn taxa(&self) -> &[String] {
        &self.taxa
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Edges as `(node, node, length)`.
    pub fn edges(&self) -> &[(usize, usize, Rational)] {
        &self.edges
    }

    /// For each node, its `(neighbour, edge index)` pairs.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (e, (a, b, _)) in self.edges.iter().enumerate() {
            adj[*a].push((*b, e));
            adj[*b].push((*a, e));
        }
        adj
    }

    fn distances_from(&self, adj: &[Vec<(usize, usize)>], source: usize) -> Vec<Rational> {
        let mut dist = vec![Rational::zero(); self.node_count];
        let mut stack = vec![(source, usize::MAX)];
        while let Some((v, parent)) = stack.pop() {
            for &(w, e) in &adj[v] {
                if w != parent {
                    dist[w] = &dist[v] + &self.edges[e].2;
                    stack.push((w, v));
                }
            }
        }
        dist
    }

    /// Leaf-to-leaf path lengths.
    pub fn tree_to_metric(&self) -> DistanceMatrix {
        let adj = self.adjacency();
        let rows: Vec<Vec<Rational>> = (0..self.taxa.len())
            .map(|i| {
                let mut d = self.distances_from(&adj, i);
                d.truncate(self.taxa.len());
                d
            })
            .collect();
        DistanceMatrix::new(self.taxa.clone(), rows).expect("positive lengths give a valid distance matrix")
    }

    /// Leaves on the far side of each edge, as seen from `root`.
    fn leaves_below(&self, adj: &[Vec<(usize, usize)>], root: usize) -> Vec<BTreeSet<usize>> {
        let mut below = vec![BTreeSet::new(); self.edges.len()];
        fn walk(
            tree: &PhyloTree,
            adj: &[Vec<(usize, usize)>],
            v: usize,
            parent: usize,
            below: &mut [BTreeSet<usize>],
        ) -> BTreeSet<usize> {
            let mut leaves = BTreeSet::new();
            if v < tree.taxa.len() {
                leaves.insert(v);
            }
            for &(w, e) in &adj[v] {
                if w != parent {
                    let sub = walk(tree, adj, w, v, below);
                    leaves.extend(sub.iter().copied());
                    below[e] = sub;
                }
            }
            leaves
        }
        walk(self, adj, root, usize::MAX, &mut below);
        below
    }

    /// Each edge as the set of taxon labels on the side without the
    /// alphabetically first taxon, mapped to its length.
    pub fn splits(&self) -> BTreeMap<BTreeSet<String>, Rational> {
        let root = (0..self.taxa.len()).min_by_key(|&i| &self.taxa[i]).expect("at least two taxa");
        let adj = self.adjacency();
        self.leaves_below(&adj, root)
            .into_iter()
            .zip(&self.edges)
            .map(|(side, (_, _, len))| (side.into_iter().map(|i| self.taxa[i].clone()).collect(), len.clone()))
            .collect()
    }

    /// Same taxa, same unrooted topology and the same edge lengths.
    pub fn same_as(&self, other: &PhyloTree) -> bool {
        let labels = |t: &PhyloTree| t.taxa.iter().cloned().collect::<BTreeSet<_>>();
        labels(self) == labels(other) && self.splits() == other.splits()
    }

    /// Pendant edge length of taxon `i`.
    pub fn pendant_length(&self, i: usize) -> &Rational {
        let (_, _, len) = self.edges.iter().find(|(a, b, _)| *a == i || *b == i).expect("leaves have an edge");
        len
    }

    /// Newick text rooted at the first taxon, children in order of their
    /// smallest taxon index.
    pub fn to_newick(&self) -> String {
        let adj = self.adjacency();
        let below = self.leaves_below(&adj, 0);
        let first_leaf = |e: usize| *below[e].first().expect("every subtree holds a leaf");
        fn write(
            tree: &PhyloTree,
            adj: &[Vec<(usize, usize)>],
            first_leaf: &dyn Fn(usize) -> usize,
            v: usize,
            parent: usize,
            out: &mut String,
        ) {
            let mut children: Vec<(usize, usize)> = adj[v].iter().copied().filter(|&(w, _)| w != parent).collect();
            children.sort_by_key(|&(_, e)| first_leaf(e));
            if !children.is_empty() {
                out.push('(');
                for (k, &(w, e)) in children.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    write(tree, adj, first_leaf, w, v, out);
                    out.push(':');
                    out.push_str(&format_rational(&tree.edges[e].2));
                }
                out.push(')');
            }
            if v < tree.taxa.len() {
                out.push_str(&newick::quote_label(&tree.taxa[v]));
            }
        }
        let mut out = String::new();
        write(self, &adj, &first_leaf, 0, usize::MAX, &mut out);
        out.push(';');
        out
    }

    pub fn from_newick(text: &str) -> Result<PhyloTree, PhyloError> {
        newick::parse(text)
    }
}
