//! Exact neighbor joining.
//!
//! On a tree metric every joined pair is a cherry of some binary resolution
//! of the tree, so the computed lengths are exact. Zero-length internal
//! edges from that resolution are contracted afterwards.

use num_traits::{Signed, Zero};

use super::{tree_metric_certificate, DistanceMatrix, PhyloError, PhyloTree};
use crate::rational::{int, Rational};

/// The tree realising `d`, which must be a tree metric.
pub fn reconstruct_tree(d: &DistanceMatrix) -> Result<PhyloTree, PhyloError> {
    if let Some(c) = tree_metric_certificate(d) {
        return Err(PhyloError::NotTreeMetric(c));
    }
    let n = d.n();
    if n < 2 {
        return Err(PhyloError::InvalidTree("need at least two taxa".into()));
    }
    if n == 2 {
        return PhyloTree::new(d.taxa().to_vec(), 2, vec![(0, 1, d.get(0, 1).clone())]);
    }

    let total = 2 * n - 2;
    let mut dist = vec![vec![Rational::zero(); total]; total];
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = d.get(i, j).clone();
        }
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut edges: Vec<(usize, usize, Rational)> = Vec::with_capacity(total - 1);
    let mut next = n;
    while active.len() > 3 {
        let r = active.len();
        let sums: Vec<Rational> =
            active.iter().map(|&i| active.iter().map(|&k| &dist[i][k]).sum()).collect();
        let weight = int(r as i64 - 2);
        let mut best: Option<(Rational, usize, usize)> = None;
        for x in 0..r {
            for y in x + 1..r {
                let q = &weight * &dist[active[x]][active[y]] - &sums[x] - &sums[y];
                if best.as_ref().is_none_or(|(b, _, _)| q < *b) {
                    best = Some((q, x, y));
                }
            }
        }
        let (_, x, y) = best.expect("at least four active nodes");
        let (a, b) = (active[x], active[y]);
        let dab = dist[a][b].clone();
        let la = &dab / int(2) + (&sums[x] - &sums[y]) / (int(2) * &weight);
        let lb = &dab - &la;
        let u = next;
        next += 1;
        for &k in &active {
            let v = (&dist[a][k] + &dist[b][k] - &dab) / int(2);
            dist[u][k] = v.clone();
            dist[k][u] = v;
        }
        edges.push((a, u, la));
        edges.push((b, u, lb));
        active.retain(|&k| k != a && k != b);
        active.push(u);
    }
    let [a, b, c] = active[..] else { unreachable!("joining stops at three nodes") };
    let centre = next;
    next += 1;
    let half = |x: usize, y: usize, z: usize| (&dist[x][y] + &dist[x][z] - &dist[y][z]) / int(2);
    edges.push((a, centre, half(a, b, c)));
    edges.push((b, centre, half(b, a, c)));
    edges.push((c, centre, half(c, a, b)));

    // contract zero-length internal edges
    let mut parent: Vec<usize> = (0..next).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        let mut root = v;
        while parent[root] != root {
            root = parent[root];
        }
        parent[v] = root;
        root
    }
    for (a, b, len) in &edges {
        if len.is_negative() {
            return Err(PhyloError::InvalidTree("negative edge length during joining".into()));
        }
        if len.is_zero() {
            if let Some(&leaf) = [a, b].into_iter().find(|&&v| v < n) {
                return Err(PhyloError::ZeroPendant(d.taxa()[leaf].clone()));
            }
            let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut index = vec![usize::MAX; next];
    let mut count = n;
    for v in 0..next {
        let root = find(&mut parent, v);
        if v < n {
            index[v] = v;
        } else if root == v {
            index[v] = count;
            count += 1;
        }
    }
    let kept = edges
        .into_iter()
        .filter(|(_, _, len)| !len.is_zero())
        .map(|(a, b, len)| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            (index[ra], index[rb], len)
        })
        .collect();
    let tree = PhyloTree::new(d.taxa().to_vec(), count, kept)?;
    if tree.tree_to_metric() != *d {
        return Err(PhyloError::InvalidTree("reconstruction does not reproduce the input".into()));
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::Certificate;
    use crate::rational::frac;
    use std::collections::BTreeSet;

    fn hmrc() -> DistanceMatrix {
        "H M R C\n4 4\n0 1.1 1.0 1.4\n1.1 0 0.3 1.3\n1.0 0.3 0 1.2\n1.4 1.3 1.2 0\n".parse().unwrap()
    }

    #[test]
    fn recovers_the_hmrc_tree() {
        let t = reconstruct_tree(&hmrc()).unwrap();
        let pendants: Vec<Rational> = (0..4).map(|i| t.pendant_length(i).clone()).collect();
        assert_eq!(pendants, vec![frac(6, 10), frac(2, 10), frac(1, 10), frac(8, 10)]);
        let split: BTreeSet<String> = ["M", "R"].iter().map(|s| s.to_string()).collect();
        assert_eq!(t.splits()[&split], frac(3, 10));
        assert_eq!(t.edges().len(), 5);
    }

    #[test]
    fn two_taxa() {
        let d = DistanceMatrix::from_fn(DistanceMatrix::default_taxa(2), |_, _| int(5)).unwrap();
        let t = reconstruct_tree(&d).unwrap();
        assert_eq!(t.edges(), &[(0, 1, int(5))]);
    }

    #[test]
    fn star_contracts_to_one_node() {
        let d = DistanceMatrix::from_fn(DistanceMatrix::default_taxa(6), |_, _| int(2)).unwrap();
        let t = reconstruct_tree(&d).unwrap();
        assert_eq!(t.node_count(), 7);
        assert!((0..6).all(|i| *t.pendant_length(i) == int(1)));
    }

    #[test]
    fn leaf_on_a_path_is_rejected() {
        // b sits on the path from a to c
        let d = DistanceMatrix::from_fn(DistanceMatrix::default_taxa(3), |i, j| int((j - i) as i64)).unwrap();
        assert_eq!(reconstruct_tree(&d), Err(PhyloError::ZeroPendant("t2".into())));
    }

    #[test]
    fn non_tree_metric_carries_a_certificate() {
        let cycle = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]];
        let d = DistanceMatrix::from_fn(DistanceMatrix::default_taxa(4), |i, j| int(cycle[i][j])).unwrap();
        assert_eq!(
            reconstruct_tree(&d),
            Err(PhyloError::NotTreeMetric(Certificate::Quadruple([0, 1, 2, 3])))
        );
    }
}
