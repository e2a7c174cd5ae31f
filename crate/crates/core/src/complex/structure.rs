use std::collections::{BTreeSet, HashMap, HashSet};

use super::{PureComplex, Simplex};
use crate::error::{Error, Result};

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Maximal strongly connected subcomplexes, ordered by their smallest facet.
///
/// Two facets are in one component when a chain of facets links them with consecutive
/// facets sharing a (d−1)-face.
pub fn strong_components(x: &PureComplex) -> Vec<PureComplex> {
    let facets: Vec<&Simplex> = x.facets().iter().collect();
    let mut uf = UnionFind::new(facets.len());
    let mut owner: HashMap<Simplex, usize> = HashMap::new();
    for (i, f) in facets.iter().enumerate() {
        for face in f.boundary_faces() {
            match owner.get(&face) {
                Some(&j) => uf.union(i, j),
                None => {
                    owner.insert(face, i);
                }
            }
        }
    }
    let mut groups: Vec<Vec<Simplex>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, f) in facets.iter().enumerate() {
        let r = uf.find(i);
        let g = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push((*f).clone());
    }
    groups.into_iter().map(|g| x.sub(g)).collect()
}

/// True iff X is a d-tree: strongly connected with f_0 = f_d + d.
pub fn is_d_tree(x: &PureComplex) -> bool {
    x.f_d() > 0 && strong_components(x).len() == 1 && x.f_0() == x.f_d() + x.dim()
}

/// Runs the deterministic generating process of a strongly connected X and keeps only the
/// facets whose step brings in a fresh vertex.
///
/// The first facet (colex-smallest) seeds the process; afterwards the colex-first remaining
/// facet that contains an already present (d−1)-face is added. The result spans every vertex
/// of X and satisfies f_0 = f_d + d.
pub fn d_forest_extract(x: &PureComplex) -> Result<PureComplex> {
    if x.f_d() == 0 {
        return Ok(x.sub([]));
    }
    if strong_components(x).len() != 1 {
        return Err(Error::NotStronglyConnected);
    }
    let mut remaining: Vec<&Simplex> = x.facets().iter().collect();
    let first = remaining.remove(0);
    let mut present: HashSet<Simplex> = first.boundary_faces().collect();
    let mut seen: BTreeSet<u32> = first.vertices().iter().copied().collect();
    let mut kept = vec![first.clone()];
    while !remaining.is_empty() {
        let i = remaining
            .iter()
            .position(|f| f.boundary_faces().any(|g| present.contains(&g)))
            .expect("strongly connected complex always has a next facet");
        let f = remaining.remove(i);
        let fresh = f.vertices().iter().any(|v| !seen.contains(v));
        if fresh {
            seen.extend(f.vertices().iter().copied());
            kept.push(f.clone());
        }
        present.extend(f.boundary_faces());
    }
    Ok(x.sub(kept))
}
