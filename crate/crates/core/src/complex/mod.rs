//! Simplices, pure complexes and their structural predicates.

mod bracelet;
mod io;
mod matrix;
mod simplex;
mod structure;

pub use bracelet::{classify_bracelet, BraceletReport, Pendant};
pub use io::{parse_complex, write_complex};
pub use matrix::{adjacency_matrix, up_laplacian, SignedMatrix};
pub use simplex::{colex_subsets, sign_adjacent, sign_face, Simplex, Vertex};
pub use structure::{d_forest_extract, is_d_tree, strong_components};

pub(crate) use simplex::{binomial, colex_rank};

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A pure `dim`-dimensional complex given by its facets.
///
/// Lower faces are implied. When `skeleton` is `Some(n)` the complex additionally
/// contains every simplex of dimension `< dim` on the vertex set {1..=n}, which is the
/// shape of a Linial–Meshulam complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureComplex {
    dim: usize,
    facets: BTreeSet<Simplex>,
    skeleton: Option<usize>,
}

impl PureComplex {
    pub fn new(dim: usize, facets: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let facets: BTreeSet<Simplex> = facets.into_iter().collect();
        if let Some(bad) = facets.iter().find(|f| f.len() != dim + 1) {
            return Err(Error::invalid(format!(
                "facet {bad} has {} vertices, expected {}",
                bad.len(),
                dim + 1
            )));
        }
        Ok(PureComplex {
            dim,
            facets,
            skeleton: None,
        })
    }

    /// Convenience constructor from raw vertex lists.
    pub fn from_facets(dim: usize, facets: &[&[Vertex]]) -> Result<Self> {
        let fs = facets
            .iter()
            .map(|f| Simplex::new(f.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, fs)
    }

    /// The complete `d`-dimensional complex on {1..=n}.
    pub fn complete(n: usize, d: usize) -> Self {
        PureComplex {
            dim: d,
            facets: colex_subsets(n, d + 1).into_iter().collect(),
            skeleton: Some(n),
        }
    }

    /// Declares the full `(dim−1)`-skeleton on {1..=n} as part of the complex.
    pub fn with_skeleton(mut self, n: usize) -> Result<Self> {
        if let Some(f) = self.facets.iter().find(|f| f.vertices().iter().any(|&v| v as usize > n)) {
            return Err(Error::invalid(format!("facet {f} has a vertex above n = {n}")));
        }
        self.skeleton = Some(n);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn skeleton(&self) -> Option<usize> {
        self.skeleton
    }

    pub fn facets(&self) -> &BTreeSet<Simplex> {
        &self.facets
    }

    pub fn contains_facet(&self, s: &Simplex) -> bool {
        self.facets.contains(s)
    }

    /// f_d: number of facets.
    pub fn f_d(&self) -> usize {
        self.facets.len()
    }

    /// Vertices covered by facets (the skeleton is ignored).
    pub fn facet_vertices(&self) -> BTreeSet<Vertex> {
        self.facets
            .iter()
            .flat_map(|f| f.vertices().iter().copied())
            .collect()
    }

    /// f_0 of the complex generated by the facets.
    pub fn f_0(&self) -> usize {
        self.facet_vertices().len()
    }

    /// All `k`-dimensional simplices in colex order.
    pub fn faces(&self, k: usize) -> Vec<Simplex> {
        if k == self.dim {
            return self.facets.iter().cloned().collect();
        }
        if k > self.dim {
            return Vec::new();
        }
        if let Some(n) = self.skeleton {
            return colex_subsets(n, k + 1);
        }
        let mut out = BTreeSet::new();
        for f in &self.facets {
            collect_subsets(f.vertices(), k + 1, &mut out);
        }
        out.into_iter().collect()
    }

    /// The complex generated by `facets`, of the same dimension and without a skeleton.
    pub(crate) fn sub(&self, facets: impl IntoIterator<Item = Simplex>) -> PureComplex {
        PureComplex {
            dim: self.dim,
            facets: facets.into_iter().collect(),
            skeleton: None,
        }
    }

    /// Applies a vertex relabeling to every facet.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Result<PureComplex> {
        let facets = self
            .facets
            .iter()
            .map(|s| s.map(&f))
            .collect::<Result<Vec<_>>>()?;
        PureComplex::new(self.dim, facets)
    }
}

fn collect_subsets(vs: &[Vertex], size: usize, out: &mut BTreeSet<Simplex>) {
    fn rec(vs: &[Vertex], size: usize, start: usize, cur: &mut Vec<Vertex>, out: &mut BTreeSet<Simplex>) {
        if cur.len() == size {
            out.insert(Simplex::from_sorted_unchecked(cur.clone()));
            return;
        }
        for i in start..vs.len() {
            if vs.len() - i < size - cur.len() {
                break;
            }
            cur.push(vs[i]);
            rec(vs, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(vs, size, 0, &mut Vec::with_capacity(size), out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_of_a_triangle() {
        let x = PureComplex::from_facets(2, &[&[1, 2, 3]]).unwrap();
        assert_eq!(x.faces(1).len(), 3);
        assert_eq!(x.faces(0).len(), 3);
        assert_eq!(x.faces(2).len(), 1);
        assert!(x.faces(3).is_empty());
    }

    #[test]
    fn skeleton_adds_all_lower_faces() {
        let x = PureComplex::new(2, []).unwrap().with_skeleton(5).unwrap();
        assert_eq!(x.faces(1).len(), 10);
        assert_eq!(x.f_d(), 0);
    }

    #[test]
    fn rejects_wrong_facet_size() {
        assert!(PureComplex::from_facets(2, &[&[1, 2]]).is_err());
        assert!(PureComplex::from_facets(1, &[&[1, 9]]).unwrap().with_skeleton(5).is_err());
    }
}
