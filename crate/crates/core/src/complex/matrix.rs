use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::{sign_adjacent, PureComplex, Simplex};
use crate::error::{Error, Result};

/// A dense symmetric integer matrix indexed by simplices in colex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMatrix {
    index: Vec<Simplex>,
    entries: Vec<i32>,
}

impl SignedMatrix {
    pub fn zeros(index: Vec<Simplex>) -> Self {
        let n = index.len();
        SignedMatrix {
            index,
            entries: vec![0; n * n],
        }
    }

    pub fn index(&self) -> &[Simplex] {
        &self.index
    }

    pub fn rows(&self) -> usize {
        self.index.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.entries[i * self.rows() + j]
    }

    pub(crate) fn set_sym(&mut self, i: usize, j: usize, v: i32) {
        let n = self.rows();
        self.entries[i * n + j] = v;
        self.entries[j * n + i] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.rows();
        (0..n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        let n = self.rows();
        DMatrix::from_fn(n, n, |i, j| self.get(i, j) as f64)
    }

    /// Text form: `rows cols`, then `i j v` for each nonzero upper-triangle entry (1-based).
    pub fn to_text(&self) -> String {
        let n = self.rows();
        let mut out = format!("{n} {n}\n");
        for i in 0..n {
            for j in i..n {
                let v = self.get(i, j);
                if v != 0 {
                    let _ = writeln!(out, "{} {} {}", i + 1, j + 1, v);
                }
            }
        }
        out
    }

    /// Parses the text form. The simplex index is not stored in the file, so the caller supplies it.
    pub fn from_text(text: &str, index: Vec<Simplex>) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let dims: Vec<usize> = parse_fields(header, 1)?;
        if dims.len() != 2 || dims[0] != dims[1] || dims[0] != index.len() {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header {header:?} does not match an index of size {}", index.len()),
            });
        }
        let mut m = SignedMatrix::zeros(index);
        for (ln, line) in lines {
            let f: Vec<i64> = parse_fields(line, ln + 1)?;
            let bad = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.into(),
            };
            if f.len() != 3 {
                return Err(bad("expected `i j v`"));
            }
            let (i, j) = (f[0] as usize, f[1] as usize);
            if f[0] < 1 || f[1] < 1 || i > m.rows() || j > m.rows() || i > j {
                return Err(bad("entry outside the upper triangle"));
            }
            m.set_sym(i - 1, j - 1, f[2] as i32);
        }
        Ok(m)
    }
}

fn parse_fields<T: std::str::FromStr>(line: &str, ln: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("bad number {t:?}"),
            })
        })
        .collect()
}

fn check_dim(x: &PureComplex, k: usize) -> Result<()> {
    if k >= x.dim() {
        return Err(Error::invalid(format!(
            "dimension {k} needs {k}- and {}-simplices but the complex has dimension {}",
            k + 1,
            x.dim()
        )));
    }
    Ok(())
}

/// A_k(X): entry (σ,σ') is sgn(σ,σ') when σ∪σ' is a (k+1)-simplex of X, else 0.
pub fn adjacency_matrix(x: &PureComplex, k: usize) -> Result<SignedMatrix> {
    check_dim(x, k)?;
    let index = x.faces(k);
    let pos: HashMap<&Simplex, usize> = index.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = SignedMatrix::zeros(index.clone());
    for tau in x.faces(k + 1) {
        let faces: Vec<Simplex> = tau.boundary_faces().collect();
        for a in 0..faces.len() {
            for b in a + 1..faces.len() {
                let s = sign_adjacent(&faces[a], &faces[b])?;
                m.set_sym(pos[&faces[a]], pos[&faces[b]], s as i32);
            }
        }
    }
    Ok(m)
}

/// L_k^up(X) = D_k(X) − A_k(X), with D_k the diagonal of (k+1)-coface counts.
pub fn up_laplacian(x: &PureComplex, k: usize) -> Result<SignedMatrix> {
    let mut m = adjacency_matrix(x, k)?;
    let n = m.rows();
    let pos: HashMap<Simplex, usize> = m.index.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut degree = vec![0i32; n];
    for tau in x.faces(k + 1) {
        for f in tau.boundary_faces() {
            degree[pos[&f]] += 1;
        }
    }
    for v in &mut m.entries {
        *v = -*v;
    }
    for (i, d) in degree.into_iter().enumerate() {
        m.entries[i * n + i] = d;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(d: usize, f: &[&[u32]]) -> PureComplex {
        PureComplex::from_facets(d, f).unwrap()
    }

    #[test]
    fn triangle_graph_adjacency() {
        let m = adjacency_matrix(&complex(1, &[&[1, 2], &[1, 3], &[2, 3]]), 0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), if i == j { 0 } else { 1 });
            }
        }
    }

    #[test]
    fn single_triangle_edges() {
        // Index in colex order: {1,2}, {1,3}, {2,3}.
        let m = adjacency_matrix(&complex(2, &[&[1, 2, 3]]), 1).unwrap();
        assert_eq!(m.index()[1].vertices(), &[1, 3]);
        assert_eq!(m.get(0, 1), 1);
        assert_eq!(m.get(0, 2), -1);
        assert_eq!(m.get(1, 2), 1);
        assert!(m.is_symmetric());
        assert!((0..3).all(|i| m.get(i, i) == 0));
    }

    #[test]
    fn laplacian_of_an_edge() {
        let l = up_laplacian(&complex(1, &[&[1, 2]]), 0).unwrap();
        assert_eq!(l.entries, vec![1, -1, -1, 1]);
        let t = up_laplacian(&complex(1, &[&[1, 2], &[1, 3], &[2, 3]]), 0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.get(i, j), if i == j { 2 } else { -1 });
            }
        }
    }

    #[test]
    fn laplacian_plus_adjacency_is_degree() {
        let x = complex(2, &[&[1, 2, 3], &[1, 2, 4], &[2, 4, 5], &[1, 3, 5]]);
        let a = adjacency_matrix(&x, 1).unwrap();
        let l = up_laplacian(&x, 1).unwrap();
        for i in 0..a.rows() {
            for j in 0..a.rows() {
                let s = a.get(i, j) + l.get(i, j);
                if i != j {
                    assert_eq!(s, 0);
                } else {
                    let deg = x.facets().iter().filter(|f| a.index()[i].is_face_of(f)).count();
                    assert_eq!(s, deg as i32);
                }
            }
        }
    }

    #[test]
    fn entries_nonzero_exactly_on_facet_pairs() {
        let x = complex(2, &[&[1, 2, 3], &[2, 3, 4], &[1, 4, 5]]);
        let a = adjacency_matrix(&x, 1).unwrap();
        for i in 0..a.rows() {
            for j in 0..a.rows() {
                let u = a.index()[i].union(&a.index()[j]);
                assert_eq!(a.get(i, j) != 0, x.contains_facet(&u), "{i} {j}");
            }
        }
    }

    #[test]
    fn dimension_guard() {
        let x = complex(2, &[&[1, 2, 3]]);
        assert!(adjacency_matrix(&x, 2).is_err());
        assert!(up_laplacian(&x, 3).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let x = complex(2, &[&[1, 2, 3], &[2, 3, 4]]);
        let a = adjacency_matrix(&x, 1).unwrap();
        let back = SignedMatrix::from_text(&a.to_text(), a.index().to_vec()).unwrap();
        assert_eq!(a, back);
        assert!(SignedMatrix::from_text("2 2\n2 1 1\n", x.faces(1)[..2].to_vec()).is_err());
    }
}
