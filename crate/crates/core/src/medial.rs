//! The directed medial graph: one vertex per map edge and an arc
//! `e(d) → e(σ(d))` for every dart `d`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::{determinant, IntMatrix};
use crate::map::{edge_of, CombMap};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MedialDigraph {
    labels: Vec<Label>,
    /// `arcs[u][v]` is the number of arcs from `u` to `v`.
    arcs: Vec<Vec<u32>>,
}

pub fn medial_digraph(m: &CombMap) -> Result<MedialDigraph> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = m.edge_count();
    let mut arcs = vec![vec![0u32; n]; n];
    for d in 0..m.dart_count() {
        arcs[edge_of(d)][edge_of(m.sigma_perm().apply(d))] += 1;
    }
    Ok(MedialDigraph {
        labels: m.labels().to_vec(),
        arcs,
    })
}

impl MedialDigraph {
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self, from: usize, to: usize) -> u32 {
        self.arcs[from][to]
    }

    /// Every arc as a `(tail, head)` label pair, with multiplicity.
    pub fn arc_list(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::new();
        for (u, row) in self.arcs.iter().enumerate() {
            for (v, &k) in row.iter().enumerate() {
                for _ in 0..k {
                    out.push((self.labels[u].clone(), self.labels[v].clone()));
                }
            }
        }
        out
    }

    pub fn out_degree(&self, v: usize) -> u32 {
        self.arcs[v].iter().sum()
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        self.arcs.iter().map(|row| row[v]).sum()
    }

    fn index(&self, label: &Label) -> Result<usize> {
        self.labels
            .binary_search(label)
            .map_err(|_| Error::UnknownVertex(label.clone()))
    }

    /// `Δ = diag(out-degree) − Adj`, rows indexed by arc tails.
    pub fn laplacian(&self) -> IntMatrix {
        let n = self.vertex_count();
        let entries = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| {
                        let diag = if u == v {
                            i64::from(self.out_degree(u))
                        } else {
                            0
                        };
                        BigInt::from(diag - i64::from(self.arcs[u][v]))
                    })
                    .collect()
            })
            .collect();
        IntMatrix::square(self.labels.clone(), entries)
    }

    /// `Δ^q`: the Laplacian without the row and column of `q`.
    pub fn reduced_laplacian(&self, q: &Label) -> Result<IntMatrix> {
        let k = self.index(q)?;
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&i| i != k).collect();
        Ok(self.laplacian().select(&keep, &keep))
    }

    /// Number of spanning arborescences oriented towards `q`.
    pub fn arborescence_count(&self, q: &Label) -> Result<BigInt> {
        Ok(determinant(&self.reduced_laplacian(q)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::smith_normal_form;
    use crate::map::{edge_set, make_map, Dart, Sign};

    fn map(text: &str) -> CombMap {
        let cycles: Vec<Vec<Dart>> = text
            .trim_matches(|c| c == '(' || c == ')')
            .split(")(")
            .map(|c| {
                c.split_whitespace()
                    .map(|tok| {
                        let (l, s) = tok.split_at(tok.len() - 1);
                        Dart::new(l, if s == "+" { Sign::Plus } else { Sign::Minus })
                    })
                    .collect()
            })
            .collect();
        make_map(&cycles).unwrap()
    }

    fn ex1() -> CombMap {
        map("(a- b+ c- b- d-)(a+ c+ d+)")
    }

    #[test]
    fn ex1_laplacian() {
        let d = medial_digraph(&ex1()).unwrap();
        let lap = d.laplacian();
        assert_eq!(
            lap.to_i64_rows(),
            [
                [2, -1, -1, 0],
                [0, 2, -1, -1],
                [0, -1, 2, -1],
                [-2, 0, 0, 2]
            ]
        );
        let snf = smith_normal_form(&lap);
        assert_eq!(snf.diagonal(), [1, 1, 6, 0].map(BigInt::from));
        let a = Label::from("a");
        assert_eq!(d.reduced_laplacian(&a).unwrap().nrows(), 3);
        assert_eq!(d.arborescence_count(&a).unwrap(), BigInt::from(6));
        for v in 0..4 {
            assert_eq!((d.in_degree(v), d.out_degree(v)), (2, 2));
        }
        assert_eq!(
            d.reduced_laplacian(&Label::from("z")),
            Err(Error::UnknownVertex(Label::from("z")))
        );
    }

    #[test]
    fn single_loop() {
        let d = medial_digraph(&map("(e+ e-)")).unwrap();
        assert_eq!(d.arc_list().len(), 2);
        assert_eq!(d.arc_count(0, 0), 2);
        assert_eq!(d.laplacian().to_i64_rows(), [[0]]);
        assert_eq!(
            d.arborescence_count(&Label::from("e")).unwrap(),
            BigInt::from(1)
        );
    }

    #[test]
    fn invariant_under_partial_duality() {
        let m = ex1();
        let d = medial_digraph(&m).unwrap();
        assert_eq!(
            medial_digraph(&m.partial_dual(&edge_set(["c"])).unwrap()).unwrap(),
            d
        );
        assert_eq!(medial_digraph(&m.dual()).unwrap(), d);
    }
}
