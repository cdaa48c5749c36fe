//! Plumbing graphs, their adjacency matrices, Spin^c labels and the
//! three-star parameters feeding the false-theta closed form.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{inertia, smith_normal_form, Inertia, SymMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: i64,
    pub weight: i64,
}

/// A weighted simple graph. Edges are stored as index pairs into the vertex
/// list, which keeps the input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

impl PlumbingGraph {
    /// Build from vertices and edges given by vertex id.
    pub fn new(vertices: Vec<Vertex>, edges: &[(i64, i64)]) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for v in &vertices {
            if !ids.insert(v.id) {
                return Err(Error::Parse(format!("duplicate vertex id {}", v.id)));
            }
        }
        let index = |id: i64| {
            vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| Error::Parse(format!("edge refers to unknown vertex id {id}")))
        };
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for &(x, y) in edges {
            if x == y {
                return Err(Error::Parse(format!("self-loop at vertex {x}")));
            }
            let (i, j) = (index(x)?, index(y)?);
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::Parse(format!("duplicate edge [{x}, {y}]")));
            }
            out.push((i, j));
        }
        Ok(PlumbingGraph { vertices, edges: out })
    }

    /// Convenience constructor: vertex ids are `0..weights.len()`.
    pub fn from_weights(weights: &[i64], edges: &[(i64, i64)]) -> Result<Self> {
        let vertices = weights
            .iter()
            .enumerate()
            .map(|(i, &weight)| Vertex { id: i as i64, weight })
            .collect();
        Self::new(vertices, edges)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph document: {e}")))?;
        Self::from_json(&doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        let verts = doc
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"vertices\" array".into()))?;
        let mut vertices = Vec::with_capacity(verts.len());
        for (k, v) in verts.iter().enumerate() {
            let id = v
                .get("id")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse(format!("vertex #{k}: missing or non-integer id")))?;
            let weight = v
                .get("weight")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse(format!("vertex {id}: non-integer weight {}", v.get("weight").unwrap_or(&Value::Null))))?;
            vertices.push(Vertex { id, weight });
        }
        let mut edges = Vec::new();
        if let Some(list) = doc.get("edges") {
            let list = list
                .as_array()
                .ok_or_else(|| Error::Parse("\"edges\" must be an array".into()))?;
            for e in list {
                let pair = e
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .and_then(|p| Some((p[0].as_i64()?, p[1].as_i64()?)))
                    .ok_or_else(|| Error::Parse(format!("malformed edge {e}")))?;
                edges.push(pair);
            }
        }
        Self::new(vertices, &edges)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|v| json!({"id": v.id, "weight": v.weight})).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(i, j)| json!([self.vertices[i].id, self.vertices[j].id])).collect::<Vec<_>>(),
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| v.weight).collect()
    }

    pub fn weight_sum(&self) -> i64 {
        self.vertices.iter().map(|v| v.weight).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for &(i, j) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    /// Indices of vertices of degree greater than two.
    pub fn high_degree_vertices(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 2)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn adjacency_rows(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut rows = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            rows[i][i] = v.weight;
        }
        for &(i, j) in &self.edges {
            rows[i][j] = 1;
            rows[j][i] = 1;
        }
        rows
    }

    pub fn adjacency_matrix(&self) -> SymMatrix {
        SymMatrix::from_rows_i64(&self.adjacency_rows())
    }

    pub fn inertia(&self) -> Inertia {
        inertia(&self.adjacency_matrix())
    }

    /// Whether `M^-1` restricted to the high-degree vertices is negative
    /// definite.
    pub fn weak_negativity(&self) -> Result<bool> {
        let inv = self.adjacency_matrix().inverse()?;
        let high = self.high_degree_vertices();
        if high.is_empty() {
            return Ok(true);
        }
        Ok(inertia(&inv.principal(&high)).is_negative_definite())
    }

    pub fn parity_vector(&self) -> Vec<i64> {
        self.degrees().iter().map(|d| (d % 2) as i64).collect()
    }

    /// Coset representatives of `(2Z^n + delta) / 2M Z^n`, canonicalized and
    /// sorted.
    pub fn spinc_labels(&self) -> Result<Vec<SpincLabel>> {
        let rows = self.adjacency_rows();
        let m = self.adjacency_matrix();
        let inv = m.inverse()?;
        let delta = self.parity_vector();
        let snf = smith_normal_form(&rows);
        let n = self.len();
        let dims: Vec<i64> = snf
            .diagonal
            .iter()
            .map(|d| d.to_i64().expect("Smith invariant fits in i64"))
            .collect();
        let mut out = BTreeSet::new();
        let mut z = vec![0i64; n];
        loop {
            // y = U^-1 z ranges over Z^n / M Z^n; the label is delta + 2y.
            let a: Vec<BigInt> = (0..n)
                .map(|i| {
                    let y: BigInt = (0..n).map(|j| &snf.u_inverse[i][j] * z[j]).sum();
                    BigInt::from(delta[i]) + y * 2
                })
                .collect();
            out.insert(canonical_representative(&m, &inv, &a));
            let mut k = 0;
            loop {
                if k == n {
                    let labels = out
                        .into_iter()
                        .map(|a| SpincLabel { a, delta: delta.clone() })
                        .collect();
                    return Ok(labels);
                }
                z[k] += 1;
                if z[k] < dims[k] {
                    break;
                }
                z[k] = 0;
                k += 1;
            }
        }
    }

    /// The label `a = delta mod 2M`, canonicalized.
    pub fn canonical_label(&self) -> Result<SpincLabel> {
        let delta = self.parity_vector();
        let a: Vec<BigInt> = delta.iter().map(|&d| BigInt::from(d)).collect();
        SpincLabel::new(self, a)
    }

    pub fn three_star_params(&self) -> Result<ThreeStarData> {
        ThreeStarData::from_graph(self)
    }
}

/// Reduce `a` to the fundamental parallelepiped of `2M`:
/// `a - 2M floor((2M)^-1 a)`.
fn canonical_representative(m: &SymMatrix, m_inv: &SymMatrix, a: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let ar: Vec<BigRational> = a.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let x: Vec<BigRational> = m_inv
        .mul_vec(&ar)
        .iter()
        .map(|t| BigRational::from_integer((t * &half).floor().to_integer()))
        .collect();
    let shift = m.mul_vec(&x);
    (0..n)
        .map(|i| &a[i] - (&shift[i] * BigInt::from(2)).to_integer())
        .collect()
}

/// A Spin^c structure, stored as its canonical representative in
/// `2Z^n + delta` modulo `2M Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpincLabel {
    pub a: Vec<BigInt>,
    pub delta: Vec<i64>,
}

impl SpincLabel {
    /// Validate parity against the graph and canonicalize.
    pub fn new(g: &PlumbingGraph, a: Vec<BigInt>) -> Result<Self> {
        let delta = g.parity_vector();
        if a.len() != delta.len() {
            return Err(Error::Precondition(format!(
                "label has {} entries, graph has {} vertices",
                a.len(),
                delta.len()
            )));
        }
        for (i, (x, d)) in a.iter().zip(&delta).enumerate() {
            if x.mod_floor(&BigInt::from(2)) != BigInt::from(*d) {
                return Err(Error::Precondition(format!(
                    "label entry {i} has the wrong parity (vertex degree parity {d})"
                )));
            }
        }
        let m = g.adjacency_matrix();
        let inv = m.inverse()?;
        Ok(SpincLabel { a: canonical_representative(&m, &inv, &a), delta })
    }

    pub fn from_i64(g: &PlumbingGraph, a: &[i64]) -> Result<Self> {
        Self::new(g, a.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Whether `self - other` lies in `2M Z^n`.
    pub fn equivalent(&self, other: &SpincLabel, m_inv: &SymMatrix) -> bool {
        let diff: Vec<BigRational> = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| BigRational::from_integer(x - y) / BigInt::from(2))
            .collect();
        m_inv.mul_vec(&diff).iter().all(|t| t.is_integer())
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.a.iter().map(|x| x.to_i64().expect("label entry fits in i64")).collect()
    }
}

/// Parameters of the false-theta closed form for a four-node three-star
/// graph. `b` and `c` list the three legs in input order, then the centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeStarData {
    pub centre: usize,
    pub legs: [usize; 3],
    pub m: BigRational,
    pub b: [BigRational; 4],
    pub c: [BigRational; 4],
    pub d: BigRational,
    pub c_pref: BigRational,
    /// `(-1)^pi`.
    pub sign: i64,
    pub a_matrix: SymMatrix,
    pub inertia: Inertia,
    pub weight_sum: i64,
}

impl ThreeStarData {
    pub fn from_graph(g: &PlumbingGraph) -> Result<Self> {
        if g.len() != 4 || g.edges().len() != 3 {
            return Err(Error::Precondition(format!(
                "three-star closed form needs four vertices and three edges, got {} and {}",
                g.len(),
                g.edges().len()
            )));
        }
        let deg = g.degrees();
        let Some(centre) = deg.iter().position(|&d| d == 3) else {
            return Err(Error::Precondition("graph has no vertex of degree three".into()));
        };
        let legs: Vec<usize> = (0..4).filter(|&i| i != centre).collect();
        let legs = [legs[0], legs[1], legs[2]];
        let m_full = g.adjacency_matrix();
        let det = m_full.determinant();
        if det.abs() != BigRational::one() {
            return Err(Error::Precondition(format!(
                "three-star closed form needs a unimodular adjacency matrix, det = {det}"
            )));
        }
        if !g.weak_negativity()? {
            return Err(Error::Precondition("graph is not weakly negative".into()));
        }
        let order = [centre, legs[0], legs[1], legs[2]];
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        let a = m_full.permute(&order).inverse()?.scale(&half);
        let at = |i: usize, j: usize| a.get(i, j).clone();
        let two = BigRational::from_integer(2.into());
        let four = BigRational::from_integer(4.into());

        let m = &two * at(0, 0);
        let leg_sum: BigRational = (1..4).map(|j| at(j, 0)).sum();
        let b0 = &two * &leg_sum;
        let bi = |i: usize| &four * at(i, 0) - &two * &leg_sum;
        let diag: BigRational = (1..4).map(|j| at(j, j)).sum();
        let c0 = at(1, 2) + at(2, 3) + at(3, 1) + diag / &two;
        let ci = |i: usize| {
            let s: BigRational = (1..4).filter(|&j| j != i).map(|j| at(i, j)).sum();
            &c0 - &two * s
        };
        let b = [bi(1), bi(2), bi(3), b0];
        let c = [ci(1), ci(2), ci(3), c0.clone()];
        if !m.is_positive() {
            return Err(Error::Precondition(format!("m = {m} is not positive")));
        }
        let ds: Vec<BigRational> = (0..4).map(|j| -(&b[j] * &b[j]) / (&four * &m) + &c[j]).collect();
        if ds.iter().any(|x| x != &ds[0]) {
            return Err(Error::Precondition("three-star parameters d_j disagree".into()));
        }
        let d = ds[0].clone();
        let inertia = g.inertia();
        let weight_sum = g.weight_sum();
        let c_pref = &d
            + BigRational::new(
                BigInt::from(3 * inertia.signature() - weight_sum),
                BigInt::from(4),
            );
        let sign = if inertia.positives.is_multiple_of(2) { 1 } else { -1 };
        Ok(ThreeStarData {
            centre,
            legs,
            m,
            b,
            c,
            d,
            c_pref,
            sign,
            a_matrix: a,
            inertia,
            weight_sum,
        })
    }

    /// `m` as an integer, if it is one.
    pub fn m_integer(&self) -> Option<i64> {
        self.m.is_integer().then(|| self.m.to_integer().to_i64()).flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff;

    pub(crate) fn sigma237() -> PlumbingGraph {
        PlumbingGraph::from_weights(&[-1, -2, -3, -7], &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn sigma237_matrix_and_degrees() {
        let g = sigma237();
        assert_eq!(g.degrees(), vec![3, 1, 1, 1]);
        assert_eq!(
            g.adjacency_rows(),
            vec![vec![-1, 1, 1, 1], vec![1, -2, 0, 0], vec![1, 0, -3, 0], vec![1, 0, 0, -7]]
        );
        let i = g.inertia();
        assert_eq!((i.positives, i.signature()), (0, -4));
        assert!(g.weak_negativity().unwrap());
    }

    #[test]
    fn parse_errors_name_the_culprit() {
        let dup = r#"{"vertices":[{"id":1,"weight":-2},{"id":2,"weight":-3}],"edges":[[1,2],[2,1]]}"#;
        assert!(PlumbingGraph::parse(dup).unwrap_err().to_string().contains("duplicate edge"));
        let lp = r#"{"vertices":[{"id":1,"weight":-2}],"edges":[[1,1]]}"#;
        assert!(PlumbingGraph::parse(lp).unwrap_err().to_string().contains("self-loop"));
        let unk = r#"{"vertices":[{"id":1,"weight":-2}],"edges":[[1,9]]}"#;
        assert!(PlumbingGraph::parse(unk).unwrap_err().to_string().contains("unknown vertex id 9"));
        let w = r#"{"vertices":[{"id":5,"weight":-2.5}],"edges":[]}"#;
        assert!(PlumbingGraph::parse(w).unwrap_err().to_string().contains("vertex 5"));
        let single = r#"{"vertices":[{"id":0,"weight":-1}],"edges":[]}"#;
        assert_eq!(PlumbingGraph::parse(single).unwrap().adjacency_rows(), vec![vec![-1]]);
    }

    #[test]
    fn json_round_trip() {
        let g = sigma237();
        assert_eq!(PlumbingGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn reversed_weights_are_not_weakly_negative() {
        // Conjugating -M by diag(-1,1,1,1) restores +1 edges.
        let g = PlumbingGraph::from_weights(&[1, 2, 3, 7], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!g.weak_negativity().unwrap());
        let path = PlumbingGraph::from_weights(&[-2, -2, -2], &[(0, 1), (1, 2)]).unwrap();
        assert!(path.weak_negativity().unwrap());
    }

    #[test]
    fn singular_matrix_is_reported() {
        let g = PlumbingGraph::from_weights(&[0], &[]).unwrap();
        assert_eq!(g.weak_negativity().unwrap_err(), Error::SingularMatrix);
        assert!(g.spinc_labels().is_err());
    }

    #[test]
    fn spinc_counts() {
        let g = sigma237();
        let labels = g.spinc_labels().unwrap();
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].delta, vec![1, 1, 1, 1]);
        let g = PlumbingGraph::from_weights(&[-2], &[]).unwrap();
        let labels = g.spinc_labels().unwrap();
        assert_eq!(labels.len(), 2);
        assert_eq!(labels.iter().map(|l| l.to_i64()[0]).collect::<Vec<_>>(), vec![-2, 0]);
        let lens = PlumbingGraph::from_weights(&[-5, -2], &[(0, 1)]).unwrap();
        assert_eq!(lens.spinc_labels().unwrap().len(), 9);
    }

    #[test]
    fn sigma237_three_star() {
        let t = sigma237().three_star_params().unwrap();
        assert_eq!(t.m, coeff(42, 1));
        let b: Vec<_> = t.b.to_vec();
        assert_eq!(b, vec![coeff(1, 1), coeff(-13, 1), coeff(-29, 1), coeff(41, 1)]);
        let c4: Vec<_> = t.c.iter().map(|x| x * BigInt::from(4)).collect();
        assert_eq!(c4, vec![coeff(1, 1), coeff(5, 1), coeff(21, 1), coeff(41, 1)]);
        assert_eq!(t.d, coeff(41, 168));
        assert_eq!(t.c_pref, coeff(83, 168));
        assert_eq!(t.sign, 1);
    }

    #[test]
    fn three_star_shape_errors() {
        let path = PlumbingGraph::from_weights(&[-2, -2, -2, -2], &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(path.three_star_params().is_err());
    }
}
