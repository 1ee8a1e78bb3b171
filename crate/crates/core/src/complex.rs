//! order complexes of flat lattices and exact simplicial homology over the
//! rationals. the homology side is deliberately small: reduced Betti numbers
//! from boundary ranks, nothing integral.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::mask::{contains, elems, fmt_mask, is_subset, Mask};
use crate::matroid::{Matroid, MatroidError, Weight};
use crate::qmat::QMat;
use crate::rat::{rat_i, rat_zero, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("distinct parallel elements {0:?} violate the simpleness hypothesis")]
    ParallelPairPresent(Vec<usize>),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

/// abstract simplicial complex on labeled vertices. simplices are stored per
/// dimension as strictly increasing vertex-index lists and the complex is
/// closed under taking faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<Mask>,
    /// by_dim[k] lists the k-simplices in lexicographic order.
    by_dim: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// downward closure of the given facets.
    pub fn from_facets(labels: Vec<Mask>, facets: &[Vec<usize>]) -> Self {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let mut sorted = f.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert!(sorted.iter().all(|&v| v < labels.len()), "vertex index out of range");
            for bits in 1u64..(1 << sorted.len()) {
                let face: Vec<usize> =
                    (0..sorted.len()).filter(|j| bits >> j & 1 == 1).map(|j| sorted[j]).collect();
                seen.insert(face);
            }
        }
        let max_dim = seen.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); max_dim];
        for s in seen {
            by_dim[s.len() - 1].push(s);
        }
        SimplicialComplex { labels, by_dim }
    }

    pub fn vertex_labels(&self) -> &[Mask] {
        &self.labels
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// dimension of the complex; None for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    /// face counts f_0..f_dim.
    pub fn face_counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.by_dim.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// maximal simplices, in lexicographic order within each dimension.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut non_maximal: Vec<BTreeSet<&[usize]>> = vec![BTreeSet::new(); self.by_dim.len()];
        for (k, level) in self.by_dim.iter().enumerate().skip(1) {
            for s in level {
                for drop in 0..s.len() {
                    let face: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    let idx = self.by_dim[k - 1]
                        .binary_search(&face)
                        .expect("complex is closed under faces");
                    non_maximal[k - 1].insert(self.by_dim[k - 1][idx].as_slice());
                }
            }
        }
        let mut out = Vec::new();
        for (k, level) in self.by_dim.iter().enumerate() {
            for s in level {
                if !non_maximal[k].contains(s.as_slice()) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// reduced Betti numbers b~_0..b~_dim over the rationals; empty vector
    /// for the empty complex.
    pub fn betti(&self) -> Vec<u64> {
        if self.is_empty() {
            return Vec::new();
        }
        let dim = self.by_dim.len() - 1;
        // ranks[k] = rank of the boundary map from k-chains, with k = 0 the
        // augmentation onto the empty simplex and no (dim+1)-chains at all
        let ranks: Vec<usize> = std::iter::once(1)
            .chain((1..=dim).map(|k| self.boundary_rank(k)))
            .chain(std::iter::once(0))
            .collect();
        let betti: Vec<u64> = (0..=dim)
            .map(|k| (self.by_dim[k].len() - ranks[k] - ranks[k + 1]) as u64)
            .collect();
        // Euler consistency: alternating Betti sum = alternating face count
        // minus one, both sides exact
        let reduced_euler: i64 = betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        let face_euler: i64 = self
            .by_dim
            .iter()
            .enumerate()
            .map(|(k, level)| {
                let f = level.len() as i64;
                if k % 2 == 0 {
                    f
                } else {
                    -f
                }
            })
            .sum();
        assert_eq!(reduced_euler, face_euler - 1, "Euler check failed");
        betti
    }

    /// rank over the rationals of the boundary map C_k -> C_{k-1}, with the
    /// sign convention that dropping the j-th vertex of an increasing list
    /// carries (-1)^j.
    fn boundary_rank(&self, k: usize) -> usize {
        let lower: BTreeMap<&[usize], usize> = self.by_dim[k - 1]
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let rows: Vec<Vec<Rat>> = self.by_dim[k]
            .iter()
            .map(|s| {
                let mut row = vec![rat_zero(); lower.len()];
                for drop in 0..s.len() {
                    let face: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    let col = lower[face.as_slice()];
                    row[col] = if drop % 2 == 0 { rat_i(1) } else { rat_i(-1) };
                }
                row
            })
            .collect();
        QMat::from_rows(rows).rank()
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SimplicialComplex", 3)?;
        st.serialize_field("vertices", &self.labels)?;
        let rendered: Vec<String> = self.labels.iter().map(|&m| fmt_mask(m)).collect();
        st.serialize_field("labels", &rendered)?;
        st.serialize_field("facets", &self.facets())?;
        st.end()
    }
}

/// chains of proper nonempty flats, vertices ordered by rank then by their
/// element lists. dimension is d-2 for a loop-free rank-d matroid.
pub fn order_complex(m: &Matroid) -> Result<SimplicialComplex, ComplexError> {
    let loops = m.loops();
    if loops != 0 {
        return Err(MatroidError::HasLoop(elems(loops)[0]).into());
    }
    let flats = m.flats().proper_nonempty(m.ground());
    let labels: Vec<Mask> = flats.iter().map(|f| f.set).collect();
    // labels are sorted by rank, so containment only points forward
    let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for start in 0..labels.len() {
        stack.push(start);
        extend_chains(&labels, &mut stack, &mut by_dim);
        stack.pop();
    }
    for level in &mut by_dim {
        level.sort_unstable();
    }
    Ok(SimplicialComplex { labels, by_dim })
}

fn extend_chains(labels: &[Mask], stack: &mut Vec<usize>, by_dim: &mut Vec<Vec<Vec<usize>>>) {
    if by_dim.len() < stack.len() {
        by_dim.push(Vec::new());
    }
    by_dim[stack.len() - 1].push(stack.clone());
    let top = *stack.last().expect("chain is nonempty");
    for next in top + 1..labels.len() {
        if labels[next] != labels[top] && is_subset(labels[top], labels[next]) {
            stack.push(next);
            extend_chains(labels, stack, by_dim);
            stack.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeReport {
    pub betti: Vec<u64>,
    pub mu: u64,
    /// dimension the single nonzero Betti number must sit in; -1 encodes the
    /// empty complex of a rank-1 matroid
    pub sphere_dim: i64,
    pub passed: bool,
}

fn require_simple(m: &Matroid) -> Result<(), ComplexError> {
    let classes = m.parallel_classes()?;
    if let Some(&c) = classes.classes.iter().find(|&&c| elems(c).len() > 1) {
        return Err(ComplexError::ParallelPairPresent(elems(c)));
    }
    Ok(())
}

/// checks that the order complex has the homology of a wedge of
/// mobius_number(M) spheres of dimension d-2. hypotheses: loop-free, no two
/// distinct elements parallel.
pub fn wedge_check(m: &Matroid) -> Result<WedgeReport, ComplexError> {
    require_simple(m)?;
    let betti = order_complex(m)?.betti();
    let mu = m.mobius_number();
    let sphere_dim = m.d() as i64 - 2;
    let passed = if sphere_dim < 0 {
        // rank 1 and simple forces n = 1; the empty complex is the unique
        // wedge of one (-1)-sphere
        betti.is_empty() && mu == 1
    } else {
        betti.len() == (sphere_dim + 1) as usize
            && betti
                .iter()
                .enumerate()
                .all(|(k, &b)| if k as i64 == sphere_dim { b == mu } else { b == 0 })
    };
    Ok(WedgeReport { betti, mu, sphere_dim, passed })
}

/// smallest element of maximal weight whose parallel class in the weight
/// matroid M_w is a singleton. None means the irreducibility criterion has
/// no witness, which the verification suites treat as a failure.
pub fn irreducibility_witness(
    m: &Matroid,
    w: &Weight,
) -> Result<Option<usize>, ComplexError> {
    require_simple(m)?;
    if !w.sum_is_zero() {
        return Err(ComplexError::Hypothesis("weight coordinates must sum to zero".into()));
    }
    let mw = m.weight_matroid(w)?;
    if !mw.is_loop_free() {
        return Err(ComplexError::Hypothesis(
            "weight lies outside the tropical support".into(),
        ));
    }
    let max = w.0.iter().max().expect("weights are nonempty");
    let classes = mw.parallel_classes()?;
    let witness = (1..=m.n())
        .filter(|&i| &w.0[i - 1] == max)
        .find(|&i| {
            classes
                .classes
                .iter()
                .any(|&c| contains(c, i) && elems(c).len() == 1)
        });
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::mask_of;
    use crate::matroid::Matroid;

    fn uniform(d: usize, n: usize) -> Matroid {
        Matroid::uniform(d, n)
    }

    /// cycle matroid of the complete graph on 4 nodes; edges numbered
    /// 1={a,b}, 2={a,c}, 3={a,d}, 4={b,c}, 5={b,d}, 6={c,d}.
    fn k4() -> Matroid {
        let triangles = [vec![1, 2, 4], vec![1, 3, 5], vec![2, 3, 6], vec![4, 5, 6]];
        let bases: Vec<Vec<usize>> = (1..=6)
            .flat_map(|i| (i + 1..=6).flat_map(move |j| (j + 1..=6).map(move |k| vec![i, j, k])))
            .filter(|t| !triangles.contains(t))
            .collect();
        assert_eq!(bases.len(), 16);
        Matroid::from_bases(6, 3, &bases).unwrap()
    }

    #[test]
    fn u23_is_three_points() {
        let k = order_complex(&uniform(2, 3)).unwrap();
        assert_eq!(k.vertex_labels(), &[mask_of(&[1]), mask_of(&[2]), mask_of(&[3])]);
        assert_eq!(k.face_counts(), vec![3]);
        assert_eq!(k.facets().len(), 3);
        assert_eq!(k.betti(), vec![2]);
    }

    #[test]
    fn u22_is_two_points() {
        let k = order_complex(&uniform(2, 2)).unwrap();
        assert_eq!(k.face_counts(), vec![2]);
        assert_eq!(k.betti(), vec![1]);
    }

    #[test]
    fn u33_is_a_hexagon() {
        let k = order_complex(&uniform(3, 3)).unwrap();
        assert_eq!(k.face_counts(), vec![6, 6]);
        assert_eq!(k.betti(), vec![0, 1]);
        // every facet is an edge of the 6-cycle
        assert!(k.facets().iter().all(|f| f.len() == 2));
    }

    #[test]
    fn u34_counts() {
        let k = order_complex(&uniform(3, 4)).unwrap();
        assert_eq!(k.face_counts(), vec![10, 12]);
        assert_eq!(k.betti(), vec![0, 3]);
    }

    #[test]
    fn boolean_b4_is_a_two_sphere() {
        let k = order_complex(&uniform(4, 4)).unwrap();
        assert_eq!(k.face_counts(), vec![14, 36, 24]);
        assert_eq!(k.betti(), vec![0, 0, 1]);
    }

    #[test]
    fn loops_are_rejected() {
        let m = Matroid::from_bases(2, 1, &[vec![1]]).unwrap();
        assert!(matches!(
            order_complex(&m),
            Err(ComplexError::Matroid(MatroidError::HasLoop(2)))
        ));
    }

    #[test]
    fn single_simplex_is_contractible() {
        let k = SimplicialComplex::from_facets(vec![1, 2, 4], &[vec![0, 1, 2]]);
        assert_eq!(k.face_counts(), vec![3, 3, 1]);
        assert_eq!(k.betti(), vec![0, 0, 0]);
        assert_eq!(k.facets(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn wedge_check_on_the_standard_examples() {
        for (m, mu, dim) in [
            (uniform(1, 1), 1, -1),
            (uniform(2, 2), 1, 0),
            (uniform(2, 3), 2, 0),
            (uniform(2, 5), 4, 0),
            (uniform(3, 3), 1, 1),
            (uniform(3, 4), 3, 1),
            (uniform(4, 4), 1, 2),
            (k4(), 6, 1),
        ] {
            let report = wedge_check(&m).unwrap();
            assert!(report.passed, "{m} betti {:?}", report.betti);
            assert_eq!(report.mu, mu);
            assert_eq!(report.sphere_dim, dim);
        }
    }

    #[test]
    fn k4_complex_shape() {
        let k = order_complex(&k4()).unwrap();
        // 6 single edges, 4 triangles, 3 perfect matchings
        assert_eq!(k.face_counts(), vec![13, 18]);
        assert_eq!(k.betti(), vec![0, 6]);
    }

    #[test]
    fn parallel_pairs_are_reported() {
        let m = Matroid::from_bases(4, 2, &[vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]])
            .unwrap();
        assert_eq!(
            wedge_check(&m),
            Err(ComplexError::ParallelPairPresent(vec![1, 2]))
        );
    }

    #[test]
    fn witness_examples() {
        let u23 = uniform(2, 3);
        let w = Weight::from_i64(&[2, -1, -1]);
        assert_eq!(irreducibility_witness(&u23, &w).unwrap(), Some(1));
        assert_eq!(irreducibility_witness(&u23, &Weight::zero(3)).unwrap(), Some(1));
        let bad_sum = Weight::from_i64(&[1, 0, 0]);
        assert!(matches!(
            irreducibility_witness(&u23, &bad_sum),
            Err(ComplexError::Hypothesis(_))
        ));
        // weights (-2,1,1) drop element 1 from every maximal basis
        let outside = Weight::from_i64(&[-2, 1, 1]);
        assert!(matches!(
            irreducibility_witness(&u23, &outside),
            Err(ComplexError::Hypothesis(_))
        ));
    }

    #[test]
    fn wedge_report_serializes() {
        let report = wedge_check(&uniform(2, 3)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&report).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["mu"], 2);
    }
}
