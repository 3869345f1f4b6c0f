//! Finite abstract simplicial complexes over named vertices.
//!
//! Faces are stored as index tuples sorted by `vertex_order`, so boundary
//! signs are determined by position and stay consistent between a complex
//! and any subcomplex whose vertex order is a restriction of it.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::poset::FinitePoset;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("unknown vertex `{name}`")]
    UnknownVertex { name: String },
    #[error("duplicate vertex `{name}`")]
    DuplicateVertex { name: String },
    #[error("`{witness:?}` is not a face")]
    NotAFace { witness: Vec<String> },
    #[error("not a subcomplex: {reason}")]
    NotASubcomplex { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_order: Vec<String>,
    vertex_index: HashMap<String, u32>,
    /// Nonempty, downward-closed set of ascending index tuples.
    faces: BTreeSet<Vec<u32>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            vertex_order: Vec::new(),
            vertex_index: HashMap::new(),
            faces: BTreeSet::new(),
        }
    }

    fn index_names(vertex_order: &[String]) -> Result<HashMap<String, u32>, ComplexError> {
        let mut vertex_index = HashMap::with_capacity(vertex_order.len());
        for (i, v) in vertex_order.iter().enumerate() {
            if vertex_index.insert(v.clone(), i as u32).is_some() {
                return Err(ComplexError::DuplicateVertex { name: v.clone() });
            }
        }
        Ok(vertex_index)
    }

    /// Internal constructor from an already downward-closed face set.
    pub(crate) fn from_face_set(
        vertex_order: Vec<String>,
        faces: BTreeSet<Vec<u32>>,
    ) -> Self {
        let vertex_index = Self::index_names(&vertex_order).expect("unique vertex names");
        let c = SimplicialComplex { vertex_order, vertex_index, faces };
        debug_assert!(c.is_downward_closed());
        c
    }

    fn is_downward_closed(&self) -> bool {
        self.faces.iter().all(|f| {
            f.len() == 1
                || (0..f.len()).all(|i| {
                    let mut g = f.clone();
                    g.remove(i);
                    self.faces.contains(&g)
                })
        })
    }

    /// Builds the downward closure of the given maximal faces.
    pub fn from_maximal_faces(
        vertex_order: Vec<String>,
        maximal: &[Vec<String>],
    ) -> Result<Self, ComplexError> {
        let vertex_index = Self::index_names(&vertex_order)?;
        let mut faces: BTreeSet<Vec<u32>> = BTreeSet::new();
        for face in maximal {
            let mut idx: Vec<u32> = Vec::with_capacity(face.len());
            for name in face {
                let &i = vertex_index
                    .get(name)
                    .ok_or_else(|| ComplexError::UnknownVertex { name: name.clone() })?;
                idx.push(i);
            }
            idx.sort_unstable();
            idx.dedup();
            if idx.is_empty() {
                continue;
            }
            // Insert every nonempty subset.
            let k = idx.len();
            for mask in 1u64..(1 << k) {
                let sub: Vec<u32> = (0..k)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| idx[b])
                    .collect();
                faces.insert(sub);
            }
        }
        Ok(SimplicialComplex { vertex_order, vertex_index, faces })
    }

    pub fn vertex_order(&self) -> &[String] {
        &self.vertex_order
    }

    pub fn faces(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.faces.iter()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Largest face dimension, -1 when there are no faces.
    pub fn dim(&self) -> i32 {
        self.faces.iter().map(|f| f.len() as i32 - 1).max().unwrap_or(-1)
    }

    /// Number of faces in each dimension 0..=dim.
    pub fn face_counts(&self) -> Vec<usize> {
        let mut out = vec![0usize; (self.dim() + 1).max(0) as usize];
        for f in &self.faces {
            out[f.len() - 1] += 1;
        }
        out
    }

    pub fn contains(&self, face: &[u32]) -> bool {
        self.faces.contains(face)
    }

    /// Connected components of the 1-skeleton, counting only vertices that
    /// actually appear as 0-faces.
    pub fn connected_components(&self) -> usize {
        let n = self.vertex_order.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut present = vec![false; n];
        for face in &self.faces {
            for &v in face {
                present[v as usize] = true;
            }
            for w in &face[1..] {
                let a = find(&mut parent, face[0] as usize);
                let b = find(&mut parent, *w as usize);
                parent[a] = b;
            }
        }
        let mut roots = std::collections::BTreeSet::new();
        for (v, &here) in present.iter().enumerate() {
            if here {
                roots.insert(find(&mut parent, v));
            }
        }
        roots.len()
    }

    pub fn face_names(&self, face: &[u32]) -> Vec<String> {
        face.iter().map(|&i| self.vertex_order[i as usize].clone()).collect()
    }

    /// Resolves vertex names to the ascending index tuple.
    pub fn face_from_names(&self, names: &[String]) -> Result<Vec<u32>, ComplexError> {
        let mut idx: Vec<u32> = Vec::with_capacity(names.len());
        for name in names {
            let &i = self
                .vertex_index
                .get(name)
                .ok_or_else(|| ComplexError::UnknownVertex { name: name.clone() })?;
            idx.push(i);
        }
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    pub fn maximal_faces(&self) -> Vec<Vec<String>> {
        self.faces
            .iter()
            .filter(|f| self.cofaces_with_sign(f).is_empty())
            .map(|f| self.face_names(f))
            .collect()
    }

    /// Cofaces of one dimension higher, with the sign (-1)^i of the inserted
    /// vertex's position.
    pub fn cofaces_with_sign(&self, face: &[u32]) -> Vec<(Vec<u32>, i64)> {
        let mut out = Vec::new();
        for v in 0..self.vertex_order.len() as u32 {
            if let Err(pos) = face.binary_search(&v) {
                let mut cand = face.to_vec();
                cand.insert(pos, v);
                if self.faces.contains(&cand) {
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    out.push((cand, sign));
                }
            }
        }
        out
    }

    /// Link of a face: all faces disjoint from it whose union with it is a
    /// face. Vertex order is inherited.
    pub fn link(&self, face_names: &[String]) -> Result<Self, ComplexError> {
        let sigma = self.face_from_names(face_names)?;
        if !self.faces.contains(&sigma) {
            return Err(ComplexError::NotAFace { witness: face_names.to_vec() });
        }
        let mut faces: BTreeSet<Vec<u32>> = BTreeSet::new();
        for tau in &self.faces {
            if tau.iter().any(|v| sigma.binary_search(v).is_ok()) {
                continue;
            }
            let mut union: Vec<u32> =
                tau.iter().chain(sigma.iter()).copied().collect();
            union.sort_unstable();
            if self.faces.contains(&union) {
                faces.insert(tau.clone());
            }
        }
        Ok(SimplicialComplex {
            vertex_order: self.vertex_order.clone(),
            vertex_index: self.vertex_index.clone(),
            faces,
        })
    }

    /// Cone with a fresh apex, placed first in the vertex order.
    pub fn cone(&self, apex: &str) -> Result<Self, ComplexError> {
        if self.vertex_index.contains_key(apex) {
            return Err(ComplexError::DuplicateVertex { name: apex.to_string() });
        }
        let mut vertex_order = Vec::with_capacity(self.vertex_order.len() + 1);
        vertex_order.push(apex.to_string());
        vertex_order.extend(self.vertex_order.iter().cloned());
        let mut faces: BTreeSet<Vec<u32>> = BTreeSet::new();
        faces.insert(vec![0]);
        for f in &self.faces {
            let shifted: Vec<u32> = f.iter().map(|&v| v + 1).collect();
            let mut coned = Vec::with_capacity(shifted.len() + 1);
            coned.push(0);
            coned.extend(shifted.iter().copied());
            faces.insert(shifted);
            faces.insert(coned);
        }
        let vertex_index = Self::index_names(&vertex_order)?;
        Ok(SimplicialComplex { vertex_order, vertex_index, faces })
    }

    fn render_face(&self, face: &[u32]) -> String {
        format!("{{{}}}", self.face_names(face).join(","))
    }

    /// Order complex of the face poset: vertices are the faces themselves
    /// (rendered canonically), simplices are chains under inclusion.
    pub fn barycentric_subdivision(&self) -> Self {
        if self.faces.is_empty() {
            return SimplicialComplex::empty();
        }
        // Sorting by (dimension, tuple) is a linear extension of inclusion.
        let mut sorted: Vec<&Vec<u32>> = self.faces.iter().collect();
        sorted.sort_by_key(|f| (f.len(), (*f).clone()));
        let elements: Vec<String> = sorted.iter().map(|f| self.render_face(f)).collect();
        let mut relations: Vec<(String, String)> = Vec::new();
        for (i, small) in sorted.iter().enumerate() {
            for (j, big) in sorted.iter().enumerate() {
                if i != j
                    && small.len() < big.len()
                    && small.iter().all(|v| big.binary_search(v).is_ok())
                {
                    relations.push((elements[i].clone(), elements[j].clone()));
                }
            }
        }
        let poset = FinitePoset::new(elements, &relations).expect("face poset is acyclic");
        poset.order_complex(None).expect("full carrier")
    }
}

/// A pair (total, sub) with `sub` a subcomplex of `total` and its vertex
/// order the restriction of total's.
#[derive(Clone, Debug)]
pub struct ComplexPair {
    total: SimplicialComplex,
    sub: SimplicialComplex,
}

impl ComplexPair {
    pub fn new(
        total: SimplicialComplex,
        sub: SimplicialComplex,
    ) -> Result<Self, ComplexError> {
        // Vertex order must embed as a subsequence.
        let mut it = total.vertex_order.iter();
        for v in &sub.vertex_order {
            if !it.any(|w| w == v) {
                return Err(ComplexError::NotASubcomplex {
                    reason: format!("vertex order does not restrict at `{v}`"),
                });
            }
        }
        for f in &sub.faces {
            let names = sub.face_names(f);
            let in_total = total
                .face_from_names(&names)
                .map_err(|_| ComplexError::NotASubcomplex {
                    reason: format!("face {names:?} uses vertices absent from total"),
                })?;
            if !total.faces.contains(&in_total) {
                return Err(ComplexError::NotASubcomplex {
                    reason: format!("face {names:?} missing from total"),
                });
            }
        }
        Ok(ComplexPair { total, sub })
    }

    /// The pair (C, empty): relative cohomology equals absolute cohomology.
    pub fn full(total: SimplicialComplex) -> Self {
        ComplexPair { total, sub: SimplicialComplex::empty() }
    }

    pub fn total(&self) -> &SimplicialComplex {
        &self.total
    }

    pub fn sub(&self) -> &SimplicialComplex {
        &self.sub
    }

    /// Faces of `sub` translated into total's index space.
    pub fn sub_faces_in_total(&self) -> BTreeSet<Vec<u32>> {
        self.sub
            .faces
            .iter()
            .map(|f| {
                self.total
                    .face_from_names(&self.sub.face_names(f))
                    .expect("validated subcomplex")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zcohomology::{reduced_cohomology, reduced_cohomology_all};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn complex(verts: &[&str], maximal: &[&[&str]]) -> SimplicialComplex {
        let maximal: Vec<Vec<String>> = maximal.iter().map(|f| names(f)).collect();
        SimplicialComplex::from_maximal_faces(names(verts), &maximal).unwrap()
    }

    #[test]
    fn closure_of_a_triangle() {
        let c = complex(&["a", "b", "c"], &[&["a", "b", "c"]]);
        assert_eq!(c.face_counts(), vec![3, 3, 1]);
    }

    #[test]
    fn unknown_vertex_rejected() {
        let err = SimplicialComplex::from_maximal_faces(
            names(&["a"]),
            &[names(&["a", "z"])],
        )
        .unwrap_err();
        assert_eq!(err, ComplexError::UnknownVertex { name: "z".into() });
    }

    #[test]
    fn link_in_hollow_triangle() {
        let c = complex(&["a", "b", "c"], &[&["a", "b"], &["a", "c"], &["b", "c"]]);
        let l = c.link(&names(&["a"])).unwrap();
        assert_eq!(l.face_counts(), vec![2]); // two isolated vertices
    }

    #[test]
    fn link_in_solid_triangle() {
        let c = complex(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let l = c.link(&names(&["a"])).unwrap();
        assert_eq!(l.face_counts(), vec![2, 1]); // an edge
        let err = c.link(&names(&["a", "z"])).unwrap_err();
        assert!(matches!(err, ComplexError::UnknownVertex { .. }));
    }

    #[test]
    fn link_of_non_face_is_an_error() {
        let c = complex(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]);
        let err = c.link(&names(&["a", "c"])).unwrap_err();
        assert!(matches!(err, ComplexError::NotAFace { .. }));
    }

    #[test]
    fn cone_places_apex_first_and_kills_cohomology() {
        let c = complex(&["a", "b"], &[&["a"], &["b"]]); // 0-sphere
        let cone = c.cone("apex").unwrap();
        assert_eq!(cone.vertex_order()[0], "apex");
        assert_eq!(cone.face_counts(), vec![3, 2]); // a path
        for n in -1..=1 {
            assert!(reduced_cohomology(&cone, n).is_zero());
        }
        let empty_cone = SimplicialComplex::empty().cone("pt").unwrap();
        assert_eq!(empty_cone.face_counts(), vec![1]);
    }

    #[test]
    fn cone_apex_must_be_fresh() {
        let c = complex(&["a"], &[&["a"]]);
        assert!(matches!(
            c.cone("a"),
            Err(ComplexError::DuplicateVertex { .. })
        ));
    }

    #[test]
    fn subdivision_of_an_edge_is_a_two_edge_path() {
        let c = complex(&["a", "b"], &[&["a", "b"]]);
        let b = c.barycentric_subdivision();
        assert_eq!(b.face_counts(), vec![3, 2]);
    }

    #[test]
    fn subdivision_of_hollow_triangle_is_a_hexagon() {
        let c = complex(&["a", "b", "c"], &[&["a", "b"], &["a", "c"], &["b", "c"]]);
        let b = c.barycentric_subdivision();
        assert_eq!(b.face_counts(), vec![6, 6]);
    }

    #[test]
    fn subdivision_of_solid_triangle_counts() {
        let c = complex(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let b = c.barycentric_subdivision();
        assert_eq!(b.face_counts(), vec![7, 12, 6]);
    }

    #[test]
    fn subdivision_preserves_cohomology() {
        let rp2 = crate::instances::projective_plane_six_vertex();
        let b = rp2.barycentric_subdivision();
        assert_eq!(reduced_cohomology_all(&rp2), reduced_cohomology_all(&b));
    }

    #[test]
    fn pair_requires_subcomplex() {
        let total = complex(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]);
        let good = complex(&["a", "b"], &[&["a", "b"]]);
        assert!(ComplexPair::new(total.clone(), good).is_ok());

        let bad = complex(&["a", "c"], &[&["a", "c"]]);
        assert!(matches!(
            ComplexPair::new(total.clone(), bad),
            Err(ComplexError::NotASubcomplex { .. })
        ));

        let bad_order = complex(&["b", "a"], &[&["a", "b"]]);
        assert!(matches!(
            ComplexPair::new(total, bad_order),
            Err(ComplexError::NotASubcomplex { .. })
        ));
    }

    #[test]
    fn component_counts() {
        let c = complex(&["a", "b", "c", "d", "e"], &[&["a", "b", "c"], &["d"], &["e"]]);
        assert_eq!(c.connected_components(), 3);
        assert_eq!(SimplicialComplex::empty().connected_components(), 0);
        let path = complex(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]);
        assert_eq!(path.connected_components(), 1);
    }
}
