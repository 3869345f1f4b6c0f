//! Coxeter systems: matrix validation, finite-type recognition by catalog
//! matching on labeled diagrams, the poset of spherical subsets, the nerve,
//! and the two routes to the virtual cohomological dimension (the building
//! route through strict upper sets and the link route through the nerve).
//!
//! Finite-type recognition matches each connected diagram component against
//! the finite catalog (A, B, D, E6..E8, F4, H3, H4, I2(m)) by vertex count,
//! label multiset, and degree sequence, then confirms with an explicit
//! labeled-graph isomorphism. Positive definiteness of the cosine matrix is
//! used only as a floating-point test oracle, never in the library.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::poset::FinitePoset;
use crate::report::{DegreeEntry, DimensionRow, DimensionTable};
use crate::scomplex::SimplicialComplex;
use crate::zcohomology::reduced_cohomology_all;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("matrix row count {rows} does not match generator count {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("duplicate generator name {name:?}")]
    DuplicateGenerator { name: String },
    #[error("generator name {name:?} is empty or contains ',', '{{' or '}}'")]
    InvalidGeneratorName { name: String },
    #[error("entries ({i},{j}) and ({j},{i}) differ")]
    NotSymmetric { i: usize, j: usize },
    #[error("diagonal entry ({i},{i}) must be 1")]
    DiagonalNotOne { i: usize },
    #[error("off-diagonal entry ({i},{j}) must be at least 2")]
    EntryTooSmall { i: usize, j: usize },
    #[error("unknown generator {name:?}")]
    UnknownGenerator { name: String },
    #[error("vertex {name:?} must carry a finite group of order at least 2")]
    InvalidOrder { name: String },
    #[error("edge {a:?} - {b:?} is a loop or a duplicate")]
    BadEdge { a: String, b: String },
}

/// A Coxeter matrix over named generators. `None` encodes the label
/// infinity (the pair generates an infinite dihedral subgroup).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    generators: Vec<String>,
    m: Vec<Vec<Option<u32>>>,
}

impl CoxeterMatrix {
    pub fn new(
        generators: Vec<String>,
        m: Vec<Vec<Option<u32>>>,
    ) -> Result<Self, CoxeterError> {
        let n = generators.len();
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || g.contains(',') || g.contains('{') || g.contains('}') {
                return Err(CoxeterError::InvalidGeneratorName { name: g.clone() });
            }
            if seen.insert(g.clone(), i).is_some() {
                return Err(CoxeterError::DuplicateGenerator { name: g.clone() });
            }
        }
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            let rows = m.iter().map(|r| r.len()).chain([m.len()]).max().unwrap_or(0);
            return Err(CoxeterError::NotSquare { rows, cols: n });
        }
        // Symmetry needs the transposed entry, so index loops are clearest.
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            if m[i][i] != Some(1) {
                return Err(CoxeterError::DiagonalNotOne { i });
            }
            for j in (i + 1)..n {
                if m[i][j] != m[j][i] {
                    return Err(CoxeterError::NotSymmetric { i, j });
                }
                if let Some(v) = m[i][j] {
                    if v < 2 {
                        return Err(CoxeterError::EntryTooSmall { i, j });
                    }
                }
            }
        }
        Ok(CoxeterMatrix { generators, m })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    /// The label m_ij; `None` is infinity.
    pub fn entry(&self, i: usize, j: usize) -> Option<u32> {
        self.m[i][j]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, CoxeterError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| CoxeterError::UnknownGenerator { name: name.to_string() })
    }

    /// The induced matrix on a subset of the generators (order preserved).
    pub fn restrict(&self, keep: &[usize]) -> CoxeterMatrix {
        let generators: Vec<String> =
            keep.iter().map(|&i| self.generators[i].clone()).collect();
        let m: Vec<Vec<Option<u32>>> = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.m[i][j]).collect())
            .collect();
        CoxeterMatrix::new(generators, m).expect("restriction of a valid matrix")
    }

    pub fn is_finite_type<S: AsRef<str>>(&self, j: &[S]) -> Result<bool, CoxeterError> {
        let mut idx = BTreeSet::new();
        for name in j {
            idx.insert(self.index_of(name.as_ref())?);
        }
        Ok(self.is_finite_type_idx(&idx))
    }

    /// True iff the standard parabolic subgroup generated by `j` is finite:
    /// every connected component of the induced Coxeter diagram (edges where
    /// m >= 3 or infinity) lies in the finite catalog.
    pub fn is_finite_type_idx(&self, j: &BTreeSet<usize>) -> bool {
        let verts: Vec<usize> = j.iter().copied().collect();
        let pos: HashMap<usize, usize> =
            verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut seen = vec![false; verts.len()];
        for start in 0..verts.len() {
            if seen[start] {
                continue;
            }
            let mut component = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(a) = stack.pop() {
                component.push(verts[a]);
                for (&w, &b) in &pos {
                    if !seen[b] && self.m[verts[a]][w] != Some(2) {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            component.sort_unstable();
            if !self.component_is_finite_type(&component) {
                return false;
            }
        }
        true
    }

    fn component_is_finite_type(&self, component: &[usize]) -> bool {
        let k = component.len();
        let mut graph = LabeledGraph::discrete(k);
        for a in 0..k {
            for b in (a + 1)..k {
                match self.m[component[a]][component[b]] {
                    None => return false, // an infinity label
                    Some(2) => {}
                    Some(v) => graph.add_edge(a, b, v),
                }
            }
        }
        if k == 1 {
            return true; // A1
        }
        if k == 2 {
            // A single finite edge: A2 (m = 3), B2 (m = 4), or I2(m), m >= 5.
            return true;
        }
        catalog_candidates(k).iter().any(|c| c.isomorphic(&graph))
    }

    /// All spherical subsets of S (those generating finite parabolics),
    /// including the empty set, ordered by inclusion. Enumeration walks up
    /// by size and only tests a candidate whose maximal proper subsets all
    /// passed, since subsets of spherical sets are spherical.
    pub fn spherical_poset(&self) -> SphericalPoset {
        let n = self.rank();
        let mut all: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
        let mut prev: BTreeSet<BTreeSet<usize>> = [BTreeSet::new()].into();
        for _size in 1..=n {
            let mut candidates: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
            for base in &prev {
                for x in 0..n {
                    if !base.contains(&x) {
                        let mut c = base.clone();
                        c.insert(x);
                        candidates.insert(c);
                    }
                }
            }
            let mut next: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
            for c in candidates {
                let hereditary = c.iter().all(|&x| {
                    let mut facet = c.clone();
                    facet.remove(&x);
                    prev.contains(&facet)
                });
                if hereditary && self.is_finite_type_idx(&c) {
                    next.insert(c);
                }
            }
            if next.is_empty() {
                break;
            }
            all.extend(next.iter().cloned());
            prev = next;
        }

        let names: Vec<String> = all.iter().map(|s| self.subset_name(s)).collect();
        let mut relations = Vec::new();
        let known: BTreeSet<&BTreeSet<usize>> = all.iter().collect();
        for s in &all {
            for &x in s {
                let mut facet = s.clone();
                facet.remove(&x);
                debug_assert!(known.contains(&facet));
                relations.push((self.subset_name(&facet), self.subset_name(s)));
            }
        }
        let poset = FinitePoset::new(names.clone(), &relations)
            .expect("inclusion order of distinct subsets is acyclic");
        let by_name: HashMap<String, BTreeSet<usize>> =
            names.into_iter().zip(all).collect();
        let subsets = poset
            .elements()
            .iter()
            .map(|name| by_name[name].clone())
            .collect();
        SphericalPoset { poset, subsets }
    }

    fn subset_name(&self, s: &BTreeSet<usize>) -> String {
        let inner: Vec<&str> =
            s.iter().map(|&i| self.generators[i].as_str()).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// The nerve: the simplicial complex on S whose faces are the nonempty
    /// spherical subsets.
    pub fn nerve(&self) -> SimplicialComplex {
        self.nerve_of(&self.spherical_poset())
    }

    fn nerve_of(&self, sp: &SphericalPoset) -> SimplicialComplex {
        let faces: BTreeSet<Vec<u32>> = sp
            .subsets
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.iter().map(|&i| i as u32).collect())
            .collect();
        SimplicialComplex::from_face_set(self.generators.clone(), faces)
    }

    /// vcd(W) through links in the nerve: the maximum n such that reduced
    /// H^{n-1}(Lk(sigma_J, L)) is nonzero for some spherical J. J = empty
    /// uses L itself; maximal J give the empty link, which contributes 0
    /// through the reduced H^{-1} convention.
    pub fn vcd_link_formula(&self) -> DimensionTable {
        let sp = self.spherical_poset();
        let nerve = self.nerve_of(&sp);
        let rows: Vec<DimensionRow> = (0..sp.len())
            .into_par_iter()
            .map(|i| {
                let subset = sp.subset(i);
                let link = if subset.is_empty() {
                    nerve.clone()
                } else {
                    let names: Vec<String> = subset
                        .iter()
                        .map(|&s| self.generators[s].clone())
                        .collect();
                    nerve.link(&names).expect("spherical subsets are nerve faces")
                };
                reduced_row(sp.label(i), &link)
            })
            .collect();
        DimensionTable::from_rows(rows)
    }

    /// The same dimension through the building route: the maximum n such
    /// that reduced H^{n-1} of the order complex of the strict upper set of
    /// J in the spherical poset is nonzero.
    pub fn cd_building_formula(&self) -> DimensionTable {
        let sp = self.spherical_poset();
        let rows: Vec<DimensionRow> = (0..sp.len())
            .into_par_iter()
            .map(|i| {
                let carrier = sp.poset().upper_set_idx(&[i], true);
                let complex = sp.poset().order_complex_on_idx(&carrier);
                reduced_row(sp.label(i), &complex)
            })
            .collect();
        DimensionTable::from_rows(rows)
    }
}

fn reduced_row(label: &str, complex: &SimplicialComplex) -> DimensionRow {
    let contributions = reduced_cohomology_all(complex)
        .into_iter()
        .filter(|(_, g)| !g.is_zero())
        .map(|(deg, group)| DegreeEntry { degree: (deg + 1) as usize, group })
        .collect();
    DimensionRow { label: label.to_string(), contributions }
}

/// The poset of spherical subsets, elements named "{s,t}" in generator
/// order, with the empty set "{}" as minimum.
#[derive(Clone, Debug)]
pub struct SphericalPoset {
    poset: FinitePoset,
    subsets: Vec<BTreeSet<usize>>,
}

impl SphericalPoset {
    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// The subset at poset position i (generator indices).
    pub fn subset(&self, i: usize) -> &BTreeSet<usize> {
        &self.subsets[i]
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.name(i)
    }
}

/// A finite graph product datum: named vertices carrying finite groups of
/// the given orders, plus commuting edges. The Bredon dimension of the
/// graph product equals the building-route dimension of the right-angled
/// matrix with m = 2 on edges and infinity elsewhere, regardless of the
/// actual vertex group orders, so the reduction loses nothing.
pub fn graph_product_to_coxeter(
    vertices: &[(String, u64)],
    edges: &[(String, String)],
) -> Result<CoxeterMatrix, CoxeterError> {
    let mut index = HashMap::new();
    for (i, (name, order)) in vertices.iter().enumerate() {
        if *order < 2 {
            return Err(CoxeterError::InvalidOrder { name: name.clone() });
        }
        if index.insert(name.clone(), i).is_some() {
            return Err(CoxeterError::DuplicateGenerator { name: name.clone() });
        }
    }
    let n = vertices.len();
    let mut m = vec![vec![None; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Some(1);
    }
    let mut seen_edges = BTreeSet::new();
    for (a, b) in edges {
        let ia = *index
            .get(a)
            .ok_or_else(|| CoxeterError::UnknownGenerator { name: a.clone() })?;
        let ib = *index
            .get(b)
            .ok_or_else(|| CoxeterError::UnknownGenerator { name: b.clone() })?;
        if ia == ib || !seen_edges.insert((ia.min(ib), ia.max(ib))) {
            return Err(CoxeterError::BadEdge { a: a.clone(), b: b.clone() });
        }
        m[ia][ib] = Some(2);
        m[ib][ia] = Some(2);
    }
    let generators = vertices.iter().map(|(name, _)| name.clone()).collect();
    CoxeterMatrix::new(generators, m)
}

/// A labeled diagram: entry None means no edge (m = 2), Some(v) an edge
/// labeled v >= 3. Infinity never reaches this level.
struct LabeledGraph {
    n: usize,
    adj: Vec<Vec<Option<u32>>>,
}

impl LabeledGraph {
    fn discrete(n: usize) -> Self {
        LabeledGraph { n, adj: vec![vec![None; n]; n] }
    }

    fn add_edge(&mut self, a: usize, b: usize, label: u32) {
        self.adj[a][b] = Some(label);
        self.adj[b][a] = Some(label);
    }

    /// A path on labels.len() + 1 vertices with the given edge labels.
    fn path(labels: &[u32]) -> Self {
        let mut g = LabeledGraph::discrete(labels.len() + 1);
        for (i, &l) in labels.iter().enumerate() {
            g.add_edge(i, i + 1, l);
        }
        g
    }

    /// A star of paths glued at a central vertex, every edge labeled 3.
    fn star(branches: &[usize]) -> Self {
        let n = 1 + branches.iter().sum::<usize>();
        let mut g = LabeledGraph::discrete(n);
        let mut next = 1;
        for &len in branches {
            let mut prev = 0;
            for _ in 0..len {
                g.add_edge(prev, next, 3);
                prev = next;
                next += 1;
            }
        }
        g
    }

    fn label_multiset(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if let Some(l) = self.adj[a][b] {
                    out.push(l);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn degree_multiset(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.n)
            .map(|a| self.adj[a].iter().filter(|e| e.is_some()).count())
            .collect();
        out.sort_unstable();
        out
    }

    /// Labeled-graph isomorphism by backtracking, after the cheap
    /// invariants (vertex count, label multiset, degree sequence) agree.
    /// Self must be connected; candidates are paths and stars, so the
    /// search is tiny.
    fn isomorphic(&self, other: &LabeledGraph) -> bool {
        if self.n != other.n
            || self.label_multiset() != other.label_multiset()
            || self.degree_multiset() != other.degree_multiset()
        {
            return false;
        }
        // BFS order guarantees each vertex after the first sees an already
        // assigned neighbor, so label constraints bind early.
        let mut order = vec![0usize];
        let mut in_order = vec![false; self.n];
        in_order[0] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for (w, edge) in self.adj[v].iter().enumerate() {
                if edge.is_some() && !in_order[w] {
                    in_order[w] = true;
                    order.push(w);
                }
            }
        }
        debug_assert_eq!(order.len(), self.n, "candidate diagrams are connected");
        let mut assignment = vec![usize::MAX; self.n];
        let mut used = vec![false; other.n];
        self.extend_iso(&mut assignment, &mut used, &order, 0, other)
    }

    fn extend_iso(
        &self,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        order: &[usize],
        depth: usize,
        other: &LabeledGraph,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        'target: for w in 0..other.n {
            if used[w] {
                continue;
            }
            for &u in &order[..depth] {
                if self.adj[v][u] != other.adj[w][assignment[u]] {
                    continue 'target;
                }
            }
            assignment[v] = w;
            used[w] = true;
            if self.extend_iso(assignment, used, order, depth + 1, other) {
                return true;
            }
            used[w] = false;
            assignment[v] = usize::MAX;
        }
        false
    }
}

/// The finite-type catalog entries on k >= 3 vertices.
fn catalog_candidates(k: usize) -> Vec<LabeledGraph> {
    debug_assert!(k >= 3);
    let mut out = Vec::new();
    out.push(LabeledGraph::path(&vec![3; k - 1])); // A_k
    let mut b = vec![3; k - 1];
    *b.last_mut().unwrap() = 4;
    out.push(LabeledGraph::path(&b)); // B_k
    if k == 4 {
        out.push(LabeledGraph::path(&[3, 4, 3])); // F4
        out.push(LabeledGraph::path(&[5, 3, 3])); // H4
    }
    if k == 3 {
        out.push(LabeledGraph::path(&[5, 3])); // H3
    }
    if k >= 4 {
        out.push(LabeledGraph::star(&[1, 1, k - 3])); // D_k
    }
    if (6..=8).contains(&k) {
        out.push(LabeledGraph::star(&[1, 2, k - 4])); // E6, E7, E8
    }
    out
}
