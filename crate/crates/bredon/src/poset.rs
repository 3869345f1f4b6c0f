//! Finite posets with identifiers as opaque strings.
//!
//! The stored element order is always a linear extension, so a chain read
//! off in element order is already sorted and order complexes inherit a
//! consistent vertex order for free.

use std::collections::{BTreeSet, HashMap};

use bitvec::prelude::*;
use thiserror::Error;

use crate::scomplex::SimplicialComplex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation cycle through element `{witness}`")]
    Cycle { witness: String },
    #[error("unknown element `{name}`")]
    UnknownElement { name: String },
    #[error("duplicate element `{name}`")]
    DuplicateElement { name: String },
}

/// A finite poset. `elements` is a linear extension of the order (ties from
/// the closure broken by input position), and `lt` holds the transitively
/// closed strict relation.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    /// up[i][j] says elements[i] < elements[j]; j > i always holds.
    up: Vec<BitVec>,
}

impl FinitePoset {
    /// Builds the poset from a generating set of strict relations, taking
    /// the transitive closure and re-sorting elements to a linear extension.
    pub fn new(
        elements: Vec<String>,
        relations: &[(String, String)],
    ) -> Result<Self, PosetError> {
        let n = elements.len();
        let mut input_index: HashMap<String, usize> = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if input_index.insert(e.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement { name: e.clone() });
            }
        }
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut indegree = vec![0usize; n];
        for (a, b) in relations {
            let &ia = input_index
                .get(a)
                .ok_or_else(|| PosetError::UnknownElement { name: a.clone() })?;
            let &ib = input_index
                .get(b)
                .ok_or_else(|| PosetError::UnknownElement { name: b.clone() })?;
            if ia == ib {
                return Err(PosetError::Cycle { witness: a.clone() });
            }
            if succ[ia].insert(ib) {
                indegree[ib] += 1;
            }
        }

        // Kahn's algorithm, always taking the smallest ready input position:
        // a deterministic linear extension with ties broken by input order.
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut topo: Vec<usize> = Vec::with_capacity(n);
        while let Some(&i) = ready.iter().next() {
            ready.remove(&i);
            topo.push(i);
            for &j in &succ[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|i| !topo.contains(i)).unwrap();
            return Err(PosetError::Cycle { witness: elements[stuck].clone() });
        }

        let mut pos = vec![0usize; n]; // input index -> new index
        for (new_i, &old_i) in topo.iter().enumerate() {
            pos[old_i] = new_i;
        }
        let new_elements: Vec<String> =
            topo.iter().map(|&i| elements[i].clone()).collect();

        // Transitive closure in reverse topological order over bit rows.
        let mut up: Vec<BitVec> = vec![bitvec![0; n]; n];
        for new_i in (0..n).rev() {
            let old_i = topo[new_i];
            let mut acc = bitvec![0; n];
            for &old_j in &succ[old_i] {
                let new_j = pos[old_j];
                acc.set(new_j, true);
                let row = up[new_j].clone();
                acc |= row;
            }
            up[new_i] = acc;
        }

        let index = new_elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ok(FinitePoset { elements: new_elements, index, up })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in linear-extension order.
    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn lt_idx(&self, i: usize, j: usize) -> bool {
        self.up[i][j]
    }

    pub fn le_idx(&self, i: usize, j: usize) -> bool {
        i == j || self.up[i][j]
    }

    pub fn lt(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.lt_idx(i, j),
            _ => false,
        }
    }

    /// All strict pairs (a, b) with a < b, in index order.
    pub fn strict_pairs(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.up[i].iter_ones() {
                out.push((self.name(i), self.name(j)));
            }
        }
        out
    }

    fn resolve(&self, names: &BTreeSet<String>) -> Result<Vec<usize>, PosetError> {
        names
            .iter()
            .map(|a| {
                self.index_of(a)
                    .ok_or_else(|| PosetError::UnknownElement { name: a.clone() })
            })
            .collect()
    }

    pub fn upper_set_idx(&self, omega: &[usize], strict: bool) -> BitVec {
        let n = self.len();
        let mut out = bitvec![0; n];
        for &i in omega {
            out |= self.up[i].clone();
            if !strict {
                out.set(i, true);
            }
        }
        out
    }

    /// `{ x : w <= x for some w in omega }` (or `<` when strict), returned
    /// in linear-extension order.
    pub fn upper_set(
        &self,
        omega: &BTreeSet<String>,
        strict: bool,
    ) -> Result<Vec<String>, PosetError> {
        let idx = self.resolve(omega)?;
        let bits = self.upper_set_idx(&idx, strict);
        Ok(bits.iter_ones().map(|i| self.elements[i].clone()).collect())
    }

    pub fn order_complex_on_idx(&self, carrier: &BitVec) -> SimplicialComplex {
        let verts: Vec<usize> = carrier.iter_ones().collect();
        let local: HashMap<usize, u32> = verts
            .iter()
            .enumerate()
            .map(|(v, &i)| (i, v as u32))
            .collect();
        let vertex_order: Vec<String> =
            verts.iter().map(|&i| self.elements[i].clone()).collect();

        let mut faces: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut stack: Vec<u32> = Vec::new();
        for &start in &verts {
            self.extend_chains(start, carrier, &local, &mut stack, &mut faces);
        }
        SimplicialComplex::from_face_set(vertex_order, faces)
    }

    fn extend_chains(
        &self,
        at: usize,
        carrier: &BitVec,
        local: &HashMap<usize, u32>,
        stack: &mut Vec<u32>,
        faces: &mut BTreeSet<Vec<u32>>,
    ) {
        stack.push(local[&at]);
        faces.insert(stack.clone());
        for j in self.up[at].iter_ones() {
            if carrier[j] {
                self.extend_chains(j, carrier, local, stack, faces);
            }
        }
        stack.pop();
    }

    /// Order complex: vertices are the carrier elements (all elements when
    /// `None`), k-simplices are the strictly increasing (k+1)-chains.
    pub fn order_complex(
        &self,
        carrier: Option<&BTreeSet<String>>,
    ) -> Result<SimplicialComplex, PosetError> {
        let bits = match carrier {
            None => bitvec![1; self.len()],
            Some(names) => {
                let mut b = bitvec![0; self.len()];
                for i in self.resolve(names)? {
                    b.set(i, true);
                }
                b
            }
        };
        Ok(self.order_complex_on_idx(&bits))
    }
}
