//! Simple complexes of finite groups over a finite poset: validation, the
//! partition of the poset by equal local groups, the upper-set dimension
//! formula, finite developments with their group action, fixed pairs, the
//! distinguished coset transversal, cochain transport, and brute-force
//! cochain-level verification that the fixed pair decomposes as a direct
//! sum over the transversal and that the orbit-category complex computes
//! the same cohomology.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use bitvec::prelude::BitVec;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::pgroup::{CosetSide, PGroupError, PermGroup, Permutation, TotalOrder};
use crate::poset::FinitePoset;
use crate::report::{
    CheckReport, ComparisonReport, ComparisonRow, DegreeEntry, DimensionRow, DimensionTable,
};
use crate::scomplex::{ComplexPair, SimplicialComplex};
use crate::zcohomology::{
    cohomology_all, pair_coboundary, relative_cochain_complex, reduced_cohomology_all, Cochain,
    CochainComplexZ, CohomologyGroup, IntMatrix,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CogError {
    #[error(transparent)]
    Group(#[from] PGroupError),
    #[error("unknown poset element {name:?}")]
    UnknownElement { name: String },
    #[error("no local group given for poset element {name:?}")]
    MissingLocal { name: String },
    #[error("more than one local group given for poset element {name:?}")]
    DuplicateLocal { name: String },
    #[error("local group at {name:?} is not a subgroup of the ambient group")]
    LocalNotInGroup { name: String },
    #[error("local groups at {lower:?} < {upper:?} are equal; they must grow strictly")]
    NotStrict { lower: String, upper: String },
    #[error("local group at {lower:?} is not a subgroup of the local group at {upper:?}")]
    NotASubgroupAlongEdge { lower: String, upper: String },
    #[error("class contains comparable elements {a:?} < {b:?}")]
    ClassNotAntichain { a: String, b: String },
    #[error("empty class in the partition")]
    EmptyClass,
    #[error("element {name:?} is missing from the partition or listed twice")]
    PartitionMismatch { name: String },
    #[error("conjugating the local group by the given element does not yield a local group")]
    NotLocalConjugate,
    #[error("cochain is supported on {face:?}, which lies in the strict upper complex")]
    NotRelative { face: String },
    #[error("cochain face {face:?} is not a face of the upper-set complex")]
    FaceOutsideDomain { face: String },
}

fn class_label(q: &FinitePoset, class: &[usize]) -> String {
    let mut sorted: Vec<usize> = class.to_vec();
    sorted.sort_unstable();
    let names: Vec<&str> = sorted.iter().map(|&i| q.name(i)).collect();
    format!("{{{}}}", names.join(","))
}

/// The pair of order complexes over the non-strict and strict upper sets
/// of an antichain.
fn upper_pair(q: &FinitePoset, omega: &[usize]) -> ComplexPair {
    let total = q.order_complex_on_idx(&q.upper_set_idx(omega, false));
    let sub = q.order_complex_on_idx(&q.upper_set_idx(omega, true));
    ComplexPair::new(total, sub).expect("the strict upper complex nests in the non-strict one")
}

/// The dimension over an explicit antichain partition: every class Omega
/// contributes the degrees in which the pair (K_Omega, K_{>Omega}) has
/// nonzero cohomology, and the dimension is the largest such degree.
pub fn cd_from_omega(
    q: &FinitePoset,
    classes: &[Vec<String>],
) -> Result<DimensionTable, CogError> {
    let mut seen = vec![false; q.len()];
    let mut classes_idx: Vec<Vec<usize>> = Vec::new();
    for class in classes {
        if class.is_empty() {
            return Err(CogError::EmptyClass);
        }
        let mut idx = Vec::new();
        for name in class {
            let i = q
                .index_of(name)
                .ok_or_else(|| CogError::UnknownElement { name: name.clone() })?;
            if seen[i] {
                return Err(CogError::PartitionMismatch { name: name.clone() });
            }
            seen[i] = true;
            idx.push(i);
        }
        for &a in &idx {
            for &b in &idx {
                if q.lt_idx(a, b) {
                    return Err(CogError::ClassNotAntichain {
                        a: q.name(a).to_string(),
                        b: q.name(b).to_string(),
                    });
                }
            }
        }
        classes_idx.push(idx);
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(CogError::PartitionMismatch { name: q.name(i).to_string() });
    }

    let rows: Vec<DimensionRow> = classes_idx
        .par_iter()
        .map(|idx| {
            let pair = upper_pair(q, idx);
            let contributions = cohomology_all(&relative_cochain_complex(&pair))
                .into_iter()
                .filter(|(_, g)| !g.is_zero())
                .map(|(n, group)| DegreeEntry { degree: n as usize, group })
                .collect();
            DimensionRow { label: class_label(q, idx), contributions }
        })
        .collect();
    Ok(DimensionTable::from_rows(rows))
}

/// A finite poset with a finite permutation group attached to each element,
/// growing strictly along the order. All subgroup arithmetic happens inside
/// the single ambient group.
#[derive(Clone, Debug)]
pub struct SimpleComplexOfGroups {
    q: FinitePoset,
    group: PermGroup,
    locals: Vec<PermGroup>,
    size_cap: usize,
}

impl SimpleComplexOfGroups {
    pub fn new(
        q: FinitePoset,
        group: PermGroup,
        locals: Vec<(String, PermGroup)>,
        size_cap: usize,
    ) -> Result<Self, CogError> {
        let mut slots: Vec<Option<PermGroup>> = vec![None; q.len()];
        for (name, h) in locals {
            let i = q
                .index_of(&name)
                .ok_or_else(|| CogError::UnknownElement { name: name.clone() })?;
            if slots[i].is_some() {
                return Err(CogError::DuplicateLocal { name });
            }
            slots[i] = Some(h);
        }
        let mut resolved = Vec::with_capacity(q.len());
        for (i, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(h) => resolved.push(h),
                None => {
                    return Err(CogError::MissingLocal { name: q.name(i).to_string() })
                }
            }
        }
        group.enumerate(size_cap)?;
        for (i, h) in resolved.iter().enumerate() {
            if !h.subgroup_le(&group, size_cap)? {
                return Err(CogError::LocalNotInGroup { name: q.name(i).to_string() });
            }
        }
        for a in 0..q.len() {
            for b in 0..q.len() {
                if !q.lt_idx(a, b) {
                    continue;
                }
                if !resolved[a].subgroup_le(&resolved[b], size_cap)? {
                    return Err(CogError::NotASubgroupAlongEdge {
                        lower: q.name(a).to_string(),
                        upper: q.name(b).to_string(),
                    });
                }
                if resolved[a].order(size_cap)? == resolved[b].order(size_cap)? {
                    return Err(CogError::NotStrict {
                        lower: q.name(a).to_string(),
                        upper: q.name(b).to_string(),
                    });
                }
            }
        }
        Ok(SimpleComplexOfGroups { q, group, locals: resolved, size_cap })
    }

    pub fn q(&self) -> &FinitePoset {
        &self.q
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn local(&self, i: usize) -> &PermGroup {
        &self.locals[i]
    }

    pub fn size_cap(&self) -> usize {
        self.size_cap
    }

    /// Classes of elements whose local groups are equal as subgroups of the
    /// ambient group. Comparable elements never share a class (their groups
    /// are strictly nested), so every class is an antichain.
    pub fn omega_partition(&self) -> Result<Vec<Vec<String>>, CogError> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        'next: for i in 0..self.q.len() {
            for class in classes.iter_mut() {
                if self.locals[i].subgroup_equal(&self.locals[class[0]], self.size_cap)? {
                    class.push(i);
                    continue 'next;
                }
            }
            classes.push(vec![i]);
        }
        Ok(classes
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.q.name(i).to_string()).collect())
            .collect())
    }

    /// Builds the development: one vertex per coset of each local group,
    /// with (g P_J, J) below (g' P_T, T) exactly when J < T and the cosets
    /// match inside P_T. Coset representatives are canonicalized as the
    /// order-least member, so the development is deterministic given the
    /// total order.
    pub fn develop(&self, order: &TotalOrder) -> Result<Development, CogError> {
        let cap = self.size_cap;
        self.group.enumerate(cap)?;
        let mut vertices: Vec<DevVertex> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut canon: Vec<HashMap<Permutation, usize>> = Vec::with_capacity(self.q.len());
        for j in 0..self.q.len() {
            let reps = self.group.cosets(&self.locals[j], CosetSide::Left, order, cap)?;
            let mut map = HashMap::new();
            for rep in reps {
                let v = vertices.len();
                for h in self.locals[j].enumerate(cap)? {
                    map.insert(rep.compose(h), v);
                }
                let stabilizer = self.locals[j].conjugate(&rep.inverse())?;
                stabilizer.enumerate(cap)?;
                names.push(vertex_name(&rep, self.q.name(j)));
                vertices.push(DevVertex { q_idx: j, rep, stabilizer });
            }
            canon.push(map);
        }
        let mut relations = Vec::new();
        for (v, vert) in vertices.iter().enumerate() {
            for (t, cmap) in canon.iter().enumerate() {
                if self.q.lt_idx(vert.q_idx, t) {
                    let w = cmap[&vert.rep];
                    relations.push((names[v].clone(), names[w].clone()));
                }
            }
        }
        let poset = FinitePoset::new(names.clone(), &relations)
            .expect("the development order is acyclic");
        debug_assert_eq!(
            poset.elements(),
            names.as_slice(),
            "vertex construction order is a linear extension"
        );
        let complex = poset.order_complex(None).expect("full carrier");
        Ok(Development {
            scog: self.clone(),
            order: order.clone(),
            poset,
            complex,
            vertices,
            canon,
        })
    }
}

fn vertex_name(rep: &Permutation, q_name: &str) -> String {
    let imgs: Vec<String> = rep.images().iter().map(|x| x.to_string()).collect();
    format!("{}|{}", imgs.join(","), q_name)
}

#[derive(Clone, Debug)]
struct DevVertex {
    q_idx: usize,
    rep: Permutation,
    stabilizer: PermGroup,
}

/// One distinguished group element per qualifying right coset of a local
/// group: the order-largest member, kept when its conjugate of the local
/// group is again a local group. `omega` lists the poset elements carrying
/// that conjugate.
#[derive(Clone, Debug)]
pub struct LSetMember {
    pub g: Permutation,
    pub omega: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LSet {
    pub j: usize,
    pub members: Vec<LSetMember>,
}

/// Reduced cohomology of the subcomplex fixed by one subgroup, as reported
/// by the acyclicity check.
#[derive(Clone, Debug, Serialize)]
pub struct AcyclicityRow {
    pub label: String,
    pub acyclic: bool,
    pub nonzero: Vec<(i32, CohomologyGroup)>,
}

/// The development: the coset poset, its order complex, and the group
/// action. Everything downstream (fixed pairs, transversals, verification)
/// reads from here; the structure is immutable once built.
#[derive(Clone, Debug)]
pub struct Development {
    scog: SimpleComplexOfGroups,
    order: TotalOrder,
    poset: FinitePoset,
    complex: SimplicialComplex,
    vertices: Vec<DevVertex>,
    canon: Vec<HashMap<Permutation, usize>>,
}

impl Development {
    pub fn scog(&self) -> &SimpleComplexOfGroups {
        &self.scog
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        self.poset.name(v)
    }

    pub fn vertex_q_idx(&self, v: usize) -> usize {
        self.vertices[v].q_idx
    }

    pub fn vertex_rep(&self, v: usize) -> &Permutation {
        &self.vertices[v].rep
    }

    pub fn vertex_stabilizer(&self, v: usize) -> &PermGroup {
        &self.vertices[v].stabilizer
    }

    /// The vertex of the identity coset over a poset element: the copy of
    /// the base poset inside the development.
    pub fn identity_vertex(&self, q_idx: usize) -> usize {
        self.canon[q_idx][&Permutation::identity(self.scog.group.degree())]
    }

    fn q(&self) -> &FinitePoset {
        self.scog.q()
    }

    fn cap(&self) -> usize {
        self.scog.size_cap
    }

    /// x . (g P_J, J) = (xg P_J, J).
    pub fn act_vertex(&self, x: &Permutation, v: usize) -> usize {
        let vert = &self.vertices[v];
        self.canon[vert.q_idx][&x.compose(&vert.rep)]
    }

    /// The action on a chain; the result is again sorted, because the
    /// action preserves the partial order.
    pub fn act_face(&self, x: &Permutation, face: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = face
            .iter()
            .map(|&v| self.act_vertex(x, v as usize) as u32)
            .collect();
        out.sort_unstable();
        out
    }

    /// Orbits of vertices under the group, each sorted, ordered by their
    /// least member.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let elems = self.scog.group.enumerate(self.cap()).expect("enumerated in develop");
        let mut seen = vec![false; self.vertices.len()];
        let mut orbits = Vec::new();
        for v in 0..self.vertices.len() {
            if seen[v] {
                continue;
            }
            let mut orbit: BTreeSet<usize> =
                elems.iter().map(|x| self.act_vertex(x, v)).collect();
            orbit.insert(v);
            for &w in &orbit {
                seen[w] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    /// Vertex masks: fixed by the local group at `j`, and fixed by some
    /// strictly larger subgroup (the singular part).
    fn fixed_masks(&self, j: usize) -> (BitVec, BitVec) {
        let cap = self.cap();
        let p_j = &self.scog.locals[j];
        let p_j_order = p_j.order(cap).expect("enumerated in develop");
        let mut fixed = BitVec::repeat(false, self.vertices.len());
        let mut sing = BitVec::repeat(false, self.vertices.len());
        for (v, vert) in self.vertices.iter().enumerate() {
            if p_j.subgroup_le(&vert.stabilizer, cap).expect("enumerated in develop") {
                fixed.set(v, true);
                if vert.stabilizer.order(cap).unwrap() > p_j_order {
                    sing.set(v, true);
                }
            }
        }
        (fixed, sing)
    }

    /// The fixed pair at `j`: the subcomplex fixed by the local group and
    /// the part fixed by strictly larger subgroups.
    pub fn fixed_pair(&self, j: usize) -> ComplexPair {
        let (fixed, sing) = self.fixed_masks(j);
        let total = self.poset.order_complex_on_idx(&fixed);
        let sub = self.poset.order_complex_on_idx(&sing);
        ComplexPair::new(total, sub).expect("singular vertices are fixed vertices")
    }

    /// Faces of the development (in development indices) fixed by the local
    /// group at `j`, and those in the singular part. A chain is fixed
    /// pointwise iff all its vertices are.
    fn fixed_face_sets(&self, j: usize) -> (BTreeSet<Vec<u32>>, BTreeSet<Vec<u32>>) {
        let (fixed, sing) = self.fixed_masks(j);
        let mut fixed_faces = BTreeSet::new();
        let mut sing_faces = BTreeSet::new();
        for face in self.complex.faces() {
            if face.iter().all(|&v| fixed[v as usize]) {
                fixed_faces.insert(face.clone());
                if face.iter().all(|&v| sing[v as usize]) {
                    sing_faces.insert(face.clone());
                }
            }
        }
        (fixed_faces, sing_faces)
    }

    /// The pair (K_Omega, K_{>Omega}) over the base poset.
    pub fn k_pair(&self, omega: &[usize]) -> ComplexPair {
        upper_pair(self.q(), omega)
    }

    /// Poset elements whose local group equals the conjugate of the local
    /// group at `j` by `g`; empty when the conjugate is not local.
    fn omega_of(&self, j: usize, g: &Permutation) -> Vec<usize> {
        let cap = self.cap();
        let conj = self.scog.locals[j].conjugate(g).expect("degrees match");
        (0..self.q().len())
            .filter(|&u| {
                conj.subgroup_equal(&self.scog.locals[u], cap).expect("within cap")
            })
            .collect()
    }

    /// The distinguished transversal at `j`: the order-largest member of
    /// each right coset of the local group whose conjugate is again local,
    /// sorted by the order, with its class attached.
    pub fn l_set(&self, j: usize) -> LSet {
        let cap = self.cap();
        let p_j = &self.scog.locals[j];
        let reps = self
            .scog
            .group
            .cosets(p_j, CosetSide::Right, &self.order, cap)
            .expect("local groups are subgroups");
        let mut members = Vec::new();
        for rep in reps {
            let g = p_j
                .largest_in_coset(&rep, CosetSide::Right, &self.order, cap)
                .expect("enumerated in develop");
            let omega = self.omega_of(j, &g);
            if !omega.is_empty() {
                members.push(LSetMember { g, omega });
            }
        }
        members.sort_by(|a, b| self.order.cmp(&a.g, &b.g));
        LSet { j, members }
    }

    /// Transport of a relative cochain on (K_Omega_g, K_{>Omega_g}) to a
    /// relative cochain on the fixed pair at `j`: the value on a cell v.s
    /// (s a chain inside the translated domain, v in the right coset P_J g)
    /// is the value on s, everything else 0.
    pub fn rho(&self, j: usize, g: &Permutation, f: &Cochain) -> Result<Cochain, CogError> {
        let cap = self.cap();
        let omega = self.omega_of(j, g);
        if omega.is_empty() {
            return Err(CogError::NotLocalConjugate);
        }
        let kp = self.k_pair(&omega);
        let sub_names: BTreeSet<Vec<String>> =
            kp.sub().faces().map(|f| kp.sub().face_names(f)).collect();
        for (face, _) in f.iter() {
            if kp.total().face_from_names(face).is_err() {
                return Err(CogError::FaceOutsideDomain { face: face.join(",") });
            }
            if sub_names.contains(face) {
                return Err(CogError::NotRelative { face: face.join(",") });
            }
        }
        let mut out = Cochain::zero();
        let Some(width) = f.support_size() else {
            return Ok(out);
        };
        let upper = self.q().upper_set_idx(&omega, false);
        let (fixed_faces, _) = self.fixed_face_sets(j);
        let p_j_g: HashSet<Permutation> = self.scog.locals[j]
            .enumerate(cap)
            .expect("enumerated in develop")
            .iter()
            .map(|h| h.compose(g))
            .collect();
        for face in &fixed_faces {
            if face.len() != width {
                continue;
            }
            // Chains determine all their cosets from the smallest vertex,
            // so the cell is rep . (its base chain).
            if !face.iter().all(|&v| upper[self.vertices[v as usize].q_idx]) {
                continue;
            }
            let v0 = &self.vertices[face[0] as usize];
            let translators_hit = self.scog.locals[v0.q_idx]
                .enumerate(cap)
                .expect("enumerated in develop")
                .iter()
                .any(|h| p_j_g.contains(&v0.rep.compose(h)));
            if !translators_hit {
                continue;
            }
            let q_names: Vec<String> = face
                .iter()
                .map(|&v| self.q().name(self.vertices[v as usize].q_idx).to_string())
                .collect();
            let names: Vec<String> = face
                .iter()
                .map(|&v| self.poset.name(v as usize).to_string())
                .collect();
            out.add(names, f.value(&q_names));
        }
        Ok(out)
    }

    /// The two cellwise identities that tile the fixed pair by translated
    /// domains: inside the translate g.K, the singular part together with
    /// g.K_Omega_g covers everything fixed, and they intersect exactly in
    /// g.K_{>Omega_g}.
    pub fn overlap_identities(&self, j: usize, g: &Permutation) -> CheckReport {
        let mut report = CheckReport::pass();
        let omega = self.omega_of(j, g);
        if omega.is_empty() {
            report.fail(format!(
                "conjugate by {:?} at {} is not a local group",
                g.images(),
                self.q().name(j)
            ));
            return report;
        }
        let (fixed, sing) = self.fixed_face_sets(j);
        let gk = self.translated_base_faces(g, None);
        let gk_omega =
            self.translated_base_faces(g, Some(&self.q().upper_set_idx(&omega, false)));
        let gk_strict =
            self.translated_base_faces(g, Some(&self.q().upper_set_idx(&omega, true)));

        let sing_in_gk: BTreeSet<Vec<u32>> = sing.intersection(&gk).cloned().collect();
        let union: BTreeSet<Vec<u32>> = sing_in_gk.union(&gk_omega).cloned().collect();
        let fixed_in_gk: BTreeSet<Vec<u32>> = fixed.intersection(&gk).cloned().collect();
        if union != fixed_in_gk {
            report.fail(format!(
                "union identity fails at {} for {:?}",
                self.q().name(j),
                g.images()
            ));
        }
        let meet: BTreeSet<Vec<u32>> = sing_in_gk.intersection(&gk_omega).cloned().collect();
        if meet != gk_strict {
            report.fail(format!(
                "intersection identity fails at {} for {:?}",
                self.q().name(j),
                g.images()
            ));
        }
        report
    }

    /// Faces of g . (order complex of a carrier in the base poset), as
    /// faces of the development.
    fn translated_base_faces(
        &self,
        g: &Permutation,
        carrier: Option<&BitVec>,
    ) -> BTreeSet<Vec<u32>> {
        let qc = match carrier {
            None => self.q().order_complex(None).expect("full base carrier"),
            Some(c) => self.q().order_complex_on_idx(c),
        };
        qc.faces()
            .map(|face| {
                let mut img: Vec<u32> = face
                    .iter()
                    .map(|&i| {
                        let name = &qc.vertex_order()[i as usize];
                        let qi = self.q().index_of(name).expect("carrier names");
                        self.canon[qi][g] as u32
                    })
                    .collect();
                img.sort_unstable();
                img
            })
            .collect()
    }

    /// Checks that transport commutes with the relative coboundaries, one
    /// dual basis cochain at a time, for every transversal member at `j`.
    pub fn transport_chain_map(&self, j: usize) -> CheckReport {
        let mut report = CheckReport::pass();
        let fp = self.fixed_pair(j);
        for member in &self.l_set(j).members {
            let kp = self.k_pair(&member.omega);
            let sub_names: BTreeSet<Vec<String>> =
                kp.sub().faces().map(|f| kp.sub().face_names(f)).collect();
            for face in kp.total().faces() {
                let names = kp.total().face_names(face);
                if sub_names.contains(&names) {
                    continue;
                }
                let f = Cochain::dual(names.clone());
                let lhs = pair_coboundary(&fp, &self.rho(j, &member.g, &f).expect("relative"));
                let rhs = self
                    .rho(j, &member.g, &pair_coboundary(&kp, &f))
                    .expect("coboundary stays relative");
                if lhs != rhs {
                    report.fail(format!(
                        "coboundary does not commute with transport at {} for {:?} on {}",
                        self.q().name(j),
                        member.g.images(),
                        names.join(" < "),
                    ));
                }
            }
        }
        report
    }

    /// Compares the cohomology of the fixed pair at `j` with the direct sum
    /// over the transversal of the upper-set pairs, and checks that the
    /// transported bases partition the relative cells.
    pub fn verify_decomposition(&self, j: usize) -> ComparisonReport {
        let fp = self.fixed_pair(j);
        let left = cohomology_all(&relative_cochain_complex(&fp));
        let ls = self.l_set(j);
        let parts: Vec<Vec<(i32, CohomologyGroup)>> = ls
            .members
            .iter()
            .map(|m| cohomology_all(&relative_cochain_complex(&self.k_pair(&m.omega))))
            .collect();

        let hi = left
            .iter()
            .map(|(n, _)| *n)
            .chain(parts.iter().flatten().map(|(n, _)| *n))
            .max()
            .unwrap_or(0);
        let mut rows = Vec::new();
        for n in 0..=hi {
            let l = lookup(&left, n);
            let summands: Vec<CohomologyGroup> =
                parts.iter().map(|p| lookup(p, n)).collect();
            let r = CohomologyGroup::direct_sum(summands.iter());
            rows.push(ComparisonRow { degree: n, left: l, right: r });
        }

        let basis_bijection = self.transversal_bases_partition(j, &ls);
        ComparisonReport {
            label: self.q().name(j).to_string(),
            rows,
            basis_bijection: Some(basis_bijection),
        }
    }

    /// The images g . s of the relative cells of (K_Omega_g, K_{>Omega_g})
    /// must hit each relative cell of the fixed pair exactly once.
    fn transversal_bases_partition(&self, j: usize, ls: &LSet) -> bool {
        let (fixed, sing) = self.fixed_face_sets(j);
        let mut relative_count: BTreeMap<usize, usize> = BTreeMap::new();
        for face in &fixed {
            if !sing.contains(face) {
                *relative_count.entry(face.len()).or_insert(0) += 1;
            }
        }
        let mut images: BTreeMap<usize, BTreeSet<Vec<u32>>> = BTreeMap::new();
        for member in &ls.members {
            let kp = self.k_pair(&member.omega);
            let sub_faces = kp.sub_faces_in_total();
            for face in kp.total().faces() {
                if sub_faces.contains(face.as_slice()) {
                    continue;
                }
                let mut img: Vec<u32> = face
                    .iter()
                    .map(|&i| {
                        let name = &kp.total().vertex_order()[i as usize];
                        let qi = self.q().index_of(name).expect("upper-set names");
                        self.canon[qi][&member.g] as u32
                    })
                    .collect();
                img.sort_unstable();
                if !fixed.contains(&img) || sing.contains(&img) {
                    return false; // landed outside the relative cells
                }
                if !images.entry(img.len()).or_default().insert(img) {
                    return false; // two sources hit the same cell
                }
            }
        }
        let image_count: BTreeMap<usize, usize> =
            images.iter().map(|(k, v)| (*k, v.len())).collect();
        image_count == relative_count
    }

    /// The orbit-category cochain complex at `j` with coefficients dual to
    /// the coset functor at K = locals(j). Degree-n basis: for each orbit
    /// of n-cells whose stabilizer is conjugate to K, the cosets of K fixed
    /// by the representative's stabilizer. The coboundary translates fixed
    /// cosets along orbit representatives: with the i-th face of a
    /// representative written as t . r for an orbit representative r, the
    /// (sigma, yK) row receives (-1)^i from the (r, t^{-1}yK) column
    /// whenever t^{-1}yK is fixed by the stabilizer of r.
    pub fn bredon_cochain_complex(&self, j: usize) -> CochainComplexZ {
        let cap = self.cap();
        let group = &self.scog.group;
        let k_group = &self.scog.locals[j];
        let g_elems = group.enumerate(cap).expect("enumerated in develop");
        let dim = self.complex.dim();
        if dim < 0 {
            return CochainComplexZ::new(0, vec![0], vec![IntMatrix::zero(0, 0)]);
        }
        let degrees = (dim + 1) as usize;

        // Canonical coset representatives of K and the member -> rep map.
        let k_reps = group
            .cosets(k_group, CosetSide::Left, &TotalOrder::lex(), cap)
            .expect("local groups are subgroups");
        let mut coset_rep: HashMap<Permutation, Permutation> = HashMap::new();
        for rep in &k_reps {
            for h in k_group.enumerate(cap).unwrap() {
                coset_rep.insert(rep.compose(h), rep.clone());
            }
        }
        let conj_by_rep: Vec<PermGroup> = k_reps
            .iter()
            .map(|c| k_group.conjugate(&c.inverse()).expect("degrees match"))
            .collect();

        // Orbit decomposition per degree, recording one translator per face.
        let mut orbit_of: Vec<HashMap<Vec<u32>, (usize, Permutation)>> =
            vec![HashMap::new(); degrees];
        let mut orbit_reps: Vec<Vec<Vec<u32>>> = vec![Vec::new(); degrees];
        for face in self.complex.faces() {
            let d = face.len() - 1;
            if orbit_of[d].contains_key(face) {
                continue;
            }
            let o = orbit_reps[d].len();
            for x in g_elems {
                let img = self.act_face(x, face);
                orbit_of[d].entry(img).or_insert_with(|| (o, x.clone()));
            }
            orbit_reps[d].push(face.clone());
        }

        let k_order = k_group.order(cap).unwrap();
        let mut bases: Vec<Vec<(usize, Permutation)>> = vec![Vec::new(); degrees];
        let mut basis_index: Vec<HashMap<(usize, Permutation), usize>> =
            vec![HashMap::new(); degrees];
        for d in 0..degrees {
            for (o, rep) in orbit_reps[d].iter().enumerate() {
                let stab = &self.vertices[rep[0] as usize].stabilizer;
                let conjugate_to_k = stab.order(cap).unwrap() == k_order
                    && g_elems.iter().any(|x| {
                        stab.conjugate(x)
                            .unwrap()
                            .subgroup_equal(k_group, cap)
                            .unwrap()
                    });
                if !conjugate_to_k {
                    continue;
                }
                for (ci, c) in k_reps.iter().enumerate() {
                    if stab.subgroup_le(&conj_by_rep[ci], cap).unwrap() {
                        basis_index[d].insert((o, c.clone()), bases[d].len());
                        bases[d].push((o, c.clone()));
                    }
                }
            }
        }

        let sizes: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let mut deltas = Vec::with_capacity(degrees);
        for d in 0..degrees {
            let rows = if d + 1 < degrees { sizes[d + 1] } else { 0 };
            let mut m = IntMatrix::zero(rows, sizes[d]);
            if d + 1 < degrees {
                for (row, (o, y)) in bases[d + 1].iter().enumerate() {
                    let sigma = &orbit_reps[d + 1][*o];
                    let mut sign = BigInt::from(1);
                    for i in 0..sigma.len() {
                        let mut tau = sigma.clone();
                        tau.remove(i);
                        let (tau_orbit, translator) = &orbit_of[d][&tau];
                        let member = translator.inverse().compose(y);
                        let target = coset_rep[&member].clone();
                        if let Some(&col) = basis_index[d].get(&(*tau_orbit, target)) {
                            m.add_to(row, col, &sign);
                        }
                        sign = -sign;
                    }
                }
            }
            deltas.push(m);
        }
        CochainComplexZ::new(0, sizes, deltas)
    }

    /// Cohomology of the orbit-category complex against the fixed pair.
    pub fn bredon_comparison(&self, j: usize) -> ComparisonReport {
        let left = cohomology_all(&self.bredon_cochain_complex(j));
        let right = cohomology_all(&relative_cochain_complex(&self.fixed_pair(j)));
        let hi = left
            .iter()
            .chain(right.iter())
            .map(|(n, _)| *n)
            .max()
            .unwrap_or(0);
        let rows = (0..=hi)
            .map(|n| ComparisonRow { degree: n, left: lookup(&left, n), right: lookup(&right, n) })
            .collect();
        ComparisonReport {
            label: self.q().name(j).to_string(),
            rows,
            basis_bijection: None,
        }
    }

    /// For the trivial subgroup and one representative of each conjugacy
    /// class of local groups, reports whether the fixed subcomplex has
    /// vanishing reduced cohomology (necessary for contractibility).
    pub fn check_acyclicity(&self) -> Vec<AcyclicityRow> {
        let cap = self.cap();
        let group = &self.scog.group;
        let g_elems = group.enumerate(cap).expect("enumerated in develop");
        let mut reps: Vec<(String, PermGroup)> =
            vec![("1".to_string(), PermGroup::trivial(group.degree()))];
        for i in 0..self.q().len() {
            let h = &self.scog.locals[i];
            let known = reps.iter().any(|(_, r)| {
                r.order(cap).unwrap() == h.order(cap).unwrap()
                    && g_elems
                        .iter()
                        .any(|x| r.conjugate(x).unwrap().subgroup_equal(h, cap).unwrap())
            });
            if !known {
                reps.push((self.q().name(i).to_string(), h.clone()));
            }
        }
        reps.into_iter()
            .map(|(label, h)| {
                let mut mask = BitVec::repeat(false, self.vertices.len());
                for (v, vert) in self.vertices.iter().enumerate() {
                    if h.subgroup_le(&vert.stabilizer, cap).unwrap() {
                        mask.set(v, true);
                    }
                }
                let complex = self.poset.order_complex_on_idx(&mask);
                let nonzero: Vec<(i32, CohomologyGroup)> = reduced_cohomology_all(&complex)
                    .into_iter()
                    .filter(|(_, g)| !g.is_zero())
                    .collect();
                AcyclicityRow { label, acyclic: nonzero.is_empty(), nonzero }
            })
            .collect()
    }
}

fn lookup(groups: &[(i32, CohomologyGroup)], n: i32) -> CohomologyGroup {
    groups
        .iter()
        .find(|(d, _)| *d == n)
        .map(|(_, g)| g.clone())
        .unwrap_or_else(CohomologyGroup::zero)
}
