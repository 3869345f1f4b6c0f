//! Finite permutation groups acting on {0, .., degree-1}.
//!
//! A permutation is its tuple of images; the default total order on group
//! elements is lexicographic on that tuple. Everything that depends on the
//! order (coset representatives, largest elements) takes the order as an
//! argument so the whole pipeline can be rerun under a shuffled order.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PGroupError {
    #[error("group enumeration exceeded size cap {cap}")]
    SizeCapExceeded { cap: usize },
    #[error("permutation degree mismatch ({left} vs {right})")]
    DegreeMismatch { left: usize, right: usize },
    #[error("not a subgroup")]
    NotASubgroup,
    #[error("images {images:?} are not a bijection")]
    InvalidPermutation { images: Vec<u32> },
}

/// A permutation of {0, .., d-1} as its image tuple. The derived `Ord` is
/// lexicographic on images, which is the default element order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PGroupError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if (x as usize) >= d || seen[x as usize] {
                return Err(PGroupError::InvalidPermutation { images });
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Self {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for k in 0..cycle.len() {
                let from = cycle[k] as usize;
                let to = cycle[(k + 1) % cycle.len()];
                images[from] = to;
            }
        }
        Permutation::from_images(images).expect("cycles must be disjoint and in range")
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn act(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }
}

/// Total order used for canonical coset representatives and for the
/// "largest element of a coset" selection.
#[derive(Clone, Debug)]
pub enum TotalOrder {
    /// Lexicographic on image tuples; the default.
    Lex,
    /// Explicit ranks, e.g. a random shuffle of the whole group.
    Ranked(Arc<HashMap<Permutation, usize>>),
}

impl TotalOrder {
    pub fn lex() -> Self {
        TotalOrder::Lex
    }

    /// A uniformly shuffled total order on the whole group.
    pub fn shuffled<R: Rng>(
        group: &PermGroup,
        cap: usize,
        rng: &mut R,
    ) -> Result<Self, PGroupError> {
        let mut elems: Vec<Permutation> = group.enumerate(cap)?.to_vec();
        elems.shuffle(rng);
        let ranks = elems.into_iter().enumerate().map(|(r, p)| (p, r)).collect();
        Ok(TotalOrder::Ranked(Arc::new(ranks)))
    }

    pub fn cmp(&self, a: &Permutation, b: &Permutation) -> Ordering {
        match self {
            TotalOrder::Lex => a.cmp(b),
            TotalOrder::Ranked(ranks) => {
                let ra = ranks.get(a).expect("order table covers the group");
                let rb = ranks.get(b).expect("order table covers the group");
                ra.cmp(rb)
            }
        }
    }

    pub fn min<'a>(&self, items: impl IntoIterator<Item = &'a Permutation>) -> Permutation {
        items
            .into_iter()
            .min_by(|a, b| self.cmp(a, b))
            .expect("nonempty")
            .clone()
    }

    pub fn max<'a>(&self, items: impl IntoIterator<Item = &'a Permutation>) -> Permutation {
        items
            .into_iter()
            .max_by(|a, b| self.cmp(a, b))
            .expect("nonempty")
            .clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetSide {
    Left,
    Right,
}

/// A permutation group given by generators, with the element list enumerated
/// on demand and cached. The cache is written at most once (`OnceLock`), so
/// shared groups are safe to use from parallel workers.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: OnceLock<Vec<Permutation>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(e.clone());
        }
        PermGroup { degree: self.degree, generators: self.generators.clone(), elements }
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PGroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PGroupError::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        Ok(PermGroup { degree, generators, elements: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), elements: OnceLock::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Enumerates all elements (closure of the generators), sorted
    /// lexicographically. Fails without caching when the closure exceeds
    /// `cap`.
    pub fn enumerate(&self, cap: usize) -> Result<&[Permutation], PGroupError> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue: VecDeque<Permutation> = VecDeque::new();
        let id = Permutation::identity(self.degree);
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(PGroupError::SizeCapExceeded { cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elems: Vec<Permutation> = seen.into_iter().collect();
        elems.sort_unstable();
        let _ = self.elements.set(elems);
        Ok(self.elements.get().unwrap())
    }

    pub fn order(&self, cap: usize) -> Result<usize, PGroupError> {
        Ok(self.enumerate(cap)?.len())
    }

    pub fn contains(&self, p: &Permutation, cap: usize) -> Result<bool, PGroupError> {
        if p.degree() != self.degree {
            return Err(PGroupError::DegreeMismatch { left: self.degree, right: p.degree() });
        }
        Ok(self.enumerate(cap)?.binary_search(p).is_ok())
    }

    pub fn subgroup_le(&self, other: &PermGroup, cap: usize) -> Result<bool, PGroupError> {
        if self.degree != other.degree {
            return Err(PGroupError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let big = other.enumerate(cap)?;
        Ok(self.enumerate(cap)?.iter().all(|p| big.binary_search(p).is_ok()))
    }

    pub fn subgroup_equal(&self, other: &PermGroup, cap: usize) -> Result<bool, PGroupError> {
        Ok(self.enumerate(cap)? == other.enumerate(cap)?)
    }

    /// The conjugate g^{-1} (self) g.
    pub fn conjugate(&self, g: &Permutation) -> Result<PermGroup, PGroupError> {
        if g.degree() != self.degree {
            return Err(PGroupError::DegreeMismatch { left: self.degree, right: g.degree() });
        }
        let ginv = g.inverse();
        let gens = self
            .generators
            .iter()
            .map(|a| ginv.compose(a).compose(g))
            .collect();
        PermGroup::new(self.degree, gens)
    }

    /// Canonical coset representatives (the order-least member of each
    /// coset), sorted by the order. `Left` means cosets g*sub, `Right`
    /// means sub*g.
    pub fn cosets(
        &self,
        sub: &PermGroup,
        side: CosetSide,
        order: &TotalOrder,
        cap: usize,
    ) -> Result<Vec<Permutation>, PGroupError> {
        if !sub.subgroup_le(self, cap)? {
            return Err(PGroupError::NotASubgroup);
        }
        let elems = self.enumerate(cap)?;
        let sub_elems = sub.enumerate(cap)?;
        let mut visited: HashSet<&Permutation> = HashSet::with_capacity(elems.len());
        let mut reps = Vec::new();
        for g in elems {
            if visited.contains(g) {
                continue;
            }
            let members: Vec<Permutation> = sub_elems
                .iter()
                .map(|h| match side {
                    CosetSide::Left => g.compose(h),
                    CosetSide::Right => h.compose(g),
                })
                .collect();
            let rep = order.min(members.iter());
            for m in &members {
                if let Ok(i) = elems.binary_search(m) {
                    visited.insert(&elems[i]);
                }
            }
            reps.push(rep);
        }
        reps.sort_by(|a, b| order.cmp(a, b));
        Ok(reps)
    }

    /// The order-largest element of the coset of `g` (left: g*self,
    /// right: self*g).
    pub fn largest_in_coset(
        &self,
        g: &Permutation,
        side: CosetSide,
        order: &TotalOrder,
        cap: usize,
    ) -> Result<Permutation, PGroupError> {
        if g.degree() != self.degree {
            return Err(PGroupError::DegreeMismatch { left: self.degree, right: g.degree() });
        }
        let members: Vec<Permutation> = self
            .enumerate(cap)?
            .iter()
            .map(|h| match side {
                CosetSide::Left => g.compose(h),
                CosetSide::Right => h.compose(g),
            })
            .collect();
        Ok(order.max(members.iter()))
    }
}

pub fn symmetric(n: usize) -> PermGroup {
    assert!(n >= 1);
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_cycles(n, &[&[0, 1]]));
        let cycle: Vec<u32> = (0..n as u32).collect();
        gens.push(Permutation::from_cycles(n, &[&cycle]));
    }
    PermGroup::new(n, gens).unwrap()
}

pub fn alternating(n: usize) -> PermGroup {
    assert!(n >= 3);
    let mut gens = vec![Permutation::from_cycles(n, &[&[0, 1, 2]])];
    if n > 3 {
        let gens2: Vec<u32> = if n % 2 == 1 {
            (0..n as u32).collect() // odd full cycle is even
        } else {
            (1..n as u32).collect()
        };
        gens.push(Permutation::from_cycles(n, &[&gens2]));
    }
    PermGroup::new(n, gens).unwrap()
}

/// Dihedral group of the regular n-gon acting on its n vertices.
pub fn dihedral(n: usize) -> PermGroup {
    assert!(n >= 3);
    let cycle: Vec<u32> = (0..n as u32).collect();
    let rot = Permutation::from_cycles(n, &[&cycle]);
    let refl =
        Permutation::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect())
            .unwrap();
    PermGroup::new(n, vec![rot, refl]).unwrap()
}

pub fn cyclic(n: usize) -> PermGroup {
    assert!(n >= 1);
    let cycle: Vec<u32> = (0..n as u32).collect();
    PermGroup::new(n, vec![Permutation::from_cycles(n, &[&cycle])]).unwrap()
}

/// Direct product acting on the disjoint union of the two domains.
pub fn direct_product(a: &PermGroup, b: &PermGroup) -> PermGroup {
    let d = a.degree() + b.degree();
    let mut gens = Vec::new();
    for g in a.generators() {
        let mut images: Vec<u32> = g.images().to_vec();
        images.extend(a.degree() as u32..d as u32);
        gens.push(Permutation::from_images(images).unwrap());
    }
    for g in b.generators() {
        let mut images: Vec<u32> = (0..a.degree() as u32).collect();
        images.extend(g.images().iter().map(|&x| x + a.degree() as u32));
        gens.push(Permutation::from_images(images).unwrap());
    }
    PermGroup::new(d, gens).unwrap()
}
