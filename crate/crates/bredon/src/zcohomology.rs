//! Integer cochain complexes and their cohomology via Smith normal form.
//!
//! All arithmetic is arbitrary-precision: SNF intermediates can outgrow any
//! fixed width, and a silent overflow here would corrupt every dimension
//! computed downstream.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::scomplex::ComplexPair;
use crate::scomplex::SimplicialComplex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZError {
    #[error("degree {degree} outside complex range {lo}..={hi}")]
    DegreeOutOfRange { degree: i32, lo: i32, hi: i32 },
}

/// Sparse integer matrix; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c) + v;
        self.set(r, c, cur);
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, &BigInt)> {
        self.entries
            .range((r, 0)..=(r, self.cols.max(1) - 1))
            .map(|(&(_, c), v)| (c, v))
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for (&(i, k), va) in &self.entries {
            for (j, vb) in rhs.row_entries(k) {
                out.add_to(i, j, &(va * vb));
            }
        }
        out
    }
}

/// Diagonal of a Smith normal form: positive invariant factors with
/// `d1 | d2 | ... | dr`; `rank` always equals their count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigUint>,
    pub rank: usize,
}

/// Row-major working state for the elimination, with a column index so pivot
/// moves and column operations stay cheap on sparse input.
struct Elim {
    rows: Vec<BTreeMap<usize, BigInt>>,
    col_rows: Vec<BTreeSet<usize>>,
    u: Option<Vec<BTreeMap<usize, BigInt>>>,
    v_cols: Option<Vec<BTreeMap<usize, BigInt>>>,
}

impl Elim {
    fn new(m: &IntMatrix, track: bool) -> Self {
        let mut rows = vec![BTreeMap::new(); m.rows];
        let mut col_rows = vec![BTreeSet::new(); m.cols];
        for (r, c, v) in m.iter() {
            rows[r].insert(c, v.clone());
            col_rows[c].insert(r);
        }
        let (u, v_cols) = if track {
            let u = (0..m.rows)
                .map(|i| BTreeMap::from([(i, BigInt::one())]))
                .collect();
            let v = (0..m.cols)
                .map(|j| BTreeMap::from([(j, BigInt::one())]))
                .collect();
            (Some(u), Some(v))
        } else {
            (None, None)
        };
        Elim { rows, col_rows, u, v_cols }
    }

    fn entry(&self, r: usize, c: usize) -> BigInt {
        self.rows[r].get(&c).cloned().unwrap_or_else(BigInt::zero)
    }

    fn put(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.col_rows[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.col_rows[c].insert(r);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols: BTreeSet<usize> = self.rows[a]
            .keys()
            .chain(self.rows[b].keys())
            .copied()
            .collect();
        self.rows.swap(a, b);
        for c in cols {
            let in_a = self.rows[a].contains_key(&c);
            let in_b = self.rows[b].contains_key(&c);
            if in_a {
                self.col_rows[c].insert(a);
            } else {
                self.col_rows[c].remove(&a);
            }
            if in_b {
                self.col_rows[c].insert(b);
            } else {
                self.col_rows[c].remove(&b);
            }
        }
        if let Some(u) = &mut self.u {
            u.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let touched: Vec<usize> = self.col_rows[a]
            .union(&self.col_rows[b])
            .copied()
            .collect();
        for r in touched {
            let va = self.rows[r].remove(&a);
            let vb = self.rows[r].remove(&b);
            if let Some(vb) = vb {
                self.rows[r].insert(a, vb);
            }
            if let Some(va) = va {
                self.rows[r].insert(b, va);
            }
        }
        self.col_rows.swap(a, b);
        if let Some(v) = &mut self.v_cols {
            v.swap(a, b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for val in self.rows[r].values_mut() {
            *val = -std::mem::take(val);
        }
        if let Some(u) = &mut self.u {
            for val in u[r].values_mut() {
                *val = -std::mem::take(val);
            }
        }
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let updates: Vec<(usize, BigInt)> =
            self.rows[k].iter().map(|(&c, v)| (c, q * v)).collect();
        for (c, d) in updates {
            let cur = self.entry(i, c) - d;
            self.put(i, c, cur);
        }
        if let Some(u) = &mut self.u {
            let updates: Vec<(usize, BigInt)> =
                u[k].iter().map(|(&c, v)| (c, q * v)).collect();
            for (c, d) in updates {
                let cur = u[i].get(&c).cloned().unwrap_or_else(BigInt::zero) - d;
                if cur.is_zero() {
                    u[i].remove(&c);
                } else {
                    u[i].insert(c, cur);
                }
            }
        }
    }

    /// col_j -= q * col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let touched: Vec<usize> = self.col_rows[k].iter().copied().collect();
        for r in touched {
            let d = q * self.rows[r].get(&k).unwrap();
            let cur = self.entry(r, j) - d;
            self.put(r, j, cur);
        }
        if let Some(v) = &mut self.v_cols {
            let updates: Vec<(usize, BigInt)> =
                v[k].iter().map(|(&r, val)| (r, q * val)).collect();
            for (r, d) in updates {
                let cur = v[j].get(&r).cloned().unwrap_or_else(BigInt::zero) - d;
                if cur.is_zero() {
                    v[j].remove(&r);
                } else {
                    v[j].insert(r, cur);
                }
            }
        }
    }

    /// Pivot rule: the row-major-first entry of minimal absolute value in the
    /// active region (rows and cols >= t). Deterministic, and the scan stops
    /// early once an entry of absolute value 1 is seen.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize, BigInt)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for r in t..self.rows.len() {
            for (&c, v) in self.rows[r].range(t..) {
                let a = v.abs();
                match &best {
                    Some((_, _, b)) if *b <= a => {}
                    _ => {
                        let unit = a.is_one();
                        best = Some((r, c, a));
                        if unit {
                            return best;
                        }
                    }
                }
            }
        }
        best
    }
}

fn run_smith(m: &IntMatrix, track: bool) -> (SmithForm, Option<(IntMatrix, IntMatrix)>) {
    let mut e = Elim::new(m, track);
    let steps = m.rows.min(m.cols);
    let mut factors: Vec<BigUint> = Vec::new();

    for t in 0..steps {
        while let Some((pr, pc, _)) = e.find_pivot(t) {
            e.swap_rows(t, pr);
            e.swap_cols(t, pc);
            if e.entry(t, t).is_negative() {
                e.negate_row(t);
            }
            let p = e.entry(t, t);

            let mut dirty = false;
            let below: Vec<usize> =
                e.col_rows[t].iter().copied().filter(|&r| r != t).collect();
            for r in below {
                let a = e.entry(r, t);
                let q = &a / &p;
                e.row_sub(r, t, &q);
                if !e.entry(r, t).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let right: Vec<usize> = e.rows[t]
                .keys()
                .copied()
                .filter(|&c| c != t)
                .collect();
            for c in right {
                let a = e.entry(t, c);
                let q = &a / &p;
                e.col_sub(c, t, &q);
                if !e.entry(t, c).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }

            // Row and column t are clean; force the divisibility chain.
            let offender = (t + 1..e.rows.len()).find(|&r| {
                e.rows[r].range(t + 1..).any(|(_, v)| !(v % &p).is_zero())
            });
            match offender {
                Some(r) => {
                    let minus_one = -BigInt::one();
                    e.row_sub(t, r, &minus_one); // row_t += row_r
                }
                None => break,
            }
        }
        let p = e.entry(t, t);
        if p.is_zero() {
            break;
        }
        factors.push(p.to_biguint().unwrap());
    }

    for w in factors.windows(2) {
        debug_assert!((&w[1] % &w[0]).is_zero(), "invariant factor chain broken");
    }

    let rank = factors.len();
    let form = SmithForm { invariant_factors: factors, rank };
    let transforms = if track {
        let mut u = IntMatrix::zero(m.rows, m.rows);
        for (i, row) in e.u.unwrap().into_iter().enumerate() {
            for (c, v) in row {
                u.set(i, c, v);
            }
        }
        let mut v = IntMatrix::zero(m.cols, m.cols);
        for (j, col) in e.v_cols.unwrap().into_iter().enumerate() {
            for (r, val) in col {
                v.set(r, j, val);
            }
        }
        Some((u, v))
    } else {
        None
    };
    (form, transforms)
}

/// Smith normal form by classical elimination with minimal-nonzero-entry
/// pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    run_smith(m, false).0
}

/// As `smith_normal_form`, also returning unimodular `U`, `V` with
/// `U * A * V` diagonal with the invariant factors on the diagonal.
pub fn smith_normal_form_with_transforms(m: &IntMatrix) -> (SmithForm, IntMatrix, IntMatrix) {
    let (form, t) = run_smith(m, true);
    let (u, v) = t.unwrap();
    (form, u, v)
}

/// A bounded cochain complex of finitely generated free Z-modules, stored as
/// explicit coboundary matrices over contiguous degrees `lo..=hi`.
#[derive(Clone, Debug)]
pub struct CochainComplexZ {
    lo: i32,
    sizes: Vec<usize>,
    /// `deltas[k]` is the coboundary out of degree `lo + k`, with
    /// `size(lo+k)` columns and `size(lo+k+1)` rows (0 rows at the top).
    deltas: Vec<IntMatrix>,
}

impl CochainComplexZ {
    pub fn new(lo: i32, sizes: Vec<usize>, deltas: Vec<IntMatrix>) -> Self {
        assert!(!sizes.is_empty(), "complex needs at least one degree");
        assert_eq!(sizes.len(), deltas.len());
        for (k, d) in deltas.iter().enumerate() {
            assert_eq!(d.cols(), sizes[k], "coboundary shape at degree {}", lo + k as i32);
            let next = sizes.get(k + 1).copied().unwrap_or(0);
            assert_eq!(d.rows(), next, "coboundary shape at degree {}", lo + k as i32);
        }
        for k in 0..deltas.len().saturating_sub(1) {
            assert!(
                deltas[k + 1].mul(&deltas[k]).is_zero(),
                "coboundary composed with coboundary is nonzero at degree {}",
                lo + k as i32
            );
        }
        CochainComplexZ { lo, sizes, deltas }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.sizes.len() as i32 - 1
    }

    pub fn size(&self, n: i32) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.sizes[(n - self.lo) as usize]
        }
    }

    pub fn delta(&self, n: i32) -> Option<&IntMatrix> {
        if n < self.lo || n > self.hi() {
            None
        } else {
            Some(&self.deltas[(n - self.lo) as usize])
        }
    }
}

/// A finitely generated abelian group `Z^betti + sum Z/d` with the torsion
/// part in invariant-factor form (each entry > 1, ascending divisibility).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub betti: usize,
    #[serde(serialize_with = "ser_torsion")]
    pub torsion: Vec<BigUint>,
}

fn ser_torsion<S: serde::Serializer>(t: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|d| d.to_string()))
}

impl CohomologyGroup {
    pub fn zero() -> Self {
        CohomologyGroup { betti: 0, torsion: Vec::new() }
    }

    pub fn free(betti: usize) -> Self {
        CohomologyGroup { betti, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Direct sum, recombining the torsion multiset into canonical
    /// invariant-factor form (per prime, largest powers pair up first).
    pub fn direct_sum<'a>(groups: impl IntoIterator<Item = &'a CohomologyGroup>) -> Self {
        let mut betti = 0;
        let mut by_prime: BTreeMap<BigUint, Vec<u32>> = BTreeMap::new();
        for g in groups {
            betti += g.betti;
            for d in &g.torsion {
                for (p, e) in factorize(d) {
                    by_prime.entry(p).or_default().push(e);
                }
            }
        }
        let mut slots = 0usize;
        for exps in by_prime.values_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            slots = slots.max(exps.len());
        }
        let mut torsion = vec![BigUint::one(); slots];
        for (p, exps) in &by_prime {
            for (k, &e) in exps.iter().enumerate() {
                torsion[k] *= p.pow(e);
            }
        }
        torsion.reverse(); // ascending divisibility
        CohomologyGroup { betti, torsion }
    }
}

fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Relative simplicial cochain complex of a pair: the degree-n basis is the
/// set of n-faces of `total` not in `sub`, and the coboundary keeps only
/// cofaces outside `sub`.
pub fn relative_cochain_complex(pair: &ComplexPair) -> CochainComplexZ {
    let total = pair.total();
    let dim = total.dim().max(0);
    let sub_faces = pair.sub_faces_in_total();

    let mut bases: Vec<Vec<&[u32]>> = vec![Vec::new(); (dim + 1) as usize];
    let mut index: BTreeMap<&[u32], usize> = BTreeMap::new();
    for face in total.faces() {
        if sub_faces.contains(face.as_slice()) {
            continue;
        }
        let k = face.len() - 1;
        index.insert(face.as_slice(), bases[k].len());
        bases[k].push(face.as_slice());
    }

    let sizes: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut deltas: Vec<IntMatrix> = Vec::with_capacity(sizes.len());
    for k in 0..sizes.len() {
        let rows = sizes.get(k + 1).copied().unwrap_or(0);
        let mut d = IntMatrix::zero(rows, sizes[k]);
        if rows > 0 {
            for (row, &sigma) in bases[k + 1].iter().enumerate() {
                let mut sign = BigInt::one();
                for i in 0..sigma.len() {
                    let mut tau: Vec<u32> = sigma.to_vec();
                    tau.remove(i);
                    if let Some(&col) = index.get(tau.as_slice()) {
                        if tau.len() == k + 1 {
                            d.add_to(row, col, &sign);
                        }
                    }
                    sign = -sign;
                }
            }
        }
        deltas.push(d);
    }
    CochainComplexZ::new(0, sizes, deltas)
}

/// Cochain complex of the augmented complex (one extra generator in degree
/// -1 mapping to the sum of vertex duals). Empty complexes get reduced
/// H^{-1} = Z, which is what makes dimension formulas treat a maximal
/// element's empty upper link as a degree-0 witness.
pub fn reduced_cochain_complex(c: &SimplicialComplex) -> CochainComplexZ {
    let pair = ComplexPair::full(c.clone());
    let abs = relative_cochain_complex(&pair);
    let dim = c.dim().max(-1);
    let mut sizes = vec![1usize];
    let mut deltas = Vec::new();

    let vertices = abs.size(0);
    let mut aug = IntMatrix::zero(vertices, 1);
    for r in 0..vertices {
        aug.set(r, 0, BigInt::one());
    }
    deltas.push(aug);
    if dim >= 0 {
        for n in 0..=dim {
            sizes.push(abs.size(n));
            if n < dim {
                deltas.push(abs.delta(n).unwrap().clone());
            } else {
                deltas.push(IntMatrix::zero(0, abs.size(n)));
            }
        }
    } else {
        deltas[0] = IntMatrix::zero(0, 1);
    }
    CochainComplexZ::new(-1, sizes, deltas)
}

/// H^n of the complex: kernel of the outgoing coboundary modulo the image of
/// the incoming one, extracted from two Smith normal forms.
pub fn cohomology(cx: &CochainComplexZ, n: i32) -> Result<CohomologyGroup, ZError> {
    if n < cx.lo() || n > cx.hi() {
        return Err(ZError::DegreeOutOfRange { degree: n, lo: cx.lo(), hi: cx.hi() });
    }
    let rank_out = smith_normal_form(cx.delta(n).unwrap()).rank;
    let incoming = if n == cx.lo() { None } else { cx.delta(n - 1) };
    let (rank_in, torsion) = match incoming {
        None => (0, Vec::new()),
        Some(d) => {
            let f = smith_normal_form(d);
            let t = f
                .invariant_factors
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect();
            (f.rank, t)
        }
    };
    let betti = cx.size(n) - rank_out - rank_in;
    Ok(CohomologyGroup { betti, torsion })
}

/// Cohomology in every degree of the complex, computing each SNF once.
pub fn cohomology_all(cx: &CochainComplexZ) -> Vec<(i32, CohomologyGroup)> {
    let forms: Vec<SmithForm> = (cx.lo()..=cx.hi())
        .map(|n| smith_normal_form(cx.delta(n).unwrap()))
        .collect();
    (cx.lo()..=cx.hi())
        .map(|n| {
            let k = (n - cx.lo()) as usize;
            let rank_out = forms[k].rank;
            let (rank_in, torsion) = if k == 0 {
                (0, Vec::new())
            } else {
                let f = &forms[k - 1];
                let t = f
                    .invariant_factors
                    .iter()
                    .filter(|d| !d.is_one())
                    .cloned()
                    .collect();
                (f.rank, t)
            };
            (n, CohomologyGroup { betti: cx.size(n) - rank_out - rank_in, torsion })
        })
        .collect()
}

/// Reduced cohomology of the augmented complex; degrees outside the complex
/// range are zero, and the empty complex gives reduced H^{-1} = Z.
pub fn reduced_cohomology(c: &SimplicialComplex, n: i32) -> CohomologyGroup {
    assert!(n >= -1, "reduced cohomology is defined in degrees >= -1");
    let cx = reduced_cochain_complex(c);
    if n > cx.hi() {
        return CohomologyGroup::zero();
    }
    cohomology(&cx, n).unwrap()
}

/// Reduced cohomology in all degrees -1..=dim.
pub fn reduced_cohomology_all(c: &SimplicialComplex) -> Vec<(i32, CohomologyGroup)> {
    cohomology_all(&reduced_cochain_complex(c))
}

/// Degree -> group with the zero groups dropped, so complexes over
/// different degree ranges compare as cohomology.
pub fn nonzero_map(groups: &[(i32, CohomologyGroup)]) -> BTreeMap<i32, CohomologyGroup> {
    groups
        .iter()
        .filter(|(_, g)| !g.is_zero())
        .map(|(n, g)| (*n, g.clone()))
        .collect()
}

/// An integer cochain keyed by face vertex names, usable across complexes
/// that share vertex names. Zero values are never stored, so equality of
/// maps is equality of cochains. All keys of one cochain have equal length
/// (the degree plus one); the empty cochain is zero in every degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cochain {
    values: BTreeMap<Vec<String>, BigInt>,
}

impl Cochain {
    pub fn zero() -> Self {
        Cochain::default()
    }

    /// The dual of a single face: 1 there, 0 elsewhere.
    pub fn dual(face: Vec<String>) -> Self {
        let mut c = Cochain::zero();
        c.add(face, BigInt::one());
        c
    }

    pub fn add(&mut self, face: Vec<String>, value: BigInt) {
        use std::collections::btree_map::Entry;
        if value.is_zero() {
            return;
        }
        if let Some(first) = self.values.keys().next() {
            debug_assert_eq!(first.len(), face.len(), "mixed-degree cochain");
        }
        match self.values.entry(face) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(value);
            }
        }
    }

    pub fn value(&self, face: &[String]) -> BigInt {
        self.values.get(face).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<String>, &BigInt)> {
        self.values.iter()
    }

    /// The number of vertices in each supported face, if any.
    pub fn support_size(&self) -> Option<usize> {
        self.values.keys().next().map(|k| k.len())
    }
}

/// Relative coboundary on a pair: the value on each coface of the total
/// complex that is not in the subcomplex, with the usual alternating signs.
/// The input must vanish on the subcomplex (relative cochain); faces of the
/// subcomplex are simply never read, which is the same thing.
pub fn pair_coboundary(pair: &ComplexPair, f: &Cochain) -> Cochain {
    let mut out = Cochain::zero();
    let Some(k) = f.support_size() else {
        return out;
    };
    let sub_faces = pair.sub_faces_in_total();
    for face in pair.total().faces() {
        if face.len() != k + 1 || sub_faces.contains(face.as_slice()) {
            continue;
        }
        let names = pair.total().face_names(face);
        let mut value = BigInt::zero();
        let mut sign = BigInt::one();
        for i in 0..names.len() {
            let mut tau = names.clone();
            tau.remove(i);
            value += &sign * f.value(&tau);
            sign = -sign;
        }
        out.add(names, value);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scomplex::SimplicialComplex;

    fn mat(rows: usize, cols: usize, data: &[&[i64]]) -> IntMatrix {
        let mut m = IntMatrix::zero(rows, cols);
        for (r, row) in data.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, BigInt::from(v));
            }
        }
        m
    }

    fn factors(m: &IntMatrix) -> Vec<u64> {
        smith_normal_form(m)
            .invariant_factors
            .iter()
            .map(|d| u64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn snf_of_zero_and_identity() {
        assert_eq!(factors(&IntMatrix::zero(2, 3)), Vec::<u64>::new());
        assert_eq!(smith_normal_form(&IntMatrix::zero(2, 3)).rank, 0);
        assert_eq!(factors(&IntMatrix::identity(3)), vec![1, 1, 1]);
    }

    #[test]
    fn snf_hand_reduced_2x2() {
        // [[2,4],[6,8]]: gcd of entries 2, |det| 8, so factors (2, 4).
        let m = mat(2, 2, &[&[2, 4], &[6, 8]]);
        assert_eq!(factors(&m), vec![2, 4]);
    }

    #[test]
    fn snf_diagonal_needs_recombination() {
        let m = mat(2, 2, &[&[2, 0], &[0, 3]]);
        assert_eq!(factors(&m), vec![1, 6]);
    }

    #[test]
    fn snf_transforms_are_consistent() {
        let samples = [
            mat(2, 2, &[&[2, 4], &[6, 8]]),
            mat(3, 2, &[&[0, -3], &[5, 0], &[7, 2]]),
            mat(2, 4, &[&[4, 6, 0, -2], &[2, 2, 2, 2]]),
        ];
        for a in &samples {
            let (form, u, v) = smith_normal_form_with_transforms(a);
            let d = u.mul(&a.mul(&v));
            for (r, c, val) in d.iter() {
                assert_eq!(r, c, "off-diagonal entry after reduction");
                let expect = BigInt::from(form.invariant_factors[r].clone());
                assert_eq!(*val, expect);
            }
            assert_eq!(d.nnz(), form.rank);
        }
    }

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::from_maximal_faces(
            vec!["a".into(), "b".into(), "c".into()],
            &[
                vec!["a".into(), "b".into()],
                vec!["a".into(), "c".into()],
                vec!["b".into(), "c".into()],
            ],
        )
        .unwrap()
    }

    fn solid_triangle() -> SimplicialComplex {
        SimplicialComplex::from_maximal_faces(
            vec!["a".into(), "b".into(), "c".into()],
            &[vec!["a".into(), "b".into(), "c".into()]],
        )
        .unwrap()
    }

    #[test]
    fn relative_complex_of_triangle_mod_boundary() {
        let pair = ComplexPair::new(solid_triangle(), hollow_triangle()).unwrap();
        let cx = relative_cochain_complex(&pair);
        assert_eq!((cx.lo(), cx.hi()), (0, 2));
        assert_eq!((cx.size(0), cx.size(1), cx.size(2)), (0, 0, 1));
        assert_eq!(cohomology(&cx, 2).unwrap(), CohomologyGroup::free(1));
        assert_eq!(cohomology(&cx, 0).unwrap(), CohomologyGroup::zero());
        assert_eq!(cohomology(&cx, 1).unwrap(), CohomologyGroup::zero());
    }

    #[test]
    fn relative_complex_of_interval_mod_one_endpoint() {
        let total = SimplicialComplex::from_maximal_faces(
            vec!["a".into(), "b".into(), "c".into()],
            &[vec!["a".into(), "b".into()], vec!["b".into(), "c".into()]],
        )
        .unwrap();
        let sub = SimplicialComplex::from_maximal_faces(vec!["a".into()], &[vec!["a".into()]])
            .unwrap();
        let pair = ComplexPair::new(total, sub).unwrap();
        let cx = relative_cochain_complex(&pair);
        assert_eq!((cx.size(0), cx.size(1)), (2, 2));
        assert_eq!(cohomology(&cx, 0).unwrap(), CohomologyGroup::zero());
        assert_eq!(cohomology(&cx, 1).unwrap(), CohomologyGroup::zero());
    }

    #[test]
    fn pair_with_empty_sub_is_absolute_cohomology() {
        let c = hollow_triangle();
        let pair = ComplexPair::full(c.clone());
        let cx = relative_cochain_complex(&pair);
        assert_eq!(cohomology(&cx, 0).unwrap(), CohomologyGroup::free(1));
        assert_eq!(cohomology(&cx, 1).unwrap(), CohomologyGroup::free(1));
    }

    #[test]
    fn pair_of_complex_with_itself_vanishes() {
        let c = hollow_triangle();
        let pair = ComplexPair::new(c.clone(), c).unwrap();
        let cx = relative_cochain_complex(&pair);
        for n in 0..=cx.hi() {
            assert!(cohomology(&cx, n).unwrap().is_zero());
        }
    }

    #[test]
    fn projective_plane_has_degree_two_torsion() {
        let rp2 = crate::instances::projective_plane_six_vertex();
        let cx = relative_cochain_complex(&ComplexPair::full(rp2));
        let h2 = cohomology(&cx, 2).unwrap();
        assert_eq!(h2.betti, 0);
        assert_eq!(h2.torsion, vec![BigUint::from(2u32)]);
        assert_eq!(cohomology(&cx, 1).unwrap(), CohomologyGroup::zero());
        assert_eq!(cohomology(&cx, 0).unwrap(), CohomologyGroup::free(1));
    }

    #[test]
    fn reduced_cohomology_conventions() {
        let empty = SimplicialComplex::empty();
        assert_eq!(reduced_cohomology(&empty, -1), CohomologyGroup::free(1));

        let two_points = SimplicialComplex::from_maximal_faces(
            vec!["a".into(), "b".into()],
            &[vec!["a".into()], vec!["b".into()]],
        )
        .unwrap();
        assert_eq!(reduced_cohomology(&two_points, -1), CohomologyGroup::zero());
        assert_eq!(reduced_cohomology(&two_points, 0), CohomologyGroup::free(1));

        let cone = solid_triangle();
        for n in -1..=2 {
            assert!(reduced_cohomology(&cone, n).is_zero());
        }
    }

    #[test]
    fn degree_out_of_range_is_an_error() {
        let cx = relative_cochain_complex(&ComplexPair::full(hollow_triangle()));
        assert_eq!(
            cohomology(&cx, 5),
            Err(ZError::DegreeOutOfRange { degree: 5, lo: 0, hi: 1 })
        );
    }

    #[test]
    #[should_panic(expected = "coboundary composed with coboundary")]
    fn complex_construction_rejects_non_complexes() {
        let d0 = mat(1, 1, &[&[1]]);
        let d1 = mat(1, 1, &[&[1]]);
        let _ = CochainComplexZ::new(0, vec![1, 1, 1], vec![d0, d1, mat(0, 1, &[])]);
    }

    fn cofactor_det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        assert_eq!(n, m.cols());
        fn go(a: &Vec<Vec<BigInt>>, cols: &mut Vec<usize>, row: usize) -> BigInt {
            if row == a.len() {
                return BigInt::one();
            }
            let mut acc = BigInt::zero();
            for pos in 0..cols.len() {
                let c = cols.remove(pos);
                let term = &a[row][c] * go(a, cols, row + 1);
                if pos % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
                cols.insert(pos, c);
            }
            acc
        }
        let dense: Vec<Vec<BigInt>> =
            (0..n).map(|r| (0..n).map(|c| m.get(r, c)).collect()).collect();
        go(&dense, &mut (0..n).collect(), 0)
    }

    fn bareiss_rank(m: &IntMatrix) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
            .collect();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..m.cols() {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in (rank + 1)..a.len() {
                for c in (col + 1)..m.cols() {
                    let num = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                    a[r][c] = num / &prev;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
            if rank == a.len() {
                break;
            }
        }
        rank
    }

    proptest::proptest! {
        /// Random sparse matrices: the reduction is diagonal with a
        /// divisibility chain, the transforms are unimodular, and the rank
        /// agrees with fraction-free elimination.
        #[test]
        fn snf_properties(entries in proptest::collection::vec((0usize..6, 0usize..6, -9i64..=9), 0..20),
                          rows in 1usize..6, cols in 1usize..6) {
            let mut a = IntMatrix::zero(rows, cols);
            for (r, c, v) in entries {
                if r < rows && c < cols {
                    a.set(r, c, BigInt::from(v));
                }
            }
            let (form, u, v) = smith_normal_form_with_transforms(&a);
            let d = u.mul(&a.mul(&v));
            for (r, c, val) in d.iter() {
                proptest::prop_assert_eq!(r, c);
                proptest::prop_assert_eq!(val.clone(), BigInt::from(form.invariant_factors[r].clone()));
            }
            proptest::prop_assert_eq!(d.nnz(), form.rank);
            for w in form.invariant_factors.windows(2) {
                proptest::prop_assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
            }
            let du = cofactor_det(&u);
            let dv = cofactor_det(&v);
            proptest::prop_assert!(du.magnitude() == &BigUint::from(1u32));
            proptest::prop_assert!(dv.magnitude() == &BigUint::from(1u32));
            proptest::prop_assert_eq!(form.rank, bareiss_rank(&a));
        }
    }

    #[test]
    fn direct_sum_recombines_torsion() {
        let a = CohomologyGroup { betti: 1, torsion: vec![BigUint::from(2u32)] };
        let b = CohomologyGroup { betti: 0, torsion: vec![BigUint::from(3u32)] };
        let s = CohomologyGroup::direct_sum([&a, &b]);
        assert_eq!(s.betti, 1);
        assert_eq!(s.torsion, vec![BigUint::from(6u32)]);

        let c = CohomologyGroup { betti: 0, torsion: vec![BigUint::from(4u32), BigUint::from(12u32)] };
        let d = CohomologyGroup { betti: 0, torsion: vec![BigUint::from(18u32)] };
        let s = CohomologyGroup::direct_sum([&c, &d]);
        // 4, 12, 18 -> 2-parts (4, 4, 2), 3-parts (3, 9): chain (2, 12, 36).
        let expect: Vec<BigUint> =
            [2u32, 12, 36].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(s.torsion, expect);
    }
}
