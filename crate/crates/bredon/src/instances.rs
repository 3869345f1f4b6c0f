//! Named example inputs shared by tests, the acceptance suite, and the
//! bundled corpus: small triangulated surfaces, polygon posets, and finite
//! developments with their expected dimensions.

use rand::Rng;

use crate::cog::SimpleComplexOfGroups;
use crate::pgroup::{
    alternating, dihedral, direct_product, symmetric, PermGroup, Permutation,
};
use crate::poset::FinitePoset;
use crate::scomplex::SimplicialComplex;
use crate::DEFAULT_SIZE_CAP;

fn face_names(faces: &[&[&str]]) -> Vec<Vec<String>> {
    faces
        .iter()
        .map(|f| f.iter().map(|s| s.to_string()).collect())
        .collect()
}

/// The minimal 6-vertex triangulation of the real projective plane
/// (antipodal quotient of the icosahedron). Every one of the 15 edges lies
/// in exactly two of the 10 triangles.
pub fn projective_plane_six_vertex() -> SimplicialComplex {
    let faces: &[&[&str]] = &[
        &["1", "2", "3"],
        &["1", "3", "4"],
        &["1", "4", "5"],
        &["1", "5", "6"],
        &["1", "2", "6"],
        &["2", "3", "5"],
        &["3", "4", "6"],
        &["2", "4", "5"],
        &["3", "5", "6"],
        &["2", "4", "6"],
    ];
    let vertices: Vec<String> = (1..=6).map(|i| i.to_string()).collect();
    SimplicialComplex::from_maximal_faces(vertices, &face_names(faces)).unwrap()
}

/// The 7-vertex triangulation of the torus: faces {i, i+1, i+3} and
/// {i, i+2, i+3} mod 7. All 21 pairs of vertices are edges.
pub fn torus_seven_vertex() -> SimplicialComplex {
    let name = |k: u32| (k % 7).to_string();
    let mut faces = Vec::new();
    for i in 0..7u32 {
        faces.push(vec![name(i), name(i + 1), name(i + 3)]);
        faces.push(vec![name(i), name(i + 2), name(i + 3)]);
    }
    let vertices: Vec<String> = (0..7).map(|i| i.to_string()).collect();
    SimplicialComplex::from_maximal_faces(vertices, &faces).unwrap()
}

/// A 9-vertex triangulation of the Klein bottle: the 3x3 grid on a square,
/// top glued to bottom straight and right glued to left with a flip.
pub fn klein_bottle_nine_vertex() -> SimplicialComplex {
    // Vertex (i, j) of the grid; the right seam x = 3 lands on column 0
    // with the y coordinate reversed.
    let wrap = |i: u32, j: u32| -> String {
        if i == 3 {
            format!("v{}{}", 0, (3 - j % 3) % 3)
        } else {
            format!("v{}{}", i, j % 3)
        }
    };
    let mut faces = Vec::new();
    for i in 0..3u32 {
        for j in 0..3u32 {
            let a = wrap(i, j);
            let b = wrap(i + 1, j);
            let c = wrap(i + 1, j + 1);
            let d = wrap(i, j + 1);
            faces.push(vec![a.clone(), b, c.clone()]);
            faces.push(vec![a, c, d]);
        }
    }
    let mut vertices = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            vertices.push(format!("v{i}{j}"));
        }
    }
    SimplicialComplex::from_maximal_faces(vertices, &faces).unwrap()
}

/// The boundary of the 3-simplex: a 2-sphere.
pub fn sphere_two() -> SimplicialComplex {
    let faces: &[&[&str]] = &[
        &["a", "b", "c"],
        &["a", "b", "d"],
        &["a", "c", "d"],
        &["b", "c", "d"],
    ];
    let vertices = vec!["a".into(), "b".into(), "c".into(), "d".into()];
    SimplicialComplex::from_maximal_faces(vertices, &face_names(faces)).unwrap()
}

/// The hollow n-gon: a circle with n vertices and n edges.
pub fn circle(n: usize) -> SimplicialComplex {
    assert!(n >= 3);
    let vertices: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let faces: Vec<Vec<String>> = (0..n)
        .map(|i| vec![format!("p{i}"), format!("p{}", (i + 1) % n)])
        .collect();
    SimplicialComplex::from_maximal_faces(vertices, &faces).unwrap()
}

/// The face poset of an n-gon ordered by reverse inclusion: the 2-cell `f`
/// is the minimum, below the edges `e0..`, which are below their endpoint
/// vertices `v0..`. Returns the poset together with the partition of its
/// elements into singleton classes.
pub fn ngon_poset(n: usize) -> (FinitePoset, Vec<Vec<String>>) {
    assert!(n >= 3);
    let mut elements = vec!["f".to_string()];
    elements.extend((0..n).map(|i| format!("e{i}")));
    elements.extend((0..n).map(|i| format!("v{i}")));
    let mut relations = Vec::new();
    for i in 0..n {
        relations.push(("f".to_string(), format!("e{i}")));
        relations.push((format!("e{i}"), format!("v{i}")));
        relations.push((format!("e{i}"), format!("v{}", (i + 1) % n)));
    }
    let poset = FinitePoset::new(elements.clone(), &relations).unwrap();
    let classes = elements.into_iter().map(|e| vec![e]).collect();
    (poset, classes)
}

fn chain_poset(names: &[&str]) -> FinitePoset {
    let elements: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let relations: Vec<(String, String)> = names
        .windows(2)
        .map(|w| (w[0].to_string(), w[1].to_string()))
        .collect();
    FinitePoset::new(elements, &relations).unwrap()
}

/// S3 over the chain u < t, with the transposition subgroup at the bottom
/// and the whole group on top. The development is the cone on three points.
pub fn s3_chain() -> SimpleComplexOfGroups {
    let sub = PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[0, 1]])]).unwrap();
    SimpleComplexOfGroups::new(
        chain_poset(&["u", "t"]),
        symmetric(3),
        vec![("u".into(), sub), ("t".into(), symmetric(3))],
        DEFAULT_SIZE_CAP,
    )
    .unwrap()
}

/// S4 over a branching poset: the chain a < b < c carries the subgroup
/// chain <(0 1)> < <(0 1), (2 3)> < S4, and an incomparable d < c carries
/// the 4-cycle.
pub fn s4_branch() -> SimpleComplexOfGroups {
    let q = FinitePoset::new(
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
        &[
            ("a".to_string(), "b".to_string()),
            ("b".to_string(), "c".to_string()),
            ("d".to_string(), "c".to_string()),
        ],
    )
    .unwrap();
    let p_a = PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[0, 1]])]).unwrap();
    let p_b = PermGroup::new(
        4,
        vec![
            Permutation::from_cycles(4, &[&[0, 1]]),
            Permutation::from_cycles(4, &[&[2, 3]]),
        ],
    )
    .unwrap();
    let p_d = PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[0, 1, 2, 3]])]).unwrap();
    SimpleComplexOfGroups::new(
        q,
        symmetric(4),
        vec![
            ("a".into(), p_a),
            ("b".into(), p_b),
            ("c".into(), symmetric(4)),
            ("d".into(), p_d),
        ],
        DEFAULT_SIZE_CAP,
    )
    .unwrap()
}

/// The dihedral group of the square over a chain of length three: one
/// reflection, the Klein subgroup of diagonal reflections, the full group.
pub fn d4_chain() -> SimpleComplexOfGroups {
    let p_a = PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[1, 3]])]).unwrap();
    let p_b = PermGroup::new(
        4,
        vec![
            Permutation::from_cycles(4, &[&[1, 3]]),
            Permutation::from_cycles(4, &[&[0, 2]]),
        ],
    )
    .unwrap();
    SimpleComplexOfGroups::new(
        chain_poset(&["a", "b", "c"]),
        dihedral(4),
        vec![("a".into(), p_a), ("b".into(), p_b), ("c".into(), dihedral(4))],
        DEFAULT_SIZE_CAP,
    )
    .unwrap()
}

/// One poset element with a local group of index two: the development is a
/// 0-sphere, so the acyclicity check must fail at the trivial subgroup.
pub fn index_two_sphere() -> SimpleComplexOfGroups {
    let q = FinitePoset::new(vec!["q".into()], &[]).unwrap();
    SimpleComplexOfGroups::new(
        q,
        crate::pgroup::cyclic(2),
        vec![("q".into(), PermGroup::trivial(2))],
        DEFAULT_SIZE_CAP,
    )
    .unwrap()
}

/// Two incomparable elements carrying the same subgroup of S3: the
/// development is six isolated vertices, and the two elements share an
/// equal-local-group class.
pub fn antichain_pair() -> SimpleComplexOfGroups {
    let q = FinitePoset::new(vec!["a".into(), "b".into()], &[]).unwrap();
    let sub = PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[0, 1]])]).unwrap();
    SimpleComplexOfGroups::new(
        q,
        symmetric(3),
        vec![("a".into(), sub.clone()), ("b".into(), sub)],
        DEFAULT_SIZE_CAP,
    )
    .unwrap()
}

/// Ambient groups for random instances: the base catalog and the direct
/// products that stay at order 120 or below.
pub fn group_catalog() -> Vec<(String, PermGroup)> {
    let s3 = symmetric(3);
    let s4 = symmetric(4);
    let d4 = dihedral(4);
    let a4 = alternating(4);
    vec![
        ("S3".into(), s3.clone()),
        ("S4".into(), s4),
        ("D4".into(), d4.clone()),
        ("A4".into(), a4.clone()),
        ("S3xS3".into(), direct_product(&s3, &s3)),
        ("S3xD4".into(), direct_product(&s3, &d4)),
        ("S3xA4".into(), direct_product(&s3, &a4)),
        ("D4xD4".into(), direct_product(&d4, &d4)),
        ("D4xA4".into(), direct_product(&d4, &a4)),
    ]
}

/// Draws a random valid instance: an ambient group from the catalog, a
/// random poset on at most six elements, and local groups grown upward
/// along the order (predecessor generators plus random elements), with an
/// occasional repeat of an earlier subgroup at minimal elements so that
/// equal-local-group classes with several members occur. Rejection-samples
/// until validation passes.
pub fn random_instance<R: Rng>(rng: &mut R, cap: usize) -> SimpleComplexOfGroups {
    loop {
        if let Some(s) = try_random_instance(rng, cap) {
            return s;
        }
    }
}

fn try_random_instance<R: Rng>(rng: &mut R, cap: usize) -> Option<SimpleComplexOfGroups> {
    let catalog = group_catalog();
    let (_, group) = &catalog[rng.gen_range(0..catalog.len())];
    let n = rng.gen_range(1..=6usize);
    let elements: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut relations = Vec::new();
    for i in 0..n {
        for k in (i + 1)..n {
            if rng.gen_bool(0.4) {
                relations.push((format!("q{i}"), format!("q{k}")));
            }
        }
    }
    let q = FinitePoset::new(elements, &relations).ok()?;
    let g_elems = group.enumerate(cap).ok()?.to_vec();
    let mut locals: Vec<PermGroup> = Vec::with_capacity(n);
    for i in 0..q.len() {
        let preds: Vec<usize> = (0..i).filter(|&p| q.lt_idx(p, i)).collect();
        if preds.is_empty() {
            if !locals.is_empty() && rng.gen_bool(0.4) {
                let copy = rng.gen_range(0..locals.len());
                locals.push(locals[copy].clone());
            } else {
                let mut gens = Vec::new();
                for _ in 0..rng.gen_range(0..=1) {
                    gens.push(g_elems[rng.gen_range(0..g_elems.len())].clone());
                }
                locals.push(PermGroup::new(group.degree(), gens).ok()?);
            }
            continue;
        }
        let mut gens: Vec<Permutation> = preds
            .iter()
            .flat_map(|&p| locals[p].generators().to_vec())
            .collect();
        let mut h = PermGroup::new(group.degree(), gens.clone()).ok()?;
        let mut attempts = 0;
        loop {
            let strict = preds
                .iter()
                .all(|&p| locals[p].order(cap).unwrap() < h.order(cap).unwrap());
            if strict && rng.gen_bool(0.6) {
                break;
            }
            if h.order(cap).ok()? == group.order(cap).ok()? {
                if !strict {
                    return None; // some predecessor already filled the group
                }
                break;
            }
            gens.push(g_elems[rng.gen_range(0..g_elems.len())].clone());
            h = PermGroup::new(group.degree(), gens.clone()).ok()?;
            attempts += 1;
            if attempts > 40 {
                return None;
            }
        }
        locals.push(h);
    }
    let named: Vec<(String, PermGroup)> = q
        .elements()
        .iter()
        .cloned()
        .zip(locals)
        .collect();
    SimpleComplexOfGroups::new(q.clone(), group.clone(), named, cap).ok()
}
