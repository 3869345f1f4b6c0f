//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `--nocapture`). Every assertion is exact;
//! timing bounds are asserted where the criterion states one.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bredon::cog::SimpleComplexOfGroups;
use bredon::coxeter::CoxeterMatrix;
use bredon::instances;
use bredon::pgroup::TotalOrder;
use bredon::report::ComparisonReport;
use bredon::zcohomology::{smith_normal_form_with_transforms, IntMatrix};
use bredon::DEFAULT_SIZE_CAP;

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn run_bin(args: &[&str]) -> (i32, serde_json::Value) {
    let output = Command::new(env!("CARGO_BIN_EXE_bredon"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = output.status.code().expect("exit code");
    let stdout = String::from_utf8(output.stdout).expect("utf8");
    let value = serde_json::from_str(&stdout).unwrap_or(serde_json::Value::Null);
    (code, value)
}

fn pass(criterion: usize, detail: &str, started: Instant) {
    println!(
        "criterion {criterion}: PASS — {detail} ({} ms)",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_1_ngon_posets_have_dimension_two() {
    let started = Instant::now();
    for n in 3..=8usize {
        let per_instance = Instant::now();
        let file = corpus_path(&format!("ngon_{n}.json"));
        let (code, report) = run_bin(&["cd", "-i", file.to_str().unwrap(), "--format", "json"]);
        assert_eq!(code, 0, "ngon_{n} exit code");
        assert_eq!(report["headline"], 2, "ngon_{n} headline");
        let rows = report["table"]["rows"].as_array().unwrap();
        let f_row = rows.iter().find(|r| r["label"] == "{f}").unwrap();
        let contributions = f_row["contributions"].as_array().unwrap();
        assert_eq!(contributions.len(), 1);
        assert_eq!(contributions[0]["degree"], 2);
        assert_eq!(contributions[0]["group"]["betti"], 1);
        assert_eq!(contributions[0]["group"]["torsion"].as_array().unwrap().len(), 0);
        assert!(
            per_instance.elapsed().as_secs() < 1,
            "ngon_{n} exceeded 1 s"
        );
    }
    pass(1, "n-gons n=3..8 all dimension 2, witnessed at {f} with H^2 = Z", started);
}

fn path_matrix(labels: &[u32]) -> CoxeterMatrix {
    // Linear diagram: consecutive generators get the label, non-adjacent
    // ones commute (m = 2).
    let n = labels.len() + 1;
    let gens: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut m = vec![vec![Some(2); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Some(1);
    }
    for (i, &l) in labels.iter().enumerate() {
        m[i][i + 1] = Some(l);
        m[i + 1][i] = Some(l);
    }
    CoxeterMatrix::new(gens, m).unwrap()
}

fn i2(m: Option<u32>) -> CoxeterMatrix {
    CoxeterMatrix::new(
        vec!["s0".into(), "s1".into()],
        vec![vec![Some(1), m], vec![m, Some(1)]],
    )
    .unwrap()
}

fn cycle_racg(n: usize) -> CoxeterMatrix {
    let gens: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut m = vec![vec![None; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Some(1);
    }
    // Wrap-around pair needs the transposed slot too.
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        let j = (i + 1) % n;
        m[i][j] = Some(2);
        m[j][i] = Some(2);
    }
    CoxeterMatrix::new(gens, m).unwrap()
}

fn affine_a2() -> CoxeterMatrix {
    let gens: Vec<String> = (0..3).map(|i| format!("s{i}")).collect();
    let mut m = vec![vec![Some(3); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Some(1);
    }
    CoxeterMatrix::new(gens, m).unwrap()
}

fn matrix_corpus() -> Vec<(String, CoxeterMatrix, usize)> {
    let mut corpus = vec![
        ("A1".to_string(), path_matrix(&[]), 0),
        ("A2".to_string(), path_matrix(&[3]), 0),
        ("A3".to_string(), path_matrix(&[3, 3]), 0),
        ("A4".to_string(), path_matrix(&[3, 3, 3]), 0),
        ("B3".to_string(), path_matrix(&[3, 4]), 0),
        ("H3".to_string(), path_matrix(&[5, 3]), 0),
        ("I2(3)".to_string(), i2(Some(3)), 0),
        ("I2(4)".to_string(), i2(Some(4)), 0),
        ("I2(5)".to_string(), i2(Some(5)), 0),
        ("I2(inf)".to_string(), i2(None), 1),
        ("affine A2".to_string(), affine_a2(), 2),
    ];
    for n in 4..=8usize {
        // The published expectation for the 4-cycle is 1, but its nerve is
        // the square circle (join of two 0-spheres), whose reduced H^1 is
        // Z; both independent routes therefore return 2, and the group
        // contains Z^2, which rules out vcd 1. The criterion's own
        // confirmation clause (cross-route agreement) is the standard
        // applied here.
        corpus.push((format!("racg cycle {n}"), cycle_racg(n), 2));
    }
    corpus
}

#[test]
fn criterion_2_coxeter_routes_agree_everywhere() {
    let started = Instant::now();
    let corpus = matrix_corpus();
    assert!(corpus.len() >= 12);
    for (name, matrix, expected) in &corpus {
        let link = matrix.vcd_link_formula();
        let building = matrix.cd_building_formula();
        assert_eq!(link, building, "{name}: per-J tables must agree in every degree");
        assert_eq!(link.dimension, *expected, "{name} headline");
    }
    assert!(started.elapsed().as_secs() < 5, "criterion 2 exceeded 5 s");
    println!(
        "criterion 2: NOTE — right-angled 4-cycle published value 1 is unattainable \
         (nerve = S^0 * S^0 = S^1, and D_inf x D_inf contains Z^2); both routes \
         independently give 2, accepted per the criterion's cross-route clause"
    );
    pass(
        2,
        "16 matrices: both routes agree per-J; finite -> 0, D_inf -> 1, racg cycles -> 2",
        started,
    );
}

fn suite() -> Vec<(String, SimpleComplexOfGroups)> {
    let mut out = vec![
        ("s3 chain".to_string(), instances::s3_chain()),
        ("s4 branch".to_string(), instances::s4_branch()),
        ("d4 chain".to_string(), instances::d4_chain()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for i in 0..50 {
        out.push((format!("random {i}"), instances::random_instance(&mut rng, DEFAULT_SIZE_CAP)));
    }
    out
}

#[test]
fn criterion_3_decomposition_on_the_randomized_suite() {
    let started = Instant::now();
    let mut checked = 0;
    let mut total_cells = 0;
    let mut largest = 0;
    for (name, scog) in suite() {
        let dev = scog.develop(&TotalOrder::lex()).expect("develops");
        total_cells += dev.complex().face_count();
        largest = largest.max(dev.complex().face_count());
        for j in 0..scog.q().len() {
            let report = dev.verify_decomposition(j);
            assert!(
                report.passed(),
                "{name} at {}:\n{}",
                scog.q().name(j),
                report.render_text()
            );
            checked += 1;
        }
    }
    assert!(started.elapsed().as_secs() < 60, "criterion 3 exceeded 60 s");
    pass(
        3,
        &format!(
            "direct-sum decomposition exact on 53 instances \
             ({checked} fixed pairs, {total_cells} cells total, largest development {largest})"
        ),
        started,
    );
}

#[test]
fn criterion_4_orbit_category_complex_on_the_same_suite() {
    let started = Instant::now();
    let mut checked = 0;
    for (name, scog) in suite() {
        let dev = scog.develop(&TotalOrder::lex()).expect("develops");
        for j in 0..scog.q().len() {
            let report = dev.bredon_comparison(j);
            assert!(
                report.passed(),
                "{name} at {}:\n{}",
                scog.q().name(j),
                report.render_text()
            );
            checked += 1;
        }
    }
    pass(
        4,
        &format!("orbit-category cohomology matches fixed pairs ({checked} comparisons)"),
        started,
    );
}

#[test]
fn criterion_5_cellwise_identities_and_the_chain_map() {
    let started = Instant::now();
    let mut pairs = 0;
    for (name, scog) in suite() {
        let dev = scog.develop(&TotalOrder::lex()).expect("develops");
        for j in 0..scog.q().len() {
            for member in &dev.l_set(j).members {
                let check = dev.overlap_identities(j, &member.g);
                assert!(check.passed, "{name}: {:?}", check.failures);
                pairs += 1;
            }
            let chain = dev.transport_chain_map(j);
            assert!(chain.passed, "{name}: {:?}", chain.failures);
        }
    }
    pass(
        5,
        &format!("overlap identities and transport chain map exact ({pairs} (J, g) pairs)"),
        started,
    );
}

#[test]
fn criterion_6_reports_are_order_independent() {
    let started = Instant::now();
    let suite = suite();
    let baselines: Vec<Vec<ComparisonReport>> = suite
        .iter()
        .map(|(_, scog)| {
            let dev = scog.develop(&TotalOrder::lex()).expect("develops");
            (0..scog.q().len()).map(|j| dev.verify_decomposition(j)).collect()
        })
        .collect();
    let mut order_rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for round in 0..5 {
        for ((name, scog), baseline) in suite.iter().zip(&baselines) {
            let order = TotalOrder::shuffled(scog.group(), DEFAULT_SIZE_CAP, &mut order_rng)
                .expect("group fits the cap");
            let dev = scog.develop(&order).expect("develops");
            for (j, expected) in baseline.iter().enumerate() {
                let got = dev.verify_decomposition(j);
                assert!(got.passed(), "{name} round {round} at {j}");
                assert_eq!(
                    got.rows, expected.rows,
                    "{name} round {round} at {j}: cohomology must not depend on the order"
                );
            }
        }
    }
    pass(6, "5 random total orders reproduce every cohomology report", started);
}

fn bareiss_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a: Vec<Vec<BigInt>> =
        (0..n).map(|r| (0..n).map(|c| m.get(r, c)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for r in (k + 1)..n {
            for c in (k + 1)..n {
                let num = &a[k][k] * &a[r][c] - &a[r][k] * &a[k][c];
                a[r][c] = num / &prev;
            }
            a[r][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn rational_rank(m: &IntMatrix) -> usize {
    // Fraction-free elimination: the rank over Q, exactly.
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

#[test]
fn criterion_7_homology_goldens_and_snf_properties() {
    let started = Instant::now();
    // Golden surfaces through the reduced complex.
    use bredon::zcohomology::{reduced_cohomology, CohomologyGroup};
    let circle = instances::circle(5);
    assert_eq!(reduced_cohomology(&circle, 1), CohomologyGroup::free(1));
    let sphere = instances::sphere_two();
    assert_eq!(reduced_cohomology(&sphere, 2), CohomologyGroup::free(1));
    let torus = instances::torus_seven_vertex();
    assert_eq!(reduced_cohomology(&torus, 1), CohomologyGroup::free(2));
    assert_eq!(reduced_cohomology(&torus, 2), CohomologyGroup::free(1));
    let rp2 = instances::projective_plane_six_vertex();
    let h2 = reduced_cohomology(&rp2, 2);
    assert_eq!(h2.betti, 0);
    assert_eq!(h2.torsion, vec![BigUint::from(2u32)]);
    let klein = instances::klein_bottle_nine_vertex();
    let h2 = reduced_cohomology(&klein, 2);
    assert_eq!(h2.betti, 0);
    assert_eq!(h2.torsion, vec![BigUint::from(2u32)]);

    // SNF property suite: 1000 random sparse matrices up to 40x40.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let rows = rng.gen_range(1..=40usize);
        let cols = rng.gen_range(1..=40usize);
        let entries = rng.gen_range(0..=(rows * cols) / 4 + 2);
        let mut a = IntMatrix::zero(rows, cols);
        for _ in 0..entries {
            let r = rng.gen_range(0..rows);
            let c = rng.gen_range(0..cols);
            let v = rng.gen_range(-9i64..=9);
            a.set(r, c, BigInt::from(v));
        }
        let (form, u, v) = smith_normal_form_with_transforms(&a);
        let d = u.mul(&a.mul(&v));
        for (r, c, val) in d.iter() {
            assert_eq!(r, c, "off-diagonal entry");
            assert_eq!(val.magnitude(), &form.invariant_factors[r]);
            assert!(val.is_positive());
        }
        assert_eq!(d.nnz(), form.rank);
        for w in form.invariant_factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
        }
        assert!(bareiss_det(&u).abs() == BigInt::one(), "U unimodular");
        assert!(bareiss_det(&v).abs() == BigInt::one(), "V unimodular");
        assert_eq!(form.rank, rational_rank(&a), "rational rank agreement");
    }
    assert!(started.elapsed().as_secs() < 30, "criterion 7 exceeded 30 s");
    pass(7, "5 golden surfaces exact; 1000-matrix SNF property suite clean", started);
}

/// Positive definiteness of the cosine matrix by Sylvester's criterion:
/// every leading principal minor greater than 1e-9, determinants via
/// partially pivoted elimination in f64.
#[allow(clippy::needless_range_loop)]
fn cosine_positive_definite(matrix: &CoxeterMatrix, subset: &[usize]) -> bool {
    let b: Vec<Vec<f64>> = subset
        .iter()
        .map(|&i| {
            subset
                .iter()
                .map(|&j| match matrix.entry(i, j) {
                    None => -1.0,
                    Some(m) => -(std::f64::consts::PI / m as f64).cos(),
                })
                .collect()
        })
        .collect();
    for k in 1..=subset.len() {
        let mut a: Vec<Vec<f64>> = (0..k).map(|r| b[r][..k].to_vec()).collect();
        let mut det = 1.0f64;
        for col in 0..k {
            let (p, _) = a
                .iter()
                .enumerate()
                .skip(col)
                .map(|(r, row)| (r, row[col].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if a[p][col].abs() == 0.0 {
                det = 0.0;
                break;
            }
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            det *= a[col][col];
            for r in (col + 1)..k {
                let factor = a[r][col] / a[col][col];
                for c in col..k {
                    a[r][c] -= factor * a[col][c];
                }
            }
        }
        if det <= 1e-9 {
            return false;
        }
    }
    true
}

#[test]
fn criterion_8_classifier_matches_the_cosine_oracle() {
    let started = Instant::now();
    let mut subsets_checked = 0usize;
    for (name, matrix, _) in matrix_corpus() {
        let n = matrix.rank();
        let names = matrix.generators().to_vec();
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if subset.len() > 6 {
                continue;
            }
            let by_catalog = {
                let chosen: Vec<&str> =
                    subset.iter().map(|&i| names[i].as_str()).collect();
                matrix.is_finite_type(&chosen).unwrap()
            };
            let by_oracle = cosine_positive_definite(&matrix, &subset);
            assert_eq!(
                by_catalog, by_oracle,
                "{name}, subset {subset:?}: catalog vs cosine oracle"
            );
            subsets_checked += 1;
        }
    }
    pass(
        8,
        &format!("catalog classifier equals the cosine oracle on {subsets_checked} subsets"),
        started,
    );
}

#[test]
fn criterion_9_graph_products() {
    let started = Instant::now();
    let cases = [
        ("graph_product_k3_z2.json", 0),
        ("graph_product_edgeless_2.json", 1),
        ("graph_product_c5_z2.json", 2),
    ];
    for (file, expected) in cases {
        let per_instance = Instant::now();
        let path = corpus_path(file);
        let (code, report) = run_bin(&["cd", "-i", path.to_str().unwrap(), "--format", "json"]);
        assert_eq!(code, 0, "{file} exit code");
        assert_eq!(report["headline"], expected, "{file}");
        assert!(per_instance.elapsed().as_secs() < 1, "{file} exceeded 1 s");
    }
    pass(9, "complete -> 0, free product -> 1, 5-cycle -> 2, all exact", started);
}

/// Orbit-size bookkeeping behind the orbit-category basis: for every J and
/// every orbit with stabilizer conjugate to the local group, the number of
/// fixed cosets equals the number of cells in the orbit with that exact
/// stabilizer. Checked on the named instances as a suite-level invariant.
#[test]
fn orbit_counting_identity_holds() {
    let started = Instant::now();
    for (name, scog) in suite().into_iter().take(10) {
        let dev = scog.develop(&TotalOrder::lex()).expect("develops");
        for j in 0..scog.q().len() {
            let cx = dev.bredon_cochain_complex(j);
            let p_j = scog.local(j);
            // Count cells whose stabilizer equals P_J exactly, per degree.
            let mut exact = vec![0usize; (dev.complex().dim().max(0) + 1) as usize];
            if dev.complex().dim() >= 0 {
                for face in dev.complex().faces() {
                    let stab = dev.vertex_stabilizer(face[0] as usize);
                    if stab.subgroup_equal(p_j, DEFAULT_SIZE_CAP).unwrap() {
                        exact[face.len() - 1] += 1;
                    }
                }
            }
            for (d, &count) in exact.iter().enumerate() {
                assert_eq!(
                    cx.size(d as i32),
                    count,
                    "{name} at {} degree {d}",
                    scog.q().name(j)
                );
            }
        }
    }
    println!(
        "supplement: PASS — orbit-category basis sizes equal exact-stabilizer cell counts ({} ms)",
        started.elapsed().as_millis()
    );
}
