//! Acceptance suite: each test pins one library-level criterion at its
//! stated tolerance and prints a `PASS criterion N` line (visible with
//! `cargo test --test acceptance -- --nocapture`). The CLI criterion
//! lives in the cli crate's own acceptance target.

use std::time::Instant;

use nalgebra::DMatrix;
use schmidt_core::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn split01() -> Bipartition {
    Bipartition::single(0, 2).unwrap()
}

fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let s = random_state(&[rows, cols], RandomSeed(seed));
    matricize(&s, &split01()).unwrap()
}

fn random_unitary(n: usize, seed: u64) -> CMatrix {
    let g = random_matrix(n, n, seed);
    hermitian_eig(&(&g + g.adjoint()).scale(0.5), 1e-8)
        .unwrap()
        .eigenvectors
}

fn singlet() -> PureState {
    normalize(
        &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        &[2, 2],
    )
    .unwrap()
}

/// Partial trace over the right factor straight off the amplitudes;
/// independent of the matricize/SVD pipeline it checks.
fn left_partial_trace(state: &PureState) -> CMatrix {
    let dl = state.dims()[0];
    let dr = state.dims()[1];
    let mut rho = CMatrix::zeros(dl, dl);
    for a in 0..dl {
        for ap in 0..dl {
            let mut acc = c(0.0, 0.0);
            for b in 0..dr {
                acc += state.amps()[a * dr + b] * state.amps()[ap * dr + b].conj();
            }
            rho[(a, ap)] = acc;
        }
    }
    rho
}

#[test]
fn criterion_01_bipartite_oracle_equivalence() {
    let start = Instant::now();
    let mut max_dev = 0.0f64;
    for trial in 0..200u64 {
        let dl = 2 + (trial % 3) as usize; // 2..=4
        let dr = 2 + (trial % 4) as usize; // 2..=5
        let s = random_state(&[dl, dr], RandomSeed(trial));
        let d = schmidt_decompose(&s, &split01(), 1e-10).unwrap();
        let rho = left_partial_trace(&s);
        let eig = hermitian_eig(&rho, 1e-10).unwrap();
        for (k, w) in d.weights.iter().enumerate() {
            let oracle = eig.eigenvalues[k].max(0.0).sqrt();
            max_dev = max_dev.max((w - oracle).abs());
        }
    }
    assert!(max_dev < 1e-10, "max deviation {max_dev:.3e}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "runtime {elapsed:?}");
    println!(
        "PASS criterion 1: bipartite oracle equivalence (200 states, max dev {max_dev:.2e}, {elapsed:?})"
    );
}

#[test]
fn criterion_02_singlet_fixture() {
    let s = singlet();
    let d = schmidt_decompose(&s, &split01(), 1e-10).unwrap();
    let r = 1.0 / 2f64.sqrt();
    assert_eq!(d.rank(), 2);
    assert!((d.weights[0] - r).abs() < 1e-12);
    assert!((d.weights[1] - r).abs() < 1e-12);
    assert!((entanglement_entropy(&d) - std::f64::consts::LN_2).abs() < 1e-12);
    let rep = degeneracy_report(&d, tol::DEG_TOL);
    assert_eq!(rep.groups.len(), 1);
    assert_eq!(rep.groups[0].size, 2);
    match product_test(&s, 1e-10).unwrap() {
        ProductTestResult::NotProduct { witness } => assert_eq!(witness.rank, 2),
        other => panic!("expected NotProduct, got {other:?}"),
    }
    println!("PASS criterion 2: singlet fixture (weights, entropy, degeneracy, product verdict)");
}

#[test]
fn criterion_03_trace_identity() {
    let mut max_dev = 0.0f64;
    for trial in 0..100u64 {
        let dl = 2 + (trial % 3) as usize;
        let dr = 2 + (trial % 3) as usize;
        let s = random_state(&[dl, dr], RandomSeed(10_000 + trial));
        let g = random_matrix(dr, dr, 20_000 + trial);
        let b = (&g + g.adjoint()).scale(0.5);
        let (lhs, rhs) = expectation_consistency(&s, &split01(), &b).unwrap();
        max_dev = max_dev.max((lhs - rhs).norm());
    }
    assert!(max_dev < 1e-10, "max deviation {max_dev:.3e}");
    println!("PASS criterion 3: trace identity on 100 pairs (max dev {max_dev:.2e})");
}

#[test]
fn criterion_04_degeneracy_invariance() {
    for trial in 0..50u64 {
        // engineered degenerate pair plus a separated top weight
        let top = 0.85 + 0.1 * (trial as f64 / 50.0);
        let pair = ((1.0 - top * top) / 2.0).sqrt();
        let coeffs = [c(top, 0.0), c(pair, 0.0), c(pair, 0.0)];
        let mut s = make_correlated_state(&coeffs, &[3, 3]).unwrap();
        // scramble with local unitaries so the state is not basis-aligned
        s = apply_local_unitary(&s, 0, &random_unitary(3, 30_000 + trial)).unwrap();
        s = apply_local_unitary(&s, 1, &random_unitary(3, 40_000 + trial)).unwrap();

        let d = schmidt_decompose(&s, &split01(), 1e-10).unwrap();
        let group = d
            .degeneracy_groups
            .iter()
            .find(|g| g.len() > 1)
            .expect("engineered degenerate group");
        let k = group.len();
        let v = random_unitary(k, 50_000 + trial);

        // rotate vectors inside the degenerate right-factor subspace and
        // induce the matching rotation on the left
        let mut left = d.left_vectors.clone();
        let mut right = d.right_vectors.clone();
        let lg = DMatrix::from_columns(
            &group.iter().map(|&i| d.left_vectors.column(i).into_owned()).collect::<Vec<_>>(),
        );
        let rg = DMatrix::from_columns(
            &group.iter().map(|&i| d.right_vectors.column(i).into_owned()).collect::<Vec<_>>(),
        );
        let lg_rot = &lg * v.conjugate();
        let rg_rot = &rg * &v;
        for (slot, &i) in group.iter().enumerate() {
            left.set_column(i, &lg_rot.column(slot));
            right.set_column(i, &rg_rot.column(slot));
        }
        let rotated = SchmidtDecomposition {
            weights: d.weights.clone(),
            left_vectors: left,
            right_vectors: right,
            degeneracy_groups: d.degeneracy_groups.clone(),
            zero_space_dim: d.zero_space_dim,
        };
        let resid = (rotated.reconstruct() - s.as_vector()).norm();
        assert!(resid < 1e-10, "trial {trial}: residual {resid:.3e}");
        for (a, b) in d.weights.iter().zip(rotated.weights.iter()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
    println!("PASS criterion 4: degeneracy invariance on 50 engineered states");
}

#[test]
fn criterion_05_tripartite_verdicts() {
    let r = 1.0 / 2f64.sqrt();
    let ghz = make_correlated_state(&[c(r, 0.0), c(r, 0.0)], &[2, 2, 2]).unwrap();
    match generalized_schmidt_test(&ghz, 1e-8, &[RandomSeed(1), RandomSeed(2)]).unwrap() {
        GeneralizedSchmidtResult::Exists { weights, .. } => {
            assert!((weights[0] - r).abs() < 1e-10);
            assert!((weights[1] - r).abs() < 1e-10);
        }
        other => panic!("GHZ: expected Exists, got {other:?}"),
    }

    let mut w_raw = vec![c(0.0, 0.0); 8];
    w_raw[1] = c(1.0, 0.0);
    w_raw[2] = c(1.0, 0.0);
    w_raw[4] = c(1.0, 0.0);
    let w = normalize(&w_raw, &[2, 2, 2]).unwrap();
    match generalized_schmidt_test(&w, 1e-8, &[]).unwrap() {
        GeneralizedSchmidtResult::NotExists {
            witness: SchmidtWitness::NonProductVector { rank, .. },
            ..
        } => assert_eq!(rank, 2),
        other => panic!("W: expected NotExists rank witness, got {other:?}"),
    }

    let corr = make_correlated_state(&[c(0.6, 0.0), c(0.8, 0.0)], &[2, 2, 2]).unwrap();
    match generalized_schmidt_test(&corr, 1e-8, &[]).unwrap() {
        GeneralizedSchmidtResult::Exists { weights, .. } => {
            assert!((weights[0] - 0.8).abs() < 1e-10);
            assert!((weights[1] - 0.6).abs() < 1e-10);
        }
        other => panic!("correlated: expected Exists, got {other:?}"),
    }
    println!("PASS criterion 5: tripartite verdicts (GHZ, W, premeasurement fixture)");
}

#[test]
fn criterion_06_uniqueness_under_degeneracy() {
    let r = 1.0 / 2f64.sqrt();
    let ghz = make_correlated_state(&[c(r, 0.0), c(r, 0.0)], &[2, 2, 2]).unwrap();
    let mut reference: Option<(Vec<f64>, Vec<CMatrix>)> = None;
    for k in 0..10u64 {
        let res = generalized_schmidt_test(
            &ghz,
            1e-8,
            &[RandomSeed(7_000 + 2 * k), RandomSeed(7_001 + 2 * k)],
        )
        .unwrap();
        let (w, b) = match res {
            GeneralizedSchmidtResult::Exists {
                weights,
                party_bases,
                ..
            } => (weights, party_bases),
            other => panic!("seed pair {k}: expected Exists, got {other:?}"),
        };
        if let Some((rw, rb)) = &reference {
            for (a, x) in rw.iter().zip(w.iter()) {
                assert!((a - x).abs() < 1e-8);
            }
            for (m1, m2) in rb.iter().zip(b.iter()) {
                for i in 0..m1.ncols() {
                    let overlap: C64 = m1.column(i).dotc(&m2.column(i));
                    assert!(
                        overlap.norm() > 1.0 - 1e-6,
                        "seed pair {k}: overlap {:.8}",
                        overlap.norm()
                    );
                }
            }
        } else {
            reference = Some((w, b));
        }
    }
    println!("PASS criterion 6: uniqueness under degeneracy across 10 seed runs");
}

#[test]
fn criterion_07_genericity_sweep() {
    let start = Instant::now();
    let mut exists = 0usize;
    let mut products = 0usize;
    for seed in 0..1000u64 {
        let s = random_state(&[2, 2, 2], RandomSeed(100_000 + seed));
        if generalized_schmidt_test(&s, 1e-8, &[]).unwrap().exists() {
            exists += 1;
        }
        if product_test(&s, 1e-8).unwrap().is_product() {
            products += 1;
        }
    }
    assert_eq!(exists, 0, "{exists} unexpected Exists verdicts");
    assert_eq!(products, 0, "{products} unexpected IsProduct verdicts");
    let rec = counting_check(2, 3);
    assert_eq!(rec.equations, 8);
    assert_eq!(rec.unknowns, 6);
    assert!(rec.overdetermined);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime {elapsed:?}");
    println!("PASS criterion 7: genericity sweep (1000 states, 0 Exists, 0 IsProduct, {elapsed:?})");
}

#[test]
fn criterion_08_mixture_gap() {
    let mut min_gap = f64::INFINITY;
    for trial in 0..100u64 {
        let dim = 3 + (trial % 4) as usize;
        let n_comp = 2 + (trial % 2) as usize;
        let psi = random_state(&[dim], RandomSeed(200_000 + trial)).as_vector();
        let basis = random_unitary(dim, 300_000 + trial);
        // λ_max ≤ 0.9, all positive, summing to 1
        let weights: Vec<f64> = if n_comp == 2 {
            vec![0.9, 0.1]
        } else {
            vec![0.9, 0.06, 0.04]
        };
        let mix = MixtureSpec::new(weights, basis.columns(0, n_comp).into_owned()).unwrap();
        let g = pure_vs_mixture_gap(&psi, &mix).unwrap();
        min_gap = min_gap.min(g);
        assert!(g >= 0.1 - 1e-12, "trial {trial}: gap {g:.3e}");
    }
    // boundary case: a single component equal to ψ is not a proper mixture
    let psi = random_state(&[4], RandomSeed(5)).as_vector();
    let comps = CMatrix::from_columns(std::slice::from_ref(&psi));
    let mix = MixtureSpec::new(vec![1.0], comps).unwrap();
    let g = pure_vs_mixture_gap(&psi, &mix).unwrap();
    assert!(g.abs() < 1e-12, "boundary gap {g:.3e}");
    println!("PASS criterion 8: mixture gap (100 trials, min gap {min_gap:.4}, boundary 0)");
}

#[test]
fn criterion_09_polar_canonical_contracts() {
    for trial in 0..100u64 {
        let rows = 1 + (trial % 8) as usize;
        let cols = 1 + ((trial / 8) % 8) as usize;
        let m = random_matrix(rows, cols, 400_000 + trial);
        let p = polar_decompose(&m, 1e-12).unwrap();
        let rep = svd(&m, 1e-12).unwrap();
        let sigma_max = rep.weights.first().copied().unwrap_or(0.0);

        let recon = linalg::max_norm(&(&p.isometry * &p.positive_part - &m));
        assert!(recon < 1e-10 * sigma_max, "trial {trial}: residual {recon:.3e}");

        let eig = hermitian_eig(&p.positive_part, 1e-8).unwrap();
        let min_eig = eig.eigenvalues.last().copied().unwrap();
        assert!(min_eig > -1e-10, "trial {trial}: min eigenvalue {min_eig:.3e}");

        let proj = p.isometry.adjoint() * &p.isometry;
        let idem = linalg::max_norm(&(&proj * &proj - &proj));
        assert!(idem < 1e-10, "trial {trial}: idempotency {idem:.3e}");
    }
    // rank-one outer products always report numerical rank 1
    for trial in 0..100u64 {
        let x = random_state(&[5], RandomSeed(500_000 + trial)).as_vector();
        let y = random_state(&[6], RandomSeed(600_000 + trial)).as_vector();
        let mut m = CMatrix::zeros(5, 6);
        for i in 0..5 {
            for j in 0..6 {
                m[(i, j)] = x[i] * y[j];
            }
        }
        assert_eq!(numerical_rank(&m, 1e-10).unwrap(), 1);
    }
    println!("PASS criterion 9: polar/canonical contracts on 100 matrices + 100 outer products");
}
