//! Dense complex matrix primitives.
//!
//! Everything here reduces to one factorization: the canonical
//! representation `A = Σ_ν λ_ν |φ_ν⟩⟨ψ_ν|` with positive weights and
//! orthonormal vector families on both sides. The polar decomposition
//! `A = U ∘ |A|` and the numerical rank are read off from it.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvector columns, ordered to match `eigenvalues`.
    pub eigenvectors: CMatrix,
}

/// `A = U ∘ |A|` with `U` a partial isometry and `|A| = (A⁺A)^{1/2}`.
#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    /// Partial isometry mapping right singular directions to left ones
    /// and annihilating the numerical kernel.
    pub isometry: CMatrix,
    /// Hermitian PSD factor `(A⁺A)^{1/2}`, square on the domain side.
    pub positive_part: CMatrix,
}

/// Dyad-sum form `A = Σ_ν λ_ν |left_ν⟩⟨right_ν|` with strictly positive
/// descending weights; the zero space is excluded.
#[derive(Debug, Clone)]
pub struct CanonicalRepresentation {
    pub weights: Vec<f64>,
    pub left_vectors: CMatrix,
    pub right_vectors: CMatrix,
}

impl CanonicalRepresentation {
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    /// Rebuild `Σ_ν λ_ν |left_ν⟩⟨right_ν|`.
    pub fn reconstruct(&self, rows: usize, cols: usize) -> CMatrix {
        let mut m = CMatrix::zeros(rows, cols);
        for (nu, &w) in self.weights.iter().enumerate() {
            let l = self.left_vectors.column(nu);
            let r = self.right_vectors.column(nu);
            for i in 0..rows {
                for j in 0..cols {
                    m[(i, j)] += C64::from(w) * l[i] * r[j].conj();
                }
            }
        }
        m
    }
}

pub(crate) fn check_finite(m: &CMatrix) -> Result<()> {
    for (k, z) in m.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite(k));
        }
    }
    Ok(())
}

/// Largest entry magnitude, the max-norm used by all residual checks.
pub fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Rotate `v` so its largest-magnitude component is real positive.
/// Returns the unit phase that was divided out.
pub(crate) fn phase_gauge(v: &mut CVector) -> C64 {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (k, z) in v.iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag {
            best_mag = mag;
            best = k;
        }
    }
    if best_mag == 0.0 {
        return C64::new(1.0, 0.0);
    }
    let phase = v[best] / C64::from(best_mag);
    for z in v.iter_mut() {
        *z /= phase;
    }
    phase
}

/// Lexicographic order on (re, im) component pairs; deterministic
/// tie-break for exactly equal eigenvalues.
fn lex_cmp(a: &CVector, b: &CVector) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (x, y) in a.iter().zip(b.iter()) {
        match x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// Eigendecomposition of a Hermitian matrix.
///
/// `tol` bounds the accepted Hermiticity residual `‖m − m⁺‖_max`.
/// Eigenvalues come back descending; each eigenvector is phase-gauged so
/// its largest component is real positive.
pub fn hermitian_eig(m: &CMatrix, tol: f64) -> Result<HermitianEigenSystem> {
    check_finite(m)?;
    if m.nrows() != m.ncols() {
        return Err(Error::NotHermitian {
            residual: f64::INFINITY,
            tol,
        });
    }
    let residual = max_norm(&(m - m.adjoint()));
    if residual > tol {
        return Err(Error::NotHermitian { residual, tol });
    }
    // Symmetrize so round-off in the input cannot leak into the solver.
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);

    let n = m.nrows();
    let mut cols: Vec<(f64, CVector)> = (0..n)
        .map(|k| {
            let mut v: CVector = eig.eigenvectors.column(k).into_owned();
            phase_gauge(&mut v);
            (eig.eigenvalues[k], v)
        })
        .collect();
    cols.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then_with(|| lex_cmp(&a.1, &b.1))
    });

    let eigenvalues: Vec<f64> = cols.iter().map(|c| c.0).collect();
    let eigenvectors = CMatrix::from_columns(&cols.iter().map(|c| c.1.clone()).collect::<Vec<_>>());
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Canonical representation via SVD; weights are the singular values
/// above `tol · σ_max`, so the zero space never appears.
///
/// Gauge: each right vector is rotated so its largest component is real
/// positive, with the paired left vector absorbing the conjugate phase.
pub fn svd(m: &CMatrix, tol: f64) -> Result<CanonicalRepresentation> {
    check_finite(m)?;
    let rows = m.nrows();
    let cols = m.ncols();
    if rows == 0 || cols == 0 {
        return Ok(CanonicalRepresentation {
            weights: vec![],
            left_vectors: CMatrix::zeros(rows, 0),
            right_vectors: CMatrix::zeros(cols, 0),
        });
    }
    let f = nalgebra::SVD::new_unordered(m.clone(), true, true);
    let u = f.u.expect("svd: requested u");
    let v_t = f.v_t.expect("svd: requested v_t");
    let sigma_max = f.singular_values.iter().cloned().fold(0.0, f64::max);

    let mut triples: Vec<(f64, CVector, CVector)> = Vec::new();
    for (k, &s) in f.singular_values.iter().enumerate() {
        if sigma_max > 0.0 && s > tol * sigma_max {
            let mut left: CVector = u.column(k).into_owned();
            // right vector = k-th column of V = conjugated k-th row of V^H
            let mut right: CVector =
                CVector::from_iterator(cols, v_t.row(k).iter().map(|z| z.conj()));
            let phase = phase_gauge(&mut right);
            for z in left.iter_mut() {
                *z /= phase;
            }
            triples.push((s, left, right));
        }
    }
    triples.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then_with(|| lex_cmp(&a.2, &b.2))
    });

    let weights: Vec<f64> = triples.iter().map(|t| t.0).collect();
    let left_vectors = if triples.is_empty() {
        CMatrix::zeros(rows, 0)
    } else {
        CMatrix::from_columns(&triples.iter().map(|t| t.1.clone()).collect::<Vec<_>>())
    };
    let right_vectors = if triples.is_empty() {
        CMatrix::zeros(cols, 0)
    } else {
        CMatrix::from_columns(&triples.iter().map(|t| t.2.clone()).collect::<Vec<_>>())
    };
    Ok(CanonicalRepresentation {
        weights,
        left_vectors,
        right_vectors,
    })
}

/// Polar decomposition `A = U ∘ |A|` with `|A| = (A⁺A)^{1/2}`.
///
/// `U` maps each right singular vector with weight above `tol · σ_max`
/// to its left partner and annihilates the numerical kernel, so
/// `U⁺U` is the orthogonal projector onto the range of `|A|`.
pub fn polar_decompose(m: &CMatrix, tol: f64) -> Result<PolarDecomposition> {
    let rep = svd(m, tol)?;
    let rows = m.nrows();
    let cols = m.ncols();
    let mut positive_part = CMatrix::zeros(cols, cols);
    let mut isometry = CMatrix::zeros(rows, cols);
    for (nu, &w) in rep.weights.iter().enumerate() {
        let l = rep.left_vectors.column(nu);
        let r = rep.right_vectors.column(nu);
        for i in 0..cols {
            for j in 0..cols {
                positive_part[(i, j)] += C64::from(w) * r[i] * r[j].conj();
            }
        }
        for i in 0..rows {
            for j in 0..cols {
                isometry[(i, j)] += l[i] * r[j].conj();
            }
        }
    }
    Ok(PolarDecomposition {
        isometry,
        positive_part,
    })
}

/// Count of singular values above `tol · σ_max`; 0 for the zero matrix.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> Result<usize> {
    check_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let sv = m.clone().singular_values();
    let sigma_max = sv.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * sigma_max).count())
}

/// Singular values of `m`, descending, including (numerical) zeros.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    check_finite(m)?;
    let mut sv: Vec<f64> = m.clone().singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Convenience: `numerical_rank` at the default threshold.
pub fn rank_default(m: &CMatrix) -> Result<usize> {
    numerical_rank(m, tol::RANK_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    pub(crate) fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(rows, cols, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let m = random_matrix(n, n, seed);
        (&m + m.adjoint()).scale(0.5)
    }

    fn random_unitary(n: usize, seed: u64) -> CMatrix {
        // QR of a Ginibre matrix gives a Haar unitary; the QR here only
        // needs orthonormal columns, so Gram-Schmidt is enough.
        let m = random_matrix(n, n, seed);
        let mut cols: Vec<CVector> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v: CVector = m.column(j).into_owned();
            for c in &cols {
                let overlap: C64 = c.dotc(&v);
                v -= c * overlap;
            }
            let norm = v.norm();
            v /= C64::from(norm);
            cols.push(v);
        }
        CMatrix::from_columns(&cols)
    }

    #[test]
    fn identity_eigensystem() {
        let id = CMatrix::identity(2, 2);
        let sys = hermitian_eig(&id, 1e-12).unwrap();
        assert_eq!(sys.eigenvalues, vec![1.0, 1.0]);
        let gram = sys.eigenvectors.adjoint() * &sys.eigenvectors;
        assert!(max_norm(&(gram - CMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn diagonal_eigensystem() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(3.0, 0.0),
            C64::new(-1.0, 0.0),
        ]));
        let sys = hermitian_eig(&m, 1e-12).unwrap();
        assert_eq!(sys.eigenvalues, vec![3.0, -1.0]);
        assert_abs_diff_eq!(sys.eigenvectors[(0, 0)].norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sys.eigenvectors[(1, 1)].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn random_hermitian_eig_contracts() {
        let m = random_hermitian(5, 7);
        let sys = hermitian_eig(&m, 1e-10).unwrap();
        let trace: f64 = (0..5).map(|i| m[(i, i)].re).sum();
        let eig_sum: f64 = sys.eigenvalues.iter().sum();
        assert_abs_diff_eq!(trace, eig_sum, epsilon = 1e-10);
        let scale = max_norm(&m);
        for k in 0..5 {
            let v: CVector = sys.eigenvectors.column(k).into_owned();
            let resid = &m * &v - v.scale(sys.eigenvalues[k]);
            assert!(resid.norm() <= 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = random_matrix(3, 3, 1);
        assert!(matches!(
            hermitian_eig(&m, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(numerical_rank(&m, 1e-10), Err(Error::NonFinite(_))));
    }

    #[test]
    fn svd_zero_matrix_is_empty() {
        let m = CMatrix::zeros(3, 4);
        let rep = svd(&m, 1e-10).unwrap();
        assert!(rep.weights.is_empty());
    }

    #[test]
    fn svd_unit_rank_one() {
        let x = CVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        let y = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let mut m = CMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = x[i] * y[j].conj();
            }
        }
        let rep = svd(&m, 1e-10).unwrap();
        assert_eq!(rep.rank(), 1);
        assert_abs_diff_eq!(rep.weights[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn svd_weights_match_gram_eigenvalues() {
        // weights² must equal the eigenvalues of m⁺m
        let m = random_matrix(4, 6, 11);
        let rep = svd(&m, 1e-10).unwrap();
        let gram = m.adjoint() * &m;
        let sys = hermitian_eig(&gram, 1e-8).unwrap();
        for (k, w) in rep.weights.iter().enumerate() {
            assert_abs_diff_eq!(w * w, sys.eigenvalues[k], epsilon = 1e-10);
        }
    }

    #[test]
    fn svd_reconstruction() {
        for seed in 0..20 {
            let m = random_matrix(5, 3, seed);
            let rep = svd(&m, 1e-12).unwrap();
            let resid = max_norm(&(rep.reconstruct(5, 3) - &m));
            assert!(resid <= 1e-10 * rep.weights[0]);
        }
    }

    #[test]
    fn polar_scalar_phase() {
        let m = CMatrix::from_vec(2, 1, vec![C64::new(0.0, 2.0), C64::new(0.0, 0.0)]);
        // 1x1 variant from a single complex scalar
        let m1 = CMatrix::from_vec(1, 1, vec![C64::new(0.0, 2.0)]);
        let p = polar_decompose(&m1, 1e-10).unwrap();
        assert_abs_diff_eq!(p.positive_part[(0, 0)].re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.isometry[(0, 0)].im, 1.0, epsilon = 1e-12);
        drop(m);
    }

    #[test]
    fn polar_of_unitary_is_identity_positive_part() {
        let u = random_unitary(4, 3);
        let p = polar_decompose(&u, 1e-10).unwrap();
        assert!(max_norm(&(&p.positive_part - CMatrix::identity(4, 4))) < 1e-10);
        assert!(max_norm(&(&p.isometry - &u)) < 1e-10);
    }

    #[test]
    fn polar_projector_idempotent() {
        let m = random_matrix(3, 5, 21);
        let p = polar_decompose(&m, 1e-10).unwrap();
        let proj = p.isometry.adjoint() * &p.isometry;
        assert!(max_norm(&(&proj * &proj - &proj)) < 1e-10);
        assert!(max_norm(&(proj.adjoint() - &proj)) < 1e-10);
    }

    #[test]
    fn polar_reconstructs() {
        for seed in 0..20 {
            let m = random_matrix(4, 4, 100 + seed);
            let p = polar_decompose(&m, 1e-12).unwrap();
            let resid = max_norm(&(&p.isometry * &p.positive_part - &m));
            assert!(resid <= 1e-10 * max_norm(&m));
        }
    }

    #[test]
    fn rank_of_outer_product_is_one() {
        let x = random_matrix(5, 1, 31);
        let y = random_matrix(7, 1, 32);
        let mut m = CMatrix::zeros(5, 7);
        for i in 0..5 {
            for j in 0..7 {
                m[(i, j)] = x[(i, 0)] * y[(j, 0)];
            }
        }
        assert_eq!(numerical_rank(&m, 1e-10).unwrap(), 1);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(numerical_rank(&CMatrix::zeros(3, 3), 1e-10).unwrap(), 0);
    }

    #[test]
    fn rank_of_singlet_coefficients() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        assert_eq!(numerical_rank(&m, 1e-10).unwrap(), 2);
        let sv = singular_values(&m).unwrap();
        assert_abs_diff_eq!(sv[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sv[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn singular_values_of_adjoint_coincide() {
        for seed in 0..10 {
            let m = random_matrix(6, 4, 200 + seed);
            let a = singular_values(&m).unwrap();
            let b = singular_values(&m.adjoint()).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn rank_invariant_under_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let rows = rng.gen_range(2..=6);
            let cols = rng.gen_range(2..=6);
            let m = random_matrix(rows, cols, rng.gen());
            let r0 = numerical_rank(&m, 1e-10).unwrap();
            let u = random_unitary(rows, rng.gen());
            let v = random_unitary(cols, rng.gen());
            let m2 = &u * &m * &v;
            assert_eq!(numerical_rank(&m2, 1e-10).unwrap(), r0);
        }
    }

    #[test]
    fn gram_spectra_agree_both_sides() {
        for seed in 0..10 {
            let m = random_matrix(8, 5, 300 + seed);
            let left = hermitian_eig(&(&m * m.adjoint()), 1e-8).unwrap();
            let right = hermitian_eig(&(m.adjoint() * &m), 1e-8).unwrap();
            // nonzero eigenvalues coincide; left has 8, right has 5
            for k in 0..5 {
                assert_abs_diff_eq!(left.eigenvalues[k], right.eigenvalues[k], epsilon = 1e-10);
            }
        }
    }
}
