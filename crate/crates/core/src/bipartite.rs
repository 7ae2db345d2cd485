//! Bipartite Schmidt decomposition through the polar pipeline.
//!
//! For a state Ψ and a bipartition, the associated operator
//! `A = matricize(Ψ)` factors as `A = U ∘ |A|`; the eigenpairs of `|A|`
//! give the Schmidt weights and right vectors, and `U` carries them to
//! the left vectors. Weights are unique; vectors inside a degenerate
//! weight group are only fixed up to a unitary rotation, which is why
//! every decomposition carries its degeneracy grouping.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, max_norm, CMatrix, CVector, C64};
use crate::state::{flat_index, matricize, multi_index, Bipartition, PureState};
use crate::tol;

/// `Ψ = Σ_i λ_i ψ_i ⊗ φ_i` with descending positive weights and
/// orthonormal factor vectors on each side.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub weights: Vec<f64>,
    /// Columns live in the left factor space (ψ_i).
    pub left_vectors: CMatrix,
    /// Columns live in the right factor space (φ_i).
    pub right_vectors: CMatrix,
    /// Maximal blocks of numerically equal weights, by weight index.
    pub degeneracy_groups: Vec<Vec<usize>>,
    /// Dimension of the zero-weight eigenspace of `|A|`; it never
    /// appears in the representation itself.
    pub zero_space_dim: usize,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    /// Rebuild the joint-space vector `Σ_i λ_i ψ_i ⊗ φ_i`.
    pub fn reconstruct(&self) -> CVector {
        let dl = self.left_vectors.nrows();
        let dr = self.right_vectors.nrows();
        let mut v = CVector::zeros(dl * dr);
        for (i, &w) in self.weights.iter().enumerate() {
            let l = self.left_vectors.column(i);
            let r = self.right_vectors.column(i);
            for a in 0..dl {
                for b in 0..dr {
                    v[a * dr + b] += C64::from(w) * l[a] * r[b];
                }
            }
        }
        v
    }
}

/// Square, Hermitian, PSD, unit-trace matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and unit trace at 1e-10.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let herm_resid = max_norm(&(&matrix - matrix.adjoint()));
        if herm_resid > 1e-10 {
            return Err(Error::NotHermitian {
                residual: herm_resid,
                tol: 1e-10,
            });
        }
        let trace: f64 = (0..matrix.nrows()).map(|i| matrix[(i, i)].re).sum();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized((trace - 1.0).abs()));
        }
        let eig = linalg::hermitian_eig(&matrix, 1e-10)?;
        if let Some(&min) = eig
            .eigenvalues
            .iter()
            .min_by(|a, b| a.partial_cmp(b).unwrap())
        {
            if min < -1e-10 {
                return Err(Error::NotNormalized(-min));
            }
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Which factor the reduced density matrix lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Group weight indices into maximal blocks of numerically equal
/// weights: adjacent weights join a block iff they differ by at most
/// `deg_tol · λ_max`.
pub fn group_degenerate(weights: &[f64], deg_tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    if weights.is_empty() {
        return groups;
    }
    let scale = weights[0];
    let mut current = vec![0];
    for i in 1..weights.len() {
        if (weights[i - 1] - weights[i]).abs() <= deg_tol * scale {
            current.push(i);
        } else {
            groups.push(std::mem::take(&mut current));
            current = vec![i];
        }
    }
    groups.push(current);
    groups
}

/// Schmidt decomposition at the default degeneracy threshold.
pub fn schmidt_decompose(
    state: &PureState,
    split: &Bipartition,
    rank_tol: f64,
) -> Result<SchmidtDecomposition> {
    schmidt_decompose_with(state, split, rank_tol, tol::DEG_TOL)
}

/// Schmidt decomposition with an explicit degeneracy threshold.
pub fn schmidt_decompose_with(
    state: &PureState,
    split: &Bipartition,
    rank_tol: f64,
    deg_tol: f64,
) -> Result<SchmidtDecomposition> {
    let a = matricize(state, split)?;
    let rep = linalg::svd(&a, rank_tol)?;
    // zero eigenspace of |A| lives on the column side: dim = cols - rank
    let zero_space_dim = a.ncols() - rep.rank();
    let degeneracy_groups = group_degenerate(&rep.weights, deg_tol);
    Ok(SchmidtDecomposition {
        weights: rep.weights,
        left_vectors: rep.left_vectors,
        // canonical form is Σ λ |l⟩⟨r|, so the ket on the right factor
        // is the conjugate of the r vector; Ψ = Σ λ l ⊗ conj(r)
        right_vectors: rep.right_vectors.conjugate(),
        degeneracy_groups,
        zero_space_dim,
    })
}

/// Reduced density matrix of the state on one side of the split:
/// `A⁺A` on the right factor, `AA⁺` on the left.
pub fn reduced_density(state: &PureState, split: &Bipartition, side: Side) -> Result<DensityMatrix> {
    let a = matricize(state, split)?;
    let m = match side {
        Side::Right => a.adjoint() * &a,
        Side::Left => &a * a.adjoint(),
    };
    DensityMatrix::new(m)
}

/// Both sides of the trace identity `⟨Ψ|(1⊗B)Ψ⟩ = Tr((A⁺A)B)`:
/// the first component is a direct tensor contraction over the raw
/// amplitudes, the second the trace over the reduced density matrix.
pub fn expectation_consistency(
    state: &PureState,
    split: &Bipartition,
    b: &CMatrix,
) -> Result<(C64, C64)> {
    let dims = state.dims();
    let right_dims: Vec<usize> = split.right().iter().map(|&p| dims[p]).collect();
    let dr: usize = right_dims.iter().product();
    if b.nrows() != dr || b.ncols() != dr {
        return Err(Error::DimensionMismatch {
            expected: dr,
            got: b.nrows(),
        });
    }
    split
        .left()
        .iter()
        .chain(split.right())
        .try_for_each(|&p| {
            if p < dims.len() {
                Ok(())
            } else {
                Err(Error::InvalidBipartition(format!("party {p} out of range")))
            }
        })?;

    // lhs: Σ_{l, r', r} c_{l r'} B_{r' r} conj(c_{l r}), straight off the
    // amplitude tensor without going through matricize. The operator
    // matrix `b` is taken in the dual ⟨f_j| frame — the frame in which
    // the literal matrix product A⁺A is the reduced density matrix —
    // so the two routes agree exactly for every b, not just real ones.
    let mut lhs = C64::new(0.0, 0.0);
    for (flat, &amp) in state.amps().iter().enumerate() {
        let idx = multi_index(dims, flat);
        let ri: Vec<usize> = split.right().iter().map(|&p| idx[p]).collect();
        let r = flat_index(&right_dims, &ri);
        // vary the right composite index r' while keeping left fixed
        for rp in 0..dr {
            let rp_idx = multi_index(&right_dims, rp);
            let mut full = idx.clone();
            for (&p, &i) in split.right().iter().zip(rp_idx.iter()) {
                full[p] = i;
            }
            let amp_rp = state.amps()[flat_index(dims, &full)];
            lhs += amp_rp * b[(rp, r)] * amp.conj();
        }
    }

    let rho = reduced_density(state, split, Side::Right)?;
    let prod = &rho.matrix * b;
    let rhs: C64 = (0..dr).map(|i| prod[(i, i)]).sum();
    Ok((lhs, rhs))
}

/// Von Neumann entropy of either reduced density matrix, in nats:
/// `−Σ λ_i² ln λ_i²` with `0·ln 0 = 0`.
pub fn entanglement_entropy(d: &SchmidtDecomposition) -> f64 {
    d.weights
        .iter()
        .map(|&w| {
            let p = w * w;
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        })
        .sum()
}

/// Entropy in bits; a report convenience, not a separate code path.
pub fn entropy_bits(d: &SchmidtDecomposition) -> f64 {
    entanglement_entropy(d) / std::f64::consts::LN_2
}

/// One maximal block of numerically equal weights.
#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyGroup {
    pub indices: Vec<usize>,
    /// Representative (largest) weight of the block.
    pub weight: f64,
    pub size: usize,
}

/// Uniqueness verdict for the decomposition basis.
#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyReport {
    pub groups: Vec<DegeneracyGroup>,
    /// True iff every group has size 1: the basis is then unique up to
    /// phases. Otherwise each size-k group carries a k-dimensional
    /// unitary freedom and the reported vectors are non-canonical
    /// gauge artifacts.
    pub unique_up_to_phases: bool,
    pub zero_space_dim: usize,
}

/// Regroup the weights at `deg_tol` and report the basis-uniqueness
/// structure: weights are always unique, vectors only outside
/// degenerate blocks.
pub fn degeneracy_report(d: &SchmidtDecomposition, deg_tol: f64) -> DegeneracyReport {
    let groups: Vec<DegeneracyGroup> = group_degenerate(&d.weights, deg_tol)
        .into_iter()
        .map(|indices| {
            let weight = d.weights[indices[0]];
            let size = indices.len();
            DegeneracyGroup {
                indices,
                weight,
                size,
            }
        })
        .collect();
    let unique = groups.iter().all(|g| g.size == 1);
    DegeneracyReport {
        groups,
        unique_up_to_phases: unique,
        zero_space_dim: d.zero_space_dim,
    }
}
