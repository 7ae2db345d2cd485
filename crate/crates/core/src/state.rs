//! Multipartite pure states and the state ↔ operator correspondence.
//!
//! Amplitudes are stored flat in row-major order with the last party
//! index varying fastest. This convention is frozen: matricization
//! correctness depends on it.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_norm, CMatrix, CVector, C64};
use crate::tol;

/// Explicit seed for every randomized operation; there is no hidden
/// global generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    pub(crate) fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Unit-norm complex amplitude tensor over an ordered list of factor
/// dimensions. Immutable; every operation returns a new state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl PureState {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    /// Amplitude at a full multi-index (one entry per party).
    pub fn amp_at(&self, idx: &[usize]) -> C64 {
        self.amps[flat_index(&self.dims, idx)]
    }

    /// The amplitudes as a vector in the joint Hilbert space.
    pub fn as_vector(&self) -> CVector {
        CVector::from_vec(self.amps.clone())
    }
}

/// Flat index with the last party varying fastest.
pub(crate) fn flat_index(dims: &[usize], idx: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), idx.len());
    let mut flat = 0;
    for (d, i) in dims.iter().zip(idx.iter()) {
        debug_assert!(i < d);
        flat = flat * d + i;
    }
    flat
}

/// Inverse of [`flat_index`].
pub(crate) fn multi_index(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for (k, d) in dims.iter().enumerate().rev() {
        idx[k] = flat % d;
        flat /= d;
    }
    idx
}

/// Build a unit-norm state from raw amplitudes, preserving relative
/// amplitude ratios.
pub fn normalize(raw: &[C64], dims: &[usize]) -> Result<PureState> {
    let expected: usize = dims.iter().product();
    if raw.len() != expected || dims.contains(&0) {
        return Err(Error::ShapeMismatch {
            got: raw.len(),
            expected,
        });
    }
    for (k, z) in raw.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite(k));
        }
    }
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-300 {
        return Err(Error::ZeroVector(norm));
    }
    let amps = raw.iter().map(|z| z / C64::from(norm)).collect();
    Ok(PureState {
        dims: dims.to_vec(),
        amps,
    })
}

/// Ordered split of the party set into two nonempty complementary
/// subsets. Relative party order is preserved on each side; permuting
/// parties is never implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// Split with the given left parties; the right side is the
    /// complement in ascending order.
    pub fn new(left_parties: &[usize], num_parties: usize) -> Result<Self> {
        let mut seen = vec![false; num_parties];
        for &p in left_parties {
            if p >= num_parties {
                return Err(Error::InvalidBipartition(format!(
                    "party {p} out of range (n = {num_parties})"
                )));
            }
            if seen[p] {
                return Err(Error::InvalidBipartition(format!("party {p} repeated")));
            }
            seen[p] = true;
        }
        let right: Vec<usize> = (0..num_parties).filter(|&p| !seen[p]).collect();
        if left_parties.is_empty() || right.is_empty() {
            return Err(Error::InvalidBipartition(
                "both sides must be nonempty".into(),
            ));
        }
        Ok(Bipartition {
            left: left_parties.to_vec(),
            right,
        })
    }

    /// Single party `p` against everything else.
    pub fn single(p: usize, num_parties: usize) -> Result<Self> {
        Bipartition::new(&[p], num_parties)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    fn validate_for(&self, num_parties: usize) -> Result<()> {
        let mut seen = vec![false; num_parties];
        for &p in self.left.iter().chain(self.right.iter()) {
            if p >= num_parties || seen[p] {
                return Err(Error::InvalidBipartition(format!(
                    "parties do not partition 0..{num_parties}"
                )));
            }
            seen[p] = true;
        }
        if seen.iter().all(|&s| s) && !self.left.is_empty() && !self.right.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidBipartition(format!(
                "parties do not partition 0..{num_parties}"
            )))
        }
    }
}

/// Reshape the amplitude tensor into a matrix along a bipartition.
///
/// Rows are indexed by the composite index of the left parties, columns
/// by the right parties, each in row-major order of its sub-dims. This
/// is the unique operator associated with the state for that split.
pub fn matricize(state: &PureState, split: &Bipartition) -> Result<CMatrix> {
    split.validate_for(state.num_parties())?;
    let dims = state.dims();
    let left_dims: Vec<usize> = split.left().iter().map(|&p| dims[p]).collect();
    let right_dims: Vec<usize> = split.right().iter().map(|&p| dims[p]).collect();
    let rows: usize = left_dims.iter().product();
    let cols: usize = right_dims.iter().product();

    let mut m = CMatrix::zeros(rows, cols);
    for (flat, &amp) in state.amps().iter().enumerate() {
        let idx = multi_index(dims, flat);
        let li: Vec<usize> = split.left().iter().map(|&p| idx[p]).collect();
        let ri: Vec<usize> = split.right().iter().map(|&p| idx[p]).collect();
        m[(flat_index(&left_dims, &li), flat_index(&right_dims, &ri))] = amp;
    }
    Ok(m)
}

/// Apply a unitary to a single tensor slot.
pub fn apply_local_unitary(state: &PureState, party: usize, u: &CMatrix) -> Result<PureState> {
    let n = state.num_parties();
    if party >= n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: party,
        });
    }
    let d = state.dims()[party];
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: u.nrows(),
        });
    }
    let resid = max_norm(&(u.adjoint() * u - CMatrix::identity(d, d)));
    if resid > tol::UNITARY_TOL {
        return Err(Error::NotUnitary(resid));
    }

    let dims = state.dims();
    let mut amps = vec![C64::new(0.0, 0.0); state.total_dim()];
    for (flat, out) in amps.iter_mut().enumerate() {
        let mut idx = multi_index(dims, flat);
        let i = idx[party];
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..d {
            idx[party] = j;
            acc += u[(i, j)] * state.amps()[flat_index(dims, &idx)];
        }
        *out = acc;
    }
    Ok(PureState {
        dims: dims.to_vec(),
        amps,
    })
}

/// Haar-uniform state on the unit sphere: i.i.d. complex standard
/// normal amplitudes, then normalized. Deterministic per seed.
pub fn random_state(dims: &[usize], seed: RandomSeed) -> PureState {
    assert!(!dims.is_empty() && dims.iter().all(|&d| d >= 1));
    let total: usize = dims.iter().product();
    let mut rng = seed.rng();
    let raw: Vec<C64> = (0..total)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    normalize(&raw, dims).expect("gaussian amplitudes have positive norm")
}

/// Correlated state `Σ_i c_i |i⟩^⊗n` over the first `|coeffs|`
/// computational basis vectors of each party. By construction it admits
/// a homogeneous Schmidt form with weights `|c_i|`.
pub fn make_correlated_state(coeffs: &[C64], dims: &[usize]) -> Result<PureState> {
    let n = dims.len();
    if n < 2 || coeffs.is_empty() {
        return Err(Error::ShapeMismatch {
            got: n.min(coeffs.len()),
            expected: 2,
        });
    }
    for &d in dims {
        if d < coeffs.len() {
            return Err(Error::CoeffsExceedDimension {
                coeffs: coeffs.len(),
                dim: d,
            });
        }
    }
    let total_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if (total_sq - 1.0).abs() > tol::NORM_TOL {
        return Err(Error::NotNormalized((total_sq - 1.0).abs()));
    }
    let total: usize = dims.iter().product();
    let mut raw = vec![C64::new(0.0, 0.0); total];
    for (i, &c) in coeffs.iter().enumerate() {
        let idx = vec![i; n];
        raw[flat_index(dims, &idx)] = c;
    }
    normalize(&raw, dims)
}

/// Product state from per-party factor vectors (normalized per factor).
pub fn product_state(factors: &[DVector<C64>]) -> Result<PureState> {
    let dims: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let total: usize = dims.iter().product();
    let mut raw = vec![C64::new(1.0, 0.0); total];
    for (flat, amp) in raw.iter_mut().enumerate() {
        let idx = multi_index(&dims, flat);
        for (f, &i) in factors.iter().zip(idx.iter()) {
            *amp *= f[i];
        }
    }
    normalize(&raw, &dims)
}
