//! Oriented linear subspaces of Euclidean space, held as orthonormal frames.
//!
//! A [`Subspace`] stores an explicit orthonormal frame together with an
//! orientation sign; the oriented unit k-vector it represents is
//! `orientation · f₁∧…∧f_k`. Projectors are derived on demand.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn from_sign(sign: f64) -> Self {
        if sign < 0.0 {
            Orientation::Negative
        } else {
            Orientation::Positive
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// An oriented k-dimensional subspace of ℝ^N.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    frame: DMatrix<f64>,
    orientation: Orientation,
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// Returns `(q, r)` with `raw = q · r`, `r` upper triangular with positive
/// diagonal. The caller is responsible for the rank check.
pub(crate) fn mgs_qr(raw: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let (rows, k) = raw.shape();
    let mut q = DMatrix::<f64>::zeros(rows, k);
    let mut r = DMatrix::<f64>::zeros(k, k);
    for j in 0..k {
        let mut col = raw.column(j).into_owned();
        for _pass in 0..2 {
            for i in 0..j {
                let c = q.column(i).dot(&col);
                r[(i, j)] += c;
                col.axpy(-c, &q.column(i), 1.0);
            }
        }
        let norm = col.norm();
        r[(j, j)] = norm;
        q.set_column(j, &(col / norm));
    }
    (q, r)
}

/// Numerical rank of `m` using the relative singular-value cutoff `rel_tol`.
pub(crate) fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = m.singular_values();
    let largest = sv.iter().cloned().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * largest).count()
}

/// Orthonormal basis of the orthogonal complement of the column span of an
/// orthonormal `frame`, obtained from the unit eigenspace of `I − F Fᵀ`.
pub(crate) fn complement_frame(frame: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, k) = frame.shape();
    let proj = DMatrix::<f64>::identity(n, n) - frame * frame.transpose();
    let eig = SymmetricEigen::new(proj);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut out = DMatrix::<f64>::zeros(n, n - k);
    for (dst, &src) in order.iter().take(n - k).enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        // clean residual components along the frame, then along earlier columns
        for _pass in 0..2 {
            for i in 0..k {
                let c = frame.column(i).dot(&col);
                col.axpy(-c, &frame.column(i), 1.0);
            }
            for i in 0..dst {
                let c = out.column(i).dot(&col);
                col.axpy(-c, &out.column(i), 1.0);
            }
        }
        let norm = col.norm();
        out.set_column(dst, &(col / norm));
    }
    out
}

impl Subspace {
    /// Orthonormalizes a list of linearly independent vectors.
    ///
    /// The returned frame spans the same subspace and is positively oriented
    /// with respect to the input order (the change-of-basis matrix has
    /// positive diagonal), so the orientation flag is `Positive`.
    pub fn orthonormalize(raw_frame: &[DVector<f64>]) -> Result<Self> {
        let Some(first) = raw_frame.first() else {
            return Err(Error::Shape("empty frame".into()));
        };
        let n = first.len();
        if let Some(bad) = raw_frame.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::from_columns(&DMatrix::from_columns(raw_frame))
    }

    /// Same as [`Subspace::orthonormalize`], with the raw vectors as matrix columns.
    pub fn from_columns(raw: &DMatrix<f64>) -> Result<Self> {
        let (n, k) = raw.shape();
        if k == 0 || n == 0 {
            return Err(Error::Shape("empty frame".into()));
        }
        if k > n {
            return Err(Error::RankDeficient {
                rank: n,
                expected: k,
            });
        }
        let rank = numerical_rank(raw, tol::RANK);
        if rank < k {
            return Err(Error::RankDeficient { rank, expected: k });
        }
        let (q, r) = mgs_qr(raw);
        let det_sign: f64 = r.diagonal().iter().map(|d| d.signum()).product();
        Ok(Self {
            frame: q,
            orientation: Orientation::from_sign(det_sign),
        })
    }

    /// Wraps a frame that is already orthonormal (checked to `tol::GRAM`, scaled
    /// by the frame size).
    pub fn from_orthonormal(frame: DMatrix<f64>, orientation: Orientation) -> Result<Self> {
        let k = frame.ncols();
        if k == 0 || frame.nrows() < k {
            return Err(Error::Shape(format!(
                "frame of shape {:?} cannot span a subspace",
                frame.shape()
            )));
        }
        let gram = frame.transpose() * &frame;
        let dev = (gram - DMatrix::<f64>::identity(k, k)).amax();
        if dev > tol::GRAM * 10.0 * k as f64 {
            return Err(Error::NotOrthonormal { deviation: dev });
        }
        Ok(Self { frame, orientation })
    }

    /// The span of the coordinate vectors `e_i` for `i` in `indices` (0-based).
    pub fn coordinate(ambient_dim: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let idx: Vec<usize> = indices.into_iter().collect();
        if idx.is_empty() {
            return Err(Error::Shape("empty index set".into()));
        }
        let mut frame = DMatrix::<f64>::zeros(ambient_dim, idx.len());
        for (c, &i) in idx.iter().enumerate() {
            if i >= ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: i + 1,
                });
            }
            frame[(i, c)] = 1.0;
        }
        Self::from_orthonormal(frame, Orientation::Positive)
    }

    /// Uniformly distributed k-plane (orthonormalized Gaussian matrix).
    pub fn random<R: Rng + ?Sized>(rng: &mut R, ambient_dim: usize, k: usize) -> Self {
        loop {
            let raw = DMatrix::<f64>::from_fn(ambient_dim, k, |_, _| rng.sample(StandardNormal));
            if let Ok(s) = Self::from_columns(&raw) {
                return s;
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Frame whose wedge product equals the oriented k-vector: the first
    /// column carries the orientation sign.
    pub fn oriented_frame(&self) -> DMatrix<f64> {
        let mut f = self.frame.clone();
        if self.orientation == Orientation::Negative {
            f.column_mut(0).neg_mut();
        }
        f
    }

    /// Same span, opposite orientation.
    pub fn reversed(&self) -> Self {
        Self {
            frame: self.frame.clone(),
            orientation: self.orientation.flipped(),
        }
    }

    /// Swaps two frame vectors and flips the orientation sign, so the
    /// oriented k-vector is unchanged.
    pub fn swap_frame_vectors(&self, i: usize, j: usize) -> Self {
        let mut frame = self.frame.clone();
        frame.swap_columns(i, j);
        let orientation = if i == j {
            self.orientation
        } else {
            self.orientation.flipped()
        };
        Self { frame, orientation }
    }

    fn check_len(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(x)?;
        Ok(&self.frame * (self.frame.transpose() * x))
    }

    /// Orthogonal complement, oriented so that `S ⊕ S^⊥` is positively
    /// oriented in the ambient space.
    pub fn complement(&self) -> Result<Self> {
        let (n, k) = self.frame.shape();
        if k == n {
            return Err(Error::FullSpace);
        }
        let comp = complement_frame(&self.frame);
        let mut full = DMatrix::<f64>::zeros(n, n);
        full.columns_mut(0, k).copy_from(&self.oriented_frame());
        full.columns_mut(k, n - k).copy_from(&comp);
        let orientation = Orientation::from_sign(full.determinant());
        Ok(Self {
            frame: comp,
            orientation,
        })
    }

    pub fn projector(&self) -> ProjectionOperator {
        ProjectionOperator::of(self)
    }

    /// Largest distance of a frame vector of `other` from this subspace.
    /// Zero (to rounding) iff `span(other) ⊆ span(self)`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        let p = other.frame() - &self.frame * (self.frame.transpose() * other.frame());
        p.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Matrix of an orthogonal projection: symmetric and idempotent.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionOperator {
    matrix: DMatrix<f64>,
}

impl ProjectionOperator {
    pub fn of(s: &Subspace) -> Self {
        Self {
            matrix: s.frame() * s.frame().transpose(),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Largest entrywise deviation from symmetry.
    pub fn symmetry_defect(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    /// Largest entrywise deviation of `P² − P`.
    pub fn idempotency_defect(&self) -> f64 {
        (&self.matrix * &self.matrix - &self.matrix).amax()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn already_orthonormal_frame_is_kept() {
        let s = Subspace::orthonormalize(&[v(&[1., 0., 0.]), v(&[0., 1., 0.])]).unwrap();
        assert_eq!(s.frame().column(0), v(&[1., 0., 0.]));
        assert_eq!(s.frame().column(1), v(&[0., 1., 0.]));
        assert_eq!(s.orientation(), Orientation::Positive);
    }

    #[test]
    fn gram_schmidt_is_forced() {
        let s = Subspace::orthonormalize(&[v(&[2., 0., 0.]), v(&[1., 1., 0.])]).unwrap();
        assert!((s.frame().column(0) - v(&[1., 0., 0.])).amax() < 1e-15);
        assert!((s.frame().column(1) - v(&[0., 1., 0.])).amax() < 1e-15);
        assert_eq!(s.orientation(), Orientation::Positive);
    }

    #[test]
    fn rank_deficient_input_is_rejected() {
        let err = Subspace::orthonormalize(&[v(&[1., 2., 3.]), v(&[2., 4., 6.])]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { rank: 1, expected: 2 }));
        let err = Subspace::orthonormalize(&[v(&[1., 0.]), v(&[0., 1.]), v(&[1., 1.])]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { .. }));
    }

    #[test]
    fn mismatched_vector_lengths_are_rejected() {
        let err = Subspace::orthonormalize(&[v(&[1., 0., 0.]), v(&[0., 1.])]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn projection_onto_coordinate_plane() {
        let s = Subspace::coordinate(4, [0, 1]).unwrap();
        let p = s.project(&v(&[1., 2., 3., 4.])).unwrap();
        assert_eq!(p, v(&[1., 2., 0., 0.]));
        assert_eq!(s.project(&p).unwrap(), p);
        assert!(matches!(
            s.project(&v(&[1., 2., 3.])),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn complement_of_coordinate_plane() {
        let s = Subspace::coordinate(4, [0, 1]).unwrap();
        let c = s.complement().unwrap();
        assert_eq!(c.dim(), 2);
        let e34 = Subspace::coordinate(4, [2, 3]).unwrap();
        assert!(e34.containment_residual(&c) < 1e-14);
        assert!(s.containment_residual(&c.complement().unwrap()) < 1e-14);
        assert_eq!(Subspace::coordinate(3, [0, 1, 2]).unwrap().complement(), Err(Error::FullSpace));
    }

    #[test]
    fn complement_orientation_completes_ambient_volume() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let s = Subspace::random(&mut rng, 5, 2);
            let c = s.complement().unwrap();
            let mut full = DMatrix::<f64>::zeros(5, 5);
            full.columns_mut(0, 2).copy_from(&s.oriented_frame());
            full.columns_mut(2, 3).copy_from(&c.oriented_frame());
            assert!((full.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projector_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = Subspace::random(&mut rng, 7, 3);
        let p = s.projector();
        assert!(p.symmetry_defect() < 1e-12);
        assert!(p.idempotency_defect() < 1e-10);
        assert!((p.trace() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn from_orthonormal_rejects_skewed_frames() {
        let f = DMatrix::from_column_slice(2, 2, &[1.0, 0.0, 0.1, 1.0]);
        assert!(matches!(
            Subspace::from_orthonormal(f, Orientation::Positive),
            Err(Error::NotOrthonormal { .. })
        ));
    }
}
