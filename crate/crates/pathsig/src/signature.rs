//! Truncated signatures and log-signatures of piecewise-linear paths.
//!
//! For a straight segment with increment Δ the signature is exactly
//! exp(Δ) in the tensor algebra, and the signature of a concatenation of
//! intervals is the concatenation product of their signatures. Folding the
//! per-segment exponentials left to right therefore computes the exact
//! truncated signature of any piecewise-linear path — no quadrature
//! involved — and fixes a deterministic evaluation order.

use std::sync::Arc;

use thiserror::Error;

use crate::lyndon::{LyndonBasis, LyndonCoordinates, LyndonError};
use crate::scalar::Scalar;
use crate::stream::PiecewiseLinearPath;
use crate::tensor::{AlgebraError, AlgebraShape, TruncatedTensor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignatureError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lyndon(#[from] LyndonError),
    #[error("intervals are not adjacent: left ends at {left_end}, right starts at {right_start}")]
    NonAdjacent { left_end: f64, right_start: f64 },
}

/// Truncated signature of a path over an interval. Group-like: the constant
/// term is exactly 1 and the degree-1 part is the total increment.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureResult<F: Scalar> {
    sig: TruncatedTensor<F>,
    interval: (F, F),
}

impl<F: Scalar> SignatureResult<F> {
    pub fn tensor(&self) -> &TruncatedTensor<F> {
        &self.sig
    }

    pub fn into_tensor(self) -> TruncatedTensor<F> {
        self.sig
    }

    /// Parameter interval (s, t) the signature covers.
    pub fn interval(&self) -> (F, F) {
        self.interval
    }
}

/// Truncated signature of a piecewise-linear path at depth `n`: the
/// concatenation product over segments of exp(segment increment).
pub fn signature<F: Scalar>(
    path: &PiecewiseLinearPath<F>,
    depth: usize,
) -> Result<SignatureResult<F>, SignatureError> {
    let shape = AlgebraShape::new(path.dim(), depth)?;
    let mut sig = TruncatedTensor::unit(shape);
    if depth > 0 {
        for pair in path.points().windows(2) {
            let delta: Vec<F> = pair[0].iter().zip(&pair[1]).map(|(&a, &b)| b - a).collect();
            let step = TruncatedTensor::from_level_one(shape, &delta)?.exp()?;
            sig = sig.concat_mul(&step)?;
        }
    }
    Ok(SignatureResult {
        sig,
        interval: path.span(),
    })
}

/// Log-signature in Lyndon coordinates, building a fresh basis.
///
/// When computing many log-signatures of the same shape, build the basis
/// once and use [`log_signature_in_basis`].
pub fn log_signature<F: Scalar>(
    path: &PiecewiseLinearPath<F>,
    depth: usize,
) -> Result<LyndonCoordinates<F>, SignatureError> {
    let shape = AlgebraShape::new(path.dim(), depth)?;
    let basis = Arc::new(LyndonBasis::new(shape));
    log_signature_in_basis(path, &basis)
}

/// Log-signature projected onto a caller-supplied basis.
pub fn log_signature_in_basis<F: Scalar>(
    path: &PiecewiseLinearPath<F>,
    basis: &Arc<LyndonBasis<F>>,
) -> Result<LyndonCoordinates<F>, SignatureError> {
    let sig = signature(path, basis.shape().depth())?;
    let log = sig.sig.log()?;
    Ok(LyndonCoordinates::from_tensor(basis, &log)?)
}

/// Chen concatenation: the signature over the union of two adjacent
/// intervals is the concatenation product of the two signatures.
pub fn chen_concat<F: Scalar>(
    a: &SignatureResult<F>,
    b: &SignatureResult<F>,
) -> Result<SignatureResult<F>, SignatureError> {
    if a.interval.1 != b.interval.0 {
        return Err(SignatureError::NonAdjacent {
            left_end: a.interval.1.as_f64(),
            right_start: b.interval.0.as_f64(),
        });
    }
    Ok(SignatureResult {
        sig: a.sig.concat_mul(&b.sig)?,
        interval: (a.interval.0, b.interval.1),
    })
}

/// Pairwise signed areas between the path and its chord, from the depth-2
/// signature: A\[i\]\[j\] = (Sig_ij - Sig_ji)/2. Antisymmetric exactly.
pub fn levy_area<F: Scalar>(path: &PiecewiseLinearPath<F>) -> Result<Vec<Vec<F>>, SignatureError> {
    let d = path.dim();
    let sig = signature(path, 2)?;
    let half = F::from_f64_lossy(0.5);
    let mut area = vec![vec![F::zero(); d]; d];
    for i in 1..=d {
        for j in (i + 1)..=d {
            let a = half * (sig.sig.coeff(&[i, j]) - sig.sig.coeff(&[j, i]));
            area[i - 1][j - 1] = a;
            area[j - 1][i - 1] = -a;
        }
    }
    Ok(area)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::PiecewiseLinearPath;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn l_path() -> PiecewiseLinearPath<f64> {
        PiecewiseLinearPath::from_points(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]])
            .unwrap()
    }

    fn circle(samples: usize) -> PiecewiseLinearPath<f64> {
        let points = (0..=samples)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect();
        PiecewiseLinearPath::from_points(points).unwrap()
    }

    fn random_path(rng: &mut ChaCha8Rng, dim: usize, segments: usize) -> PiecewiseLinearPath<f64> {
        let mut points = vec![vec![0.0; dim]];
        for _ in 0..segments {
            let prev = points.last().unwrap().clone();
            points.push(prev.iter().map(|&c| c + rng.gen_range(-0.5..0.5)).collect());
        }
        PiecewiseLinearPath::from_points(points).unwrap()
    }

    #[test]
    fn single_segment_is_an_exponential() {
        let p = PiecewiseLinearPath::from_points(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let sig = signature(&p, 2).unwrap();
        let t = sig.tensor();
        assert_eq!(t.coeff(&[]), 1.0);
        assert_eq!(t.coeff(&[1]), 1.0);
        assert_eq!(t.coeff(&[2]), 0.0);
        assert_eq!(t.coeff(&[1, 1]), 0.5);
        assert_eq!(t.coeff(&[1, 2]), 0.0);
        assert_eq!(t.coeff(&[2, 1]), 0.0);
        assert_eq!(t.coeff(&[2, 2]), 0.0);
    }

    #[test]
    fn constant_path_has_unit_signature() {
        let p = PiecewiseLinearPath::new(vec![3.0], vec![vec![1.0, 2.0]]).unwrap();
        let sig = signature(&p, 3).unwrap();
        assert_eq!(sig.tensor(), &TruncatedTensor::unit(sig.tensor().shape()));
        assert_eq!(sig.interval(), (3.0, 3.0));
    }

    #[test]
    fn l_path_depth_two_coefficients() {
        let sig = signature(&l_path(), 2).unwrap();
        let t = sig.tensor();
        assert!((t.coeff(&[1, 2]) - 1.0).abs() <= 1e-15);
        assert_eq!(t.coeff(&[2, 1]), 0.0);
        assert!((t.coeff(&[1, 1]) - 0.5).abs() <= 1e-15);
        assert!((t.coeff(&[2, 2]) - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn depth_zero_signature_is_the_unit() {
        let sig = signature(&l_path(), 0).unwrap();
        assert_eq!(sig.tensor().coeffs(), &[1.0]);
    }

    #[test]
    fn degree_one_part_is_the_total_increment() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let p = random_path(&mut rng, 3, 8);
            let sig = signature(&p, 3).unwrap();
            let first = &p.points()[0];
            let last = p.points().last().unwrap();
            for i in 0..3 {
                let expected = last[i] - first[i];
                assert!((sig.tensor().coeff(&[i + 1]) - expected).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn log_signature_of_single_segment_is_the_increment() {
        let p =
            PiecewiseLinearPath::<f64>::from_points(vec![vec![0.0, 0.0], vec![0.7, -0.3]]).unwrap();
        let ls = log_signature(&p, 4).unwrap();
        assert!((ls.coord_of(&[1]).unwrap() - 0.7).abs() <= 1e-14);
        assert!((ls.coord_of(&[2]).unwrap() + 0.3).abs() <= 1e-14);
        for (w, c) in ls.basis().words().iter().zip(ls.coords()) {
            if w.len() > 1 {
                assert!(c.abs() <= 1e-14, "{w:?}");
            }
        }
    }

    #[test]
    fn l_path_log_signature_area() {
        let ls = log_signature(&l_path(), 2).unwrap();
        assert!((ls.coord_of(&[1]).unwrap() - 1.0).abs() <= 1e-12);
        assert!((ls.coord_of(&[2]).unwrap() - 1.0).abs() <= 1e-12);
        assert!((ls.coord_of(&[1, 2]).unwrap() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn full_circle_area_is_pi() {
        let p = circle(720);
        let ls = log_signature(&p, 2).unwrap();
        assert!(ls.coord_of(&[1]).unwrap().abs() <= 1e-12);
        assert!(ls.coord_of(&[2]).unwrap().abs() <= 1e-12);
        assert!((ls.coord_of(&[1, 2]).unwrap() - std::f64::consts::PI).abs() <= 1e-3);
    }

    #[test]
    fn chen_concat_matches_whole_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10 {
            let p = random_path(&mut rng, 2, 9);
            let (s, t) = p.span();
            let mid = p.times()[4];
            let left = signature(&p.restrict(s, mid).unwrap(), 4).unwrap();
            let right = signature(&p.restrict(mid, t).unwrap(), 4).unwrap();
            let joined = chen_concat(&left, &right).unwrap();
            let whole = signature(&p, 4).unwrap();
            assert_eq!(joined.interval(), whole.interval());
            for (a, b) in joined.tensor().coeffs().iter().zip(whole.tensor().coeffs()) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn chen_concat_with_point_signature_is_identity() {
        let p = l_path();
        let whole = signature(&p, 3).unwrap();
        let (_, t) = p.span();
        let point = signature(&p.restrict(t, t).unwrap(), 3).unwrap();
        let joined = chen_concat(&whole, &point).unwrap();
        assert_eq!(joined.tensor(), whole.tensor());
    }

    #[test]
    fn chen_concat_rejects_gaps() {
        let p = l_path();
        let a = signature(&p.restrict(0.0, 0.5).unwrap(), 2).unwrap();
        let b = signature(&p.restrict(1.0, 2.0).unwrap(), 2).unwrap();
        assert!(matches!(
            chen_concat(&a, &b),
            Err(SignatureError::NonAdjacent { .. })
        ));
    }

    #[test]
    fn three_way_split_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let p = random_path(&mut rng, 3, 9);
        let t = p.times();
        let s1 = signature(&p.restrict(t[0], t[3]).unwrap(), 3).unwrap();
        let s2 = signature(&p.restrict(t[3], t[6]).unwrap(), 3).unwrap();
        let s3 = signature(&p.restrict(t[6], t[9]).unwrap(), 3).unwrap();
        let left = chen_concat(&chen_concat(&s1, &s2).unwrap(), &s3).unwrap();
        let right = chen_concat(&s1, &chen_concat(&s2, &s3).unwrap()).unwrap();
        for (a, b) in left.tensor().coeffs().iter().zip(right.tensor().coeffs()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn reversal_gives_the_group_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..5 {
            let p = random_path(&mut rng, 2, 7);
            let fwd = signature(&p, 4).unwrap();
            let bwd = signature(&p.reversed(), 4).unwrap();
            let prod = bwd.tensor().concat_mul(fwd.tensor()).unwrap();
            let unit = TruncatedTensor::<f64>::unit(prod.shape());
            for (a, b) in prod.coeffs().iter().zip(unit.coeffs()) {
                assert!((a - b).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn levy_area_of_a_straight_segment_is_zero() {
        let p = PiecewiseLinearPath::from_points(vec![vec![0.0, 0.0, 0.0], vec![1.0, 2.0, -1.0]])
            .unwrap();
        let a = levy_area(&p).unwrap();
        for row in &a {
            for &v in row {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn levy_area_examples() {
        let a = levy_area(&l_path()).unwrap();
        assert!((a[0][1] - 0.5).abs() <= 1e-15);
        assert_eq!(a[0][1], -a[1][0]);
        assert_eq!(a[0][0], 0.0);

        let a = levy_area(&circle(720)).unwrap();
        assert!((a[0][1] - std::f64::consts::PI).abs() <= 1e-3);
    }

    #[test]
    fn levy_area_matches_shoelace_oracle() {
        // closed polygon: signed area between path and chord = enclosed area
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let mut points: Vec<Vec<f64>> = (0..12)
            .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        points.push(points[0].clone());
        let shoelace: f64 = points
            .windows(2)
            .map(|w| 0.5 * (w[0][0] * w[1][1] - w[1][0] * w[0][1]))
            .sum();
        let p = PiecewiseLinearPath::from_points(points).unwrap();
        let a = levy_area(&p).unwrap();
        assert!((a[0][1] - shoelace).abs() <= 1e-12);
    }

    #[test]
    fn area_per_period_is_constant_over_repeated_cycles() {
        // alternating two-channel signal: area accumulates linearly with the
        // number of whole periods
        let period_area = |periods: usize| {
            let samples = 256 * periods;
            let points = (0..=samples)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / 256.0;
                    vec![t.sin(), -t.cos()]
                })
                .collect();
            let p = PiecewiseLinearPath::from_points(points).unwrap();
            levy_area(&p).unwrap()[0][1] / periods as f64
        };
        let one = period_area(1);
        for k in [2, 4, 7] {
            assert!((period_area(k) - one).abs() / one.abs() <= 1e-3, "k={k}");
        }
    }
}
