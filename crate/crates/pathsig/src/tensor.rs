//! Arithmetic in the truncated free tensor algebra T^(n)(R^d).
//!
//! An element is a formal linear combination of words over the alphabet
//! {1, …, d}, truncated at word length n. Coefficients are stored densely in
//! degree-major order (all words of length 0, then length 1, …), with words
//! of equal length ordered lexicographically. Products that would land beyond
//! degree n are discarded.
//!
//! The dense layout keeps multiplication close to memory-bandwidth cost: the
//! top degree holds more than half of the coefficients when d > 1, so the
//! convolution loop touches each buffer only O(n) times.

use thiserror::Error;

use crate::scalar::Scalar;

/// Tolerance on the constant term when checking the preconditions of
/// [`TruncatedTensor::exp`].
pub const EXP_CONSTANT_TOL: f64 = 1e-14;
/// Tolerance on the constant term when checking the preconditions of
/// [`TruncatedTensor::log`].
pub const LOG_CONSTANT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("alphabet must have at least one letter")]
    EmptyAlphabet,
    #[error("tensor dimension overflows the platform integer for d={d}, n={n}")]
    DimOverflow { d: usize, n: usize },
    #[error("shape mismatch: (d={}, n={}) vs (d={}, n={})", left.0, left.1, right.0, right.1)]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("coefficient buffer has length {found}, shape requires {expected}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("non-finite coefficient at word index {index}")]
    NonFinite { index: usize },
    #[error("level-one embedding needs depth >= 1 and {expected} coordinates, got {found}")]
    LevelOne { expected: usize, found: usize },
    #[error("exp requires a zero constant term, found {found:e}")]
    ConstantTermNotZero { found: f64 },
    #[error("log requires constant term 1, found {found}")]
    ConstantTermNotOne { found: f64 },
}

/// Channel count and truncation depth of a truncated tensor algebra.
///
/// Construction checks that the total word count fits the platform integer,
/// so oversized shapes fail loudly instead of wrapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraShape {
    d: usize,
    n: usize,
    dim: usize,
}

impl AlgebraShape {
    /// Algebra over `d` letters truncated at word length `n`.
    pub fn new(d: usize, n: usize) -> Result<Self, AlgebraError> {
        if d == 0 {
            return Err(AlgebraError::EmptyAlphabet);
        }
        let dim = checked_dim(d, n).ok_or(AlgebraError::DimOverflow { d, n })?;
        Ok(Self { d, n, dim })
    }

    /// Number of letters in the alphabet.
    pub fn channels(&self) -> usize {
        self.d
    }

    /// Truncation depth n.
    pub fn depth(&self) -> usize {
        self.n
    }

    /// Total number of words of length <= n, i.e. (d^(n+1) - 1)/(d - 1).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the first word of length `k`.
    pub fn degree_start(&self, k: usize) -> usize {
        debug_assert!(k <= self.n + 1);
        if self.d == 1 {
            k
        } else {
            (self.d.pow(k as u32) - 1) / (self.d - 1)
        }
    }

    /// Number of words of length exactly `k`, i.e. d^k.
    pub fn degree_dim(&self, k: usize) -> usize {
        debug_assert!(k <= self.n);
        self.d.pow(k as u32)
    }

    /// Index of a word in the degree-major, lexicographic-within-degree order.
    ///
    /// Letters are 1-based; the empty word maps to index 0.
    pub fn word_index(&self, word: &[usize]) -> usize {
        assert!(word.len() <= self.n, "word longer than truncation depth");
        let mut within = 0usize;
        for &letter in word {
            assert!(
                (1..=self.d).contains(&letter),
                "letter {letter} outside alphabet 1..={}",
                self.d
            );
            within = within * self.d + (letter - 1);
        }
        self.degree_start(word.len()) + within
    }

    /// Word at a given index; inverse of [`Self::word_index`].
    pub fn word_at(&self, index: usize) -> Vec<usize> {
        assert!(index < self.dim, "index {index} out of range");
        let mut k = 0;
        while self.degree_start(k + 1) <= index {
            k += 1;
        }
        let mut within = index - self.degree_start(k);
        let mut word = vec![0usize; k];
        for slot in word.iter_mut().rev() {
            *slot = within % self.d + 1;
            within /= self.d;
        }
        word
    }

    /// All words in storage order.
    pub fn words(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.dim).map(|i| self.word_at(i))
    }
}

fn checked_dim(d: usize, n: usize) -> Option<usize> {
    if d == 1 {
        return n.checked_add(1);
    }
    // (d^(n+1) - 1)/(d - 1) with checked signed arithmetic: the numerator is
    // the first quantity to overflow, and i64 is the platform integer width.
    let d_i = i64::try_from(d).ok()?;
    let mut pow: i64 = 1;
    for _ in 0..=n {
        pow = pow.checked_mul(d_i)?;
    }
    usize::try_from((pow - 1) / (d_i - 1)).ok()
}

/// Word rendered for reports: letter digits concatenated for d <= 9
/// ("112"), comma-separated in parentheses for larger alphabets
/// ("(1,12,3)"). The empty word renders as "".
pub fn word_label(word: &[usize], d: usize) -> String {
    if word.is_empty() {
        return String::new();
    }
    if d <= 9 {
        word.iter().map(|l| l.to_string()).collect()
    } else {
        let inner = word
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("({inner})")
    }
}

/// Element of T^(n)(R^d): one coefficient per word of length <= n.
///
/// Values are immutable from the caller's perspective; every operation is a
/// pure function returning a new tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedTensor<F: Scalar> {
    shape: AlgebraShape,
    coeffs: Vec<F>,
}

impl<F: Scalar> TruncatedTensor<F> {
    /// The zero tensor.
    pub fn zero(shape: AlgebraShape) -> Self {
        Self {
            shape,
            coeffs: vec![F::zero(); shape.dim()],
        }
    }

    /// The multiplicative unit: coefficient 1 on the empty word.
    pub fn unit(shape: AlgebraShape) -> Self {
        let mut t = Self::zero(shape);
        t.coeffs[0] = F::one();
        t
    }

    /// Tensor from a dense coefficient buffer in storage order.
    pub fn from_coeffs(shape: AlgebraShape, coeffs: Vec<F>) -> Result<Self, AlgebraError> {
        if coeffs.len() != shape.dim() {
            return Err(AlgebraError::CoefficientCount {
                expected: shape.dim(),
                found: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(AlgebraError::NonFinite { index });
        }
        Ok(Self { shape, coeffs })
    }

    /// Pure degree-1 element with the given coordinates on the letters.
    pub fn from_level_one(shape: AlgebraShape, coords: &[F]) -> Result<Self, AlgebraError> {
        if shape.depth() == 0 || coords.len() != shape.channels() {
            return Err(AlgebraError::LevelOne {
                expected: shape.channels(),
                found: coords.len(),
            });
        }
        let mut t = Self::zero(shape);
        t.coeffs[1..=shape.channels()].copy_from_slice(coords);
        Ok(t)
    }

    pub fn shape(&self) -> AlgebraShape {
        self.shape
    }

    /// Dense coefficients in degree-major order.
    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of a single word.
    pub fn coeff(&self, word: &[usize]) -> F {
        self.coeffs[self.shape.word_index(word)]
    }

    /// Degree-1 coefficients as a vector in R^d (empty when n = 0).
    pub fn level_one(&self) -> &[F] {
        if self.shape.depth() == 0 {
            &[]
        } else {
            &self.coeffs[1..=self.shape.channels()]
        }
    }

    /// Concatenation product, truncated at degree n.
    ///
    /// The coefficient of w in the product is the sum of `a_u * b_v` over all
    /// splits w = u·v; words longer than n are discarded.
    pub fn concat_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_shape(rhs)?;
        let shape = self.shape;
        let (d, n) = (shape.channels(), shape.depth());
        let mut out = vec![F::zero(); shape.dim()];
        for k in 0..=n {
            let off_k = shape.degree_start(k);
            for i in 0..=k {
                let j = k - i;
                let off_i = shape.degree_start(i);
                let off_j = shape.degree_start(j);
                let dim_j = d.pow(j as u32);
                for iu in 0..d.pow(i as u32) {
                    let a = self.coeffs[off_i + iu];
                    if a == F::zero() {
                        continue;
                    }
                    let row = off_k + iu * dim_j;
                    for iv in 0..dim_j {
                        out[row + iv] = out[row + iv] + a * rhs.coeffs[off_j + iv];
                    }
                }
            }
        }
        Ok(Self { shape, coeffs: out })
    }

    /// Elementwise sum.
    pub fn add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_shape(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(Self {
            shape: self.shape,
            coeffs,
        })
    }

    /// Elementwise difference.
    pub fn sub(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_shape(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Self {
            shape: self.shape,
            coeffs,
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, lambda: F) -> Self {
        Self {
            shape: self.shape,
            coeffs: self.coeffs.iter().map(|&c| c * lambda).collect(),
        }
    }

    /// Truncated exponential sum_{k<=n} t^k / k!.
    ///
    /// Requires a zero constant term (within [`EXP_CONSTANT_TOL`]); the
    /// result has constant term exactly 1.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        let eps = self.coeffs[0];
        if eps.abs() > F::from_f64_lossy(EXP_CONSTANT_TOL) {
            return Err(AlgebraError::ConstantTermNotZero {
                found: eps.as_f64(),
            });
        }
        let mut t = self.clone();
        t.coeffs[0] = F::zero();
        // Horner form: 1 + t(1 + t/2 (1 + t/3 (…))).
        let mut acc = Self::unit(self.shape);
        for k in (1..=self.shape.depth()).rev() {
            acc = t.scale(F::one() / F::from_count(k)).concat_mul(&acc)?;
            acc.coeffs[0] = acc.coeffs[0] + F::one();
        }
        Ok(acc)
    }

    /// Truncated logarithm sum_{k<=n} (-1)^(k+1) (g - 1)^k / k.
    ///
    /// Requires constant term 1 (within [`LOG_CONSTANT_TOL`]); the result has
    /// constant term exactly 0.
    pub fn log(&self) -> Result<Self, AlgebraError> {
        let eps = self.coeffs[0];
        if (eps - F::one()).abs() > F::from_f64_lossy(LOG_CONSTANT_TOL) {
            return Err(AlgebraError::ConstantTermNotOne {
                found: eps.as_f64(),
            });
        }
        let mut x = self.clone();
        x.coeffs[0] = F::zero();
        let mut out = x.clone();
        let mut pow = x.clone();
        for k in 2..=self.shape.depth() {
            pow = pow.concat_mul(&x)?;
            let coef = F::one() / F::from_count(k);
            let term = if k % 2 == 0 { -coef } else { coef };
            out = out.add(&pow.scale(term))?;
        }
        Ok(out)
    }

    /// Copy with all coefficients of degree > `k` set to zero.
    pub fn truncated(&self, k: usize) -> Self {
        let mut t = self.clone();
        let cut = self
            .shape
            .degree_start((k + 1).min(self.shape.depth() + 1))
            .min(t.coeffs.len());
        for c in &mut t.coeffs[cut..] {
            *c = F::zero();
        }
        t
    }

    /// Word-keyed view of the coefficients in storage order, words rendered
    /// with [`word_label`].
    pub fn word_map(&self) -> Vec<(String, F)> {
        let d = self.shape.channels();
        self.shape
            .words()
            .zip(&self.coeffs)
            .map(|(w, &c)| (word_label(&w, d), c))
            .collect()
    }

    fn check_shape(&self, rhs: &Self) -> Result<(), AlgebraError> {
        if self.shape != rhs.shape {
            return Err(AlgebraError::ShapeMismatch {
                left: (self.shape.channels(), self.shape.depth()),
                right: (rhs.shape.channels(), rhs.shape.depth()),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn shape(d: usize, n: usize) -> AlgebraShape {
        AlgebraShape::new(d, n).unwrap()
    }

    fn random_tensor(shape: AlgebraShape, rng: &mut ChaCha8Rng) -> TruncatedTensor<f64> {
        let coeffs = (0..shape.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        TruncatedTensor::from_coeffs(shape, coeffs).unwrap()
    }

    /// Independent word count: enumerate words of length <= n recursively.
    fn brute_force_word_count(d: usize, n: usize) -> usize {
        fn extend(d: usize, remaining: usize) -> usize {
            if remaining == 0 {
                return 1;
            }
            1 + (0..d).map(|_| extend(d, remaining - 1)).sum::<usize>()
        }
        extend(d, n)
    }

    #[test]
    fn dim_matches_formula_and_enumeration() {
        assert_eq!(shape(2, 3).dim(), 15);
        assert_eq!(shape(1, 5).dim(), 6);
        assert_eq!(shape(3, 3).dim(), 40);
        for d in 1..=5 {
            for n in 0..=5 {
                assert_eq!(
                    shape(d, n).dim(),
                    brute_force_word_count(d, n),
                    "d={d} n={n}"
                );
            }
        }
    }

    #[test]
    fn dim_overflow_is_an_error() {
        assert_eq!(
            AlgebraShape::new(10, 18).unwrap_err(),
            AlgebraError::DimOverflow { d: 10, n: 18 }
        );
        assert_eq!(
            AlgebraShape::new(0, 3).unwrap_err(),
            AlgebraError::EmptyAlphabet
        );
    }

    #[test]
    fn word_index_is_a_bijection() {
        for (d, n) in [(1, 4), (2, 4), (3, 3), (10, 2)] {
            let s = shape(d, n);
            for i in 0..s.dim() {
                let w = s.word_at(i);
                assert!(w.len() <= n);
                assert_eq!(s.word_index(&w), i, "d={d} n={n} i={i}");
            }
        }
        // degree-major, lexicographic within degree
        let s = shape(2, 2);
        let words: Vec<_> = s.words().collect();
        assert_eq!(
            words,
            vec![
                vec![],
                vec![1],
                vec![2],
                vec![1, 1],
                vec![1, 2],
                vec![2, 1],
                vec![2, 2]
            ]
        );
    }

    #[test]
    fn word_labels() {
        assert_eq!(word_label(&[], 2), "");
        assert_eq!(word_label(&[1, 1, 2], 3), "112");
        assert_eq!(word_label(&[1, 12, 3], 12), "(1,12,3)");
    }

    #[test]
    fn unit_has_one_on_empty_word() {
        let u = TruncatedTensor::<f64>::unit(shape(2, 2));
        assert_eq!(u.coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn unit_laws_hold_exactly() {
        let s = shape(3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = random_tensor(s, &mut rng);
            let u = TruncatedTensor::unit(s);
            assert_eq!(u.concat_mul(&t).unwrap(), t);
            assert_eq!(t.concat_mul(&u).unwrap(), t);
        }
    }

    #[test]
    fn concat_of_basis_words_concatenates() {
        let s = shape(2, 2);
        let mut a = TruncatedTensor::<f64>::zero(s);
        a.coeffs[s.word_index(&[1])] = 1.0;
        let mut b = TruncatedTensor::<f64>::zero(s);
        b.coeffs[s.word_index(&[2])] = 1.0;
        let c = a.concat_mul(&b).unwrap();
        for i in 0..s.dim() {
            let expected = if i == s.word_index(&[1, 2]) { 1.0 } else { 0.0 };
            assert_eq!(c.coeffs()[i], expected);
        }
    }

    #[test]
    fn concat_distributes_over_unit_plus_letter() {
        // (1 + v1)(1 + v2) = 1 + v1 + v2 + v1 v2
        let s = shape(2, 2);
        let u = TruncatedTensor::<f64>::unit(s);
        let v1 = TruncatedTensor::from_level_one(s, &[1.0, 0.0]).unwrap();
        let v2 = TruncatedTensor::from_level_one(s, &[0.0, 1.0]).unwrap();
        let prod = u
            .add(&v1)
            .unwrap()
            .concat_mul(&u.add(&v2).unwrap())
            .unwrap();
        assert_eq!(prod.coeff(&[]), 1.0);
        assert_eq!(prod.coeff(&[1]), 1.0);
        assert_eq!(prod.coeff(&[2]), 1.0);
        assert_eq!(prod.coeff(&[1, 2]), 1.0);
        assert_eq!(prod.coeff(&[2, 1]), 0.0);
        assert_eq!(prod.coeff(&[1, 1]), 0.0);
    }

    /// Oracle: coefficient of w in a⊗b⊗c summed directly over double splits.
    fn triple_product_oracle(
        a: &TruncatedTensor<f64>,
        b: &TruncatedTensor<f64>,
        c: &TruncatedTensor<f64>,
    ) -> Vec<f64> {
        let s = a.shape();
        let mut out = vec![0.0; s.dim()];
        for (iw, w) in s.words().enumerate() {
            let mut total = 0.0;
            for i in 0..=w.len() {
                for j in i..=w.len() {
                    total += a.coeff(&w[..i]) * b.coeff(&w[i..j]) * c.coeff(&w[j..]);
                }
            }
            out[iw] = total;
        }
        out
    }

    #[test]
    fn concat_is_associative_and_matches_triple_split_oracle() {
        let s = shape(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let (a, b, c) = (
                random_tensor(s, &mut rng),
                random_tensor(s, &mut rng),
                random_tensor(s, &mut rng),
            );
            let left = a.concat_mul(&b).unwrap().concat_mul(&c).unwrap();
            let right = a.concat_mul(&b.concat_mul(&c).unwrap()).unwrap();
            let oracle = triple_product_oracle(&a, &b, &c);
            for i in 0..s.dim() {
                assert!((left.coeffs()[i] - right.coeffs()[i]).abs() <= 1e-12);
                assert!((left.coeffs()[i] - oracle[i]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn degree_grading_is_respected() {
        // The degree-k part of a⊗b only depends on parts of degrees summing to k.
        let s = shape(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_tensor(s, &mut rng);
        let b = random_tensor(s, &mut rng);
        let full = a.concat_mul(&b).unwrap();
        for k in 0..=3 {
            let cut = a.truncated(k).concat_mul(&b.truncated(k)).unwrap();
            let lo = s.degree_start(k);
            let hi = lo + s.degree_dim(k);
            assert_eq!(&full.coeffs()[lo..hi], &cut.coeffs()[lo..hi], "degree {k}");
        }
    }

    #[test]
    fn add_and_scale_basics() {
        let s = shape(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let t = random_tensor(s, &mut rng);
        let z = t.add(&t.scale(-1.0)).unwrap();
        assert!(z.coeffs().iter().all(|&c| c == 0.0));
        let two = TruncatedTensor::<f64>::unit(s).scale(2.0);
        assert_eq!(two.coeff(&[]), 2.0);
        let u = random_tensor(s, &mut rng);
        assert_eq!(t.add(&u).unwrap(), u.add(&t).unwrap());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = TruncatedTensor::<f64>::unit(shape(2, 2));
        let b = TruncatedTensor::<f64>::unit(shape(2, 3));
        assert!(matches!(
            a.concat_mul(&b),
            Err(AlgebraError::ShapeMismatch { .. })
        ));
        assert!(matches!(a.add(&b), Err(AlgebraError::ShapeMismatch { .. })));
    }

    #[test]
    fn exp_of_level_one_element() {
        let s = shape(2, 2);
        let x = TruncatedTensor::from_level_one(s, &[1.0, 0.0]).unwrap();
        let e = x.exp().unwrap();
        assert_eq!(e.coeff(&[]), 1.0);
        assert_eq!(e.coeff(&[1]), 1.0);
        assert_eq!(e.coeff(&[2]), 0.0);
        assert_eq!(e.coeff(&[1, 1]), 0.5);
        assert_eq!(e.coeff(&[1, 2]), 0.0);
        assert_eq!(e.coeff(&[2, 2]), 0.0);
    }

    #[test]
    fn exp_of_zero_is_unit() {
        let s = shape(3, 3);
        let z = TruncatedTensor::<f64>::zero(s);
        assert_eq!(z.exp().unwrap(), TruncatedTensor::unit(s));
    }

    #[test]
    fn exp_level_four_coefficient_matches_hand_expansion() {
        // For a level-1 element x, the coefficient of "1122" in exp(x) is the
        // degree-4 term x^⊗4/4!, i.e. x1*x1*x2*x2/24.
        let s = shape(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..5 {
            let x1: f64 = rng.gen_range(-2.0..2.0);
            let x2: f64 = rng.gen_range(-2.0..2.0);
            let x = TruncatedTensor::from_level_one(s, &[x1, x2]).unwrap();
            let e = x.exp().unwrap();
            let expected = x1 * x1 * x2 * x2 / 24.0;
            assert!((e.coeff(&[1, 1, 2, 2]) - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn exp_rejects_nonzero_constant_term() {
        let s = shape(2, 2);
        let t = TruncatedTensor::<f64>::unit(s);
        assert!(matches!(
            t.exp(),
            Err(AlgebraError::ConstantTermNotZero { .. })
        ));
    }

    #[test]
    fn log_of_unit_is_zero() {
        let s = shape(2, 3);
        let u = TruncatedTensor::<f64>::unit(s);
        assert_eq!(u.log().unwrap(), TruncatedTensor::zero(s));
    }

    #[test]
    fn log_rejects_wrong_constant_term() {
        let s = shape(2, 2);
        let z = TruncatedTensor::<f64>::zero(s);
        assert!(matches!(
            z.log(),
            Err(AlgebraError::ConstantTermNotOne { .. })
        ));
    }

    #[test]
    fn log_series_single_letter() {
        // log(1 + v1) at d=1, n=3 is v1 - v1v1/2 + v1v1v1/3.
        let s = shape(1, 3);
        let mut g = TruncatedTensor::<f64>::unit(s);
        g.coeffs[1] = 1.0;
        let l = g.log().unwrap();
        assert_eq!(l.coeffs()[0], 0.0);
        assert!((l.coeffs()[1] - 1.0).abs() <= 1e-15);
        assert!((l.coeffs()[2] + 0.5).abs() <= 1e-15);
        assert!((l.coeffs()[3] - 1.0 / 3.0).abs() <= 1e-15);
    }

    #[test]
    fn exp_log_roundtrip() {
        for (d, n) in [(1, 4), (2, 4), (3, 4), (2, 3)] {
            let s = shape(d, n);
            let mut rng = ChaCha8Rng::seed_from_u64(23 + d as u64);
            for _ in 0..10 {
                let mut t = random_tensor(s, &mut rng);
                t.coeffs[0] = 0.0;
                let back = t.exp().unwrap().log().unwrap();
                for i in 0..s.dim() {
                    assert!(
                        (back.coeffs()[i] - t.coeffs()[i]).abs() <= 1e-10,
                        "d={d} n={n} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn from_coeffs_validates() {
        let s = shape(2, 1);
        assert!(matches!(
            TruncatedTensor::from_coeffs(s, vec![1.0, 2.0]),
            Err(AlgebraError::CoefficientCount {
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            TruncatedTensor::from_coeffs(s, vec![1.0, f64::NAN, 0.0]),
            Err(AlgebraError::NonFinite { index: 1 })
        ));
    }
}
