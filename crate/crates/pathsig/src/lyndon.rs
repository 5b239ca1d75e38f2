//! Lyndon-word basis of the free Lie algebra inside T^(n)(R^d).
//!
//! A Lyndon word is strictly smaller than every proper rotation of itself.
//! Each Lyndon word w of length >= 2 has a standard factorization w = u·v
//! with v its longest proper Lyndon suffix; bracketing recursively,
//! [u, v] = u⊗v − v⊗u, expands w into a homogeneous tensor whose leading
//! coefficient is 1 on w itself and whose support lies on lexicographically
//! larger words of the same length. That unitriangularity makes projection
//! of a Lie element onto the basis a straight back-substitution.

use std::sync::Arc;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::tensor::{word_label, AlgebraError, AlgebraShape, TruncatedTensor};

/// Residual allowed, per coefficient, when projecting a tensor onto the
/// basis: slack over the accumulated arithmetic error across <= d^n terms.
pub const PROJECTION_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LyndonError {
    #[error("\"{word}\" is not a Lyndon word")]
    NotLyndon { word: String },
    #[error(
        "tensor is not a Lie element: residual {residual:e} at word \"{word}\" exceeds {tol:e}"
    )]
    ResidualTooLarge {
        word: String,
        residual: f64,
        tol: f64,
    },
    #[error("coordinate count {found} does not match basis size {expected}")]
    CoordinateCount { expected: usize, found: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Bracketing tree of a Lyndon word under standard factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketTree {
    Letter(usize),
    Pair(Box<BracketTree>, Box<BracketTree>),
}

/// True when `word` is strictly smaller than all of its proper rotations.
pub fn is_lyndon(word: &[usize]) -> bool {
    let k = word.len();
    if k == 0 {
        return false;
    }
    for start in 1..k {
        // compare word against its rotation starting at `start`
        let mut less = false;
        for offset in 0..k {
            let a = word[offset];
            let b = word[(start + offset) % k];
            if a != b {
                less = a < b;
                break;
            }
        }
        if !less {
            return false;
        }
    }
    true
}

/// All Lyndon words of length 1..=n over letters 1..=d, degree-major and
/// lexicographic within degree (Duval / FKM generation).
pub fn lyndon_words(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 || d == 0 {
        return out;
    }
    let mut w = vec![1usize];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            w.push(w[w.len() % m]);
        }
        while w.last() == Some(&d) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    out
}

/// Standard bracketing of a Lyndon word: split at the longest proper suffix
/// that is itself Lyndon, then recurse.
pub fn standard_bracketing(word: &[usize]) -> Result<BracketTree, LyndonError> {
    if !is_lyndon(word) {
        let widest = word.iter().copied().max().unwrap_or(1);
        return Err(LyndonError::NotLyndon {
            word: word_label(word, widest),
        });
    }
    Ok(bracket_unchecked(word))
}

fn bracket_unchecked(word: &[usize]) -> BracketTree {
    if word.len() == 1 {
        return BracketTree::Letter(word[0]);
    }
    // longest proper Lyndon suffix = smallest split point with a Lyndon tail
    let split = (1..word.len())
        .find(|&i| is_lyndon(&word[i..]))
        .expect("single letters are Lyndon");
    BracketTree::Pair(
        Box::new(bracket_unchecked(&word[..split])),
        Box::new(bracket_unchecked(&word[split..])),
    )
}

/// Lyndon word expanded into T^(n)(R^d) through its standard bracketing,
/// [u, v] = u⊗v − v⊗u.
pub fn bracket_to_tensor<F: Scalar>(
    word: &[usize],
    shape: AlgebraShape,
) -> Result<TruncatedTensor<F>, LyndonError> {
    assert!(
        word.len() <= shape.depth(),
        "word length {} exceeds truncation depth {}",
        word.len(),
        shape.depth()
    );
    let tree = standard_bracketing(word)?;
    Ok(expand_tree(&tree, shape))
}

fn expand_tree<F: Scalar>(tree: &BracketTree, shape: AlgebraShape) -> TruncatedTensor<F> {
    match tree {
        BracketTree::Letter(a) => {
            let mut coords = vec![F::zero(); shape.channels()];
            coords[*a - 1] = F::one();
            TruncatedTensor::from_level_one(shape, &coords).expect("letter fits shape")
        }
        BracketTree::Pair(u, v) => {
            let eu = expand_tree::<F>(u, shape);
            let ev = expand_tree::<F>(v, shape);
            let uv = eu.concat_mul(&ev).expect("matching shapes");
            let vu = ev.concat_mul(&eu).expect("matching shapes");
            uv.sub(&vu).expect("matching shapes")
        }
    }
}

/// Lyndon basis of the free Lie algebra in T^(n)(R^d): words, bracketing
/// trees, and sparse tensor expansions. Immutable after construction and
/// freely shareable across threads.
#[derive(Debug, Clone)]
pub struct LyndonBasis<F: Scalar> {
    shape: AlgebraShape,
    words: Vec<Vec<usize>>,
    trees: Vec<BracketTree>,
    /// per word: (tensor index, coefficient), sorted by index; the first
    /// entry is always (index of the word itself, 1)
    expansions: Vec<Vec<(usize, F)>>,
}

impl<F: Scalar> LyndonBasis<F> {
    pub fn new(shape: AlgebraShape) -> Self {
        let words = lyndon_words(shape.channels(), shape.depth());
        let trees: Vec<_> = words.iter().map(|w| bracket_unchecked(w)).collect();
        let expansions = trees
            .iter()
            .map(|t| {
                let dense = expand_tree::<F>(t, shape);
                dense
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != F::zero())
                    .map(|(i, &c)| (i, c))
                    .collect()
            })
            .collect();
        Self {
            shape,
            words,
            trees,
            expansions,
        }
    }

    pub fn shape(&self) -> AlgebraShape {
        self.shape
    }

    /// Basis words, degree-major then lexicographic.
    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Standard bracketing tree of the i-th basis word.
    pub fn bracketing(&self, i: usize) -> &BracketTree {
        &self.trees[i]
    }

    /// Dense tensor expansion of the i-th basis word.
    pub fn expansion(&self, i: usize) -> TruncatedTensor<F> {
        let mut coeffs = vec![F::zero(); self.shape.dim()];
        for &(idx, c) in &self.expansions[i] {
            coeffs[idx] = c;
        }
        TruncatedTensor::from_coeffs(self.shape, coeffs).expect("expansion is finite")
    }

    /// Position of a word in the basis, if it is a basis word.
    pub fn position(&self, word: &[usize]) -> Option<usize> {
        self.words.iter().position(|w| w == word)
    }

    /// Render the i-th basis word for reports.
    pub fn label(&self, i: usize) -> String {
        word_label(&self.words[i], self.shape.channels())
    }

    /// Project a Lie element onto the basis by back-substitution, degree by
    /// degree. Fails, naming the worst word, when the reconstruction residual
    /// exceeds the tolerance — the input was not a Lie element.
    ///
    /// The tolerance is [`PROJECTION_RESIDUAL_TOL`] with a floor of
    /// 4096·ε·(1 + max|coeff|), so it stays meaningful for `f32` and for
    /// large-magnitude inputs; for `f64` at moderate scales the fixed
    /// constant governs.
    fn project(&self, tensor: &TruncatedTensor<F>) -> Result<Vec<F>, LyndonError> {
        if tensor.shape() != self.shape {
            return Err(AlgebraError::ShapeMismatch {
                left: (tensor.shape().channels(), tensor.shape().depth()),
                right: (self.shape.channels(), self.shape.depth()),
            }
            .into());
        }
        let magnitude = tensor
            .coeffs()
            .iter()
            .fold(F::zero(), |m, &c| m.max(c.abs()));
        let mut work = tensor.coeffs().to_vec();
        let mut coords = Vec::with_capacity(self.words.len());
        for (w, expansion) in self.words.iter().zip(&self.expansions) {
            let c = work[self.shape.word_index(w)];
            coords.push(c);
            if c != F::zero() {
                for &(idx, e) in expansion {
                    work[idx] = work[idx] - c * e;
                }
            }
        }
        let eps_floor = F::epsilon() * F::from_f64_lossy(4096.0) * (F::one() + magnitude);
        let tol = F::from_f64_lossy(PROJECTION_RESIDUAL_TOL).max(eps_floor);
        let mut worst = (0usize, F::zero());
        for (idx, &r) in work.iter().enumerate() {
            if r.abs() > worst.1 {
                worst = (idx, r.abs());
            }
        }
        if worst.1 > tol {
            return Err(LyndonError::ResidualTooLarge {
                word: word_label(&self.shape.word_at(worst.0), self.shape.channels()),
                residual: worst.1.as_f64(),
                tol: tol.as_f64(),
            });
        }
        Ok(coords)
    }
}

/// A log-signature (or any Lie element) in Lyndon-basis coordinates.
#[derive(Debug, Clone)]
pub struct LyndonCoordinates<F: Scalar> {
    basis: Arc<LyndonBasis<F>>,
    coords: Vec<F>,
}

impl<F: Scalar> LyndonCoordinates<F> {
    /// Wrap raw coordinates; the count must match the basis.
    pub fn new(basis: Arc<LyndonBasis<F>>, coords: Vec<F>) -> Result<Self, LyndonError> {
        if coords.len() != basis.len() {
            return Err(LyndonError::CoordinateCount {
                expected: basis.len(),
                found: coords.len(),
            });
        }
        Ok(Self { basis, coords })
    }

    /// Coordinates of a Lie element (typically a log-signature) in the basis.
    pub fn from_tensor(
        basis: &Arc<LyndonBasis<F>>,
        tensor: &TruncatedTensor<F>,
    ) -> Result<Self, LyndonError> {
        let coords = basis.project(tensor)?;
        Ok(Self {
            basis: Arc::clone(basis),
            coords,
        })
    }

    /// Reassemble the tensor sum_w coords_w · expansion(w).
    pub fn to_tensor(&self) -> TruncatedTensor<F> {
        let shape = self.basis.shape();
        let mut coeffs = vec![F::zero(); shape.dim()];
        for (c, expansion) in self.coords.iter().zip(&self.basis.expansions) {
            if *c != F::zero() {
                for &(idx, e) in expansion {
                    coeffs[idx] = coeffs[idx] + *c * e;
                }
            }
        }
        TruncatedTensor::from_coeffs(shape, coeffs).expect("expansions are finite")
    }

    pub fn basis(&self) -> &Arc<LyndonBasis<F>> {
        &self.basis
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    /// Coordinate of one basis word, if present in the basis.
    pub fn coord_of(&self, word: &[usize]) -> Option<F> {
        self.basis.position(word).map(|i| self.coords[i])
    }

    /// Word-keyed view in basis order.
    pub fn word_map(&self) -> Vec<(String, F)> {
        (0..self.basis.len())
            .map(|i| (self.basis.label(i), self.coords[i]))
            .collect()
    }
}
