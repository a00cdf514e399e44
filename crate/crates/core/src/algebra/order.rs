//! Monomial orders. "Leading" always means the MINIMUM of the support.

use std::cmp::Ordering;

use super::quad::QuadExt;
use super::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Compare exponents of `priority[0]` first, smaller is earlier.
    Lex { priority: Vec<usize> },
    /// Compare weights first, break ties lexicographically.
    WeightThenLex { weights: Vec<QuadExt>, priority: Vec<usize> },
}

impl MonomialOrder {
    /// Lex with the first variable compared first.
    pub fn lex(nvars: usize) -> Self {
        Self::Lex { priority: (0..nvars).collect() }
    }

    pub fn weighted(weights: Vec<QuadExt>) -> Self {
        let n = weights.len();
        Self::WeightThenLex { weights, priority: (0..n).collect() }
    }

    pub fn rational_weights(weights: &[Rat]) -> Self {
        Self::weighted(weights.iter().cloned().map(QuadExt::rational).collect())
    }

    pub fn weight(&self, e: &[u32]) -> Option<QuadExt> {
        match self {
            Self::Lex { .. } => None,
            Self::WeightThenLex { weights, .. } => Some(weight_of(weights, e)),
        }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            Self::Lex { priority } => lex_cmp(priority, a, b),
            Self::WeightThenLex { weights, priority } => weight_of(weights, a)
                .cmp(&weight_of(weights, b))
                .then_with(|| lex_cmp(priority, a, b)),
        }
    }
}

pub fn weight_of(weights: &[QuadExt], e: &[u32]) -> QuadExt {
    assert_eq!(weights.len(), e.len());
    let mut acc = QuadExt::zero();
    for (w, &k) in weights.iter().zip(e) {
        if k > 0 {
            acc = &acc + &w.scale(&Rat::from_integer(k.into()));
        }
    }
    acc
}

fn lex_cmp(priority: &[usize], a: &[u32], b: &[u32]) -> Ordering {
    priority
        .iter()
        .map(|&i| a[i].cmp(&b[i]))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}
