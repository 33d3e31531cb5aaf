//! The Demazure (0-Hecke) monoid: `u_w u_i = u_w` if `w s_i < w`, else `u_{w s_i}`.

use crate::error::{KlError, Result};
use crate::perm::Permutation;

/// A basis element `u_w` of the NilHecke monoid in its idempotent presentation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DemazureElement {
    pub perm: Permutation,
}

impl DemazureElement {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: Permutation::identity(n),
        }
    }

    pub fn from_perm(perm: Permutation) -> Self {
        Self { perm }
    }
}

pub fn demazure_mul(u: DemazureElement, i: usize) -> Result<DemazureElement> {
    let n = u.perm.n();
    if i == 0 || i >= n {
        return Err(KlError::IndexOutOfRange { index: i, n });
    }
    Ok(DemazureElement {
        perm: demazure_step(u.perm, i),
    })
}

/// Unchecked single step; `1 <= i < n`.
#[inline]
pub fn demazure_step(w: Permutation, i: usize) -> Permutation {
    if w.has_right_descent(i) {
        w
    } else {
        w.times_simple(i)
    }
}

/// Left fold of [`demazure_mul`] from the identity of `S_n`.
pub fn demazure_product(n: usize, word: &[usize]) -> Result<Permutation> {
    let mut u = DemazureElement::identity(n);
    for &i in word {
        u = demazure_mul(u, i)?;
    }
    Ok(u.perm)
}

/// Evaluates a word as an ordinary product of simple transpositions.
pub fn word_product(n: usize, word: &[usize]) -> Result<Permutation> {
    let mut w = Permutation::identity(n);
    for &i in word {
        if i == 0 || i >= n {
            return Err(KlError::IndexOutOfRange { index: i, n });
        }
        w = w.times_simple(i);
    }
    Ok(w)
}

pub fn is_reduced(n: usize, word: &[usize]) -> Result<bool> {
    Ok(demazure_product(n, word)?.length() == word.len())
}
