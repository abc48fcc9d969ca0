//! Permutations of `{1..n}`.
//!
//! Storage is 0-based; the public text and serde forms are 1-based image
//! arrays such as `[3,1,4,2]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

/// One orbit of a permutation, listed in orbit order starting from its
/// smallest element. Fixed points are length-1 cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    elements: Vec<usize>,
}

impl Permutation {
    /// Builds from a 1-based image array.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::InvalidPermutation(image));
        }
        let zb: Vec<usize> = image.iter().map(|v| v - 1).collect();
        Self::from_zero_based(zb).map_err(|_| Error::InvalidPermutation(image))
    }

    pub fn from_zero_based(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(image.iter().map(|v| v + 1).collect()));
            }
            seen[v] = true;
        }
        Ok(Self { image })
    }

    /// Builds from disjoint 1-based cycles; unmentioned points are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<Option<usize>> = vec![None; n];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                let b = c[(k + 1) % c.len()];
                if a == 0 || a > n || b == 0 || b > n || image[a - 1].is_some() {
                    return Err(Error::InvalidPermutation(c.to_vec()));
                }
                image[a - 1] = Some(b - 1);
            }
        }
        let image = image.iter().enumerate().map(|(i, v)| v.unwrap_or(i)).collect();
        Self::from_zero_based(image)
    }

    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    /// The n-cycle `(1 2 ... n)`.
    pub fn standard_cycle(n: usize) -> Self {
        Self { image: (0..n).map(|i| (i + 1) % n.max(1)).collect() }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// Image of the 0-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::DegreeMismatch { left: self.n(), right: other.n() });
        }
        Ok(Permutation { image: other.image.iter().map(|&j| self.image[j]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    pub fn power(&self, k: usize) -> Permutation {
        let mut acc = Permutation::identity(self.n());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = base.compose(&acc).expect("same degree");
            }
            base = base.compose(&base).expect("same degree");
            k >>= 1;
        }
        acc
    }

    /// Disjoint cycles in canonical order: each starts at its minimum and
    /// the cycles are sorted by minimum.
    pub fn cycles(&self) -> Vec<Cycle> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut elements = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                elements.push(i);
                i = self.image[i];
            }
            out.push(Cycle { elements });
        }
        out
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Cycle::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn is_single_cycle(&self) -> bool {
        self.cycles().len() == 1
    }

    /// Support sets of the cycles, each sorted, in canonical cycle order.
    pub fn cycle_supports(&self) -> Vec<Vec<usize>> {
        self.cycles()
            .into_iter()
            .map(|c| {
                let mut s = c.elements;
                s.sort_unstable();
                s
            })
            .collect()
    }
}

pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    p.compose(q)
}

pub fn inverse(p: &Permutation) -> Permutation {
    p.inverse()
}

pub fn power(p: &Permutation, k: usize) -> Permutation {
    p.power(k)
}

pub fn cycle_decomposition(p: &Permutation) -> Vec<Cycle> {
    p.cycles()
}

pub fn are_conjugate(p: &Permutation, q: &Permutation) -> Result<bool> {
    if p.n() != q.n() {
        return Err(Error::DegreeMismatch { left: p.n(), right: q.n() });
    }
    Ok(p.cycle_type() == q.cycle_type())
}

/// Returns `γ` with `γ ∘ p ∘ γ⁻¹ = q`.
///
/// Cycles of both permutations are ordered by (length, minimum element) and
/// paired in that order; `γ` sends the k-th element of each cycle of `p` to
/// the k-th element of its partner in `q`.
pub fn conjugator(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if !are_conjugate(p, q)? {
        return Err(Error::NotConjugate { left: p.cycle_type(), right: q.cycle_type() });
    }
    let sorted = |perm: &Permutation| {
        let mut cs = perm.cycles();
        cs.sort_by_key(|c| (c.len(), c.min()));
        cs
    };
    let mut image = vec![0; p.n()];
    for (cp, cq) in sorted(p).iter().zip(sorted(q).iter()) {
        for (&a, &b) in cp.elements.iter().zip(cq.elements.iter()) {
            image[a] = b;
        }
    }
    Permutation::from_zero_based(image)
}

impl Cycle {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.elements.iter().map(|v| v + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> usize {
        self.elements[0]
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", e + 1)?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.one_based()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.one_based())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cycles() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
