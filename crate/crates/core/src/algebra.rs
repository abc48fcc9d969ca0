//! Evolution algebras of two permutations over the rationals.
//!
//! The natural basis `e_1..e_n` multiplies as `e_i e_j = 0` for `i != j`
//! and `e_i e_i = a_pi[i] e_{pi(i)} + a_tau[i] e_{tau(i)}`.

use std::fmt;
use std::ops::Index;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAlgebra", into = "RawAlgebra")]
pub struct EvolutionAlgebra {
    pi: Permutation,
    tau: Permutation,
    a_pi: Vec<Rational>,
    a_tau: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawAlgebra {
    n: usize,
    pi: Permutation,
    tau: Permutation,
    #[serde(with = "rational::serde_vec")]
    a_pi: Vec<Rational>,
    #[serde(with = "rational::serde_vec")]
    a_tau: Vec<Rational>,
}

impl TryFrom<RawAlgebra> for EvolutionAlgebra {
    type Error = Error;
    fn try_from(r: RawAlgebra) -> Result<Self> {
        if r.pi.n() != r.n {
            return Err(Error::DimensionMismatch { expected: r.n, got: r.pi.n() });
        }
        EvolutionAlgebra::new_unrestricted(r.pi, r.tau, r.a_pi, r.a_tau)
    }
}

impl From<EvolutionAlgebra> for RawAlgebra {
    fn from(e: EvolutionAlgebra) -> Self {
        RawAlgebra { n: e.n(), pi: e.pi, tau: e.tau, a_pi: e.a_pi, a_tau: e.a_tau }
    }
}

/// A coordinate vector over the natural basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(#[serde(with = "rational::serde_vec")] pub Vec<Rational>);

/// Square table `M[i][j]` of structural constants, `e_i e_i = Σ_j M[i][j] e_j`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StructuralMatrix(#[serde(with = "rational::serde_mat")] Vec<Vec<Rational>>);

impl EvolutionAlgebra {
    /// Validated constructor; rejects `pi == tau`.
    pub fn new(
        pi: Permutation,
        tau: Permutation,
        a_pi: Vec<Rational>,
        a_tau: Vec<Rational>,
    ) -> Result<Self> {
        if pi.n() > 0 && pi == tau {
            return Err(Error::EqualPermutations);
        }
        Self::new_unrestricted(pi, tau, a_pi, a_tau)
    }

    /// Like [`EvolutionAlgebra::new`] but allows `pi == tau`. Direct sums and
    /// decomposition blocks need this: a block's restricted permutations may
    /// coincide even when the parent's do not.
    pub fn new_unrestricted(
        pi: Permutation,
        tau: Permutation,
        a_pi: Vec<Rational>,
        a_tau: Vec<Rational>,
    ) -> Result<Self> {
        let n = pi.n();
        if tau.n() != n {
            return Err(Error::DegreeMismatch { left: n, right: tau.n() });
        }
        for v in [&a_pi, &a_tau] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        Ok(Self { pi, tau, a_pi, a_tau })
    }

    pub fn empty() -> Self {
        Self {
            pi: Permutation::identity(0),
            tau: Permutation::identity(0),
            a_pi: Vec::new(),
            a_tau: Vec::new(),
        }
    }

    /// The algebra `(1 2 ... n)`, identity, with every constant equal to one:
    /// `η_i η_i = η_{i+1} + η_i`, wrapping at `n`.
    pub fn all_ones_cycle(n: usize) -> Result<Self> {
        Self::new(
            Permutation::standard_cycle(n),
            Permutation::identity(n),
            vec![rational::one(); n],
            vec![rational::one(); n],
        )
    }

    pub fn n(&self) -> usize {
        self.pi.n()
    }

    pub fn pi(&self) -> &Permutation {
        &self.pi
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    /// `a_pi[i] = a_{i, pi(i)}` (0-based `i`).
    pub fn a_pi(&self) -> &[Rational] {
        &self.a_pi
    }

    /// `a_tau[i] = a_{i, tau(i)}` (0-based `i`).
    pub fn a_tau(&self) -> &[Rational] {
        &self.a_tau
    }

    pub fn structural_matrix(&self) -> StructuralMatrix {
        let n = self.n();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[self.pi.apply(i)] += &self.a_pi[i];
            row[self.tau.apply(i)] += &self.a_tau[i];
        }
        StructuralMatrix(m)
    }

    fn check_dim(&self, x: &Element) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.len() });
        }
        Ok(())
    }

    /// `(x y)_j = Σ_i M[i][j] x_i y_i`, computed directly from the sparse
    /// two-term rows.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut out = vec![Rational::zero(); self.n()];
        for i in 0..self.n() {
            if x.0[i].is_zero() || y.0[i].is_zero() {
                continue;
            }
            let w = &x.0[i] * &y.0[i];
            out[self.pi.apply(i)] += &self.a_pi[i] * &w;
            out[self.tau.apply(i)] += &self.a_tau[i] * &w;
        }
        Ok(Element(out))
    }

    /// The evolution operator `V(x) = x²`.
    pub fn square(&self, x: &Element) -> Result<Element> {
        self.multiply(x, x)
    }

    /// Block direct sum; indices of `other` are shifted by `self.n()`.
    pub fn direct_sum(&self, other: &EvolutionAlgebra) -> EvolutionAlgebra {
        let n1 = self.n();
        let shift = |p: &Permutation, q: &Permutation| {
            let image: Vec<usize> =
                p.as_slice().iter().copied().chain(q.as_slice().iter().map(|v| v + n1)).collect();
            Permutation::from_zero_based(image).expect("block permutation")
        };
        EvolutionAlgebra {
            pi: shift(&self.pi, &other.pi),
            tau: shift(&self.tau, &other.tau),
            a_pi: self.a_pi.iter().chain(&other.a_pi).cloned().collect(),
            a_tau: self.a_tau.iter().chain(&other.a_tau).cloned().collect(),
        }
    }

    /// `j = tau⁻¹ ∘ pi`; its cycles index the chain systems of `x² = 0`.
    pub fn j_map(&self) -> Permutation {
        self.tau.inverse().compose(&self.pi).expect("same degree")
    }

    pub fn basis(&self, i: usize) -> Element {
        Element::basis(self.n(), i)
    }
}

pub fn build_algebra(
    n: usize,
    pi: Permutation,
    tau: Permutation,
    a_pi: Vec<Rational>,
    a_tau: Vec<Rational>,
) -> Result<EvolutionAlgebra> {
    if pi.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: pi.n() });
    }
    EvolutionAlgebra::new(pi, tau, a_pi, a_tau)
}

pub fn direct_sum(e1: &EvolutionAlgebra, e2: &EvolutionAlgebra) -> EvolutionAlgebra {
    e1.direct_sum(e2)
}

impl fmt::Debug for EvolutionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_vec = |v: &[Rational]| v.iter().map(rational::format).collect::<Vec<_>>().join(",");
        write!(
            f,
            "EvolutionAlgebra{{pi={:?}, tau={:?}, a_pi=[{}], a_tau=[{}]}}",
            self.pi.one_based(),
            self.tau.one_based(),
            fmt_vec(&self.a_pi),
            fmt_vec(&self.a_tau)
        )
    }
}

impl Element {
    pub fn zero(n: usize) -> Self {
        Element(vec![Rational::zero(); n])
    }

    /// `e_i` for 0-based `i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[i] = rational::one();
        Element(v)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Element(v.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }
}

impl Index<usize> for Element {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl StructuralMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: r.len() });
            }
        }
        Ok(StructuralMatrix(rows))
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| rational::int(v)).collect()).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.0[i][j]
    }

    pub fn transpose(&self) -> Vec<Vec<Rational>> {
        let n = self.n();
        (0..n).map(|j| (0..n).map(|i| self.0[i][j].clone()).collect()).collect()
    }

    /// `x² ` for the general evolution algebra with this matrix.
    pub fn square(&self, x: &Element) -> Result<Element> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.len() });
        }
        let n = self.n();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            let sq = &x.0[i] * &x.0[i];
            for (j, o) in out.iter_mut().enumerate() {
                *o += &self.0[i][j] * &sq;
            }
        }
        Ok(Element(out))
    }
}

impl Index<(usize, usize)> for StructuralMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.0[i][j]
    }
}

impl fmt::Debug for StructuralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            let parts: Vec<String> = row.iter().map(rational::format).collect();
            writeln!(f, "[{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn alg(pi: &[usize], tau: &[usize], a_pi: &[i64], a_tau: &[i64]) -> EvolutionAlgebra {
        EvolutionAlgebra::new(
            Permutation::new(pi.to_vec()).unwrap(),
            Permutation::new(tau.to_vec()).unwrap(),
            a_pi.iter().map(|&v| int(v)).collect(),
            a_tau.iter().map(|&v| int(v)).collect(),
        )
        .unwrap()
    }

    /// Rows 1..4: a_pi = (a13, a21, a34, a42), a_tau = (a12, a24, a33, a41).
    fn corank_one() -> EvolutionAlgebra {
        alg(&[3, 1, 4, 2], &[2, 4, 3, 1], &[-1, 1, 1, 1], &[1, -1, 1, 1])
    }

    #[test]
    fn corank_one_matrix() {
        let m = corank_one().structural_matrix();
        let expect = StructuralMatrix::from_ints(&[
            &[0, 1, -1, 0],
            &[1, 0, 0, -1],
            &[0, 0, 1, 1],
            &[1, 1, 0, 0],
        ])
        .unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn two_chains_matrix_pattern() {
        let e = alg(&[1, 3, 4, 2], &[4, 2, 1, 3], &[1; 4], &[1; 4]);
        let expect = StructuralMatrix::from_ints(&[
            &[1, 0, 0, 1],
            &[0, 1, 1, 0],
            &[1, 0, 0, 1],
            &[0, 1, 1, 0],
        ])
        .unwrap();
        assert_eq!(e.structural_matrix(), expect);
    }

    #[test]
    fn rejects_equal_permutations_and_bad_lengths() {
        let p = Permutation::identity(2);
        assert_eq!(
            EvolutionAlgebra::new(p.clone(), p.clone(), vec![int(1); 2], vec![int(1); 2]),
            Err(Error::EqualPermutations)
        );
        let q = Permutation::new(vec![2, 1]).unwrap();
        assert!(matches!(
            EvolutionAlgebra::new(q, p.clone(), vec![int(1); 3], vec![int(1); 2]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(build_algebra(3, p.clone(), Permutation::new(vec![2, 1]).unwrap(), vec![], vec![])
            .is_err());
    }

    #[test]
    fn coincident_points_sum_in_matrix() {
        // pi = (1)(2 3), tau = (1)(2)(3) coincide at 1
        let e = alg(&[1, 3, 2], &[1, 2, 3], &[2, 1, 1], &[5, 1, 1]);
        let m = e.structural_matrix();
        assert_eq!(m[(0, 0)], int(7));
        assert_eq!(m.rows()[0].iter().filter(|v| !v.is_zero()).count(), 1);
    }

    #[test]
    fn multiplication_table() {
        let e = alg(&[1, 3, 4, 2], &[4, 2, 1, 3], &[1; 4], &[1; 4]);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(e.multiply(&e.basis(i), &e.basis(j)).unwrap().is_zero());
                }
            }
        }
        assert_eq!(e.square(&e.basis(0)).unwrap(), Element::from_ints(&[1, 0, 0, 1]));
        assert!(e.multiply(&Element::zero(4), &Element::from_ints(&[1, 2, 3, 4])).unwrap().is_zero());
        assert!(e.square(&Element::zero(4)).unwrap().is_zero());
        assert!(e.square(&Element::zero(3)).is_err());
    }

    #[test]
    fn square_of_basis_reads_table() {
        let e = corank_one();
        for k in 0..4 {
            let mut expect = Element::zero(4);
            expect.0[e.pi().apply(k)] += &e.a_pi()[k];
            expect.0[e.tau().apply(k)] += &e.a_tau()[k];
            assert_eq!(e.square(&e.basis(k)).unwrap(), expect);
        }
    }

    #[test]
    fn two_dim_all_ones_half_is_fixed() {
        let e = alg(&[2, 1], &[1, 2], &[1, 1], &[1, 1]);
        let h = Element(vec![crate::rational::ratio(1, 2); 2]);
        assert_eq!(e.square(&h).unwrap(), h);
    }

    #[test]
    fn direct_sum_blocks() {
        let e1 = corank_one();
        let e2 = alg(&[2, 1], &[1, 2], &[2, 3], &[5, 7]);
        assert_eq!(e1.direct_sum(&EvolutionAlgebra::empty()), e1);
        let s = e1.direct_sum(&e2);
        assert_eq!(s.n(), 6);
        let m = s.structural_matrix();
        let m1 = e1.structural_matrix();
        let m2 = e2.structural_matrix();
        for i in 0..6 {
            for j in 0..6 {
                let expect = match (i < 4, j < 4) {
                    (true, true) => m1[(i, j)].clone(),
                    (false, false) => m2[(i - 4, j - 4)].clone(),
                    _ => Rational::zero(),
                };
                assert_eq!(m[(i, j)], expect);
            }
        }
    }

    #[test]
    fn j_map_examples() {
        assert_eq!(corank_one().j_map().one_based(), vec![3, 4, 2, 1]);
        let e32 = alg(&[1, 3, 4, 2], &[4, 2, 1, 3], &[1; 4], &[1; 4]);
        // tau⁻¹ = [3,2,4,1]; j_k = tau⁻¹(pi(k))
        assert_eq!(e32.j_map().one_based(), vec![3, 4, 1, 2]);
        // pi = tau ∘ sigma  =>  j = sigma
        let tau = Permutation::new(vec![2, 3, 1]).unwrap();
        let sigma = Permutation::new(vec![1, 3, 2]).unwrap();
        let e = EvolutionAlgebra::new(
            tau.compose(&sigma).unwrap(),
            tau,
            vec![int(1); 3],
            vec![int(1); 3],
        )
        .unwrap();
        assert_eq!(e.j_map(), sigma);
    }

    #[test]
    fn non_associative_witness() {
        let e = alg(&[2, 1], &[1, 2], &[1, 1], &[1, 1]);
        let e1 = e.basis(0);
        let sq = e.square(&e1).unwrap();
        let left = e.multiply(&sq, &e1).unwrap();
        let right = e.multiply(&e1, &sq).unwrap();
        // commutativity makes these equal; associativity fails on e1(e1 e1) vs (e1 e1)(e1 e1)
        assert_eq!(left, right);
        let a = e.multiply(&e.multiply(&e1, &e1).unwrap(), &sq).unwrap();
        let b = e.multiply(&e1, &e.multiply(&e1, &sq).unwrap()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn serde_round_trip() {
        let e = corank_one();
        let s = serde_json::to_string(&e).unwrap();
        let back: EvolutionAlgebra = serde_json::from_str(&s).unwrap();
        assert_eq!(e, back);
        assert!(s.contains("\"a_pi\":[\"-1\",\"1\",\"1\",\"1\"]"));
    }
}
