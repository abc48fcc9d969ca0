//! Absolute nilpotent elements, `x² = 0`.
//!
//! Everything is solved in the squared coordinates `y_i = x_i² ≥ 0`. A
//! solution `y` lifts to `2^s` real elements, one per sign choice on the `s`
//! nonzero coordinates; square roots are never taken here.
//!
//! For an algebra of two permutations the system splits along the cycles
//! `(l_1 … l_p)` of `j = tau⁻¹ ∘ pi` into independent cyclic chains
//!
//! ```text
//! alpha_k y_{l_k} + beta_{k+1} y_{l_{k+1}} = 0,   k = 1..p (cyclic),
//! ```
//!
//! with `alpha_k = a_pi[l_k]` and `beta_k = a_tau[l_k]`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{EvolutionAlgebra, StructuralMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::perm::Cycle;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleChainSystem {
    pub cycle: Cycle,
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
}

impl CycleChainSystem {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Residual of equation `k` (0-based position) at the squared values `y`
    /// (indexed by cycle position).
    pub fn residual(&self, k: usize, y: &[Rational]) -> Rational {
        let next = (k + 1) % self.len();
        &self.alpha[k] * &y[k] + &self.beta[next] * &y[next]
    }
}

/// Case label of a cycle with respect to the classification of nilpotents
/// along one chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleCase {
    /// All coefficients nonzero and some consecutive product positive.
    #[serde(rename = "1a")]
    PositiveLink,
    /// All consecutive products negative, cycle product condition fails.
    #[serde(rename = "1b")]
    InconsistentCycle,
    /// All consecutive products negative, cycle product condition holds.
    #[serde(rename = "1c")]
    ConsistentCycle,
    /// One coefficient family has a zero, the other has none.
    #[serde(rename = "2")]
    OneSidedZero,
    /// Doubly-zero positions, every other position fully nonzero.
    #[serde(rename = "3")]
    IsolatedDoubleZero,
    /// A doubly-zero position plus single zeros of both kinds elsewhere.
    #[serde(rename = "4.1")]
    DoubleZeroMixed,
    /// No doubly-zero position, zeros in both families.
    #[serde(rename = "4.2")]
    SplitZeros,
    #[serde(rename = "generic")]
    Generic,
}

impl CycleCase {
    pub fn label(self) -> &'static str {
        match self {
            CycleCase::PositiveLink => "1a",
            CycleCase::InconsistentCycle => "1b",
            CycleCase::ConsistentCycle => "1c",
            CycleCase::OneSidedZero => "2",
            CycleCase::IsolatedDoubleZero => "3",
            CycleCase::DoubleZeroMixed => "4.1",
            CycleCase::SplitZeros => "4.2",
            CycleCase::Generic => "generic",
        }
    }
}

impl fmt::Display for CycleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `{ Σ_j t_j g_j : t_j ≥ 0 }` over the indices of one cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricCone {
    /// 0-based basis indices covered, in cycle order.
    pub indices: Vec<usize>,
    /// Generators aligned with `indices`; all entries are nonnegative.
    pub generators: Vec<Vec<Rational>>,
    /// 0-based indices that vanish on every member.
    pub zero_indices: Vec<usize>,
}

impl ParametricCone {
    pub fn free_params(&self) -> usize {
        self.generators.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSolution {
    pub system: CycleChainSystem,
    pub case: CycleCase,
    pub cone: ParametricCone,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentFamily {
    pub n: usize,
    pub per_cycle: Vec<CycleSolution>,
    pub total_free_params: usize,
}

impl NilpotentFamily {
    pub fn is_trivial_only(&self) -> bool {
        self.total_free_params == 0
    }

    /// Every generator embedded as a full length-`n` vector in y-space.
    pub fn generators(&self) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for sol in &self.per_cycle {
            for g in &sol.cone.generators {
                let mut y = vec![Rational::zero(); self.n];
                for (&i, v) in sol.cone.indices.iter().zip(g) {
                    y[i] = v.clone();
                }
                out.push(y);
            }
        }
        out
    }

    /// `Σ_j t_j g_j` in y-space; `params.len()` must equal the free count.
    pub fn instantiate(&self, params: &[Rational]) -> Vec<Rational> {
        assert_eq!(params.len(), self.total_free_params);
        let mut y = vec![Rational::zero(); self.n];
        for (g, t) in self.generators().iter().zip(params) {
            for (yi, gi) in y.iter_mut().zip(g) {
                *yi += gi * t;
            }
        }
        y
    }
}

/// One chain system per cycle of `tau⁻¹ ∘ pi`.
pub fn nilpotent_system(e: &EvolutionAlgebra) -> Vec<CycleChainSystem> {
    e.j_map()
        .cycles()
        .into_iter()
        .map(|cycle| {
            let alpha = cycle.elements().iter().map(|&l| e.a_pi()[l].clone()).collect();
            let beta = cycle.elements().iter().map(|&l| e.a_tau()[l].clone()).collect();
            CycleChainSystem { cycle, alpha, beta }
        })
        .collect()
}

enum Link {
    Free,
    Zero { left: bool, right: bool },
    /// `y_{k+1} = ratio · y_k`, `ratio > 0`.
    Ratio(Rational),
}

fn link(alpha: &Rational, beta_next: &Rational) -> Link {
    match (alpha.is_zero(), beta_next.is_zero()) {
        (true, true) => Link::Free,
        (false, true) => Link::Zero { left: true, right: false },
        (true, false) => Link::Zero { left: false, right: true },
        (false, false) => {
            let r = -(alpha / beta_next);
            if r.is_positive() {
                Link::Ratio(r)
            } else {
                Link::Zero { left: true, right: true }
            }
        }
    }
}

fn classify(sys: &CycleChainSystem) -> CycleCase {
    let p = sys.len();
    let az: Vec<bool> = sys.alpha.iter().map(Zero::is_zero).collect();
    let bz: Vec<bool> = sys.beta.iter().map(Zero::is_zero).collect();
    let any_a = az.iter().any(|&z| z);
    let any_b = bz.iter().any(|&z| z);
    if !any_a && !any_b {
        let products: Vec<Rational> =
            (0..p).map(|k| &sys.alpha[k] * &sys.beta[(k + 1) % p]).collect();
        if products.iter().any(Signed::is_positive) {
            return CycleCase::PositiveLink;
        }
        let prod_a: Rational = sys.alpha.iter().product();
        let prod_b: Rational = sys.beta.iter().product();
        let lhs = if p.is_multiple_of(2) { prod_a } else { -prod_a };
        return if lhs == prod_b { CycleCase::ConsistentCycle } else { CycleCase::InconsistentCycle };
    }
    if any_a != any_b {
        return CycleCase::OneSidedZero;
    }
    let doubles: Vec<usize> = (0..p).filter(|&k| az[k] && bz[k]).collect();
    if doubles.is_empty() {
        return CycleCase::SplitZeros;
    }
    let single_zero = |k: usize| (az[k] || bz[k]) && !(az[k] && bz[k]);
    if !(0..p).any(single_zero) {
        return CycleCase::IsolatedDoubleZero;
    }
    let k0 = doubles[0];
    let has_a = (0..p).any(|k| k != k0 && az[k]);
    let has_b = (0..p).any(|k| k != k0 && bz[k]);
    if has_a && has_b {
        CycleCase::DoubleZeroMixed
    } else {
        CycleCase::Generic
    }
}

/// Exact nonnegative solution cone of one cyclic chain.
///
/// Each equation either leaves its two unknowns free, forces zeros, or ties
/// them by a positive ratio. Zeros propagate along ratio links; each maximal
/// arc of linked unknowns without a zero contributes one generator. If every
/// equation is a ratio link the whole cycle is one arc, which survives only
/// when the ratios multiply to one.
pub fn solve_cycle(sys: &CycleChainSystem) -> (CycleCase, ParametricCone) {
    let p = sys.len();
    let case = classify(sys);
    let indices = sys.cycle.elements().to_vec();
    let links: Vec<Link> = (0..p).map(|k| link(&sys.alpha[k], &sys.beta[(k + 1) % p])).collect();

    let mut zero = vec![false; p];
    for (k, l) in links.iter().enumerate() {
        if let Link::Zero { left, right } = l {
            if *left {
                zero[k] = true;
            }
            if *right {
                zero[(k + 1) % p] = true;
            }
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for (k, l) in links.iter().enumerate() {
            let next = (k + 1) % p;
            if matches!(l, Link::Ratio(_)) && zero[k] != zero[next] {
                zero[k] = true;
                zero[next] = true;
                changed = true;
            }
        }
    }

    let mut generators = Vec::new();
    let all_linked = links.iter().all(|l| matches!(l, Link::Ratio(_)));
    if all_linked {
        let ratios: Vec<&Rational> = links
            .iter()
            .map(|l| match l {
                Link::Ratio(r) => r,
                _ => unreachable!(),
            })
            .collect();
        let cycle_product: Rational = ratios.iter().copied().product();
        if cycle_product.is_one() {
            let mut g = Vec::with_capacity(p);
            let mut v = Rational::one();
            for r in ratios.iter().take(p) {
                g.push(v.clone());
                v = &v * *r;
            }
            generators.push(g);
        } else {
            zero.iter_mut().for_each(|z| *z = true);
        }
    } else {
        // start right after a non-link equation so arcs do not wrap mid-way
        let start = (0..p)
            .find(|&k| !matches!(links[(k + p - 1) % p], Link::Ratio(_)))
            .expect("some equation is not a link");
        let mut k = start;
        let mut visited = 0;
        while visited < p {
            let mut arc = vec![k];
            let mut coeffs = vec![Rational::one()];
            while let Link::Ratio(r) = &links[k] {
                let next = (k + 1) % p;
                let v = coeffs.last().unwrap() * r;
                arc.push(next);
                coeffs.push(v);
                k = next;
            }
            visited += arc.len();
            if !zero[arc[0]] {
                let mut g = vec![Rational::zero(); p];
                for (&pos, c) in arc.iter().zip(coeffs) {
                    g[pos] = c;
                }
                generators.push(g);
            }
            k = (k + 1) % p;
        }
    }
    let zero_indices = (0..p).filter(|&k| zero[k]).map(|k| indices[k]).collect();
    (case, ParametricCone { indices, generators, zero_indices })
}

pub fn absolute_nilpotents(e: &EvolutionAlgebra) -> NilpotentFamily {
    let per_cycle: Vec<CycleSolution> = nilpotent_system(e)
        .into_iter()
        .map(|system| {
            let (case, cone) = solve_cycle(&system);
            CycleSolution { system, case, cone }
        })
        .collect();
    let total_free_params = per_cycle.iter().map(|s| s.cone.free_params()).sum();
    NilpotentFamily { n: e.n(), per_cycle, total_free_params }
}

/// The null space of `Mᵀ` solved for the basic unknowns:
/// `y_b = -Σ_f d[b][f] y_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSystem {
    pub rank: usize,
    /// 0-based basic indices (independent rows of `M`), increasing.
    pub basic: Vec<usize>,
    /// 0-based free indices, increasing.
    pub free: Vec<usize>,
    /// `d[i][j]` for `basic[i]`, `free[j]`.
    pub d: Vec<Vec<Rational>>,
}

impl ReducedSystem {
    /// True when the basic unknowns are the leading `rank` indices, i.e. the
    /// first `rank` rows of `M` are independent.
    pub fn uses_leading_rows(&self) -> bool {
        self.basic.iter().enumerate().all(|(k, &b)| k == b)
    }

    /// Index order `basic ++ free`, the row relabeling applied when the
    /// leading rows are dependent.
    pub fn row_order(&self) -> Vec<usize> {
        self.basic.iter().chain(&self.free).copied().collect()
    }

    /// The y-vector for free values `t` (aligned with `free`).
    pub fn expand(&self, t: &[Rational]) -> Vec<Rational> {
        let n = self.basic.len() + self.free.len();
        let mut y = vec![Rational::zero(); n];
        for (j, &f) in self.free.iter().enumerate() {
            y[f] = t[j].clone();
        }
        for (i, &b) in self.basic.iter().enumerate() {
            let mut s = Rational::zero();
            for (j, tj) in t.iter().enumerate() {
                s -= &self.d[i][j] * tj;
            }
            y[b] = s;
        }
        y
    }

    /// `Mᵀ y = 0` holds identically in the free parameters.
    pub fn substitution_holds(&self, m: &StructuralMatrix) -> bool {
        let mt = m.transpose();
        (0..self.free.len()).all(|j| {
            let mut t = vec![Rational::zero(); self.free.len()];
            t[j] = Rational::one();
            linalg::mat_vec(&mt, &self.expand(&t)).iter().all(Zero::is_zero)
        })
    }
}

pub fn rank_reduction(m: &StructuralMatrix) -> ReducedSystem {
    let n = m.n();
    let r = linalg::rref(&m.transpose());
    let basic = r.pivots.clone();
    let free: Vec<usize> = (0..n).filter(|c| !basic.contains(c)).collect();
    let d = r.rows.iter().map(|row| free.iter().map(|&f| row[f].clone()).collect()).collect();
    ReducedSystem { rank: basic.len(), basic, free, d }
}

/// Determinant-quotient form of the reduction coefficients,
/// `d[i][j] = det(M_ij^T) / det(M_r)`, where `M_r` is `M` restricted to the
/// basic rows and a set of independent columns, and `M_ij^T` is `M_rᵀ` with
/// its `i`-th column replaced by row `free[j]` of `M` on those columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CramerData {
    pub columns: Vec<usize>,
    pub det_mr: Rational,
    /// `det(M_ij^T)` for each basic `i`, free `j`.
    pub det_mij: Vec<Vec<Rational>>,
}

impl CramerData {
    pub fn d(&self) -> Vec<Vec<Rational>> {
        self.det_mij
            .iter()
            .map(|row| row.iter().map(|v| v / &self.det_mr).collect())
            .collect()
    }
}

pub fn cramer_data(m: &StructuralMatrix, red: &ReducedSystem) -> CramerData {
    let columns = linalg::rref(m.rows()).pivots;
    let mr = linalg::submatrix(m.rows(), &red.basic, &columns);
    let det_mr = linalg::determinant(&mr);
    let mrt = linalg::transpose(&mr);
    let det_mij = (0..red.basic.len())
        .map(|i| {
            red.free
                .iter()
                .map(|&f| {
                    let mut a = mrt.clone();
                    for (row, &c) in a.iter_mut().zip(&columns) {
                        row[i] = m[(f, c)].clone();
                    }
                    linalg::determinant(&a)
                })
                .collect()
        })
        .collect();
    CramerData { columns, det_mr, det_mij }
}

/// Sufficient conditions for the trivial nilpotent to be the only one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuickCondition {
    /// `det M != 0`.
    Nonsingular,
    /// `rank M = n-1` and `det(M_{i0,f}^T) · det(M_{n-1}) > 0` for some `i0`.
    CorankOneDeterminant,
    /// `alpha_k · beta_{j_k} > 0` for every `k`.
    PositiveChainProducts,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorankOneWitness {
    pub i0: usize,
    pub det_mr: Rational,
    pub det_mi0: Rational,
    pub product: Rational,
    pub uses_leading_rows: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuickTest {
    pub condition: Option<QuickCondition>,
    pub rank: usize,
    pub corank_one: Option<CorankOneWitness>,
}

/// Determinant-based checks that only need the structural matrix.
pub fn quick_test_matrix(m: &StructuralMatrix) -> QuickTest {
    let n = m.n();
    let red = rank_reduction(m);
    if red.rank == n {
        return QuickTest { condition: Some(QuickCondition::Nonsingular), rank: n, corank_one: None };
    }
    let mut corank_one = None;
    if n >= 1 && red.rank + 1 == n {
        let cd = cramer_data(m, &red);
        let products: Vec<Rational> =
            cd.det_mij.iter().map(|row| &row[0] * &cd.det_mr).collect();
        if !products.is_empty() {
            let i = products.iter().position(Signed::is_positive).unwrap_or(0);
            corank_one = Some(CorankOneWitness {
                i0: red.basic[i],
                det_mr: cd.det_mr.clone(),
                det_mi0: cd.det_mij[i][0].clone(),
                product: products[i].clone(),
                uses_leading_rows: red.uses_leading_rows(),
            });
        }
    }
    let condition = corank_one
        .as_ref()
        .filter(|w| w.product.is_positive())
        .map(|_| QuickCondition::CorankOneDeterminant);
    QuickTest { condition, rank: red.rank, corank_one }
}

pub fn positive_chain_products(e: &EvolutionAlgebra) -> bool {
    let j = e.j_map();
    (0..e.n()).all(|k| (&e.a_pi()[k] * &e.a_tau()[j.apply(k)]).is_positive())
}

/// `Some(condition)` when one of the sufficient conditions certifies that
/// `0` is the only nilpotent; `None` is inconclusive.
pub fn unique_trivial_quick(e: &EvolutionAlgebra) -> Option<QuickCondition> {
    quick_test(e).condition
}

pub fn quick_test(e: &EvolutionAlgebra) -> QuickTest {
    let mut t = quick_test_matrix(&e.structural_matrix());
    if t.condition.is_none() && positive_chain_products(e) {
        t.condition = Some(QuickCondition::PositiveChainProducts);
    }
    t
}

/// Which uniqueness condition fired for a rank `n-2` matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UniqueCondition {
    /// Some row has both coefficients positive.
    #[serde(rename = "i")]
    BothPositive,
    /// A row `(+, 0)` with another positive second coefficient, or symmetric.
    #[serde(rename = "ii")]
    PositiveWithZero,
    /// Mixed-sign rows whose ratio bounds leave an empty interval.
    #[serde(rename = "iii")]
    RatioGap,
}

/// The failure pattern when a nontrivial nilpotent exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailureCase {
    #[serde(rename = "a")]
    AllNonPositive,
    #[serde(rename = "b")]
    FirstOnlyPositive,
    #[serde(rename = "c")]
    SecondOnlyPositive,
    #[serde(rename = "d")]
    UniformMixed,
    #[serde(rename = "e")]
    RatioOverlap,
    /// None of the five named patterns matches literally.
    #[serde(rename = "other")]
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "case", rename_all = "kebab-case")]
pub enum RankTwoVerdict {
    Unique(UniqueCondition),
    NonTrivial(FailureCase),
}

impl RankTwoVerdict {
    pub fn unique(self) -> bool {
        matches!(self, RankTwoVerdict::Unique(_))
    }
}

fn ratio_bounds(d: &[Vec<Rational>]) -> (Option<Rational>, Option<Rational>) {
    // t-rows (-,+) give lower bounds, s-rows (+,-) upper bounds on u/v
    let lower = d
        .iter()
        .filter(|r| r[0].is_negative() && r[1].is_positive())
        .map(|r| -(&r[1] / &r[0]))
        .max();
    let upper = d
        .iter()
        .filter(|r| r[0].is_positive() && r[1].is_negative())
        .map(|r| -(&r[1] / &r[0]))
        .min();
    (lower, upper)
}

/// Sign-pattern test on the two free columns of `d`.
pub fn rank_two_verdict(d: &[Vec<Rational>]) -> RankTwoVerdict {
    let pos = |v: &Rational| v.is_positive();
    let neg = |v: &Rational| v.is_negative();
    let z = |v: &Rational| v.is_zero();

    if d.iter().any(|r| pos(&r[0]) && pos(&r[1])) {
        return RankTwoVerdict::Unique(UniqueCondition::BothPositive);
    }
    let ii_first = d.iter().any(|r| pos(&r[0]) && z(&r[1])) && d.iter().any(|r| pos(&r[1]));
    let ii_second = d.iter().any(|r| z(&r[0]) && pos(&r[1])) && d.iter().any(|r| pos(&r[0]));
    if ii_first || ii_second {
        return RankTwoVerdict::Unique(UniqueCondition::PositiveWithZero);
    }
    let (lower, upper) = ratio_bounds(d);
    if let (Some(lo), Some(hi)) = (&lower, &upper) {
        if lo > hi {
            return RankTwoVerdict::Unique(UniqueCondition::RatioGap);
        }
    }

    let case = if d.iter().all(|r| !pos(&r[0]) && !pos(&r[1])) {
        FailureCase::AllNonPositive
    } else if (0..d.len()).any(|k| {
        pos(&d[k][0]) && z(&d[k][1]) && (0..d.len()).all(|i| i == k || !pos(&d[i][1]))
    }) {
        FailureCase::FirstOnlyPositive
    } else if (0..d.len()).any(|k| {
        z(&d[k][0]) && pos(&d[k][1]) && (0..d.len()).all(|i| i == k || !pos(&d[i][0]))
    }) {
        FailureCase::SecondOnlyPositive
    } else if !d.is_empty()
        && (d.iter().all(|r| pos(&r[0]) && neg(&r[1])) || d.iter().all(|r| neg(&r[0]) && pos(&r[1])))
    {
        FailureCase::UniformMixed
    } else if lower.is_some() && upper.is_some() {
        FailureCase::RatioOverlap
    } else {
        FailureCase::Other
    };
    RankTwoVerdict::NonTrivial(case)
}

/// Uniqueness of the trivial nilpotent for a rank `n-2` structural matrix.
pub fn unique_trivial_rank_nm2(m: &StructuralMatrix) -> Result<(bool, RankTwoVerdict)> {
    let red = rank_reduction(m);
    let n = m.n();
    if n < 2 || red.rank + 2 != n {
        return Err(Error::RankNotNMinus2 { rank: red.rank, expected: n.saturating_sub(2) });
    }
    let v = rank_two_verdict(&red.d);
    Ok((v.unique(), v))
}

/// Whether `{(u, v) ≥ 0, (u, v) ≠ 0 : d_i · (u, v) ≤ 0 for all i}` is
/// nonempty, i.e. whether a nontrivial nilpotent exists.
///
/// Rays of the quadrant are parametrised by `s = u / (u + v) ∈ [0, 1]`; each
/// row cuts out a closed subinterval and the rows are intersected exactly.
pub fn cone_oracle(red: &ReducedSystem) -> Result<bool> {
    if red.free.len() != 2 {
        return Err(Error::FreeCountMismatch(red.free.len()));
    }
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    for row in &red.d {
        // d0 s + d1 (1 - s) ≤ 0  <=>  (d0 - d1) s ≤ -d1
        let a = &row[0] - &row[1];
        let b = -&row[1];
        if a.is_zero() {
            if b.is_negative() {
                return Ok(false);
            }
        } else if a.is_positive() {
            hi = hi.min(b / a);
        } else {
            lo = lo.max(b / a);
        }
        if lo > hi {
            return Ok(false);
        }
    }
    Ok(true)
}
