//! Baric weight functions of the coordinate form `σ(x) = w · x_k`.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, EvolutionAlgebra};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedCase {
    PiFixed,
    TauFixed,
    BothFixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightFunction {
    /// 1-based basis index.
    pub k0: usize,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
    pub case_tag: FixedCase,
}

impl WeightFunction {
    pub fn eval(&self, x: &Element) -> Rational {
        &self.weight * &x[self.k0 - 1]
    }
}

/// Weight functions plus the indices where the extra column test vetoed a
/// candidate that passed the fixed-point conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaricAnalysis {
    pub weights: Vec<WeightFunction>,
    pub column_vetoes: Vec<usize>,
}

pub fn analyze(e: &EvolutionAlgebra) -> BaricAnalysis {
    let n = e.n();
    let m = e.structural_matrix();
    let pi_inv = e.pi().inverse();
    let tau_inv = e.tau().inverse();
    let mut weights = Vec::new();
    let mut column_vetoes = Vec::new();
    for k in 0..n {
        let pf = e.pi().apply(k) == k;
        let tf = e.tau().apply(k) == k;
        let candidate = match (pf, tf) {
            // a_kk = a_pi[k]; the other entry of column k sits in row tau⁻¹(k)
            (true, false) => (!e.a_pi()[k].is_zero() && e.a_tau()[tau_inv.apply(k)].is_zero())
                .then(|| (e.a_pi()[k].clone(), FixedCase::PiFixed)),
            (false, true) => (!e.a_tau()[k].is_zero() && e.a_pi()[pi_inv.apply(k)].is_zero())
                .then(|| (e.a_tau()[k].clone(), FixedCase::TauFixed)),
            (true, true) => {
                let w = &e.a_pi()[k] + &e.a_tau()[k];
                (!w.is_zero()).then_some((w, FixedCase::BothFixed))
            }
            (false, false) => None,
        };
        let Some((weight, case_tag)) = candidate else {
            continue;
        };
        let column_clear = (0..n).all(|i| i == k || m[(i, k)].is_zero());
        if !column_clear {
            column_vetoes.push(k + 1);
            continue;
        }
        weights.push(WeightFunction { k0: k + 1, weight, case_tag });
    }
    BaricAnalysis { weights, column_vetoes }
}

/// All coordinate weight functions. The weight in the doubly-fixed case is
/// the diagonal entry `a_pi[k] + a_tau[k]`, which is `2a` when both
/// permutation coefficients equal `a`.
pub fn weight_functions(e: &EvolutionAlgebra) -> Vec<WeightFunction> {
    analyze(e).weights
}

pub fn is_baric(e: &EvolutionAlgebra) -> bool {
    !weight_functions(e).is_empty()
}

/// Multiplicativity on every basis pair (which, by bilinearity, decides the
/// question for coordinate forms). Pairs are taken with `i ≤ j` since the
/// product is commutative, and `σ(e_i) = w·[i = k]` is used directly, so the
/// test reads `w·(e_i e_j)_k = w²·[i = j = k]`.
pub fn is_character_on_basis(e: &EvolutionAlgebra, sigma: &WeightFunction) -> bool {
    let n = e.n();
    if sigma.weight.is_zero() || sigma.k0 == 0 || sigma.k0 > n {
        return false;
    }
    let k = sigma.k0 - 1;
    let basis: Vec<Element> = (0..n).map(|i| e.basis(i)).collect();
    for i in 0..n {
        for j in i..n {
            let xy = e.multiply(&basis[i], &basis[j]).expect("dimension");
            // w ≠ 0, so w·p = w² iff p = w, and w·p = 0 iff p = 0
            let ok = if i == k && j == k { xy[k] == sigma.weight } else { xy[k].is_zero() };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Checks `σ(xy) = σ(x)σ(y)` on all basis pairs and on `samples` random
/// rational pairs with small numerators and denominators.
pub fn verify_character<R: Rng>(
    e: &EvolutionAlgebra,
    sigma: &WeightFunction,
    samples: usize,
    rng: &mut R,
) -> bool {
    if !is_character_on_basis(e, sigma) {
        return false;
    }
    let n = e.n();
    for _ in 0..samples {
        let x = random_element(n, rng);
        let y = random_element(n, rng);
        let xy = e.multiply(&x, &y).expect("dimension");
        if sigma.eval(&xy) != sigma.eval(&x) * sigma.eval(&y) {
            return false;
        }
    }
    true
}

pub(crate) fn random_element<R: Rng>(n: usize, rng: &mut R) -> Element {
    Element(
        (0..n)
            .map(|_| rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
            .collect(),
    )
}
