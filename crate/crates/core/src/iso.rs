//! Monomial isomorphisms (basis relabeling plus per-basis scaling) and
//! direct-sum decomposition.

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::algebra::{EvolutionAlgebra, StructuralMatrix};
use crate::error::{Error, Result};
use crate::perm::{self, Permutation};
use crate::rational::{self, Rational};

/// `f(e_i) = scale[i] · e'_{index_map(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMap {
    pub index_map: Permutation,
    pub scale: Vec<Rational>,
}

impl BasisMap {
    pub fn identity(n: usize) -> Self {
        Self { index_map: Permutation::identity(n), scale: vec![Rational::one(); n] }
    }

    pub fn relabel(index_map: Permutation) -> Self {
        let n = index_map.n();
        Self { index_map, scale: vec![Rational::one(); n] }
    }

    pub fn n(&self) -> usize {
        self.index_map.n()
    }

    pub fn is_identity(&self) -> bool {
        self.index_map.is_identity() && self.scale.iter().all(One::is_one)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &BasisMap) -> Result<BasisMap> {
        let index_map = g.index_map.compose(&self.index_map)?;
        let scale = (0..self.n())
            .map(|i| &self.scale[i] * &g.scale[self.index_map.apply(i)])
            .collect();
        Ok(BasisMap { index_map, scale })
    }
}

/// Checks `f(e_i e_j) = f(e_i) f(e_j)` for every basis pair, exactly.
pub fn verify_isomorphism(f: &BasisMap, e1: &EvolutionAlgebra, e2: &EvolutionAlgebra) -> bool {
    let n = e1.n();
    if e2.n() != n || f.n() != n || f.scale.len() != n || f.scale.iter().any(Zero::is_zero) {
        return false;
    }
    let m1 = e1.structural_matrix();
    let m2 = e2.structural_matrix();
    verify_on_matrices(f, &m1, &m2)
}

fn verify_on_matrices(f: &BasisMap, m1: &StructuralMatrix, m2: &StructuralMatrix) -> bool {
    let n = m1.n();
    let sigma = |i: usize| f.index_map.apply(i);
    for i in 0..n {
        for j in 0..n {
            // f(e_i e_j), expressed in the target basis
            let mut lhs = vec![Rational::zero(); n];
            if i == j {
                for k in 0..n {
                    lhs[sigma(k)] += &m1[(i, k)] * &f.scale[k];
                }
            }
            // f(e_i) f(e_j) = s_i s_j e'_{σ(i)} e'_{σ(j)}
            let mut rhs = vec![Rational::zero(); n];
            if sigma(i) == sigma(j) {
                let w = &f.scale[i] * &f.scale[j];
                for m in 0..n {
                    rhs[m] += &w * &m2[(sigma(i), m)];
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub components: Vec<EvolutionAlgebra>,
    /// 0-based parent indices of each component's basis, increasing.
    pub embeddings: Vec<Vec<usize>>,
    /// Parent basis onto the concatenated direct sum.
    pub relabeling: BasisMap,
}

impl Decomposition {
    pub fn direct_sum(&self) -> EvolutionAlgebra {
        self.components
            .iter()
            .fold(EvolutionAlgebra::empty(), |acc, c| acc.direct_sum(c))
    }
}

/// Splits along the common cycle supports of `pi` and `tau`.
pub fn decompose(e: &EvolutionAlgebra) -> Result<Decomposition> {
    let n = e.n();
    for i in 0..n {
        if (&e.a_pi()[i] * &e.a_tau()[i]).is_zero() {
            return Err(Error::ZeroCoefficient(format!(
                "a_pi[{0}] * a_tau[{0}] = 0; every product must be nonzero",
                i + 1
            )));
        }
    }
    let mut ps = e.pi().cycle_supports();
    let mut ts = e.tau().cycle_supports();
    ps.sort();
    ts.sort();
    if ps != ts {
        return Err(Error::SupportsDiffer);
    }

    let mut components = Vec::with_capacity(ps.len());
    let mut order = Vec::with_capacity(n);
    for support in &ps {
        let local = |g: usize| support.binary_search(&g).expect("closed support");
        let restrict = |p: &Permutation| {
            Permutation::from_zero_based(support.iter().map(|&g| local(p.apply(g))).collect())
                .expect("restriction of a permutation to a union of its cycles")
        };
        let comp = EvolutionAlgebra::new_unrestricted(
            restrict(e.pi()),
            restrict(e.tau()),
            support.iter().map(|&g| e.a_pi()[g].clone()).collect(),
            support.iter().map(|&g| e.a_tau()[g].clone()).collect(),
        )?;
        components.push(comp);
        order.extend_from_slice(support);
    }
    // order[k] = parent index of direct-sum slot k; the map goes the other way
    let relabeling = BasisMap::relabel(
        Permutation::from_zero_based(order).expect("supports partition the basis").inverse(),
    );
    let d = Decomposition { components, embeddings: ps, relabeling };
    debug_assert!(verify_isomorphism(&d.relabeling, e, &d.direct_sum()));
    Ok(d)
}

/// `o[i] = pi^i(1)` as 0-based indices.
fn orbit_of_first(pi: &Permutation) -> Vec<usize> {
    let mut o = Vec::with_capacity(pi.n());
    let mut cur = 0;
    for _ in 0..pi.n() {
        o.push(cur);
        cur = pi.apply(cur);
    }
    o
}

fn require_single_cycle(e: &EvolutionAlgebra) -> Result<()> {
    if e.n() < 2 || !e.pi().is_single_cycle() {
        return Err(Error::Shape(format!("pi = {} is not a single n-cycle", e.pi())));
    }
    Ok(())
}

fn require_nonzero_products(e: &EvolutionAlgebra) -> Result<()> {
    for i in 0..e.n() {
        if (&e.a_pi()[i] * &e.a_tau()[i]).is_zero() {
            return Err(Error::ZeroCoefficient(format!(
                "a_pi[{0}] * a_tau[{0}] = 0 at basis index {0}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Relabels `e'_i = e_{pi^{i-1}(1)}` so that `pi` becomes `(1 2 … n)`.
/// `tau` is carried along (conjugated by the relabeling).
fn relabel_along_pi(e: &EvolutionAlgebra) -> Result<(EvolutionAlgebra, BasisMap)> {
    let o = orbit_of_first(e.pi());
    // position[g] = new index of old basis vector g
    let position = Permutation::from_zero_based(o.clone()).expect("orbit covers 1..n").inverse();
    let tau_new = position
        .compose(e.tau())?
        .compose(&position.inverse())?;
    let target = EvolutionAlgebra::new(
        Permutation::standard_cycle(e.n()),
        tau_new,
        o.iter().map(|&g| e.a_pi()[g].clone()).collect(),
        o.iter().map(|&g| e.a_tau()[g].clone()).collect(),
    )?;
    let map = BasisMap::relabel(position);
    debug_assert!(verify_isomorphism(&map, e, &target));
    Ok((target, map))
}

/// For `tau = id` and `pi` an n-cycle: the isomorphic algebra over
/// `((1 2 … n), id)` with `e'_i e'_i = a_{o_i, o_{i+1}} e'_{i+1} + a_{o_i o_i} e'_i`.
pub fn canonical_cycle_form(e: &EvolutionAlgebra) -> Result<(EvolutionAlgebra, BasisMap)> {
    if !e.tau().is_identity() {
        return Err(Error::Shape("tau must be the identity".into()));
    }
    require_single_cycle(e)?;
    require_nonzero_products(e)?;
    relabel_along_pi(e)
}

/// 1-based positions `i` where `a'_{ii}² = a'_{i,i+1} a'_{i+1,i+1}` fails in
/// the canonical cycle form (position `n` is the wrap-around equation).
pub fn a_n_condition_failures(e: &EvolutionAlgebra) -> Result<Vec<usize>> {
    let (c, _) = canonical_cycle_form(e)?;
    let n = c.n();
    Ok((0..n)
        .filter(|&i| {
            let diag = &c.a_tau()[i];
            diag * diag != &c.a_pi()[i] * &c.a_tau()[(i + 1) % n]
        })
        .map(|i| i + 1)
        .collect())
}

/// The isomorphism onto the all-ones cycle algebra, when the squared-diagonal
/// condition holds at every position (cyclically).
pub fn to_a_n(e: &EvolutionAlgebra) -> Result<Option<(BasisMap, EvolutionAlgebra)>> {
    let (c, relabel) = canonical_cycle_form(e)?;
    if !a_n_condition_failures(e)?.is_empty() {
        return Ok(None);
    }
    let n = c.n();
    let target = EvolutionAlgebra::all_ones_cycle(n)?;
    let scale_map = BasisMap { index_map: Permutation::identity(n), scale: c.a_tau().to_vec() };
    let f = relabel.then(&scale_map)?;
    debug_assert!(verify_isomorphism(&f, e, &target));
    Ok(Some((f, target)))
}

/// `f(e_i) = e_{γ(i)}` between `E_alpha` and `E_beta` (both with `tau = id`)
/// when the coefficients match along `γ`.
pub fn conjugate_iso(
    e_alpha: &EvolutionAlgebra,
    e_beta: &EvolutionAlgebra,
    gamma: &Permutation,
) -> Result<Option<BasisMap>> {
    if e_alpha.n() != e_beta.n() || gamma.n() != e_alpha.n() {
        return Err(Error::DimensionMismatch { expected: e_alpha.n(), got: e_beta.n() });
    }
    if !e_alpha.tau().is_identity() || !e_beta.tau().is_identity() {
        return Err(Error::Shape("both algebras need tau = identity".into()));
    }
    let conj = gamma.compose(e_alpha.pi())?.compose(&gamma.inverse())?;
    if conj != *e_beta.pi() {
        return Err(Error::NotAConjugator);
    }
    let matches = (0..e_alpha.n()).all(|i| {
        let g = gamma.apply(i);
        e_alpha.a_pi()[i] == e_beta.a_pi()[g] && e_alpha.a_tau()[i] == e_beta.a_tau()[g]
    });
    if !matches {
        return Ok(None);
    }
    let f = BasisMap::relabel(gamma.clone());
    debug_assert!(verify_isomorphism(&f, e_alpha, e_beta));
    Ok(Some(f))
}

/// The algebra `E_beta` over `beta` whose coefficients are pulled back along
/// `γ`, so that [`conjugate_iso`] applies.
pub fn pullback_along(
    e_alpha: &EvolutionAlgebra,
    beta: &Permutation,
    gamma: &Permutation,
) -> Result<EvolutionAlgebra> {
    let n = e_alpha.n();
    let ginv = gamma.inverse();
    EvolutionAlgebra::new(
        beta.clone(),
        Permutation::identity(n),
        (0..n).map(|g| e_alpha.a_pi()[ginv.apply(g)].clone()).collect(),
        (0..n).map(|g| e_alpha.a_tau()[ginv.apply(g)].clone()).collect(),
    )
}

/// Largest degree for which [`search_conjugate_iso`] tries every conjugator.
pub const EXHAUSTIVE_CONJUGATOR_LIMIT: usize = 8;

/// Looks for a conjugator `γ` with `γ α γ⁻¹ = β` along which the
/// coefficients match. Every conjugator is tried up to
/// [`EXHAUSTIVE_CONJUGATOR_LIMIT`]; above it only the canonical one is.
pub fn search_conjugate_iso(
    e_alpha: &EvolutionAlgebra,
    e_beta: &EvolutionAlgebra,
) -> Result<Option<(Permutation, BasisMap)>> {
    let n = e_alpha.n();
    if e_beta.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: e_beta.n() });
    }
    let canonical = perm::conjugator(e_alpha.pi(), e_beta.pi())?;
    if n > EXHAUSTIVE_CONJUGATOR_LIMIT {
        return Ok(conjugate_iso(e_alpha, e_beta, &canonical)?.map(|f| (canonical, f)));
    }
    let beta_inv = e_beta.pi().inverse();
    for image in (0..n).permutations(n) {
        let gamma = Permutation::from_zero_based(image).expect("permutation of 0..n");
        // γ α = β γ
        let conjugates = (0..n).all(|i| beta_inv.apply(gamma.apply(e_alpha.pi().apply(i))) == gamma.apply(i));
        if !conjugates {
            continue;
        }
        if let Some(f) = conjugate_iso(e_alpha, e_beta, &gamma)? {
            return Ok(Some((gamma, f)));
        }
    }
    Ok(None)
}

/// For an n-cycle `pi` with `tau ∘ pi = id`: the isomorphic algebra over
/// `((1 2 … n), (1 n n-1 … 2))`.
pub fn reverse_cycle_form(e: &EvolutionAlgebra) -> Result<(EvolutionAlgebra, BasisMap)> {
    require_single_cycle(e)?;
    if !e.tau().compose(e.pi())?.is_identity() {
        return Err(Error::Shape("tau ∘ pi is not the identity".into()));
    }
    require_nonzero_products(e)?;
    let (target, map) = relabel_along_pi(e)?;
    debug_assert_eq!(*target.tau(), Permutation::standard_cycle(e.n()).inverse());
    Ok((target, map))
}

pub fn to_string_scales(f: &BasisMap) -> Vec<String> {
    f.scale.iter().map(rational::format).collect()
}

/// Shorthand used by reports: find `γ` with `γ α γ⁻¹ = β`.
pub fn find_conjugator(alpha: &Permutation, beta: &Permutation) -> Result<Permutation> {
    perm::conjugator(alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn alg(pi: &[usize], tau: &[usize], a_pi: &[Rational], a_tau: &[Rational]) -> EvolutionAlgebra {
        EvolutionAlgebra::new(
            Permutation::new(pi.to_vec()).unwrap(),
            Permutation::new(tau.to_vec()).unwrap(),
            a_pi.to_vec(),
            a_tau.to_vec(),
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn decompose_two_blocks() {
        // pi = (1 2 3)(4 5), tau = (1 3 2)(4 5)
        let pi = Permutation::from_cycles(5, &[&[1, 2, 3], &[4, 5]]).unwrap();
        let tau = Permutation::from_cycles(5, &[&[1, 3, 2], &[4, 5]]).unwrap();
        let e = EvolutionAlgebra::new(pi, tau, ints(&[1, 2, 3, 4, 5]), ints(&[6, 7, 8, 9, 10])).unwrap();
        let d = decompose(&e).unwrap();
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.components[0].n(), 3);
        assert_eq!(d.components[1].n(), 2);
        assert_eq!(d.embeddings, vec![vec![0, 1, 2], vec![3, 4]]);
        // block 2 has coinciding permutations
        assert_eq!(d.components[1].pi(), d.components[1].tau());
        assert!(verify_isomorphism(&d.relabeling, &e, &d.direct_sum()));
    }

    #[test]
    fn decompose_interleaved_supports() {
        // pi = (1 3)(2 4), tau = (1 3)(2)(4)... supports differ
        let pi = Permutation::from_cycles(4, &[&[1, 3], &[2, 4]]).unwrap();
        let tau = Permutation::from_cycles(4, &[&[1, 3]]).unwrap();
        let e = EvolutionAlgebra::new(pi.clone(), tau, ints(&[1; 4]), ints(&[1; 4])).unwrap();
        assert_eq!(decompose(&e), Err(Error::SupportsDiffer));
        // pi = (1 3)(2 4 5), tau = (1 3)(2 5 4)
        let pi = Permutation::from_cycles(5, &[&[1, 3], &[2, 4, 5]]).unwrap();
        let tau = Permutation::from_cycles(5, &[&[1, 3], &[2, 5, 4]]).unwrap();
        let e = EvolutionAlgebra::new(pi, tau, ints(&[1, 2, 3, 4, 5]), ints(&[5, 4, 3, 2, 1])).unwrap();
        let d = decompose(&e).unwrap();
        assert_eq!(d.embeddings, vec![vec![0, 2], vec![1, 3, 4]]);
        assert!(verify_isomorphism(&d.relabeling, &e, &d.direct_sum()));
        let m = e.structural_matrix();
        let ms = d.direct_sum().structural_matrix();
        let s = &d.relabeling.index_map;
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m[(i, j)], ms[(s.apply(i), s.apply(j))]);
            }
        }
    }

    #[test]
    fn decompose_single_component_and_zero_product() {
        let e = alg(&[2, 3, 4, 1], &[3, 1, 4, 2], &ints(&[-1, 1, 1, 1]), &ints(&[1, -1, 1, 1]));
        let d = decompose(&e).unwrap();
        assert_eq!(d.components, vec![e.clone()]);
        assert!(d.relabeling.is_identity());
        let z = alg(&[2, 3, 4, 1], &[3, 1, 4, 2], &ints(&[0, 1, 1, 1]), &ints(&[1, 1, 1, 1]));
        assert!(matches!(decompose(&z), Err(Error::ZeroCoefficient(_))));
        // different cycle supports
        let x = alg(&[3, 1, 4, 2], &[2, 4, 3, 1], &ints(&[-1, 1, 1, 1]), &ints(&[1, -1, 1, 1]));
        assert_eq!(decompose(&x), Err(Error::SupportsDiffer));
        assert!(matches!(decompose(&z), Err(Error::ZeroCoefficient(_))));
    }

    #[test]
    fn canonical_form_examples() {
        let e = alg(&[2, 3, 1], &[1, 2, 3], &ints(&[1, 2, 3]), &ints(&[4, 5, 6]));
        let (c, f) = canonical_cycle_form(&e).unwrap();
        assert!(f.is_identity());
        assert_eq!(c, e);

        // pi = (1 3 2): order 1, 3, 2
        let e = alg(&[3, 1, 2], &[1, 2, 3], &ints(&[13, 21, 32]), &ints(&[11, 22, 33]));
        let (c, f) = canonical_cycle_form(&e).unwrap();
        assert_eq!(c.a_pi(), &ints(&[13, 32, 21])[..]);
        assert_eq!(c.a_tau(), &ints(&[11, 33, 22])[..]);
        assert_eq!(f.index_map.one_based(), vec![1, 3, 2]);
        assert!(verify_isomorphism(&f, &e, &c));

        let fixed = alg(&[1, 3, 2], &[1, 2, 3], &ints(&[1; 3]), &ints(&[1; 3]));
        assert!(matches!(canonical_cycle_form(&fixed), Err(Error::Shape(_))));
    }

    #[test]
    fn a_n_examples() {
        let ones = EvolutionAlgebra::all_ones_cycle(4).unwrap();
        let (f, t) = to_a_n(&ones).unwrap().unwrap();
        assert!(f.is_identity());
        assert_eq!(t, ones);

        let e = alg(&[2, 1], &[1, 2], &[int(4), ratio(1, 2)], &[int(2), int(1)]);
        let (f, t) = to_a_n(&e).unwrap().unwrap();
        assert_eq!(f.scale, vec![int(2), int(1)]);
        assert!(verify_isomorphism(&f, &e, &t));

        let bad = alg(&[2, 1], &[1, 2], &[int(4), int(1)], &[int(2), int(1)]);
        assert_eq!(to_a_n(&bad).unwrap(), None);
        // only the wrap-around equation fails
        assert_eq!(a_n_condition_failures(&bad).unwrap(), vec![2]);
    }

    #[test]
    fn conjugate_examples() {
        let e = alg(&[2, 3, 1], &[1, 2, 3], &ints(&[1, 2, 3]), &ints(&[4, 5, 6]));
        let f = conjugate_iso(&e, &e, &Permutation::identity(3)).unwrap().unwrap();
        assert!(f.is_identity());

        let alpha = Permutation::from_cycles(4, &[&[1, 2, 3]]).unwrap();
        let beta = Permutation::from_cycles(4, &[&[2, 3, 4]]).unwrap();
        let ea = EvolutionAlgebra::new(alpha.clone(), Permutation::identity(4), ints(&[1, 2, 3, 4]), ints(&[5, 6, 7, 8]))
            .unwrap();
        let gamma = perm::conjugator(&alpha, &beta).unwrap();
        let eb = pullback_along(&ea, &beta, &gamma).unwrap();
        let f = conjugate_iso(&ea, &eb, &gamma).unwrap().unwrap();
        assert!(verify_isomorphism(&f, &ea, &eb));

        let mut bad_pi = eb.a_pi().to_vec();
        bad_pi[0] += int(1);
        let eb_bad = EvolutionAlgebra::new(beta.clone(), Permutation::identity(4), bad_pi, eb.a_tau().to_vec()).unwrap();
        assert_eq!(conjugate_iso(&ea, &eb_bad, &gamma).unwrap(), None);
        assert_eq!(conjugate_iso(&ea, &eb, &Permutation::identity(4)), Err(Error::NotAConjugator));
    }

    #[test]
    fn search_finds_non_canonical_conjugator() {
        // alpha = (1 2)(3 4) with coefficients that only match after swapping the cycles
        let alpha = Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap();
        let ea = EvolutionAlgebra::new(alpha.clone(), Permutation::identity(4), ints(&[1, 2, 3, 4]), ints(&[5, 6, 7, 8]))
            .unwrap();
        let swap = Permutation::new(vec![3, 4, 1, 2]).unwrap();
        let eb = pullback_along(&ea, &alpha, &swap).unwrap();
        assert_eq!(conjugate_iso(&ea, &eb, &Permutation::identity(4)).unwrap(), None);
        let (gamma, f) = search_conjugate_iso(&ea, &eb).unwrap().unwrap();
        assert_eq!(gamma, swap);
        assert!(verify_isomorphism(&f, &ea, &eb));
        let other = EvolutionAlgebra::new(alpha, Permutation::identity(4), ints(&[9; 4]), ints(&[5, 6, 7, 8])).unwrap();
        assert_eq!(search_conjugate_iso(&ea, &other).unwrap(), None);
    }

    #[test]
    fn reverse_cycle_examples() {
        let c = Permutation::standard_cycle(4);
        let e = EvolutionAlgebra::new(c.clone(), c.inverse(), ints(&[1; 4]), ints(&[1; 4])).unwrap();
        let (t, f) = reverse_cycle_form(&e).unwrap();
        assert!(f.is_identity());
        assert_eq!(t, e);

        let pi = Permutation::from_cycles(4, &[&[1, 3, 2, 4]]).unwrap();
        let e = EvolutionAlgebra::new(pi.clone(), pi.inverse(), ints(&[1; 4]), ints(&[1; 4])).unwrap();
        let (t, f) = reverse_cycle_form(&e).unwrap();
        assert_eq!(*t.pi(), Permutation::standard_cycle(4));
        assert_eq!(t.tau().one_based(), vec![4, 1, 2, 3]);
        // order 1, 3, 2, 4: old index 3 becomes position 2
        assert_eq!(f.index_map.one_based(), vec![1, 3, 2, 4]);
        assert!(verify_isomorphism(&f, &e, &t));

        let wrong = EvolutionAlgebra::new(pi.clone(), Permutation::identity(4), ints(&[1; 4]), ints(&[1; 4])).unwrap();
        assert!(matches!(reverse_cycle_form(&wrong), Err(Error::Shape(_))));
    }

    #[test]
    fn perturbed_scale_fails() {
        let e = alg(&[2, 1], &[1, 2], &[int(4), ratio(1, 2)], &[int(2), int(1)]);
        let (mut f, t) = to_a_n(&e).unwrap().unwrap();
        f.scale[1] = int(3);
        assert!(!verify_isomorphism(&f, &e, &t));
        let mut z = BasisMap::identity(2);
        z.scale[0] = int(0);
        assert!(!verify_isomorphism(&z, &e, &e));
    }
}
