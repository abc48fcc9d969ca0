//! Reference implementations used only by tests. None of these call into
//! the solvers they check: each one works from the structural matrix or the
//! raw definitions with its own elimination and root isolation.

#![allow(dead_code)]

use evoalg::rational::{int, Rational};
use evoalg::{EvolutionAlgebra, Permutation};
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Matrix = Vec<Vec<Rational>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

/// Structural matrix straight from the definition.
pub fn matrix_of(e: &EvolutionAlgebra) -> Matrix {
    let n = e.n();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        m[i][e.pi().apply(i)] += &e.a_pi()[i];
        m[i][e.tau().apply(i)] += &e.a_tau()[i];
    }
    m
}

/// Basis of the null space of `a` (columns are unknowns), by plain
/// Gauss-Jordan.
pub fn null_space(a: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let rows = m.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank(a: &Matrix, cols: usize) -> usize {
    cols - null_space(a, cols).len()
}

/// Scales so the first nonzero entry is one.
pub fn normalize(v: &[Rational]) -> Vec<Rational> {
    let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(Rational::one);
    v.iter().map(|x| x / &lead).collect()
}

/// Extreme rays of `{y ≥ 0 : Σ_i y_i M[i] = 0}` by support enumeration: a
/// support `S` carries an extreme ray exactly when the solutions supported
/// on `S` form a line spanned by a vector that is strictly positive on `S`.
/// Rays are normalized and sorted.
pub fn extreme_rays(m: &Matrix) -> Vec<Vec<Rational>> {
    let n = m.len();
    assert!(n <= 12, "support enumeration is exponential");
    let mut rays = Vec::new();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        // unknowns y_s for s in support; equations: column j of Mᵀ y = 0
        let a: Matrix = (0..n).map(|j| support.iter().map(|&s| m[s][j].clone()).collect()).collect();
        let ns = null_space(&a, support.len());
        if ns.len() != 1 {
            continue;
        }
        let v = &ns[0];
        let all_pos = v.iter().all(Signed::is_positive);
        let all_neg = v.iter().all(Signed::is_negative);
        if !(all_pos || all_neg) {
            continue;
        }
        let mut y = vec![Rational::zero(); n];
        for (k, &s) in support.iter().enumerate() {
            y[s] = v[k].abs();
        }
        rays.push(normalize(&y));
    }
    rays.sort();
    rays
}

/// `Mᵀ y`.
pub fn mt_times(m: &Matrix, y: &[Rational]) -> Vec<Rational> {
    let n = m.len();
    (0..n)
        .map(|j| (0..n).fold(Rational::zero(), |acc, i| acc + &m[i][j] * &y[i]))
        .collect()
}

/// `x²` in floating point from the structural matrix.
pub fn square_f64(m: &Matrix, x: &[f64]) -> Vec<f64> {
    let n = m.len();
    let mf: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(evoalg::rational::to_f64).collect()).collect();
    (0..n).map(|j| (0..n).map(|i| mf[i][j] * x[i] * x[i]).sum()).collect()
}

/// All permutations of `0..n` (0-based images), by recursion.
pub fn all_perms(n: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out.into_iter().map(|v| Permutation::from_zero_based(v).unwrap()).collect()
}

/// Whether some `g` satisfies `g p g⁻¹ = q`, by trying every `g`.
pub fn conjugate_by_search(p: &Permutation, q: &Permutation) -> bool {
    let n = p.n();
    all_perms(n).iter().any(|g| (0..n).all(|i| g.apply(p.apply(i)) == q.apply(g.apply(i))))
}

pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::from_zero_based(v).unwrap()
}

/// Random algebra with `pi != tau` and integer coefficients in `lo..=hi`.
pub fn random_algebra<R: Rng>(n: usize, lo: i64, hi: i64, rng: &mut R) -> EvolutionAlgebra {
    loop {
        let pi = random_perm(n, rng);
        let tau = random_perm(n, rng);
        if pi == tau {
            continue;
        }
        let a_pi = (0..n).map(|_| int(rng.gen_range(lo..=hi))).collect();
        let a_tau = (0..n).map(|_| int(rng.gen_range(lo..=hi))).collect();
        return EvolutionAlgebra::new(pi, tau, a_pi, a_tau).unwrap();
    }
}

/// Random `n×n` integer matrix with entries in `-2..=2` and rank exactly
/// `n-2`: `n-2` random rows plus two combinations of them with weights in
/// `{-1, 0, 1}`, rows shuffled. Candidates leaving the entry range or
/// missing the rank are redrawn.
pub fn random_rank_nm2<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    loop {
        let base: Vec<Vec<i64>> = (0..n - 2).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let mut rows = base.clone();
        let mut ok = true;
        for _ in 0..2 {
            let w: Vec<i64> = (0..n - 2).map(|_| rng.gen_range(-1..=1)).collect();
            let row: Vec<i64> = (0..n).map(|j| (0..n - 2).map(|k| w[k] * base[k][j]).sum()).collect();
            if row.iter().any(|v| v.abs() > 2) {
                ok = false;
                break;
            }
            rows.push(row);
        }
        if !ok {
            continue;
        }
        rows.shuffle(rng);
        let m = int_matrix(&rows);
        if rank(&m, n) == n - 2 {
            return m;
        }
    }
}

// ---- polynomials over the rationals, lowest degree first ----

pub fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect()
}

/// Remainder of `a` divided by `b`.
pub fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        r = trim(r);
    }
    r
}

pub fn poly_div_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lb = b.last().unwrap().clone();
    let mut q = vec![Rational::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        q[shift] = f;
        r = trim(r);
    }
    assert!(r.is_empty(), "division not exact");
    trim(q)
}

pub fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Sturm chain of a squarefree polynomial.
fn sturm_chain(p: &[Rational]) -> Vec<Vec<Rational>> {
    let mut chain = vec![trim(p.to_vec()), trim(derivative(p))];
    while chain.last().is_some_and(|q| !q.is_empty()) {
        let k = chain.len();
        let r: Vec<Rational> = poly_rem(&chain[k - 2], &chain[k - 1]).into_iter().map(|c| -c).collect();
        chain.push(trim(r));
    }
    chain.pop();
    chain
}

fn sign_changes(chain: &[Vec<Rational>], x: &Rational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|q| poly_eval(q, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots, isolated by Sturm sequences and refined by exact
/// bisection until the bracket is narrower than `width`.
pub fn real_roots_bisection(p: &[Rational], width: f64) -> Vec<f64> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let g = poly_gcd(&p, &derivative(&p));
    let sf = if g.len() > 1 { poly_div_exact(&p, &g) } else { p.clone() };
    let chain = sturm_chain(&sf);
    // Cauchy bound
    let lead = sf.last().unwrap().abs();
    let bound = int(1) + sf[..sf.len() - 1].iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Rational::zero);
    let count = |lo: &Rational, hi: &Rational| sign_changes(&chain, lo) - sign_changes(&chain, hi);
    let w = evoalg::rational::from_f64(width).unwrap();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        match count(&lo, &hi) {
            0 => {}
            1 => {
                let (mut a, mut b) = (lo, hi);
                while &b - &a > w {
                    let mid = (&a + &b) / int(2);
                    let fm = poly_eval(&sf, &mid);
                    if fm.is_zero() {
                        a = mid.clone();
                        b = mid;
                        break;
                    }
                    if fm.is_positive() == poly_eval(&sf, &a).is_positive() && !poly_eval(&sf, &a).is_zero() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                out.push(evoalg::rational::to_f64(&((&a + &b) / int(2))));
            }
            _ => {
                let mid = (&lo + &hi) / int(2);
                // keep the midpoint out of both halves' open ends
                if poly_eval(&sf, &mid).is_zero() {
                    out.push(evoalg::rational::to_f64(&mid));
                    let eps = (&hi - &lo) / int(1 << 20);
                    stack.push((lo, &mid - &eps));
                    stack.push((&mid + &eps, hi));
                } else {
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}
