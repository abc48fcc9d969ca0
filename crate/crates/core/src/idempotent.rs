//! Idempotent elements, `x² = x`.
//!
//! For general `n` only the defining system and two closed-form particular
//! solutions are produced. In dimension two the system reduces to a quartic
//! in the first coordinate which is solved completely: the cubic factor is
//! classified by the exact sign of its discriminant and its real roots are
//! computed in closed form, polished by Newton steps in exact arithmetic,
//! and promoted to exact rationals whenever they are rational.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, EvolutionAlgebra};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::{self, Rational};

pub const DEFAULT_TOL: f64 = 1e-12;

/// `coef_0 x_{idx_0}² + coef_1 x_{idx_1}² = x_rhs` (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentEquation {
    pub k: usize,
    pub terms: [(Rational, usize); 2],
    pub rhs: usize,
}

impl IdempotentEquation {
    pub fn residual(&self, x: &Element) -> Rational {
        let mut s = -x[self.rhs].clone();
        for (c, i) in &self.terms {
            s += c * &x[*i] * &x[*i];
        }
        s
    }
}

impl fmt::Display for IdempotentEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [(c0, i0), (c1, i1)] = &self.terms;
        write!(
            f,
            "({})*x{}^2 + ({})*x{}^2 = x{}",
            rational::format(c0),
            i0 + 1,
            rational::format(c1),
            i1 + 1,
            self.rhs + 1
        )
    }
}

/// One equation per `k`: the `pi(k)` coordinate of `x²` collects
/// `a_pi[k] x_k²` and `a_tau[j_k] x_{j_k}²` with `j = tau⁻¹ ∘ pi`.
pub fn idempotent_system(e: &EvolutionAlgebra) -> Vec<IdempotentEquation> {
    let j = e.j_map();
    (0..e.n())
        .map(|k| IdempotentEquation {
            k,
            terms: [(e.a_pi()[k].clone(), k), (e.a_tau()[j.apply(k)].clone(), j.apply(k))],
            rhs: e.pi().apply(k),
        })
        .collect()
}

/// The constant vector `(1/d, …, 1/d)` when `a_pi[k] + a_tau[j_k] = d` for
/// every `k` with `d != 0`.
pub fn uniform_idempotent(e: &EvolutionAlgebra) -> Option<Element> {
    let sums: Vec<Rational> =
        idempotent_system(e).iter().map(|eq| &eq.terms[0].0 + &eq.terms[1].0).collect();
    let d = sums.first()?.clone();
    if d.is_zero() || sums.iter().any(|s| *s != d) {
        return None;
    }
    let x = Element(vec![d.recip(); e.n()]);
    debug_assert!(e.square(&x).map(|sq| sq == x).unwrap_or(false));
    Some(x)
}

/// Max-norm of `x² - x`, exact.
pub fn verify_idempotent(e: &EvolutionAlgebra, x: &Element) -> Result<Rational> {
    let sq = e.square(x)?;
    Ok(sq.0.iter().zip(&x.0).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Rational::zero))
}

/// Exact residual of a floating-point candidate, rounded to `f64`.
pub fn residual_f64(e: &EvolutionAlgebra, x: &[f64]) -> Result<f64> {
    let coords: Option<Vec<Rational>> = x.iter().map(|&v| rational::from_f64(v)).collect();
    let coords = coords.ok_or_else(|| Error::Shape("non-finite coordinate".into()))?;
    Ok(rational::to_f64(&verify_idempotent(e, &Element(coords))?))
}

/// Constants of the two-dimensional system `a x² + b y² = y`,
/// `d x² + c y² = x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quartic2D {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Quartic2D {
    /// Reads `(a, b, c, d) = (a_12, a_22, a_21, a_11)` from an algebra with
    /// `pi = (1 2)`, `tau = id`, or the mirror pair with the roles swapped.
    pub fn from_algebra(e: &EvolutionAlgebra) -> Result<Self> {
        if e.n() != 2 {
            return Err(Error::Shape(format!("two-dimensional algebra required, got n = {}", e.n())));
        }
        let swap = Permutation::standard_cycle(2);
        let (ap, at) = if *e.pi() == swap && e.tau().is_identity() {
            (e.a_pi(), e.a_tau())
        } else if e.pi().is_identity() && *e.tau() == swap {
            (e.a_tau(), e.a_pi())
        } else {
            return Err(Error::Shape("expected pi = (1 2) and tau = identity".into()));
        };
        let q = Quartic2D { a: ap[0].clone(), b: at[1].clone(), c: ap[1].clone(), d: at[0].clone() };
        for (name, v) in [("a12", &q.a), ("a22", &q.b), ("a21", &q.c), ("a11", &q.d)] {
            if v.is_zero() {
                return Err(Error::ZeroCoefficient(format!("{name} = 0")));
            }
        }
        Ok(q)
    }

    pub fn bd_minus_ac(&self) -> Rational {
        &self.b * &self.d - &self.a * &self.c
    }

    /// Coefficients of `(bd-ac)²x⁴ - 2b(bd-ac)x³ + (b²+cd)x² - cx`, highest
    /// degree first.
    pub fn coefficients(&self) -> [Rational; 5] {
        let k = self.bd_minus_ac();
        [
            &k * &k,
            -(rational::int(2) * &self.b * &k),
            &self.b * &self.b + &self.c * &self.d,
            -self.c.clone(),
            Rational::zero(),
        ]
    }

    /// Radius `r` such that an exact root `x*` of the quartic lies within `r`
    /// of `x` and `|y(x*) - y| ≤ r` too. The root is bracketed by an exact
    /// sign change; `y` is quadratic in `x`, so its range over the bracket is
    /// attained at an endpoint or the vertex.
    pub fn enclosure(&self, x: f64, y: f64) -> Option<f64> {
        if x == 0.0 || !x.is_finite() || !y.is_finite() {
            return None;
        }
        let poly: Vec<Rational> = self.coefficients().iter().rev().cloned().collect();
        let xr = rational::from_f64(x)?;
        let yr = rational::from_f64(y)?;
        let mut eps = x.abs() * f64::EPSILON;
        for _ in 0..40 {
            let e = rational::from_f64(eps)?;
            let (lo, hi) = (&xr - &e, &xr + &e);
            // the bracket must stay clear of the root at zero
            if !lo.is_positive() && !hi.is_negative() {
                return None;
            }
            let (flo, fhi) = (eval(&poly, &lo), eval(&poly, &hi));
            if flo.is_zero() || fhi.is_zero() || flo.is_positive() != fhi.is_positive() {
                // y = u x² + v x with u = a - bd/c, v = b/c
                let u = &self.a - &self.b * &self.d / &self.c;
                let v = &self.b / &self.c;
                let mut cands = vec![lo.clone(), hi.clone()];
                if !u.is_zero() {
                    let vertex = -&v / (rational::int(2) * &u);
                    if vertex > lo && vertex < hi {
                        cands.push(vertex);
                    }
                }
                let dy = cands
                    .iter()
                    .map(|t| (&u * t * t + &v * t - &yr).abs())
                    .max()
                    .expect("nonempty");
                let r = e.max(dy);
                // round the bound up to the next representable float
                let rf = rational::to_f64(&r);
                return Some(if rational::from_f64(rf)? >= r { rf } else { rf.next_up() });
            }
            eps *= 4.0;
        }
        None
    }

    /// `y` from a root `x`: `y = a x² + b (x - d x²) / c`.
    pub fn recover_y(&self, x: &Rational) -> Rational {
        let x2 = x * x;
        &self.a * &x2 + &self.b * (x - &self.d * &x2) / &self.c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CardanoCase {
    /// `bd = ac`: the quartic degenerates to `(b²+cd)x² - cx`.
    #[serde(rename = "bd=ac")]
    Degenerate,
    #[serde(rename = "three-real")]
    ThreeReal,
    #[serde(rename = "one-real")]
    OneReal,
    #[serde(rename = "two-real")]
    TwoReal,
    #[serde(rename = "triple-root")]
    TripleRoot,
}

impl CardanoCase {
    /// Distinct nonzero real roots of the quartic implied by the case.
    pub fn expected_root_count(self, degenerate_has_root: bool) -> usize {
        match self {
            CardanoCase::Degenerate => usize::from(degenerate_has_root),
            CardanoCase::ThreeReal => 3,
            CardanoCase::OneReal => 1,
            CardanoCase::TwoReal => 2,
            CardanoCase::TripleRoot => 1,
        }
    }
}

/// Depressed-cubic data `t³ + p t + q = 0` for `x = t + 2b / (3(bd-ac))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardanoData {
    pub p: Option<Rational>,
    pub q: Option<Rational>,
    pub delta: Option<Rational>,
    pub case: CardanoCase,
}

pub fn cardano_data(qd: &Quartic2D) -> CardanoData {
    let k = qd.bd_minus_ac();
    if k.is_zero() {
        return CardanoData { p: None, q: None, delta: None, case: CardanoCase::Degenerate };
    }
    let (b, c, d) = (&qd.b, &qd.c, &qd.d);
    let k2 = &k * &k;
    let k3 = &k2 * &k;
    let i = rational::int;
    let p = (i(3) * c * d - b * b) / (i(3) * &k2);
    let q = i(2) * (i(9) * b * c * d + b * b * b) / (i(27) * &k3) - c / &k2;
    let delta = (&q / i(2)) * (&q / i(2)) + (&p / i(3)) * (&p / i(3)) * (&p / i(3));
    let case = if delta.is_negative() {
        CardanoCase::ThreeReal
    } else if delta.is_positive() {
        CardanoCase::OneReal
    } else if p.is_zero() && q.is_zero() {
        CardanoCase::TripleRoot
    } else {
        CardanoCase::TwoReal
    };
    CardanoData { p: Some(p), q: Some(q), delta: Some(delta), case }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coord {
    Exact(Rational),
    Approx(f64),
}

impl Coord {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coord::Exact(r) => rational::to_f64(r),
            Coord::Approx(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coord::Exact(_))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Exact(r) => write!(f, "{}", rational::format(r)),
            Coord::Approx(v) => write!(f, "{v:.17e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentPoint {
    pub x: Coord,
    pub y: Coord,
    pub exact: bool,
    /// Max-norm residual of `v² - v`; exactly zero for exact points.
    pub residual: f64,
    /// Proven bound on `|x - x*|` and `|y - y*|` for the true idempotent
    /// `(x*, y*)`; zero for exact points, infinite if no enclosure was found.
    pub error_bound: f64,
    pub label: PointLabel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointLabel {
    /// `x = 0` completed with `y = 0`.
    ZeroBranchTrivial,
    /// `x = 0` completed with `y = 1/b`.
    ZeroBranchInverseB,
    /// A nonzero root of the quartic.
    QuarticRoot,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Idempotents2D {
    pub constants: Quartic2D,
    pub cardano: CardanoData,
    pub points: Vec<IdempotentPoint>,
    /// Candidates that failed substitution, with their residual.
    pub rejected: Vec<IdempotentPoint>,
    /// Distinct nonzero real roots of the quartic, ascending.
    pub roots: Vec<Coord>,
}

/// Complete real idempotent set of a two-dimensional algebra.
pub fn idempotents_2d(e: &EvolutionAlgebra, tol: f64) -> Result<Idempotents2D> {
    let qd = Quartic2D::from_algebra(e)?;
    let cardano = cardano_data(&qd);
    let roots = nonzero_roots(&qd, &cardano);

    let mut points = Vec::new();
    let mut rejected = Vec::new();
    let zero_branch = [
        (Rational::zero(), PointLabel::ZeroBranchTrivial),
        (qd.b.recip(), PointLabel::ZeroBranchInverseB),
    ];
    for (y, label) in zero_branch {
        let v = Element(vec![Rational::zero(), y.clone()]);
        let res = verify_idempotent(e, &v)?;
        let pt = IdempotentPoint {
            x: Coord::Exact(Rational::zero()),
            y: Coord::Exact(y),
            exact: true,
            residual: rational::to_f64(&res),
            error_bound: 0.0,
            label,
        };
        if res.is_zero() {
            points.push(pt);
        } else {
            rejected.push(pt);
        }
    }
    for root in &roots {
        let pt = match root {
            Coord::Exact(x) => {
                let y = qd.recover_y(x);
                let res = verify_idempotent(e, &Element(vec![x.clone(), y.clone()]))?;
                IdempotentPoint {
                    x: Coord::Exact(x.clone()),
                    y: Coord::Exact(y),
                    exact: res.is_zero(),
                    residual: rational::to_f64(&res),
                    error_bound: 0.0,
                    label: PointLabel::QuarticRoot,
                }
            }
            Coord::Approx(xf) => {
                let xr = rational::from_f64(*xf).expect("finite root");
                let yf = rational::to_f64(&qd.recover_y(&xr));
                let res = residual_f64(e, &[*xf, yf])?;
                IdempotentPoint {
                    x: Coord::Approx(*xf),
                    y: Coord::Approx(yf),
                    exact: false,
                    residual: res,
                    error_bound: qd.enclosure(*xf, yf).unwrap_or(f64::INFINITY),
                    label: PointLabel::QuarticRoot,
                }
            }
        };
        let ok = if pt.exact { pt.residual == 0.0 } else { pt.residual < tol };
        if ok {
            points.push(pt);
        } else {
            rejected.push(pt);
        }
    }
    Ok(Idempotents2D { constants: qd, cardano, points, rejected, roots })
}

/// Distinct nonzero real roots of the quartic in ascending order.
fn nonzero_roots(qd: &Quartic2D, cd: &CardanoData) -> Vec<Coord> {
    let k = qd.bd_minus_ac();
    if cd.case == CardanoCase::Degenerate {
        let s = &qd.b * &qd.b + &qd.c * &qd.d;
        return if s.is_zero() { Vec::new() } else { vec![Coord::Exact(&qd.c / s)] };
    }
    let p = cd.p.as_ref().expect("cubic case");
    let q = cd.q.as_ref().expect("cubic case");
    let shift = rational::int(2) * &qd.b / (rational::int(3) * &k);
    // monic cubic x³ + c2 x² + c1 x + c0 after dividing the quartic by k² x
    let k2 = &k * &k;
    let cubic = [
        -(&qd.c / &k2),
        (&qd.b * &qd.b + &qd.c * &qd.d) / &k2,
        -(rational::int(2) * &qd.b / &k),
        Rational::one(),
    ];
    let mut roots: Vec<Coord> = match cd.case {
        CardanoCase::TripleRoot => vec![Coord::Exact(shift.clone())],
        CardanoCase::TwoReal => {
            let simple = rational::int(3) * q / p;
            let double = -(rational::int(3) * q) / (rational::int(2) * p);
            vec![Coord::Exact(simple + &shift), Coord::Exact(double + &shift)]
        }
        CardanoCase::OneReal | CardanoCase::ThreeReal => {
            let pf = rational::to_f64(p);
            let qf = rational::to_f64(q);
            let sf = rational::to_f64(&shift);
            let ts: Vec<f64> = if cd.case == CardanoCase::OneReal {
                let sd = rational::to_f64(cd.delta.as_ref().unwrap()).sqrt();
                vec![(-qf / 2.0 + sd).cbrt() + (-qf / 2.0 - sd).cbrt()]
            } else {
                let m = 2.0 * (-pf / 3.0).sqrt();
                let arg = ((3.0 * qf) / (2.0 * pf) * (-3.0 / pf).sqrt()).clamp(-1.0, 1.0);
                let theta = arg.acos() / 3.0;
                (0..3)
                    .map(|j| m * (theta - 2.0 * std::f64::consts::PI * j as f64 / 3.0).cos())
                    .collect()
            };
            ts.into_iter().map(|t| polish(&cubic, t + sf)).collect()
        }
        CardanoCase::Degenerate => unreachable!(),
    };
    roots.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
    roots
}

fn eval(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn eval_deriv(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Rational::zero(), |acc, (i, c)| acc * x + c * rational::int(i as i64))
}

fn eval_f64(poly: &[f64], x: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Newton in `f64`, then up to three exact Newton steps (kept only while
/// they reduce `|f|`), then a search for an exact rational root nearby.
fn polish(poly: &[Rational], x0: f64) -> Coord {
    let pf: Vec<f64> = poly.iter().map(rational::to_f64).collect();
    let dpf: Vec<f64> = pf.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    let mut x = x0;
    for _ in 0..50 {
        let fx = eval_f64(&pf, x);
        let dx = eval_f64(&dpf, x);
        if dx == 0.0 || !fx.is_finite() {
            break;
        }
        let step = fx / dx;
        let nx = x - step;
        if !nx.is_finite() || eval_f64(&pf, nx).abs() > fx.abs() {
            break;
        }
        x = nx;
        if step.abs() <= f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    if let Some(r) = rational_root_near(poly, x) {
        return Coord::Exact(r);
    }
    let mut xr = rational::from_f64(x).expect("finite");
    let mut fr = eval(poly, &xr).abs();
    for _ in 0..3 {
        let dr = eval_deriv(poly, &xr);
        if dr.is_zero() {
            break;
        }
        let cand = &xr - eval(poly, &xr) / dr;
        // round back to f64 so the rational sizes stay bounded
        let cand = rational::from_f64(rational::to_f64(&cand)).expect("finite");
        let fc = eval(poly, &cand).abs();
        if fc >= fr {
            break;
        }
        xr = cand;
        fr = fc;
    }
    Coord::Approx(rational::to_f64(&xr))
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i * i != n {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    Some(out)
}

/// A rational root `num/den` has `den | lead` after clearing denominators;
/// try the nearest numerator for every such denominator.
fn rational_root_near(poly: &[Rational], x: f64) -> Option<Rational> {
    let l = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let lead = (poly.last()? * Rational::from_integer(l)).to_integer();
    for den in divisors(&lead)? {
        let num = (x * den.to_f64()?).round();
        if !num.is_finite() {
            continue;
        }
        let cand = Rational::new(BigInt::from(num as i64), den);
        // only a root that the numerical one actually approximates
        let close = (rational::to_f64(&cand) - x).abs() <= 1e-9 * x.abs().max(1.0);
        if close && eval(poly, &cand).is_zero() {
            return Some(cand);
        }
    }
    None
}
