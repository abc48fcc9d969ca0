//! Structured analysis reports.
//!
//! Reports use 1-based indices. Exact values are rational strings; floating
//! values are shortest round-trip decimal strings accompanied by an error
//! bound, so a report survives serialization unchanged.

use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::algebra::{EvolutionAlgebra, StructuralMatrix};
use crate::baric::{self, WeightFunction};
use crate::error::{Error, Result};
use crate::idempotent::{self, CardanoCase, Coord, IdempotentPoint, PointLabel};
use crate::iso::{self, BasisMap};
use crate::nilpotent::{self, CycleCase, QuickCondition, QuickTest, RankTwoVerdict};
use crate::perm::Permutation;
use crate::rational::{self, Rational};

/// Random samples per weight function in the character check.
pub const CHARACTER_SAMPLES: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Self { tol: idempotent::DEFAULT_TOL, seed: 0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<EvolutionAlgebra>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<StructuralMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baric: Option<BaricSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotent: Option<NilpotentSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<IdempotentSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<CanonicalSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isomorphism: Option<IsomorphismSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Skipped>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub analysis: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaricSection {
    pub baric: bool,
    pub weights: Vec<WeightFunction>,
    /// Per weight: multiplicative on all basis pairs and on seeded random pairs.
    pub character_verified: Vec<bool>,
    pub column_vetoes: Vec<usize>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorankOneSection {
    pub i0: usize,
    pub det_mr: String,
    pub det_mi0: String,
    pub product: String,
    /// Present when the leading rows were dependent and the rows were
    /// reordered (basic rows first).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_order: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuickSection {
    pub rank: usize,
    pub condition: Option<QuickCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corank_one: Option<CorankOneSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSection {
    pub cycle: Vec<usize>,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub case: CycleCase,
    pub free_params: usize,
    /// Generators in squared coordinates, aligned with `cycle`.
    pub generators: Vec<Vec<String>>,
    pub zero_indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTwoSection {
    pub rank: usize,
    pub basic: Vec<usize>,
    pub free: Vec<usize>,
    /// `y_basic[i] = -(d[i][0] y_free[0] + d[i][1] y_free[1])`.
    pub d: Vec<Vec<String>>,
    #[serde(flatten)]
    pub verdict: RankTwoVerdict,
    pub unique: bool,
    pub oracle_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotentSection {
    pub summary: String,
    pub trivial_only: bool,
    pub quick: QuickSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_free_params: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycles: Vec<CycleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_two: Option<RankTwoSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub value: String,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<String>,
}

impl Value {
    fn exact(r: &Rational) -> Self {
        Self { value: rational::format(r), exact: true, error_bound: None }
    }

    fn coord(c: &Coord, bound: f64) -> Self {
        match c {
            Coord::Exact(r) => Self::exact(r),
            Coord::Approx(v) => Self { value: format!("{v:?}"), exact: false, error_bound: Some(format!("{bound:e}")) },
        }
    }

}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSection {
    pub x: Value,
    pub y: Value,
    pub residual: String,
    pub label: PointLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoDimSection {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub bd_minus_ac: String,
    pub case: CardanoCase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub points: Vec<PointSection>,
    pub rejected: Vec<PointSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentSection {
    pub system: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_dim: Option<TwoDimSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub tolerance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSection {
    /// `f(e_i) = scale[i] e'_{index_map[i]}`.
    pub index_map: Vec<usize>,
    pub scale: Vec<String>,
    pub verified: bool,
}

impl MapSection {
    fn new(f: &BasisMap, from: &EvolutionAlgebra, to: &EvolutionAlgebra) -> Self {
        Self {
            index_map: f.index_map.one_based(),
            scale: iso::to_string_scales(f),
            verified: iso::verify_isomorphism(f, from, to),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSection {
    pub support: Vec<usize>,
    pub algebra: EvolutionAlgebra,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSection {
    pub components: Vec<ComponentSection>,
    pub relabeling: MapSection,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ANSection {
    pub holds: bool,
    pub failures: Vec<usize>,
    /// The failing set includes the wrap-around equation at position `n`.
    pub wrap_failure: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalSection {
    pub provenance: String,
    pub form: EvolutionAlgebra,
    pub map: MapSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all_ones: Option<ANSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismSection {
    pub isomorphic: bool,
    /// The conjugator tested, or found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<usize>>,
    pub gamma_given: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSection>,
    pub provenance: String,
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

pub fn baric_section(e: &EvolutionAlgebra, settings: &Settings) -> BaricSection {
    let analysis = baric::analyze(e);
    let mut rng = StdRng::seed_from_u64(settings.seed);
    let character_verified = analysis
        .weights
        .iter()
        .map(|w| baric::verify_character(e, w, CHARACTER_SAMPLES, &mut rng))
        .collect();
    BaricSection {
        baric: !analysis.weights.is_empty(),
        weights: analysis.weights,
        character_verified,
        column_vetoes: analysis.column_vetoes,
        provenance: "coordinate weights at fixed points of pi or tau".into(),
    }
}

fn quick_section(q: &QuickTest, m: &StructuralMatrix) -> QuickSection {
    let corank_one = q.corank_one.as_ref().map(|w| CorankOneSection {
        i0: w.i0 + 1,
        det_mr: rational::format(&w.det_mr),
        det_mi0: rational::format(&w.det_mi0),
        product: rational::format(&w.product),
        row_order: (!w.uses_leading_rows).then(|| one_based(&nilpotent::rank_reduction(m).row_order())),
    });
    QuickSection { rank: q.rank, condition: q.condition, corank_one }
}

fn rank_two_section(m: &StructuralMatrix) -> Result<RankTwoSection> {
    let (unique, verdict) = nilpotent::unique_trivial_rank_nm2(m)?;
    let red = nilpotent::rank_reduction(m);
    let nontrivial = nilpotent::cone_oracle(&red)?;
    Ok(RankTwoSection {
        rank: red.rank,
        basic: one_based(&red.basic),
        free: one_based(&red.free),
        d: red.d.iter().map(|r| strs(r)).collect(),
        verdict,
        unique,
        oracle_agrees: unique != nontrivial,
    })
}

fn quick_label(c: QuickCondition) -> &'static str {
    match c {
        QuickCondition::Nonsingular => "nonsingular",
        QuickCondition::CorankOneDeterminant => "corank-one-determinant",
        QuickCondition::PositiveChainProducts => "positive-chain-products",
    }
}

fn verdict_label(v: RankTwoVerdict) -> String {
    let s = serde_json::to_value(v).expect("verdict serializes");
    format!("rank n-2 {} {}", s["verdict"].as_str().unwrap_or(""), s["case"].as_str().unwrap_or(""))
}

pub fn nilpotent_section(e: &EvolutionAlgebra) -> NilpotentSection {
    let m = e.structural_matrix();
    let quick = nilpotent::quick_test(e);
    let family = nilpotent::absolute_nilpotents(e);
    let cycles: Vec<CycleSection> = family
        .per_cycle
        .iter()
        .map(|s| CycleSection {
            cycle: s.system.cycle.one_based(),
            alpha: strs(&s.system.alpha),
            beta: strs(&s.system.beta),
            case: s.case,
            free_params: s.cone.free_params(),
            generators: s.cone.generators.iter().map(|g| strs(g)).collect(),
            zero_indices: one_based(&s.cone.zero_indices),
        })
        .collect();
    let rank_two = (m.n() >= 2 && quick.rank + 2 == m.n()).then(|| rank_two_section(&m).expect("rank checked"));
    let tags = cycles.iter().map(|c| c.case.label()).collect::<Vec<_>>().join(", ");
    let head = if family.is_trivial_only() {
        match quick.condition {
            Some(c) => format!("unique trivial ({})", quick_label(c)),
            None => "unique trivial (chain solve)".to_string(),
        }
    } else {
        format!("nontrivial nilpotents: {} free parameter(s)", family.total_free_params)
    };
    NilpotentSection {
        summary: format!("{head}; per-cycle tags {tags}"),
        trivial_only: family.is_trivial_only(),
        quick: quick_section(&quick, &m),
        total_free_params: Some(family.total_free_params),
        cycles,
        rank_two,
    }
}

/// Matrix-only path: the determinant tests and, at rank `n-2`, the sign test.
pub fn nilpotent_matrix_section(m: &StructuralMatrix) -> Result<NilpotentSection> {
    let quick = nilpotent::quick_test_matrix(m);
    let qs = quick_section(&quick, m);
    if let Some(c) = quick.condition {
        return Ok(NilpotentSection {
            summary: format!("unique trivial ({})", quick_label(c)),
            trivial_only: true,
            quick: qs,
            total_free_params: None,
            cycles: Vec::new(),
            rank_two: None,
        });
    }
    let rt = rank_two_section(m)?;
    let summary = if rt.unique {
        format!("unique trivial ({})", verdict_label(rt.verdict))
    } else {
        format!("nontrivial nilpotents ({})", verdict_label(rt.verdict))
    };
    Ok(NilpotentSection {
        summary,
        trivial_only: rt.unique,
        quick: qs,
        total_free_params: None,
        cycles: Vec::new(),
        rank_two: Some(rt),
    })
}

fn point_section(p: &IdempotentPoint) -> PointSection {
    PointSection {
        x: Value::coord(&p.x, p.error_bound),
        y: Value::coord(&p.y, p.error_bound),
        residual: format!("{:?}", p.residual),
        label: p.label,
    }
}

pub fn idempotent_section(e: &EvolutionAlgebra, settings: &Settings) -> Result<IdempotentSection> {
    let system = idempotent::idempotent_system(e).iter().map(ToString::to_string).collect();
    let uniform = idempotent::uniform_idempotent(e).map(|x| strs(&x.0));
    let (two_dim, note) = match idempotent::idempotents_2d(e, settings.tol) {
        Ok(r) => {
            let q = &r.constants;
            let sec = TwoDimSection {
                a: rational::format(&q.a),
                b: rational::format(&q.b),
                c: rational::format(&q.c),
                d: rational::format(&q.d),
                bd_minus_ac: rational::format(&q.bd_minus_ac()),
                case: r.cardano.case,
                p: r.cardano.p.as_ref().map(rational::format),
                q: r.cardano.q.as_ref().map(rational::format),
                delta: r.cardano.delta.as_ref().map(rational::format),
                points: r.points.iter().map(point_section).collect(),
                rejected: r.rejected.iter().map(point_section).collect(),
            };
            (Some(sec), None)
        }
        Err(err @ (Error::Shape(_) | Error::ZeroCoefficient(_))) => {
            (None, Some(format!("complete solution skipped: {err}")))
        }
        Err(err) => return Err(err),
    };
    Ok(IdempotentSection { system, uniform, two_dim, note, tolerance: format!("{:e}", settings.tol) })
}

pub fn decomposition_section(e: &EvolutionAlgebra) -> Result<DecompositionSection> {
    let d = iso::decompose(e)?;
    let sum = d.direct_sum();
    Ok(DecompositionSection {
        components: d
            .components
            .iter()
            .zip(&d.embeddings)
            .map(|(c, s)| ComponentSection { support: one_based(s), algebra: c.clone() })
            .collect(),
        relabeling: MapSection::new(&d.relabeling, e, &sum),
        provenance: "common cycle supports of pi and tau".into(),
    })
}

pub fn canonical_section(e: &EvolutionAlgebra) -> Result<CanonicalSection> {
    if e.tau().is_identity() {
        let (form, f) = iso::canonical_cycle_form(e)?;
        let failures = iso::a_n_condition_failures(e)?;
        let map = iso::to_a_n(e)?.map(|(g, target)| MapSection::new(&g, e, &target));
        let all_ones = ANSection {
            holds: failures.is_empty(),
            wrap_failure: failures.contains(&e.n()),
            failures,
            map,
        };
        return Ok(CanonicalSection {
            provenance: "cycle relabeling, tau = identity".into(),
            map: MapSection::new(&f, e, &form),
            form,
            all_ones: Some(all_ones),
        });
    }
    if e.tau().compose(e.pi())?.is_identity() {
        let (form, f) = iso::reverse_cycle_form(e)?;
        return Ok(CanonicalSection {
            provenance: "cycle relabeling, tau = pi inverse".into(),
            map: MapSection::new(&f, e, &form),
            form,
            all_ones: None,
        });
    }
    Err(Error::Shape("canonical forms need tau = identity or tau = pi inverse".into()))
}

pub fn isomorphism_section(
    e_alpha: &EvolutionAlgebra,
    e_beta: &EvolutionAlgebra,
    gamma: Option<&Permutation>,
) -> Result<IsomorphismSection> {
    let provenance = "conjugate permutations with matching coefficients".to_string();
    let found = match gamma {
        Some(g) => iso::conjugate_iso(e_alpha, e_beta, g)?.map(|f| (g.clone(), f)),
        None => {
            if !e_alpha.tau().is_identity() || !e_beta.tau().is_identity() {
                return Err(Error::Shape("both algebras need tau = identity".into()));
            }
            iso::search_conjugate_iso(e_alpha, e_beta)?
        }
    };
    Ok(match found {
        Some((g, f)) => IsomorphismSection {
            isomorphic: true,
            gamma: Some(g.one_based()),
            gamma_given: gamma.is_some(),
            map: Some(MapSection::new(&f, e_alpha, e_beta)),
            provenance,
        },
        None => IsomorphismSection {
            isomorphic: false,
            gamma: gamma.map(Permutation::one_based),
            gamma_given: gamma.is_some(),
            map: None,
            provenance,
        },
    })
}

fn skip(analysis: &str, err: &Error) -> Skipped {
    Skipped { analysis: analysis.into(), reason: err.to_string() }
}

/// Every applicable single-algebra analysis; the rest are listed as skipped.
pub fn analyze(e: &EvolutionAlgebra, settings: &Settings) -> Result<AnalysisReport> {
    let mut r = AnalysisReport {
        command: "analyze".into(),
        algebra: Some(e.clone()),
        baric: Some(baric_section(e, settings)),
        nilpotent: Some(nilpotent_section(e)),
        idempotent: Some(idempotent_section(e, settings)?),
        ..Default::default()
    };
    match decomposition_section(e) {
        Ok(d) => r.decomposition = Some(d),
        Err(err) => r.skipped.push(skip("decompose", &err)),
    }
    match canonical_section(e) {
        Ok(c) => r.canonical = Some(c),
        Err(err) => r.skipped.push(skip("canonical", &err)),
    }
    r.skipped.push(Skipped { analysis: "iso".into(), reason: "needs a second algebra".into() });
    Ok(r)
}

impl AnalysisReport {
    pub fn for_algebra(command: &str, e: &EvolutionAlgebra) -> Self {
        Self { command: command.into(), algebra: Some(e.clone()), ..Default::default() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    /// Human-readable rendering.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "== {} ==", self.command);
        if let Some(e) = &self.algebra {
            let _ = writeln!(w, "algebra: n = {}, pi = {}, tau = {}", e.n(), e.pi(), e.tau());
            let _ = writeln!(w, "  a_pi  = [{}]", strs(e.a_pi()).join(", "));
            let _ = writeln!(w, "  a_tau = [{}]", strs(e.a_tau()).join(", "));
        }
        if let Some(m) = &self.matrix {
            let _ = writeln!(w, "matrix ({0}x{0}):", m.n());
            for row in m.rows() {
                let _ = writeln!(w, "  [{}]", strs(row).join(", "));
            }
        }
        if let Some(b) = &self.baric {
            let _ = writeln!(w, "\n-- baric --");
            if b.weights.is_empty() {
                let _ = writeln!(w, "not baric (no coordinate weight function)");
            }
            for (wf, ok) in b.weights.iter().zip(&b.character_verified) {
                let _ = writeln!(
                    w,
                    "sigma(x) = {} * x{}  [{}]  character check: {}",
                    rational::format(&wf.weight),
                    wf.k0,
                    serde_json::to_value(wf.case_tag).expect("tag").as_str().unwrap_or(""),
                    if *ok { "pass" } else { "FAIL" }
                );
            }
            if !b.column_vetoes.is_empty() {
                let _ = writeln!(w, "column test vetoed indices {:?}", b.column_vetoes);
            }
        }
        if let Some(n) = &self.nilpotent {
            let _ = writeln!(w, "\n-- nilpotent --");
            let _ = writeln!(w, "{}", n.summary);
            let _ = writeln!(w, "rank(M) = {}", n.quick.rank);
            if let Some(c) = &n.quick.corank_one {
                let _ = writeln!(
                    w,
                    "corank one: det(M_r) = {}, det(M_{{{},f}}^T) = {}, product = {}",
                    c.det_mr, c.i0, c.det_mi0, c.product
                );
                if let Some(order) = &c.row_order {
                    let _ = writeln!(w, "  rows reordered as {order:?}");
                }
            }
            for c in &n.cycles {
                let _ = writeln!(
                    w,
                    "cycle ({}) case {}: {} free; alpha = [{}], beta = [{}]",
                    c.cycle.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                    c.case,
                    c.free_params,
                    c.alpha.join(", "),
                    c.beta.join(", ")
                );
                for g in &c.generators {
                    let _ = writeln!(w, "  y-generator [{}]", g.join(", "));
                }
            }
            if let Some(rt) = &n.rank_two {
                let _ = writeln!(
                    w,
                    "{}; basic {:?}, free {:?}; oracle {}",
                    verdict_label(rt.verdict),
                    rt.basic,
                    rt.free,
                    if rt.oracle_agrees { "agrees" } else { "DISAGREES" }
                );
            }
        }
        if let Some(i) = &self.idempotent {
            let _ = writeln!(w, "\n-- idempotent --");
            for eq in &i.system {
                let _ = writeln!(w, "{eq}");
            }
            if let Some(u) = &i.uniform {
                let _ = writeln!(w, "uniform idempotent ({})", u.join(", "));
            }
            if let Some(t) = &i.two_dim {
                let _ = writeln!(
                    w,
                    "a = {}, b = {}, c = {}, d = {}, bd - ac = {}; case {}",
                    t.a,
                    t.b,
                    t.c,
                    t.d,
                    t.bd_minus_ac,
                    serde_json::to_value(t.case).expect("case").as_str().unwrap_or("")
                );
                if let (Some(p), Some(q), Some(dl)) = (&t.p, &t.q, &t.delta) {
                    let _ = writeln!(w, "p = {p}, q = {q}, delta = {dl}");
                }
                for p in &t.points {
                    let _ = writeln!(w, "  ({}, {})  residual {}", render(&p.x), render(&p.y), p.residual);
                }
                for p in &t.rejected {
                    let _ = writeln!(w, "  rejected ({}, {})  residual {}", render(&p.x), render(&p.y), p.residual);
                }
            }
            if let Some(note) = &i.note {
                let _ = writeln!(w, "{note}");
            }
        }
        if let Some(d) = &self.decomposition {
            let _ = writeln!(w, "\n-- decomposition --");
            for c in &d.components {
                let _ = writeln!(w, "support {:?}: pi = {}, tau = {}", c.support, c.algebra.pi(), c.algebra.tau());
            }
            let _ = writeln!(w, "relabeling {:?} verified: {}", d.relabeling.index_map, d.relabeling.verified);
        }
        if let Some(c) = &self.canonical {
            let _ = writeln!(w, "\n-- canonical ({}) --", c.provenance);
            let _ = writeln!(w, "pi = {}, tau = {}", c.form.pi(), c.form.tau());
            let _ = writeln!(w, "  a_pi  = [{}]", strs(c.form.a_pi()).join(", "));
            let _ = writeln!(w, "  a_tau = [{}]", strs(c.form.a_tau()).join(", "));
            let _ = writeln!(w, "map {:?} verified: {}", c.map.index_map, c.map.verified);
            if let Some(a) = &c.all_ones {
                if a.holds {
                    let m = a.map.as_ref().expect("map present when the condition holds");
                    let _ = writeln!(w, "isomorphic to the all-ones cycle algebra; scales [{}]", m.scale.join(", "));
                } else {
                    let _ = writeln!(
                        w,
                        "not matched to the all-ones cycle algebra: condition fails at {:?}{}",
                        a.failures,
                        if a.wrap_failure { " (including the wrap-around equation)" } else { "" }
                    );
                }
            }
        }
        if let Some(s) = &self.isomorphism {
            let _ = writeln!(w, "\n-- isomorphism --");
            match (&s.map, &s.gamma) {
                (Some(m), Some(g)) => {
                    let _ = writeln!(w, "isomorphic via gamma = {g:?}; verified: {}", m.verified);
                }
                _ => {
                    let _ = writeln!(w, "no monomial isomorphism along a conjugator");
                }
            }
        }
        for s in &self.skipped {
            let _ = writeln!(w, "\nskipped {}: {}", s.analysis, s.reason);
        }
        out
    }
}

fn render(v: &Value) -> String {
    match &v.error_bound {
        None => v.value.clone(),
        Some(b) => format!("{} ± {}", v.value, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn alg(pi: &[usize], tau: &[usize], a_pi: &[i64], a_tau: &[i64]) -> EvolutionAlgebra {
        EvolutionAlgebra::new(
            Permutation::new(pi.to_vec()).unwrap(),
            Permutation::new(tau.to_vec()).unwrap(),
            a_pi.iter().map(|&v| int(v)).collect(),
            a_tau.iter().map(|&v| int(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn analyze_round_trips() {
        let settings = Settings::default();
        for e in [
            alg(&[3, 1, 4, 2], &[2, 4, 3, 1], &[-1, 1, 1, 1], &[1, -1, 1, 1]),
            alg(&[2, 1], &[1, 2], &[1, 1], &[1, 1]),
            alg(&[2, 1], &[1, 2], &[1, 1], &[1, 2]),
            alg(&[2, 3, 1], &[1, 2, 3], &[1, 2, 3], &[1, 1, 1]),
            alg(&[2, 1], &[1, 2], &[1, 1], &[-1, -1]),
        ] {
            let r = analyze(&e, &settings).unwrap();
            let text = r.to_json();
            assert_eq!(AnalysisReport::from_json(&text).unwrap(), r);
            assert_eq!(AnalysisReport::from_json(&text).unwrap().to_json(), text);
            assert!(!r.pretty().is_empty());
        }
    }

    #[test]
    fn corank_one_summary() {
        let e = alg(&[3, 1, 4, 2], &[2, 4, 3, 1], &[-1, 1, 1, 1], &[1, -1, 1, 1]);
        let n = nilpotent_section(&e);
        assert!(n.summary.starts_with("unique trivial (corank-one-determinant)"));
        assert_eq!(n.quick.corank_one.as_ref().unwrap().product, "1");
        let r = analyze(&e, &Settings::default()).unwrap();
        assert_eq!(r.skipped.iter().map(|s| s.analysis.as_str()).collect::<Vec<_>>(), ["decompose", "canonical", "iso"]);
    }

    #[test]
    fn all_ones_two_dim_points() {
        let e = alg(&[2, 1], &[1, 2], &[1, 1], &[1, 1]);
        let s = idempotent_section(&e, &Settings::default()).unwrap();
        let t = s.two_dim.unwrap();
        assert_eq!(t.case, CardanoCase::Degenerate);
        let pts: Vec<(String, String)> = t.points.iter().map(|p| (p.x.value.clone(), p.y.value.clone())).collect();
        assert_eq!(pts, [("0".into(), "0".into()), ("1/2".into(), "1/2".into())]);
        assert_eq!(t.rejected.len(), 1);
    }

    #[test]
    fn matrix_only_rank_two() {
        // y1 = y2 solutions: rows (1,-1), (-1,1) padded to rank 2 in 4 dims
        let m = StructuralMatrix::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 1, 0, 0], &[2, 1, 0, 0]]).unwrap();
        let n = nilpotent_matrix_section(&m).unwrap();
        let rt = n.rank_two.unwrap();
        assert!(rt.oracle_agrees);
        assert_eq!(n.trivial_only, rt.unique);
        let singular3 = StructuralMatrix::from_ints(&[&[1; 4], &[1; 4], &[1; 4], &[1; 4]]).unwrap();
        assert!(matches!(nilpotent_matrix_section(&singular3), Err(Error::RankNotNMinus2 { .. })));
    }

    #[test]
    fn isomorphism_search_and_given_gamma() {
        let a = alg(&[2, 3, 1], &[1, 2, 3], &[1, 2, 3], &[4, 5, 6]);
        let s = isomorphism_section(&a, &a, None).unwrap();
        assert!(s.isomorphic && s.map.unwrap().verified);
        let g = Permutation::new(vec![2, 3, 1]).unwrap();
        let s = isomorphism_section(&a, &a, Some(&g)).unwrap();
        assert!(!s.isomorphic);
    }
}
