//! Scenario runners: named experiment suites binding the poset and monad
//! modules together, producing structured pass/fail reports.
//!
//! Every runner is a deterministic function of its parameters and seed;
//! random complexes and diagrams are built constructively (direct sums of
//! cells and indicator diagrams, conjugated by random isomorphisms) so
//! validity never depends on rejection sampling.

use crate::algebra::{
    brute_force_isomorphic, count_idempotents, preset, spherical_verdict, GradedAlgebra,
    MonadPresentation,
};
use crate::complex::{cone, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PrimeField};
use crate::poset::{
    check_24_condition1, check_24_condition2, counit_map, hocolim, holim, sphere_poset,
    sphere_twist, unit_map, FinitePoset, PosetDiagram,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;

/// A named experiment with all parameters needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    Sphere { n: usize, p: u64, dims: (usize, usize), trials: u32, seed: u64 },
    Monad { source: String, p: u64 },
    Counterexample { p: u64 },
    TwistZeta { n: usize, p: u64, dims: (usize, usize), trials: u32, seed: u64 },
}

/// One verified statement with its evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witnesses: serde_json::Value,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, witnesses: serde_json::Value) -> Self {
        Check { name: name.into(), passed, witnesses }
    }
}

/// Outcome of a scenario: the scenario echo and one entry per check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: Scenario,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    fn assemble(scenario: Scenario, checks: Vec<Check>) -> Report {
        let passed = checks.iter().all(|c| c.passed);
        Report { scenario, checks, passed }
    }
}

fn homology_json(h: &BTreeMap<i64, usize>) -> serde_json::Value {
    json!(h.iter().map(|(&d, &n)| (d.to_string(), n)).collect::<BTreeMap<_, _>>())
}

fn matrix_json(m: &Matrix) -> serde_json::Value {
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": m.entries() })
}

fn shifted(h: &BTreeMap<i64, usize>, s: i64) -> BTreeMap<i64, usize> {
    h.iter().map(|(&d, &n)| (d + s, n)).collect()
}

fn merged(a: &BTreeMap<i64, usize>, b: &BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
    let mut out = a.clone();
    for (&d, &n) in b {
        *out.entry(d).or_insert(0) += n;
    }
    out
}

fn random_invertible(field: PrimeField, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    for _ in 0..32 {
        let m = Matrix::random(field, n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
    Matrix::identity(field, n)
}

/// A random bounded complex of total dimension in `total_lo..=total_hi`,
/// built as a sum of point and interval cells in degrees -1..=2 and
/// conjugated by a random basis change in every degree.
pub fn random_complex(
    field: PrimeField,
    rng: &mut ChaCha8Rng,
    total_lo: usize,
    total_hi: usize,
) -> ChainComplex {
    let target = rng.gen_range(total_lo..=total_hi);
    let mut sum = ChainComplex::zero(field);
    while sum.total_dim() < target {
        let d = rng.gen_range(-1..=2i64);
        let cell = if target - sum.total_dim() >= 2 && rng.gen_bool(0.5) {
            // contractible interval d -> d-1
            ChainComplex::new(
                field,
                BTreeMap::from([(d, 1), (d - 1, 1)]),
                BTreeMap::from([(d, Matrix::identity(field, 1))]),
            )
            .expect("interval cell")
        } else {
            ChainComplex::concentrated(field, d, 1)
        };
        sum = sum.direct_sum(&cell).expect("same field");
    }
    let change: BTreeMap<i64, Matrix> = sum
        .support()
        .into_iter()
        .map(|i| (i, random_invertible(field, sum.dim(i), rng)))
        .collect();
    let get = |i: i64| {
        change
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Matrix::identity(field, sum.dim(i)))
    };
    let diff = sum
        .support()
        .into_iter()
        .map(|i| {
            let d = get(i - 1)
                .mul(&sum.differential(i))
                .and_then(|m| m.mul(&get(i).inverse().expect("invertible")))
                .expect("shapes match");
            (i, d)
        })
        .collect();
    ChainComplex::new(field, sum.dims().clone(), diff).expect("conjugation preserves d^2 = 0")
}

fn indicator_diagram(
    poset: &FinitePoset,
    member: &[bool],
    c: &ChainComplex,
) -> Result<PosetDiagram> {
    let zero = ChainComplex::zero(c.field());
    let stalks: Vec<ChainComplex> = (0..poset.len())
        .map(|x| if member[x] { c.clone() } else { zero.clone() })
        .collect();
    let mut transitions = BTreeMap::new();
    for (x, y) in poset.strict_pairs() {
        if member[x] && member[y] {
            transitions.insert((x, y), ChainMap::identity(c));
        }
    }
    PosetDiagram::new(poset.clone(), stalks, transitions)
}

/// Chain automorphism of the form id + d∘h + h∘d for a random degree-raising
/// h, retried until invertible.
fn random_automorphism(c: &ChainComplex, rng: &mut ChaCha8Rng) -> ChainMap {
    let field = c.field();
    for _ in 0..16 {
        let h: BTreeMap<i64, Matrix> = c
            .support()
            .into_iter()
            .map(|i| (i, Matrix::random(field, c.dim(i + 1), c.dim(i), rng)))
            .collect();
        let h_at = |i: i64| {
            h.get(&i)
                .cloned()
                .unwrap_or_else(|| Matrix::zero(field, c.dim(i + 1), c.dim(i)))
        };
        let mut maps = BTreeMap::new();
        let mut invertible = true;
        for &i in &c.support() {
            let dh = c.differential(i + 1).mul(&h_at(i)).expect("shapes");
            let hd = h_at(i - 1).mul(&c.differential(i)).expect("shapes");
            let q = Matrix::identity(field, c.dim(i))
                .add(&dh)
                .and_then(|m| m.add(&hd))
                .expect("shapes");
            if q.rank() != c.dim(i) {
                invertible = false;
                break;
            }
            maps.insert(i, q);
        }
        if invertible {
            return ChainMap::new(c.clone(), c.clone(), maps).expect("id + dh + hd is a chain map");
        }
    }
    ChainMap::identity(c)
}

fn inverse_map(f: &ChainMap) -> ChainMap {
    let maps = f
        .source()
        .support()
        .into_iter()
        .map(|i| (i, f.component(i).inverse().expect("invertible component")))
        .collect();
    ChainMap::new(f.target().clone(), f.source().clone(), maps).expect("inverse chain map")
}

/// A random strict diagram: a direct sum of up-set and down-set indicator
/// diagrams with random small stalk complexes, conjugated stalk-wise by
/// random chain automorphisms.
pub fn random_diagram(
    poset: &FinitePoset,
    field: PrimeField,
    rng: &mut ChaCha8Rng,
    stalk_lo: usize,
    stalk_hi: usize,
) -> Result<PosetDiagram> {
    let summands = rng.gen_range(1..=2);
    let mut total: Option<PosetDiagram> = None;
    for _ in 0..summands {
        let x = rng.gen_range(0..poset.len());
        let upward = rng.gen_bool(0.5);
        let member: Vec<bool> = (0..poset.len())
            .map(|y| if upward { poset.leq(x, y) } else { poset.leq(y, x) })
            .collect();
        let c = random_complex(field, rng, stalk_lo.max(1), stalk_hi.max(1));
        let part = indicator_diagram(poset, &member, &c)?;
        total = Some(match total {
            None => part,
            Some(t) => t.direct_sum(&part)?,
        });
    }
    let base = total.expect("at least one summand");
    let autos: Vec<ChainMap> =
        (0..poset.len()).map(|x| random_automorphism(base.stalk(x), rng)).collect();
    let stalks: Vec<ChainComplex> = (0..poset.len()).map(|x| base.stalk(x).clone()).collect();
    let mut transitions = BTreeMap::new();
    for (x, y) in poset.strict_pairs() {
        let t = autos[y]
            .compose(&base.transition(x, y))?
            .compose(&inverse_map(&autos[x]))?;
        transitions.insert((x, y), t);
    }
    PosetDiagram::new(poset.clone(), stalks, transitions)
}

/// Sphere adjunction suite over P_n: decomposition homology, unit/counit
/// rank checks, the twist-as-shift check, and both adjunction conditions on
/// the constant diagram and on seeded random diagrams.
pub fn run_sphere(n: usize, p: u64, dims: (usize, usize), trials: u32, seed: u64) -> Result<Report> {
    let scenario = Scenario::Sphere { n, p, dims, trials, seed };
    let field = PrimeField::new(p)?;
    let poset = sphere_poset(n)?;
    if dims.0 > dims.1 || dims.1 == 0 {
        return Err(Error::Dimension(format!("invalid dims range {}..{}", dims.0, dims.1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let k = ChainComplex::unit(field);
    let const_k = PosetDiagram::constant(&poset, &k);
    let hc = hocolim(&const_k)?;
    let hl = holim(&const_k)?;
    let expect_hc = merged(&k.homology(), &shifted(&k.homology(), n as i64));
    let expect_hl = merged(&k.homology(), &shifted(&k.homology(), -(n as i64)));
    checks.push(Check::new(
        "decomposition-constant-k",
        hc.homology() == expect_hc && hl.homology() == expect_hl,
        json!({ "hocolim": homology_json(&hc.homology()), "holim": homology_json(&hl.homology()) }),
    ));
    checks.push(Check::new(
        "conditions-constant-k",
        check_24_condition1(&const_k)?.holds && check_24_condition2(&const_k)?.holds,
        json!({}),
    ));

    for trial in 0..trials {
        let v = random_complex(field, &mut rng, dims.0, dims.1);
        let hv = v.homology();
        let const_v = PosetDiagram::constant(&poset, &v);
        let hc = hocolim(&const_v)?;
        let hl = holim(&const_v)?;
        let dec_ok = hc.homology() == merged(&hv, &shifted(&hv, n as i64))
            && hl.homology() == merged(&hv, &shifted(&hv, -(n as i64)));
        checks.push(Check::new(
            format!("decomposition-trial-{trial}"),
            dec_ok,
            json!({
                "dims": v.dims().iter().map(|(&d, &m)| (d.to_string(), m)).collect::<BTreeMap<_,_>>(),
                "hocolim": homology_json(&hc.homology()),
                "holim": homology_json(&hl.homology()),
            }),
        ));

        // counit and unit hit/split off the identity summand of the
        // decomposition: full homological rank in every degree
        let cu = counit_map(&poset, &v)?;
        let u = unit_map(&v, &poset)?;
        let rank_ok = hv.iter().all(|(&d, &hdim)| {
            cu.induced_homology_rank(d) == hdim && u.induced_homology_rank(d) == hdim
        });
        let ranks: BTreeMap<String, (usize, usize)> = hv
            .keys()
            .map(|&d| (d.to_string(), (cu.induced_homology_rank(d), u.induced_homology_rank(d))))
            .collect();
        checks.push(Check::new(
            format!("counit-unit-ranks-trial-{trial}"),
            rank_ok,
            json!({ "ranks": ranks }),
        ));

        let tw = sphere_twist(&v, n)?;
        checks.push(Check::new(
            format!("twist-shift-trial-{trial}"),
            tw.homology() == shifted(&hv, -(n as i64)),
            json!({ "twist": homology_json(&tw.homology()) }),
        ));

        let d = random_diagram(&poset, field, &mut rng, 1, 2)?;
        let c1 = check_24_condition1(&d)?;
        let c2 = check_24_condition2(&d)?;
        checks.push(Check::new(
            format!("conditions-trial-{trial}"),
            c1.holds && c2.holds,
            json!({ "condition1": c1.holds, "condition2": c2.holds }),
        ));
    }
    Ok(Report::assemble(scenario, checks))
}

/// Compare the sphere twist against tensoring with ζ = cone(1 → g_* g^* 1)
/// on homology, for the unit object, the zero complex, and random complexes.
pub fn run_twist_zeta(
    n: usize,
    p: u64,
    dims: (usize, usize),
    trials: u32,
    seed: u64,
) -> Result<Report> {
    let scenario = Scenario::TwistZeta { n, p, dims, trials, seed };
    let field = PrimeField::new(p)?;
    let poset = sphere_poset(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = ChainComplex::unit(field);
    let zeta = cone(&unit_map(&k, &poset)?).complex;
    let mut checks = Vec::new();
    checks.push(Check::new(
        "zeta-homology",
        zeta.homology() == BTreeMap::from([(-(n as i64), 1)]),
        json!({ "zeta": homology_json(&zeta.homology()) }),
    ));
    checks.push(Check::new(
        "zero-complex",
        sphere_twist(&ChainComplex::zero(field), n)?.is_acyclic(),
        json!({}),
    ));
    for trial in 0..trials {
        let v = random_complex(field, &mut rng, dims.0.max(1), dims.1.max(1));
        let lhs = sphere_twist(&v, n)?.homology();
        let rhs = v.tensor(&zeta)?.homology();
        checks.push(Check::new(
            format!("twist-vs-zeta-trial-{trial}"),
            lhs == rhs,
            json!({ "twist": homology_json(&lhs), "tensor-zeta": homology_json(&rhs) }),
        ));
    }
    Ok(Report::assemble(scenario, checks))
}

/// The counterexample pair: the product algebra and the dual numbers share
/// their twist, unit and section data entry-exactly, yet are separated by
/// idempotent counts and the brute-force isomorphism search.
pub fn run_counterexample(p: u64) -> Result<Report> {
    let scenario = Scenario::Counterexample { p };
    let field = PrimeField::new(p)?;
    let product2 = preset("product2", field)?;
    let dual = preset("dual-numbers", field)?;
    let m1 = MonadPresentation::new(product2.clone());
    let m2 = MonadPresentation::new(dual.clone());
    let mut checks = Vec::new();

    let v1 = spherical_verdict(&m1)?;
    let v2 = spherical_verdict(&m2)?;
    checks.push(Check::new(
        "both-spherical",
        v1.spherical && v2.spherical,
        json!({ "product2": v1.spherical, "dual-numbers": v2.spherical }),
    ));

    let t1 = &v1.twist;
    let t2 = &v2.twist;
    let section_range: Vec<i64> = t1.section.source().support();
    let sections_equal = t1.section.source() == t2.section.source()
        && section_range.iter().all(|&i| t1.section.component(i) == t2.section.component(i));
    checks.push(Check::new(
        "twist-data-entry-identical",
        t1.complex == t2.complex && t1.unit_matrix == t2.unit_matrix && sections_equal,
        json!({
            "unit": matrix_json(&t1.unit_matrix),
            "section-deg0": matrix_json(&t1.section.component(0)),
        }),
    ));

    // Multiplication matrices of the documented presentations: k[y]/(y^2-1)
    // in basis {1, y} and the dual numbers in basis {1, eps}.
    let ky = GradedAlgebra::new(
        field,
        vec!["1".into(), "y".into()],
        vec![0, 0],
        vec![1, 0],
        vec![1, 0, 0, 1, 0, 1, 1, 0],
    )?;
    let expect_ky = Matrix::from_rows(field, &[vec![1, 0, 0, 1], vec![0, 1, 1, 0]])?;
    let expect_dual = Matrix::from_rows(field, &[vec![1, 0, 0, 0], vec![0, 1, 1, 0]])?;
    checks.push(Check::new(
        "multiplication-matrices",
        ky.multiplication_matrix() == expect_ky && dual.multiplication_matrix() == expect_dual,
        json!({
            "k[y]/(y^2-1)": matrix_json(&ky.multiplication_matrix()),
            "dual-numbers": matrix_json(&dual.multiplication_matrix()),
        }),
    ));

    let c1 = count_idempotents(&product2)?;
    let c2 = count_idempotents(&dual)?;
    let counts_ok = if p == 2 { c1 == 4 && c2 == 2 } else { c1 != c2 };
    checks.push(Check::new(
        "idempotent-counts-differ",
        counts_ok,
        json!({ "product2": c1, "dual-numbers": c2 }),
    ));

    checks.push(Check::new(
        "not-isomorphic",
        !brute_force_isomorphic(&product2, &dual)?,
        json!({}),
    ));
    Ok(Report::assemble(scenario, checks))
}

/// Monad suite: validation outcome, twist homology, and the sphericalness
/// verdict with diagnostics. A failed validation yields a failing report
/// rather than an error.
pub fn run_monad(construction: Result<GradedAlgebra>, label: &str, p: u64) -> Result<Report> {
    let scenario = Scenario::Monad { source: label.to_string(), p };
    let algebra = match construction {
        Ok(a) => a,
        Err(Error::Algebra(violations)) => {
            let checks = vec![Check::new(
                "validation",
                false,
                json!({ "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>() }),
            )];
            return Ok(Report::assemble(scenario, checks));
        }
        Err(e) => return Err(e),
    };
    let m = MonadPresentation::new(algebra);
    let verdict = spherical_verdict(&m)?;
    let checks = vec![
        Check::new("validation", true, json!({ "dim": m.algebra().dim() })),
        Check::new(
            "twist",
            true,
            json!({ "homology": homology_json(&verdict.twist.complex.homology()) }),
        ),
        Check::new(
            "verdict",
            true,
            json!({
                "spherical": verdict.spherical,
                "invertible": verdict.invertible,
                "commutation": verdict.commutation.is_some(),
                "diagnostics": verdict.diagnostics,
            }),
        ),
    ];
    Ok(Report::assemble(scenario, checks))
}

/// Whether the monad report's verdict says "spherical" (used by the CLI's
/// `--expect` flag).
pub fn monad_verdict_spherical(report: &Report) -> Option<bool> {
    report
        .checks
        .iter()
        .find(|c| c.name == "verdict")
        .and_then(|c| c.witnesses.get("spherical"))
        .and_then(|v| v.as_bool())
}
