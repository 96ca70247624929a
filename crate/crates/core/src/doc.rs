//! JSON document formats: chain complexes, graded algebras, poset diagrams
//! (inputs) and reports (outputs). All matrices are explicit integer arrays;
//! every loaded object passes through the same validating constructors as
//! programmatically built ones.

use crate::algebra::GradedAlgebra;
use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PrimeField};
use crate::poset::{sphere_poset, FinitePoset, PosetDiagram};
use crate::verifier::{Check, Report, Scenario};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const FORMAT_VERSION: u32 = 1;

/// A matrix at a fixed degree, rows as signed integer arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDocument {
    pub degree: i64,
    pub matrix: Vec<Vec<i64>>,
}

/// Chain complex document: parallel `degrees`/`dims` arrays plus the nonzero
/// differentials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub p: u64,
    pub degrees: Vec<i64>,
    pub dims: Vec<usize>,
    pub differentials: Vec<ComponentDocument>,
}

fn matrix_from_doc(field: PrimeField, rows: &[Vec<i64>], want_rows: usize, want_cols: usize) -> Result<Matrix> {
    if rows.len() != want_rows || rows.iter().any(|r| r.len() != want_cols) {
        return Err(Error::Document(format!(
            "matrix must be {want_rows}x{want_cols}"
        )));
    }
    Matrix::from_rows(field, rows)
}

fn matrix_to_doc(m: &Matrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j) as i64).collect())
        .collect()
}

pub fn complex_to_doc(c: &ChainComplex) -> ComplexDocument {
    let degrees: Vec<i64> = c.support();
    ComplexDocument {
        p: c.field().modulus(),
        dims: degrees.iter().map(|&d| c.dim(d)).collect(),
        differentials: degrees
            .iter()
            .filter(|&&d| !c.differential(d).is_zero())
            .map(|&d| ComponentDocument { degree: d, matrix: matrix_to_doc(&c.differential(d)) })
            .collect(),
        degrees,
    }
}

pub fn complex_from_doc(doc: &ComplexDocument) -> Result<ChainComplex> {
    let field = PrimeField::new(doc.p)?;
    if doc.degrees.len() != doc.dims.len() {
        return Err(Error::Document("degrees and dims must be parallel arrays".into()));
    }
    let dims: BTreeMap<i64, usize> =
        doc.degrees.iter().copied().zip(doc.dims.iter().copied()).collect();
    if dims.len() != doc.degrees.len() {
        return Err(Error::Document("duplicate degree in complex document".into()));
    }
    let mut diff = BTreeMap::new();
    for d in &doc.differentials {
        let rows = dims.get(&(d.degree - 1)).copied().unwrap_or(0);
        let cols = dims.get(&d.degree).copied().unwrap_or(0);
        diff.insert(d.degree, matrix_from_doc(field, &d.matrix, rows, cols)?);
    }
    ChainComplex::new(field, dims, diff)
}

/// Algebra document: labeled graded basis, unit coordinates, and the
/// triple-indexed structure constants `mult[i][j][k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub p: u64,
    pub basis: Vec<BasisVectorDocument>,
    pub unit: Vec<i64>,
    pub mult: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisVectorDocument {
    pub label: String,
    pub degree: i64,
}

pub fn algebra_to_doc(a: &GradedAlgebra) -> AlgebraDocument {
    let dim = a.dim();
    let m = a.multiplication_matrix();
    AlgebraDocument {
        p: a.field().modulus(),
        basis: a
            .labels()
            .iter()
            .zip(a.degrees())
            .map(|(l, &d)| BasisVectorDocument { label: l.clone(), degree: d })
            .collect(),
        unit: a.unit_coordinates().iter().map(|&u| u as i64).collect(),
        mult: (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| (0..dim).map(|k| m.get(k, i * dim + j) as i64).collect())
                    .collect()
            })
            .collect(),
    }
}

pub fn algebra_from_doc(doc: &AlgebraDocument) -> Result<GradedAlgebra> {
    let field = PrimeField::new(doc.p)?;
    let dim = doc.basis.len();
    if doc.mult.len() != dim
        || doc.mult.iter().any(|m| m.len() != dim || m.iter().any(|r| r.len() != dim))
    {
        return Err(Error::Document(format!("mult must be a {dim}x{dim}x{dim} array")));
    }
    let mut constants = vec![0i64; dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                constants[(i * dim + j) * dim + k] = doc.mult[i][j][k];
            }
        }
    }
    GradedAlgebra::new(
        field,
        doc.basis.iter().map(|b| b.label.clone()).collect(),
        doc.basis.iter().map(|b| b.degree).collect(),
        doc.unit.clone(),
        constants,
    )
}

/// Base poset of a diagram document: a named sphere poset or an explicit
/// labeled cover relation (the order is its reflexive-transitive closure).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PosetDocument {
    Named(String),
    Explicit { elements: Vec<u32>, covers: Vec<(u32, u32)> },
}

pub fn poset_from_doc(doc: &PosetDocument) -> Result<FinitePoset> {
    match doc {
        PosetDocument::Named(name) => {
            let n: usize = name
                .strip_prefix("P_")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Document(format!("unknown poset name {name}")))?;
            sphere_poset(n)
        }
        PosetDocument::Explicit { elements, covers } => {
            let m = elements.len();
            let idx = |label: u32| -> Result<usize> {
                elements
                    .iter()
                    .position(|&l| l == label)
                    .ok_or_else(|| Error::Document(format!("unknown element label {label}")))
            };
            let mut leq = vec![false; m * m];
            for x in 0..m {
                leq[x * m + x] = true;
            }
            for &(a, b) in covers {
                leq[idx(a)? * m + idx(b)?] = true;
            }
            // transitive closure
            for k in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        if leq[i * m + k] && leq[k * m + j] {
                            leq[i * m + j] = true;
                        }
                    }
                }
            }
            FinitePoset::new(elements.clone(), leq)
        }
    }
}

/// Diagram document: stalk complexes per element and transition matrices per
/// cover. Transitions along longer relations are derived by composing along
/// cover paths and then re-validated for functoriality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub poset: PosetDocument,
    pub stalks: Vec<ComplexDocument>,
    pub transitions: Vec<TransitionDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDocument {
    pub from: u32,
    pub to: u32,
    pub maps: Vec<ComponentDocument>,
}

pub fn diagram_from_doc(doc: &DiagramDocument) -> Result<PosetDiagram> {
    let poset = poset_from_doc(&doc.poset)?;
    if doc.stalks.len() != poset.len() {
        return Err(Error::Document(format!(
            "expected {} stalks, got {}",
            poset.len(),
            doc.stalks.len()
        )));
    }
    let stalks: Vec<ChainComplex> =
        doc.stalks.iter().map(complex_from_doc).collect::<Result<_>>()?;
    if let Some(s) = stalks.iter().find(|s| s.field() != stalks[0].field()) {
        return Err(Error::ModulusMismatch(
            stalks[0].field().modulus(),
            s.field().modulus(),
        ));
    }

    let covers = poset.covers();
    let mut on_covers: BTreeMap<(usize, usize), ChainMap> = BTreeMap::new();
    for t in &doc.transitions {
        let from = poset
            .index_of_label(t.from)
            .ok_or_else(|| Error::Document(format!("unknown element label {}", t.from)))?;
        let to = poset
            .index_of_label(t.to)
            .ok_or_else(|| Error::Document(format!("unknown element label {}", t.to)))?;
        if !covers.contains(&(from, to)) {
            return Err(Error::Document(format!(
                "transition {} -> {} is not along a cover",
                t.from, t.to
            )));
        }
        let mut maps = BTreeMap::new();
        for c in &t.maps {
            maps.insert(
                c.degree,
                matrix_from_doc(
                    stalks[from].field(),
                    &c.matrix,
                    stalks[to].dim(c.degree),
                    stalks[from].dim(c.degree),
                )?,
            );
        }
        on_covers.insert((from, to), ChainMap::new(stalks[from].clone(), stalks[to].clone(), maps)?);
    }
    for &(x, y) in &covers {
        if !on_covers.contains_key(&(x, y)) {
            return Err(Error::Document(format!(
                "missing transition for cover {} -> {}",
                poset.label(x),
                poset.label(y)
            )));
        }
    }

    // derive composites along label-minimal cover paths; functoriality of
    // every alternative path is re-checked by the diagram constructor
    let mut transitions = on_covers.clone();
    let mut pairs = poset.strict_pairs();
    pairs.sort_by_key(|&(x, y)| {
        (0..poset.len()).filter(|&z| poset.leq(x, z) && poset.leq(z, y)).count()
    });
    for (x, y) in pairs {
        if transitions.contains_key(&(x, y)) {
            continue;
        }
        let mut mids: Vec<usize> = (0..poset.len())
            .filter(|&z| covers.contains(&(x, z)) && poset.leq(z, y))
            .collect();
        mids.sort_by_key(|&z| poset.label(z));
        let z = mids[0];
        let first = transitions[&(x, z)].clone();
        let rest = if z == y {
            unreachable!("(x, y) would be a cover")
        } else {
            transitions
                .get(&(z, y))
                .cloned()
                .ok_or_else(|| Error::Document("cover relation is not path-connected".into()))?
        };
        transitions.insert((x, y), rest.compose(&first)?);
    }
    PosetDiagram::new(poset, stalks, transitions)
}

/// On-disk report: format version, the report itself, the environment echo,
/// and wall-clock timing (the only field allowed to differ between runs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format_version: u32,
    pub scenario: Scenario,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub environment: EnvironmentDocument,
    pub timing_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvironmentDocument {
    pub p: u64,
    pub seed: Option<u64>,
    pub bounds: BoundsDocument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsDocument {
    pub sphere_dimension: usize,
    pub enumeration: u64,
}

pub fn report_document(report: &Report, timing_ms: u64) -> ReportDocument {
    let (p, seed) = match report.scenario {
        Scenario::Sphere { p, seed, .. } => (p, Some(seed)),
        Scenario::TwistZeta { p, seed, .. } => (p, Some(seed)),
        Scenario::Monad { p, .. } => (p, None),
        Scenario::Counterexample { p } => (p, None),
    };
    ReportDocument {
        format_version: FORMAT_VERSION,
        scenario: report.scenario.clone(),
        checks: report.checks.clone(),
        passed: report.passed,
        environment: EnvironmentDocument {
            p,
            seed,
            bounds: BoundsDocument {
                sphere_dimension: crate::poset::DEFAULT_SPHERE_BOUND,
                enumeration: crate::algebra::DEFAULT_ENUM_BOUND,
            },
        },
        timing_ms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::preset;
    use crate::verifier::run_counterexample;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn complex_round_trip() {
        let c = ChainComplex::new(
            f2(),
            BTreeMap::from([(1, 1), (0, 2)]),
            BTreeMap::from([(1, Matrix::from_rows(f2(), &[vec![1], vec![1]]).unwrap())]),
        )
        .unwrap();
        let doc = complex_to_doc(&c);
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: ComplexDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(complex_from_doc(&parsed).unwrap(), c);
    }

    #[test]
    fn complex_doc_rejects_bad_shapes_and_d_squared() {
        let mut doc = ComplexDocument {
            p: 2,
            degrees: vec![0, 1],
            dims: vec![1, 1],
            differentials: vec![ComponentDocument { degree: 1, matrix: vec![vec![1, 1]] }],
        };
        assert!(matches!(complex_from_doc(&doc), Err(Error::Document(_))));
        doc.degrees = vec![0, 1, 2];
        doc.dims = vec![1, 1, 1];
        doc.differentials = vec![
            ComponentDocument { degree: 1, matrix: vec![vec![1]] },
            ComponentDocument { degree: 2, matrix: vec![vec![1]] },
        ];
        assert!(matches!(complex_from_doc(&doc), Err(Error::InvalidComplex(_))));
        let np = ComplexDocument { p: 6, degrees: vec![], dims: vec![], differentials: vec![] };
        assert!(matches!(complex_from_doc(&np), Err(Error::NotPrime(6))));
    }

    #[test]
    fn algebra_round_trip_and_rejection() {
        let a = preset("dual-numbers", f2()).unwrap();
        let doc = algebra_to_doc(&a);
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let parsed: AlgebraDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(algebra_from_doc(&parsed).unwrap(), a);

        let mut bad = doc.clone();
        bad.mult[1][0][1] = 0; // eps * 1 = 0 breaks the right unit law
        assert!(matches!(algebra_from_doc(&bad), Err(Error::Algebra(_))));
    }

    #[test]
    fn named_and_explicit_posets() {
        let named = poset_from_doc(&PosetDocument::Named("P_1".into())).unwrap();
        assert_eq!(named.sphere_dimension(), Some(1));
        let explicit = poset_from_doc(&PosetDocument::Explicit {
            elements: vec![1, 2, 3],
            covers: vec![(1, 2), (2, 3)],
        })
        .unwrap();
        assert!(explicit.less(0, 2), "closure includes 1 < 3");
        // cyclic covers violate antisymmetry after closure
        assert!(poset_from_doc(&PosetDocument::Explicit {
            elements: vec![1, 2],
            covers: vec![(1, 2), (2, 1)],
        })
        .is_err());
        assert!(matches!(
            poset_from_doc(&PosetDocument::Named("Q_1".into())),
            Err(Error::Document(_))
        ));
    }

    fn point_doc(p: u64) -> ComplexDocument {
        ComplexDocument { p, degrees: vec![0], dims: vec![1], differentials: vec![] }
    }

    #[test]
    fn diagram_doc_loads_with_derived_composites() {
        // chain 1 < 2 < 3 with stalk k everywhere and identity transitions
        let ident = |from: u32, to: u32| TransitionDocument {
            from,
            to,
            maps: vec![ComponentDocument { degree: 0, matrix: vec![vec![1]] }],
        };
        let doc = DiagramDocument {
            poset: PosetDocument::Explicit {
                elements: vec![1, 2, 3],
                covers: vec![(1, 2), (2, 3)],
            },
            stalks: vec![point_doc(2), point_doc(2), point_doc(2)],
            transitions: vec![ident(1, 2), ident(2, 3)],
        };
        let d = diagram_from_doc(&doc).unwrap();
        // the composite 1 -> 3 was derived
        assert_eq!(d.transition(0, 2).component(0), Matrix::identity(f2(), 1));
    }

    #[test]
    fn diagram_doc_on_sphere_poset() {
        let ident = |from: u32, to: u32| TransitionDocument {
            from,
            to,
            maps: vec![ComponentDocument { degree: 0, matrix: vec![vec![1]] }],
        };
        let doc = DiagramDocument {
            poset: PosetDocument::Named("P_1".into()),
            stalks: vec![point_doc(3); 4],
            transitions: vec![ident(1, 3), ident(1, 4), ident(2, 3), ident(2, 4)],
        };
        let d = diagram_from_doc(&doc).unwrap();
        assert_eq!(d.poset().sphere_dimension(), Some(1));
    }

    #[test]
    fn diagram_doc_rejects_missing_or_stray_transitions() {
        let ident = |from: u32, to: u32| TransitionDocument {
            from,
            to,
            maps: vec![ComponentDocument { degree: 0, matrix: vec![vec![1]] }],
        };
        let doc = DiagramDocument {
            poset: PosetDocument::Named("P_0".into()),
            stalks: vec![point_doc(2), point_doc(2)],
            transitions: vec![ident(1, 2)],
        };
        // P_0 has no covers at all
        assert!(matches!(diagram_from_doc(&doc), Err(Error::Document(_))));
    }

    #[test]
    fn report_document_round_trip_and_stability() {
        let report = run_counterexample(2).unwrap();
        let d1 = report_document(&report, 17);
        let d2 = report_document(&report, 99);
        let j1 = serde_json::to_string_pretty(&d1).unwrap();
        let parsed: ReportDocument = serde_json::from_str(&j1).unwrap();
        assert_eq!(parsed, d1);
        // identical modulo the timing field
        let mut d2_nt = d2.clone();
        d2_nt.timing_ms = d1.timing_ms;
        assert_eq!(d1, d2_nt);
        assert_eq!(d1.environment.p, 2);
    }
}
