//! JSON input formats.
//!
//! Every parser first decodes a plain structural form, so malformed text
//! yields [`Error::Parse`], and then builds the value through its validating
//! constructor, so well-formed but invalid content yields the constructor's
//! own error (dimension, contract, ...).
//!
//! Numbers may be JSON integers or strings; rationals are strings `"p/q"`.
//!
//! | input     | shape |
//! |-----------|-------|
//! | matrix    | `[[2, 1], [1, 1]]` |
//! | vector    | `[1, 0]` |
//! | point     | `["1/3", "0"]` |
//! | polynomial| coefficients, constant term first: `[1, -3, 1]` |
//! | measure   | `{"variant": "lebesgue", "n": 2}` or `{"variant": "atomic", "n": 1, "atoms": [{"point": ["1/3"], "weight": "1/2"}, ...]}` |
//! | family    | `{"n": 2, "members": [A, B]}` or `[A, B]` |
//! | pairs     | `[{"k": [1, 0], "l": [0, 0]}, ...]` |
//! | folner    | `{"kind": "interval"}`, `{"kind": "shifted", "offset": 3, "step": 2}`, `{"kind": "custom", "sets": [[0], [0, 1], ...]}` |
//! | subset    | `{"kind": "all"}`, `{"kind": "explicit", "elements": [..]}`, `{"kind": "progression", "start": 0, "step": 2}` |

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::algebraic::RatPolynomial;
use crate::error::{dim_err, Error, Result};
use crate::independence::MatrixFamily;
use crate::linalg::{IntMatrix, IntRowVector};
use crate::literal::{IntLit, RatLit};
use crate::measures::{Atom, AtomicMeasure, FolnerSequence, IntegerSubset, MeasureSpec, TorusPointQ};
use crate::mixing::FrequencyPair;

fn decode<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

type RawMatrix = Vec<Vec<IntLit>>;

fn build_matrix(raw: RawMatrix) -> Result<IntMatrix> {
    let rows: Vec<Vec<_>> = raw.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
    IntMatrix::from_rows(&rows)
}

fn build_vector(raw: Vec<IntLit>) -> Result<IntRowVector> {
    IntRowVector::new(raw.into_iter().map(|x| x.0).collect())
}

fn build_point(raw: Vec<RatLit>) -> Result<TorusPointQ> {
    TorusPointQ::new(raw.into_iter().map(|x| x.0).collect())
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    build_matrix(decode(text, "matrix")?)
}

pub fn parse_vector(text: &str) -> Result<IntRowVector> {
    build_vector(decode(text, "vector")?)
}

pub fn parse_point(text: &str) -> Result<TorusPointQ> {
    build_point(decode(text, "point")?)
}

pub fn parse_polynomial(text: &str) -> Result<RatPolynomial> {
    let raw: Vec<RatLit> = decode(text, "polynomial")?;
    Ok(RatPolynomial::new(raw.into_iter().map(|x| x.0).collect()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    point: Vec<RatLit>,
    weight: RatLit,
}

#[derive(Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
enum RawMeasure {
    Lebesgue { n: usize },
    Atomic { n: usize, atoms: Vec<RawAtom> },
}

pub fn parse_measure(text: &str) -> Result<MeasureSpec> {
    match decode(text, "measure")? {
        RawMeasure::Lebesgue { n } => MeasureSpec::lebesgue(n),
        RawMeasure::Atomic { n, atoms } => {
            let atoms = atoms
                .into_iter()
                .map(|a| Ok(Atom { point: build_point(a.point)?, weight: a.weight.0 }))
                .collect::<Result<Vec<_>>>()?;
            let m = AtomicMeasure::new(atoms)?;
            if m.n() != n {
                return dim_err(format!("n = {n} but atoms have dimension {}", m.n()));
            }
            Ok(MeasureSpec::Atomic(m))
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawFamily {
    Tagged { n: usize, members: Vec<RawMatrix> },
    Bare(Vec<RawMatrix>),
}

pub fn parse_family(text: &str) -> Result<MatrixFamily> {
    let (n, members) = match decode(text, "family")? {
        RawFamily::Tagged { n, members } => (Some(n), members),
        RawFamily::Bare(members) => (None, members),
    };
    if let Some(n) = n.filter(|&n| n != members.len()) {
        return dim_err(format!("n = {n} but {} members given", members.len()));
    }
    MatrixFamily::new(members.into_iter().map(build_matrix).collect::<Result<_>>()?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    k: Vec<IntLit>,
    l: Vec<IntLit>,
}

pub fn parse_pairs(text: &str) -> Result<Vec<FrequencyPair>> {
    let raw: Vec<RawPair> = decode(text, "pairs")?;
    raw.into_iter()
        .map(|p| Ok(FrequencyPair { k: build_vector(p.k)?, l: build_vector(p.l)? }))
        .collect()
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawFolner {
    Interval,
    Shifted {
        #[serde(default)]
        offset: u64,
        #[serde(default)]
        step: Option<u64>,
    },
    Custom { sets: Vec<Vec<u64>> },
}

pub fn parse_folner(text: &str) -> Result<FolnerSequence> {
    match decode(text, "folner")? {
        RawFolner::Interval => Ok(FolnerSequence::Interval),
        RawFolner::Shifted { offset, step } => Ok(FolnerSequence::Shifted { offset, step: step.unwrap_or(1) }),
        RawFolner::Custom { sets } => FolnerSequence::custom(sets),
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawSubset {
    All,
    Explicit { elements: Vec<u64> },
    Progression { start: u64, step: u64 },
}

pub fn parse_subset(text: &str) -> Result<IntegerSubset> {
    match decode(text, "subset")? {
        RawSubset::All => Ok(IntegerSubset::All),
        RawSubset::Explicit { elements } => Ok(IntegerSubset::explicit(elements)),
        RawSubset::Progression { start, step } => IntegerSubset::progression(start, step),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_and_vectors() {
        let m = parse_matrix(r#"[[2, "1"], [1, 1]]"#).unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap());
        assert!(parse_matrix("[[1, 2], [3]]").is_err_and(|e| !e.is_parse()));
        assert!(parse_matrix("[[1, 2], [3, x]]").is_err_and(|e| e.is_parse()));
        assert!(parse_matrix(r#"[["1/2"]]"#).is_err_and(|e| e.is_parse()));
        assert_eq!(parse_vector("[1, -2]").unwrap(), IntRowVector::from_i64(&[1, -2]));
        assert_eq!(parse_point(r#"["4/3", -1]"#).unwrap(), TorusPointQ::from_i64(&[(1, 3), (0, 1)]));
        assert_eq!(parse_polynomial(r#"[1, "-3", 1]"#).unwrap(), RatPolynomial::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn measures() {
        assert_eq!(parse_measure(r#"{"variant": "lebesgue", "n": 2}"#).unwrap(), MeasureSpec::lebesgue(2).unwrap());
        let m = parse_measure(
            r#"{"variant": "atomic", "n": 1, "atoms": [{"point": ["1/3"], "weight": "1/2"}, {"point": ["2/3"], "weight": "1/2"}]}"#,
        )
        .unwrap();
        assert_eq!(m.as_atomic().unwrap().atoms().len(), 2);
        let bad_weights = r#"{"variant": "atomic", "n": 1, "atoms": [{"point": ["1/3"], "weight": "1/3"}]}"#;
        assert!(parse_measure(bad_weights).is_err_and(|e| !e.is_parse()));
        assert!(parse_measure(r#"{"variant": "lebesgue", "n": 0}"#).is_err_and(|e| !e.is_parse()));
        assert!(parse_measure(r#"{"variant": "haar", "n": 2}"#).is_err_and(|e| e.is_parse()));
        let round = serde_json::to_string(&m).unwrap();
        assert_eq!(parse_measure(&round).unwrap(), m);
    }

    #[test]
    fn families_pairs_folner_subsets() {
        let f = parse_family(r#"[[[2, 1], [1, 1]], [[5, 3], [3, 2]]]"#).unwrap();
        assert_eq!(f.n(), 2);
        let tagged = serde_json::to_string(&f).unwrap();
        assert_eq!(parse_family(&tagged).unwrap(), f);
        assert!(parse_family(r#"[[[2, 0], [0, 1]], [[1, 0], [0, 1]]]"#).is_err_and(|e| !e.is_parse()));
        assert!(parse_family(r#"{"n": 3, "members": [[[1]]]}"#).is_err_and(|e| !e.is_parse()));

        let p = parse_pairs(r#"[{"k": [1, 0], "l": [0, "-1"]}]"#).unwrap();
        assert_eq!(p, vec![FrequencyPair::new(&[1, 0], &[0, -1])]);
        assert!(parse_pairs("[]").unwrap().is_empty());
        assert!(parse_pairs(r#"[{"k": [1]}]"#).is_err_and(|e| e.is_parse()));

        assert_eq!(parse_folner(r#"{"kind": "interval"}"#).unwrap(), FolnerSequence::Interval);
        assert_eq!(
            parse_folner(r#"{"kind": "shifted", "offset": 3}"#).unwrap(),
            FolnerSequence::Shifted { offset: 3, step: 1 }
        );
        assert!(parse_folner(r#"{"kind": "custom", "sets": [[]]}"#).is_err_and(|e| !e.is_parse()));

        assert_eq!(parse_subset(r#"{"kind": "all"}"#).unwrap(), IntegerSubset::All);
        assert!(parse_subset(r#"{"kind": "progression", "start": 0, "step": 0}"#).is_err_and(|e| !e.is_parse()));
        assert_eq!(
            parse_subset(r#"{"kind": "explicit", "elements": [3, 1, 3]}"#).unwrap(),
            IntegerSubset::explicit(vec![1, 3])
        );
    }
}
