//! Spectrality decisions from the defining sequences.
//!
//! * `p_k ≡ 1`: spectral iff the 2-adic values `s_k` are pairwise distinct.
//! * every `p_k` even: spectral iff `n_2 | 2b_2` and `n_k | b_k` for `k >= 3`.
//! * otherwise: spectral if additionally `2 | b_2`; no verdict when that fails.

mod bernoulli;
mod decompose;
mod guards;
mod necessity;

pub use bernoulli::{bernoulli_distinct, bernoulli_s, Distinctness, SValue};
pub use decompose::{decompose_spectrum, Decomposition};
pub use guards::{
    characterization_conditions, check_range, even_b_necessity, sufficient_conditions, triple_guards,
    Divisibility, EvenScales,
};
pub use necessity::{
    default_modulus, divisibility_extraction, necessity_chain, tail_difference_gcd, Consequence, Implication,
};

use serde::Serialize;

use crate::moran::ParamSeq;
use crate::numtheory::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralityError {
    #[error("the s-values are only defined when every p_k = 1")]
    NotBernoulli,
    #[error("indices start at 1")]
    IndexZero,
    #[error("{d} scale ratios but {gamma} digit counts")]
    LengthMismatch { d: usize, gamma: usize },
    #[error("ratio {index} is not in lowest terms with positive denominator")]
    NotReduced { index: usize },
    #[error("digit count {index} is below 2")]
    GammaTooSmall { index: usize },
    #[error("scale must be nonzero")]
    ZeroScale,
    #[error("modulus {c} is not a positive multiple of {gamma}")]
    ModulusNotMultiple { c: u64, gamma: u64 },
    #[error("expected {expected} choices, got {got}")]
    ChoiceCount { expected: u64, got: usize },
    #[error("choice j_{i} = {j} is not below {gamma}")]
    ChoiceOutOfRange { i: usize, j: u64, gamma: u64 },
    #[error("{0} / d_1 is not in (1/c)Z")]
    NotInLattice(Rational),
    #[error("the spectrum must contain 0")]
    ZeroNotInSpectrum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Spectral,
    NotSpectral,
    Unknown,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Spectral => "SPECTRAL",
            Status::NotSpectral => "NOT_SPECTRAL",
            Status::Unknown => "UNKNOWN",
        }
    }

    /// 0, 1 and 3 for spectral, not spectral and unknown.
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Spectral => 0,
            Status::NotSpectral => 1,
            Status::Unknown => 3,
        }
    }
}

/// The criterion that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Distinct `s_k` for `p_k ≡ 1`.
    BernoulliValuations,
    /// The divisibility characterization for even `p_k`.
    DivisibilityCharacterization,
    /// The divisibility sufficient condition.
    DivisibilitySufficient,
    /// Odd `b_k`, `k >= 2`, with even `p_k`.
    EvenScaleNecessity,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::BernoulliValuations => "bernoulli-valuations",
            Rule::DivisibilityCharacterization => "divisibility-characterization",
            Rule::DivisibilitySufficient => "divisibility-sufficient",
            Rule::EvenScaleNecessity => "even-scale-necessity",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Rule::BernoulliValuations => {
                "p_k = 1 for all k: spectral iff s_k = v2(b_1...b_{k+1}/(b_{k+1}-1)) are pairwise distinct"
            }
            Rule::DivisibilityCharacterization => {
                "all p_k even: spectral iff n_2 | 2b_2 and n_k | b_k for all k >= 3"
            }
            Rule::DivisibilitySufficient => "spectral if 2 | b_2, n_2 | 2b_2 and n_k | b_k for all k >= 3",
            Rule::EvenScaleNecessity => "all p_k even and spectral forces 2 | b_k for all k >= 2",
        }
    }
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    SValues(Distinctness),
    /// Conditions checked; failures first.
    Divisibility(Vec<Divisibility>),
    OddScale { k: usize, b: u64 },
    /// Sufficient conditions that failed.
    FailedGuards(Vec<Divisibility>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub rule: Option<Rule>,
    pub witness: Option<Witness>,
    /// Failed consequences of the necessity chain, when it applies.
    pub necessity: Vec<Implication>,
}

fn failures(conds: Vec<Divisibility>) -> Vec<Divisibility> {
    conds.into_iter().filter(|d| !d.holds()).collect()
}

fn failed_chain(params: &ParamSeq) -> Vec<Implication> {
    necessity_chain(params)
        .map(|c| c.into_iter().filter(|x| !x.holds).collect())
        .unwrap_or_default()
}

/// Decides spectrality where an arithmetic criterion is available.
pub fn decide(params: &ParamSeq) -> Verdict {
    if params.is_bernoulli() {
        let d = bernoulli_distinct(params).expect("bernoulli regime");
        return Verdict {
            status: if d.distinct { Status::Spectral } else { Status::NotSpectral },
            rule: Some(Rule::BernoulliValuations),
            witness: Some(Witness::SValues(d)),
            necessity: vec![],
        };
    }
    if params.all_p_even() {
        if let Some((k, b)) = even_b_necessity(params).witness {
            return Verdict {
                status: Status::NotSpectral,
                rule: Some(Rule::EvenScaleNecessity),
                witness: Some(Witness::OddScale { k, b }),
                necessity: failed_chain(params),
            };
        }
        let conds = characterization_conditions(params);
        let failed = failures(conds.clone());
        return if failed.is_empty() {
            Verdict {
                status: Status::Spectral,
                rule: Some(Rule::DivisibilityCharacterization),
                witness: Some(Witness::Divisibility(conds)),
                necessity: vec![],
            }
        } else {
            Verdict {
                status: Status::NotSpectral,
                rule: Some(Rule::DivisibilityCharacterization),
                witness: Some(Witness::Divisibility(failed)),
                necessity: failed_chain(params),
            }
        };
    }
    let conds = sufficient_conditions(params);
    let failed = failures(conds.clone());
    if failed.is_empty() {
        Verdict {
            status: Status::Spectral,
            rule: Some(Rule::DivisibilitySufficient),
            witness: Some(Witness::Divisibility(conds)),
            necessity: vec![],
        }
    } else {
        Verdict {
            status: Status::Unknown,
            rule: None,
            witness: Some(Witness::FailedGuards(failed)),
            necessity: vec![],
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule_description: Option<&'a str>,
    params: ReportParams<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<ReportWitness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    necessity: Vec<String>,
}

#[derive(Serialize)]
struct ReportParams<'a> {
    b_prefix: &'a [u64],
    b_period: &'a [u64],
    p_prefix: &'a [u64],
    p_period: &'a [u64],
}

#[derive(Serialize)]
struct ReportWitness {
    kind: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    s_indices: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    s_values: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    collision: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    conditions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    odd_scale_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    odd_scale_value: Option<u64>,
}

impl ReportWitness {
    fn empty(kind: &'static str) -> Self {
        ReportWitness {
            kind,
            s_indices: vec![],
            s_values: vec![],
            collision: None,
            conditions: vec![],
            odd_scale_index: None,
            odd_scale_value: None,
        }
    }
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// The first divisibility failure, when there is one.
    pub fn divisibility_witness(&self) -> Option<String> {
        match &self.witness {
            Some(Witness::Divisibility(d)) | Some(Witness::FailedGuards(d)) => {
                d.iter().find(|x| !x.holds()).map(ToString::to_string)
            }
            Some(Witness::OddScale { k, b }) => Some(format!("2 ∤ b_{k}={b}")),
            _ => None,
        }
    }

    /// Deterministic TOML report.
    pub fn report(&self, params: &ParamSeq) -> String {
        let witness = self.witness.as_ref().map(|w| match w {
            Witness::SValues(d) => ReportWitness {
                s_indices: d.values.iter().map(|v| v.k).collect(),
                s_values: d.values.iter().map(|v| v.value).collect(),
                collision: d.collision.map(|(i, j)| [i, j]),
                ..ReportWitness::empty("s-values")
            },
            Witness::Divisibility(ds) => ReportWitness {
                conditions: ds.iter().map(ToString::to_string).collect(),
                ..ReportWitness::empty("divisibility")
            },
            Witness::FailedGuards(ds) => ReportWitness {
                conditions: ds.iter().map(ToString::to_string).collect(),
                ..ReportWitness::empty("failed-guards")
            },
            Witness::OddScale { k, b } => ReportWitness {
                odd_scale_index: Some(*k),
                odd_scale_value: Some(*b),
                ..ReportWitness::empty("odd-scale")
            },
        });
        let report = Report {
            status: self.status.as_str(),
            rule: self.rule.map(|r| r.tag()),
            rule_description: self.rule.map(|r| r.description()),
            params: ReportParams {
                b_prefix: params.b_prefix(),
                b_period: params.b_period(),
                p_prefix: params.p_prefix(),
                p_period: params.p_period(),
            },
            witness,
            necessity: self.necessity.iter().map(ToString::to_string).collect(),
        };
        toml::to_string(&report).expect("report fields are plain data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_verdicts() {
        let s = ParamSeq::with_b(vec![8, 8, 7], vec![8], 1).unwrap();
        let v = decide(&s);
        assert_eq!(v.status, Status::Spectral);
        assert_eq!(v.rule, Some(Rule::BernoulliValuations));
        let r = v.report(&s);
        assert!(r.contains("s_values = [6, 5, 9, 12]"), "{r}");

        let s = ParamSeq::with_b(vec![8, 8, 6], vec![8], 2).unwrap();
        let v = decide(&s);
        assert_eq!(v.status, Status::NotSpectral);
        assert_eq!(v.rule, Some(Rule::DivisibilityCharacterization));
        assert_eq!(v.divisibility_witness().as_deref(), Some("n_3=4 ∤ b_3=6"));
        assert!(!v.necessity.is_empty());

        let s = ParamSeq::constant(9, 3).unwrap();
        let v = decide(&s);
        assert_eq!(v.status, Status::Unknown);
        assert_eq!(v.rule, None);
        match &v.witness {
            Some(Witness::FailedGuards(g)) => {
                let names: Vec<String> = g.iter().map(ToString::to_string).collect();
                assert!(names.contains(&"2 ∤ b_2=9".to_string()), "{names:?}");
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(v.exit_code(), 3);

        assert_eq!(decide(&ParamSeq::constant(8, 2).unwrap()).status, Status::Spectral);
        let odd = ParamSeq::with_b(vec![8, 7], vec![8], 2).unwrap();
        let v = decide(&odd);
        assert_eq!((v.status, v.rule), (Status::NotSpectral, Some(Rule::EvenScaleNecessity)));
        assert_eq!(v.witness, Some(Witness::OddScale { k: 2, b: 7 }));
    }

    #[test]
    fn mixed_regime_sufficient() {
        let s = ParamSeq::new(vec![], vec![12], vec![], vec![3, 1]).unwrap();
        let v = decide(&s);
        assert_eq!((v.status, v.rule), (Status::Spectral, Some(Rule::DivisibilitySufficient)));
    }

    #[test]
    fn report_is_stable() {
        let s = ParamSeq::with_b(vec![8, 8, 6], vec![8], 2).unwrap();
        assert_eq!(decide(&s).report(&s), decide(&s).report(&s));
        let parsed: toml::Value = toml::from_str(&decide(&s).report(&s)).unwrap();
        assert_eq!(parsed["status"].as_str(), Some("NOT_SPECTRAL"));
        assert_eq!(parsed["rule"].as_str(), Some("divisibility-characterization"));
    }

    fn any_params() -> impl Strategy<Value = ParamSeq> {
        let entry = (1u64..4, 0u64..6);
        (
            prop::collection::vec(entry.clone(), 0..3),
            prop::collection::vec(entry, 1..3),
        )
            .prop_map(|(pre, per)| {
                let split = |v: &[(u64, u64)]| -> (Vec<u64>, Vec<u64>) {
                    v.iter().map(|&(p, e)| (2 * p + e, p)).unzip()
                };
                let (bp, pp) = split(&pre);
                let (bq, pq) = split(&per);
                ParamSeq::new(bp, bq, pp, pq).unwrap()
            })
    }

    fn even_params() -> impl Strategy<Value = ParamSeq> {
        let entry = (1u64..3, 0u64..7);
        (
            prop::collection::vec(entry.clone(), 0..3),
            prop::collection::vec(entry, 1..3),
        )
            .prop_map(|(pre, per)| {
                let split = |v: &[(u64, u64)]| -> (Vec<u64>, Vec<u64>) {
                    v.iter().map(|&(h, e)| (4 * h + e, 2 * h)).unzip()
                };
                let (bp, pp) = split(&pre);
                let (bq, pq) = split(&per);
                ParamSeq::new(bp, bq, pp, pq).unwrap()
            })
    }

    proptest! {
        #[test]
        fn unrolling_keeps_verdict(s in any_params(), times in 2usize..4) {
            let a = decide(&s);
            let b = decide(&s.unrolled(times));
            prop_assert_eq!((a.status, a.rule), (b.status, b.rule));
        }

        #[test]
        fn sufficient_guards_imply_characterization(s in any_params()) {
            if sufficient_conditions(&s).iter().all(Divisibility::holds) {
                prop_assert!(characterization_conditions(&s).iter().all(Divisibility::holds));
            }
        }

        #[test]
        fn even_regime_consistency(s in even_params()) {
            let v = decide(&s);
            if v.status == Status::Spectral {
                prop_assert!(even_b_necessity(&s).holds);
            }
            prop_assert_ne!(v.status, Status::Unknown);
            let div_ok = characterization_conditions(&s).iter().all(Divisibility::holds);
            prop_assert_eq!(v.status == Status::Spectral, div_ok);
            if even_b_necessity(&s).holds {
                prop_assert_eq!(v.status == Status::NotSpectral, !v.necessity.is_empty());
            }
        }
    }
}
