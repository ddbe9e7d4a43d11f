//! JSON model and result documents.
//!
//! Numbers may be written as JSON numbers or as decimal strings; infinity is
//! the string `"inf"`. Unknown keys are rejected. See `docs/format.md`.

use std::fmt;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::model::{
    self, ActionRecord, Norm, Objective, Payoff, Rmdp, StateId, TrSemantics, UncertaintySet,
};
use crate::solver::SolveReport;

/// A real number that serializes `+-inf` as strings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RealVisitor;
        impl Visitor<'_> for RealVisitor {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number, a decimal string, or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Real, E> {
                Ok(Real(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Real, E> {
                match v.trim() {
                    "inf" | "+inf" => Ok(Real(f64::INFINITY)),
                    "-inf" => Ok(Real(f64::NEG_INFINITY)),
                    t => t
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .map(Real)
                        .ok_or_else(|| E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(RealVisitor)
    }
}

fn reals(v: &[f64]) -> Vec<Real> {
    v.iter().map(|&x| Real(x)).collect()
}

fn floats(v: &[Real]) -> Vec<f64> {
    v.iter().map(|x| x.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub states: Vec<String>,
    pub initial: String,
    pub actions: Vec<ActionDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDocument {
    pub from: String,
    pub label: String,
    pub reward: Real,
    pub support: Vec<String>,
    pub uncertainty: SetDocument,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormName {
    L1,
    L2,
    Lp,
    Linf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetDocument {
    Singleton {
        dist: Vec<Real>,
    },
    Ball {
        norm: NormName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u32>,
        center: Vec<Real>,
        radius: Real,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<Real>>,
    },
    PolytopeH {
        #[serde(rename = "A")]
        a: Vec<Vec<Real>>,
        b: Vec<Real>,
    },
    PolytopeV {
        vertices: Vec<Vec<Real>>,
    },
}

impl SetDocument {
    fn from_set(set: &UncertaintySet) -> Self {
        match set {
            UncertaintySet::Singleton { dist } => SetDocument::Singleton { dist: reals(dist) },
            UncertaintySet::Ball {
                norm,
                center,
                radius,
                weights,
            } => {
                let (name, p) = match norm {
                    Norm::L1 => (NormName::L1, None),
                    Norm::L2 => (NormName::L2, None),
                    Norm::Lp(p) => (NormName::Lp, Some(*p)),
                    Norm::LInf => (NormName::Linf, None),
                };
                SetDocument::Ball {
                    norm: name,
                    p,
                    center: reals(center),
                    radius: Real(*radius),
                    weights: (!weights.iter().all(|&w| w == 1.0)).then(|| reals(weights)),
                }
            }
            UncertaintySet::PolytopeH { a, b } => SetDocument::PolytopeH {
                a: a.iter().map(|r| reals(r)).collect(),
                b: reals(b),
            },
            UncertaintySet::PolytopeV { vertices } => SetDocument::PolytopeV {
                vertices: vertices.iter().map(|v| reals(v)).collect(),
            },
        }
    }

    fn to_set(&self, at: &str) -> Result<UncertaintySet> {
        Ok(match self {
            SetDocument::Singleton { dist } => UncertaintySet::Singleton { dist: floats(dist) },
            SetDocument::Ball {
                norm,
                p,
                center,
                radius,
                weights,
            } => {
                let norm = match (norm, p) {
                    (NormName::L1, None) => Norm::L1,
                    (NormName::L2, None) => Norm::L2,
                    (NormName::Linf, None) => Norm::LInf,
                    (NormName::Lp, Some(p)) => Norm::Lp(*p),
                    (NormName::Lp, None) => {
                        return Err(Error::Parse(format!(
                            "{at}/uncertainty: norm \"lp\" needs \"p\""
                        )))
                    }
                    (_, Some(_)) => {
                        return Err(Error::Parse(format!(
                            "{at}/uncertainty: \"p\" only applies to norm \"lp\""
                        )))
                    }
                };
                UncertaintySet::Ball {
                    norm,
                    center: floats(center),
                    radius: radius.0,
                    weights: weights
                        .as_ref()
                        .map_or_else(|| vec![1.0; center.len()], |w| floats(w)),
                }
            }
            SetDocument::PolytopeH { a, b } => UncertaintySet::PolytopeH {
                a: a.iter().map(|r| floats(r)).collect(),
                b: floats(b),
            },
            SetDocument::PolytopeV { vertices } => UncertaintySet::PolytopeV {
                vertices: vertices.iter().map(|v| floats(v)).collect(),
            },
        })
    }
}

/// A model together with the optional target states of its document.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedModel {
    pub model: Rmdp,
    pub targets: Option<Vec<StateId>>,
}

impl ModelDocument {
    pub fn from_model(model: &Rmdp, targets: Option<&[StateId]>) -> Self {
        let name = |s: StateId| model.state_names[s].clone();
        let actions = model
            .actions
            .iter()
            .enumerate()
            .flat_map(|(s, acts)| {
                acts.iter().map(move |a| ActionDocument {
                    from: name(s),
                    label: a.label.clone(),
                    reward: Real(a.reward),
                    support: a.support.iter().map(|&t| name(t)).collect(),
                    uncertainty: SetDocument::from_set(&a.uncertainty),
                })
            })
            .collect();
        ModelDocument {
            states: model.state_names.clone(),
            initial: name(model.initial),
            actions,
            targets: targets.map(|t| t.iter().map(|&s| name(s)).collect()),
        }
    }

    /// Builds and validates the model; errors carry JSON-pointer locations.
    pub fn to_model(&self) -> Result<LoadedModel> {
        let mut index = std::collections::HashMap::new();
        for (i, name) in self.states.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::Parse(format!(
                    "/states/{i}: duplicate state name {name:?}"
                )));
            }
        }
        let lookup = |name: &str, at: String| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Parse(format!("{at}: unknown state {name:?}")))
        };
        let initial = lookup(&self.initial, "/initial".into())?;
        let mut model = Rmdp::new(self.states.clone(), initial);
        // pointer of every (state, action) for diagnostics
        let mut origin: Vec<Vec<usize>> = vec![Vec::new(); self.states.len()];
        for (i, a) in self.actions.iter().enumerate() {
            let at = format!("/actions/{i}");
            let from = lookup(&a.from, format!("{at}/from"))?;
            let support = a
                .support
                .iter()
                .enumerate()
                .map(|(j, t)| lookup(t, format!("{at}/support/{j}")))
                .collect::<Result<Vec<_>>>()?;
            let set = a.uncertainty.to_set(&at)?;
            model.add_action(from, ActionRecord::new(&a.label, a.reward.0, support, set));
            origin[from].push(i);
        }
        let diagnostics = model::validate(&model);
        if !diagnostics.is_empty() {
            let lines: Vec<String> = diagnostics
                .iter()
                .map(|d| match (d.state, d.action) {
                    (Some(s), Some(a)) => format!("/actions/{}: {}", origin[s][a], d.message),
                    (Some(s), None) => format!("/states/{s} ({}): {}", self.states[s], d.message),
                    _ => d.message.clone(),
                })
                .collect();
            return Err(Error::Validation(lines.join("\n")));
        }
        let targets = match &self.targets {
            None => None,
            Some(names) => Some(
                names
                    .iter()
                    .enumerate()
                    .map(|(j, t)| lookup(t, format!("/targets/{j}")))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(LoadedModel { model, targets })
    }
}

pub fn parse_model_str(text: &str) -> Result<LoadedModel> {
    let doc: ModelDocument = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    doc.to_model()
}

pub fn parse_model(path: impl AsRef<Path>) -> Result<LoadedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_model_str(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn emit_model(model: &Rmdp, targets: Option<&[StateId]>) -> String {
    let doc = ModelDocument::from_model(model, targets);
    serde_json::to_string_pretty(&doc).expect("model documents serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateResult {
    pub state: String,
    pub lower: Real,
    pub upper: Real,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    /// Environment witness for the chosen action, by support slot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Real>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveEcho {
    pub payoff: String,
    pub direction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semantics: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Real>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub epsilon: Real,
    pub lp_tolerance: Real,
    pub mass_tolerance: Real,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmin_floor: Option<Real>,
    pub max_iterations: u64,
    pub sweep_order: String,
    pub relative_gap: bool,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TracePoint {
    pub iteration: u64,
    pub gap: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub algorithm: String,
    pub objective: ObjectiveEcho,
    pub converged: bool,
    pub iterations: u64,
    pub wall_time_seconds: f64,
    pub initial: StateResult,
    pub states: Vec<StateResult>,
    pub caveats: Vec<String>,
    pub config: ConfigEcho,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TracePoint>,
}

impl ResultDocument {
    pub fn new(
        model: &Rmdp,
        objective: &Objective,
        report: &SolveReport,
        epsilon: f64,
        cfg: &SolverConfig,
        wall_time_seconds: f64,
    ) -> Self {
        let states: Vec<StateResult> = (0..model.num_states())
            .map(|s| {
                let (action, witness) = match &report.policies {
                    Some(p) => {
                        let a = p.agent[s];
                        (
                            Some(model.actions[s][a].label.clone()),
                            Some(reals(&p.environment[s][a])),
                        )
                    }
                    None => (None, None),
                };
                StateResult {
                    state: model.state_names[s].clone(),
                    lower: Real(report.bounds.lower[s]),
                    upper: Real(report.bounds.upper[s]),
                    action,
                    witness,
                }
            })
            .collect();
        let (payoff, gamma) = match objective.payoff {
            Payoff::TotalReward => ("tr", None),
            Payoff::StochasticShortestPath => ("ssp", None),
            Payoff::LongRunAverage => ("lra", None),
            Payoff::Discounted { gamma } => ("disc", Some(Real(gamma))),
        };
        let semantics = objective.is_total_reward().then(|| {
            match objective.effective_semantics() {
                TrSemantics::Cumulative => "c",
                TrSemantics::Infinite => "inf",
            }
            .to_string()
        });
        ResultDocument {
            algorithm: report.algorithm.to_string(),
            objective: ObjectiveEcho {
                payoff: payoff.into(),
                direction: objective.direction.to_string(),
                semantics,
                gamma,
                targets: objective
                    .targets
                    .iter()
                    .map(|&t| model.state_names[t].clone())
                    .collect(),
            },
            converged: report.converged,
            iterations: report.iterations,
            wall_time_seconds,
            initial: states[model.initial].clone(),
            states,
            caveats: report.diagnostics.clone(),
            config: ConfigEcho {
                epsilon: Real(epsilon),
                lp_tolerance: Real(cfg.lp_tolerance),
                mass_tolerance: Real(cfg.mass_tolerance),
                pmin_floor: cfg.pmin_floor.map(Real),
                max_iterations: cfg.max_iterations,
                sweep_order: format!("{:?}", cfg.sweep_order).to_lowercase(),
                relative_gap: cfg.relative_gap,
                threads: cfg.threads,
            },
            trace: report
                .trace
                .iter()
                .map(|&(iteration, gap)| TracePoint {
                    iteration,
                    gap: Real(gap),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result documents serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "states": ["s"],
        "initial": "s",
        "actions": [
            {"from": "s", "label": "a", "reward": "0.5", "support": ["s"],
             "uncertainty": {"kind": "singleton", "dist": [1]}}
        ]
    }"#;

    #[test]
    fn minimal_document() {
        let m = parse_model_str(MINIMAL).unwrap().model;
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.actions[0][0].reward, 0.5);
    }

    #[test]
    fn negative_radius_is_a_validation_error() {
        let text = MINIMAL.replace(
            r#"{"kind": "singleton", "dist": [1]}"#,
            r#"{"kind": "ball", "norm": "l1", "center": [1], "radius": -0.1}"#,
        );
        match parse_model_str(&text) {
            Err(Error::Validation(m)) => assert!(m.starts_with("/actions/0:"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_and_names() {
        let extra = MINIMAL.replace(r#""initial": "s","#, r#""initial": "s", "colour": 1,"#);
        assert!(matches!(parse_model_str(&extra), Err(Error::Parse(_))));
        let extra = MINIMAL.replace(r#""dist": [1]"#, r#""dist": [1], "radius": 0"#);
        assert!(matches!(parse_model_str(&extra), Err(Error::Parse(_))));
        let bad = MINIMAL.replace(r#""support": ["s"]"#, r#""support": ["t"]"#);
        match parse_model_str(&bad) {
            Err(Error::Parse(m)) => assert!(m.contains("/actions/0/support/0"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let mut m = Rmdp::new(vec!["a".into(), "b".into()], 1);
        m.add_action(
            0,
            ActionRecord::new(
                "x",
                0.1,
                vec![0, 1],
                UncertaintySet::interval(vec![0.3, 0.7], 0.1),
            ),
        );
        m.add_action(
            0,
            ActionRecord::new(
                "y",
                1.0 / 3.0,
                vec![0, 1],
                UncertaintySet::Ball {
                    norm: Norm::Lp(3),
                    center: vec![0.5, 0.5],
                    radius: 0.05,
                    weights: vec![1.0, 2.0],
                },
            ),
        );
        m.add_action(
            1,
            ActionRecord::new(
                "z",
                0.0,
                vec![0, 1],
                UncertaintySet::PolytopeH {
                    a: vec![vec![-1.0, 0.0]],
                    b: vec![0.2],
                },
            ),
        );
        let text = emit_model(&m, Some(&[1]));
        let back = parse_model_str(&text).unwrap();
        assert_eq!(back.model, m);
        assert_eq!(back.targets, Some(vec![1]));
    }

    #[test]
    fn infinity_is_a_string() {
        assert_eq!(
            serde_json::to_string(&Real(f64::INFINITY)).unwrap(),
            "\"inf\""
        );
        let r: Real = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(r.0, f64::INFINITY);
    }
}
