use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gcr::{
    borel_tits_flag, composition_series, is_completely_reducible, orbit_dimension, semisimplify,
    tuple_witness_search, ModuleDecomposition, WitnessParabolic, WitnessReason,
};
use crate::instability::{optimal_cocharacter, rational_literals, InstabilityReport, WeightSet};
use crate::io::corpus::{corpus, run_corpus, CaseOutcome};
use crate::io::request::{field_json, matrix_json, Command, JobRequest, Payload};
use crate::io::DEFAULT_BUDGET;
use crate::linalg::{commutant_dimension, Subspace};
use crate::torus::{limit_tuple, Cocharacter};
use crate::tuple::MatrixTuple;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Process exit code for a failed job.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID_INPUT,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobReport {
    pub command: Command,
    /// Deterministic content: everything except timing.
    pub body: Value,
    pub exit_code: i32,
    pub elapsed_ms: u128,
}

impl JobReport {
    /// Full document, timing included.
    pub fn to_json(&self) -> Value {
        let mut v = self.body.clone();
        if let Value::Object(m) = &mut v {
            m.insert("elapsed_ms".into(), Value::String(self.elapsed_ms.to_string()));
        }
        v
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }
}

fn subspace_json(s: &Subspace) -> Value {
    json!({
        "dim": s.dim(),
        "basis": (0..s.dim()).map(|i| {
            Value::Array(s.basis().row(i).iter().map(|x| Value::String(x.to_string())).collect())
        }).collect::<Vec<_>>(),
    })
}

fn cocharacter_json(l: &Cocharacter) -> Value {
    json!({
        "exponents": l.exponents(),
        "conjugator": l.conjugator().map_or(Value::Null, matrix_json),
    })
}

fn tuple_json(t: &MatrixTuple) -> Value {
    t.iter().map(matrix_json).collect()
}

pub(crate) fn witness_json(w: &WitnessParabolic) -> Value {
    let mut m = Map::new();
    m.insert("flag".into(), w.flag.iter().map(subspace_json).collect());
    m.insert("cocharacter".into(), cocharacter_json(&w.cocharacter));
    match &w.reason {
        WitnessReason::NoComplement { step } => {
            m.insert("reason".into(), json!("no invariant complement"));
            m.insert("failing_step".into(), json!(step));
        }
        WitnessReason::BorelTits => {
            m.insert("reason".into(), json!("iterated fixed points"));
        }
    }
    Value::Object(m)
}

fn decomposition_json(d: &ModuleDecomposition) -> Value {
    let advisory: Vec<usize> = d
        .factor_commutant_dims
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 1)
        .map(|(i, _)| i)
        .collect();
    json!({
        "series": d.series.iter().map(subspace_json).collect::<Vec<_>>(),
        "factor_dims": d.factor_dims(),
        "factor_certified": d.factor_certified,
        "factor_commutant_dims": d.factor_commutant_dims,
        "not_absolutely_irreducible": advisory,
        "step_complements": d.step_complements.iter()
            .map(|c| c.as_ref().map_or(Value::Null, subspace_json))
            .collect::<Vec<_>>(),
    })
}

fn instability_json(r: &InstabilityReport) -> Value {
    json!({
        "semistable": r.semistable,
        "point": rational_literals(&r.point),
        "optimal_value_sq": r.optimal_value_sq.to_string(),
        "lambda": r.lambda,
        "mu": r.mu.map(|m| m.to_string()),
        "lambda_norm_sq": r.lambda_norm_sq.map(|m| m.to_string()),
        "certificate": {
            "coefficients": r.certificate.coefficients.iter()
                .map(|(i, c)| json!({"weight": i, "coefficient": c.to_string()}))
                .collect::<Vec<_>>(),
            "margins": rational_literals(&r.certificate.margins),
        },
    })
}

fn outcome_json(o: &CaseOutcome) -> Value {
    json!({
        "name": o.name,
        "status": if o.passed { "pass" } else { "fail" },
        "expected": o.expected,
        "actual": match &o.actual {
            Ok(s) => s.clone(),
            Err(e) => format!("error: {e}"),
        },
    })
}

/// Body and exit code of the self-test over `outcomes`.
pub fn selftest_result(outcomes: &[CaseOutcome]) -> (Value, i32) {
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let budget_only = outcomes
        .iter()
        .filter(|o| !o.passed)
        .all(|o| matches!(o.actual, Err(Error::BudgetExceeded { .. })));
    let code = if failed == 0 {
        EXIT_OK
    } else if budget_only {
        EXIT_BUDGET
    } else {
        EXIT_INTERNAL
    };
    let body = json!({
        "cases": outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
        "passed": outcomes.len() - failed,
        "failed": failed,
        "failures": outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect::<Vec<_>>(),
    });
    (body, code)
}

fn tuple_payload(req: &JobRequest) -> Result<&MatrixTuple> {
    match &req.payload {
        Payload::Tuple(t) => Ok(t),
        _ => Err(Error::Internal(format!("payload does not match {}", req.command))),
    }
}

fn result_body(req: &JobRequest, budget: u128) -> Result<(Value, i32)> {
    let body = match req.command {
        Command::Check => {
            let t = tuple_payload(req)?;
            let v = is_completely_reducible(t)?;
            if let Some(w) = &v.witness {
                w.verify(t).map_err(Error::Internal)?;
            }
            json!({
                "verdict": if v.completely_reducible { "completely reducible" } else { "not completely reducible" },
                "completely_reducible": v.completely_reducible,
                "certified": !v.completely_reducible || v.decomposition.certified(),
                "decomposition": decomposition_json(&v.decomposition),
                "witness": v.witness.as_ref().map_or(Value::Null, witness_json),
            })
        }
        Command::Limit => {
            let (lambda, conjugator, tuple) = match &req.payload {
                Payload::Limit { lambda, conjugator, tuple } => (lambda, conjugator, tuple),
                _ => return Err(Error::Internal("payload does not match limit".into())),
            };
            let l = match conjugator {
                None => Cocharacter::new(lambda.clone()),
                Some(g) => Cocharacter::conjugated(lambda.clone(), g.clone())?,
            };
            match limit_tuple(&l, tuple) {
                None => json!({"verdict": "no limit", "limit_exists": false, "result": null}),
                Some(lim) => json!({
                    "verdict": "limit exists",
                    "limit_exists": true,
                    "result": tuple_json(&lim),
                    "fixed": lim == *tuple,
                }),
            }
        }
        Command::Optimize => {
            let w = match &req.payload {
                Payload::Weights(w) => WeightSet::new(w.clone())?,
                _ => return Err(Error::Internal("payload does not match optimize".into())),
            };
            let r = optimal_cocharacter(&w)?;
            r.verify(&w).map_err(Error::Internal)?;
            instability_json(&r)
        }
        Command::Semisimplify => {
            let t = tuple_payload(req)?;
            let (s, l) = semisimplify(t)?;
            json!({
                "result": tuple_json(&s),
                "cocharacter": cocharacter_json(&l),
                "factor_dims": composition_series(t)?.factor_dims(),
                "commutant_dim_before": commutant_dimension(t.field(), t.dim(), t),
                "commutant_dim_after": commutant_dimension(s.field(), s.dim(), &s),
            })
        }
        Command::BorelTits => {
            let t = tuple_payload(req)?;
            let w = borel_tits_flag(t)?;
            w.verify(t).map_err(Error::Internal)?;
            witness_json(&w)
        }
        Command::Witness => {
            let t = tuple_payload(req)?;
            match tuple_witness_search(t)? {
                None => json!({"verdict": "completely reducible", "witness": null}),
                Some(tw) => {
                    tw.witness.verify(t).map_err(Error::Internal)?;
                    json!({
                        "verdict": "not completely reducible",
                        "heuristic": tw.heuristic,
                        "witness": witness_json(&tw.witness),
                        "block_weights": tw.block_weights.weights(),
                        "optimization": instability_json(&tw.report),
                        "cocharacter": cocharacter_json(&tw.cocharacter),
                        "limit": tuple_json(&tw.limit),
                    })
                }
            }
        }
        Command::OrbitDim => {
            let t = tuple_payload(req)?;
            json!({
                "orbit_dimension": orbit_dimension(t),
                "commutant_dimension": commutant_dimension(t.field(), t.dim(), t),
            })
        }
        Command::Selftest => {
            let outcomes = run_corpus(&corpus(), budget);
            return Ok(selftest_result(&outcomes));
        }
    };
    Ok((body, EXIT_OK))
}

/// Executes a validated request.
pub fn run(req: &JobRequest) -> Result<JobReport> {
    let start = Instant::now();
    let budget = req.budget.unwrap_or(DEFAULT_BUDGET);
    let (result, exit_code) = result_body(req, budget)?;
    let body = json!({
        "command": req.command.name(),
        "field": field_json(req.field),
        "result": result,
    });
    Ok(JobReport {
        command: req.command,
        body,
        exit_code,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
