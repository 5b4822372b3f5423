use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::tuple::MatrixTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Check,
    Limit,
    Optimize,
    Semisimplify,
    BorelTits,
    Witness,
    OrbitDim,
    Selftest,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Check,
        Command::Limit,
        Command::Optimize,
        Command::Semisimplify,
        Command::BorelTits,
        Command::Witness,
        Command::OrbitDim,
        Command::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Limit => "limit",
            Command::Optimize => "optimize",
            Command::Semisimplify => "semisimplify",
            Command::BorelTits => "borel-tits",
            Command::Witness => "witness",
            Command::OrbitDim => "orbit-dim",
            Command::Selftest => "selftest",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    /// check, semisimplify, borel-tits, witness, orbit-dim
    Tuple(MatrixTuple),
    Limit {
        lambda: Vec<i64>,
        conjugator: Option<Matrix>,
        tuple: MatrixTuple,
    },
    Weights(Vec<Vec<i64>>),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobRequest {
    pub command: Command,
    pub field: FieldSpec,
    pub payload: Payload,
    /// Enumeration cap for brute-force searches; `None` means the default.
    pub budget: Option<u128>,
}

/// A rejected request: the JSON path of the first offending value and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ParseError {}

fn fail<T>(path: &str, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        path: path.to_string(),
        message: message.into(),
    })
}

fn describe(e: &Error) -> String {
    e.to_string()
}

fn parse_field(v: &Value, path: &str) -> Result<FieldSpec, ParseError> {
    let obj = v.as_object().map_or_else(|| fail(path, "expected an object"), Ok)?;
    for key in obj.keys() {
        if key != "kind" && key != "p" {
            return fail(&format!("{path}.{key}"), "unknown key");
        }
    }
    let kind_path = format!("{path}.kind");
    match obj.get("kind").and_then(Value::as_str) {
        Some("rationals") => {
            if obj.contains_key("p") {
                return fail(&format!("{path}.p"), "modulus given for the rationals");
            }
            Ok(FieldSpec::Rationals)
        }
        Some("prime_field") => {
            let p_path = format!("{path}.p");
            let p = match obj.get("p") {
                None => return fail(&p_path, "missing modulus"),
                Some(p) => integer(p, &p_path)?,
            };
            if p < 0 {
                return fail(&p_path, format!("modulus not prime: {p}"));
            }
            FieldSpec::prime(p as u64).map_err(|e| ParseError {
                path: p_path,
                message: describe(&e),
            })
        }
        Some(other) => fail(&kind_path, format!("unknown field kind {other:?}")),
        None => fail(&kind_path, "missing field kind"),
    }
}

fn integer(v: &Value, path: &str) -> Result<i64, ParseError> {
    match v {
        Value::Number(n) => n.as_i64().map_or_else(|| fail(path, "expected an integer"), Ok),
        Value::String(s) => s
            .trim()
            .parse::<i64>()
            .map_or_else(|_| fail(path, format!("expected an integer, got {s:?}")), Ok),
        _ => fail(path, "expected an integer"),
    }
}

fn integer_vector(v: &Value, path: &str) -> Result<Vec<i64>, ParseError> {
    let items = v.as_array().map_or_else(|| fail(path, "expected an array"), Ok)?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| integer(x, &format!("{path}[{i}]")))
        .collect()
}

fn scalar(field: FieldSpec, v: &Value, path: &str) -> Result<Scalar, ParseError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return fail(path, "expected an exact number as a string"),
    };
    field.parse(&text).map_err(|e| ParseError {
        path: path.to_string(),
        message: describe(&e),
    })
}

/// Square or rectangular matrix literal; rows must have equal length.
fn matrix(field: FieldSpec, v: &Value, path: &str) -> Result<Matrix, ParseError> {
    let rows = v.as_array().map_or_else(|| fail(path, "expected an array of rows"), Ok)?;
    if rows.is_empty() {
        return fail(path, "empty matrix");
    }
    let mut parsed: Vec<Vec<Scalar>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let entries = row.as_array().map_or_else(|| fail(&row_path, "expected a row array"), Ok)?;
        if let Some(first) = parsed.first() {
            if entries.len() != first.len() {
                return fail(&row_path, "jagged matrix");
            }
        } else if entries.is_empty() {
            return fail(&row_path, "empty row");
        }
        parsed.push(
            entries
                .iter()
                .enumerate()
                .map(|(j, x)| scalar(field, x, &format!("{row_path}[{j}]")))
                .collect::<Result<_, _>>()?,
        );
    }
    Matrix::from_rows(field, parsed).map_err(|e| ParseError {
        path: path.to_string(),
        message: describe(&e),
    })
}

fn square_invertible(field: FieldSpec, v: &Value, path: &str) -> Result<Matrix, ParseError> {
    let m = matrix(field, v, path)?;
    if m.rows() != m.cols() {
        return fail(path, "matrix not square");
    }
    if !m.is_invertible() {
        return fail(path, "generator not invertible");
    }
    Ok(m)
}

fn tuple(field: FieldSpec, mats: &[(String, &Value)]) -> Result<MatrixTuple, ParseError> {
    let mut out: Vec<Matrix> = Vec::new();
    for (path, v) in mats {
        let m = square_invertible(field, v, path)?;
        if let Some(first) = out.first() {
            if m.rows() != first.rows() {
                return fail(path, "generator dimension differs from the first");
            }
        }
        out.push(m);
    }
    MatrixTuple::new(out).map_err(|e| ParseError {
        path: "$".into(),
        message: describe(&e),
    })
}

fn generators(field: FieldSpec, obj: &Map<String, Value>) -> Result<MatrixTuple, ParseError> {
    match (obj.get("generators"), obj.get("matrix")) {
        (Some(_), Some(_)) => fail("$.matrix", "give either matrix or generators, not both"),
        (None, Some(m)) => tuple(field, &[("$.matrix".into(), m)]),
        (Some(g), None) => {
            let items = g
                .as_array()
                .map_or_else(|| fail("$.generators", "expected an array of matrices"), Ok)?;
            if items.is_empty() {
                return fail("$.generators", "no generators");
            }
            let mats: Vec<(String, &Value)> = items
                .iter()
                .enumerate()
                .map(|(i, m)| (format!("$.generators[{i}]"), m))
                .collect();
            tuple(field, &mats)
        }
        (None, None) => fail("$.generators", "missing generators"),
    }
}

fn allowed_keys(command: Command) -> &'static [&'static str] {
    match command {
        Command::Check
        | Command::Semisimplify
        | Command::BorelTits
        | Command::Witness
        | Command::OrbitDim => &["generators", "matrix"],
        Command::Limit => &["generators", "matrix", "lambda", "conjugator"],
        Command::Optimize => &["weights"],
        Command::Selftest => &[],
    }
}

/// Parses and validates one JSON job document.
pub fn parse_request(text: &str) -> Result<JobRequest, ParseError> {
    parse(text, None)
}

/// Like [`parse_request`], for a document submitted as `command`: its own
/// `"command"` key may be omitted but must agree when present.
pub fn parse_request_as(text: &str, command: Command) -> Result<JobRequest, ParseError> {
    parse(text, Some(command))
}

fn parse(text: &str, expected: Option<Command>) -> Result<JobRequest, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ParseError {
        path: "$".into(),
        message: format!("malformed JSON: {e}"),
    })?;
    let obj = doc.as_object().map_or_else(|| fail("$", "expected a JSON object"), Ok)?;
    let command = match (obj.get("command"), expected) {
        (None, Some(c)) => c,
        (None, None) => return fail("$.command", "missing command"),
        (Some(Value::String(s)), _) => Command::from_name(s)
            .map_or_else(|| fail("$.command", format!("unknown command {s:?}")), Ok)?,
        (Some(_), _) => return fail("$.command", "expected a string"),
    };
    if let Some(c) = expected.filter(|&c| c != command) {
        return fail("$.command", format!("document is a {command} job, not {c}"));
    }
    let extra = allowed_keys(command);
    for key in obj.keys() {
        let known = matches!(key.as_str(), "command" | "field" | "budget") || extra.contains(&key.as_str());
        if !known {
            return fail(&format!("$.{key}"), format!("unknown key for {command}"));
        }
    }
    let field = match obj.get("field") {
        Some(v) => parse_field(v, "$.field")?,
        None if matches!(command, Command::Optimize | Command::Selftest) => FieldSpec::Rationals,
        None => return fail("$.field", "missing field"),
    };
    let budget = match obj.get("budget") {
        None => None,
        Some(v) => {
            let b = integer(v, "$.budget")?;
            if b <= 0 {
                return fail("$.budget", "budget must be positive");
            }
            Some(b as u128)
        }
    };
    let payload = match command {
        Command::Check
        | Command::Semisimplify
        | Command::BorelTits
        | Command::Witness
        | Command::OrbitDim => Payload::Tuple(generators(field, obj)?),
        Command::Limit => {
            let tuple = generators(field, obj)?;
            let lambda = match obj.get("lambda") {
                None => return fail("$.lambda", "missing cocharacter"),
                Some(v) => integer_vector(v, "$.lambda")?,
            };
            if lambda.len() != tuple.dim() {
                return fail(
                    "$.lambda",
                    format!("length {} does not match dimension {}", lambda.len(), tuple.dim()),
                );
            }
            let conjugator = match obj.get("conjugator") {
                None | Some(Value::Null) => None,
                Some(v) => {
                    let g = square_invertible(field, v, "$.conjugator")
                        .map_err(|e| match e.message.as_str() {
                            "generator not invertible" => ParseError {
                                message: "conjugator not invertible".into(),
                                ..e
                            },
                            _ => e,
                        })?;
                    if g.rows() != tuple.dim() {
                        return fail("$.conjugator", "conjugator dimension differs from the tuple");
                    }
                    Some(g)
                }
            };
            Payload::Limit {
                lambda,
                conjugator,
                tuple,
            }
        }
        Command::Optimize => {
            let items = match obj.get("weights") {
                None => return fail("$.weights", "missing weights"),
                Some(v) => v.as_array().map_or_else(|| fail("$.weights", "expected an array"), Ok)?,
            };
            if items.is_empty() {
                return fail("$.weights", "empty weight set");
            }
            let mut weights: Vec<Vec<i64>> = Vec::new();
            for (i, w) in items.iter().enumerate() {
                let path = format!("$.weights[{i}]");
                let w = integer_vector(w, &path)?;
                if w.is_empty() {
                    return fail(&path, "empty weight");
                }
                if w.len() != weights.first().map_or(w.len(), Vec::len) {
                    return fail(&path, "weights of different ranks");
                }
                if weights.contains(&w) {
                    return fail(&path, "duplicate weight");
                }
                weights.push(w);
            }
            Payload::Weights(weights)
        }
        Command::Selftest => Payload::None,
    };
    Ok(JobRequest {
        command,
        field,
        payload,
        budget,
    })
}

pub(crate) fn field_json(field: FieldSpec) -> Value {
    match field {
        FieldSpec::Rationals => json!({"kind": "rationals"}),
        FieldSpec::PrimeField(p) => json!({"kind": "prime_field", "p": p}),
    }
}

pub(crate) fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

/// The request as a JSON document that [`parse_request`] maps back to it.
pub fn request_json(req: &JobRequest) -> Value {
    let mut obj = Map::new();
    obj.insert("command".into(), Value::String(req.command.name().into()));
    obj.insert("field".into(), field_json(req.field));
    if let Some(b) = req.budget {
        obj.insert("budget".into(), Value::String(b.to_string()));
    }
    match &req.payload {
        Payload::Tuple(t) => {
            obj.insert("generators".into(), t.iter().map(matrix_json).collect());
        }
        Payload::Limit {
            lambda,
            conjugator,
            tuple,
        } => {
            obj.insert("generators".into(), tuple.iter().map(matrix_json).collect());
            obj.insert("lambda".into(), json!(lambda));
            if let Some(g) = conjugator {
                obj.insert("conjugator".into(), matrix_json(g));
            }
        }
        Payload::Weights(w) => {
            obj.insert("weights".into(), json!(w));
        }
        Payload::None => {}
    }
    Value::Object(obj)
}

pub fn serialize_request(req: &JobRequest) -> String {
    request_json(req).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_request_parses() {
        let r = parse_request(
            r#"{"command":"limit","field":{"kind":"prime_field","p":2},"lambda":[1,-1],"matrix":[["1","1"],["0","1"]]}"#,
        )
        .unwrap();
        assert_eq!(r.command, Command::Limit);
        assert_eq!(r.field, FieldSpec::prime(2).unwrap());
        match &r.payload {
            Payload::Limit { lambda, tuple, conjugator } => {
                assert_eq!(lambda, &[1, -1]);
                assert_eq!(tuple.len(), 1);
                assert!(conjugator.is_none());
            }
            other => panic!("unexpected payload {other:?}"),
        }
    }

    #[test]
    fn diagnostics_name_the_path() {
        let e = parse_request(r#"{"command":"check","field":{"kind":"prime_field","p":4},"generators":[[["1"]]]}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.field.p");
        assert!(e.message.contains("modulus not prime"));

        let e = parse_request(
            r#"{"command":"check","field":{"kind":"rationals"},"generators":[[["1","0"],["0","1"]],[["1","2"],["2","4"]]]}"#,
        )
        .unwrap_err();
        assert_eq!(e.path, "$.generators[1]");
        assert_eq!(e.message, "generator not invertible");

        let e = parse_request(r#"{"command":"check","field":{"kind":"rationals"},"generators":[[["1","0"],["1"]]]}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.generators[0][1]");
        assert_eq!(e.message, "jagged matrix");

        let e = parse_request(r#"{"command":"check","field":{"kind":"rationals"},"generators":[[["1","x"],["0","1"]]]}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.generators[0][0][1]");

        let e = parse_request(r#"{"command":"check""#).unwrap_err();
        assert!(e.message.starts_with("malformed JSON"));

        let e = parse_request(r#"{"command":"selftest","budget":0}"#).unwrap_err();
        assert_eq!(e.path, "$.budget");

        let e = parse_request(r#"{"command":"optimize","weights":[[1,0],[1,0]]}"#).unwrap_err();
        assert_eq!(e.path, "$.weights[1]");

        let e = parse_request(r#"{"command":"orbit-dim","field":{"kind":"rationals"},"matrix":[["1"]],"lambda":[1]}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.lambda");
    }

    #[test]
    fn command_from_context() {
        let r = parse_request_as(r#"{"weights":[[1]]}"#, Command::Optimize).unwrap();
        assert_eq!(r.command, Command::Optimize);
        let e = parse_request_as(r#"{"command":"selftest"}"#, Command::Check).unwrap_err();
        assert_eq!(e.path, "$.command");
    }

    #[test]
    fn round_trip() {
        for text in [
            r#"{"command":"limit","field":{"kind":"prime_field","p":2},"lambda":[1,-1],"matrix":[["1","1"],["0","1"]]}"#,
            r#"{"command":"limit","field":{"kind":"rationals"},"lambda":[0,3],"conjugator":[["1","1/2"],["0","1"]],"generators":[[["2","-1/3"],["0","1"]]],"budget":"7"}"#,
            r#"{"command":"optimize","weights":[[2,0],[0,2]]}"#,
            r#"{"command":"selftest"}"#,
            r#"{"command":"check","field":{"kind":"prime_field","p":3},"generators":[[["1","2"],["0","1"]],[[2,0],[0,1]]]}"#,
        ] {
            let req = parse_request(text).unwrap();
            assert_eq!(parse_request(&serialize_request(&req)).unwrap(), req);
        }
    }
}
