use std::fmt::Write as _;

use serde_json::{Map, Number, Value as Json};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Str(String),
    Bool(bool),
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_owned())
    }
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => format!("{v:?}"),
            Value::Str(v) => v.clone(),
            Value::Bool(v) => v.to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Int(v) => Json::Number((*v).into()),
            Value::Float(v) => Number::from_f64(*v).map_or_else(|| Json::String(v.to_string()), Json::Number),
            Value::Str(v) => Json::String(v.clone()),
            Value::Bool(v) => Json::Bool(*v),
        }
    }
}

/// Deterministic command summary; keys keep insertion order.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub seed: Option<u64>,
    pub inputs: Vec<(String, Value)>,
    pub outputs: Vec<(String, Value)>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_owned(),
            seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.push((key.to_owned(), v.into()));
        self
    }

    pub fn output(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.outputs.push((key.to_owned(), v.into()));
        self
    }

    pub fn to_key_value(&self) -> String {
        let mut out = format!("command={}\n", self.command);
        if let Some(seed) = self.seed {
            writeln!(out, "seed={seed}").unwrap();
        }
        for (k, v) in &self.inputs {
            writeln!(out, "input.{k}={}", v.text()).unwrap();
        }
        for (k, v) in &self.outputs {
            writeln!(out, "{k}={}", v.text()).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let section = |items: &[(String, Value)]| {
            // serde_json's default map sorts keys, which keeps output stable
            Json::Object(items.iter().map(|(k, v)| (k.clone(), v.json())).collect::<Map<_, _>>())
        };
        let mut obj = Map::new();
        obj.insert("command".into(), Json::String(self.command.clone()));
        obj.insert("seed".into(), self.seed.map_or(Json::Null, |s| Json::Number(s.into())));
        obj.insert("inputs".into(), section(&self.inputs));
        obj.insert("outputs".into(), section(&self.outputs));
        let mut s = serde_json::to_string_pretty(&Json::Object(obj)).expect("plain JSON values");
        s.push('\n');
        s
    }
}
