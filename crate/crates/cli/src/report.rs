//! Command reports with agreeing human and machine renderings.

use serde_json::{json, Map, Value};

/// Terminal status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A verify claim disagreed with the engine.
    Mismatch,
    /// A named precondition was violated.
    Violation,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Mismatch => "mismatch",
            Status::Violation => "violation",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Mismatch | Status::Violation => 1,
        }
    }
}

/// A command's outcome: echoed inputs, named results, citations, status,
/// plus a prerendered human transcript built from the same values.
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub citations: Vec<String>,
    pub status: Status,
    pub human: String,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: Map::new(),
            results: Map::new(),
            citations: Vec::new(),
            status: Status::Ok,
            human: String::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn cite(&mut self, citation: impl Into<String>) -> &mut Self {
        self.citations.push(citation.into());
        self
    }

    pub fn line(&mut self, line: impl AsRef<str>) -> &mut Self {
        self.human.push_str(line.as_ref());
        self.human.push('\n');
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": Value::Object(self.inputs.clone()),
            "results": Value::Object(self.results.clone()),
            "citations": self.citations,
            "status": self.status.as_str(),
        })
    }

    /// Prints the selected rendering and returns the exit code.
    pub fn emit(&self, as_json: bool) -> i32 {
        if as_json {
            println!("{}", serde_json::to_string_pretty(&self.to_json()).expect("serializable"));
        } else {
            print!("{}", self.human);
            if !self.citations.is_empty() {
                for c in &self.citations {
                    println!("  [{c}]");
                }
            }
        }
        self.status.exit_code()
    }
}
