use std::fmt::Display;

use serde::Serialize;
use serde_json::{Number, Value};
use sha2::{Digest, Sha256};

/// What a subcommand prints on success.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs_digest: String,
    pub result: Value,
    pub exact: bool,
}

/// Accumulates the command name, flags and file contents into a SHA-256 digest.
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update([0]);
        InputDigest(h)
    }

    pub fn field(&mut self, name: &str, value: &[u8]) {
        self.0.update(name.as_bytes());
        self.0.update((value.len() as u64).to_le_bytes());
        self.0.update(value);
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

/// A JSON number of any size, written in full.
pub fn big_number(n: impl Display) -> Value {
    let text = n.to_string();
    Value::Number(text.parse::<Number>().expect("decimal integer"))
}
