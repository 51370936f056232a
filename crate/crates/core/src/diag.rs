//! Line-precise diagnostics for JSON input files.

use serde::de::DeserializeOwned;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid { line: Option<usize>, message: String },
}

impl SpecError {
    pub fn line(&self) -> Option<usize> {
        match self {
            SpecError::Syntax { line, .. } => Some(*line),
            SpecError::Invalid { line, .. } => *line,
        }
    }

    /// A semantic error pinned to the first line where `token` appears as a string.
    pub fn at_token(text: &str, token: &str, message: impl Into<String>) -> Self {
        SpecError::Invalid { line: find_token(text, token), message: message.into() }
    }

    pub fn at_key(text: &str, key: &str, message: impl Into<String>) -> Self {
        SpecError::Invalid { line: find_token(text, key), message: message.into() }
    }

    pub fn unplaced(message: impl Into<String>) -> Self {
        SpecError::Invalid { line: None, message: message.into() }
    }
}

/// Parses JSON, mapping syntax and shape errors to their position.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, SpecError> {
    serde_json::from_str(text).map_err(|e| SpecError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    })
}

/// 1-based line of the first occurrence of `"token"`.
pub fn find_token(text: &str, token: &str) -> Option<usize> {
    let quoted = serde_json::to_string(token).ok()?;
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse::<serde_json::Value>("{\n  \"a\": 1,\n  \"b\": ]\n}").unwrap_err();
        assert_eq!(err.line(), Some(3));
        let e = SpecError::at_token("{\n \"x\": [\"p\",\n \"q\"]}", "q", "bad");
        assert_eq!(e.to_string(), "line 3: bad");
    }
}
