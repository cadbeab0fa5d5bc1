use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

/// One or more field-level constraint violations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationError {
    pub fields: Vec<FieldError>,
}

impl ValidationError {
    pub fn single(field: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationError {
            fields: vec![FieldError {
                field: field.into(),
                message: message.into(),
            }],
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.fields {
            if !first {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", e.field, e.message)?;
            first = false;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationError {}

/// Accumulates field checks, reporting every failure rather than the first.
#[derive(Debug, Default)]
pub struct FieldCheck {
    errors: Vec<FieldError>,
}

impl FieldCheck {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(mut self, field: &str, ok: bool, message: &str) -> Self {
        if !ok {
            self.errors.push(FieldError {
                field: field.to_string(),
                message: message.to_string(),
            });
        }
        self
    }

    pub fn required(self, field: &str, value: &str) -> Self {
        self.check(field, !value.trim().is_empty(), "must not be empty")
    }

    pub fn optional_text(self, field: &str, value: &str, max: usize) -> Self {
        let len = value.chars().count();
        let msg = format!("at most {max} characters (got {len})");
        self.check(field, len <= max, &msg)
    }

    pub fn text(self, field: &str, value: &str, max: usize) -> Self {
        if value.trim().is_empty() {
            return self.required(field, value);
        }
        self.optional_text(field, value, max)
    }

    pub fn id(self, field: &str, value: &str) -> Self {
        self.text(field, value, super::entities::ID_MAX)
    }

    pub fn email(self, field: &str, value: &str, max: usize) -> Self {
        if value.is_empty() || value.chars().count() > max {
            return self.text(field, value, max);
        }
        self.check(field, value.contains('@'), "must contain '@'")
    }

    pub fn finish(self) -> Result<(), ValidationError> {
        if self.errors.is_empty() {
            Ok(())
        } else {
            Err(ValidationError { fields: self.errors })
        }
    }
}
