use std::fmt;

/// Severity of a single report entry. Warnings do not fail validation;
/// they record known print discrepancies that an equivalent formulation
/// of the same condition satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Failure,
    Warning,
}

#[derive(Debug, Clone)]
pub struct ReportEntry {
    pub severity: Severity,
    /// Stable identifier of the violated condition, e.g. "jacobi" or "plane5".
    pub code: String,
    /// Human-readable witness, deterministic for identical inputs.
    pub message: String,
}

/// Accumulates failed checks; empty means the validated object is clean.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub entries: Vec<ReportEntry>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fail(&mut self, code: &str, message: String) {
        self.entries.push(ReportEntry {
            severity: Severity::Failure,
            code: code.to_string(),
            message,
        });
    }

    pub fn warn(&mut self, code: &str, message: String) {
        self.entries.push(ReportEntry {
            severity: Severity::Warning,
            code: code.to_string(),
            message,
        });
    }

    pub fn is_clean(&self) -> bool {
        self.entries.iter().all(|e| e.severity != Severity::Failure)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries
            .iter()
            .filter(|e| e.severity == Severity::Failure)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.entries.extend(other.entries);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "ok");
        }
        for entry in &self.entries {
            let tag = match entry.severity {
                Severity::Failure => "FAIL",
                Severity::Warning => "WARN",
            };
            writeln!(f, "{} [{}] {}", tag, entry.code, entry.message)?;
        }
        Ok(())
    }
}
