//! Dimension tables: per-class (or per-subset) nonzero cohomology
//! contributions together with the headline dimension they witness.

use serde::Serialize;

use crate::zcohomology::CohomologyGroup;

/// One nonzero contribution, already shifted to the dimension scale of the
/// governing formula (so a reduced degree n-1 witness appears as n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub degree: usize,
    pub group: CohomologyGroup,
}

/// A class or subset label with every dimension in which it contributes.
/// Rows with no contributions are kept so reports list every class checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub label: String,
    pub contributions: Vec<DegreeEntry>,
}

/// The headline dimension is the maximum degree present in the rows. Every
/// formula in this crate produces at least one contribution (empty upper
/// sets and empty links witness 0), so a table of nonempty rows always has
/// an explicit witness for its headline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionTable {
    pub dimension: usize,
    pub rows: Vec<DimensionRow>,
}

impl DimensionTable {
    pub fn from_rows(rows: Vec<DimensionRow>) -> Self {
        let dimension = rows
            .iter()
            .flat_map(|r| r.contributions.iter().map(|e| e.degree))
            .max()
            .unwrap_or(0);
        DimensionTable { dimension, rows }
    }

    /// Rows that witness the headline dimension.
    pub fn witnesses(&self) -> Vec<&DimensionRow> {
        self.rows
            .iter()
            .filter(|r| r.contributions.iter().any(|e| e.degree == self.dimension))
            .collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("dimension {}\n", self.dimension);
        for row in &self.rows {
            if row.contributions.is_empty() {
                out.push_str(&format!("  {}: -\n", row.label));
            } else {
                let parts: Vec<String> = row
                    .contributions
                    .iter()
                    .map(|e| format!("{} in dimension {}", e.group, e.degree))
                    .collect();
                out.push_str(&format!("  {}: {}\n", row.label, parts.join("; ")));
            }
        }
        out
    }
}

/// A degreewise comparison of two cohomology computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub degree: i32,
    pub left: CohomologyGroup,
    pub right: CohomologyGroup,
}

impl ComparisonRow {
    pub fn matches(&self) -> bool {
        self.left == self.right
    }
}

/// Two routes to the same cohomology, compared in every degree. The basis
/// flag, when present, records whether the underlying cochain bases were
/// matched by an explicit bijection as well.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub label: String,
    pub rows: Vec<ComparisonRow>,
    pub basis_bijection: Option<bool>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.matches()) && self.basis_bijection != Some(false)
    }

    pub fn mismatches(&self) -> Vec<&ComparisonRow> {
        self.rows.iter().filter(|r| !r.matches()).collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{}: {}\n",
            self.label,
            if self.passed() { "ok" } else { "MISMATCH" }
        );
        for row in &self.rows {
            out.push_str(&format!(
                "  degree {}: {} vs {}{}\n",
                row.degree,
                row.left,
                row.right,
                if row.matches() { "" } else { "  <-- differ" }
            ));
        }
        if let Some(b) = self.basis_bijection {
            out.push_str(&format!(
                "  basis bijection: {}\n",
                if b { "ok" } else { "FAILED" }
            ));
        }
        out
    }
}

/// A pass/fail check with human-readable failure witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn pass() -> Self {
        CheckReport { passed: true, failures: Vec::new() }
    }

    pub fn fail(&mut self, witness: String) {
        self.passed = false;
        self.failures.push(witness);
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.passed &= other.passed;
        self.failures.extend(other.failures);
    }
}
