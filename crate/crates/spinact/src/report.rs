//! Machine-readable classification reports: JSON, CSV, and a human table.

use serde::{Deserialize, Serialize};

use crate::lifting::ClassificationRecord;

/// Report metadata. Wall times are the only nondeterministic fields; the
/// JSON/CSV record payloads are bit-identical for fixed flags and seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportMeta {
    pub steps: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub wall_ms: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<ClassificationRecord>,
    pub meta: ReportMeta,
}

impl Report {
    pub fn all_match(&self) -> bool {
        self.records.iter().all(|r| r.matches)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV with one row per record; contains exactly the JSON data.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "family,n,sphere_dim,stabilizer,parity_differential,parity_adjoint,parity_oracle,verdict,expected,match\n",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.family,
                r.n,
                r.sphere_dim,
                r.stabilizer,
                r.parity.differential,
                r.parity.adjoint,
                r.parity.oracle,
                r.verdict,
                r.expected,
                r.matches
            ));
        }
        out
    }

    /// Human-readable table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<12} {:<6} {:<12} {:<22} {:<8} {:<9} {:<6}\n",
            "group", "sphere", "stabilizer", "isotropy rep", "parity", "invariant", "match"
        ));
        for r in &self.records {
            out.push_str(&format!(
                "{:<12} {:<6} {:<12} {:<22} {:<8} {:<9} {:<6}\n",
                r.family.group_label(r.n),
                format!("S^{}", r.sphere_dim),
                r.stabilizer,
                r.family.isotropy_label(r.n),
                format!(
                    "{}/{}/{}",
                    r.parity.differential, r.parity.adjoint, r.parity.oracle
                ),
                r.verdict.to_string(),
                if r.matches { "ok" } else { "MISMATCH" }
            ));
        }
        let footer = if self.all_match() {
            "all verdicts agree with the classification"
        } else {
            "MISMATCH against the classification"
        };
        out.push_str(&format!("-- {footer}\n"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{ActionSpec, Family};
    use crate::lifting::classify;

    fn tiny_report() -> Report {
        let spec = ActionSpec::new(Family::SO, 2).unwrap();
        let rec = classify(&spec, 64).unwrap();
        Report {
            records: vec![rec],
            meta: ReportMeta {
                steps: 64,
                tolerance: 1e-9,
                seed: crate::DEFAULT_SEED,
                wall_ms: vec![0.0],
            },
        }
    }

    #[test]
    fn json_round_trips() {
        let report = tiny_report();
        let json = report.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back.records.len(), 1);
        assert_eq!(back.records[0].family, Family::SO);
        assert_eq!(back.records[0].matches, report.records[0].matches);
        // schema fields
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let rec = &value["records"][0];
        for key in [
            "family",
            "n",
            "sphere_dim",
            "stabilizer",
            "parity",
            "verdict",
            "expected",
            "match",
        ] {
            assert!(rec.get(key).is_some(), "missing key {key}");
        }
        assert!(rec["parity"].get("differential").is_some());
        assert!(rec["parity"].get("adjoint").is_some());
        assert!(rec["parity"].get("oracle").is_some());
    }

    #[test]
    fn csv_contains_the_same_data() {
        let report = tiny_report();
        let csv = report.to_csv();
        let line = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        let r = &report.records[0];
        assert_eq!(fields[0], r.family.token());
        assert_eq!(fields[1], r.n.to_string());
        assert_eq!(fields[7], r.verdict.to_string());
        assert_eq!(fields[9], r.matches.to_string());
    }
}
