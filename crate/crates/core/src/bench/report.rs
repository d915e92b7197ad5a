use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::run::BenchConfig;
use super::stats::{SampleSummary, WelchResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectResult {
    pub subject: String,
    pub size: usize,
    /// Wall-clock seconds per run.
    pub times: Vec<f64>,
    pub mean: f64,
    pub std_dev: f64,
}

impl SubjectResult {
    pub fn summary(&self) -> SampleSummary {
        SampleSummary {
            mean: self.mean,
            std_dev: self.std_dev,
            n: self.times.len(),
        }
    }
}

/// Welch test of `first` against `second` at one corpus size. `None` when
/// both had zero variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub size: usize,
    pub first: String,
    pub second: String,
    pub welch: Option<WelchResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub subject: String,
    pub size: usize,
    pub run: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub environment: String,
    pub results: Vec<SubjectResult>,
    pub comparisons: Vec<Comparison>,
}

pub(crate) fn environment_note(workers: usize) -> String {
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let assertions = if cfg!(debug_assertions) { "on" } else { "off" };
    format!(
        "{}/{}, {cores} logical cores, {workers} worker thread(s), debug assertions {assertions}",
        std::env::consts::OS,
        std::env::consts::ARCH
    )
}

/// `1000` becomes `1k`; sizes that are not whole thousands stay numeric.
pub fn size_label(size: usize) -> String {
    if size >= 1000 && size.is_multiple_of(1000) {
        format!("{}k", size / 1000)
    } else {
        size.to_string()
    }
}

impl BenchReport {
    pub fn result(&self, subject: &str, size: usize) -> Option<&SubjectResult> {
        self.results.iter().find(|r| r.subject == subject && r.size == size)
    }

    pub fn run_records(&self) -> Vec<RunRecord> {
        self.results
            .iter()
            .flat_map(|r| {
                r.times.iter().enumerate().map(|(i, &seconds)| RunRecord {
                    subject: r.subject.clone(),
                    size: r.size,
                    run: i + 1,
                    seconds,
                })
            })
            .collect()
    }

    /// Mean and standard deviation per subject and size in seconds, one
    /// column pair per size, with the p-value row underneath.
    pub fn table(&self) -> String {
        let sizes = &self.config.corpus_sizes;
        let mut subjects: Vec<&str> = Vec::new();
        for r in &self.results {
            if !subjects.contains(&r.subject.as_str()) {
                subjects.push(&r.subject);
            }
        }
        let mut out = String::new();
        let _ = write!(out, "{:<10}", "");
        for &s in sizes {
            let _ = write!(out, "{:^20}", size_label(s));
        }
        out.push('\n');
        let _ = write!(out, "{:<10}", "");
        for _ in sizes {
            let _ = write!(out, "{:>10}{:>10}", "AVG", "STD");
        }
        out.push('\n');
        for subject in subjects {
            let _ = write!(out, "{subject:<10}");
            for &s in sizes {
                match self.result(subject, s) {
                    Some(r) => {
                        let _ = write!(out, "{:>10.3}{:>10.3}", r.mean, r.std_dev);
                    }
                    None => {
                        let _ = write!(out, "{:>10}{:>10}", "-", "-");
                    }
                }
            }
            out.push('\n');
        }
        if !self.comparisons.is_empty() {
            let _ = write!(out, "{:<10}", "p-value");
            for &s in sizes {
                let p = self
                    .comparisons
                    .iter()
                    .find(|c| c.size == s)
                    .and_then(|c| c.welch)
                    .map(|w| format!("{:.4}", w.p))
                    .unwrap_or_else(|| "-".into());
                let _ = write!(out, "{p:^20}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "\n{} runs per cell, times in seconds; {}", self.config.runs, self.environment);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(size_label(1000), "1k");
        assert_eq!(size_label(50000), "50k");
        assert_eq!(size_label(10), "10");
        assert_eq!(size_label(1500), "1500");
    }

    #[test]
    fn table_layout() {
        let r = |subject: &str, mean| SubjectResult {
            subject: subject.into(),
            size: 1000,
            times: vec![mean, mean],
            mean,
            std_dev: 0.0,
        };
        let report = BenchReport {
            config: BenchConfig {
                corpus_sizes: vec![1000],
                runs: 2,
                ..Default::default()
            },
            environment: "test".into(),
            results: vec![r("engine", 4.85), r("adhoc", 4.09)],
            comparisons: vec![],
        };
        let table = report.table();
        let lines: Vec<&str> = table.lines().collect();
        assert!(lines[0].contains("1k"));
        assert!(lines[1].contains("AVG") && lines[1].contains("STD"));
        assert!(lines[2].starts_with("engine") && lines[2].contains("4.850"));
        assert_eq!(report.run_records().len(), 4);
    }
}
