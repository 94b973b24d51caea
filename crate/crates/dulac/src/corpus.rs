//! Golden-file checks over a directory of worked problems.
//!
//! Each entry is a subdirectory holding `problem.json`, a `PROVENANCE.md`
//! note, and an `expected/` directory with one pinned report per command
//! that applies to the entry. Verification reruns those commands and
//! compares the rendered reports byte for byte. A report that disagrees
//! with its pinned file is a mismatch, which is an ordinary result of the
//! run, not an error; only a malformed tree aborts.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::problem::parse_problem;
use crate::report::{render_report, Report};
use crate::runner::{run, Command, RunOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Matched,
    Mismatched,
    Written,
}

#[derive(Debug, Clone)]
pub struct ReportOutcome {
    pub entry: String,
    pub command: Command,
    pub outcome: Outcome,
}

#[derive(Debug, Clone)]
pub struct CorpusSummary {
    pub outcomes: Vec<ReportOutcome>,
    pub entries: usize,
    pub mismatches: usize,
}

impl CorpusSummary {
    pub fn all_matched(&self) -> bool {
        self.mismatches == 0
    }
}

/// Reruns every pinned report under `dir` and compares bytes.
///
/// Entries are independent and run on their own threads; the summary is
/// merged back in directory order, so the output is the same either way.
/// With `regenerate` set, stale or empty pinned files are rewritten in
/// place instead of being reported as mismatches; files that already
/// agree are left untouched.
pub fn corpus_verify(dir: &Path, regenerate: bool) -> io::Result<CorpusSummary> {
    let dirs = entry_dirs(dir)?;
    let mut per_entry = Vec::with_capacity(dirs.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = dirs
            .iter()
            .map(|entry_dir| scope.spawn(move || verify_entry(entry_dir, regenerate)))
            .collect();
        for handle in handles {
            per_entry.push(handle.join().expect("corpus worker panicked"));
        }
    });
    let mut outcomes = Vec::new();
    let mut mismatches = 0;
    for result in per_entry {
        let entry_outcomes = result?;
        mismatches += entry_outcomes
            .iter()
            .filter(|o| o.outcome == Outcome::Mismatched)
            .count();
        outcomes.extend(entry_outcomes);
    }
    Ok(CorpusSummary {
        outcomes,
        entries: dirs.len(),
        mismatches,
    })
}

fn verify_entry(entry_dir: &Path, regenerate: bool) -> io::Result<Vec<ReportOutcome>> {
    let name = entry_dir
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or_default()
        .to_string();
    if !entry_dir.join("PROVENANCE.md").is_file() {
        return Err(malformed(format!(
            "{} has no PROVENANCE.md",
            entry_dir.display()
        )));
    }
    let problem = parse_problem(&entry_dir.join("problem.json"));
    let expected_dir = entry_dir.join("expected");
    let mut outcomes = Vec::new();
    for command in expected_commands(&expected_dir)? {
        let report = match &problem {
            Ok(problem) => run(command, problem, &RunOptions::default()),
            Err(err) => Report::input_error(command.name(), 0, &err.to_string()),
        };
        let rendered = render_report(&report);
        let pinned_path = expected_dir.join(format!("{}.json", command.name()));
        let pinned = fs::read(&pinned_path)?;
        let outcome = if pinned == rendered.as_bytes() {
            Outcome::Matched
        } else if regenerate {
            fs::write(&pinned_path, rendered.as_bytes())?;
            Outcome::Written
        } else {
            Outcome::Mismatched
        };
        outcomes.push(ReportOutcome {
            entry: name.clone(),
            command,
            outcome,
        });
    }
    Ok(outcomes)
}

pub fn render_summary(summary: &CorpusSummary) -> String {
    let mut out = String::new();
    for item in &summary.outcomes {
        let tag = match item.outcome {
            Outcome::Matched => "ok      ",
            Outcome::Mismatched => "MISMATCH",
            Outcome::Written => "wrote   ",
        };
        out.push_str(&format!("{} {}/{}\n", tag, item.entry, item.command.name()));
    }
    out.push_str(&format!(
        "{} entries, {} reports, {} mismatches\n",
        summary.entries,
        summary.outcomes.len(),
        summary.mismatches
    ));
    out
}

fn entry_dirs(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut dirs = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        if entry.file_type()?.is_dir() {
            dirs.push(entry.path());
        }
    }
    dirs.sort();
    Ok(dirs)
}

fn expected_commands(expected: &Path) -> io::Result<Vec<Command>> {
    if !expected.is_dir() {
        return Err(malformed(format!(
            "{} is missing an expected/ directory",
            expected.display()
        )));
    }
    let mut commands = Vec::new();
    for entry in fs::read_dir(expected)? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default();
        let command = Command::from_name(stem).ok_or_else(|| {
            malformed(format!("{} does not name a command", path.display()))
        })?;
        commands.push(command);
    }
    commands.sort_by_key(|c| c.name());
    if commands.is_empty() {
        return Err(malformed(format!(
            "{} holds no pinned reports",
            expected.display()
        )));
    }
    Ok(commands)
}

fn malformed(detail: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, detail)
}
