use std::fs;
use std::path::Path;

use crate::experiments::{Check, Summary};
use crate::{Failure, Outcome};

pub fn print_rows(s: &Summary) {
    for c in &s.checks {
        // thresholds are re-applied rather than trusting the stored flag
        let pass = Check::within(c.observed, c.lo, c.hi);
        println!(
            "{:<5} {:<20} {:<24} observed {:<14} target {}",
            if pass { "PASS" } else { "FAIL" },
            s.experiment,
            c.name,
            format!("{:.6}", c.observed),
            c.target()
        );
    }
}

/// Renders every `*.json` summary in `dir`, sorted by file name.
pub fn report(dir: &Path) -> Outcome {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::Usage(format!("{}: no result summaries", dir.display())));
    }
    let mut all = true;
    for p in paths {
        let text = fs::read_to_string(&p)?;
        let s: Summary =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
        print_rows(&s);
        all &= s.checks.iter().all(|c| Check::within(c.observed, c.lo, c.hi));
    }
    Ok(all)
}
