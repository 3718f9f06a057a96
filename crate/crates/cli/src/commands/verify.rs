//! `lexdist report` — verify a saved report envelope: recompute the body
//! digest, re-hash recorded inputs where present, and print a plain-text
//! summary.

use super::*;
use crate::report::verify_report;

#[derive(Debug, Clone)]
pub struct VerifyArgs {
    pub report: PathBuf,
}

pub fn run(args: &VerifyArgs) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&args.report)?;
    let summary = verify_report(&text)
        .map_err(|message| CliError::input("BadReport", message))?;
    let mut out = String::new();
    out.push_str(&format!("report: {}\n", args.report.display()));
    out.push_str(&format!(
        "digest: {}\n",
        if summary.digest_ok { "ok" } else { "MISMATCH" }
    ));
    out.push_str(&format!("invocation: {}\n", summary.invocation));
    out.push_str(&format!("results: {}\n", summary.results_keys.join(", ")));
    for (path, status) in &summary.inputs {
        out.push_str(&format!("input {path}: {status}\n"));
    }
    if !summary.digest_ok {
        return Err(CliError::input(
            "DigestMismatch",
            "report body does not match its recorded sha256",
        )
        .with_context("report", args.report.display().to_string().into()));
    }
    Ok(out)
}
