//! Every reproduction check in one run: scan, certificates, hierarchy, algebra, noise.

use ctxgap::pipeline::verify_all;

fn main() -> Result<(), ctxgap::pipeline::PipelineError> {
    let s = verify_all(0, None)?;
    for c in &s.checks {
        println!("{} {:<20} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    std::process::exit(s.exit_code());
}
