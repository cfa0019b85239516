//! Ranks all connected 7-vertex graphs by the gap theta - alpha.

use ctxgap::pipeline::{render_ranking, scan, to_csv_string, ScanConfig};

fn main() -> Result<(), ctxgap::pipeline::PipelineError> {
    let rep = scan(&ScanConfig { refine_top_k: 10, ..ScanConfig::enumerate(7) })?;
    println!("{} graphs read, {} scanned, clean {}", rep.graphs_read, rep.scanned, rep.clean());
    print!("{}", render_ranking(rep.top(10)));
    let csv = to_csv_string(rep.top(3))?;
    print!("{csv}");
    Ok(())
}
