//! How the input range of `Y` propagates through removal and reversal, with
//! exact and with loosened conditionals. Writes CSV to stdout.

use interval_influence::experiments::{sweep, write_csv, SweepKind, SweepRow, SweepSpec};

fn main() -> interval_influence::Result<()> {
    let mut rows: Vec<SweepRow> = Vec::new();
    for kind in [SweepKind::Removal, SweepKind::Reversal] {
        for bounded in [false, true] {
            let out = sweep(&SweepSpec::default_for(kind, bounded))?;
            for s in &out.skipped {
                eprintln!("skipped {s:?}");
            }
            rows.extend(out.rows);
        }
    }
    write_csv(&rows, std::io::stdout().lock())
}
