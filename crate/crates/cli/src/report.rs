//! Evaluation reports as CSV and as a plain-text table.

use std::fmt::Write as _;

use dgsnmf_core::metrics::EvalReport;

use crate::matrix_file::format_value;

pub const HEADER: &str = "estimated,truth,sad_rad,sad_deg,rmse";

pub fn report_csv(report: &EvalReport) -> String {
    let mut out = format!("{HEADER}\n");
    let rows = report
        .matching
        .iter()
        .enumerate()
        .map(|(k, &t)| (k.to_string(), t.to_string(), report.sad_per_endmember[k], report.rmse_per_abundance[k]))
        .chain(std::iter::once(("mean".into(), String::new(), report.mean_sad, report.mean_rmse)));
    for (est, truth, sad, rmse) in rows {
        writeln!(
            out,
            "{est},{truth},{},{},{}",
            format_value(sad),
            format_value(sad.to_degrees()),
            format_value(rmse)
        )
        .expect("writing to a String");
    }
    out
}

pub fn report_table(report: &EvalReport) -> String {
    let mut out = format!("{:>9} {:>6} {:>12} {:>10} {:>12}\n", "estimated", "truth", "SAD (rad)", "SAD (deg)", "RMSE");
    for (k, &t) in report.matching.iter().enumerate() {
        let sad = report.sad_per_endmember[k];
        writeln!(
            out,
            "{k:>9} {t:>6} {sad:>12.6} {:>10.4} {:>12.6}",
            sad.to_degrees(),
            report.rmse_per_abundance[k]
        )
        .expect("writing to a String");
    }
    writeln!(
        out,
        "{:>9} {:>6} {:>12.6} {:>10.4} {:>12.6}",
        "mean",
        "",
        report.mean_sad,
        report.mean_sad.to_degrees(),
        report.mean_rmse
    )
    .expect("writing to a String");
    out
}
