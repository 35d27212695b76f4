use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::EvalReport;

fn percent(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |a| format!("{:.2}%", 100.0 * a))
}

/// Aligned text table, one block per task, with the raw and the
/// canonicalized accuracy of each model side by side.
pub fn render_accuracy_table(reports: &[EvalReport]) -> String {
    let mut tasks: BTreeMap<&str, BTreeMap<&str, (Option<f64>, Option<f64>)>> = BTreeMap::new();
    for r in reports {
        let cell = tasks.entry(r.task.as_str()).or_default().entry(r.model.as_str()).or_default();
        if r.canonicalized {
            cell.1 = Some(r.mean_accuracy);
        } else {
            cell.0 = Some(r.mean_accuracy);
        }
    }
    let headers = ["Model", "Accuracy", "Accuracy (Canon.)"];
    let mut out = String::new();
    for (task, rows) in tasks {
        let cells: Vec<[String; 3]> = rows
            .iter()
            .map(|(m, (raw, canon))| [m.to_string(), percent(*raw), percent(*canon)])
            .collect();
        let mut widths = headers.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(out, "Task: {task}");
        let _ = writeln!(out, "{:<a$}  {:>b$}  {:>c$}", headers[0], headers[1], headers[2], a = widths[0], b = widths[1], c = widths[2]);
        let _ = writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 4));
        for [m, raw, canon] in cells {
            let _ = writeln!(out, "{m:<a$}  {raw:>b$}  {canon:>c$}", a = widths[0], b = widths[1], c = widths[2]);
        }
    }
    out
}
