use std::fmt::Write as _;

use voronoi_cur_core::cssp::{BoundReport, CurDecomposition, CurReport, Inequality};

/// PASS/FAIL for bounds that always hold; bounds derived under `E_r >= 1`
/// are only judged when that holds.
fn status(ineq: &Inequality, asserted: bool) -> &'static str {
    match (asserted, ineq.holds(1e-12)) {
        (true, true) => "PASS",
        (true, false) => "FAIL",
        (false, _) => "REPORTED",
    }
}

fn inequality(out: &mut String, name: &str, ineq: &Inequality, asserted: bool) {
    writeln!(out, "{name}.lhs = {:e}", ineq.lhs).unwrap();
    writeln!(out, "{name}.rhs = {:e}", ineq.rhs).unwrap();
    writeln!(out, "{name}.slack = {:e}", ineq.slack()).unwrap();
    writeln!(out, "{name}.status = {}", status(ineq, asserted)).unwrap();
}

pub fn bound_lines(out: &mut String, prefix: &str, rep: &BoundReport) {
    writeln!(out, "{prefix}.k_final = {}", rep.final_sets).unwrap();
    writeln!(out, "{prefix}.gamma = {:e}", rep.gamma).unwrap();
    writeln!(out, "{prefix}.tail_error = {:e}", rep.tail_error).unwrap();
    writeln!(out, "{prefix}.residual = {:e}", rep.residual).unwrap();
    writeln!(out, "{prefix}.normalized_error = {:e}", rep.normalized_error).unwrap();
    inequality(out, &format!("{prefix}.intermediate"), &rep.intermediate, true);
    inequality(out, &format!("{prefix}.column_bound"), &rep.column_bound, rep.tail_error >= 1.0);
}

fn indices(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn cur_report(cur: &CurDecomposition, rep: &CurReport) -> String {
    let mut out = String::new();
    writeln!(out, "rank = {}", rep.column.rank).unwrap();
    writeln!(out, "columns = {}", indices(cur.column_indices())).unwrap();
    writeln!(out, "rows = {}", indices(cur.row_indices())).unwrap();
    writeln!(out, "error = {:e}", rep.error).unwrap();
    writeln!(out, "normalized_error = {:e}", rep.normalized_error).unwrap();
    inequality(&mut out, "cur_bound", &rep.cur_bound, rep.column.tail_error >= 1.0);
    bound_lines(&mut out, "column", &rep.column);
    bound_lines(&mut out, "row", &rep.row);
    out
}
