//! Static line chart of error against rank, one polyline per algorithm.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use voronoi_cur_core::cssp::Method;

use crate::sweep::RunRecord;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 56.0;
const COLORS: [&str; 5] = ["#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Mean error per (method, rank), methods in first-seen order.
fn series(records: &[RunRecord]) -> Vec<(Method, Vec<(usize, f64)>)> {
    let mut order: Vec<Method> = Vec::new();
    let mut acc: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    for r in records {
        let m = match order.iter().position(|&m| m == r.method) {
            Some(i) => i,
            None => {
                order.push(r.method);
                order.len() - 1
            }
        };
        let e = acc.entry((m, r.rank)).or_insert((0.0, 0));
        e.0 += r.error;
        e.1 += 1;
    }
    order
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let pts = acc
                .range((i, 0)..(i + 1, 0))
                .map(|(&(_, rank), &(s, n))| (rank, s / n as f64))
                .collect();
            (m, pts)
        })
        .collect()
}

/// Log-scale y axis; nonpositive errors are clamped to the smallest positive one.
pub fn render_sweep_svg(title: &str, records: &[RunRecord]) -> String {
    let data = series(records);
    let ranks: Vec<usize> = records.iter().map(|r| r.rank).collect();
    let (rmin, rmax) = (
        *ranks.iter().min().unwrap_or(&0) as f64,
        *ranks.iter().max().unwrap_or(&1) as f64,
    );
    let positive: Vec<f64> = records.iter().map(|r| r.error).filter(|&e| e > 0.0).collect();
    let floor = positive.iter().copied().fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor } else { 1e-16 };
    let ceil = positive.iter().copied().fold(floor, f64::max);
    let (lo, hi) = (floor.log10().floor(), ceil.log10().ceil().max(floor.log10().floor() + 1.0));
    let x = |r: f64| {
        if rmax > rmin {
            PAD + (r - rmin) / (rmax - rmin) * (W - 2.0 * PAD)
        } else {
            W / 2.0
        }
    };
    let y = |e: f64| {
        let v = e.max(floor).log10();
        H - PAD - (v - lo) / (hi - lo) * (H - 2.0 * PAD)
    };

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, escape(title)).unwrap();
    writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    )
    .unwrap();
    for p in (lo as i32)..=(hi as i32) {
        let yy = y(10f64.powi(p));
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">1e{p}</text>"#, PAD - 6.0, yy + 4.0).unwrap();
    }
    let mut tick: Vec<usize> = ranks.clone();
    tick.sort_unstable();
    tick.dedup();
    for r in &tick {
        let xx = x(*r as f64);
        writeln!(s, r#"<text x="{xx}" y="{}" text-anchor="middle">{r}</text>"#, H - PAD + 18.0).unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">rank</text>"#, W / 2.0, H - 12.0).unwrap();
    for (i, (m, pts)) in data.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(r, e)| format!("{:.2},{:.2}", x(r as f64), y(e)))
            .collect();
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        )
        .unwrap();
        let ly = PAD + 16.0 * i as f64;
        writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}" text-anchor="end">{m}</text>"#,
            W - PAD
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
