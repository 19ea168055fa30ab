use std::io::Write;

use voronoi_cur_core::partition::EnergyTrace;

/// `iter,energy,k_active,d_1..d_k`; rows with fewer sets are padded with 0.
pub fn write_trace_csv<W: Write>(out: W, trace: &EnergyTrace, k: usize) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["iter".to_string(), "energy".into(), "k_active".into()];
    header.extend((1..=k).map(|i| format!("d_{i}")));
    w.write_record(&header)?;
    for rec in &trace.records {
        let mut row = vec![
            rec.iteration.to_string(),
            format!("{:e}", rec.energy),
            rec.active_sets.to_string(),
        ];
        row.extend((0..k).map(|i| rec.dims.get(i).copied().unwrap_or(0).to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
