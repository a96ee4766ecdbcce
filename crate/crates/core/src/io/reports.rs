use std::io::Write;

use super::{fmt_f64, IoError};
use crate::analysis::{Histogram, StateEmbedding, StatsTable};

pub fn write_stats<W: Write>(mut w: W, stats: &StatsTable) -> Result<(), IoError> {
    writeln!(w, "feature,mean,std,min,25%,50%,75%,max")?;
    for c in &stats.columns {
        let values = [c.mean, c.std, c.min, c.q25, c.q50, c.q75, c.max].map(fmt_f64);
        writeln!(w, "{},{}", c.name, values.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_histogram<W: Write>(mut w: W, h: &Histogram) -> Result<(), IoError> {
    writeln!(w, "bin_left,bin_right,count")?;
    for (i, c) in h.counts.iter().enumerate() {
        writeln!(w, "{},{},{c}", fmt_f64(h.edges[i]), fmt_f64(h.edges[i + 1]))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_embedding<W: Write>(w: W, e: &StateEmbedding) -> Result<(), IoError> {
    let mut w = std::io::BufWriter::new(w);
    writeln!(w, "index,x,y,state,flag")?;
    for p in &e.points {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.index,
            fmt_f64(p.velocity),
            fmt_f64(p.volatility),
            p.state,
            u8::from(p.in_transition)
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_centroids<W: Write>(mut w: W, centroids: &[[f64; 2]], sizes: &[usize]) -> Result<(), IoError> {
    writeln!(w, "cluster,x,y,size")?;
    for (j, (c, n)) in centroids.iter().zip(sizes).enumerate() {
        writeln!(w, "{j},{},{},{n}", fmt_f64(c[0]), fmt_f64(c[1]))?;
    }
    w.flush()?;
    Ok(())
}

/// One line per embedding point: its stream index, cluster and true state.
pub fn write_assignments<W: Write>(w: W, e: &StateEmbedding, assignments: &[usize]) -> Result<(), IoError> {
    let mut w = std::io::BufWriter::new(w);
    writeln!(w, "index,cluster,state")?;
    for (p, a) in e.points.iter().zip(assignments) {
        writeln!(w, "{},{a},{}", p.index, p.state)?;
    }
    w.flush()?;
    Ok(())
}
