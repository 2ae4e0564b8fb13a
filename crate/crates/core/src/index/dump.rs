use std::io::Write;

use super::LabelIndex;
use crate::error::Result;

/// Writes a human-readable dump, one labeled vertex per line, entries as
/// `(hop,ws,we,k)`. Self-entries print as `(v,0,0,0)`. Rows are ordered by
/// external id and entries by `(hop rank, k, ws, we)`, so dumps are stable.
pub fn write_dump<W: Write>(index: &LabelIndex, external: &[u64], mut out: W) -> Result<()> {
    writeln!(
        out,
        "# {} vertices={} hops={} entries={}",
        index.variant(),
        index.vertex_count(),
        index.hop_count(),
        index.entry_count()
    )?;
    let mut rows: Vec<u32> = (0..index.vertex_count() as u32).filter(|&v| index.is_labeled(v)).collect();
    rows.sort_by_key(|&v| external[v as usize]);
    for v in rows {
        let mut entries = index.label(v).entries().to_vec();
        entries.sort_by_key(|e| {
            let (lo, hi) = e.interval.bounds().unwrap_or((0, 0));
            (e.hop_rank, e.dist, lo, hi)
        });
        write!(out, "L(v{}):", external[v as usize])?;
        for e in entries {
            let hop = external[index.hop_vertex(e.hop_rank) as usize];
            let (lo, hi) = e.interval.bounds().unwrap_or((0, 0));
            write!(out, " (v{hop},{lo},{hi},{})", e.dist)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
