//! Binary index format, all integers little-endian:
//!
//! ```text
//! magic "WKRI" | version u16 | variant u8 | |V| u64
//! order: |V| x u32
//! cover bitmap, ceil(|V|/8) bytes, LSB first        (GWKRI, LWKRI)
//! per vertex: count u32, count x (hop_rank, lo, hi, dist) u32
//!             (the empty interval is lo = 0xFFFFFFFF, hi = 0)
//! offsets: (|V|+1) x u64, pairs: offsets[|V|] x (neighbor u32, weight u32)   (LWKRI)
//! CRC32 of everything above, u32
//! ```

use std::io::{Read, Write};

use super::{EmbeddedAdjacency, LabelEntry, LabelIndex, Variant, VertexLabel};
use crate::constraint::WeightInterval;
use crate::cover::VertexOrder;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"WKRI";
pub const FORMAT_VERSION: u16 = 1;

impl LabelIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.vertex_count();
        let mut buf = Vec::with_capacity(16 + 4 * n + 16 * self.entry_count());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        buf.push(self.variant.code());
        buf.extend_from_slice(&(n as u64).to_le_bytes());
        for &v in self.order.as_slice() {
            put_u32(&mut buf, v);
        }
        if let Some(cover) = &self.cover {
            let mut bitmap = vec![0u8; n.div_ceil(8)];
            for (i, _) in cover.iter().enumerate().filter(|(_, &b)| b) {
                bitmap[i / 8] |= 1 << (i % 8);
            }
            buf.extend_from_slice(&bitmap);
        }
        for label in &self.labels {
            put_u32(&mut buf, label.len() as u32);
            for e in label.entries() {
                let (lo, hi) = e.interval.raw();
                for x in [e.hop_rank, lo, hi, e.dist] {
                    put_u32(&mut buf, x);
                }
            }
        }
        if let Some(adj) = &self.embedded {
            for &o in &adj.offsets {
                buf.extend_from_slice(&o.to_le_bytes());
            }
            for &(v, w) in &adj.pairs {
                put_u32(&mut buf, v);
                put_u32(&mut buf, w);
            }
        }
        let crc = crc32fast::hash(&buf);
        put_u32(&mut buf, crc);
        buf
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(Error::Format("bad magic: not an index file".into()));
        }
        if bytes.len() < 4 + 2 + 1 + 8 + 4 {
            return Err(Error::Format("truncated header".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format version {version} (expected {FORMAT_VERSION})"
            )));
        }
        let (body, tail) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().unwrap());
        if crc32fast::hash(body) != stored {
            return Err(Error::Format("checksum mismatch".into()));
        }
        let mut r = Cursor { buf: body, pos: 6 };
        let variant = Variant::from_code(r.u8()?).ok_or_else(|| Error::Format("unknown variant code".into()))?;
        let n = usize::try_from(r.u64()?).map_err(|_| Error::Format("vertex count overflow".into()))?;
        if n > body.len() / 4 {
            return Err(Error::Format("vertex count exceeds file size".into()));
        }
        let order: Vec<u32> = (0..n).map(|_| r.u32()).collect::<Result<_>>()?;
        let order = VertexOrder::from_sequence(n, order).map_err(|e| Error::Format(format!("order: {e}")))?;

        let cover = match variant {
            Variant::Wkri => None,
            Variant::Gwkri | Variant::Lwkri => {
                let bitmap = r.take(n.div_ceil(8))?;
                Some((0..n).map(|i| bitmap[i / 8] >> (i % 8) & 1 == 1).collect::<Vec<bool>>())
            }
        };
        let hop_count = cover.as_ref().map_or(n, |c| c.iter().filter(|&&b| b).count());
        if let Some(c) = &cover {
            if !order.as_slice()[..hop_count].iter().all(|&v| c[v as usize]) {
                return Err(Error::Format("order does not list cover members first".into()));
            }
        }

        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let count = r.u32()? as usize;
            if count > r.remaining() / 16 {
                return Err(Error::Format("label count exceeds file size".into()));
            }
            let mut entries = Vec::with_capacity(count);
            for _ in 0..count {
                let (rank, lo, hi, dist) = (r.u32()?, r.u32()?, r.u32()?, r.u32()?);
                let interval = WeightInterval::from_raw(lo, hi)
                    .ok_or_else(|| Error::Format(format!("invalid interval ({lo},{hi})")))?;
                if rank as usize >= n || (dist == 0) != interval.is_empty() {
                    return Err(Error::Format("invalid label entry".into()));
                }
                entries.push(LabelEntry::new(rank, interval, dist));
            }
            labels.push(VertexLabel::from_entries(entries));
        }

        let embedded = if variant == Variant::Lwkri {
            let offsets: Vec<u64> = (0..=n).map(|_| r.u64()).collect::<Result<_>>()?;
            if offsets[0] != 0 || offsets.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Format("adjacency offsets not monotone".into()));
            }
            let total = offsets[n] as usize;
            if total > r.remaining() / 8 {
                return Err(Error::Format("adjacency exceeds file size".into()));
            }
            let mut pairs = Vec::with_capacity(total);
            for _ in 0..total {
                let v = r.u32()?;
                if v as usize >= n {
                    return Err(Error::Format("adjacency neighbor out of range".into()));
                }
                pairs.push((v, r.u32()?));
            }
            Some(EmbeddedAdjacency { offsets, pairs })
        } else {
            None
        };
        if r.remaining() != 0 {
            return Err(Error::Format(format!("{} trailing bytes", r.remaining())));
        }
        Ok(LabelIndex::from_parts(variant, order, hop_count, cover, labels, embedded))
    }
}

fn put_u32(buf: &mut Vec<u8>, x: u32) {
    buf.extend_from_slice(&x.to_le_bytes());
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        if self.remaining() < k {
            return Err(Error::Format("truncated index file".into()));
        }
        let s = &self.buf[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}
