//! Binary checkpoint of batched event counts.
//!
//! All integers are little-endian. Layout:
//!
//! ```text
//! magic           8 bytes  "PCORCKPT"
//! version         u32      1
//! width, height   u32, u32
//! p               u64      IEEE-754 bits of the occupation probability
//! anchor1_col     u32
//! anchor2_col     u32
//! boundary_mode   u32      0 = full perimeter, 1 = bottom edge
//! master_seed     u64
//! n_samples       u64      total over all batches
//! n_batches       u32
//! n_batches times:
//!   n_samples       u64
//!   pair_connected  u64
//!   6 grids of width*height u64, row-major from the bottom row, in the order
//!   boundary, anchor1, anchor2, both_anchors, interval, complement
//! checksum        u64      FNV-1a 64 of every preceding byte
//! ```

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::counts::{BatchedCounts, EventCounts};
use crate::lattice::{BoundaryMode, LatticeSpec};
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"PCORCKPT";
const VERSION: u32 = 1;

/// Batched counts together with the seed that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub master_seed: u64,
    pub counts: BatchedCounts,
}

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Fnv1a(0xcbf2_9ce4_8422_2325)
    }

    fn update(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}

struct HashingWriter<W> {
    inner: W,
    hash: Fnv1a,
}

impl<W: Write> HashingWriter<W> {
    fn put(&mut self, bytes: &[u8]) -> io::Result<()> {
        self.hash.update(bytes);
        self.inner.write_all(bytes)
    }

    fn u32(&mut self, v: u32) -> io::Result<()> {
        self.put(&v.to_le_bytes())
    }

    fn u64(&mut self, v: u64) -> io::Result<()> {
        self.put(&v.to_le_bytes())
    }
}

struct HashingReader<R> {
    inner: R,
    hash: Fnv1a,
}

impl<R: Read> HashingReader<R> {
    fn take(&mut self, buf: &mut [u8]) -> Result<()> {
        self.inner.read_exact(buf).map_err(|e| match e.kind() {
            io::ErrorKind::UnexpectedEof => Error::data("checkpoint is truncated"),
            _ => Error::Io(e),
        })?;
        self.hash.update(buf);
        Ok(())
    }

    fn u32(&mut self) -> Result<u32> {
        let mut b = [0; 4];
        self.take(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    fn u64(&mut self) -> Result<u64> {
        let mut b = [0; 8];
        self.take(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }
}

impl Checkpoint {
    pub fn new(master_seed: u64, counts: BatchedCounts) -> Self {
        Checkpoint { master_seed, counts }
    }

    pub fn spec(&self) -> &LatticeSpec {
        self.counts.spec()
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut w = HashingWriter { inner: w, hash: Fnv1a::new() };
        let spec = self.counts.spec();
        w.put(MAGIC)?;
        w.u32(VERSION)?;
        w.u32(spec.width() as u32)?;
        w.u32(spec.height() as u32)?;
        w.u64(spec.p().to_bits())?;
        w.u32(spec.anchor1_col() as u32)?;
        w.u32(spec.anchor2_col() as u32)?;
        w.u32(spec.boundary_mode().code())?;
        w.u64(self.master_seed)?;
        w.u64(self.counts.n_samples())?;
        w.u32(self.counts.len() as u32)?;
        let mut buf = Vec::with_capacity(spec.sites() * 8);
        for batch in self.counts.batches() {
            w.u64(batch.n_samples())?;
            w.u64(batch.pair_connected())?;
            for grid in batch.grids() {
                buf.clear();
                for &c in grid {
                    buf.extend_from_slice(&c.to_le_bytes());
                }
                w.put(&buf)?;
            }
        }
        let checksum = w.hash.0;
        w.inner.write_all(&checksum.to_le_bytes())?;
        w.inner.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let mut r = HashingReader { inner: r, hash: Fnv1a::new() };
        let mut magic = [0; 8];
        r.take(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::data("not a checkpoint file (bad magic)"));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::data(format!("unsupported checkpoint version {version}")));
        }
        let width = r.u32()? as usize;
        let height = r.u32()? as usize;
        let p = f64::from_bits(r.u64()?);
        let a1 = r.u32()? as usize;
        let a2 = r.u32()? as usize;
        let mode = BoundaryMode::from_code(r.u32()?)
            .ok_or_else(|| Error::data("unknown boundary mode code"))?;
        let spec = LatticeSpec::new(width, height, p, a1, a2)
            .map_err(|e| Error::data(format!("invalid lattice in checkpoint: {e}")))?
            .with_boundary_mode(mode);
        let master_seed = r.u64()?;
        let n_samples = r.u64()?;
        let n_batches = r.u32()? as usize;
        if n_batches == 0 {
            return Err(Error::data("checkpoint has no batches"));
        }

        let sites = spec.sites();
        let mut buf = vec![0u8; sites * 8];
        let mut batches = Vec::with_capacity(n_batches);
        for _ in 0..n_batches {
            let n = r.u64()?;
            let pair = r.u64()?;
            let mut grids: [Vec<u64>; 6] = Default::default();
            for grid in grids.iter_mut() {
                r.take(&mut buf)?;
                *grid = buf
                    .chunks_exact(8)
                    .map(|c| u64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                    .collect();
            }
            batches.push(EventCounts::from_parts(spec, n, pair, grids));
        }
        let computed = r.hash.0;
        let mut stored = [0; 8];
        r.inner.read_exact(&mut stored).map_err(|_| Error::data("checkpoint is truncated"))?;
        if u64::from_le_bytes(stored) != computed {
            return Err(Error::data("checkpoint checksum mismatch"));
        }
        if r.inner.read(&mut [0u8; 1])? != 0 {
            return Err(Error::data("trailing bytes after checkpoint"));
        }

        let counts = BatchedCounts::new(batches)?;
        if counts.n_samples() != n_samples {
            return Err(Error::data("batch sample counts do not add up to the header total"));
        }
        for b in counts.batches() {
            b.check_invariants()
                .map_err(|e| Error::data(format!("inconsistent counts in checkpoint: {e}")))?;
        }
        Ok(Checkpoint { master_seed, counts })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to memory cannot fail");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Self::read_from(bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = File::create(path)?;
        self.write_to(BufWriter::new(file))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = File::open(path)?;
        Self::read_from(BufReader::new(file))
    }
}
