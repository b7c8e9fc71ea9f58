//! Level-set storage, in memory or spilled to disk.
//!
//! A level file is the raw concatenation of its codes as little-endian `u64`
//! values in strictly ascending order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;

pub fn write_level_file(path: &Path, codes: &[u64]) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for &c in codes {
        w.write_all(&c.to_le_bytes())?;
    }
    w.flush()
}

pub fn read_level_file(path: &Path) -> io::Result<Vec<u64>> {
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("{} is not a whole number of codes", path.display()),
        ));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|b| u64::from_le_bytes(b.try_into().expect("8 bytes")))
        .collect())
}

/// Streams codes from a level or run file. Read errors end the stream and are
/// reported by [`CodeReader::finish`].
pub(crate) struct CodeReader {
    inner: BufReader<File>,
    error: Option<io::Error>,
}

impl CodeReader {
    pub(crate) fn open(path: &Path) -> io::Result<CodeReader> {
        Ok(CodeReader {
            inner: BufReader::with_capacity(1 << 16, File::open(path)?),
            error: None,
        })
    }

    pub(crate) fn finish(self) -> io::Result<()> {
        self.error.map_or(Ok(()), Err)
    }
}

impl Iterator for CodeReader {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let mut buf = [0u8; 8];
        match self.inner.read_exact(&mut buf) {
            Ok(()) => Some(u64::from_le_bytes(buf)),
            Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => None,
            Err(e) => {
                self.error = Some(e);
                None
            }
        }
    }
}

/// Union of two sorted, duplicate-free sequences.
pub(crate) fn merge_sorted(a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Removes from sorted `a` every code present in sorted `b`.
pub(crate) fn subtract_sorted(a: &mut Vec<u64>, b: impl IntoIterator<Item = u64>) {
    let mut b = b.into_iter().peekable();
    a.retain(|&x| {
        while let Some(&y) = b.peek() {
            if y < x {
                b.next();
            } else {
                return y != x;
            }
        }
        true
    });
}

/// Sorted union of sorted streams, without duplicates.
pub(crate) struct KwayMerge<I: Iterator<Item = u64>> {
    sources: Vec<I>,
    heap: BinaryHeap<Reverse<(u64, usize)>>,
    last: Option<u64>,
}

impl<I: Iterator<Item = u64>> KwayMerge<I> {
    pub(crate) fn new(mut sources: Vec<I>) -> Self {
        let mut heap = BinaryHeap::with_capacity(sources.len());
        for (k, s) in sources.iter_mut().enumerate() {
            if let Some(c) = s.next() {
                heap.push(Reverse((c, k)));
            }
        }
        KwayMerge {
            sources,
            heap,
            last: None,
        }
    }

    pub(crate) fn into_sources(self) -> Vec<I> {
        self.sources
    }
}

impl<I: Iterator<Item = u64>> Iterator for KwayMerge<I> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while let Some(Reverse((c, k))) = self.heap.pop() {
            if let Some(n) = self.sources[k].next() {
                self.heap.push(Reverse((n, k)));
            }
            if self.last != Some(c) {
                self.last = Some(c);
                return Some(c);
            }
        }
        None
    }
}

/// The level sets of one search run.
#[derive(Debug)]
pub enum LevelStore {
    Memory(Vec<Vec<u64>>),
    Disk { dir: PathBuf, sizes: Vec<u64> },
}

impl LevelStore {
    pub fn memory() -> LevelStore {
        LevelStore::Memory(Vec::new())
    }

    /// Spills each level to `dir/level_<i>.bin`, creating `dir` if needed.
    pub fn disk(dir: impl Into<PathBuf>) -> Result<LevelStore> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(LevelStore::Disk {
            dir,
            sizes: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        match self {
            LevelStore::Memory(levels) => levels.len(),
            LevelStore::Disk { sizes, .. } => sizes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn size(&self, i: usize) -> u64 {
        match self {
            LevelStore::Memory(levels) => levels[i].len() as u64,
            LevelStore::Disk { sizes, .. } => sizes[i],
        }
    }

    pub fn sizes(&self) -> Vec<u64> {
        (0..self.len()).map(|i| self.size(i)).collect()
    }

    pub fn is_disk(&self) -> bool {
        matches!(self, LevelStore::Disk { .. })
    }

    pub(crate) fn level_path(&self, i: usize) -> Option<PathBuf> {
        match self {
            LevelStore::Memory(_) => None,
            LevelStore::Disk { dir, .. } => Some(dir.join(format!("level_{i}.bin"))),
        }
    }

    pub(crate) fn run_path(&self, level: usize, run: usize) -> Option<PathBuf> {
        match self {
            LevelStore::Memory(_) => None,
            LevelStore::Disk { dir, .. } => Some(dir.join(format!("run_{level}_{run}.bin"))),
        }
    }

    /// In-memory view of level `i`, when the store keeps levels in memory.
    pub fn get(&self, i: usize) -> Option<&[u64]> {
        match self {
            LevelStore::Memory(levels) => levels.get(i).map(Vec::as_slice),
            LevelStore::Disk { .. } => None,
        }
    }

    pub fn load(&self, i: usize) -> Result<Vec<u64>> {
        match self {
            LevelStore::Memory(levels) => Ok(levels[i].clone()),
            LevelStore::Disk { .. } => Ok(read_level_file(&self.level_path(i).expect("disk"))?),
        }
    }

    pub fn push(&mut self, codes: Vec<u64>) -> Result<()> {
        match self {
            LevelStore::Memory(levels) => levels.push(codes),
            LevelStore::Disk { dir, sizes } => {
                let path = dir.join(format!("level_{}.bin", sizes.len()));
                write_level_file(&path, &codes)?;
                sizes.push(codes.len() as u64);
            }
        }
        Ok(())
    }

    /// Records a level already written to its file.
    pub(crate) fn push_written(&mut self, size: u64) {
        if let LevelStore::Disk { sizes, .. } = self {
            sizes.push(size);
        }
    }

    pub(crate) fn reader(&self, i: usize) -> Result<CodeReader> {
        Ok(CodeReader::open(&self.level_path(i).expect("disk store"))?)
    }
}
