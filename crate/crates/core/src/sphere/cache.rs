//! On-disk sphere caches.
//!
//! File layout (all integers big-endian):
//!
//! ```text
//! magic    b"SPHR"
//! version  u16
//! spec     u32 length + UTF-8 group string
//! radius   u32
//! count    u64
//! flags    u8          bit 0: element section present
//! elements count × (u32 length + canonical encoding), in encoding order
//! checksum u64         first 8 bytes of SHA-256 over everything above
//! ```

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{sphere_counts, enumerate_sphere, EnumerationLimits, SphereDataset, SphereMode};
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};

const MAGIC: &[u8; 4] = b"SPHR";
pub const CACHE_VERSION: u16 = 1;
const FLAG_ELEMENTS: u8 = 1;

struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

fn digest64(hasher: Sha256) -> u64 {
    u64::from_be_bytes(hasher.finalize()[..8].try_into().unwrap())
}

fn write_payload<W: Write>(
    w: &mut W,
    spec: &GroupSpec,
    radius: u32,
    count: u64,
    elements: Option<&[Element]>,
) -> io::Result<()> {
    let spec = spec.to_string();
    w.write_all(MAGIC)?;
    w.write_all(&CACHE_VERSION.to_be_bytes())?;
    w.write_all(&(spec.len() as u32).to_be_bytes())?;
    w.write_all(spec.as_bytes())?;
    w.write_all(&radius.to_be_bytes())?;
    w.write_all(&count.to_be_bytes())?;
    w.write_all(&[if elements.is_some() { FLAG_ELEMENTS } else { 0 }])?;
    let mut buf = Vec::new();
    for x in elements.into_iter().flatten() {
        buf.clear();
        x.encode_into(&mut buf);
        w.write_all(&(buf.len() as u32).to_be_bytes())?;
        w.write_all(&buf)?;
    }
    Ok(())
}

pub(super) fn payload_checksum(spec: &GroupSpec, radius: u32, count: u64, elements: Option<&[Element]>) -> u64 {
    let mut w = HashingWriter {
        inner: io::sink(),
        hasher: Sha256::new(),
    };
    write_payload(&mut w, spec, radius, count, elements).expect("sink writes cannot fail");
    digest64(w.hasher)
}

pub fn store_dataset(dataset: &SphereDataset, path: &Path) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = HashingWriter {
        inner: BufWriter::new(file),
        hasher: Sha256::new(),
    };
    write_payload(&mut w, dataset.spec(), dataset.radius(), dataset.count(), dataset.elements())?;
    let checksum = digest64(w.hasher.clone());
    debug_assert_eq!(checksum, dataset.checksum());
    w.inner.write_all(&checksum.to_be_bytes())?;
    w.inner.flush()?;
    Ok(())
}

/// Header fields of a cache file, as stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheHeader {
    pub version: u16,
    pub spec: String,
    pub radius: u32,
    pub count: u64,
    pub has_elements: bool,
    pub checksum: u64,
}

struct Cursor<'a> {
    bytes: &'a [u8],
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < n {
            return Err(Error::MalformedCache("unexpected end of data".into()));
        }
        let (head, rest) = self.bytes.split_at(n);
        self.bytes = rest;
        Ok(head)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().unwrap())
    }
}

/// Checks magic and checksum and parses the header, returning the body.
fn open(bytes: &[u8]) -> Result<(CacheHeader, &[u8])> {
    if bytes.len() >= MAGIC.len() && &bytes[..MAGIC.len()] != MAGIC {
        return Err(Error::MalformedCache("not a sphere cache (bad magic)".into()));
    }
    if bytes.len() < MAGIC.len() + 8 {
        return Err(Error::MalformedCache("file too short".into()));
    }
    let (payload, trailer) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_be_bytes(trailer.try_into().unwrap());
    let computed = digest64(Sha256::new_with_prefix(payload));
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }
    let mut c = Cursor { bytes: &payload[MAGIC.len()..] };
    let version = u16::from_be_bytes(c.array()?);
    if version != CACHE_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: CACHE_VERSION,
        });
    }
    let spec_len = u32::from_be_bytes(c.array()?) as usize;
    let spec = std::str::from_utf8(c.take(spec_len)?)
        .map_err(|_| Error::MalformedCache("spec string is not UTF-8".into()))?
        .to_string();
    let radius = u32::from_be_bytes(c.array()?);
    let count = u64::from_be_bytes(c.array()?);
    let [flags] = c.array()?;
    let header = CacheHeader {
        version,
        spec,
        radius,
        count,
        has_elements: flags & FLAG_ELEMENTS != 0,
        checksum: stored,
    };
    Ok((header, c.bytes))
}

/// Reads only the header (after verifying the checksum).
pub fn read_header(path: &Path) -> Result<CacheHeader> {
    let bytes = fs::read(path)?;
    Ok(open(&bytes)?.0)
}

/// Loads and verifies a cache file. With `expected` set, the stored group
/// must match it.
pub fn load_dataset(path: &Path, expected: Option<&GroupSpec>) -> Result<SphereDataset> {
    let bytes = fs::read(path)?;
    let (header, body) = open(&bytes)?;
    let spec: GroupSpec = header.spec.parse()?;
    if let Some(expected) = expected {
        if *expected != spec {
            return Err(Error::SpecMismatch {
                found: spec.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    if !header.has_elements {
        if !body.is_empty() {
            return Err(Error::MalformedCache("counts-only cache has a body".into()));
        }
        return Ok(SphereDataset::counts_only(spec, header.radius, header.count));
    }
    let mut c = Cursor { bytes: body };
    let mut elements = Vec::with_capacity(header.count as usize);
    let mut last: Option<&[u8]> = None;
    while !c.bytes.is_empty() {
        let len = u32::from_be_bytes(c.array()?) as usize;
        let enc = c.take(len)?;
        if last.is_some_and(|prev| prev >= enc) {
            return Err(Error::MalformedCache("elements out of order".into()));
        }
        last = Some(enc);
        elements.push(Element::decode(&spec, enc)?);
    }
    if elements.len() as u64 != header.count {
        return Err(Error::MalformedCache(format!(
            "header says {} elements, found {}",
            header.count,
            elements.len()
        )));
    }
    let dataset = SphereDataset::from_elements(spec, header.radius, elements);
    debug_assert_eq!(dataset.checksum(), header.checksum);
    Ok(dataset)
}

/// Sphere provider that reads through an optional cache directory.
#[derive(Clone, Debug)]
pub struct SphereStore {
    cache_dir: Option<PathBuf>,
    limits: EnumerationLimits,
}

impl SphereStore {
    pub fn new(cache_dir: Option<PathBuf>, limits: EnumerationLimits) -> Self {
        SphereStore { cache_dir, limits }
    }

    pub fn in_memory(limits: EnumerationLimits) -> Self {
        SphereStore::new(None, limits)
    }

    pub fn limits(&self) -> EnumerationLimits {
        self.limits
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    pub fn path_for(&self, spec: &GroupSpec, n: u32, mode: SphereMode) -> Option<PathBuf> {
        let name: String = spec
            .to_string()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        let kind = match mode {
            SphereMode::Full => "full",
            SphereMode::CountsOnly => "counts",
        };
        self.cache_dir
            .as_ref()
            .map(|dir| dir.join(format!("{name}.r{n}.{kind}.sph")))
    }

    fn save(&self, dataset: &SphereDataset) -> Result<()> {
        if let Some(path) = self.path_for(dataset.spec(), dataset.radius(), dataset.mode()) {
            fs::create_dir_all(path.parent().unwrap())?;
            // Write then rename so readers never observe a partial file.
            let tmp = path.with_extension("sph.tmp");
            store_dataset(dataset, &tmp)?;
            fs::rename(tmp, path)?;
        }
        Ok(())
    }

    /// `S_n` from the cache when present, otherwise enumerated and cached.
    pub fn sphere(&self, spec: &GroupSpec, n: u32, mode: SphereMode) -> Result<SphereDataset> {
        if let Some(path) = self.path_for(spec, n, mode) {
            if path.exists() {
                return load_dataset(&path, Some(spec));
            }
        }
        let dataset = enumerate_sphere(spec, n, mode, self.limits)?;
        self.save(&dataset)?;
        Ok(dataset)
    }

    /// `|S_k|` for `k = 0..=n_max`, cached as counts-only datasets.
    pub fn counts(&self, spec: &GroupSpec, n_max: u32) -> Result<Vec<u64>> {
        let cached: Option<Vec<u64>> = (0..=n_max)
            .map(|n| {
                let path = self.path_for(spec, n, SphereMode::CountsOnly)?;
                path.exists()
                    .then(|| load_dataset(&path, Some(spec)).map(|d| d.count()))
            })
            .collect::<Option<Result<Vec<_>>>>()
            .transpose()?;
        if let Some(counts) = cached {
            return Ok(counts);
        }
        let counts = sphere_counts(spec, n_max, self.limits)?;
        for (n, &c) in counts.iter().enumerate() {
            self.save(&SphereDataset::counts_only(spec.clone(), n as u32, c))?;
        }
        Ok(counts)
    }
}
