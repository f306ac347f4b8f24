//! Text cache of enumerated shells.
//!
//! ```text
//! svcache;format=1;label=omega;gramhash=<sha256>;bound=4;shells=0:1,4:196560
//! shell=0;count=1
//! 0,0,…,0
//! shell=4;count=196560
//! …
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::enumerate::{Shell, VectorList};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

pub const CACHE_FORMAT: u32 = 1;

fn file_name(label: &str, bound: u32) -> String {
    format!("{label}.b{bound}.svcache")
}

pub fn render(v: &VectorList) -> String {
    let counts = v
        .shells()
        .iter()
        .map(|(n, s)| format!("{n}:{}", s.len()))
        .collect::<Vec<_>>()
        .join(",");
    let mut out = format!(
        "svcache;format={CACHE_FORMAT};label={};gramhash={};bound={};shells={counts}\n",
        v.label, v.gram_hash, v.bound
    );
    for (n, shell) in v.shells() {
        let _ = writeln!(out, "shell={n};count={}", shell.len());
        for x in shell.iter() {
            let line = x.iter().map(i32::to_string).collect::<Vec<_>>().join(",");
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

pub fn parse(text: &str, rank: usize) -> Result<VectorList> {
    let corrupt = |m: &str| Error::CorruptCache(m.to_string());
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| corrupt("empty file"))?;
    let mut fields = header.split(';');
    if fields.next() != Some("svcache") {
        return Err(corrupt("missing svcache tag"));
    }
    let mut meta = BTreeMap::new();
    for f in fields {
        let (k, v) = f.split_once('=').ok_or_else(|| corrupt("bad header field"))?;
        meta.insert(k, v);
    }
    if meta.get("format") != Some(&CACHE_FORMAT.to_string().as_str()) {
        return Err(corrupt("unsupported format"));
    }
    let label = meta.get("label").ok_or_else(|| corrupt("no label"))?.to_string();
    let gram_hash = meta.get("gramhash").ok_or_else(|| corrupt("no gram hash"))?.to_string();
    let bound: u32 = meta
        .get("bound")
        .and_then(|b| b.parse().ok())
        .ok_or_else(|| corrupt("no bound"))?;
    let mut declared = BTreeMap::new();
    if let Some(s) = meta.get("shells").filter(|s| !s.is_empty()) {
        for part in s.split(',') {
            let (n, c) = part.split_once(':').ok_or_else(|| corrupt("bad shell summary"))?;
            let n: u32 = n.parse().map_err(|_| corrupt("bad shell norm"))?;
            let c: usize = c.parse().map_err(|_| corrupt("bad shell count"))?;
            declared.insert(n, c);
        }
    }

    let mut shells: BTreeMap<u32, Vec<Vec<i32>>> = BTreeMap::new();
    let mut current: Option<(u32, usize)> = None;
    for line in lines.filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix("shell=") {
            let (n, c) = rest.split_once(";count=").ok_or_else(|| corrupt("bad shell header"))?;
            let n: u32 = n.parse().map_err(|_| corrupt("bad shell norm"))?;
            let c: usize = c.parse().map_err(|_| corrupt("bad shell count"))?;
            shells.entry(n).or_default();
            current = Some((n, c));
            continue;
        }
        let (n, _) = current.ok_or_else(|| corrupt("vector before shell header"))?;
        let v: Vec<i32> = line
            .split(',')
            .map(|x| x.parse::<i32>().map_err(|_| corrupt("bad coordinate")))
            .collect::<Result<_>>()?;
        if v.len() != rank {
            return Err(corrupt("vector of wrong rank"));
        }
        shells.get_mut(&n).expect("inserted at header").push(v);
    }
    let shells: BTreeMap<u32, Shell> = shells
        .into_iter()
        .map(|(n, vs)| (n, Shell::from_vectors(rank, vs)))
        .collect();
    let actual: BTreeMap<u32, usize> = shells.iter().map(|(&n, s)| (n, s.len())).collect();
    if actual != declared {
        return Err(corrupt("shell counts do not match the header"));
    }
    Ok(VectorList::from_shells(label, gram_hash, rank, bound, shells))
}

pub fn cache_store(dir: &Path, v: &VectorList) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(file_name(&v.label, v.bound));
    let tmp = path.with_extension("svcache.tmp");
    fs::write(&tmp, render(v))?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Loads the smallest cached enumeration of `lat` covering `bound`,
/// restricted to `bound`.
pub fn cache_load(dir: &Path, lat: &Lattice, bound: u32) -> Result<VectorList> {
    let label = lat.label.to_string();
    let prefix = format!("{label}.b");
    let mut candidates: Vec<(u32, PathBuf)> = Vec::new();
    if let Ok(entries) = fs::read_dir(dir) {
        for e in entries.flatten() {
            let name = e.file_name().to_string_lossy().to_string();
            if let Some(b) = name.strip_prefix(&prefix).and_then(|r| r.strip_suffix(".svcache")) {
                if let Ok(b) = b.parse::<u32>() {
                    if b >= bound {
                        candidates.push((b, e.path()));
                    }
                }
            }
        }
    }
    candidates.sort();
    let (_, path) = candidates
        .into_iter()
        .next()
        .ok_or_else(|| Error::CacheMiss(format!("{label} up to norm {bound}")))?;
    let v = parse(&fs::read_to_string(&path)?, lat.rank())?;
    if v.gram_hash != lat.gram.hash() {
        return Err(Error::CorruptCache(format!("{}: Gram hash mismatch", path.display())));
    }
    if v.label != label {
        return Err(Error::CorruptCache(format!("{}: label mismatch", path.display())));
    }
    Ok(v.restrict(bound))
}

/// Loads from the cache or enumerates and stores.
pub fn load_or_enumerate(dir: Option<&Path>, lat: &Lattice, bound: u32) -> Result<VectorList> {
    if let Some(d) = dir {
        match cache_load(d, lat, bound) {
            Ok(v) => return Ok(v),
            Err(Error::CacheMiss(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let v = super::enumerate_short(lat, bound)?;
    if let Some(d) = dir {
        cache_store(d, &v)?;
    }
    Ok(v)
}
