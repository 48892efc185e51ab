//! Binary cache of element encodings, keyed by q, flavor and crate version.

use std::fs;
use std::path::{Path, PathBuf};

use super::{Flavor, Mat2, Sl2};

const MAGIC: &[u8; 8] = b"SL2VTAB1";

fn path_for(dir: &Path, q: u32, flavor: Flavor) -> PathBuf {
    let tag = match flavor {
        Flavor::Sl => "sl",
        Flavor::Psl => "psl",
    };
    dir.join(format!("{tag}2-q{q}-v{}.bin", env!("CARGO_PKG_VERSION")))
}

pub(super) fn load(dir: &Path, sl: &Sl2, flavor: Flavor) -> Option<Vec<Mat2>> {
    let bytes = fs::read(path_for(dir, sl.q(), flavor)).ok()?;
    if bytes.len() < 16 || &bytes[..8] != MAGIC {
        return None;
    }
    let n = u64::from_le_bytes(bytes[8..16].try_into().ok()?) as usize;
    let body = &bytes[16..];
    if body.len() != 8 * n {
        return None;
    }
    let expected = match flavor {
        Flavor::Sl => sl.order() as usize,
        Flavor::Psl => sl.order() as usize / 2,
    };
    if n != expected {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    let mut prev = None;
    for chunk in body.chunks_exact(8) {
        let code = u64::from_le_bytes(chunk.try_into().ok()?);
        if prev.is_some_and(|p| p >= code) {
            return None;
        }
        prev = Some(code);
        let m = Mat2::decode(code, sl.q());
        if !sl.is_member(&m) || (flavor == Flavor::Psl && sl.psl_rep(&m) != m) {
            return None;
        }
        out.push(m);
    }
    Some(out)
}

pub(super) fn store(dir: &Path, q: u32, flavor: Flavor, codes: &[u64]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut bytes = Vec::with_capacity(16 + 8 * codes.len());
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&(codes.len() as u64).to_le_bytes());
    for c in codes {
        bytes.extend_from_slice(&c.to_le_bytes());
    }
    let path = path_for(dir, q, flavor);
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(tmp, path)
}
